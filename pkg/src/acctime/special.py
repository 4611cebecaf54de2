"""Modified Bessel functions of integer order and the complementary error function.

Point values come from :mod:`scipy.special`. The Helmholtz series needs
``I_n`` and ``K_n`` for orders up to a few hundred at small arguments,
where the raw values under- and overflow double precision; for that case
:func:`log_bessel_sequences` returns logarithms built from ratio
recurrences (Miller's backward recurrence for ``I_{n+1}/I_n``, the
stable upward recurrence for ``K_{n+1}/K_n``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .errors import BesselOverflow, DomainError

N_MAX_DEFAULT = 256
I_OVERFLOW_GUARD = 700.0


def _check_order(n: int, n_max: int = N_MAX_DEFAULT) -> int:
    n = abs(int(n))
    if n > n_max:
        raise DomainError(f"Bessel order {n} exceeds n_max={n_max}")
    return n


def bessel_i(n: int, z):
    """Modified Bessel function of the first kind ``I_n(z)`` for ``z >= 0``."""
    n = _check_order(n)
    z = np.asarray(z, dtype=float)
    if np.any(z < 0.0):
        raise DomainError("bessel_i requires z >= 0")
    if np.any(z > I_OVERFLOW_GUARD):
        raise BesselOverflow(f"I_n(z) overflows for z > {I_OVERFLOW_GUARD}")
    out = _sp.iv(n, z)
    return float(out) if out.ndim == 0 else out


def bessel_k(n: int, z):
    """Modified Bessel function of the second kind ``K_n(z)`` for ``z > 0``."""
    n = _check_order(n)
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0.0):
        raise DomainError("bessel_k requires z > 0")
    out = _sp.kv(n, z)
    return float(out) if out.ndim == 0 else out


def erfc(z):
    """Complementary error function."""
    out = _sp.erfc(np.asarray(z, dtype=float))
    return float(out) if out.ndim == 0 else out


def erfcx(z):
    """Scaled complementary error function ``exp(z**2) * erfc(z)``."""
    out = _sp.erfcx(np.asarray(z, dtype=float))
    return float(out) if out.ndim == 0 else out


@dataclass
class LogBessel:
    """Logarithms of ``I_n``, ``I_n'``, ``K_n`` and ``|K_n'|`` for ``n = 0..n_max``.

    Arrays have shape ``(n_max + 1,) + z.shape``. Where ``z == 0`` the
    ``I`` logs are ``0`` for ``n = 0`` and ``-inf`` above; ``K`` logs are
    ``nan`` there.
    """

    log_i: np.ndarray
    log_di: np.ndarray
    log_k: np.ndarray
    log_dk: np.ndarray


def _log_i_ratios(n_max: int, z: np.ndarray) -> np.ndarray:
    # r[n] = I_{n+1}(z)/I_n(z), n = 0..n_max, by backward recurrence from a
    # start index far enough above n_max that the seed error has died out.
    start = n_max + 32 + 2 * int(np.ceil(np.max(z, initial=0.0)))
    r = np.zeros((n_max + 1,) + z.shape)
    safe = np.where(z > 0.0, z, 1.0)
    cur = safe / (2.0 * (start + 1))
    for n in range(start, 0, -1):
        cur = 1.0 / (2.0 * n / safe + cur)
        if n - 1 <= n_max:
            r[n - 1] = cur
    r[:, z == 0.0] = 0.0
    return r


def log_bessel_sequences(n_max: int, z, with_k: bool = True) -> LogBessel:
    """Log-magnitudes of ``I_n(z)``, ``I_n'(z)``, ``K_n(z)``, ``-K_n'(z)`` for ``0 <= n <= n_max``."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 0.0):
        raise DomainError("log_bessel_sequences requires z >= 0")
    r = _log_i_ratios(n_max + 1, z)
    pos = z > 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        log_i0 = np.where(pos, np.log(_sp.ive(0, z)) + z, 0.0)
        log_r = np.log(r)
        log_i = np.empty((n_max + 2,) + z.shape)
        log_i[0] = log_i0
        log_i[1:] = log_i0 + np.cumsum(log_r[: n_max + 1], axis=0)
        log_di = np.empty((n_max + 1,) + z.shape)
        log_di[0] = log_i[1]
        if n_max >= 1:
            # I_n' = I_n (I_{n-1}/I_n + I_{n+1}/I_n) / 2
            log_di[1:] = log_i[1 : n_max + 1] + np.log(
                0.5 * (1.0 / r[: n_max] + r[1 : n_max + 1])
            )
        # at z == 0 only I_1'(0) = 1/2 is nonzero
        if np.any(~pos):
            log_di[:, ~pos] = -np.inf
            if n_max >= 1:
                log_di[1, ~pos] = np.log(0.5)
    log_i = log_i[: n_max + 1]

    if not with_k:
        return LogBessel(log_i, log_di, np.full_like(log_i, np.nan), np.full_like(log_i, np.nan))

    safe = np.where(pos, z, 1.0)
    k0 = _sp.kve(0, safe)
    k1 = _sp.kve(1, safe)
    # q[n] = K_{n+1}/K_n, stable upward
    q = np.empty((n_max + 1,) + z.shape)
    q[0] = k1 / k0
    for n in range(1, n_max + 1):
        q[n] = 1.0 / q[n - 1] + 2.0 * n / safe
    log_k = np.empty((n_max + 1,) + z.shape)
    log_k[0] = np.log(k0) - safe
    log_k[1:] = log_k[0] + np.cumsum(np.log(q[:n_max]), axis=0)
    log_dk = np.empty_like(log_k)
    log_dk[0] = log_k[0] + np.log(q[0])
    if n_max >= 1:
        log_dk[1:] = log_k[1:] + np.log(0.5 * (1.0 / q[:n_max] + q[1:]))
    log_k[:, ~pos] = np.nan
    log_dk[:, ~pos] = np.nan
    return LogBessel(log_i, log_di, log_k, log_dk)
