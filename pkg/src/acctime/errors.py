"""Exception types raised across the toolkit.

Every error carries a stable ``code`` so the CLI can emit machine-readable
failure reports.
"""

from __future__ import annotations


class AccTimeError(Exception):
    code = "AccTimeError"

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class DomainError(AccTimeError, ValueError):
    code = "DomainError"


class NonpositiveParameter(AccTimeError, ValueError):
    code = "NonpositiveParameter"


class HoleOutsideDomain(AccTimeError, ValueError):
    code = "HoleOutsideDomain"


class HolesOverlapping(AccTimeError, ValueError):
    code = "HolesOverlapping"


class GrowthConditionViolated(AccTimeError, ValueError):
    code = "GrowthConditionViolated"


class CoincidentPoints(AccTimeError, ValueError):
    code = "CoincidentPoints"


class SeriesNotConverged(AccTimeError, ArithmeticError):
    code = "SeriesNotConverged"


class BesselOverflow(AccTimeError, OverflowError):
    code = "BesselOverflow"


class SingularSystem(AccTimeError, ArithmeticError):
    code = "SingularSystem"


class EvaluationInsideHole(AccTimeError, ValueError):
    code = "EvaluationInsideHole"


class EvaluationAtSingularPoint(AccTimeError, ValueError):
    code = "EvaluationAtSingularPoint"


class NonConvergedExtrapolation(AccTimeError, ArithmeticError):
    code = "NonConvergedExtrapolation"


class NoRootBracketed(AccTimeError, ArithmeticError):
    code = "NoRootBracketed"


class UnsupportedHoleCount(AccTimeError, ValueError):
    code = "UnsupportedHoleCount"


class HoleUnresolved(AccTimeError, ValueError):
    code = "HoleUnresolved"


class CGNotConverged(AccTimeError, ArithmeticError):
    code = "CGNotConverged"


class GridMismatch(AccTimeError, ValueError):
    code = "GridMismatch"


class QuadratureNotConverged(AccTimeError, ArithmeticError):
    code = "QuadratureNotConverged"
