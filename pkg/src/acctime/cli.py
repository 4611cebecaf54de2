"""Command-line front end: scene fields, oracle runs, comparisons and 1D profiles."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__, fieldio, morphogen1d, oracle, presets, spectral
from .errors import AccTimeError
from .scene import Scene, scene_from_dict, validate_scene

FIELD_COMMANDS = {
    "steady": "steady_state",
    "acctime": "acc_time_order1",
    "acctime-np": "acc_time_nonperturbative",
    "t0": "truncated_acc_time",
}
COMPARE_FIELDS = ("acc_time_nonperturbative", "acc_time_order1", "steady_state")


def _scene_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--scene", type=Path, help="scene JSON file")
    src.add_argument("--preset", choices=sorted(presets.SCENES), help="named reference scene")
    gauge = p.add_mutually_exclusive_group()
    gauge.add_argument("--nu", type=float, help="override the logarithmic gauge")
    gauge.add_argument("--epsilon", type=float, help="override the hole radius")
    p.add_argument("--allow-overshoot", action="store_true", help="warn instead of failing on the growth condition")
    p.add_argument("--separation-min", type=float, help="minimum hole/boundary/source separation")
    p.add_argument("-o", "--output", type=Path, help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="acctime", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, field in FIELD_COMMANDS.items():
        p = sub.add_parser(name, help=f"sample {field} over the disc or along a line cut")
        _scene_args(p)
        p.add_argument("--grid", type=int, default=100, help="nodes per side of the sampling lattice")
        p.add_argument("--exclusion", type=float, help="masking radius around holes and the source")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--cut", choices=("r", "theta"), help="emit a 1D profile instead of a 2D field")
        p.add_argument("--at", type=float, default=0.0,
                       help="fixed angle for --cut r, fixed radius for --cut theta")
        p.add_argument("--cut-points", type=int, default=400)
        if name == "acctime-np":
            p.add_argument("--s-base", type=float, default=1e-2)

    p = sub.add_parser("eigen", help="principal eigenvalue and relaxation time (JSON)")
    _scene_args(p)

    p = sub.add_parser("oracle", help="finite-difference reference field (CSV)")
    _scene_args(p)
    p.add_argument("--h", type=float, default=1.0 / 128)
    p.add_argument("--field", choices=("acctime", "steady"), default="acctime")
    p.add_argument("--s-base", type=float, default=oracle.S_BASE_DEFAULT)
    p.add_argument("--hole-bc", choices=oracle.HOLE_BCS, default="symmetric")

    p = sub.add_parser("compare", help="asymptotic field against the finite-difference oracle (JSON)")
    _scene_args(p)
    p.add_argument("--h", type=float, default=1.0 / 128)
    p.add_argument("--field", choices=COMPARE_FIELDS, default="acc_time_nonperturbative")
    p.add_argument("--s-base", type=float, default=1e-2)
    p.add_argument("--hole-bc", choices=oracle.HOLE_BCS, default="symmetric")
    p.add_argument("--hole-exclusion", type=float, default=3.0, help="excluded radius around holes, in hole radii")
    p.add_argument("--exclusion", type=float, default=0.1, help="excluded radius around the source")
    p.add_argument("--fields-dir", type=Path, help="also write both fields as CSV here")

    p = sub.add_parser("sweep1d", help="1D morphogen profile: steady state, T and single-mode T0 (CSV)")
    p.add_argument("--D", type=float, default=1.0)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--J", type=float, default=1.0)
    p.add_argument("--L", type=float, default=20.0)
    p.add_argument("--x-max", type=float, help="default: L")
    p.add_argument("--n", type=int, default=201)
    p.add_argument("-o", "--output", type=Path)

    p = sub.add_parser("presets", help="list or write the reference scenes and line cuts")
    p.add_argument("--name", choices=sorted(presets.SCENES), help="print one scene as JSON")
    p.add_argument("--write-dir", type=Path, help="write every scene and the line-cut table here")
    p.add_argument("-o", "--output", type=Path)
    return parser


def _resolve_scene(args: argparse.Namespace) -> Scene:
    """Load the scene, apply command-line overrides, then validate once."""
    sep = args.separation_min
    if args.scene:
        data = json.loads(args.scene.read_text())
        if sep is None:
            sep = data.get("separation_min")
        raw = scene_from_dict(data)
    else:
        raw = presets.get_scene(args.preset)
    changes: dict[str, Any] = {}
    if args.nu is not None:
        changes.update(nu=args.nu, epsilon=None)
    if args.epsilon is not None:
        changes.update(epsilon=args.epsilon, nu=None)
    if args.allow_overshoot:
        changes["allow_overshoot"] = True
    if args.scene is None and not changes and sep is None:
        return raw
    return validate_scene(raw.replace(**changes), separation_min=sep)


def _emit_text(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def _emit_json(obj: dict, path: Path | None) -> None:
    _emit_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", path)


def _emit_grid(grid: fieldio.FieldGrid, path: Path | None) -> None:
    if path is None:
        fieldio.write_csv_stream(grid, sys.stdout)
    else:
        fieldio.write_csv(grid, path)


def _artifact_meta(scene: Scene | None = None, **params: Any) -> dict[str, Any]:
    out: dict[str, Any] = {"version": __version__}
    if scene is not None:
        out.update(scene_hash=scene.scene_hash(), scene=scene.to_dict())
    if params:
        out["params"] = params
    return out


def _line_cut(scene: Scene, field: str, args: argparse.Namespace) -> str:
    cut = presets.LineCut("custom", args.cut, args.at, args.cut_points)
    coord, pts = cut.points()
    exclusion = args.exclusion if args.exclusion is not None else 2.0 * scene.epsilon
    mask = fieldio.domain_mask(scene, pts, exclusion)
    names = [field]
    if field != "steady_state" and field != "truncated_acc_time" and scene.n_holes == 1:
        names.append("truncated_acc_time")
    evaluators = fieldio.evaluators()
    kwargs = {"s_base": args.s_base} if field == "acc_time_nonperturbative" else {}
    cols = []
    for name in names:
        vals, _ = fieldio.evaluate_masked(evaluators[name], scene, pts, mask, kwargs if name == field else {})
        cols.append(vals)
    meta = _artifact_meta(scene, field=field, cut=args.cut, at=args.at, exclusion_radius=exclusion)
    lines = ["# " + json.dumps(meta, sort_keys=True), ",".join(["coord", "x", "y", *names])]
    for i in range(len(coord)):
        row = [coord[i], pts[i, 0], pts[i, 1], *(c[i] for c in cols)]
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def _cmd_field(args: argparse.Namespace) -> int:
    scene = _resolve_scene(args)
    field = FIELD_COMMANDS[args.command]
    if args.cut:
        _emit_text(_line_cut(scene, field, args), args.output)
        return 0
    kwargs = {"s_base": args.s_base} if field == "acc_time_nonperturbative" else {}
    grid = fieldio.sweep(scene, field, args.grid, args.grid, args.exclusion, workers=args.workers, **kwargs)
    _emit_grid(grid, args.output)
    return 0


def _cmd_eigen(args: argparse.Namespace) -> int:
    scene = _resolve_scene(args)
    est = spectral.principal_eigenvalue(scene)
    report = {
        "lambda_root": est.lambda_root,
        "lambda_two_term": est.lambda_two_term,
        "tau": est.tau,
        "n_holes": est.n_holes,
        **_artifact_meta(scene),
    }
    _emit_json(report, args.output)
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    scene = _resolve_scene(args)
    if args.field == "steady":
        grid = oracle.steady_fd(scene, args.h, hole_bc=args.hole_bc)
    else:
        grid = oracle.acc_time_fd(scene, args.h, s_base=args.s_base, hole_bc=args.hole_bc)
    _emit_grid(grid, args.output)
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    scene = _resolve_scene(args)
    if args.field == "steady_state":
        ref = oracle.steady_fd(scene, args.h, hole_bc=args.hole_bc)
        kwargs: dict[str, Any] = {}
    else:
        ref = oracle.acc_time_fd(scene, args.h, s_base=args.s_base, hole_bc=args.hole_bc)
        kwargs = {"s_base": args.s_base} if args.field == "acc_time_nonperturbative" else {}
    asym = fieldio.sweep(scene, args.field, ref.nx, ref.ny, **kwargs)
    exclusions = [(tuple(c), args.hole_exclusion * scene.epsilon) for c in scene.centers]
    if scene.gamma0 != 0.0 or args.field != "steady_state":
        exclusions.append((scene.x0, args.exclusion))
    rep = fieldio.compare_fields(asym, ref, exclusions)
    if args.fields_dir is not None:
        args.fields_dir.mkdir(parents=True, exist_ok=True)
        fieldio.write_csv(asym, args.fields_dir / f"{args.field}.csv")
        fieldio.write_csv(ref, args.fields_dir / "oracle.csv")
    report = {
        **rep.to_dict(),
        "field": args.field,
        **_artifact_meta(scene, h=ref.metadata["params"]["h"], hole_bc=args.hole_bc, s_base=args.s_base,
                      hole_exclusion=args.hole_exclusion, source_exclusion=args.exclusion),
    }
    _emit_json(report, args.output)
    return 0


def _cmd_sweep1d(args: argparse.Namespace) -> int:
    p = morphogen1d.Morphogen1DParams(D=args.D, k=args.k, J=args.J, L=args.L)
    x_max = args.L if args.x_max is None else args.x_max
    cols = morphogen1d.profile_1d(np.linspace(0.0, x_max, args.n), p)
    meta = _artifact_meta(None, D=p.D, k=p.k, J=p.J, L=p.L, xi=p.xi)
    lines = ["# " + json.dumps(meta, sort_keys=True), ",".join(cols)]
    for row in zip(*cols.values()):
        lines.append(",".join(repr(float(v)) for v in row))
    _emit_text("\n".join(lines) + "\n", args.output)
    return 0


def _cuts_table() -> dict[str, list[dict[str, Any]]]:
    return {
        name: [{"scene": c.scene, "cut": c.kind, "at": c.fixed, "points": c.n} for c in cuts]
        for name, cuts in presets.LINE_CUTS.items()
    }


def _cmd_presets(args: argparse.Namespace) -> int:
    if args.write_dir is not None:
        args.write_dir.mkdir(parents=True, exist_ok=True)
        for name in presets.SCENES:
            scene = presets.get_scene(name)
            (args.write_dir / f"{name}.json").write_text(json.dumps(scene.to_dict(), indent=2, sort_keys=True) + "\n")
        (args.write_dir / "line_cuts.json").write_text(json.dumps(_cuts_table(), indent=2) + "\n")
        _emit_json({"written": sorted(presets.SCENES), "directory": str(args.write_dir)}, args.output)
    elif args.name is not None:
        scene = presets.get_scene(args.name)
        _emit_json({**scene.to_dict(), "scene_hash": scene.scene_hash()}, args.output)
    else:
        _emit_json({"scenes": sorted(presets.SCENES), "line_cuts": _cuts_table(), "version": __version__}, args.output)
    return 0


COMMANDS = {
    **{name: _cmd_field for name in FIELD_COMMANDS},
    "eigen": _cmd_eigen,
    "oracle": _cmd_oracle,
    "compare": _cmd_compare,
    "sweep1d": _cmd_sweep1d,
    "presets": _cmd_presets,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[args.command](args)
    except AccTimeError as exc:
        err = exc.to_dict()
    except (KeyError, ValueError, OSError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
    err["command"] = args.command
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return 1


if __name__ == "__main__":
    sys.exit(main())
