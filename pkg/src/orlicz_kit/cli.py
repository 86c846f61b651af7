"""Command-line front end.

Exit codes: 0 success (or all checks passed), 1 a check failed, 2 usage
error or malformed input. Output is JSON unless ``--format csv``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import maximal as mx
from . import norms as nm
from . import verify as vf
from .rearrange import (
    InputFormatError,
    MeasureStepFunction,
    format_grid_csv,
    parse_grid_csv,
    parse_step_csv,
)
from .report import _clean
from .youngfn import (
    INF,
    DescriptionError,
    DomainError,
    PhiTheta,
    PreconditionError,
    classify,
    conjugate,
    from_desc,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# --- argument types and loaders -------------------------------------------------------


def parse_q(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "infinity", "oo"):
        return INF
    try:
        q = float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive real or 'inf', got {text!r}") from None
    if not q > 0:
        raise argparse.ArgumentTypeError(f"q must be positive, got {text!r}")
    return q


def _load_json(arg: str, what: str):
    """Inline JSON when ``arg`` starts with '{', otherwise a path to a JSON file."""
    if arg.lstrip().startswith("{"):
        text, source = arg, f"<inline {what}>"
    else:
        path = Path(arg)
        try:
            text = path.read_text()
        except OSError as exc:
            raise UsageError(f"{arg}: cannot read {what}: {exc.strerror}") from None
        source = arg
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{source}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None


def load_phi(arg: str):
    desc = _load_json(arg, "Young-function description")
    try:
        return from_desc(desc)
    except (DescriptionError, PreconditionError, DomainError) as exc:
        raise UsageError(f"{arg if not arg.lstrip().startswith('{') else '<inline phi>'}: {exc}") from None


def load_weight(arg: str):
    desc = _load_json(arg, "weight description")
    try:
        return nm.weight_from_desc(desc)
    except (DescriptionError, DomainError) as exc:
        raise UsageError(f"weight: {exc}") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"{path}: cannot read input: {exc.strerror}") from None


def _header(text: str) -> list[str]:
    for row in csv.reader(io.StringIO(text)):
        if row and any(c.strip() for c in row):
            return [c.strip().lower() for c in row]
    return []


def load_function(path: str):
    """Step CSV (value,measure), grid CSV (origin,cell_width) or field CSV (dim,side,cell_volume)."""
    text = _read(path)
    head = _header(text)
    if head == ["origin", "cell_width"]:
        return parse_grid_csv(text, path)
    if head == ["dim", "side", "cell_volume"]:
        return mx.parse_field_csv(text, path)
    return parse_step_csv(text, path)


def as_step(f) -> MeasureStepFunction:
    return f if isinstance(f, MeasureStepFunction) else f.to_step()


# --- output --------------------------------------------------------------------------


def emit(obj: dict, fmt: str, out) -> None:
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in _flatten(_clean(obj)):
            w.writerow([k, json.dumps(v) if isinstance(v, (dict, list)) else v])
    else:
        out.write(json.dumps(_clean(obj), indent=2, sort_keys=True, allow_nan=False) + "\n")


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}{k}.")
    else:
        yield prefix.rstrip("."), obj


# --- subcommands ---------------------------------------------------------------------------


def cmd_norm(args, out) -> int:
    f = as_step(load_function(args.f))
    if args.space == "gen-lorentz":
        if args.weight is None:
            raise UsageError("--space gen-lorentz needs --weight")
        w = load_weight(args.weight)
        res = nm.generalized_lorentz_norm(w, args.q, f)
        emit({"space": args.space, "q": args.q, "weight": w.to_desc(), **res.to_dict()}, args.format, out)
        return EXIT_OK
    if args.phi is None:
        raise UsageError(f"--space {args.space} needs --phi")
    phi = load_phi(args.phi)
    if args.space == "luxemburg":
        res = nm.luxemburg_norm(phi, f)
    elif args.space == "weak":
        res = nm.weak_norm(phi, f)
    else:
        res = nm.lorentz_norm(phi, args.q, f)
    body = {"space": args.space, "phi": phi.to_desc(), **res.to_dict()}
    if args.space == "lorentz":
        body["q"] = args.q
    emit(body, args.format, out)
    return EXIT_OK


def cmd_conjugate(args, out) -> int:
    phi = load_phi(args.phi)
    conj = conjugate(phi)
    if args.emit_desc:
        out.write(json.dumps(conj.to_desc(), sort_keys=True) + "\n")
        return EXIT_OK
    body = {"phi": phi.to_desc(), "conjugate": conj.to_desc(), "a": conj.a, "b": conj.b}
    if args.at:
        pts = np.asarray(args.at, dtype=float)
        if np.any(pts < 0):
            raise UsageError("--at points must be >= 0")
        body["points"] = pts.tolist()
        body["values"] = np.atleast_1d(conj(pts)).tolist()
    emit(body, args.format, out)
    return EXIT_OK


def cmd_classify(args, out) -> int:
    phi = load_phi(args.phi)
    if args.theta is not None:
        try:
            phi = PhiTheta(phi, args.theta)
        except (DomainError, PreconditionError) as exc:
            raise UsageError(f"--theta: {exc}") from None
    body = {"phi": phi.to_desc(), **classify(phi).to_dict()}
    emit(body, args.format, out)
    return EXIT_OK


def cmd_maximal(args, out) -> int:
    f = load_function(args.f)
    if isinstance(f, MeasureStepFunction):
        raise UsageError(f"{args.f}: the maximal operator needs a grid or field CSV, not a step CSV")
    if isinstance(f, mx.GridFieldND) or args.mode == "dyadic":
        field = f if isinstance(f, mx.GridFieldND) else mx.grid_to_field(f)
        res = mx.dyadic_maximal(field)
        if args.format == "csv":
            out.write(mx.format_field_csv(res))
        else:
            emit({"mode": "dyadic", "dim": res.dim, "side": res.side, "cell_volume": res.cell_volume,
                  "samples": res.samples.ravel().tolist()}, "json", out)
        return EXIT_OK
    if args.pad:
        f = f.padded(args.pad, args.pad)
    res = mx.maximal_1d(f, args.mode)
    if args.format == "csv":
        out.write(format_grid_csv(res))
    else:
        emit({"mode": args.mode, "origin": res.origin, "cell_width": res.cell_width,
              "samples": list(res.samples)}, "json", out)
    return EXIT_OK


def cmd_fs_constant(args, out) -> int:
    phi = load_phi(args.phi)
    spec = vf.CorpusSpec(
        families=args.families,
        member_counts=tuple(args.members),
        seed=args.seed,
        scale_span=args.span,
    )
    try:
        est = vf.estimate_constant(phi, args.q, spec, negative_control=args.negative_control)
    except vf.HypothesisError as exc:
        raise UsageError(f"hypothesis not met: {exc}") from None
    emit({"phi": phi.to_desc(), "q": args.q, "negative_control": args.negative_control, **est.to_dict()},
         args.format, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    try:
        suites = vf.resolve_suites(args.suite)
    except vf.UsageError as exc:
        raise UsageError(str(exc)) from None
    report = vf.run_suite(vf.SuiteConfig(seed=args.seed, suites=suites))
    if args.format == "csv":
        out.write(report.constants_csv())
    else:
        out.write(report.to_json() + "\n")
    return EXIT_OK if report.passed else EXIT_FAIL


# --- parser ----------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="orlicz-kit", description="Orlicz-space norms, maximal operators and inequality checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(sp):
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("norm", help="evaluate a quasi-norm of a step or grid function")
    sp.add_argument("--space", choices=("luxemburg", "weak", "lorentz", "gen-lorentz"), required=True)
    sp.add_argument("--phi", help="Young-function description: path or inline JSON")
    sp.add_argument("--f", required=True, help="CSV file (value,measure or origin,cell_width)")
    sp.add_argument("--q", type=parse_q, default=1.0)
    sp.add_argument("--weight", help="weight description for gen-lorentz: path or inline JSON")
    fmt(sp)
    sp.set_defaults(run=cmd_norm)

    sp = sub.add_parser("conjugate", help="complementary function")
    sp.add_argument("--phi", required=True)
    sp.add_argument("--emit-desc", action="store_true", help="print only the JSON description")
    sp.add_argument("--at", type=float, nargs="+", help="evaluate the conjugate at these points")
    fmt(sp)
    sp.set_defaults(run=cmd_conjugate)

    sp = sub.add_parser("classify", help="Delta_2 / nabla_2 flags and indices")
    sp.add_argument("--phi", required=True)
    sp.add_argument("--theta", type=float, help="classify Phi_theta instead of Phi")
    fmt(sp)
    sp.set_defaults(run=cmd_classify)

    sp = sub.add_parser("maximal", help="maximal function of a grid or field CSV")
    sp.add_argument("--f", required=True)
    sp.add_argument("--mode", choices=("exact", "oracle", "dyadic"), default="exact")
    sp.add_argument("--pad", type=int, default=0, help="zero cells added on both sides (1-D grids)")
    fmt(sp)
    sp.set_defaults(run=cmd_maximal)

    sp = sub.add_parser("fs-constant", help="empirical vector-valued maximal constant")
    sp.add_argument("--phi", required=True)
    sp.add_argument("--q", type=parse_q, default=INF)
    sp.add_argument("--families", type=int, default=50)
    sp.add_argument("--members", type=int, nargs="+", default=[1, 2, 8, 32])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--span", type=int, help="harmonic-profile corpus over [1, span] (negative control)")
    sp.add_argument("--negative-control", action="store_true", help="skip the hypothesis check")
    fmt(sp)
    sp.set_defaults(run=cmd_fs_constant)

    sp = sub.add_parser("verify", help="run verification suites")
    sp.add_argument("--suite", default="all", help=f"comma-separated ids or 'all' ({', '.join(vf.SUITES)})")
    sp.add_argument("--seed", type=int, default=0)
    fmt(sp)
    sp.set_defaults(run=cmd_verify)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if getattr(args, "families", 1) < 1 or any(m < 1 for m in getattr(args, "members", [1])):
            raise UsageError("--families and --members must be positive")
        if getattr(args, "span", None) is not None and args.span < 2:
            raise UsageError("--span must be at least 2")
        if getattr(args, "pad", 0) < 0:
            raise UsageError("--pad must be >= 0")
        return args.run(args, out)
    except (UsageError, InputFormatError) as exc:
        sys.stderr.write(f"orlicz-kit: {exc}\n")
        return EXIT_USAGE
    except (DomainError, PreconditionError, ValueError) as exc:
        sys.stderr.write(f"orlicz-kit: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
