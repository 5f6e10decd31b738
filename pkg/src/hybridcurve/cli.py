"""Command-line interface: ``hybridcurve {derive,reconstruct,verify,example}``.

Exit codes: 0 success, 1 verification failure, 2 runtime or domain error,
64 usage error, 65 malformed input (bad JSON, spec or expression).
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import builtin
from .algebra import SpatialHybrid
from .errors import ExprSyntaxError, HybridCurveError, SpecError, StepTooLarge
from .framed import N_VAL, TAU_FRAME, uniform_grid
from .io import (
    COLORS, csv_text, curvature_from_spec, curve_columns, curve_from_spec, curve_parts, load_json,
    svg_text,
)

EXIT_OK, EXIT_VERIFY, EXIT_RUNTIME, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 64, 65
ENV_TOL = "HYBRIDCURVE_TOL"
DERIVED = ("evolute", "involute", "pedal", "contrapedal")

log = logging.getLogger("hybridcurve")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _tolerance(args, default: float) -> float:
    if args.tol is not None:
        return args.tol
    env = os.environ.get(ENV_TOL)
    if env:
        try:
            value = float(env)
        except ValueError:
            raise UsageError(f"{ENV_TOL}={env!r} is not a number") from None
        if not value > 0:
            raise UsageError(f"{ENV_TOL} must be positive")
        return value
    return default


def _positive(kind):
    def convert(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid value {text!r}") from None
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
        return value
    return convert


def _source(args, what: str) -> tuple[dict, str]:
    if args.example and args.spec:
        raise UsageError("give either --spec or --example, not both")
    if args.example:
        spec = builtin.CURVATURE_SPEC if what == "curvature" else builtin.CURVE_SPEC
        return json.loads(json.dumps(spec)), f"example:{args.example}"
    if not args.spec:
        raise UsageError("one of --spec or --example is required")
    return load_json(args.spec), str(args.spec)


def _output_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str) -> None:
    path.write_bytes(text.encode("utf-8"))
    print(path)


# --- subcommands -------------------------------------------------------------

def _derive_curve(fc, which: str, p, c1: float, c2: float, h: float):
    from . import derived

    if which == "evolute":
        return derived.evolute(fc)
    if which == "involute":
        return derived.involute(fc, c1, c2, h=h).curve
    if which == "pedal":
        return derived.pedal(fc, p)
    return derived.contrapedal(fc, p)


def _adapted(fc):
    from .framed import adapt_frame, adapted_curvature

    try:
        adapted_curvature(fc)
        return fc
    except HybridCurveError:
        return adapt_frame(fc)


def cmd_derive(args) -> int:
    if args.curve in ("pedal", "contrapedal") and args.p is None:
        raise UsageError(f"--p B C D is required for --curve {args.curve}")
    spec, _ = _source(args, "curve")
    fc = curve_from_spec(spec, tol=_tolerance(args, TAU_FRAME))
    target = fc if args.curve == "evolute" else _adapted(fc)
    p = SpatialHybrid(*args.p) if args.p is not None else None
    curve = _derive_curve(target, args.curve, p, args.c1, args.c2, args.step or 1e-3)
    t = uniform_grid(fc.domain, args.grid)
    cols = {"t": t, **curve_columns(args.curve, curve(t))}
    _write(_output_dir(args) / f"{args.curve}.csv", csv_text(cols))
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    from .reconstruct import integrate

    spec, _ = _source(args, "curvature")
    fns, init, (t_min, t_max, h) = curvature_from_spec(spec)
    if args.step is not None:
        h = args.step
    bound = _tolerance(args, 1e-7)
    log.info("integrating on [%g, %g] with h=%g, Gram bound %g", t_min, t_max, h, bound)
    try:
        res = integrate(fns, init, t_min, t_max, h, gram_bound=bound)
    except StepTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"suggested step: --step {exc.suggested_h!r}", file=sys.stderr)
        return EXIT_RUNTIME
    cols = {"t": res.t}
    for name in ("gamma", "nu1", "nu2", "mu"):
        cols.update(curve_columns(name, getattr(res, name)))
    out = _output_dir(args)
    _write(out / "reconstruct.csv", csv_text(cols))
    gram = res.gram()
    target = np.diag([res.delta1, res.delta2, res.delta1 * res.delta2]).astype(float)
    dev = np.abs(gram - target).max(axis=0)
    labels = ("nu1", "nu2", "mu")
    sidecar = {
        "eps_gram": res.eps_gram,
        "gram_bound": bound,
        "h": res.h,
        "nodes": int(len(res.t)),
        "delta1": res.delta1,
        "delta2": res.delta2,
        "residuals": {
            f"g({labels[i]},{labels[j]})": float(dev[i, j]) for i in range(3) for j in range(i, 3)
        },
    }
    _write(out / "reconstruct.json", json.dumps(sidecar, indent=2) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_checks

    spec, source = _source(args, "curve")
    parts = curve_parts(spec)
    log.info("verifying %s", source)
    report = run_checks(parts, source, n_val=args.grid or N_VAL,
                        frame_tol=_tolerance(args, TAU_FRAME), h=args.step or 1e-3)
    print(report.table())
    if args.out:
        _write(_output_dir(args) / "verify.json", report.dumps() + "\n")
    if args.json:
        print(report.dumps())
    return EXIT_OK if report.passed else EXIT_VERIFY


FIGURES = {1: ("gamma", "evolute", "involute"), 2: ("gamma", "pedal", "contrapedal")}


def figure_curves(figure: int, n: int):
    """Sampled curves of one example figure: ``(t, [(label, values), ...])``."""
    from . import derived

    fc = builtin.example_curve()
    t = uniform_grid(fc.domain, n)
    origin = SpatialHybrid()
    make = {
        "gamma": lambda: fc.gamma,
        "evolute": lambda: derived.evolute(fc),
        "involute": lambda: derived.involute(fc).curve,
        "pedal": lambda: derived.pedal(fc, origin),
        "contrapedal": lambda: derived.contrapedal(fc, origin),
    }
    return t, [(name, make[name]()(t)) for name in FIGURES[figure]]


def cmd_example(args) -> int:
    out = _output_dir(args)
    figures = [args.figure] if args.figure else [1, 2]
    formats = ["csv", "svg"] if args.format == "both" else [args.format]
    for fig in figures:
        t, curves = figure_curves(fig, args.grid)
        if "csv" in formats:
            cols = {"t": t}
            for name, vals in curves:
                cols.update(curve_columns(name, vals))
            _write(out / f"figure{fig}.csv", csv_text(cols))
        if "svg" in formats:
            title = f"figure {fig}: " + ", ".join(name for name, _ in curves)
            svg = svg_text([(name, COLORS[name], vals) for name, vals in curves], title)
            _write(out / f"figure{fig}.svg", svg)
    return EXIT_OK


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hybridcurve",
                     description="Framed curves in the spatial hybrid numbers.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, source=True, out_default=".", grid_default=1001):
        if source:
            p.add_argument("--spec", type=Path, help="JSON spec file")
            p.add_argument("--example", choices=[builtin.EXAMPLE_NAME],
                           help="use the built-in example instead of --spec")
        p.add_argument("--out", default=out_default, help="output directory")
        p.add_argument("--grid", type=_positive(int), default=grid_default,
                       help="number of output samples")
        p.add_argument("--step", type=_positive(float), help="integration step h")
        p.add_argument("--tol", type=_positive(float),
                       help=f"tolerance (overrides ${ENV_TOL})")

    p = sub.add_parser("derive", help="evolute, involute, pedal or contrapedal curve as CSV")
    common(p)
    p.add_argument("--curve", required=True, choices=DERIVED)
    p.add_argument("--p", type=float, nargs=3, metavar=("B", "C", "D"),
                   help="fixed point for pedal/contrapedal")
    p.add_argument("--c1", type=float, default=0.0, help="involute constant c1")
    p.add_argument("--c2", type=float, default=0.0, help="involute constant c2")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("reconstruct", help="integrate a curvature spec")
    common(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("verify", help="run every residual check on a curve spec")
    common(p, out_default=None, grid_default=None)
    p.add_argument("--json", action="store_true", help="also print the JSON report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("example", help="sampled curves of the built-in example figures")
    common(p, source=False)
    p.add_argument("--figure", type=int, choices=[1, 2])
    p.add_argument("--format", choices=["csv", "svg", "both"], default="both")
    p.set_defaults(func=cmd_example)
    return parser


def _report_syntax(exc: ExprSyntaxError) -> None:
    print(f"error: {exc}", file=sys.stderr)
    if exc.source:
        print(f"  {exc.source}", file=sys.stderr)
        print("  " + " " * len(exc.source.encode()[:exc.offset].decode(errors="ignore")) + "^",
              file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s: %(message)s")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExprSyntaxError as exc:
        _report_syntax(exc)
        return EXIT_PARSE
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (HybridCurveError, ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
