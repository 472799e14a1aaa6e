"""Command-line entry point: ``spinsqueeze {curve,figures,shorttime,verify}``.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 formula used
outside its chain-size regime, 4 I/O failure. Angles are in radians and
Euler angles follow the active Z-Y-Z convention.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import analytic, disorder, shorttime, verify
from .chains import (
    CouplingChain,
    DimerSpec,
    InvalidChainError,
    InvalidProbabilityError,
    RandomChainSpec,
    UnsupportedSizeError,
    make_chain,
    make_dimerized,
    make_uniform,
    sample_random,
)

OUTPUT_DIR_ENV = "SPINSQUEEZE_OUTPUT_DIR"
FIGURE_GRID = np.linspace(0.0, 3.0, 301)

FIG2_DELTAS = (0.0, 0.5, 0.75, 1.0, 1.1)
FIG3_PROBABILITIES = (0.25, 0.5, 0.75, 1.0)

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_REGIME, EXIT_IO = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def write_csv(rows, dest) -> None:
    lines = ["chi_t,xi2"] + [f"{fmt(a)},{fmt(b)}" for a, b in rows]
    text = "\n".join(lines) + "\n"
    if dest is None:
        sys.stdout.write(text)
        return
    try:
        with open(dest, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {dest}: {exc}", EXIT_IO) from exc


def read_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of write_csv."""
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "chi_t,xi2":
            raise ValueError(f"unexpected header {header!r}")
        rows = [tuple(float(v) for v in line.split(",")) for line in fh if line.strip()]
    arr = np.array(rows, dtype=float).reshape(-1, 2)
    return arr[:, 0], arr[:, 1]


# -- curve ----------------------------------------------------------------------


def _build_chain(args) -> tuple[CouplingChain, float]:
    """The chain and the reference coupling chi used for the chi_t column."""
    if args.uniform:
        return make_uniform(args.n, args.chi), args.chi
    if args.dimerized:
        return make_dimerized(DimerSpec(args.pairs, args.chi, args.delta)), args.chi
    if args.random:
        return sample_random(RandomChainSpec(args.n, args.chi, args.p, args.seed)), args.chi
    return make_chain(args.chain, boundary=args.boundary), args.chi


def _time_grid(args) -> np.ndarray:
    if args.times is not None:
        times = np.array(args.times, dtype=float)
        if times.size == 0 or np.any(np.diff(times) <= 0):
            raise CliError("--times must be strictly increasing", EXIT_INPUT)
    else:
        if not args.tmin < args.tmax:
            raise CliError("--tmin must be smaller than --tmax", EXIT_INPUT)
        if args.points < 2:
            raise CliError("--points must be at least 2", EXIT_INPUT)
        times = np.linspace(args.tmin, args.tmax, args.points)
    if not np.all(np.isfinite(times)):
        raise CliError("time grid must be finite", EXIT_INPUT)
    return times


def cmd_curve(args) -> int:
    for name in ("chi", "delta", "p", "theta"):
        if not math.isfinite(getattr(args, name)):
            raise CliError(f"--{name} must be finite", EXIT_INPUT)
    chain, chi = _build_chain(args)
    times = _time_grid(args)
    if args.formula == "general":
        if not math.isclose(args.theta, math.pi / 4):
            raise CliError("--formula general evaluates theta = pi/4 only", EXIT_INPUT)
        xi2 = np.array([analytic.xi_pi4_general(chain, t) for t in times])
    else:
        xi2 = analytic.curve(chain, times, args.theta).xi2
    write_csv(zip(chi * times, xi2), args.output)
    return EXIT_OK


# -- figures --------------------------------------------------------------------


def figure_curves(which: int) -> dict[str, list[tuple[float, float]]]:
    """File name -> rows for one figure, on chi_t in [0, 3] with chi = 1."""
    grid = FIGURE_GRID
    if which == 1:
        return {
            "fig1_n2.csv": [(t, analytic.xi_pi4_n2(1.0, t)) for t in grid],
            "fig1_n3.csv": [(t, analytic.xi_pi4_n3(1.0, 1.0, 1.0, t)) for t in grid],
            "fig1_uniform.csv": [(t, analytic.xi_pi4_uniform(1.0, t)) for t in grid],
        }
    if which == 2:
        return {
            f"fig2_delta{d:g}.csv": [(t, analytic.xi_pi4_dimerized(1.0, d, t)) for t in grid]
            for d in FIG2_DELTAS
        }
    if which == 3:
        return {
            f"fig3_p{p:g}.csv": [(t, disorder.xi_random_analytic(p, 1.0, t)) for t in grid]
            for p in FIG3_PROBABILITIES
        }
    raise CliError(f"unknown figure {which}", EXIT_INPUT)


def cmd_figures(args) -> int:
    out = Path(args.out_dir or os.environ.get(OUTPUT_DIR_ENV, "."))
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create {out}: {exc}", EXIT_IO) from exc
    which = (1, 2, 3) if args.which == "all" else (int(args.which),)
    for w in which:
        for name, rows in figure_curves(w).items():
            write_csv(rows, out / name)
            print(out / name)
    return EXIT_OK


# -- shorttime ------------------------------------------------------------------


def load_pairset(path) -> shorttime.PairCouplingSet:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}", EXIT_INPUT) from exc
    try:
        return shorttime.PairCouplingSet.from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"malformed pair-coupling file {path}: {exc}", EXIT_INPUT) from exc


def shorttime_report(ps: shorttime.PairCouplingSet) -> str:
    ac = shorttime.aggregate(ps)
    o, rate = shorttime.optimal_orientation(ac)
    mx, my, mz = (fmt(v) for v in ac.eigenvalues)
    lines = ["aggregate matrix M:"]
    lines += ["  " + " ".join(f"{v: .17g}" for v in row) for row in ac.matrix]
    lines.append(f"eigenvalues: {mx} {my} {mz}")
    lines.append(
        f"optimal orientation (Z-Y-Z, rad): alpha={fmt(o.alpha)} beta={fmt(o.beta)} gamma={fmt(o.gamma)}"
    )
    lines.append(f"optimal rate: {fmt(rate)}")
    lines.append("squeezing possible" if rate < 0 else "no squeezing possible")
    return "\n".join(lines)


def cmd_shorttime(args) -> int:
    print(shorttime_report(load_pairset(args.input)))
    return EXIT_OK


# -- verify ---------------------------------------------------------------------


def cmd_verify(args) -> int:
    checks = verify.run(args.level, args.seed)
    for c in checks:
        print(c.line())
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


# -- parser ---------------------------------------------------------------------


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinsqueeze", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("curve", help="squeezing parameter over a time grid as CSV")
    kind = c.add_mutually_exclusive_group(required=True)
    kind.add_argument("--uniform", action="store_true", help="uniform closed chain")
    kind.add_argument("--dimerized", action="store_true", help="bonds chi(1+delta), chi(1-delta)")
    kind.add_argument("--random", action="store_true", help="each bond chi with probability p")
    kind.add_argument("--chain", type=_float_list, help="explicit couplings, comma separated")
    c.add_argument("--n", type=int, default=4, help="spin count (uniform, random)")
    c.add_argument("--pairs", type=int, default=3, help="pair count M, N = 2M (dimerized)")
    c.add_argument("--chi", type=float, default=1.0, help="base coupling; chi_t column is chi*t")
    c.add_argument("--delta", type=float, default=0.0)
    c.add_argument("--p", type=float, default=0.5)
    c.add_argument("--seed", type=_u64, default=0)
    c.add_argument("--boundary", choices=("closed", "open"), default="closed")
    c.add_argument("--tmin", type=float, default=0.0)
    c.add_argument("--tmax", type=float, default=3.0)
    c.add_argument("--points", type=int, default=301)
    c.add_argument("--times", type=_float_list, help="explicit times instead of a grid")
    c.add_argument("--theta", type=float, default=math.pi / 4, help="quadrature angle (rad)")
    c.add_argument("--formula", choices=("auto", "general"), default="auto",
                   help="'general' forces the N >= 5 expression")
    c.add_argument("--output", "-o", help="CSV path (default: stdout)")
    c.set_defaults(func=cmd_curve)

    f = sub.add_parser("figures", help="CSV datasets for the three squeezing figures")
    f.add_argument("which", choices=("1", "2", "3", "all"))
    f.add_argument("--out-dir", help=f"output directory (default: ${OUTPUT_DIR_ENV} or .)")
    f.set_defaults(func=cmd_figures)

    s = sub.add_parser("shorttime", help="initial squeezing rate of a pair-coupling JSON file")
    s.add_argument("input")
    s.set_defaults(func=cmd_shorttime)

    v = sub.add_parser("verify", help="run the oracle-equivalence suites")
    v.add_argument("--level", choices=("fast", "full"), default="fast")
    v.add_argument("--seed", type=_u64, default=0)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except UnsupportedSizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except (InvalidChainError, InvalidProbabilityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
