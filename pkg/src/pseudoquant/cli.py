"""Command-line entry point.

Subcommands: commutator, quantise, preserve, bks (classify | pair), evolve,
bs-count, verify-paper.  Exit codes: 0 success, 1 input error,
2 verification failure, 3 flagged discrepancies under --strict.

All numeric parameters are echoed into CSV headers (comment lines starting
with '#') so outputs are reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import bks, bohrsommerfeld, dynamics, verify
from .exprparse import ExprSyntaxError, ProblemFile, load_problem, parse_poly, standard_problem
from .polarisation import CASE_TAGS, classify_monomials, preserves
from .prequant import FormalOperator, commutator, pullback_quantise, quantise
from .symcore import ChartError, ChartSpec, Scalar

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2
EXIT_FLAGS = 3


class CliError(Exception):
    """User input error; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _operator_json(op: FormalOperator) -> dict:
    terms = {}
    for idx, coeff in sorted(op.terms.items()):
        terms[",".join(map(str, idx))] = str(coeff)
    return {"text": str(op), "order": op.order(), "terms": terms}


def _formal_divide(op: FormalOperator) -> FormalOperator:
    """Divide every coefficient by -i*hbar (requires explicit hbar factors)."""
    out = {}
    for idx, coeff in op.terms.items():
        out[idx] = coeff.div_exact_hbar().scale(Scalar(0, 1))
    return FormalOperator(op.chart, out)


def _emit(lines: list[str], path: str | None):
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(args) -> ProblemFile:
    if getattr(args, "problem", None):
        return load_problem(args.problem)
    return standard_problem()


# -- subcommands ---------------------------------------------------------------


def cmd_commutator(args) -> int:
    problem = _load(args)
    if problem.pullback is not None:
        chart = problem.pullback.map.target
        A = parse_poly(args.a, chart)
        B = parse_poly(args.b, chart)
        op = commutator(
            pullback_quantise(A, problem.pullback),
            pullback_quantise(B, problem.pullback),
        )
    else:
        A = parse_poly(args.a, problem.chart)
        B = parse_poly(args.b, problem.chart)
        op = commutator(quantise(A, problem.connection), quantise(B, problem.connection))
    if args.formal:
        op = _formal_divide(op)
    if args.json:
        print(json.dumps(_operator_json(op), sort_keys=True))
    else:
        print(str(op))
    return EXIT_OK


def cmd_quantise(args) -> int:
    problem = _load(args)
    A = parse_poly(args.observable, problem.chart)
    op = quantise(A, problem.connection)
    if args.json:
        print(json.dumps(_operator_json(op), sort_keys=True))
    else:
        print(str(op))
    return EXIT_OK


def cmd_preserve(args) -> int:
    problem = _load(args)
    if args.grid:
        try:
            m_max, n_max = (int(x) for x in args.grid.split(","))
        except ValueError:
            raise CliError("--grid expects 'm,n' with integers")
        deformation = None
        chart = ChartSpec((("a1", "b1"),))
        if args.deformation:
            deformation = parse_poly(args.deformation, chart)
        table = classify_monomials(m_max, n_max, deformation, args.case, chart)
        lines = [f"# case={args.case} deformation={args.deformation or '0'}"]
        lines.append("m,n,preserves,residual_count")
        for (m, n), rep in sorted(table.items()):
            lines.append(f"{m},{n},{str(rep.preserves).lower()},{len(rep.residuals)}")
        _emit(lines, args.csv)
        return EXIT_OK
    if not args.observable:
        raise CliError("preserve needs --observable or --grid")
    A = parse_poly(args.observable, problem.chart)
    rep = preserves(A, problem.connection, problem.polarisation)
    payload = {
        "observable": str(rep.observable),
        "preserves": rep.preserves,
        "case": rep.case,
        "residuals": [
            {"flat_index": i, "derivative": list(k), "coefficient": str(c)}
            for i, k, c in rep.residuals
        ],
    }
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def _parse_range(spec: str) -> list[float]:
    """'start:stop:step' inclusive-start float grid; bare number means one value."""
    parts = spec.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise CliError("range expects 'start:stop:step'")
    start, stop, step = (float(x) for x in parts)
    if step <= 0:
        raise CliError("range step must be positive")
    out = []
    k = 0
    while True:
        v = start + k * step
        if v > stop + 1e-12:
            break
        out.append(round(v, 12))
        k += 1
    return out


def cmd_bks(args) -> int:
    if args.mode == "classify":
        lam = Fraction(args.lam)
        d = bks.DeformationSpec("momentum", args.n, lam, args.hbar)
        reports, converges = bks.classify_pairing(d, args.m_max)
        lines = [
            f"# kind=momentum n={args.n} lam={lam} hbar={_fmt(args.hbar)} m_max={args.m_max}",
            f"# converges={str(converges).lower()}",
            "n,m,j,exponent,alt_exponent,critical_j,classification,mu_moment_re,mu_moment_im",
        ]
        for r in reports:
            mu_re = _fmt(r.mu_moment.real) if r.mu_moment is not None else ""
            mu_im = _fmt(r.mu_moment.imag) if r.mu_moment is not None else ""
            lines.append(
                f"{r.n},{r.m},{r.j},{r.exponent},{r.alt_exponent},"
                f"{r.j_critical},{r.classification},{mu_re},{mu_im}"
            )
        _emit(lines, args.csv)
        return EXIT_OK
    # pair mode
    if args.kind != "position":
        raise CliError("bks pair supports --kind position (momentum pairings diverge; "
                       "use 'bks classify' for the term table)")
    betas = _parse_range(args.beta)
    result = bks.position_pairing(args.n, betas, args.hbar)
    lines = [
        f"# kind=position n={args.n} hbar={_fmt(args.hbar)} beta={args.beta}",
        f"# converges={str(result.converges).lower()} "
        f"prefactor={_fmt(result.normalization.real)}{result.normalization.imag:+.17g}j",
        "beta,coeff_re,coeff_im,scaled_re,scaled_im",
    ]
    for b in betas:
        c = result.effective_coefficient(b)
        s = c * (1.0 + 2.0 * b**args.n) ** 1.5
        lines.append(f"{_fmt(b)},{_fmt(c.real)},{_fmt(c.imag)},{_fmt(s.real)},{_fmt(s.imag)}")
    _emit(lines, args.csv)
    return EXIT_OK


def _parse_init(spec: str) -> dict:
    kind, _, rest = spec.partition(":")
    if kind != "gaussian":
        raise CliError("only 'gaussian:q0=..,p0=..,sigma=..' initial states are supported")
    params = {"q0": 0.0, "p0": 0.0, "sigma": 1.0}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            if key not in params:
                raise CliError(f"unknown initial-state parameter {key!r}")
            params[key] = float(val)
    if params["sigma"] <= 0:
        raise CliError("sigma must be positive")
    return params


def cmd_evolve(args) -> int:
    gparts = args.grid.split(":")
    if len(gparts) != 3:
        raise CliError("--grid expects 'qmin:qmax:nodes'")
    q_min, q_max, nodes = float(gparts[0]), float(gparts[1]), int(gparts[2])
    grid = dynamics.Grid1D(q_min, q_max, nodes)
    cfg = dynamics.EvolutionConfig(args.n, args.hbar, args.dt, steps=args.steps)
    init = _parse_init(args.init)
    state = dynamics.gaussian_state(grid, init["q0"], init["p0"], init["sigma"], args.hbar)
    prop = dynamics.Propagator(grid, cfg)
    lines = [
        f"# n={args.n} hbar={_fmt(args.hbar)} dt={_fmt(args.dt)} steps={args.steps} "
        f"grid={_fmt(q_min)}:{_fmt(q_max)}:{nodes} init={args.init}",
        "t,l2_norm,weighted_norm,mean_q,var_q",
    ]

    def record(s):
        lines.append(
            f"{_fmt(s.t)},{_fmt(dynamics.l2_norm(s))},"
            f"{_fmt(dynamics.weighted_norm(s, args.n))},"
            f"{_fmt(dynamics.expectation_q(s))},{_fmt(dynamics.variance_q(s))}"
        )

    snapshots = []
    record(state)
    if args.snapshots:
        snapshots.append(state.psi.copy())
    for k in range(args.steps):
        state = prop.step(state)
        record(state)
        if args.snapshots and (k + 1) % args.snap_every == 0:
            snapshots.append(state.psi.copy())
    dynamics.check_boundary_mass(state)
    _emit(lines, args.csv)
    if args.snapshots:
        # One row per snapshot: little-endian float64 interleaved re/im per node.
        arr = np.empty((len(snapshots), 2 * grid.nodes), dtype="<f8")
        for r, psi in enumerate(snapshots):
            arr[r, 0::2] = psi.real
            arr[r, 1::2] = psi.imag
        arr.tofile(args.snapshots)
    return EXIT_OK


def cmd_bs_count(args) -> int:
    spec = args.E
    if ".." in spec:
        lo, hi = (int(x) for x in spec.split(".."))
    else:
        lo = hi = int(spec)
    if lo < 1 or hi < lo:
        raise CliError("--E expects 'lo..hi' with 1 <= lo <= hi")
    lines = [f"# E={spec}", "E,standard_dim,folded_dim"]
    point_lines = ["E,l"]
    for E in range(lo, hi + 1):
        rep = bohrsommerfeld.analyse(E)
        lines.append(f"{E},{rep.standard_dim},{rep.folded_count}")
        for pt in rep.folded_points:
            point_lines.append(f"{E},{_fmt(pt.value)}")
    _emit(lines, args.csv)
    if args.points:
        _emit(point_lines, args.points)
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    results = verify.run_all(seed=args.seed)
    for r in results:
        print(r.line())
    fails = sum(1 for r in results if r.status == verify.FAIL)
    flags = sum(1 for r in results if r.status == verify.FLAG)
    passes = len(results) - fails - flags
    print(f"# summary: {passes} pass, {flags} flagged, {fails} fail")
    if fails:
        return EXIT_VERIFY
    if flags and args.strict:
        return EXIT_FLAGS
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="pseudoquant", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    def common(p, problem=True):
        if problem:
            p.add_argument("--problem", help="JSON problem file")
        p.add_argument("--json", action="store_true", help="JSON output")
        p.add_argument("--csv", help="write CSV output to this path")

    p = sub.add_parser("commutator", help="commutator of two quantised observables")
    common(p)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--formal", action="store_true", help="divide out the -i*hbar factor")
    p.set_defaults(func=cmd_commutator)

    p = sub.add_parser("quantise", help="quantise one observable")
    common(p)
    p.add_argument("--observable", required=True)
    p.set_defaults(func=cmd_quantise)

    p = sub.add_parser("preserve", help="flat-section preservation verdicts")
    common(p)
    p.add_argument("--observable")
    p.add_argument("--grid", help="'m,n' monomial grid bounds")
    p.add_argument("--case", choices=CASE_TAGS, default="standard")
    p.add_argument("--deformation", help="scaling deformation expression (a1/b1 chart)")
    p.set_defaults(func=cmd_preserve)

    p = sub.add_parser("bks", help="pairing classification and evaluation")
    p.add_argument("mode", choices=["classify", "pair"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m-max", type=int, default=2)
    p.add_argument("--lam", default="1", help="rational deformation magnitude")
    p.add_argument("--kind", choices=["momentum", "position"], default="position")
    p.add_argument("--beta", default="0:2:0.1", help="'start:stop:step' sample range")
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--csv", help="write CSV output to this path")
    p.set_defaults(func=cmd_bks)

    p = sub.add_parser("evolve", help="deformed Schroedinger evolution")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--grid", default="-10:10:2048", help="'qmin:qmax:nodes'")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--init", default="gaussian:q0=0,p0=2,sigma=0.5")
    p.add_argument("--csv", help="write the time series to this path")
    p.add_argument("--snapshots", help="write binary state snapshots to this path")
    p.add_argument("--snap-every", type=int, default=100)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("bs-count", help="integral-point counting")
    p.add_argument("--E", default="1..20", help="energy level or range 'lo..hi'")
    p.add_argument("--points", help="write the folded point list to this path")
    p.add_argument("--csv", help="write counts to this path")
    p.set_defaults(func=cmd_bs_count)

    p = sub.add_parser("verify-paper", help="run the full verification battery")
    p.add_argument("--strict", action="store_true", help="flagged discrepancies exit 3")
    p.add_argument("--seed", type=int, default=None, help="seed for the random-pair sweep")
    p.set_defaults(func=cmd_verify_paper)

    return parser


_DASH_VALUE_FLAGS = {"--grid", "--beta", "--E", "--a", "--b", "--observable", "--deformation"}


def _fold_dash_values(argv: list[str]) -> list[str]:
    """Join '--grid -10:10:2048' into '--grid=-10:10:2048' so argparse accepts it."""
    out = []
    skip = False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in _DASH_VALUE_FLAGS and nxt is not None and nxt.startswith("-"):
            out.append(f"{tok}={nxt}")
            skip = True
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_fold_dash_values(list(argv)))
        if not getattr(args, "command", None):
            parser.print_help()
            return EXIT_INPUT
        return args.func(args)
    except (CliError, ExprSyntaxError, ChartError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(run())
