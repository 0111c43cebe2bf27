"""Command-line front end: ``genblasius {solve,table,profile,verify}``."""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .exceptions import (
    BracketFailure,
    DomainError,
    HorizonOverflow,
    NoDecay,
    StepUnderflow,
)
from .model import validate_problem
from .shooting import Solution, profile, solve
from .verify import run_suite

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_DOMAIN = 2
EXIT_NUMERIC = 3

# Reference experiments, each pinned to its fixed horizon.
CASES = {
    "blasius": dict(p=1.0, c=0.5, beta=1.0, horizon=14.0),
    "p7": dict(p=7.0, c=0.5, beta=1.0, horizon=4.0),
    "p01": dict(p=0.1, c=0.5, beta=1.0, horizon=50.0),
}
LADDER = (1e-8, 1e-9, 1e-10, 1e-11, 1e-12, 1e-13, 1e-14)
TABLE_COLUMNS = ("eps", "N", "a", "delta_a", "delta_beta", "x_T")
UNPROVEN_WARNING = "warning: theory unproven for p<1 (existence/uniqueness only shown for p>=1)"


def fmt(value) -> str:
    # repr is the shortest string that round-trips the double (<= 17 digits).
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class RunManifest:
    p: float
    c: float
    beta: float
    eps: float
    proven_regime: bool
    c1: Optional[float]
    c2: Optional[float]
    c3: Optional[float]
    c4: Optional[float]
    c5: Optional[float]
    a_min: Optional[float]
    a_max: Optional[float]
    T: float
    cert_valid: Optional[bool]
    lhs2: Optional[float]
    lhs1: Optional[float]
    lhs0: Optional[float]
    a_star: float
    h_est: float
    mu_est: float
    x_T: float
    d2x_T: float
    iterations: int
    steps: int
    wall_time: float

    @classmethod
    def from_solution(cls, sol: Solution, wall_time: float) -> "RunManifest":
        prob, b, br, cert = sol.problem, sol.bounds, sol.bracket, sol.cert
        return cls(
            p=prob.p,
            c=prob.c,
            beta=prob.beta,
            eps=sol.eps,
            proven_regime=prob.proven_regime,
            c1=b and b.c1,
            c2=b and b.c2,
            c3=b and b.c3,
            c4=b and b.c4,
            c5=b and b.c5,
            a_min=br and br.a_min,
            a_max=br and br.a_max,
            T=sol.T,
            cert_valid=cert.valid if cert else None,
            lhs2=cert and cert.lhs2,
            lhs1=cert and cert.lhs1,
            lhs0=cert and cert.lhs0,
            a_star=sol.a_star,
            h_est=sol.h_est,
            mu_est=sol.mu_est,
            x_T=sol.x_T,
            d2x_T=sol.d2x_T,
            iterations=sol.iterations,
            steps=sol.steps,
            wall_time=wall_time,
        )

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        return cls(**json.loads(text))

    def to_text(self) -> str:
        return "\n".join(f"{k} = {fmt(v)}" for k, v in dataclasses.asdict(self).items())


@dataclass
class TableRow:
    eps: float
    N: object
    a: object
    delta_a: object
    delta_beta: object
    x_T: object

    def cells(self) -> list[str]:
        return [fmt(getattr(self, name)) for name in TABLE_COLUMNS]


def write_csv(header, rows, stream):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def _problem_args(p: argparse.ArgumentParser, required=True):
    p.add_argument("--p", type=float, required=required, help="exponent p >= 0")
    p.add_argument("--c", type=float, required=required, help="coefficient c > 0")
    p.add_argument("--beta", type=float, required=required, help="far-field slope beta >= 0")
    p.add_argument("--eps", type=float, default=1e-10, help="tolerance (default 1e-10)")
    p.add_argument("--horizon", type=float, default=None, help="fixed horizon T (default: certified)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genblasius",
        description="Shooting solver for x''' + c x^p x'' = 0, x(0)=x'(0)=0, x'(inf)=beta.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve one problem and print its run manifest")
    _problem_args(sp)
    sp.add_argument("--json", action="store_true", help="emit a single JSON object")

    tp = sub.add_parser("table", help="tolerance ladder as CSV")
    tp.add_argument("--case", choices=sorted(CASES), help="named experiment")
    _problem_args(tp, required=False)
    tp.add_argument(
        "--eps-ladder", type=float, nargs="+", default=list(LADDER),
        help="tolerances to run (default 1e-8 .. 1e-14)",
    )

    pp = sub.add_parser("profile", help="sampled solution x, x', x'' as CSV")
    _problem_args(pp)
    pp.add_argument("--t-max", type=float, required=True)
    pp.add_argument("--n-samples", type=int, default=101)

    vp = sub.add_parser("verify", help="check the a-priori estimates numerically")
    vp.add_argument("--ps", type=float, nargs="+", default=[1.0, 2.0, 3.0, 7.0])
    vp.add_argument("--cs", type=float, nargs="+", default=[0.5, 1.0])
    vp.add_argument("--as", dest="as_", type=float, nargs="+", default=[0.05, 0.2, 1.0, 5.0])
    vp.add_argument("--eps", type=float, default=1e-12)
    vp.add_argument("--corrupt", choices=["c1", "c2", "c3", "c4", "c5"], help=argparse.SUPPRESS)
    vp.add_argument("--quiet", action="store_true", help="only print failures and the summary")
    return parser


def _solve(args, out, err) -> Solution:
    prob = validate_problem(args.p, args.c, args.beta)
    if not prob.proven_regime and prob.p > 0:
        print(UNPROVEN_WARNING, file=err)
    if not args.eps > 0:
        raise DomainError(f"eps must be positive, got {args.eps!r}")
    return solve(prob, args.eps, horizon=args.horizon)


def cmd_solve(args, out, err) -> int:
    start = time.perf_counter()
    sol = _solve(args, out, err)
    manifest = RunManifest.from_solution(sol, time.perf_counter() - start)
    print(manifest.to_json() if args.json else manifest.to_text(), file=out)
    return EXIT_OK


def table_rows(prob, ladder: Sequence[float], horizon=None) -> list[TableRow]:
    """One solve per tolerance; ``delta_a`` is measured against the tightest one."""
    results = {}
    for eps in ladder:
        try:
            results[eps] = solve(prob, eps, horizon=horizon)
        except (BracketFailure, HorizonOverflow, StepUnderflow, NoDecay, DomainError) as exc:
            results[eps] = exc
    ref = results[min(ladder)]
    rows = []
    for eps in ladder:
        r = results[eps]
        if isinstance(r, Exception):
            tag = f"error:{type(r).__name__}"
            rows.append(TableRow(eps, tag, tag, tag, tag, tag))
            continue
        delta_a = abs(r.a_star - ref.a_star) if isinstance(ref, Solution) else "nan"
        rows.append(TableRow(eps, r.steps, r.a_star, delta_a, abs(prob.beta - r.h_est), r.x_T))
    return rows


def cmd_table(args, out, err) -> int:
    if args.case:
        spec = dict(CASES[args.case])
        horizon = spec.pop("horizon") if args.horizon is None else args.horizon
        prob = validate_problem(**spec)
    else:
        if None in (args.p, args.c, args.beta):
            raise DomainError("table needs --case or all of --p, --c, --beta")
        prob = validate_problem(args.p, args.c, args.beta)
        horizon = args.horizon
    if not prob.proven_regime and prob.p > 0:
        print(UNPROVEN_WARNING, file=err)
    rows = table_rows(prob, args.eps_ladder, horizon)
    write_csv(TABLE_COLUMNS, [row.cells() for row in rows], out)
    return EXIT_OK


def cmd_profile(args, out, err) -> int:
    if not args.t_max > 0:
        raise DomainError(f"--t-max must be positive, got {args.t_max!r}")
    if args.n_samples < 2:
        raise DomainError("--n-samples must be at least 2")
    sol = _solve(args, out, err)
    ts = np.linspace(0.0, args.t_max, args.n_samples)
    values = profile(sol, ts)
    rows = [[fmt(float(t)), *(fmt(float(v)) for v in vals)] for t, vals in zip(ts, values)]
    write_csv(("t", "x", "dx", "d2x"), rows, out)
    return EXIT_OK


def cmd_verify(args, out, err) -> int:
    checks = run_suite(args.ps, args.cs, args.as_, eps=args.eps, corrupt=args.corrupt)
    for chk in checks:
        if not (args.quiet and chk.passed):
            print(f"{chk.status}  {chk.name}: {chk.detail}", file=out)
    failed = [c for c in checks if not c.passed and c.hard]
    warned = [c for c in checks if not c.passed and not c.hard]
    print(
        f"{len(checks)} checks, {len(failed)} failed, {len(warned)} warnings", file=out
    )
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


COMMANDS = {"solve": cmd_solve, "table": cmd_table, "profile": cmd_profile, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out, err)
    except DomainError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN
    except (BracketFailure, HorizonOverflow, StepUnderflow, NoDecay) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
