"""Command-line entry point: individual checks and the batch verification run.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on a usage
or configuration error. Reports are JSON with a fixed key order; wall-clock
timings are only included with --timings so that reports stay reproducible.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .flags import DEFAULT_BUDGET, BudgetExceeded, ConventionError
from .fq import MAX_PRIME, check_prime
from .glue import (
    PreconditionError,
    blowup_demo,
    degree_bound,
    excision_check,
    glued_par_check,
    glued_springer_check,
    leq_w_checks,
    levi_fiber_check,
    mixed_check,
    nilcone_check,
    strata_tables,
)
from .hocolim import verify_worked_examples
from .nilpotent import JordanType, jm_data, partitions, w_prime
from .polynomial import InterpolationError
from .posets import emit_dot, hasse_edges, tw_poset, verify_right_adjoint
from .root_weyl import all_parabolics, enumerate_weyl, parabolic_subgroup

DEFAULT_PRIMES = (2, 3, 5, 7, 11, 13, 17)
CHECKS = ("tw", "jm", "glued", "glued-par", "mixed", "strata", "excision", "levi", "nilcone", "blowup", "homology")
PER_PARTITION = {"jm", "glued", "glued-par", "mixed", "strata", "excision", "levi"}
POLYNOMIAL_CHECKS = {"glued", "glued-par", "mixed", "strata", "excision"}
MAX_ENUM_N = 4
MAX_COMBINATORIAL_N = 5


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    ns: tuple[int, ...] = (2, 3)
    lam: JordanType | None = None
    primes: tuple[int, ...] = DEFAULT_PRIMES
    checks: tuple[str, ...] = CHECKS
    budget: int = DEFAULT_BUDGET
    output: Path | None = None

    def __post_init__(self) -> None:
        if not self.ns or any(not isinstance(n, int) or n < 1 for n in self.ns):
            raise UsageError(f"n must be positive integers, got {self.ns}")
        if len(set(self.primes)) != len(self.primes):
            raise UsageError("primes must be distinct")
        for p in self.primes:
            try:
                check_prime(p)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise UsageError(f"unknown checks {sorted(unknown)}; choose from {list(CHECKS)}")
        if self.lam is not None and any(self.lam.n != n for n in self.ns):
            raise UsageError(f"partition {self.lam} does not partition every n in {list(self.ns)}")
        if POLYNOMIAL_CHECKS & set(self.checks):
            need = max(degree_bound(n) for n in self.ns) + 1
            if len(self.primes) < need:
                raise UsageError(f"polynomial checks need at least {need} primes, got {len(self.primes)}")
        if self.budget < 1:
            raise UsageError("budget must be positive")

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> RunConfig:
        known = {"n", "lambda", "primes", "checks", "budget", "output"}
        extra = set(data) - known
        if extra:
            raise UsageError(f"unknown config keys {sorted(extra)}")
        ns = data.get("n", [2, 3])
        ns = (ns,) if isinstance(ns, int) else tuple(ns)
        lam = data.get("lambda")
        return cls(
            ns=ns,
            lam=parse_partition(lam) if lam is not None else None,
            primes=tuple(data.get("primes", DEFAULT_PRIMES)),
            checks=tuple(data.get("checks", CHECKS)),
            budget=int(data.get("budget", DEFAULT_BUDGET)),
            output=Path(data["output"]) if data.get("output") else None,
        )

    def echo(self) -> dict[str, Any]:
        return {
            "n": list(self.ns),
            "lambda": str(self.lam) if self.lam else None,
            "primes": list(self.primes),
            "checks": list(self.checks),
            "budget": self.budget,
        }


@dataclass
class Report:
    command: str
    config: dict[str, Any]
    checks: list[dict[str, Any]] = field(default_factory=list)
    timings: bool = False

    def add(self, name: str, run: Callable[[], tuple[str, dict[str, Any]]], **labels: Any) -> None:
        """Run one check and record its status; expected errors become failures, not crashes."""
        start = time.perf_counter()
        try:
            status, detail = run()
        except PreconditionError as exc:
            status, detail = "skip", {"reason": str(exc)}
        except (InterpolationError, BudgetExceeded, ConventionError, ArithmeticError) as exc:
            status, detail = "fail", {"error": f"{type(exc).__name__}: {exc}"}
        entry: dict[str, Any] = {"name": name, **labels, "status": status, **detail}
        if self.timings:
            entry["seconds"] = round(time.perf_counter() - start, 3)
        self.checks.append(entry)

    @property
    def passed(self) -> bool:
        return all(c["status"] != "fail" for c in self.checks)

    def to_json(self) -> str:
        body = {
            "tool": "twisted-glue",
            "version": __version__,
            "command": self.command,
            "config": self.config,
            "checks": self.checks,
            "summary": {
                s: sum(1 for c in self.checks if c["status"] == s) for s in ("pass", "fail", "skip")
            },
        }
        return json.dumps(body, indent=2) + "\n"


def parse_partition(text: str | Sequence[int]) -> JordanType:
    try:
        return JordanType.parse(text) if isinstance(text, str) else JordanType(text)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# -- individual checks ------------------------------------------------------------


def check_tw(n: int) -> tuple[str, dict[str, Any]]:
    tw = tw_poset(n)
    edges = len(hasse_edges(tw))
    # Tw(n) is a product of n-1 copies of the three-element poset a < b, a < c
    expected_edges = (n - 1) * 2 * 3 ** (n - 2) if n > 1 else 0
    ok = len(tw) == 3 ** (n - 1) and edges == expected_edges
    return _status(ok), {"nodes": len(tw), "edges": edges}


def check_jm(lam: JordanType) -> tuple[str, dict[str, Any]]:
    n = lam.n
    data = jm_data(lam)
    wp = w_prime(n, data.J0)
    size_ok = len(wp.elements) * len(parabolic_subgroup(n, data.J0)) == len(enumerate_weyl(n))
    adjoint_ok = all(verify_right_adjoint(n, data.J0, w) for w in wp.elements)
    return _status(size_ok and adjoint_ok), {
        "h": list(data.h_weights),
        "J0": sorted(data.J0),
        "W_prime_size": len(wp.elements),
        "w0_prime": list(wp.w0_prime.images),
        "adjunction": adjoint_ok,
    }


def check_glued(lam: JordanType, primes: Sequence[int], budget: int) -> tuple[str, dict[str, Any]]:
    r = glued_springer_check(lam.n, lam, primes, budget)
    return _status(r.holds), {"virtual_count": str(r.polynomial), "cells": {k: str(v) for k, v in r.cells.items()}}


def check_glued_par(lam: JordanType, primes: Sequence[int], budget: int) -> tuple[str, dict[str, Any]]:
    r = glued_par_check(lam.n, lam, primes, budget)
    return _status(r.holds), {"virtual_count": str(r.polynomial), "cells": {k: str(v) for k, v in r.cells.items()}}


def check_mixed(lam: JordanType, primes: Sequence[int], budget: int) -> tuple[str, dict[str, Any]]:
    r = mixed_check(lam.n, lam, primes, budget)
    detail: dict[str, Any] = {"tw_total": str(r.tw_total), "twtr_total": str(r.twtr_total)}
    if lam.is_zero and not r.equal:
        detail["note"] = "A = 0 lies outside the A != 0 hypothesis of the mixed comparison"
    return _status(r.equal), detail


def check_strata(lam: JordanType, primes: Sequence[int], budget: int) -> tuple[str, dict[str, Any]]:
    reports = leq_w_checks(lam.n, lam, primes, budget)
    rows = []
    for w, r in reports.items():
        rows.append(
            {
                "w": list(w.images),
                "leq": str(r.leq),
                "lt": str(r.lt),
                "quotient": str(r.quotient),
                "restricted_quotient": str(r.restricted_quotient),
                "global": r.global_holds,
                "bookkeeping": r.bookkeeping_holds,
            }
        )
    global_ok = all(r.global_holds for r in reports.values())
    bookkeeping_ok = all(r.bookkeeping_holds for r in reports.values())
    status = "pass" if global_ok and bookkeeping_ok else "fail"
    return status, {"global_holds": global_ok, "bookkeeping_holds": bookkeeping_ok, "strata": rows}


def check_excision(lam: JordanType, primes: Sequence[int], budget: int) -> tuple[str, dict[str, Any]]:
    n = lam.n
    if lam.is_zero:
        raise PreconditionError("requires A != 0")
    data = jm_data(lam)
    wp = w_prime(n, data.J0)
    inner = [w for w in wp.elements if not w.is_identity() and w != wp.w0_prime]
    # excision compares counts at each sample prime, so a few primes suffice
    sample = list(primes[:3])
    tables = strata_tables(n, lam, sample, budget) if inner else {}
    results = {str(list(w.images)): excision_check(n, lam, w, sample, budget, tables).holds for w in inner}
    return _status(all(results.values())), {"w_checked": len(inner), "results": results}


def check_levi(lam: JordanType, primes: Sequence[int], budget: int) -> tuple[str, dict[str, Any]]:
    n = lam.n
    results = {}
    for R in all_parabolics(n):
        if not R.is_proper:
            continue
        for q in primes[:2]:
            results[f"{R} q={q}"] = levi_fiber_check(n, lam, R, q, budget).holds
    return _status(all(results.values())), {"results": results}


def check_nilcone(n: int) -> tuple[str, dict[str, Any]]:
    r = nilcone_check(n)
    return _status(r.holds), {"total": str(r.total), "expected": str(r.expected)}


def check_blowup() -> tuple[str, dict[str, Any]]:
    results = {str(m): str(blowup_demo(m).total) for m in range(1, 9)}
    ok = all(blowup_demo(m).holds for m in range(1, 9))
    return _status(ok), {"totals": results}


def check_homology(primes: Sequence[int]) -> tuple[str, dict[str, Any]]:
    examples = verify_worked_examples(primes[:4])
    ok = all(e.contractible and e.euler_matches for e in examples)
    return _status(ok), {
        e.name: {"betti": list(e.betti), "euler": e.euler, "virtual_count_at_1": e.virtual_count_at_1}
        for e in examples
    }


def run_config(config: RunConfig, report: Report) -> None:
    checks = set(config.checks)
    primes, budget = list(config.primes), config.budget
    for n in config.ns:
        if "tw" in checks:
            report.add("tw", lambda: check_tw(n), n=n)
        if "nilcone" in checks:
            if n > MAX_COMBINATORIAL_N:
                raise UsageError(f"nilcone check supports n <= {MAX_COMBINATORIAL_N}")
            report.add("nilcone", lambda: check_nilcone(n), n=n)
        lams = [config.lam] if config.lam else partitions(n)
        if checks & PER_PARTITION and n > MAX_ENUM_N:
            raise UsageError(f"enumeration checks support n <= {MAX_ENUM_N}")
        for lam in lams:
            runners: dict[str, Callable[[], tuple[str, dict[str, Any]]]] = {
                "jm": lambda: check_jm(lam),
                "glued": lambda: check_glued(lam, primes, budget),
                "glued-par": lambda: check_glued_par(lam, primes, budget),
                "mixed": lambda: check_mixed(lam, primes, budget),
                "strata": lambda: check_strata(lam, primes, budget),
                "excision": lambda: check_excision(lam, primes, budget),
                "levi": lambda: check_levi(lam, primes, budget),
            }
            for name in CHECKS:
                if name in checks and name in runners:
                    report.add(name, runners[name], n=n, **{"lambda": str(lam)})
    if "blowup" in checks:
        report.add("blowup", check_blowup)
    if "homology" in checks:
        report.add("homology", lambda: check_homology(primes))


# -- argument parsing ---------------------------------------------------------------


def _primes_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"malformed prime list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twisted-glue", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, lam: bool = True) -> None:
        p.add_argument("--n", type=int, required=True)
        if lam:
            p.add_argument("--lambda", dest="lam", required=True, help="partition such as 2,1")
        p.add_argument("--primes", type=_primes_arg, default=DEFAULT_PRIMES, help=f"comma separated, each <= {MAX_PRIME}")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    def output(p: argparse.ArgumentParser) -> None:
        p.add_argument("--output", type=Path, help="also write the report here")
        p.add_argument("--timings", action="store_true", help="include wall-clock seconds per check")

    p = sub.add_parser("tw-hasse", help="Hasse diagram of the twisted-arrow poset as DOT")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--summary", action="store_true", help="print a JSON summary instead of DOT")

    p = sub.add_parser("jm", help="Jacobson-Morozov data and W' for a partition")
    p.add_argument("--lambda", dest="lam", required=True)

    p = sub.add_parser("springer-count", help="cell polynomials and glued virtual count")
    common(p)
    output(p)

    p = sub.add_parser("glued-check", help="glued, Par'-glued and mixed virtual counts")
    common(p)
    output(p)

    p = sub.add_parser("strata-check", help="closed-union counts per w in W' and excision")
    common(p)
    output(p)

    p = sub.add_parser("nilcone-check", help="gluing identity for the nilpotent cone")
    p.add_argument("--n", type=int, required=True)
    output(p)

    p = sub.add_parser("blowup-demo", help="point glued to a blow-up along the exceptional divisor")
    p.add_argument("--m", type=int, required=True)
    output(p)

    p = sub.add_parser("hocolim-homology", help="Betti numbers of the worked hocolim models")
    output(p)

    p = sub.add_parser("verify-all", help="run the batch verification suite")
    p.add_argument("--config", type=Path, help="JSON file mirroring the run configuration")
    output(p)
    return parser


def _config_from_args(args: argparse.Namespace, checks: Sequence[str]) -> RunConfig:
    return RunConfig(
        ns=(args.n,),
        lam=parse_partition(args.lam),
        primes=tuple(args.primes),
        checks=tuple(checks),
        budget=args.budget,
        output=getattr(args, "output", None),
    )


def _dispatch(args: argparse.Namespace) -> tuple[str, bool]:
    cmd = args.command
    if cmd == "tw-hasse":
        if not 1 <= args.n <= 6:
            raise UsageError(f"n must lie in 1..6, got {args.n}")
        tw = tw_poset(args.n)
        if args.summary:
            text = json.dumps({"n": args.n, "nodes": len(tw), "edges": len(hasse_edges(tw))}, indent=2) + "\n"
        else:
            text = emit_dot(tw, name=f"Tw{args.n}")
        return text, True

    if cmd == "jm":
        lam = parse_partition(args.lam)
        if lam.n > MAX_COMBINATORIAL_N:
            raise UsageError(f"n must be at most {MAX_COMBINATORIAL_N}")
        report = Report(cmd, {"lambda": str(lam)})
        report.add("jm", lambda: check_jm(lam), n=lam.n, **{"lambda": str(lam)})
        return report.to_json(), report.passed

    timings = getattr(args, "timings", False)

    if cmd == "springer-count":
        config = _config_from_args(args, ["glued"])
        lam, primes = config.lam, list(config.primes)
        report = Report(cmd, config.echo(), timings=timings)

        def run() -> tuple[str, dict[str, Any]]:
            status, detail = check_glued(lam, primes, config.budget)
            return status, {"cells": detail["cells"], "virtual_count": detail["virtual_count"]}

        report.add("springer-count", run, n=args.n, **{"lambda": str(lam)})
        return _finish(report, config.output)

    if cmd == "glued-check":
        config = _config_from_args(args, ["glued", "glued-par", "mixed"])
    elif cmd == "strata-check":
        config = _config_from_args(args, ["strata", "excision"])
    elif cmd == "nilcone-check":
        if not 1 <= args.n <= MAX_COMBINATORIAL_N:
            raise UsageError(f"n must lie in 1..{MAX_COMBINATORIAL_N}")
        config = RunConfig(ns=(args.n,), checks=("nilcone",), output=args.output)
    elif cmd == "blowup-demo":
        if not 1 <= args.m <= 8:
            raise UsageError(f"m must lie in 1..8, got {args.m}")
        report = Report(cmd, {"m": args.m}, timings=timings)
        report.add(
            "blowup",
            lambda: (_status(blowup_demo(args.m).holds), {"m": args.m, "total": str(blowup_demo(args.m).total)}),
        )
        return _finish(report, args.output)
    elif cmd == "hocolim-homology":
        config = RunConfig(ns=(2,), checks=("homology",), output=args.output)
    else:  # verify-all
        if args.config is not None:
            try:
                data = json.loads(args.config.read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError(f"cannot read config: {exc}") from exc
            if not isinstance(data, dict):
                raise UsageError("config must be a JSON object")
            config = RunConfig.from_json(data)
        else:
            config = RunConfig()
        if args.output is not None:
            config.output = args.output

    report = Report(cmd, config.echo(), timings=timings)
    run_config(config, report)
    return _finish(report, config.output)


def _finish(report: Report, output: Path | None) -> tuple[str, bool]:
    text = report.to_json()
    if output is not None:
        output.write_text(text)
    return text, report.passed


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, ok = _dispatch(args)
    except UsageError as exc:
        print(f"twisted-glue: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
