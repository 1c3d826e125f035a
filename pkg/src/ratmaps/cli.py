"""Command line front end: ``ratmaps {count,motive,tables,verify}``.

Exit codes: 0 success / all checks pass, 1 a check failed, 2 invalid input,
3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field

from ratmaps import cohom, motive, verify
from ratmaps.gf import FieldCtx, parse_field
from ratmaps.strata import (
    DEFAULT_CAP,
    BudgetExceeded,
    StratumParams,
    count_pconf_bruteforce,
    count_poly_bruteforce,
    count_stratum_bruteforce,
    default_workers,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

SPACES = ("poly", "rat", "pconf", "m0m-star", "m0m", "stratum")


class InputError(ValueError):
    pass


@dataclass
class Report:
    inputs: dict
    results: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    def add_check(self, name: str, passed: bool, details: dict | None = None, counterexample: dict | None = None):
        entry = {"name": name, "passed": bool(passed), "details": details or {}}
        if counterexample is not None:
            entry["counterexample"] = counterexample
        self.checks.append(entry)

    @property
    def all_passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_json(self) -> dict:
        return {"inputs": self.inputs, "results": self.results, "checks": self.checks, "timing": self.timing}


# --- parameter handling ---------------------------------------------------------


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise InputError(f"--space {args.space} needs " + ", ".join("--" + n for n in missing))


def _field(args) -> FieldCtx:
    if args.field is None:
        raise InputError("--field is required")
    try:
        return parse_field(args.field)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _validate(args) -> None:
    for name in ("d", "n", "m", "k", "r"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            raise InputError(f"--{name} must be non-negative")
    if getattr(args, "n", None) is not None and args.n < 1:
        raise InputError("--n must be >= 1")
    if getattr(args, "cap", 1) < 1:
        raise InputError("--cap must be >= 1")
    if getattr(args, "workers", 1) < 1:
        raise InputError("--workers must be >= 1")


def _parse_exclude(text: str | None, ctx: FieldCtx | None = None) -> list[int]:
    if not text:
        return []
    try:
        pts = sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError as exc:
        raise InputError(f"bad --exclude list {text!r}") from exc
    if ctx is not None and any(not 0 <= x < ctx.q for x in pts):
        raise InputError(f"--exclude points must be element encodings in [0, {ctx.q})")
    return pts


def _space_class(args) -> motive.MotiveClass:
    """The motive class selected by --space and its parameters."""
    s = args.space
    try:
        if s == "poly":
            _require(args, "d", "n", "m")
            return motive.class_poly(args.n, args.d, args.m)
        if s == "rat":
            _require(args, "d", "n")
            return motive.class_rat(args.d, args.n)
        if s == "pconf":
            _require(args, "r")
            excluded = _parse_exclude(args.exclude)
            return motive.class_pconf(motive.MotiveClass.L() - len(excluded), args.r)
        if s in ("m0m-star", "m0m"):
            _require(args, "m", "n", "d")
            fn = motive.class_m0m_star if s == "m0m-star" else motive.class_m0m
            return fn(args.m, args.n, args.d)
        if s == "stratum":
            _require(args, "d", "n", "m", "k")
            return motive.class_r_stratum(args.n, args.d, args.m, args.k)
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc)) from exc
    raise InputError(f"unknown space {s!r}")


def _projective_points(ctx: FieldCtx, n: int) -> int:
    """|P^n(F_q)| by counting normalized representatives."""
    import itertools

    count = 0
    for vec in itertools.product(range(ctx.q), repeat=n + 1):
        nonzero = [c for c in vec if c]
        if nonzero and nonzero[0] == 1:
            count += 1
    return count


def _brute_count(args, ctx: FieldCtx) -> int:
    s, cap, workers = args.space, args.cap, args.workers
    kw = {"cap": cap, "workers": workers}
    if s == "poly":
        return count_poly_bruteforce(args.d, args.n, args.m, ctx, **kw)
    if s == "rat":
        return count_poly_bruteforce(args.d, 1, args.n + 1, ctx, **kw)
    if s == "pconf":
        return count_pconf_bruteforce(args.r, _parse_exclude(args.exclude, ctx), ctx, cap=cap)
    if s in ("m0m-star", "m0m"):
        total = count_pconf_bruteforce(args.m - 3, {0, 1}, ctx, cap=cap) * count_poly_bruteforce(
            args.d, 1, args.n + 1, ctx, **kw
        )
        if s == "m0m":
            total *= _projective_points(ctx, args.n)
        return total
    if s == "stratum":
        return count_stratum_bruteforce(StratumParams(args.d, args.n, args.m, args.k), ctx, **kw)
    raise InputError(f"unknown space {s!r}")


def _inputs(args) -> dict:
    # workers only affects speed, never content
    skip = {"func", "output", "command", "workers"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


# --- commands ---------------------------------------------------------------------


def cmd_count(args) -> Report:
    _validate(args)
    ctx = _field(args)
    cls = _space_class(args)
    report = Report(_inputs(args))
    report.results["q"] = ctx.q
    if args.method in ("formula", "both"):
        report.results["formula"] = motive.specialize(cls, ctx.q)
    if args.method in ("brute", "both"):
        report.results["brute"] = _brute_count(args, ctx)
    if args.method == "both":
        agree = report.results["formula"] == report.results["brute"]
        report.results["agree"] = agree
        report.add_check(
            "formula_vs_brute", agree,
            {"formula": report.results["formula"], "brute": report.results["brute"]},
            None if agree else {"space": args.space, **_inputs(args)},
        )
    return report


def cmd_motive(args) -> Report:
    _validate(args)
    cls = _space_class(args)
    report = Report(_inputs(args))
    report.results["class"] = repr(cls)
    report.results["coefficients"] = {str(e): c for e, c in sorted(cls.coeffs.items())}
    return report


def _table_checks(report: Report, name: str, betti: cohom.BettiTable, weights: cohom.WeightTable, cls):
    ranks_ok = weights.ranks() == betti.compact
    report.add_check(f"{name}:ranks", ranks_ok, {"weights": weights.ranks(), "compact": betti.compact})
    report.add_check(f"{name}:duality", betti.duality_holds(), {"notes": betti.notes})
    try:
        trace_ok = cohom.verify_trace(weights, cls)
        report.add_check(f"{name}:trace", trace_ok, {"class": repr(cls), "trace": repr(weights.trace_class())})
    except cohom.TwistError as exc:
        report.add_check(f"{name}:trace", False, {"error": str(exc)})


def cmd_tables(args) -> Report:
    _validate(args)
    s = args.space
    report = Report(_inputs(args))
    try:
        if s == "poly":
            _require(args, "d", "n", "m")
            betti = cohom.betti_poly(args.n, args.d, args.m)
            weights = cohom.weights_poly(args.n, args.d, args.m)
            cls = motive.class_poly(args.n, args.d, args.m)
        elif s == "rat":
            _require(args, "d", "n")
            betti = cohom.betti_poly(1, args.d, args.n + 1)
            weights = cohom.weights_rat(args.d, args.n)
            cls = motive.class_rat(args.d, args.n)
        elif s == "pconf":
            _require(args, "m")
            weights = cohom.weights_pconf(args.m)
            betti = cohom.betti_pconf(args.m)
            cls = motive.class_pconf(motive.MotiveClass.L() - 2, args.m - 3)
            report.results["poincare_polynomial"] = cohom.poincare_polynomial_pconf(args.m)
        elif s == "m0m-star":
            _require(args, "m", "n", "d")
            weights = cohom.weights_m0m_star(args.m, args.n, args.d)
            betti = cohom.betti_m0m_star(args.m, args.n, args.d)
            cls = motive.class_m0m_star(args.m, args.n, args.d)
            literal = cohom.weights_m0m_star_literal(args.m, args.n, args.d)
            report.results["weights_literal"] = literal.to_json()
            report.results["diff"] = cohom.diff_tables(literal, weights).to_json()
        else:
            raise InputError(f"tables are available for poly, rat, pconf, m0m-star; not {s!r}")
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report.results["betti"] = betti.to_json()
    report.results["weights"] = weights.to_json()
    _table_checks(report, s, betti, weights, cls)
    return report


CHECKS = ("recursion", "rat-poly", "trace", "stratification", "psi", "pconf")


def cmd_verify(args) -> Report:
    if args.cap < 1 or args.workers < 1:
        raise InputError("--cap and --workers must be >= 1")
    selected = CHECKS if args.check == "all" else (args.check,)
    report = Report(_inputs(args))
    ctx = parse_field(args.field) if args.field else None

    def record(result: verify.CheckResult):
        report.add_check(result.name, result.passed, result.details, result.counterexample)

    for name in selected:
        try:
            if name == "recursion":
                record(verify.check_recursion(args.max_d))
            elif name == "rat-poly":
                record(verify.check_rat_poly(args.max))
            elif name == "trace":
                record(verify.check_trace())
            elif name == "stratification":
                fctx = ctx or parse_field("3")
                d = args.d if args.d is not None else 4
                m = args.m if args.m is not None else 1
                ns = [args.n] if args.n is not None else list(range(1, max(d, 1) + 1))
                for n in ns:
                    record(verify.check_stratification(fctx, d, n, m, cap=args.cap))
            elif name == "psi":
                fctx = ctx or parse_field("3")
                ms = [args.m] if args.m is not None else [3, 4]
                for m in ms:
                    record(verify.check_psi(fctx, m, args.d or 1, args.n or 1))
            elif name == "pconf":
                fctx = ctx or parse_field("5")
                record(verify.check_pconf(fctx, args.r if args.r is not None else 5, cap=args.cap))
        except BudgetExceeded as exc:
            report.add_check(name, False, {"budget_exceeded": True, "required": exc.required, "cap": exc.cap})
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    return report


# --- output ------------------------------------------------------------------------


def _csv(command: str, report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if command == "tables":
        w.writerow(["table", "degree", "twist", "mult"])
        for key in ("weights", "weights_literal"):
            if key in report.results:
                for deg, items in report.results[key]["entries"].items():
                    for item in items:
                        w.writerow([key, deg, item["twist"], item["mult"]])
    elif command == "verify":
        w.writerow(["check", "passed", "details"])
        for c in report.checks:
            w.writerow([c["name"], c["passed"], json.dumps(c.get("counterexample") or c["details"], sort_keys=True)])
    elif command == "motive":
        w.writerow(["exponent", "coefficient"])
        for e, c in report.results["coefficients"].items():
            w.writerow([e, c])
    else:
        w.writerow(["key", "value"])
        for k, v in report.results.items():
            w.writerow([k, v])
    return buf.getvalue()


def _text(command: str, report: Report) -> str:
    lines = []
    for k, v in report.results.items():
        if isinstance(v, dict):
            lines.append(f"{k}: {json.dumps(v, sort_keys=True)}")
        else:
            lines.append(f"{k}: {v}")
    for c in report.checks:
        status = "PASS" if c["passed"] else "FAIL"
        extra = c.get("counterexample") or c["details"]
        lines.append(f"[{status}] {c['name']} {json.dumps(extra, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def render(command: str, report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        return _csv(command, report)
    return _text(command, report)


# --- argument parser ------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", choices=("text", "json", "csv"), default="text")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration budget in tuples")
    p.add_argument("--workers", type=int, default=default_workers())


def _params(p: argparse.ArgumentParser, space_required: bool = True) -> None:
    p.add_argument("--space", choices=SPACES, required=space_required)
    for name in ("d", "n", "m", "k", "r"):
        p.add_argument(f"--{name}", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ratmaps", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="point counts over F_q")
    _params(p)
    p.add_argument("--field", required=True, help="p, p^e, or a prime power q")
    p.add_argument("--exclude", help="comma-separated points removed from A^1 (pconf)")
    p.add_argument("--method", choices=("formula", "brute", "both"), default="both")
    _common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("motive", help="classes in Z[L]")
    _params(p)
    p.add_argument("--exclude", help="comma-separated points removed from A^1 (pconf)")
    _common(p)
    p.set_defaults(func=cmd_motive)

    p = sub.add_parser("tables", help="Betti and weight tables")
    _params(p)
    _common(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("verify", help="run verification checks")
    p.add_argument("--check", choices=(*CHECKS, "all"), default="all")
    p.add_argument("--max-d", type=int, default=30)
    p.add_argument("--max", type=int, default=10)
    for name in ("d", "n", "m", "r"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--field")
    _common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    start = time.perf_counter_ns()
    try:
        report = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"error: {exc}; rerun with --cap {exc.required}", file=sys.stderr)
        return EXIT_BUDGET
    report.timing["elapsed_ns"] = time.perf_counter_ns() - start
    sys.stdout.write(render(args.command, report, args.output))
    return EXIT_OK if report.all_passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
