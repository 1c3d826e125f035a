"""Verification checks shared by the CLI and the test-suite.

Each check sweeps a parameter grid in increasing order and stops at the
first failure, so a failing :class:`CheckResult` carries the smallest
counterexample it found.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ratmaps import cohom, motive
from ratmaps.gf import FieldCtx
from ratmaps.polyring import monic_polys
from ratmaps.strata import (
    BudgetExceeded,
    DEFAULT_CAP,
    MarkedRat,
    act,
    compose,
    count_pconf_bruteforce,
    extract,
    is_poly_point,
    poly_tuples,
    psi_normalize,
    psi_section,
    rat_points,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    counterexample: dict | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "details": self.details}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def check_recursion(max_d: int = 30, max_m: int = 5) -> CheckResult:
    """Stratification recursion reproduces the closed form for 1 <= n <= d <= max_d."""
    cases = 0
    for d in range(1, max_d + 1):
        for n in range(1, d + 1):
            for m in range(1, max_m + 1):
                cases += 1
                rec = motive.class_poly_recursive(n, d, m)
                closed = motive.class_poly(n, d, m)
                if rec != closed:
                    return CheckResult(
                        "recursion", False, {"grid": f"1<=n<=d<={max_d}, 1<=m<={max_m}"},
                        {"n": n, "d": d, "m": m, "recursive": repr(rec), "closed": repr(closed)},
                    )
    return CheckResult("recursion", True, {"grid": f"1<=n<=d<={max_d}, 1<=m<={max_m}", "cases": cases})


def check_rat_poly(max_dn: int = 10) -> CheckResult:
    """[Rat*_{d,n}] equals [Poly_{n+1}^{d(n+1),1}] for d, n <= max_dn."""
    for d in range(1, max_dn + 1):
        for n in range(1, max_dn + 1):
            a = motive.class_rat(d, n)
            b = motive.class_poly(n + 1, d * (n + 1), 1)
            if a != b:
                return CheckResult(
                    "rat-poly", False, {"grid": f"1<=d,n<={max_dn}"},
                    {"d": d, "n": n, "rat": repr(a), "poly": repr(b)},
                )
    return CheckResult("rat-poly", True, {"grid": f"1<=d,n<={max_dn}", "cases": max_dn * max_dn})


def check_trace(
    max_poly_d: int = 12, max_poly_m: int = 4, max_pconf_m: int = 12, max_m0m_m: int = 8, max_m0m_nd: int = 4
) -> CheckResult:
    """Trace formula for every weight table against its motive class."""
    cases = 0

    def fail(space, params, w, c):
        try:
            got = repr(w.trace_class())
        except cohom.TwistError as exc:
            got = f"error: {exc}"
        return CheckResult("trace", False, {}, {"space": space, **params, "trace": got, "class": repr(c)})

    for d in range(1, max_poly_d + 1):
        for n in range(1, d + 1):
            for m in range(1, max_poly_m + 1):
                cases += 1
                w, c = cohom.weights_poly(n, d, m), motive.class_poly(n, d, m)
                if not cohom.verify_trace(w, c):
                    return fail("poly", {"n": n, "d": d, "m": m}, w, c)
    for m in range(3, max_pconf_m + 1):
        cases += 1
        w, c = cohom.weights_pconf(m), motive.class_pconf(motive.MotiveClass.L() - 2, m - 3)
        if not cohom.verify_trace(w, c):
            return fail("pconf", {"m": m}, w, c)
    for m in range(3, max_m0m_m + 1):
        for n in range(1, max_m0m_nd + 1):
            for d in range(1, max_m0m_nd + 1):
                cases += 1
                w, c = cohom.weights_m0m_star(m, n, d), motive.class_m0m_star(m, n, d)
                if not cohom.verify_trace(w, c):
                    return fail("m0m-star", {"m": m, "n": n, "d": d}, w, c)
    return CheckResult("trace", True, {"cases": cases})


def check_stratification(ctx: FieldCtx, d: int, n: int, m: int, cap: int = DEFAULT_CAP) -> CheckResult:
    """extract/compose are inverse bijections R_{n,k} - R_{n,k+1} <-> Poly_n^{d-kn,m} x A^k."""
    name = "stratification"
    params = {"q": ctx.q, "d": d, "n": n, "m": m}
    total = ctx.q ** (d * m)
    if total > cap:
        raise BudgetExceeded(total, cap)
    per_k: dict[int, int] = {}
    for t in poly_tuples(ctx, d, m):
        g, h = extract(t, n)
        k = h.degree
        if g.d != d - k * n or not is_poly_point(g, n) or compose(g, h, n) != t:
            return CheckResult(name, False, params, {**params, "tuple": repr(t.polys)})
        per_k[k] = per_k.get(k, 0) + 1
    inverse_count: dict[int, int] = {}
    for k in range(0, d // n + 1):
        gs = [g for g in poly_tuples(ctx, d - k * n, m) if is_poly_point(g, n)]
        for h in monic_polys(ctx, k):
            for g in gs:
                if extract(compose(g, h, n), n) != (g, h):
                    return CheckResult(name, False, params, {**params, "k": k, "g": repr(g.polys), "h": repr(h)})
                inverse_count[k] = inverse_count.get(k, 0) + 1
    q = ctx.q
    for k in range(0, d // n + 2):
        expected = motive.specialize(motive.class_r_stratum(n, d, m, k), q) - motive.specialize(
            motive.class_r_stratum(n, d, m, k + 1), q
        )
        if per_k.get(k, 0) != expected or inverse_count.get(k, 0) != expected:
            return CheckResult(
                name, False, params,
                {**params, "k": k, "stratum_points": per_k.get(k, 0), "pairs": inverse_count.get(k, 0), "class": expected},
            )
    return CheckResult(name, True, {**params, "points": total, "per_k": {str(k): v for k, v in sorted(per_k.items())}})


def check_pconf(ctx: FieldCtx, max_r: int = 5, cap: int = DEFAULT_CAP) -> CheckResult:
    """|PConf_r(A^1 - {0,1})(F_q)| against the class prod (L - 2 - i)."""
    q = ctx.q
    counts = {}
    for r in range(0, max_r + 1):
        brute = count_pconf_bruteforce(r, {0, 1}, ctx, cap=cap)
        formula = motive.specialize(motive.class_pconf(motive.MotiveClass.L() - 2, r), q)
        counts[str(r)] = brute
        if brute != formula:
            return CheckResult("pconf", False, {"q": q}, {"q": q, "r": r, "brute": brute, "formula": formula})
    return CheckResult("pconf", True, {"q": q, "counts": counts})


def _affine_group(ctx: FieldCtx):
    return [(a, b) for a in range(1, ctx.q) for b in range(ctx.q)]


def check_psi(ctx: FieldCtx, m: int, d: int = 1, n: int = 1) -> CheckResult:
    """psi_normalize is Aff_1-invariant, has the expected section, and counts orbits."""
    name = "psi"
    params = {"q": ctx.q, "m": m, "d": d, "n": n}
    if m < 3:
        raise ValueError("psi check needs m >= 3")
    rats = list(rat_points(ctx, d, n))
    group = _affine_group(ctx)
    image = set()
    domain = 0
    for marks in itertools.permutations(range(ctx.q), m - 1):
        for rat in rats:
            mr = MarkedRat(marks, rat)
            domain += 1
            base = psi_normalize(mr)
            conf, nrat = base
            if len(set(conf)) != len(conf) or any(z in (0, 1) for z in conf) or not is_poly_point(nrat, 1):
                return CheckResult(name, False, params, {**params, "marks": marks, "rat": repr(rat.polys)})
            for a, b in group:
                if psi_normalize(act(mr, a, b)) != base:
                    return CheckResult(
                        name, False, params,
                        {**params, "marks": marks, "rat": repr(rat.polys), "alpha": [a, b]},
                    )
            if psi_normalize(psi_section(conf, nrat)) != base:
                return CheckResult(name, False, params, {**params, "section_failure": list(conf)})
            image.add((conf, nrat))
    lhs = domain
    rhs = len(group) * len(image)
    expected_image = count_pconf_bruteforce(m - 3, {0, 1}, ctx) * len(rats)
    ok = lhs == rhs and len(image) == expected_image
    details = {**params, "domain": lhs, "group_order": len(group), "image": len(image), "pconf_x_rat": expected_image}
    return CheckResult(name, ok, details, None if ok else details)
