"""Points of Poly_n^{d,m} and of the strata R_{n,k}^{d,m} over F_q.

A tuple (f_1, ..., f_m) of monic degree-d polynomials lies in Poly_n^{d,m}
when the f_i share no root of multiplicity >= n over the algebraic closure.
Membership is decided with squarefree decompositions and gcds, never by
searching for roots, so closure roots are handled correctly.

The stratum index of a tuple is the degree of the largest monic h with h^n
dividing every f_i; :func:`extract` and :func:`compose` are the mutually
inverse maps between the k-th stratum and Poly_n^{d-kn,m} x A^k.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from ratmaps.gf import FieldCtx, make_field
from ratmaps.polyring import Poly, exact_div, gcd_many, monic_from_index, multiplicity_filter

DEFAULT_CAP = 10**7


class BudgetExceeded(RuntimeError):
    """An enumeration would visit more points than the configured cap."""

    def __init__(self, required: int, cap: int):
        super().__init__(f"enumeration needs {required} points, cap is {cap}")
        self.required = required
        self.cap = cap


def _check_cap(required: int, cap: int) -> None:
    if required > cap:
        raise BudgetExceeded(required, cap)


@dataclass(frozen=True)
class PolyTuple:
    """An m-tuple of monic polynomials of common degree d."""

    polys: tuple[Poly, ...]

    def __post_init__(self):
        polys = tuple(self.polys)
        object.__setattr__(self, "polys", polys)
        if not polys:
            raise ValueError("a PolyTuple needs at least one entry")
        ctx = polys[0].ctx
        d = polys[0].degree
        for f in polys:
            if f.ctx is not ctx:
                raise ValueError("PolyTuple entries over different fields")
            if not f.is_monic() or f.degree != d:
                raise ValueError(f"every entry must be monic of degree {d}, got {f!r}")

    @classmethod
    def of(cls, ctx: FieldCtx, *coeff_lists: Sequence[int]) -> "PolyTuple":
        return cls(tuple(Poly(ctx, c) for c in coeff_lists))

    @property
    def ctx(self) -> FieldCtx:
        return self.polys[0].ctx

    @property
    def d(self) -> int:
        return self.polys[0].degree

    @property
    def m(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, i):
        return self.polys[i]


@dataclass(frozen=True)
class StratumParams:
    d: int
    n: int
    m: int
    k: int

    def __post_init__(self):
        if self.d < 0 or self.n < 1 or self.m < 1 or self.k < 0:
            raise ValueError(f"invalid stratum parameters {self}")

    @property
    def max_k(self) -> int:
        return self.d // self.n


@dataclass(frozen=True)
class MarkedRat:
    """Marked points z_1..z_{m-1} in A^1 together with a based rational map.

    ``rat`` is a point of Rat*_{d,n} = Poly_1^{d,n+1}.
    """

    marks: tuple[int, ...]
    rat: PolyTuple

    def __post_init__(self):
        object.__setattr__(self, "marks", tuple(self.marks))
        if len(set(self.marks)) != len(self.marks):
            raise ValueError(f"marks must be distinct, got {self.marks}")


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError(f"multiplicity bound n must be >= 1, got {n}")


def common_power_factor(t: PolyTuple, n: int) -> Poly:
    """The maximal monic h with h**n dividing every entry of t.

    Built as the product over r >= 1 of S_{rn}, where S_s is the gcd over the
    entries of their multiplicity-s filters, so each irreducible factor gets
    exponent floor(min_i mult / n).
    """
    _check_n(n)
    ctx = t.ctx
    h = Poly.one(ctx)
    s = n
    while s <= t.d:
        common = gcd_many(multiplicity_filter(f, s) for f in t)
        if common.degree == 0:
            break
        h = h * common
        s += n
    return h


def is_poly_point(t: PolyTuple, n: int) -> bool:
    """True iff the entries share no root of multiplicity >= n."""
    _check_n(n)
    if n > t.d:
        return True
    return gcd_many(multiplicity_filter(f, n) for f in t).degree == 0


def stratum_index(t: PolyTuple, n: int) -> int:
    """deg of the common n-th power factor; t lies in R_{n,k} iff this is >= k."""
    return common_power_factor(t, n).degree


def extract(t: PolyTuple, n: int) -> tuple[PolyTuple, Poly]:
    """Split t = g * h**n with h maximal; g is a point of Poly_n^{d-kn,m}."""
    h = common_power_factor(t, n)
    if h.degree == 0:
        return t, h
    hn = h**n
    g = PolyTuple(tuple(exact_div(f, hn) for f in t))
    return g, h


def compose(g: PolyTuple, h: Poly, n: int) -> PolyTuple:
    """Inverse of :func:`extract`: (g, h) -> (g_1 h^n, ..., g_m h^n)."""
    _check_n(n)
    if h.ctx is not g.ctx:
        raise ValueError("g and h over different fields")
    if not h.is_monic():
        raise ValueError("h must be monic")
    if not is_poly_point(g, n):
        raise ValueError("g is not a point of Poly_n; composing would not be invertible")
    if h.degree == 0:
        return g
    hn = h**n
    return PolyTuple(tuple(f * hn for f in g))


def h_coordinates(h: Poly) -> tuple[int, ...]:
    """Coordinates of monic h in A^k: its k non-leading coefficients."""
    return h.coeffs[:-1]


# --- marked rational maps ------------------------------------------------------


def _affine_image(ctx: FieldCtx, a: int, b: int, z: int) -> int:
    return ctx.add(ctx.mul(a, z), b)


def precompose_rat(rat: PolyTuple, a: int, b: int) -> PolyTuple:
    """phi o alpha^{-1} for alpha(z) = a z + b, rescaled to monic entries.

    alpha^{-1}(w) = a^{-1} w - a^{-1} b.
    """
    ctx = rat.ctx
    ainv = ctx.inv(a)
    shift = ctx.neg(ctx.mul(ainv, b))
    return PolyTuple(tuple(f.compose_affine(ainv, shift).monic() for f in rat))


def act(mr: MarkedRat, a: int, b: int) -> MarkedRat:
    """Diagonal action of alpha(z) = a z + b in Aff_1 on a marked map."""
    ctx = mr.rat.ctx
    if a == 0:
        raise ValueError("a = 0 is not an affine transformation")
    return MarkedRat(
        tuple(_affine_image(ctx, a, b, z) for z in mr.marks),
        precompose_rat(mr.rat, a, b),
    )


def psi_normalize(mr: MarkedRat) -> tuple[tuple[int, ...], PolyTuple]:
    """Move z_1 to 0 and z_2 to 1 with the unique affine map doing so.

    With beta(z) = (z - z_1)/(z_2 - z_1) returns (beta(z_3), ..., beta(z_{m-1}))
    and phi o beta^{-1}, obtained by substituting z_1 + (z_2 - z_1) w and
    dividing by (z_2 - z_1)^d.
    """
    if len(mr.marks) < 2:
        raise ValueError("psi_normalize needs m >= 3, i.e. at least two marks")
    if len(set(mr.marks)) != len(mr.marks):
        raise ValueError("repeated marks")
    ctx = mr.rat.ctx
    z1, z2 = mr.marks[0], mr.marks[1]
    span = ctx.sub(z2, z1)
    inv_span = ctx.inv(span)
    conf = tuple(ctx.mul(ctx.sub(z, z1), inv_span) for z in mr.marks[2:])
    lead_inv = ctx.inv(ctx.pow(span, mr.rat.d))
    rat = PolyTuple(tuple(f.compose_affine(span, z1).scale(lead_inv) for f in mr.rat))
    return conf, rat


def psi_section(conf: Sequence[int], rat: PolyTuple) -> MarkedRat:
    """Inverse of the induced map on orbits: (conf, rat) -> ((0, 1, conf...), rat)."""
    return MarkedRat((0, 1, *conf), rat)


# --- enumeration ---------------------------------------------------------------


def poly_tuples(ctx: FieldCtx, d: int, m: int) -> Iterator[PolyTuple]:
    """All m-tuples of monic degree-d polynomials.

    Order is lexicographic in the concatenated coefficient vector with the
    lowest coefficient of the first entry varying fastest.
    """
    n_polys = ctx.q**d
    polys = [monic_from_index(ctx, d, i) for i in range(n_polys)]
    for idx in itertools.product(range(n_polys), repeat=m):
        yield PolyTuple(tuple(polys[i] for i in reversed(idx)))


def rat_points(ctx: FieldCtx, d: int, n: int) -> Iterator[PolyTuple]:
    """Points of Rat*_{d,n} = Poly_1^{d,n+1}."""
    for t in poly_tuples(ctx, d, n + 1):
        if is_poly_point(t, 1):
            yield t


def default_workers() -> int:
    return os.cpu_count() or 1


def _python_histogram(ctx: FieldCtx, d: int, m: int, start: int, stop: int) -> np.ndarray:
    """hist[n, s] = #tuples with stratum_index(t, n) == s, for 1 <= n <= d.

    Only tuples whose first entry has index in [start, stop) are visited.
    """
    hist = np.zeros((d + 1, d + 1), dtype=np.int64)
    n_polys = ctx.q**d
    polys = [monic_from_index(ctx, d, i) for i in range(n_polys)]
    for first in range(start, stop):
        for rest in itertools.product(range(n_polys), repeat=m - 1):
            t = PolyTuple((polys[first], *(polys[i] for i in rest)))
            for n in range(1, d + 1):
                hist[n, stratum_index(t, n)] += 1
    return hist


def _shard_histogram(args) -> np.ndarray:
    p, e, d, m, start, stop, engine = args
    ctx = make_field(p, e)
    if engine == "python":
        return _python_histogram(ctx, d, m, start, stop)
    from ratmaps import _kernel

    return _kernel.profile_histogram(ctx, d, m, start, stop)


def _resolve_engine(ctx: FieldCtx, engine: str) -> str:
    if engine == "auto":
        from ratmaps import _kernel

        return "kernel" if _kernel.supports(ctx) else "python"
    if engine not in ("python", "kernel"):
        raise ValueError(f"unknown engine {engine!r}")
    return engine


def stratum_histogram(
    ctx: FieldCtx,
    d: int,
    m: int,
    *,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
    engine: str = "auto",
) -> np.ndarray:
    """Exhaustive histogram of stratum indices over all q^{dm} tuples.

    Row n (1 <= n <= d) counts tuples by stratum_index(t, n).  Shards split
    the first entry's index range and are summed, so the result does not
    depend on ``workers``.
    """
    if d < 0 or m < 1:
        raise ValueError(f"need d >= 0 and m >= 1, got d={d}, m={m}")
    _check_cap(ctx.q ** (d * m), cap)
    return _cached_histogram(ctx.p, ctx.e, d, m, max(1, workers), _resolve_engine(ctx, engine)).copy()


@lru_cache(maxsize=256)
def _cached_histogram(p: int, e: int, d: int, m: int, workers: int, engine: str) -> np.ndarray:
    if d == 0:
        return np.zeros((1, 1), dtype=np.int64)
    n_polys = p ** (e * d)
    workers = min(workers, n_polys)
    bounds = [n_polys * i // workers for i in range(workers + 1)]
    shards = [(p, e, d, m, bounds[i], bounds[i + 1], engine) for i in range(workers)]
    if workers == 1:
        return _shard_histogram(shards[0])
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_shard_histogram, shards))
    return sum(parts[1:], parts[0])


def count_poly_bruteforce(
    d: int,
    n: int,
    m: int,
    ctx: FieldCtx,
    *,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
    engine: str = "auto",
) -> int:
    """|Poly_n^{d,m}(F_q)| by exhaustive enumeration of all q^{dm} tuples."""
    _check_n(n)
    hist = stratum_histogram(ctx, d, m, cap=cap, workers=workers, engine=engine)
    total = ctx.q ** (d * m)
    if n > d:
        # the predicate holds vacuously; still guarded by the enumeration cap
        return total
    return int(hist[n, 0])


def count_stratum_bruteforce(
    params: StratumParams,
    ctx: FieldCtx,
    *,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
    engine: str = "auto",
) -> int:
    """|R_{n,k}^{d,m}(F_q)|: tuples with stratum index >= k."""
    d, n, m, k = params.d, params.n, params.m, params.k
    hist = stratum_histogram(ctx, d, m, cap=cap, workers=workers, engine=engine)
    if n > d:
        return ctx.q ** (d * m) if k == 0 else 0
    return int(hist[n, k:].sum())


def count_pconf_bruteforce(
    r: int, excluded: Iterable[int], ctx: FieldCtx, *, cap: int = DEFAULT_CAP
) -> int:
    """Ordered r-tuples of distinct points of A^1(F_q) minus `excluded`."""
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    excluded = {ctx.normalize(x) for x in excluded}
    avail = [z for z in range(ctx.q) if z not in excluded]
    _check_cap(len(avail) ** r, cap)
    count = 0
    for pts in itertools.product(avail, repeat=r):
        if len(set(pts)) == r:
            count += 1
    return count
