"""Betti tables and Frobenius weight tables.

A weight table records compactly supported cohomology degree by degree as a
multiset of Tate twists Q_l(j); Frobenius acts on Q_l(j) by q^{-j}.  Twists
are stored with the sign used in the literature, so the top class of an
N-dimensional variety sits in degree 2N with twist -N.

The Grothendieck-Lefschetz trace formula ties a weight table to a motive
class: sum_i (-1)^i sum_j mult * L^{-j} must equal the class.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod

from ratmaps.motive import MotiveClass

Multiset = dict[int, int]


class TwistError(ValueError):
    """A positive twist cannot contribute a polynomial in L."""


@dataclass
class WeightTable:
    """degree -> {twist: multiplicity} for H^*_{et,c}."""

    entries: dict[int, Multiset]
    dim: int
    label: str = ""

    def __post_init__(self):
        clean = {}
        for i, ms in self.entries.items():
            ms = {j: m for j, m in ms.items() if m}
            if any(m < 0 for m in ms.values()):
                raise ValueError(f"negative multiplicity in degree {i}")
            if ms:
                clean[i] = dict(sorted(ms.items()))
        self.entries = dict(sorted(clean.items()))

    def ranks(self) -> dict[int, int]:
        return {i: sum(ms.values()) for i, ms in self.entries.items()}

    def total_rank(self) -> int:
        return sum(self.ranks().values())

    def twists(self):
        for i, ms in self.entries.items():
            for j in ms:
                yield i, j

    def trace_class(self) -> MotiveClass:
        """Alternating Frobenius trace as a polynomial in L."""
        acc: dict[int, int] = {}
        for i, ms in self.entries.items():
            sign = -1 if i % 2 else 1
            for j, mult in ms.items():
                if j > 0:
                    raise TwistError(
                        f"{self.label or 'table'}: twist {j} in degree {i} gives eigenvalue q^{-j}"
                    )
                acc[-j] = acc.get(-j, 0) + sign * mult
        return MotiveClass(acc)

    def tensor(self, other: "WeightTable", label: str = "") -> "WeightTable":
        """Kunneth product: degrees add, twists add, multiplicities multiply."""
        out: dict[int, Multiset] = {}
        for a, ms_a in self.entries.items():
            for b, ms_b in other.entries.items():
                slot = out.setdefault(a + b, {})
                for ja, ma in ms_a.items():
                    for jb, mb in ms_b.items():
                        slot[ja + jb] = slot.get(ja + jb, 0) + ma * mb
        return WeightTable(out, self.dim + other.dim, label)

    def rows(self):
        """(degree, twist, multiplicity) triples in degree order."""
        for i, ms in self.entries.items():
            for j, mult in ms.items():
                yield i, j, mult

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "entries": {str(i): [{"twist": j, "mult": m} for j, m in ms.items()] for i, ms in self.entries.items()},
        }


@dataclass
class BettiTable:
    """Ordinary and compactly supported Betti numbers of a smooth variety."""

    ordinary: dict[int, int]
    compact: dict[int, int]
    dim: int
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.ordinary = {i: r for i, r in sorted(self.ordinary.items()) if r}
        self.compact = {i: r for i, r in sorted(self.compact.items()) if r}
        if any(r < 0 for r in (*self.ordinary.values(), *self.compact.values())):
            raise ValueError("negative Betti number")

    def out_of_range(self) -> list[int]:
        """Compact degrees outside [0, 2 dim], which have no dual partner."""
        return [i for i in self.compact if not 0 <= i <= 2 * self.dim]

    def duality_holds(self) -> bool:
        """ordinary[i] == compact[2 dim - i] for every degree 0 <= i <= 2 dim."""
        top = 2 * self.dim
        return all(self.ordinary.get(i, 0) == self.compact.get(top - i, 0) for i in range(top + 1)) and all(
            0 <= i <= top for i in self.ordinary
        )

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "ordinary": {str(i): r for i, r in self.ordinary.items()},
            "compact": {str(i): r for i, r in self.compact.items()},
            "notes": list(self.notes),
        }


def _check_poly_params(n: int, d: int, m: int) -> None:
    if m < 1 or n < 1 or d < n:
        raise ValueError(f"Betti/weight formulas need d >= n >= 1 and m >= 1, got n={n}, d={d}, m={m}")


def betti_poly(n: int, d: int, m: int) -> BettiTable:
    """Betti numbers of Poly_n^{d,m}(C).

    Ordinary ranks are 1 in degrees 0 and 2nm-3; compact ranks are 1 in
    degrees 2(d-n)m+3 and 2dm.  When nm = 1 the ordinary degree 2nm-3 = -1
    is dropped and the table is flagged (the variety is empty there).
    """
    _check_poly_params(n, d, m)
    notes = []
    ordinary = {0: 1}
    low = 2 * n * m - 3
    if low < 0:
        notes.append(f"degenerate nm=1: ordinary degree {low} dropped; compact degree {2 * (d - n) * m + 3} exceeds 2*dim")
    else:
        ordinary[low] = ordinary.get(low, 0) + 1
    compact = {2 * (d - n) * m + 3: 1, 2 * d * m: 1}
    return BettiTable(ordinary, compact, d * m, notes)


def weights_poly(n: int, d: int, m: int) -> WeightTable:
    """Weight table of Poly_n^{d,m}.

    Degree 2(d-n)m+3 carries Q_l((n-d)m-1), degree 2dm carries Q_l(-dm).  For
    n > d the space is A^{dm} and only the top class remains.
    """
    if m < 1 or n < 1 or d < 0:
        raise ValueError(f"invalid parameters n={n}, d={d}, m={m}")
    label = f"Poly_{n}^{{{d},{m}}}"
    if n > d:
        return WeightTable({2 * d * m: {-d * m: 1}}, d * m, label)
    entries: dict[int, Multiset] = {2 * d * m: {-d * m: 1}}
    low = entries.setdefault(2 * (d - n) * m + 3, {})
    low[(n - d) * m - 1] = low.get((n - d) * m - 1, 0) + 1
    return WeightTable(entries, d * m, label)


def weights_rat(d: int, n: int) -> WeightTable:
    """Weight table of Rat*_{d,n} = Poly_1^{d,n+1}."""
    w = weights_poly(1, d, n + 1)
    w.label = f"Rat*_{{{d},{n}}}"
    return w


# --- the nu function -----------------------------------------------------------


def elementary_symmetric(values, k: int) -> int:
    """e_k(values) via the coefficient recurrence of prod (1 + v t)."""
    if k < 0:
        return 0
    e = [1] + [0] * k
    for v in values:
        for j in range(k, 0, -1):
            e[j] += v * e[j - 1]
    return e[k]


def nu_injections(m: int, a: int) -> int:
    """nu(a) as a sum over order-preserving injections {1..b} -> {0..m-4}, b = 2(m-3)-a."""
    if m < 3:
        raise ValueError(f"nu needs m >= 3, got {m}")
    b = 2 * (m - 3) - a
    if b < 0:
        return 0
    # order-preserving injections are exactly the b-element subsets
    return sum(prod(s + 2 for s in image) for image in itertools.combinations(range(m - 3), b))


def nu(m: int, a: int) -> int:
    """nu(a) = e_b(2, 3, ..., m-2) with b = 2(m-3) - a; 0 outside 0 <= b <= m-3."""
    if m < 3:
        raise ValueError(f"nu needs m >= 3, got {m}")
    b = 2 * (m - 3) - a
    if b < 0 or b > m - 3:
        return 0
    return elementary_symmetric(range(2, m - 1), b)


# --- configuration spaces and M*_{0,m} -----------------------------------------


def _check_m(m: int) -> None:
    if m < 3:
        raise ValueError(f"need m >= 3, got {m}")


def weights_pconf(m: int) -> WeightTable:
    """Weight table of PConf_{m-3}(A^1 - {0,1}).

    Compact degree a, for m-3 <= a <= 2(m-3), carries twist (m-3)-a with
    multiplicity nu(m, a).
    """
    _check_m(m)
    N = m - 3
    entries = {a: {N - a: nu(m, a)} for a in range(N, 2 * N + 1)}
    return WeightTable(entries, N, f"PConf_{N}(A^1-{{0,1}})")


def poincare_polynomial_pconf(m: int) -> list[int]:
    """Coefficients of prod_{j=2}^{m-2} (1 + j t), lowest degree first."""
    _check_m(m)
    coeffs = [1]
    for j in range(2, m - 1):
        nxt = coeffs + [0]
        for i, c in enumerate(coeffs):
            nxt[i + 1] += j * c
        coeffs = nxt
    return coeffs


def _check_m0m(m: int, n: int, d: int) -> None:
    _check_m(m)
    if n < 1 or d < 1:
        raise ValueError(f"need n, d >= 1, got n={n}, d={d}")


def weights_m0m_star(m: int, n: int, d: int) -> WeightTable:
    """Weight table of M*_{0,m}(P^n, d) as the Kunneth product PConf x Rat*."""
    _check_m0m(m, n, d)
    return weights_pconf(m).tensor(weights_rat(d, n), f"M*_{{0,{m}}}(P^{n},{d})")


def weights_m0m_star_literal(m: int, n: int, d: int) -> WeightTable:
    """The two closed-form summand families for M*_{0,m}(P^n, d), taken verbatim.

    (a) Q_l(m-3+D-i)^nu(2(m-3+D)-i) for m-3+2D <= i <= 2(m-3+D);
    (b) Q_l(m-1+D-i)^nu(2(m-2+D)-(i+n)) for m+(2d-1)(n+1) <= i <= 2(m-3+D)-n+2;
    with D = d(n+1).  Kept separately from :func:`weights_m0m_star` so the
    two can be compared.
    """
    _check_m0m(m, n, d)
    D = d * (n + 1)
    entries: dict[int, Multiset] = {}
    for i in range(m - 3 + 2 * D, 2 * (m - 3 + D) + 1):
        mult = nu(m, 2 * (m - 3 + D) - i)
        if mult:
            slot = entries.setdefault(i, {})
            slot[m - 3 + D - i] = slot.get(m - 3 + D - i, 0) + mult
    for i in range(m + (2 * d - 1) * (n + 1), 2 * (m - 3 + D) - n + 2 + 1):
        mult = nu(m, 2 * (m - 2 + D) - (i + n))
        if mult:
            slot = entries.setdefault(i, {})
            slot[m - 1 + D - i] = slot.get(m - 1 + D - i, 0) + mult
    return WeightTable(entries, m - 3 + D, f"M*_{{0,{m}}}(P^{n},{d}) literal")


@dataclass
class TableDiff:
    """Degree-by-degree comparison of two weight tables."""

    left_label: str
    right_label: str
    differences: list[dict]
    trace_left: str
    trace_right: str

    @property
    def identical(self) -> bool:
        return not self.differences

    def to_json(self) -> dict:
        return {
            "left": self.left_label,
            "right": self.right_label,
            "identical": self.identical,
            "differences": self.differences,
            "trace_left": self.trace_left,
            "trace_right": self.trace_right,
        }


def _trace_text(w: WeightTable) -> str:
    try:
        return repr(w.trace_class())
    except TwistError as exc:
        return f"undefined ({exc})"


def diff_tables(left: WeightTable, right: WeightTable) -> TableDiff:
    diffs = []
    for i in sorted(set(left.entries) | set(right.entries)):
        a = left.entries.get(i, {})
        b = right.entries.get(i, {})
        if a != b:
            diffs.append({
                "degree": i,
                left.label or "left": {str(j): c for j, c in a.items()},
                right.label or "right": {str(j): c for j, c in b.items()},
            })
    return TableDiff(left.label, right.label, diffs, _trace_text(left), _trace_text(right))


def literal_vs_kunneth(m: int, n: int, d: int) -> TableDiff:
    return diff_tables(weights_m0m_star_literal(m, n, d), weights_m0m_star(m, n, d))


def verify_trace(w: WeightTable, c: MotiveClass) -> bool:
    """Check the trace formula as a polynomial identity in L.

    Raises :class:`TwistError` if the table has a positive twist.
    """
    return w.trace_class() == c


# --- Betti tables derived from weight tables -----------------------------------


def betti_from_weights(w: WeightTable) -> BettiTable:
    """Compact ranks from the table; ordinary ranks by Poincare duality."""
    compact = w.ranks()
    top = 2 * w.dim
    ordinary = {top - i: r for i, r in compact.items() if 0 <= i <= top}
    notes = [f"compact degree {i} outside [0, {top}]" for i in compact if not 0 <= i <= top]
    return BettiTable(ordinary, compact, w.dim, notes)


def betti_pconf(m: int) -> BettiTable:
    return betti_from_weights(weights_pconf(m))


def betti_m0m_star(m: int, n: int, d: int) -> BettiTable:
    """Betti table of M*_{0,m}(P^n, d), the rank projection of its weight table."""
    return betti_from_weights(weights_m0m_star(m, n, d))
