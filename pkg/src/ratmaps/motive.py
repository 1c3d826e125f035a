"""Classes in the Grothendieck ring as integer polynomials in the Lefschetz class L.

Every class handled here lies in Z[L], so a :class:`MotiveClass` is simply a
sparse univariate integer polynomial.  Specializing L -> q gives the point
count over F_q.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping


class MotiveClass:
    """An element of Z[L], stored as {exponent: coefficient} without zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        clean = {}
        for exp, c in (coeffs or {}).items():
            if exp < 0:
                raise ValueError(f"negative exponent {exp} in a motive class")
            if c:
                clean[int(exp)] = int(c)
        self.coeffs = dict(sorted(clean.items()))

    @classmethod
    def const(cls, c: int) -> "MotiveClass":
        return cls({0: c})

    @classmethod
    def L(cls, power: int = 1) -> "MotiveClass":
        return cls({power: 1})

    @classmethod
    def projective_space(cls, n: int) -> "MotiveClass":
        """[P^n] = 1 + L + ... + L^n."""
        return cls({i: 1 for i in range(n + 1)})

    def _coerce(self, other) -> "MotiveClass":
        if isinstance(other, MotiveClass):
            return other
        if isinstance(other, int):
            return MotiveClass.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return MotiveClass(out)

    __radd__ = __add__

    def __neg__(self):
        return MotiveClass({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return MotiveClass(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = MotiveClass.const(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = MotiveClass.const(other)
        if not isinstance(other, MotiveClass):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def specialize(self, q: int) -> int:
        return specialize(self, q)

    def to_json(self) -> dict[str, int]:
        return {str(e): c for e, c in self.coeffs.items()}

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            mono = "" if e == 0 else ("L" if e == 1 else f"L^{e}")
            if mono and abs(c) == 1:
                term = mono
            else:
                term = f"{abs(c)}" + mono
            sign = "-" if c < 0 else "+"
            parts.append((sign, term))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, term in parts[1:]:
            out += f" {sign} {term}"
        return out


def specialize(c: MotiveClass, q: int) -> int:
    """Evaluate the class at L = q (the point count over F_q)."""
    return sum(coef * q**exp for exp, coef in c.coeffs.items())


def _check_nm(n: int, m: int, d: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if d < 0:
        raise ValueError(f"d must be >= 0, got {d}")


def class_poly(n: int, d: int, m: int) -> MotiveClass:
    """[Poly_n^{d,m}] in closed form.

    L^{dm} when n > d, L^{dm} - L when n = d, L^{dm} - L^{(d-n)m+1} when d > n.
    """
    _check_nm(n, m, d)
    if n > d:
        return MotiveClass.L(d * m)
    if n == d:
        return MotiveClass.L(d * m) - MotiveClass.L(1)
    return MotiveClass.L(d * m) - MotiveClass.L((d - n) * m + 1)


def class_poly_recursive(n: int, d: int, m: int) -> MotiveClass:
    """[Poly_n^{d,m}] from the stratification recursion alone.

    [Poly_n^{d,m}] = L^{dm} - sum_{k>=1, kn<=d} [Poly_n^{d-kn,m}] L^k, with the
    pieces of degree <= n taken from the explicit descriptions A^{dm} (n > d)
    and A^{dm} - A^1 (n = d).
    """
    _check_nm(n, m, d)
    return _recursive(n, d, m)


@lru_cache(maxsize=None)
def _recursive(n: int, d: int, m: int) -> MotiveClass:
    if n > d:
        return MotiveClass.L(d * m)
    if n == d:
        return MotiveClass.L(d * m) - MotiveClass.L(1)
    total = MotiveClass.L(d * m)
    k = 1
    while d - k * n >= 0:
        total = total - _recursive(n, d - k * n, m) * MotiveClass.L(k)
        k += 1
    return total


def class_rat(d: int, n: int) -> MotiveClass:
    """[Rat*_{d,n}] = [Poly_1^{d,n+1}]."""
    if d < 1 or n < 1:
        raise ValueError(f"Rat*_{{d,n}} needs d, n >= 1, got d={d}, n={n}")
    return class_poly(1, d, n + 1)


def class_pconf(x: MotiveClass, r: int) -> MotiveClass:
    """[PConf_r(X)] = prod_{i=0}^{r-1} ([X] - i)."""
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    acc = MotiveClass.const(1)
    for i in range(r):
        acc = acc * (x - i)
    return acc


def _check_m0m(m: int, n: int, d: int) -> None:
    if m < 3:
        raise ValueError(f"M*_{{0,m}} is only handled for m >= 3, got m={m}")
    if n < 1 or d < 1:
        raise ValueError(f"need n, d >= 1, got n={n}, d={d}")


def class_m0m_star(m: int, n: int, d: int) -> MotiveClass:
    """[M*_{0,m}(P^n, d)] = prod_{i=2}^{m-2}(L - i) * [Rat*_{d,n}]."""
    _check_m0m(m, n, d)
    pconf = MotiveClass.const(1)
    for i in range(2, m - 1):
        pconf = pconf * (MotiveClass.L() - i)
    return pconf * class_rat(d, n)


def class_m0m(m: int, n: int, d: int) -> MotiveClass:
    """[M_{0,m}(P^n, d)] = [M*_{0,m}(P^n, d)] * [P^n]."""
    _check_m0m(m, n, d)
    return class_m0m_star(m, n, d) * MotiveClass.projective_space(n)


def class_r_stratum(n: int, d: int, m: int, k: int) -> MotiveClass:
    """[R_{n,k}^{d,m}] = sum_{j=k}^{floor(d/n)} [Poly_n^{d-jn,m}] L^j."""
    _check_nm(n, m, d)
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    total = MotiveClass()
    for j in range(k, d // n + 1):
        total = total + class_poly(n, d - j * n, m) * MotiveClass.L(j)
    return total
