"""Dense univariate polynomials over a finite field.

Coefficients are stored low degree first as integer element encodings of
the owning :class:`~ratmaps.gf.FieldCtx`.  The zero polynomial has an empty
coefficient tuple.  Squarefree decomposition handles characteristic p by
taking coefficient-wise p-th roots whenever a derivative vanishes, so no
irreducible factorization is ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from ratmaps.gf import FieldCtx, FieldElem


class Poly:
    """Immutable polynomial over ``ctx`` with canonical (trimmed) coefficients."""

    __slots__ = ("ctx", "coeffs", "_hash")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable = ()):
        vals = [ctx.elem(c).value if isinstance(c, FieldElem) else ctx.normalize(c) for c in coeffs]
        while vals and vals[-1] == 0:
            vals.pop()
        self.ctx = ctx
        self.coeffs = tuple(vals)
        self._hash = None

    @classmethod
    def _raw(cls, ctx: FieldCtx, coeffs: list[int]) -> "Poly":
        # trusted constructor: coeffs are valid encodings
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.coeffs = tuple(coeffs)
        obj._hash = None
        return obj

    @classmethod
    def one(cls, ctx: FieldCtx) -> "Poly":
        return cls._raw(ctx, [1])

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "Poly":
        return cls._raw(ctx, [])

    @classmethod
    def x(cls, ctx: FieldCtx) -> "Poly":
        return cls._raw(ctx, [0, 1])

    @classmethod
    def linear(cls, ctx: FieldCtx, root: int) -> "Poly":
        """The monic polynomial z - root."""
        return cls._raw(ctx, [ctx.neg(root), 1])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ctx is other.ctx and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctx.p, self.ctx.e, self.coeffs))
        return self._hash

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            cs = str(c) if self.ctx.e == 1 else str(self.ctx.coords(c))
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if mono and c == 1:
                terms.append(mono)
            else:
                terms.append(cs + ("*" + mono if mono else ""))
        return f"Poly({' + '.join(terms)} over F_{self.ctx.q})"

    def _check(self, other: "Poly") -> None:
        if other.ctx is not self.ctx:
            raise ValueError("polynomials over different fields")

    # -- ring operations --

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        add = self.ctx.add
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = add(out[i], c)
        return Poly._raw(self.ctx, out)

    def __neg__(self) -> "Poly":
        neg = self.ctx.neg
        return Poly._raw(self.ctx, [neg(c) for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(self.ctx)
        if len(a) == 1 and a[0] == 1:
            return other
        if len(b) == 1 and b[0] == 1:
            return self
        ctx = self.ctx
        out = [0] * (len(a) + len(b) - 1)
        if ctx.e == 1:
            p = ctx.p
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            out = [c % p for c in out]
        else:
            add, mul = ctx.add, ctx.mul
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        if y:
                            out[i + j] = add(out[i + j], mul(x, y))
        return Poly._raw(ctx, out)

    def scale(self, c: int) -> "Poly":
        mul = self.ctx.mul
        return Poly._raw(self.ctx, [mul(c, x) for x in self.coeffs])

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative polynomial power")
        result = Poly.one(self.ctx)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        return divrem(self, other)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divrem(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divrem(self, other)[1]

    def monic(self) -> "Poly":
        if not self.coeffs:
            raise ValueError("the zero polynomial has no monic normalization")
        if self.coeffs[-1] == 1:
            return self
        return self.scale(self.ctx.inv(self.coeffs[-1]))

    def derivative(self) -> "Poly":
        ctx = self.ctx
        return Poly._raw(ctx, [ctx.mul(ctx.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: int) -> int:
        """Horner evaluation at the encoded element x."""
        add, mul = self.ctx.add, self.ctx.mul
        acc = 0
        for c in reversed(self.coeffs):
            acc = add(mul(acc, x), c)
        return acc

    def compose_affine(self, a: int, b: int) -> "Poly":
        """The polynomial w -> self(a*w + b)."""
        ctx = self.ctx
        lin = Poly._raw(ctx, [b, a])
        acc = Poly.zero(ctx)
        for c in reversed(self.coeffs):
            acc = acc * lin + Poly._raw(ctx, [c])
        return acc


def divrem(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Return (quo, rem) with f = quo*g + rem and deg rem < deg g."""
    f._check(g)
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    ctx = f.ctx
    dg = g.degree
    if f.degree < dg:
        return Poly.zero(ctx), f
    rem = list(f.coeffs)
    quo = [0] * (f.degree - dg + 1)
    gc = g.coeffs
    inv_lead = ctx.inv(gc[-1])
    if ctx.e == 1:
        p = ctx.p
        for i in range(len(rem) - 1, dg - 1, -1):
            c = rem[i] % p
            if c:
                c = c * inv_lead % p
                quo[i - dg] = c
                base = i - dg
                for j in range(dg):
                    rem[base + j] -= c * gc[j]
            rem[i] = 0
        rem = [c % p for c in rem[:dg]]
    else:
        sub, mul = ctx.sub, ctx.mul
        for i in range(len(rem) - 1, dg - 1, -1):
            c = rem[i]
            if c:
                c = mul(c, inv_lead)
                quo[i - dg] = c
                base = i - dg
                for j in range(dg):
                    if gc[j]:
                        rem[base + j] = sub(rem[base + j], mul(c, gc[j]))
            rem[i] = 0
        rem = rem[:dg]
    return Poly._raw(ctx, quo), Poly._raw(ctx, rem)


def poly_arith(f: Poly, g: Poly, op: str):
    """Dispatch form: op in {add, sub, mul, divrem}."""
    f._check(g)
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "divrem":
        return divrem(f, g)
    raise ValueError(f"unknown polynomial operation {op!r}")


def exact_div(f: Poly, g: Poly) -> Poly:
    q, r = divrem(f, g)
    if not r.is_zero():
        raise ArithmeticError(f"{g!r} does not divide {f!r}")
    return q


def gcd_monic(f: Poly, g: Poly) -> Poly:
    """Monic gcd; gcd(f, 0) is the monic normalization of f."""
    f._check(g)
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    return _gcd_cached(f, g)


@lru_cache(maxsize=1 << 18)
def _gcd_cached(f: Poly, g: Poly) -> Poly:
    a, b = f, g
    while not b.is_zero():
        if b.degree == 0:
            return Poly.one(f.ctx)
        a, b = b, divrem(a, b)[1]
    return a.monic()


def gcd_many(polys: Iterable[Poly]) -> Poly:
    it = iter(polys)
    acc = next(it)
    for f in it:
        if acc.degree <= 0 and not acc.is_zero():
            break
        acc = gcd_monic(acc, f)
    return acc.monic()


def _pth_root_poly(f: Poly) -> Poly:
    """Given f(z) = g(z^p), return g with coefficients replaced by p-th roots."""
    ctx = f.ctx
    p = ctx.p
    return Poly._raw(ctx, [ctx.pth_root(c) for c in f.coeffs[::p]])


@dataclass(frozen=True)
class SquarefreeDecomp:
    """Parts ``(s_j, j)`` with f = prod s_j**j, sorted by multiplicity."""

    parts: tuple[tuple[Poly, int], ...]

    def __iter__(self) -> Iterator[tuple[Poly, int]]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def expand(self, ctx: FieldCtx) -> Poly:
        acc = Poly.one(ctx)
        for s, j in self.parts:
            acc = acc * s**j
        return acc

    def max_multiplicity(self) -> int:
        return max((j for _, j in self.parts), default=0)


def squarefree_decomposition(f: Poly) -> SquarefreeDecomp:
    """Squarefree decomposition of a monic polynomial of degree >= 1.

    Yun-style iteration on the separable part; the leftover part whose
    derivative vanishes is rewritten as g(z^p), its p-th root is decomposed
    recursively, and those multiplicities are scaled by p.
    """
    if f.degree < 1:
        raise ValueError("squarefree decomposition needs degree >= 1")
    if not f.is_monic():
        raise ValueError("squarefree decomposition needs a monic polynomial")
    return _sqf_cached(f)


@lru_cache(maxsize=1 << 16)
def _sqf_cached(f: Poly) -> SquarefreeDecomp:
    parts: dict[int, Poly] = {}
    _sqf_into(f, 1, parts)
    return SquarefreeDecomp(tuple((parts[j], j) for j in sorted(parts)))


def _sqf_into(f: Poly, scale: int, parts: dict[int, Poly]) -> None:
    p = f.ctx.p
    c = gcd_monic(f, f.derivative())
    w = exact_div(f, c)
    i = 1
    while w.degree > 0:
        y = gcd_monic(w, c)
        fac = exact_div(w, y)
        if fac.degree > 0:
            parts[i * scale] = fac
        w = y
        c = exact_div(c, y)
        i += 1
    if c.degree > 0:
        _sqf_into(_pth_root_poly(c), scale * p, parts)


def multiplicity_filter(f: Poly, t: int) -> Poly:
    """Monic squarefree product of the roots of f with multiplicity >= t."""
    if t < 1:
        raise ValueError(f"multiplicity threshold must be >= 1, got {t}")
    return _filter_cached(f, t)


@lru_cache(maxsize=1 << 18)
def _filter_cached(f: Poly, t: int) -> Poly:
    if f.degree < 1:
        if not f.is_monic():
            raise ValueError("multiplicity_filter needs a monic polynomial")
        return Poly.one(f.ctx)
    acc = Poly.one(f.ctx)
    for s, j in squarefree_decomposition(f):
        if j >= t:
            acc = acc * s
    return acc


def monic_polys(ctx: FieldCtx, d: int) -> Iterator[Poly]:
    """All monic degree-d polynomials, lowest coefficient varying fastest."""
    q = ctx.q
    for idx in range(q**d):
        coeffs = []
        for _ in range(d):
            idx, c = divmod(idx, q)
            coeffs.append(c)
        coeffs.append(1)
        yield Poly._raw(ctx, coeffs)


def monic_from_index(ctx: FieldCtx, d: int, idx: int) -> Poly:
    q = ctx.q
    coeffs = []
    for _ in range(d):
        idx, c = divmod(idx, q)
        coeffs.append(c)
    coeffs.append(1)
    return Poly._raw(ctx, coeffs)
