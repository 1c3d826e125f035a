"""Finite fields F_{p^e} for small prime powers.

Elements are encoded as plain integers ``v = c_0 + c_1 p + ... + c_{e-1} p^{e-1}``
where ``(c_0, ..., c_{e-1})`` are the coordinates in the power basis of the
field modulus.  For prime fields this is the usual residue mod p.  The
:class:`FieldElem` wrapper exists for callers that want operator syntax;
the polynomial layer works on the raw integer encodings for speed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

DEFAULT_FIELD_BOUND = 2**20

# Full add/mul tables are built for fields up to this size.
_TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``q == p**e``, or None if q is not a prime power."""
    if q < 2:
        return None
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        p = q
    e = 0
    r = q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        return None
    return p, e


# --- arithmetic on F_p[x] coefficient lists (low degree first) ---------------


def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    """(a*b) mod `mod` over F_p; `mod` monic."""
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _fp_rem(prod, mod, p)


def _fp_rem(a: list[int], mod: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(mod) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * mod[j]) % p
    return _fp_trim(a[:dm] if len(a) > dm else a)


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        monic_b = [(c * inv) % p for c in b]
        a, b = b, _fp_rem(a, monic_b, p)
    return a


def _fp_powmod_x(exp: int, mod: list[int], p: int) -> list[int]:
    """x**exp mod `mod` over F_p."""
    result = [1]
    base = _fp_rem([0, 1], mod, p)
    while exp:
        if exp & 1:
            result = _fp_mulmod(result, base, mod, p)
        base = _fp_mulmod(base, base, mod, p)
        exp >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_fp(coeffs: tuple[int, ...], p: int) -> bool:
    """Rabin irreducibility test for a monic polynomial over F_p."""
    f = list(coeffs)
    e = len(f) - 1
    if e < 1:
        return False
    if e == 1:
        return True
    x = [0, 1]
    xq = _fp_powmod_x(p**e, f, p)
    diff = _fp_trim([(a - b) % p for a, b in itertools.zip_longest(xq, x, fillvalue=0)])
    if diff:
        return False
    for r in _prime_factors(e):
        h = _fp_powmod_x(p ** (e // r), f, p)
        diff = _fp_trim([(a - b) % p for a, b in itertools.zip_longest(h, x, fillvalue=0)])
        g = _fp_gcd(f, diff, p)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree e over F_p.

    Coefficient vectors ``(c_0, ..., c_{e-1})`` are compared low degree first.
    """
    for low in itertools.product(range(p), repeat=e):
        cand = (*low, 1)
        if is_irreducible_fp(cand, p):
            return cand
    raise AssertionError(f"no irreducible of degree {e} over F_{p}")  # unreachable


# --- the field context -------------------------------------------------------


class FieldCtx:
    """The finite field F_q, q = p**e, with a fixed deterministic modulus.

    Instances are immutable and cached per ``(p, e)``; build them with
    :func:`make_field`.
    """

    __slots__ = (
        "p", "e", "q", "modulus", "_add", "_mul", "_neg", "_inv", "_proot", "__weakref__",
    )

    def __init__(self, p: int, e: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus
        self._add = self._mul = self._neg = self._inv = self._proot = None
        if e > 1 and self.q <= _TABLE_LIMIT:
            self._build_tables()

    def _build_tables(self) -> None:
        q = self.q
        elems = range(q)
        self._add = tuple(tuple(self._vadd(a, b) for b in elems) for a in elems)
        self._mul = tuple(tuple(self._vmul(a, b) for b in elems) for a in elems)
        self._neg = tuple(self._vsub(0, a) for a in elems)
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    inv[a] = b
                    break
        self._inv = tuple(inv)
        self._proot = tuple(self._vpow(a, self.p ** (self.e - 1)) for a in elems)

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, e={self.e})"

    def __reduce__(self):
        return (make_field, (self.p, self.e))

    # -- encoding --

    def coords(self, v: int) -> tuple[int, ...]:
        """Coordinates of the encoded element v in the power basis."""
        out = []
        for _ in range(self.e):
            v, c = divmod(v, self.p)
            out.append(c)
        return tuple(out)

    def encode(self, coords) -> int:
        if len(coords) != self.e:
            raise ValueError(f"expected {self.e} coordinates, got {len(coords)}")
        v = 0
        for c in reversed(coords):
            if not 0 <= c < self.p:
                raise ValueError(f"coordinate {c} outside [0, {self.p})")
            v = v * self.p + c
        return v

    def elem(self, v) -> "FieldElem":
        if isinstance(v, FieldElem):
            self.check(v)
            return v
        return FieldElem(self, self.normalize(v))

    def normalize(self, v: int) -> int:
        """Map an integer to an encoded element; integers act through F_p when e > 1."""
        if self.e == 1:
            return v % self.p
        if not 0 <= v < self.q:
            raise ValueError(f"{v} is not an element encoding of F_{self.q}")
        return v

    def elements(self):
        return (FieldElem(self, v) for v in range(self.q))

    def check(self, a: "FieldElem") -> None:
        if a.ctx is not self:
            raise ValueError(f"element of {a.ctx!r} used in {self!r}")

    # -- vector arithmetic (reference path) --

    def _vadd(self, a: int, b: int) -> int:
        p = self.p
        return self.encode([(x + y) % p for x, y in zip(self.coords(a), self.coords(b))])

    def _vsub(self, a: int, b: int) -> int:
        p = self.p
        return self.encode([(x - y) % p for x, y in zip(self.coords(a), self.coords(b))])

    def _vmul(self, a: int, b: int) -> int:
        prod = _fp_mulmod(list(self.coords(a)), list(self.coords(b)), list(self.modulus), self.p)
        return self.encode(prod + [0] * (self.e - len(prod)))

    def _vpow(self, a: int, k: int) -> int:
        result, base = 1, a
        while k:
            if k & 1:
                result = self._vmul(result, base)
            base = self._vmul(base, base)
            k >>= 1
        return result

    # -- arithmetic on encodings --

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self._add is not None:
            return self._add[a][b]
        return self._vadd(a, b)

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        if self._neg is not None:
            return self._neg[a]
        return self._vsub(0, a)

    def sub(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if self._mul is not None:
            return self._mul[a][b]
        return self._vmul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        if self._inv is not None:
            return self._inv[a]
        return self._vpow(a, self.q - 2)

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        if self.e == 1:
            return pow(a, k, self.p)
        result, base = 1, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def pth_root(self, a: int) -> int:
        """The unique b with b**p == a, i.e. a**(p**(e-1))."""
        if self.e == 1:
            return a
        if self._proot is not None:
            return self._proot[a]
        return self._vpow(a, self.p ** (self.e - 1))

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_q."""
        return n % self.p

    def tables(self):
        """Dense (add, mul, neg, inv, pth_root) tables as nested lists."""
        q = self.q
        return (
            [[self.add(a, b) for b in range(q)] for a in range(q)],
            [[self.mul(a, b) for b in range(q)] for a in range(q)],
            [self.neg(a) for a in range(q)],
            [self.inv(a) if a else 0 for a in range(q)],
            [self.pth_root(a) for a in range(q)],
        )


@lru_cache(maxsize=None)
def _cached_field(p: int, e: int) -> FieldCtx:
    return FieldCtx(p, e, smallest_irreducible(p, e))


def make_field(p: int, e: int = 1, bound: int = DEFAULT_FIELD_BOUND) -> FieldCtx:
    """Build F_{p^e} with the lexicographically smallest irreducible modulus.

    Raises ValueError for non-prime p, e < 1, or p**e above `bound`.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not isinstance(e, int) or e < 1:
        raise ValueError(f"extension degree must be >= 1, got {e}")
    if p**e > bound:
        raise ValueError(f"field size {p}^{e} exceeds bound {bound}")
    return _cached_field(p, e)


def parse_field(text: str, bound: int = DEFAULT_FIELD_BOUND) -> FieldCtx:
    """Parse ``"p"``, ``"p^e"`` or a prime power ``"q"`` into a field."""
    text = str(text).strip()
    if "^" in text:
        base, _, exp = text.partition("^")
        return make_field(int(base), int(exp), bound)
    q = int(text)
    pe = prime_power(q)
    if pe is None:
        raise ValueError(f"{q} is not a prime power")
    return make_field(pe[0], pe[1], bound)


@dataclass(frozen=True)
class FieldElem:
    """An element of a :class:`FieldCtx` with operator syntax."""

    ctx: FieldCtx
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.ctx.coords(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx:
                raise ValueError("mixed field contexts")
            return other.value
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        return FieldElem(self.ctx, self.ctx.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElem(self.ctx, self.ctx.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.value))

    def __truediv__(self, other):
        return FieldElem(self.ctx, self.ctx.mul(self.value, self.ctx.inv(self._other(other))))

    def __pow__(self, k: int):
        return FieldElem(self.ctx, self.ctx.pow(self.value, k))

    def inv(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.inv(self.value))

    def pth_root(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.pth_root(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        if self.ctx.e == 1:
            return f"{self.value} (mod {self.ctx.p})"
        return f"{self.coeffs} in F_{self.ctx.q}"


def field_arith(a: FieldElem, b: FieldElem | int | None, op: str) -> FieldElem:
    """Dispatch form of the field operations: op in {add, sub, mul, inv, pow}.

    For ``pow`` the second argument is the integer exponent; ``inv`` ignores it.
    """
    if op == "inv":
        return a.inv()
    if op == "pow":
        return a ** b
    if isinstance(b, FieldElem) and b.ctx is not a.ctx:
        raise ValueError("mixed field contexts")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown field operation {op!r}")


def pth_root(a: FieldElem) -> FieldElem:
    return a.pth_root()
