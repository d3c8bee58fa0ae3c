"""Prime-field polynomials, irreducibility, and the extension field F_{p^r}.

Elements of F_{p^r} are coefficient vectors in the polynomial basis
1, a, ..., a^(r-1), where ``a`` is the class of X modulo the defining
polynomial. Polynomials over F_p are tuples of ints, lowest degree first,
with no trailing zeros; the zero polynomial is ``()`` and has degree None.
"""
from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from . import linalg
from .errors import InvariantViolation, NotInvertible

# (p-1)^2 must fit a signed 64-bit product, and the vectorized paths add
# two reduced products before reducing again.
P_MAX = 2**31

PolyFp = tuple[int, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p ---------------------------------------------------

def poly_trim(coeffs: Sequence[int], p: int) -> PolyFp:
    c = [x % p for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_deg(g: PolyFp) -> Optional[int]:
    return len(g) - 1 if g else None


def poly_add(a: PolyFp, b: PolyFp, p: int) -> PolyFp:
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                      for i in range(n)], p)


def poly_sub(a: PolyFp, b: PolyFp, p: int) -> PolyFp:
    return poly_add(a, tuple(-x for x in b), p)


def poly_mul(a: PolyFp, b: PolyFp, p: int) -> PolyFp:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim(out, p)


def poly_divmod(a: PolyFp, b: PolyFp, p: int) -> tuple[PolyFp, PolyFp]:
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], -1, p)
    quot = [0] * max(len(a) - db, 0)
    for k in range(len(a) - 1, db - 1, -1):
        c = rem[k] * inv_lead % p
        if c:
            quot[k - db] = c
            for i, y in enumerate(b):
                rem[k - db + i] -= c * y
    return poly_trim(quot, p), poly_trim(rem[:db], p)


def poly_mod(a: PolyFp, b: PolyFp, p: int) -> PolyFp:
    return poly_divmod(a, b, p)[1]


def poly_monic(a: PolyFp, p: int) -> PolyFp:
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return poly_trim([x * inv for x in a], p)


def poly_gcd(a: PolyFp, b: PolyFp, p: int) -> PolyFp:
    while b:
        a, b = b, poly_mod(a, b, p)
    return poly_monic(a, p)


def poly_powmod(a: PolyFp, e: int, g: PolyFp, p: int) -> PolyFp:
    result: PolyFp = poly_mod((1,), g, p)
    base = poly_mod(a, g, p)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base, p), g, p)
        base = poly_mod(poly_mul(base, base, p), g, p)
        e >>= 1
    return result


def is_irreducible(g: Sequence[int], p: int) -> bool:
    """Rabin's test: X^(p^n) = X mod g and gcd(X^(p^(n/l)) - X, g) = 1 for primes l | n."""
    g = poly_trim(g, p)
    if not g:
        raise ValueError("the zero polynomial has no irreducibility status")
    n = len(g) - 1
    if n == 0:
        return False
    g = poly_monic(g, p)
    x = (0, 1)
    if poly_sub(poly_powmod(x, p**n, g, p), poly_mod(x, g, p), p):
        return False
    for ell in prime_factors(n):
        h = poly_sub(poly_powmod(x, p ** (n // ell), g, p), poly_mod(x, g, p), p)
        if poly_deg(poly_gcd(g, h, p)) != 0:
            return False
    return True


@functools.lru_cache(maxsize=None)
def find_irreducible(p: int, r: int) -> PolyFp:
    """Smallest monic irreducible of degree r, ordering (c0, ..., c_{r-1}) as a base-p integer."""
    if r < 1:
        raise ValueError("degree must be >= 1")
    for n in range(p**r):
        low = [(n // p**i) % p for i in range(r)]
        g = tuple(low) + (1,)
        if is_irreducible(g, p):
            return g
    raise AssertionError("no irreducible polynomial found")  # unreachable


def format_modulus(ctx: "FieldCtx") -> str:
    return "p=%d r=%d modulus=[%s]" % (ctx.p, ctx.r, ",".join(map(str, ctx.modulus)))


# -- the extension field ----------------------------------------------------

@dataclass(frozen=True)
class FieldCtx:
    """F_{p^r} = F_p[X] / (modulus). Immutable; derived tables are cached lazily."""

    p: int
    r: int
    modulus: PolyFp = field(default=())

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.p >= P_MAX:
            raise ValueError(f"p={self.p} exceeds the supported cap {P_MAX}")
        if self.r < 1:
            raise ValueError("extension degree must be >= 1")
        if not self.modulus:
            object.__setattr__(self, "modulus", find_irreducible(self.p, self.r))
        mod = tuple(int(x) for x in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != self.r + 1 or mod[-1] != 1 or poly_trim(mod, self.p) != mod:
            raise ValueError(f"modulus {list(mod)} is not monic of degree {self.r} over F_{self.p}")
        if not is_irreducible(mod, self.p):
            raise ValueError(f"modulus {list(mod)} is reducible over F_{self.p}")

    @classmethod
    def canonical(cls, p: int, r: int) -> "FieldCtx":
        return _canonical_ctx(p, r)

    @property
    def order(self) -> int:
        return self.p**self.r

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(self, (0,) * self.r)

    @property
    def one(self) -> "FieldElem":
        return self.scalar(1)

    @property
    def gen(self) -> "FieldElem":
        """The class of X (a root of the modulus)."""
        if self.r == 1:
            return self.scalar(-self.modulus[0])
        return FieldElem(self, (0, 1) + (0,) * (self.r - 2))

    def scalar(self, n: int) -> "FieldElem":
        return FieldElem(self, (n % self.p,) + (0,) * (self.r - 1))

    def elem(self, coeffs: Sequence[int]) -> "FieldElem":
        if len(coeffs) > self.r:
            raise ValueError(f"expected at most {self.r} coordinates, got {len(coeffs)}")
        c = [int(x) % self.p for x in coeffs]
        return FieldElem(self, tuple(c) + (0,) * (self.r - len(c)))

    def element(self, index: int) -> "FieldElem":
        """Element whose coordinates are the base-p digits of ``index`` (c0 least significant)."""
        return FieldElem(self, tuple((index // self.p**i) % self.p for i in range(self.r)))

    def index(self, a: "FieldElem") -> int:
        return sum(c * self.p**i for i, c in enumerate(a.coeffs))

    def elements(self) -> Iterator["FieldElem"]:
        for n in range(self.order):
            yield self.element(n)

    def random_element(self, rng: random.Random, nonzero: bool = False) -> "FieldElem":
        while True:
            a = FieldElem(self, tuple(rng.randrange(self.p) for _ in range(self.r)))
            if not (nonzero and a.is_zero()):
                return a

    # scalar kernels on coordinate tuples

    def _mul(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        p, r, g = self.p, self.r, self.modulus
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for k in range(2 * r - 2, r - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(r):
                    prod[k - r + i] -= c * g[i]
        return tuple(x % p for x in prod[:r])

    @cached_property
    def _frob_cache(self) -> dict[int, list[list[int]]]:
        return {}

    def frobenius_matrix(self, k: int) -> list[list[int]]:
        """Matrix M over F_p with coords(a^(p^k)) = M @ coords(a)."""
        k %= self.r
        cache = self._frob_cache
        if k not in cache:
            cols = [_pow_coeffs(self, _unit(self.r, i), self.p**k) for i in range(self.r)]
            cache[k] = [[cols[j][i] for j in range(self.r)] for i in range(self.r)]
        return cache[k]

    # vectorized kernels on int64 arrays of shape (..., r)

    @cached_property
    def _reduction_rows(self) -> np.ndarray:
        # row k-r holds the coordinates of X^k mod modulus, for r <= k <= 2r-2
        rows = []
        for k in range(self.r, 2 * self.r - 1):
            rows.append(poly_mod(_unit(k + 1, k), self.modulus, self.p))
        out = np.zeros((max(self.r - 1, 0), self.r), dtype=np.int64)
        for i, row in enumerate(rows):
            out[i, : len(row)] = row
        return out

    def mul_many(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p, r = self.p, self.r
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        shape = np.broadcast_shapes(a.shape, b.shape)
        prod = np.zeros(shape[:-1] + (2 * r - 1,), dtype=np.int64)
        for i in range(r):
            prod[..., i:i + r] = (prod[..., i:i + r] + a[..., i:i + 1] * b) % p
        red = self._reduction_rows
        out = prod[..., :r].copy()
        for k in range(r, 2 * r - 1):
            out = (out + prod[..., k:k + 1] * red[k - r]) % p
        return out

    def frobenius_many(self, a: np.ndarray, k: int = 1) -> np.ndarray:
        m = np.array(self.frobenius_matrix(k), dtype=np.int64)
        out = np.zeros_like(np.asarray(a, dtype=np.int64))
        for j in range(self.r):
            out = (out + a[..., j:j + 1] * m[:, j]) % self.p
        return out

    def all_elements_array(self) -> np.ndarray:
        idx = np.arange(self.order, dtype=np.int64)
        return np.stack([(idx // self.p**i) % self.p for i in range(self.r)], axis=-1)


@functools.lru_cache(maxsize=None)
def _canonical_ctx(p: int, r: int) -> FieldCtx:
    return FieldCtx(p, r)


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(n))


def _pow_coeffs(ctx: FieldCtx, a: Sequence[int], e: int) -> tuple[int, ...]:
    result = ctx.one.coeffs
    base = tuple(a)
    while e:
        if e & 1:
            result = ctx._mul(result, base)
        base = ctx._mul(base, base)
        e >>= 1
    return result


Scalar = Union["FieldElem", int]


@dataclass(frozen=True)
class FieldElem:
    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.ctx.r:
            raise ValueError(f"element needs exactly {self.ctx.r} coordinates")

    def _coerce(self, other: Scalar) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise ValueError("operands belong to different fields")
            return other
        if isinstance(other, (int, np.integer)):
            return self.ctx.scalar(int(other))
        return NotImplemented

    def __add__(self, other: Scalar) -> "FieldElem":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((x + y) % p for x, y in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "FieldElem":
        p = self.ctx.p
        return FieldElem(self.ctx, tuple(-x % p for x in self.coeffs))

    def __sub__(self, other: Scalar) -> "FieldElem":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other: Scalar) -> "FieldElem":
        return (-self) + other

    def __mul__(self, other: Scalar) -> "FieldElem":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.ctx, self.ctx._mul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "FieldElem":
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElem(self.ctx, _pow_coeffs(self.ctx, self.coeffs, e))

    def __truediv__(self, other: Scalar) -> "FieldElem":
        return self * self._coerce(other).inverse()

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def in_prime_field(self) -> bool:
        return not any(self.coeffs[1:])

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise NotInvertible("zero has no multiplicative inverse")
        return self ** (self.ctx.order - 2)

    def frobenius(self, k: int = 1) -> "FieldElem":
        m = self.ctx.frobenius_matrix(k)
        return FieldElem(self.ctx, tuple(linalg.matvec(m, self.coeffs, self.ctx.p)))

    def trace(self) -> int:
        total = self
        for k in range(1, self.ctx.r):
            total = total + self.frobenius(k)
        if not total.in_prime_field():
            raise InvariantViolation(f"trace {total.coeffs} is not in the prime field")
        return total.coeffs[0]

    def __repr__(self) -> str:
        return "[" + ",".join(map(str, self.coeffs)) + "]"


# -- functional interface ---------------------------------------------------

def _check(a: FieldElem, ctx: FieldCtx):
    if a.ctx != ctx:
        raise ValueError("element does not belong to the given field")


def ext_mul(a: FieldElem, b: FieldElem, ctx: FieldCtx) -> FieldElem:
    _check(a, ctx)
    _check(b, ctx)
    return a * b


def ext_inv(a: FieldElem, ctx: FieldCtx) -> FieldElem:
    _check(a, ctx)
    return a.inverse()


def frobenius(a: FieldElem, ctx: FieldCtx, k: int = 1) -> FieldElem:
    _check(a, ctx)
    if k < 0:
        raise ValueError("iteration count must be non-negative")
    return a.frobenius(k)


def trace(a: FieldElem, ctx: FieldCtx) -> int:
    _check(a, ctx)
    return a.trace()
