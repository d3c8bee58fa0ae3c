"""Ordered bases of F_{p^r} over F_p, their dual bases, and digit functions.

Digits are 0-based tuples internally: ``digits(xi)[i]`` is the coordinate
paired with the (i+1)-th basis element, so ``x_1`` pairs with ``beta_1``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import linalg
from .errors import DegenerateConstruction, InvariantViolation
from .ff import FieldCtx, FieldElem

DigitVector = tuple[int, ...]


@dataclass(frozen=True)
class OrderedBasis:
    elems: tuple[FieldElem, ...]

    def __post_init__(self):
        elems = tuple(self.elems)
        object.__setattr__(self, "elems", elems)
        if not elems:
            raise ValueError("empty basis")
        ctx = elems[0].ctx
        if any(e.ctx != ctx for e in elems):
            raise ValueError("basis elements live in different fields")
        if len(elems) != ctx.r:
            raise ValueError(f"a basis of F_{{{ctx.p}^{ctx.r}}} needs {ctx.r} elements, got {len(elems)}")
        if linalg.rank(self.matrix(), ctx.p) != ctx.r:
            raise ValueError("not a basis: elements are linearly dependent over F_p")

    @property
    def ctx(self) -> FieldCtx:
        return self.elems[0].ctx

    def matrix(self) -> list[list[int]]:
        """Row j holds the polynomial-basis coordinates of the (j+1)-th element."""
        return [list(e.coeffs) for e in self.elems]

    def __len__(self):
        return len(self.elems)

    def __getitem__(self, i):
        return self.elems[i]

    def __iter__(self):
        return iter(self.elems)


@dataclass(frozen=True)
class BasisPair:
    """An ordered basis (beta) together with its dual (delta): Tr(delta_i beta_j) = [i == j]."""

    basis: OrderedBasis
    dual: OrderedBasis

    def __post_init__(self):
        if self.basis.ctx != self.dual.ctx:
            raise ValueError("basis and dual live in different fields")
        r = self.ctx.r
        for i in range(r):
            for j in range(r):
                if (self.dual[i] * self.basis[j]).trace() != int(i == j):
                    raise InvariantViolation(f"Tr(delta_{i + 1} beta_{j + 1}) != [{i + 1} == {j + 1}]")

    @property
    def ctx(self) -> FieldCtx:
        return self.basis.ctx

    @property
    def r(self) -> int:
        return self.ctx.r

    @cached_property
    def digit_matrix(self) -> np.ndarray:
        """D with digits(xi) = D @ coords(xi); D[i, k] = Tr(delta_i a^k)."""
        ctx = self.ctx
        powers = [ctx.gen**k for k in range(ctx.r)]
        return np.array([[(d * a).trace() for a in powers] for d in self.dual], dtype=np.int64)

    @cached_property
    def basis_matrix(self) -> np.ndarray:
        """B with coords(sum x_j beta_j) = x @ B."""
        return np.array(self.basis.matrix(), dtype=np.int64)


def polynomial_basis(ctx: FieldCtx) -> OrderedBasis:
    a = ctx.gen
    return OrderedBasis(tuple(a**k for k in range(ctx.r)))


def random_basis(ctx: FieldCtx, rng: random.Random) -> OrderedBasis:
    """Rejection-sample r elements until they are independent."""
    while True:
        elems = tuple(ctx.random_element(rng) for _ in range(ctx.r))
        if linalg.rank([list(e.coeffs) for e in elems], ctx.p) == ctx.r:
            return OrderedBasis(elems)


def dual_basis(basis: OrderedBasis) -> BasisPair:
    """Invert the trace Gram matrix G_ij = Tr(beta_i beta_j); delta_i = sum_j (G^-1)_ij beta_j."""
    ctx = basis.ctx
    r = ctx.r
    gram = [[(basis[i] * basis[j]).trace() for j in range(r)] for i in range(r)]
    try:
        ginv = linalg.inverse(gram, ctx.p)
    except ValueError:
        raise ValueError("not a basis: singular trace Gram matrix") from None
    dual = []
    for i in range(r):
        acc = ctx.zero
        for j in range(r):
            acc = acc + ginv[i][j] * basis[j]
        dual.append(acc)
    return BasisPair(basis, OrderedBasis(tuple(dual)))


def digits(xi: FieldElem, pair: BasisPair) -> DigitVector:
    return tuple((d * xi).trace() for d in pair.dual)


def from_digits(x: Sequence[int], pair: BasisPair) -> FieldElem:
    if len(x) != pair.r:
        raise ValueError(f"expected {pair.r} digits, got {len(x)}")
    acc = pair.ctx.zero
    for xj, bj in zip(x, pair.basis):
        acc = acc + int(xj) * bj
    return acc


def rs_of_digits(x: Sequence[int], p: int) -> int:
    return sum(x[i] * x[i + 1] for i in range(len(x) - 1)) % p


def rudin_shapiro(xi: FieldElem, pair: BasisPair) -> int:
    """R(xi) = x_1 x_2 + ... + x_{r-1} x_r mod p."""
    if pair.r < 2:
        raise ValueError("the Rudin-Shapiro function needs r >= 2")
    return rs_of_digits(digits(xi, pair), pair.ctx.p)


def thue_morse(xi: FieldElem, pair: BasisPair) -> int:
    """T(xi) = x_1 + ... + x_r mod p."""
    return sum(digits(xi, pair)) % pair.ctx.p


def delta_sum(pair: BasisPair) -> FieldElem:
    acc = pair.ctx.zero
    for d in pair.dual:
        acc = acc + d
    return acc


def special_delta_elems(ctx: FieldCtx) -> tuple[FieldElem, ...]:
    """The r-tuple with sum_i delta_i delta_{i+1} = 0, built from powers of the generator.

    delta_{2i+1} = a^(r-1-i) and delta_{2i+2} = a^i for the leading entries;
    delta_r closes the alternating sum so every product cancels.
    """
    r = ctx.r
    if r < 4:
        raise ValueError("the construction needs r >= 4")
    a = ctx.gen
    delta: list = [None] * r
    for i in range(r // 2):
        delta[2 * i] = a ** (r - 1 - i)
    for i in range((r - 1) // 2):
        delta[2 * i + 1] = a**i
    if r % 2 == 0:
        h = r // 2
        delta[r - 1] = -((h - 1) * (a ** (h - 1) + a ** (h - 2)))
    else:
        delta[r - 1] = -(((r - 1) // 2) * a ** ((r + 1) // 2) + ((r - 3) // 2) * a ** ((r - 1) // 2))
    return tuple(delta)


def special_delta(ctx: FieldCtx) -> BasisPair:
    """BasisPair whose dual is the special delta tuple and whose basis is its dual."""
    delta = special_delta_elems(ctx)
    if linalg.rank([list(d.coeffs) for d in delta], ctx.p) != ctx.r:
        raise DegenerateConstruction(f"construction degenerate for p={ctx.p}, r={ctx.r}")
    s = ctx.zero
    for i in range(ctx.r - 1):
        s = s + delta[i] * delta[i + 1]
    if not s.is_zero():
        raise InvariantViolation("sum delta_i delta_{i+1} does not vanish")
    d = OrderedBasis(delta)
    beta = dual_basis(d).dual
    return BasisPair(beta, d)


def format_basis(b: OrderedBasis) -> str:
    return "[" + ",".join("[" + ",".join(map(str, e.coeffs)) + "]" for e in b) + "]"
