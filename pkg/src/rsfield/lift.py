"""Multivariate lift of R(f(xi)) to a polynomial over F_p in the digits.

For a basis pair (beta, delta) and f in F_q[X], the coefficients

    a[j][k] = sum_{i=1}^{r-1} phi^j(delta_i) phi^k(delta_{i+1})

give Q(Y_0..Y_{r-1}) = sum_{j,k} a[j][k] f_j(Y_j) f_k(Y_k) with f_j = phi^j(f),
and F(X_1..X_r) = Q(Y(X)) under Y_i = sum_j beta_j^(p^i) X_j. F has
coefficients in F_p and F(x) = R(f(sum x_j beta_j)) for every digit vector x.
"""
from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from . import linalg
from .basis import BasisPair, delta_sum, digits, from_digits, rs_of_digits
from .errors import BudgetExceeded, InvariantViolation
from .ff import FieldCtx, FieldElem

Exponent = tuple[int, ...]

DEFAULT_TERM_BUDGET = 10**6
DEFAULT_POINT_BUDGET = 10**7


# -- univariate polynomials over F_q ----------------------------------------

class UniPolyFq:
    """f(X) in F_q[X]; ``coeffs[e]`` is the coefficient of X^e, no trailing zeros."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable):
        cs = [c if isinstance(c, FieldElem) else ctx.scalar(int(c)) for c in coeffs]
        if any(c.ctx != ctx for c in cs):
            raise ValueError("coefficient from a different field")
        while cs and cs[-1].is_zero():
            cs.pop()
        self.ctx = ctx
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, ctx: FieldCtx, d: int, coeff=1) -> "UniPolyFq":
        return cls(ctx, [0] * d + [coeff])

    @property
    def degree(self) -> Optional[int]:
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def lead(self) -> FieldElem:
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.lead == self.ctx.one

    def __call__(self, x: FieldElem) -> FieldElem:
        acc = self.ctx.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UniPolyFq":
        return UniPolyFq(self.ctx, [e * c for e, c in enumerate(self.coeffs)][1:])

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPolyFq) and self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx, self.coeffs))

    def __repr__(self) -> str:
        return f"UniPolyFq({format_unipoly(self)})"


def twist(f: UniPolyFq, j: int) -> UniPolyFq:
    """phi^j applied coefficient-wise; the variable is fixed."""
    return UniPolyFq(f.ctx, [c.frobenius(j) for c in f.coeffs])


def random_unipoly(ctx: FieldCtx, d: int, rng: random.Random, monic: bool = False) -> UniPolyFq:
    coeffs = [ctx.random_element(rng) for _ in range(d)]
    coeffs.append(ctx.one if monic else ctx.random_element(rng, nonzero=True))
    return UniPolyFq(ctx, coeffs)


_TERM = re.compile(r"^(?:(?P<coef>-?\d+|\[[-\d,\s]*\])(?:\*(?P<x1>X(?:\^(?P<e1>\d+))?))?|(?P<x2>X(?:\^(?P<e2>\d+))?))$")


def parse_unipoly(text: str, ctx: FieldCtx) -> UniPolyFq:
    """Parse ``k*X^e + ...``; k is a decimal (F_p) or ``[c0,c1,...]`` (F_q, lowest first)."""
    acc: dict[int, FieldElem] = {}
    body = text.replace(" ", "")
    if not body:
        raise ValueError("empty polynomial")
    for term in body.split("+"):
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"cannot parse term {term!r} in {text!r}")
        coef = m.group("coef")
        if coef is None:
            c = ctx.one
        elif coef.startswith("["):
            inner = coef[1:-1].strip()
            c = ctx.elem([int(t) for t in inner.split(",")] if inner else [])
        else:
            c = ctx.scalar(int(coef))
        if m.group("x2") is not None:
            e = int(m.group("e2") or 1)
        elif m.group("x1") is not None:
            e = int(m.group("e1") or 1)
        else:
            e = 0
        acc[e] = acc.get(e, ctx.zero) + c
    deg = max(acc)
    return UniPolyFq(ctx, [acc.get(e, ctx.zero) for e in range(deg + 1)])


def format_unipoly(f: UniPolyFq) -> str:
    if not f.coeffs:
        return "0"
    parts = []
    for e in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[e]
        if c.is_zero():
            continue
        if c.in_prime_field():
            cs = str(c.coeffs[0])
        else:
            cs = "[" + ",".join(map(str, c.coeffs)) + "]"
        if e == 0:
            parts.append(cs)
            continue
        mono = "X" if e == 1 else f"X^{e}"
        parts.append(mono if cs == "1" else f"{cs}*{mono}")
    return "+".join(parts)


# -- sparse multivariate polynomials ----------------------------------------

class SparseMvPoly:
    """Polynomial in ``nvars`` variables with coefficients in ``ctx``, keyed by exponent tuples."""

    __slots__ = ("ctx", "nvars", "terms")

    def __init__(self, ctx: FieldCtx, nvars: int, terms: Mapping[Exponent, FieldElem] = ()):
        clean = {}
        for exp, c in dict(terms).items():
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} has wrong length for {nvars} variables")
            if not c.is_zero():
                clean[tuple(exp)] = c
        self.ctx = ctx
        self.nvars = nvars
        self.terms = clean

    @classmethod
    def constant(cls, ctx: FieldCtx, nvars: int, c) -> "SparseMvPoly":
        c = c if isinstance(c, FieldElem) else ctx.scalar(c)
        return cls(ctx, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, ctx: FieldCtx, nvars: int, i: int, power: int = 1) -> "SparseMvPoly":
        exp = tuple(power if k == i else 0 for k in range(nvars))
        return cls(ctx, nvars, {exp: ctx.one})

    @classmethod
    def univariate(cls, f: UniPolyFq, nvars: int, i: int) -> "SparseMvPoly":
        terms = {}
        for e, c in enumerate(f.coeffs):
            terms[tuple(e if k == i else 0 for k in range(nvars))] = c
        return cls(f.ctx, nvars, terms)

    def _same(self, other: "SparseMvPoly"):
        if self.ctx != other.ctx or self.nvars != other.nvars:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: "SparseMvPoly") -> "SparseMvPoly":
        self._same(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = out[exp] + c if exp in out else c
        return SparseMvPoly(self.ctx, self.nvars, out)

    def __neg__(self) -> "SparseMvPoly":
        return SparseMvPoly(self.ctx, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "SparseMvPoly") -> "SparseMvPoly":
        return self + (-other)

    def scale(self, c) -> "SparseMvPoly":
        return SparseMvPoly(self.ctx, self.nvars, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other) -> "SparseMvPoly":
        if not isinstance(other, SparseMvPoly):
            return self.scale(other)
        self._same(other)
        out: dict[Exponent, FieldElem] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                out[exp] = out[exp] + prod if exp in out else prod
        return SparseMvPoly(self.ctx, self.nvars, out)

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        return (isinstance(other, SparseMvPoly) and self.ctx == other.ctx
                and self.nvars == other.nvars and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ctx, self.nvars, frozenset(self.terms.items())))

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> Optional[int]:
        return max((sum(e) for e in self.terms), default=None)

    def homogeneous_part(self, deg: int) -> "SparseMvPoly":
        return SparseMvPoly(self.ctx, self.nvars, {e: c for e, c in self.terms.items() if sum(e) == deg})

    def frobenius(self, k: int = 1) -> "SparseMvPoly":
        return SparseMvPoly(self.ctx, self.nvars, {e: c.frobenius(k) for e, c in self.terms.items()})

    def __call__(self, point: Sequence) -> FieldElem:
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        pt = [v if isinstance(v, FieldElem) else self.ctx.scalar(int(v)) for v in point]
        acc = self.ctx.zero
        for exp, c in self.terms.items():
            t = c
            for v, e in zip(pt, exp):
                if e:
                    t = t * v**e
            acc = acc + t
        return acc

    def sorted_terms(self) -> list[tuple[Exponent, FieldElem]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __repr__(self) -> str:
        return f"SparseMvPoly(nvars={self.nvars}, terms={len(self.terms)}, degree={self.degree})"


def format_mvpoly(P: SparseMvPoly) -> str:
    """One term per line: ``coeff_vector : exponent_vector``, graded-lex descending."""
    lines = []
    for exp, c in P.sorted_terms():
        lines.append("[%s] : [%s]" % (",".join(map(str, c.coeffs)), ",".join(map(str, exp))))
    return "\n".join(lines)


def partial_derivative(P: SparseMvPoly, i: int) -> SparseMvPoly:
    if not 0 <= i < P.nvars:
        raise ValueError(f"variable index {i} out of range")
    out = {}
    for exp, c in P.terms.items():
        e = exp[i]
        if e % P.ctx.p == 0:
            continue
        new = exp[:i] + (e - 1,) + exp[i + 1:]
        out[new] = e * c
    return SparseMvPoly(P.ctx, P.nvars, out)


def coerce_to_prime_field(P: SparseMvPoly) -> SparseMvPoly:
    prime = FieldCtx.canonical(P.ctx.p, 1)
    out = {}
    for exp, c in P.terms.items():
        if not c.in_prime_field():
            raise InvariantViolation(f"coefficient {c} of {exp} is not in F_{P.ctx.p}")
        out[exp] = prime.scalar(c.coeffs[0])
    return SparseMvPoly(prime, P.nvars, out)


def eval_prime_many(P: SparseMvPoly, points: np.ndarray) -> np.ndarray:
    """Evaluate a polynomial with F_p coefficients at many F_p points (rows of ``points``)."""
    if P.ctx.r != 1:
        raise ValueError("coefficients must lie in the prime field")
    p = P.ctx.p
    points = np.asarray(points, dtype=np.int64) % p
    acc = np.zeros(points.shape[0], dtype=np.int64)
    for exp, c in P.terms.items():
        t = np.full(points.shape[0], c.coeffs[0], dtype=np.int64)
        for i, e in enumerate(exp):
            if e:
                t = t * _powmod_array(points[:, i], e, p) % p
        acc = (acc + t) % p
    return acc


def _powmod_array(v: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(v)
    base = v % p
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


# -- a_{j,k} and the lift ---------------------------------------------------

@dataclass(frozen=True)
class AjkMatrix:
    entries: tuple[tuple[FieldElem, ...], ...]

    def __getitem__(self, jk: tuple[int, int]) -> FieldElem:
        j, k = jk
        return self.entries[j][k]

    @property
    def r(self) -> int:
        return len(self.entries)

    def diagonal_vanishes(self) -> bool:
        return all(self.entries[j][j].is_zero() for j in range(self.r))

    def shift_symmetric(self) -> bool:
        r = self.r
        return all(self.entries[j][k].frobenius(1) == self.entries[(j + 1) % r][(k + 1) % r]
                   for j in range(r) for k in range(r))


def compute_ajk(pair: BasisPair) -> AjkMatrix:
    """a[j][k] = sum_i phi^j(delta_i) phi^k(delta_{i+1}); checks sum_j a[j][0] beta_1^(p^j) = delta_2."""
    r = pair.r
    if r < 2:
        raise ValueError("a_{j,k} needs r >= 2")
    twisted = [[d.frobenius(j) for d in pair.dual] for j in range(r)]
    entries = []
    for j in range(r):
        row = []
        for k in range(r):
            acc = pair.ctx.zero
            for i in range(r - 1):
                acc = acc + twisted[j][i] * twisted[k][i + 1]
            row.append(acc)
        entries.append(tuple(row))
    a = AjkMatrix(tuple(entries))
    b1 = pair.basis[0]
    s = pair.ctx.zero
    for j in range(r):
        s = s + a[j, 0] * b1.frobenius(j)
    if s != pair.dual[1]:
        raise InvariantViolation("sum_j a_{j,0} beta_1^(p^j) != delta_2")
    return a


def _quadratic_combination(a: AjkMatrix, parts: Sequence[SparseMvPoly]) -> SparseMvPoly:
    """sum_{j,k} a[j,k] parts[j] parts[k], as sum_j parts[j] * (sum_k a[j,k] parts[k])."""
    r = a.r
    total = None
    for j in range(r):
        inner = None
        for k in range(r):
            t = parts[k].scale(a[j, k])
            inner = t if inner is None else inner + t
        t = parts[j] * inner
        total = t if total is None else total + t
    return total


def build_Q(f: UniPolyFq, a: AjkMatrix) -> SparseMvPoly:
    if f.degree is None or f.degree < 1:
        raise ValueError("f must have degree >= 1")
    r = a.r
    parts = [SparseMvPoly.univariate(twist(f, j), r, j) for j in range(r)]
    return _quadratic_combination(a, parts)


def q2d_closed_form(d: int, a: AjkMatrix) -> SparseMvPoly:
    """sum_{j,k} a[j,k] Y_j^d Y_k^d."""
    r = a.r
    ctx = a[0, 0].ctx
    out = SparseMvPoly(ctx, r)
    for j in range(r):
        for k in range(r):
            mono = SparseMvPoly.variable(ctx, r, j, d) * SparseMvPoly.variable(ctx, r, k, d)
            out = out + mono.scale(a[j, k])
    return out


def partial_Q_closed_form(f: UniPolyFq, a: AjkMatrix, ell: int) -> SparseMvPoly:
    """f_ell'(Y_ell) * sum_k (a[k,ell] + a[ell,k]) f_k(Y_k)."""
    r = a.r
    inner = SparseMvPoly(f.ctx, r)
    for k in range(r):
        inner = inner + SparseMvPoly.univariate(twist(f, k), r, k).scale(a[k, ell] + a[ell, k])
    return SparseMvPoly.univariate(twist(f, ell).derivative(), r, ell) * inner


def coordinate_forms(pair: BasisPair) -> list[SparseMvPoly]:
    """Linear forms Y_i(X) = sum_j beta_j^(p^i) X_j for i = 0..r-1."""
    r, ctx = pair.r, pair.ctx
    forms = []
    for i in range(r):
        terms = {tuple(int(k == j) for k in range(r)): pair.basis[j].frobenius(i) for j in range(r)}
        forms.append(SparseMvPoly(ctx, r, terms))
    return forms


def coordinate_values(pair: BasisPair, x: Sequence[int]) -> list[FieldElem]:
    """y_i = sum_j beta_j^(p^i) x_j; for x in F_p^r this is phi^i(sum_j x_j beta_j)."""
    return [sum((int(xj) * pair.basis[j].frobenius(i) for j, xj in enumerate(x)), pair.ctx.zero)
            for i in range(pair.r)]


def _compose_univariate(f: UniPolyFq, form: SparseMvPoly) -> SparseMvPoly:
    acc = SparseMvPoly(form.ctx, form.nvars)
    for c in reversed(f.coeffs):
        acc = acc * form + SparseMvPoly.constant(form.ctx, form.nvars, c)
    return acc


def lift_term_estimate(d: int, r: int) -> int:
    return math.comb(d + r, r) ** 2


def expand_F(f: UniPolyFq, pair: BasisPair, budget: int = DEFAULT_TERM_BUDGET) -> SparseMvPoly:
    """sum_{j,k} a[j,k] f_j(Y_j(X)) f_k(Y_k(X)) expanded with coefficients still in F_q."""
    r = pair.r
    if r < 2:
        raise ValueError("the lift needs r >= 2")
    d = f.degree
    if d is None or d < 1:
        raise ValueError("f must have degree >= 1")
    est = lift_term_estimate(d, r)
    if est > budget:
        raise BudgetExceeded("lift expansion", est, budget)
    a = compute_ajk(pair)
    forms = coordinate_forms(pair)
    parts = [_compose_univariate(twist(f, j), forms[j]) for j in range(r)]
    return _quadratic_combination(a, parts)


def build_F(f: UniPolyFq, pair: BasisPair, budget: int = DEFAULT_TERM_BUDGET,
            check_points: int = 100, seed: int = 0) -> SparseMvPoly:
    """Expanded F(X_1..X_r) with coefficients coerced to F_p.

    Raises InvariantViolation if phi(F) != F or F(x) != Q(Y(x)) at a sampled point.
    """
    F = expand_F(f, pair, budget)
    if F.frobenius(1) != F:
        raise InvariantViolation("phi(F) != F")
    Fp = coerce_to_prime_field(F)

    Q = build_Q(f, compute_ajk(pair))
    rng = random.Random(seed)
    p, r = pair.ctx.p, pair.r
    for _ in range(check_points):
        x = [rng.randrange(p) for _ in range(r)]
        lhs = Fp(x).coeffs[0]
        rhs = Q(coordinate_values(pair, x))
        if not rhs.in_prime_field() or rhs.coeffs[0] != lhs:
            raise InvariantViolation(f"F(x) != Q(Y(x)) at x={x}")
    return Fp


def thue_morse_Q(f: UniPolyFq, pair: BasisPair, c: int) -> SparseMvPoly:
    """sum_l delta^(p^l) f_l(Y_l) - c with delta = sum_i delta_i."""
    delta = delta_sum(pair)
    if delta.is_zero():
        raise InvariantViolation("sum of the dual basis vanishes")
    r = pair.r
    out = SparseMvPoly.constant(pair.ctx, r, -c)
    for ell in range(r):
        out = out + SparseMvPoly.univariate(twist(f, ell), r, ell).scale(delta.frobenius(ell))
    return out


# -- rational points of the singular system ---------------------------------

def _points_block(n: int, base: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    return np.stack([(idx // base ** (n - 1 - i)) % base for i in range(n)], axis=-1)


def _census_prime_points(P: SparseMvPoly, c: int, chunk: int) -> list[tuple[int, ...]]:
    """Singular points with coordinates in F_p; values computed in the coefficient field."""
    ctx, n, p = P.ctx, P.nvars, P.ctx.p
    polys = [partial_derivative(P, i) for i in range(n)] + [P - SparseMvPoly.constant(ctx, n, c)]
    compiled = [[(np.array(exp), np.array(cf.coeffs, dtype=np.int64)) for exp, cf in Pi.terms.items()]
                for Pi in polys]
    maxdeg = max((P.degree or 0), 1)
    powtab = np.ones((maxdeg + 1, p), dtype=np.int64)
    for e in range(1, maxdeg + 1):
        powtab[e] = powtab[e - 1] * np.arange(p) % p
    found = []
    total = p**n
    for start in range(0, total, chunk):
        pts = _points_block(n, p, start, min(start + chunk, total))
        for terms in compiled:
            if not len(pts):
                break
            val = np.zeros((len(pts), ctx.r), dtype=np.int64)
            for exp, cf in terms:
                mono = np.ones(len(pts), dtype=np.int64)
                for i in np.nonzero(exp)[0]:
                    mono = mono * powtab[exp[i], pts[:, i]] % p
                val = (val + mono[:, None] * cf) % p
            pts = pts[~val.any(axis=1)]
        found.extend(map(tuple, pts.tolist()))
    return found


def _find_root(big: FieldCtx, g: Sequence[int]) -> np.ndarray:
    elems = big.all_elements_array()
    acc = np.zeros_like(elems)
    for c in reversed(g):
        acc = big.mul_many(acc, elems)
        acc[:, 0] = (acc[:, 0] + c) % big.p
    roots = np.nonzero(~acc.any(axis=1))[0]
    if not len(roots):
        raise InvariantViolation("defining polynomial has no root in the census field")
    return elems[roots[0]]


def census_subfield(big: FieldCtx, m: int) -> np.ndarray:
    """All elements of the degree-m subfield of ``big``, as coordinate rows."""
    p, R = big.p, big.r
    fm = big.frobenius_matrix(m)
    kernel = linalg.nullspace([[fm[i][j] - int(i == j) for j in range(R)] for i in range(R)], p, R)
    if len(kernel) != m:
        raise InvariantViolation(f"subfield of degree {m} has dimension {len(kernel)}")
    kb = np.array(kernel, dtype=np.int64)
    combos = _points_block(m, p, 0, p**m)
    return combos @ kb % p


def _census_extension_points(P: SparseMvPoly, c: int, m: int, chunk: int) -> list[tuple]:
    ctx, n, p = P.ctx, P.nvars, P.ctx.p
    big = FieldCtx.canonical(p, ctx.r * m)
    theta = _find_root(big, ctx.modulus) if ctx.r > 1 else None

    def embed(cf: FieldElem) -> np.ndarray:
        out = np.zeros(big.r, dtype=np.int64)
        out[0] = cf.coeffs[0]
        if theta is not None:
            tp = np.zeros(big.r, dtype=np.int64)
            tp[0] = 1
            for k in range(1, ctx.r):
                tp = big.mul_many(tp, theta)
                out = (out + cf.coeffs[k] * tp) % p
        return out

    sub = census_subfield(big, m)
    q = len(sub)
    polys = [partial_derivative(P, i) for i in range(n)] + [P - SparseMvPoly.constant(ctx, n, c)]
    compiled = [[(exp, embed(cf)) for exp, cf in Pi.terms.items()] for Pi in polys]
    maxdeg = max((P.degree or 0), 1)
    powtab = np.zeros((maxdeg + 1, q, big.r), dtype=np.int64)
    powtab[0, :, 0] = 1
    for e in range(1, maxdeg + 1):
        powtab[e] = big.mul_many(powtab[e - 1], sub)
    found = []
    total = q**n
    for start in range(0, total, chunk):
        pts = _points_block(n, q, start, min(start + chunk, total))
        for terms in compiled:
            if not len(pts):
                break
            val = np.zeros((len(pts), big.r), dtype=np.int64)
            for exp, cf in terms:
                mono = np.broadcast_to(cf, (len(pts), big.r))
                for i, e in enumerate(exp):
                    if e:
                        mono = big.mul_many(mono, powtab[e, pts[:, i]])
                val = (val + mono) % p
            pts = pts[~val.any(axis=1)]
        found.extend(tuple(tuple(sub[j].tolist()) for j in row) for row in pts.tolist())
    return found


def singular_points(P: SparseMvPoly, c: int, m: int = 1, budget: int = DEFAULT_POINT_BUDGET,
                    chunk: int = 1 << 15, general: bool = False) -> list[tuple]:
    """Points v in (F_{p^m})^n with P(v) = c and every partial derivative zero at v.

    Arithmetic happens in F_{p^(k*m)}, k the degree of P's coefficient field, which
    contains both the coefficients and the point coordinates. For m = 1 points are
    tuples of ints; otherwise tuples of coordinate vectors in that field.
    ``general`` forces the extension-field code path even when m = 1.
    """
    if m < 1:
        raise ValueError("extension step must be >= 1")
    p, n = P.ctx.p, P.nvars
    est = p ** (m * n)
    if est > budget:
        raise BudgetExceeded("singular census", est, budget)
    if m == 1 and not general:
        return _census_prime_points(P, c, chunk)
    field_size = p ** (P.ctx.r * m)
    if field_size > budget:
        raise BudgetExceeded("singular census field scan", field_size, budget)
    return _census_extension_points(P, c, m, chunk)


def singular_census(P: SparseMvPoly, c: int, m: int = 1, budget: int = DEFAULT_POINT_BUDGET,
                    **kw) -> int:
    return len(singular_points(P, c, m, budget, **kw))


# -- full report used by the CLI --------------------------------------------

@dataclass
class LiftReport:
    f: UniPolyFq
    pair: BasisPair
    a: AjkMatrix
    Q: SparseMvPoly
    Q2d: SparseMvPoly
    F: SparseMvPoly
    in_lemma_range: bool
    checks: dict[str, Optional[bool]] = field(default_factory=dict)


def value_identity_mismatches(F: SparseMvPoly, f: UniPolyFq, pair: BasisPair,
                              exhaustive_limit: int = 10**4, samples: int = 10**4,
                              seed: int = 0) -> int:
    """Count x with F(x) != R(f(sum x_j beta_j)), over all of F_p^r or a seeded sample."""
    p, r = pair.ctx.p, pair.r
    if p**r <= exhaustive_limit:
        xs = _points_block(r, p, 0, p**r)
    else:
        rng = np.random.default_rng(seed)
        xs = rng.integers(0, p, size=(samples, r), dtype=np.int64)
    lhs = eval_prime_many(F, xs)
    bad = 0
    for x, v in zip(xs.tolist(), lhs.tolist()):
        if rs_of_digits(digits(f(from_digits(x, pair)), pair), p) != v:
            bad += 1
    return bad


def lift_report(f: UniPolyFq, pair: BasisPair, budget: int = DEFAULT_TERM_BUDGET) -> LiftReport:
    d = f.degree
    p, r = pair.ctx.p, pair.r
    a = compute_ajk(pair)
    Q = build_Q(f, a)
    F = build_F(f, pair, budget)
    Q2d = Q.homogeneous_part(2 * d)
    in_range = 2 <= d < p
    checks: dict[str, Optional[bool]] = {
        "phi(F)=F": True,
        "delta_2 identity": True,
        "shift symmetry": a.shift_symmetric(),
        "value identity": value_identity_mismatches(F, f, pair) == 0,
        "a_{j,j}=0": a.diagonal_vanishes(),
        "Q_2d != 0": not Q2d.is_zero(),
        "deg F = 2d": (F.degree == 2 * d) if in_range else None,
        "Q_2d closed form": (Q2d == q2d_closed_form(d, a)) if f.is_monic() else None,
        "dQ/dY closed form": all(partial_derivative(Q, ell) == partial_Q_closed_form(f, a, ell)
                                 for ell in range(r)),
    }
    return LiftReport(f, pair, a, Q, Q2d, F, in_range, checks)
