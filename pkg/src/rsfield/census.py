"""Exhaustive distribution of R(f(xi)) and T(f(xi)) over F_q, with deviation reports.

The main path enumerates xi by an odometer over its digit vector
(x_1 slowest, x_r fastest), builds xi = x @ B, evaluates f by Horner on whole
blocks at once, extracts digits with the trace matrix and tallies. Blocks are
contiguous index ranges, so any split across workers gives the same counts.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .basis import (BasisPair, dual_basis, from_digits, polynomial_basis,
                    random_basis, rs_of_digits, special_delta)
from .errors import BudgetExceeded
from .ff import FieldCtx, is_prime
from .lift import UniPolyFq, format_unipoly, parse_unipoly, random_unipoly

DEFAULT_EVAL_BUDGET = 10**8
BLOCK = 1 << 14

KINDS = ("R", "T")
BASIS_POLICIES = ("polynomial", "special-dual", "seeded-random")

CSV_HEADER = ["p", "r", "d", "kind", "basis_policy", "f_serialized", "c", "count",
              "main_term", "abs_deviation", "h", "normalized"]


@dataclass
class DistReport:
    p: int
    r: int
    d: int
    f: UniPolyFq
    kind: str
    counts: list[int]
    basis_policy: str = "polynomial"

    def __post_init__(self):
        if sum(self.counts) != self.p**self.r:
            raise AssertionError(f"counts sum to {sum(self.counts)}, expected {self.p ** self.r}")

    @property
    def main_term(self) -> int:
        return self.p ** (self.r - 1)

    def max_abs_deviation(self) -> int:
        return max(abs(n - self.main_term) for n in self.counts)

    def relative_deviation(self) -> float:
        return self.max_abs_deviation() / self.main_term


# -- enumeration ------------------------------------------------------------

def _block_counts(p, r, modulus, basis_rows, digit_rows, fcoeffs, kind, start, stop):
    """Histogram of g(f(xi)) for odometer indices in [start, stop). Top-level for pickling."""
    ctx = FieldCtx(p, r, tuple(modulus))
    B = np.asarray(basis_rows, dtype=np.int64)
    D = np.asarray(digit_rows, dtype=np.int64)
    F = np.asarray(fcoeffs, dtype=np.int64)
    hist = np.zeros(p, dtype=np.int64)
    for lo in range(start, stop, BLOCK):
        hi = min(lo + BLOCK, stop)
        idx = np.arange(lo, hi, dtype=np.int64)
        x = np.stack([(idx // p ** (r - 1 - i)) % p for i in range(r)], axis=-1)
        xi = np.zeros((len(idx), r), dtype=np.int64)
        for j in range(r):
            xi = (xi + x[:, j:j + 1] * B[j]) % p
        val = np.broadcast_to(F[-1], xi.shape).copy()
        for c in F[-2::-1]:
            val = ctx.mul_many(val, xi)
            val = (val + c) % p
        dig = np.zeros_like(val)
        for k in range(r):
            dig = (dig + val[:, k:k + 1] * D[:, k]) % p
        if kind == "R":
            g = np.zeros(len(idx), dtype=np.int64)
            for i in range(r - 1):
                g = (g + dig[:, i] * dig[:, i + 1]) % p
        else:
            g = dig.sum(axis=1) % p
        hist += np.bincount(g, minlength=p)
    return hist


def _split(total: int, jobs: int) -> list[tuple[int, int]]:
    step = -(-total // jobs)
    return [(s, min(s + step, total)) for s in range(0, total, step)]


def distribution(f: UniPolyFq, pair: BasisPair, kind: str = "R", jobs: int = 1,
                 budget: int = DEFAULT_EVAL_BUDGET, basis_policy: str = "polynomial") -> DistReport:
    """counts[c] = #{xi in F_q : g(f(xi)) = c}, g = R or T, by full enumeration."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    ctx = pair.ctx
    p, r = ctx.p, ctx.r
    if f.ctx != ctx:
        raise ValueError("f and the basis live in different fields")
    if f.degree is None:
        raise ValueError("f must be nonzero")
    if kind == "R" and r < 2:
        raise ValueError("the Rudin-Shapiro function needs r >= 2")
    total = p**r
    if total > budget:
        raise BudgetExceeded("distribution enumeration", total, budget)
    args = (p, r, ctx.modulus, pair.basis_matrix.tolist(), pair.digit_matrix.tolist(),
            [list(c.coeffs) for c in f.coeffs], kind)
    if jobs <= 1:
        hist = _block_counts(*args, 0, total)
    else:
        ranges = _split(total, jobs)
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_block_counts, *zip(*[args + rg for rg in ranges])))
        hist = np.sum(parts, axis=0)
    return DistReport(p, r, f.degree, f, kind, [int(n) for n in hist], basis_policy)


def distribution_oracle(f: UniPolyFq, pair: BasisPair, kind: str = "R") -> DistReport:
    """Independent scalar path: loop over digit vectors, xi = sum x_j beta_j,
    f(xi) as a sum of powers, digits as traces."""
    ctx = pair.ctx
    p, r = ctx.p, ctx.r
    counts = [0] * p
    for x in itertools.product(range(p), repeat=r):
        xi = from_digits(x, pair)
        v = ctx.zero
        for e, c in enumerate(f.coeffs):
            if not c.is_zero():
                v = v + c * xi**e
        dig = [(dl * v).trace() for dl in pair.dual]
        g = rs_of_digits(dig, p) if kind == "R" else sum(dig) % p
        counts[g] += 1
    return DistReport(p, r, f.degree, f, kind, counts)


# -- the permutation case ---------------------------------------------------

def permutation_formula(p: int, r: int, c: int) -> int:
    """Number of x in F_p^r with x_1 x_2 + ... + x_{r-1} x_r = c."""
    if r < 2:
        raise ValueError("r must be >= 2")
    if c % p:
        return p ** (r - 1) - p ** ((r - 1) // 2)
    return p ** (r - 1) + p ** ((r + 1) // 2) - p ** ((r - 1) // 2)


def chain_form_counts(p: int, r: int) -> list[int]:
    """Brute-force histogram of x_1 x_2 + ... + x_{r-1} x_r over F_p^r."""
    idx = np.arange(p**r, dtype=np.int64)
    x = [(idx // p ** (r - 1 - i)) % p for i in range(r)]
    s = np.zeros_like(idx)
    for i in range(r - 1):
        s = (s + x[i] * x[i + 1]) % p
    return [int(n) for n in np.bincount(s, minlength=p)]


class RecursionCheck(NamedTuple):
    ok: bool
    counterexample: Optional[tuple[int, int, str]] = None  # (r, c, which check failed)


def recursion_check(p: int, r_max: int, budget: int = 10**7) -> RecursionCheck:
    """N_r(c) = p N_{r-2}(c) + (p-1) p^(r-2) for 4 <= r <= r_max, plus the closed form
    against brute force wherever p^r fits the budget."""
    if r_max < 4:
        raise ValueError("r_max must be >= 4")
    for r in range(4, r_max + 1):
        for c in range(p):
            if permutation_formula(p, r, c) != p * permutation_formula(p, r - 2, c) + (p - 1) * p ** (r - 2):
                return RecursionCheck(False, (r, c, "recursion"))
    for r in range(2, r_max + 1):
        if p**r > budget:
            continue
        brute = chain_form_counts(p, r)
        for c in range(p):
            if brute[c] != permutation_formula(p, r, c):
                return RecursionCheck(False, (r, c, "brute force"))
    return RecursionCheck(True)


# -- deviation reports ------------------------------------------------------

def h_exponent(r: int, c: int) -> Fraction:
    even = r % 2 == 0
    if c:
        return Fraction(3, 4) if even else Fraction(1, 2)
    return Fraction(1, 4) if even else Fraction(0)


@dataclass
class DeviationRow:
    c: int
    count: int
    main_term: int
    h: Fraction
    normalized: float

    @property
    def abs_deviation(self) -> int:
        return abs(self.count - self.main_term)


def deviation_exponent(r: int, c: int) -> Fraction:
    """(3r+1)/4 - h_{r,c}."""
    return Fraction(3 * r + 1, 4) - h_exponent(r, c)


def hk_report(report: DistReport, d: Optional[int] = None) -> list[DeviationRow]:
    """Per-class |count - p^(r-1)| / p^((3r+1)/4 - h_{r,c}); the constant is not estimated."""
    if report.kind != "R":
        raise ValueError("hk_report applies to Rudin-Shapiro distributions")
    p, r = report.p, report.r
    rows = []
    for c, n in enumerate(report.counts):
        dev = abs(n - report.main_term)
        rows.append(DeviationRow(c, n, report.main_term, h_exponent(r, c),
                                 dev / p ** float(deviation_exponent(r, c))))
    return rows


def ds13_check(report: DistReport, d: Optional[int] = None) -> bool:
    """max_c |count - p^(r-1)| <= (d-1) p^(r/2), decided in exact integers."""
    if report.kind != "T":
        raise ValueError("ds13_check applies to Thue-Morse distributions")
    d = report.d if d is None else d
    if math.gcd(d, report.p) != 1:
        raise ValueError(f"bound inapplicable: gcd(d={d}, p={report.p}) != 1")
    dev = report.max_abs_deviation()
    return dev * dev <= (d - 1) ** 2 * report.p**report.r


# -- sweeps -----------------------------------------------------------------

def make_pair(ctx: FieldCtx, policy: str, seed: int = 0) -> BasisPair:
    if policy == "polynomial":
        return dual_basis(polynomial_basis(ctx))
    if policy == "special-dual":
        return special_delta(ctx)
    if policy == "seeded-random":
        return dual_basis(random_basis(ctx, random.Random(seed)))
    raise ValueError(f"unknown basis policy {policy!r}")


def make_f(ctx: FieldCtx, d: int, policy: str, seed: int = 0, text: Optional[str] = None) -> UniPolyFq:
    if policy == "monomial":
        return UniPolyFq.monomial(ctx, d)
    if policy == "random":
        return random_unipoly(ctx, d, random.Random(seed))
    if policy == "user":
        if text is None:
            raise ValueError("user f policy needs a polynomial")
        return parse_unipoly(text, ctx)
    raise ValueError(f"unknown f policy {policy!r}")


@dataclass
class SweepResult:
    reports: list[DistReport] = field(default_factory=list)
    trend_ok: Optional[bool] = None

    @property
    def relative_deviations(self) -> list[float]:
        return [rep.relative_deviation() for rep in self.reports]


def sweep(d: int, r: int, kind: str, p_list: Sequence[int], basis_policy: str = "polynomial",
          f_policy: str = "monomial", seed: int = 0, f_text: Optional[str] = None,
          jobs: int = 1, budget: int = DEFAULT_EVAL_BUDGET) -> SweepResult:
    """One distribution per prime; the trend verdict compares the largest and smallest p
    and is only given when r >= 4 and the primes span a factor of at least 4."""
    for p in p_list:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
    out = SweepResult()
    for p in sorted(p_list):
        ctx = FieldCtx.canonical(p, r)
        pair = make_pair(ctx, basis_policy, seed)
        f = make_f(ctx, d, f_policy, seed, f_text)
        out.reports.append(distribution(f, pair, kind, jobs, budget, basis_policy))
    if r >= 4 and len(p_list) > 1 and max(p_list) >= 4 * min(p_list):
        rel = out.relative_deviations
        out.trend_ok = rel[-1] < rel[0]
    return out


# -- CSV --------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    return repr(float(x))


def report_rows(report: DistReport) -> list[list]:
    f_text = format_unipoly(report.f)
    rows = []
    devs = hk_report(report) if report.kind == "R" else None
    for c, n in enumerate(report.counts):
        dev = abs(n - report.main_term)
        h = norm = ""
        if devs is not None:
            h = str(devs[c].h)
            norm = _fmt_float(devs[c].normalized)
        rows.append([report.p, report.r, report.d, report.kind, report.basis_policy, f_text,
                     c, n, report.main_term, dev, h, norm])
    return rows


def rows_to_csv(rows: Sequence[Sequence], comment: Optional[str] = None) -> str:
    buf = io.StringIO()
    if comment is not None:
        buf.write(f"# {comment}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(rows)
    return buf.getvalue()


def to_csv(reports: Sequence[DistReport], comment: Optional[str] = None) -> str:
    """Header plus one row per (p, c), ascending p then c."""
    rows = []
    for rep in sorted(reports, key=lambda t: t.p):
        rows.extend(report_rows(rep))
    return rows_to_csv(rows, comment)
