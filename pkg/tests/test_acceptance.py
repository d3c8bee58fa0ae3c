"""Acceptance criteria 1-10, one marked group per criterion (see conftest for the summary).

Tolerances are exact (0) everywhere except criterion 8, which is an ordering
property of measured deviations, not an equality.
"""
import itertools
import math
import random

import pytest

from rsfield import linalg
from rsfield.basis import dual_basis, polynomial_basis, random_basis, special_delta, special_delta_elems
from rsfield.census import (distribution, distribution_oracle, ds13_check, hk_report, make_f, make_pair,
                            permutation_formula, recursion_check, sweep)
from rsfield.cli import main
from rsfield.ff import FieldCtx, is_prime
from rsfield.lift import (UniPolyFq, build_F, build_Q, compute_ajk, expand_F, q2d_closed_form,
                          random_unipoly, singular_census, thue_morse_Q)

crit = pytest.mark.criterion


# -- 1 ----------------------------------------------------------------------

C1_GRID = [(p, r) for p in (2, 3, 5, 7) for r in range(2, 7) if p**r <= 10**6]


@crit(1, "f = X counts equal the closed form, p in {2,3,5,7}, r in 2..6")
@pytest.mark.parametrize("p,r", C1_GRID)
def test_c1_permutation_exactness(p, r):
    k = FieldCtx.canonical(p, r)
    rep = distribution(UniPolyFq.monomial(k, 1), dual_basis(polynomial_basis(k)), "R")
    assert rep.counts == [permutation_formula(p, r, c) for c in range(p)]


# -- 2 ----------------------------------------------------------------------

@crit(2, "recursion holds symbolically and against enumeration, p in {2,3,5}, r <= 6")
@pytest.mark.parametrize("p", [2, 3, 5])
def test_c2_recursion(p):
    res = recursion_check(p, 6)
    assert res.ok, res.counterexample


# -- 3 and 4 ----------------------------------------------------------------

LIFT_FIELDS = [(3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)]
LIFT_FS = ["X^2", "X^3", "random-2", "random-3"]


def lift_case(p, r, name):
    k = FieldCtx.canonical(p, r)
    pair = dual_basis(random_basis(k, random.Random(1000 * p + r)))
    if name.startswith("random"):
        d = int(name[-1])
        f = random_unipoly(k, d, random.Random(p * r * d))
        assert any(not c.in_prime_field() for c in f.coeffs)
    else:
        f = UniPolyFq.monomial(k, int(name[-1]))
    return k, pair, f


def r_of_f(f, pair, x):
    """R(f(xi)) at xi = sum x_j beta_j, digits as traces against the dual basis."""
    xi = sum((xj * b for xj, b in zip(x, pair.basis)), pair.ctx.zero)
    y = f(xi)
    digs = [(d * y).trace() for d in pair.dual]
    return sum(digs[i] * digs[i + 1] for i in range(len(digs) - 1)) % pair.ctx.p


@crit(3, "F(digits(xi)) = R(f(xi)) exhaustively, zero mismatches")
@pytest.mark.parametrize("p,r", LIFT_FIELDS)
@pytest.mark.parametrize("name", LIFT_FS)
def test_c3_lift_identity(p, r, name):
    k, pair, f = lift_case(p, r, name)
    F = build_F(f, pair)
    mismatches = sum(1 for x in itertools.product(range(p), repeat=r)
                     if F(x).coeffs[0] != r_of_f(f, pair, x))
    assert mismatches == 0


@crit(4, "phi(F) = F, deg F = 2d for 2 <= d < p, Q_2d closed form for monic f")
@pytest.mark.parametrize("p,r", LIFT_FIELDS)
@pytest.mark.parametrize("name", LIFT_FS)
def test_c4_frobenius_and_degree(p, r, name):
    k, pair, f = lift_case(p, r, name)
    d = f.degree
    F = expand_F(f, pair)
    assert F.frobenius(1) == F
    assert all(c.in_prime_field() for c in F.terms.values())
    if 2 <= d < p:
        assert F.degree == 2 * d
    if f.is_monic():
        a = compute_ajk(pair)
        assert build_Q(f, a).homogeneous_part(2 * d) == q2d_closed_form(d, a)


# -- 5 ----------------------------------------------------------------------

@crit(5, "delta_2 identity and Frobenius shift symmetry of a_{j,k}, 50 random bases each")
@pytest.mark.parametrize("p,r", [(3, 4), (5, 3), (7, 2), (11, 2)])
def test_c5_ajk_identities(p, r):
    k = FieldCtx.canonical(p, r)
    for seed in range(50):
        pair = dual_basis(random_basis(k, random.Random(seed)))
        a = compute_ajk(pair)
        s = k.zero
        for j in range(r):
            s = s + a[j, 0] * pair.basis[0].frobenius(j)
        assert s == pair.dual[1]
        for j in range(r):
            for kk in range(r):
                assert a[j, kk].frobenius(1) == a[(j + 1) % r, (kk + 1) % r]


# -- 6 ----------------------------------------------------------------------

@crit(6, "special delta: sum delta_i delta_{i+1} = 0, a_{j,j} = 0, census(Q_2d) >= r(p-1)")
@pytest.mark.parametrize("r", [4, 5, 6])
@pytest.mark.parametrize("p", [7, 11, 13])
def test_c6_special_construction(p, r):
    k = FieldCtx.canonical(p, r)
    delta = special_delta_elems(k)
    s = k.zero
    for i in range(r - 1):
        s = s + delta[i] * delta[i + 1]
    assert s.is_zero()
    assert linalg.rank([list(x.coeffs) for x in delta], p) == r
    pair = special_delta(k)
    a = compute_ajk(pair)
    assert all(a[j, j].is_zero() for j in range(r))
    Q2d = build_Q(UniPolyFq.monomial(k, 2), a).homogeneous_part(4)
    assert singular_census(Q2d, 0, m=1) >= r * (p - 1)


# -- 7 ----------------------------------------------------------------------

@crit(7, "Thue-Morse monomial census = 0 for c != 0; ds13 bound on every p^r <= 1e5")
@pytest.mark.parametrize("p,r,d", [(5, 3, 2), (7, 2, 3), (7, 3, 2)])
def test_c7_thue_morse_census(p, r, d):
    k = FieldCtx.canonical(p, r)
    pair = dual_basis(polynomial_basis(k))
    for c in range(1, p):
        assert singular_census(thue_morse_Q(UniPolyFq.monomial(k, d), pair, c), 0, m=1) == 0


C7_GRID = [(p, r) for r in range(2, 17) for p in range(2, 317) if is_prime(p) and p**r <= 10**5]


@crit(7, "Thue-Morse monomial census = 0 for c != 0; ds13 bound on every p^r <= 1e5")
def test_c7_ds13_bound():
    runs = 0
    for p, r in C7_GRID:
        k = FieldCtx.canonical(p, r)
        pair = dual_basis(polynomial_basis(k))
        fs = [(2, UniPolyFq.monomial(k, 2)), (3, UniPolyFq.monomial(k, 3)),
              (3, make_f(k, 3, "random", seed=100 * p + r))]
        for d, f in fs:
            if math.gcd(d, p) != 1:
                continue
            rep = distribution(f, pair, "T")
            assert ds13_check(rep), (p, r, d, rep.counts)
            runs += 1
    assert runs == 291


# -- 8 ----------------------------------------------------------------------

@crit(8, "relative deviation at p=13 < p=3; normalized max does not grow from p=7 to 13")
def test_c8_trend():
    res = sweep(2, 4, "R", [3, 5, 7, 11, 13])
    rel = {rep.p: rep.relative_deviation() for rep in res.reports}
    assert all(v > 0 for v in rel.values())
    assert rel[13] < rel[3]
    peak = {rep.p: max(row.normalized for row in hk_report(rep)) for rep in res.reports}
    assert max(peak[11], peak[13]) <= peak[7]


# -- 9 ----------------------------------------------------------------------

C9_CONFIGS = list(range(20))


@crit(9, "field enumeration equals the digit-vector oracle on 20 seeded configurations")
@pytest.mark.parametrize("seed", C9_CONFIGS)
def test_c9_oracle_equivalence(seed):
    rng = random.Random(seed)
    p, r = rng.choice([(2, 6), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2), (7, 3), (11, 2)])
    k = FieldCtx.canonical(p, r)
    policy = rng.choice(["polynomial", "seeded-random"])
    pair = make_pair(k, policy, seed)
    f = make_f(k, rng.randint(1, 5), rng.choice(["monomial", "random"]), seed)
    kind = "R" if seed % 2 == 0 else "T"
    assert distribution(f, pair, kind).counts == distribution_oracle(f, pair, kind).counts


# -- 10 ---------------------------------------------------------------------

@crit(10, "1-worker and 8-worker CSV for p=13, r=4, f=X^2 are byte-identical")
def test_c10_parallel_determinism(tmp_path):
    out = tmp_path / "count.csv"
    argv = ["count", "--p", "13", "--r", "4", "--f", "X^2", "--kind", "R", "--out", str(out)]
    assert main(argv + ["--jobs", "1"]) == 0
    one = out.read_bytes()
    out.unlink()
    assert main(argv + ["--jobs", "8"]) == 0
    assert out.read_bytes() == one
