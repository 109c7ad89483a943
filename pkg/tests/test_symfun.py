import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from preserver_lab import symfun
from preserver_lab.errors import CapExceeded, DegenerateInput, InvalidInput, PreconditionViolated


def sympy_schur(n, u):
    """Bialternant reduced symbolically, then evaluated; handles coincident u."""
    xs = sympy.symbols(f"x0:{len(n)}")
    num = sympy.Matrix([[x**e for e in n] for x in xs]).det()
    den = sympy.Matrix([[x**e for e in range(len(n))] for x in xs]).det()
    poly = sympy.cancel(num / den)
    return sympy.Rational(poly.subs(dict(zip(xs, [sympy.Rational(str(v)) for v in u]))))


def integral_tuples(N, top):
    return itertools.combinations(range(top + 1), N)


def test_vandermonde_examples():
    assert symfun.vandermonde((1, 2, 3)) == 2
    assert symfun.vandermonde((5,)) == 1
    assert symfun.vandermonde((0, 2, 4)) == 16


def test_gen_vdm_examples():
    assert symfun.gen_vdm_det((1, 2), (0, 2)) == 3
    assert symfun.gen_vdm_det((2, 2, 3), (0, 1, 2)) == 0
    assert symfun.gen_vdm_det((1, 4), (0, 0.5)) == pytest.approx(1.0, rel=1e-14)
    with pytest.raises(InvalidInput):
        symfun.gen_vdm_det((1, 2), (0, 1, 2))


def test_schur_printed_dimension():
    assert symfun.schur_tableaux((0, 2, 4), (1, 1, 1)) == 8
    assert symfun.schur_bialternant((0, 2, 4), (1, 1, 1)) == 8
    assert symfun.weyl_dimension((0, 2, 4)) == 8


def test_schur_factorization_value():
    # s_(0,2,4) = (u1 + u2)(u2 + u3)(u3 + u1)
    assert symfun.schur_tableaux((0, 2, 4), (1, 2, 3)) == 60 == 3 * 5 * 4


def test_schur_nmin_is_one():
    assert symfun.schur_tableaux((0, 1, 2), (Fraction(3, 7), 5, 11)) == 1


def test_schur_cap():
    with pytest.raises(CapExceeded):
        symfun.schur_tableaux((0, 10, 20, 30), (1, 2, 3, 4), cap=100)


def test_engines_match_sympy(rng):
    for n in [(0, 2, 4), (1, 3, 4), (0, 1, 5), (2, 3, 7, 8)]:
        u = [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6))) for _ in n]
        expected = sympy_schur(n, u)
        assert symfun.schur_tableaux(n, u) == Fraction(int(expected.p), int(expected.q))
        assert symfun.schur_bialternant(n, u) == Fraction(int(expected.p), int(expected.q))


def test_confluent_bialternant_matches_tableaux():
    assert symfun.schur_bialternant((1, 2, 2 + 1), (1, 1, 2)) == symfun.schur_tableaux((1, 2, 3), (1, 1, 2))
    assert symfun.schur_bialternant((0, 1, 5), (0, 0, 3)) == 27


def test_schur_symmetric_under_permutation(rng):
    for N in range(1, 5):
        for _ in range(5):
            n = tuple(sorted(rng.choice(9, N, replace=False).tolist()))
            u = [Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for _ in range(N)]
            values = {symfun.schur_tableaux(n, p) for p in itertools.permutations(u)}
            assert len(values) == 1


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 9), min_size=1, max_size=4, unique=True))
def test_weyl_dimension_counts_tableaux(n):
    n = tuple(sorted(n))
    assert symfun.weyl_dimension(n) == symfun.schur_tableaux(n, [1] * len(n))


def test_weyl_dimension_examples():
    assert symfun.weyl_dimension((0, 1, 2)) == 1
    assert symfun.weyl_dimension((0, 1, 3)) == 3


def test_principal_specialization():
    assert symfun.principal_specialization((0, 2), 2) == pytest.approx(3.0)
    assert symfun.principal_specialization((0, 1, 2), 0.3) == pytest.approx(1.0)
    assert symfun.principal_specialization((0, 2, 4), 1 + 1e-6) == pytest.approx(8.0, rel=1e-4)
    u = [0.7**i for i in range(3)]
    ratio = symfun.gen_vdm_det(u, (0, 1.5, 4)) / symfun.vandermonde(u)
    assert symfun.principal_specialization((0, 1.5, 4), 0.7) == pytest.approx(ratio, rel=1e-10)
    for bad in (1, 0, -2):
        with pytest.raises(InvalidInput):
            symfun.principal_specialization((0, 1), bad)


def test_monomial_bounds_examples():
    assert symfun.monomial_bounds((1, 1, 1), (0, 2, 4)) == (1, 8, 8)
    assert symfun.monomial_bounds((1, 2, 4), (0, 2, 4)) == (32, 256, 90)
    assert symfun.monomial_bounds((2, 3, 5), (0, 1, 2)) == (1, 1, 1)
    with pytest.raises(InvalidInput):
        symfun.monomial_bounds((2, 1), (0, 1))
    with pytest.raises(PreconditionViolated):
        symfun.monomial_bounds((1, 2), (0, 0.5))


def test_monomial_bounds_sandwich(rng):
    for i in range(2000):
        N = int(rng.integers(1, 5))
        u = np.sort(rng.uniform(0.1, 3.0, N)).tolist()
        if i % 2:
            n = np.cumsum(np.r_[rng.uniform(0, 2), rng.uniform(1, 2.5, N - 1)]).tolist()
        else:
            n = sorted(rng.choice(8, N, replace=False).tolist())
        lo, hi, val = (float(x) for x in symfun.monomial_bounds(u, n))
        assert lo * (1 - 1e-10) <= val <= hi * (1 + 1e-10)


def test_complete_homogeneous_examples():
    assert symfun.complete_homogeneous((3, 4), 0) == (1, 1)
    assert symfun.complete_homogeneous((1, -1), 2) == (1, 1)
    assert symfun.complete_homogeneous((1, 1), 2) == (3, 1)
    with pytest.raises(InvalidInput):
        symfun.complete_homogeneous((1, 1), 3)


def test_complete_homogeneous_matches_monomial_sum(rng):
    for _ in range(50):
        u = rng.uniform(-2, 2, int(rng.integers(1, 4)))
        k = 2 * int(rng.integers(0, 3))
        brute = sum(math.prod(c) for c in itertools.combinations_with_replacement(u, k))
        assert float(symfun.complete_homogeneous(u, k)[0]) == pytest.approx(brute, abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=5), st.integers(0, 4))
def test_hunter_bound(u, r):
    value, bound = (float(x) for x in symfun.complete_homogeneous(u, 2 * r))
    assert value >= bound - 1e-12 * max(1.0, abs(bound))


def _sign_change_found(n, rng, draws=4000):
    N = len(n)
    signs = set()
    for _ in range(draws):
        u = rng.uniform(-2, 2, N)
        v = float(symfun.schur_bialternant(n, [Fraction(x) for x in u]))
        if v != 0:
            signs.add(v > 0)
        if len(signs) == 2:
            return True
    return False


def test_nonvanishing_classification(rng):
    # positive away from the origin exactly for (0, ..., N-2, N-1+2r)
    for n in [(0, 1), (0, 3), (0, 1, 2), (0, 1, 4), (0, 1, 6)]:
        for _ in range(500):
            u = [Fraction(x) for x in rng.uniform(-2, 2, len(n))]
            assert symfun.schur_bialternant(n, u) > 0
    for n in [(0, 2), (1, 2), (0, 2, 3), (0, 1, 3), (1, 2, 4)]:
        assert _sign_change_found(n, rng)


def test_schur_ratio_examples():
    assert symfun.schur_ratio((1, 2, 3), (0, 1, 4), (0, 1, 4)) == pytest.approx(1.0)
    assert symfun.schur_ratio((1, 2), (0, 2), (0, 1)) == pytest.approx(3.0)
    assert symfun.schur_ratio((1, 1 + 1e-6), (0, 2), (0, 1)) == pytest.approx(2.0, rel=1e-5)
    with pytest.raises(DegenerateInput):
        symfun.schur_ratio((1, 1 + 1e-12), (0, 2), (0, 1))
