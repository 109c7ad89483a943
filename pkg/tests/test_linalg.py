import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from preserver_lab import linalg
from preserver_lab.errors import InvalidInput


def brute_det(a):
    """Cofactor expansion; independent of both elimination paths."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    return sum((-1) ** j * Fraction(a[0][j]) * brute_det([r[:j] + r[j + 1:] for r in a[1:]]) for j in range(n))


def all_minors_nonneg(a, tol):
    n = a.shape[0]
    for k in range(1, n + 1):
        for r in itertools.combinations(range(n), k):
            for c in itertools.combinations(range(n), k):
                if np.linalg.det(a[np.ix_(r, c)]) < -tol:
                    return False
    return True


def test_eigenvalues_of_2x2():
    spectrum = linalg.sym_eigen(np.array([[2.0, 3.0], [3.0, 5.0]]))
    expected = np.array([(7 - np.sqrt(45)) / 2, (7 + np.sqrt(45)) / 2])
    np.testing.assert_allclose(spectrum.eigenvalues, expected, rtol=1e-12)


def test_jacobi_matches_numpy(rng):
    for n in range(1, 7):
        g = rng.standard_normal((n, n))
        a = g + g.T
        np.testing.assert_allclose(linalg.sym_eigen(a).eigenvalues, np.linalg.eigvalsh(a), atol=1e-10)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_trace_equals_eigenvalue_sum(n, seed):
    g = np.random.default_rng(seed).uniform(-10, 10, (n, n))
    a = g + g.T
    tr = np.trace(a)
    assert abs(linalg.sym_eigen(a).eigenvalues.sum() - tr) <= 1e-10 * max(1.0, abs(tr))


def test_hilbert_determinant_exact():
    h = [[Fraction(1, i + j + 1) for j in range(3)] for i in range(3)]
    assert linalg.det_exact(h) == Fraction(1, 2160) == brute_det(h)


def test_det_exact_matches_det_lu(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 7))
        a = rng.integers(-9, 10, (n, n)).tolist()
        exact = linalg.det_exact(a)
        assert abs(linalg.det_lu(np.array(a, dtype=float)) - float(exact)) <= 1e-9 * max(1.0, abs(float(exact)))


def test_det_exact_matches_cofactor(rng):
    for _ in range(100):
        n = int(rng.integers(1, 5))
        a = rng.integers(-9, 10, (n, n)).tolist()
        assert linalg.det_exact(a) == brute_det(a)


def test_is_psd_boundary():
    assert linalg.is_psd(np.ones((3, 3)))[0]
    assert not linalg.is_psd(np.array([[1.0, 2.0], [2.0, 1.0]]))[0]


def test_minor_is_one_based():
    a = [[1, 2, 3], [4, 5, 6], [7, 8, 10]]
    assert linalg.minor(a, (1, 3), (2, 3)) == [[2, 3], [8, 10]]
    with pytest.raises(InvalidInput):
        linalg.minor(a, (0, 1), (1, 2))


def test_strict_tp_of_generalized_vandermonde(rng):
    for _ in range(200):
        N = int(rng.integers(1, 6))
        u = np.sort(rng.uniform(0.5, 3.0, N)) + np.arange(N) * 0.1
        n = np.cumsum(rng.uniform(0.3, 1.5, N)) - 0.3
        a = u[:, None] ** n[None, :]
        assert linalg.is_strictly_tp(a)


def test_strict_tp_rejects_negative_minor():
    assert not linalg.is_strictly_tp(np.array([[1.0, 2.0], [3.0, 4.0]]))


def test_tn_hankel_agrees_with_brute_force(rng):
    for _ in range(1000):
        N = int(rng.integers(1, 5))
        if rng.random() < 0.5:
            # moments of a positive measure on [0, inf): always TN
            pts, w = rng.uniform(0, 2, 3), rng.uniform(0, 1, 3)
            m = [float(np.dot(w, pts**k)) for k in range(2 * N - 1)]
        else:
            m = rng.uniform(-0.5, 2, 2 * N - 1).tolist()
        h = linalg.hankel_build(m)
        scale = max(1.0, float(np.max(np.abs(h))))
        assert linalg.is_tn_hankel(m) == all_minors_nonneg(h, 1e-9 * scale**N)


def test_hankel_build_shape():
    h = linalg.hankel_build([1, 2, 3, 4, 5])
    np.testing.assert_array_equal(h, [[1, 2, 3], [2, 3, 4], [3, 4, 5]])


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.floats(0.1, 10), st.integers(0, 2**32 - 1))
def test_sample_psd_contract(n, r, rho, seed):
    r = min(r, n)
    a = linalg.sample_psd(n, rho, r, seed)
    np.testing.assert_array_equal(a, a.T)
    assert np.all(a > 0) and np.all(a < rho)
    ev = np.linalg.eigvalsh(a)
    assert ev[0] >= -1e-10 * ev[-1]
    assert int(np.sum(ev > 1e-8 * ev[-1])) <= r


def test_dodgson_examples(rng):
    assert linalg.dodgson_residual([[1] * 3] * 3, 1, 3, 1, 3) == 0
    assert linalg.dodgson_residual([[2, 7], [1, 8]], 1, 2, 1, 2) == 0
    for _ in range(1000):
        n = int(rng.integers(2, 6))
        a = rng.integers(-9, 10, (n, n)).tolist()
        i1, i2 = sorted(rng.choice(np.arange(1, n + 1), 2, replace=False))
        j1, j2 = sorted(rng.choice(np.arange(1, n + 1), 2, replace=False))
        assert linalg.dodgson_residual(a, int(i1), int(i2), int(j1), int(j2)) == 0


def test_dodgson_bad_indices():
    with pytest.raises(InvalidInput):
        linalg.dodgson_residual([[1, 2], [3, 4]], 2, 1, 1, 2)


def test_karlin_examples(rng):
    x = [1, 2, 3]
    b = [[1], [0], [2]]
    assert linalg.karlin_residual(x, x, [0, 1, 1], [5, 0, 1], b) == 0
    assert linalg.karlin_residual([1, 2], [3, 4], [5, 6], [7, 8], [[], []]) == 0
    for _ in range(1000):
        n = int(rng.integers(2, 6))
        cols = rng.integers(-9, 10, (4, n)).tolist()
        b = rng.integers(-9, 10, (n, n - 2)).tolist()
        assert linalg.karlin_residual(*cols, b) == 0


def test_karlin_dimension_mismatch():
    with pytest.raises(InvalidInput):
        linalg.karlin_residual([1, 2, 3], [1, 2], [1, 2, 3], [1, 2, 3], [[1], [2], [3]])
