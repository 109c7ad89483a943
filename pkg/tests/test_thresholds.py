import math
from fractions import Fraction

import numpy as np
import pytest

from preserver_lab import thresholds as th
from preserver_lab.errors import InvalidInput, NotConvergent, PreconditionViolated


def tal_ratio(u1, u2):
    # n = (0, 1), c = (1, 1), M = 2: (u1 u2)^2 + (u1 + u2)^2
    return (u1 * u2) ** 2 + (u1 + u2) ** 2


def random_instance(rng, integral=True):
    N = int(rng.integers(1, 5))
    if integral:
        n = sorted(rng.choice(7, N, replace=False).tolist())
        M = n[-1] + int(rng.integers(1, 4))
    else:
        n = np.cumsum(rng.uniform(0.2, 1.5, N)).tolist()
        M = n[-1] + float(rng.uniform(0.2, 2))
    c = rng.uniform(0.2, 3, N).tolist()
    return n, c, M, float(rng.uniform(0.3, 3))


def test_sharp_c_examples():
    assert th.sharp_C((0, 1), (1, 1), 2, 1).value == 5.0
    assert th.sharp_C((2,), (4,), 5, 2).value == pytest.approx(2**3 / 4)


def test_sharp_c_grid_supremum():
    g = np.linspace(0, 1, 1001)[1:]
    u1, u2 = np.meshgrid(g, g)
    sup = tal_ratio(u1, u2).max()
    assert 5 - 1e-2 <= sup <= 5


def test_sharp_c_rho_homogeneity():
    n, c, M = (0, 1, 3), (1.0, 2.0, 0.5), 5
    base = th.sharp_C(n, c, M, 1.0).value
    terms = [
        th.sharp_C(n, [ci if i == j else 1e300 for i, ci in enumerate(c)], M, 1.0).value for j in range(3)
    ]
    doubled = sum(t * 2 ** (M - n[j]) for j, t in enumerate(terms))
    assert sum(terms) == pytest.approx(base, rel=1e-12)
    assert th.sharp_C(n, c, M, 2.0).value == pytest.approx(doubled, rel=1e-12)


def test_sharp_c_rejects_low_m():
    with pytest.raises(InvalidInput):
        th.sharp_C((0, 1), (1, 1), 1, 1)


def test_qualitative_variants():
    assert th.qualitative_K((0, 1), (1, 1), 2, 1, "integer").value == 5
    assert th.qualitative_K((0, 1), (1, 1), 2, 1, "real_rank1").value == pytest.approx(5)
    assert th.qualitative_K((0, 1), (1, 1), 2, 1, "two_sided").value == 12
    with pytest.raises(InvalidInput):
        th.qualitative_K((0, 2), (1, 1), 3, 1, "two_sided")
    with pytest.raises(InvalidInput):
        th.qualitative_K((0, 1.5), (1, 1), 3, 1, "integer")


def test_dominance(rng):
    for i in range(1000):
        n, c, M, rho = random_instance(rng, integral=i % 2 == 0)
        sharp = th.sharp_C(n, c, M, rho).value
        variants = ["real_full"] + (["integer"] if i % 2 == 0 else [])
        for v in variants:
            if v == "real_full" and not th.is_feasible_full_rank(n):
                continue
            assert th.qualitative_K(n, c, M, rho, v).value >= sharp * (1 - 1e-10)


def test_induction_step(rng):
    for _ in range(1000):
        N = int(rng.integers(2, 5))
        n = [0] + sorted((rng.choice(6, N - 1, replace=False) + 1).tolist())
        c = rng.uniform(0.2, 3, N).tolist()
        M = n[-1] + int(rng.integers(1, 4))
        rho = float(rng.uniform(0.3, 3))
        k = th.qualitative_K(n, c, M, rho, "integer").value
        n2 = [x - 1 for x in n[1:]]
        c2 = [x * y for x, y in zip(n[1:], c[1:])]
        k2 = th.qualitative_K(n2, c2, M - 1, rho, "integer").value
        assert k >= M * k2 * (1 - 1e-10)


def test_rank1_examples():
    assert th.rank1_threshold_at((0.5, 0.25), (0, 1), (1, 1), 2).value == pytest.approx(0.578125, rel=1e-14)
    near = th.rank1_threshold_at((1 - 1e-6, 1 - 2e-6), (0, 1), (1, 1), 2).value
    assert near == pytest.approx(5, rel=1e-4)
    assert th.rank1_threshold_at((0.7,), (1,), (2,), 4).value == pytest.approx(0.7**6 / 2)


def test_rank1_sup_below_sharp(rng):
    n, c, M, rho = (0, 1, 3), (1.0, 0.5, 2.0), 4, 1.0
    sharp = th.sharp_C(n, c, M, rho).value
    best = 0.0
    for _ in range(2000):
        u = np.sort(rng.uniform(0, 1, 3))
        best = max(best, th.rank1_threshold_at(u, n, c, M).value)
    assert best <= sharp * (1 + 1e-10)
    near = th.rank1_threshold_at((1 - 3e-5, 1 - 2e-5, 1 - 1e-5), n, c, M).value
    assert near == pytest.approx(sharp, rel=1e-2)


def test_rank1_monotone_in_each_coordinate(rng):
    for _ in range(1000):
        n, c, M, _ = random_instance(rng)
        N = len(n)
        u = np.sort(rng.uniform(0.05, 0.9, N)) + np.arange(N) * 1e-3
        j = int(rng.integers(N))
        v = u.copy()
        v[j] += 1e-3 * (u[j + 1] - u[j]) if j + 1 < N else 1e-3
        before = th.rank1_threshold_at(u, n, c, M).value
        assert th.rank1_threshold_at(v, n, c, M).value >= before * (1 - 1e-9)


def exact_outer(u):
    fu = [Fraction(float(x)) for x in u]
    return [[x * y for y in fu] for x in fu]


def test_rayleigh_matches_rank1(rng):
    for _ in range(300):
        n, c, M, _ = random_instance(rng)
        u = np.sort(rng.uniform(0.1, 1, len(n)))
        r1 = th.rank1_threshold_at(u, n, c, M).value
        ray = th.rayleigh_threshold(exact_outer(u), n, c, M).value
        assert ray == pytest.approx(r1, rel=1e-8)


def test_rayleigh_float_rank_one_is_close():
    # rounding u u^T breaks rank one; h[A] conditioning amplifies it
    u = np.array([0.2, 0.45, 0.9])
    r1 = th.rank1_threshold_at(u, (0, 1, 2), (1, 1, 1), 4).value
    assert th.rayleigh_threshold(np.outer(u, u), (0, 1, 2), (1, 1, 1), 4).value == pytest.approx(r1, rel=1e-6)


def test_rayleigh_is_the_critical_multiplier(rng):
    n, c, M = (0, 1, 2), (1.0, 1.0, 1.0), 4
    g = rng.uniform(0.1, 1, (3, 3))
    a = g @ g.T / 4
    t = th.rayleigh_threshold(a, n, c, M).value
    h = sum(ci * a**ni for ni, ci in zip(n, c))
    target = a**M
    assert np.linalg.eigvalsh(t * h - target)[0] >= -1e-8 * np.abs(target).max()
    assert np.linalg.eigvalsh(0.99 * t * h - target)[0] < 0


def test_rayleigh_scalar():
    assert th.rayleigh_threshold(np.array([[0.5]]), (1,), (2,), 3).value == pytest.approx(0.5**2 / 2)


def test_series_single_term_collapses():
    one = th.series_threshold((0, 1), (1, 1), 1.0, coefficients={4: 1.0})
    assert one.value == pytest.approx(th.qualitative_K((0, 1), (1, 1), 4, 1.0).value)


def test_series_geometric_tail():
    rep = th.series_threshold((0, 1), (1, 1), 1.0, coefficients=lambda M: 2.0**-M, eps=0.5)
    assert math.isfinite(rep.value)
    assert rep.extras["tail_bound"] < 1e-12 * rep.value


def test_series_boundary_diverges():
    with pytest.raises(NotConvergent):
        th.series_threshold((0, 1), (1, 1), 1.0, coefficients=lambda M: 1.0, eps=0.0)


def test_series_atoms():
    rep = th.series_threshold((0, 1), (1, 1), 1.0, atoms=[(2.5, 1.0)], eps=0.5)
    assert rep.value == pytest.approx(th.qualitative_K((0, 1), (1, 1), 2.5, 1.0, "real_full").value)
    with pytest.raises(InvalidInput):
        th.series_threshold((0, 1), (1, 1), 1.0, atoms=[(1.2, 1.0)], eps=0.5)


def test_cube_bounds():
    assert th.cube_bounds((0,), (1,), 1, (1,)) == (1.0, 1.0)
    lo, hi = th.cube_bounds((0, 1), (1, 1), 1, (2,))
    assert lo == hi
    lo, hi = th.cube_bounds((0, 1), (1, 1), 1, (2, 3))
    assert lo < hi
    with pytest.raises(InvalidInput):
        th.cube_bounds((0, 1), (1, 1), 1, (3, 2))


def test_cube_scan():
    rows = th.cube_asymptotic_scan(lambda j: j, lambda j: 1.0, (1, 3), 1.0, range(3, 41))
    r = {row["N"]: row["ratio"] for row in rows}
    assert all(v >= 1 for v in r.values())
    assert r[40] <= 1.1 and abs(r[40] - 1) < abs(r[10] - 1)
    assert all(row["ratio"] <= row["envelope"] for row in rows)
    single = th.cube_asymptotic_scan(lambda j: j, lambda j: 1.0, (2,), 1.0, range(3, 8))
    assert all(row["ratio"] == 1 for row in single)


def test_cube_scan_gap_hypothesis():
    with pytest.raises(PreconditionViolated):
        th.cube_asymptotic_scan(lambda j: 3 * j, lambda j: 1.0, (1, 2), 1.0, range(3, 6))
