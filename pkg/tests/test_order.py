from fractions import Fraction

import numpy as np
import pytest

from preserver_lab import order
from preserver_lab.errors import DegenerateInput, PreconditionViolated
from preserver_lab.order import MAJORIZES, NEITHER, WEAKLY_MAJORIZES


def random_pair(rng, want_neither):
    while True:
        N = int(rng.integers(2, 5))
        m, n = rng.uniform(0, 5, N), rng.uniform(0, 5, N)
        verdict = order.weak_majorize(m, n)
        if (verdict == NEITHER) == want_neither:
            return np.sort(m), np.sort(n)


def test_weak_majorize_examples():
    assert order.weak_majorize((3, 1), (2, 1)) == WEAKLY_MAJORIZES
    assert order.weak_majorize((2, 0), (1, 1)) == MAJORIZES
    assert order.weak_majorize((1, 1), (2, 0)) == NEITHER
    assert order.weak_majorize((Fraction(1, 3), Fraction(2, 3)), (0.5, 0.5)) == MAJORIZES


def test_weak_majorize_against_brute_force(rng):
    for _ in range(500):
        N = int(rng.integers(1, 5))
        m, n = rng.integers(0, 6, N).tolist(), rng.integers(0, 6, N).tolist()
        ms, ns = sorted(m, reverse=True), sorted(n, reverse=True)
        prefixes = all(sum(ms[:k]) >= sum(ns[:k]) for k in range(1, N + 1))
        expected = NEITHER if not prefixes else (MAJORIZES if sum(m) == sum(n) else WEAKLY_MAJORIZES)
        assert order.weak_majorize(m, n) == expected


def test_cgs_examples():
    holds, lhs, rhs = order.cgs_check((0, 3), (1, 2), (1, 2))
    assert holds and lhs == pytest.approx(7 / 3) and rhs == pytest.approx(2)
    holds, lhs, rhs = order.cgs_check((0, 1.5, 2), (0, 1.5, 2), (1, 2, 3))
    assert holds and lhs == rhs
    with pytest.raises(DegenerateInput):
        order.cgs_check((0, 1), (0, 2), (2, 2))


def test_cgs_forward(rng):
    for _ in range(100):
        m, n = random_pair(rng, want_neither=False)
        for _ in range(20):
            u = rng.uniform(1, 10, len(m))
            assert order.cgs_check(m, n, u)[0]


def test_cgs_converse(rng):
    res = order.cgs_converse_search((0, 1), (0, 3), seed=1)
    assert res.verdict == "Violated"
    for i in range(100):
        m, n = random_pair(rng, want_neither=True)
        res = order.cgs_converse_search(m, n, budget=1000, seed=i)
        assert res.verdict == "Violated", (m, n)
        assert res.log_lhs < res.log_rhs


def test_converse_never_claims_truth():
    res = order.cgs_converse_search((0, 3), (1, 2), budget=50)
    assert res.verdict == "Inconclusive" and res.probes == 50


def test_ratio_monotone(rng):
    holds, before, after = order.ratio_monotone_check((0, 1), (0, 1), (1, 2), 0, 0.5)
    assert holds and before == pytest.approx(1) and after == pytest.approx(1)
    holds, before, after = order.ratio_monotone_check((0, 2), (0, 1), (1, 3), 0, 0.5)
    assert after == pytest.approx(before + 0.5)
    with pytest.raises(PreconditionViolated):
        order.ratio_monotone_check((0, 1), (0, 2), (1, 2), 0, 0.1)
    for _ in range(1000):
        N = int(rng.integers(2, 4))
        n = np.cumsum(rng.uniform(0.3, 1.5, N))
        m = n + np.sort(rng.uniform(0, 1.5, N))
        u = np.sort(rng.uniform(0.5, 3, N)) + np.arange(N) * 0.05
        j = int(rng.integers(N))
        room = (u[j + 1] - u[j]) if j + 1 < N else 1.0
        assert order.ratio_monotone_check(m, n, u, j, float(rng.uniform(0, 0.9)) * room)[0]


def test_meet_join():
    assert order.tuple_meet_join((1, 4), (2, 3)) == ((1, 3), (2, 4))
    assert order.tuple_meet_join((2, 5), (2, 5)) == ((2, 5), (2, 5))
    with pytest.raises(Exception):
        order.tuple_meet_join((1, 3), (2, 2))
    with pytest.raises(PreconditionViolated):
        order.tuple_meet_join((1, 3), (3, 1))


def test_logsup_examples():
    assert order.logsup_check([[2, 1], [1, 1]], (1,), (2,), (2,), (1,)) == 1
    a = [[1, 1, 1], [1, 2, 4], [1, 3, 9]]
    assert order.logsup_check(a, (1, 2), (2, 3), (1, 2), (2, 3)) == 0


def test_logsup_exact_vandermonde(rng):
    for _ in range(1000):
        n = int(rng.integers(2, 7))
        u = sorted(rng.choice(np.arange(1, 12), n, replace=False).tolist())
        e = sorted(rng.choice(8, n, replace=False).tolist())
        a = [[Fraction(x) ** k for k in e] for x in u]
        k = int(rng.integers(1, min(3, n) + 1))
        rows = sorted(rng.choice(np.arange(1, n + 1), k, replace=False).tolist())
        rows2 = sorted(rng.choice(np.arange(1, n + 1), k, replace=False).tolist())
        cols = sorted(rng.choice(np.arange(1, n + 1), k, replace=False).tolist())
        cols2 = sorted(rng.choice(np.arange(1, n + 1), k, replace=False).tolist())
        res = order.logsup_check(a, rows, rows2, cols, cols2, check_tp=False)
        assert isinstance(res, Fraction) and res >= 0
