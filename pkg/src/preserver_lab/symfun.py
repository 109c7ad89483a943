"""Schur polynomials, Vandermonde and generalized Vandermonde determinants.

Two independent engines evaluate a Schur polynomial s_n indexed by a strictly
increasing integer tuple n = (n_0, ..., n_{N-1}):

* :func:`schur_tableaux` sums u^|T| over column-strict tableaux, organized by
  the branching rule (peel off the cells holding the largest entry, which
  form a horizontal strip);
* the bialternant ``gen_vdm_det(u, n) / vandermonde(u)``.

Inputs made only of ints and Fractions are evaluated exactly; anything
containing floats is evaluated in floating point.
"""

from __future__ import annotations

import itertools
import math
import warnings
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Sequence

import mpmath
import numpy as np

from .errors import (
    CapExceeded,
    ConditioningWarning,
    DegenerateInput,
    InvalidInput,
    PreconditionViolated,
)
from .linalg import det_exact, det_lu, det_mp

__all__ = [
    "as_power_tuple",
    "is_integral",
    "is_exact",
    "n_min",
    "replaced_tuple",
    "vandermonde",
    "log_abs_vandermonde",
    "gen_vdm_det",
    "gen_vdm_ratio_mp",
    "schur_bialternant",
    "schur_tableaux",
    "weyl_dimension",
    "principal_specialization",
    "monomial_bounds",
    "complete_homogeneous",
    "schur_ratio",
]

TABLEAU_CAP = 10**6
CONDITION_LIMIT = 1e12
DISTINCT_GAP = 1e-8
MP_DPS = 50


def is_exact(values) -> bool:
    return all(isinstance(v, Rational) for v in values)


def is_integral(n: Sequence[float]) -> bool:
    return all(float(x).is_integer() for x in n)


def as_power_tuple(n: Sequence[float]) -> tuple:
    """Validate a strictly increasing tuple of non-negative exponents.

    Integral entries are returned as ints, others as floats.
    """
    out = []
    for x in n:
        xf = float(x)
        if not math.isfinite(xf) or xf < 0:
            raise InvalidInput(f"exponents must be finite and >= 0, got {x}")
        if isinstance(x, Rational) and not isinstance(x, int) and x.denominator != 1:
            out.append(x)
        else:
            out.append(int(xf) if xf.is_integer() else xf)
    if any(b <= a for a, b in zip(out, out[1:])):
        raise InvalidInput(f"exponents must be strictly increasing, got {tuple(n)}")
    return tuple(out)


def n_min(N: int) -> tuple[int, ...]:
    return tuple(range(N))


def replaced_tuple(n: Sequence[float], j: int, M: float) -> tuple:
    """n with its j-th entry removed and M appended."""
    return tuple(n[:j]) + tuple(n[j + 1:]) + (M,)


def vandermonde(t: Sequence[float]):
    """Product of (t_j - t_i) over i < j; exact for int/Fraction input."""
    vals = list(t)
    prod = Fraction(1) if is_exact(vals) else 1.0
    for i, j in itertools.combinations(range(len(vals)), 2):
        prod *= vals[j] - vals[i]
    return prod


def log_abs_vandermonde(t: Sequence[float]) -> float:
    vals = [float(x) for x in t]
    total = 0.0
    for i, j in itertools.combinations(range(len(vals)), 2):
        total += math.log(abs(vals[j] - vals[i]))
    return total


def _check_lengths(u, n):
    if len(u) != len(n):
        raise InvalidInput(f"length mismatch: |u| = {len(u)}, |n| = {len(n)}")


def gen_vdm_det(u: Sequence[float], n: Sequence[float]):
    """det(u_j ** n_k), rows indexed by u and columns by n.

    Exact when `u` is int/Fraction and `n` is integral.  Otherwise the rows
    are sorted by u, eliminated with partial pivoting in double precision, and
    the sign of the sorting permutation is restored.  A pivot ratio above
    1e12 emits a :class:`ConditioningWarning`.
    """
    u = list(u)
    n = list(n)
    _check_lengths(u, n)
    if not u:
        return Fraction(1)
    if is_exact(u) and is_integral(n):
        if any(x < 0 for x in n):
            raise InvalidInput("exponents must be non-negative")
        return det_exact([[Fraction(x) ** int(e) for e in n] for x in u])
    uf = np.asarray([float(x) for x in u])
    nf = np.asarray([float(x) for x in n])
    if np.any(uf < 0) and not is_integral(n):
        raise InvalidInput("negative bases need integral exponents")
    order = np.argsort(uf, kind="stable")
    inversions = sum(1 for a, b in itertools.combinations(order, 2) if a > b)
    sign = -1.0 if inversions % 2 else 1.0
    if np.any(np.diff(uf[order]) == 0):
        return 0.0
    m = np.power.outer(uf[order], nf)
    size = len(u)
    det = sign
    pivots = []
    for k in range(size):
        piv = k + int(np.argmax(np.abs(m[k:, k])))
        if m[piv, k] == 0.0:
            return 0.0
        if piv != k:
            m[[k, piv]] = m[[piv, k]]
            det = -det
        pivots.append(abs(m[k, k]))
        det *= m[k, k]
        if k + 1 < size:
            m[k + 1:, k:] -= np.outer(m[k + 1:, k] / m[k, k], m[k, k:])
    if max(pivots) / min(pivots) > CONDITION_LIMIT:
        warnings.warn(
            f"generalized Vandermonde pivot ratio {max(pivots) / min(pivots):.3g} exceeds {CONDITION_LIMIT:g}",
            ConditioningWarning,
            stacklevel=2,
        )
    return float(det)


def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def gen_vdm_ratio_mp(u: Sequence[float], n: Sequence[float], dps: int = MP_DPS):
    """det(u ** n) / V(u) evaluated with `dps` significant digits (an mpf).

    Used wherever floating cancellation in the bialternant would swamp the
    quantity being tested.
    """
    _check_lengths(u, n)
    with mpmath.workdps(dps):
        uu = [_mpf(x) for x in u]
        nn = [_mpf(x) for x in n]
        m = [[x ** e for e in nn] for x in uu]
        v = mpmath.mpf(1)
        for i, j in itertools.combinations(range(len(uu)), 2):
            v *= uu[j] - uu[i]
        if v == 0:
            raise DegenerateInput("coordinates of u must be pairwise distinct")
        return det_mp(m) / v


def _complete_table(u: list, top: int) -> list[list]:
    """h[m][k] = h_k(u_1, ..., u_m) for 0 <= m <= len(u), 0 <= k <= top."""
    one = u[0] ** 0 if u else 1
    table = [[one] + [0 * one] * top]
    for m in range(1, len(u) + 1):
        row = [one]
        for k in range(1, top + 1):
            row.append(table[m - 1][k] + u[m - 1] * row[k - 1])
        table.append(row)
    return table


def _confluent_bialternant(n: Sequence[int], u: list):
    # divided differences of x^n over u_1..u_{i+1} are h_{n-i}(u_1..u_{i+1})
    N = len(n)
    table = _complete_table(u, int(n[-1]))
    m = [[table[i + 1][int(e) - i] if int(e) >= i else 0 * table[0][0] for e in n] for i in range(N)]
    if is_exact(u):
        return det_exact(m)
    return det_lu(np.array(m, dtype=float))


def schur_bialternant(n: Sequence[int], u: Sequence[float]):
    """s_n(u) = det(u ** n) / V(u).

    When coordinates coincide the quotient is taken in its polynomial form:
    row i of u ** n is replaced by the divided difference over u_1..u_{i+1},
    whose entries are complete homogeneous polynomials.  That form needs
    integral exponents.
    """
    v = vandermonde(u)
    if v != 0:
        return gen_vdm_det(u, n) / v
    n = as_power_tuple(n)
    if not is_integral(n):
        raise DegenerateInput("coincident coordinates need integral exponents")
    _check_lengths(list(u), n)
    vals = [Fraction(x) for x in u] if is_exact(u) else [float(x) for x in u]
    return _confluent_bialternant(n, vals)


def _shape(n: Sequence[int]) -> tuple[int, ...]:
    N = len(n)
    return tuple(int(n[N - 1 - i]) - (N - 1 - i) for i in range(N))


def _tableau_sum(shape: tuple[int, ...], u: list):
    one = u[0] ** 0 if u else 1

    @lru_cache(maxsize=None)
    def rec(lam: tuple[int, ...], k: int):
        # lam has exactly k parts (trailing zeros allowed); variables u[0..k-1]
        if k == 1:
            return u[0] ** lam[0]
        if lam[-1] == 0 and all(x == 0 for x in lam):
            return one
        total = 0 * one
        ranges = [range(lam[i + 1], lam[i] + 1) for i in range(k - 1)]
        top = u[k - 1]
        size = sum(lam)
        for mu in itertools.product(*ranges):
            total += rec(mu, k - 1) * top ** (size - sum(mu))
        return total

    if not shape:
        return one
    return rec(shape, len(shape))


def schur_tableaux(n: Sequence[int], u: Sequence[float], cap: int = TABLEAU_CAP):
    """s_n(u) as a sum over column-strict tableaux of shape reversed(n - n_min).

    The sum is organized by the branching rule with memoization, so it never
    materializes the individual tableaux; `cap` bounds their number (the Weyl
    dimension).  Exact for int/Fraction `u`, floating otherwise.
    """
    n = as_power_tuple(n)
    if not is_integral(n):
        raise InvalidInput("tableau engine needs integral exponents")
    u = list(u)
    _check_lengths(u, n)
    count = weyl_dimension(n)
    if count > cap:
        raise CapExceeded(f"{count} tableaux exceed the cap of {cap}")
    if is_exact(u):
        vals = [Fraction(x) for x in u]
    else:
        vals = [float(x) for x in u]
    return _tableau_sum(_shape(n), vals)


def weyl_dimension(n: Sequence[float]):
    """V(n) / V(n_min): the number of tableaux, exact for integral n."""
    n = as_power_tuple(n)
    if is_integral(n):
        return vandermonde([Fraction(int(x)) for x in n]) / vandermonde([Fraction(i) for i in range(len(n))])
    return float(vandermonde([float(x) for x in n]) / vandermonde(list(range(len(n)))))


def principal_specialization(n: Sequence[float], eps: float) -> float:
    """Product over i < j of (eps^n_j - eps^n_i) / (eps^j - eps^i)."""
    n = as_power_tuple(n)
    eps = float(eps)
    if not eps > 0 or eps == 1.0:
        raise InvalidInput("eps must be positive and different from 1")
    prod = 1.0
    for i, j in itertools.combinations(range(len(n)), 2):
        prod *= (eps ** float(n[j]) - eps ** float(n[i])) / (eps ** j - eps ** i)
    return prod


def monomial_bounds(u: Sequence[float], n: Sequence[float]):
    """Return ``(lower, upper, value)`` sandwiching det(u ** n) / V(u).

    lower = u ** (n - n_min), upper = (V(n) / V(n_min)) * lower.  For
    integral n the value is the tableau sum (valid for coincident
    coordinates too); for real n the exponent gaps must be at least 1 and the
    value is the bialternant evaluated in extended precision.
    """
    n = as_power_tuple(n)
    u = list(u)
    _check_lengths(u, n)
    if any(float(x) <= 0 for x in u):
        raise InvalidInput("u must be positive")
    if any(b < a for a, b in zip(u, u[1:])):
        raise InvalidInput("u must be sorted ascending")
    integral = is_integral(n)
    if not integral and any(b - a < 1 for a, b in zip(n, n[1:])):
        raise PreconditionViolated("real exponents must be 1-separated (gaps >= 1)")
    exact = integral and is_exact(u)
    lower = Fraction(1) if exact else 1.0
    for k, (x, e) in enumerate(zip(u, n)):
        lower *= (Fraction(x) if exact else float(x)) ** (e - k)
    upper = weyl_dimension(n) * lower
    if integral:
        value = schur_tableaux(n, u if exact else [float(x) for x in u], cap=10**9)
    else:
        value = float(gen_vdm_ratio_mp(u, n))
    return lower, upper, value


def complete_homogeneous(u: Sequence[float], degree: int):
    """Return ``(h_degree(u), ||u||^degree / (2^r r!))`` for even degree = 2r.

    h_k(u_1..u_m) = h_k(u_1..u_{m-1}) + u_m * h_{k-1}(u_1..u_m).
    """
    if int(degree) != degree or degree < 0:
        raise InvalidInput("degree must be a non-negative integer")
    degree = int(degree)
    if degree % 2:
        raise InvalidInput("the lower bound is only available for even degree")
    r = degree // 2
    vals = list(u)
    exact = is_exact(vals)
    zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
    h = [one] + [zero] * degree
    for x in vals:
        for k in range(1, degree + 1):
            h[k] = h[k] + x * h[k - 1]
    norm_sq = sum(x * x for x in vals) if vals else zero
    if exact:
        bound = Fraction(norm_sq) ** r / (2**r * math.factorial(r))
    else:
        bound = float(norm_sq) ** r / (2**r * math.factorial(r))
    return h[degree], bound


def schur_ratio(
    u: Sequence[float],
    m: Sequence[float],
    n: Sequence[float],
    min_gap: float = DISTINCT_GAP,
) -> float:
    """det(u ** m) / det(u ** n) for positive, pairwise distinct u.

    Coordinates closer than ``min_gap * max(u)`` raise
    :class:`DegenerateInput`.  Evaluated in extended precision.
    """
    m = as_power_tuple(m)
    n = as_power_tuple(n)
    u = [float(x) for x in u]
    _check_lengths(u, m)
    _check_lengths(u, n)
    if any(x <= 0 for x in u):
        raise InvalidInput("u must be positive")
    s = sorted(u)
    if any(b - a <= min_gap * s[-1] for a, b in zip(s, s[1:])):
        raise DegenerateInput("coordinates of u are not separated enough")
    return float(gen_vdm_ratio_mp(u, m) / gen_vdm_ratio_mp(u, n))
