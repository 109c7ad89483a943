"""Weak majorization, the generalized-Vandermonde majorization criterion,
Schur-ratio monotonicity and log-supermodularity of totally positive minors.

For tuples m, n with pairwise distinct coordinates, m weakly majorizes n
exactly when

    |det u^(o m)| / |V(m)|  >=  |det u^(o n)| / |V(n)|   for all u in [1, inf)^N.

``cgs_check`` evaluates both sides at one u; ``cgs_converse_search`` looks
for a u that breaks the inequality.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .errors import DegenerateInput, InvalidInput, PreconditionViolated
from .linalg import _check_index_tuple, det_exact, det_lu, det_mp, is_strictly_tp, minor
from .symfun import _mpf, schur_ratio

__all__ = [
    "WEAKLY_MAJORIZES",
    "MAJORIZES",
    "NEITHER",
    "weak_majorize",
    "cgs_check",
    "cgs_converse_search",
    "ConverseResult",
    "ratio_monotone_check",
    "tuple_meet_join",
    "logsup_check",
]

WEAKLY_MAJORIZES = "WeaklyMajorizes"
MAJORIZES = "Majorizes"
NEITHER = "Neither"

MAJORIZATION_ATOL = 1e-12
CGS_RTOL = 1e-9
RATIO_RTOL = 1e-9
MP_DPS = 60
MAX_DPS = 10_000
CONVERSE_BUDGET = 1000


def _exact(values) -> bool:
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in values)


def weak_majorize(m: Sequence[float], n: Sequence[float]) -> str:
    """Compare prefix sums of the decreasing rearrangements.

    Returns ``Majorizes`` when every prefix of m dominates and the totals
    agree, ``WeaklyMajorizes`` when only the prefixes dominate, ``Neither``
    otherwise.  Exact for int/Fraction input, 1e-12 absolute otherwise.
    """
    if len(m) != len(n):
        raise InvalidInput("tuples must have equal length")
    if _exact(m) and _exact(n):
        ms = sorted((Fraction(v) for v in m), reverse=True)
        ns = sorted((Fraction(v) for v in n), reverse=True)
        tol = Fraction(0)
    else:
        ms = sorted((float(v) for v in m), reverse=True)
        ns = sorted((float(v) for v in n), reverse=True)
        if not all(math.isfinite(v) for v in ms + ns):
            raise InvalidInput("tuples must be finite")
        tol = MAJORIZATION_ATOL
    pm = pn = 0
    for a, b in zip(ms, ns):
        pm += a
        pn += b
        if pm < pn - tol:
            return NEITHER
    return MAJORIZES if abs(pm - pn) <= tol else WEAKLY_MAJORIZES


def _distinct(t, name: str) -> list:
    vals = [float(v) for v in t]
    if len(set(vals)) != len(vals):
        raise DegenerateInput(f"{name} must have pairwise distinct coordinates")
    return vals


def _normalized_det(u: list, exps: list):
    """|det u^(o exps)| / |V(exps)| at the current mpmath precision."""
    v = mpmath.fprod(exps[j] - exps[i] for i in range(len(exps)) for j in range(i + 1, len(exps)))
    return abs(det_mp([[x**e for e in exps] for x in u])) / abs(v)


def _working_dps(m, n, u) -> int:
    # elimination across rows of relative scale (max u / min u)^spread loses that many digits
    vals = [float(x) for x in list(m) + list(n)]
    spread = max(vals) - min(vals)
    return MP_DPS + int(math.ceil(1.5 * spread * float(mpmath.log10(max(u) / min(u)))))


def _cgs_sides(m, n, u_mp):
    mm = [_mpf(x) for x in m]
    nn = [_mpf(x) for x in n]
    return _normalized_det(u_mp, mm), _normalized_det(u_mp, nn)


def cgs_check(m: Sequence[float], n: Sequence[float], u: Sequence[float]) -> tuple[bool, float, float]:
    """(holds, lhs, rhs) with lhs = |det u^(o m)|/|V(m)|, rhs likewise for n.

    ``holds`` is lhs >= rhs * (1 - 1e-9).  Needs u in [1, inf)^N with
    pairwise distinct coordinates.
    """
    if not (len(m) == len(n) == len(u)):
        raise InvalidInput("m, n and u must have equal length")
    _distinct(m, "m")
    _distinct(n, "n")
    uf = _distinct(u, "u")
    if any(not (x >= 1 and math.isfinite(x)) for x in uf):
        raise InvalidInput("u must lie in [1, inf)^N")
    with mpmath.workdps(_working_dps(m, n, uf)):
        lhs, rhs = _cgs_sides(m, n, [_mpf(x) for x in u])
        holds = bool(lhs >= rhs * (1 - CGS_RTOL))
        return holds, float(lhs), float(rhs)


@dataclass(frozen=True)
class ConverseResult:
    """Outcome of a witness search; ``u`` holds decimal strings since the
    structured probes can exceed the float range."""

    verdict: str
    probes: int
    u: tuple | None = None
    probe: str | None = None
    log_lhs: float | None = None
    log_rhs: float | None = None


def _probe_schedule(N: int, budget: int, rng: np.random.Generator):
    """Structured u(t), then a small grid, then random draws.

    u(t) = (1, ..., N-j, (N-j+1) t, ..., N t) with t = 10^(2^k).
    """
    count = 0
    for k in range(0, 16):
        for j in range(1, N + 1):
            if count >= budget:
                return
            t = mpmath.mpf(10) ** (mpmath.mpf(2) ** k)
            yield f"structured j={j} log10(t)={2**k}", [
                mpmath.mpf(i + 1) if i < N - j else (i + 1) * t for i in range(N)
            ]
            count += 1
    for base in (1.5, 2.0, 4.0, 16.0):
        if count >= budget:
            return
        yield f"geometric ratio={base}", [mpmath.mpf(base) ** i for i in range(N)]
        count += 1
    while count < budget:
        scale = 10.0 ** rng.uniform(0, 3)
        u = 1.0 + scale * np.sort(rng.random(N))
        yield "random", [mpmath.mpf(float(x)) for x in u]
        count += 1


def cgs_converse_search(
    m: Sequence[float], n: Sequence[float], budget: int = CONVERSE_BUDGET, seed: int = 0
) -> ConverseResult:
    """Look for u in [1, inf)^N with lhs < rhs (see :func:`cgs_check`).

    Probes follow a fixed schedule; the first violating probe wins.  With no
    witness inside the budget the verdict is ``Inconclusive``.
    """
    if len(m) != len(n):
        raise InvalidInput("tuples must have equal length")
    N = len(m)
    _distinct(m, "m")
    _distinct(n, "n")
    rng = np.random.default_rng(seed)
    used = 0
    for label, u in _probe_schedule(N, budget, rng):
        used += 1
        if len(set(u)) != N:
            continue
        dps = _working_dps(m, n, u)
        if dps > MAX_DPS:
            continue
        with mpmath.workdps(dps):
            lhs, rhs = _cgs_sides(m, n, u)
            if lhs < rhs * (1 - CGS_RTOL):
                return ConverseResult(
                    "Violated",
                    used,
                    tuple(mpmath.nstr(x, 17) for x in u),
                    label,
                    float(mpmath.log(lhs)) if lhs > 0 else -math.inf,
                    float(mpmath.log(rhs)),
                )
    return ConverseResult("Inconclusive", used)


def ratio_monotone_check(
    m: Sequence[float], n: Sequence[float], u: Sequence[float], j: int, h: float
) -> tuple[bool, float, float]:
    """(holds, before, after) for det u^(o m)/det u^(o n) when u_j grows by h.

    Needs m >= n coordinatewise (both increasing) and h >= 0.
    """
    if len(m) != len(n):
        raise InvalidInput("tuples must have equal length")
    if any(float(a) < float(b) for a, b in zip(m, n)):
        raise PreconditionViolated("m must dominate n coordinatewise")
    if not (0 <= j < len(u)):
        raise InvalidInput("coordinate index out of range")
    if not h >= 0:
        raise InvalidInput("step must be non-negative")
    before = schur_ratio(u, m, n)
    v = [float(x) for x in u]
    v[j] += h
    after = schur_ratio(v, m, n)
    return bool(after >= before - RATIO_RTOL * abs(before)), before, after


def _ordering(t: tuple) -> tuple:
    return tuple(sorted(range(len(t)), key=lambda i: t[i]))


def tuple_meet_join(i1: Sequence[int], i2: Sequence[int]) -> tuple[tuple, tuple]:
    """Coordinatewise min and max of two index tuples with the same ordering."""
    a, b = tuple(int(x) for x in i1), tuple(int(x) for x in i2)
    if len(a) != len(b):
        raise PreconditionViolated("index tuples must have equal length")
    big = max(a + b) if a else 1
    _check_index_tuple(a, big)
    _check_index_tuple(b, big)
    if _ordering(a) != _ordering(b):
        raise PreconditionViolated("index tuples must have the same ordering")
    meet = tuple(min(x, y) for x, y in zip(a, b))
    join = tuple(max(x, y) for x, y in zip(a, b))
    assert _ordering(meet) == _ordering(a) == _ordering(join)
    return meet, join


def _det(a, rows, cols):
    sub = minor(a, rows, cols)
    if isinstance(sub, np.ndarray):
        return det_lu(sub)
    return det_exact(sub)


def logsup_check(a, i1, i2, j1, j2, check_tp: bool = True):
    """det(A[I1^I2, J1^J2]) det(A[I1vI2, J1vJ2]) - det(A[I1, J1]) det(A[I2, J2]).

    Indices are 1-based.  Exact (Fraction) for int/Fraction nested lists,
    floating for arrays.  Non-negative for strictly totally positive A; pass
    ``check_tp=False`` when A is positive by construction (e.g. a generalized
    Vandermonde matrix with increasing bases and exponents).
    """
    if check_tp and not is_strictly_tp(a):
        raise PreconditionViolated("matrix is not strictly totally positive")
    im, ij = tuple_meet_join(i1, i2)
    jm, jj = tuple_meet_join(j1, j2)
    if len(im) != len(jm):
        raise InvalidInput("row and column tuples must have equal length")
    return _det(a, im, jm) * _det(a, ij, jj) - _det(a, i1, j1) * _det(a, i2, j2)
