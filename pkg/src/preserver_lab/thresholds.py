"""Threshold constants for a negative coefficient after N positive powers.

Given exponents n = (n_0 < ... < n_{N-1}), positive coefficients c and a
power M > n_{N-1}, every function here returns a t such that

    t * sum_j c_j x^{n_j} - x^M

preserves positivity entrywise on some class of PSD matrices (or, for the
per-matrix variants, on one given matrix).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import mpmath
import numpy as np

from .errors import DegenerateInput, InvalidInput, NotConvergent, PreconditionViolated
from .linalg import det_mp, jacobi_eigh
from .symfun import (
    as_power_tuple,
    gen_vdm_det,
    is_integral,
    log_abs_vandermonde,
    replaced_tuple,
    vandermonde,
    _mpf,
)

__all__ = [
    "ThresholdReport",
    "FORMULAS",
    "sharp_C",
    "qualitative_K",
    "rank1_threshold_at",
    "rayleigh_threshold",
    "series_threshold",
    "cube_bounds",
    "cube_asymptotic_scan",
    "is_feasible_full_rank",
]

FORMULAS = (
    "SharpC",
    "K_integer",
    "K_real_rank1",
    "K_real_full",
    "TwoSided",
    "Series",
    "Laplace",
    "Rayleigh",
    "Rank1At",
)

# h[A] of a rank-one A is Vandermonde-conditioned (1e12 at N = 4), so the
# pseudo-inverse runs at RAYLEIGH_DPS digits with a cutoff relative to that precision
PINV_CUTOFF = 1e-40
RAYLEIGH_DPS = 60
SERIES_RTOL = 1e-12
LOG_SPACE_FROM = 6


@dataclass(frozen=True)
class ThresholdReport:
    value: float
    formula: str
    inputs: dict
    witness: tuple | None = None
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.formula not in FORMULAS:
            raise InvalidInput(f"unknown formula {self.formula!r}")
        if not (self.value > 0 and math.isfinite(self.value)):
            raise InvalidInput(f"threshold must be positive and finite, got {self.value}")


def _coefficients(c: Sequence[float], N: int) -> tuple[float, ...]:
    c = tuple(float(x) for x in c)
    if len(c) != N:
        raise InvalidInput(f"expected {N} coefficients, got {len(c)}")
    if any(not (x > 0 and math.isfinite(x)) for x in c):
        raise InvalidInput("coefficients must be positive and finite")
    return c


def _common(n, c, M, rho):
    n = as_power_tuple(n)
    N = len(n)
    if N == 0:
        raise InvalidInput("need at least one exponent")
    c = _coefficients(c, N)
    M = float(M)
    if not M > float(n[-1]):
        raise InvalidInput(f"M = {M} must exceed the largest exponent {n[-1]}")
    rho = float(rho)
    if not (rho > 0 and math.isfinite(rho)):
        raise InvalidInput("rho must be positive and finite")
    return n, c, M, rho


def _vsq_sum(n, c, M, rho, log_denominator: float, weights=None) -> float:
    """sum_j w_j * V(n_j)^2 / D^2 * rho^(M - n_j) / c_j with log|D| given.

    Evaluated directly for small N and in log space from N = 6 on.
    """
    N = len(n)
    weights = weights or [1.0] * N
    if N < LOG_SPACE_FROM:
        denom = math.exp(2.0 * log_denominator)
        total = 0.0
        for j in range(N):
            vj = float(vandermonde([float(x) for x in replaced_tuple(n, j, M)]))
            total += weights[j] * vj * vj / denom * rho ** (M - float(n[j])) / c[j]
        return total
    logs = []
    for j in range(N):
        lv = log_abs_vandermonde(replaced_tuple(n, j, M))
        logs.append(
            math.log(weights[j]) + 2.0 * (lv - log_denominator) + (M - float(n[j])) * math.log(rho) - math.log(c[j])
        )
    top = max(logs)
    return math.exp(top) * math.fsum(math.exp(x - top) for x in logs)


def _log_vmin(N: int) -> float:
    return sum(math.lgamma(k + 1) for k in range(N))


def sharp_C(n, c, M, rho) -> ThresholdReport:
    """Sharp threshold: sum_j V(n_j)^2 / V(n)^2 * rho^(M - n_j) / c_j."""
    n, c, M, rho = _common(n, c, M, rho)
    if len(n) < LOG_SPACE_FROM:
        value = _vsq_sum(n, c, M, rho, math.log(abs(float(vandermonde([float(x) for x in n])))))
    else:
        value = _vsq_sum(n, c, M, rho, log_abs_vandermonde(n))
    return ThresholdReport(value, "SharpC", _echo(n, c, M, rho))


def _echo(n, c, M, rho, **extra) -> dict:
    d = {"N": len(n), "n": list(n), "c": list(c), "M": M, "rho": rho}
    d.update(extra)
    return d


def _min_gap(n, M) -> float:
    seq = [float(x) for x in n] + [float(M)]
    return min(b - a for a, b in zip(seq, seq[1:]))


def is_feasible_full_rank(n: Sequence[float]) -> bool:
    """Every exponent is a non-negative integer or at least N - 2."""
    N = len(n)
    return all(float(x).is_integer() or float(x) >= N - 2 for x in n)


def _g(n, alpha: int) -> float:
    N = len(n)
    num = math.factorial(N - 1 - alpha) ** 2
    den = 1.0
    for k in range(alpha + 1, N):
        den *= (float(n[k]) - float(n[alpha])) ** 2
    return num / den


def _k_real_full(n, c, M, rho) -> tuple[float, dict]:
    N = len(n)
    delta = _min_gap(n, M)
    prefactor = max(1.0, delta ** (-N * (N - 1)))
    weights = []
    running = 1.0
    for j in range(N):
        weights.append(running)
        running *= max(1.0, _g(n, j))
    value = prefactor * _vsq_sum(n, c, M, rho, _log_vmin(N), weights)
    return value, {"delta": delta, "prefactor": prefactor, "weights": weights}


def qualitative_K(n, c, M, rho, variant: str = "integer") -> ThresholdReport:
    """Explicit (non-sharp) thresholds.

    ``integer``
        sum_j V(n_j)^2 / V(n_min)^2 * rho^(M - n_j) / c_j, integer powers.
    ``real_rank1``
        the same sum times delta^(-N(N-1)), delta the smallest gap in
        (n_0, ..., n_{N-1}, M); valid on rank-one matrices.
    ``real_full``
        max(1, delta^(-N(N-1))) times the sum with the j-th term weighted by
        prod_{a<j} max(1, g(n, a)); valid on all matrices for feasible n.
    ``two_sided``
        2^r r! sum_j V(n_j)^2 (N rho)^(M - n_j) / c_j for
        n = (0, ..., N-2, N-1+2r) on the two-sided domain (-rho, rho).
    """
    n, c, M, rho = _common(n, c, M, rho)
    N = len(n)
    if variant == "integer":
        if not (is_integral(n) and float(M).is_integer()):
            raise InvalidInput("integer variant needs integral exponents and M")
        value = _vsq_sum(n, c, M, rho, _log_vmin(N))
        return ThresholdReport(value, "K_integer", _echo(n, c, M, rho))
    if variant == "real_rank1":
        delta = _min_gap(n, M)
        value = delta ** (-N * (N - 1)) * _vsq_sum(n, c, M, rho, _log_vmin(N))
        return ThresholdReport(value, "K_real_rank1", _echo(n, c, M, rho), extras={"delta": delta})
    if variant == "real_full":
        value, extras = _k_real_full(n, c, M, rho)
        return ThresholdReport(value, "K_real_full", _echo(n, c, M, rho), extras=extras)
    if variant == "two_sided":
        top = n[-1] - (N - 1)
        if tuple(n[:-1]) != tuple(range(N - 1)) or not float(top).is_integer() or int(top) % 2:
            raise InvalidInput("two-sided variant needs n = (0, ..., N-2, N-1+2r)")
        if not float(M).is_integer():
            raise InvalidInput("two-sided variant needs an integer M")
        r = int(top) // 2
        value = math.factorial(r) * 2**r * _vsq_sum(n, c, M, N * rho, 0.0)
        return ThresholdReport(value, "TwoSided", _echo(n, c, M, rho, r=r))
    raise InvalidInput(f"unknown variant {variant!r}")


def rank1_threshold_at(u, n, c, M) -> ThresholdReport:
    """Smallest t keeping t*h[u u^T] - (u u^T)^(o M) PSD, h = sum_j c_j x^n_j.

    Equals sum_j (det u^(o n_j))^2 / (c_j (det u^(o n))^2).  Integral
    exponents go through exact rational arithmetic (u is converted exactly
    from its float values); real exponents use extended precision.
    """
    n = as_power_tuple(n)
    N = len(n)
    c = _coefficients(c, N)
    if len(u) != N:
        raise InvalidInput("u and n must have equal length")
    if not float(M) > float(n[-1]):
        raise InvalidInput("M must exceed the largest exponent")
    uf = [float(x) for x in u]
    if any(x <= 0 for x in uf):
        raise InvalidInput("u must be positive")
    if len(set(uf)) != N:
        raise DegenerateInput("u must have pairwise distinct coordinates")
    if is_integral(n) and float(M).is_integer():
        ue = [Fraction(x) for x in u]
        Mi = int(M)
        base = gen_vdm_det(ue, n)
        total = Fraction(0)
        for j in range(N):
            dj = gen_vdm_det(ue, replaced_tuple(n, j, Mi))
            total += dj * dj / (Fraction(c[j]) * base * base)
        value = float(total)
    else:
        with mpmath.workdps(50):
            uu = [_mpf(x) for x in u]

            def det(exps):
                return det_mp([[x ** _mpf(e) for e in exps] for x in uu])

            base = det(n)
            value = float(sum(det(replaced_tuple(n, j, float(M))) ** 2 / (c[j] * base**2) for j in range(N)))
    return ThresholdReport(value, "Rank1At", _echo(n, c, float(M), None), witness=tuple(uf))


def _hadamard(a: np.ndarray, e: float) -> np.ndarray:
    if float(e) == 0.0:
        return np.ones_like(a)
    return np.power(a, float(e))


def rayleigh_threshold(a, n, c, M, cutoff: float = PINV_CUTOFF) -> ThresholdReport:
    """Spectral radius of h[A]^(+/2) A^(o M) h[A]^(+/2) for one matrix A.

    h[A]^(+/2) is the square root of the Moore-Penrose inverse, formed at
    60 significant digits; eigenvalues of h[A] below ``cutoff * lambda_max``
    are treated as kernel.  A full-rank A
    requires every n_j to be a non-negative integer or at least N - 2.
    Nested lists of Fractions are used as given, so an exact rank-one u u^T
    stays rank one; a float array is taken at face value.
    """
    exact = not isinstance(a, np.ndarray) and all(isinstance(x, (int, Fraction)) for row in a for x in row)
    arr = np.asarray(a, dtype=float)
    n = as_power_tuple(n)
    N = len(n)
    c = _coefficients(c, N)
    if arr.shape != (N, N):
        raise InvalidInput(f"A must be {N} x {N}")
    if np.any(arr < 0):
        raise InvalidInput("A must have non-negative entries")
    w_a, _ = jacobi_eigh(arr)
    numerical_rank = int(np.sum(w_a > 1e-8 * max(w_a[-1], 1e-300)))
    if numerical_rank > 1 and not is_feasible_full_rank(n):
        raise InvalidInput("exponents must lie in Z>=0 or [N-2, inf) for matrices of rank > 1")
    with mpmath.workdps(RAYLEIGH_DPS):
        am = [[_mpf(x) if exact else mpmath.mpf(float(x)) for x in row] for row in (a if exact else arr)]
        h = mpmath.matrix([[mpmath.fsum(cj * x**e for cj, e in zip(c, n)) for x in row] for row in am])
        target = mpmath.matrix([[x**M for x in row] for row in am])
        w, v = mpmath.eigsy(h)
        top = max(w[i] for i in range(N))
        keep = [i for i in range(N) if w[i] > cutoff * top]
        root = mpmath.zeros(N, N)
        for k in keep:
            col = v[:, k]
            root += (col * col.T) / mpmath.sqrt(w[k])
        b = root * target * root
        eb, _ = mpmath.eigsy((b + b.T) / 2)
        value = float(max(abs(eb[i]) for i in range(N)))
    return ThresholdReport(value, "Rayleigh", _echo(n, c, float(M), None), extras={"rank_h": len(keep)})


def _k_integer_value(n, c, M, rho) -> float:
    return _vsq_sum(n, c, M, rho, _log_vmin(len(n)))


def series_threshold(
    n,
    c,
    rho,
    coefficients: Mapping[int, float] | Callable[[int], float] | None = None,
    atoms: Sequence[tuple[float, float]] | None = None,
    eps: float | None = None,
    bound: float | None = None,
    max_terms: int = 100_000,
) -> ThresholdReport:
    """Threshold against a whole tail g instead of a single power x^M.

    Exactly one of `coefficients` and `atoms` is given.

    coefficients
        Either a finite mapping ``{M: g_M}`` or a callable ``M -> g_M`` for a
        power series g(x) = sum_{M > n_{N-1}} g_M x^M.  A callable needs a
        decay certificate: `eps` > 0 and `bound` C with
        |g_M| <= C (rho (1 + eps))^(-M).  When `bound` is omitted it is taken
        from the first 64 terms; every summed term is checked against it.
        The result is sum_M |g_M| K_M with K_M the integer-power constant,
        stopped once the certified geometric tail drops below 1e-12 of the
        partial sum.
    atoms
        A finite measure ``[(t_k, w_k), ...]`` with every t_k at least
        n_{N-1} + eps; the result is sum_k |w_k| K_{n,c,t_k}, using the
        real-power constant for all matrices.
    """
    n = as_power_tuple(n)
    N = len(n)
    c = _coefficients(c, N)
    rho = float(rho)
    if not (rho > 0 and math.isfinite(rho)):
        raise InvalidInput("rho must be positive and finite")
    if (coefficients is None) == (atoms is None):
        raise InvalidInput("give exactly one of coefficients or atoms")
    top = float(n[-1])

    if atoms is not None:
        if eps is None or not eps > 0:
            raise InvalidInput("atoms need a separation eps > 0")
        if not is_feasible_full_rank(n):
            raise InvalidInput("exponents must lie in Z>=0 or [N-2, inf)")
        total = 0.0
        for t, w in atoms:
            if float(t) < top + eps:
                raise InvalidInput(f"atom at {t} lies below n_(N-1) + eps = {top + eps}")
            if w != 0:
                total += abs(float(w)) * _k_real_full(n, c, float(t), rho)[0]
        return ThresholdReport(
            total, "Laplace", _echo(n, c, None, rho, eps=eps, atoms=[list(map(float, a)) for a in atoms])
        )

    if not is_integral(n):
        raise InvalidInput("power series tails need integral exponents")
    if isinstance(coefficients, Mapping):
        total = 0.0
        for M, g in sorted(coefficients.items()):
            if int(M) != M or M <= top:
                raise InvalidInput(f"tail power {M} must be an integer above {top}")
            if g != 0:
                total += abs(float(g)) * _k_integer_value(n, c, float(M), rho)
        return ThresholdReport(
            total, "Series", _echo(n, c, None, rho, tail={str(k): float(v) for k, v in sorted(coefficients.items())})
        )

    if eps is None or not eps > 0:
        raise NotConvergent("a series tail needs a decay certificate with eps > 0")
    radius = rho * (1.0 + eps)
    start = int(math.floor(top)) + 1
    if bound is None:
        bound = max(abs(float(coefficients(M))) * radius**M for M in range(start, start + 64))
    bound = float(bound)

    def decay_ratio(M: int) -> float:
        worst = 0.0
        for j in range(N):
            r = 1.0
            for k in range(N):
                if k != j:
                    r *= ((M + 1 - float(n[k])) / (M - float(n[k]))) ** 2
            worst = max(worst, r)
        return worst / (1.0 + eps)

    total = 0.0
    tail = math.inf
    M = start
    for M in range(start, start + max_terms):
        g = abs(float(coefficients(M)))
        if g > bound * radius ** (-M) * (1 + 1e-12):
            raise NotConvergent(f"|g_{M}| = {g:g} exceeds the declared certificate")
        k_m = _k_integer_value(n, c, float(M), rho)
        total += g * k_m
        q = decay_ratio(M + 1)
        if q < 1.0:
            tail = bound * radius ** (-(M + 1)) * _k_integer_value(n, c, float(M + 1), rho) / (1.0 - q)
            if total > 0 and tail < SERIES_RTOL * total:
                break
    else:
        raise NotConvergent(f"tail bound still {tail:g} after {max_terms} terms")
    if not total > 0:
        raise InvalidInput("tail has no non-zero coefficient")
    return ThresholdReport(
        total,
        "Series",
        _echo(n, c, None, rho, eps=eps, bound=bound),
        extras={"terms": M - start + 1, "tail_bound": tail},
    )


def cube_bounds(n, c, rho, alphas: Sequence[float]) -> tuple[float, float]:
    """Lower and upper bounds on the largest matrix-cube radius eta.

    With K_alpha the sharp constant for the power n_{N-1} + alpha,
    eta_lower = 1 / sum_m K_{alpha_m} and eta_upper = 1 / K_{alpha_{M+1}}.
    """
    n = as_power_tuple(n)
    alphas = [float(a) for a in alphas]
    if not alphas or alphas[0] <= 0 or any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise InvalidInput("alphas must be positive and strictly increasing")
    if not is_feasible_full_rank(n):
        raise InvalidInput("exponents must lie in Z>=0 or [N-2, inf)")
    top = float(n[-1])
    ks = [sharp_C(n, c, top + a, rho).value for a in alphas]
    return 1.0 / math.fsum(ks), 1.0 / ks[-1]


def cube_asymptotic_scan(
    n_of: Callable[[int], int],
    c_of: Callable[[int], float],
    alphas: Sequence[float],
    rho: float,
    N_range: Sequence[int],
) -> list[dict]:
    """Ratio of the two cube bounds, r(N) = K_{alpha_{M+1}}^-1 sum_m K_{alpha_m}.

    `n_of(j)` and `c_of(j)` generate the exponent and coefficient sequences.
    Each row also carries the envelope
    1 + M * 2 alpha_{M+1}^2 max(1, rho^(alpha_1 - alpha_{M+1})) / (N - 2)^2
    (for N >= 3), which r(N) stays below when the gap hypothesis holds.
    """
    alphas = [float(a) for a in alphas]
    if not alphas or alphas[0] <= 0 or any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise InvalidInput("alphas must be positive and strictly increasing")
    N_range = list(N_range)
    top_N = max(N_range)
    seq = [n_of(j) for j in range(top_N)]
    if any(int(x) != x for x in seq) or any(b <= a for a, b in zip(seq, seq[1:])) or seq[0] < 0:
        raise InvalidInput("the exponent sequence must be strictly increasing non-negative integers")
    m_extra = len(alphas) - 1
    if m_extra and any(b - a > alphas[-1] - alphas[-2] for a, b in zip(seq, seq[1:])):
        raise PreconditionViolated("need alpha_{M+1} - alpha_M >= n_{j+1} - n_j for every j")
    rows = []
    for N in N_range:
        n = tuple(int(x) for x in seq[:N])
        c = [float(c_of(j)) for j in range(N)]
        top = float(n[-1])
        ks = [sharp_C(n, c, top + a, rho).value for a in alphas]
        ratio = math.fsum(ks) / ks[-1]
        envelope = None
        if N >= 3:
            envelope = 1.0 + m_extra * 2.0 * alphas[-1] ** 2 * max(1.0, rho ** (alphas[0] - alphas[-1])) / (N - 2) ** 2
        rows.append({"N": N, "ratio": ratio, "envelope": envelope})
    return rows
