"""Haar unitaries and the Harish-Chandra-Itzykson-Zuber integral.

For real tuples alpha and x,

    I(alpha, x) = int_{U(N)} exp tr(diag(alpha) U diag(x) U^*) dU
                = det(exp(alpha_i x_j)) * V(n_min) / (V(alpha) V(x)),

with V the Vandermonde product and n_min = (0, 1, ..., N-1).

Reproducibility: Gaussians come from PCG64 uniforms through Box-Muller.
Monte Carlo draws are grouped in fixed blocks of ``BLOCK`` samples and block
``b`` uses ``PCG64([seed, b])``, so estimates do not depend on how blocks are
spread over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np

from .errors import DegenerateInput, InvalidInput, NumericalFailure
from .linalg import det_mp

__all__ = [
    "MCEstimate",
    "haar_unitary",
    "haar_unitary_batch",
    "hciz_exact",
    "log_hciz_exact",
    "hciz_mc",
    "hciz_F",
    "gv_bounds_check",
    "MIN_GAP",
]

BLOCK = 1024
MIN_GAP = 1e-6
MP_DPS = 50
SANDWICH_RTOL = 1e-12


def _generator(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _box_muller(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex Gaussians (unit variance per real component)."""
    u1 = 1.0 - rng.random(shape)  # in (0, 1]
    u2 = rng.random(shape)
    r = np.sqrt(-2.0 * np.log(u1))
    return r * np.cos(2 * np.pi * u2) + 1j * r * np.sin(2 * np.pi * u2)


def haar_unitary_batch(N: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` Haar unitaries: QR of complex Gaussians with R-diagonal phases removed."""
    if N < 1:
        raise InvalidInput("N must be positive")
    z = _box_muller(rng, (count, N, N))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    phase = d / np.abs(d)
    return q * phase[:, None, :]


def haar_unitary(N: int, seed: int) -> np.ndarray:
    """One Haar-distributed N x N unitary, deterministic in ``seed``."""
    return haar_unitary_batch(N, 1, _generator(seed))[0]


def _tuple(t, name: str) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if arr.ndim != 1 or arr.size == 0 or not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} must be a non-empty finite tuple")
    return arr


def _check_distinct(t: np.ndarray, name: str) -> None:
    s = np.sort(t)
    if s.size > 1 and np.min(np.diff(s)) < MIN_GAP:
        raise DegenerateInput(f"{name} has coordinates closer than {MIN_GAP}")


def log_hciz_exact(alpha: Sequence[float], x: Sequence[float]) -> tuple[int, float]:
    """(sign, log|I|) of the closed form, in extended precision."""
    a = _tuple(alpha, "alpha")
    b = _tuple(x, "x")
    if a.size != b.size:
        raise InvalidInput("alpha and x must have equal length")
    _check_distinct(a, "alpha")
    _check_distinct(b, "x")
    N = a.size
    with mpmath.workdps(MP_DPS):
        am = [mpmath.mpf(float(v)) for v in a]
        bm = [mpmath.mpf(float(v)) for v in b]
        det = det_mp([[mpmath.exp(ai * bj) for bj in bm] for ai in am])
        va = mpmath.fprod(am[j] - am[i] for i in range(N) for j in range(i + 1, N))
        vb = mpmath.fprod(bm[j] - bm[i] for i in range(N) for j in range(i + 1, N))
        vmin = mpmath.fprod(mpmath.factorial(k) for k in range(N))
        value = det * vmin / (va * vb)
        if value == 0:
            raise NumericalFailure("closed form vanished at working precision")
        return (1 if value > 0 else -1), float(mpmath.log(abs(value)))


def hciz_exact(alpha: Sequence[float], x: Sequence[float]) -> float:
    """det(exp(alpha_i x_j)) * V(n_min) / (V(alpha) V(x)).

    Evaluated at 50 significant digits, so large arguments do not overflow
    before the division.  Coordinates closer than 1e-6 raise DegenerateInput.
    """
    sign, log_value = log_hciz_exact(alpha, x)
    return sign * math.exp(log_value)


def hciz_F(m: Sequence[float], u: Sequence[float]) -> float:
    """F_u(m) = I(m, log u)."""
    uu = _tuple(u, "u")
    if np.any(uu <= 0):
        raise InvalidInput("u must be positive")
    return hciz_exact(m, np.log(uu))


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int
    lower: float
    upper: float

    def __post_init__(self):
        if self.stderr < 0 or self.samples < 2:
            raise InvalidInput("an estimate needs stderr >= 0 and at least 2 samples")


def _block(alpha, x, seed, index, count, lo, hi):
    rng = _generator([seed, index])
    u = haar_unitary_batch(alpha.size, count, rng)
    w = np.abs(u) ** 2
    t = np.einsum("i,bij,j->b", alpha, w, x)
    slack = SANDWICH_RTOL * max(1.0, abs(lo), abs(hi))
    if np.any(t < lo - slack) or np.any(t > hi + slack):
        raise NumericalFailure("integrand left the Schur-Horn interval")
    vals = np.exp(t)
    return math.fsum(vals), math.fsum(vals * vals), float(np.min(t)), float(np.max(t))


def hciz_mc(alpha: Sequence[float], x: Sequence[float], samples: int, seed: int, workers: int = 1) -> MCEstimate:
    """Monte Carlo mean and standard error of exp tr(diag(alpha) U diag(x) U^*).

    Every sample is checked against the Schur-Horn interval
    [exp sum alpha_(j) x_(N+1-j), exp sum alpha_(j) x_(j)] (sorted tuples);
    a violation raises NumericalFailure.  ``lower`` and ``upper`` report
    these bounds.  ``workers`` only changes scheduling, never the result.
    """
    a = _tuple(alpha, "alpha")
    b = _tuple(x, "x")
    if a.size != b.size:
        raise InvalidInput("alpha and x must have equal length")
    if samples < 100:
        raise InvalidInput("need at least 100 samples")
    sa, sb = np.sort(a), np.sort(b)
    lo = float(np.dot(sa, sb[::-1]))
    hi = float(np.dot(sa, sb))
    if a.size == 1 or np.all(a == a[0]) or np.all(b == b[0]):
        value = math.exp(float(np.sum(a)) * float(b[0])) if np.all(b == b[0]) else math.exp(float(a[0]) * float(np.sum(b)))
        return MCEstimate(value, 0.0, samples, seed, math.exp(lo), math.exp(hi))
    blocks = [(i, min(BLOCK, samples - i * BLOCK)) for i in range((samples + BLOCK - 1) // BLOCK)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ic: _block(a, b, seed, ic[0], ic[1], lo, hi), blocks))
    else:
        parts = [_block(a, b, seed, i, c, lo, hi) for i, c in blocks]
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    mean = s1 / samples
    var = max(0.0, (s2 - samples * mean * mean) / (samples - 1))
    return MCEstimate(mean, math.sqrt(var / samples), samples, seed, math.exp(lo), math.exp(hi))


def gv_bounds_check(u: Sequence[float], alpha: Sequence[float]) -> tuple[float, float, float]:
    """(lower, det u^(o alpha), upper) for sorted u > 0 and sorted alpha.

    lower = V(alpha) V(log u) / V(n_min) * prod_j u_j^alpha_(N+1-j) and
    upper is the same with prod_j u_j^alpha_j.
    """
    uu = _tuple(u, "u")
    a = _tuple(alpha, "alpha")
    if uu.size != a.size:
        raise InvalidInput("u and alpha must have equal length")
    if np.any(uu <= 0):
        raise InvalidInput("u must be positive")
    if uu.size > 1 and (np.any(np.diff(uu) <= 0) or np.any(np.diff(a) <= 0)):
        raise InvalidInput("u and alpha must be strictly increasing")
    N = uu.size
    with mpmath.workdps(MP_DPS):
        um = [mpmath.mpf(float(v)) for v in uu]
        am = [mpmath.mpf(float(v)) for v in a]
        lu = [mpmath.log(v) for v in um]
        va = mpmath.fprod(am[j] - am[i] for i in range(N) for j in range(i + 1, N))
        vl = mpmath.fprod(lu[j] - lu[i] for i in range(N) for j in range(i + 1, N))
        vmin = mpmath.fprod(mpmath.factorial(k) for k in range(N))
        pref = va * vl / vmin
        det = det_mp([[ui**aj for aj in am] for ui in um])
        lower = pref * mpmath.fprod(um[j] ** am[N - 1 - j] for j in range(N))
        upper = pref * mpmath.fprod(um[j] ** am[j] for j in range(N))
        return float(lower), float(det), float(upper)
