"""Dense symmetric linear algebra on small matrices.

Floating routines work on numpy arrays; the exact routines take nested
sequences and return :class:`fractions.Fraction` values.  Indices in the
minor/tuple helpers are 1-based, matching the usual notation for minors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .errors import CapExceeded, InvalidInput

__all__ = [
    "det_mp",
    "Spectrum",
    "as_symmetric",
    "jacobi_eigh",
    "sym_eigen",
    "is_psd",
    "min_eigenvalue",
    "det_lu",
    "det_exact",
    "to_fractions",
    "minor",
    "tuple_sign",
    "is_strictly_tp",
    "is_totally_nonnegative",
    "hankel_build",
    "hankel_truncate",
    "is_tn_hankel",
    "sample_psd",
    "sample_psd_batch",
    "sample_signed_psd_batch",
    "dodgson_residual",
    "karlin_residual",
]

EIGEN_TOL = 1e-14
PSD_TOL = 1e-9
TP_CAP = 7


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    residual: float


def _finite_square(a, name="matrix") -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2]:
        raise InvalidInput(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} has non-finite entries")
    return arr


def as_symmetric(a, domain: tuple[float, float] | None = None, rtol: float = 1e-12) -> np.ndarray:
    """Validate `a` as a real symmetric matrix and return a symmetrized copy.

    Asymmetry up to ``rtol`` times the largest entry is averaged away; more
    than that raises.  If `domain` ``(lo, hi)`` is given, every entry must lie
    strictly inside it.
    """
    arr = _finite_square(a)
    if arr.ndim != 2:
        raise InvalidInput("expected a single matrix")
    scale = max(1.0, float(np.max(np.abs(arr)))) if arr.size else 1.0
    if np.max(np.abs(arr - arr.T), initial=0.0) > rtol * scale:
        raise InvalidInput("matrix is not symmetric")
    arr = 0.5 * (arr + arr.T)
    if domain is not None:
        lo, hi = domain
        if not (np.all(arr > lo) and np.all(arr < hi)):
            raise InvalidInput(f"entries must lie in the open interval ({lo}, {hi})")
    arr.setflags(write=False)
    return arr


def jacobi_eigh(a, tol: float = EIGEN_TOL, max_sweeps: int = 100):
    """Cyclic Jacobi eigendecomposition of one or a stack of symmetric matrices.

    Returns ``(w, v)`` with eigenvalues ascending along the last axis and
    eigenvectors in the columns of `v`.  Every matrix in the stack is rotated
    until its off-diagonal Frobenius norm drops below ``tol`` times its own
    Frobenius norm.
    """
    arr = _finite_square(a)
    shape = arr.shape
    n = shape[-1]
    m = arr.reshape(-1, n, n).copy()
    m = 0.5 * (m + np.swapaxes(m, 1, 2))
    v = np.broadcast_to(np.eye(n), m.shape).copy()
    scale = np.sqrt(np.sum(m * m, axis=(1, 2)))
    offmask = ~np.eye(n, dtype=bool)
    pairs = [(p, q) for p in range(n) for q in range(p + 1, n)]

    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.where(offmask, m * m, 0.0), axis=(1, 2)))
        if np.all(off <= tol * scale):
            break
        for p, q in pairs:
            apq = m[:, p, q]
            active = apq != 0.0
            if not np.any(active):
                continue
            app = m[:, p, p]
            aqq = m[:, q, q]
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                theta = (aqq - app) / (2.0 * apq)
                big = np.abs(theta) > 1e150
                t = np.where(
                    big,
                    0.5 / theta,
                    np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0)),
                )
            t = np.where(theta == 0.0, 1.0, t)
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            c3 = c[:, None]
            s3 = s[:, None]
            colp = m[:, :, p].copy()
            colq = m[:, :, q].copy()
            m[:, :, p] = c3 * colp - s3 * colq
            m[:, :, q] = s3 * colp + c3 * colq
            rowp = m[:, p, :].copy()
            rowq = m[:, q, :].copy()
            m[:, p, :] = c3 * rowp - s3 * rowq
            m[:, q, :] = s3 * rowp + c3 * rowq
            m[:, p, q] = 0.0
            m[:, q, p] = 0.0
            vp = v[:, :, p].copy()
            vq = v[:, :, q].copy()
            v[:, :, p] = c3 * vp - s3 * vq
            v[:, :, q] = s3 * vp + c3 * vq

    w = np.diagonal(m, axis1=1, axis2=2).copy()
    order = np.argsort(w, axis=1)
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w.reshape(shape[:-1]), v.reshape(shape)


def sym_eigen(a) -> Spectrum:
    """Full spectrum of a real symmetric matrix, sorted ascending."""
    arr = _finite_square(a)
    if arr.ndim != 2:
        raise InvalidInput("expected a single matrix")
    sym = 0.5 * (arr + arr.T)
    w, v = jacobi_eigh(sym)
    residual = float(np.max(np.abs(sym @ v - v * w), initial=0.0))
    return Spectrum(eigenvalues=w, residual=residual)


def min_eigenvalue(a):
    """Smallest eigenvalue of a matrix or of each matrix in a stack."""
    w, _ = jacobi_eigh(a)
    return w[..., 0]


def is_psd(a, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Return ``(psd, lambda_min)``.

    The matrix counts as PSD when ``lambda_min >= -tol * max(1, lambda_max)``.
    """
    if tol < 0:
        raise InvalidInput("tol must be non-negative")
    w = sym_eigen(a).eigenvalues
    if w.size == 0:
        return True, 0.0
    lam_min, lam_max = float(w[0]), float(w[-1])
    return lam_min >= -tol * max(1.0, lam_max), lam_min


def det_lu(a) -> float:
    """Determinant by Gaussian elimination with partial (row) pivoting."""
    m = _finite_square(a).astype(float, copy=True)
    if m.ndim != 2:
        raise InvalidInput("expected a single matrix")
    n = m.shape[0]
    det = 1.0
    for k in range(n):
        piv = k + int(np.argmax(np.abs(m[k:, k])))
        if m[piv, k] == 0.0:
            return 0.0
        if piv != k:
            m[[k, piv]] = m[[piv, k]]
            det = -det
        det *= m[k, k]
        if k + 1 < n:
            factors = m[k + 1:, k] / m[k, k]
            m[k + 1:, k:] -= np.outer(factors, m[k, k:])
    return float(det)


def det_mp(rows):
    """Determinant of a square matrix of mpmath numbers at the current precision.

    Columns are equilibrated first and elimination has no singularity
    tolerance, so the result does not depend on column scaling.
    ``mpmath.det`` reports 0 for [[1, 1e96], [1, 8e96]] because its pivot
    test is relative to the whole matrix norm.
    """
    m = [[mpmath.mpmathify(x) for x in row] for row in rows]
    n = len(m)
    if any(len(row) != n for row in m):
        raise InvalidInput("expected a square matrix")
    det = mpmath.mpf(1)
    for j in range(n):
        scale = max(abs(m[i][j]) for i in range(n))
        if scale == 0:
            return mpmath.mpf(0)
        det *= scale
        for i in range(n):
            m[i][j] /= scale
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(m[i][k]))
        if m[piv][k] == 0:
            return mpmath.mpf(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[k])]
    return det


def to_fractions(a) -> list[list[Fraction]]:
    rows = [[Fraction(x) for x in row] for row in a]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise InvalidInput("ragged matrix")
    return rows


def _bareiss_integer(m: list[list[int]]) -> int:
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        mkk = m[k][k]
        rowk = m[k]
        for i in range(k + 1, n):
            rowi = m[i]
            mik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * mkk - mik * rowk[j]) // prev
            rowi[k] = 0
        prev = mkk
    return sign * m[n - 1][n - 1]


def det_exact(a) -> Fraction:
    """Exact determinant of a rational matrix by fraction-free elimination.

    Each row is first cleared of denominators, then integer Bareiss
    elimination runs with exact divisions.
    """
    rows = to_fractions(a)
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise InvalidInput("det_exact requires a square matrix")
    scale = Fraction(1)
    ints = []
    for r in rows:
        lcm = 1
        for x in r:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        ints.append([int(x * lcm) for x in r])
        scale *= lcm
    return Fraction(_bareiss_integer(ints)) / scale


def _check_index_tuple(idx: Sequence[int], n: int) -> tuple[int, ...]:
    t = tuple(int(i) for i in idx)
    if len(t) == 0:
        raise InvalidInput("index tuple must be non-empty")
    if len(set(t)) != len(t):
        raise InvalidInput(f"repeated index in {t}")
    if any(i < 1 or i > n for i in t):
        raise InvalidInput(f"index out of range 1..{n} in {t}")
    return t


def tuple_sign(idx: Sequence[int]) -> int:
    """(-1) raised to the number of inversions of the tuple."""
    t = list(idx)
    if len(set(t)) != len(t):
        raise InvalidInput(f"repeated index in {tuple(t)}")
    inversions = sum(1 for a, b in itertools.combinations(t, 2) if a > b)
    return -1 if inversions % 2 else 1


def minor(a, rows: Sequence[int], cols: Sequence[int]):
    """The submatrix with the given 1-based rows and columns, in the given order.

    Works for numpy arrays and for nested lists (e.g. of Fractions); the
    return type follows the input.
    """
    if len(rows) != len(cols):
        raise InvalidInput("row and column tuples must have equal length")
    if isinstance(a, np.ndarray):
        n_rows, n_cols = a.shape
        r = _check_index_tuple(rows, n_rows)
        c = _check_index_tuple(cols, n_cols)
        return a[np.ix_([i - 1 for i in r], [j - 1 for j in c])]
    n_rows, n_cols = len(a), len(a[0])
    r = _check_index_tuple(rows, n_rows)
    c = _check_index_tuple(cols, n_cols)
    return [[a[i - 1][j - 1] for j in c] for i in r]


def _is_exact(a) -> bool:
    return not isinstance(a, np.ndarray) and all(
        isinstance(x, (int, Fraction)) for row in a for x in row
    )


def _all_minors(a, cap: int):
    exact = _is_exact(a)
    arr = a if exact else _finite_square(a)
    n = len(arr)
    if n > cap:
        raise CapExceeded(f"minor enumeration capped at n <= {cap}, got {n}")
    for k in range(1, n + 1):
        for rows in itertools.combinations(range(1, n + 1), k):
            for cols in itertools.combinations(range(1, n + 1), k):
                sub = minor(arr, rows, cols)
                yield rows, cols, (det_exact(sub) if exact else det_lu(sub))


def is_strictly_tp(a, cap: int = TP_CAP) -> bool:
    """True iff every minor on increasing row/column tuples is positive.

    Nested lists of ints/Fractions are checked exactly; arrays in floating point.
    """
    return all(d > 0 for _, _, d in _all_minors(a, cap))


def is_totally_nonnegative(a, tol: float = 0.0, cap: int = TP_CAP) -> bool:
    """Brute-force total non-negativity: all minors >= -tol * scale**k."""
    exact = _is_exact(a)
    scale = 1.0 if exact else max(1.0, float(np.max(np.abs(np.asarray(a, dtype=float)))))
    return all(d >= -tol * scale ** len(r) for r, _, d in _all_minors(a, cap))


def _moments(moments: Sequence[float]) -> tuple[np.ndarray, int]:
    s = np.asarray(moments, dtype=float).ravel()
    if s.size == 0 or s.size % 2 == 0:
        raise InvalidInput(f"moment sequence must have odd length 2N-1, got {s.size}")
    if not np.all(np.isfinite(s)):
        raise InvalidInput("moments must be finite")
    return s, (s.size + 1) // 2


def hankel_build(moments: Sequence[float]) -> np.ndarray:
    """N x N Hankel matrix with entries s_{i+j} (0-based) from 2N-1 moments."""
    s, n = _moments(moments)
    idx = np.add.outer(np.arange(n), np.arange(n))
    return s[idx]


def hankel_truncate(a) -> np.ndarray:
    """Drop the first column and the last row."""
    arr = np.asarray(a)
    return arr[:-1, 1:]


def is_tn_hankel(moments: Sequence[float], tol: float = PSD_TOL) -> bool:
    """Total non-negativity of the Hankel matrix via two PSD tests.

    A Hankel matrix is TN iff it and its truncation have non-negative
    principal minors; the truncation is padded with a zero row and column
    so both tests run at dimension N.
    """
    a = hankel_build(moments)
    if not is_psd(a, tol)[0]:
        return False
    n = a.shape[0]
    padded = np.zeros((n, n))
    padded[: n - 1, : n - 1] = hankel_truncate(a)
    return is_psd(padded, tol)[0]


def _check_sampler(n: int, rho: float, rank: int) -> None:
    if n < 1:
        raise InvalidInput("N must be positive")
    if not (1 <= rank <= n):
        raise InvalidInput(f"rank must lie in [1, {n}], got {rank}")
    if not (rho > 0 and math.isfinite(rho)):
        raise InvalidInput("rho must be positive and finite")


def sample_psd_batch(n: int, rho: float, rank: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Stack of `count` Gram matrices W W^T with entries in (0, rho).

    W has i.i.d. Uniform(0, 1) entries (resampled if exactly zero).  Each
    matrix is rescaled so its largest entry is rho * (1 - 1e-6) times a factor
    that equals 1 half the time and is Uniform(0, 1) otherwise, so samples
    both hug the boundary of the domain and spread through it.
    """
    _check_sampler(n, rho, rank)
    w = rng.uniform(0.0, 1.0, size=(count, n, rank))
    w = np.where(w == 0.0, 0.5, w)
    a = w @ np.swapaxes(w, 1, 2)
    shrink = np.where(rng.uniform(size=count) < 0.5, 1.0, rng.uniform(1e-3, 1.0, size=count))
    target = rho * (1.0 - 1e-6) * shrink
    a *= (target / np.max(a, axis=(1, 2)))[:, None, None]
    return 0.5 * (a + np.swapaxes(a, 1, 2))


def sample_signed_psd_batch(n: int, rho: float, rank: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Like :func:`sample_psd_batch` with random signs on the factor entries.

    Entries land in (-rho, rho).
    """
    _check_sampler(n, rho, rank)
    w = rng.uniform(0.0, 1.0, size=(count, n, rank))
    w = np.where(w == 0.0, 0.5, w)
    w *= rng.choice([-1.0, 1.0], size=w.shape)
    a = w @ np.swapaxes(w, 1, 2)
    shrink = np.where(rng.uniform(size=count) < 0.5, 1.0, rng.uniform(1e-3, 1.0, size=count))
    target = rho * (1.0 - 1e-6) * shrink
    a *= (target / np.max(np.abs(a), axis=(1, 2)))[:, None, None]
    return 0.5 * (a + np.swapaxes(a, 1, 2))


def sample_psd(n: int, rho: float, rank: int, seed: int) -> np.ndarray:
    """One PSD matrix of rank <= `rank` with entries in (0, rho), seeded."""
    return sample_psd_batch(n, rho, rank, 1, np.random.default_rng(seed))[0]


def _drop(n: int, removed: Sequence[int]) -> tuple[int, ...]:
    return tuple(i for i in range(1, n + 1) if i not in removed)


def _det_sub(a, rows, cols) -> Fraction:
    if len(rows) == 0:
        return Fraction(1)
    return det_exact(minor(a, rows, cols))


def dodgson_residual(a, i1: int, i2: int, j1: int, j2: int) -> Fraction:
    """Exact residual of Dodgson condensation for the pivots (i1, i2), (j1, j2).

    Minors of size zero have determinant 1.
    """
    m = to_fractions(a)
    n = len(m)
    if n < 2 or any(len(r) != n for r in m):
        raise InvalidInput("Dodgson condensation needs a square matrix with n >= 2")
    if not (1 <= i1 < i2 <= n and 1 <= j1 < j2 <= n):
        raise InvalidInput("need 1 <= i1 < i2 <= n and 1 <= j1 < j2 <= n")
    lhs = det_exact(m) * _det_sub(m, _drop(n, (i1, i2)), _drop(n, (j1, j2)))
    rhs = (
        _det_sub(m, _drop(n, (i1,)), _drop(n, (j1,))) * _det_sub(m, _drop(n, (i2,)), _drop(n, (j2,)))
        - _det_sub(m, _drop(n, (i1,)), _drop(n, (j2,))) * _det_sub(m, _drop(n, (i2,)), _drop(n, (j1,)))
    )
    return lhs - rhs


def karlin_residual(x1, x2, y1, y2, b) -> Fraction:
    """Exact residual of Karlin's identity for columns X1, X2, Y1, Y2 and block B.

    `b` is n x (n-2) (an empty list of rows, or rows of length 0, when n = 2).
    """
    cols = [[Fraction(v) for v in c] for c in (x1, x2, y1, y2)]
    n = len(cols[0])
    if n < 2 or any(len(c) != n for c in cols):
        raise InvalidInput("vectors must share a length n >= 2")
    brows = [[Fraction(v) for v in row] for row in b] if len(b) else [[] for _ in range(n)]
    if len(brows) != n or any(len(r) != n - 2 for r in brows):
        raise InvalidInput(f"B must be {n} x {n - 2}")

    def d(p, q):
        return det_exact([[p[i], q[i], *brows[i]] for i in range(n)])

    X1, X2, Y1, Y2 = cols
    return d(X1, Y1) * d(X2, Y2) - d(X1, Y2) * d(X2, Y1) - d(X1, X2) * d(Y1, Y2)
