"""Power sums, entrywise application, and positivity-preserver checks.

A :class:`PowerSum` is a finite sum ``sum_i c_i x^{e_i}`` with real exponents
``e_i >= 0``, optionally tagged with the domain it is meant to act on.  The
functions here evaluate it, apply it entrywise to matrices, check the
Horn-type sign conditions, search for matrices it fails to keep PSD, and
build series with prescribed coefficient signs.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import mpmath
import numpy as np

from .errors import (
    DomainError,
    InvalidInput,
    NumericalFailure,
    PatternInfeasible,
)
from .linalg import jacobi_eigh, sample_psd_batch, sample_signed_psd_batch
from .symfun import as_power_tuple, gen_vdm_det, is_integral, schur_tableaux, vandermonde
from .thresholds import is_feasible_full_rank, sharp_C

__all__ = [
    "Domain",
    "PowerSum",
    "SignPattern",
    "CertConfig",
    "CertReport",
    "Witness",
    "ComplexCounterexample",
    "ps_eval",
    "ps_derivative",
    "entrywise_apply",
    "cauchy_binet_det",
    "horn_sign_check",
    "certify_preserver",
    "corner_sequence",
    "epsilon_sequence",
    "unbounded_threshold",
    "construct_sign_series",
    "complex_counterexample",
    "two_sided_witness",
]

BATCH = 1024
UNBOUNDED_SCALES = (0.1, 1.0, 10.0, 100.0)
DK_TOL = 1e-12
DK_MAX_ITER = 10_000
SPAN_RTOL = 1e-10


# ---------------------------------------------------------------------------
# Domains and power sums
# ---------------------------------------------------------------------------

_KINDS = ("bounded", "unbounded", "two_sided")


@dataclass(frozen=True)
class Domain:
    """Entry domain: (0, rho), (0, inf) or (-rho, rho)."""

    kind: str
    rho: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidInput(f"unknown domain kind {self.kind!r}")
        if self.kind == "unbounded":
            if self.rho is not None:
                raise InvalidInput("the unbounded domain takes no rho")
        elif not (self.rho is not None and self.rho > 0 and math.isfinite(self.rho)):
            raise InvalidInput(f"{self.kind} domain needs a positive finite rho")

    @classmethod
    def bounded(cls, rho: float) -> "Domain":
        return cls("bounded", float(rho))

    @classmethod
    def unbounded(cls) -> "Domain":
        return cls("unbounded")

    @classmethod
    def two_sided(cls, rho: float) -> "Domain":
        return cls("two_sided", float(rho))

    def contains(self, x) -> np.ndarray:
        # 0 is admitted at the lower end of the positive domains.
        x = np.asarray(x, dtype=float)
        if self.kind == "bounded":
            return (x >= 0) & (x < self.rho)
        if self.kind == "unbounded":
            return (x >= 0) & np.isfinite(x)
        return (x > -self.rho) & (x < self.rho)


def _canonical_exponent(e):
    if isinstance(e, Fraction):
        e = float(e) if e.denominator != 1 else int(e)
    if isinstance(e, (int, np.integer)):
        return int(e)
    e = float(e)
    if not math.isfinite(e):
        raise InvalidInput("exponents must be finite")
    return int(e) if e.is_integer() else e


@dataclass(frozen=True)
class PowerSum:
    """Finite sum of powers, canonical: increasing exponents, no zero terms.

    ``terms`` is a tuple of ``(exponent, coefficient)`` pairs.  Coefficients
    keep their numeric type, so ints and Fractions give exact evaluations.
    """

    terms: tuple = ()
    domain: Domain | None = None

    def __post_init__(self):
        merged: dict = {}
        for e, c in self.terms:
            e = _canonical_exponent(e)
            if e < 0:
                raise InvalidInput("exponents must be non-negative")
            if isinstance(c, float) and not math.isfinite(c):
                raise InvalidInput("coefficients must be finite")
            merged[e] = merged.get(e, 0) + c
        terms = tuple((e, merged[e]) for e in sorted(merged) if merged[e] != 0)
        object.__setattr__(self, "terms", terms)
        if self.domain is not None and self.domain.kind == "two_sided" and not self.integral:
            raise InvalidInput("a two-sided domain needs integral exponents")

    @classmethod
    def from_pairs(cls, exponents: Sequence[float], coefficients: Sequence[float], domain: Domain | None = None):
        if len(exponents) != len(coefficients):
            raise InvalidInput("exponents and coefficients differ in length")
        return cls(tuple(zip(exponents, coefficients)), domain)

    @classmethod
    def parse(cls, text: str, domain: Domain | None = None) -> "PowerSum":
        """Parse ``c0*x^e0 + c1*x^e1 - ...``.

        A term may omit its coefficient (``x^2``) or its power (``3``, ``2*x``).
        """
        return cls(_parse_terms(text), domain)

    @property
    def exponents(self) -> tuple:
        return tuple(e for e, _ in self.terms)

    @property
    def coefficients(self) -> tuple:
        return tuple(c for _, c in self.terms)

    @property
    def integral(self) -> bool:
        return all(isinstance(e, int) for e in self.exponents)

    def with_domain(self, domain: Domain | None) -> "PowerSum":
        return PowerSum(self.terms, domain)

    def __add__(self, other: "PowerSum") -> "PowerSum":
        return PowerSum(self.terms + other.terms, self.domain or other.domain)

    def scaled(self, s) -> "PowerSum":
        return PowerSum(tuple((e, s * c) for e, c in self.terms), self.domain)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mag = abs(c)
            coef = _format_number(mag)
            if e == 0:
                body = coef
            else:
                power = "x" if e == 1 else f"x^{_format_number(e)}"
                body = power if mag == 1 else f"{coef}*{power}"
            sign = "-" if c < 0 else "+"
            if not parts:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)


_NUMBER = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_TERM = re.compile(
    rf"\s*(?P<sign>[+-])?\s*(?P<coef>{_NUMBER})?\s*(?P<star>\*)?\s*"
    rf"(?P<x>x(?:\s*\^\s*(?P<exp>{_NUMBER}))?)?\s*"
)


def _parse_terms(text: str) -> tuple:
    if not isinstance(text, str) or not text.strip():
        raise InvalidInput("empty power sum")
    pos, terms = 0, []
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos:
            raise InvalidInput(f"cannot parse power sum at {text[pos:]!r}")
        if m.group("coef") is None and m.group("x") is None:
            raise InvalidInput(f"cannot parse power sum at {text[pos:]!r}")
        if terms and m.group("sign") is None:
            raise InvalidInput(f"missing operator before {text[pos:]!r}")
        if m.group("star") and not (m.group("coef") and m.group("x")):
            raise InvalidInput(f"dangling '*' in {text!r}")
        coef = float(m.group("coef")) if m.group("coef") else 1.0
        if m.group("sign") == "-":
            coef = -coef
        if m.group("x") is None:
            exp = 0
        elif m.group("exp") is None:
            exp = 1
        else:
            exp = float(m.group("exp"))
        terms.append((exp, coef))
        pos = m.end()
    return tuple(terms)


def _format_number(v) -> str:
    if isinstance(v, Fraction):
        v = float(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _check_domain(f: PowerSum, x: np.ndarray) -> None:
    if not np.all(np.isfinite(x)):
        raise DomainError("non-finite argument")
    if f.domain is not None and not np.all(f.domain.contains(x)):
        raise DomainError(f"argument outside the {f.domain.kind} domain")
    if np.any(x < 0) and not f.integral:
        raise DomainError("negative base with a non-integral exponent")


def _power(x: np.ndarray, e) -> np.ndarray:
    if e == 0:
        return np.ones_like(x)
    return np.power(x, e)


def ps_eval(f: PowerSum, x):
    """Evaluate f at a scalar or array.

    Exact (Fraction) when x is an int or Fraction and every exponent is
    integral; floating otherwise.
    """
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool) and f.integral:
        _check_domain(f, np.asarray(float(x)))
        xf = Fraction(x)
        return sum((Fraction(c) * xf**e for e, c in f.terms), Fraction(0))
    arr = np.asarray(x, dtype=float)
    _check_domain(f, arr)
    out = np.zeros_like(arr)
    for e, c in f.terms:
        out = out + float(c) * _power(arr, e)
    return float(out) if out.ndim == 0 else out


def ps_derivative(f: PowerSum) -> PowerSum:
    """Term-by-term derivative; the constant term drops out."""
    return PowerSum(tuple((e - 1, c * e) for e, c in f.terms if e != 0), f.domain)


def entrywise_apply(f: PowerSum, a):
    """f[A] = (f(a_jk)).

    Accepts a float array (a single matrix or a stack) or nested lists of
    ints/Fractions; the latter return nested lists of Fractions.
    """
    if not isinstance(a, np.ndarray) and f.integral:
        rows = [list(r) for r in a]
        if rows and all(isinstance(x, (int, Fraction)) for r in rows for x in r):
            return [[ps_eval(f, x) for x in r] for r in rows]
    arr = np.asarray(a, dtype=float)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2]:
        raise InvalidInput("expected a square matrix or a stack of them")
    return ps_eval(f, arr)


def cauchy_binet_det(f: PowerSum, u: Sequence) -> Fraction:
    """det f[u u^T] = sum over N-subsets B of the support of
    prod_{b in B} c_b * (det u^(o B))^2, computed exactly."""
    if not f.integral:
        raise InvalidInput("the exact determinant needs integral exponents")
    N = len(u)
    if len(f.terms) < N:
        raise InvalidInput(f"support of size {len(f.terms)} is smaller than N = {N}")
    ue = [Fraction(x) for x in u]
    total = Fraction(0)
    for combo in itertools.combinations(f.terms, N):
        exps = tuple(e for e, _ in combo)
        weight = Fraction(1)
        for _, c in combo:
            weight *= Fraction(c)
        d = gen_vdm_det(ue, exps)
        total += weight * d * d
    return total


def _domain_kind(domain) -> str:
    if domain is None:
        return "bounded"
    if isinstance(domain, Domain):
        return domain.kind
    if domain in _KINDS:
        return domain
    raise InvalidInput(f"unknown domain {domain!r}")


def horn_sign_check(f: PowerSum, N: int, domain=None) -> tuple[bool, dict | None]:
    """Horn-type necessary sign conditions.

    Each negative coefficient needs at least N positive coefficients at lower
    exponents and, on the unbounded domain, at least N at higher exponents.
    Returns ``(ok, violation)`` with the first violating term described.
    """
    if N < 1:
        raise InvalidInput("N must be positive")
    kind = _domain_kind(domain if domain is not None else f.domain)
    signs = [c > 0 for _, c in f.terms]
    total_pos = sum(signs)
    before = 0
    for (e, c), pos in zip(f.terms, signs):
        if pos:
            before += 1
            continue
        after = total_pos - before
        if before < N or (kind == "unbounded" and after < N):
            return False, {"exponent": e, "coefficient": c, "positives_before": before, "positives_after": after}
    return True, None


# ---------------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertConfig:
    samples: int = 10_000
    ranks: tuple | None = None
    tol: float = 1e-9
    seed: int = 0
    hp_dps: int = 60
    hp_tol: float = 1e-40

    def __post_init__(self):
        if self.samples < 0:
            raise InvalidInput("samples must be non-negative")
        if not (self.tol >= 0 and self.hp_tol >= 0):
            raise InvalidInput("tolerances must be non-negative")
        if self.hp_dps < 20:
            raise InvalidInput("hp_dps must be at least 20")


@dataclass(frozen=True)
class Witness:
    """A matrix A in the domain with f[A] not PSD.

    ``min_eigenvalue`` is that of f[A] computed at ``precision``.
    """

    matrix: np.ndarray
    min_eigenvalue: float
    precision: str
    source: str
    vector: tuple | None = None


@dataclass(frozen=True)
class CertReport:
    verdict: str
    samples: int
    worst_min_eigenvalue: float
    witness: Witness | None = None
    horn_ok: bool = True
    horn_violation: dict | None = None
    rank_one_probes: int = 0

    def __post_init__(self):
        if self.verdict not in ("Certified", "Falsified", "Inconclusive"):
            raise InvalidInput(f"unknown verdict {self.verdict!r}")
        if self.verdict == "Falsified" and self.witness is None:
            raise InvalidInput("a Falsified report needs a witness")


def corner_sequence(N: int, rho: float, count: int = 24, offsets: Sequence[float] | None = None) -> np.ndarray:
    """Vectors u_k = sqrt(rho) * (1 - 2^-k * d) converging to sqrt(rho) * 1.

    ``d`` defaults to (1, ..., N) / (N + 1); coordinates stay distinct and
    inside (0, sqrt(rho)).
    """
    d = np.asarray(offsets if offsets is not None else np.arange(1, N + 1) / (N + 1), dtype=float)
    eps = 2.0 ** -np.arange(1, count + 1)
    return math.sqrt(rho) * (1.0 - eps[:, None] * d[None, :])


def epsilon_sequence(N: int, rho: float, count: int = 24) -> np.ndarray:
    """Vectors sqrt(rho * eps) * (1, eps, ..., eps^(N-1)) for eps = 2^-k."""
    eps = 2.0 ** -np.arange(1, count + 1)
    powers = eps[:, None] ** np.arange(N)[None, :]
    return np.sqrt(rho * eps)[:, None] * powers


def _mp_probes(N: int, domain: Domain, rng: np.random.Generator, count: int):
    """Rank-one probe vectors built at working mpmath precision."""
    probes = []
    if domain.kind == "unbounded":
        for k in range(0, 17):
            s = mpmath.mpf(10) ** (mpmath.mpf(k) / 2)
            for e in (mpmath.mpf("0.5"), mpmath.mpf("0.1")):
                probes.append(("scaled", [s * e**i for i in range(N)]))
        roots = [mpmath.mpf(1)]
    else:
        roots = [mpmath.sqrt(domain.rho)]
    patterns = [[mpmath.mpf(i + 1) / (N + 1) for i in range(N)]]
    patterns.append([(mpmath.mpf(i + 1) / (N + 1)) ** 2 for i in range(N)])
    for _ in range(2):
        patterns.append([mpmath.mpf(float(x)) for x in np.sort(rng.uniform(0.05, 0.95, N))])
    signs = [[1] * N]
    if domain.kind == "two_sided":
        signs.append([(-1) ** i for i in range(N)])
    for root in roots:
        for k in range(1, count + 1):
            eps = mpmath.mpf(2) ** -k
            for d in patterns:
                for sg in signs:
                    probes.append(("corner", [sg[i] * root * (1 - eps * d[i]) for i in range(N)]))
            u = [root * mpmath.sqrt(eps) * eps**i for i in range(N)]
            for sg in signs:
                probes.append(("epsilon", [sg[i] * u[i] for i in range(N)]))
    return probes


def _mp_apply(f: PowerSum, x):
    total = mpmath.mpf(0)
    for e, c in f.terms:
        total += _mp_coef(c) * (x ** (int(e) if isinstance(e, int) else mpmath.mpf(e)))
    return total


def _mp_coef(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpf(c)


def _mp_positive_definite(m) -> bool:
    """LDL^T pivots all positive."""
    n = m.rows
    a = m.copy()
    for k in range(n):
        piv = a[k, k]
        if piv <= 0:
            return False
        for i in range(k + 1, n):
            factor = a[i, k] / piv
            for j in range(k + 1, i + 1):
                a[i, j] -= factor * a[j, k]
                a[j, i] = a[i, j]
    return True


def _rank_one_search(f: PowerSum, N: int, domain: Domain, cfg: CertConfig, rng: np.random.Generator):
    """First rank-one probe u with f[u u^T] not PSD at high precision."""
    with mpmath.workdps(cfg.hp_dps):
        probes = _mp_probes(N, domain, rng, 24)
        for source, u in probes:
            m = mpmath.matrix(N, N)
            try:
                for i in range(N):
                    for j in range(i, N):
                        x = u[i] * u[j]
                        if domain.kind == "bounded" and not (0 <= x < domain.rho):
                            raise DomainError
                        m[i, j] = m[j, i] = _mp_apply(f, x)
            except DomainError:
                continue
            if _mp_positive_definite(m):
                continue
            ev = mpmath.eigsy(m, eigvals_only=True)
            lam_min, lam_max = min(ev), max(ev)
            if lam_min < -cfg.hp_tol * max(1, lam_max):
                uf = tuple(float(x) for x in u)
                return (
                    Witness(
                        matrix=np.outer(uf, uf),
                        min_eigenvalue=float(lam_min),
                        precision=f"mp{cfg.hp_dps}",
                        source=f"rank-one {source}",
                        vector=uf,
                    ),
                    len(probes),
                    float(lam_min / max(1, lam_max)),
                )
        return None, len(probes), None


def _resolve_domain(f: PowerSum, rho) -> Domain:
    if f.domain is not None:
        if rho is not None and f.domain.rho is not None and float(rho) != f.domain.rho:
            raise InvalidInput("rho disagrees with the power sum's domain")
        return f.domain
    if rho is None:
        raise InvalidInput("rho is required when the power sum carries no domain")
    if rho == math.inf:
        return Domain.unbounded()
    return Domain.bounded(rho)


def certify_preserver(f: PowerSum, N: int, rho=None, config: CertConfig | Mapping | None = None) -> CertReport:
    """Try to falsify that f preserves positivity on N x N PSD matrices.

    The domain comes from ``f.domain`` or from ``rho`` (``math.inf`` means
    unbounded).  Steps: Horn-type sign check; seeded PSD samples of every
    requested rank, tested in float64 with the relative rule
    ``lambda_min >= -tol * max(1, lambda_max)``; a rank-one probe search near
    sqrt(rho) * 1 and along sqrt(rho eps) * (1, eps, ...), tested in
    extended precision against ``hp_tol``.

    Sampling never proves preservation: ``Certified`` means no witness was
    found within the budget.
    """
    if isinstance(config, Mapping):
        config = CertConfig(**config)
    cfg = config or CertConfig()
    if N < 1:
        raise InvalidInput("N must be positive")
    domain = _resolve_domain(f, rho)
    if domain.kind == "two_sided" and not f.integral:
        raise InvalidInput("two-sided certification needs integral exponents")
    g = f.with_domain(domain)
    feasible = is_feasible_full_rank(g.exponents) if g.exponents else True
    ranks = tuple(cfg.ranks) if cfg.ranks is not None else (tuple(range(1, N + 1)) if feasible else (1,))
    if not ranks or any(not (1 <= r <= N) for r in ranks):
        raise InvalidInput(f"ranks must lie in [1, {N}]")
    if any(r > 1 for r in ranks) and not feasible:
        raise InvalidInput("exponents must lie in Z>=0 or [N-2, inf) to test matrices of rank > 1")

    horn_ok, violation = horn_sign_check(g, N, domain)
    probe_rng = np.random.default_rng([cfg.seed, 2**31 - 1])
    probes = 0
    if not horn_ok:
        witness, probes, rel = _rank_one_search(g, N, domain, cfg, probe_rng)
        if witness is not None:
            return CertReport("Falsified", 0, rel, witness, False, violation, probes)

    worst = math.inf
    worst_witness = None
    done = 0
    batch_index = 0
    while done < cfg.samples:
        count = min(BATCH, cfg.samples - done)
        rng = np.random.default_rng([cfg.seed, batch_index])
        rank = ranks[batch_index % len(ranks)]
        if domain.kind == "two_sided":
            mats = sample_signed_psd_batch(N, domain.rho, rank, count, rng)
        elif domain.kind == "bounded":
            mats = sample_psd_batch(N, domain.rho, rank, count, rng)
        else:
            scale = UNBOUNDED_SCALES[batch_index % len(UNBOUNDED_SCALES)]
            mats = sample_psd_batch(N, scale, rank, count, rng)
        fa = ps_eval(g, mats)
        w, _ = jacobi_eigh(fa)
        rel = w[:, 0] / np.maximum(1.0, w[:, -1])
        k = int(np.argmin(rel))
        if rel[k] < worst:
            worst = float(rel[k])
            if rel[k] < -cfg.tol:
                worst_witness = Witness(mats[k].copy(), float(w[k, 0]), "float64", f"sampled rank {rank}")
        done += count
        batch_index += 1

    if worst_witness is not None:
        return CertReport("Falsified", done, worst, worst_witness, horn_ok, violation, probes)
    witness, more, rel = _rank_one_search(g, N, domain, cfg, probe_rng)
    probes += more
    if witness is not None:
        return CertReport("Falsified", done, min(worst, rel), witness, horn_ok, violation, probes)
    verdict = "Certified" if horn_ok else "Inconclusive"
    return CertReport(verdict, done, worst if done else 0.0, None, horn_ok, violation, probes)


# ---------------------------------------------------------------------------
# Sign-pattern series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SignPattern:
    """N guaranteed-positive base exponents and signed tail exponents."""

    base: tuple
    tail: tuple = field(default_factory=tuple)

    def __post_init__(self):
        base = as_power_tuple(self.base)
        tail = tuple((_canonical_exponent(m), int(s)) for m, s in self.tail)
        if any(s not in (-1, 0, 1) for _, s in tail):
            raise InvalidInput("tail signs must be -1, 0 or +1")
        ms = [m for m, _ in tail]
        if any(b <= a for a, b in zip(ms, ms[1:])):
            raise InvalidInput("tail exponents must be strictly increasing")
        if ms and not ms[0] > base[-1]:
            raise InvalidInput("tail exponents must exceed the base exponents")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "tail", tail)

    @property
    def N(self) -> int:
        return len(self.base)


def _unit_threshold(S: tuple, M: int, N: int) -> float:
    """t with t * sum_{s in S} x^s - x^M preserving on P_N((0, inf)).

    S needs at least N exponents below M and N above.  Rank-one bound
    2 * sum_C V(C u {M})^2 / V(n_min)^2 over (N-1)-subsets C of S, combined
    with the derivative bound through the extension principle.
    """
    if N == 1:
        return 1.0
    vmin_sq = float(vandermonde([Fraction(i) for i in range(N)])) ** 2
    t1 = 0.0
    for C in itertools.combinations(S, N - 1):
        t1 += float(vandermonde([Fraction(x) for x in sorted(C + (M,))])) ** 2
    t1 *= 2.0 / vmin_sq
    deriv = tuple(s - 1 for s in S if s > 0)
    weights = [s for s in S if s > 0]
    t2 = M * _unit_threshold(deriv, M - 1, N - 1) / min(weights)
    return max(t1, t2)


def unbounded_threshold(exponents: Sequence[int], coefficients: Sequence[float], M: int, N: int) -> float:
    """Threshold t for t * h - x^M on P_N((0, inf)), h = sum c_s x^s.

    Needs at least N integral exponents on each side of M; uses N on each
    side (the nearest ones) and the smallest coefficient among them.
    """
    pairs = sorted(zip(exponents, coefficients))
    below = [p for p in pairs if p[0] < M]
    above = [p for p in pairs if p[0] > M]
    if len(below) < N or len(above) < N:
        raise PatternInfeasible(f"need {N} positive terms on each side of x^{M}")
    used = below[-N:] + above[:N]
    if any(not float(e).is_integer() for e, _ in used) or not float(M).is_integer():
        raise InvalidInput("the unbounded threshold needs integral exponents")
    S = tuple(int(e) for e, _ in used)
    c_min = min(float(c) for _, c in used)
    return _unit_threshold(S, int(M), N) / c_min


def _inv_factorial(m) -> float:
    return math.exp(-math.lgamma(float(m) + 1.0))


def construct_sign_series(pattern: SignPattern, c: Sequence[float], rho=None, m_max=None) -> PowerSum:
    """Truncated power series with positive base terms and tail signs eps_M.

    Bounded domain (0, rho): c_M = w_M eps_M delta_M with
    delta_M = min(1/M!, 1/C_M), C_M the sharp threshold for the base.
    Unbounded domain (``rho`` None or inf): for eps_M = -1 the block
    h - delta_M x^M + sum_{M' > M, eps = +1} x^M'/M'! is a preserver once
    delta_M <= 1/K_M; other blocks are h + eps_M x^M / M!.  Blocks are
    averaged with weights w_M = 2^(n_{N-1} - M) (renormalized if they sum
    past 1) and the base h keeps its full coefficients.
    """
    N = pattern.N
    base = pattern.base
    c = tuple(float(x) for x in c)
    if len(c) != N or any(not (x > 0 and math.isfinite(x)) for x in c):
        raise InvalidInput(f"need {N} positive base coefficients")
    unbounded = rho is None or rho == math.inf
    tail = [(m, s) for m, s in pattern.tail if m_max is None or m <= m_max]
    weights = {m: 2.0 ** (float(base[-1]) - float(m)) for m, _ in tail}
    total_w = sum(weights.values())
    if total_w > 1.0:
        weights = {m: w / total_w for m, w in weights.items()}

    coef: dict = {}

    def add(e, v):
        coef[e] = coef.get(e, 0.0) + v

    for e, ce in zip(base, c):
        add(e, ce)

    if not unbounded:
        rho = float(rho)
        if not is_feasible_full_rank(base):
            raise PatternInfeasible("base exponents must lie in Z>=0 or [N-2, inf)")
        for m, s in tail:
            if s == 0:
                continue
            k = sharp_C(base, c, m, rho).value
            delta = min(_inv_factorial(m), 1.0 / k)
            add(m, weights[m] * s * delta)
        domain = Domain.bounded(rho)
    else:
        if not (is_integral(base) and all(float(m).is_integer() for m, _ in tail)):
            raise InvalidInput("the unbounded construction needs integral exponents")
        for idx, (m, s) in enumerate(tail):
            if s != -1:
                continue
            later = [mm for mm, ss in tail[idx + 1 :] if ss == 1]
            if len(later) < N:
                raise PatternInfeasible(
                    f"x^{m} has a negative sign but only {len(later)} later positive terms (need {N})"
                )
        for idx, (m, s) in enumerate(tail):
            w = weights[m]
            if s == 1:
                add(m, w * _inv_factorial(m))
            elif s == -1:
                later = [mm for mm, ss in tail[idx + 1 :] if ss == 1]
                exps = list(base) + later
                cs = list(c) + [_inv_factorial(mm) for mm in later]
                k = unbounded_threshold(exps, cs, m, N)
                delta = min(_inv_factorial(m), 1.0 / k)
                add(m, -w * delta)
                for mm in later:
                    add(mm, w * _inv_factorial(mm))
        domain = Domain.unbounded()
    return PowerSum(tuple(coef.items()), domain)


# ---------------------------------------------------------------------------
# Counterexamples
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexCounterexample:
    z0: complex
    M: int
    u: tuple
    determinant: complex


def _partition(n: Sequence[int]) -> tuple[int, ...]:
    N = len(n)
    return tuple(int(n[N - 1 - i]) - (N - 1 - i) for i in range(N))


def _z_polynomial(n: Sequence[int]) -> list[int]:
    """Integer coefficients (ascending) of z -> s_n(1, 2, ..., N-1, z)."""
    lam = _partition(n)
    N = len(lam)
    xs = [Fraction(i) for i in range(1, N)]
    coeffs = [0] * (lam[0] + 1)
    ranges = [range(lam[i + 1], lam[i] + 1) for i in range(N - 1)]
    size = sum(lam)
    for mu in itertools.product(*ranges):
        # mu interlaces lam; s_mu in N-1 variables
        nm = tuple(mu[N - 2 - i] + i for i in range(N - 1))
        coeffs[size - sum(mu)] += int(schur_tableaux(nm, xs))
    return coeffs


def _durand_kerner(coeffs: Sequence[complex], rng: np.random.Generator) -> np.ndarray:
    a = np.asarray(coeffs, dtype=complex)
    a = a / a[-1]
    d = len(a) - 1
    radius = 1.0 + float(np.max(np.abs(a[:-1])))
    z = radius * (0.4 + 0.9j) ** np.arange(d)
    it = 0
    while it < DK_MAX_ITER:
        for _ in range(2000):
            it += 1
            vals = np.polyval(a[::-1], z)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            step = vals / np.prod(diff, axis=1)
            z = z - step
            if np.all(np.abs(step) < DK_TOL * np.maximum(np.abs(z), 1e-300)):
                return z
            if it >= DK_MAX_ITER:
                break
        z = z + radius * 1e-3 * (rng.standard_normal(d) + 1j * rng.standard_normal(d))
    raise NumericalFailure("root finder did not converge")


def complex_counterexample(n: Sequence[int], rho: float, seed: int = 0) -> ComplexCounterexample | None:
    """A complex rank-one witness against every h + c_M x^M with c_M < 0.

    Returns None when n = (h, h+1, ..., h+N-1), where no such witness exists.
    Otherwise z0 is a root off [0, inf) of z -> s_n(1, ..., N-1, z),
    u = s * (1, ..., N-1, z0) with |u_i u_j| < rho, and M is the smallest
    power in (n_{N-1}, n_{N-1} + N] for which u^(o M) leaves the span of the
    u^(o n_j), certified by an N x N determinant above
    1e-10 * (product of column norms).
    """
    n = as_power_tuple(n)
    N = len(n)
    if N < 2:
        raise InvalidInput("need N >= 2")
    if not is_integral(n):
        raise InvalidInput("need integral exponents")
    if not (rho > 0 and math.isfinite(rho)):
        raise InvalidInput("rho must be positive and finite")
    if all(n[i + 1] - n[i] == 1 for i in range(N - 1)):
        return None
    coeffs = _z_polynomial(n)
    low = next(i for i, x in enumerate(coeffs) if x != 0)
    reduced = coeffs[low:]
    if len(reduced) < 2:
        raise NumericalFailure("Schur specialization is a monomial")
    roots = _durand_kerner(reduced, np.random.default_rng(seed))

    def off_axis(z):
        return abs(z.imag) if z.real >= 0 else abs(z)

    z0 = complex(max(roots, key=off_axis))
    if abs(z0.imag) < 1e-10 * max(1.0, abs(z0)):
        z0 = complex(z0.real, 0.0)
    base = np.array([complex(i) for i in range(1, N)] + [z0])
    u = base * (math.sqrt(rho) / (2.0 * np.max(np.abs(base))))
    cols = [u ** int(e) for e in n]
    for M in range(int(n[-1]) + 1, int(n[-1]) + N + 1):
        um = u**M
        best = None
        for subset in itertools.combinations(range(N), N - 1):
            mat = np.column_stack([cols[k] for k in subset] + [um])
            det = complex(np.linalg.det(mat))
            scale = float(np.prod(np.linalg.norm(mat, axis=0)))
            if abs(det) > SPAN_RTOL * scale and (best is None or abs(det) / scale > best[1]):
                best = (det, abs(det) / scale)
        if best is not None:
            return ComplexCounterexample(z0, M, tuple(complex(x) for x in u), best[0])
    raise NumericalFailure("no power in the search window leaves the span")


def two_sided_witness(k: int, t: float, rho: float) -> float:
    """u^T p[A] u for p = t(1 + x^2 + ... + x^2k) - x^(2k+1), A = (rho/2) u u^T,
    u = (1, -1); equals -4 (rho/2)^(2k+1).  Computed exactly."""
    if int(k) != k or k < 1:
        raise InvalidInput("k must be a positive integer")
    if not (t > 0 and rho > 0):
        raise InvalidInput("t and rho must be positive")
    k = int(k)
    terms = tuple((2 * i, Fraction(t)) for i in range(k + 1)) + ((2 * k + 1, -1),)
    p = PowerSum(terms)
    half = Fraction(rho) / 2
    a = [[half, -half], [-half, half]]
    pa = entrywise_apply(p, a)
    u = (1, -1)
    value = sum(u[i] * pa[i][j] * u[j] for i in range(2) for j in range(2))
    return float(value)
