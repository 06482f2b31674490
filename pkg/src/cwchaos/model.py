"""Curie-Weiss model core: parameters, fixed point, variances and the exact spin-count law.

The Gibbs weight of a configuration with ``l`` positive spins out of ``N`` is
``exp(beta (2l - N)^2 / (2N) + h (2l - N))``, and there are ``C(N, l)`` such
configurations, so the law of the positive-spin count is a one-dimensional
sum that is evaluated exactly in log-space.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import specfn
from .errors import CriticalPoint, DomainError, UnnormalizedPmf


class Regime(str, enum.Enum):
    SUBCRITICAL = "subcritical"
    SUPERCRITICAL = "supercritical"
    FIELD = "field"
    CRITICAL = "critical"


class Branch(str, enum.Enum):
    UNIQUE = "unique"
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class ModelParams:
    beta: float
    h: float = 0.0

    def __post_init__(self):
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise DomainError(f"beta must be a positive finite number, got {self.beta!r}")
        if not math.isfinite(self.h):
            raise DomainError(f"h must be finite, got {self.h!r}")

    @property
    def regime(self) -> Regime:
        if self.h != 0:
            return Regime.FIELD
        if self.beta < 1:
            return Regime.SUBCRITICAL
        if self.beta > 1:
            return Regime.SUPERCRITICAL
        return Regime.CRITICAL

    def require_noncritical(self) -> None:
        if self.regime is Regime.CRITICAL:
            raise CriticalPoint("(beta, h) = (1, 0) has no finite limiting variance")


@dataclass(frozen=True)
class Magnetization:
    m: float
    v2: float | None
    branch: Branch
    # 1 - |m| evaluated from the fixed-point argument, exact to a few ulp even when |m| ~ 1.
    gap: float = 1.0

    def flipped(self) -> "Magnetization":
        branch = {Branch.POSITIVE: Branch.NEGATIVE,
                  Branch.NEGATIVE: Branch.POSITIVE}.get(self.branch, self.branch)
        return Magnetization(-self.m, self.v2, branch, self.gap)

    @property
    def one_minus_m(self) -> float:
        return self.gap if self.m >= 0 else 2.0 - self.gap

    @property
    def one_plus_m(self) -> float:
        return self.gap if self.m < 0 else 2.0 - self.gap

    @property
    def one_minus_m2(self) -> float:
        return self.gap * (2.0 - self.gap)


@dataclass(frozen=True)
class GammaPair:
    gamma1: float
    gamma2: float


@dataclass(frozen=True)
class Pmf:
    """Integer-supported pmf on ``offset, ..., offset + len(log_p) - 1`` stored as log-masses."""

    offset: int
    log_p: np.ndarray = field(repr=False)
    normalized: bool = False

    @classmethod
    def from_log_weights(cls, offset: int, log_w) -> "Pmf":
        log_w = np.asarray(log_w, dtype=float)
        return cls(int(offset), log_w - specfn.log_sum_exp(log_w), True)

    @classmethod
    def point_mass(cls, at: int) -> "Pmf":
        return cls(int(at), np.zeros(1), True)

    def __len__(self) -> int:
        return len(self.log_p)

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + len(self.log_p))

    @property
    def probs(self) -> np.ndarray:
        return np.exp(self.log_p)

    def normalize(self) -> "Pmf":
        if self.normalized:
            return self
        return Pmf.from_log_weights(self.offset, self.log_p)

    def require_normalized(self) -> None:
        if not self.normalized:
            raise UnnormalizedPmf("pmf has not been normalized")

    def prob(self, j: int) -> float:
        i = j - self.offset
        if 0 <= i < len(self.log_p):
            return float(math.exp(self.log_p[i]))
        return 0.0

    def mean(self) -> float:
        return float(np.dot(self.support, self.probs))

    def var(self) -> float:
        p = self.probs
        mu = float(np.dot(self.support, p))
        return float(np.dot((self.support - mu) ** 2, p))

    def embed(self, lo: int, hi: int) -> "Pmf":
        """Same law written on the range ``lo..hi`` (which must cover the support)."""
        if lo > self.offset or hi < self.offset + len(self.log_p) - 1:
            raise DomainError("embedding range does not cover the support")
        out = np.full(hi - lo + 1, -np.inf)
        out[self.offset - lo:self.offset - lo + len(self.log_p)] = self.log_p
        return Pmf(lo, out, self.normalized)

    def reflected(self, total: int) -> "Pmf":
        """Law of ``total - X``."""
        return Pmf(total - (self.offset + len(self.log_p) - 1), self.log_p[::-1].copy(),
                   self.normalized)


def _bisect(g, lo: float, hi: float, tol: float = 1e-14, max_iter: int = 200) -> float:
    glo = g(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (gm < 0) == (glo < 0):
            lo, glo = mid, gm
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def _positive_root(beta: float, h: float) -> float:
    """Largest root of z = tanh(beta z + h) for h >= 0, excluding the trivial z = 0 case."""
    g = lambda z: z - math.tanh(beta * z + h)
    lo = max(0.0, math.tanh(h)) + 1e-15
    hi = 1.0 - 1e-15
    if g(hi) <= 0:
        # tanh(beta + h) rounds to 1: the root is within an ulp of 1.
        return hi
    return _bisect(g, lo, hi)


def _tanh_gap(x: float) -> float:
    """1 - tanh(|x|) without cancellation."""
    return 2.0 / (1.0 + math.exp(2.0 * abs(x))) if abs(x) < 350 else 0.0


def _variance_from_q(beta: float, q: float) -> float:
    return q / (1.0 - beta * q)


def solve_magnetization(params: ModelParams, need_variance: bool = True) -> Magnetization:
    """Largest-in-absolute-value root of z = tanh(beta z + h), with its limiting variance.

    In the supercritical regime the positive root is returned; use
    :meth:`Magnetization.flipped` for the negative one.  At the critical point
    ``m = 0`` is returned only with ``need_variance=False``.
    """
    beta, h = params.beta, params.h
    regime = params.regime
    if regime is Regime.CRITICAL:
        if need_variance:
            params.require_noncritical()
        return Magnetization(0.0, None, Branch.UNIQUE)
    if regime is Regime.SUBCRITICAL:
        return Magnetization(0.0, 1.0 / (1.0 - beta), Branch.UNIQUE, 1.0)
    if regime is Regime.SUPERCRITICAL:
        m, branch = _positive_root(beta, 0.0), Branch.POSITIVE
    else:
        m, branch = _positive_root(beta, abs(h)), Branch.UNIQUE
    # |m| = tanh(beta |m| + |h|) at the root, so 1 - |m| follows from the argument.
    gap = _tanh_gap(beta * m + abs(h))
    q = gap * (2.0 - gap)
    if h < 0:
        m = -m
    return Magnetization(m, _variance_from_q(beta, q), branch, gap)


def limit_variance(params: ModelParams) -> float:
    """(1 - m^2) / (1 - beta (1 - m^2))."""
    return solve_magnetization(params).v2


def gamma_pair(params: ModelParams) -> GammaPair:
    """Beta-mixing parameters (per spin) matching the spin-count LLT."""
    beta = params.beta
    mag = solve_magnetization(params)
    num = 1.0 - beta * mag.one_minus_m2
    return GammaPair(num / (2.0 * beta * mag.one_minus_m), num / (2.0 * beta * mag.one_plus_m))


def spin_count_log_weights(N: int, params: ModelParams) -> np.ndarray:
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N!r}")
    s = 2.0 * np.arange(N + 1) - N
    return specfn.log_binomial_row(N) + params.beta * s * s / (2.0 * N) + params.h * s


def exact_spin_count_pmf(N: int, params: ModelParams) -> Pmf:
    """Exact law of the number of positive spins among all N under the Gibbs measure."""
    return Pmf.from_log_weights(0, spin_count_log_weights(N, params))


def log_partition_exact(N: int, params: ModelParams) -> float:
    return specfn.log_sum_exp(spin_count_log_weights(N, params))


def entropy_rate(x: float) -> float:
    """((1+x) ln(1+x) + (1-x) ln(1-x)) / 2 on [-1, 1], with 0 ln 0 = 0."""
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"entropy_rate requires |x| <= 1, got {x!r}")

    def xlogx(y):
        return 0.0 if y == 0 else y * math.log(y)

    return 0.5 * (xlogx(1.0 + x) + xlogx(1.0 - x))


def log_partition_asymptotic(N: int, beta: float) -> float:
    """Leading-order ln Z_N at h = 0 in the low-temperature phase (beta > 1)."""
    if not beta > 1:
        raise DomainError(f"asymptotic partition function needs beta > 1, got {beta!r}")
    mag = solve_magnetization(ModelParams(beta, 0.0))
    m = mag.m
    prefactor = math.log(2.0 * math.sqrt(mag.v2) / math.sqrt(mag.one_minus_m2))
    return prefactor + N * math.log(2.0) - N * (entropy_rate(m) - beta * m * m / 2.0)


_QUARTIC_CUTOFF = 10.0  # exp(-10^4 / 12) underflows to 0


def _quartic(y: float) -> float:
    return math.exp(-y ** 4 / 12.0)


@functools.lru_cache(maxsize=1)
def critical_normalizer() -> float:
    """Integral of exp(-y^4/12) over the real line, by adaptive quadrature."""
    return 2.0 * specfn.adaptive_simpson(_quartic, 0.0, _QUARTIC_CUTOFF, tol=1e-12)


def critical_density(x: float) -> float:
    """Limit density of N^(1/4) m_N at beta = 1, h = 0."""
    return _quartic(x) / critical_normalizer()


def critical_cdf(x: float) -> float:
    if x <= -_QUARTIC_CUTOFF:
        return 0.0
    if x >= _QUARTIC_CUTOFF:
        return 1.0
    if x <= 0:
        return specfn.adaptive_simpson(_quartic, -_QUARTIC_CUTOFF, x, tol=1e-12) / critical_normalizer()
    return 1.0 - critical_cdf(-x)
