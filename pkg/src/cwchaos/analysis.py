"""Limit predictors and finite-N convergence studies for the k-spin marginals."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .dist import Beta, Finite, MixingLaw, Point, marginal_spin_count_pmf, mixed_binomial_pmf
from .errors import DegenerateVariance, DomainError, RegimeError
from .model import (ModelParams, Regime, critical_cdf, critical_density, exact_spin_count_pmf,
                    gamma_pair, solve_magnetization)
from .specfn import adaptive_simpson
from .tv import GaussianMixture, gaussian_tv, tv_discrete


@dataclass(frozen=True)
class LimitPrediction:
    regime: Regime
    alpha: float
    reference_law: MixingLaw
    predicted_tv: float
    sigma_alpha_sq: float
    binomial_variance: float


@dataclass(frozen=True)
class Row:
    N: int
    k: int
    observed: float
    predicted: float
    gap: float


@dataclass
class ConvergenceTable:
    rows: list = field(default_factory=list)

    def column(self, name: str) -> list:
        return [getattr(r, name) for r in self.rows]


def beta_param_match(a: float, sigma_sq: float,
                     one_minus_a: float | None = None) -> tuple[float, float]:
    """Per-spin Beta parameters whose mixed binomial has mean a N and variance ~ sigma_sq N.

    When a is within a few ulp of 1 the rounded value of a no longer determines
    1 - a; pass ``one_minus_a`` explicitly in that case.
    """
    b = 1.0 - a if one_minus_a is None else one_minus_a
    if not (0.0 < a < 1.0 and 0.0 < b < 1.0):
        raise DomainError(f"a must lie in (0, 1), got {a!r}")
    binom_var = a * b
    spread = sigma_sq - binom_var
    if not spread > 0:
        raise DegenerateVariance(f"sigma^2 = {sigma_sq!r} must exceed a(1-a) = {binom_var!r}")
    return a * binom_var / spread, binom_var * b / spread


def mixed_binomial_variance(gamma1: float, gamma2: float, alpha: float) -> float:
    """Per-sample variance of Bin(k, Beta(gamma1 N, gamma2 N)) as k/N -> alpha."""
    s = gamma1 + gamma2
    return gamma1 * gamma2 / s ** 2 + alpha * gamma1 * gamma2 / s ** 3


def _check_alpha(alpha: float) -> None:
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha!r}")


def theorem1_limit(params: ModelParams, alpha: float) -> LimitPrediction:
    """Predicted TV limit between the k-spin marginal and its product (or two-product) approximant."""
    _check_alpha(alpha)
    mag = solve_magnetization(params)
    m, beta = mag.m, params.beta
    q = mag.one_minus_m2
    s2 = (q / 4.0) * (1.0 + alpha * beta * q / (1.0 - beta * q))
    regime = params.regime
    if regime is Regime.SUPERCRITICAL:
        law = Finite((0.5, 0.5), (Point((1 + m) / 2), Point((1 - m) / 2)))
    else:
        law = Point((1 + m) / 2)
    return LimitPrediction(regime, alpha, law, gaussian_tv(s2, q / 4.0), s2, q / 4.0)


def sample_size(N: int, alpha: float) -> int:
    """k(N) = round(alpha N) (ties to even), or ceil(sqrt N) when alpha = 0."""
    _check_alpha(alpha)
    if alpha == 0:
        return math.isqrt(N - 1) + 1 if N > 1 else 1
    return max(1, min(N, round(alpha * N)))


def llt_target(N: int, params: ModelParams) -> GaussianMixture:
    mag = solve_magnetization(params)
    var = N * mag.v2 / 4.0
    if params.regime is Regime.SUPERCRITICAL:
        return GaussianMixture(((0.5, N * (1 + mag.m) / 2, var), (0.5, N * (1 - mag.m) / 2, var)))
    return GaussianMixture(((1.0, N * (1 + mag.m) / 2, var),))


def llt_sup_error(N: int, params: ModelParams) -> float:
    """sqrt(N) * max_l |P(spin count = l) - Gaussian (mixture) density at l|."""
    target = llt_target(N, params)
    pmf = exact_spin_count_pmf(N, params)
    return math.sqrt(N) * float(np.max(np.abs(pmf.probs - target.density(pmf.support))))


def beta_approximant(params: ModelParams, N: int, k: int) -> MixingLaw:
    g = gamma_pair(params)
    if params.regime is Regime.SUPERCRITICAL:
        return Finite((0.5, 0.5), (Beta(g.gamma1 * N, g.gamma2 * N), Beta(g.gamma2 * N, g.gamma1 * N)))
    return Beta(g.gamma1 * N, g.gamma2 * N)


def theorem34_gap(N: int, k: int, params: ModelParams) -> float:
    """TV between the exact k-marginal and the beta-binomial approximant (unique-phase regimes)."""
    if params.regime not in (Regime.SUBCRITICAL, Regime.FIELD):
        raise RegimeError(f"needs beta < 1 at h = 0, or h != 0; got regime {params.regime.value}")
    exact = marginal_spin_count_pmf(N, k, params)
    return tv_discrete(exact, mixed_binomial_pmf(k, beta_approximant(params, N, k)))


def theorem36_gap(N: int, k: int, beta: float) -> float:
    """TV between the exact k-marginal and the symmetric two-beta approximant (beta > 1, h = 0)."""
    if not beta > 1:
        raise RegimeError(f"needs beta > 1 at h = 0, got beta={beta!r}")
    params = ModelParams(beta, 0.0)
    exact = marginal_spin_count_pmf(N, k, params)
    return tv_discrete(exact, mixed_binomial_pmf(k, beta_approximant(params, N, k)))


def theorem1_row(params: ModelParams, N: int, k: int, alpha: float) -> Row:
    pred = theorem1_limit(params, alpha)
    observed = tv_discrete(marginal_spin_count_pmf(N, k, params),
                           mixed_binomial_pmf(k, pred.reference_law))
    return Row(N, k, observed, pred.predicted_tv, abs(observed - pred.predicted_tv))


def _table(fn, Ns: Iterable[int], threads: int | None) -> ConvergenceTable:
    Ns = list(Ns)
    if threads is not None and threads > 1 and len(Ns) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(fn, Ns))
    else:
        rows = [fn(N) for N in Ns]
    return ConvergenceTable(rows)


def theorem1_empirical(params: ModelParams, alpha: float, Ns: Sequence[int],
                       threads: int | None = None) -> ConvergenceTable:
    """One row per N with k = k(N): observed TV to the approximant, predicted limit and their gap."""
    params.require_noncritical()
    _check_alpha(alpha)
    return _table(lambda N: theorem1_row(params, N, sample_size(N, alpha), alpha), Ns, threads)


def gap_table(params: ModelParams, alpha: float, Ns: Sequence[int],
              threads: int | None = None) -> ConvergenceTable:
    """theorem34_gap / theorem36_gap along Ns; predicted column is the limit 0."""
    def row(N):
        k = sample_size(N, alpha)
        if params.regime is Regime.SUPERCRITICAL:
            g = theorem36_gap(N, k, params.beta)
        else:
            g = theorem34_gap(N, k, params)
        return Row(N, k, g, 0.0, g)

    if params.regime is Regime.CRITICAL:
        params.require_noncritical()
    return _table(row, Ns, threads)


def critical_law(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Atoms and masses of N^(1/4) m_N at beta = 1, h = 0."""
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N!r}")
    pmf = exact_spin_count_pmf(N, ModelParams(1.0, 0.0))
    atoms = N ** 0.25 * (2.0 * pmf.support / N - 1.0)
    return atoms, pmf.probs


def critical_cdf_distance(N: int) -> float:
    """Kolmogorov distance between the law of N^(1/4) m_N at criticality and the quartic limit."""
    atoms, mass = critical_law(N)
    limit = np.empty(len(atoms))
    limit[0] = critical_cdf(atoms[0])
    for idx in range(1, len(atoms)):
        limit[idx] = limit[idx - 1] + adaptive_simpson(critical_density, atoms[idx - 1], atoms[idx],
                                                       tol=1e-14)
    after = np.cumsum(mass)
    before = after - mass
    return float(min(1.0, max(np.max(np.abs(after - limit)), np.max(np.abs(before - limit)))))
