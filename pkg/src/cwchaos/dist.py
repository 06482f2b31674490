"""Binomial, hypergeometric, beta-binomial and mixed-binomial laws, and the exact k-spin marginal."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import specfn
from .errors import DomainError
from .model import ModelParams, Pmf, exact_spin_count_pmf


@dataclass(frozen=True)
class Point:
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"success probability must lie in [0, 1], got {self.p!r}")


@dataclass(frozen=True)
class Beta:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise DomainError(f"Beta parameters must be positive, got ({self.a!r}, {self.b!r})")


@dataclass(frozen=True)
class Finite:
    weights: tuple
    components: tuple

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        comps = tuple(self.components)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "components", comps)
        if len(w) != len(comps) or not w:
            raise DomainError("weights and components must be non-empty and of equal length")
        if any(x < 0 for x in w) or abs(math.fsum(w) - 1.0) > 1e-12:
            raise DomainError("mixture weights must be nonnegative and sum to 1")
        if any(isinstance(c, Finite) for c in comps):
            raise DomainError("finite mixtures may only contain Point and Beta components")


MixingLaw = Union[Point, Beta, Finite]


def binomial_pmf(n: int, p: float) -> Pmf:
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n!r}")
    Point(p)  # validates p
    if p == 0.0:
        return Pmf.point_mass(0).embed(0, n)
    if p == 1.0:
        return Pmf.point_mass(n).embed(0, n)
    j = np.arange(n + 1)
    log_p = specfn.log_binomial_row(n) + j * math.log(p) + (n - j) * math.log1p(-p)
    return Pmf(0, log_p, True)


def hypergeometric_pmf(n: int, i: int, k: int) -> Pmf:
    """Positives in a draw of k without replacement from n items of which i are positive."""
    if not (0 <= i <= n and 0 <= k <= n):
        raise DomainError(f"hypergeometric needs 0 <= i, k <= n, got n={n}, i={i}, k={k}")
    lo, hi = max(0, k - (n - i)), min(i, k)
    log_p = np.full(k + 1, -np.inf)
    denom = specfn.log_binomial(n, k)
    for j in range(lo, hi + 1):
        log_p[j] = specfn.log_binomial(i, j) + specfn.log_binomial(n - i, k - j) - denom
    return Pmf(0, log_p, True)


def beta_binomial_pmf(k: int, a: float, b: float) -> Pmf:
    """C(k, l) B(l + a, k - l + b) / B(a, b), each term evaluated independently."""
    Beta(a, b)
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k!r}")
    base = specfn.log_beta(a, b)
    log_p = np.array([specfn.log_binomial(k, j) + specfn.log_beta(j + a, k - j + b) - base
                      for j in range(k + 1)])
    return Pmf(0, log_p, True)


def _mix(k: int, weights: Sequence[float], parts: Sequence[Pmf]) -> Pmf:
    terms = [math.log(w) + part.log_p for w, part in zip(weights, parts) if w > 0]
    return Pmf(0, specfn.log_sum_exp_axis(np.vstack(terms), axis=0), True)


def mixed_binomial_pmf(k: int, law: MixingLaw) -> Pmf:
    """Bin(k, W) with W distributed according to ``law``."""
    if isinstance(law, Point):
        return binomial_pmf(k, law.p)
    if isinstance(law, Beta):
        return beta_binomial_pmf(k, law.a, law.b)
    if isinstance(law, Finite):
        return _mix(k, law.weights, [mixed_binomial_pmf(k, c) for c in law.components])
    raise TypeError(f"unsupported mixing law {law!r}")


def hypergeometric_mixture(n: int, weights: Pmf, k: int) -> Pmf:
    """Law of the positives in a size-k subsample when the positive count among n has law ``weights``.

    Exact O(n k) evaluation in log-space; no truncation of the mixing weights.
    """
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    last = weights.offset + len(weights) - 1
    if weights.offset < 0 or last > n:
        raise DomainError("mixing weights must be supported within 0..n")
    w = weights.normalize()
    lf = specfn.log_factorials(n)
    i = w.support
    keep = np.isfinite(w.log_p)
    i, log_w = i[keep], w.log_p[keep]
    # log w_i + ln i! + ln (n-i)! - ln C(n, k), the j-independent part of each row.
    row_base = log_w + lf[i] + lf[n - i] - (lf[n] - lf[k] - lf[n - k])
    out = np.full(k + 1, -np.inf)
    for j in range(k + 1):
        # Nonzero only for j <= i and k - j <= n - i.
        sel = (i >= j) & (n - i >= k - j)
        if not sel.any():
            continue
        ii = i[sel]
        terms = (row_base[sel] - lf[j] - lf[ii - j] - lf[k - j] - lf[n - ii - k + j])
        out[j] = specfn.log_sum_exp(terms)
    return Pmf.from_log_weights(0, out)


def marginal_spin_count_pmf(N: int, k: int, params: ModelParams) -> Pmf:
    """Exact law of the number of positive spins among any k of the N spins."""
    if not 1 <= k <= N:
        raise DomainError(f"need 1 <= k <= N, got k={k}, N={N}")
    return hypergeometric_mixture(N, exact_spin_count_pmf(N, params), k)


def polya_urn_draws(k: int, a: float, b: float, size: int, seed: int) -> np.ndarray:
    """``size`` independent counts of white draws after k reinforced draws from an (a white, b black) urn.

    Each draw picks white with probability white/(white + black) and returns the
    ball together with one more of the same colour.
    """
    Beta(a, b)
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k!r}")
    rng = np.random.default_rng(seed)
    white = np.zeros(size, dtype=np.int64)
    for t in range(k):
        # After t draws the urn holds a + white whites among a + b + t balls.
        u = rng.random(size)
        white += u * (a + b + t) < a + white
    return white


def polya_urn_sampler(k: int, a: float, b: float, seed: int) -> int:
    """One beta-binomial(k, a, b) draw via the Polya urn, reproducible from ``seed``."""
    return int(polya_urn_draws(k, a, b, 1, seed)[0])
