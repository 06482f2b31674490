"""Total-variation distances: discrete pmfs, centred Gaussians, and mixture limits."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import specfn
from .errors import DomainError
from .model import Pmf


@dataclass(frozen=True)
class GaussianMixture:
    """Finite mixture of normals given as (weight, mean, variance) triples."""

    components: tuple

    def __post_init__(self):
        comps = tuple((float(w), float(m), float(v)) for w, m, v in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise DomainError("mixture needs at least one component")
        if any(w <= 0 for w, _, _ in comps):
            raise DomainError("mixture weights must be positive")
        if abs(math.fsum(w for w, _, _ in comps) - 1.0) > 1e-12:
            raise DomainError("mixture weights must sum to 1")
        if any(not v > 0 for _, _, v in comps):
            raise DomainError("mixture variances must be positive")

    def density(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return sum(w * specfn.gaussian_pdf_array(t, m, v) for w, m, v in self.components)


def tv_discrete(P: Pmf, Q: Pmf) -> float:
    """Half the l1 distance between two normalized pmfs, aligned by integer support."""
    P.require_normalized()
    Q.require_normalized()
    lo = min(P.offset, Q.offset)
    hi = max(P.offset + len(P), Q.offset + len(Q)) - 1
    diff = P.embed(lo, hi).probs - Q.embed(lo, hi).probs
    return min(1.0, 0.5 * math.fsum(np.abs(diff)))


def _check_variances(v1sq: float, v2sq: float) -> None:
    if not (v1sq > 0 and v2sq > 0):
        raise DomainError(f"variances must be positive, got ({v1sq!r}, {v2sq!r})")


def gaussian_tv(v1sq: float, v2sq: float) -> float:
    """TV distance between N(0, v1sq) and N(0, v2sq) in closed form.

    The densities cross at +-t with t^2 = s1^2 s2^2 ln(s1^2/s2^2) / (s1^2 - s2^2);
    inside that window the narrower density dominates, so the distance is the
    difference of the two central masses, erf(t/(s2 sqrt 2)) - erf(t/(s1 sqrt 2)).
    """
    _check_variances(v1sq, v2sq)
    wide, narrow = (v1sq, v2sq) if v1sq >= v2sq else (v2sq, v1sq)
    excess = (wide - narrow) / narrow  # ratio - 1
    if excess == 0.0:
        return 0.0
    # ln(r)/(r - 1) via log1p stays accurate for nearly equal variances.
    u_wide = math.log1p(excess) / excess          # t^2 / wide
    u_narrow = u_wide * (1.0 + excess)            # t^2 / narrow
    return math.erf(math.sqrt(u_narrow / 2.0)) - math.erf(math.sqrt(u_wide / 2.0))


def gaussian_tv_quadrature(v1sq: float, v2sq: float, tol: float = 1e-10) -> float:
    """Oracle for :func:`gaussian_tv`: direct adaptive Simpson over +-12 wide standard deviations."""
    _check_variances(v1sq, v2sq)
    s1, s2 = math.sqrt(v1sq), math.sqrt(v2sq)
    c1, c2 = 1.0 / (s1 * math.sqrt(2 * math.pi)), 1.0 / (s2 * math.sqrt(2 * math.pi))

    def integrand(t):
        return abs(c1 * math.exp(-t * t / (2 * v1sq)) - c2 * math.exp(-t * t / (2 * v2sq)))

    span = 12.0 * max(s1, s2)
    # The integrand is even; integrate one half with half the tolerance.
    return specfn.adaptive_simpson(integrand, 0.0, span, tol=tol / 2.0)


def mixture_tv_limit(weights: Sequence[float], variance_pairs: Sequence[tuple],
                     means: Sequence[float] | None = None) -> float:
    """sum_j p_j D(v1_j^2, v2_j^2): the TV limit for matched mixture LLTs with distinct means.

    ``means`` is optional; when given, coinciding component means are rejected
    because the limit formula does not apply to them.
    """
    if len(weights) != len(variance_pairs):
        raise DomainError("weights and variance pairs must have equal length")
    if any(w < 0 for w in weights) or abs(math.fsum(weights) - 1.0) > 1e-12:
        raise DomainError("weights must form a probability vector")
    if means is not None:
        if len(means) != len(weights):
            raise DomainError("means must match weights in length")
        if len(set(float(m) for m in means)) != len(means):
            raise DomainError("component means must be pairwise distinct")
    return math.fsum(w * gaussian_tv(v1, v2) for w, (v1, v2) in zip(weights, variance_pairs) if w > 0)
