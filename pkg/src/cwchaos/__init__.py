"""Exact finite-N Curie-Weiss marginals, their mixed-binomial approximants and TV limits."""
from .errors import CriticalPoint, DegenerateVariance, DomainError, RegimeError, UnnormalizedPmf
from .model import ModelParams, Pmf, Regime

__version__ = "0.1.0"

__all__ = ["CriticalPoint", "DegenerateVariance", "DomainError", "RegimeError",
           "UnnormalizedPmf", "ModelParams", "Pmf", "Regime", "__version__"]
