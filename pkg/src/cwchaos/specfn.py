"""Scalar special functions, all in natural-log space where it matters.

``log_binomial`` avoids the catastrophic cancellation of
``lgamma(n+1) - lgamma(k+1) - lgamma(n-k+1)`` for large ``n`` by using the
Stirling-remainder (``stirlerr``) decomposition, so its absolute error stays
near one ulp of the result rather than one ulp of ``lgamma(n+1)``.
"""
from __future__ import annotations

import math
from typing import Callable, Iterable

import numpy as np

from .errors import DomainError

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
NEG_INF = -math.inf

# Stirling series coefficients for stirlerr(n), n > 15.
_S0 = 1.0 / 12.0
_S1 = 1.0 / 360.0
_S2 = 1.0 / 1260.0
_S3 = 1.0 / 1680.0
_S4 = 1.0 / 1188.0


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def stirlerr(n: float) -> float:
    """ln(n!) - ln(sqrt(2 pi n) (n/e)^n)."""
    if n > 15.0:
        nn = n * n
        return (_S0 - (_S1 - (_S2 - (_S3 - _S4 / nn) / nn) / nn) / nn) / n
    if n == 0:
        return 0.0
    return math.lgamma(n + 1.0) - (n + 0.5) * math.log(n) + n - LOG_SQRT_2PI


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k); -inf outside 0 <= k <= n."""
    if k < 0 or k > n:
        return NEG_INF
    if k == 0 or k == n:
        return 0.0
    r = n - k
    if n < 30:
        return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(r + 1)
    # k ln(n/k) + r ln(n/r) is the entropy part; stirlerr terms are O(1/n).
    entropy = -k * math.log(k / n) - r * math.log1p(-k / n)
    return (entropy + stirlerr(n) - stirlerr(k) - stirlerr(r)
            - 0.5 * math.log(2.0 * math.pi * k * r / n))


def log_binomial_row(n: int) -> np.ndarray:
    """Vector [ln C(n, 0), ..., ln C(n, n)]."""
    return np.array([log_binomial(n, k) for k in range(n + 1)])


def log_factorials(n: int) -> np.ndarray:
    """Table [ln 0!, ..., ln n!]."""
    return np.array([math.lgamma(i + 1.0) for i in range(n + 1)])


def log_beta(a: float, b: float) -> float:
    """ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b).

    For large arguments the three log-gammas nearly cancel; the Stirling parts
    are then combined analytically and only the O(1/x) remainders are summed.
    """
    if not (a > 0 and b > 0):
        raise DomainError(f"log_beta requires a, b > 0, got ({a!r}, {b!r})")
    # Sorted so that log_beta(a, b) == log_beta(b, a) bit for bit.
    p, q = (a, b) if a <= b else (b, a)
    s = p + q
    if p >= 10.0:
        corr = stirlerr(p) + stirlerr(q) - stirlerr(s)
        return (-0.5 * math.log(q) + LOG_SQRT_2PI + corr
                + (p - 0.5) * math.log(p / s) + q * math.log1p(-p / s))
    if q >= 10.0:
        corr = stirlerr(q) - stirlerr(s)
        return math.lgamma(p) + corr + p - p * math.log(s) + (q - 0.5) * math.log1p(-p / s)
    return math.lgamma(p) + math.lgamma(q) - math.lgamma(s)


def gaussian_pdf(t: float, m: float, v2: float) -> float:
    """Normal density with mean m and variance v2, evaluated at t."""
    if not v2 > 0:
        raise DomainError(f"gaussian_pdf requires v2 > 0, got {v2!r}")
    z = t - m
    return math.exp(-z * z / (2.0 * v2)) / math.sqrt(2.0 * math.pi * v2)


def gaussian_pdf_array(t: np.ndarray, m: float, v2: float) -> np.ndarray:
    if not v2 > 0:
        raise DomainError(f"gaussian_pdf requires v2 > 0, got {v2!r}")
    z = np.asarray(t, dtype=float) - m
    return np.exp(-z * z / (2.0 * v2)) / math.sqrt(2.0 * math.pi * v2)


def std_normal_cdf(t: float) -> float:
    # erfc keeps full relative precision in the lower tail.
    if math.isinf(t):
        return 1.0 if t > 0 else 0.0
    return 0.5 * math.erfc(-t / math.sqrt(2.0))


def log_sum_exp(values: Iterable[float]) -> float:
    """ln sum exp(v) against the running maximum; empty input gives -inf."""
    vals = np.asarray(list(values), dtype=float)
    if vals.size == 0:
        return NEG_INF
    top = float(np.max(vals))
    if top == NEG_INF:
        return NEG_INF
    if top == math.inf:
        return math.inf
    return top + math.log(float(np.sum(np.exp(vals - top))))


def log_sum_exp_axis(a: np.ndarray, axis: int = -1) -> np.ndarray:
    """Array version of :func:`log_sum_exp` reducing along ``axis``."""
    a = np.asarray(a, dtype=float)
    top = np.max(a, axis=axis, keepdims=True)
    safe = np.where(np.isfinite(top), top, 0.0)
    with np.errstate(divide="ignore"):
        out = np.log(np.sum(np.exp(a - safe), axis=axis, keepdims=True)) + safe
    return np.squeeze(out, axis=axis)


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     tol: float = 1e-10, max_depth: int = 60) -> float:
    """Adaptive Simpson quadrature of f over [a, b] with absolute tolerance ``tol``.

    Intervals are bisected until the Richardson estimate |S_left + S_right - S|/15
    drops below the local tolerance share, or ``max_depth`` is reached.
    """
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    c = 0.5 * (a + b)
    fc = f(c)
    whole = (b - a) * (fa + 4.0 * fc + fb) / 6.0
    total = 0.0
    # Explicit stack; each entry is (a, b, fa, fc, fb, whole, tol, depth).
    stack = [(a, b, fa, fc, fb, whole, tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, s, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = (mid - lo) * (flo + 4.0 * flm + fmid) / 6.0
        right = (hi - mid) * (fmid + 4.0 * frm + fhi) / 6.0
        delta = left + right - s
        # Force a few levels of refinement so narrow features are not missed.
        if depth >= max_depth or (depth >= 4 and abs(delta) <= 15.0 * eps):
            total += left + right + delta / 15.0
        else:
            stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1))
            stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))
    return total
