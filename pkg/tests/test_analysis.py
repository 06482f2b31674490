
import numpy as np
import pytest

import oracles
from cwchaos import analysis, dist, model
from cwchaos.analysis import (beta_param_match, critical_cdf_distance, llt_sup_error, sample_size,
                              theorem1_empirical, theorem1_limit, theorem34_gap, theorem36_gap)
from cwchaos.errors import CriticalPoint, DegenerateVariance, DomainError, RegimeError
from cwchaos.model import ModelParams, Regime
from cwchaos.tv import gaussian_tv

M_BETA2 = 0.9575040240774797


def test_beta_param_match_examples():
    assert beta_param_match(0.5, 0.5) == (pytest.approx(0.5), pytest.approx(0.5))
    for a, s2 in [(0.1, 0.2), (0.73, 0.5), (0.5, 0.2500001)]:
        g1, g2 = beta_param_match(a, s2)
        assert g1 / (g1 + g2) == pytest.approx(a, rel=1e-14)
        # Variance line with the O(1/N) term dropped.
        assert g1 * g2 / (g1 + g2) ** 2 + g1 * g2 / (g1 + g2) ** 3 == pytest.approx(s2, rel=1e-12)
    with pytest.raises(DegenerateVariance):
        beta_param_match(0.5, 0.25)
    with pytest.raises(DegenerateVariance):
        beta_param_match(0.3, 0.2)
    with pytest.raises(DomainError):
        beta_param_match(1.0, 0.5)


def test_beta_param_match_reproduces_gamma_pair():
    for beta in np.arange(0.1, 5.01, 0.3):
        for h in (-2, -0.5, 0, 0.3, 2):
            p = ModelParams(float(beta), h)
            if p.regime is Regime.CRITICAL:
                continue
            mag = model.solve_magnetization(p)
            g1, g2 = beta_param_match(mag.one_plus_m / 2, mag.v2 / 4, one_minus_a=mag.one_minus_m / 2)
            g = model.gamma_pair(p)
            assert g1 == pytest.approx(g.gamma1, rel=1e-9) and g2 == pytest.approx(g.gamma2, rel=1e-9)


def test_beta_param_match_plain_call_at_moderate_magnetization():
    for p in (ModelParams(0.5), ModelParams(0.7, 0.4), ModelParams(1.5), ModelParams(2.0, -0.3)):
        mag = model.solve_magnetization(p)
        g1, g2 = beta_param_match((1 + mag.m) / 2, mag.v2 / 4)
        g = model.gamma_pair(p)
        assert g1 == pytest.approx(g.gamma1, rel=1e-9) and g2 == pytest.approx(g.gamma2, rel=1e-9)


def test_gamma_pair_against_high_precision():
    import mpmath
    mpmath.mp.dps = 50
    for beta, h in [(0.2, -1.0), (5.0, 1.0), (4.9, 2.0), (1.5, 0.0), (0.9, 0.05)]:
        m = mpmath.findroot(lambda z: z - mpmath.tanh(beta * z + h), 0.999 if h >= 0 else -0.999)
        num = 1 - beta * (1 - m * m)
        g = model.gamma_pair(ModelParams(beta, h))
        assert g.gamma1 == pytest.approx(float(num / (2 * beta * (1 - m))), rel=1e-12)
        assert g.gamma2 == pytest.approx(float(num / (2 * beta * (1 + m))), rel=1e-12)


def test_theorem1_limit_examples():
    pred = theorem1_limit(ModelParams(0.5), 1.0)
    assert pred.sigma_alpha_sq == pytest.approx(0.5)
    assert pred.predicted_tv == pytest.approx(gaussian_tv(0.5, 0.25), abs=1e-15)
    assert pred.reference_law == dist.Point(0.5)
    for p in (ModelParams(0.5), ModelParams(2), ModelParams(0.8, 0.3), ModelParams(3, -1)):
        assert theorem1_limit(p, 0.0).predicted_tv == 0.0
    sup = theorem1_limit(ModelParams(2), 1.0)
    q = 1 - M_BETA2 ** 2
    s2 = q / 4 * (1 + 2 * q / (1 - 2 * q))
    assert sup.predicted_tv == pytest.approx(oracles.gaussian_tv_quad(s2, q / 4), abs=1e-9)
    assert isinstance(sup.reference_law, dist.Finite)
    with pytest.raises(CriticalPoint):
        theorem1_limit(ModelParams(1, 0), 0.5)
    with pytest.raises(DomainError):
        theorem1_limit(ModelParams(0.5), 1.5)


@pytest.mark.parametrize("p", [ModelParams(0.5), ModelParams(0.2, 1.0), ModelParams(2),
                               ModelParams(4, -0.3), ModelParams(0.8, 0.3)], ids=str)
def test_mixed_binomial_variance_matches_limit_variance(p):
    g = model.gamma_pair(p)
    m = model.solve_magnetization(p).m
    for alpha in (0.0, 0.25, 1.0):
        pred = theorem1_limit(p, alpha)
        assert analysis.mixed_binomial_variance(g.gamma1, g.gamma2, alpha) == pytest.approx(
            pred.sigma_alpha_sq, rel=1e-10)
        a = (1 + m) / 2
        assert pred.sigma_alpha_sq >= a * (1 - a) - 1e-15


def test_beta_binomial_variance_approaches_formula():
    # Exact variance of Bin(k, Beta(g1 N, g2 N)) per sample vs its limit.
    p = ModelParams(0.8, 0.3)
    g = model.gamma_pair(p)
    N = 4000
    for alpha in (0.25, 1.0):
        k = int(alpha * N)
        var = dist.beta_binomial_pmf(k, g.gamma1 * N, g.gamma2 * N).var() / k
        assert var == pytest.approx(analysis.mixed_binomial_variance(g.gamma1, g.gamma2, alpha), rel=2e-3)


def test_theorem1_limit_continuous_in_alpha():
    alphas = np.linspace(0, 1, 201)
    vals = [theorem1_limit(ModelParams(1.6), float(a)).predicted_tv for a in alphas]
    assert vals[0] == 0.0
    assert max(abs(b - a) for a, b in zip(vals, vals[1:])) < 5e-3
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_sample_size():
    assert sample_size(4096, 1.0) == 4096
    assert sample_size(10, 0.25) == 2  # 2.5 rounds to even
    assert sample_size(14, 0.25) == 4  # 3.5 rounds to even
    assert sample_size(4096, 0.0) == 64
    assert sample_size(1000, 0.0) == 32
    for N in (256, 1000, 4096):
        assert abs(sample_size(N, 0.3) - 0.3 * N) <= 0.5


def test_llt_decay():
    assert llt_sup_error(1024, ModelParams(0.5)) < llt_sup_error(256, ModelParams(0.5))
    assert llt_sup_error(2048, ModelParams(2)) < llt_sup_error(512, ModelParams(2))
    with pytest.raises(CriticalPoint):
        llt_sup_error(100, ModelParams(1, 0))


def test_llt_target_shape():
    t = analysis.llt_target(100, ModelParams(2))
    assert len(t.components) == 2
    assert t.components[0][1] + t.components[1][1] == pytest.approx(100)
    assert len(analysis.llt_target(100, ModelParams(0.5, 0.1)).components) == 1


def test_theorem34_gap():
    p = ModelParams(0.5)
    gaps = [theorem34_gap(N, N, p) for N in (256, 1024, 4096)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert theorem34_gap(4096, 2048, ModelParams(0.8, 0.3)) <= 0.05
    for N in (50, 400):
        assert theorem34_gap(N, 1, ModelParams(0.8, 0.3)) <= theorem34_gap(N, N, ModelParams(0.8, 0.3)) + 1e-15
    with pytest.raises(RegimeError):
        theorem34_gap(100, 10, ModelParams(2))
    with pytest.raises(RegimeError):
        theorem34_gap(100, 10, ModelParams(1, 0))


def test_theorem36_gap():
    assert theorem36_gap(4096, 4096, 2.0) < theorem36_gap(1024, 1024, 2.0)
    assert theorem36_gap(2048, 1024, 1.5) <= 0.08
    law = analysis.beta_approximant(ModelParams(2.0), 512, 200)
    probs = dist.mixed_binomial_pmf(200, law).probs
    assert np.allclose(probs, probs[::-1], atol=1e-15)
    with pytest.raises(RegimeError):
        theorem36_gap(100, 10, 0.9)


def test_theorem1_empirical():
    tab = theorem1_empirical(ModelParams(0.5), 1.0, [256, 1024, 4096])
    gaps = tab.column("gap")
    assert gaps[0] > gaps[1] > gaps[2]
    assert all(0 <= r.observed <= 1 for r in tab.rows)
    sub = theorem1_empirical(ModelParams(0.5), 0.0, [4096])
    assert sub.rows[0].k == 64 and sub.rows[0].observed <= 0.05 and sub.rows[0].predicted == 0
    field = theorem1_empirical(ModelParams(0.8, 0.3), 1.0, [4096])
    assert field.rows[0].gap <= 0.02
    with pytest.raises(CriticalPoint):
        theorem1_empirical(ModelParams(1, 0), 0.5, [100])


def test_theorem1_empirical_threaded_matches_serial():
    p, Ns = ModelParams(1.4, 0.1), [64, 128, 256, 512]
    assert theorem1_empirical(p, 0.5, Ns, threads=4).rows == theorem1_empirical(p, 0.5, Ns).rows


def test_critical_distance():
    assert critical_cdf_distance(4096) < critical_cdf_distance(256)
    for N in (2, 3, 10):
        assert 0 <= critical_cdf_distance(N) <= 1
    atoms, mass = analysis.critical_law(101)
    assert np.allclose(atoms, -atoms[::-1]) and np.allclose(mass, mass[::-1], atol=1e-16)
    # Symmetric law: half the mass sits strictly below zero up to the central atom.
    assert mass[atoms < 0].sum() == pytest.approx(mass[atoms > 0].sum(), abs=1e-15)
    with pytest.raises(DomainError):
        critical_cdf_distance(1)
