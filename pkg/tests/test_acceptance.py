"""Acceptance gate: one test per release criterion, tolerances pinned.

Each test is an end-to-end check of a shipped behavior with frozen
parameters and explicit tolerances. Criteria 07 and 10 contain one clause
each whose finite-probe convergence is slower than the pinned tolerance
allows; those clauses are asserted last so the passing clauses are always
exercised, and the failures are genuine (see the supplementary tests at
the bottom showing the same quantities converging at deeper probes).
"""

import math

import numpy as np
import pytest

from landau_tails.classical_idos import (
    IdosEstimate,
    PoissonConfig,
    draw_v_origin,
    estimate_Nc,
    laplace_mc_crosscheck,
    tail_exponent_fit,
    truncation_radius,
)
from landau_tails.laplace import (
    abfall_limit_check,
    faltung_decay_check,
    laplace_functional,
    sandwich_sweep,
)
from landau_tails.potentials import (
    Algebraic,
    AlgebraicLog,
    CompactDisk,
    GaussianPotential,
    LandauParams,
    LogCorrectedGaussian,
    StretchedGaussian,
    regular_decay_of,
)
from landau_tails.regvar import (
    ConstantFn,
    ExpLogPower,
    IterLogProduct,
    de_bruijn_conjugate,
    verify_conjugate_pair,
)
from landau_tails.tails import (
    compare_tail_to_bound_chain,
    gaussian_bracket,
    lifshitz_constant,
    predict_subgaussian,
    predict_supergaussian,
)
from landau_tails.tauberian import LaplaceAsymptote, roundtrip_check

LANDAU = LandauParams()  # defaults give magnetic length ell = 1


@pytest.fixture(scope="module")
def gaussian_mc():
    """Shared 10^5-sample draw for the Campbell and Weyl criteria."""
    model = GaussianPotential(1.0, 1.0)
    rho = 2.0
    radius = truncation_radius(model, rho, 1e-6)
    config = PoissonConfig(rho=rho, radius=radius, seed=12345,
                           n_samples=100_000)
    return config, model, draw_v_origin(config, model)


def test_01_power_law_quadrature_matches_gamma_closed_form():
    """L_W(t) for W = r^-alpha equals pi Gamma((alpha-2)/alpha) t^(2/alpha)."""
    for alpha in (3.0, 4.0, 6.0):
        target_const = math.pi * math.gamma((alpha - 2.0) / alpha)
        for t in (0.1, 1.0, 10.0):
            value = laplace_functional(lambda r: r**-alpha, t).value
            expected = target_const * t ** (2.0 / alpha)
            assert abs(value / expected - 1.0) <= 1e-6, (alpha, t)
    # anchor value: alpha = 4, t = 1 gives pi^(3/2)
    anchor = laplace_functional(lambda r: r**-4.0, 1.0).value
    assert abs(anchor / math.pi**1.5 - 1.0) <= 1e-6


def test_02_stretched_gaussian_decay_integral_limit():
    """L(t)/F(t)^2 within 15% of pi wherever F(t)^2 >= 10^3 (beta=lam=1)."""
    model = StretchedGaussian(1.0, 1.0, 1.0)
    descriptor = regular_decay_of(model)
    probes = [1e14, 1e16, 1e18]
    for t in probes:
        assert descriptor.F(t) ** 2 >= 1e3
    ratios = abfall_limit_check(model, descriptor, probes)
    for t, r in zip(probes, ratios):
        assert abs(r / math.pi - 1.0) <= 0.15, t


def test_03_convolution_preserves_regular_decay():
    """Smoothed-profile deviations at r = 20, 40 are <= 0.15, 0.08, decreasing."""
    model = StretchedGaussian(1.0, 1.0, 1.0)
    devs = faltung_decay_check(model, regular_decay_of(model), 1.0, [20.0, 40.0])
    assert devs[0] <= 0.15
    assert devs[1] <= 0.08
    assert devs[1] < devs[0]


def test_04_sandwich_ordering_and_pinch():
    """lower <= upper everywhere; algebraic bounds pinch within 10% at t=10^6."""
    t_grid = np.geomspace(0.01, 100.0, 7)
    models = [
        CompactDisk(1.0, 1.0),
        GaussianPotential(1.0, 1.0),
        LogCorrectedGaussian(1.0, 1.0, 1.0),
        StretchedGaussian(1.0, 1.0, 1.0),
        StretchedGaussian(1.0, 1.0, 1.5),
        Algebraic(1.0, 3.0),
        AlgebraicLog(1.0, 1.0, 3.0),
    ]
    for model in models:
        for res in sandwich_sweep(model, LANDAU, 1.0, t_grid):
            assert res.log_lower <= res.log_upper + 1e-12, type(model).__name__
    for alpha in (3.0, 4.0):
        report = compare_tail_to_bound_chain(
            Algebraic(1.0, alpha), LANDAU, 1.0, [1e2, 1e4, 1e6])
        last = report["rows"][-1]
        assert abs(last["lower_ratio"] / last["upper_ratio"] - 1.0) <= 0.10, alpha


def test_05_campbell_and_exponential_formula(gaussian_mc):
    """Mean within 3 SE of 2 pi, variance within 5 SE, crosscheck within 3 SE."""
    config, model, v = gaussian_mc
    n = len(v)
    # mean V(0) against rho * integral U = 2 pi
    target_mean = 2.0 * math.pi
    se_mean = v.std(ddof=1) / math.sqrt(n)
    assert abs(v.mean() - target_mean) <= 3 * se_mean
    # variance against rho * integral U^2 = pi
    target_var = math.pi
    s2 = v.var(ddof=1)
    m4 = ((v - v.mean()) ** 4).mean()
    se_var = math.sqrt((m4 - s2**2) / n)
    assert abs(s2 - target_var) <= 5 * se_var
    # exponential-formula crosscheck on the non-rare grid
    for check in laplace_mc_crosscheck(config, model, [0.01, 0.1, 1.0], v=v):
        assert not check.skipped
        assert abs(check.ratio - 1.0) <= 3 * check.stderr, check.t


def test_06_weyl_regime_ratio(gaussian_mc):
    """N_c(E) / ((m/2 pi hbar^2) E) in [0.985, 1.0] at E = 100 rho int U."""
    config, model, v = gaussian_mc
    E = 100.0 * config.rho * math.pi  # rho * integral U = 2 pi, rho = 2
    est = estimate_Nc(config, model, LANDAU, [E], v=v)
    weyl = LANDAU.mass / (2.0 * math.pi * LANDAU.hbar**2) * E
    ratio = est.values[0] / weyl
    assert 0.985 <= ratio <= 1.0


def test_07_tauberian_round_trips():
    """Three transform round trips at pinned grids and tolerances."""
    # gamma = 1/2 with f = 1/4: log N = -1/(4E) <-> log Ntilde = -2 sqrt(t)
    r1 = roundtrip_check(LaplaceAsymptote(0.5, ConstantFn(0.25)),
                         0.0, [1e4, 1e5, 1e6])
    assert r1["max_deviation"] <= 0.02
    # gamma = 1/3 with f = 1
    r3 = roundtrip_check(LaplaceAsymptote(1.0 / 3.0, ConstantFn(1.0)),
                         0.0, [1e6])
    assert r3["max_deviation"] <= 0.03
    # gamma = 0 with f# = log^2: |f(t) log Ntilde(t) + 1| <= 0.1 at t = 10^6.
    # The deviation decays like loglog t / log t and is still ~0.29 at 10^6
    # (it does reach 0.036 at t = e^300; see the supplementary test below).
    r0 = roundtrip_check(LaplaceAsymptote(0.0, IterLogProduct(1.0, (-2.0,))),
                         0.0, [1e6])
    assert r0["max_deviation"] <= 0.1, (
        f"gamma=0 round-trip deviation {r0['max_deviation']:.5f} at t=1e6 "
        "exceeds 0.1; convergence is O(loglog t / log t)")


def test_08_headline_constants_six_digits():
    """C(4,1), C(3,1), the super-Gaussian coefficient, and the bracket."""
    assert lifshitz_constant(4.0, 1.0) == pytest.approx(math.pi**3 / 4.0,
                                                        rel=1e-12)
    assert lifshitz_constant(4.0, 1.0) == pytest.approx(7.75157, rel=1e-6)
    independent_c31 = 0.5 * (2.0 * math.pi / 3.0 * math.gamma(1.0 / 3.0)) ** 3
    assert lifshitz_constant(3.0, 1.0) == pytest.approx(independent_c31,
                                                        rel=1e-6)
    assert lifshitz_constant(3.0, 1.0) == pytest.approx(88.3149227, rel=1e-6)
    assert predict_supergaussian(1.0, LANDAU).amplitude == 2.0 * math.pi
    bracket = gaussian_bracket(1.0, 1.0, LANDAU, sharp=False)
    assert bracket.lower_coeff == pytest.approx(3.0 * math.pi, rel=1e-12)
    assert bracket.upper_coeff == pytest.approx(2.0 * math.pi, rel=1e-12)


def test_09_generic_pipeline_matches_worked_forms():
    """Predictor output vs hand-coded tails: exact for the algebraic and
    stretched families, pointwise within 20% at E = 10^-12 for the
    log-corrected families."""
    rho = 1.3
    # algebraic: -C(alpha, rho) (g0/E)^(2/(alpha-2)), exact amplitude/powers
    g0, alpha = 2.0, 5.0
    amp, p, logp = predict_subgaussian(
        regular_decay_of(Algebraic(g0, alpha)), rho).canonical_form()
    assert amp == pytest.approx(
        lifshitz_constant(alpha, rho) * g0 ** (2.0 / (alpha - 2.0)), rel=1e-12)
    assert p == pytest.approx(-2.0 / (alpha - 2.0), rel=1e-12)
    assert logp == 0.0
    # stretched Gaussian: -pi rho lam^2 |log E|^(2/beta), exact
    lam, beta = 1.5, 0.8
    amp, p, logp = predict_subgaussian(
        regular_decay_of(StretchedGaussian(1.0, lam, beta)), rho).canonical_form()
    assert amp == pytest.approx(math.pi * rho * lam**2, rel=1e-12)
    assert p == 0.0
    assert logp == pytest.approx(2.0 / beta, rel=1e-12)
    # log-corrected Gaussian: -pi rho lam^2 |log E| log sqrt(|log E|)
    E = 1e-12
    tail = predict_subgaussian(
        regular_decay_of(LogCorrectedGaussian(1.0, lam, 1.0)), rho)
    hand = -math.pi * rho * lam**2 * abs(math.log(E)) \
        * math.log(math.sqrt(abs(math.log(E))))
    assert tail.log_n(E) / hand == pytest.approx(1.0, abs=0.2)
    # algebraic with log correction: extra (|log E|/(alpha-2))^(2/(alpha-2))
    alpha = 3.0
    tail = predict_subgaussian(
        regular_decay_of(AlgebraicLog(g0, 1.0, alpha)), rho)
    hand = -lifshitz_constant(alpha, rho) * (g0 / E) ** (2.0 / (alpha - 2.0)) \
        * (abs(math.log(E)) / (alpha - 2.0)) ** (2.0 / (alpha - 2.0))
    assert tail.log_n(E) / hand == pytest.approx(1.0, abs=0.2)


def test_10_de_bruijn_conjugate_suite():
    """Double conjugate is the identity; the fixed-point conjugate solves its
    defining relation to 10^-3; pair residuals <= 0.1 at t = 10^12."""
    # f## / f in [0.9, 1.1] (exact for iterated-log products)
    for exps in ((1.0,), (-2.0,), (2.0, 1.0)):
        f = IterLogProduct(1.0, exps)
        f_sharp_sharp = de_bruijn_conjugate(de_bruijn_conjugate(f))
        assert 0.9 <= f_sharp_sharp(1e12) / f(1e12) <= 1.1
    # fixed-point conjugate of exp[(log t)^(1/4)] solves f(t) g(t f(t)) = 1
    f = ExpLogPower(0.25)
    g = de_bruijn_conjugate(f)
    t = 1e12
    assert abs(f(t) * g(t * f(t)) - 1.0) <= 1e-3
    # pair residuals for (log^b, log^-b) at t = 10^12.  The residual decays
    # like 2|b| loglog t / log t and still sits at 0.12 (b = +-1) and 0.42
    # (b = +-2) at 10^12; it passes at t = 10^150 (supplementary test below).
    for b in (1.0, 2.0, -1.0, -2.0):
        f = IterLogProduct(1.0, (b,))
        g = IterLogProduct(1.0, (-b,))
        residual = verify_conjugate_pair(f, g, [1e12])
        assert residual <= 0.1, (
            f"conjugate-pair residual {residual:.4f} for log^{b:+g} at t=1e12 "
            "exceeds 0.1; the residual is O(loglog t / log t)")


def test_11_tail_slope_sanity():
    """Synthetic slope recovered to 10^-6; moderate-window MC slope in 2 +- 0.5.

    The MC clause is indicative only: the true tail regime is unreachable by
    direct sampling, and the moderate-energy window still carries a
    subleading 1/E correction that biases the slope low.
    """
    # synthetic injection: N = exp(-3/E^2) has slope exactly 2
    E = np.geomspace(0.1, 1.0, 20)
    est = IdosEstimate(E, np.exp(-3.0 / E**2), np.zeros_like(E), 1)
    slope, _, _ = tail_exponent_fit(est, (0.1, 1.0))
    assert abs(slope - 2.0) <= 1e-6
    # real MC for the algebraic alpha = 3 family: expected slope 2/(alpha-2) = 2
    model = Algebraic(1.0, 3.0)
    rho = 2.0
    config = PoissonConfig(rho=rho, radius=truncation_radius(model, rho, 2.0),
                           seed=777, n_samples=100_000)
    grid = np.geomspace(8.0, 30.0, 14)
    mc = estimate_Nc(config, model, LANDAU, grid)
    slope, _, _ = tail_exponent_fit(mc, (10.0, 25.0))
    assert abs(slope - 2.0) <= 0.5


# ---------------------------------------------------------------------------
# supplementary convergence evidence for the slow clauses of 07 and 10

def test_supplementary_gamma0_roundtrip_converges_at_deep_probe():
    """The gamma = 0 round trip does meet 0.1 once t is astronomically large."""
    r0 = roundtrip_check(LaplaceAsymptote(0.0, IterLogProduct(1.0, (-2.0,))),
                         0.0, [math.exp(300.0)])
    assert r0["max_deviation"] <= 0.04


def test_supplementary_conjugate_residuals_converge_at_deep_probe():
    """The (log^b, log^-b) pair residual does meet 0.1 at t = 10^150."""
    for b in (1.0, 2.0, -1.0, -2.0):
        f = IterLogProduct(1.0, (b,))
        g = IterLogProduct(1.0, (-b,))
        assert verify_conjugate_pair(f, g, [1e150]) <= 0.07
