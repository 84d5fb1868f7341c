"""Concentration curves and indices for arbitrary quantile functions."""

import numpy as np
import pytest

from qcurves import (
    CurveKind,
    CurveSamples,
    DomainError,
    QuadratureSpec,
    SortedSample,
    WeibullParams,
    closed_curve,
    curve_grid,
    curve_index,
    curve_value,
    empirical_qf,
    gauss_legendre_grid,
    plotting_position_qf,
    weibull_qf,
)

# frozen values of curve_index on the default 256x8 grid (regression goldens;
# the exact integrals differ from these by ~4e-7 of quadrature error)
INDEX_GOLDENS = {
    (0.5, "qz"): 0.9681413268913608,
    (0.5, "qd"): 0.83483203382498,
    (1.0, "qz"): 0.8326025583084586,
    (1.0, "qd"): 0.7015737451596684,
    (2.0, "qz"): 0.6019351561923061,
    (2.0, "qd"): 0.5228620881179875,
    (3.0, "qz"): 0.46337915509488076,
    (3.0, "qd"): 0.41404959832582067,
}
# exact integrals, 50-digit evaluation
INDEX_EXACT = {
    (0.5, "qz"): 0.96814134333092627,
    (0.5, "qd"): 0.83483203382498013,
    (1.0, "qz"): 0.83260270914788938,
    (1.0, "qd"): 0.70157374515659359,
    (2.0, "qz"): 0.60193551297310455,
    (2.0, "qd"): 0.52286209656135102,
    (3.0, "qz"): 0.4633796969860602,
    (3.0, "qd"): 0.41404967697822634,
}


def test_gauss_legendre_grid_integrates_polynomials():
    points, weights = gauss_legendre_grid(QuadratureSpec(panels=4, nodes=5))
    # degree <= 2*5-1 polynomials are integrated exactly per panel
    for k in range(9):
        exact = 1.0 / (k + 1)
        assert abs((weights * points ** k).sum() - exact) < 1e-14
    assert abs(weights.sum() - 1.0) < 1e-14


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(panels=0, nodes=4)
    with pytest.raises(DomainError):
        QuadratureSpec(panels=4, nodes=0)


def test_generic_curve_matches_closed_form():
    p = np.linspace(0.0, 1.0, 201)
    for beta in (0.5, 1.0, 2.0, 3.0):
        for sigma in (0.1, 1.0, 10.0):
            qf = weibull_qf(WeibullParams(beta, sigma))
            for kind in ("qz", "qd"):
                got = curve_value(qf, kind, p)
                assert np.max(np.abs(got - closed_curve(beta, p, kind))) < 1e-12


def test_curve_value_endpoints_generic():
    qf = weibull_qf(WeibullParams(2.0, 1.0))
    assert curve_value(qf, "qz", 0.0) == 1.0
    assert curve_value(qf, "qz", 1.0) == 1.0
    assert curve_value(qf, "qd", 0.0) == 1.0
    assert curve_value(qf, "qd", 1.0) == 0.0


def test_curve_value_midpoint_identity_empirical():
    rng = np.random.default_rng(4)
    s = SortedSample.from_data(rng.gamma(3.0, 2.0, 37))
    for qf in (empirical_qf(s), plotting_position_qf(s, "hf"), plotting_position_qf(s, "wg")):
        assert curve_value(qf, "qz", 0.5) == curve_value(qf, "qd", 0.5)


def test_curve_value_rejects_bad_orders():
    qf = weibull_qf(WeibullParams(1.0, 1.0))
    with pytest.raises(DomainError):
        curve_value(qf, "qz", -0.1)
    with pytest.raises(DomainError):
        curve_value(qf, "qz", 1.1)


@pytest.mark.parametrize("beta,kind", sorted(INDEX_GOLDENS))
def test_curve_index_goldens(beta, kind):
    qf = weibull_qf(WeibullParams(beta, 1.0))
    got = curve_index(qf, kind)
    assert got == INDEX_GOLDENS[(beta, kind)]
    assert abs(got - INDEX_EXACT[(beta, kind)]) < 1e-6


def test_curve_index_scale_free():
    for sigma in (0.1, 1.0, 25.0):
        qf = weibull_qf(WeibullParams(1.7, sigma))
        assert abs(curve_index(qf, "qz") - curve_index(weibull_qf(WeibullParams(1.7, 1.0)), "qz")) < 1e-13


def test_curve_index_refinement_check():
    # qd approaches its p=0 endpoint polynomially: panel doubling agrees to 1e-8
    qf = weibull_qf(WeibullParams(1.0, 1.0))
    plain = curve_index(qf, "qd")
    checked = curve_index(qf, "qd", check=True)
    assert abs(plain - checked) < 1e-8


def test_curve_index_refinement_check_flags_log_singular_end():
    # qz approaches its p=1 endpoint only logarithmically; the doubling
    # check is designed to flag the resulting slow quadrature convergence
    from qcurves import NonConvergence
    qf = weibull_qf(WeibullParams(3.0, 1.0))
    with pytest.raises(NonConvergence):
        curve_index(qf, "qz", check=True)


def test_curve_index_empirical_converges():
    rng = np.random.default_rng(15)
    from qcurves.weibull import sample as weibull_sample
    s = SortedSample.from_data(weibull_sample(WeibullParams(2.0, 1.0), 100000, rng))
    got = curve_index(plotting_position_qf(s, "hf"), "qz")
    assert abs(got - INDEX_EXACT[(2.0, "qz")]) < 0.01


def test_curve_samples_csv_round_trip():
    qf = weibull_qf(WeibullParams(2.0, 1.0))
    samples = curve_grid(qf, "qd", grid_size=33)
    text = samples.to_csv()
    back = CurveSamples.from_csv(text, "qd")
    assert np.array_equal(back.p, samples.p)
    assert np.array_equal(back.values, samples.values)
    assert back.kind == samples.kind


def test_curve_grid_shape_and_range():
    qf = weibull_qf(WeibullParams(1.0, 1.0))
    samples = curve_grid(qf, CurveKind.QZ, grid_size=100)
    assert samples.p.shape == (101,)
    assert samples.p[0] == 0.0 and samples.p[-1] == 1.0
    assert np.all((samples.values >= 0.0) & (samples.values <= 1.0))
