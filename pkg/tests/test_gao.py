import numpy as np
import pytest
from hypothesis import given, strategies as st

from momentricci.curvature import MetricChart, ricci_eigenvalues
from momentricci.submersion.gao import (
    R_CP_DEFAULT,
    DegenerateBlendError,
    GaoBlend,
    JetMismatchError,
    cap_metric,
    check_positive_definite,
    cp_ball_metric,
    gao_interpolate,
    gao_ricci_scan,
    gao_setup,
    jet_match_check,
    s_point,
    s_ricci_oracle,
    s_ricci_unit_check,
)

radius = st.floats(0.0, 0.3)
angle = st.floats(0.0, 6.283)


def test_jets_match_at_center():
    rep = jet_match_check(cap_metric, cp_ball_metric(R_CP_DEFAULT))
    assert rep.passed and max(rep.value_gap, rep.derivative_gap) <= 1e-8


def test_jet_mismatch_is_rejected():
    def stretched(x):
        return 2.0 * cap_metric(x)

    with pytest.raises(JetMismatchError):
        gao_interpolate(cap_metric, stretched, 0.05, 0.025)


def test_interpolate_preconditions():
    with pytest.raises(ValueError):
        gao_interpolate(cap_metric, cap_metric, 0.02, 0.05)


@given(st.lists(st.floats(-0.4, 0.4), min_size=4, max_size=4))
def test_same_inputs_give_same_metric(x):
    chart = gao_interpolate(cap_metric, cap_metric, 0.05, 0.025)
    assert np.allclose(chart(np.array(x)), cap_metric(np.array(x)), rtol=0, atol=1e-15)


@given(st.lists(st.floats(-0.4, 0.4), min_size=4, max_size=4))
def test_zero_step_gives_g0(x):
    b = GaoBlend(cap_metric, cp_ball_metric(), 0.05, 0.025, s_profile=lambda u: np.zeros_like(u))
    r = np.linalg.norm(x)
    if 0.025 < r:
        assert np.array_equal(b(np.array(x)), cap_metric(np.array(x)))


@given(radius, st.floats(0.0, np.pi), angle, angle)
def test_identical_outside_annulus(t, th, a, b):
    rho1, rho2, chart = gao_setup(0.1)
    x = s_point(t, th, a, b)
    r = np.linalg.norm(x)
    g = chart(x)
    if r <= rho2:
        assert np.array_equal(g, cp_ball_metric()(x))
    elif r >= rho1:
        assert np.array_equal(g, cap_metric(x))


def test_blend_ricci_positive():
    scan = gao_ricci_scan(0.1)
    assert scan.positive and scan.min_value > 0


def test_small_cp_scale_loses_positivity():
    # R = 2 does not match Ric = g of S and the blend goes negative
    assert gao_ricci_scan(0.1, R=2.0).min_value < 0


@given(st.floats(0.01, 2.5), st.floats(0.1, 3.0), angle, angle)
def test_s_has_unit_ricci(t, th, a, b):
    assert s_ricci_unit_check(s_point(t, th, a, b)) <= 1e-8


def test_s_ricci_oracle():
    ev = s_ricci_oracle(s_point(0.6, 1.1, 0.3, 1.7))
    assert np.allclose(ev, 1.0, atol=1e-5)


def test_cp_ball_is_einstein():
    R = R_CP_DEFAULT
    chart = MetricChart(cp_ball_metric(R), [-1.0] * 4, [1.0] * 4)
    ev = ricci_eigenvalues(chart, [0.2, -0.1, 0.3, 0.05], step=1e-3, extrapolate=True)
    assert np.allclose(ev, 6 / R**2, atol=1e-6)


def test_product_mixed_sectional_zero():
    from momentricci.submersion.gao import metric_jet
    from momentricci.submersion.oneill import christoffel_jets, riemann_from_jets

    x = s_point(0.6, 1.1, 0.3, 1.7)
    h = 1e-3
    g, dg = metric_jet(cap_metric, x, h)
    ddg = np.empty((4,) + dg.shape)
    for k in range(4):
        e = np.zeros(4)
        e[k] = h
        ddg[k] = (metric_jet(cap_metric, x + e, h)[1] - metric_jet(cap_metric, x - e, h)[1]) / (2 * h)
    gam, dgam = christoffel_jets(g, dg, ddg)
    R = np.einsum("ae,ebcd->abcd", g, riemann_from_jets(gam, dgam))
    X, Y = np.array([1.0, 0.3, 0, 0]), np.array([0, 0, 0.2, 1.0])
    assert abs(np.einsum("abcd,a,b,c,d->", R, X, Y, X, Y)) <= 1e-6


def test_degenerate_blend_reported():
    def neg(x):
        return -cap_metric(x)

    chart = MetricChart(neg, [-1.0] * 4, [1.0] * 4)
    with pytest.raises(DegenerateBlendError) as info:
        check_positive_definite(chart, np.array([[0.1, 0, 0, 0]]))
    assert info.value.point is not None
