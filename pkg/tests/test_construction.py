import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from momentricci.construction import (
    PsiBuilderConfig,
    admissible_eta_bounds,
    core_sigma_cap,
    build_delta_nu,
    build_psi_n,
    certify_bounds,
    glue,
    rescale_and_size,
    ricci_glued,
    ricci_x2_core,
    run_theorem2,
    verify_psi_constraints,
)
from momentricci.curvature import ricci_eigenvalues
from momentricci.warped import expected_eigenvalues, phi_chart, sphere_sample


@settings(max_examples=12)
@given(st.integers(2, 4), st.floats(5.0, 40.0), st.floats(0.25, 1.0))
def test_theorem2_pipeline_passes(n, R, kappa):
    res = run_theorem2(n, R, kappa, num=1001)
    assert res.psi.passed
    assert res.phi_checks["pass"]
    assert res.certificate.passed and res.certificate.sigma > 0
    assert res.smoothness == pytest.approx((0.0, n), abs=1e-6)
    if n >= 3:
        assert res.size.holds


@settings(max_examples=10)
@given(st.integers(2, 4), st.floats(5.0, 30.0))
def test_psi_constraints_with_independent_quadrature(n, R):
    cfg = PsiBuilderConfig(n=n, R=R)
    build = build_psi_n(cfg)
    # moment=None integrates psi numerically rather than using the closed form
    checks = verify_psi_constraints(build.profile, cfg, moment=None, num=2001)
    assert all(c["pass"] for c in checks.values()), checks


def test_eta_window():
    b = admissible_eta_bounds(3, 9.0, 1.0)
    assert b.feasible and b.lower < b.eta < b.upper
    assert not admissible_eta_bounds(3, 2.0, 1.0).feasible


def test_preconditions():
    with pytest.raises(ValueError):
        PsiBuilderConfig(n=3, R=4.0)
    with pytest.raises(ValueError):
        PsiBuilderConfig(n=1, R=9.0)
    with pytest.raises(ValueError):
        build_delta_nu(-0.1, 9.0)
    with pytest.raises(ValueError):
        build_delta_nu(0.5, 9.0, c=0.01)


@given(st.floats(0.0, 0.05), st.floats(5.0, 50.0))
def test_delta_profile_bounds(nu, R):
    d = build_delta_nu(nu, R)
    r = np.linspace(1.0, R, 2001)
    v, d1, d2 = d.jet(r)
    assert np.all(v <= nu + 1e-15) and np.all(np.abs(d1) <= nu + 1e-15) and np.all(np.abs(d2) <= nu + 1e-12)
    assert np.all(v[r <= 2] == v[0])
    assert np.all(v[r >= np.sqrt(R)] == 0)
    assert np.all(np.diff(v) <= 1e-15)


def test_nu_zero_fails_certificate():
    res = run_theorem2(3, 9.0, nu=0.0)
    assert not res.certificate.passed
    assert res.certificate.sigma == 0
    assert not res.passed


def test_glued_ricci_against_oracle():
    res = run_theorem2(3, 9.0)
    g = res.glued
    rng = np.random.default_rng(2)
    r = rng.uniform(1.3, 8.5, 12)
    X = np.column_stack([r, sphere_sample(3, rng, 12)])
    chart = phi_chart(g.phi, g.delta, 1.1, 8.9)
    steps = np.r_[2.5e-4, np.full(5, 3e-4)]
    ev = ricci_eigenvalues(chart, X, step=steps, extrapolate=True)
    exp = expected_eigenvalues(3, *ricci_glued(g, r))
    assert np.max(np.abs(ev - exp)) <= 1e-5


def test_core_formula_matches_general_one():
    res = run_theorem2(3, 16.0)
    r = np.linspace(1.01, 2.0, 50)
    assert np.allclose(ricci_x2_core(res.glued, r), ricci_glued(res.glued, r)[2], rtol=1e-10, atol=1e-13)


def test_size_estimate_and_core_cap():
    res = run_theorem2(3, 9.0)
    g = res.glued
    assert core_sigma_cap(3, g.delta1) == pytest.approx(res.certificate.sigma)
    size = rescale_and_size(g, res.certificate.sigma)
    assert size.eps == pytest.approx(1 / 3)
    assert size.holds
    with pytest.raises(ValueError):
        rescale_and_size(g, 0.0)


def test_certificate_is_deterministic_json():
    a = certify_bounds(glue(run_theorem2(3, 9.0).phi, 9.0)).to_json()
    b = certify_bounds(glue(run_theorem2(3, 9.0).phi, 9.0)).to_json()
    assert a == b
