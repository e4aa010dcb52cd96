import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from momentricci.profiles import RadialProfile, polynomial, power, smoothstep5
from momentricci.validation import (
    calabi_check,
    einstein_check,
    hf_convergence_order,
    hf_oracle_check,
    phi_oracle_deviation,
    squashed_fs_metric,
)
from momentricci.warped import (
    CollapsedOrbitError,
    PhiMetric,
    WarpedMetric,
    arclength_reparam,
    calabi_phi,
    einstein_constant,
    einstein_report,
    flat_phi,
    fubini_study_metric,
    phi_from_psi,
    phi_jets_in_t,
    phi_R,
    psi_from_phi,
    ricci_from_jets,
    ricci_hf,
    ricci_phi,
    ricci_psi,
    ricci_warped_r,
    smoothness_limits,
)

ns = st.integers(2, 5)
radii = st.floats(0.5, 10.0)


@given(ns, radii, st.floats(0.02, 0.98))
def test_fubini_study_hf_is_einstein(n, R, u):
    t = u * R * np.pi / 2
    vals = np.array(ricci_hf(fubini_study_metric(R, n), t))
    assert np.allclose(vals, einstein_constant(R, n), rtol=1e-10)


@given(ns, radii, st.floats(0.02, 0.98))
def test_phi_form_is_einstein(n, R, u):
    rep = einstein_report(phi_R(R, n), einstein_constant(R, n), np.array([u * R]))
    assert rep.deviation <= 1e-10 * einstein_constant(R, n)


@given(ns, st.floats(1.05, 20.0))
def test_calabi_closed_form_is_flat(n, r):
    vals = ricci_phi(calabi_phi(n, b=25.0), r)
    assert max(abs(v) for v in vals) <= 1e-12


def shifted_poly(coeffs, a, b):
    """Polynomial in (r - a) as a RadialProfile."""
    P = np.polynomial.Polynomial(coeffs)(np.polynomial.Polynomial([-a, 1.0]))
    return RadialProfile(a, b, P, P.deriv(1), P.deriv(2))


@given(ns, st.lists(st.floats(-0.2, 0.2), min_size=3, max_size=3), st.lists(st.floats(-0.2, 0.2), min_size=2, max_size=2),
       st.floats(1.05, 1.95))
def test_r_form_matches_t_form(n, cphi, cdel, r):
    """The r-chart formulas are the t-chart ones after dt = dr / sqrt(1 - phi)."""
    phi = PhiMetric(n, shifted_poly([0.1] + cphi, 1.0, 2.0))
    delta = shifted_poly([0.05] + cdel, 1.0, 2.0)
    jh, jf = phi_jets_in_t(phi, r, delta)
    via_t = np.array(ricci_from_jets(n, *jh, *jf))
    v, d1, d2 = phi.phi.jet(r)
    e0, e1, e2 = delta.jet(r)
    via_r = np.array(ricci_warped_r(n, (1 - v, -d1, -d2), (1 - e0, -e1, -e2), r))
    assert np.allclose(via_r, via_t, rtol=1e-10, atol=1e-12)


@given(ns, st.floats(2.0, 8.0), st.floats(0.1, 0.9))
def test_psi_identities(n, R, u):
    p = phi_R(R, n)
    r = u * R
    psi = psi_from_phi(p)
    assert psi(r) == pytest.approx(2 * (n + 1) * r**2 / R**2)
    r00, r22 = ricci_phi(p, r)
    q00, q22 = ricci_psi(power(2.0 * (n + 1) / R**2, 2, 0.0, R), r)
    assert r00 == pytest.approx(q00) and r22 == pytest.approx(q22)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
@given(st.integers(2, 4), st.lists(st.floats(-0.4, 0.0), min_size=2, max_size=2), st.floats(1.1, 1.9))
def test_phi_psi_roundtrip(n, c, r):
    """phi -> psi -> phi recovers a profile with phi(1) = 1."""
    base = shifted_poly([1.0, -0.5 + c[0], c[1]], 1.0, 2.0)
    psi = psi_from_phi(PhiMetric(n, base))
    q = RadialProfile(1.0, 2.0, psi.value, psi.d1)
    back = phi_from_psi(q, n)
    assert back.phi(r) == pytest.approx(base(r), rel=1e-9, abs=1e-12)


def test_smoothness_limits_calabi():
    for n in (2, 3, 4):
        assert smoothness_limits(calabi_phi(n)) == pytest.approx((0.0, n))
    with pytest.raises(ValueError):
        smoothness_limits(phi_R(3.0, 2))


def test_arclength_matches_independent_quadrature():
    R, n = 3.0, 2
    assert arclength_reparam(phi_R(R, n), 0.0, 2.0) == pytest.approx(R * np.arcsin(2.0 / R), rel=1e-11)
    p = calabi_phi(n)
    exact = mpmath.quad(lambda x: 1 / mpmath.sqrt(1 - x ** (-2 * n)), [1, 1.5, 4])
    assert arclength_reparam(p, 1.0, 4.0) == pytest.approx(float(exact), rel=1e-9)
    assert arclength_reparam(p, 4.0, 1.0) == pytest.approx(-float(exact), rel=1e-9)


def test_flat_phi_is_flat():
    vals = ricci_phi(flat_phi(3), np.linspace(0.5, 5, 7))
    assert np.max(np.abs(np.stack(vals))) == 0


def test_collapsed_orbit_raises():
    with pytest.raises(CollapsedOrbitError):
        ricci_hf(fubini_study_metric(1.0, 2), 0.0)


def test_phi_metric_rejects_phi_at_least_one():
    with pytest.raises(ValueError):
        PhiMetric(2, polynomial([1.5], 0.0, 1.0))
    with pytest.raises(ValueError):
        PhiMetric(1, polynomial([0.0], 0.0, 1.0))


def test_smoothstep5_jets():
    x = np.linspace(-0.5, 1.5, 41)
    s, s1, s2 = smoothstep5(x)
    assert s.min() == 0 and s.max() == 1
    assert np.all(np.diff(s) >= 0)
    h = 1e-5
    xi = np.linspace(0.05, 0.95, 9)
    assert np.allclose((smoothstep5(xi + h)[0] - smoothstep5(xi - h)[0]) / (2 * h), smoothstep5(xi)[1], atol=1e-8)


# -- oracle comparisons --------------------------------------------------------------


def test_hf_formula_against_oracle_squashed():
    w = squashed_fs_metric(2.0, 2, 0.8)
    chk = hf_oracle_check(w, 0.3, 2.8, n_points=60, seed=3)
    assert chk["max_rel_error"] <= 1e-5
    assert hf_convergence_order(w, 0.3, 2.8, n_points=5)["order"] >= 1.8


@pytest.mark.parametrize("n,R", [(2, 1.0), (3, 2.0)])
def test_einstein_check(n, R):
    c = einstein_check(n, R, n_points=30)
    assert c["pass"] and c["closed_form_dev"] <= 1e-8 and c["oracle_dev"] <= 1e-5


def test_calabi_check_n2():
    c = calabi_check(2, n_points=30)
    assert c["pass"]


def test_oracle_detects_wrong_target():
    # the oracle is a real measurement: a wrong Einstein constant is far off
    assert phi_oracle_deviation(phi_R(1.0, 2), 5.0, 0.1, 0.9, n_points=5) > 0.9
