import numpy as np
import pytest

from momentricci.submersion.oneill import sample_from_forms, submersion_forms
from momentricci.submersion.pipeline import (
    blowup_pipeline,
    blowup_setup,
    dn_block,
    pole_dn_samples,
    resolved_scan,
)
from momentricci.submersion.triple import TripleSphereMetric


@pytest.fixture(scope="module")
def setup():
    return blowup_setup(0.1)


def test_setup_constants(setup):
    S = setup
    assert S.rho2 == pytest.approx(0.025) and S.rho1 == pytest.approx(0.05)
    assert S.R_T == pytest.approx((2 * S.R_cp / S.rho2) ** 2)
    assert S.lam == pytest.approx(S.R_cp / S.R_T)
    # the gluing radius sqrt(R_T) of the core sits inside the small ball
    assert 1.0 < np.sqrt(S.R_T) < S.r_max
    assert S.theorem2.certificate.passed


def test_setup_rejects_large_eps():
    with pytest.raises(ValueError):
        blowup_setup(0.2)


def test_dn_block_over_all_coordinates_is_dn():
    m = TripleSphereMetric.from_eps(0.1)
    rng = np.random.default_rng(2)
    for _ in range(5):
        x = np.r_[rng.uniform(0.1, 1.4, 3), rng.uniform(0, 6, 6)]
        forms = submersion_forms(*m.jets(x), m.killing_rows())
        X = forms.horizontal @ rng.standard_normal(forms.horizontal.shape[1])
        s = sample_from_forms(forms, x, X)
        assert dn_block(forms, X, block=range(9)) == pytest.approx(s.dn, rel=1e-10, abs=1e-12)


def test_resolved_region_quotient_positive(setup):
    scan = resolved_scan(setup, 200, seed=0)
    assert scan.column("total").min() > 0
    assert scan.max_sum_defect <= 1e-9


def test_pole_dn_vanishes(setup):
    """(D_X N_2, X) at the exceptional sphere should vanish to 1e-6.

    Measured values are O(1) here; this is recorded as an open discrepancy.
    """
    vals = pole_dn_samples(setup, 8, seed=0)
    assert np.max(np.abs(vals)) <= 1e-6


def test_blowup_certificate_part_a():
    cert = blowup_pipeline(0.1, n_samples=200, seed=0, n_pole=4)
    for k in ("gao_jets", "gao_ricci_positive", "theorem2_n2", "a_quotient_positive", "sum_identity"):
        assert cert.checks[k], k
    assert cert.extra["kappa_measured"] > 0
