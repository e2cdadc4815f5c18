"""Path loss model tests: analytic oracles and structural invariants."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mariner_chan.geometry import LinkGeometry, SPEED_OF_LIGHT, break_distance
from mariner_chan.pathloss import (
    CiParams,
    DualSlopeParams,
    SeaStateParams,
    ci_path_loss,
    dual_ci_mtr_path_loss,
    dual_ci_path_loss,
    fspl,
    is_null,
    mtr_factors,
    mtr_path_loss,
    received_power,
    sample_shadow_fading,
    two_ray_simplified,
)

REF = LinkGeometry(5.8e9, 25.0, 4.0, 3000.0)
CALM = SeaStateParams(v_w=0.0)


def test_fspl_oracle():
    # independent form: 20log10(d) + 20log10(f) - 147.55...
    const = 20.0 * math.log10(4.0 * math.pi / SPEED_OF_LIGHT)
    assert fspl(5.8e9, 1000.0) == pytest.approx(
        20 * math.log10(1000.0) + 20 * math.log10(5.8e9) + const)
    # doubling distance adds 6.02 dB
    assert fspl(5.8e9, 2000.0) - fspl(5.8e9, 1000.0) == pytest.approx(
        20 * math.log10(2), abs=1e-12)


def test_two_ray_nulls_and_peaks():
    lam = SPEED_OF_LIGHT / 5.8e9
    # nulls where 2*h_t*h_r/(lam*d) is an integer; floating-point evaluation
    # lands within rounding of the exact null, so the loss is merely enormous
    d_null = 2 * 25.0 * 4.0 / (lam * 2.0)
    assert two_ray_simplified(REF.at_distance(d_null)) > 300.0
    assert is_null(math.inf) and not is_null(150.0)
    # constructive peak (argument pi/2) sits 6.02 dB below FSPL
    d_peak = 4 * 25.0 * 4.0 / lam
    pl = two_ray_simplified(REF.at_distance(d_peak))
    assert pl == pytest.approx(fspl(5.8e9, d_peak) - 20 * math.log10(2), abs=1e-9)


def test_mtr_degenerates_to_two_ray():
    for d in (1200.0, 2500.0, 5000.0, 7000.0):
        a = mtr_path_loss(REF.at_distance(d), CALM, dsr_override=(1.0, 1.0, 1.0))
        b = two_ray_simplified(REF.at_distance(d))
        if math.isfinite(a) and math.isfinite(b):
            assert a == pytest.approx(b, abs=0.05)


def test_mtr_factor_ranges():
    sea = SeaStateParams(v_w=7.7)
    f = mtr_factors(REF, sea)
    assert 0.0 < f.divergence <= 1.0
    assert 0.0 <= f.shadowing <= 1.0
    assert 0.0 < f.roughness <= 1.0
    assert f.beta0 == pytest.approx(0.003 + 0.00512 * 7.7)
    assert f.sigma_s == pytest.approx(0.0051 * 7.7**2)


def test_mtr_roughness_grows_with_wind():
    # higher wind -> rougher sea -> weaker coherent reflection
    r_low = mtr_factors(REF, SeaStateParams(v_w=3.0)).roughness
    r_high = mtr_factors(REF, SeaStateParams(v_w=15.0)).roughness
    assert r_high < r_low


def test_mtr_divergence_forms():
    sea = SeaStateParams(v_w=5.0)
    inv = mtr_factors(REF, sea, divergence_form="inverse-sqrt").divergence
    lit = mtr_factors(REF, sea, divergence_form="as-printed").divergence
    assert inv == pytest.approx(lit ** -0.5)
    with pytest.raises(ValueError):
        mtr_factors(REF, sea, divergence_form="bogus")


def test_mtr_phase_forms():
    sea = SeaStateParams(v_w=5.0)
    pd = mtr_factors(REF, sea, phase_form="path-difference").phase
    ap = mtr_factors(REF, sea, phase_form="as-printed").phase
    assert ap == pytest.approx(pd / REF.d)
    with pytest.raises(ValueError):
        mtr_factors(REF, sea, phase_form="bogus")


def test_smith_shadowing_limits():
    sea = SeaStateParams(v_w=7.7)
    # steep incidence: no shielding
    steep = LinkGeometry(5.8e9, 200.0, 100.0, 300.0)
    assert mtr_factors(steep, sea).shadowing == pytest.approx(1.0, abs=1e-6)
    # near-grazing incidence: significant shielding
    grazing = LinkGeometry(5.8e9, 2.0, 1.0, 30_000.0)
    assert mtr_factors(grazing, sea).shadowing < 0.6


def test_ci_path_loss():
    p = CiParams(n=3.14, d0=1.0)
    assert ci_path_loss(p, 5.8e9, 1.0) == pytest.approx(fspl(5.8e9, 1.0))
    # slope oracle: one decade adds 10n dB
    assert (ci_path_loss(p, 5.8e9, 10_000.0) - ci_path_loss(p, 5.8e9, 1000.0)
            == pytest.approx(10 * 3.14))
    with pytest.raises(ValueError):
        ci_path_loss(p, 5.8e9, 0.5)


def test_dual_ci_continuity_and_slopes():
    p = DualSlopeParams(n1=2.02, n2=3.27, d_break=break_distance(REF))
    eps = 1e-6
    below = dual_ci_path_loss(p, 5.8e9, p.d_break - eps)
    above = dual_ci_path_loss(p, 5.8e9, p.d_break + eps)
    assert below == pytest.approx(above, abs=1e-3)
    assert (dual_ci_path_loss(p, 5.8e9, 4 * p.d_break)
            - dual_ci_path_loss(p, 5.8e9, 2 * p.d_break)
            == pytest.approx(10 * 3.27 * math.log10(2)))


def test_dual_ci_mtr_continuity():
    sea = SeaStateParams(v_w=7.7)
    p = DualSlopeParams(n1=2.10, n2=6.03, d_break=break_distance(REF))
    eps = 1e-6
    below = dual_ci_mtr_path_loss(p, REF, sea, p.d_break - eps)
    above = dual_ci_mtr_path_loss(p, REF, sea, p.d_break + eps)
    assert below == pytest.approx(above, abs=1e-3)
    # second slope oracle beyond the break
    assert (dual_ci_mtr_path_loss(p, REF, sea, 4 * p.d_break)
            - dual_ci_mtr_path_loss(p, REF, sea, 2 * p.d_break)
            == pytest.approx(10 * 6.03 * math.log10(2)))


def test_received_power_budget():
    assert received_power(30.0, 120.0, 3.0, 1.5) == pytest.approx(-94.5)


def test_shadow_fading_sampling():
    x = sample_shadow_fading(4.0, 200_000, seed=0)
    assert abs(float(np.mean(x))) < 0.05
    assert float(np.std(x)) == pytest.approx(4.0, abs=0.05)
    assert np.array_equal(x, sample_shadow_fading(4.0, 200_000, seed=0))


@given(d=st.floats(100.0, 30_000.0), vw=st.floats(0.0, 20.0))
def test_mtr_loss_bounded_below_by_deep_interference(d, vw):
    """Composite magnitude <= 2 implies loss >= FSPL - 6.03 dB."""
    sea = SeaStateParams(v_w=vw)
    pl = mtr_path_loss(REF.at_distance(d), sea)
    assert pl >= fspl(5.8e9, d) - 20 * math.log10(2) - 1e-9


def test_validation():
    with pytest.raises(ValueError):
        SeaStateParams(v_w=-1.0)
    with pytest.raises(ValueError):
        CiParams(n=-2.0)
    with pytest.raises(ValueError):
        DualSlopeParams(n1=2.0, n2=3.0, d_break=-1.0)
    with pytest.raises(ValueError):
        fspl(5.8e9, 0.0)
    with pytest.raises(ValueError):
        sample_shadow_fading(-1.0, 10)
