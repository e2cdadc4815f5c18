"""Large-scale path loss models for over-water links.

Covers free space, the simplified two-ray model, the modified two-ray (MTR)
model with sea-surface divergence/shadowing/roughness factors, the close-in
(CI) reference-distance model, the dual-slope CI model, the dual-slope CI-MTR
model, and the dB-domain link-budget combinator.

Deterministic evaluators never add shadow fading; use ``sample_shadow_fading``
to draw the dB-domain random term separately.  Interference nulls of the
idealized two-ray family are reported as ``math.inf`` loss (use ``is_null``).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, i0e

from .geometry import (
    LinkGeometry,
    SPEED_OF_LIGHT,
    break_distance,
    reflection_geometry,
    wavelength,
)


@dataclass(frozen=True)
class SeaStateParams:
    """Wind speed and sea-surface reflection coefficient."""

    v_w: float = 0.0  # wind speed, m/s
    gamma_refl: complex = -1.0 + 0.0j

    def __post_init__(self):
        if self.v_w < 0:
            raise ValueError(f"wind speed must be non-negative, got {self.v_w}")
        if abs(self.gamma_refl) > 1 + 1e-12:
            raise ValueError(f"|reflection coefficient| must be <= 1, got {self.gamma_refl}")


@dataclass(frozen=True)
class MtrFactors:
    """Multiplicative factors applied to the reflected ray in the MTR model."""

    divergence: float   # D, spherical-Earth ray-bundle spreading, (0, 1]
    shadowing: float    # S, wave shielding at grazing incidence, [0, 1]
    roughness: float    # R, Miller-Brown coherent-reflection reduction, (0, 1]
    phase: float        # reflected-ray excess phase, rad
    beta0: float        # RMS sea-surface slope
    sigma_s: float      # sea-surface height standard deviation, m


@dataclass(frozen=True)
class CiParams:
    """Single-slope close-in reference-distance model parameters."""

    n: float            # path loss exponent
    d0: float = 1.0     # reference distance, m
    sigma_sf: float = 0.0  # shadow-fading std, dB

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError(f"path loss exponent must be positive, got {self.n}")
        if self.d0 <= 0:
            raise ValueError(f"reference distance must be positive, got {self.d0}")
        if self.sigma_sf < 0:
            raise ValueError(f"shadow-fading std must be non-negative, got {self.sigma_sf}")


@dataclass(frozen=True)
class DualSlopeParams:
    """Two-segment path loss exponents around a break distance."""

    n1: float
    n2: float
    d_break: float  # m
    sigma_sf: float = 0.0  # dB

    def __post_init__(self):
        if self.n1 <= 0 or self.n2 <= 0:
            raise ValueError(f"path loss exponents must be positive, got {self.n1}, {self.n2}")
        if self.d_break <= 0:
            raise ValueError(f"break distance must be positive, got {self.d_break}")
        if self.sigma_sf < 0:
            raise ValueError(f"shadow-fading std must be non-negative, got {self.sigma_sf}")


def is_null(loss_db: float) -> bool:
    """True for the flagged +inf loss returned at exact interference nulls."""
    return math.isinf(loss_db) and loss_db > 0


def fspl(f: float, d: float) -> float:
    """Free-space path loss in dB."""
    if f <= 0 or d <= 0:
        raise ValueError(f"frequency and distance must be positive, got {f}, {d}")
    return 20.0 * math.log10(4.0 * math.pi * f * d / SPEED_OF_LIGHT)


def two_ray_simplified(geom: LinkGeometry) -> float:
    """Flat-Earth two-ray path loss with reflection coefficient -1 and the
    small-angle path-difference approximation (valid for d >> h_t, h_r).
    """
    lam = wavelength(geom)
    s = math.sin(2.0 * math.pi * geom.h_t * geom.h_r / (lam * geom.d))
    if s == 0.0:
        return math.inf
    return 20.0 * math.log10(4.0 * math.pi * geom.d / (lam * abs(2.0 * s)))


def _smith_shadowing(grazing_angle: float, beta0: float) -> float:
    """Wave-shielding factor at grazing incidence (Smith's shadowing function)."""
    t = math.tan(grazing_angle)
    if beta0 <= 0:
        return 1.0
    a = t / (math.sqrt(2.0) * beta0)
    lam = 0.5 * (math.sqrt(2.0 / math.pi) * (beta0 / t) * math.exp(-a * a) - erfc(a))
    return (1.0 - 0.5 * erfc(a)) / (lam + 1.0)


def mtr_factors(
    geom: LinkGeometry,
    sea: SeaStateParams,
    h_t_eff: float | None = None,
    h_r_eff: float | None = None,
    *,
    divergence_form: str = "inverse-sqrt",
    phase_form: str = "path-difference",
) -> MtrFactors:
    """Sea-surface factors for the MTR model at (possibly wave-adjusted)
    effective antenna heights.

    ``divergence_form``: "inverse-sqrt" (physical, D <= 1) or "as-printed"
    (literal published form, D >= 1).  ``phase_form``: "path-difference"
    (phi = 2*pi*delta_d/lambda) or "as-printed" (phi = 2*pi*delta_d/(lambda*d)).
    """
    refl = reflection_geometry(geom, h_t_eff, h_r_eff)
    lam = wavelength(geom)
    beta0 = 0.003 + 0.00512 * sea.v_w
    sigma_s = 0.0051 * sea.v_w**2

    base = 1.0 + 2.0 * refl.d1 * refl.d2 / (geom.effective_radius * (geom.h_t + geom.h_r))
    if divergence_form == "inverse-sqrt":
        div = base ** -0.5
    elif divergence_form == "as-printed":
        div = base
    else:
        raise ValueError(f"unknown divergence_form {divergence_form!r}")

    shadow = _smith_shadowing(refl.grazing_angle, beta0)

    # Miller-Brown roughness; I0 evaluated at |z| (I0 is even), scaled form
    # exp(-z)*I0(z) computed stably via i0e.
    z = (4.0 * math.pi * sigma_s * math.sin(refl.grazing_angle)) ** 2 / (2.0 * lam**2)
    rough = i0e(z)

    if phase_form == "path-difference":
        phase = 2.0 * math.pi * refl.delta_d / lam
    elif phase_form == "as-printed":
        phase = 2.0 * math.pi * refl.delta_d / (lam * geom.d)
    else:
        raise ValueError(f"unknown phase_form {phase_form!r}")

    return MtrFactors(divergence=div, shadowing=shadow, roughness=rough,
                      phase=phase, beta0=beta0, sigma_s=sigma_s)


def _mtr_interference_magnitude(factors: MtrFactors, gamma_refl: complex) -> float:
    """|1 + D*S*R*Gamma*exp(-j*phi)| for the composite two-ray sum."""
    term = (factors.divergence * factors.shadowing * factors.roughness
            * gamma_refl * cmath.exp(-1j * factors.phase))
    return abs(1.0 + term)


def mtr_path_loss(
    geom: LinkGeometry,
    sea: SeaStateParams,
    h_t_eff: float | None = None,
    h_r_eff: float | None = None,
    *,
    dsr_override: tuple[float, float, float] | None = None,
    divergence_form: str = "inverse-sqrt",
    phase_form: str = "path-difference",
) -> float:
    """Modified two-ray path loss in dB.

    ``dsr_override`` substitutes (D, S, R) while keeping the geometric phase,
    which is how the model is degenerated to the idealized two-ray form.
    """
    factors = mtr_factors(geom, sea, h_t_eff, h_r_eff,
                          divergence_form=divergence_form, phase_form=phase_form)
    if dsr_override is not None:
        d_, s_, r_ = dsr_override
        factors = MtrFactors(d_, s_, r_, factors.phase, factors.beta0, factors.sigma_s)
    mag = _mtr_interference_magnitude(factors, sea.gamma_refl)
    if mag == 0.0:
        return math.inf
    lam = wavelength(geom)
    return 20.0 * math.log10(4.0 * math.pi * geom.d / (lam * mag))


def ci_path_loss(p: CiParams, f: float, d: float) -> float:
    """Close-in reference-distance path loss (deterministic mean), dB."""
    if d < p.d0:
        raise ValueError(f"distance {d} below reference distance {p.d0}")
    return fspl(f, p.d0) + 10.0 * p.n * math.log10(d / p.d0)


def dual_ci_path_loss(p: DualSlopeParams, f: float, d: float, d0: float = 1.0) -> float:
    """Dual-slope close-in path loss (deterministic mean), dB; continuous at
    the break distance by construction.
    """
    if d < d0:
        raise ValueError(f"distance {d} below reference distance {d0}")
    anchor = fspl(f, d0)
    if d <= p.d_break:
        return anchor + 10.0 * p.n1 * math.log10(d / d0)
    return (anchor + 10.0 * p.n1 * math.log10(p.d_break / d0)
            + 10.0 * p.n2 * math.log10(d / p.d_break))


def dual_ci_mtr_path_loss(
    p: DualSlopeParams,
    geom: LinkGeometry,
    sea: SeaStateParams,
    d: float,
    *,
    divergence_form: str = "inverse-sqrt",
    phase_form: str = "path-difference",
) -> float:
    """Dual-slope CI-MTR path loss in dB: the MTR interference structure with
    an adaptive exponent n1 up to the break distance, then a second slope n2
    anchored at the break-distance value.
    """
    if d <= 0:
        raise ValueError(f"distance must be positive, got {d}")

    def segment_one(dist: float) -> float:
        g = geom.at_distance(dist)
        factors = mtr_factors(g, sea, divergence_form=divergence_form, phase_form=phase_form)
        mag = _mtr_interference_magnitude(factors, sea.gamma_refl)
        if mag == 0.0:
            return math.inf
        return 10.0 * p.n1 * math.log10(4.0 * math.pi * geom.f_c * dist / (SPEED_OF_LIGHT * mag))

    if d <= p.d_break:
        return segment_one(d)
    anchor = segment_one(p.d_break)
    return anchor + 10.0 * p.n2 * math.log10(d / p.d_break)


def sample_shadow_fading(sigma_db: float, n: int, seed: int | None = None) -> np.ndarray:
    """Zero-mean Gaussian dB-domain shadow fading samples."""
    if sigma_db < 0:
        raise ValueError(f"shadow-fading std must be non-negative, got {sigma_db}")
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, sigma_db, size=n)


def received_power(p_tx_dbm: float, pl_db: float, x_swift_db: float = 0.0,
                   x_small_db: float = 0.0) -> float:
    """Instantaneous received power in dBm from the dB-domain link budget."""
    return p_tx_dbm - pl_db - x_swift_db - x_small_db
