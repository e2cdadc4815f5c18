"""Sea-wave-induced fixed-point (SWIFT) fading simulation.

The received level of a fixed land-to-ship link fluctuates on a seconds
timescale because waves displace the reflection geometry and the vessel rolls,
pitches, and yaws.  This module combines the time-varying two-ray interference
(via wave-adjusted effective antenna heights) with antenna-pattern and
polarization mismatch losses from sinusoidal vessel rotation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import LinkGeometry
from .pathloss import SeaStateParams, mtr_path_loss
from .seastate import HarmonicSet, WaveSpectrumConfig, build_harmonics, surface_height


@dataclass(frozen=True)
class MotionConfig:
    """Sinusoidal roll/pitch/yaw motion: amplitudes, angular rates, phases."""

    amp_roll: float = 0.0    # rad
    amp_pitch: float = 0.0   # rad
    amp_yaw: float = 0.0     # rad
    rate_roll: float = 0.0   # rad/s
    rate_pitch: float = 0.0  # rad/s
    rate_yaw: float = 0.0    # rad/s
    phase_roll: float = 0.0  # rad
    phase_pitch: float = 0.0
    phase_yaw: float = 0.0

    def __post_init__(self):
        for amp in (self.amp_roll, self.amp_pitch, self.amp_yaw):
            if not 0 <= amp < math.pi / 2:
                raise ValueError(f"rotation amplitude must be in [0, pi/2), got {amp}")
        for rate in (self.rate_roll, self.rate_pitch, self.rate_yaw):
            if rate < 0:
                raise ValueError(f"rotation rate must be non-negative, got {rate}")

    @classmethod
    def with_random_phases(cls, amp_roll: float, amp_pitch: float, amp_yaw: float,
                           rate_roll: float, rate_pitch: float, rate_yaw: float,
                           seed: int = 0) -> "MotionConfig":
        rng = np.random.default_rng(seed)
        ph = rng.uniform(0.0, 2.0 * math.pi, size=3)
        return cls(amp_roll, amp_pitch, amp_yaw, rate_roll, rate_pitch, rate_yaw,
                   float(ph[0]), float(ph[1]), float(ph[2]))


@dataclass(frozen=True)
class RotationState:
    """Instantaneous roll/pitch/yaw angles in radians."""

    phi: float
    theta: float
    psi: float


@dataclass(frozen=True)
class AntennaPattern:
    """Elevation-cut amplitude pattern F(elevation), linearly interpolated.

    The default is a cosine roll-off about a zero boresight elevation,
    normalized so F(0) = 1; substitute a measured table where available.
    """

    elevations: np.ndarray = field(
        default_factory=lambda: np.linspace(-math.pi / 2, math.pi / 2, 181))
    gains: np.ndarray | None = None

    def __post_init__(self):
        if self.gains is None:
            object.__setattr__(self, "gains", np.cos(self.elevations))
        if np.any(np.asarray(self.gains) < 0):
            raise ValueError("pattern amplitude gains must be non-negative")

    def gain(self, elevation: float) -> float:
        return float(np.interp(elevation, self.elevations, self.gains))


def rotation_angles(m: MotionConfig, t: float) -> RotationState:
    """Roll/pitch/yaw at time t under the sinusoidal motion model."""
    return RotationState(
        phi=m.amp_roll * math.sin(m.rate_roll * t + m.phase_roll),
        theta=m.amp_pitch * math.sin(m.rate_pitch * t + m.phase_pitch),
        psi=m.amp_yaw * math.sin(m.rate_yaw * t + m.phase_yaw),
    )


def rotation_matrix(s: RotationState) -> np.ndarray:
    """Composite rotation Rz(psi) @ Ry(theta) @ Rx(phi)."""
    cf, sf = math.cos(s.phi), math.sin(s.phi)
    ct, st = math.cos(s.theta), math.sin(s.theta)
    cp, sp = math.cos(s.psi), math.sin(s.psi)
    rx = np.array([[1, 0, 0], [0, cf, -sf], [0, sf, cf]])
    ry = np.array([[ct, 0, st], [0, 1, 0], [-st, 0, ct]])
    rz = np.array([[cp, -sp, 0], [sp, cp, 0], [0, 0, 1]])
    return rz @ ry @ rx


def los_direction(geom: LinkGeometry) -> np.ndarray:
    """Unit vector from Rx toward Tx in vessel coordinates (x toward shore)."""
    alpha0 = math.atan2(geom.h_t - geom.h_r, geom.d)
    return np.array([math.cos(alpha0), 0.0, math.sin(alpha0)])


def pattern_loss(s: RotationState, geom: LinkGeometry, p: AntennaPattern) -> float:
    """Antenna gain loss in dB (>= 0 for normalized patterns) from the rotated
    boresight; +inf where the pattern has a null at the queried elevation.
    """
    u = rotation_matrix(s) @ los_direction(geom)
    uz = min(1.0, max(-1.0, float(u[2])))
    f = p.gain(math.asin(uz))
    if f == 0.0:
        return math.inf
    return -20.0 * math.log10(f)


def polarization_loss(s: RotationState) -> float:
    """Vertical-polarization mismatch loss in dB: -20*log10(|cos(theta)*cos(phi)|)."""
    rho = abs(math.cos(s.theta) * math.cos(s.phi))
    if rho == 0.0:
        return math.inf
    return -20.0 * math.log10(rho)


def effective_heights(geom: LinkGeometry, harmonics: HarmonicSet, t: float,
                      max_iter: int = 50, tol: float = 1e-9) -> tuple[float, float, float]:
    """Wave-adjusted effective antenna heights and reflection-point distance.

    Solves the coupled system: the Tx height is reduced by the surface lift at
    the reflection point, the Rx height rides its local surface relative to
    that same lift, and the reflection point divides the path in the ratio of
    the two effective heights.  Returns (h_t_eff, h_r_eff, d1).
    """
    d = geom.d
    h_rx_surface = surface_height(harmonics, t, d)

    def heights(d1: float) -> tuple[float, float]:
        hs1 = surface_height(harmonics, t, d1)
        return geom.h_t - hs1, geom.h_r + h_rx_surface - hs1

    d1 = d * geom.h_t / (geom.h_t + geom.h_r)
    for _ in range(max_iter):
        ht_eff, hr_eff = heights(d1)
        if ht_eff <= 0 or hr_eff <= 0:
            break
        d1_next = d * ht_eff / (ht_eff + hr_eff)
        if abs(d1_next - d1) < tol:
            ht_eff, hr_eff = heights(d1_next)
            return ht_eff, hr_eff, d1_next
        d1 = d1_next
    return _effective_heights_bisect(geom, heights, t)


def _effective_heights_bisect(geom, heights, t) -> tuple[float, float, float]:
    """Bisection fallback on the reflection-point balance residual."""
    d = geom.d

    def residual(d1: float) -> float:
        ht_eff, hr_eff = heights(d1)
        return d1 * hr_eff - (d - d1) * ht_eff

    eps = 1e-6 * d
    lo, hi = eps, d - eps
    f_lo, f_hi = residual(lo), residual(hi)
    if f_lo * f_hi > 0:
        raise RuntimeError(
            f"reflection-point solver failed at t={t}: residual({lo:.3g})={f_lo:.3g}, "
            f"residual({hi:.3g})={f_hi:.3g} do not bracket a root")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = residual(mid)
        if abs(f_mid) < 1e-9 * d:
            break
        if f_lo * f_mid <= 0:
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    ht_eff, hr_eff = heights(mid)
    if ht_eff <= 0 or hr_eff <= 0:
        raise RuntimeError(
            f"wave crest reaches an antenna at t={t}: effective heights "
            f"({ht_eff:.3g}, {hr_eff:.3g})")
    return ht_eff, hr_eff, mid


@dataclass
class SwiftSeries:
    """De-meaned received-level deviation time series from one simulation run."""

    t: np.ndarray           # s
    fading_db: np.ndarray   # zero-mean deviations, dB
    seed: int
    n_flagged: int = 0      # samples excluded from the mean as +inf losses


def simulate_swift(
    geom: LinkGeometry,
    sea_cfg: WaveSpectrumConfig,
    motion: MotionConfig,
    pattern: AntennaPattern,
    duration: float = 93.0,
    dt: float = 0.1,
    seed: int | None = None,
    sea: SeaStateParams | None = None,
) -> SwiftSeries:
    """Simulate the SWIFT fading series over ``duration`` seconds.

    Per step: solve the wave-adjusted reflection geometry, evaluate the MTR
    received level at the effective heights, subtract pattern and polarization
    losses, then de-mean the finite samples of the collected series.
    """
    if dt <= 0 or duration < dt:
        raise ValueError(f"need dt > 0 and duration >= dt, got {dt}, {duration}")
    if seed is None:
        seed = sea_cfg.seed
    else:
        sea_cfg = WaveSpectrumConfig(sea_cfg.v_w, sea_cfg.n_harmonics,
                                     sea_cfg.omega_lo, sea_cfg.omega_hi, seed)
    if sea is None:
        sea = SeaStateParams(v_w=sea_cfg.v_w)
    harmonics = build_harmonics(sea_cfg)

    times = np.arange(0.0, duration + 0.5 * dt, dt)
    level = np.empty_like(times)
    for i, t in enumerate(times):
        ht_eff, hr_eff, _ = effective_heights(geom, harmonics, t)
        loss = mtr_path_loss(geom, sea, ht_eff, hr_eff)
        state = rotation_angles(motion, t)
        lg = pattern_loss(state, geom, pattern)
        lp = polarization_loss(state)
        level[i] = -loss - lg - lp

    finite = np.isfinite(level)
    n_flagged = int(np.sum(~finite))
    mean = float(np.mean(level[finite]))
    fading = np.where(finite, level - mean, np.nan)
    return SwiftSeries(t=times, fading_db=fading, seed=seed, n_flagged=n_flagged)


def empirical_pdf(values: np.ndarray, bin_width: float) -> tuple[np.ndarray, np.ndarray]:
    """Normalized histogram PDF: (bin centers, densities) integrating to 1."""
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    if v.size < 2:
        raise ValueError("need at least 2 finite samples")
    lo, hi = float(np.min(v)), float(np.max(v))
    if hi == lo:
        return np.array([lo]), np.array([1.0 / bin_width])
    edges = np.arange(lo, hi + bin_width, bin_width)
    if edges[-1] < hi:
        edges = np.append(edges, edges[-1] + bin_width)
    density, edges = np.histogram(v, bins=edges, density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return centers, density


def decompose_scales(groups: list[np.ndarray]) -> tuple[np.ndarray, list[np.ndarray]]:
    """Split linear amplitude groups into medium- and small-scale components.

    Group-mean amplitudes become dB deviations from the location mean (the
    SWIFT samples); within-group amplitude ratios to the group mean are the
    small-scale samples, centered at 1.
    """
    means = []
    small = []
    for g in groups:
        arr = np.asarray(g, dtype=float)
        if arr.size == 0:
            raise ValueError("empty amplitude group")
        m = float(np.mean(arr))
        if m == 0.0:
            raise ValueError("zero group mean amplitude")
        means.append(m)
        small.append(arr / m)
    means_db = 20.0 * np.log10(np.array(means))
    swift_db = means_db - np.mean(means_db)
    return swift_db, small
