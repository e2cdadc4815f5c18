"""Channel-sparsity metrics over power delay profiles.

The Gini index measures how concentrated the multipath power is across
components (0 = uniform, -> 1 = single dominant path); the Rician K factor is
the strongest-path-to-rest power ratio.  Resolution-change constructions
(equal and random splitting, coarsening) provide executable checks of the
bandwidth-monotonicity properties of the Gini index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class PdpRecord:
    """A power delay profile: strictly increasing delays with linear powers."""

    delays: np.ndarray       # s
    powers: np.ndarray       # linear power per MPC, >= 0
    noise_floor: float = 0.0  # linear power

    def __post_init__(self):
        self.delays = np.asarray(self.delays, dtype=float)
        self.powers = np.asarray(self.powers, dtype=float)
        if self.delays.shape != self.powers.shape:
            raise ValueError("delays and powers must have the same length")
        if self.delays.size == 0:
            raise ValueError("empty PDP")
        if np.any(np.diff(self.delays) <= 0):
            raise ValueError("delays must be strictly increasing")
        if np.any(self.powers < 0):
            raise ValueError("powers must be non-negative")
        if not np.any(self.powers > 0):
            raise ValueError("at least one power must be positive")

    @property
    def n_mpc(self) -> int:
        return int(self.delays.size)

    @property
    def total_power(self) -> float:
        return float(np.sum(self.powers))


@dataclass(frozen=True)
class SparsityMetrics:
    gini: float
    k_factor_db: float
    n_mpc: int


def gini(p: PdpRecord) -> float:
    """Power-concentration index over ascending-sorted MPC powers."""
    powers = np.sort(p.powers)
    total = np.sum(powers)
    n = powers.size
    ranks = np.arange(1, n + 1)
    weights = (n - ranks + 0.5) / n
    return float(1.0 - 2.0 * np.sum(powers / total * weights))


def rician_k_from_pdp(p: PdpRecord) -> tuple[float, float]:
    """Strongest-path-to-rest power ratio as (linear, dB); +inf for a
    single-component profile.
    """
    p_max = float(np.max(p.powers))
    rest = p.total_power - p_max
    if p.n_mpc < 2 or rest <= 0:
        return math.inf, math.inf
    k = p_max / rest
    return k, 10.0 * math.log10(k)


def metrics(p: PdpRecord) -> SparsityMetrics:
    _, k_db = rician_k_from_pdp(p)
    return SparsityMetrics(gini=gini(p), k_factor_db=k_db, n_mpc=p.n_mpc)


def mpc_extract(delays: np.ndarray, powers: np.ndarray, noise_floor: float,
                threshold_db: float = 6.0) -> PdpRecord:
    """Retain dense-PDP bins strictly above noise_floor * 10^(threshold_db/10)."""
    if threshold_db < 0:
        raise ValueError(f"threshold must be non-negative dB, got {threshold_db}")
    delays = np.asarray(delays, dtype=float)
    powers = np.asarray(powers, dtype=float)
    cut = noise_floor * 10.0 ** (threshold_db / 10.0)
    keep = powers > cut
    if not np.any(keep):
        raise ValueError("no components above the detection threshold")
    return PdpRecord(delays=delays[keep], powers=powers[keep], noise_floor=noise_floor)


def split_equal(p: PdpRecord, m: int) -> PdpRecord:
    """Replace each MPC by m sub-components of equal power P_n/m; this leaves
    the Gini index unchanged.
    """
    if m < 1:
        raise ValueError(f"split factor must be >= 1, got {m}")
    if m == 1:
        return PdpRecord(p.delays.copy(), p.powers.copy(), p.noise_floor)
    delays, powers = _sub_delays(p, m)
    powers = np.repeat(p.powers / m, m)
    return PdpRecord(delays=delays, powers=powers, noise_floor=p.noise_floor)


def split_random(p: PdpRecord, m: int, seed: int | None = None) -> PdpRecord:
    """Replace each MPC by m sub-components with Dirichlet(1) random shares of
    its power; the Gini index can only grow relative to the equal split.
    """
    if m < 1:
        raise ValueError(f"split factor must be >= 1, got {m}")
    if m == 1:
        return PdpRecord(p.delays.copy(), p.powers.copy(), p.noise_floor)
    rng = np.random.default_rng(seed)
    delays, _ = _sub_delays(p, m)
    shares = rng.dirichlet(np.ones(m), size=p.n_mpc)
    powers = (shares * p.powers[:, None]).ravel()
    return PdpRecord(delays=delays, powers=powers, noise_floor=p.noise_floor)


def _sub_delays(p: PdpRecord, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Strictly increasing sub-delays nested inside each original bin."""
    gaps = np.diff(p.delays)
    widths = np.append(gaps, gaps[-1] if gaps.size else 1.0)
    offsets = (np.arange(m) / m)[None, :] * widths[:, None]
    delays = (p.delays[:, None] + offsets).ravel()
    return delays, widths


def coarsen_pdp(fine: PdpRecord, bin_width: float) -> PdpRecord:
    """Sum powers per delay bin of the given width (incoherent power addition);
    delays become bin centers.  Coarsening cannot increase the Gini index.
    """
    if bin_width <= 0:
        raise ValueError(f"bin width must be positive, got {bin_width}")
    # nudge ratios sitting a rounding error below a bin edge onto the edge
    ratio = fine.delays / bin_width + 1e-9
    idx = np.floor(ratio).astype(int)
    idx -= idx.min()
    powers = np.bincount(idx, weights=fine.powers)
    used = powers > 0
    first_bin = int(np.floor(ratio.min()))
    centers = (np.arange(powers.size) + first_bin + 0.5) * bin_width
    return PdpRecord(delays=centers[used], powers=powers[used],
                     noise_floor=fine.noise_floor)
