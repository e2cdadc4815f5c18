"""Gini/K sparsity metric tests, including property-based split invariances."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mariner_chan.sparsity import (
    PdpRecord,
    coarsen_pdp,
    gini,
    metrics,
    mpc_extract,
    rician_k_from_pdp,
    split_equal,
    split_random,
)


def _pdp(powers):
    powers = np.asarray(powers, dtype=float)
    return PdpRecord(delays=np.arange(powers.size) * 50e-9, powers=powers)


def test_gini_equal_powers_is_zero():
    assert gini(_pdp([0.25] * 4)) == pytest.approx(0.0, abs=1e-15)
    assert gini(_pdp([3.0] * 17)) == pytest.approx(0.0, abs=1e-12)


def test_gini_one_hot_oracle():
    # single dominant path among N components: G = 1 - 1/N
    assert gini(_pdp([0, 0, 0, 1.0])) == pytest.approx(0.75)
    assert gini(_pdp([0] * 39 + [1.0])) == pytest.approx(1 - 1 / 40)


def test_gini_invariant_to_scale_and_order():
    p = _pdp([0.5, 0.1, 0.3, 0.1])
    assert gini(_pdp([5.0, 1.0, 3.0, 1.0])) == pytest.approx(gini(p))
    assert gini(_pdp([0.1, 0.1, 0.3, 0.5])) == pytest.approx(gini(p))


powers_strategy = st.lists(st.floats(1e-6, 1e3), min_size=2, max_size=50)


@given(powers=powers_strategy, m=st.integers(1, 8))
@settings(max_examples=200)
def test_equal_split_preserves_gini(powers, m):
    p = _pdp(powers)
    assert abs(gini(split_equal(p, m)) - gini(p)) < 1e-12


@given(powers=powers_strategy, m=st.integers(2, 8), seed=st.integers(0, 2**31))
@settings(max_examples=200)
def test_random_split_cannot_reduce_gini(powers, m, seed):
    p = _pdp(powers)
    assert gini(split_random(p, m, seed=seed)) >= gini(split_equal(p, m)) - 1e-12


@given(powers=powers_strategy, m=st.integers(2, 6))
@settings(max_examples=100)
def test_coarsening_a_split_recovers_the_original(powers, m):
    p = _pdp(powers)
    fine = split_random(p, m, seed=1)
    coarse = coarsen_pdp(fine, bin_width=50e-9)
    assert coarse.n_mpc == p.n_mpc
    assert np.allclose(np.sort(coarse.powers), np.sort(p.powers))
    # coarsening pools power: the index cannot increase
    assert gini(coarse) <= gini(fine) + 1e-12


def test_split_preserves_total_power_and_ordering():
    p = _pdp([0.6, 0.3, 0.1])
    for splitter in (lambda q: split_equal(q, 4), lambda q: split_random(q, 4, seed=0)):
        s = splitter(p)
        assert s.total_power == pytest.approx(p.total_power)
        assert np.all(np.diff(s.delays) > 0)
        assert s.n_mpc == 12


def test_rician_k_from_pdp_oracle():
    k_lin, k_db = rician_k_from_pdp(_pdp([9.0, 0.5, 0.5]))
    assert k_lin == pytest.approx(9.0)
    assert k_db == pytest.approx(10 * math.log10(9.0))
    k_lin, k_db = rician_k_from_pdp(_pdp([1.0]))
    assert math.isinf(k_lin) and math.isinf(k_db)


def test_metrics_bundle():
    m = metrics(_pdp([9.0, 0.5, 0.5]))
    assert m.n_mpc == 3
    assert m.gini == pytest.approx(gini(_pdp([9.0, 0.5, 0.5])))
    assert m.k_factor_db == pytest.approx(10 * math.log10(9.0))


def test_mpc_extract_threshold():
    delays = np.arange(5) * 50e-9
    powers = np.array([10.0, 3.9, 4.1, 0.5, 8.0])
    # floor 1.0, 6 dB threshold -> keep strictly above 3.981
    out = mpc_extract(delays, powers, noise_floor=1.0, threshold_db=6.0)
    assert np.allclose(out.powers, [10.0, 4.1, 8.0])
    with pytest.raises(ValueError):
        mpc_extract(delays, powers, noise_floor=100.0)
    with pytest.raises(ValueError):
        mpc_extract(delays, powers, noise_floor=1.0, threshold_db=-1.0)


def test_pdp_validation():
    with pytest.raises(ValueError):
        PdpRecord(delays=np.array([0.0, 0.0]), powers=np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        PdpRecord(delays=np.array([0.0, 1e-9]), powers=np.array([1.0, -1.0]))
    with pytest.raises(ValueError):
        PdpRecord(delays=np.array([0.0]), powers=np.array([0.0]))
    with pytest.raises(ValueError):
        split_equal(_pdp([1.0, 2.0]), 0)
    with pytest.raises(ValueError):
        coarsen_pdp(_pdp([1.0, 2.0]), bin_width=0.0)
