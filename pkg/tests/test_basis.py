import numpy as np
import pytest

from dimerchain.basis import (
    bit_at,
    n_down_for_sz,
    popcount,
    position_in_sector,
    sector_states,
    site_mask,
)


def test_sector_sizes_n4():
    assert sector_states(4, 2).shape[0] == 6  # sz = 0
    assert sector_states(4, 0).shape[0] == 1  # sz = +4
    total = sum(sector_states(4, d).shape[0] for d in range(5))
    assert total == 16


def test_sector_states_sorted_and_correct_popcount():
    states = sector_states(6, 2)
    assert np.all(np.diff(states) > 0)
    assert np.all(popcount(states) == 2)


def test_sz_to_n_down_roundtrip():
    assert n_down_for_sz(8, 0) == 4
    assert n_down_for_sz(8, -2) == 5
    with pytest.raises(ValueError):
        n_down_for_sz(8, 1)  # parity mismatch: empty sector
    with pytest.raises(ValueError):
        n_down_for_sz(4, 6)


def test_position_in_sector_rejects_foreign_index():
    states = sector_states(4, 2)
    pos = position_in_sector(states, np.array([0b0011]))
    assert states[pos[0]] == 0b0011
    with pytest.raises(ValueError):
        position_in_sector(states, np.array([0b0001]))


def test_site_mask_bounds():
    assert site_mask(1, 4) == 1
    assert site_mask(4, 4) == 8
    with pytest.raises(ValueError):
        site_mask(0, 4)
    with pytest.raises(ValueError):
        site_mask(5, 4)


def test_bit_at_matches_convention():
    idx = np.array([0b0110])
    assert bit_at(idx, 1)[0] == 0
    assert bit_at(idx, 2)[0] == 1
    assert bit_at(idx, 3)[0] == 1
    assert bit_at(idx, 4)[0] == 0
