"""Computational-basis conventions and total-Sz sector enumeration.

Basis convention, used everywhere in this package:

* Site ``k`` (1-based, ``1 <= k <= n``) maps to bit ``k - 1`` of the basis
  index, so site 1 is the least significant bit.
* Bit value 0 is spin-up, i.e. ``sigma^z |0> = +|0>``; bit value 1 is
  spin-down.
* The total-Sz quantum number ``sz`` counts up-minus-down spins, so a basis
  index with ``d`` set bits has ``sz = n - 2 d``.

Sector tables are sorted arrays of basis indices; positions inside a sector
are recovered with binary search (`position_in_sector`).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

BASIS_CONVENTION = (
    "site k <-> bit (k-1) of the basis index; bit 0 = spin-up (sigma^z = +1)"
)


def site_mask(site: int, n_qubits: int) -> int:
    """Bit mask selecting the given 1-based site."""
    if not 1 <= site <= n_qubits:
        raise ValueError(f"site {site} out of range 1..{n_qubits}")
    return 1 << (site - 1)


def n_down_for_sz(n_qubits: int, sz: int) -> int:
    """Number of down spins in the sector with total Sz equal to sz."""
    if abs(sz) > n_qubits or (n_qubits - sz) % 2 != 0:
        raise ValueError(f"empty Sz sector: sz={sz} for n={n_qubits}")
    return (n_qubits - sz) // 2


def sz_for_n_down(n_qubits: int, n_down: int) -> int:
    return n_qubits - 2 * n_down


@lru_cache(maxsize=None)
def sector_states(n_qubits: int, n_down: int) -> np.ndarray:
    """Sorted basis indices with exactly ``n_down`` set bits.

    The result is cached and marked read-only; treat it as immutable.
    """
    if not 0 <= n_down <= n_qubits:
        raise ValueError(f"empty sector: n_down={n_down} for n={n_qubits}")
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    counts = popcount(idx)
    states = idx[counts == n_down]
    states.flags.writeable = False
    return states


def popcount(idx: np.ndarray) -> np.ndarray:
    """Number of set bits, vectorized (indices below 2**63)."""
    x = idx.astype(np.uint64)
    count = np.zeros(x.shape, dtype=np.int64)
    while np.any(x):
        count += (x & np.uint64(1)).astype(np.int64)
        x >>= np.uint64(1)
    return count


def position_in_sector(states: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """Positions of basis ``indices`` inside the sorted sector array.

    Raises if any index is not a member of the sector.
    """
    pos = np.searchsorted(states, indices)
    if np.any(pos >= len(states)) or np.any(states[np.minimum(pos, len(states) - 1)] != indices):
        raise ValueError("basis index not in sector")
    return pos


def bit_at(idx: np.ndarray, site: int) -> np.ndarray:
    """Bit value (0 up / 1 down) of a 1-based site for each basis index."""
    return (idx >> (site - 1)) & 1
