"""Heisenberg chain Hamiltonians: dimerized and uniform, open boundaries.

H = sum_k J_k  sigma_k . sigma_{k+1}  over the N-1 nearest-neighbor bonds,
with Pauli (not spin-1/2) operators, so a single bond of strength J has a
singlet eigenvalue -3J and triplet +J. Bond strengths:

* dimerized:   J_k = J (1 + (-1)^{k+1} delta)  (strong odd bonds 1-2, 3-4, ...)
* uniform-AFM: J_k = +J
* uniform-FM:  J_k = -J

The Hamiltonian commutes with total Sz, so states confined to one sector are
evolved with a per-sector sparse matrix, built once and cached.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .basis import n_down_for_sz, position_in_sector, sector_states
from .states import StateVector

__all__ = ["ChainSpec", "Hamiltonian", "build_chain", "apply_hamiltonian", "sector_decompose"]

PATTERNS = ("dimerized", "uniform-AFM", "uniform-FM")


@dataclass(frozen=True)
class ChainSpec:
    """Chain description; J = 1 sets the unit of energy and 1/J of time."""

    n_qubits: int
    delta: float = 0.0
    coupling: float = 1.0
    pattern: str = "dimerized"

    def __post_init__(self):
        if self.n_qubits < 2:
            raise ValueError("need at least 2 sites")
        if self.pattern not in PATTERNS:
            raise ValueError(f"pattern must be one of {PATTERNS}")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError("delta must lie in [0, 1]")
        if self.coupling <= 0.0:
            raise ValueError("coupling J must be positive")
        if self.pattern == "dimerized" and self.n_qubits % 2 != 0:
            raise ValueError("dimerized chains need an even number of sites")

    def bond_strengths(self) -> np.ndarray:
        k = np.arange(1, self.n_qubits)
        if self.pattern == "dimerized":
            return self.coupling * (1.0 + (-1.0) ** (k + 1) * self.delta)
        if self.pattern == "uniform-AFM":
            return np.full(self.n_qubits - 1, self.coupling)
        return np.full(self.n_qubits - 1, -self.coupling)


class Hamiltonian:
    """Matrix-free Heisenberg chain with cached per-sector sparse blocks."""

    def __init__(self, spec: ChainSpec):
        self.spec = spec
        self.bonds = spec.bond_strengths()
        self._sector_cache: dict[int, sp.csr_matrix] = {}
        self._full_diag: np.ndarray | None = None

    @property
    def n_qubits(self) -> int:
        return self.spec.n_qubits

    def _zz_diagonal(self, states: np.ndarray) -> np.ndarray:
        diag = np.zeros(states.shape[0])
        for k, jk in enumerate(self.bonds, start=1):
            anti = ((states >> (k - 1)) ^ (states >> k)) & 1
            diag += jk * (1.0 - 2.0 * anti)
        return diag

    def apply_full(self, amps: np.ndarray) -> np.ndarray:
        """H acting on a full-basis amplitude array without materializing H."""
        n = self.n_qubits
        if amps.shape != (1 << n,):
            raise ValueError(f"expected {1 << n} amplitudes, got {amps.shape}")
        if self._full_diag is None:
            self._full_diag = self._zz_diagonal(np.arange(1 << n, dtype=np.int64))
        out = self._full_diag * amps
        idx = np.arange(1 << n, dtype=np.int64)
        for k, jk in enumerate(self.bonds, start=1):
            mask = (1 << (k - 1)) | (1 << k)
            anti = idx[(((idx >> (k - 1)) ^ (idx >> k)) & 1) == 1]
            out[anti ^ mask] += (2.0 * jk) * amps[anti]
        return out

    def sector_matrix(self, sz: int) -> sp.csr_matrix:
        """Sparse H block on the given total-Sz sector (cached)."""
        if sz in self._sector_cache:
            return self._sector_cache[sz]
        n = self.n_qubits
        states = sector_states(n, n_down_for_sz(n, sz))
        size = states.shape[0]
        rows = [np.arange(size, dtype=np.int64)]
        cols = [np.arange(size, dtype=np.int64)]
        vals = [self._zz_diagonal(states)]
        for k, jk in enumerate(self.bonds, start=1):
            mask = (1 << (k - 1)) | (1 << k)
            src = np.nonzero((((states >> (k - 1)) ^ (states >> k)) & 1) == 1)[0]
            tgt = position_in_sector(states, states[src] ^ mask)
            rows.append(tgt)
            cols.append(src)
            vals.append(np.full(src.shape[0], 2.0 * jk))
        mat = sp.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(size, size),
        ).tocsr()
        self._sector_cache[sz] = mat
        return mat

    def apply(self, state: StateVector) -> StateVector:
        """H |state>, staying in the state's representation."""
        if state.n_qubits != self.n_qubits:
            raise ValueError("state size does not match the chain")
        if state.sz is None:
            return StateVector(state.n_qubits, self.apply_full(state.amplitudes), None)
        out = self.sector_matrix(state.sz) @ state.amplitudes
        return StateVector(state.n_qubits, out, state.sz)

    def matvec(self, sz: int | None):
        """Raw ndarray -> ndarray action for solvers (full space if sz is None)."""
        if sz is None:
            return self.apply_full
        mat = self.sector_matrix(sz)
        return lambda v: mat @ v

    def dimension(self, sz: int | None) -> int:
        if sz is None:
            return 1 << self.n_qubits
        return sector_states(self.n_qubits, n_down_for_sz(self.n_qubits, sz)).shape[0]


def build_chain(spec: ChainSpec) -> Hamiltonian:
    return Hamiltonian(spec)


def apply_hamiltonian(ham: Hamiltonian, state: StateVector) -> StateVector:
    return ham.apply(state)


def sector_decompose(ham: Hamiltonian, sz: int) -> np.ndarray:
    """Sorted basis indices of the total-Sz sector (raises if empty)."""
    return sector_states(ham.n_qubits, n_down_for_sz(ham.n_qubits, sz))
