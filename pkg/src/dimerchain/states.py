"""Dense state vectors for N-qubit chains, local operators, reduced matrices.

States live either on the full 2^n basis or inside one total-Sz sector (see
`dimerchain.basis` for the bit/site convention). Two-site reduced density
matrices use the local index ``2*bit(first kept site) + bit(second kept
site)``, i.e. the first kept site is the most significant local bit, matching
``np.kron(op_first, op_second)`` ordering.

All operations are pure: inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as _iproduct
from typing import NamedTuple

import numpy as np

from .basis import (
    BASIS_CONVENTION,
    bit_at,
    n_down_for_sz,
    position_in_sector,
    sector_states,
    site_mask,
    sz_for_n_down,
)

__all__ = [
    "BASIS_CONVENTION",
    "BELL_LABELS",
    "PAULI",
    "DensityMatrix",
    "StateVector",
    "WernerFit",
    "apply_pauli",
    "apply_rotation",
    "apply_site_matrix",
    "bell_state",
    "cross_pair_rdm",
    "cross_site_rdm",
    "inner",
    "partial_trace",
    "rotation_matrix",
    "singlet_product_state",
    "singlet_state",
    "state_fidelity",
    "von_neumann_entropy",
    "werner_p",
]

PAULI = {
    "I": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "+": np.array([[0, 1], [0, 0]], dtype=complex),
    "-": np.array([[0, 0], [1, 0]], dtype=complex),
}

BELL_LABELS = ("I", "x", "y", "z")


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over the full basis or one total-Sz sector.

    ``sz`` is the net up-minus-down count; ``None`` means the full 2^n basis.
    Amplitudes are owned by the instance and must not be mutated.
    """

    n_qubits: int
    amplitudes: np.ndarray
    sz: int | None = None

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        expected = self.basis_indices().shape[0]
        if amps.shape != (expected,):
            raise ValueError(
                f"amplitude length {amps.shape} does not match basis size {expected}"
            )

    @classmethod
    def full(cls, n_qubits: int, amplitudes) -> "StateVector":
        return cls(n_qubits, np.asarray(amplitudes, dtype=complex), None)

    @classmethod
    def in_sector(cls, n_qubits: int, sz: int, amplitudes) -> "StateVector":
        return cls(n_qubits, np.asarray(amplitudes, dtype=complex), sz)

    @classmethod
    def basis_state(cls, n_qubits: int, bits: str) -> "StateVector":
        """Product state from a bit string, site 1 first ('0' = up)."""
        if len(bits) != n_qubits or set(bits) - {"0", "1"}:
            raise ValueError(f"need {n_qubits} characters of 0/1, got {bits!r}")
        index = sum(1 << k for k, b in enumerate(bits) if b == "1")
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(n_qubits, amps, None)

    def basis_indices(self) -> np.ndarray:
        if self.sz is None:
            return np.arange(1 << self.n_qubits, dtype=np.int64)
        return sector_states(self.n_qubits, n_down_for_sz(self.n_qubits, self.sz))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.n_qubits, self.amplitudes / nrm, self.sz)

    def to_full(self) -> "StateVector":
        """Embed a sector state into the full 2^n basis."""
        if self.sz is None:
            return self
        amps = np.zeros(1 << self.n_qubits, dtype=complex)
        amps[self.basis_indices()] = self.amplitudes
        return StateVector(self.n_qubits, amps, None)


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b>, handling mixed sector/full representations."""
    if a.n_qubits != b.n_qubits:
        raise ValueError("qubit counts differ")
    if a.sz is not None and b.sz is not None:
        if a.sz != b.sz:
            return 0.0 + 0.0j
        return complex(np.vdot(a.amplitudes, b.amplitudes))
    af = a.to_full() if a.sz is not None else a
    bf = b.to_full() if b.sz is not None else b
    return complex(np.vdot(af.amplitudes, bf.amplitudes))


def apply_site_matrix(state: StateVector, site: int, matrix: np.ndarray) -> StateVector:
    """Apply a 2x2 matrix at one site of a full-basis state."""
    if state.sz is not None:
        state = state.to_full()
    mask = site_mask(site, state.n_qubits)
    idx = np.arange(1 << state.n_qubits, dtype=np.int64)
    lo = idx[(idx & mask) == 0]
    hi = lo | mask
    amps = state.amplitudes
    out = np.empty_like(amps)
    out[lo] = matrix[0, 0] * amps[lo] + matrix[0, 1] * amps[hi]
    out[hi] = matrix[1, 0] * amps[lo] + matrix[1, 1] * amps[hi]
    return StateVector(state.n_qubits, out, None)


def apply_pauli(state: StateVector, site: int, axis: str) -> StateVector:
    """sigma^axis at a site; axis in {x, y, z, +, -}.

    Sector states: z stays in-sector; +/- move to the adjacent sector (the
    result may be unnormalized or zero); x and y promote the state to the
    full basis, since their image spans two sectors.
    """
    if axis not in ("x", "y", "z", "+", "-"):
        raise ValueError(f"unknown Pauli axis {axis!r}")
    mask = site_mask(site, state.n_qubits)

    if state.sz is None:
        amps = state.amplitudes
        idx = np.arange(amps.shape[0], dtype=np.int64)
        down = (idx & mask) != 0
        if axis == "z":
            out = np.where(down, -amps, amps)
        elif axis == "x":
            out = amps[idx ^ mask]
        elif axis == "y":
            out = np.where(down, 1j, -1j) * amps[idx ^ mask]
        elif axis == "+":
            out = np.zeros_like(amps)
            out[idx[~down]] = amps[idx[~down] | mask]
        else:
            out = np.zeros_like(amps)
            out[idx[down]] = amps[idx[down] & ~mask]
        return StateVector(state.n_qubits, out, None)

    if axis in ("x", "y"):
        return apply_pauli(state.to_full(), site, axis)

    states = state.basis_indices()
    amps = state.amplitudes
    if axis == "z":
        sign = 1.0 - 2.0 * bit_at(states, site)
        return StateVector(state.n_qubits, sign * amps, state.sz)

    n_down = n_down_for_sz(state.n_qubits, state.sz)
    if axis == "+":
        src = (states & mask) != 0
        new_n_down, targets = n_down - 1, states[src] & ~mask
        new_sz = state.sz + 2
    else:
        src = (states & mask) == 0
        new_n_down, targets = n_down + 1, states[src] | mask
        new_sz = state.sz - 2
    if not 0 <= new_n_down <= state.n_qubits:
        raise ValueError(f"sigma^{axis} at site {site} annihilates every sector state")
    new_states = sector_states(state.n_qubits, new_n_down)
    out = np.zeros(new_states.shape[0], dtype=complex)
    out[position_in_sector(new_states, targets)] = amps[src]
    return StateVector(state.n_qubits, out, new_sz)


def rotation_matrix(theta: float, phi: float) -> np.ndarray:
    """Single-qubit Bloch rotation: |0> -> cos(t/2)|0> + e^{i phi} sin(t/2)|1>."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array(
        [[c, -s * np.exp(-1j * phi)], [s * np.exp(1j * phi), c]], dtype=complex
    )


def apply_rotation(state: StateVector, site: int, theta: float, phi: float) -> StateVector:
    """Apply the Bloch rotation at a site (promotes sector states to full)."""
    return apply_site_matrix(state, site, rotation_matrix(theta, phi))


# ---------------------------------------------------------------------------
# Reduced density matrices


class DensityMatrix:
    """Small Hermitian reduced density matrix (dimension 2 or 4)."""

    __slots__ = ("entries",)

    def __init__(self, entries: np.ndarray):
        rho = np.asarray(entries, dtype=complex)
        if rho.shape not in ((2, 2), (4, 4)):
            raise ValueError(f"expected a 2x2 or 4x4 matrix, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise ValueError("matrix is not Hermitian within 1e-12")
        if abs(np.trace(rho).real - 1.0) > 1e-10:
            raise ValueError(f"trace {np.trace(rho).real!r} is not 1 within 1e-10")
        if np.linalg.eigvalsh(rho).min() < -1e-10:
            raise ValueError("matrix has an eigenvalue below -1e-10")
        self.entries = rho

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


@lru_cache(maxsize=64)
def _trace_tables(n_qubits, sites, n_down_a, n_down_b):
    """Gather tables for Tr_env |a><b| restricted to the kept sites.

    Returns (dim_local, tables) where tables[mu][nu] = (pos_a, pos_b), the
    positions in the two amplitude arrays whose environment configurations
    coincide, with local indices mu, nu ordered first-site-most-significant.
    """

    def basis_for(n_down):
        if n_down is None:
            return np.arange(1 << n_qubits, dtype=np.int64)
        return sector_states(n_qubits, n_down)

    masks = [site_mask(s, n_qubits) for s in sites]
    full_mask = 0
    for m in masks:
        full_mask |= m

    def split(states):
        loc = np.zeros(states.shape[0], dtype=np.int64)
        for m in masks:
            loc = (loc << 1) | ((states & m) != 0).astype(np.int64)
        env = states & ~full_mask
        out = []
        for mu in range(1 << len(sites)):
            sel = np.nonzero(loc == mu)[0]
            out.append((sel, env[sel]))
        return out

    parts_a = split(basis_for(n_down_a))
    parts_b = split(basis_for(n_down_b))
    dim = 1 << len(sites)
    tables = []
    for mu in range(dim):
        row = []
        pos_a, env_a = parts_a[mu]
        for nu in range(dim):
            pos_b, env_b = parts_b[nu]
            j = np.searchsorted(env_b, env_a)
            j_clipped = np.minimum(j, max(len(env_b) - 1, 0))
            ok = (j < len(env_b)) & (env_b[j_clipped] == env_a) if len(env_b) else np.zeros(len(env_a), bool)
            row.append((pos_a[ok], pos_b[j_clipped[ok]]))
        tables.append(row)
    return dim, tables


def _sites_key(state: StateVector):
    return None if state.sz is None else n_down_for_sz(state.n_qubits, state.sz)


def _cross_rdm(a: StateVector, b: StateVector, sites) -> np.ndarray:
    if a.n_qubits != b.n_qubits:
        raise ValueError("qubit counts differ")
    dim, tables = _trace_tables(a.n_qubits, tuple(sites), _sites_key(a), _sites_key(b))
    rho = np.zeros((dim, dim), dtype=complex)
    va, vb = a.amplitudes, b.amplitudes
    for mu in range(dim):
        for nu in range(dim):
            pa, pb = tables[mu][nu]
            if len(pa):
                rho[mu, nu] = np.dot(va[pa], vb[pb].conj())
    return rho


def cross_pair_rdm(a: StateVector, b: StateVector, sites: tuple[int, int]) -> np.ndarray:
    """Tr_env |a><b| on two kept sites; raw 4x4, not necessarily Hermitian.

    Building block for reduced states of linear combinations: the pair
    matrix of c1*a + c2*b is bilinear in the cross matrices.
    """
    i, j = sites
    if i == j:
        raise ValueError("kept sites must be distinct")
    return _cross_rdm(a, b, (i, j))


def cross_site_rdm(a: StateVector, b: StateVector, site: int) -> np.ndarray:
    """Tr_env |a><b| on one kept site; raw 2x2."""
    return _cross_rdm(a, b, (site,))


def partial_trace(state: StateVector, keep) -> DensityMatrix:
    """Reduced density matrix of a normalized state over 1 or 2 kept sites."""
    keep = tuple(keep)
    if len(keep) not in (1, 2):
        raise ValueError("partial_trace supports 1 or 2 kept sites")
    if len(set(keep)) != len(keep):
        raise ValueError("kept sites must be distinct")
    rho = _cross_rdm(state, state, keep)
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho)


# ---------------------------------------------------------------------------
# Two-qubit reference states and functionals


def singlet_state() -> np.ndarray:
    """(|01> - |10>)/sqrt(2) as a 4-vector (first site most significant)."""
    v = np.zeros(4, dtype=complex)
    v[0b01] = 1.0 / np.sqrt(2.0)
    v[0b10] = -1.0 / np.sqrt(2.0)
    return v


def bell_state(label: str) -> np.ndarray:
    """Bell state sigma^label (x) I applied to the singlet."""
    if label not in BELL_LABELS:
        raise ValueError(f"Bell label must be one of {BELL_LABELS}, got {label!r}")
    return np.kron(PAULI[label], PAULI["I"]) @ singlet_state()


def singlet_product_state(n_qubits: int) -> StateVector:
    """Product of singlets on pairs (1,2), (3,4), ...; lives in the sz=0 sector."""
    if n_qubits % 2 != 0:
        raise ValueError("singlet product needs an even chain")
    states = sector_states(n_qubits, n_qubits // 2)
    amps = np.zeros(states.shape[0], dtype=complex)
    scale = (1.0 / np.sqrt(2.0)) ** (n_qubits // 2)
    for pattern in _iproduct((0, 1), repeat=n_qubits // 2):
        index = 0
        sign = 1.0
        for m, which in enumerate(pattern):
            # which = 0: |0 1> on pair (2m+1, 2m+2); which = 1: -|1 0>
            if which == 0:
                index |= 1 << (2 * m + 1)
            else:
                index |= 1 << (2 * m)
                sign = -sign
        amps[position_in_sector(states, np.array([index]))[0]] = sign * scale
    return StateVector(n_qubits, amps, 0)


def state_fidelity(rho: DensityMatrix, psi: np.ndarray) -> float:
    """<psi|rho|psi> for a pure target state of matching dimension."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (rho.dim,):
        raise ValueError(f"dimension mismatch: state {psi.shape}, matrix {rho.dim}")
    val = complex(psi.conj() @ rho.entries @ psi)
    if abs(val.imag) > 1e-12:
        raise ValueError(f"fidelity has imaginary residue {val.imag}")
    return float(val.real)


def von_neumann_entropy(rho: DensityMatrix, clamp: float = 1e-12) -> float:
    """Entropy -tr(rho log2 rho) in bits; eigenvalues <= clamp contribute 0."""
    w = rho.eigenvalues()
    if w.min() < -1e-10:
        raise ValueError("matrix is not positive semidefinite within tolerance")
    w = w[w > clamp]
    return float(-np.sum(w * np.log2(w)))


class WernerFit(NamedTuple):
    p: float
    distance: float


def werner_p(rho: DensityMatrix) -> WernerFit:
    """Singlet weight p of a 4x4 state, with its distance from Werner form.

    p = (4 <singlet|rho|singlet> - 1) / 3; the Frobenius distance between rho
    and p|s><s| + (1-p) I/4 diagnoses non-Werner inputs.
    """
    if rho.dim != 4:
        raise ValueError("Werner decomposition needs a 4x4 matrix")
    s = singlet_state()
    p = (4.0 * state_fidelity(rho, s) - 1.0) / 3.0
    werner = p * np.outer(s, s.conj()) + (1.0 - p) * np.eye(4) / 4.0
    distance = float(np.linalg.norm(rho.entries - werner))
    return WernerFit(p=p, distance=distance)
