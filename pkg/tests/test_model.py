import numpy as np
import pytest

import oracle

from dimerchain import ChainSpec, StateVector, apply_hamiltonian, build_chain, sector_decompose
from dimerchain.basis import popcount, sector_states


class TestChainSpec:
    def test_dimerized_bonds(self):
        spec = ChainSpec(n_qubits=4, delta=0.7)
        assert np.allclose(spec.bond_strengths(), [1.7, 0.3, 1.7])

    def test_fully_dimerized_bonds(self):
        spec = ChainSpec(n_qubits=4, delta=1.0)
        assert np.allclose(spec.bond_strengths(), [2.0, 0.0, 2.0])

    def test_uniform_fm_bonds(self):
        spec = ChainSpec(n_qubits=6, pattern="uniform-FM")
        assert np.allclose(spec.bond_strengths(), [-1.0] * 5)

    def test_odd_dimerized_rejected(self):
        with pytest.raises(ValueError):
            ChainSpec(n_qubits=5, delta=0.7)

    def test_odd_uniform_allowed(self):
        spec = ChainSpec(n_qubits=5, pattern="uniform-AFM")
        assert spec.bond_strengths().shape == (4,)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            ChainSpec(n_qubits=4, delta=1.5)
        with pytest.raises(ValueError):
            ChainSpec(n_qubits=4, coupling=-1.0)
        with pytest.raises(ValueError):
            ChainSpec(n_qubits=4, pattern="ring")


class TestApply:
    def test_singlet_bond_eigenvalue(self):
        ham = build_chain(ChainSpec(n_qubits=2, delta=0.0))
        amps = np.zeros(4, dtype=complex)
        amps[0b10] = 1 / np.sqrt(2)
        amps[0b01] = -1 / np.sqrt(2)
        out = apply_hamiltonian(ham, StateVector(2, amps, None))
        assert np.max(np.abs(out.amplitudes - (-3.0) * amps)) < 1e-14

    def test_aligned_pair_eigenvalue(self):
        ham = build_chain(ChainSpec(n_qubits=2, delta=0.0))
        psi = StateVector.basis_state(2, "00")
        out = apply_hamiltonian(ham, psi)
        assert np.max(np.abs(out.amplitudes - psi.amplitudes)) < 1e-14

    def test_matrix_free_matches_dense_n8(self, rng, dense8):
        h, _, _, _ = dense8
        ham = build_chain(ChainSpec(n_qubits=8, delta=0.7))
        v = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        got = ham.apply_full(v)
        assert np.max(np.abs(got - h @ v)) < 1e-12

    def test_hermiticity_on_random_vectors(self, rng):
        ham = build_chain(ChainSpec(n_qubits=6, delta=0.4))
        for _ in range(5):
            a = rng.standard_normal(64) + 1j * rng.standard_normal(64)
            b = rng.standard_normal(64) + 1j * rng.standard_normal(64)
            lhs = np.vdot(a, ham.apply_full(b))
            rhs = np.conj(np.vdot(b, ham.apply_full(a)))
            assert abs(lhs - rhs) < 1e-12

    def test_sector_apply_matches_full(self, rng):
        ham = build_chain(ChainSpec(n_qubits=6, delta=0.7))
        states = sector_states(6, 3)
        amps = rng.standard_normal(states.shape[0]) + 1j * rng.standard_normal(states.shape[0])
        sector_state = StateVector(6, amps, 0)
        out_sector = ham.apply(sector_state)
        assert out_sector.sz == 0  # exact bookkeeping, not merely numerical
        out_full = ham.apply_full(sector_state.to_full().amplitudes)
        assert np.max(np.abs(out_sector.to_full().amplitudes - out_full)) < 1e-12
        # no amplitude leaked outside the sector
        mask = np.ones(64, bool)
        mask[states] = False
        assert np.all(out_full[mask] == 0)

    def test_su2_raising_operator_commutes(self, rng):
        # total raising operator S+ = sum_k sigma_k^+
        n = 6
        ham = build_chain(ChainSpec(n_qubits=n, delta=0.7))
        splus = sum(oracle.site_op(oracle.SP, k, n) for k in range(1, n + 1))
        v = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        comm = splus @ ham.apply_full(v) - ham.apply_full(splus @ v)
        assert np.max(np.abs(comm)) < 1e-12

    def test_dimension_mismatch(self):
        ham = build_chain(ChainSpec(n_qubits=4, delta=0.7))
        with pytest.raises(ValueError):
            ham.apply_full(np.zeros(8, dtype=complex))


class TestSectorDecompose:
    def test_sizes(self):
        ham = build_chain(ChainSpec(n_qubits=4, delta=0.7))
        assert sector_decompose(ham, 0).shape[0] == 6
        assert sector_decompose(ham, 4).shape[0] == 1
        total = sum(sector_decompose(ham, sz).shape[0] for sz in range(-4, 5, 2))
        assert total == 16

    def test_empty_sector_rejected(self):
        ham = build_chain(ChainSpec(n_qubits=4, delta=0.7))
        with pytest.raises(ValueError):
            sector_decompose(ham, 3)
        with pytest.raises(ValueError):
            sector_decompose(ham, 6)

    def test_sector_matrix_is_symmetric(self):
        ham = build_chain(ChainSpec(n_qubits=6, delta=0.3))
        mat = ham.sector_matrix(0)
        diff = (mat - mat.T).toarray()
        assert np.max(np.abs(diff)) == 0.0


def test_fully_dimerized_ground_energy():
    # decoupled strong bonds: E0 = -3 J (1 + delta) * (N/2)
    from dimerchain import ground_state

    for n in (4, 6):
        ham = build_chain(ChainSpec(n_qubits=n, delta=1.0))
        res = ground_state(ham)
        assert res.energy == pytest.approx(-3.0 * 2.0 * (n / 2), abs=1e-9)
