import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracle

from dimerchain import ChainSpec, build_chain, ground_state


@pytest.fixture(scope="session")
def gs8():
    """Ground state of the N=8, delta=0.7 chain (shared across tests)."""
    ham = build_chain(ChainSpec(n_qubits=8, delta=0.7))
    return ham, ground_state(ham)


@pytest.fixture(scope="session")
def dense8():
    """Dense oracle for the same chain: H, E0, ground vector, evolver."""
    h = oracle.heisenberg_dense(8, delta=0.7)
    e0, v0 = oracle.dense_ground_state(h)
    return h, e0, v0, oracle.DenseEvolver(h)


@pytest.fixture()
def rng():
    return np.random.default_rng(20230817)
