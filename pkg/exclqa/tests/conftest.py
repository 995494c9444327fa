"""
Shared pytest fixtures for exclqa tests.

The three-qudit worked example used throughout has Gram matrix
[[30, 6, 0], [6, 102, -48], [0, -48, 96]]; its k=1, M=1 Hamiltonian has
ground energy 0 and first excited energy 30 at (+1, -1, -1).
"""

import numpy as np
import pytest

from exclqa.bench import ExperimentConfig, Instance, generate_instances
from exclqa.ising import IsingHamiltonian
from exclqa.lattice import Basis
from exclqa.oracle import enumerate_shortest
from exclqa.svp_encode import QuditEncoding, build_svp_hamiltonian, frobenius_norm

WORKED_GRAM = [[30, 6, 0], [6, 102, -48], [0, -48, 96]]

# Integer rows whose Gram matrix is WORKED_GRAM.
WORKED_ROWS = [
    [1, 2, 5, 0, 0, 0, 0, 0, 0],
    [1, 0, 1, -2, -2, -4, 6, 6, 2],
    [0, 0, 0, 4, 4, 8, 0, 0, 0],
]

WORKED_SPECTRUM = [0, 30, 96, 102, 102, 126, 144, 144]


@pytest.fixture
def worked_gram():
    """Gram matrix of the three-qudit worked example."""
    return np.array(WORKED_GRAM)


@pytest.fixture
def worked_basis():
    """A 3x9 integer basis with the worked-example Gram matrix."""
    return Basis(WORKED_ROWS)


@pytest.fixture
def worked_hamiltonian(worked_gram):
    """k=1, M=1 Hamiltonian of the worked example."""
    return build_svp_hamiltonian(worked_gram, QuditEncoding(3, 1, 1.0))


@pytest.fixture
def worked_scaled(worked_gram, worked_hamiltonian):
    """The worked example divided by the Frobenius norm of its Gram matrix."""
    return worked_hamiltonian.scaled(1.0 / frobenius_norm(worked_gram))


@pytest.fixture
def zero_hamiltonian():
    """Three spins, every coefficient zero."""
    return IsingHamiltonian.zeros(3)


@pytest.fixture
def random_hamiltonian():
    """Factory for seeded random Hamiltonians with n spins."""
    def make(n, seed=0, constant=0.0):
        rng = np.random.default_rng(seed)
        couplings = np.triu(rng.normal(size=(n, n)), k=1)
        return IsingHamiltonian(constant, rng.normal(size=n), couplings + couplings.T)
    return make


@pytest.fixture
def make_instance():
    """Factory building a certified Instance from basis rows."""
    def make(rows, ident='n000-0000', seed=0):
        basis = Basis(rows)
        sv = enumerate_shortest(basis)
        return Instance(
            id=ident, rank=basis.rank, index=0, q=0, d=basis.dimension, k_qary=0,
            seed=seed, basis=basis, lambda1_sq=sv.norm_sq, x=sv.x, v=sv.v,
            minimizers=sv.minimizers,
        )
    return make


@pytest.fixture
def worked_instance(make_instance):
    """The worked example as a benchmark instance."""
    return make_instance(WORKED_ROWS, ident='n003-0000')


@pytest.fixture
def small_config():
    """A lattice profile small enough for quick generation and solving."""
    return ExperimentConfig(
        q=257, d=16, k_qary=8, seed=11, ranks=(4, 6), instances_per_rank=3,
        N=20, max_shots=3, enum_timeout=None,
    )


@pytest.fixture
def small_instances(small_config):
    """Certified instances for the small profile."""
    return generate_instances(small_config)


@pytest.fixture
def run_dir(tmp_path):
    """Temporary output directory for a run."""
    path = tmp_path / 'run'
    path.mkdir()
    return path
