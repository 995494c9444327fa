"""
Unit tests for exclqa.ising.

Covers construction, discrete energies, the QUBO conversion, spectrum
shifts and the L1 lower bound.
"""

import itertools

import numpy as np
import pytest

from exclqa.exceptions import DimensionError, HamiltonianValidationError
from exclqa.ising import (
    IsingHamiltonian,
    energies,
    energy,
    from_qubo,
    l1_lower_bound,
    nonnegative,
    shift_spectrum,
    spin_config,
)

from .conftest import WORKED_SPECTRUM

ALL_THREE_SPINS = list(itertools.product([1, -1], repeat=3))


@pytest.mark.unit
class TestIsingHamiltonian:
    """Test cases for IsingHamiltonian construction."""

    def test_printed_terms_match_encoded_example(self, worked_hamiltonian):
        """Test that the printed worked-example terms equal the encoded Hamiltonian."""
        printed = IsingHamiltonian.from_terms(
            3, 93.0, {0: 18, 1: 30, 2: 24}, {(0, 1): 3, (1, 2): -24},
        )
        assert printed.constant == worked_hamiltonian.constant == 93.0
        assert np.array_equal(printed.linear, worked_hamiltonian.linear)
        assert np.array_equal(printed.couplings, worked_hamiltonian.couplings)

    def test_pairwise_coefficients_are_half_the_printed_value(self, worked_hamiltonian):
        """Test that J_12 = 3/2 and J_23 = -12."""
        assert worked_hamiltonian.couplings[0, 1] == 1.5
        assert worked_hamiltonian.couplings[1, 2] == -12.0
        assert worked_hamiltonian.couplings[0, 2] == 0.0

    def test_diagonal_couplings_fold_into_constant(self):
        """Test that sigma_i^2 = 1 moves diagonal entries into the constant."""
        h = IsingHamiltonian(1.0, [0.0, 0.0], [[2.0, 0.0], [0.0, 3.0]])
        assert h.constant == 6.0
        assert np.all(np.diag(h.couplings) == 0.0)

    def test_couplings_are_symmetrized(self):
        """Test that an upper-triangular coupling matrix is symmetrized."""
        h = IsingHamiltonian(0.0, [0.0, 0.0], [[0.0, 2.0], [0.0, 0.0]])
        assert h.couplings[0, 1] == h.couplings[1, 0] == 1.0

    def test_arrays_are_read_only(self, worked_hamiltonian):
        """Test that coefficients cannot be mutated in place."""
        with pytest.raises(ValueError):
            worked_hamiltonian.linear[0] = 1.0

    def test_shape_mismatch_raises(self):
        """Test that a coupling matrix of the wrong size is rejected."""
        with pytest.raises(DimensionError):
            IsingHamiltonian(0.0, [1.0, 2.0], np.zeros((3, 3)))

    def test_self_coupling_term_rejected(self):
        """Test that from_terms refuses a sigma_i sigma_i term."""
        with pytest.raises(HamiltonianValidationError):
            IsingHamiltonian.from_terms(2, quadratic={(1, 1): 1.0})

    def test_spectral_scale(self, worked_hamiltonian, zero_hamiltonian):
        """Test that the scale is the largest linear or pairwise coefficient."""
        assert worked_hamiltonian.spectral_scale() == 30.0
        assert zero_hamiltonian.spectral_scale() == 0.0

    def test_scaled_scales_every_energy(self, worked_hamiltonian):
        """Test that scaled(f) multiplies every level by f."""
        half = worked_hamiltonian.scaled(0.5)
        for s in ALL_THREE_SPINS:
            assert energy(half, s) == pytest.approx(0.5 * energy(worked_hamiltonian, s))

    def test_json_form_keeps_energies(self, worked_hamiltonian):
        """Test that to_dict/from_dict preserves the Hamiltonian."""
        restored = IsingHamiltonian.from_dict(worked_hamiltonian.to_dict())
        assert [energy(restored, s) for s in ALL_THREE_SPINS] == [
            energy(worked_hamiltonian, s) for s in ALL_THREE_SPINS
        ]

    def test_from_dict_missing_key(self):
        """Test that a JSON document without 'linear' is rejected."""
        with pytest.raises(HamiltonianValidationError):
            IsingHamiltonian.from_dict({'constant': 1.0})

    def test_from_dict_declared_size_mismatch(self):
        """Test that a wrong declared n is rejected."""
        with pytest.raises(DimensionError):
            IsingHamiltonian.from_dict({'n': 3, 'constant': 0.0, 'linear': [1.0, 2.0]})


@pytest.mark.unit
class TestEnergy:
    """Test cases for discrete energies."""

    def test_ground_configuration(self, worked_hamiltonian):
        """Test that all spins down gives energy 0."""
        assert energy(worked_hamiltonian, (-1, -1, -1)) == 0.0

    def test_first_excited_configuration(self, worked_hamiltonian):
        """Test that (+1, -1, -1) gives energy 30."""
        assert energy(worked_hamiltonian, (1, -1, -1)) == 30.0

    def test_full_spectrum(self, worked_hamiltonian):
        """Test the sorted energies of all eight configurations."""
        assert sorted(energy(worked_hamiltonian, s) for s in ALL_THREE_SPINS) == WORKED_SPECTRUM

    def test_zero_hamiltonian(self, zero_hamiltonian):
        """Test that the zero Hamiltonian is 0 everywhere."""
        assert all(energy(zero_hamiltonian, s) == 0.0 for s in ALL_THREE_SPINS)

    def test_wrong_length(self, worked_hamiltonian):
        """Test that a configuration of the wrong length is rejected."""
        with pytest.raises(DimensionError):
            energy(worked_hamiltonian, (1, -1))

    def test_vectorized_matches_scalar(self, random_hamiltonian):
        """Test that energies() agrees with energy() row by row."""
        h = random_hamiltonian(5, seed=3)
        configs = np.array(list(itertools.product([1, -1], repeat=5)))
        expected = [energy(h, s) for s in configs]
        assert np.allclose(energies(h, configs), expected, rtol=0, atol=1e-12)

    @pytest.mark.parametrize('spins', [(1, 0, -1), (1, -1, 0.5), (2, -1, -1), (1, -1, float('nan'))])
    def test_energy_rejects_non_spins(self, worked_hamiltonian, spins):
        """Test that values other than +1 and -1 are refused instead of scored."""
        with pytest.raises(HamiltonianValidationError, match='-1 or \\+1'):
            energy(worked_hamiltonian, spins)

    def test_energies_rejects_non_spins(self, worked_hamiltonian):
        """Test that a bit matrix in {0, 1} is refused by the vectorized form."""
        with pytest.raises(HamiltonianValidationError):
            energies(worked_hamiltonian, np.array([[1, -1, -1], [0, 1, 1]]))

    def test_spin_config_rejects_zero(self):
        """Test that spins must be exactly +1 or -1."""
        with pytest.raises(HamiltonianValidationError):
            spin_config([1, 0, -1])


@pytest.mark.unit
class TestFromQubo:
    """Test cases for the QUBO to Ising conversion."""

    def test_zero_qubo(self):
        """Test that Q = 0, a = 0 gives the zero Hamiltonian."""
        h = from_qubo(np.zeros((2, 2)))
        assert h.constant == 0.0
        assert not h.linear.any()
        assert not h.couplings.any()

    def test_single_variable(self):
        """Test that x^2 becomes energy(-1) = 0 and energy(+1) = 1."""
        h = from_qubo([[1.0]], [0.0])
        assert energy(h, (-1,)) == 0.0
        assert energy(h, (1,)) == 1.0

    def test_two_variables_match_enumeration(self):
        """Test that every spin configuration reproduces x^T Q x."""
        Q = np.array([[0.0, 1.0], [1.0, 0.0]])
        h = from_qubo(Q)
        for s in itertools.product([1, -1], repeat=2):
            x = (1 + np.array(s)) / 2
            assert energy(h, s) == pytest.approx(x @ Q @ x)

    def test_linear_term_included(self):
        """Test that a^T x is part of the converted energy."""
        Q = np.array([[2.0, -1.0], [-1.0, 3.0]])
        a = np.array([0.5, -4.0])
        h = from_qubo(Q, a)
        for s in itertools.product([1, -1], repeat=2):
            x = (1 + np.array(s)) / 2
            assert energy(h, s) == pytest.approx(x @ Q @ x + a @ x)

    def test_asymmetric_qubo_rejected(self):
        """Test that a non-symmetric Q is rejected."""
        with pytest.raises(HamiltonianValidationError):
            from_qubo([[0.0, 1.0], [0.0, 0.0]])


@pytest.mark.unit
class TestShiftAndBound:
    """Test cases for shift_spectrum, l1_lower_bound and nonnegative."""

    def test_zero_offset_is_identity(self, worked_hamiltonian):
        """Test that offset 0 leaves every energy unchanged."""
        shifted = shift_spectrum(worked_hamiltonian, 0.0)
        assert all(energy(shifted, s) == energy(worked_hamiltonian, s) for s in ALL_THREE_SPINS)

    def test_negative_offset(self, worked_hamiltonian):
        """Test that offset -93 removes the constant."""
        shifted = shift_spectrum(worked_hamiltonian, -93.0)
        assert shifted.constant == 0.0
        assert energy(shifted, (-1, -1, -1)) == -93.0

    def test_offset_on_zero_hamiltonian(self, zero_hamiltonian):
        """Test that the zero Hamiltonian shifted by 5 is 5 everywhere."""
        shifted = shift_spectrum(zero_hamiltonian, 5.0)
        assert all(energy(shifted, s) == 5.0 for s in ALL_THREE_SPINS)

    def test_bound_of_worked_example(self, worked_hamiltonian):
        """Test that the bound is 93 - 72 - 27 = -6, below the true minimum 0."""
        assert l1_lower_bound(worked_hamiltonian) == -6.0
        assert l1_lower_bound(worked_hamiltonian) <= min(WORKED_SPECTRUM)

    def test_bound_of_zero_hamiltonian(self, zero_hamiltonian):
        """Test that the zero Hamiltonian has bound 0."""
        assert l1_lower_bound(zero_hamiltonian) == 0.0

    def test_bound_is_tight_for_linear_terms(self):
        """Test that a single spin with h = -2 has bound -2, attained at +1."""
        h = IsingHamiltonian(0.0, [-2.0])
        assert l1_lower_bound(h) == -2.0 == energy(h, (1,))

    def test_bound_below_random_ground(self, random_hamiltonian):
        """Test the bound against the enumerated minimum of random Hamiltonians."""
        for seed in range(5):
            h = random_hamiltonian(6, seed=seed)
            ground = min(energy(h, s) for s in itertools.product([1, -1], repeat=6))
            assert l1_lower_bound(h) <= ground + 1e-12

    def test_nonnegative_shifts_by_bound(self, worked_hamiltonian):
        """Test that nonnegative() raises every level by 6."""
        shifted = nonnegative(worked_hamiltonian)
        assert energy(shifted, (-1, -1, -1)) == 6.0
        assert l1_lower_bound(shifted) == 0.0

    def test_nonnegative_keeps_nonnegative_input(self, zero_hamiltonian):
        """Test that a Hamiltonian with bound >= 0 is returned unchanged."""
        assert nonnegative(zero_hamiltonian) is zero_hamiltonian
