"""
Unit tests for exclqa.lattice.
"""

import math

import numpy as np
import pytest

from exclqa.exceptions import DependentBasisError, DimensionError
from exclqa.lattice import (
    Basis,
    bareiss_determinant,
    coefficient_bound,
    determinant,
    dual_basis,
    gaussian_heuristic,
    gram,
    gram_determinant,
    integer_coordinates,
    is_lll_reduced,
    lattice_stats,
    lll_reduce,
    log_determinant,
    minkowski_bound,
    qary_basis,
    sublattice,
)
from exclqa.oracle import brute_force_shortest, enumerate_shortest

FULL_RANK_4 = [[2, 1, 0, 0], [1, 3, 1, 0], [0, 1, 4, 1], [1, 0, 1, 5]]


def identity(n):
    return Basis(np.eye(n, dtype=int).tolist())


@pytest.mark.unit
class TestBasis:
    """Test cases for the Basis value type."""

    def test_rank_and_dimension(self, worked_basis):
        """Test that rank counts rows and dimension counts columns."""
        assert worked_basis.rank == 3
        assert worked_basis.dimension == 9

    def test_ragged_rows_rejected(self):
        """Test that rows of different lengths are rejected."""
        with pytest.raises(DimensionError):
            Basis([[1, 0], [1]])

    def test_too_many_rows(self):
        """Test that more rows than columns cannot be independent."""
        with pytest.raises(DependentBasisError):
            Basis([[1, 0], [0, 1], [1, 1]])

    def test_huge_entries_stay_exact(self):
        """Test that entries beyond int64 keep exact Gram values."""
        big = 2**40
        assert gram(Basis([[big, 1], [0, big]]))[0][0] == big * big + 1


@pytest.mark.unit
class TestGram:
    """Test cases for Gram matrices."""

    def test_identity(self):
        """Test that I_3 has Gram matrix I_3."""
        assert gram(identity(3)).tolist() == np.eye(3, dtype=int).tolist()

    def test_two_by_two(self):
        """Test B = [[1, 1], [0, 2]]."""
        assert gram(Basis([[1, 1], [0, 2]])).tolist() == [[2, 2], [2, 4]]

    def test_single_row(self):
        """Test that [3, 4] has Gram matrix [[25]]."""
        assert gram(Basis([[3, 4]])).tolist() == [[25]]

    def test_worked_example(self, worked_basis, worked_gram):
        """Test that the fixture rows reproduce the worked-example Gram matrix."""
        assert gram(worked_basis).tolist() == worked_gram.tolist()


@pytest.mark.unit
class TestDeterminant:
    """Test cases for lattice determinants."""

    def test_identity(self):
        """Test that det(I_n) = 1."""
        assert determinant(identity(5)) == 1.0

    def test_qary(self):
        """Test that the q-ary basis has determinant q^k."""
        b = qary_basis(257, 6, 3, rng=1)
        assert determinant(b) == 257.0**3
        assert gram_determinant(b) == 257**6

    def test_two_by_two(self):
        """Test that [[1, 1], [0, 2]] has determinant 2."""
        assert determinant(Basis([[1, 1], [0, 2]])) == 2.0

    @pytest.mark.slow
    def test_log_determinant_of_large_qary(self):
        """Test that log det stays finite for q^k far beyond the float range."""
        b = qary_basis(65537, 180, 90, rng=0)
        assert log_determinant(b) == pytest.approx(90 * math.log(65537))

    def test_bareiss(self):
        """Test the fraction-free determinant on regular and singular input."""
        assert bareiss_determinant([[2, 1], [1, 3]]) == 5
        assert bareiss_determinant([[1, 2], [2, 4]]) == 0
        assert bareiss_determinant([[0, 1], [1, 0]]) == -1


@pytest.mark.unit
class TestDualBasis:
    """Test cases for dual bases."""

    def test_identity(self):
        """Test that the identity is self-dual."""
        assert np.allclose(dual_basis(identity(3)), np.eye(3))

    def test_orthogonal_rows(self):
        """Test that orthogonal rows map to b_i / |b_i|^2."""
        assert np.allclose(dual_basis(Basis([[2, 0], [0, 3]])), [[0.5, 0.0], [0.0, 1 / 3]])

    def test_inverse_relation(self):
        """Test that D B^T = I for a full-rank 4x4 basis."""
        b = Basis(FULL_RANK_4)
        product = dual_basis(b) @ b.float_matrix().T
        assert np.allclose(product, np.eye(4), rtol=0, atol=1e-9)


@pytest.mark.unit
class TestHeuristics:
    """Test cases for the Gaussian heuristic and Minkowski bound."""

    def test_gaussian_heuristic_identity(self):
        """Test that gh(I_n) = sqrt(n / (2 pi e))."""
        assert gaussian_heuristic(identity(6)) == pytest.approx(math.sqrt(6 / (2 * math.pi * math.e)))

    def test_gaussian_heuristic_rank_17(self):
        """Test that gh(I_17) is just under 1."""
        assert gaussian_heuristic(identity(17)) == pytest.approx(0.99767, abs=1e-5)

    def test_gaussian_heuristic_is_homogeneous(self):
        """Test that scaling B by c scales gh by c."""
        scaled = Basis((2 * np.eye(5, dtype=int)).tolist())
        assert gaussian_heuristic(scaled) == pytest.approx(2 * gaussian_heuristic(identity(5)))

    def test_minkowski_identity(self):
        """Test that the bound for I_n is sqrt(n), above lambda1 = 1."""
        assert minkowski_bound(identity(4)) == pytest.approx(2.0)

    def test_minkowski_scaled(self):
        """Test that 2 I_2 has bound 2 sqrt(2), above lambda1 = 2."""
        assert minkowski_bound(Basis([[2, 0], [0, 2]])) == pytest.approx(2 * math.sqrt(2))

    def test_lattice_stats(self, worked_basis):
        """Test that lattice_stats bundles the three values."""
        stats = lattice_stats(worked_basis)
        assert stats.determinant == pytest.approx(math.sqrt(gram_determinant(worked_basis)))
        assert stats.gaussian_heuristic < stats.minkowski_bound

    @pytest.mark.slow
    def test_minkowski_bounds_lambda1(self):
        """Test lambda1 <= Minkowski bound on reduced rank-8 q-ary sublattices."""
        for seed in range(20):
            b = sublattice(lll_reduce(qary_basis(257, 16, 8, rng=seed)), 8)
            assert math.sqrt(enumerate_shortest(b).norm_sq) <= minkowski_bound(b)


@pytest.mark.unit
class TestQaryBasis:
    """Test cases for q-ary basis generation."""

    def test_block_structure(self):
        """Test the identity, q I and zero blocks."""
        q, d, k = 257, 8, 3
        m = np.array(qary_basis(q, d, k, rng=4).rows)
        assert np.array_equal(m[: d - k, : d - k], np.eye(d - k, dtype=int))
        assert np.array_equal(m[d - k:, d - k:], q * np.eye(k, dtype=int))
        assert not m[d - k:, : d - k].any()
        assert m[: d - k, d - k:].min() >= 0
        assert m[: d - k, d - k:].max() < q

    def test_fixed_seed(self):
        """Test that the same seed gives the same basis."""
        assert qary_basis(257, 10, 5, rng=42) == qary_basis(257, 10, 5, rng=42)

    @pytest.mark.parametrize('args', [(1, 8, 3), (257, 8, 0), (257, 8, 8)])
    def test_invalid_parameters(self, args):
        """Test that q < 2 and k outside (0, d) are rejected."""
        with pytest.raises(DimensionError):
            qary_basis(*args)


@pytest.mark.unit
class TestLLL:
    """Test cases for LLL reduction."""

    def test_identity_unchanged(self):
        """Test that the identity stays the identity up to signs and order."""
        reduced = lll_reduce(identity(4))
        assert sorted(tuple(abs(x) for x in row) for row in reduced.rows) == sorted(identity(4).rows)

    def test_small_example(self):
        """Test that the reduced basis contains a vector of squared norm 1."""
        b = Basis([[1, 1, 1], [-1, 0, 2], [3, 5, 6]])
        reduced = lll_reduce(b, delta=0.75)
        assert min(reduced.row_norms_sq()) == 1
        assert brute_force_shortest(b, 3).norm_sq == 1
        assert is_lll_reduced(reduced, delta=0.75)

    def test_same_lattice(self):
        """Test that reduction is a unimodular change of basis."""
        b = qary_basis(257, 12, 6, rng=3)
        reduced = lll_reduce(b)
        assert gram_determinant(reduced) == gram_determinant(b)
        assert all(integer_coordinates(b, row) is not None for row in reduced.rows)
        assert all(integer_coordinates(reduced, row) is not None for row in b.rows)

    def test_output_is_reduced(self):
        """Test the exact size-reduction and Lovasz conditions on a q-ary basis."""
        reduced = lll_reduce(qary_basis(257, 16, 8, rng=9))
        assert is_lll_reduced(reduced)

    def test_dependent_rows(self):
        """Test that dependent rows are reported."""
        with pytest.raises(DependentBasisError):
            lll_reduce(Basis([[1, 2], [2, 4]]))

    @pytest.mark.parametrize('kwargs', [{'delta': 0.2}, {'delta': 1.0}, {'eta': 0.4}])
    def test_invalid_parameters(self, kwargs):
        """Test that delta outside (1/4, 1) and eta < 1/2 are rejected."""
        with pytest.raises(DimensionError):
            lll_reduce(identity(2), **kwargs)

    @pytest.mark.slow
    def test_first_row_guarantee(self):
        """Test |b_1|^2 <= 2^(n-1) lambda1^2 on rank-10 q-ary sublattices."""
        for seed in range(10):
            b = sublattice(lll_reduce(qary_basis(257, 20, 10, rng=seed)), 10)
            lambda1_sq = enumerate_shortest(b).norm_sq
            assert b.row_norms_sq()[0] <= 2 ** (b.rank - 1) * lambda1_sq


@pytest.mark.unit
class TestSublattice:
    """Test cases for sublattice selection."""

    def test_full_rank_is_identical(self, worked_basis):
        """Test that n = rank returns the same basis."""
        assert sublattice(worked_basis, 3) == worked_basis

    def test_single_row(self, worked_basis):
        """Test that n = 1 gives a 1 x d basis."""
        sub = sublattice(worked_basis, 1)
        assert sub.rank == 1
        assert sub.dimension == 9

    def test_rows_are_a_prefix(self):
        """Test that the rows are exactly the first n input rows."""
        b = qary_basis(257, 10, 5, rng=2)
        assert sublattice(b, 4).rows == b.rows[:4]

    def test_rank_out_of_range(self, worked_basis):
        """Test that n = 0 and n > rank are rejected."""
        with pytest.raises(DimensionError):
            sublattice(worked_basis, 0)
        with pytest.raises(DimensionError):
            sublattice(worked_basis, 4)


@pytest.mark.unit
class TestCoefficientBound:
    """Test cases for coefficient bounds from the dual basis."""

    def test_identity(self):
        """Test that I_n with a = 1 gives all ones."""
        assert np.allclose(coefficient_bound(identity(3), 1.0), np.ones(3))

    def test_diagonal(self):
        """Test that diag(2, 5) with a = 10 gives (5, 2)."""
        assert np.allclose(coefficient_bound(Basis([[2, 0], [0, 5]]), 10.0), [5.0, 2.0])

    def test_shortest_vector_respects_bound(self):
        """Test the bound on the coefficients of a shortest vector."""
        b = sublattice(lll_reduce(qary_basis(257, 12, 6, rng=5)), 6)
        sv = enumerate_shortest(b)
        bound = coefficient_bound(b, math.sqrt(sv.norm_sq) * (1 + 1e-12))
        assert all(abs(x) <= limit + 1e-9 for x, limit in zip(sv.x, bound))

    def test_non_positive_radius(self):
        """Test that a <= 0 is rejected."""
        with pytest.raises(DimensionError):
            coefficient_bound(identity(2), 0.0)


@pytest.mark.unit
class TestIntegerCoordinates:
    """Test cases for exact coordinate recovery."""

    def test_lattice_vector(self):
        """Test that a lattice vector gets its integer coordinates."""
        assert integer_coordinates(Basis([[2, 0], [0, 2]]), [2, 4]) == [1, 2]

    def test_non_lattice_vector(self):
        """Test that a point outside the lattice gives None."""
        assert integer_coordinates(Basis([[2, 0], [0, 2]]), [1, 0]) is None
