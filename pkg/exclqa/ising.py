"""
Classical Ising Hamiltonians and their discrete spectra.

A Hamiltonian is stored as

    E(s) = c + sum_i h_i s_i + sum_{i<j} 2 J_ij s_i s_j

with J symmetric and zero on the diagonal, so the double sum over ordered
pairs sum_{i != j} J_ij s_i s_j collapses to the unordered form above.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionError, HamiltonianValidationError

SpinConfig = np.ndarray


def spin_config(values, n: int | None = None) -> SpinConfig:
    """Validate a sequence of +1/-1 values and return it as an int8 array."""
    spins = np.asarray(values, dtype=np.int8).reshape(-1)
    if n is not None and spins.shape[0] != n:
        raise DimensionError(f'expected {n} spins, got {spins.shape[0]}')
    if not np.all(np.abs(spins) == 1):
        raise HamiltonianValidationError('spins must be exactly -1 or +1')
    return spins


def _readonly(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class IsingHamiltonian:
    """Constant + linear + symmetric pairwise spin Hamiltonian.

    Diagonal coupling entries are folded into the constant (sigma_z^2 = 1)
    and the coupling matrix is symmetrized at construction.
    """

    constant: float
    linear: np.ndarray
    couplings: np.ndarray = field(default=None)

    def __post_init__(self):
        linear = np.array(self.linear, dtype=float).reshape(-1)
        n = linear.shape[0]
        if n < 1:
            raise DimensionError('a Hamiltonian needs at least one spin')
        if self.couplings is None:
            couplings = np.zeros((n, n))
        else:
            couplings = np.array(self.couplings, dtype=float)
        if couplings.shape != (n, n):
            raise DimensionError(
                f'couplings must be {n}x{n}, got {couplings.shape}'
            )
        constant = float(self.constant) + float(np.trace(couplings))
        couplings = (couplings + couplings.T) / 2.0
        np.fill_diagonal(couplings, 0.0)
        object.__setattr__(self, 'constant', constant)
        object.__setattr__(self, 'linear', _readonly(linear))
        object.__setattr__(self, 'couplings', _readonly(couplings))

    @property
    def n(self) -> int:
        return self.linear.shape[0]

    @classmethod
    def zeros(cls, n: int) -> IsingHamiltonian:
        return cls(0.0, np.zeros(n))

    @classmethod
    def from_terms(cls, n, constant=0.0, linear=None, quadratic=None):
        """Build from sigma_i / sigma_i sigma_j coefficients.

        ``quadratic`` maps index pairs (i, j), i != j, to the coefficient of
        sigma_i sigma_j as it appears in the printed Hamiltonian, i.e. the
        value 2 J_ij.
        """
        h = np.zeros(n)
        for i, value in (linear or {}).items():
            h[i] += value
        couplings = np.zeros((n, n))
        for (i, j), value in (quadratic or {}).items():
            if i == j:
                raise HamiltonianValidationError('quadratic terms need i != j')
            couplings[i, j] += value / 2.0
            couplings[j, i] += value / 2.0
        return cls(constant, h, couplings)

    def scaled(self, factor: float) -> IsingHamiltonian:
        """Return the Hamiltonian with every coefficient multiplied by factor."""
        return IsingHamiltonian(
            self.constant * factor, self.linear * factor, self.couplings * factor
        )

    def spectral_scale(self) -> float:
        """Largest absolute linear or pairwise coefficient (constant excluded)."""
        values = [0.0]
        if self.n:
            values.append(float(np.max(np.abs(self.linear))))
            values.append(float(np.max(np.abs(2.0 * self.couplings))))
        return max(values)

    def to_dict(self) -> dict:
        return {
            'n': self.n,
            'constant': self.constant,
            'linear': self.linear.tolist(),
            'couplings': self.couplings.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> IsingHamiltonian:
        try:
            hamiltonian = cls(data['constant'], data['linear'], data.get('couplings'))
        except KeyError as exc:
            raise HamiltonianValidationError(
                f'Hamiltonian JSON is missing key {exc}'
            ) from exc
        if 'n' in data and int(data['n']) != hamiltonian.n:
            raise DimensionError(
                f"declared n={data['n']} but linear has {hamiltonian.n} entries"
            )
        return hamiltonian


def _check_spins(spins: np.ndarray) -> None:
    if not np.all(np.abs(spins) == 1.0):
        raise HamiltonianValidationError('spins must be exactly -1 or +1')


def energy(h: IsingHamiltonian, s) -> float:
    """Discrete energy of a spin configuration."""
    spins = np.asarray(s, dtype=float).reshape(-1)
    if spins.shape[0] != h.n:
        raise DimensionError(f'expected {h.n} spins, got {spins.shape[0]}')
    _check_spins(spins)
    return float(h.constant + h.linear @ spins + spins @ h.couplings @ spins)


def energies(h: IsingHamiltonian, configs: np.ndarray) -> np.ndarray:
    """Vectorized energy over the rows of a (m, n) spin matrix."""
    spins = np.asarray(configs, dtype=float)
    if spins.ndim != 2 or spins.shape[1] != h.n:
        raise DimensionError(f'expected an (m, {h.n}) spin matrix')
    _check_spins(spins)
    return (
        h.constant
        + spins @ h.linear
        + np.einsum('ij,jk,ik->i', spins, h.couplings, spins)
    )


def from_qubo(Q, a=None) -> IsingHamiltonian:
    """Ising form of x^T Q x + a^T x under the substitution x = (1 + s) / 2."""
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise DimensionError('Q must be a square matrix')
    n = Q.shape[0]
    a = np.zeros(n) if a is None else np.asarray(a, dtype=float).reshape(-1)
    if a.shape[0] != n:
        raise DimensionError(f'linear QUBO term must have length {n}')
    if not np.allclose(Q, Q.T, rtol=0.0, atol=1e-12):
        raise HamiltonianValidationError('QUBO matrix must be symmetric')

    constant = (Q.sum() + np.trace(Q)) / 4.0 + a.sum() / 2.0
    linear = Q.sum(axis=1) / 2.0 + a / 2.0
    couplings = Q / 4.0
    np.fill_diagonal(couplings, 0.0)
    return IsingHamiltonian(constant, linear, couplings)


def shift_spectrum(h: IsingHamiltonian, offset: float) -> IsingHamiltonian:
    return IsingHamiltonian(h.constant + offset, h.linear, h.couplings)


def l1_lower_bound(h: IsingHamiltonian) -> float:
    """c - sum |h_i| - sum_{i<j} 2 |J_ij|, a lower bound on the ground energy."""
    upper = np.triu(np.abs(h.couplings), k=1)
    return float(h.constant - np.abs(h.linear).sum() - 2.0 * upper.sum())


def nonnegative(h: IsingHamiltonian) -> IsingHamiltonian:
    """Shift h upward by the L1 bound when the bound is negative."""
    bound = l1_lower_bound(h)
    if bound >= 0.0:
        return h
    return shift_spectrum(h, -bound)
