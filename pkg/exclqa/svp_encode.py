"""
SVP instances as Ising Hamiltonians through binary-encoded qudits.

Coefficient i is carried by spins i*k .. i*k + k - 1 (bit l at offset l,
least significant first). A spin of +1 is bit 0, a spin of -1 is bit 1, and

    x_i = sum_l 2^l b_il - 2^(k-1)   in   [-2^(k-1), 2^(k-1) - 1].

With b_il = (1 - s_il) / 2 this is the affine map
x_i = -1/2 - sum_l 2^(l-1) s_il, which the Hamiltonian builder expands.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import DimensionError, HamiltonianValidationError
from .ising import IsingHamiltonian

_NORM_SPEC = re.compile(r'^norm(?:/(?P<divisor>[0-9.eE+-]+))?$')


@dataclass(frozen=True)
class QuditEncoding:
    n: int
    k: int = 1
    rescale: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError('an encoding needs at least one qudit')
        if self.k < 1:
            raise DimensionError('bits per qudit k must be >= 1')
        if not self.rescale > 0:
            raise HamiltonianValidationError('rescale M must be > 0')

    @property
    def spin_count(self) -> int:
        return self.n * self.k

    @property
    def low(self) -> int:
        return -(2 ** (self.k - 1))

    @property
    def high(self) -> int:
        return 2 ** (self.k - 1) - 1

    def spin_index(self, i: int, l: int) -> int:
        return i * self.k + l

    def affine_map(self):
        """(L, a) with x = L s + a for spin vector s."""
        weights = np.zeros((self.n, self.spin_count))
        for i in range(self.n):
            for l in range(self.k):
                weights[i, self.spin_index(i, l)] = -(2.0 ** (l - 1))
        return weights, np.full(self.n, -0.5)


def frobenius_norm(g) -> float:
    return float(np.linalg.norm(np.asarray(g, dtype=float)))


def resolve_rescale(spec: Union[str, float, int], g) -> float:
    """Turn an M setting (number, 'norm' or 'norm/<divisor>') into a float."""
    if isinstance(spec, (int, float)):
        value = float(spec)
    else:
        text = str(spec).strip()
        match = _NORM_SPEC.match(text)
        if match:
            try:
                divisor = float(match.group('divisor') or 1.0)
            except ValueError as exc:
                raise HamiltonianValidationError(f'bad M divisor in {spec!r}') from exc
            if not divisor > 0:
                raise HamiltonianValidationError(f'M divisor must be > 0, got {divisor}')
            value = frobenius_norm(g) / divisor
        else:
            try:
                value = float(text)
            except ValueError as exc:
                raise HamiltonianValidationError(
                    f"M must be a number, 'norm' or 'norm/<divisor>', got {spec!r}"
                ) from exc
    if not value > 0:
        raise HamiltonianValidationError(f'M must be > 0, got {value}')
    return value


def _check_gram(g: np.ndarray, enc: QuditEncoding):
    if g.shape != (enc.n, enc.n):
        raise DimensionError(f'Gram matrix must be {enc.n}x{enc.n}, got {g.shape}')
    if not np.allclose(g, g.T):
        raise HamiltonianValidationError('Gram matrix must be symmetric')
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise HamiltonianValidationError('Gram matrix must be positive definite') from exc


def build_svp_hamiltonian(g, enc: QuditEncoding) -> IsingHamiltonian:
    """Ising expansion of sum_ij (G_ij / M) Q_i Q_j over n*k spins."""
    g = np.array(np.asarray(g), dtype=float)
    _check_gram(g, enc)
    g = g / enc.rescale

    weights, shift = enc.affine_map()
    # (L s + a)^T G (L s + a) = s^T A s + 2 a^T G L s + a^T G a, A = L^T G L;
    # the diagonal of A multiplies s_p^2 = 1.
    quadratic = weights.T @ g @ weights
    linear = 2.0 * (shift @ g @ weights)
    constant = float(shift @ g @ shift + np.trace(quadratic))
    couplings = quadratic.copy()
    np.fill_diagonal(couplings, 0.0)
    return IsingHamiltonian(constant, linear, couplings)


def decode_coefficients(s, enc: QuditEncoding) -> np.ndarray:
    spins = np.asarray(s).reshape(-1).astype(np.int64)
    if spins.shape[0] != enc.spin_count:
        raise DimensionError(f'expected {enc.spin_count} spins, got {spins.shape[0]}')
    bits = ((1 - spins) // 2).reshape(enc.n, enc.k)
    powers = 2 ** np.arange(enc.k, dtype=np.int64)
    return bits @ powers + enc.low


def encode_coefficients(x, enc: QuditEncoding) -> np.ndarray:
    """Spin configuration whose decode is x (inverse of decode_coefficients)."""
    x = np.asarray(x, dtype=np.int64).reshape(-1)
    if x.shape[0] != enc.n:
        raise DimensionError(f'expected {enc.n} coefficients, got {x.shape[0]}')
    if not in_search_space(x, enc.k):
        raise HamiltonianValidationError(f'coefficients {x.tolist()} lie outside the k={enc.k} box')
    unsigned = x - enc.low
    bits = (unsigned[:, None] >> np.arange(enc.k)) & 1
    return (1 - 2 * bits).reshape(-1).astype(np.int8)


def in_search_space(x, k: int) -> bool:
    low, high = -(2 ** (k - 1)), 2 ** (k - 1) - 1
    return all(low <= int(value) <= high for value in np.asarray(x).reshape(-1))


def vector_norm_sq(x, g) -> int:
    """Exact sum_ij x_i x_j G_ij."""
    x = [int(value) for value in np.asarray(x).reshape(-1)]
    rows = np.asarray(g)
    if rows.shape != (len(x), len(x)):
        raise DimensionError(f'coefficient vector of length {len(x)} does not match Gram {rows.shape}')
    return sum(
        x[i] * x[j] * int(rows[i][j])
        for i in range(len(x)) if x[i]
        for j in range(len(x)) if x[j]
    )
