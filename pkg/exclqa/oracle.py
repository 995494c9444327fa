"""
Exact ground truth: Ising spectra by enumeration, brute-force search over
the qudit box, and Schnorr-Euchner enumeration of shortest lattice vectors.
"""
from __future__ import annotations

import itertools
import logging
import time
from collections.abc import Sequence
from typing import NamedTuple, Optional

import numpy as np

from .exceptions import EnumerationTimeout, NoExcitedStateError, SearchSpaceTooLarge
from .ising import IsingHamiltonian, energies
from .lattice import Basis, float_gram_schmidt, gram

logger = logging.getLogger(__name__)

DEFAULT_SPECTRUM_MAX_N = 20
DEFAULT_BRUTE_FORCE_MAX_SPINS = 26
LEVEL_TOLERANCE = 1e-9
_CHUNK_BITS = 16


# Ising spectra --------------------------------------------------------------


def index_to_spins(indices, n: int) -> np.ndarray:
    """Bit i of the index set means spin i is -1."""
    bits = (np.asarray(indices, dtype=np.int64)[:, None] >> np.arange(n)) & 1
    return (1 - 2 * bits).astype(np.int8)


class SpectrumEntry(NamedTuple):
    energy: float
    config: tuple


class Spectrum(Sequence):
    """All 2^n levels sorted by energy; entries are built on access."""

    def __init__(self, n: int, energies_sorted: np.ndarray, indices: np.ndarray):
        self.n = n
        self.energies = energies_sorted
        self.indices = indices

    def __len__(self):
        return self.energies.shape[0]

    def __getitem__(self, item):
        if isinstance(item, slice):
            return [self[i] for i in range(*item.indices(len(self)))]
        spins = index_to_spins([self.indices[item]], self.n)[0]
        return SpectrumEntry(float(self.energies[item]), tuple(int(s) for s in spins))


def exact_spectrum(h: IsingHamiltonian, max_n: int = DEFAULT_SPECTRUM_MAX_N) -> Spectrum:
    if h.n > max_n:
        raise SearchSpaceTooLarge(f'{h.n} spins exceed the spectrum limit of {max_n}')
    total = 1 << h.n
    values = np.empty(total)
    chunk = 1 << min(h.n, _CHUNK_BITS)
    for start in range(0, total, chunk):
        indices = np.arange(start, min(start + chunk, total))
        values[start:start + len(indices)] = energies(h, index_to_spins(indices, h.n))
    order = np.argsort(values, kind='stable')
    return Spectrum(h.n, values[order], order)


def first_excited(h: IsingHamiltonian, max_n: int = DEFAULT_SPECTRUM_MAX_N) -> SpectrumEntry:
    spectrum = exact_spectrum(h, max_n)
    ground = spectrum.energies[0]
    above = np.nonzero(spectrum.energies > ground + LEVEL_TOLERANCE)[0]
    if above.size == 0:
        raise NoExcitedStateError('the spectrum has a single degenerate level')
    return spectrum[int(above[0])]


# Shortest vectors -----------------------------------------------------------


class ShortestVector(NamedTuple):
    x: tuple
    v: tuple
    norm_sq: int
    minimizers: tuple = ()


def canonical_sign(x) -> tuple:
    """Flip x so that its first nonzero coefficient is negative."""
    x = tuple(int(value) for value in x)
    first = next((value for value in x if value), 0)
    return tuple(-value for value in x) if first > 0 else x


def lattice_vector(b: Basis, x) -> tuple:
    return tuple(
        sum(int(c) * row[j] for c, row in zip(x, b.rows) if c)
        for j in range(b.dimension)
    )


def _norm_sq(v) -> int:
    return sum(int(value) * int(value) for value in v)


def brute_force_shortest(b: Basis, k: int, max_spins: int = DEFAULT_BRUTE_FORCE_MAX_SPINS) -> ShortestVector:
    """Shortest nonzero x B over x in [-2^(k-1), 2^(k-1) - 1]^n.

    Ties go to the lexicographically smallest x.
    """
    n = b.rank
    if n * k > max_spins:
        raise SearchSpaceTooLarge(f'{n}*{k} spins exceed the brute-force limit of {max_spins}')
    low, high = -(2 ** (k - 1)), 2 ** (k - 1) - 1
    values = range(low, high + 1)
    g = gram(b)
    largest = max(abs(int(value)) for value in g.flat)
    exact_int64 = largest * n * n * max(low * low, 1) < 2**62
    g = g.astype(np.int64) if exact_int64 else g.astype(object)

    tail_len = max(1, min(n, _CHUNK_BITS // k))
    tail = np.array(list(itertools.product(values, repeat=tail_len)), dtype=np.int64)
    best_norm, best_x = None, None
    for head in itertools.product(values, repeat=n - tail_len):
        block = np.hstack([np.tile(np.array(head, dtype=np.int64), (len(tail), 1)), tail])
        if not exact_int64:
            block = block.astype(object)
        norms = np.einsum('ij,jk,ik->i', block, g, block) if exact_int64 else np.array(
            [int(row @ g @ row) for row in block], dtype=object
        )
        nonzero = np.any(block != 0, axis=1)
        if not nonzero.any():
            continue
        candidates = np.nonzero(nonzero)[0]
        position = candidates[int(np.argmin(norms[candidates]))]
        value = int(norms[position])
        if best_norm is None or value < best_norm:
            best_norm, best_x = value, tuple(int(c) for c in block[position])
    v = lattice_vector(b, best_x)
    return ShortestVector(best_x, v, _norm_sq(v), (best_x,))


def enumerate_shortest(b: Basis, timeout: Optional[float] = None) -> ShortestVector:
    """Exact Schnorr-Euchner enumeration (no pruning).

    The search starts from the shortest basis row, compares leaves with exact
    integer norms and keeps every minimizer up to sign. The returned x is the
    lexicographically smallest canonical minimizer.
    """
    n = b.rank
    rows = b.rows
    mu, bstar = float_gram_schmidt(b)
    mu = mu.tolist()
    bstar = bstar.tolist()
    deadline = None if timeout is None else time.monotonic() + timeout

    norms = b.row_norms_sq()
    start = int(np.argmin(norms))
    first = tuple(-1 if i == start else 0 for i in range(n))
    best = {'norm': norms[start], 'minimizers': {canonical_sign(first)}}
    radius = [best['norm'] * (1 + 1e-9) + 1e-9]
    x = [0] * n
    nodes = [0]

    def leaf():
        v = [sum(x[i] * rows[i][j] for i in range(n) if x[i]) for j in range(b.dimension)]
        value = _norm_sq(v)
        if value < best['norm']:
            best['norm'] = value
            best['minimizers'] = {canonical_sign(x)}
            radius[0] = value * (1 + 1e-9) + 1e-9
        elif value == best['norm']:
            best['minimizers'].add(canonical_sign(x))

    def candidates(center, nonnegative):
        # Zigzag around the rounded center; distances are nondecreasing.
        nearest = int(round(center))
        up = center >= nearest
        if not nonnegative or nearest >= 0:
            yield nearest
        for offset in itertools.count(1):
            pair = (nearest + offset, nearest - offset) if up else (nearest - offset, nearest + offset)
            for value in pair:
                if not nonnegative or value >= 0:
                    yield value

    def descend(i, partial):
        center = -sum(x[j] * mu[j][i] for j in range(i + 1, n))
        # With everything above zero, x and -x are the same vector up to sign.
        on_top = not any(x[j] for j in range(i + 1, n))
        for value in candidates(center, on_top):
            distance = partial + (value - center) ** 2 * bstar[i]
            if distance > radius[0]:
                break
            nodes[0] += 1
            if deadline is not None and nodes[0] % 1024 == 0 and time.monotonic() > deadline:
                raise EnumerationTimeout(f'enumeration of rank {n} exceeded {timeout}s')
            x[i] = value
            if i == 0:
                if any(x):
                    leaf()
            else:
                descend(i - 1, distance)
        x[i] = 0

    descend(n - 1, 0.0)
    minimizers = tuple(sorted(best['minimizers']))
    chosen = minimizers[0]
    v = lattice_vector(b, chosen)
    norm = _norm_sq(v)
    if norm != best['norm']:
        raise ArithmeticError('enumerated vector failed exact norm verification')
    logger.debug('rank %d enumeration: lambda1^2=%d after %d nodes', n, norm, nodes[0])
    return ShortestVector(chosen, v, norm, minimizers)
