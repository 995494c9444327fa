"""
Integer lattice algebra: bases, Gram matrices, determinants, duals,
heuristics, q-ary generation, LLL reduction and sublattices.

Basis rows are exact Python integers. Arrays switch from int64 to object
dtype whenever products could leave the int64 range.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .exceptions import DependentBasisError, DimensionError, ReductionError

logger = logging.getLogger(__name__)

TWO_PI_E = 2.0 * math.pi * math.e

DEFAULT_DELTA = 0.99
DEFAULT_ETA = 0.501

# Gram-Schmidt coefficients are recomputed from exact inner products at most
# this many times per size reduction before giving up.
MAX_ESCALATIONS = 32
ESCALATION_TOLERANCE = 1e-6

_INT64_PRODUCT_LIMIT = 2**62


def _int_matrix(rows) -> np.ndarray:
    """Exact integer matrix: int64 when n * max|x|^2 fits, else object."""
    array = np.array(rows, dtype=object)
    if array.ndim != 2:
        raise DimensionError('a basis must be a 2-D matrix')
    if array.size == 0:
        return array.astype(np.int64)
    largest = max(abs(int(x)) for x in array.flat)
    if largest * largest * array.shape[1] < _INT64_PRODUCT_LIMIT:
        return array.astype(np.int64)
    return np.vectorize(int, otypes=[object])(array)


@dataclass(frozen=True)
class Basis:
    """Lattice basis with the basis vectors b_1..b_n as rows."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        if not rows or not rows[0]:
            raise DimensionError('a basis needs at least one non-empty row')
        d = len(rows[0])
        if any(len(row) != d for row in rows):
            raise DimensionError('all basis rows must have the same length')
        if len(rows) > d:
            raise DependentBasisError(f'{len(rows)} rows in dimension {d} are dependent')
        object.__setattr__(self, 'rows', rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def dimension(self) -> int:
        return len(self.rows[0])

    def matrix(self) -> np.ndarray:
        return _int_matrix(self.rows)

    def float_matrix(self) -> np.ndarray:
        return np.array(self.rows, dtype=float)

    def row_norms_sq(self) -> list:
        return [sum(x * x for x in row) for row in self.rows]

    def to_dict(self, **meta) -> dict:
        return {**meta, 'rows': [list(row) for row in self.rows]}

    @classmethod
    def from_dict(cls, data: dict) -> Basis:
        if 'rows' not in data:
            raise DimensionError("basis JSON needs a 'rows' key")
        return cls(data['rows'])


# Gram, determinant, dual ----------------------------------------------------


def gram(b: Basis) -> np.ndarray:
    """Exact Gram matrix B B^T."""
    m = b.matrix()
    return np.dot(m, m.T)


def bareiss_determinant(matrix) -> int:
    """Fraction-free exact determinant of a square integer matrix."""
    a = [[int(x) for x in row] for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign, previous = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // previous
        previous = pivot
    return sign * a[-1][-1]


def gram_determinant(b: Basis) -> int:
    value = bareiss_determinant(gram(b))
    if value <= 0:
        raise DependentBasisError('Gram determinant is not positive; rows are dependent')
    return value


def log_determinant(b: Basis) -> float:
    """ln det(L), computed from the exact Gram determinant."""
    return 0.5 * math.log(gram_determinant(b))


def determinant(b: Basis) -> float:
    """det(L) = sqrt(det(B B^T)); inf when it exceeds the float range."""
    value = gram_determinant(b)
    root = math.isqrt(value)
    if root * root == value:
        try:
            return float(root)
        except OverflowError:
            return math.inf
    try:
        return math.sqrt(value)
    except OverflowError:
        return math.inf


def dual_basis(b: Basis) -> np.ndarray:
    """D = (B B^T)^{-1} B, so that D B^T = I."""
    g = np.array(gram(b), dtype=float)
    try:
        return np.linalg.solve(g, b.float_matrix())
    except np.linalg.LinAlgError as exc:
        raise DependentBasisError('singular Gram matrix') from exc


def gaussian_heuristic(b: Basis) -> float:
    n = b.rank
    return math.sqrt(n / TWO_PI_E) * math.exp(log_determinant(b) / n)


def minkowski_bound(b: Basis) -> float:
    n = b.rank
    return math.sqrt(n) * math.exp(log_determinant(b) / n)


@dataclass(frozen=True)
class LatticeStats:
    determinant: float
    gaussian_heuristic: float
    minkowski_bound: float


def lattice_stats(b: Basis) -> LatticeStats:
    return LatticeStats(determinant(b), gaussian_heuristic(b), minkowski_bound(b))


def coefficient_bound(b: Basis, a: float) -> np.ndarray:
    """|x_i| <= a * ||d_i|| for any lattice vector of norm <= a."""
    if not a > 0:
        raise DimensionError('the norm bound a must be positive')
    return a * np.linalg.norm(dual_basis(b), axis=1)


# Generation and sublattices -------------------------------------------------


def qary_basis(q: int, d: int, k: int, rng=None) -> Basis:
    """[[I_{d-k}, A], [0, q I_k]] with A uniform over [0, q)."""
    if q < 2:
        raise DimensionError(f'q must be >= 2, got {q}')
    if not 0 < k < d:
        raise DimensionError(f'need 0 < k < d, got k={k}, d={d}')
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    a = rng.integers(0, q, size=(d - k, k))
    rows = []
    for i in range(d - k):
        row = [0] * d
        row[i] = 1
        row[d - k:] = [int(x) for x in a[i]]
        rows.append(row)
    for i in range(k):
        row = [0] * d
        row[d - k + i] = q
        rows.append(row)
    return Basis(rows)


def sublattice(b: Basis, n: int) -> Basis:
    """The first n rows of b."""
    if not 1 <= n <= b.rank:
        raise DimensionError(f'sublattice rank must be in [1, {b.rank}], got {n}')
    return Basis(b.rows[:n])


# LLL ------------------------------------------------------------------------


class _LLLState:
    """Exact integer rows with floating Gram-Schmidt data."""

    def __init__(self, b: Basis):
        self.rows = b.matrix()
        n = b.rank
        self.n = n
        self.mu = np.zeros((n, n))
        self.bstar = np.zeros(n)
        self.limit = math.isqrt(_INT64_PRODUCT_LIMIT // max(b.dimension, 1))

    def _promote(self):
        if self.rows.dtype != object:
            logger.debug('promoting LLL basis to arbitrary precision integers')
            self.rows = np.vectorize(int, otypes=[object])(self.rows)

    def dots(self, k: int) -> np.ndarray:
        return np.array(np.dot(self.rows[: k + 1], self.rows[k]), dtype=float)

    def refresh(self, k: int):
        """Recompute row k of mu and |b*_k|^2 from exact inner products."""
        g = self.dots(k)
        mu, bstar = self.mu, self.bstar
        for j in range(k):
            mu[k, j] = (g[j] - np.dot(mu[j, :j] * mu[k, :j], bstar[:j])) / bstar[j]
        bstar[k] = g[k] - np.dot(mu[k, :k] ** 2, bstar[:k])
        # For independent integer rows det(G_k) = prod bstar is an integer >= 1.
        if bstar[k] <= 0 or math.log(bstar[k]) + np.log(bstar[:k]).sum() < math.log(0.5):
            raise DependentBasisError(f'basis row {k} is dependent on the rows above it')

    def subtract(self, k: int, j: int, r: int):
        if self.rows.dtype != object:
            largest = int(np.abs(self.rows[j]).max()) * abs(r) + int(np.abs(self.rows[k]).max())
            if largest > self.limit:
                self._promote()
        self.rows[k] = self.rows[k] - r * self.rows[j]

    def size_reduce(self, k: int, eta: float):
        mu = self.mu
        for attempt in range(MAX_ESCALATIONS):
            predicted = mu[k, :k].copy()
            self.refresh(k)
            if attempt and np.max(np.abs(predicted - mu[k, :k]), initial=0.0) > ESCALATION_TOLERANCE:
                logger.debug('row %d: floating update drifted, using exact recomputation', k)
            if np.all(np.abs(mu[k, :k]) <= eta):
                return
            for j in range(k - 1, -1, -1):
                if abs(mu[k, j]) > 0.5:
                    r = int(round(mu[k, j]))
                    self.subtract(k, j, r)
                    mu[k, :j] -= r * mu[j, :j]
                    mu[k, j] -= r
        raise ReductionError(f'size reduction of row {k} did not converge')

    def swap(self, k: int):
        self.rows[[k - 1, k]] = self.rows[[k, k - 1]]


def lll_reduce(b: Basis, delta: float = DEFAULT_DELTA, eta: float = DEFAULT_ETA) -> Basis:
    """LLL-reduce b: |mu_ij| <= eta and the Lovasz condition with delta."""
    if not 0.25 < delta < 1.0:
        raise DimensionError(f'delta must lie in (1/4, 1), got {delta}')
    if not 0.5 <= eta < math.sqrt(delta):
        raise DimensionError(f'eta must lie in [1/2, sqrt(delta)), got {eta}')

    state = _LLLState(b)
    state.refresh(0)
    k, iterations = 1, 0
    max_iterations = 10**5 * max(state.n, 1) ** 2
    while k < state.n:
        iterations += 1
        if iterations > max_iterations:
            raise ReductionError('LLL exceeded its iteration budget')
        state.size_reduce(k, eta)
        mu, bstar = state.mu, state.bstar
        if bstar[k] >= (delta - mu[k, k - 1] ** 2) * bstar[k - 1]:
            k += 1
            continue
        state.swap(k)
        if k == 1:
            state.refresh(0)
        k = max(k - 1, 1)

    logger.debug('LLL finished rank %d after %d iterations', state.n, iterations)
    return Basis(state.rows.tolist())


# Exact checks ---------------------------------------------------------------


def exact_gram_schmidt(b: Basis):
    """Rational mu matrix and |b*_i|^2 list, from the exact Gram matrix."""
    g = [[Fraction(int(x)) for x in row] for row in gram(b)]
    n = b.rank
    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            value = g[i][j] - sum(mu[j][l] * mu[i][l] * bstar[l] for l in range(j))
            mu[i][j] = value / bstar[j]
        bstar[i] = g[i][i] - sum(mu[i][l] ** 2 * bstar[l] for l in range(i))
        if bstar[i] == 0:
            raise DependentBasisError(f'basis row {i} is dependent')
        mu[i][i] = Fraction(1)
    return mu, bstar


def is_lll_reduced(b: Basis, delta: float = DEFAULT_DELTA, eta: float = DEFAULT_ETA) -> bool:
    mu, bstar = exact_gram_schmidt(b)
    eta, delta = Fraction(eta), Fraction(delta)
    for i in range(b.rank):
        if any(abs(mu[i][j]) > eta for j in range(i)):
            return False
        if i and bstar[i] < (delta - mu[i][i - 1] ** 2) * bstar[i - 1]:
            return False
    return True


def integer_coordinates(b: Basis, v) -> Optional[list]:
    """Solve x B = v exactly; None when v is not in the lattice of b."""
    rhs = [sum(int(x) * int(y) for x, y in zip(row, v)) for row in b.rows]
    a = [[Fraction(int(x)) for x in row] + [Fraction(r)] for row, r in zip(gram(b), rhs)]
    n = b.rank
    for col in range(n):
        pivot = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[pivot] = a[pivot], a[col]
        for i in range(n):
            if i != col and a[i][col] != 0:
                factor = a[i][col] / a[col][col]
                a[i] = [x - factor * y for x, y in zip(a[i], a[col])]
    x = [a[i][n] / a[i][i] for i in range(n)]
    if any(value.denominator != 1 for value in x):
        return None
    coords = [int(value) for value in x]
    recon = [sum(c * row[j] for c, row in zip(coords, b.rows)) for j in range(b.dimension)]
    return coords if recon == [int(y) for y in v] else None


def float_gram_schmidt(b: Basis):
    """Floating mu (unit lower triangular) and |b*_i|^2 via Cholesky of G."""
    g = np.array(gram(b), dtype=float)
    try:
        chol = np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise DependentBasisError('Gram matrix is not positive definite') from exc
    diagonal = np.diag(chol)
    return chol / diagonal[None, :], diagonal**2
