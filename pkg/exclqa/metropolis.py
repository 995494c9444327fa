"""
Metropolis-Hastings optimization over spin configurations.

The chain targets pi(x) ~ exp(-E_F(x) / T) with single-spin-flip proposals
and keeps the lowest-cost configuration it visits.
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .anneal import CostKind, ShotResult, drive_shots, penalize
from .exceptions import HamiltonianValidationError
from .ising import IsingHamiltonian, energy, spin_config

logger = logging.getLogger(__name__)

# T = DEFAULT_TEMPERATURE_SCALE * spectral scale when no temperature is given
DEFAULT_TEMPERATURE_SCALE = 0.05


@dataclass(frozen=True)
class MetropolisConfig:
    iterations: int = 100
    temperature: Optional[float] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise HamiltonianValidationError('iterations N must be a positive integer')
        if self.temperature is not None and not self.temperature > 0:
            raise HamiltonianValidationError('temperature T must be > 0')

    def temperature_for(self, h: IsingHamiltonian) -> float:
        if self.temperature is not None:
            return self.temperature
        scale = h.spectral_scale()
        return DEFAULT_TEMPERATURE_SCALE * scale if scale > 0 else 1.0


def discrete_final_cost(h: IsingHamiltonian, s, kind: CostKind) -> float:
    return penalize(energy(h, s), kind)


def acceptance_probability(delta: float, temperature: float) -> float:
    """min(1, exp(-delta / T))."""
    if delta <= 0.0:
        return 1.0
    return math.exp(-delta / temperature)


class MetropolisChain:
    """Single-spin-flip chain with O(n) energy updates through local fields."""

    def __init__(self, h: IsingHamiltonian, kind: CostKind, temperature: float, rng, start=None):
        self.h = h
        self.kind = kind
        self.temperature = temperature
        self.rng = rng
        if start is None:
            start = rng.choice(np.array([-1, 1], dtype=np.int8), size=h.n)
        self.spins = spin_config(start, h.n).copy()
        self.energy = energy(h, self.spins)
        self.cost = penalize(self.energy, kind)

    def _flip_delta(self, j: int) -> float:
        # E(s with s_j flipped) - E(s) = -2 s_j (h_j + 2 (J s)_j)
        field = self.h.linear[j] + 2.0 * (self.h.couplings[j] @ self.spins)
        return float(-2.0 * self.spins[j] * field)

    def step(self, j: int, u: float) -> bool:
        """Propose flipping spin j; accept when u < rho."""
        new_energy = self.energy + self._flip_delta(j)
        new_cost = penalize(new_energy, self.kind)
        if u < acceptance_probability(new_cost - self.cost, self.temperature):
            self.spins[j] = -self.spins[j]
            self.energy = new_energy
            self.cost = new_cost
            return True
        return False

    def run(self, iterations: int):
        """Yield the chain state after each of ``iterations`` proposals."""
        indices = self.rng.integers(0, self.h.n, size=iterations)
        uniforms = self.rng.random(iterations)
        for j, u in zip(indices, uniforms):
            self.step(int(j), float(u))
            yield self.spins


def metropolis_optimize(h: IsingHamiltonian, kind: CostKind, config: MetropolisConfig, rng=None) -> ShotResult:
    """Run N proposals from a uniform random start and return the best visit."""
    if rng is None:
        rng = np.random.default_rng(config.seed)
    chain = MetropolisChain(h, kind, config.temperature_for(h), rng)
    best_spins, best_cost = chain.spins.copy(), chain.cost
    for spins in chain.run(config.iterations):
        if chain.cost < best_cost:
            best_spins, best_cost = spins.copy(), chain.cost
    # Recompute exactly; the chain energy accumulates flip deltas.
    return ShotResult(best_spins, energy(h, best_spins))


def run_metropolis_shots(h, kind, config: MetropolisConfig, max_shots, success_predicate=None, seed=None):
    return drive_shots(
        lambda rng: metropolis_optimize(h, kind, config, rng),
        max_shots, success_predicate, seed,
        score=lambda result: penalize(result.energy, kind),
    )


def visit_histogram(h: IsingHamiltonian, kind: CostKind, config: MetropolisConfig, burn_in: int = 0) -> dict:
    """Empirical visit frequencies of each configuration along one chain."""
    rng = np.random.default_rng(config.seed)
    chain = MetropolisChain(h, kind, config.temperature_for(h), rng)
    counts = Counter()
    for i, spins in enumerate(chain.run(config.iterations + burn_in)):
        if i >= burn_in:
            counts[tuple(int(s) for s in spins)] += 1
    total = sum(counts.values())
    logger.debug('histogram over %d states from %d samples', len(counts), total)
    return {state: count / total for state, count in counts.items()}
