"""
Local quantum annealing over product states, with penalized final costs.

The ansatz is a product of single-qubit states with angles
theta_i = (pi/2) tanh(w_i), so <sigma_z> = sin(theta_i) and
<sigma_x> = cos(theta_i). Annealing interpolates

    E_total(t) = (1 - t) E_I + t**beta * gamma * E_F

over t_i = i / N and follows momentum SGD on the unconstrained weights w.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Union

import numpy as np

from .exceptions import DimensionError, HamiltonianValidationError
from .ising import IsingHamiltonian, SpinConfig, energy

logger = logging.getLogger(__name__)

HALF_PI = math.pi / 2.0

# Denominator clamp for the inverse penalty; <H_z> = 0 is reachable at the
# SVP ground state.
CLAMP_EPSILON = 1e-9


# Cost kinds -----------------------------------------------------------------


@dataclass(frozen=True)
class GroundState:
    """Plain <H_z>: recovers LQA."""

    name = 'ground'


@dataclass(frozen=True)
class InversePenalty:
    """E_F = <H_z> + alpha / <H_z>."""

    alpha: float
    name = 'inverse'

    def __post_init__(self):
        if not self.alpha > 0:
            raise HamiltonianValidationError(f'alpha must be > 0, got {self.alpha}')


@dataclass(frozen=True)
class ExpPenalty:
    """E_F = <H_z> + r exp(-s <H_z>)."""

    r: float
    s: float
    name = 'exp'

    def __post_init__(self):
        if not self.r > 0:
            raise HamiltonianValidationError(f'r must be > 0, got {self.r}')
        if not self.s > 0:
            raise HamiltonianValidationError(f's must be > 0, got {self.s}')


CostKind = Union[GroundState, InversePenalty, ExpPenalty]


def penalize(value: float, kind: CostKind) -> float:
    """Final cost as a function of the (expected or discrete) energy."""
    if isinstance(kind, GroundState):
        return value
    if isinstance(kind, InversePenalty):
        return value + kind.alpha / max(value, CLAMP_EPSILON)
    if isinstance(kind, ExpPenalty):
        return value + kind.r * math.exp(-kind.s * value)
    raise HamiltonianValidationError(f'unknown cost kind {kind!r}')


def penalty_slope(value: float, kind: CostKind) -> float:
    """d E_F / d <H_z>; the inverse penalty is frozen inside the clamp."""
    if isinstance(kind, GroundState):
        return 1.0
    if isinstance(kind, InversePenalty):
        if value <= CLAMP_EPSILON:
            return 1.0
        return 1.0 - kind.alpha / (value * value)
    if isinstance(kind, ExpPenalty):
        return 1.0 - kind.r * kind.s * math.exp(-kind.s * value)
    raise HamiltonianValidationError(f'unknown cost kind {kind!r}')


# Schedule and state ---------------------------------------------------------


@dataclass(frozen=True)
class AnnealSchedule:
    steps: int = 100
    gamma: float = 8.0
    beta: float = 3.8
    learning_rate: float = 0.999
    momentum: float = 0.9989
    init_half_width: float = 0.2

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 1:
            raise HamiltonianValidationError('steps N must be a positive integer')
        for name in ('gamma', 'beta', 'learning_rate', 'init_half_width'):
            if not getattr(self, name) > 0:
                raise HamiltonianValidationError(f'{name} must be > 0')
        if not 0.0 <= self.momentum < 1.0:
            raise HamiltonianValidationError('momentum must lie in [0, 1)')


@dataclass(frozen=True, eq=False)
class AnsatzState:
    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'w', np.array(self.w, dtype=float).reshape(-1))

    @property
    def theta(self) -> np.ndarray:
        return HALF_PI * np.tanh(self.w)

    @property
    def n(self) -> int:
        return self.w.shape[0]


def _weights(state) -> np.ndarray:
    if isinstance(state, AnsatzState):
        return state.w
    return np.asarray(state, dtype=float).reshape(-1)


def _check(h: IsingHamiltonian, w: np.ndarray):
    if w.shape[0] != h.n:
        raise DimensionError(f'state has {w.shape[0]} weights, Hamiltonian has {h.n} spins')


def _check_time(t: float):
    if not 0.0 <= t <= 1.0:
        raise HamiltonianValidationError(f't must lie in [0, 1], got {t}')


# Costs ----------------------------------------------------------------------


def expected_energy(h: IsingHamiltonian, state) -> float:
    w = _weights(state)
    _check(h, w)
    m = np.sin(HALF_PI * np.tanh(w))
    return float(h.constant + h.linear @ m + m @ h.couplings @ m)


def transverse_cost(state) -> float:
    """E_I = -<H_x> = -sum_i cos(theta_i)."""
    w = _weights(state)
    return float(-np.cos(HALF_PI * np.tanh(w)).sum())


def final_cost(h: IsingHamiltonian, state, kind: CostKind) -> float:
    return penalize(expected_energy(h, state), kind)


def total_cost(h, state, kind: CostKind, schedule: AnnealSchedule, t: float) -> float:
    _check_time(t)
    return (1.0 - t) * transverse_cost(state) + (
        t**schedule.beta * schedule.gamma * final_cost(h, state, kind)
    )


def grad_total_cost(h, state, kind: CostKind, schedule: AnnealSchedule, t: float) -> np.ndarray:
    """Analytic d E_total / d w via the chain rule through theta = (pi/2) tanh w."""
    _check_time(t)
    w = _weights(state)
    _check(h, w)
    tanh_w = np.tanh(w)
    theta = HALF_PI * tanh_w
    sin_t, cos_t = np.sin(theta), np.cos(theta)

    local_field = h.linear + 2.0 * (h.couplings @ sin_t)
    h_z = float(h.constant + h.linear @ sin_t + sin_t @ h.couplings @ sin_t)
    d_hz = cos_t * local_field

    d_theta = (1.0 - t) * sin_t + (
        t**schedule.beta * schedule.gamma * penalty_slope(h_z, kind) * d_hz
    )
    return d_theta * HALF_PI * (1.0 - tanh_w) * (1.0 + tanh_w)


def sgd_step(state, grad, velocity, schedule: AnnealSchedule):
    """velocity' = mu velocity + grad; w' = w - eta velocity'."""
    w = _weights(state)
    grad = np.asarray(grad, dtype=float)
    velocity = np.asarray(velocity, dtype=float)
    if not (w.shape == grad.shape == velocity.shape):
        raise DimensionError('state, gradient and velocity lengths differ')
    velocity = schedule.momentum * velocity + grad
    return AnsatzState(w - schedule.learning_rate * velocity), velocity


def decode(state) -> SpinConfig:
    """sign(w) with sign(0) = +1."""
    w = _weights(state)
    return np.where(w < 0, -1, 1).astype(np.int8)


# Annealing loop -------------------------------------------------------------


class TracePoint(NamedTuple):
    step: int
    t: float
    final_cost: float
    total_cost: float


@dataclass(eq=False)
class ShotResult:
    config: SpinConfig
    energy: float
    trace: Optional[list] = None
    weights: Optional[np.ndarray] = field(default=None, repr=False)


def anneal(h, kind: CostKind, schedule: AnnealSchedule, initial_w, record_trace=False) -> ShotResult:
    """Run N momentum-SGD steps on t_i = i/N and decode sign(w)."""
    state = AnsatzState(initial_w)
    _check(h, state.w)
    velocity = np.zeros_like(state.w)
    trace = [] if record_trace else None

    for step in range(1, schedule.steps + 1):
        t = step / schedule.steps
        grad = grad_total_cost(h, state, kind, schedule, t)
        state, velocity = sgd_step(state, grad, velocity, schedule)
        if record_trace:
            trace.append(TracePoint(
                step, t,
                final_cost(h, state, kind),
                total_cost(h, state, kind, schedule, t),
            ))

    config = decode(state)
    return ShotResult(config, energy(h, config), trace, state.w)


# Shot driver ----------------------------------------------------------------


class ShotsOutcome(NamedTuple):
    best: ShotResult
    shots_used: int
    succeeded: bool


def drive_shots(
    shot_fn: Callable[[np.random.Generator], ShotResult],
    max_shots: int,
    success: Optional[Callable[[ShotResult], bool]] = None,
    seed: Optional[int] = None,
    score: Optional[Callable[[ShotResult], float]] = None,
) -> ShotsOutcome:
    """Run independent shots until success or max_shots.

    Shot i always draws from the i-th child of SeedSequence(seed), so the
    sequence of shots does not depend on how callers schedule them.
    """
    if max_shots < 1:
        raise HamiltonianValidationError('max_shots must be >= 1')
    score = score or (lambda result: result.energy)
    children = np.random.SeedSequence(seed).spawn(max_shots)

    best = None
    for used, child in enumerate(children, start=1):
        result = shot_fn(np.random.default_rng(child))
        if success is not None and success(result):
            logger.debug('shot %d succeeded with energy %.6g', used, result.energy)
            return ShotsOutcome(result, used, True)
        if best is None or score(result) < score(best):
            best = result
    return ShotsOutcome(best, max_shots, False)


def run_shots(
    h: IsingHamiltonian,
    kind: CostKind,
    schedule: AnnealSchedule,
    max_shots: int,
    success_predicate=None,
    seed=None,
    record_trace=False,
) -> ShotsOutcome:
    """Multi-shot ExcLQA with w_0 ~ U[-f, f]^n per shot."""

    def shot(rng):
        w0 = rng.uniform(-schedule.init_half_width, schedule.init_half_width, h.n)
        return anneal(h, kind, schedule, w0, record_trace=record_trace)

    return drive_shots(
        shot, max_shots, success_predicate, seed,
        score=lambda result: penalize(result.energy, kind),
    )


# Traces ---------------------------------------------------------------------

TRACE_COLUMNS = ('shot', 'step', 't', 'E_F', 'E_Total')


def collect_traces(h, kind: CostKind, schedule: AnnealSchedule, shots: int, seed=None) -> list:
    """Per-step (shot, step, t, E_F, E_Total) rows for every shot.

    Shot i starts from the same weights as shot i of run_shots with this seed.
    """
    rows = []
    for shot, child in enumerate(np.random.SeedSequence(seed).spawn(shots), start=1):
        rng = np.random.default_rng(child)
        w0 = rng.uniform(-schedule.init_half_width, schedule.init_half_width, h.n)
        result = anneal(h, kind, schedule, w0, record_trace=True)
        rows.extend(
            {'shot': shot, 'step': p.step, 't': p.t, 'E_F': p.final_cost, 'E_Total': p.total_cost}
            for p in result.trace
        )
    return rows


def mean_trace(rows: list) -> list:
    """Shot-averaged E_F and E_Total per step."""
    by_step = {}
    for row in rows:
        by_step.setdefault((row['step'], row['t']), []).append(row)
    return [
        {
            'step': step,
            't': t,
            'E_F': float(np.mean([r['E_F'] for r in group])),
            'E_Total': float(np.mean([r['E_Total'] for r in group])),
        }
        for (step, t), group in sorted(by_step.items())
    ]
