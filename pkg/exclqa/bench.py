"""
Benchmark harness for SVP instances.

Generates q-ary sublattices with certified shortest vectors, filters them by
the qudit search space, tunes the inverse-penalty prefactor, runs the solvers
shot by shot and aggregates per-rank metrics.

Nothing here touches Django: worker processes import this module directly.
Database persistence lives in exclqa.utils.
"""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Callable, Mapping, NamedTuple, Optional, Sequence, Union

import numpy as np

from . import utils
from .anneal import (
    AnnealSchedule,
    CostKind,
    ExpPenalty,
    GroundState,
    InversePenalty,
    ShotResult,
    ShotsOutcome,
    anneal,
    run_shots,
)
from .exceptions import (
    BracketExhaustedError,
    ConfigurationError,
    EnumerationTimeout,
    ExclqaError,
    InstanceFormatError,
    InstanceMismatchError,
    NoExcitedStateError,
)
from .ising import IsingHamiltonian, energy
from .lattice import (
    DEFAULT_DELTA,
    DEFAULT_ETA,
    Basis,
    gaussian_heuristic,
    gram,
    lll_reduce,
    qary_basis,
    sublattice,
)
from .metropolis import MetropolisConfig, metropolis_optimize, run_metropolis_shots
from .oracle import LEVEL_TOLERANCE, enumerate_shortest, exact_spectrum
from .svp_encode import (
    QuditEncoding,
    build_svp_hamiltonian,
    decode_coefficients,
    in_search_space,
    resolve_rescale,
    vector_norm_sq,
)

logger = logging.getLogger(__name__)


class LatticeProfile(NamedTuple):
    q: int
    d: int
    k_qary: int


LATTICE_PROFILES = {
    'desk': LatticeProfile(q=257, d=40, k_qary=20),
    'paper': LatticeProfile(q=65537, d=180, k_qary=90),
}

DESK_RANKS = tuple(range(8, 21))
METHODS = ('exclqa', 'exclqa-alt', 'metropolis')
COST_KINDS = ('ground', 'inverse', 'exp')

RESULTS_COLUMNS = (
    'method', 'rank', 'instance_id', 'valid', 'solved',
    'shots_used', 'best_norm_sq', 'lambda1_sq', 'approx_factor',
)
METRICS_COLUMNS = (
    'method', 'rank', 'valid_count', 'solved_count',
    'solved_ratio', 'avg_shots', 'avg_approx_factor',
)
SEARCH_SPACE_COLUMNS = ('rank', 'k', 'valid', 'total', 'probability')

# alpha bracket in units of the squared first-excited estimate
ALPHA_LOW_FACTOR = 1e-6
ALPHA_HIGH_FACTOR = 1e2
TUNE_ITERATIONS = 12
TUNE_RATIO = 1.1

# Seed-sequence salts keeping independent streams apart.
INSTANCE_SALT = 0
SOLVE_SALT = 1
TUNE_SALT = 2


def derive_seed(master: int, *keys: int) -> int:
    """A 63-bit seed that depends only on the master seed and the keys."""
    state = np.random.SeedSequence([int(master), *(int(key) for key in keys)])
    return int(state.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def resolve_workers(workers: Optional[int]) -> int:
    if not workers:
        return os.cpu_count() or 1
    return max(1, int(workers))


def _map(fn, tasks: list, workers: Optional[int]) -> list:
    """Ordered map over tasks, in a process pool when more than one worker."""
    workers = resolve_workers(workers)
    if workers == 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


# Configuration --------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    """One benchmark column: lattice profile, solver and hyperparameters.

    Hyperparameter keys keep their published names (N, gamma, beta, mu, eta,
    f, M, alpha, r_factor, s).
    """

    method: str = 'exclqa'
    q: int = 257
    d: int = 40
    k_qary: int = 20
    seed: int = 0
    ranks: tuple = DESK_RANKS
    k: int = 1
    N: int = 100
    gamma: float = 8.0
    beta: float = 3.8
    mu: float = 0.9989
    eta: float = 0.999
    f: float = 0.2
    M: Union[str, float] = 'norm'
    alpha: float = 0.055
    r_factor: float = 0.72
    s: float = 0.0005
    cost_kind: Optional[str] = None
    max_shots: int = 100
    instances_per_rank: int = 100
    iterations: Optional[int] = None
    temperature: Optional[float] = None
    tuning_shots: int = 10
    tune: bool = False
    enum_timeout: Optional[float] = 60.0
    label: str = ''

    def __post_init__(self):
        ranks = tuple(sorted({int(rank) for rank in self.ranks}))
        object.__setattr__(self, 'ranks', ranks)
        if self.method not in METHODS:
            raise ConfigurationError(f'method must be one of {", ".join(METHODS)}, got {self.method!r}')
        if self.cost_kind is not None and self.cost_kind not in COST_KINDS:
            raise ConfigurationError(f'cost_kind must be one of {", ".join(COST_KINDS)}')
        if not 0 < self.k_qary < self.d:
            raise ConfigurationError(f'need 0 < k_qary < d, got k_qary={self.k_qary}, d={self.d}')
        if not ranks or ranks[0] < 1 or ranks[-1] > self.d:
            raise ConfigurationError(f'ranks must lie in [1, {self.d}]')
        if self.max_shots < 1:
            raise ConfigurationError('max_shots must be >= 1')
        if self.instances_per_rank < 1:
            raise ConfigurationError('instances_per_rank must be >= 1')
        if self.k < 1:
            raise ConfigurationError('local dimension bits k must be >= 1')
        if self.tuning_shots < 1:
            raise ConfigurationError('tuning_shots must be >= 1')

    @property
    def profile(self) -> LatticeProfile:
        return LatticeProfile(self.q, self.d, self.k_qary)

    @property
    def effective_cost_kind(self) -> str:
        if self.cost_kind:
            return self.cost_kind
        return 'exp' if self.method == 'exclqa-alt' else 'inverse'

    @property
    def display_label(self) -> str:
        return self.label or self.method

    def schedule(self) -> AnnealSchedule:
        return AnnealSchedule(
            steps=self.N,
            gamma=self.gamma,
            beta=self.beta,
            learning_rate=self.eta,
            momentum=self.mu,
            init_half_width=self.f,
        )

    def metropolis_config(self) -> MetropolisConfig:
        return MetropolisConfig(iterations=self.iterations or self.N, temperature=self.temperature)

    def to_dict(self) -> dict:
        data = asdict(self)
        data['ranks'] = list(self.ranks)
        return data

    @classmethod
    def from_dict(cls, data: Mapping) -> ExperimentConfig:
        data = dict(data)
        profile = data.pop('profile', None)
        if profile is not None:
            if profile not in LATTICE_PROFILES:
                raise ConfigurationError(f'unknown lattice profile {profile!r}')
            for key, value in LATTICE_PROFILES[profile]._asdict().items():
                data.setdefault(key, value)
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f'unknown configuration keys: {", ".join(unknown)}')
        return cls(**data)


# Instances ------------------------------------------------------------------


def instance_id(rank: int, index: int) -> str:
    return f'n{rank:03d}-{index:04d}'


def raw_basis_name(index: int) -> str:
    return f'bases/lattice-{index:04d}.raw.json'


# Provenance keys of a stored basis; 'k' is the rank of the q I block.
PROVENANCE_KEYS = ('q', 'd', 'k', 'seed')


@dataclass(frozen=True, eq=False)
class Instance:
    """A rank-n sublattice with its certified shortest vector.

    q, k_qary and seed are None for a bare basis file that carries no
    provenance. raw_basis is the q-ary basis before LLL, shared by every
    rank cut from the same lattice.
    """

    id: str
    rank: int
    index: int
    q: Optional[int]
    d: int
    k_qary: Optional[int]
    seed: Optional[int]
    basis: Basis
    lambda1_sq: int
    x: tuple
    v: tuple = ()
    minimizers: tuple = ()
    basis_file: str = ''
    raw_basis: Optional[Basis] = None
    raw_basis_file: str = ''

    def provenance(self) -> dict:
        return {'q': self.q, 'd': self.d, 'k': self.k_qary, 'seed': self.seed}

    def record(self) -> dict:
        return {
            'id': self.id,
            'rank': self.rank,
            'q': self.q,
            'd': self.d,
            'k_qary': self.k_qary,
            'seed': self.seed,
            'basis_file': self.basis_file,
            'raw_basis_file': self.raw_basis_file,
            'lambda1_sq': self.lambda1_sq,
            'x': list(self.x),
        }

    def oracle_record(self) -> dict:
        return {
            'lambda1_sq': self.lambda1_sq,
            'x': list(self.x),
            'v': list(self.v),
            'minimizers': [list(m) for m in self.minimizers],
        }


class _GenerationTask(NamedTuple):
    profile: LatticeProfile
    index: int
    seed: int
    ranks: tuple
    timeout: Optional[float]
    delta: float
    eta: float


def _generate_for_index(task: _GenerationTask) -> list:
    q, d, k_qary = task.profile
    raw = qary_basis(q, d, k_qary, task.seed)
    reduced = lll_reduce(raw, task.delta, task.eta)
    found = []
    for rank in task.ranks:
        ident = instance_id(rank, task.index)
        try:
            sv = enumerate_shortest(sublattice(reduced, rank), timeout=task.timeout)
        except EnumerationTimeout as exc:
            logger.warning('skipping instance %s: %s', ident, exc)
            continue
        basis = sublattice(reduced, rank)
        found.append(Instance(
            id=ident, rank=rank, index=task.index, q=q, d=d, k_qary=k_qary,
            seed=task.seed, basis=basis,
            lambda1_sq=sv.norm_sq, x=sv.x, v=sv.v, minimizers=sv.minimizers,
            raw_basis=raw,
        ))
    return found


def generate_instances(
    cfg: ExperimentConfig,
    out_dir: Optional[Path] = None,
    workers: Optional[int] = 1,
    delta: float = DEFAULT_DELTA,
    eta: float = DEFAULT_ETA,
) -> list:
    """Certified instances for every rank in cfg, ordered by (rank, index).

    Instance index i uses one q-ary basis for all ranks, so LLL runs once per
    index; the basis seed depends only on (cfg.seed, i).
    """
    tasks = [
        _GenerationTask(
            cfg.profile, index, derive_seed(cfg.seed, INSTANCE_SALT, index),
            cfg.ranks, cfg.enum_timeout, delta, eta,
        )
        for index in range(cfg.instances_per_rank)
    ]
    logger.info(
        'generating %d q-ary lattices (q=%d, d=%d, k=%d) for ranks %s',
        len(tasks), cfg.q, cfg.d, cfg.k_qary, list(cfg.ranks),
    )
    instances = [inst for batch in _map(_generate_for_index, tasks, workers) for inst in batch]
    instances.sort(key=lambda inst: (inst.rank, inst.index))
    if out_dir is not None:
        instances = persist_instances(instances, out_dir)
    logger.info('generated %d certified instances', len(instances))
    return instances


def persist_instances(instances: Sequence[Instance], out_dir) -> list:
    """Write bases/<id>.json, bases/<id>.oracle.json, one raw basis per lattice and instances.jsonl."""
    out_dir = Path(out_dir)
    stored = []
    written_raw = set()
    for inst in instances:
        meta = inst.provenance()
        basis_file = f'bases/{inst.id}.json'
        utils.write_json(out_dir / basis_file, inst.basis.to_dict(id=inst.id, rank=inst.rank, **meta))
        utils.write_json(out_dir / f'bases/{inst.id}.oracle.json', inst.oracle_record())
        raw_file = ''
        if inst.raw_basis is not None:
            raw_file = raw_basis_name(inst.index)
            if raw_file not in written_raw:
                utils.write_json(out_dir / raw_file, inst.raw_basis.to_dict(index=inst.index, **meta))
                written_raw.add(raw_file)
        stored.append(replace(inst, basis_file=basis_file, raw_basis_file=raw_file))
    utils.write_jsonl(out_dir / 'instances.jsonl', [inst.record() for inst in stored])
    return stored


def _index_of(ident: str) -> int:
    tail = ident.rsplit('-', 1)[-1]
    return int(tail) if tail.isdigit() else 0


def _require(data: Mapping, keys: Sequence[str], source) -> None:
    missing = [key for key in keys if key not in data]
    if missing:
        raise InstanceFormatError(f'{source}: missing {", ".join(missing)}')


def _check_provenance(data: Mapping, expected: Mapping, source) -> None:
    _require(data, PROVENANCE_KEYS, source)
    for key in PROVENANCE_KEYS:
        if data[key] != expected[key]:
            raise InstanceFormatError(f'{source}: {key} is {data[key]!r}, index says {expected[key]!r}')


def _read_oracle(path: Path) -> dict:
    oracle = utils.read_json(path)
    _require(oracle, ('lambda1_sq', 'x', 'v', 'minimizers'), path)
    return oracle


INSTANCE_RECORD_KEYS = (
    'id', 'rank', 'q', 'd', 'k_qary', 'seed', 'basis_file', 'raw_basis_file', 'lambda1_sq', 'x',
)


def load_instances(path) -> list:
    """Read an instances.jsonl file and every basis, raw basis and oracle file it names.

    Each stored file must carry the provenance recorded in the index.
    """
    path = Path(path)
    root = path.parent
    raw_cache = {}
    instances = []
    for line, row in enumerate(utils.read_jsonl(path), start=1):
        _require(row, INSTANCE_RECORD_KEYS, f'{path}:{line}')
        expected = {'q': row['q'], 'd': row['d'], 'k': row['k_qary'], 'seed': row['seed']}
        basis_path = root / row['basis_file']
        data = utils.read_json(basis_path)
        _check_provenance(data, expected, basis_path)
        if (data.get('id'), data.get('rank')) != (row['id'], row['rank']):
            raise InstanceFormatError(f'{basis_path}: stored id/rank do not match {row["id"]}')
        basis = Basis.from_dict(data)
        oracle = _read_oracle(basis_path.with_name(basis_path.stem + '.oracle.json'))
        if int(oracle['lambda1_sq']) != int(row['lambda1_sq']):
            raise InstanceFormatError(f'{basis_path}: oracle lambda1^2 disagrees with the index')
        raw_basis = None
        if row['raw_basis_file']:
            raw_path = root / row['raw_basis_file']
            if raw_path not in raw_cache:
                raw_data = utils.read_json(raw_path)
                _check_provenance(raw_data, expected, raw_path)
                raw_cache[raw_path] = Basis.from_dict(raw_data)
            raw_basis = raw_cache[raw_path]
        instances.append(Instance(
            id=row['id'], rank=int(row['rank']), index=_index_of(row['id']),
            q=int(row['q']), d=int(row['d']), k_qary=int(row['k_qary']), seed=int(row['seed']),
            basis=basis, lambda1_sq=int(row['lambda1_sq']), x=tuple(row['x']),
            v=tuple(oracle['v']), minimizers=tuple(tuple(m) for m in oracle['minimizers']),
            basis_file=row['basis_file'], raw_basis=raw_basis, raw_basis_file=row['raw_basis_file'],
        ))
    return instances


def load_instance_file(path, timeout: Optional[float] = None) -> Instance:
    """One instance from a basis JSON; the oracle runs when no .oracle.json sits beside it.

    Provenance keys are all present or all absent; a stored d must match the rows.
    """
    path = Path(path)
    data = utils.read_json(path)
    basis = Basis.from_dict(data)
    present = [key for key in PROVENANCE_KEYS if key in data]
    if present and len(present) != len(PROVENANCE_KEYS):
        _require(data, PROVENANCE_KEYS, path)
    if 'd' in data and int(data['d']) != basis.dimension:
        raise InstanceFormatError(f'{path}: d is {data["d"]} but the rows have {basis.dimension} entries')
    oracle_path = path.with_name(path.stem + '.oracle.json')
    if oracle_path.exists():
        oracle = _read_oracle(oracle_path)
        lambda1_sq, x = int(oracle['lambda1_sq']), tuple(oracle['x'])
        v = tuple(oracle['v'])
        minimizers = tuple(tuple(m) for m in oracle['minimizers'])
    else:
        sv = enumerate_shortest(basis, timeout=timeout)
        lambda1_sq, x, v, minimizers = sv.norm_sq, sv.x, sv.v, sv.minimizers
    ident = str(data.get('id', path.stem))

    def optional_int(key):
        return int(data[key]) if data.get(key) is not None else None

    return Instance(
        id=ident, rank=basis.rank, index=_index_of(ident),
        q=optional_int('q'), d=basis.dimension, k_qary=optional_int('k'), seed=optional_int('seed'),
        basis=basis, lambda1_sq=lambda1_sq, x=x, v=v, minimizers=minimizers, basis_file=path.name,
    )


def is_valid(instance: Instance, k: int) -> bool:
    """Some shortest vector, up to sign, fits the k-bit qudit box."""
    candidates = instance.minimizers or (instance.x,)
    return any(
        in_search_space(x, k) or in_search_space([-c for c in x], k)
        for x in candidates
    )


def filter_valid(instances: Sequence[Instance], k: int) -> list:
    return [inst for inst in instances if is_valid(inst, k)]


class SearchSpaceRow(NamedTuple):
    rank: int
    k: int
    valid: int
    total: int
    probability: float


def search_space_probability(instances: Sequence[Instance], k_list: Sequence[int]) -> list:
    """Fraction of instances per (rank, k) whose solution lies in the box."""
    by_rank = {}
    for inst in instances:
        by_rank.setdefault(inst.rank, []).append(inst)
    rows = []
    for rank in sorted(by_rank):
        group = by_rank[rank]
        for k in sorted(k_list):
            valid = len(filter_valid(group, k))
            rows.append(SearchSpaceRow(rank, k, valid, len(group), valid / len(group)))
    return rows


# Solving --------------------------------------------------------------------


class SvpProblem(NamedTuple):
    instance: Instance
    gram: np.ndarray
    encoding: QuditEncoding
    hamiltonian: IsingHamiltonian
    kind: CostKind


def cost_kind_for(basis: Basis, cfg: ExperimentConfig, alpha: Optional[float] = None) -> CostKind:
    """The configured penalty; the exp height r = r_factor * gh^2 does not depend on M."""
    kind = cfg.effective_cost_kind
    if kind == 'ground':
        return GroundState()
    if kind == 'inverse':
        return InversePenalty(cfg.alpha if alpha is None else alpha)
    gh = gaussian_heuristic(basis)
    return ExpPenalty(r=cfg.r_factor * gh * gh, s=cfg.s)


def build_problem(instance: Instance, cfg: ExperimentConfig, alpha: Optional[float] = None) -> SvpProblem:
    exact = gram(instance.basis)
    g = np.array(exact, dtype=float)
    rescale = resolve_rescale(cfg.M, g)
    enc = QuditEncoding(instance.rank, cfg.k, rescale)
    h = build_svp_hamiltonian(g, enc)
    return SvpProblem(instance, exact, enc, h, cost_kind_for(instance.basis, cfg, alpha))


def hamiltonian_cost_kind(h: IsingHamiltonian, cfg: ExperimentConfig) -> CostKind:
    """Cost kind for a bare Hamiltonian; the exp penalty uses r = r_factor * E1."""
    kind = cfg.effective_cost_kind
    if kind == 'ground':
        return GroundState()
    if kind == 'inverse':
        return InversePenalty(cfg.alpha)
    spectrum = exact_spectrum(h)
    ground = float(spectrum.energies[0])
    above = spectrum.energies[spectrum.energies > ground + LEVEL_TOLERANCE * max(1.0, abs(ground))]
    if above.size == 0:
        raise NoExcitedStateError('the Hamiltonian has no excited level to target')
    return ExpPenalty(r=cfg.r_factor * float(above[0]), s=cfg.s)


class NormTracker:
    """Shot success predicate that also keeps the shortest nonzero decode."""

    def __init__(self, problem: SvpProblem):
        self.problem = problem
        self.best_norm_sq: Optional[int] = None

    def norm_sq(self, result: ShotResult) -> Optional[int]:
        x = decode_coefficients(result.config, self.problem.encoding)
        if not np.any(x):
            return None
        return vector_norm_sq(x, self.problem.gram)

    def __call__(self, result: ShotResult) -> bool:
        value = self.norm_sq(result)
        if value is None:
            return False
        if self.best_norm_sq is None or value < self.best_norm_sq:
            self.best_norm_sq = value
        return value == self.problem.instance.lambda1_sq


def anneal_solver(problem: SvpProblem, cfg: ExperimentConfig, success, seed) -> ShotsOutcome:
    return run_shots(problem.hamiltonian, problem.kind, cfg.schedule(), cfg.max_shots, success, seed)


def metropolis_solver(problem: SvpProblem, cfg: ExperimentConfig, success, seed) -> ShotsOutcome:
    return run_metropolis_shots(
        problem.hamiltonian, problem.kind, cfg.metropolis_config(), cfg.max_shots, success, seed,
    )


SOLVERS = {
    'exclqa': anneal_solver,
    'exclqa-alt': anneal_solver,
    'metropolis': metropolis_solver,
}

Solver = Callable[[SvpProblem, ExperimentConfig, Callable, int], ShotsOutcome]


@dataclass(frozen=True)
class RunRecord:
    method: str
    rank: int
    instance_id: str
    valid: bool
    solved: bool
    shots_used: int
    best_norm_sq: Optional[int]
    lambda1_sq: int
    approx_factor: Optional[float] = field(default=None)

    def as_row(self) -> dict:
        return asdict(self)


def approx_factor(best_norm_sq: Optional[int], lambda1_sq: int) -> Optional[float]:
    if best_norm_sq is None:
        return None
    if best_norm_sq == lambda1_sq:
        return 1.0
    return math.sqrt(best_norm_sq / lambda1_sq)


def solve_instance(
    instance: Instance,
    cfg: ExperimentConfig,
    seed: int,
    alpha: Optional[float] = None,
    solver: Optional[Solver] = None,
) -> RunRecord:
    """Up to max_shots shots; success means a decode of norm exactly lambda1."""
    label = cfg.display_label
    if not is_valid(instance, cfg.k):
        return RunRecord(label, instance.rank, instance.id, False, False, 0, None, instance.lambda1_sq)
    problem = build_problem(instance, cfg, alpha)
    tracker = NormTracker(problem)
    outcome = (solver or SOLVERS[cfg.method])(problem, cfg, tracker, seed)
    tracker(outcome.best)
    best = tracker.best_norm_sq
    logger.debug('%s %s: solved=%s after %d shots', label, instance.id, outcome.succeeded, outcome.shots_used)
    return RunRecord(
        label, instance.rank, instance.id, True, outcome.succeeded, outcome.shots_used,
        best, instance.lambda1_sq, approx_factor(best, instance.lambda1_sq),
    )


class _SolveTask(NamedTuple):
    instance: Instance
    cfg: ExperimentConfig
    seed: int
    alpha: Optional[float]
    solver: Optional[Solver]


def _solve_task(task: _SolveTask) -> Optional[RunRecord]:
    try:
        return solve_instance(task.instance, task.cfg, task.seed, task.alpha, task.solver)
    except (ExclqaError, ArithmeticError, ValueError) as exc:
        logger.warning('aborting instance %s: %s', task.instance.id, exc)
        return None


class RankMetrics(NamedTuple):
    method: str
    rank: int
    valid_count: int
    solved_count: int
    solved_ratio: Optional[float]
    avg_shots: Optional[float]
    avg_approx_factor: Optional[float]


def _mean(values: list) -> Optional[float]:
    return float(np.mean(values)) if values else None


def rank_metrics(records: Sequence[RunRecord]) -> list:
    """Per (method, rank): shots averaged over solved, factors over unsolved."""
    groups = {}
    for record in records:
        groups.setdefault((record.method, record.rank), []).append(record)
    metrics = []
    for (method, rank), group in sorted(groups.items(), key=lambda item: (item[0][1], item[0][0])):
        valid = [r for r in group if r.valid]
        solved = [r for r in valid if r.solved]
        unsolved_factors = [r.approx_factor for r in valid if not r.solved and r.approx_factor is not None]
        metrics.append(RankMetrics(
            method, rank, len(valid), len(solved),
            len(solved) / len(valid) if valid else None,
            _mean([r.shots_used for r in solved]),
            _mean(unsolved_factors),
        ))
    return metrics


def tune_rank_alphas(instances: Sequence[Instance], cfg: ExperimentConfig) -> dict:
    """One alpha per rank, tuned on the first valid instance of that rank."""
    alphas = {}
    for inst in filter_valid(instances, cfg.k):
        if inst.rank in alphas:
            continue
        alphas[inst.rank] = tune_alpha(inst, cfg, seed=derive_seed(cfg.seed, TUNE_SALT, inst.rank))
    return alphas


def run_experiment(
    cfg: ExperimentConfig,
    instances: Sequence[Instance],
    out_dir: Optional[Path] = None,
    workers: Optional[int] = 1,
    solver: Optional[Solver] = None,
):
    """Run cfg's solver over every instance and aggregate per-rank metrics.

    Shot seeds depend on (cfg.seed, rank, index) only, so serial and
    parallel runs produce identical records. A custom solver must be a
    module-level function when workers > 1.
    """
    alphas = tune_rank_alphas(instances, cfg) if cfg.tune and cfg.effective_cost_kind == 'inverse' else {}
    tasks = [
        _SolveTask(inst, cfg, derive_seed(cfg.seed, SOLVE_SALT, inst.rank, inst.index), alphas.get(inst.rank), solver)
        for inst in instances
    ]
    logger.info('running %s on %d instances', cfg.display_label, len(tasks))
    records = [record for record in _map(_solve_task, tasks, workers) if record is not None]
    metrics = rank_metrics(records)
    for m in metrics:
        logger.info(
            '%s rank %d: solved %d/%d, avg shots %s, avg approx factor %s',
            m.method, m.rank, m.solved_count, m.valid_count, m.avg_shots, m.avg_approx_factor,
        )
    if out_dir is not None:
        write_experiment(out_dir, cfg, records, metrics, alphas)
    return records, metrics


def write_experiment(out_dir, cfg: ExperimentConfig, records, metrics, alphas=None):
    out_dir = Path(out_dir)
    utils.write_csv(out_dir / 'results.csv', RESULTS_COLUMNS, [r.as_row() for r in records])
    utils.write_csv(out_dir / 'metrics.csv', METRICS_COLUMNS, [m._asdict() for m in metrics])
    config = cfg.to_dict()
    if alphas:
        config['tuned_alpha'] = {str(rank): value for rank, value in sorted(alphas.items())}
    utils.write_json(out_dir / 'config.json', config)


class LocalDimFraction(NamedTuple):
    rank: int
    solved: int
    valid: int

    @property
    def label(self) -> str:
        return f'{self.solved}/{self.valid}'


def local_dim_fractions(records: Sequence[RunRecord]) -> list:
    """solved/valid counts per rank, as reported for wider qudits."""
    return [LocalDimFraction(m.rank, m.solved_count, m.valid_count) for m in rank_metrics(records)]


# Comparison -----------------------------------------------------------------


@dataclass
class Comparison:
    labels: tuple
    metrics: dict
    ranks: tuple

    def _lookup(self, label: str, rank: int) -> Optional[RankMetrics]:
        return next((m for m in self.metrics[label] if m.rank == rank), None)

    def columns(self) -> list:
        return ['rank'] + [
            f'{label}_{name}'
            for label in self.labels
            for name in ('solved_ratio', 'avg_shots', 'avg_approx_factor')
        ]

    def rows(self) -> list:
        rows = []
        for rank in self.ranks:
            row = {'rank': rank}
            for label in self.labels:
                m = self._lookup(label, rank)
                row[f'{label}_solved_ratio'] = m.solved_ratio if m else None
                row[f'{label}_avg_shots'] = m.avg_shots if m else None
                row[f'{label}_avg_approx_factor'] = m.avg_approx_factor if m else None
            rows.append(row)
        return rows

    def long_rows(self) -> list:
        """One metrics row per (method, rank), methods in comparison order."""
        return [
            {**m._asdict(), 'method': label}
            for label in self.labels
            for m in self.metrics[label]
        ]

    def table2_columns(self) -> list:
        return ['rank'] + [
            f'{label}_{name}'
            for label in self.labels
            for name in ('valid', 'solved', 'avg_shots', 'avg_approx_factor')
        ]

    def table2_rows(self) -> list:
        rows = []
        for rank in self.ranks:
            row = {'rank': rank}
            for label in self.labels:
                m = self._lookup(label, rank)
                row[f'{label}_valid'] = m.valid_count if m else 0
                row[f'{label}_solved'] = m.solved_count if m else 0
                row[f'{label}_avg_shots'] = m.avg_shots if m else None
                row[f'{label}_avg_approx_factor'] = m.avg_approx_factor if m else None
            rows.append(row)
        return rows


def compare_methods(results: Mapping[str, Sequence[RunRecord]], out_dir: Optional[Path] = None) -> Comparison:
    """Align per-rank metrics of several experiments on one instance set.

    With out_dir, writes comparison.csv, table2.csv and a long-form
    metrics.csv holding every method.
    """
    if not results:
        raise ConfigurationError('nothing to compare')
    labels = tuple(results)
    reference = {r.instance_id for r in results[labels[0]]}
    for label in labels[1:]:
        ids = {r.instance_id for r in results[label]}
        if ids != reference:
            missing = sorted(reference ^ ids)[:5]
            raise InstanceMismatchError(
                f'{label} and {labels[0]} were run on different instances (e.g. {", ".join(missing)})'
            )
    metrics = {label: rank_metrics(records) for label, records in results.items()}
    ranks = tuple(sorted({m.rank for ms in metrics.values() for m in ms}))
    comparison = Comparison(labels, metrics, ranks)
    if out_dir is not None:
        out_dir = Path(out_dir)
        utils.write_csv(out_dir / 'comparison.csv', comparison.columns(), comparison.rows())
        utils.write_csv(out_dir / 'table2.csv', comparison.table2_columns(), comparison.table2_rows())
        utils.write_csv(out_dir / 'metrics.csv', METRICS_COLUMNS, comparison.long_rows())
    return comparison


# Alpha tuning ---------------------------------------------------------------


class AlphaBracket(NamedTuple):
    low: float
    high: float

    @property
    def alpha(self) -> float:
        return math.sqrt(self.low * self.high)


def bisect_alpha(
    is_trivial: Callable[[float], bool],
    low: float,
    high: float,
    iterations: int = TUNE_ITERATIONS,
    ratio: float = TUNE_RATIO,
) -> AlphaBracket:
    """Log-scale bisection between under-penalized and excited behaviour."""
    if not 0 < low < high:
        raise ConfigurationError(f'alpha bracket must satisfy 0 < low < high, got [{low}, {high}]')
    if is_trivial(high):
        raise BracketExhaustedError(f'trial shots stay in the trivial state even at alpha={high:.3g}')
    for _ in range(iterations):
        if high / low < ratio:
            break
        middle = math.sqrt(low * high)
        if is_trivial(middle):
            low = middle
        else:
            high = middle
        logger.debug('alpha bracket [%.4g, %.4g]', low, high)
    return AlphaBracket(low, high)


def _anneal_trial(h: IsingHamiltonian, schedule: AnnealSchedule):
    def trial(kind, rng):
        w0 = rng.uniform(-schedule.init_half_width, schedule.init_half_width, h.n)
        return anneal(h, kind, schedule, w0).config
    return trial


def _metropolis_trial(h: IsingHamiltonian, config: MetropolisConfig):
    def trial(kind, rng):
        return metropolis_optimize(h, kind, config, rng).config
    return trial


def _majority_trivial(trial, alpha: float, shots: int, seed, trivial) -> bool:
    # Same seeds at every alpha.
    kind = InversePenalty(alpha)
    count = 0
    for child in np.random.SeedSequence(seed).spawn(shots):
        if trivial(trial(kind, np.random.default_rng(child))):
            count += 1
    return 2 * count > shots


def method_trial(h: IsingHamiltonian, cfg: ExperimentConfig):
    """Trial shots run the method being tuned, so each method gets its own alpha."""
    if cfg.method == 'metropolis':
        return _metropolis_trial(h, cfg.metropolis_config())
    return _anneal_trial(h, cfg.schedule())


def tune_alpha(instance: Instance, cfg: ExperimentConfig, seed: Optional[int] = None) -> float:
    """Inverse-penalty alpha for one instance; trivial means a zero-vector decode."""
    if cfg.effective_cost_kind != 'inverse':
        raise ConfigurationError('alpha tuning needs the inverse penalty')
    problem = build_problem(instance, cfg)
    gh = gaussian_heuristic(instance.basis)
    e1 = gh * gh / problem.encoding.rescale
    trial = method_trial(problem.hamiltonian, cfg)

    def trivial(config):
        return not np.any(decode_coefficients(config, problem.encoding))

    bracket = bisect_alpha(
        lambda alpha: _majority_trivial(trial, alpha, cfg.tuning_shots, seed, trivial),
        ALPHA_LOW_FACTOR * e1 * e1,
        ALPHA_HIGH_FACTOR * e1 * e1,
    )
    logger.info(
        '%s rank %d alpha bracket [%.4g, %.4g] -> %.4g',
        cfg.method, instance.rank, bracket.low, bracket.high, bracket.alpha,
    )
    return bracket.alpha


def tune_alpha_hamiltonian(
    h: IsingHamiltonian,
    schedule: AnnealSchedule,
    tuning_shots: int = 10,
    seed: Optional[int] = None,
    e1_estimate: Optional[float] = None,
    metropolis: Optional[MetropolisConfig] = None,
) -> AlphaBracket:
    """Alpha bracket for a small Hamiltonian; trivial means a ground-state decode.

    The Hamiltonian must already have ground energy 0. Without an estimate,
    the exact first-excited energy sets the bracket scale. Trial shots anneal
    unless a Metropolis configuration is given.
    """
    spectrum = exact_spectrum(h)
    ground = float(spectrum.energies[0])
    tolerance = LEVEL_TOLERANCE * max(1.0, abs(ground))
    if e1_estimate is None:
        above = spectrum.energies[spectrum.energies > ground + tolerance]
        if above.size == 0:
            raise NoExcitedStateError('the Hamiltonian has no excited level to target')
        e1_estimate = float(above[0])
    trial = _anneal_trial(h, schedule) if metropolis is None else _metropolis_trial(h, metropolis)

    def trivial(config):
        return energy(h, config) <= ground + tolerance

    return bisect_alpha(
        lambda alpha: _majority_trivial(trial, alpha, tuning_shots, seed, trivial),
        ALPHA_LOW_FACTOR * e1_estimate**2,
        ALPHA_HIGH_FACTOR * e1_estimate**2,
    )
