"""Record per-step cost traces of several shots."""
from pathlib import Path

from exclqa import bench, utils
from exclqa.anneal import TRACE_COLUMNS, collect_traces, mean_trace
from exclqa.ising import IsingHamiltonian

from ._options import ExclqaCommand


class Command(ExclqaCommand):
    help = 'Write E_F and E_Total at every annealing step for each shot, plus the shot average.'
    uses_config = True

    def add_command_arguments(self, parser):
        parser.add_argument('--hamiltonian', type=Path, required=True, help='Hamiltonian JSON')
        parser.add_argument('--shots', type=int, default=40, help='number of traced shots')
        parser.add_argument('--out', help='output directory (default: $EXCLQA_DATA_DIR/trace)')

    def run(self, **options):
        cfg = self.load_config(options)
        h = IsingHamiltonian.from_dict(utils.read_json(options['hamiltonian']))
        kind = bench.hamiltonian_cost_kind(h, cfg)
        rows = collect_traces(h, kind, cfg.schedule(), options['shots'], seed=cfg.seed)
        mean = mean_trace(rows)
        out = self.output_dir(options, 'trace')
        utils.write_csv(out / 'trace.csv', TRACE_COLUMNS, rows)
        utils.write_csv(out / 'trace_mean.csv', TRACE_COLUMNS[1:], mean)
        self.stdout.write(f'{kind.name} cost: final mean E_F = {mean[-1]["E_F"]:.6g}')
        self.stdout.write(self.style.SUCCESS(f'{len(rows)} trace rows written to {out}'))
