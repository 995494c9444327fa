"""Solve one instance with one method."""
from pathlib import Path

from django.conf import settings

from exclqa import bench, utils

from ._options import ExclqaCommand


class Command(ExclqaCommand):
    help = 'Run up to max_shots shots of one method on one instance and write results.csv.'
    uses_config = True

    def add_command_arguments(self, parser):
        parser.add_argument('--instance', type=Path, required=True,
                            help='basis JSON; a .oracle.json beside it supplies lambda1')
        parser.add_argument('--out', help='output directory (default: $EXCLQA_DATA_DIR/solve)')

    def run(self, **options):
        cfg = self.load_config(options)
        instance = bench.load_instance_file(options['instance'], timeout=settings.EXCLQA_ENUM_TIMEOUT)
        seed = bench.derive_seed(cfg.seed, bench.SOLVE_SALT, instance.rank, instance.index)
        alpha = None
        if cfg.tune and cfg.effective_cost_kind == 'inverse':
            alpha = bench.tune_alpha(instance, cfg, seed=bench.derive_seed(cfg.seed, bench.TUNE_SALT, instance.rank))
            self.stdout.write(f'tuned alpha = {alpha:.6g}')
        record = bench.solve_instance(instance, cfg, seed, alpha=alpha)
        out = self.output_dir(options, 'solve')
        utils.write_csv(out / 'results.csv', bench.RESULTS_COLUMNS, [record.as_row()])
        if not record.valid:
            self.stdout.write(self.style.WARNING(f'{instance.id}: no shortest vector fits the k={cfg.k} box'))
        elif record.solved:
            self.stdout.write(self.style.SUCCESS(
                f'{instance.id}: solved in {record.shots_used} shots (lambda1^2 = {record.lambda1_sq})'
            ))
        else:
            self.stdout.write(
                f'{instance.id}: unsolved after {record.shots_used} shots, '
                f'best |v|^2 = {record.best_norm_sq}, approx factor {record.approx_factor}'
            )
