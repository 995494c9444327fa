"""Full benchmark sweep over methods and ranks."""
from dataclasses import replace
from pathlib import Path

from django.conf import settings

from exclqa import bench, utils

from ._options import ExclqaCommand


class Command(ExclqaCommand):
    help = 'Generate or load instances, run each method and write results, metrics and comparison CSVs.'
    uses_config = True

    def add_command_arguments(self, parser):
        parser.add_argument('--methods', help='comma-separated methods (default: the configured method)')
        parser.add_argument('--instances', type=Path, help='existing instances.jsonl to reuse')
        parser.add_argument('--out', help='output directory (default: $EXCLQA_DATA_DIR/bench)')
        parser.add_argument('--workers', type=int, help='parallel instances (0 = all CPUs)')
        parser.add_argument('--store', action='store_true', help='also save results to the database')

    def run(self, **options):
        cfg = self.load_config(options)
        out = self.output_dir(options, 'bench')
        workers = self.workers(options)
        methods = [m.strip() for m in (options['methods'] or cfg.method).split(',') if m.strip()]

        if options['instances']:
            instances = [i for i in bench.load_instances(options['instances']) if i.rank in cfg.ranks]
        else:
            instances = bench.generate_instances(
                cfg, out / 'instances', workers,
                delta=settings.EXCLQA_LLL_DELTA, eta=settings.EXCLQA_LLL_ETA,
            )
        rows = bench.search_space_probability(instances, sorted({1, 2, cfg.k}))
        utils.write_csv(out / 'search_space.csv', bench.SEARCH_SPACE_COLUMNS, [r._asdict() for r in rows])

        results = {}
        for method in methods:
            run_cfg = replace(cfg, method=method, label=method if len(methods) > 1 else cfg.label)
            records, metrics = bench.run_experiment(run_cfg, instances, out / run_cfg.display_label, workers)
            results[run_cfg.display_label] = records
            self.report(run_cfg, metrics)
            if options['store']:
                stored = utils.save_run_records(instances, records)
                self.stdout.write(f'stored {stored} results for {run_cfg.display_label}')
        comparison = bench.compare_methods(results, out)
        if cfg.k > 1:
            for label, records in results.items():
                fractions = ', '.join(f'n={f.rank}: {f.label}' for f in bench.local_dim_fractions(records))
                self.stdout.write(f'{label} solved/valid: {fractions}')
        self.stdout.write(self.style.SUCCESS(
            f'{len(comparison.labels)} method(s) over ranks {list(comparison.ranks)} written to {out}'
        ))

    def report(self, cfg, metrics):
        self.stdout.write(f'{cfg.display_label}:')
        for m in metrics:
            ratio = '-' if m.solved_ratio is None else f'{m.solved_ratio:.3f}'
            shots = '-' if m.avg_shots is None else f'{m.avg_shots:.3f}'
            factor = '-' if m.avg_approx_factor is None else f'{m.avg_approx_factor:.3f}'
            self.stdout.write(
                f'  rank {m.rank:3d}: valid {m.valid_count:3d}  solved {m.solved_count:3d}  '
                f'ratio {ratio}  avg shots {shots}  avg approx factor {factor}'
            )
