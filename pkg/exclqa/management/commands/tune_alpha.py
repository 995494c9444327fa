"""Binary-search the inverse-penalty prefactor."""
from pathlib import Path

from django.core.management.base import CommandError

from exclqa import bench, utils
from exclqa.ising import IsingHamiltonian

from ._options import ExclqaCommand


class Command(ExclqaCommand):
    help = 'Find alpha by log-scale binary search on trial shots.'
    uses_config = True

    def add_command_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--instance', type=Path, help='basis JSON of an SVP instance')
        source.add_argument('--hamiltonian', type=Path, help='Hamiltonian JSON with ground energy 0')

    def run(self, **options):
        cfg = self.load_config(options)
        if cfg.effective_cost_kind != 'inverse':
            raise CommandError('tune-alpha needs the inverse penalty (method exclqa or metropolis)')
        if options['instance']:
            instance = bench.load_instance_file(options['instance'])
            seed = bench.derive_seed(cfg.seed, bench.TUNE_SALT, instance.rank)
            alpha = bench.tune_alpha(instance, cfg, seed=seed)
        else:
            h = IsingHamiltonian.from_dict(utils.read_json(options['hamiltonian']))
            metropolis = cfg.metropolis_config() if cfg.method == 'metropolis' else None
            bracket = bench.tune_alpha_hamiltonian(
                h, cfg.schedule(), cfg.tuning_shots, seed=cfg.seed, metropolis=metropolis,
            )
            self.stdout.write(f'bracket [{bracket.low:.6g}, {bracket.high:.6g}]')
            alpha = bracket.alpha
        self.stdout.write(self.style.SUCCESS(f'alpha = {alpha:.6g}'))
