"""
Shared options and error handling for the exclqa management commands.

Configuration is layered preset < --config file < flags, and every flag is
named after the configuration key it sets.
"""
from pathlib import Path

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from exclqa import utils
from exclqa.exceptions import ExclqaError
from exclqa.forms import build_config
from exclqa.presets import available_presets, load_preset

# (flag, config key, type, help)
CONFIG_FLAGS = [
    ('--method', 'method', str, 'exclqa, exclqa-alt or metropolis'),
    ('--profile', 'profile', str, 'lattice profile: desk or paper'),
    ('--q', 'q', int, 'q-ary modulus'),
    ('--d', 'd', int, 'lattice dimension'),
    ('--k-qary', 'k_qary', int, 'rank of the q I block'),
    ('--ranks', 'ranks', str, "sublattice ranks, e.g. '8-20' or '10,12'"),
    ('--k', 'k', int, 'bits per qudit (local dimension 2^k)'),
    ('--N', 'N', int, 'annealing steps / Metropolis iterations'),
    ('--gamma', 'gamma', float, 'final cost weight'),
    ('--beta', 'beta', float, 'schedule exponent'),
    ('--mu', 'mu', float, 'momentum'),
    ('--eta', 'eta', float, 'learning rate'),
    ('--f', 'f', float, 'initial weights are drawn from [-f, f]'),
    ('--M', 'M', str, "Gram rescaling: a number, 'norm' or 'norm/<divisor>'"),
    ('--alpha', 'alpha', float, 'inverse penalty prefactor'),
    ('--r-factor', 'r_factor', float, 'exp penalty height in units of gh^2'),
    ('--s', 's', float, 'exp penalty decay rate'),
    ('--cost-kind', 'cost_kind', str, 'ground, inverse or exp'),
    ('--max-shots', 'max_shots', int, 'shots per instance'),
    ('--instances-per-rank', 'instances_per_rank', int, 'instances generated per rank'),
    ('--iterations', 'iterations', int, 'Metropolis iterations (defaults to N)'),
    ('--temperature', 'temperature', float, 'Metropolis temperature'),
    ('--tuning-shots', 'tuning_shots', int, 'shots per trial alpha'),
    ('--enum-timeout', 'enum_timeout', float, 'enumeration budget in seconds'),
    ('--label', 'label', str, 'method label used in output columns'),
]

PROFILE_KEYS = ('q', 'd', 'k_qary')


def merge_layers(*layers):
    """Merge configuration dicts left to right; a later profile resets q, d, k_qary."""
    merged = {}
    for layer in layers:
        if layer.get('profile') is not None:
            for key in PROFILE_KEYS:
                merged.pop(key, None)
        merged.update({key: value for key, value in layer.items() if value is not None})
    return merged


class ExclqaCommand(BaseCommand):
    """Base class: converts domain and validation errors into CommandError."""

    uses_config = False

    def add_arguments(self, parser):
        if self.uses_config:
            self.add_config_arguments(parser)
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def add_config_arguments(self, parser):
        parser.add_argument('--preset', choices=available_presets(), help='named hyperparameter preset')
        parser.add_argument('--config', type=Path, help='JSON file with configuration keys')
        parser.add_argument('--seed', type=int, help='master seed (chosen and printed when omitted)')
        parser.add_argument('--tune', action='store_const', const=True, default=None,
                            help='binary-search alpha per rank before solving')
        for flag, dest, kind, help_text in CONFIG_FLAGS:
            parser.add_argument(flag, dest=dest, type=kind, default=None, help=help_text)

    def handle(self, *args, **options):
        try:
            self.run(**options)
        except ValidationError as exc:
            raise CommandError('invalid configuration: ' + '; '.join(exc.messages))
        except (ExclqaError, OSError, KeyError, ValueError) as exc:
            raise CommandError(str(exc))

    def run(self, **options):
        raise NotImplementedError

    def load_config(self, options):
        preset = load_preset(options['preset']) if options.get('preset') else {}
        from_file = utils.read_json(options['config']) if options.get('config') else {}
        flags = {dest: options.get(dest) for _, dest, _, _ in CONFIG_FLAGS}
        flags['seed'] = options.get('seed')
        flags['tune'] = options.get('tune')
        data = merge_layers(preset, from_file, flags)
        if data.get('seed') is None:
            data['seed'] = int(np.random.SeedSequence().entropy % 2**32)
            self.stdout.write(f'seed: {data["seed"]}')
        return build_config(data)

    def output_dir(self, options, name):
        out = options.get('out')
        return Path(out) if out else Path(settings.EXCLQA_DATA_DIR) / name

    def workers(self, options):
        value = options.get('workers')
        return settings.EXCLQA_WORKERS if value is None else value

    def check_not_input(self, out, *inputs):
        """Refuse to overwrite any input file."""
        target = Path(out).resolve()
        for path in inputs:
            if path is not None and Path(path).resolve() == target:
                raise CommandError(f'refusing to overwrite input file {path}')
