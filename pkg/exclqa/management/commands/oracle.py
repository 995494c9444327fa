"""Certify the shortest vector of a basis."""
from pathlib import Path

from django.conf import settings

from exclqa import utils
from exclqa.lattice import Basis
from exclqa.oracle import brute_force_shortest, enumerate_shortest

from ._options import ExclqaCommand


class Command(ExclqaCommand):
    help = 'Compute lambda1^2 of a basis by exact enumeration.'

    def add_command_arguments(self, parser):
        parser.add_argument('--basis', type=Path, required=True, help='input basis JSON')
        parser.add_argument('--out', type=Path, help='oracle JSON (default: <basis>.oracle.json)')
        parser.add_argument('--timeout', type=float, default=None, help='enumeration budget in seconds')
        parser.add_argument('--k', type=int, default=None,
                            help='also brute-force the k-bit coefficient box')

    def run(self, **options):
        path = options['basis']
        out = options['out'] or path.with_name(path.stem + '.oracle.json')
        self.check_not_input(out, path)
        basis = Basis.from_dict(utils.read_json(path))
        timeout = options['timeout'] if options['timeout'] is not None else settings.EXCLQA_ENUM_TIMEOUT
        sv = enumerate_shortest(basis, timeout=timeout)
        record = {
            'lambda1_sq': sv.norm_sq,
            'x': list(sv.x),
            'v': list(sv.v),
            'minimizers': [list(m) for m in sv.minimizers],
        }
        self.stdout.write(f'lambda1^2 = {sv.norm_sq}  x = {list(sv.x)}')
        if options['k'] is not None:
            box = brute_force_shortest(basis, options['k'], settings.EXCLQA_BRUTE_FORCE_MAX_SPINS)
            record['box'] = {'k': options['k'], 'norm_sq': box.norm_sq, 'x': list(box.x)}
            inside = 'contains' if box.norm_sq == sv.norm_sq else 'misses'
            self.stdout.write(f'k={options["k"]} box {inside} a shortest vector (best {box.norm_sq})')
        utils.write_json(out, record)
        self.stdout.write(self.style.SUCCESS(f'oracle written to {out}'))
