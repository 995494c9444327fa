"""Encode a basis or Gram matrix as an Ising Hamiltonian file."""
from pathlib import Path

import numpy as np
from django.core.management.base import CommandError

from exclqa import utils
from exclqa.lattice import Basis, gram
from exclqa.svp_encode import QuditEncoding, build_svp_hamiltonian, resolve_rescale

from ._options import ExclqaCommand


class Command(ExclqaCommand):
    help = 'Write the Ising Hamiltonian whose first excited state is the shortest vector.'

    def add_command_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--basis', type=Path, help='basis JSON ({"rows": [...]})')
        source.add_argument('--gram', type=Path, help='Gram matrix JSON ({"gram": [[...]]})')
        parser.add_argument('--k', type=int, default=1, help='bits per qudit')
        parser.add_argument('--M', default='1', help="rescaling: a number, 'norm' or 'norm/<divisor>'")
        parser.add_argument('--out', type=Path, required=True, help='Hamiltonian JSON')

    def run(self, **options):
        self.check_not_input(options['out'], options['basis'], options['gram'])
        if options['basis']:
            exact = gram(Basis.from_dict(utils.read_json(options['basis']))).tolist()
        else:
            data = utils.read_json(options['gram'])
            if 'gram' not in data:
                raise CommandError("Gram JSON needs a 'gram' key")
            exact = data['gram']
        g = np.array(exact, dtype=float)
        rescale = resolve_rescale(options['M'], g)
        enc = QuditEncoding(g.shape[0], options['k'], rescale)
        h = build_svp_hamiltonian(g, enc)
        utils.write_json(options['out'], {
            'gram': exact, 'k': enc.k, 'M': rescale, 'spin_count': enc.spin_count, **h.to_dict(),
        })
        self.stdout.write(f'{h.n} spins, constant {h.constant:.6g}, M = {rescale:.6g}')
        self.stdout.write(self.style.SUCCESS(f'Hamiltonian written to {options["out"]}'))
