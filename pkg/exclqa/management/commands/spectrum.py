"""Print the exact spectrum of a small Hamiltonian."""
from pathlib import Path

from django.conf import settings

from exclqa import utils
from exclqa.ising import IsingHamiltonian
from exclqa.oracle import exact_spectrum

from ._options import ExclqaCommand


class Command(ExclqaCommand):
    help = 'Enumerate all 2^n levels of a Hamiltonian file, lowest first.'

    def add_command_arguments(self, parser):
        parser.add_argument('--hamiltonian', type=Path, required=True, help='Hamiltonian JSON')
        parser.add_argument('--top', type=int, default=None, help='print only the lowest levels')
        parser.add_argument('--out', type=Path, help='also write energy,config rows as CSV')

    def run(self, **options):
        if options['out']:
            self.check_not_input(options['out'], options['hamiltonian'])
        h = IsingHamiltonian.from_dict(utils.read_json(options['hamiltonian']))
        spectrum = exact_spectrum(h, settings.EXCLQA_SPECTRUM_MAX_N)
        count = len(spectrum) if options['top'] is None else min(options['top'], len(spectrum))
        entries = spectrum[:count]
        for entry in entries:
            spins = ' '.join('+1' if s > 0 else '-1' for s in entry.config)
            self.stdout.write(f'{entry.energy:.10g}\t{spins}')
        if options['out']:
            utils.write_csv(options['out'], ('energy', 'config'), [
                {'energy': e.energy, 'config': ' '.join(str(s) for s in e.config)} for e in entries
            ])
