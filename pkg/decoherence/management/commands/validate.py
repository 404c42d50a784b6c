"""
Management command comparing the Fock-basis master equation with the
closed-form dilation channel at one time.
"""
import pandas as pd

from decoherence.channels import DampingGeometry
from decoherence.fock_oracle import ValidationRecord, default_cutoff, run_validation
from decoherence.management.base import DecoherenceCommand


class Command(DecoherenceCommand):
    help = 'Trace distance between Fock-integrated and chi-reconstructed damped cats'

    def add_arguments(self, parser):
        parser.add_argument('--alpha', type=float, required=True, help='Cat amplitude')
        parser.add_argument('--kappa', type=float, required=True, help='Dilation rate, 1/s^2')
        parser.add_argument('--t', type=float, required=True, help='Evolution time, s')
        parser.add_argument('--cutoff', type=int, help='Fock cutoff (default: alpha^2 + 8 alpha + 20)')
        parser.add_argument(
            '--geometry', choices=[geometry.value for geometry in DampingGeometry],
            default=DampingGeometry.ISOTROPIC.value, help='Damping geometry',
        )
        self.add_output_argument(parser)

    def run(self, **options):
        alpha = options['alpha']
        cutoff = options.get('cutoff') or default_cutoff(alpha)
        record = run_validation(
            alpha, options['kappa'], options['t'], cutoff,
            geometry=DampingGeometry(options['geometry']),
        )
        frame = pd.DataFrame([vars(record)], columns=list(ValidationRecord.COLUMNS))
        echo = {key: options.get(key) for key in ('alpha', 'kappa', 't', 'geometry')}
        echo['cutoff'] = cutoff
        self.emit(frame, options, echo)
