"""
Management command reproducing the classical/gravitational ratio maps as CSV.

Decade ranges start with a minus sign, so pass them with '=':
    python manage.py sweep_noise --gamma-decades=-8:-4 --lambda-decades=-8:-4
"""

from decoherence.experiments import INDICATORS, RateUnits, SweepSpec, sweep_noise
from decoherence.management.base import DecoherenceCommand
from decoherence.utils import get_setting, parse_decades


class Command(DecoherenceCommand):
    help = 'Ratio of classical-noise to gravitational decoherence times over a (gamma, lambda) grid'

    def add_arguments(self, parser):
        self.add_params_argument(parser)
        parser.add_argument('--gamma-decades', default='-8:-4', help='log10 range of gamma, e.g. -8:-4')
        parser.add_argument('--lambda-decades', default='-8:-4', help='log10 range of lambda, e.g. -8:-4')
        parser.add_argument('--points', type=int, default=61, help='Grid points per axis')
        parser.add_argument(
            '--rate-units',
            choices=[units.value for units in RateUnits],
            help='hertz: grid values are rates in 1/s; omega0: multiples of omega_0 (default: RATE_UNITS)',
        )
        parser.add_argument(
            '--indicators', default=','.join(INDICATORS),
            help='Comma-separated subset of ' + ','.join(INDICATORS),
        )
        parser.add_argument('--workers', type=int, help='Worker processes (default: SWEEP_WORKERS)')
        self.add_output_argument(parser)

    def run(self, **options):
        params = self.load_params(options)
        indicators = tuple(name.strip() for name in options['indicators'].split(',') if name.strip())
        spec = SweepSpec.for_noise(
            parse_decades(options['gamma_decades']),
            parse_decades(options['lambda_decades']),
            options['points'],
            params=params,
            indicators=indicators,
            rate_units=options.get('rate_units') or get_setting('RATE_UNITS'),
            workers=options.get('workers'),
        )
        frame = sweep_noise(spec)
        echo = dict(spec.echo(), gamma_decades=options['gamma_decades'],
                    lambda_decades=options['lambda_decades'], points=options['points'])
        self.emit(frame, options, echo)
