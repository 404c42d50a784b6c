"""
Management command reproducing the indicator-times-versus-alpha figure as CSV.
"""

from decoherence.experiments import SweepSpec, sweep_alpha
from decoherence.management.base import DecoherenceCommand


class Command(DecoherenceCommand):
    help = 'Sweep the cat amplitude and report indicator times in units of tau_W'

    def add_arguments(self, parser):
        self.add_params_argument(parser)
        parser.add_argument('--from', dest='alpha_from', type=float, default=0.5, help='First alpha')
        parser.add_argument('--to', dest='alpha_to', type=float, default=4.0, help='Last alpha')
        parser.add_argument('--points', type=int, default=36, help='Number of alpha values')
        parser.add_argument('--workers', type=int, help='Worker processes (default: SWEEP_WORKERS)')
        self.add_output_argument(parser)

    def run(self, **options):
        params = self.load_params(options)
        spec = SweepSpec.for_alpha(
            options['alpha_from'], options['alpha_to'], options['points'],
            params=params, workers=options.get('workers'),
        )
        frame = sweep_alpha(spec)
        echo = dict(spec.echo(), alpha_from=options['alpha_from'], alpha_to=options['alpha_to'],
                    points=options['points'])
        self.emit(frame, options, echo)
