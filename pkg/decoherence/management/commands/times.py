"""
Management command printing the five indicator times as CSV.

Always reports the dilation channel built from the parameter file; adds a
classical-noise row when --gamma and --lambda are given (rates in 1/s).
"""

import pandas as pd

from decoherence.channels import ClassicalNoiseChannel, DilationChannel, NoiseParams, kappa
from decoherence.indicators import IndicatorTimes, indicator_times
from decoherence.management.base import DecoherenceCommand
from decoherence.utils import validate_required_fields


class Command(DecoherenceCommand):
    help = 'Compute tau_dec, tau_p, tau_W, tau_V and tau_K for one cat amplitude'

    def add_arguments(self, parser):
        self.add_params_argument(parser)
        parser.add_argument('--alpha', type=float, help='Cat amplitude (overrides the parameter file)')
        parser.add_argument('--gamma', type=float, help='OU inverse memory time, 1/s')
        parser.add_argument('--lambda', dest='coupling', type=float, help='OU coupling, 1/s')
        self.add_output_argument(parser)

    def run(self, **options):
        params = self.load_params(options, alpha=options.get('alpha'))
        validate_required_fields(params.as_dict(), ['alpha'])
        alpha = params.alpha
        channels = [DilationChannel(kappa(params))]
        if options.get('gamma') is not None and options.get('coupling') is not None:
            noise = NoiseParams(coupling=options['coupling'], gamma=options['gamma'])
            channels.append(ClassicalNoiseChannel(noise))
        rows = [indicator_times(alpha, channel).as_row() for channel in channels]
        frame = pd.DataFrame(rows, columns=list(IndicatorTimes.COLUMNS))
        echo = dict(params.as_dict(), gamma=options.get('gamma'), coupling=options.get('coupling'))
        self.emit(frame, options, echo)
