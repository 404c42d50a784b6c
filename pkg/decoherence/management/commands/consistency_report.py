"""
Management command checking the quoted dimensional numbers against the formulas.
"""
from decoherence.experiments import consistency_report
from decoherence.management.base import DecoherenceCommand


class Command(DecoherenceCommand):
    help = 'Recompute kappa, Delta E_0, tau_dec and related quantities and compare with the quoted values'

    def add_arguments(self, parser):
        self.add_params_argument(parser)
        self.add_output_argument(parser)

    def run(self, **options):
        params = self.load_params(options)
        frame = consistency_report(params)
        self.emit(frame, options, params.as_dict())
