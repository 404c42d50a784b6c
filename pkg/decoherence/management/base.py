"""
Shared plumbing for the decoherence management commands: parameter loading,
CSV output with a header echo, and exit codes (2 bad input, 3 solver failure).
"""
import logging
from contextlib import contextmanager

from django.core.management.base import BaseCommand, CommandError

from decoherence.channels import PhysicalParams
from decoherence.exceptions import DecoherenceError
from decoherence.utils import exit_code_for, format_error_message, log_error, write_frame

logger = logging.getLogger(__name__)


class DecoherenceCommand(BaseCommand):
    """Base class: subclasses implement ``run(**options)`` instead of ``handle``"""

    def add_params_argument(self, parser, required=False):
        parser.add_argument(
            '--params',
            required=required,
            help='Flat key=value parameter file (snake-case PhysicalParams fields, SI units)',
        )

    def add_output_argument(self, parser):
        parser.add_argument(
            '--out',
            help='Write the CSV here instead of stdout',
        )

    def load_params(self, options, **overrides):
        path = options.get('params')
        params = PhysicalParams.from_file(path) if path else PhysicalParams.trapped_ion_defaults()
        overrides = {key: value for key, value in overrides.items() if value is not None}
        return params.replace(**overrides) if overrides else params

    @contextmanager
    def output(self, options):
        path = options.get('out')
        if not path:
            yield self.stdout
            return
        with open(path, 'w', encoding='utf-8', newline='') as stream:
            yield stream
        self.stderr.write(self.style.SUCCESS(f'Wrote {path}'))

    def emit(self, frame, options, echo, float_format='%.12g'):
        with self.output(options) as stream:
            write_frame(frame, stream, echo, float_format=float_format)

    def handle(self, *args, **options):
        try:
            self.run(**options)
        except DecoherenceError as error:
            log_error(error, {'command': self.__class__.__module__.rsplit('.', 1)[-1]})
            raise CommandError(format_error_message(error), returncode=exit_code_for(error)) from error

    def run(self, **options):
        raise NotImplementedError('Subclasses of DecoherenceCommand must provide run()')
