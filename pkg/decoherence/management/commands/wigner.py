"""
Management command writing the damped cat's s-parametrized quasiprobability
on a square grid, as long-format CSV (re_beta, im_beta, value).
"""
import logging

from decoherence.channels import DampingGeometry
from decoherence.exceptions import ParameterError
from decoherence.management.base import DecoherenceCommand
from decoherence.phase_space import SYMMETRIC, PhaseGrid, SOrder, quasiprob, write_grid_csv
from decoherence.states import EvenCatState, wigner_closed_form

logger = logging.getLogger(__name__)


class Command(DecoherenceCommand):
    help = 'Evaluate W(beta, s) of the damped even cat on a grid'

    def add_arguments(self, parser):
        parser.add_argument('--alpha', type=float, required=True, help='Cat amplitude')
        parser.add_argument('--nu', type=float, default=0.0, help='Damping exponent nu')
        parser.add_argument('--grid', type=int, default=201, help='Points per axis')
        parser.add_argument('--s', type=float, default=0.0, help='Ordering parameter (0 = Wigner)')
        parser.add_argument(
            '--method', choices=['closed', 'quadrature'], default='closed',
            help='closed: analytic Wigner function (s = 0 only); quadrature: Fourier transform of chi',
        )
        parser.add_argument(
            '--geometry', choices=[geometry.value for geometry in DampingGeometry],
            default=DampingGeometry.ISOTROPIC.value, help='Damping geometry',
        )
        self.add_output_argument(parser)

    def run(self, **options):
        alpha, nu = options['alpha'], options['nu']
        geometry = DampingGeometry(options['geometry'])
        order = SOrder.coerce(options['s'])
        state = EvenCatState(alpha)
        grid = PhaseGrid.centered(alpha, nu, points=options['grid'])

        if options['method'] == 'closed':
            if order != SYMMETRIC:
                raise ParameterError('The closed-form method only covers the Wigner function (s = 0)')
            re, im = grid.mesh()
            grid.values = wigner_closed_form(state, nu, re, im, geometry).total
        else:
            quasiprob(state.characteristic(nu, geometry), order, grid)

        logger.info(f'Wigner grid alpha={alpha:g} nu={nu:g}: integral={grid.integral():.9f}')
        echo = {
            'alpha': alpha, 'nu': nu, 's': order.s, 'grid': options['grid'],
            'method': options['method'], 'geometry': geometry.value,
        }
        with self.output(options) as stream:
            write_grid_csv(grid, stream, echo)
