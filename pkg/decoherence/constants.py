"""
Physical constants (CODATA 2018 through scipy.constants) and fixed defaults.
"""
from math import pi

from scipy import constants as _codata

HBAR = _codata.hbar
SPEED_OF_LIGHT = _codata.c
BOLTZMANN = _codata.k
NEWTON_G = _codata.G

# Standard surface gravity used throughout the dilation model.
GRAV_ACCEL = 9.81

# Trapped-ion trap frequency, omega_0 / 2pi = 10 MHz.
OMEGA0 = 2 * pi * 1e7

EARTH_MASS = 5.972e24
EARTH_RADIUS = 6.371e6
