"""
catclock: decoherence clocks for a Schrödinger cat under gravitational
time dilation and classical Ornstein-Uhlenbeck noise.
"""

__version__ = '1.0.0'
