"""
App configuration for the decoherence application.

This app holds the numerics, the attenuation channels, the nonclassicality
indicators and the figure sweeps, plus the management commands exposing them.
"""

from django.apps import AppConfig


class DecoherenceConfig(AppConfig):
    """Configuration class for the decoherence app"""
    name = 'decoherence'
    verbose_name = 'Cat-state decoherence clocks'
