"""Propagation models and Monte-Carlo coverage simulation for mmWave/THz links."""

__version__ = "0.1.0"
