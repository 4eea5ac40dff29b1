"""Quantum-simulated and classical clustering of vulnerability catalogs."""

__version__ = "0.1.0"
