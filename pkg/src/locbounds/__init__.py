"""Locality bounds for gapped ground states of lattice systems."""
__version__ = "0.1.0"
