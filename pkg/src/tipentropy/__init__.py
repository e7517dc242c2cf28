"""Entropy and localization of two interacting particles on 1D nonuniform lattices."""

__version__ = "0.1.0"
