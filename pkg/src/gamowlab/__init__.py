"""Resonance (Gamow) states of a solvable model and the competing definitions of their mean energy."""

__version__ = "0.1.0"
