"""Torsion in quotients of the free ring by commutator ideals."""

__version__ = "0.1.0"
