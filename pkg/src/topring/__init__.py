"""Exact structure theory for finite algebras, module towers, and matrix topologies."""

from topring.fields import GF, FiniteField

__all__ = ["GF", "FiniteField"]

__version__ = "0.1.0"
