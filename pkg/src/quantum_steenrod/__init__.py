"""Mod-2 classical and quantum Steenrod squares on (quantum) cohomology rings."""

__version__ = "0.1.0"
