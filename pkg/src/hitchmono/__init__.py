"""GF(2) monodromy matrices, orbit censuses and component counts built from Copeland's graph."""

__version__ = "0.1.0"
