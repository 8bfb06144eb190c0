"""Exact combinatorics, F2 homological algebra, lattice reduction and Gibbons-Hawking numerics for surgery polygons."""

__version__ = "0.1.0"

__all__ = [
    "f2chain",
    "exactpolygon",
    "associahedron",
    "weightlattice",
    "instantonindex",
    "holonomy",
    "gibbonshawking",
    "cli",
]
