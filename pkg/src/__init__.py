"""planecover - constrained unit-disk coverings of the plane.

This package builds, verifies and measures coverings of the plane by unit
disks: layered sequence coverings, Voronoi-based coverage checks, largest
inscribed polygons and constrained lattice coverings.
"""

__version__ = "0.1.0"
