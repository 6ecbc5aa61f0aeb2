"""Planar lattices as unit-disk coverings.

A lattice covers the plane with unit disks iff its covering radius is at
most 1; its covering density is then π/det. The constrained problem asks
for the sparsest covering lattice in which every disk holds another center,
i.e. whose shortest vector has length at most 1.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from src.config import Config
from src.geometry_core import ORIGIN, ConvexPolygon, Point, polygon_circumradius
from src.voronoi_partition import build_partition

logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)
DEGENERATE_DET = 1e-12
COVERING_SLACK = 1e-9

Vector = tuple[float, float]


@dataclass(frozen=True)
class Lattice:
    """Lattice {a·v1 + b·v2 : a, b integers} given by an ordered basis."""

    v1: Vector
    v2: Vector

    def __post_init__(self):
        det = self.v1[0] * self.v2[1] - self.v1[1] * self.v2[0]
        if not math.isfinite(det) or abs(det) <= DEGENERATE_DET:
            raise ValueError(f"Degenerate lattice basis {self.v1}, {self.v2}")

    def matrix(self) -> np.ndarray:
        """Basis vectors as columns."""
        return np.array([[self.v1[0], self.v2[0]], [self.v1[1], self.v2[1]]], dtype=float)

    def point(self, a: int, b: int) -> Point:
        return Point(a * self.v1[0] + b * self.v2[0], a * self.v1[1] + b * self.v2[1])


def lattice_det(lattice: Lattice) -> float:
    """Absolute determinant of the basis matrix (area of a fundamental cell)."""
    return abs(lattice.v1[0] * lattice.v2[1] - lattice.v1[1] * lattice.v2[0])


def _norm2(v: Vector) -> float:
    return v[0] * v[0] + v[1] * v[1]


def reduce_basis(lattice: Lattice) -> Lattice:
    """Gauss–Lagrange reduction: |v1| ≤ |v2| and |v1·v2| ≤ |v1|²/2."""
    a, b = lattice.v1, lattice.v2
    if _norm2(a) > _norm2(b):
        a, b = b, a
    while True:
        mu = round((a[0] * b[0] + a[1] * b[1]) / _norm2(a))
        b = (b[0] - mu * a[0], b[1] - mu * a[1])
        if _norm2(b) >= _norm2(a):
            return Lattice(a, b)
        a, b = b, a


def _ring_vectors(lattice: Lattice, reach: int = 2) -> list[Point]:
    reduced = reduce_basis(lattice)
    return [
        reduced.point(a, b)
        for a in range(-reach, reach + 1)
        for b in range(-reach, reach + 1)
        if (a, b) != (0, 0)
    ]


def shortest_vector(lattice: Lattice) -> Vector:
    """A nonzero lattice vector of minimal length.

    Among equally short vectors the lexicographically largest is returned,
    so the optimal lattice yields (1, 0).
    """
    ring = _ring_vectors(lattice)
    shortest = min(p.norm() for p in ring)
    ties = [p.as_tuple() for p in ring if p.norm() <= shortest + 1e-12]
    return max(ties)


def voronoi_cell(lattice: Lattice) -> ConvexPolygon:
    """Voronoi cell of the origin, cut from a box by the ≤ 2-ring of neighbours."""
    reduced = reduce_basis(lattice)
    half = math.hypot(*reduced.v1) + math.hypot(*reduced.v2)
    box = ConvexPolygon.from_coords([(-half, -half), (half, -half), (half, half), (-half, half)])
    partition = build_partition(box, [ORIGIN] + _ring_vectors(lattice))
    return partition.cells[0]


def covering_radius(lattice: Lattice) -> float:
    """Largest distance from the origin to a vertex of its Voronoi cell."""
    return polygon_circumradius(voronoi_cell(lattice), ORIGIN)


def two_center_constraint(lattice: Lattice) -> bool:
    """Whether each unit disk at a lattice point holds at least two other centers.

    By central symmetry ±v are both inside once the shortest v has length ≤ 1.
    """
    return math.hypot(*shortest_vector(lattice)) <= 1.0 + COVERING_SLACK


def is_covering(lattice: Lattice) -> bool:
    return covering_radius(lattice) <= 1.0 + COVERING_SLACK


def lattice_density(lattice: Lattice) -> float:
    """Covering density π/det of a covering lattice.

    Raises:
        ValueError: If unit disks at the lattice points do not cover the plane
    """
    radius = covering_radius(lattice)
    if radius > 1.0 + COVERING_SLACK:
        raise ValueError(f"Lattice is not a unit-disk covering (covering radius {radius:.12g})")
    return math.pi / lattice_det(lattice)


def optimal_lattice() -> Lattice:
    """Sparsest covering lattice under the two-center constraint."""
    return Lattice((1.0, 0.0), (0.5, 1.0 + SQRT3 / 2.0))


def kershner_lattice() -> Lattice:
    """Hexagonal lattice of the thinnest unconstrained unit-disk covering."""
    return Lattice((SQRT3, 0.0), (SQRT3 / 2.0, 1.5))


def determinant_envelope(alpha: float) -> float:
    """Largest admissible determinant 2α(√(1−α²)+1) for v1 = (2α, 0).

    Raises:
        ValueError: Unless 0 < α ≤ 1/2
    """
    if not 0.0 < alpha <= 0.5:
        raise ValueError(f"alpha must lie in (0, 1/2], got {alpha}")
    return 2.0 * alpha * (math.sqrt(1.0 - alpha * alpha) + 1.0)


def lattice_points(lattice: Lattice, radius: float) -> np.ndarray:
    """All lattice points of norm at most `radius`, as an (n, 2) array.

    Raises:
        ValueError: If radius is negative
    """
    if radius < 0:
        raise ValueError(f"Radius must be non-negative, got {radius}")
    matrix = reduce_basis(lattice).matrix()
    inverse = np.linalg.inv(matrix)
    bounds = np.ceil(radius * np.hypot(inverse[:, 0], inverse[:, 1])).astype(int)
    a, b = np.meshgrid(
        np.arange(-bounds[0], bounds[0] + 1), np.arange(-bounds[1], bounds[1] + 1), indexing="ij"
    )
    coefficients = np.stack([a.ravel(), b.ravel()])
    points = (matrix @ coefficients).T
    return points[np.hypot(points[:, 0], points[:, 1]) <= radius + COVERING_SLACK]


def _covering_radii(v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    """Covering radii of many lattices at once.

    After Gauss reduction with v1·v2 ≥ 0 the triangle (0, v1, v2) has no
    obtuse angle and its circumcircle passes through a Voronoi vertex, so
    the covering radius is that triangle's circumradius.
    """
    a, b = v1.copy(), v2.copy()
    for _ in range(64):
        swap = np.sum(b * b, axis=1) < np.sum(a * a, axis=1)
        a, b = np.where(swap[:, None], b, a), np.where(swap[:, None], a, b)
        mu = np.round(np.sum(a * b, axis=1) / np.sum(a * a, axis=1))
        if not np.any(mu):
            break
        b = b - mu[:, None] * a
    b = np.where((np.sum(a * b, axis=1) < 0)[:, None], -b, b)

    cross = np.abs(a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0])
    lengths = np.hypot(a[:, 0], a[:, 1]) * np.hypot(b[:, 0], b[:, 1])
    side = np.hypot(a[:, 0] - b[:, 0], a[:, 1] - b[:, 1])
    return lengths * side / (2.0 * cross)


def _max_height(alpha: np.ndarray, beta1: np.ndarray, iterations: int = 60) -> np.ndarray:
    """Largest β2 keeping the lattice (2α, 0), (β1, β2) a covering.

    Raising β2 stretches the lattice vertically, which never shrinks the
    covering radius, so the feasible β2 form an interval and bisection applies.
    """
    low = np.full_like(alpha, 1e-9)
    high = np.full_like(alpha, 2.5)
    v1 = np.column_stack([2.0 * alpha, np.zeros_like(alpha)])
    for _ in range(iterations):
        mid = (low + high) / 2.0
        feasible = _covering_radii(v1, np.column_stack([beta1, mid])) <= 1.0
        low = np.where(feasible, mid, low)
        high = np.where(feasible, high, mid)
    return low


def _constrained_det(params: np.ndarray) -> float:
    alpha = float(np.clip(params[0], 1e-6, 0.5))
    fraction = float(np.clip(params[1], 0.0, 1.0))
    height = _max_height(np.array([alpha]), np.array([fraction * alpha]))[0]
    return 2.0 * alpha * height


def optimize_constrained_lattice(grid_resolution: Optional[int] = None) -> tuple[Lattice, float]:
    """Search the reduced basis domain for the largest-determinant covering lattice.

    The domain is v1 = (2α, 0) with 0 < α ≤ 1/2 and v2 = (β1, β2) with
    0 ≤ β1 ≤ α and β2 > 0; |v1| ≤ 1 keeps the two-center constraint. A grid
    over (α, β1/α) with the tallest feasible β2 per node is followed by a
    Nelder–Mead polish.

    Args:
        grid_resolution: Grid nodes per parameter (default Config.LATTICE_GRID_RESOLUTION)

    Returns:
        The best lattice found and its determinant

    Raises:
        ValueError: If grid_resolution < 100
    """
    resolution = Config.LATTICE_GRID_RESOLUTION if grid_resolution is None else grid_resolution
    if resolution < 100:
        raise ValueError(f"Grid resolution must be at least 100, got {resolution}")

    alphas = np.linspace(0.5 / resolution, 0.5, resolution)
    fractions = np.linspace(0.0, 1.0, resolution)
    alpha, fraction = (g.ravel() for g in np.meshgrid(alphas, fractions, indexing="ij"))
    height = _max_height(alpha, fraction * alpha)
    det = 2.0 * alpha * height

    # max by det, ties by lexicographic basis
    order = np.lexsort((-height, -(fraction * alpha), -2.0 * alpha, -det))
    start = np.array([alpha[order[0]], fraction[order[0]]])
    logger.debug(f"Grid optimum det={det[order[0]]:.9f} at alpha={start[0]:.6f}")

    result = minimize(
        lambda p: -_constrained_det(p),
        start,
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": Config.ORACLE_MAX_ITER},
    )
    best = start if -result.fun < det[order[0]] else result.x
    best_alpha = float(np.clip(best[0], 1e-6, 0.5))
    best_beta1 = float(np.clip(best[1], 0.0, 1.0)) * best_alpha
    best_height = float(_max_height(np.array([best_alpha]), np.array([best_beta1]))[0])

    lattice = Lattice((2.0 * best_alpha, 0.0), (best_beta1, best_height))
    value = lattice_det(lattice)
    logger.info(
        f"Constrained lattice optimum: det={value:.9f}, v1={lattice.v1}, v2={lattice.v2}"
    )
    return lattice, value
