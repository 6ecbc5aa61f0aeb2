"""Voronoi partitions of a convex polygon seeded by unit-disk centers.

Each cell is the boundary polygon clipped by the bisector half-planes of
its seed against every other seed. When the unit disks at the seeds cover
the polygon, every cell lies inside its own disk, which gives an exact
coverage test: the farthest point of a cell from its seed is a cell vertex.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from src.config import Config
from src.geometry_core import (
    ConvexPolygon,
    HalfPlane,
    Point,
    bisector_halfplane,
    clip_halfplane,
    polygon_area,
    polygon_circumradius,
)

logger = logging.getLogger(__name__)

# cells thinner than this are replaced by the empty polygon
EMPTY_CELL_AREA = 1e-12


@dataclass(frozen=True)
class VoronoiPartition:
    """Cells of `boundary`, index-aligned with `seeds` (empty cells allowed)."""

    boundary: ConvexPolygon
    seeds: tuple[Point, ...]
    cells: tuple[ConvexPolygon, ...]

    def areas(self) -> list[float]:
        return [polygon_area(c) for c in self.cells]

    def total_area(self) -> float:
        return sum(self.areas())

    def non_empty(self) -> list[int]:
        return [i for i, c in enumerate(self.cells) if not c.is_empty]


def _as_array(points: Sequence[Point]) -> np.ndarray:
    return np.array([p.as_tuple() for p in points], dtype=float).reshape(-1, 2)


def _find_duplicates(coords: np.ndarray) -> set[tuple[int, int]]:
    return cKDTree(coords).query_pairs(r=Config.EPS)


def _build_cell(
    boundary: ConvexPolygon,
    seeds: Sequence[Point],
    coords: np.ndarray,
    tree: cKDTree,
    index: int,
    radius: float,
) -> ConvexPolygon:
    """Clip `boundary` against bisectors of neighbours in order of distance.

    A seed at distance d cannot cut a cell whose vertices all lie within d/2
    of its own seed, so the neighbour radius is widened until it exceeds
    twice the cell's circumradius.
    """
    seed = seeds[index]
    cell = boundary
    processed = {index}
    while True:
        nearby = [j for j in tree.query_ball_point(coords[index], radius) if j not in processed]
        nearby.sort(key=lambda j: seed.distance_to(seeds[j]))
        reach = polygon_circumradius(cell, seed)
        for j in nearby:
            if seed.distance_to(seeds[j]) > 2.0 * reach + Config.EPS:
                break
            processed.add(j)
            cell = clip_halfplane(cell, bisector_halfplane(seed, seeds[j]))
            if cell.is_empty:
                return cell
            reach = polygon_circumradius(cell, seed)
        if 2.0 * reach <= radius or len(processed) == len(seeds):
            return cell
        radius = 2.0 * reach * (1.0 + 1e-9)


def build_partition(
    boundary: ConvexPolygon,
    seeds: Sequence[Point],
    neighbor_radius: Optional[float] = None,
) -> VoronoiPartition:
    """Voronoi partition of a convex polygon.

    Args:
        boundary: Non-empty convex polygon being partitioned
        seeds: Pairwise distinct seed points (may lie outside the polygon)
        neighbor_radius: Initial neighbour query radius; defaults to
            Config.VORONOI_NEIGHBOR_RADIUS

    Returns:
        VoronoiPartition with one (possibly empty) cell per seed

    Raises:
        ValueError: On an empty boundary, no seeds, or duplicate seeds
    """
    if boundary.is_empty:
        raise ValueError("Cannot partition an empty polygon")
    if len(seeds) == 0:
        raise ValueError("At least one seed is required")

    coords = _as_array(seeds)
    duplicates = _find_duplicates(coords)
    if duplicates:
        i, j = sorted(duplicates)[0]
        raise ValueError(f"Duplicate seeds at indices {i} and {j}: {seeds[i]}")

    radius = Config.VORONOI_NEIGHBOR_RADIUS if neighbor_radius is None else neighbor_radius
    tree = cKDTree(coords)
    cells = []
    for i in range(len(seeds)):
        cell = _build_cell(boundary, seeds, coords, tree, i, radius)
        if not cell.is_empty and polygon_area(cell) < EMPTY_CELL_AREA:
            cell = ConvexPolygon()
        cells.append(cell)

    partition = VoronoiPartition(boundary=boundary, seeds=tuple(seeds), cells=tuple(cells))
    logger.debug(
        f"Partition built: {len(seeds)} seeds, {len(partition.non_empty())} non-empty cells"
    )
    return partition


def cells_inside_disks(partition: VoronoiPartition) -> bool:
    """Whether every non-empty cell lies inside the unit disk at its seed."""
    limit = 1.0 + Config.EPS
    return all(
        polygon_circumradius(cell, seed) <= limit
        for seed, cell in zip(partition.seeds, partition.cells)
        if not cell.is_empty
    )


def deduplicate(centers: Sequence[Point]) -> list[Point]:
    """Keep the first of every group of coincident centers, preserving order."""
    if not centers:
        return []
    coords = _as_array(centers)
    drop = {j for _, j in _find_duplicates(coords)}
    return [p for k, p in enumerate(centers) if k not in drop]


def covers(boundary: ConvexPolygon, centers: Sequence[Point]) -> bool:
    """Exact decision whether unit disks at `centers` cover `boundary`.

    Raises:
        ValueError: If no centers are given
    """
    if len(centers) == 0:
        raise ValueError("At least one center is required")
    partition = build_partition(boundary, deduplicate(centers))
    result = cells_inside_disks(partition)
    logger.debug(f"Coverage check over {len(partition.seeds)} disks: {result}")
    return result


def proper_vertex_counts(partition: VoronoiPartition) -> list[int]:
    """Proper vertex count of each cell (0 for empty cells)."""
    return [len(cell) for cell in partition.cells]


def sandwich_chords(prev: Point, cur: Point, nxt: Point) -> tuple[HalfPlane, HalfPlane]:
    """The two √3-chords of the disk at `cur` bounding its chain cell.

    Each chord is parallel to the common chord with a chain neighbour and
    lies on that neighbour's side of it, at distance 1/2 from `cur`. The
    half-planes returned contain `cur`.
    """
    planes = []
    for neighbour in (prev, nxt):
        direction = neighbour - cur
        length = direction.norm()
        if length == 0.0:
            raise ValueError(f"Chain neighbour coincides with {cur}")
        normal = (direction.x / length, direction.y / length)
        planes.append(HalfPlane(normal, normal[0] * cur.x + normal[1] * cur.y + 0.5))
    return planes[0], planes[1]


def cell_in_sandwich(cell: ConvexPolygon, prev: Point, cur: Point, nxt: Point) -> bool:
    """Whether every vertex of `cell` is on the seed side of both sandwich chords."""
    first, second = sandwich_chords(prev, cur, nxt)
    return all(first.contains(v) and second.contains(v) for v in cell.vertices)


def coverage_by_sampling(
    boundary: ConvexPolygon,
    centers: Sequence[Point],
    samples: int,
    rng: np.random.Generator,
) -> bool:
    """Monte-Carlo coverage check by uniform rejection sampling inside `boundary`.

    Sampling can miss an uncovered sliver but never reports a covered
    polygon as uncovered.
    """
    box = boundary.as_array()
    low, high = box.min(axis=0), box.max(axis=0)
    edges = np.roll(box, -1, axis=0) - box
    tree = cKDTree(_as_array(centers))
    accepted = 0
    while accepted < samples:
        batch = rng.uniform(low, high, size=(max(samples, 1024), 2))
        offsets = batch[:, None, :] - box[None, :, :]
        cross = edges[None, :, 0] * offsets[..., 1] - edges[None, :, 1] * offsets[..., 0]
        points = batch[np.all(cross >= 0.0, axis=1)][: samples - accepted]
        if len(points):
            distances, _ = tree.query(points)
            if np.any(distances > 1.0 + Config.EPS):
                return False
        accepted += len(points)
    return True


def max_cell_reach(partition: VoronoiPartition) -> float:
    """Largest seed-to-cell-vertex distance over the partition."""
    reaches = [
        polygon_circumradius(cell, seed)
        for seed, cell in zip(partition.seeds, partition.cells)
        if not cell.is_empty
    ]
    return max(reaches) if reaches else math.inf
