"""Layered dodecagonal sequence covering.

Layer j places 12j unit disks at unit spacing along the boundary of the
regular dodecagon of side j; layer 0 is the disk at the origin. Layers are
traversed counterclockwise and joined by short jump paths, so that every
center lies in the previous disk and the chain never turns sharper than
2π/3.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from src.config import Config
from src.geometry_core import ConvexPolygon, Point, regular_polygon
from src.inscribed_regions import a_star, a_star_interp
from src.voronoi_partition import build_partition, covers, deduplicate, proper_vertex_counts

logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)
MIN_TURN_ANGLE = 2.0 * math.pi / 3.0
ANGLE_SLACK = 1e-9
JUMP_TAG = "jump"

# layers up to this index may use a two-segment jump
SMALL_LAYER_LIMIT = 4

# strict margin kept below the π/3 direction-change allowance when planning
_TURN_LIMIT = math.pi / 3.0 - 1e-7
_DOGLEG_GRID = np.deg2rad(np.arange(-60, 61))


class ChainConstructionError(RuntimeError):
    """No admissible jump path between two consecutive layers."""


def circumradius(j: int) -> float:
    """Circumradius (1+√3)j/√2 of the layer-j dodecagon."""
    return (1.0 + SQRT3) * j / math.sqrt(2.0)


def apothem(j: int) -> float:
    """Inradius (1+√3/2)j of the layer-j dodecagon."""
    return (1.0 + SQRT3 / 2.0) * j


def dodecagon(j: int) -> ConvexPolygon:
    """Regular dodecagon of side j with vertices at polar angles πi/6.

    Raises:
        ValueError: If j < 1
    """
    if j < 1:
        raise ValueError(f"Dodecagon index must be at least 1, got {j}")
    return regular_polygon(12, circumradius(j))


def _layer_array(j: int) -> np.ndarray:
    if j < 0:
        raise ValueError(f"Layer index must be non-negative, got {j}")
    if j == 0:
        return np.zeros((1, 2))
    angles = np.pi * np.arange(13) / 6.0
    vertices = circumradius(j) * np.column_stack([np.cos(angles), np.sin(angles)])
    steps = np.arange(j) / j
    starts = np.repeat(vertices[:-1], j, axis=0)
    ends = np.repeat(vertices[1:], j, axis=0)
    fractions = np.tile(steps, 12)[:, None]
    return starts + fractions * (ends - starts)


def layer(j: int) -> list[Point]:
    """Centers of layer j, counterclockwise from polar angle 0.

    Raises:
        ValueError: If j < 0
    """
    return [Point(float(x), float(y)) for x, y in _layer_array(j)]


def _wrap(angle: np.ndarray) -> np.ndarray:
    return (angle + np.pi) % (2.0 * np.pi) - np.pi


def _heading(vector: np.ndarray) -> np.ndarray:
    return np.arctan2(vector[..., 1], vector[..., 0])


@dataclass(frozen=True)
class LayerPlan:
    """How the chain enters layer j: entry index into layer(j) and the jump disks."""

    j: int
    entry: int
    jump: tuple[Point, ...]
    kind: str


def _segment_points(start: np.ndarray, direction: np.ndarray, length: float) -> list[np.ndarray]:
    pieces = max(1, math.ceil(length - 1e-12))
    return [start + direction * (length * t / pieces) for t in range(1, pieces)]


def _straight_jump(
    exit_point: np.ndarray,
    heading_in: Optional[float],
    candidates: np.ndarray,
    headings_out: np.ndarray,
    limit: int,
) -> Optional[tuple[int, list[np.ndarray]]]:
    delta = candidates - exit_point
    distance = np.hypot(delta[:, 0], delta[:, 1])
    heading = _heading(delta)
    change_out = np.abs(_wrap(headings_out - heading))
    change_in = np.zeros_like(heading) if heading_in is None else np.abs(_wrap(heading - heading_in))
    count = np.ceil(distance - 1e-12) - 1
    valid = (change_out <= _TURN_LIMIT) & (change_in <= _TURN_LIMIT) & (count <= limit)
    if not np.any(valid):
        return None

    worst = np.maximum(change_out, change_in)
    order = np.lexsort((np.arange(len(candidates)), worst, count))
    best = int(next(k for k in order if valid[k]))
    direction = delta[best] / distance[best]
    return best, _segment_points(exit_point, direction, float(distance[best]))


def _dogleg_jump(
    exit_point: np.ndarray,
    heading_in: Optional[float],
    candidates: np.ndarray,
    headings_out: np.ndarray,
    limit: int,
) -> Optional[tuple[int, list[np.ndarray]]]:
    """Two straight segments meeting at a single bend.

    The second segment leaves the bend within π/3 of the entry point's
    travel direction; the first is within π/3 of the second.
    """
    p, q = np.meshgrid(_DOGLEG_GRID, _DOGLEG_GRID, indexing="ij")
    best: Optional[tuple[float, float, int]] = None
    best_path: Optional[tuple[int, list[np.ndarray]]] = None

    for k, target in enumerate(candidates):
        second = headings_out[k] + p
        first = second + q
        u1 = np.stack([np.cos(first), np.sin(first)], axis=-1)
        u2 = np.stack([np.cos(second), np.sin(second)], axis=-1)
        delta = target - exit_point
        det = u1[..., 0] * u2[..., 1] - u1[..., 1] * u2[..., 0]
        safe = np.where(np.abs(det) > 1e-9, det, np.nan)
        a = (delta[0] * u2[..., 1] - delta[1] * u2[..., 0]) / safe
        b = (u1[..., 0] * delta[1] - u1[..., 1] * delta[0]) / safe

        change_in = np.zeros_like(first) if heading_in is None else np.abs(_wrap(first - heading_in))
        worst = np.maximum(np.maximum(np.abs(p), np.abs(q)), change_in)
        with np.errstate(invalid="ignore"):
            count = np.ceil(a - 1e-12) + np.ceil(b - 1e-12) - 1
            valid = (a > 1e-9) & (b > 1e-9) & (worst <= _TURN_LIMIT) & (count <= limit)
        if not np.any(valid):
            continue

        score = np.where(valid, count * 10.0 + worst, np.inf)
        flat = int(np.argmin(score))
        index = np.unravel_index(flat, score.shape)
        key = (float(count[index]), float(worst[index]), k)
        if best is None or key < best:
            best = key
            bend = exit_point + u1[index] * a[index]
            path = _segment_points(exit_point, u1[index], float(a[index]))
            path.append(bend)
            path.extend(_segment_points(bend, u2[index], float(b[index])))
            best_path = (k, path)

    return best_path


@lru_cache(maxsize=8)
def _layer_plans(K: int) -> tuple[LayerPlan, ...]:
    plans: list[LayerPlan] = []
    exit_point = np.zeros(2)
    heading_in: Optional[float] = None

    for j in range(1, K + 1):
        points = _layer_array(j)
        headings_out = _heading(np.roll(points, -1, axis=0) - points)

        kind = "straight"
        found = _straight_jump(exit_point, heading_in, points, headings_out, Config.JUMP_MAX_POINTS)
        if found is None and j <= SMALL_LAYER_LIMIT:
            kind = "dogleg"
            found = _dogleg_jump(
                exit_point, heading_in, points, headings_out, Config.JUMP_FALLBACK_MAX_POINTS
            )
        if found is None:
            raise ChainConstructionError(f"No admissible jump from layer {j - 1} to layer {j}")

        entry, path = found
        plans.append(
            LayerPlan(
                j=j,
                entry=entry,
                jump=tuple(Point(float(x), float(y)) for x, y in path),
                kind=kind,
            )
        )
        logger.debug(f"Layer {j}: {kind} jump with {len(path)} disks into index {entry}")

        # the layer is left at the point just before its entry
        last = (entry - 1) % len(points)
        exit_point = points[last]
        heading_in = float(_heading(points[last] - points[last - 1]))

    return tuple(plans)


def jump_path(j: int) -> list[Point]:
    """Disks bridging the last center of layer j−1 to the first center of layer j.

    Raises:
        ValueError: If j < 1
        ChainConstructionError: If no admissible path exists
    """
    if j < 1:
        raise ValueError(f"Jumps start at layer 1, got {j}")
    return list(_layer_plans(j)[-1].jump)


@dataclass(frozen=True)
class Chain:
    """Ordered unit-disk centers with a layer tag (or "jump") per center."""

    centers: tuple[Point, ...]
    tags: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.tags and len(self.tags) != len(self.centers):
            raise ValueError(f"Got {len(self.tags)} tags for {len(self.centers)} centers")

    def __len__(self) -> int:
        return len(self.centers)

    def as_array(self) -> np.ndarray:
        return np.array([p.as_tuple() for p in self.centers], dtype=float).reshape(-1, 2)

    @property
    def layers(self) -> int:
        """Highest layer index present in the tags (0 when untagged)."""
        return max((int(t) for t in self.tags if t != JUMP_TAG), default=0)


def build_chain(K: int) -> Chain:
    """Layers 0..K joined by jump paths, each layer entered at its planned index.

    Raises:
        ValueError: If K < 1
        ChainConstructionError: If a jump cannot be planned
    """
    if K < 1:
        raise ValueError(f"Chain needs at least one layer, got {K}")

    centers: list[Point] = [Point(0.0, 0.0)]
    tags: list[str] = ["0"]
    for plan in _layer_plans(K):
        centers.extend(plan.jump)
        tags.extend([JUMP_TAG] * len(plan.jump))
        ring = layer(plan.j)
        ordered = ring[plan.entry :] + ring[: plan.entry]
        centers.extend(ordered)
        tags.extend([str(plan.j)] * len(ordered))

    logger.info(f"Built chain with {K} layers and {len(centers)} disks")
    return Chain(centers=tuple(centers), tags=tuple(tags))


def chain_for_square(lam: float) -> Chain:
    """Smallest layered chain whose dodecagon holds [−λ, λ]² with a unit margin.

    Raises:
        ValueError: If λ <= 0
    """
    if lam <= 0:
        raise ValueError(f"Square half-side must be positive, got {lam}")
    K = math.ceil((lam * math.sqrt(2.0) + 1.0) / apothem(1))
    return build_chain(K)


def count_bound(K: int, c: int = 4) -> int:
    """Upper bound 6K² + (c+6)K + c + 1 on the disks of build_chain(K)."""
    return 6 * K * K + (c + 6) * K + c + 1


@dataclass(frozen=True)
class ChainReport:
    min_gap_ok: bool
    gap_violations: tuple[int, ...]
    min_angle: float
    worst_angle_index: int
    sharp_turns: tuple[int, ...]
    covered_up_to_layer: Optional[int]
    disk_count: int
    duplicate_count: int

    @property
    def angles_ok(self) -> bool:
        return self.min_angle >= MIN_TURN_ANGLE - ANGLE_SLACK

    @property
    def ok(self) -> bool:
        return self.min_gap_ok and self.angles_ok


def _covered_layers(centers: Sequence[Point]) -> int:
    """Largest k such that the disks cover dodecagon(k) (0 if not even Π_1).

    Coverage of nested dodecagons is treated as monotone in k, so the
    search bisects between 0 and the largest k the centers could reach.
    """
    unique = deduplicate(centers)
    coords = np.array([p.as_tuple() for p in unique])
    reach = float(np.max(np.hypot(coords[:, 0], coords[:, 1]))) + 1.0
    high = int(reach / circumradius(1))

    def covered(k: int) -> bool:
        limit = circumradius(k) + 1.0 + Config.EPS
        near = [p for p, (x, y) in zip(unique, coords) if math.hypot(x, y) <= limit]
        return bool(near) and covers(dodecagon(k), near)

    low = 0
    while low < high:
        mid = (low + high + 1) // 2
        if covered(mid):
            low = mid
        else:
            high = mid - 1
    return low


def verify_chain(chain: Chain, check_coverage: bool = True) -> ChainReport:
    """Check the sequence-covering constraints of a chain.

    Never raises on bad data. Angles at centers with a coincident neighbour
    are undefined and skipped; an empty chain is reported as trivially valid.

    Args:
        chain: Chain to inspect
        check_coverage: Also find the largest covered dodecagon (slow for
            long chains)

    Returns:
        ChainReport with gap, angle, duplicate and coverage findings
    """
    coords = chain.as_array()
    n = len(coords)

    steps = np.diff(coords, axis=0)
    gaps = np.hypot(steps[:, 0], steps[:, 1]) if n > 1 else np.zeros(0)
    violations = tuple(int(i) + 1 for i in np.flatnonzero(gaps > 1.0 + Config.EPS))

    min_angle = math.pi
    worst = -1
    sharp: tuple[int, ...] = ()
    if n >= 3:
        back = coords[:-2] - coords[1:-1]
        ahead = coords[2:] - coords[1:-1]
        cross = np.abs(back[:, 0] * ahead[:, 1] - back[:, 1] * ahead[:, 0])
        dot = np.sum(back * ahead, axis=1)
        angles = np.arctan2(cross, dot)
        defined = (gaps[:-1] > Config.EPS) & (gaps[1:] > Config.EPS)
        angles = np.where(defined, angles, np.inf)
        if np.any(defined):
            k = int(np.argmin(angles))
            min_angle = float(angles[k])
            worst = k + 1
        sharp = tuple(int(i) + 1 for i in np.flatnonzero(angles < MIN_TURN_ANGLE - ANGLE_SLACK))

    duplicates = n - len(deduplicate(chain.centers)) if n else 0
    covered = _covered_layers(chain.centers) if check_coverage and n else None

    report = ChainReport(
        min_gap_ok=not violations,
        gap_violations=violations,
        min_angle=min_angle,
        worst_angle_index=worst,
        sharp_turns=sharp,
        covered_up_to_layer=covered,
        disk_count=n,
        duplicate_count=duplicates,
    )
    if not report.ok:
        logger.warning(
            f"Chain check failed: {len(violations)} gap violations, {len(sharp)} sharp turns"
        )
    return report


def crescent_area() -> float:
    """Area sin(2π/3) + π/3 of a unit disk minus a unit disk through its center."""
    return math.sin(2.0 * math.pi / 3.0) + math.pi / 3.0


def crude_lower_bound() -> float:
    """Density bound π / crescent_area() ≈ 1.64204."""
    return math.pi / crescent_area()


@dataclass(frozen=True)
class CellRow:
    index: int
    area: float
    vertices: int
    bound: float

    @property
    def ok(self) -> bool:
        return self.area <= self.bound + 1e-9


@dataclass(frozen=True)
class CellAudit:
    """Per-cell area bounds of a chain partition and the averaged inequality."""

    rows: tuple[CellRow, ...]
    total_area: float
    vertex_sum: int
    cell_count: int
    vertex_sum_ok: Optional[bool]
    averaged_bound: float

    @property
    def cells_ok(self) -> bool:
        return all(row.ok for row in self.rows)

    @property
    def averaged_ok(self) -> bool:
        return self.total_area <= self.averaged_bound + 1e-9

    @property
    def ok(self) -> bool:
        return self.cells_ok and self.averaged_ok and self.vertex_sum_ok is not False


def audit_cells(chain: Chain, boundary: ConvexPolygon) -> CellAudit:
    """Audit the Voronoi cells a chain induces on a covered polygon.

    Every interior chain disk with a non-empty cell must have cell area at
    most a*(ν) for its vertex count ν. The polygon's area is then bounded by
    n·a*(mean ν) + 2π over the n interior cells, the two end cells adding at
    most π each. The vertex sum Σν ≤ 6N is only checked for polygons with at
    most six vertices.

    Raises:
        ValueError: If the disks do not cover `boundary`
    """
    if not covers(boundary, list(chain.centers)):
        raise ValueError("Chain does not cover the boundary polygon")

    first_position: dict[Point, int] = {}
    for position, p in enumerate(chain.centers):
        first_position.setdefault(p, position)
    unique = deduplicate(chain.centers)
    partition = build_partition(boundary, unique)
    counts = proper_vertex_counts(partition)
    areas = partition.areas()
    last = len(chain) - 1

    rows = []
    for index, (seed, cell, nu) in enumerate(zip(unique, partition.cells, counts)):
        position = first_position.get(seed, 0)
        if cell.is_empty or position in (0, last):
            continue
        rows.append(CellRow(index=index, area=areas[index], vertices=nu, bound=a_star(nu)))

    non_empty = [nu for nu in counts if nu > 0]
    vertex_sum = sum(non_empty)
    vertex_sum_ok = vertex_sum <= 6 * len(non_empty) if len(boundary) <= 6 else None
    interior = [row.vertices for row in rows]
    averaged = len(interior) * a_star_interp(float(np.mean(interior))) if interior else 0.0

    audit = CellAudit(
        rows=tuple(rows),
        total_area=partition.total_area(),
        vertex_sum=vertex_sum,
        cell_count=len(non_empty),
        vertex_sum_ok=vertex_sum_ok,
        averaged_bound=averaged + 2.0 * math.pi,
    )
    logger.info(
        f"Audited {len(rows)} interior cells: cells_ok={audit.cells_ok}, averaged_ok={audit.averaged_ok}"
    )
    return audit
