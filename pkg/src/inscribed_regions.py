"""Chord-and-arc regions of the unit disk and their largest inscribed polygons.

The region M is bounded by two √3-chords sharing an endpoint and the minor
arc joining their other endpoints; M'_θ is bounded by two non-crossing
√3-chords whose midpoint directions are θ apart and the two minor arcs
between them. Both have area √3/2 + π/3.

The module also carries the closed form a*(n) for the largest n-gon
inscribed in M, its piecewise-linear extension, a brute-force oracle that
searches inscribed n-gons numerically, and the concavity/Jensen checks that
lead to the density bound π / a*(6).
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from src.config import Config
from src.geometry_core import (
    ORIGIN,
    Chord,
    ConvexPolygon,
    HalfPlane,
    Point,
    circular_segment_area,
    polar,
)

logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)
TWO_PI_OVER_3 = 2.0 * math.pi / 3.0

# chords of length √3 sit at distance 1/2 from the center and subtend 2π/3
CHORD_HALF_ANGLE = math.pi / 3.0

REGION_M_AREA = SQRT3 / 2.0 + math.pi / 3.0


@dataclass(frozen=True)
class Arc:
    """Counterclockwise arc of the unit circle around `center`.

    Angles are in radians with start <= end <= start + 2π; a zero sweep is
    allowed and marks a degenerate arc between touching chords.
    """

    center: Point
    start_angle: float
    end_angle: float

    def __post_init__(self):
        sweep = self.end_angle - self.start_angle
        if sweep < -1e-12 or sweep > 2.0 * math.pi + 1e-12:
            raise ValueError(f"Arc sweep must lie in [0, 2π], got {sweep}")

    @property
    def sweep(self) -> float:
        return max(0.0, self.end_angle - self.start_angle)

    @property
    def start(self) -> Point:
        return polar(1.0, self.start_angle, self.center)

    @property
    def end(self) -> Point:
        return polar(1.0, self.end_angle, self.center)

    @property
    def length(self) -> float:
        return self.sweep


Piece = Union[Chord, Arc]


def _piece_start(piece: Piece) -> Point:
    return piece.endpoints[0] if isinstance(piece, Chord) else piece.start


def _piece_end(piece: Piece) -> Point:
    return piece.endpoints[1] if isinstance(piece, Chord) else piece.end


@dataclass(frozen=True)
class DiskRegion:
    """Convex part of a unit disk bounded by alternating chords and arcs (CCW)."""

    center: Point
    pieces: tuple[Piece, ...]

    def validate(self) -> list[str]:
        """Check that consecutive pieces connect end-to-start.

        Returns:
            List of violated invariants (empty if valid)
        """
        problems = []
        n = len(self.pieces)
        for i in range(n):
            gap = _piece_end(self.pieces[i]).distance_to(_piece_start(self.pieces[(i + 1) % n]))
            if gap > 1e-9:
                problems.append(f"piece {i} ends {gap:.3e} away from the start of piece {(i + 1) % n}")
        return problems

    def chords(self) -> list[Chord]:
        return [p for p in self.pieces if isinstance(p, Chord)]

    def arcs(self) -> list[Arc]:
        return [p for p in self.pieces if isinstance(p, Arc)]

    def corner_points(self) -> list[Point]:
        return [_piece_start(p) for p in self.pieces]


def _region_chord(center: Point, mid_angle: float) -> Chord:
    """√3-chord whose midpoint lies in direction `mid_angle`, traversed CCW."""
    start = polar(1.0, mid_angle - CHORD_HALF_ANGLE, center)
    end = polar(1.0, mid_angle + CHORD_HALF_ANGLE, center)
    normal = (math.cos(mid_angle), math.sin(mid_angle))
    carrier = HalfPlane(normal, normal[0] * center.x + normal[1] * center.y + 0.5)
    return Chord(endpoints=(start, end), carrier=carrier, center=center)


def region_M(center: Point = ORIGIN) -> DiskRegion:
    """The region M in canonical placement.

    Chords A0B0 and B'0A0 share A0 = (0, -1); B0 = (√3/2, 1/2) and
    B'0 = (-√3/2, 1/2) are joined by the minor arc of sweep 2π/3.
    """
    first = _region_chord(center, -math.pi / 6.0)
    arc = Arc(center, math.pi / 6.0, 5.0 * math.pi / 6.0)
    second = _region_chord(center, 7.0 * math.pi / 6.0)
    return DiskRegion(center=center, pieces=(first, arc, second))


def region_M_theta(theta: float, center: Point = ORIGIN) -> DiskRegion:
    """The region M'_θ, symmetric about the downward vertical through `center`.

    Args:
        theta: Angle between the chord midpoint directions, in [2π/3, π]

    Returns:
        Region bounded by two √3-chords and two minor arcs; at θ = 2π/3 the
        lower arc has zero sweep and the region coincides with region_M()

    Raises:
        ValueError: If theta is outside [2π/3, π] (the chords would cross)
    """
    if not (TWO_PI_OVER_3 - 1e-12 <= theta <= math.pi + 1e-12):
        raise ValueError(f"theta must lie in [2π/3, π], got {theta}")
    theta = min(max(theta, TWO_PI_OVER_3), math.pi)

    right = -math.pi / 2.0 + theta / 2.0
    left = 3.0 * math.pi / 2.0 - theta / 2.0
    first = _region_chord(center, right)
    upper = Arc(center, right + CHORD_HALF_ANGLE, left - CHORD_HALF_ANGLE)
    second = _region_chord(center, left)
    lower = Arc(center, left + CHORD_HALF_ANGLE, right - CHORD_HALF_ANGLE + 2.0 * math.pi)
    return DiskRegion(center=center, pieces=(first, upper, second, lower))


def unit_disk_region(center: Point = ORIGIN) -> DiskRegion:
    """The whole unit disk as a single full-circle arc."""
    return DiskRegion(center=center, pieces=(Arc(center, 0.0, 2.0 * math.pi),))


def region_area(region: DiskRegion) -> float:
    """Area of a chord-and-arc region.

    The corner polygon (piece start points) plus one circular segment per
    arc with positive sweep.
    """
    corners = region.corner_points()
    polygon_part = 0.0
    n = len(corners)
    for i in range(n):
        polygon_part += corners[i].cross(corners[(i + 1) % n])
    total = abs(polygon_part) / 2.0
    for arc in region.arcs():
        if arc.sweep >= 2.0 * math.pi - 1e-15:
            total += math.pi
        elif arc.sweep > 0.0:
            total += circular_segment_area(arc.sweep)
    return total


def boundary_length(region: DiskRegion) -> float:
    return sum(p.length for p in region.pieces)


def _piece_offsets(region: DiskRegion) -> np.ndarray:
    lengths = np.array([p.length for p in region.pieces], dtype=float)
    return np.concatenate(([0.0], np.cumsum(lengths)))


def boundary_points(region: DiskRegion, ts: Sequence[float]) -> np.ndarray:
    """Points at arc-length parameters `ts` (taken modulo the perimeter).

    Returns:
        Array of shape (len(ts), 2)
    """
    offsets = _piece_offsets(region)
    total = offsets[-1]
    ts = np.mod(np.asarray(ts, dtype=float), total)
    index = np.clip(np.searchsorted(offsets, ts, side="right") - 1, 0, len(region.pieces) - 1)
    out = np.empty((len(ts), 2))
    for k, piece in enumerate(region.pieces):
        mask = index == k
        if not mask.any():
            continue
        local = ts[mask] - offsets[k]
        if isinstance(piece, Chord):
            a, b = piece.endpoints
            frac = local / piece.length if piece.length > 0 else np.zeros_like(local)
            out[mask, 0] = a.x + frac * (b.x - a.x)
            out[mask, 1] = a.y + frac * (b.y - a.y)
        else:
            angles = piece.start_angle + local
            out[mask, 0] = piece.center.x + np.cos(angles)
            out[mask, 1] = piece.center.y + np.sin(angles)
    return out


def boundary_point(region: DiskRegion, t: float) -> Point:
    x, y = boundary_points(region, [t])[0]
    return Point(float(x), float(y))


def a_star(n: int) -> float:
    """Area of the largest n-gon inscribed in M.

    Raises:
        ValueError: If n is not an integer >= 3
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 3:
        raise ValueError(f"a*(n) is defined for integers n >= 3, got {n!r}")
    k = int(n) - 2
    return SQRT3 / 2.0 + k / 2.0 * math.sin(TWO_PI_OVER_3 / k)


def _a_star_array(ns: np.ndarray) -> np.ndarray:
    k = ns.astype(float) - 2.0
    return SQRT3 / 2.0 + k / 2.0 * np.sin(TWO_PI_OVER_3 / k)


def a_star_interp(x: float) -> float:
    """Piecewise-linear extension of a* to reals x >= 3."""
    if not math.isfinite(x) or x < 3:
        raise ValueError(f"a* interpolation is defined for x >= 3, got {x}")
    lower = math.floor(x)
    frac = x - lower
    if frac == 0.0:
        return a_star(lower)
    return (1.0 - frac) * a_star(lower) + frac * a_star(lower + 1)


def optimal_ngon_in_M(n: int) -> ConvexPolygon:
    """The largest n-gon in region_M(): A0, B0, B'0 and n-3 equally spaced arc points."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 3:
        raise ValueError(f"n must be an integer >= 3, got {n!r}")
    step = TWO_PI_OVER_3 / (n - 2)
    vertices = [Point(0.0, -1.0)]
    vertices.extend(polar(1.0, math.pi / 6.0 + k * step) for k in range(n - 2))
    vertices.append(polar(1.0, 5.0 * math.pi / 6.0))
    return ConvexPolygon(tuple(vertices))


def _shoelace(points: np.ndarray) -> float:
    x, y = points[:, 0], points[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _best_ngon_on_samples(points: np.ndarray, n: int) -> tuple[float, list[int]]:
    """Exhaustive search of the largest n-gon with vertices among cyclically ordered samples.

    For each first vertex s, a fan DP over later samples:
    f_k[j] = max_{s<i<j} f_{k-1}[i] + area(s, i, j).
    """
    m = len(points)
    best_area = -1.0
    best_indices: list[int] = []
    for s in range(m - n + 1):
        rel = points[s + 1:] - points[s]
        size = len(rel)
        tri = 0.5 * (np.outer(rel[:, 0], rel[:, 1]) - np.outer(rel[:, 1], rel[:, 0]))
        tri[np.tril_indices(size)] = -np.inf
        f = np.zeros(size)
        back = []
        for _ in range(n - 2):
            candidates = f[:, None] + tri
            choice = np.argmax(candidates, axis=0)
            f = candidates[choice, np.arange(size)]
            back.append(choice)
        last = int(np.argmax(f))
        if f[last] > best_area:
            best_area = float(f[last])
            chain = [last]
            for choice in reversed(back):
                chain.append(int(choice[chain[-1]]))
            best_indices = [s] + [s + 1 + j for j in reversed(chain)]
    return best_area, best_indices


def _refine(region: DiskRegion, ts: np.ndarray, spacing: float) -> np.ndarray:
    """Local refinement of boundary parameters: Nelder–Mead, then coordinate polishing."""
    total = boundary_length(region)

    def negative_area(params: np.ndarray) -> float:
        ordered = np.sort(np.mod(params, total))
        return -_shoelace(boundary_points(region, ordered))

    n = len(ts)
    simplex = np.vstack([ts] + [ts + 0.5 * spacing * np.eye(n)[i] for i in range(n)])
    result = minimize(
        negative_area,
        ts,
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "xatol": 1e-12,
            "fatol": 1e-15,
            "maxiter": Config.ORACLE_MAX_ITER,
        },
    )
    current = ts if result.fun > negative_area(ts) else result.x
    current = np.sort(np.mod(current, total))

    # each vertex moves between its neighbours; the triangle it spans is unimodal there
    best = -negative_area(current)
    for _ in range(500):
        for i in range(n):
            lo = current[i - 1] if i > 0 else current[-1] - total
            hi = current[i + 1] if i < n - 1 else current[0] + total
            if hi - lo <= 1e-14:
                continue

            def objective(t: float, i: int = i) -> float:
                trial = current.copy()
                trial[i] = t
                return -_shoelace(boundary_points(region, trial))

            found = minimize_scalar(objective, bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
            if found.fun < objective(current[i]):
                current[i] = found.x
        current = np.sort(np.mod(current, total))
        area = -negative_area(current)
        if area - best <= 1e-15:
            best = max(best, area)
            break
        best = area
    return current


def max_inscribed_ngon_oracle(
    region: DiskRegion, n: int, resolution: Optional[int] = None
) -> tuple[ConvexPolygon, float]:
    """Numerically search the largest n-gon inscribed in a chord-and-arc region.

    The boundary is sampled uniformly by arc length (region corners are
    always included), the best n-gon on the samples is found exhaustively,
    and its vertices are then refined along the boundary. The result never
    uses the closed form a*(n), so it can be used to check it.

    Args:
        region: Convex chord-and-arc region
        n: Number of vertices (>= 3)
        resolution: Number of uniform boundary samples (>= 100); defaults to
            Config.ORACLE_RESOLUTION

    Returns:
        Tuple of (polygon, area); the area is that of an actual inscribed
        n-gon and therefore a lower bound on the optimum
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 3:
        raise ValueError(f"n must be an integer >= 3, got {n!r}")
    resolution = Config.ORACLE_RESOLUTION if resolution is None else resolution
    if resolution < 100:
        raise ValueError(f"Oracle resolution must be at least 100, got {resolution}")

    total = boundary_length(region)
    spacing = total / resolution
    uniform = np.arange(resolution) * spacing
    corners = _piece_offsets(region)[:-1]
    ts = np.unique(np.round(np.concatenate((uniform, corners)), 14))
    samples = boundary_points(region, ts)

    dp_area, indices = _best_ngon_on_samples(samples, n)
    logger.debug(f"Oracle DP: n={n}, samples={len(ts)}, area={dp_area:.12f}")

    refined = _refine(region, ts[indices], spacing)
    points = boundary_points(region, refined)
    area = _shoelace(points)
    if area < dp_area:
        points, area = samples[indices], dp_area

    vertices = tuple(Point(float(x), float(y)) for x, y in points)
    polygon = ConvexPolygon.from_coords([(v.x, v.y) for v in vertices])
    logger.info(f"Oracle: largest {n}-gon area {area:.12f} (resolution {resolution})")
    return polygon, area


def hexagon_density_bound(region: DiskRegion, resolution: Optional[int] = None) -> float:
    """Ratio of region area to its largest inscribed hexagon (the hexagon covering bound)."""
    _, hexagon_area = max_inscribed_ngon_oracle(region, 6, resolution)
    return region_area(region) / hexagon_area


def check_dowker(n_max: int) -> bool:
    """Midpoint concavity a*(n) >= (a*(n-1) + a*(n+1)) / 2 for 4 <= n <= n_max."""
    if n_max < 4:
        raise ValueError(f"n_max must be at least 4, got {n_max}")
    values = _a_star_array(np.arange(3, n_max + 2))
    middle = values[1:-1]
    average = (values[:-2] + values[2:]) / 2.0
    return bool(np.all(middle >= average - 1e-12))


def jensen_bound(nu_list: Sequence[int]) -> float:
    """a* interpolated at the mean vertex count.

    By concavity the mean of a*(ν) over the list never exceeds this value.

    Raises:
        ValueError: On an empty list or counts below 3
    """
    if len(nu_list) == 0:
        raise ValueError("jensen_bound needs at least one vertex count")
    if min(nu_list) < 3:
        raise ValueError(f"Vertex counts must be at least 3, got {min(nu_list)}")
    return a_star_interp(sum(nu_list) / len(nu_list))


def mean_a_star(nu_list: Sequence[int]) -> float:
    if len(nu_list) == 0:
        raise ValueError("mean_a_star needs at least one vertex count")
    return sum(a_star(int(nu)) for nu in nu_list) / len(nu_list)


def theorem_bound() -> float:
    """Lower density bound π / a*(6) = 2π / (2 + √3) for no-sharp-turn sequence coverings."""
    return math.pi / a_star(6)


def theorem_bound_with_slack(n_disks: int, slack: float = math.pi) -> float:
    """Finite form π / (a*(6) + 2c/N) of the bound, for N disks and end-cell slack c."""
    if n_disks < 1:
        raise ValueError(f"Disk count must be positive, got {n_disks}")
    return math.pi / (a_star(6) + 2.0 * slack / n_disks)
