"""Planar primitives for unit-disk coverings.

Points, unit disks, convex polygons, half-planes and chords, together with
the measurements the rest of the package is built from: polygon areas,
half-plane clipping, common chords of two unit disks, turn angles and
circular segment areas.

All values are immutable; every function here is pure.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from src.config import Config

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Point:
    """A point of the plane."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Point coordinates must be finite, got ({self.x}, {self.y})")

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def scaled(self, factor: float) -> "Point":
        return Point(self.x * factor, self.y * factor)

    def dot(self, other: "Point") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Point") -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def distance_to(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


ORIGIN = Point(0.0, 0.0)


def polar(radius: float, angle: float, center: Point = ORIGIN) -> Point:
    """Point at polar coordinates (radius, angle) around `center`."""
    return Point(center.x + radius * math.cos(angle), center.y + radius * math.sin(angle))


@dataclass(frozen=True)
class Disk:
    """A closed unit disk. Only radius 1 is modelled."""

    center: Point
    radius: float = 1.0

    def __post_init__(self):
        if self.radius != 1.0:
            raise ValueError(f"Only unit disks are supported, got radius {self.radius}")

    def contains(self, p: Point, eps: Optional[float] = None) -> bool:
        tol = Config.EPS if eps is None else eps
        return self.center.distance_to(p) <= 1.0 + tol


@dataclass(frozen=True)
class HalfPlane:
    """The closed half-plane {p : p·normal <= offset}."""

    normal: tuple[float, float]
    offset: float

    def __post_init__(self):
        length = math.hypot(*self.normal)
        if abs(length - 1.0) > 1e-12:
            raise ValueError(f"HalfPlane normal must be a unit vector, got length {length}")

    @classmethod
    def through(cls, direction: tuple[float, float], offset: float) -> "HalfPlane":
        """Build a half-plane from a non-unit normal, normalizing it first."""
        length = math.hypot(*direction)
        if length == 0.0:
            raise ValueError("HalfPlane normal must be non-zero")
        return cls((direction[0] / length, direction[1] / length), offset / length)

    def signed_distance(self, p: Point) -> float:
        return p.x * self.normal[0] + p.y * self.normal[1] - self.offset

    def contains(self, p: Point, eps: Optional[float] = None) -> bool:
        tol = Config.EPS if eps is None else eps
        return self.signed_distance(p) <= tol

    def flipped(self) -> "HalfPlane":
        """The complementary closed half-plane."""
        return HalfPlane((-self.normal[0], -self.normal[1]), -self.offset)


def bisector_halfplane(seed: Point, other: Point) -> HalfPlane:
    """Points at least as close to `seed` as to `other`."""
    direction = other - seed
    if direction.norm() == 0.0:
        raise ValueError(f"Bisector undefined for coincident points {seed}")
    midpoint = Point((seed.x + other.x) / 2.0, (seed.y + other.y) / 2.0)
    return HalfPlane.through(direction.as_tuple(), direction.dot(midpoint))


@dataclass(frozen=True)
class ConvexPolygon:
    """Counterclockwise convex polygon with proper vertices only; may be empty."""

    vertices: tuple[Point, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if 0 < len(self.vertices) < 3:
            raise ValueError(f"A non-empty polygon needs at least 3 vertices, got {len(self.vertices)}")

    @classmethod
    def from_coords(cls, coords: Iterable[Sequence[float]]) -> "ConvexPolygon":
        """Build a polygon from (x, y) pairs, orienting it counterclockwise.

        Args:
            coords: Vertex coordinates in either cyclic orientation

        Returns:
            The validated polygon

        Raises:
            ValueError: If the vertices do not form a convex polygon
        """
        points = [Point(float(x), float(y)) for x, y in coords]
        if not points:
            return cls()
        if _signed_area(points) < 0:
            points.reverse()
        polygon = cls(tuple(_drop_improper(points, Config.EPS)))
        problems = polygon.validate()
        if problems:
            raise ValueError(f"Not a convex polygon: {'; '.join(problems)}")
        return polygon

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) == 0

    def __len__(self) -> int:
        return len(self.vertices)

    def as_array(self) -> np.ndarray:
        return np.array([p.as_tuple() for p in self.vertices], dtype=float).reshape(-1, 2)

    def edges(self) -> list[tuple[Point, Point]]:
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def validate(self) -> list[str]:
        """Check the convexity and orientation invariants.

        Returns:
            List of violated invariants (empty if valid)
        """
        problems = []
        n = len(self.vertices)
        for i in range(n):
            a, b, c = self.vertices[i], self.vertices[(i + 1) % n], self.vertices[(i + 2) % n]
            if (b - a).cross(c - b) < -Config.EPS:
                problems.append(f"reflex or clockwise turn at vertex {(i + 1) % n}")
        return problems


def _signed_area(points: Sequence[Point]) -> float:
    total = 0.0
    n = len(points)
    for i in range(n):
        total += points[i].cross(points[(i + 1) % n])
    return total / 2.0


def _drop_improper(points: list[Point], eps: float) -> list[Point]:
    """Remove repeated vertices and vertices whose adjacent edges are collinear."""
    cleaned: list[Point] = []
    for p in points:
        if not cleaned or cleaned[-1].distance_to(p) > eps:
            cleaned.append(p)
    if len(cleaned) > 1 and cleaned[0].distance_to(cleaned[-1]) <= eps:
        cleaned.pop()

    changed = True
    while changed and len(cleaned) >= 3:
        changed = False
        for i in range(len(cleaned)):
            a = cleaned[i - 1]
            b = cleaned[i]
            c = cleaned[(i + 1) % len(cleaned)]
            base = c - a
            length = base.norm()
            # distance of b from the line through a and c
            if length <= eps or abs(base.cross(b - a)) / length <= eps:
                del cleaned[i]
                changed = True
                break
    return cleaned if len(cleaned) >= 3 else []


def polygon_area(polygon: ConvexPolygon) -> float:
    """Shoelace area of a convex polygon (0 for the empty polygon)."""
    if polygon.is_empty:
        return 0.0
    return abs(_signed_area(polygon.vertices))


def clip_halfplane(polygon: ConvexPolygon, halfplane: HalfPlane) -> ConvexPolygon:
    """Intersect a convex polygon with a closed half-plane.

    Single-plane Sutherland–Hodgman pass. Signed distances within the
    geometric epsilon of the boundary line are snapped to zero so that
    repeated clipping by the same half-plane is a no-op.

    Args:
        polygon: Convex CCW polygon (possibly empty)
        halfplane: Clipping half-plane

    Returns:
        polygon ∩ halfplane, convex and CCW, empty if they only touch
    """
    if polygon.is_empty:
        return polygon

    eps = Config.EPS
    vertices = polygon.vertices
    distances = []
    for p in vertices:
        s = halfplane.signed_distance(p)
        distances.append(0.0 if abs(s) <= eps else s)

    if all(s <= 0.0 for s in distances):
        return polygon
    if all(s >= 0.0 for s in distances):
        return ConvexPolygon()

    output: list[Point] = []
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        sa, sb = distances[i], distances[(i + 1) % n]
        if sa <= 0.0:
            output.append(a)
        if (sa < 0.0 < sb) or (sb < 0.0 < sa):
            t = sa / (sa - sb)
            output.append(Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)))

    return ConvexPolygon(tuple(_drop_improper(output, eps)))


@dataclass(frozen=True)
class Chord:
    """A chord of the unit circle around `center`.

    `carrier` is the half-plane bounded by the chord's line; for a common
    chord it is the side holding the first disk's center.
    """

    endpoints: tuple[Point, Point]
    carrier: HalfPlane
    center: Point

    def __post_init__(self):
        for p in self.endpoints:
            if abs(p.distance_to(self.center) - 1.0) > 1e-9:
                raise ValueError(f"Chord endpoint {p} is not on the unit circle around {self.center}")

    @property
    def length(self) -> float:
        return self.endpoints[0].distance_to(self.endpoints[1])

    @property
    def midpoint(self) -> Point:
        a, b = self.endpoints
        return Point((a.x + b.x) / 2.0, (a.y + b.y) / 2.0)


def common_chord(d1: Disk, d2: Disk) -> Optional[Chord]:
    """Common chord of two unit disks.

    Tangent disks give a zero-length chord at the touching point.

    Args:
        d1: First disk; the carrier half-plane faces its center
        d2: Second disk

    Returns:
        The chord on the radical line, or None if the disks are disjoint

    Raises:
        ValueError: If the centers coincide
    """
    delta = d2.center - d1.center
    d = delta.norm()
    if d <= Config.EPS:
        raise ValueError(f"Disks centered at {d1.center} coincide; common chord undefined")
    if d > 2.0 + Config.EPS:
        return None

    u = delta.scaled(1.0 / d)
    mid = d1.center + u.scaled(d / 2.0)
    half = math.sqrt(max(0.0, 1.0 - d * d / 4.0))
    perp = Point(-u.y, u.x)
    first = mid + perp.scaled(half)
    second = mid - perp.scaled(half)
    if half == 0.0:
        # tangency: snap onto the first circle exactly
        first = second = d1.center + u
    carrier = HalfPlane((u.x, u.y), u.dot(mid))
    return Chord(endpoints=(first, second), carrier=carrier, center=d1.center)


def chord_length(distance: float) -> float:
    """Length of the common chord of two unit disks `distance` apart."""
    if distance < 0.0 or distance > 2.0:
        raise ValueError(f"Centers {distance} apart have no common chord")
    return 2.0 * math.sqrt(1.0 - distance * distance / 4.0)


def angle_at(a: Point, b: Point, c: Point) -> float:
    """The smaller angle ∠ABC in [0, π].

    Raises:
        ValueError: If A or C coincides with B
    """
    ba = a - b
    bc = c - b
    if ba.norm() <= Config.EPS or bc.norm() <= Config.EPS:
        raise ValueError(f"Angle undefined: a neighbour coincides with vertex {b}")
    return math.atan2(abs(ba.cross(bc)), ba.dot(bc))


def circular_segment_area(central_angle: float) -> float:
    """Area cut from the unit disk by a chord subtending `central_angle`.

    Raises:
        ValueError: Unless 0 < central_angle < 2π
    """
    if not 0.0 < central_angle < 2.0 * math.pi:
        raise ValueError(f"Central angle must lie in (0, 2π), got {central_angle}")
    return (central_angle - math.sin(central_angle)) / 2.0


def lens_area(distance: float) -> float:
    """Area of the intersection of two unit disks `distance` apart."""
    if not 0.0 <= distance <= 2.0:
        raise ValueError(f"Lens area needs distance in [0, 2], got {distance}")
    half = distance / 2.0
    return 2.0 * math.acos(half) - half * math.sqrt(4.0 - distance * distance)


def distance_to_square(p: Point, lam: float) -> float:
    """Euclidean distance from `p` to the closed square [-lam, lam]²."""
    dx = max(abs(p.x) - lam, 0.0)
    dy = max(abs(p.y) - lam, 0.0)
    return math.hypot(dx, dy)


def disk_intersects_open_square(disk: Disk, lam: float) -> bool:
    """Whether a unit disk meets the open square Int([-lam, lam]²).

    Raises:
        ValueError: If lam <= 0
    """
    if lam <= 0:
        raise ValueError(f"Square half-side must be positive, got {lam}")
    return distance_to_square(disk.center, lam) < 1.0


def polygon_circumradius(polygon: ConvexPolygon, center: Point) -> float:
    """Largest distance from `center` to a vertex of `polygon` (0 if empty)."""
    if polygon.is_empty:
        return 0.0
    return max(center.distance_to(v) for v in polygon.vertices)


def point_in_polygon(polygon: ConvexPolygon, p: Point, eps: Optional[float] = None) -> bool:
    """Closed containment test for a convex CCW polygon."""
    if polygon.is_empty:
        return False
    tol = Config.EPS if eps is None else eps
    for a, b in polygon.edges():
        edge = b - a
        if edge.cross(p - a) < -tol * edge.norm():
            return False
    return True


def regular_polygon(n: int, circumradius: float, phase: float = 0.0, center: Point = ORIGIN) -> ConvexPolygon:
    """Regular CCW n-gon with vertex k at polar angle phase + 2πk/n."""
    if n < 3:
        raise ValueError(f"A polygon needs at least 3 vertices, got {n}")
    if circumradius <= 0:
        raise ValueError(f"Circumradius must be positive, got {circumradius}")
    return ConvexPolygon(tuple(polar(circumradius, phase + 2.0 * math.pi * k / n, center) for k in range(n)))
