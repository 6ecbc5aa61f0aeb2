"""Tests for bounded Voronoi partitions and the exact coverage decision."""

import math

import numpy as np
import pytest
import shapely
from hypothesis import given, settings, strategies as st
from shapely.geometry import Polygon as ShapelyPolygon

from src.chain_covering import build_chain, dodecagon
from src.geometry_core import ConvexPolygon, Point, point_in_polygon, polygon_area, regular_polygon
from src.voronoi_partition import (
    build_partition,
    cell_in_sandwich,
    cells_inside_disks,
    coverage_by_sampling,
    covers,
    deduplicate,
    max_cell_reach,
    proper_vertex_counts,
    sandwich_chords,
)


def square(side: float) -> ConvexPolygon:
    h = side / 2.0
    return ConvexPolygon.from_coords([(-h, -h), (h, -h), (h, h), (-h, h)])


def random_points_in(polygon: ConvexPolygon, count: int, rng: np.random.Generator) -> list[Point]:
    box = polygon.as_array()
    points: list[Point] = []
    while len(points) < count:
        x, y = rng.uniform(box.min(axis=0), box.max(axis=0))
        p = Point(float(x), float(y))
        if point_in_polygon(polygon, p, eps=0.0):
            points.append(p)
    return points


def covered_instance(seed: int) -> tuple[ConvexPolygon, list[Point]]:
    """A hexagon and jittered hexagonal-lattice seeds whose disks cover it.

    The lattice has covering radius 0.9 and every seed moves by at most
    0.05, so every point of the plane near the hexagon is within 0.95 of
    a seed.
    """
    rng = np.random.default_rng(seed)
    radius = float(rng.uniform(1.0, 3.5))
    hexagon = regular_polygon(6, radius, float(rng.uniform(0, math.pi / 3)))
    spacing = math.sqrt(3.0) * 0.9
    shift = rng.uniform(-1.0, 1.0, size=2)
    seeds = []
    for a in range(-8, 9):
        for b in range(-8, 9):
            x = spacing * (a + b / 2.0) + shift[0]
            y = spacing * b * math.sqrt(3.0) / 2.0 + shift[1]
            if math.hypot(x, y) <= radius + 1.0:
                angle = rng.uniform(0, 2 * math.pi)
                jitter = rng.uniform(0, 0.05)
                seeds.append(Point(x + jitter * math.cos(angle), y + jitter * math.sin(angle)))
    return hexagon, seeds


OVERLAY_GRID = 1e-9


def cell_shapes(partition) -> list[ShapelyPolygon]:
    """Non-empty cells as shapely polygons snapped to the overlay grid."""
    return [
        shapely.set_precision(ShapelyPolygon([p.as_tuple() for p in cell.vertices]), OVERLAY_GRID)
        for cell in partition.cells
        if not cell.is_empty
    ]


def assert_partition_invariants(partition, rng: np.random.Generator, samples: int = 200):
    assert partition.total_area() == pytest.approx(polygon_area(partition.boundary), abs=1e-6)

    # neighbouring cells share edges exactly; overlay on a fixed grid
    shapes = cell_shapes(partition)
    for k, a in enumerate(shapes):
        for b in shapes[k + 1 :]:
            if a.bounds[0] <= b.bounds[2] and b.bounds[0] <= a.bounds[2]:
                assert shapely.intersection(a, b, grid_size=OVERLAY_GRID).area <= 1e-6
    union = shapely.unary_union(shapes, grid_size=OVERLAY_GRID)
    assert union.area == pytest.approx(partition.total_area(), abs=1e-6)

    seeds = np.array([p.as_tuple() for p in partition.seeds])
    for p in random_points_in(partition.boundary, samples, rng):
        nearest = int(np.argmin(np.hypot(seeds[:, 0] - p.x, seeds[:, 1] - p.y)))
        assert point_in_polygon(partition.cells[nearest], p, eps=1e-9)


@st.composite
def hexagon_instance(draw, min_seeds=2, max_seeds=100):
    count = draw(st.integers(min_value=min_seeds, max_value=max_seeds))
    seed = draw(st.integers(min_value=0, max_value=2**31 - 1))
    rng = np.random.default_rng(seed)
    hexagon = regular_polygon(6, float(rng.uniform(1.0, 6.0)), float(rng.uniform(0, math.pi)))
    return hexagon, random_points_in(hexagon, count, rng)


class TestBuildPartition:
    """Test suite for build_partition."""

    def test_single_seed_owns_polygon(self):
        """Test that a lone seed gets the whole polygon."""
        boundary = square(4.0)
        partition = build_partition(boundary, [Point(0.7, -1.2)])
        assert partition.cells[0] == boundary
        assert proper_vertex_counts(partition) == [4]

    def test_two_seeds_split_square(self):
        """Test two seeds splitting a square along x = 0."""
        partition = build_partition(square(2.0), [Point(-0.5, 0.0), Point(0.5, 0.0)])
        assert partition.areas() == pytest.approx([2.0, 2.0])
        assert proper_vertex_counts(partition) == [4, 4]
        assert all(v.x <= 1e-12 for v in partition.cells[0].vertices)
        assert all(v.x >= -1e-12 for v in partition.cells[1].vertices)

    def test_seed_outside_polygon_gets_empty_cell(self):
        """Test that a far seed keeps an empty cell."""
        partition = build_partition(square(2.0), [Point(0.0, 0.0), Point(10.0, 0.0)])
        assert partition.cells[1].is_empty
        assert partition.non_empty() == [0]
        assert proper_vertex_counts(partition) == [4, 0]

    def test_duplicate_seeds_rejected(self):
        """Test that repeated seeds are refused."""
        with pytest.raises(ValueError, match="Duplicate"):
            build_partition(square(2.0), [Point(0.1, 0.1), Point(0.5, 0.5), Point(0.1, 0.1)])

    def test_no_seeds_rejected(self):
        """Test that a partition needs at least one seed."""
        with pytest.raises(ValueError):
            build_partition(square(2.0), [])

    def test_empty_boundary_rejected(self):
        """Test that the boundary must be non-empty."""
        with pytest.raises(ValueError):
            build_partition(ConvexPolygon(), [Point(0, 0)])

    def test_small_neighbour_radius_still_exact(self):
        """Test that a tiny starting radius gives the same cells."""
        rng = np.random.default_rng(3)
        hexagon = regular_polygon(6, 5.0)
        seeds = random_points_in(hexagon, 12, rng)
        narrow = build_partition(hexagon, seeds, neighbor_radius=0.1)
        wide = build_partition(hexagon, seeds, neighbor_radius=100.0)
        assert narrow.areas() == pytest.approx(wide.areas(), abs=1e-9)

    def test_random_hexagon_invariants(self):
        """Test area, overlap and nearest-seed invariants on one hexagon."""
        rng = np.random.default_rng(11)
        hexagon = regular_polygon(6, 2.0)
        partition = build_partition(hexagon, random_points_in(hexagon, 8, rng))
        assert_partition_invariants(partition, rng)

    @given(hexagon_instance())
    @settings(max_examples=40, deadline=None)
    def test_partition_invariants_property(self, instance):
        """Test partition invariants on random hexagons."""
        hexagon, seeds = instance
        partition = build_partition(hexagon, seeds)
        assert_partition_invariants(partition, np.random.default_rng(len(seeds)), samples=50)

    @given(hexagon_instance())
    @settings(max_examples=60, deadline=None)
    def test_vertex_sum_bound_on_hexagons(self, instance):
        """Test the vertex-sum bound on random hexagons."""
        hexagon, seeds = instance
        partition = build_partition(hexagon, seeds)
        counts = proper_vertex_counts(partition)
        assert sum(counts) <= 6 * len(partition.non_empty())

    def test_fifty_seeds_vertex_sum(self):
        """Test the vertex-sum bound with fifty seeds."""
        rng = np.random.default_rng(5)
        hexagon = regular_polygon(6, 4.0)
        partition = build_partition(hexagon, random_points_in(hexagon, 50, rng))
        assert sum(proper_vertex_counts(partition)) <= 300


class TestCoverage:
    """Test suite for cells_inside_disks and covers."""

    def test_unit_square_single_disk(self):
        """Test a square that one disk covers."""
        assert covers(square(1.0), [Point(0, 0)])
        assert cells_inside_disks(build_partition(square(1.0), [Point(0, 0)]))

    def test_large_square_single_disk(self):
        """Test squares too large for one disk."""
        assert not covers(square(3.0), [Point(0, 0)])
        assert not cells_inside_disks(build_partition(square(4.0), [Point(0, 0)]))
        assert not covers(square(4.0), [Point(0, 0)])

    def test_octagon_covered_by_ring(self):
        """Test an octagon covered by a ring of eight disks."""
        octagon = regular_polygon(8, 1.6)
        seeds = [Point(0.95 * math.cos(k * math.pi / 4), 0.95 * math.sin(k * math.pi / 4)) for k in range(8)]
        partition = build_partition(octagon, seeds)
        assert covers(octagon, seeds)
        assert cells_inside_disks(partition)
        assert max_cell_reach(partition) <= 1.0

    def test_duplicates_are_merged(self):
        """Test that duplicate centers are merged before deciding."""
        assert covers(square(1.0), [Point(0, 0), Point(0, 0)])
        assert deduplicate([Point(0, 0), Point(1, 0), Point(0, 0)]) == [Point(0, 0), Point(1, 0)]

    def test_no_centers_rejected(self):
        """Test that coverage needs at least one center."""
        with pytest.raises(ValueError):
            covers(square(1.0), [])

    @pytest.mark.parametrize("K", [1, 2, 3, 4])
    def test_chain_covers_dodecagon(self, K):
        """Test that chains cover their dodecagons."""
        assert covers(dodecagon(K), list(build_chain(K).centers))

    def test_shrunk_layers_do_not_cover(self):
        """Test that pulling the layers inward leaves gaps."""
        centers = [Point(0.75 * p.x, 0.75 * p.y) for p in build_chain(3).centers]
        assert not covers(dodecagon(3), centers)

    @pytest.mark.parametrize("seed", range(10))
    def test_covered_instances_have_cells_inside_disks(self, seed):
        """Test jittered lattice coverings."""
        hexagon, seeds = covered_instance(seed)
        partition = build_partition(hexagon, seeds)
        assert covers(hexagon, seeds)
        assert cells_inside_disks(partition)
        assert_partition_invariants(partition, np.random.default_rng(seed), samples=50)

    @pytest.mark.parametrize("seed", range(12))
    def test_cells_tile_covered_instances(self, seed):
        """The union of the cells is the whole hexagon, with no area lost to shared edges."""
        hexagon, seeds = covered_instance(seed)
        shapes = cell_shapes(build_partition(hexagon, seeds))
        union = shapely.unary_union(shapes, grid_size=OVERLAY_GRID)
        assert union.area == pytest.approx(polygon_area(hexagon), abs=1e-6)
        assert union.area == pytest.approx(sum(s.area for s in shapes), abs=1e-6)

    @pytest.mark.parametrize("seed", range(100))
    def test_agrees_with_sampling(self, seed):
        """Test that sampling never finds a gap in a covered hexagon."""
        rng = np.random.default_rng(1000 + seed)
        hexagon = regular_polygon(6, float(rng.uniform(1.0, 3.0)))
        centers = random_points_in(hexagon, int(rng.integers(3, 15)), rng)
        exact = covers(hexagon, centers)
        sampled = coverage_by_sampling(hexagon, centers, 20000, rng)
        if exact:
            assert sampled


class TestSandwich:
    """Test suite for the chain-cell sandwich chords."""

    def test_chords_at_half_distance(self):
        """Test sandwich chords for a straight triple."""
        first, second = sandwich_chords(Point(-1, 0), Point(0, 0), Point(1, 0))
        assert first.normal == pytest.approx((-1.0, 0.0))
        assert first.offset == pytest.approx(0.5)
        assert second.normal == pytest.approx((1.0, 0.0))
        assert second.contains(Point(0, 0))

    def test_coincident_neighbour(self):
        """Test that a repeated neighbour is rejected."""
        with pytest.raises(ValueError):
            sandwich_chords(Point(0, 0), Point(0, 0), Point(1, 0))

    def test_chain_cells_lie_between_chords(self):
        """Test that chain cells lie between their two sandwich chords."""
        chain = build_chain(3)
        boundary = dodecagon(3)
        partition = build_partition(boundary, deduplicate(chain.centers))
        cells = dict(zip(partition.seeds, partition.cells))
        checked = 0
        for n in range(1, len(chain) - 1):
            cell = cells.get(chain.centers[n])
            if cell is None or cell.is_empty:
                continue
            if chain.centers[n] in (chain.centers[n - 1], chain.centers[n + 1]):
                continue
            assert cell_in_sandwich(cell, chain.centers[n - 1], chain.centers[n], chain.centers[n + 1])
            checked += 1
        assert checked > 30
