"""Tests for SVG scene rendering."""

import math
from xml.etree import ElementTree as ET

import pytest

from src.chain_covering import build_chain, dodecagon
from src.geometry_core import ConvexPolygon, Point
from src.inscribed_regions import optimal_ngon_in_M, region_M
from src.lattice_covering import optimal_lattice
from src.svg_renderer import SVG_NS, SceneRenderer, render_scene
from src.voronoi_partition import build_partition

NS = {"svg": SVG_NS}


@pytest.fixture
def renderer():
    return SceneRenderer(width=400)


def parse(document: str) -> ET.Element:
    return ET.fromstring(document)


class TestSceneRenderer:
    """Test suite for SceneRenderer."""

    def test_covering_has_one_disk_per_center(self, renderer):
        """Test one circle per center, plus the path and outline."""
        chain = build_chain(3)
        root = parse(renderer.render_covering(list(chain.centers), polygon=dodecagon(3), ordered=True))
        disks = [c for c in root.iter(f"{{{SVG_NS}}}circle") if c.get("r") == "1.000000"]
        assert len(disks) == len(chain)
        assert len(root.findall(".//svg:polyline", NS)) == 1
        assert len(root.findall(".//svg:polygon", NS)) == 1

    def test_covering_with_square(self, renderer):
        """Test the dashed density square and the title."""
        root = parse(renderer.render_covering([Point(0, 0)], square=2.0))
        squares = root.findall(".//svg:polygon", NS)
        assert len(squares) == 1
        assert squares[0].get("stroke-dasharray") == "0.2,0.1"
        assert root.find("svg:title", NS).text == "unit-disk covering"

    def test_unordered_covering_has_no_path(self, renderer):
        """Test that an unordered covering draws no path."""
        root = parse(renderer.render_covering([Point(0, 0), Point(1, 0)]))
        assert root.findall(".//svg:polyline", NS) == []

    def test_empty_covering_rejected(self, renderer):
        """Test that an empty covering cannot be drawn."""
        with pytest.raises(ValueError, match="empty"):
            renderer.render_covering([])

    def test_y_axis_flipped(self, renderer):
        """Test that y grows upward in the figure."""
        root = parse(renderer.render_covering([Point(0.0, 2.0)]))
        centers = {c.get("cy") for c in root.iter(f"{{{SVG_NS}}}circle")}
        assert centers == {"-2.000000"}

    def test_view_box_covers_scene(self, renderer):
        """Test the view box and pixel size."""
        root = parse(renderer.render_covering([Point(0, 0), Point(4, 0)]))
        x, y, w, h = (float(v) for v in root.get("viewBox").split())
        assert x == pytest.approx(-1.5)
        assert w == pytest.approx(7.0)
        assert h == pytest.approx(3.0)
        assert root.get("width") == "400"
        assert root.get("height") == str(round(400 * 3.0 / 7.0))

    def test_partition_draws_non_empty_cells(self, renderer):
        """Test that empty cells are skipped."""
        square = ConvexPolygon.from_coords([(-1, -1), (1, -1), (1, 1), (-1, 1)])
        partition = build_partition(square, [Point(-0.5, 0), Point(0.5, 0), Point(10, 0)])
        root = parse(renderer.render_partition(partition))
        # two cells plus the boundary outline
        assert len(root.findall(".//svg:polygon", NS)) == 3

    def test_region_with_polygon(self, renderer):
        """Test a region outline with an inscribed polygon."""
        root = parse(renderer.render_region(region_M(), optimal_ngon_in_M(5), samples=90))
        outlines = root.findall(".//svg:polygon", NS)
        assert len(outlines) == 2
        assert len(outlines[0].get("points").split()) == 90
        assert len(outlines[1].get("points").split()) == 5

    def test_lattice_basis_lines(self, renderer):
        """Test the drawn basis vectors."""
        root = parse(renderer.render_lattice(optimal_lattice(), extent=3.0))
        lines = root.findall(".//svg:line", NS)
        assert [line.get("x2") for line in lines] == ["1.000000", "0.500000"]
        assert lines[1].get("y2") == f"{-(1 + math.sqrt(3) / 2):.6f}"

    def test_output_is_deterministic(self):
        """Test that repeated renders are byte-identical."""
        centers = list(build_chain(2).centers)
        assert SceneRenderer().render_covering(centers) == SceneRenderer().render_covering(centers)


class TestRenderScene:
    """Test suite for render_scene dispatch."""

    def test_dispatch(self):
        """Test dispatch by scene name."""
        document = render_scene("lattice", lattice=optimal_lattice())
        assert document == SceneRenderer().render_lattice(optimal_lattice())

    def test_unknown_scene(self):
        """Test an unknown scene name."""
        with pytest.raises(ValueError, match="Unknown scene"):
            render_scene("histogram")
