"""SVG figures of coverings, Voronoi partitions, regions and lattices.

Output is deterministic: a fixed canvas width, viewBox derived from the
scene bounds, and every coordinate written with six decimals.
"""

import logging
from typing import Any, Optional, Sequence
from xml.etree import ElementTree as ET

import numpy as np

from src.geometry_core import ConvexPolygon, Point
from src.inscribed_regions import DiskRegion, boundary_length, boundary_points
from src.lattice_covering import Lattice, lattice_points
from src.voronoi_partition import VoronoiPartition

logger = logging.getLogger(__name__)

SVG_NS = "http://www.w3.org/2000/svg"
SCENES = ("covering", "partition", "region", "lattice")


def _fmt(value: float) -> str:
    text = f"{value:.6f}"
    return "0.000000" if text == "-0.000000" else text


class SceneRenderer:
    """Renders geometric scenes as standalone SVG documents."""

    def __init__(self, width: int = 800, margin: float = 1.5, stroke: float = 0.02):
        """Initialize renderer.

        Args:
            width: Canvas width in pixels; height follows the scene's aspect
            margin: Padding around the scene bounds, in plane units
            stroke: Base stroke width in plane units
        """
        self.width = width
        self.margin = margin
        self.stroke = stroke

    def _document(self, points: np.ndarray, title: str) -> tuple[ET.Element, ET.Element]:
        low = points.min(axis=0) - self.margin
        high = points.max(axis=0) + self.margin
        span = high - low
        height = max(1, round(self.width * span[1] / span[0]))

        svg = ET.Element("svg", xmlns=SVG_NS)
        svg.set("width", str(self.width))
        svg.set("height", str(height))
        svg.set("viewBox", " ".join(_fmt(v) for v in (low[0], -high[1], span[0], span[1])))
        ET.SubElement(svg, "title").text = title
        group = ET.SubElement(svg, "g")
        group.set("stroke-width", _fmt(self.stroke))
        return svg, group

    @staticmethod
    def _finish(svg: ET.Element) -> str:
        return ET.tostring(svg, encoding="unicode")

    @staticmethod
    def _polygon(parent: ET.Element, coords: np.ndarray, **attrs: str) -> None:
        element = ET.SubElement(parent, "polygon")
        element.set("points", " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in coords))
        for key, value in attrs.items():
            element.set(key.replace("_", "-"), value)

    @staticmethod
    def _circle(parent: ET.Element, x: float, y: float, r: float, **attrs: str) -> None:
        element = ET.SubElement(parent, "circle")
        element.set("cx", _fmt(x))
        element.set("cy", _fmt(-y))
        element.set("r", _fmt(r))
        for key, value in attrs.items():
            element.set(key.replace("_", "-"), value)

    def _disks(self, parent: ET.Element, coords: np.ndarray, color: str) -> None:
        disks = ET.SubElement(parent, "g", fill=color, stroke="#1f4e79")
        disks.set("fill-opacity", "0.15")
        for x, y in coords:
            self._circle(disks, x, y, 1.0)
        dots = ET.SubElement(parent, "g", fill="#1f4e79")
        for x, y in coords:
            self._circle(dots, x, y, 2.5 * self.stroke)

    def render_covering(
        self,
        centers: Sequence[Point],
        polygon: Optional[ConvexPolygon] = None,
        square: Optional[float] = None,
        ordered: bool = False,
        title: str = "unit-disk covering",
    ) -> str:
        """Unit disks at `centers`, optionally with a target polygon, the
        square [−λ, λ]² and the chain polyline.

        Raises:
            ValueError: If there are no centers
        """
        if len(centers) == 0:
            raise ValueError("Cannot render an empty covering")
        coords = np.array([p.as_tuple() for p in centers])
        extents = [coords]
        if polygon is not None and not polygon.is_empty:
            extents.append(polygon.as_array())
        if square is not None:
            extents.append(np.array([[-square, -square], [square, square]]))
        svg, group = self._document(np.vstack(extents), title)

        self._disks(group, coords, "#9dc3e6")
        if polygon is not None and not polygon.is_empty:
            self._polygon(group, polygon.as_array(), fill="none", stroke="#c00000")
        if square is not None:
            corners = np.array([[-square, -square], [square, -square], [square, square], [-square, square]])
            self._polygon(group, corners, fill="none", stroke="#375623", stroke_dasharray="0.2,0.1")
        if ordered and len(coords) > 1:
            path = ET.SubElement(group, "polyline", fill="none", stroke="#7f6000")
            path.set("points", " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in coords))

        logger.debug(f"Rendered covering with {len(coords)} disks")
        return self._finish(svg)

    def render_partition(self, partition: VoronoiPartition, title: str = "Voronoi partition") -> str:
        """Voronoi cells, their seeds and the unit disks around the seeds."""
        seeds = np.array([p.as_tuple() for p in partition.seeds])
        svg, group = self._document(np.vstack([seeds, partition.boundary.as_array()]), title)
        self._disks(group, seeds, "#deebf7")
        cells = ET.SubElement(group, "g", fill="#fff2cc", stroke="#7f6000")
        cells.set("fill-opacity", "0.5")
        for cell in partition.cells:
            if not cell.is_empty:
                self._polygon(cells, cell.as_array())
        self._polygon(group, partition.boundary.as_array(), fill="none", stroke="#c00000")
        return self._finish(svg)

    def render_region(
        self,
        region: DiskRegion,
        polygon: Optional[ConvexPolygon] = None,
        samples: int = 720,
        title: str = "disk region",
    ) -> str:
        """A chord/arc region inside its unit circle, with an inscribed polygon."""
        ts = np.linspace(0.0, boundary_length(region), samples, endpoint=False)
        outline = boundary_points(region, ts)
        c = region.center
        circle = np.array([[c.x - 1.0, c.y - 1.0], [c.x + 1.0, c.y + 1.0]])
        svg, group = self._document(np.vstack([outline, circle]), title)
        self._circle(group, c.x, c.y, 1.0, fill="none", stroke="#7f7f7f")
        self._polygon(group, outline, fill="#deebf7", stroke="#1f4e79")
        if polygon is not None and not polygon.is_empty:
            self._polygon(group, polygon.as_array(), fill="#fff2cc", stroke="#c00000")
        return self._finish(svg)

    def render_lattice(self, lattice: Lattice, extent: float = 4.0, title: str = "lattice covering") -> str:
        """Unit disks at the lattice points within `extent` of the origin, with the basis."""
        coords = lattice_points(lattice, extent)
        svg, group = self._document(coords, title)
        self._disks(group, coords, "#c5e0b4")
        basis = ET.SubElement(group, "g", stroke="#c00000")
        for v in (lattice.v1, lattice.v2):
            line = ET.SubElement(basis, "line", x1="0.000000", y1="0.000000")
            line.set("x2", _fmt(v[0]))
            line.set("y2", _fmt(-v[1]))
        return self._finish(svg)


def render_scene(scene: str, renderer: Optional[SceneRenderer] = None, **inputs: Any) -> str:
    """Dispatch to the renderer method for a named scene.

    Raises:
        ValueError: For an unknown scene name or invalid scene inputs
    """
    renderer = renderer or SceneRenderer()
    if scene == "covering":
        return renderer.render_covering(**inputs)
    if scene == "partition":
        return renderer.render_partition(**inputs)
    if scene == "region":
        return renderer.render_region(**inputs)
    if scene == "lattice":
        return renderer.render_lattice(**inputs)
    raise ValueError(f"Unknown scene '{scene}', expected one of {', '.join(SCENES)}")
