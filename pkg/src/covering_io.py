"""File formats: covering/polygon/lattice JSON and density/a* CSV.

Floats are written with Python's shortest round-trip repr, so a covering
written and read back has bit-identical centers.
"""

import csv
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence, Union

from src.chain_covering import Chain
from src.density_meter import DensityRow, DensityTable
from src.geometry_core import ConvexPolygon, Point
from src.lattice_covering import Lattice

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass(frozen=True)
class CoveringFile:
    """A finite unit-disk covering as stored on disk."""

    centers: tuple[tuple[float, float], ...]
    radius: float = 1.0
    ordered: bool = False
    tags: Optional[tuple[str, ...]] = None

    def validate(self) -> list[str]:
        """Returns a list of schema violations (empty if valid)."""
        errors = []
        if self.radius != 1.0:
            errors.append(f"radius must be 1.0, got {self.radius}")
        if not self.centers:
            errors.append("centers must not be empty")
        for i, center in enumerate(self.centers):
            if len(center) != 2 or not all(math.isfinite(c) for c in center):
                errors.append(f"center {i} is not a finite [x, y] pair: {center}")
                break
        if self.tags is not None and len(self.tags) != len(self.centers):
            errors.append(f"{len(self.tags)} tags given for {len(self.centers)} centers")
        return errors

    def points(self) -> list[Point]:
        return [Point(x, y) for x, y in self.centers]

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "radius": self.radius,
            "ordered": self.ordered,
            "centers": [[x, y] for x, y in self.centers],
        }
        if self.tags is not None:
            data["tags"] = list(self.tags)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CoveringFile":
        """Parse and validate a covering document.

        Raises:
            ValueError: If required fields are missing or invalid
        """
        try:
            centers = tuple((float(x), float(y)) for x, y in data["centers"])
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f"Invalid covering centers: {e}") from e
        tags = data.get("tags")
        covering = cls(
            centers=centers,
            radius=float(data.get("radius", 1.0)),
            ordered=bool(data.get("ordered", False)),
            tags=tuple(str(t) for t in tags) if tags is not None else None,
        )
        errors = covering.validate()
        if errors:
            raise ValueError(f"Invalid covering file: {'; '.join(errors)}")
        return covering


def chain_to_covering(chain: Chain) -> CoveringFile:
    return CoveringFile(
        centers=tuple(p.as_tuple() for p in chain.centers),
        ordered=True,
        tags=chain.tags or None,
    )


def covering_to_chain(covering: CoveringFile) -> Chain:
    return Chain(centers=tuple(covering.points()), tags=covering.tags or ())


def write_json(path: PathLike, data: Any) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2)
        f.write("\n")


def read_json(path: PathLike) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_covering(path: PathLike, covering: CoveringFile) -> None:
    errors = covering.validate()
    if errors:
        raise ValueError(f"Refusing to write invalid covering: {'; '.join(errors)}")
    write_json(path, covering.to_dict())
    logger.info(f"Wrote {len(covering.centers)} centers to {path}")


def read_covering(path: PathLike) -> CoveringFile:
    covering = CoveringFile.from_dict(read_json(path))
    logger.debug(f"Read {len(covering.centers)} centers from {path}")
    return covering


def read_polygon(path: PathLike) -> ConvexPolygon:
    """Read a convex polygon stored as [[x, y], ...] or {"vertices": [...]}."""
    data = read_json(path)
    if isinstance(data, dict):
        if "vertices" not in data:
            raise ValueError(f"Polygon document {path} needs a 'vertices' list")
        data = data["vertices"]
    if not isinstance(data, list):
        raise ValueError(f"Polygon document {path} must be a list of [x, y] pairs")
    return ConvexPolygon.from_coords(data)


def read_points(path: PathLike) -> list[Point]:
    """Read seeds stored as [[x, y], ...] or as a covering document."""
    data = read_json(path)
    if isinstance(data, dict):
        return CoveringFile.from_dict(data).points()
    if not isinstance(data, list) or not all(isinstance(p, list) and len(p) == 2 for p in data):
        raise ValueError(f"Point document {path} must be a list of [x, y] pairs")
    return [Point(float(x), float(y)) for x, y in data]


def lattice_to_dict(lattice: Lattice) -> dict[str, Any]:
    return {"v1": list(lattice.v1), "v2": list(lattice.v2)}


def parse_vector(text: str) -> tuple[float, float]:
    """Parse an "x,y" pair.

    Raises:
        ValueError: Unless the text holds exactly two finite numbers
    """
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"Expected a vector as x,y, got '{text}'")
    x, y = (float(p) for p in parts)
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"Vector components must be finite, got '{text}'")
    return x, y


def parse_lambdas(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def write_density_csv(path: PathLike, table: DensityTable) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["lambda", "N", "gamma"])
        for row in table.rows:
            writer.writerow([repr(row.lam), row.count, repr(row.gamma)])


def read_density_csv(path: PathLike) -> DensityTable:
    with open(path, newline="", encoding="utf-8") as f:
        rows = [
            DensityRow(lam=float(r["lambda"]), count=int(r["N"]), gamma=float(r["gamma"]))
            for r in csv.DictReader(f)
        ]
    return DensityTable(rows=tuple(rows))


def write_rows_csv(path: PathLike, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    """Write a plain CSV table, floats at full precision."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
