"""Closed-form constants recomputed from the library and checked against
their published decimal values."""

import logging
from dataclasses import dataclass
from typing import Any, Callable

from src.chain_covering import crescent_area, crude_lower_bound, dodecagon
from src.geometry_core import polygon_area
from src.inscribed_regions import a_star, region_area, region_M, theorem_bound
from src.lattice_covering import kershner_lattice, lattice_density, lattice_det, optimal_lattice

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-5


@dataclass(frozen=True)
class ReportRow:
    name: str
    computed: float
    expected: float
    tolerance: float = DEFAULT_TOLERANCE

    @property
    def difference(self) -> float:
        return abs(self.computed - self.expected)

    @property
    def passed(self) -> bool:
        return self.difference <= self.tolerance

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "computed": self.computed,
            "expected": self.expected,
            "difference": self.difference,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class PaperReport:
    rows: tuple[ReportRow, ...]

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    def to_dict(self) -> dict[str, Any]:
        return {"passed": self.passed, "rows": [row.to_dict() for row in self.rows]}


# (name, expected decimal value, how to compute it)
CONSTANTS: tuple[tuple[str, float, Callable[[], float]], ...] = (
    ("sequence covering bound 2π/(2+√3)", 1.68357, theorem_bound),
    ("Kershner density 2π/√27", 1.20920, lambda: lattice_density(kershner_lattice())),
    ("crude crescent bound", 1.64204, crude_lower_bound),
    ("a*(6) = 1+√3/2", 1.86603, lambda: a_star(6)),
    ("area of M = √3/2+π/3", 1.91322, lambda: region_area(region_M())),
    ("crescent area", 1.91322, crescent_area),
    ("optimal lattice determinant 1+√3/2", 1.86603, lambda: lattice_det(optimal_lattice())),
    ("optimal lattice density", 1.68357, lambda: lattice_density(optimal_lattice())),
    ("dodecagon area coefficient 3(2+√3)", 11.19615, lambda: polygon_area(dodecagon(1))),
)


def reproduce_paper() -> PaperReport:
    """Recompute every constant and compare it with its decimal value."""
    rows = []
    for name, expected, compute in CONSTANTS:
        row = ReportRow(name=name, computed=compute(), expected=expected)
        if row.passed:
            logger.info(f"{name}: {row.computed:.8f} (expected {expected})")
        else:
            logger.warning(f"{name}: {row.computed:.8f} differs from {expected} by {row.difference:.2e}")
        rows.append(row)
    return PaperReport(rows=tuple(rows))


ConstantsReport = PaperReport
reproduce_constants = reproduce_paper
