"""Covering density of finite disk families measured on growing squares.

For a square λI = [−λ, λ]², N_λ counts the unit disks meeting its interior
and γ(λ) = N_λ·π / (4λ²). Boundary effects decay like 1/λ, so the limit is
estimated from a least-squares fit γ(λ) ≈ g∞ + b/λ.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

from src.config import Config
from src.geometry_core import Point

logger = logging.getLogger(__name__)

Centers = Union[Sequence[Point], np.ndarray]


def _coordinates(centers: Centers) -> np.ndarray:
    if isinstance(centers, np.ndarray):
        return centers.astype(float).reshape(-1, 2)
    return np.array([p.as_tuple() for p in centers], dtype=float).reshape(-1, 2)


def unique_centers(centers: Centers) -> np.ndarray:
    """Center coordinates with coincident centers (within EPS) counted once."""
    coords = _coordinates(centers)
    if len(coords) < 2:
        return coords
    drop = {j for _, j in cKDTree(coords).query_pairs(r=Config.EPS)}
    if not drop:
        return coords
    keep = np.ones(len(coords), dtype=bool)
    keep[list(drop)] = False
    return coords[keep]


def _check_lambda(lam: float) -> None:
    if not lam > 0:
        raise ValueError(f"Square half-side must be positive, got {lam}")


def _count(coords: np.ndarray, lam: float) -> int:
    dx = np.maximum(np.abs(coords[:, 0]) - lam, 0.0)
    dy = np.maximum(np.abs(coords[:, 1]) - lam, 0.0)
    return int(np.count_nonzero(np.hypot(dx, dy) < 1.0))


def count_intersecting(centers: Centers, lam: float) -> int:
    """Number of distinct unit disks meeting the open square Int([−λ, λ]²).

    Raises:
        ValueError: If λ <= 0
    """
    _check_lambda(lam)
    return _count(unique_centers(centers), lam)


def gamma(centers: Centers, lam: float) -> float:
    """Density ratio N_λ·π / (4λ²).

    Raises:
        ValueError: If λ <= 0
    """
    return count_intersecting(centers, lam) * math.pi / (4.0 * lam * lam)


@dataclass(frozen=True)
class DensityRow:
    lam: float
    count: int
    gamma: float


@dataclass(frozen=True)
class DensityTable:
    """Density samples with strictly increasing λ."""

    rows: tuple[DensityRow, ...] = field(default_factory=tuple)
    extent_warning: bool = False

    def __post_init__(self):
        lams = [row.lam for row in self.rows]
        if any(b <= a for a, b in zip(lams, lams[1:])):
            raise ValueError(f"Density table λ values must be strictly increasing, got {lams}")

    def __len__(self) -> int:
        return len(self.rows)

    def is_consistent(self) -> bool:
        """Whether every row satisfies γ = N·π / (4λ²) within 1e-12."""
        return all(
            abs(row.gamma - row.count * math.pi / (4.0 * row.lam**2)) <= 1e-12 for row in self.rows
        )


def density_sweep(centers: Centers, lambdas: Sequence[float]) -> DensityTable:
    """One density row per λ.

    The table is flagged with `extent_warning` when no center lies as far
    out as the largest square's corner plus one, since disks beyond the
    family's extent would then be missing from the counts.

    Raises:
        ValueError: If lambdas is empty, non-positive or not strictly increasing
    """
    if len(lambdas) == 0:
        raise ValueError("At least one λ is required")
    for lam in lambdas:
        _check_lambda(lam)
    if any(b <= a for a, b in zip(lambdas, lambdas[1:])):
        raise ValueError(f"λ values must be strictly increasing, got {list(lambdas)}")

    coords = unique_centers(centers)
    rows = []
    for lam in lambdas:
        count = _count(coords, lam)
        rows.append(DensityRow(lam=float(lam), count=count, gamma=count * math.pi / (4.0 * lam * lam)))
        logger.debug(f"λ={lam}: N={count}, γ={rows[-1].gamma:.6f}")

    extent = float(np.max(np.hypot(coords[:, 0], coords[:, 1]))) if len(coords) else 0.0
    needed = lambdas[-1] * math.sqrt(2.0) + 1.0
    warning = extent < needed
    if warning:
        logger.warning(
            f"Centers reach only {extent:.3f} but λ={lambdas[-1]} needs {needed:.3f}; "
            "counts near the largest squares are truncated"
        )
    return DensityTable(rows=tuple(rows), extent_warning=warning)


def density_fit(table: DensityTable) -> tuple[float, float]:
    """Least-squares (g∞, b) for γ(λ) ≈ g∞ + b/λ.

    Raises:
        ValueError: With fewer than three rows
    """
    if len(table) < 3:
        raise ValueError(f"Extrapolation needs at least 3 rows, got {len(table)}")
    lams = np.array([row.lam for row in table.rows])
    values = np.array([row.gamma for row in table.rows])
    design = np.column_stack([np.ones_like(lams), 1.0 / lams])
    (limit, slope), *_ = np.linalg.lstsq(design, values, rcond=None)
    return float(limit), float(slope)


def extrapolate_density(table: DensityTable) -> float:
    """Estimated λ → ∞ density of the family behind `table`."""
    limit, slope = density_fit(table)
    logger.info(f"Extrapolated density {limit:.6f} (boundary term {slope:.4f}/λ)")
    return limit
