"""Configuration management for planecover.

This module handles loading configuration from environment variables
and provides default values where appropriate.
"""

import logging
import os


class Config:
    """Application configuration loaded from environment variables."""

    # Geometric tolerance for containment/degeneracy predicates
    EPS: float = float(os.getenv("PLANECOVER_EPS", "1e-9"))

    # Inscribed-polygon oracle
    ORACLE_RESOLUTION: int = int(os.getenv("ORACLE_RESOLUTION", "240"))
    ORACLE_MAX_ITER: int = int(os.getenv("ORACLE_MAX_ITER", "4000"))

    # Voronoi clipping: initial neighbour query radius (2 + 2 for unit disks)
    VORONOI_NEIGHBOR_RADIUS: float = float(os.getenv("VORONOI_NEIGHBOR_RADIUS", "4.0"))

    # Lattice optimizer
    LATTICE_GRID_RESOLUTION: int = int(os.getenv("LATTICE_GRID_RESOLUTION", "400"))

    # Chain construction: disks allowed per inter-layer jump
    JUMP_MAX_POINTS: int = int(os.getenv("JUMP_MAX_POINTS", "4"))
    JUMP_FALLBACK_MAX_POINTS: int = int(os.getenv("JUMP_FALLBACK_MAX_POINTS", "8"))

    # HTTP server (`serve` subcommand)
    HOST: str = os.getenv("HOST", "127.0.0.1")
    PORT: int = int(os.getenv("PORT", "8080"))

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")

    @classmethod
    def validate(cls) -> list[str]:
        """Validate configuration.

        Returns:
            List of validation error messages (empty if valid)
        """
        errors = []

        if not 0 < cls.EPS <= 1e-6:
            errors.append("PLANECOVER_EPS must be in (0, 1e-6]")

        if cls.ORACLE_RESOLUTION < 100:
            errors.append("ORACLE_RESOLUTION must be at least 100")

        if cls.ORACLE_MAX_ITER < 1:
            errors.append("ORACLE_MAX_ITER must be at least 1")

        if cls.VORONOI_NEIGHBOR_RADIUS <= 0:
            errors.append("VORONOI_NEIGHBOR_RADIUS must be positive")

        if cls.LATTICE_GRID_RESOLUTION < 100:
            errors.append("LATTICE_GRID_RESOLUTION must be at least 100")

        if cls.JUMP_MAX_POINTS < 1:
            errors.append("JUMP_MAX_POINTS must be at least 1")

        if cls.JUMP_FALLBACK_MAX_POINTS < cls.JUMP_MAX_POINTS:
            errors.append("JUMP_FALLBACK_MAX_POINTS must not be smaller than JUMP_MAX_POINTS")

        if not isinstance(logging.getLevelName(cls.LOG_LEVEL.upper()), int):
            errors.append(f"LOG_LEVEL '{cls.LOG_LEVEL}' is not a valid logging level")

        if cls.PORT < 1 or cls.PORT > 65535:
            errors.append("PORT must be between 1 and 65535")

        return errors

    @classmethod
    def is_valid(cls) -> bool:
        """Check if configuration is valid.

        Returns:
            True if configuration is valid, False otherwise
        """
        return len(cls.validate()) == 0
