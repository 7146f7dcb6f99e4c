"""Runtime configuration read from the environment and an optional .env file."""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, Optional, Tuple

from dotenv import load_dotenv

from .services.fuzzy_real import DEFAULT_LEVELS, DEFAULT_SUPPORT_STEP, AlphaGrid
from .services.laws import SuiteSettings
from .services.topology import DEFAULT_LATTICE, ClosureSettings

LOGGER = logging.getLogger(__name__)

FORMATS = ("text", "json")


@dataclass(frozen=True)
class FSKitConfig:
    """Defaults shared by every command; CLI flags override them."""

    base_path: Path
    seed: int
    grid_levels: int
    tol: float
    grade_lattice: Tuple[float, ...]
    union_exhaustive_limit: int
    union_sample_draws: int
    oracle_step: float
    output_format: str
    log_level: str

    @classmethod
    def from_env(cls, base_path: Path) -> "FSKitConfig":
        """Load configuration from the environment and optional .env file."""

        env_path = base_path / ".env"
        load_dotenv(env_path, override=True)
        load_dotenv(override=True)

        def env(name: str, default: str) -> str:
            return os.getenv(name, default)

        def env_int(name: str, default: int) -> int:
            raw = os.getenv(name)
            if raw is None:
                return default
            try:
                return int(raw)
            except ValueError:
                LOGGER.warning("Invalid integer for %s=%s, falling back to %d", name, raw, default)
                return default

        def env_float(name: str, default: float) -> float:
            raw = os.getenv(name)
            if raw is None:
                return default
            try:
                return float(raw)
            except ValueError:
                LOGGER.warning("Invalid number for %s=%s, falling back to %g", name, raw, default)
                return default

        def env_lattice(name: str, default: Tuple[float, ...]) -> Tuple[float, ...]:
            raw = os.getenv(name)
            if raw is None:
                return default
            try:
                values = tuple(sorted({float(part) for part in raw.split(",") if part.strip()}))
            except ValueError:
                values = ()
            if not values or values[0] < 0.0 or values[-1] > 1.0:
                LOGGER.warning("Invalid grade lattice %s=%s, falling back to %s", name, raw, default)
                return default
            return values

        output_format = env("FSKIT_FORMAT", "text").lower()
        if output_format not in FORMATS:
            LOGGER.warning("Invalid format FSKIT_FORMAT=%s, falling back to text", output_format)
            output_format = "text"

        grid_levels = env_int("FSKIT_GRID", DEFAULT_LEVELS)
        if grid_levels < 2:
            LOGGER.warning("FSKIT_GRID=%d is below 2, falling back to %d", grid_levels, DEFAULT_LEVELS)
            grid_levels = DEFAULT_LEVELS

        return cls(
            base_path=base_path,
            seed=env_int("FSKIT_SEED", 0),
            grid_levels=grid_levels,
            tol=env_float("FSKIT_TOL", 1e-12),
            grade_lattice=env_lattice("FSKIT_GRADE_LATTICE", DEFAULT_LATTICE),
            union_exhaustive_limit=env_int("FSKIT_UNION_EXHAUSTIVE_LIMIT", 12),
            union_sample_draws=env_int("FSKIT_UNION_SAMPLE_DRAWS", 1000),
            oracle_step=env_float("FSKIT_ORACLE_STEP", DEFAULT_SUPPORT_STEP),
            output_format=output_format,
            log_level=env("FSKIT_LOG_LEVEL", "WARNING").upper(),
        )

    def with_overrides(
        self,
        *,
        seed: Optional[int] = None,
        grid_levels: Optional[int] = None,
        tol: Optional[float] = None,
        output_format: Optional[str] = None,
    ) -> "FSKitConfig":
        changes: Dict[str, object] = {}
        if seed is not None:
            changes["seed"] = seed
        if grid_levels is not None:
            changes["grid_levels"] = grid_levels
        if tol is not None:
            changes["tol"] = tol
        if output_format is not None:
            changes["output_format"] = output_format
        return replace(self, **changes)

    def alpha_grid(self) -> AlphaGrid:
        return AlphaGrid.uniform(self.grid_levels)

    def closure_settings(self) -> ClosureSettings:
        return ClosureSettings(self.union_exhaustive_limit, self.union_sample_draws, self.seed)

    def suite_settings(self) -> SuiteSettings:
        return SuiteSettings(self.grid_levels, self.oracle_step, self.closure_settings())

    def summary(self) -> Dict[str, object]:
        return {
            "seed": self.seed,
            "grid": self.grid_levels,
            "tol": self.tol,
            "grade_lattice": list(self.grade_lattice),
            "oracle_step": self.oracle_step,
        }


__all__ = ["FORMATS", "FSKitConfig"]
