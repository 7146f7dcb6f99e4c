"""Subcommand handlers; each one turns parsed arguments into a :class:`RunReport`."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from ..config import FSKitConfig
from ..services.core_fuzzy import FuzzySoftError
from ..services.ingestion import DataDirectoryIngestor


@dataclass(frozen=True)
class CommandContext:
    config: FSKitConfig
    ingestor: DataDirectoryIngestor


def parse_floats(text: Optional[str], name: str = "value") -> Optional[List[float]]:
    """``"1, 2.5,-3"`` as a list of floats; ``None`` passes through."""

    if text is None:
        return None
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise FuzzySoftError(f"Cannot read {name} {text!r} as comma-separated numbers") from None


def parse_labels(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


__all__ = ["CommandContext", "parse_floats", "parse_labels"]
