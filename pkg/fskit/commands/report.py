"""The report every command prints, in text or JSON form."""
from __future__ import annotations

import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class RunReport(BaseModel):
    """Fields are emitted in declaration order; only ``timing_seconds`` varies between identical runs."""

    command: str
    seed: int
    inputs_digest: Optional[str] = None
    ok: bool = True
    verdicts: Dict[str, Any] = Field(default_factory=dict)
    witnesses: Dict[str, Any] = Field(default_factory=dict)
    table: List[Dict[str, Any]] = Field(default_factory=list)
    output: Optional[str] = None
    error: Optional[str] = None
    timing_seconds: float = 0.0

    def fail(self, error: Exception) -> "RunReport":
        self.ok = False
        self.error = f"{type(error).__name__}: {error}"
        return self

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def deterministic_dict(self) -> Dict[str, Any]:
        return self.model_dump(exclude={"timing_seconds"})

    def render(self, output_format: str = "text") -> str:
        if output_format == "json":
            return self.model_dump_json(indent=2)
        return format_text(self)


def _inline(value: Any) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _format_cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, list):
        return "(" + ", ".join(_format_cell(v) for v in value) + ")"
    return _inline(value)


def format_table(rows: List[Dict[str, Any]]) -> List[str]:
    if not rows:
        return []
    columns = list(rows[0])
    cells = [[_format_cell(row.get(column, "")) for column in columns] for row in rows]
    widths = [max(len(column), *(len(line[i]) for line in cells)) for i, column in enumerate(columns)]
    lines = ["  ".join(column.rjust(width) for column, width in zip(columns, widths))]
    lines.extend("  ".join(cell.rjust(width) for cell, width in zip(line, widths)) for line in cells)
    return lines


def format_text(report: RunReport) -> str:
    """``key: value`` lines followed by the table, if any."""

    lines = [f"command: {report.command}", f"ok: {_inline(report.ok)}", f"seed: {report.seed}"]
    if report.inputs_digest:
        lines.append(f"inputs_digest: {report.inputs_digest}")
    for key, value in report.verdicts.items():
        lines.append(f"{key}: {_inline(value)}")
    for key, value in report.witnesses.items():
        lines.append(f"witness.{key}: {_inline(value)}")
    if report.output:
        lines.append(f"output: {report.output}")
    if report.error:
        lines.append(f"error: {report.error}")
    lines.extend(format_table(report.table))
    return "\n".join(lines)


__all__ = ["RunReport", "format_table", "format_text"]
