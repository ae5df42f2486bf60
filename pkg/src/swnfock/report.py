"""Tabular verification reports."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field


@dataclass
class VerificationReport:
    """A table of measurements plus named pass/fail checks.

    ``rows`` hold one dict per table row keyed by ``columns``; ``values``
    carries scalar results (reference values, iterated limits, ...).
    """

    name: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    values: dict = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def column(self, name: str) -> list:
        return [row[name] for row in self.rows]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "columns": list(self.columns),
            "rows": [[row[c] for c in self.columns] for row in self.rows],
            "values": dict(self.values),
            "checks": dict(self.checks),
            "passed": self.passed,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell(row[c]) for c in self.columns])
        return buf.getvalue()


def _cell(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, complex):
        return f"{x.real:.17g}{x.imag:+.17g}j"
    return str(x)
