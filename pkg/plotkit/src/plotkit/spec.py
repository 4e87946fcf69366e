"""Plot specifications and their column contracts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


class SchemaMismatch(Exception):
    """Unknown kind or a CSV missing the columns its kind requires."""


KINDS = ("energy", "channel", "stationary", "blowup", "huygens")

REQUIRED_COLUMNS = {
    "energy": ("t", "E_m"),
    "channel": ("trial", "t", "surrogate_ratio"),
    "stationary": ("r", "Z", "dZ", "r2_defect"),
    "blowup": ("x", "y", "fit"),
    "huygens": ("R", "residual"),
}


@dataclass
class PlotSpec:
    kind: str
    csv: Path
    output: Path
    report: Path | None = None
    title: str | None = None
    xlabel: str | None = None
    ylabel: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaMismatch(f"unknown plot kind {self.kind!r}")
        self.csv = Path(self.csv)
        self.output = Path(self.output)
        if self.report is not None:
            self.report = Path(self.report)

    @classmethod
    def from_file(cls, path: Path) -> "PlotSpec":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {"kind", "csv", "output", "report", "title", "xlabel",
                 "ylabel"}
        unknown = set(doc) - known
        if unknown:
            raise SchemaMismatch(f"unknown spec fields: {sorted(unknown)}")
        for need in ("kind", "csv", "output"):
            if need not in doc:
                raise SchemaMismatch(f"spec is missing {need!r}")
        base = Path(path).parent
        doc["csv"] = base / doc["csv"]
        doc["output"] = base / doc["output"]
        if doc.get("report"):
            doc["report"] = base / doc["report"]
        return cls(**doc)

    @classmethod
    def from_report(cls, report_path: Path, output: Path) -> "PlotSpec":
        """Build a spec from an experiment report that names its series."""
        report_path = Path(report_path)
        doc = json.loads(report_path.read_text(encoding="utf-8"))
        kind = doc.get("plot_kind")
        series = doc.get("series")
        if kind is None or series is None:
            raise SchemaMismatch(
                f"{report_path} does not name a renderable series")
        return cls(kind=kind, csv=report_path.parent / series,
                   output=Path(output), report=report_path,
                   title=doc.get("experiment"))


def read_series(path: Path) -> tuple[list[str], dict[str, list[float]]]:
    """Small CSV reader: header + float columns."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise SchemaMismatch(f"{path}: empty file, not even a header")
    header = lines[0].split(",")
    columns: dict[str, list[float]] = {name: [] for name in header}
    for line in lines[1:]:
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != len(header):
            raise SchemaMismatch(f"{path}: ragged row {line!r}")
        for name, cell in zip(header, cells):
            columns[name].append(float(cell))
    return header, columns


def check_columns(kind: str, header: list[str], path: Path) -> None:
    missing = [c for c in REQUIRED_COLUMNS[kind] if c not in header]
    if missing:
        raise SchemaMismatch(
            f"{path}: kind {kind!r} needs columns {missing}, has {header}")
