"""Indicator file ingestion, alignment, and display normalization.

Sources are delimited text files with a header, an ISO-8601 ``date``
column, and one named value column. Files arrive messy: duplicated
dates, unparseable cells, gaps. Nothing is dropped silently; every
rejected row lands in a report with a reason, and every aligned day
carries a flag saying whether its value was observed, forward-filled,
or is still missing.
"""

from __future__ import annotations

import csv
import math
import sys
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .forecasting.series import DailySeries

FREQUENCIES = ("daily", "weekly", "monthly")

#: Fill flags: value seen in the file, copied forward over a short gap,
#: or absent because the gap was too long to trust a copy.
OBSERVED, FILLED, MISSING = "observed", "filled", "missing"

#: Forward-fill limit per sampling frequency: one missed report is
#: tolerable, a longer silence is reported as missing.
DEFAULT_MAX_GAP = {"daily": 7, "weekly": 7, "monthly": 31}


class IngestError(ValueError):
    """A source file, registry, or alignment request is unusable."""


@dataclass(frozen=True)
class IndicatorSource:
    """Registry entry describing one indicator file."""

    source_id: str
    path: str
    frequency: str
    value_column: str
    units: str = ""
    name: str = ""

    def validate(self) -> None:
        if not self.source_id:
            raise IngestError("source_id must be non-empty")
        if self.frequency not in FREQUENCIES:
            raise IngestError(
                f"{self.source_id}: frequency must be one of {FREQUENCIES}, "
                f"got {self.frequency!r}"
            )
        if not self.value_column:
            raise IngestError(f"{self.source_id}: value_column must be non-empty")

    @property
    def max_gap(self) -> int:
        return DEFAULT_MAX_GAP[self.frequency]


def load_source_registry(path: str | Path) -> list[IndicatorSource]:
    """Read a TOML registry: one [[source]] block per indicator file."""
    raw = Path(path).read_bytes()
    try:
        doc = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise IngestError(f"{path}: {exc}") from exc
    blocks = doc.get("source")
    if not isinstance(blocks, list) or not blocks:
        raise IngestError(f"{path}: expected at least one [[source]] block")
    sources = []
    base = Path(path).parent
    for block in blocks:
        src = IndicatorSource(
            source_id=str(block.get("id", "")),
            path=str(base / block.get("file", "")),
            frequency=str(block.get("frequency", "daily")),
            value_column=str(block.get("value_column", "value")),
            units=str(block.get("units", "")),
            name=str(block.get("name", "")),
        )
        src.validate()
        sources.append(src)
    ids = [s.source_id for s in sources]
    if len(set(ids)) != len(ids):
        raise IngestError(f"{path}: duplicate source ids")
    return sources


@dataclass(frozen=True)
class RawRecord:
    day: date
    value: float
    source_id: str


@dataclass
class IngestReport:
    """Everything that happened while reading and aligning one source."""

    source_id: str
    rows_read: int = 0
    accepted: int = 0
    rejected: list[tuple[int, str]] = field(default_factory=list)  # (line, reason)
    gap_count: int = 0
    longest_gap: int = 0
    fill_count: int = 0


def parse_indicator_file(source: IndicatorSource) -> tuple[list[RawRecord], IngestReport]:
    """Read one source file into date-sorted records plus a rejection report.

    Duplicate dates keep the last row; earlier ones are rejected with
    reason ``duplicate``. Rows that cannot be parsed are rejected with
    a reason naming the bad cell. A file yielding zero accepted rows is
    an error because alignment would have nothing to work with.
    """
    source.validate()
    path = Path(source.path)
    if not path.exists():
        raise IngestError(f"{source.source_id}: file not found: {path}")
    report = IngestReport(source_id=source.source_id)

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in ("date", source.value_column):
            if column not in header:
                raise IngestError(
                    f"{source.source_id}: column {column!r} not in header {header}"
                )
        kept: dict[date, tuple[int, float]] = {}  # day -> (line, value)
        for line, row in enumerate(reader, start=2):  # header is line 1
            report.rows_read += 1
            raw_date = (row.get("date") or "").strip()
            raw_value = (row.get(source.value_column) or "").strip()
            try:
                day = date.fromisoformat(raw_date)
            except ValueError:
                report.rejected.append((line, f"unparseable date {raw_date!r}"))
                continue
            if raw_value == "":
                report.rejected.append((line, "missing value"))
                continue
            try:
                value = float(raw_value)
            except ValueError:
                report.rejected.append((line, f"unparseable value {raw_value!r}"))
                continue
            if not math.isfinite(value):
                report.rejected.append((line, f"non-finite value {raw_value!r}"))
                continue
            if day in kept:
                old_line, _ = kept[day]
                report.rejected.append(
                    (old_line, f"duplicate of {day.isoformat()}, later row wins")
                )
            kept[day] = (line, value)

    report.accepted = len(kept)
    if report.rows_read != report.accepted + len(report.rejected):
        raise IngestError(f"{source.source_id}: row accounting does not balance")
    if report.accepted == 0:
        raise IngestError(f"{source.source_id}: no usable rows in {path}")
    records = [
        RawRecord(day=day, value=value, source_id=source.source_id)
        for day, (_, value) in sorted(kept.items())
    ]
    return records, report


@dataclass
class IndicatorSeries:
    """One indicator on a daily grid with a per-day fill flag."""

    source_id: str
    start: date
    values: np.ndarray  # NaN where flag is MISSING
    flags: tuple[str, ...]
    units: str = ""

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if len(self.values) != len(self.flags):
            raise IngestError(f"{self.source_id}: values and flags disagree in length")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> date:
        return self.start + timedelta(days=len(self.values) - 1)

    def dates(self) -> list[date]:
        return [self.start + timedelta(days=i) for i in range(len(self.values))]

    def to_daily_series(self) -> DailySeries:
        return DailySeries(
            name=self.source_id, start=self.start, values=self.values, units=self.units
        )


def align_daily(
    records: Sequence[RawRecord],
    source: IndicatorSource,
    span: tuple[date, date],
    max_gap: int | None = None,
    report: IngestReport | None = None,
) -> IndicatorSeries:
    """Project records onto the daily grid ``span`` (inclusive ends).

    Days without an observation copy the most recent one if it is at
    most ``max_gap`` days old (flag ``filled``), otherwise they stay
    NaN (flag ``missing``). Observations before the span may seed the
    fill. Gap statistics are added to ``report`` when given.
    """
    if not records:
        raise IngestError(f"{source.source_id}: no records to align")
    if max_gap is None:
        max_gap = source.max_gap
    if max_gap < 0:
        raise IngestError(f"{source.source_id}: max_gap must be >= 0, got {max_gap}")
    start, end = span
    if end < start:
        raise IngestError(f"{source.source_id}: span end {end} before start {start}")

    by_day = {r.day: r.value for r in records}
    n = (end - start).days + 1
    values = np.full(n, np.nan)
    flags: list[str] = []
    last_seen: tuple[date, float] | None = None
    for r in sorted(by_day):  # seed fill state from records before the span
        if r < start:
            last_seen = (r, by_day[r])
        else:
            break

    for i in range(n):
        day = start + timedelta(days=i)
        if day in by_day:
            values[i] = by_day[day]
            flags.append(OBSERVED)
            last_seen = (day, by_day[day])
        elif last_seen is not None and (day - last_seen[0]).days <= max_gap:
            values[i] = last_seen[1]
            flags.append(FILLED)
        else:
            flags.append(MISSING)

    if report is not None:
        run = 0
        runs: list[int] = []
        for flag in flags:
            if flag == OBSERVED:
                if run:
                    runs.append(run)
                run = 0
            else:
                run += 1
        if run:
            runs.append(run)
        report.gap_count = len(runs)
        report.longest_gap = max(runs, default=0)
        report.fill_count = flags.count(FILLED)

    return IndicatorSeries(
        source_id=source.source_id,
        start=start,
        values=values,
        flags=tuple(flags),
        units=source.units,
    )


def ingest_source(
    source: IndicatorSource,
    span: tuple[date, date],
    max_gap: int | None = None,
) -> tuple[IndicatorSeries, IngestReport]:
    """Parse and align one source in a single call."""
    records, report = parse_indicator_file(source)
    series = align_daily(records, source, span, max_gap=max_gap, report=report)
    return series, report


@dataclass
class Panel:
    """Several indicators on one shared daily grid, columns sorted by id."""

    start: date
    columns: tuple[str, ...]
    values: np.ndarray  # (days, columns)
    flags: np.ndarray  # (days, columns), dtype str

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> date:
        return self.start + timedelta(days=len(self.values) - 1)

    def dates(self) -> list[date]:
        return [self.start + timedelta(days=i) for i in range(len(self.values))]

    def row_has_missing(self) -> np.ndarray:
        return (self.flags == MISSING).any(axis=1)

    def column_series(self, source_id: str) -> IndicatorSeries:
        if source_id not in self.columns:
            raise IngestError(f"panel has no column {source_id!r}")
        j = self.columns.index(source_id)
        return IndicatorSeries(
            source_id=source_id,
            start=self.start,
            values=self.values[:, j].copy(),
            flags=tuple(self.flags[:, j]),
        )

    def coverage(self) -> dict[str, dict[str, int]]:
        out = {}
        for j, column in enumerate(self.columns):
            col = self.flags[:, j]
            out[column] = {
                OBSERVED: int((col == OBSERVED).sum()),
                FILLED: int((col == FILLED).sum()),
                MISSING: int((col == MISSING).sum()),
            }
        return out


def build_panel(
    series_list: Sequence[IndicatorSeries],
    span: tuple[date, date] | None = None,
) -> Panel:
    """Join aligned series over the date range they all cover.

    The range is the intersection of the series' own ranges (clipped to
    ``span`` when given); an empty intersection is an error. Column
    order is sorted by source id so the panel is independent of input
    order.
    """
    if not series_list:
        raise IngestError("cannot build a panel from zero series")
    ids = [s.source_id for s in series_list]
    if len(set(ids)) != len(ids):
        raise IngestError("duplicate source ids in panel input")

    start = max(s.start for s in series_list)
    end = min(s.end for s in series_list)
    if span is not None:
        start = max(start, span[0])
        end = min(end, span[1])
    if end < start:
        raise IngestError("series date ranges do not overlap")

    by_id = {s.source_id: s for s in series_list}
    columns = tuple(sorted(by_id))
    n = (end - start).days + 1
    values = np.empty((n, len(columns)))
    flags = np.empty((n, len(columns)), dtype="U8")
    for j, column in enumerate(columns):
        s = by_id[column]
        offset = (start - s.start).days
        values[:, j] = s.values[offset : offset + n]
        flags[:, j] = s.flags[offset : offset + n]
    return Panel(start=start, columns=columns, values=values, flags=flags)


def export_panel_csv(panel: Panel, path: str | Path) -> Path:
    """Write the panel plus a fill-mask sidecar next to it."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", *panel.columns])
        for i, day in enumerate(panel.dates()):
            row = [day.isoformat()]
            for j in range(len(panel.columns)):
                v = panel.values[i, j]
                row.append("" if math.isnan(v) else str(float(v)))
            writer.writerow(row)
    mask_path = path.with_name(path.stem + ".mask" + path.suffix)
    with open(mask_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", *panel.columns])
        for i, day in enumerate(panel.dates()):
            writer.writerow([day.isoformat(), *panel.flags[i]])
    return mask_path


def load_panel_csv(path: str | Path) -> Panel:
    """Rebuild a panel from its CSV and mask sidecar."""
    path = Path(path)
    mask_path = path.with_name(path.stem + ".mask" + path.suffix)
    if not path.exists() or not mask_path.exists():
        raise IngestError(f"panel files not found at {path}")

    def read(p: Path) -> tuple[list[str], list[list[str]]]:
        with open(p, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        if not rows:
            raise IngestError(f"{p}: empty file")
        return rows[0], rows[1:]

    header, body = read(path)
    mask_header, mask_body = read(mask_path)
    if header != mask_header or len(body) != len(mask_body):
        raise IngestError(f"{path}: mask sidecar does not match panel")
    if not body:
        raise IngestError(f"{path}: panel has no rows")
    columns = tuple(header[1:])
    start = date.fromisoformat(body[0][0])
    values = np.array(
        [[np.nan if cell == "" else float(cell) for cell in row[1:]] for row in body]
    )
    flags = np.array([row[1:] for row in mask_body], dtype="U8")
    return Panel(start=start, columns=columns, values=values, flags=flags)


@dataclass
class NormalizedSeries:
    """Min-max scaled copy of an indicator for plotting on a shared axis."""

    source_id: str
    start: date
    values: np.ndarray  # in [0, 1]; NaN where missing
    flags: tuple[str, ...]
    degenerate: bool  # constant input: every value pinned to 0.5


def normalize_for_display(series: IndicatorSeries) -> NormalizedSeries:
    """Scale observed min..max onto 0..1, preserving order.

    A constant series has no spread to scale, so every non-missing
    entry becomes 0.5 and the result is marked degenerate.
    """
    flags = np.array(series.flags)
    observed = series.values[flags == OBSERVED]
    if observed.size == 0:
        raise IngestError(f"{series.source_id}: nothing observed to normalize")
    lo = float(observed.min())
    hi = float(observed.max())
    present = flags != MISSING
    out = np.full(len(series.values), np.nan)
    if hi == lo:
        out[present] = 0.5
        degenerate = True
    else:
        out[present] = (series.values[present] - lo) / (hi - lo)
        degenerate = False
    return NormalizedSeries(
        source_id=series.source_id,
        start=series.start,
        values=out,
        flags=series.flags,
        degenerate=degenerate,
    )
