"""File formats: manifests, event logs, gridded logs, reports and plot series.

Manifest (JSON)::

    {"channels": [{"id": "ore", "role": "input", "unit_cost": 1.0}, ...],
     "time_unit": "h"}

Event log (CSV, header ``time,channel,quantity``), gridded log (CSV, header
``time,<id>,<id>,...`` on a uniform time grid, each cell a per-bin quantity),
report (JSON object) and plot series (CSV with the columns in
:data:`PLOT_COLUMNS`). Numbers are written in shortest round-trip form, so
output is byte-identical across runs.
"""
from __future__ import annotations

import csv
import json
import math
from bisect import bisect_right
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from pathlib import Path
from typing import IO, Iterator, NamedTuple

from .completion import determine_taco, integral_functions, physical_completion
from .errors import (
    IoError,
    NonFiniteValue,
    NonPositiveQuantity,
    NonUniformGrid,
    ParseError,
    UnknownChannel,
    ValidationError,
)
from .indicators import IndicatorReport
from .signals import (
    ChannelSpec,
    ImpulseTrain,
    OperationRecord,
    RegistrationEvent,
    cost_impulses,
    exact,
    validate_record,
)
from .threads import add, cumulate, integrate, split_signs

__all__ = [
    "Manifest",
    "PlotRow",
    "PlotSeries",
    "EVENTS_HEADER",
    "PLOT_COLUMNS",
    "load_manifest",
    "load_events",
    "load_gridded",
    "write_events",
    "report_json",
    "write_report",
    "plot_series",
    "write_plot",
]

EVENTS_HEADER = ("time", "channel", "quantity")
PLOT_COLUMNS = ("t", "re", "pe", "ire", "ipe", "ice", "ibe", "ide", "vre", "vpe", "vbe", "vde")
GRID_RTOL = 1e-9


@dataclass(frozen=True)
class Manifest:
    channels: tuple[ChannelSpec, ...]
    time_unit: str = ""

    def record(self, events=()) -> OperationRecord:
        return OperationRecord(self.channels, tuple(events))


@contextmanager
def _open(path, mode: str) -> Iterator[IO]:
    try:
        with open(path, mode, encoding="utf-8", newline="") as fh:
            yield fh
    except OSError as exc:
        raise IoError(f"{path}: {exc.strerror or exc}") from exc


def load_manifest(path) -> Manifest:
    with _open(path, "r") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("channels"), list):
        raise ParseError(f"{path}: expected an object with a 'channels' list")
    time_unit = doc.get("time_unit", "")
    if not isinstance(time_unit, str):
        raise ParseError(f"{path}: time_unit must be a string")

    channels = []
    seen = set()
    for pos, item in enumerate(doc["channels"]):
        if not isinstance(item, dict):
            raise ParseError(f"{path}: channel #{pos} is not an object")
        cid = item.get("id")
        if not isinstance(cid, str) or not cid:
            raise ValidationError(f"channel #{pos}: id must be a non-empty string")
        if cid in seen:
            raise ValidationError(f"channel {cid!r}: duplicate id")
        seen.add(cid)
        cost = item.get("unit_cost", 1.0)
        if isinstance(cost, bool) or not isinstance(cost, (int, float)):
            raise ValidationError(f"channel {cid!r}: unit_cost must be a number")
        try:
            channels.append(ChannelSpec(cid, item.get("role"), cost))
        except NonFiniteValue as exc:
            raise ValidationError(str(exc)) from None
    return Manifest(tuple(channels), time_unit)


def _parse_number(text: str, what: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"line {line}: {what} is not a number: {text!r}") from None
    if not math.isfinite(value):
        raise NonFiniteValue(f"line {line}: {what} is not finite: {text!r}")
    return value


def load_events(path, manifest: Manifest) -> OperationRecord:
    """Read an event log CSV into a validated record."""
    declared = {c.id for c in manifest.channels}
    events = []
    with _open(path, "r") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != EVENTS_HEADER:
            raise ParseError(f"line 1: header must be {','.join(EVENTS_HEADER)}, got {header}")
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 3:
                raise ParseError(f"line {line}: expected 3 fields, got {len(row)}")
            t = _parse_number(row[0], "time", line)
            channel = row[1].strip()
            q = _parse_number(row[2], "quantity", line)
            if channel not in declared:
                raise UnknownChannel(f"line {line}: undeclared channel {channel!r}")
            if q <= 0:
                raise NonPositiveQuantity(f"line {line}: quantity must be > 0, got {row[2].strip()}")
            events.append(RegistrationEvent(t, channel, q))
    return validate_record(manifest.record(events))


def load_gridded(path, manifest: Manifest, dt: Real | None = None) -> OperationRecord:
    """Read a gridded log; every nonzero cell becomes one registration."""
    declared = {c.id for c in manifest.channels}
    with _open(path, "r") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0].strip() != "time":
            raise ParseError(f"line 1: header must start with 'time', got {header}")
        ids = [h.strip() for h in header[1:]]
        for cid in ids:
            if cid not in declared:
                raise UnknownChannel(f"line 1: undeclared channel {cid!r}")
        if len(set(ids)) != len(ids):
            raise ParseError("line 1: duplicate channel column")

        times: list[tuple[float, int]] = []
        events = []
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise ParseError(f"line {line}: expected {len(header)} fields, got {len(row)}")
            t = _parse_number(row[0], "time", line)
            times.append((t, line))
            for cid, cell in zip(ids, row[1:]):
                if not cell.strip():
                    continue
                q = _parse_number(cell, cid, line)
                if q < 0:
                    raise NonPositiveQuantity(f"line {line}: negative quantity {cell.strip()} on {cid!r}")
                if q > 0:
                    events.append(RegistrationEvent(t, cid, q))

    _check_grid(times, dt)
    return validate_record(manifest.record(events))


def _check_grid(times: list[tuple[float, int]], dt: Real | None) -> None:
    if dt is not None and not (dt > 0 and math.isfinite(dt)):
        raise NonUniformGrid(f"dt must be positive and finite, got {dt!r}")
    if len(times) < 2:
        return
    step = float(dt) if dt is not None else times[1][0] - times[0][0]
    for (t0, _), (t1, line) in zip(times, times[1:]):
        gap = t1 - t0
        if gap <= 0 or abs(gap - step) > GRID_RTOL * max(1.0, abs(step)):
            raise NonUniformGrid(f"line {line}: time step {gap!r} differs from grid step {step!r}")


def _num(x) -> str:
    return repr(float(x))


def write_events(record: OperationRecord, path) -> None:
    record = validate_record(record)
    with _open(path, "w") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(EVENTS_HEADER)
        for ev in record.events:
            writer.writerow((_num(ev.time), ev.channel, _num(ev.quantity)))


def report_json(report: IndicatorReport) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


def write_report(report: IndicatorReport, path) -> None:
    with _open(path, "w") as fh:
        fh.write(report_json(report))


class PlotRow(NamedTuple):
    t: Fraction
    re: Fraction
    pe: Fraction
    ire: Fraction
    ipe: Fraction
    ice: Fraction
    ibe: Fraction
    ide: Fraction
    vre: Fraction
    vpe: Fraction
    vbe: Fraction
    vde: Fraction


@dataclass(frozen=True)
class PlotSeries:
    rows: tuple[PlotRow, ...]


def _window_sums(train: ImpulseTrain, times: list[Fraction]) -> list[Fraction]:
    """Sum of impulses in ``(times[k-1], times[k]]`` (``(-inf, times[0]]`` first)."""
    cum = [Fraction(0)]
    for a in train.amounts:
        cum.append(cum[-1] + a)
    idx = [bisect_right(train.times, t) for t in times]
    return [cum[k] - (cum[idx[i - 1]] if i else 0) for i, k in enumerate(idx)]


def plot_series(record: OperationRecord, sample_dt: Real | None = None) -> PlotSeries:
    """Sample every thread and integral function of ``record``.

    Rows fall on every breakpoint, on ``t_f`` and on the completion times;
    ``sample_dt`` adds a uniform grid over the same range.
    """
    record = validate_record(record)
    bounds = physical_completion(record)
    re, pe = cost_impulses(record)
    taco = determine_taco(re, pe, bounds.t_f)

    vre, vpe = integral_functions(re, pe)
    start = vre.knots[0][0]
    ire, ipe = cumulate(re), cumulate(pe)
    ice = add(ire, ipe)
    ibe, ide = split_signs(ice)
    vbe, vde = integrate(ibe, absolute=True, start=start), integrate(ide, start=start)

    times = {start, bounds.t_s, bounds.t_f, *re.times, *pe.times, *ice.times}
    if taco.effective:
        times.update((taco.t_a_numeric, taco.t_a_analytic))
    end = max(times)
    if sample_dt is not None:
        step = exact(sample_dt, "sample_dt")
        if step <= 0:
            raise ValueError("sample_dt must be positive")
        k = 0
        while start + k * step <= end:
            times.add(start + k * step)
            k += 1
    grid = sorted(times)

    re_sums, pe_sums = _window_sums(re, grid), _window_sums(pe, grid)
    rows = tuple(
        PlotRow(t, r, p, ire(t), ipe(t), ice(t), ibe(t), ide(t), vre(t), vpe(t), vbe(t), vde(t))
        for t, r, p in zip(grid, re_sums, pe_sums)
    )
    return PlotSeries(rows)


def write_plot(series: PlotSeries, path) -> None:
    with _open(path, "w") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PLOT_COLUMNS)
        for row in series.rows:
            writer.writerow(tuple(_num(x) for x in row))
