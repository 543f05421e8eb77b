"""Operation logs and their reduction to impulse trains.

An operation log lists the products crossing the boundary of the system
(channels, each an input or an output with a unit cost estimate) and the
registrations of product quantities on those channels. Registrations are
treated as instantaneous deliveries, so every signal derived from a log is a
finite train of timestamped impulses.

Two signed views of the same log are provided:

* the cost domain (:func:`cost_impulses`): inputs negative, outputs positive,
  amounts scaled by unit cost;
* the reserve domain (:func:`reserve_impulses`): inputs positive (stock
  enters the system), outputs negative, raw quantities.

All numbers are held as :class:`fractions.Fraction`. Floats convert exactly,
so no rounding is introduced anywhere downstream.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Real
from typing import Iterable, Iterator

from .errors import NonFiniteValue, NonPositiveQuantity, UnknownChannel, ValidationError

__all__ = [
    "Role",
    "ChannelSpec",
    "RegistrationEvent",
    "OperationRecord",
    "ImpulseTrain",
    "exact",
    "validate_record",
    "cost_impulses",
    "reserve_impulses",
]


def exact(value: Real, what: str = "value") -> Fraction:
    """Convert a real number to a Fraction without rounding.

    Raises NonFiniteValue for nan/inf.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or not isinstance(value, (Real, str)):
        raise TypeError(f"{what} must be a real number, got {value!r}")
    if isinstance(value, float) and not math.isfinite(value):
        raise NonFiniteValue(f"{what} is not finite: {value!r}")
    try:
        return Fraction(value)
    except (OverflowError, ValueError) as exc:
        raise NonFiniteValue(f"{what} is not finite: {value!r}") from exc


class Role(str, Enum):
    INPUT = "input"
    OUTPUT = "output"


@dataclass(frozen=True)
class ChannelSpec:
    """A product crossing the system boundary.

    ``unit_cost`` is the cost estimate of one quantity unit (``rs`` for an
    input, ``ps`` for an output).
    """

    id: str
    role: Role
    unit_cost: Fraction = Fraction(1)

    def __post_init__(self):
        try:
            role = Role(self.role)
        except ValueError:
            raise ValidationError(
                f"channel {self.id!r}: role must be 'input' or 'output', got {self.role!r}"
            ) from None
        object.__setattr__(self, "role", role)
        cost = exact(self.unit_cost, f"channel {self.id!r} unit_cost")
        if cost < 0:
            raise ValidationError(f"channel {self.id!r}: unit_cost must be >= 0, got {self.unit_cost!r}")
        object.__setattr__(self, "unit_cost", cost)

    @property
    def is_input(self) -> bool:
        return self.role is Role.INPUT


@dataclass(frozen=True)
class RegistrationEvent:
    """A quantity of product registered on ``channel`` at ``time``.

    Values are checked by :func:`validate_record`, not here, so that
    malformed logs can still be represented and reported.
    """

    time: Real
    channel: str
    quantity: Real


@dataclass(frozen=True)
class OperationRecord:
    channels: tuple[ChannelSpec, ...]
    events: tuple[RegistrationEvent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        object.__setattr__(self, "events", tuple(self.events))

    def channel(self, channel_id: str) -> ChannelSpec:
        for spec in self.channels:
            if spec.id == channel_id:
                return spec
        raise UnknownChannel(f"event references undeclared channel {channel_id!r}")

    @property
    def is_well_formed(self) -> bool:
        """True when at least one input and one output registration exist."""
        roles = {self.channel(ev.channel).role for ev in self.events}
        return roles == {Role.INPUT, Role.OUTPUT}


def validate_record(record: OperationRecord) -> OperationRecord:
    """Check a record and return its canonical form.

    Events are sorted by time (ties by channel declaration order), quantities
    and times are converted to exact Fractions, and registrations on the same
    channel at the same time are merged by summing quantities.
    """
    if getattr(record, "_canonical", False):
        return record
    order: dict[str, int] = {}
    for pos, spec in enumerate(record.channels):
        if spec.id in order:
            raise ValidationError(f"duplicate channel id {spec.id!r}")
        order[spec.id] = pos

    merged: dict[tuple[Fraction, str], Fraction] = {}
    for ev in record.events:
        if ev.channel not in order:
            raise UnknownChannel(f"event references undeclared channel {ev.channel!r}")
        t = exact(ev.time, f"time of event on {ev.channel!r}")
        q = exact(ev.quantity, f"quantity of event on {ev.channel!r}")
        if q <= 0:
            raise NonPositiveQuantity(
                f"quantity must be > 0, got {ev.quantity!r} on {ev.channel!r} at t={ev.time!r}"
            )
        key = (t, ev.channel)
        merged[key] = merged.get(key, Fraction(0)) + q

    events = [RegistrationEvent(t, ch, q) for (t, ch), q in merged.items()]
    events.sort(key=lambda ev: (ev.time, order[ev.channel]))
    out = OperationRecord(record.channels, tuple(events))
    object.__setattr__(out, "_canonical", True)
    return out


class ImpulseTrain:
    """Sorted, merged sequence of ``(time, amount)`` impulses.

    Impulses at equal times are summed and zero amounts dropped, so two
    trains describing the same signal compare equal.

    >>> ImpulseTrain([(5, 1), (2, -2), (5, 3)])
    ImpulseTrain([(2, -2), (5, 4)])
    """

    __slots__ = ("_impulses",)

    def __init__(self, impulses: Iterable[tuple[Real, Real]] = ()):
        acc: dict[Fraction, Fraction] = {}
        for t, a in impulses:
            t = exact(t, "impulse time")
            acc[t] = acc.get(t, Fraction(0)) + exact(a, "impulse amount")
        self._impulses = tuple((t, acc[t]) for t in sorted(acc) if acc[t] != 0)

    @property
    def impulses(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return self._impulses

    @property
    def times(self) -> tuple[Fraction, ...]:
        return tuple(t for t, _ in self._impulses)

    @property
    def amounts(self) -> tuple[Fraction, ...]:
        return tuple(a for _, a in self._impulses)

    @property
    def total(self) -> Fraction:
        return sum((a for _, a in self._impulses), Fraction(0))

    @property
    def magnitude(self) -> Fraction:
        """Sum of absolute amounts."""
        return sum((abs(a) for _, a in self._impulses), Fraction(0))

    def moment(self) -> Fraction:
        """Sum of ``|amount| * time`` over all impulses."""
        return sum((abs(a) * t for t, a in self._impulses), Fraction(0))

    def shifted(self, delta: Real) -> ImpulseTrain:
        d = exact(delta)
        return ImpulseTrain((t + d, a) for t, a in self._impulses)

    def scaled(self, factor: Real) -> ImpulseTrain:
        k = exact(factor)
        return ImpulseTrain((t, a * k) for t, a in self._impulses)

    def __len__(self) -> int:
        return len(self._impulses)

    def __iter__(self) -> Iterator[tuple[Fraction, Fraction]]:
        return iter(self._impulses)

    def __bool__(self) -> bool:
        return bool(self._impulses)

    def __eq__(self, other) -> bool:
        if isinstance(other, ImpulseTrain):
            return self._impulses == other._impulses
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._impulses)

    def __repr__(self) -> str:
        body = ", ".join(f"({_fmt(t)}, {_fmt(a)})" for t, a in self._impulses)
        return f"ImpulseTrain([{body}])"


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else str(x)


def cost_impulses(record: OperationRecord) -> tuple[ImpulseTrain, ImpulseTrain]:
    """Return ``(re, pe)``: input and output registrations in cost values.

    Input impulses are negative (``-rs * qty``), output impulses positive
    (``+ps * qty``). Zero-cost channels contribute nothing.
    """
    record = validate_record(record)
    re, pe = [], []
    for ev in record.events:
        spec = record.channel(ev.channel)
        if spec.unit_cost == 0:
            continue
        value = spec.unit_cost * ev.quantity
        if spec.is_input:
            re.append((ev.time, -value))
        else:
            pe.append((ev.time, value))
    return ImpulseTrain(re), ImpulseTrain(pe)


def reserve_impulses(record: OperationRecord) -> ImpulseTrain:
    """Quantity flow into the system's internal reserve (inputs +, outputs -)."""
    record = validate_record(record)
    return ImpulseTrain(
        (ev.time, ev.quantity if record.channel(ev.channel).is_input else -ev.quantity)
        for ev in record.events
    )
