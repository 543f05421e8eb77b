"""Threads and their integral functions.

A *thread* is the running total of an impulse train: a right-continuous
step function. The *integral function* of a thread is its running integral,
an exact continuous piecewise-linear function. Both are stored with exact
Fraction breakpoints, so identities between them hold exactly rather than to
a floating tolerance.

Cost-domain constructions::

    ire = cumulate(re)          ipe = cumulate(pe)
    ice = add(ire, ipe)         ibe, ide = split_signs(ice)
    vre = integrate(ire, absolute=True)      vpe = integrate(ipe)
    vbe = integrate(ibe, absolute=True)      vde = integrate(ide)

For every ``t``, ``vde(t) - vbe(t) == vpe(t) - vre(t)``; both equal the
integral of ``ice``.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from numbers import Real
from typing import Callable, Iterable, Sequence

from .signals import ImpulseTrain, exact

__all__ = [
    "StepFunction",
    "PiecewiseLinear",
    "cumulate",
    "add",
    "split_signs",
    "integrate",
    "evaluate",
    "subtract",
]

ZERO = Fraction(0)


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous piecewise-constant function.

    ``initial_level`` holds for ``t`` before the first breakpoint; at each
    breakpoint ``(time, level)`` the function jumps to ``level``. The
    constructor coalesces breakpoints that do not change the level, so
    equal functions have equal representations.
    """

    initial_level: Fraction = ZERO
    breakpoints: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        level = exact(self.initial_level, "initial_level")
        object.__setattr__(self, "initial_level", level)
        canon = []
        prev_t = None
        for t, lvl in self.breakpoints:
            t, lvl = exact(t, "breakpoint time"), exact(lvl, "breakpoint level")
            if prev_t is not None and t <= prev_t:
                raise ValueError("breakpoint times must be strictly increasing")
            prev_t = t
            if lvl != level:
                canon.append((t, lvl))
                level = lvl
        object.__setattr__(self, "breakpoints", tuple(canon))

    @cached_property
    def times(self) -> tuple[Fraction, ...]:
        return tuple(t for t, _ in self.breakpoints)

    @property
    def final_level(self) -> Fraction:
        return self.breakpoints[-1][1] if self.breakpoints else self.initial_level

    def __call__(self, t: Real) -> Fraction:
        i = bisect_right(self.times, exact(t))
        return self.breakpoints[i - 1][1] if i else self.initial_level

    def map(self, fn: Callable[[Fraction], Fraction]) -> StepFunction:
        """Apply ``fn`` to every level."""
        return StepFunction(fn(self.initial_level), tuple((t, fn(v)) for t, v in self.breakpoints))

    def shifted(self, delta: Real) -> StepFunction:
        d = exact(delta)
        return StepFunction(self.initial_level, tuple((t + d, v) for t, v in self.breakpoints))


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous piecewise-linear function through ``knots``.

    Outside the knot range the function continues with ``head_slope`` (before
    the first knot) and ``tail_slope`` (after the last). Both default to the
    slope of the adjacent segment, or 0 for a single knot.
    """

    knots: tuple[tuple[Fraction, Fraction], ...]
    head_slope: Fraction | None = None
    tail_slope: Fraction | None = None

    def __post_init__(self):
        knots = tuple((exact(t, "knot time"), exact(v, "knot value")) for t, v in self.knots)
        if not knots:
            raise ValueError("a piecewise-linear function needs at least one knot")
        if any(b[0] <= a[0] for a, b in zip(knots, knots[1:])):
            raise ValueError("knot times must be strictly increasing")
        object.__setattr__(self, "knots", knots)
        if self.head_slope is None:
            head = _slope(knots[0], knots[1]) if len(knots) > 1 else ZERO
        else:
            head = exact(self.head_slope, "head_slope")
        if self.tail_slope is None:
            tail = _slope(knots[-2], knots[-1]) if len(knots) > 1 else ZERO
        else:
            tail = exact(self.tail_slope, "tail_slope")
        object.__setattr__(self, "head_slope", head)
        object.__setattr__(self, "tail_slope", tail)

    @cached_property
    def times(self) -> tuple[Fraction, ...]:
        return tuple(t for t, _ in self.knots)

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(v for _, v in self.knots)

    def __call__(self, t: Real) -> Fraction:
        return evaluate(self, t)

    def shifted(self, delta: Real) -> PiecewiseLinear:
        d = exact(delta)
        return PiecewiseLinear(
            tuple((t + d, v) for t, v in self.knots), self.head_slope, self.tail_slope
        )


def _slope(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]) -> Fraction:
    return (b[1] - a[1]) / (b[0] - a[0])


def evaluate(pl: PiecewiseLinear, t: Real) -> Fraction:
    """Exact value of ``pl`` at ``t``, extrapolating with the end slopes."""
    t = exact(t, "t")
    knots = pl.knots
    times = pl.times
    i = bisect_left(times, t)
    if i < len(knots) and times[i] == t:
        return knots[i][1]
    if i == 0:
        return knots[0][1] + pl.head_slope * (t - times[0])
    if i == len(knots):
        return knots[-1][1] + pl.tail_slope * (t - times[-1])
    (t0, v0), (t1, v1) = knots[i - 1], knots[i]
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0)


def cumulate(train: ImpulseTrain) -> StepFunction:
    """Running total of an impulse train, starting from 0."""
    level = ZERO
    steps = []
    for t, a in train:
        level += a
        steps.append((t, level))
    return StepFunction(ZERO, tuple(steps))


def _merged_times(*seqs: Iterable[Fraction]) -> list[Fraction]:
    return sorted(set().union(*seqs))


def add(a: StepFunction, b: StepFunction) -> StepFunction:
    """Pointwise sum of two step functions."""
    times = _merged_times(a.times, b.times)
    return StepFunction(
        a.initial_level + b.initial_level, tuple((t, a(t) + b(t)) for t in times)
    )


def split_signs(ice: StepFunction) -> tuple[StepFunction, StepFunction]:
    """Split a thread into its negative part ``ibe`` and positive part ``ide``."""
    return ice.map(lambda v: min(v, ZERO)), ice.map(lambda v: max(v, ZERO))


def default_start(*functions: StepFunction) -> Fraction:
    """Integration lower bound: ``min(0, earliest breakpoint)``."""
    firsts = [f.breakpoints[0][0] for f in functions if f.breakpoints]
    return min([ZERO, *firsts])


def integrate(f: StepFunction, absolute: bool = False, start: Real | None = None) -> PiecewiseLinear:
    """Running integral of ``f`` (or ``|f|``) from ``start``.

    The result is 0 at ``start`` and has a knot at every breakpoint of ``f``.
    ``start`` defaults to ``min(0, first breakpoint)`` and may not lie after
    the first breakpoint.
    """
    start = default_start(f) if start is None else exact(start, "start")
    if f.breakpoints and start > f.breakpoints[0][0]:
        raise ValueError(f"integration start {start} lies after the first breakpoint")
    g = abs if absolute else (lambda v: v)
    level = f.initial_level
    value = ZERO
    prev = start
    knots = [(start, ZERO)]
    for t, new_level in f.breakpoints:
        if t > start:
            value += g(level) * (t - prev)
            knots.append((t, value))
            prev = t
        level = new_level
    return PiecewiseLinear(tuple(knots), g(f.initial_level), g(level))


def subtract(a: PiecewiseLinear, b: PiecewiseLinear) -> PiecewiseLinear:
    """Exact difference ``a - b`` with knots at the union of both knot sets."""
    times = _merged_times(a.times, b.times)
    return PiecewiseLinear(
        tuple((t, evaluate(a, t) - evaluate(b, t)) for t in times),
        a.head_slope - b.head_slope,
        a.tail_slope - b.tail_slope,
    )


def merged_knot_times(functions: Sequence[PiecewiseLinear]) -> list[Fraction]:
    return _merged_times(*(f.times for f in functions))
