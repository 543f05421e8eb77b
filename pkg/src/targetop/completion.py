"""Time boundaries of a target operation.

``t_s``
    first registration.
``t_f``
    physical completion: the internal reserve of product returns to zero.
``t_a``
    actual completion (TACO): the integral of the target thread catches up
    with the integral of the tight-resource thread. Found numerically by
    intersecting exact piecewise-linear integral functions, and analytically
    as the cost-weighted time centroid

        t_a = (sum pe_j * t_j - sum |re_i| * t_i) / (PE - |RE|)

The two agree whenever every registration precedes the crossing; the
crossing is only searched from ``t_f`` on.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from .errors import EmptyOperation, NonEffectiveOperation, NotReducedOperation
from .signals import ImpulseTrain, OperationRecord, exact, reserve_impulses, validate_record
from .threads import PiecewiseLinear, cumulate, evaluate, integrate, subtract

__all__ = [
    "OperationBounds",
    "TacoResult",
    "LinearizedPair",
    "AGREEMENT_RTOL",
    "start_time",
    "physical_completion",
    "first_crossing",
    "taco_numeric",
    "taco_analytic",
    "taco_reduced",
    "determine_taco",
    "linearize",
]

AGREEMENT_RTOL = 1e-9


@dataclass(frozen=True)
class OperationBounds:
    t_s: Fraction
    t_f: Fraction
    reserve_closed: bool


@dataclass(frozen=True)
class TacoResult:
    t_a_numeric: Fraction | None
    t_a_analytic: Fraction | None
    effective: bool
    agreement: bool


@dataclass(frozen=True)
class LinearizedPair:
    """Linear replacements of ``vre`` and ``vpe`` for a reduced operation.

    ``vre*(t) = slope_r * t - C_r + C`` and ``vpe*(t) = slope_p * t - C_p + C``;
    both equal ``C`` at ``t_a`` and cross zero at ``t_r`` and ``t_p``.
    """

    slope_r: Fraction
    slope_p: Fraction
    C: Fraction
    C_r: Fraction
    C_p: Fraction
    t_r: Fraction
    t_p: Fraction

    def vre_star(self, t: Real) -> Fraction:
        return self.slope_r * exact(t) - self.C_r + self.C

    def vpe_star(self, t: Real) -> Fraction:
        return self.slope_p * exact(t) - self.C_p + self.C

    def round_trip(self) -> Fraction:
        """Solve the zero-crossing system back for ``t_a``."""
        return (self.slope_p * self.t_p - self.slope_r * self.t_r) / (self.slope_p - self.slope_r)


def start_time(record: OperationRecord) -> Fraction:
    record = validate_record(record)
    if not record.events:
        raise EmptyOperation("operation has no registration events")
    return record.events[0].time


def physical_completion(record: OperationRecord) -> OperationBounds:
    """Start and physical completion of the operation.

    If the reserve thread ``icq`` ends at exactly zero, ``t_f`` is its last
    breakpoint. Otherwise the product is not conserved (a conversion) and
    ``t_f`` falls back to the last registration.
    """
    record = validate_record(record)
    t_s = start_time(record)
    t_last = record.events[-1].time
    icq = cumulate(reserve_impulses(record))
    if icq.final_level == 0:
        t_f = icq.breakpoints[-1][0] if icq.breakpoints else t_last
        return OperationBounds(t_s, t_f, True)
    return OperationBounds(t_s, t_last, False)


def first_crossing(low: PiecewiseLinear, high: PiecewiseLinear, start: Real) -> Fraction | None:
    """Earliest ``t >= start`` with ``high(t) == low(t)``, or None.

    Solved exactly, segment by segment, on the difference ``high - low``;
    beyond the last knot the tail slopes are followed.
    """
    start = exact(start, "start")
    diff = subtract(high, low)
    pts = [(start, evaluate(diff, start))]
    pts.extend((t, v) for t, v in diff.knots if t > start)
    for (t0, d0), (t1, d1) in zip(pts, pts[1:]):
        if d0 == 0:
            return t0
        if (d0 < 0) != (d1 < 0) or d1 == 0:
            return t0 - d0 * (t1 - t0) / (d1 - d0)
    t_end, d_end = pts[-1]
    if d_end == 0:
        return t_end
    s = diff.tail_slope
    if s != 0 and (d_end < 0) == (s > 0):
        return t_end - d_end / s
    return None


def taco_numeric(vre: PiecewiseLinear, vpe: PiecewiseLinear, t_f: Real) -> Fraction:
    """Time of actual completion from a pair of integral functions.

    Takes either ``(vre, vpe)`` or ``(vbe, vde)``. Returns the first
    intersection at or after ``t_f``. If the outputs have already compensated
    the bound resources by ``t_f`` the functions no longer meet, and ``t_f``
    itself is returned: completion cannot precede physical completion.
    """
    if vpe.tail_slope <= vre.tail_slope:
        raise NonEffectiveOperation(
            f"output slope {vpe.tail_slope} does not exceed input slope {vre.tail_slope}"
        )
    t_f = exact(t_f, "t_f")
    crossing = first_crossing(vre, vpe, t_f)
    return t_f if crossing is None else crossing


def taco_analytic(re: ImpulseTrain, pe: ImpulseTrain) -> Fraction:
    denom = pe.total - re.magnitude
    if denom <= 0:
        raise NonEffectiveOperation(f"PE - |RE| = {denom} is not positive")
    num = sum((a * t for t, a in pe), Fraction(0)) - re.moment()
    return num / denom


def taco_reduced(RE: Real, t_r: Real, PE: Real, t_p: Real) -> Fraction:
    """Closed form for one input impulse at ``t_r`` and one output at ``t_p``.

    >>> taco_reduced(2, 2, 3, 8)
    Fraction(20, 1)
    """
    RE, PE = abs(exact(RE, "RE")), exact(PE, "PE")
    if PE <= RE:
        raise NonEffectiveOperation(f"PE={PE} does not exceed |RE|={RE}")
    return (PE * exact(t_p, "t_p") - RE * exact(t_r, "t_r")) / (PE - RE)


def integral_functions(re: ImpulseTrain, pe: ImpulseTrain, start: Real | None = None):
    """``(vre, vpe)`` from a pair of cost trains, integrated from a common start."""
    ire, ipe = cumulate(re), cumulate(pe)
    if start is None:
        start = min([Fraction(0), *(tr.times[0] for tr in (re, pe) if tr)])
    return integrate(ire, absolute=True, start=start), integrate(ipe, start=start)


def _agree(a: Fraction, b: Fraction) -> bool:
    return abs(float(a - b)) <= AGREEMENT_RTOL * (1 + abs(float(b)))


def determine_taco(re: ImpulseTrain, pe: ImpulseTrain, t_f: Real) -> TacoResult:
    """Numeric and analytic completion times with an agreement flag."""
    if pe.total <= re.magnitude:
        return TacoResult(None, None, False, False)
    vre, vpe = integral_functions(re, pe)
    numeric = taco_numeric(vre, vpe, t_f)
    analytic = taco_analytic(re, pe)
    return TacoResult(numeric, analytic, True, _agree(numeric, analytic))


def linearize(re: ImpulseTrain, pe: ImpulseTrain, t_a: Real) -> LinearizedPair:
    """Replace ``vre``/``vpe`` of a reduced operation by straight lines through ``t_a``."""
    if len(re) != 1 or len(pe) != 1:
        raise NotReducedOperation(
            f"expected one input and one output impulse, got {len(re)} and {len(pe)}"
        )
    slope_r, slope_p = re.magnitude, pe.total
    if slope_p <= slope_r:
        raise NonEffectiveOperation(f"PE={slope_p} does not exceed |RE|={slope_r}")
    t_a = exact(t_a, "t_a")
    vre, _ = integral_functions(re, pe)
    C = evaluate(vre, t_a)
    C_r, C_p = slope_r * t_a, slope_p * t_a
    return LinearizedPair(
        slope_r=slope_r,
        slope_p=slope_p,
        C=C,
        C_r=C_r,
        C_p=C_p,
        t_r=(C_r - C) / slope_r,
        t_p=(C_p - C) / slope_p,
    )
