"""Invariant checks run on a single operation (the ``check`` subcommand)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .completion import (
    AGREEMENT_RTOL,
    first_crossing,
    integral_functions,
    physical_completion,
    taco_analytic,
    taco_numeric,
)
from .signals import OperationRecord, cost_impulses, validate_record
from .threads import add, cumulate, integrate, merged_knot_times, split_signs

ROUTE_TOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    skipped: bool = False

    def line(self) -> str:
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        return f"{status} {self.name}: {self.detail}"


def _probe_times(breaks: list[Fraction]) -> list[Fraction]:
    """Breakpoints, midpoints between them, and one point on either side."""
    if not breaks:
        return [Fraction(0)]
    pts = [breaks[0] - 1, *breaks, breaks[-1] + 1]
    pts += [(a + b) / 2 for a, b in zip(breaks, breaks[1:])]
    return sorted(pts)


def run_checks(record: OperationRecord) -> list[CheckResult]:
    record = validate_record(record)
    bounds = physical_completion(record)
    re, pe = cost_impulses(record)
    vre, vpe = integral_functions(re, pe)
    start = vre.knots[0][0]
    ice = add(cumulate(re), cumulate(pe))
    ibe, ide = split_signs(ice)
    vbe, vde = integrate(ibe, absolute=True, start=start), integrate(ide, start=start)
    results = []

    bad = [
        t for t in _probe_times(list(ice.times))
        if ibe(t) + ide(t) != ice(t) or ibe(t) > 0 or ide(t) < 0 or ibe(t) * ide(t) != 0
    ]
    results.append(CheckResult(
        "decomposition", not bad,
        "ibe + ide = ice, ibe <= 0 <= ide" + (f"; violated at t={float(bad[0])!r}" if bad else ""),
    ))

    knots = merged_knot_times([vre, vpe, vbe, vde])
    worst = max(abs((vde(t) - vbe(t)) - (vpe(t) - vre(t))) for t in knots)
    scale = max(abs(f(t)) for t in knots for f in (vre, vpe, vbe, vde))
    results.append(CheckResult(
        "thread_route", worst <= ROUTE_TOL * (1 + scale),
        f"max |(vde-vbe)-(vpe-vre)| = {float(worst)!r} over {len(knots)} knots",
    ))

    monotone = all(
        f(a) <= f(b) for f in (vre, vpe, vbe, vde) for a, b in zip(knots, knots[1:])
    ) and all(f.tail_slope >= 0 for f in (vre, vpe, vbe, vde))
    results.append(CheckResult("monotonicity", monotone, "vre, vpe, vbe, vde nondecreasing"))

    if pe.total <= re.magnitude:
        for name in ("route_equivalence", "agreement"):
            results.append(CheckResult(name, True, "operation is not effective", skipped=True))
        return results

    via_cost = taco_numeric(vre, vpe, bounds.t_f)
    via_threads = taco_numeric(vbe, vde, bounds.t_f)
    results.append(CheckResult(
        "route_equivalence", via_cost == via_threads,
        f"t_a(vre, vpe) = {float(via_cost)!r}, t_a(vbe, vde) = {float(via_threads)!r}",
    ))

    analytic = taco_analytic(re, pe)
    if first_crossing(vre, vpe, bounds.t_f) is None:
        results.append(CheckResult(
            "agreement", True,
            f"compensated before t_f; numeric {float(via_cost)!r}, analytic {float(analytic)!r}",
            skipped=True,
        ))
    else:
        gap = abs(float(via_cost - analytic))
        results.append(CheckResult(
            "agreement", gap <= AGREEMENT_RTOL * (1 + abs(float(analytic))),
            f"numeric {float(via_cost)!r}, analytic {float(analytic)!r}",
        ))
    return results
