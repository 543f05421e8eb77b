"""Basic indicators of a target operation and the analysis report."""
from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction

from .completion import determine_taco, physical_completion
from .signals import ImpulseTrain, OperationRecord, cost_impulses, validate_record

__all__ = ["IndicatorReport", "economic_cost", "economic_income", "assemble_report"]


@dataclass(frozen=True)
class IndicatorReport:
    """Indicator set of one operation. Field names are the JSON keys."""

    RE: float
    PE: float
    added_value: float
    conditional_return: float | None
    T_op: float
    t_s: float
    t_f: float
    t_a_numeric: float | None
    t_a_analytic: float | None
    effective: bool
    reserve_closed: bool

    def to_dict(self) -> dict:
        """Field mapping with absent optionals omitted."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if value is not None:
                out[f.name] = value
        return out


def economic_cost(re: ImpulseTrain) -> Fraction:
    """Total input cost RE (a magnitude)."""
    return re.magnitude


def economic_income(pe: ImpulseTrain) -> Fraction:
    """Total output cost PE."""
    return pe.total


def _opt(x: Fraction | None) -> float | None:
    return None if x is None else float(x)


def assemble_report(record: OperationRecord) -> IndicatorReport:
    """Run the whole pipeline on one record.

    A non-effective operation is reported with ``effective=False`` and no
    completion times; only an empty record raises.
    """
    record = validate_record(record)
    bounds = physical_completion(record)
    re, pe = cost_impulses(record)
    RE, PE = economic_cost(re), economic_income(pe)
    taco = determine_taco(re, pe, bounds.t_f)
    # derived from the rounded totals so the report is self-consistent
    re_f, pe_f = float(RE), float(PE)
    added = pe_f - re_f
    return IndicatorReport(
        RE=re_f,
        PE=pe_f,
        added_value=added,
        conditional_return=added / re_f if RE > 0 else None,
        T_op=float(bounds.t_f - bounds.t_s),
        t_s=float(bounds.t_s),
        t_f=float(bounds.t_f),
        t_a_numeric=_opt(taco.t_a_numeric),
        t_a_analytic=_opt(taco.t_a_analytic),
        effective=taco.effective,
        reserve_closed=bounds.reserve_closed,
    )
