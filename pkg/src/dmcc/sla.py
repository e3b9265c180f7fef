"""Compensation owed under an agreement for an observed metric value.

Ranges match half-open, [min, max): a value equal to the shared endpoint of
two adjacent ranges belongs to the upper one. The topmost range additionally
accepts its own maximum, so an agreement whose ranges stop at 99.99 still
covers an observation of exactly 99.99; anything above every range means the
agreement was met and nothing is owed.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

from .errors import DmccError
from .model import Compensation, SlaAgreement, SlaTerm
from .vocab import normalize_unit_text


class UnknownTermNameError(DmccError):
    def __init__(self, name: str):
        super().__init__(f"agreement contains no term named {name!r}")
        self.name = name


class UnitMismatchError(DmccError):
    def __init__(self, expected: str, got: str):
        super().__init__(f"observation unit {got!r} does not match term unit {expected!r}")
        self.expected = expected
        self.got = got


@dataclass(frozen=True)
class Observation:
    term_name: str
    value: Decimal
    unit: str = "percent"


@dataclass(frozen=True)
class CompensationResult:
    matched: int | None = None
    compensation: Compensation | None = None

    def to_json(self) -> dict:
        return {
            "matched": self.matched,
            "kind": self.compensation.kind if self.compensation else None,
            "amount": format(self.compensation.amount, "f") if self.compensation else None,
        }


def _find_term(sla: SlaAgreement, name: str) -> SlaTerm:
    wanted = name.strip()
    for t in sla.terms:
        if t.name.strip() == wanted:
            return t
    raise UnknownTermNameError(name)


def match_interval(term: SlaTerm, value: Decimal) -> int | None:
    """Index of the range covering the value, or None when every range is met."""
    top: int | None = None
    top_max: Decimal | None = None
    for i, interval in enumerate(term.definitions):
        if interval.min <= value < interval.max:
            return i
        if top_max is None or interval.max > top_max:
            top, top_max = i, interval.max
    if top is not None and top_max is not None and value == top_max:
        return top
    return None


def compensation_for(sla: SlaAgreement, obs: Observation) -> CompensationResult:
    """Match the observation against the named term's ranges."""
    term = _find_term(sla, obs.term_name)
    term_units = {i.unit for i in term.definitions if i.unit}
    obs_unit = normalize_unit_text(obs.unit)
    if term_units and obs_unit not in term_units:
        raise UnitMismatchError(sorted(term_units)[0], obs.unit)
    index = match_interval(term, obs.value)
    if index is None:
        return CompensationResult()
    comp = term.compensations[index] if index < len(term.compensations) else None
    if comp is None:
        return CompensationResult()
    return CompensationResult(matched=index, compensation=comp)


def compensation_amount(result: CompensationResult, billed_amount: Decimal) -> Decimal:
    """Concrete value owed: a bill share for percent kinds, credits otherwise."""
    if billed_amount < 0:
        raise ValueError("billed amount must be non-negative")
    if result.compensation is None:
        return Decimal(0)
    comp = result.compensation
    if comp.kind == "percentOfBill":
        return billed_amount * comp.amount / Decimal(100)
    return comp.amount
