"""Quote usage scenarios against pricing plans.

All money arithmetic is exact decimal; binary floating point never enters a
total. Rates and quantities carry at most four fractional digits internally
and are rounded half-even to two digits only for presentation.

Component matching: an instance- or region-scoped component applies when the
usage names that instance or region, or names none at all (an unspecified
usage dimension is a wildcard on both sides). Included allowances are consumed
before any billing. A plan whose cap (gr:max) is zero is a free plan: usage
beyond its allowance is an error, never a charge.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal

from .errors import DmccError
from .model import Compound, PricingPlan, Quantity
from .terms import Term, nt_form
from .vocab import normalize_unit


class QuoteError(DmccError):
    """A usage scenario cannot be priced under a plan."""


class NoApplicableCompoundError(QuoteError):
    def __init__(self, unit: str):
        super().__init__(f"no price component covers billed unit {unit!r}")
        self.unit = unit


class AllowanceExceededError(QuoteError):
    def __init__(self, unit: str, over: Decimal):
        super().__init__(
            f"free plan exceeded by {format(over, 'f')} {unit}; a zero-cap plan cannot bill"
        )
        self.unit = unit
        self.over = over


class CurrencyConflictError(QuoteError):
    def __init__(self, plan_currency: str, spec_currency: str):
        super().__init__(f"component priced in {spec_currency!r} but plan is {plan_currency!r}")


class NoQuotablePlanError(QuoteError):
    def __init__(self, reasons: list[str]):
        super().__init__("no plan could quote the usage: " + "; ".join(reasons))
        self.reasons = reasons


def round_money(value: Decimal) -> Decimal:
    """Presentation rounding: two digits, banker's rounding."""
    return value.quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN)


@dataclass(frozen=True)
class UsageRequest:
    quantities: tuple[Quantity, ...]
    instance_ref: Term | None = None
    region_ref: Term | None = None

    def __post_init__(self) -> None:
        seen: set[str] = set()
        normalized = []
        for q in self.quantities:
            if q.amount < 0:
                raise ValueError(f"usage quantity for {q.unit!r} is negative")
            unit = normalize_unit(q.unit)
            if unit in seen:
                raise ValueError(f"more than one usage quantity for unit {unit!r}")
            seen.add(unit)
            normalized.append(Quantity(q.amount, unit))
        object.__setattr__(self, "quantities", tuple(normalized))


@dataclass(frozen=True)
class LineItem:
    compound_ref: Term
    unit: str
    billed_quantity: Decimal
    unit_price: Decimal
    subtotal: Decimal

    def to_json(self) -> dict:
        return {
            "compound": nt_form(self.compound_ref),
            "unit": self.unit,
            "billedQuantity": format(self.billed_quantity, "f"),
            "unitPrice": format(self.unit_price, "f"),
            "subtotal": format(round_money(self.subtotal), "f"),
        }


@dataclass(frozen=True)
class CostBreakdown:
    items: tuple[LineItem, ...]
    currency: str
    total: Decimal
    allowance_applied: tuple[Quantity, ...]
    cap_applied: Decimal | None = None  # amount shaved off by the plan cap

    def to_json(self) -> dict:
        return {
            "currency": self.currency,
            "total": format(round_money(self.total), "f"),
            "items": [i.to_json() for i in self.items],
            "allowanceApplied": [
                {"amount": format(q.amount, "f"), "unit": q.unit} for q in self.allowance_applied
            ],
            "capApplied": format(round_money(self.cap_applied), "f") if self.cap_applied is not None else None,
        }


def _scope_matches(compound: Compound, usage: UsageRequest) -> bool:
    if compound.instance is not None and usage.instance_ref is not None:
        if compound.instance.node != usage.instance_ref:
            return False
    if compound.region is not None and usage.region_ref is not None:
        if compound.region.node != usage.region_ref:
            return False
    return True


def applicable_compounds(plan: PricingPlan, usage: UsageRequest) -> list[Compound]:
    """Components whose scope fits the usage and whose unit is requested."""
    units = {q.unit for q in usage.quantities}
    return [
        c
        for c in plan.compounds
        if _scope_matches(c, usage) and c.billing_unit() in units
    ]


def _plan_cap(plan: PricingPlan) -> Decimal | None:
    caps = [
        c.price_spec.max_charge
        for c in plan.compounds
        if c.price_spec is not None and c.price_spec.max_charge is not None
    ]
    return min(caps) if caps else None


def quote(plan: PricingPlan, usage: UsageRequest) -> CostBreakdown:
    """Price the usage under one plan: allowances first, then the best rate."""
    currency = plan.currency
    for compound in plan.compounds:
        spec = compound.price_spec
        if spec is not None and spec.currency and currency and spec.currency != currency:
            raise CurrencyConflictError(currency, spec.currency)
        if spec is not None and spec.currency and not currency:
            currency = spec.currency

    cap = _plan_cap(plan)
    items: list[LineItem] = []
    allowances_applied: list[Quantity] = []
    for quantity in sorted(usage.quantities, key=lambda q: q.unit):
        unit = quantity.unit
        remaining = quantity.amount
        candidates = [c for c in applicable_compounds(plan, usage) if c.billing_unit() == unit]

        available = sum(
            (c.allowance.amount for c in candidates if c.allowance is not None),
            Decimal(0),
        )
        used = min(remaining, available)
        if used > 0:
            allowances_applied.append(Quantity(used, unit))
            remaining -= used
        if remaining <= 0:
            continue

        if cap is not None and cap == 0:
            raise AllowanceExceededError(unit, remaining)
        priced = [c for c in candidates if c.price_spec is not None]
        if not priced:
            raise NoApplicableCompoundError(unit)
        best = min(priced, key=lambda c: (c.price_spec.unit_price, nt_form(c.node)))
        price = best.price_spec.unit_price
        items.append(
            LineItem(
                compound_ref=best.node,
                unit=unit,
                billed_quantity=remaining,
                unit_price=price,
                subtotal=remaining * price,
            )
        )

    total = sum((i.subtotal for i in items), Decimal(0))
    cap_applied = None
    if cap is not None and total > cap:
        cap_applied = total - cap
        total = cap
    return CostBreakdown(
        items=tuple(items),
        currency=currency,
        total=total,
        allowance_applied=tuple(allowances_applied),
        cap_applied=cap_applied,
    )


def cheapest_plan(plans: list[PricingPlan], usage: UsageRequest) -> tuple[PricingPlan, CostBreakdown]:
    """Best quote across plans; unquotable plans are skipped, ties go by name."""
    if not plans:
        raise NoQuotablePlanError(["no plans given"])
    quoted: list[tuple[PricingPlan, CostBreakdown]] = []
    reasons: list[str] = []
    for plan in plans:
        try:
            quoted.append((plan, quote(plan, usage)))
        except QuoteError as exc:
            reasons.append(f"{plan.name or nt_form(plan.node)}: {exc}")
    if not quoted:
        raise NoQuotablePlanError(reasons)
    return min(quoted, key=lambda pair: (pair[1].total, pair[0].name, nt_form(pair[0].node)))
