import random
from decimal import Decimal

import pytest

from conftest import RF_SERVICE, KMEANS_SERVICE
from dmcc.model import Compound, Instance, PriceSpec, PricingPlan, Quantity, Region, extract_service
from dmcc.pricing import (
    AllowanceExceededError,
    CurrencyConflictError,
    NoApplicableCompoundError,
    NoQuotablePlanError,
    UsageRequest,
    applicable_compounds,
    cheapest_plan,
    quote,
    round_money,
)
from dmcc.terms import BlankNode


def _plan(name, compounds, currency="USD", node=None) -> PricingPlan:
    return PricingPlan(
        node=node or BlankNode(f"plan_{name}"), name=name, currency=currency, compounds=tuple(compounds)
    )


def _compound(label, price=None, unit="HRS", allowance=None, cap=None, instance=None, region=None, currency="USD"):
    spec = None
    if price is not None or cap is not None:
        spec = PriceSpec(
            node=BlankNode(f"spec_{label}"),
            unit_price=Decimal(price) if price is not None else Decimal(0),
            currency=currency,
            unit=unit if price is not None else None,
            max_charge=Decimal(cap) if cap is not None else None,
        )
    return Compound(
        node=BlankNode(f"compound_{label}"),
        price_spec=spec,
        instance=instance,
        region=region,
        allowance=Quantity(Decimal(allowance), unit) if allowance is not None else None,
    )


FREE_PLAN = _plan("Free", [_compound("free", cap="0.00", allowance="250")])
PAID_PLAN = _plan("Paid", [_compound("paid", price="0.10", allowance="250")])
TWO_PART_PLAN = _plan(
    "Standard",
    [_compound("compute", price="0.28"), _compound("storage", price="0.02", unit="E34")],
)


def _usage(hours=None, gb=None, instance=None, region=None) -> UsageRequest:
    quantities = []
    if hours is not None:
        quantities.append(Quantity(Decimal(hours), "HRS"))
    if gb is not None:
        quantities.append(Quantity(Decimal(gb), "E34"))
    return UsageRequest(tuple(quantities), instance_ref=instance, region_ref=region)


def test_usage_request_rejects_negative_and_duplicate_units():
    with pytest.raises(ValueError):
        UsageRequest((Quantity(Decimal("-1"), "HRS"),))
    with pytest.raises(ValueError):
        UsageRequest((Quantity(Decimal("1"), "HRS"), Quantity(Decimal("2"), "HRS")))
    # alias units normalize, then collide
    with pytest.raises(ValueError):
        UsageRequest((Quantity(Decimal("1"), "GB"), Quantity(Decimal("2"), "E34")))


def test_unscoped_compound_applies():
    assert applicable_compounds(PAID_PLAN, _usage(hours="100")) == list(PAID_PLAN.compounds)


def test_region_scope_mismatch_excludes():
    region_a = Region(node=BlankNode("us_east"), code="us-east-1")
    plan = _plan("Regional", [_compound("east", price="0.28", region=region_a)])
    assert applicable_compounds(plan, _usage(hours="10", region=BlankNode("eu_west"))) == []
    assert applicable_compounds(plan, _usage(hours="10", region=BlankNode("us_east"))) != []
    # usage without a region treats scope as a wildcard
    assert applicable_compounds(plan, _usage(hours="10")) != []


def test_instance_scope_selects_exactly_one():
    inst_a = Instance(node=BlankNode("inst_a"))
    inst_b = Instance(node=BlankNode("inst_b"))
    plan = _plan(
        "Dedicated",
        [_compound("a", price="0.12", instance=inst_a), _compound("b", price="0.46", instance=inst_b)],
    )
    chosen = applicable_compounds(plan, _usage(hours="10", instance=BlankNode("inst_a")))
    assert [c.node for c in chosen] == [BlankNode("compound_a")]


def test_free_plan_within_allowance():
    breakdown = quote(FREE_PLAN, _usage(hours="200"))
    assert breakdown.total == Decimal("0")
    assert breakdown.items == ()
    assert breakdown.allowance_applied == (Quantity(Decimal("200"), "HRS"),)


def test_free_plan_overflow_errors_not_bills():
    with pytest.raises(AllowanceExceededError):
        quote(FREE_PLAN, _usage(hours="251"))


def test_paid_plan_beyond_allowance():
    breakdown = quote(PAID_PLAN, _usage(hours="300"))
    assert breakdown.total == Decimal("5.00")
    (item,) = breakdown.items
    assert item.billed_quantity == Decimal("50")
    assert breakdown.allowance_applied == (Quantity(Decimal("250"), "HRS"),)


def test_zero_usage_quotes_zero():
    for plan in (FREE_PLAN, PAID_PLAN, TWO_PART_PLAN, _plan("Empty", [])):
        assert quote(plan, _usage(hours="0")).total == Decimal("0")


def test_two_component_plan_sums_products():
    breakdown = quote(TWO_PART_PLAN, _usage(hours="10", gb="5"))
    assert breakdown.total == Decimal("2.80") + Decimal("0.10")
    assert [i.unit for i in breakdown.items] == ["E34", "HRS"]


def test_no_applicable_compound_error():
    with pytest.raises(NoApplicableCompoundError):
        quote(TWO_PART_PLAN, _usage(hours="10", gb="5") if False else UsageRequest((Quantity(Decimal("3"), "MON"),)))


def test_currency_conflict():
    euro_spec = _compound("euro", price="0.10", currency="EUR")
    plan = _plan("Mixed", [euro_spec], currency="USD")
    with pytest.raises(CurrencyConflictError):
        quote(plan, _usage(hours="1"))


def test_cap_clamps_total():
    plan = _plan("Capped", [_compound("c", price="1.00", cap="3.00")])
    breakdown = quote(plan, _usage(hours="10"))
    assert breakdown.total == Decimal("3.00")
    assert breakdown.cap_applied == Decimal("7.00")
    assert sum((i.subtotal for i in breakdown.items), Decimal(0)) - breakdown.cap_applied == breakdown.total


def test_quote_prefers_cheapest_when_ambiguous():
    plan = _plan("Choice", [_compound("pricey", price="0.46"), _compound("cheap", price="0.12")])
    breakdown = quote(plan, _usage(hours="10"))
    assert breakdown.items[0].unit_price == Decimal("0.12")


def test_cheapest_plan_free_wins_within_allowance():
    plan, breakdown = cheapest_plan([FREE_PLAN, PAID_PLAN], _usage(hours="200"))
    assert plan.name == "Free" and breakdown.total == Decimal("0")


def test_cheapest_plan_skips_unquotable():
    plan, breakdown = cheapest_plan([FREE_PLAN, PAID_PLAN], _usage(hours="300"))
    assert plan.name == "Paid" and breakdown.total == Decimal("5.00")


def test_cheapest_plan_single_plan():
    plan, _ = cheapest_plan([PAID_PLAN], _usage(hours="10"))
    assert plan is PAID_PLAN


def test_cheapest_plan_tie_breaks_lexicographically():
    a = _plan("alpha", [_compound("a", price="0.10")])
    b = _plan("beta", [_compound("b", price="0.10")])
    plan, _ = cheapest_plan([b, a], _usage(hours="10"))
    assert plan.name == "alpha"


def test_cheapest_plan_errors_when_none_quotable():
    with pytest.raises(NoQuotablePlanError):
        cheapest_plan([FREE_PLAN], _usage(hours="300"))


def test_fixture_plans_quote_as_documented(full_graph):
    rf = extract_service(full_graph, RF_SERVICE)
    free = next(p for p in rf.pricing if p.name == "Free plan")
    paid = next(p for p in rf.pricing if p.name == "Pay per use")
    assert quote(free, _usage(hours="200")).total == Decimal("0")
    assert quote(paid, _usage(hours="300")).total == Decimal("5.00")
    km = extract_service(full_graph, KMEANS_SERVICE)
    assert quote(km.pricing[0], _usage(hours="10", gb="5")).total == Decimal("2.90")


def test_round_money_is_half_even():
    assert round_money(Decimal("0.005")) == Decimal("0.00")
    assert round_money(Decimal("0.015")) == Decimal("0.02")
    assert round_money(Decimal("2.675")) == Decimal("2.68")


# --- randomized properties --------------------------------------------------


def _random_plan(rng: random.Random, index: int) -> PricingPlan:
    compounds = []
    for c in range(rng.randint(1, 3)):
        unit = rng.choice(["HRS", "E34"])
        price = Decimal(rng.randint(0, 400)) / 100
        allowance = Decimal(rng.randint(0, 300)) if rng.random() < 0.4 else None
        cap = None
        if rng.random() < 0.2:
            cap = Decimal("0") if rng.random() < 0.5 else Decimal(rng.randint(1, 500)) / 10
        compounds.append(
            _compound(
                f"r{index}_{c}",
                price=str(price),
                unit=unit,
                allowance=str(allowance) if allowance is not None else None,
                cap=str(cap) if cap is not None else None,
            )
        )
    return _plan(f"plan{index}", compounds)


def _random_usage(rng: random.Random) -> UsageRequest:
    quantities = []
    if rng.random() < 0.9:
        quantities.append(Quantity(Decimal(rng.randint(0, 600)), "HRS"))
    if rng.random() < 0.5:
        quantities.append(Quantity(Decimal(rng.randint(0, 100)), "E34"))
    if not quantities:
        quantities.append(Quantity(Decimal(0), "HRS"))
    return UsageRequest(tuple(quantities))


def test_randomized_quote_properties():
    rng = random.Random(2024)
    checked = 0
    for i in range(500):
        plan = _random_plan(rng, i)
        usage = _random_usage(rng)
        cap = min(
            (c.price_spec.max_charge for c in plan.compounds
             if c.price_spec is not None and c.price_spec.max_charge is not None),
            default=None,
        )
        try:
            breakdown = quote(plan, usage)
        except AllowanceExceededError:
            assert cap == Decimal("0")  # only free plans refuse to bill
            continue
        except NoApplicableCompoundError:
            continue
        checked += 1
        assert isinstance(breakdown.total, Decimal)
        assert breakdown.total >= 0
        if cap is not None:
            assert breakdown.total <= cap
        for item in breakdown.items:
            assert item.subtotal == item.billed_quantity * item.unit_price
        # monotonicity: one more hour never costs less
        bigger = UsageRequest(
            tuple(
                Quantity(q.amount + (1 if q.unit == "HRS" else 0), q.unit)
                for q in usage.quantities
            ),
            usage.instance_ref,
            usage.region_ref,
        )
        try:
            assert quote(plan, bigger).total >= breakdown.total
        except AllowanceExceededError:
            assert cap == Decimal("0")
        except NoApplicableCompoundError:
            pass  # extra hour made a unit billable that has no compound
    assert checked > 200  # the generator must exercise plenty of billable cases


def test_additivity_exact_without_allowances_or_caps():
    # linear plans price a combined request exactly like its parts; quoting is
    # stateless, so plans WITH allowances grant them per request and splitting
    # can only get cheaper there (each part re-uses the included amount)
    rng = random.Random(7)
    exercised = 0
    for i in range(250):
        plan = _random_plan(rng, i)
        if any(c.allowance is not None or (c.price_spec and c.price_spec.max_charge is not None)
               for c in plan.compounds):
            continue
        h1, h2 = rng.randint(0, 200), rng.randint(0, 200)
        try:
            combined = quote(plan, _usage(hours=str(h1 + h2))).total
            split = quote(plan, _usage(hours=str(h1))).total + quote(plan, _usage(hours=str(h2))).total
        except NoApplicableCompoundError:
            continue
        assert combined == split
        exercised += 1
    assert exercised > 20


def test_splitting_with_allowance_is_never_more_expensive():
    # each split request gets the full included amount again
    rng = random.Random(11)
    for i in range(100):
        plan = _random_plan(rng, i)
        h1, h2 = rng.randint(0, 200), rng.randint(0, 200)
        try:
            combined = quote(plan, _usage(hours=str(h1 + h2))).total
            split = quote(plan, _usage(hours=str(h1))).total + quote(plan, _usage(hours=str(h2))).total
        except (AllowanceExceededError, NoApplicableCompoundError):
            continue
        if any(c.price_spec and c.price_spec.max_charge is not None for c in plan.compounds):
            continue  # caps flip the comparison for large requests
        assert split <= combined
