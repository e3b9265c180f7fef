"""Cross-provider comparison: who offers an algorithm, and at what cost.

Function matching is dc:title equality after trimming and case folding. An
optional alias map (empty by default) lets callers declare that differently
named functions are the same algorithm; anything smarter than that is a
configuration concern, not built-in magic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DmccError
from .graph import Graph
from .model import MLService, ServiceProvider, extract_provider, list_providers
from .pricing import CostBreakdown, QuoteError, UsageRequest, cheapest_plan, round_money
from .terms import Term, nt_form

AliasMap = Mapping[str, Sequence[str]]


class NoOffersError(DmccError):
    def __init__(self, function_name: str):
        super().__init__(f"no provider offers a function named {function_name!r}")
        self.function_name = function_name


class NoneQuotableError(DmccError):
    def __init__(self, function_name: str):
        super().__init__(f"no offer of {function_name!r} could be quoted")
        self.function_name = function_name


@dataclass(frozen=True)
class Offer:
    provider_node: Term
    provider_name: str
    service_node: Term
    service_label: str | None
    function_name: str
    plan_name: str | None = None
    quote: CostBreakdown | None = None
    quote_error: str | None = None

    def to_json(self) -> dict:
        return {
            "provider": self.provider_name,
            "providerNode": nt_form(self.provider_node),
            "service": nt_form(self.service_node),
            "serviceLabel": self.service_label,
            "function": self.function_name,
            "plan": self.plan_name,
            "quote": self.quote.to_json() if self.quote else None,
            "error": self.quote_error,
        }


def _norm(name: str) -> str:
    return name.strip().casefold()


def _wanted_names(function_name: str, aliases: AliasMap | None) -> set[str]:
    wanted = {_norm(function_name)}
    for canonical, equivalents in (aliases or {}).items():
        group = {_norm(canonical)} | {_norm(e) for e in equivalents}
        if wanted & group:
            wanted |= group
    return wanted


def _matching_services(
    g: Graph, function_name: str, aliases: AliasMap | None
) -> list[tuple[ServiceProvider, MLService]]:
    wanted = _wanted_names(function_name, aliases)
    found: list[tuple[ServiceProvider, MLService]] = []
    for node in list_providers(g):
        provider = extract_provider(g, node)
        for service in provider.services:
            fn = service.function
            if fn is not None and _norm(fn.name) in wanted:
                found.append((provider, service))
    found.sort(key=lambda pair: (pair[0].name, nt_form(pair[1].node)))
    return found


def _offer(provider: ServiceProvider, service: MLService) -> Offer:
    return Offer(
        provider_node=provider.node,
        provider_name=provider.name,
        service_node=service.node,
        service_label=service.label,
        function_name=service.function.name if service.function else "",
    )


def providers_offering(g: Graph, function_name: str, aliases: AliasMap | None = None) -> list[Offer]:
    """One unquoted offer per (provider, service) carrying the function."""
    return [_offer(p, s) for p, s in _matching_services(g, function_name, aliases)]


def _quoted_offers(
    g: Graph, function_name: str, usage: UsageRequest, aliases: AliasMap | None
) -> list[Offer]:
    offers: list[Offer] = []
    for provider, service in _matching_services(g, function_name, aliases):
        base = _offer(provider, service)
        try:
            plan, breakdown = cheapest_plan(list(service.pricing), usage)
        except QuoteError as exc:
            offers.append(Offer(**{**base.__dict__, "quote_error": str(exc)}))
            continue
        offers.append(Offer(**{**base.__dict__, "plan_name": plan.name, "quote": breakdown}))
    return offers


def best_offer(g: Graph, function_name: str, usage: UsageRequest, aliases: AliasMap | None = None) -> Offer:
    """Cheapest quoted offer for the function under the given usage."""
    offers = _quoted_offers(g, function_name, usage, aliases)
    if not offers:
        raise NoOffersError(function_name)
    quoted = [o for o in offers if o.quote is not None]
    if not quoted:
        raise NoneQuotableError(function_name)
    return min(quoted, key=lambda o: (o.quote.total, o.provider_name, nt_form(o.service_node)))


def compare(g: Graph, function_name: str, usage: UsageRequest, aliases: AliasMap | None = None) -> list[Offer]:
    """Every offer with its quote (or quote error), cheapest first."""
    offers = _quoted_offers(g, function_name, usage, aliases)
    quoted = [o for o in offers if o.quote is not None]
    failed = [o for o in offers if o.quote is None]
    quoted.sort(key=lambda o: (o.quote.total, o.provider_name, nt_form(o.service_node)))
    failed.sort(key=lambda o: (o.provider_name, nt_form(o.service_node)))
    return quoted + failed


def offers_table(offers: list[Offer]) -> str:
    """Human-readable comparison table."""
    headers = ("provider", "service", "function", "plan", "total", "currency", "note")
    rows = [headers]
    for o in offers:
        total = format(round_money(o.quote.total), "f") if o.quote else ""
        currency = o.quote.currency if o.quote else ""
        rows.append(
            (
                o.provider_name,
                o.service_label or nt_form(o.service_node),
                o.function_name,
                o.plan_name or "",
                total,
                currency,
                o.quote_error or "",
            )
        )
    widths = [max(len(r[i]) for r in rows) for i in range(len(headers))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)
