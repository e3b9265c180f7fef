"""Conformance checking of service-description graphs.

Problems are reported as diagnostics, never raised: the validator is total.
Diagnostic codes are stable identifiers documented in README; the full table
is exported as RULES.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph
from .terms import Iri, Literal, RDF_TYPE, Term, nt_form
from . import model, vocab
from .model import (
    ExtractionError,
    MalformedIntervalError,
    extract_function,
    extract_pricing,
    extract_sla,
)
from .vocab import REGISTRY, currency_known, term, unit_known

# code -> (severity, meaning)
RULES: dict[str, tuple[str, str]] = {
    "ASPECT_MISSING_AUTH": ("error", "service has no authentication aspect"),
    "ASPECT_MISSING_CATALOG": ("warning", "provider has no offer catalogue"),
    "ASPECT_MISSING_INTERACTION": ("error", "service has no interaction aspect"),
    "ASPECT_MISSING_PRICING": ("error", "service has no pricing plan"),
    "ASPECT_MISSING_SLA": ("error", "service has no level agreement"),
    "ASPECT_MISSING_FUNCTION": ("error", "service has no function"),
    "SLA_INTERVAL_INVALID": ("error", "agreement range has min > max or percent outside [0, 100]"),
    "SLA_RANGE_OVERLAP": ("warning", "two ranges of one term overlap on an open interval"),
    "SLA_COMP_MISMATCH": ("error", "range and compensation counts differ"),
    "SLA_PAIR_ORDER": ("warning", "compensations paired with ranges by sorted order, not by link"),
    "PRICE_BOUNDS": ("error", "plan minimum price exceeds maximum price"),
    "PRICE_NEGATIVE": ("error", "negative unit price or allowance"),
    "UNIT_UNKNOWN": ("warning", "unit code absent from the registry table"),
    "CURRENCY_UNKNOWN": ("warning", "currency code is not a known ISO 4217 code"),
    "REF_DANGLING": ("error", "link target has no triples (warning for catalogue links)"),
    "PARAM_DUP": ("error", "duplicate parameter titles within one function"),
    "TYPO_ALIAS": ("warning", "deprecated alias spelling used (e.g. cointainsTerm)"),
    "UNKNOWN_TERM": ("warning", "predicate or class IRI absent from the vocabulary registry"),
    "EXTRACTION_ERROR": ("error", "subgraph could not be lifted into the typed model"),
}


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    node: Term
    message: str

    def to_json(self) -> dict:
        return {
            "severity": self.severity,
            "code": self.code,
            "node": nt_form(self.node),
            "message": self.message,
        }


@dataclass(frozen=True)
class Report:
    diagnostics: tuple[Diagnostic, ...]

    @property
    def error_count(self) -> int:
        return sum(1 for d in self.diagnostics if d.severity == "error")

    @property
    def warning_count(self) -> int:
        return sum(1 for d in self.diagnostics if d.severity == "warning")

    @property
    def conformant(self) -> bool:
        return not self.diagnostics

    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]

    def codes(self) -> list[str]:
        return [d.code for d in self.diagnostics]

    def to_json(self) -> dict:
        return {
            "formatVersion": "1",
            "conformant": self.conformant,
            "errors": self.error_count,
            "warnings": self.warning_count,
            "diagnostics": [d.to_json() for d in self.diagnostics],
        }

    def to_text(self) -> str:
        lines = [
            f"{d.severity:7} {d.code:24} {nt_form(d.node)}  {d.message}"
            for d in self.diagnostics
        ]
        lines.append(f"{self.error_count} error(s), {self.warning_count} warning(s)")
        return "\n".join(lines)


class _Collector:
    def __init__(self) -> None:
        self.diagnostics: list[Diagnostic] = []

    def add(self, code: str, node: Term, message: str, severity: str | None = None) -> None:
        self.diagnostics.append(Diagnostic(severity or RULES[code][0], code, node, message))

    def report(self) -> Report:
        ordered = sorted(self.diagnostics, key=lambda d: (nt_form(d.node), d.code, d.message))
        return Report(tuple(ordered))


_SERVICE_ASPECTS = (
    ("ASPECT_MISSING_INTERACTION", "dmcc:hasInteractionPoint"),
    ("ASPECT_MISSING_SLA", "dmcc:hasServiceCommitment"),
    ("ASPECT_MISSING_FUNCTION", "dmcc:hasFunction"),
    ("ASPECT_MISSING_AUTH", "dmcc:hasAuthentication"),
    ("ASPECT_MISSING_PRICING", "dmcc:hasPricingPlan"),
)


def _linked_nodes(g: Graph, predicate_curie: str, type_curie: str) -> list[Term]:
    """Targets of a link plus every explicitly typed node, deduplicated."""
    nodes: list[Term] = []
    for t in g.match(None, term(predicate_curie), None):
        if t.object not in nodes:
            nodes.append(t.object)
    for node in g.subjects_of_type(term(type_curie)):
        if node not in nodes:
            nodes.append(node)
    return sorted(nodes, key=nt_form)


def _check_dangling(g: Graph, out: _Collector) -> None:
    dmcc_ns = REGISTRY.namespace("dmcc").value
    catalog = term("dmcc:hasOfferCatalog")
    for t in g:
        pred = t.predicate
        if not pred.value.startswith(dmcc_ns + "has"):
            continue
        if isinstance(t.object, Literal) or not g.has_subject(t.object):
            severity = "warning" if pred == catalog else "error"
            out.add(
                "REF_DANGLING",
                t.subject,
                f"{REGISTRY.curie_for(pred) or nt_form(pred)} target {nt_form(t.object)} has no triples",
                severity=severity,
            )


def _overlaps(a: model.Interval, b: model.Interval) -> bool:
    # ranges are half-open [min, max): touching endpoints do not overlap
    return a.min < b.max and b.min < a.max


def _check_sla(g: Graph, node: Term, out: _Collector) -> None:
    try:
        sla = extract_sla(g, node)
    except MalformedIntervalError as exc:
        out.add("SLA_INTERVAL_INVALID", exc.node, str(exc))
        return
    except ExtractionError as exc:
        out.add("EXTRACTION_ERROR", node, str(exc))
        return
    for t in sla.terms:
        for i, interval in enumerate(t.definitions):
            bad = interval.min > interval.max or (
                interval.unit == "percent" and (interval.min < 0 or interval.max > 100)
            )
            if bad:
                out.add(
                    "SLA_INTERVAL_INVALID",
                    node,
                    f"term {t.name!r} range {i} [{interval.min}, {interval.max}) is invalid",
                )
        for i in range(len(t.definitions)):
            for j in range(i + 1, len(t.definitions)):
                if _overlaps(t.definitions[i], t.definitions[j]):
                    out.add(
                        "SLA_RANGE_OVERLAP",
                        node,
                        f"term {t.name!r} ranges {i} and {j} overlap",
                    )
        missing = sum(1 for c in t.compensations if c is None)
        if missing or t.unpaired_compensations:
            out.add(
                "SLA_COMP_MISMATCH",
                node,
                f"term {t.name!r} has {len(t.definitions)} range(s) and "
                f"{len(t.definitions) - missing + t.unpaired_compensations} compensation(s)",
            )
        if t.paired_by_order:
            out.add("SLA_PAIR_ORDER", node, f"term {t.name!r} paired compensations by sorted order")


def _check_pricing(g: Graph, node: Term, out: _Collector) -> None:
    try:
        plan = extract_pricing(g, node, strict_units=False)
    except ExtractionError as exc:
        out.add("EXTRACTION_ERROR", node, str(exc))
        return
    if plan.min_price is not None and plan.max_price is not None and plan.min_price > plan.max_price:
        out.add("PRICE_BOUNDS", node, f"minPrice {plan.min_price} exceeds maxPrice {plan.max_price}")
    if plan.currency and not currency_known(plan.currency):
        out.add("CURRENCY_UNKNOWN", node, f"currency {plan.currency!r} is not a known ISO 4217 code")
    for compound in plan.compounds:
        spec = compound.price_spec
        if spec is not None and spec.unit_price < 0:
            out.add("PRICE_NEGATIVE", compound.node, f"unit price {spec.unit_price} is negative")
        if compound.allowance is not None and compound.allowance.amount < 0:
            out.add("PRICE_NEGATIVE", compound.node, f"allowance {compound.allowance.amount} is negative")
        unit = compound.billing_unit()
        if unit is None:
            out.add("UNIT_UNKNOWN", compound.node, "component has no unit of measurement")
        elif not unit_known(unit):
            out.add("UNIT_UNKNOWN", compound.node, f"unit code {unit!r} is not in the registry table")
        if spec is not None and spec.currency and not currency_known(spec.currency):
            out.add("CURRENCY_UNKNOWN", compound.node, f"currency {spec.currency!r} is not a known ISO 4217 code")


def _check_function(g: Graph, node: Term, out: _Collector) -> None:
    try:
        fn = extract_function(g, node)
    except ExtractionError as exc:
        out.add("EXTRACTION_ERROR", node, str(exc))
        return
    seen: set[str] = set()
    for p in fn.parameters:
        if p.title in seen:
            out.add("PARAM_DUP", node, f"duplicate parameter title {p.title!r}")
        seen.add(p.title)


def validate(g: Graph) -> Report:
    """Apply every conformance rule; diagnostics come back in a fixed order."""
    out = _Collector()

    for provider in g.subjects_of_type(term("dmcc:MLServiceProvider")):
        if not g.objects(provider, term("dmcc:hasOfferCatalog")):
            out.add("ASPECT_MISSING_CATALOG", provider, "provider declares no offer catalogue")

    for service in g.subjects_of_type(term("dmcc:MLService")):
        for code, curie in _SERVICE_ASPECTS:
            if not g.objects(service, term(curie)):
                out.add(code, service, f"service has no {curie} link")

    _check_dangling(g, out)

    for node in _linked_nodes(g, "dmcc:hasServiceCommitment", "ccsla:SLA"):
        if g.has_subject(node):
            _check_sla(g, node, out)
    for node in _linked_nodes(g, "dmcc:hasPricingPlan", "ccpricing:PricingPlan"):
        if g.has_subject(node):
            _check_pricing(g, node, out)
    for node in _linked_nodes(g, "dmcc:hasFunction", "ccdm:MLFunction"):
        if g.has_subject(node):
            _check_function(g, node, out)

    for alias_iri in REGISTRY.alias_iris:
        for t in g.match(None, alias_iri, None):
            out.add(
                "TYPO_ALIAS",
                t.subject,
                f"uses alias spelling {nt_form(alias_iri)}; canonical is "
                f"{REGISTRY.curie_for(alias_iri)}",
            )

    return out.report()


def validate_strict(g: Graph) -> Report:
    """As validate, plus warnings for IRIs the registry has never heard of."""
    out = _Collector()
    out.diagnostics.extend(validate(g).diagnostics)
    unknown: set[Iri] = set()
    for t in g:
        if isinstance(t.predicate, Iri) and not REGISTRY.known(t.predicate) and t.predicate != RDF_TYPE:
            unknown.add(t.predicate)
        if t.predicate == RDF_TYPE and isinstance(t.object, Iri) and not REGISTRY.known(t.object):
            unknown.add(t.object)
    for iri in sorted(unknown, key=nt_form):
        out.add("UNKNOWN_TERM", iri, "IRI is not registered in the vocabulary")
    return out.report()
