"""Vocabulary registry: every class and property the service descriptions use.

Namespace IRIs for the cc* vocabularies and waa are project constants declared
here once; the external vocabularies (GoodRelations, schema.org, ML-Schema,
Dublin Core) use their public namespaces. The registry also owns the unit-code
table, unit-text normalization, and the accepted-currency list.

Run ``python -m dmcc.vocab`` to print the machine-readable term manifest that
ships as ``data/vocab_manifest.json``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import DmccError
from .terms import Iri, RDF, RDFS, XSD

PROJECT_NS_ROOT = "http://dicits.ugr.es/linkeddata/"

NAMESPACES: dict[str, Iri] = {
    "rdf": Iri(RDF),
    "rdfs": Iri(RDFS),
    "xsd": Iri(XSD),
    "dc": Iri("http://purl.org/dc/terms/"),
    "gr": Iri("http://purl.org/goodrelations/v1#"),
    "s": Iri("http://schema.org/"),
    "mls": Iri("http://www.w3.org/ns/mls#"),
    "waa": Iri("http://purl.org/waa#"),
    "dmcc": Iri(PROJECT_NS_ROOT + "dmcc#"),
    "ccdm": Iri(PROJECT_NS_ROOT + "ccdm#"),
    "ccsla": Iri(PROJECT_NS_ROOT + "ccsla#"),
    "ccpricing": Iri(PROJECT_NS_ROOT + "ccpricing#"),
    "ccinstances": Iri(PROJECT_NS_ROOT + "ccinstances#"),
    "ccregions": Iri(PROJECT_NS_ROOT + "ccregions#"),
}


class UnregisteredPrefixError(DmccError):
    """A compact name used a prefix the registry does not know."""

    def __init__(self, prefix: str):
        super().__init__(f"unknown vocabulary prefix {prefix!r}")
        self.prefix = prefix


class UnknownTermError(DmccError):
    """Strict resolution was asked for a term that is not registered."""

    def __init__(self, curie: str):
        super().__init__(f"unknown vocabulary term {curie!r}")
        self.curie = curie


@dataclass(frozen=True)
class VocabTerm:
    curie: str
    iri: Iri
    kind: str  # "class" or "property"
    note: str


# (local name, kind, note) per namespace. "class" also covers named
# individuals used as enumeration values (waa:All, waa:ViaURI).
_TERM_TABLE: dict[str, tuple[tuple[str, str, str], ...]] = {
    "rdf": (
        ("type", "property", "asserts the class of a resource"),
        ("langString", "class", "datatype of language-tagged strings"),
    ),
    "rdfs": (
        ("label", "property", "human-readable resource name"),
    ),
    "xsd": (
        ("string", "class", "plain string datatype"),
        ("integer", "class", "integer datatype"),
        ("decimal", "class", "arbitrary-precision decimal datatype"),
        ("double", "class", "floating-point datatype"),
        ("boolean", "class", "true/false datatype"),
    ),
    "dc": (
        ("title", "property", "name of the described thing"),
        ("description", "property", "free-text description"),
        ("format", "property", "media type or format label"),
    ),
    "gr": (
        ("PriceSpecification", "class", "price of an offering, with currency and unit"),
        ("Offering", "class", "something offered under commercial terms"),
        ("TypeAndQualityNode", "class", "bundle of goods included in an offering"),
        ("name", "property", "commercial name of an entity"),
        ("legalName", "property", "registered legal name of an entity"),
        ("hasNAICS", "property", "NAICS industry classification code"),
        ("max", "property", "upper bound of a price specification"),
        ("priceCurrency", "property", "ISO 4217 currency code"),
        ("includesObject", "property", "links an offering to included goods"),
        ("amountOfThisGood", "property", "quantity of the included good"),
        ("hasUnitOfMeasurement", "property", "UN/CEFACT unit code of a quantity"),
        ("hasCurrencyValue", "property", "numeric amount of a price"),
    ),
    "s": (
        ("PostalAddress", "class", "mailing address"),
        ("ContactPoint", "class", "contact channel of an organization"),
        ("Language", "class", "natural language"),
        ("Action", "class", "an action performed against a service"),
        ("EntryPoint", "class", "API entry point of an action"),
        ("structuredValue", "class", "structured value wrapper"),
        ("QuantitativeValue", "class", "numeric value with bounds and unit"),
        ("OfferCatalog", "class", "catalogue of offerings"),
        ("url", "property", "URL of the described thing"),
        ("serviceLocation", "property", "where the provider operates"),
        ("addressCountry", "property", "country part of an address"),
        ("addressLocality", "property", "locality part of an address"),
        ("contactPoint", "property", "links an entity to a contact channel"),
        ("contactType", "property", "role of a contact channel"),
        ("availableLanguage", "property", "language a contact supports"),
        ("name", "property", "name of the described thing"),
        ("email", "property", "contact email address"),
        ("value", "property", "the wrapped or measured value"),
        ("maxValue", "property", "upper bound of a quantitative value"),
        ("minValue", "property", "lower bound of a quantitative value"),
        ("unitText", "property", "human-readable unit label"),
        ("unitCode", "property", "UN/CEFACT unit code"),
        ("target", "property", "entry point targeted by an action"),
        ("httpMethod", "property", "HTTP method of an entry point"),
        ("urlTemplate", "property", "URL template of an entry point"),
        ("contentType", "property", "media type accepted by an entry point"),
    ),
    "mls": (
        ("Model", "class", "trained model produced by a run"),
        ("ModelEvaluation", "class", "performance measurements of a model"),
        ("Data", "class", "dataset, attribute, instance, or single value"),
        ("Task", "class", "step of a mining process"),
        ("hasInput", "property", "links a run or function to its input"),
        ("hasOutput", "property", "links a run or function to its output"),
    ),
    "waa": (
        ("WebApiAuthentication", "class", "authentication description of a web API"),
        ("Direct", "class", "credentials sent directly with each request"),
        ("OAuth", "class", "OAuth-style delegated authentication"),
        ("APIkey", "class", "API-key credential"),
        ("UsernamePassword", "class", "username/password credential"),
        ("Token", "class", "bearer-token credential"),
        ("All", "class", "marker: every operation requires authentication"),
        ("ViaURI", "class", "credentials transmitted in the request URI"),
        ("ViaHTTPHeader", "class", "credentials transmitted in an HTTP header"),
        ("requiresAuthentication", "property", "which operations need authentication"),
        ("hasAuthenticationMechanism", "property", "links a service to its mechanism"),
        ("hasInputCredentials", "property", "credential the mechanism consumes"),
        ("isGroundedIn", "property", "request field carrying the credential"),
        ("wayOfSendingInformation", "property", "how the credential travels"),
    ),
    "dmcc": (
        ("MLServiceProvider", "class", "organization offering mining services"),
        ("MLService", "class", "a single machine-learning service"),
        ("Interaction", "class", "how consumers talk to a service"),
        ("ServiceAuthentication", "class", "authentication aspect of a service"),
        ("hasMLService", "property", "provider offers this service"),
        ("hasOfferCatalog", "property", "provider's catalogue of services"),
        ("hasInteractionPoint", "property", "service's interaction description"),
        ("hasServiceCommitment", "property", "service's level agreement"),
        ("hasFunction", "property", "algorithm the service executes"),
        ("hasAuthentication", "property", "service's authentication description"),
        ("hasPricingPlan", "property", "pricing plan of a service"),
        ("hasEntryPoint", "property", "action exposed by an interaction"),
        ("hasParameter", "property", "named parameter of an interaction"),
    ),
    "ccdm": (
        ("MLFunction", "class", "operation, function, or algorithm executed"),
        ("MLServiceInput", "class", "input data of an algorithm run"),
        ("MLServiceOutput", "class", "output of an algorithm run"),
        ("MLServiceInputParameters", "class", "parameter block of a function"),
        ("MLServiceInputParameter", "class", "one configurable parameter"),
        ("PMML_Model", "class", "model serialized as PMML"),
        ("hasInputParameters", "property", "links a function to its parameters"),
        ("hasParameter", "property", "one parameter inside a parameter block"),
        ("defaultvalue", "property", "default value of a parameter"),
        ("mandatory", "property", "whether a parameter must be supplied"),
        ("storagebucket", "property", "where the output artifact is stored"),
    ),
    "ccsla": (
        ("SLA", "class", "service level agreement"),
        ("Term", "class", "named agreement term, e.g. monthly uptime"),
        ("Definition", "class", "one metric range of a term"),
        ("Compensation", "class", "what is owed when a range is hit"),
        ("containsTerm", "property", "links an agreement to a term"),
        ("hasDefinition", "property", "links a term to a metric range"),
        ("hasDefinitionValue", "property", "quantitative value of a range"),
        ("hasCompensation", "property", "compensation paired with a range"),
        ("compensationKind", "property", "percentOfBill or serviceCredits"),
    ),
    "ccpricing": (
        ("PricingPlan", "class", "plan with bounds, currency, and components"),
        ("Compound", "class", "one component of a plan's price"),
        ("hasCompound", "property", "links a plan to a price component"),
        ("hasPriceSpecification", "property", "rate charged by a component"),
        ("hasInstance", "property", "instance a component is scoped to"),
        ("hasRegion", "property", "region a component is scoped to"),
        ("minPrice", "property", "lower price bound of a plan"),
        ("maxPrice", "property", "upper price bound of a plan"),
    ),
    "ccinstances": (
        ("Instance", "class", "virtual machine the service runs on"),
        ("ram", "class", "memory block of an instance"),
        ("cpu", "class", "processor block of an instance"),
        ("hd", "class", "storage block of an instance"),
        ("hasRAM", "property", "links an instance to its memory block"),
        ("hasCPU", "property", "links an instance to its processor block"),
        ("hasHD", "property", "links an instance to its storage block"),
        ("cpu_model", "property", "processor model name"),
        ("cores", "property", "number of processor cores"),
    ),
    "ccregions": (
        ("Region", "class", "location where the service is hosted"),
        ("code", "property", "provider-facing region code"),
    ),
}

# The canonical spelling is containsTerm; the misspelled form is accepted on
# input and never emitted.
ALIAS_CURIES: dict[str, str] = {"ccsla:cointainsTerm": "ccsla:containsTerm"}


def _split_curie(curie: str) -> tuple[str, str]:
    if ":" not in curie:
        raise UnregisteredPrefixError(curie)
    prefix, local = curie.split(":", 1)
    return prefix, local


class TermRegistry:
    """Immutable lookup table over every registered vocabulary term."""

    def __init__(self) -> None:
        terms: list[VocabTerm] = []
        by_curie: dict[str, VocabTerm] = {}
        by_iri: dict[Iri, VocabTerm] = {}
        for prefix, entries in _TERM_TABLE.items():
            ns = NAMESPACES[prefix].value
            for local, kind, note in entries:
                term = VocabTerm(f"{prefix}:{local}", Iri(ns + local), kind, note)
                if term.curie in by_curie:
                    raise ValueError(f"duplicate vocabulary term {term.curie}")
                terms.append(term)
                by_curie[term.curie] = term
                by_iri[term.iri] = term
        self._terms = tuple(terms)
        self._by_curie = by_curie
        self._by_iri = by_iri
        self._alias_iris: dict[Iri, Iri] = {}
        for alias, canonical in ALIAS_CURIES.items():
            prefix, local = _split_curie(alias)
            self._alias_iris[Iri(NAMESPACES[prefix].value + local)] = by_curie[canonical].iri

    @property
    def terms(self) -> tuple[VocabTerm, ...]:
        return self._terms

    @property
    def alias_iris(self) -> dict[Iri, Iri]:
        return dict(self._alias_iris)

    def namespace(self, prefix: str) -> Iri:
        if prefix not in NAMESPACES:
            raise UnregisteredPrefixError(prefix)
        return NAMESPACES[prefix]

    def resolve(self, curie: str, strict: bool = False) -> Iri:
        """Expand a compact name; aliases resolve to their canonical IRI."""
        if curie in ALIAS_CURIES:
            curie = ALIAS_CURIES[curie]
        prefix, local = _split_curie(curie)
        ns = self.namespace(prefix)
        if strict and curie not in self._by_curie:
            raise UnknownTermError(curie)
        return Iri(ns.value + local)

    def canonical_iri(self, iri: Iri) -> Iri:
        return self._alias_iris.get(iri, iri)

    def known(self, iri: Iri) -> bool:
        return iri in self._by_iri or iri in self._alias_iris

    def kind_of(self, iri: Iri) -> str:
        term = self._by_iri.get(self.canonical_iri(iri))
        return term.kind if term is not None else "unknown"

    def curie_for(self, iri: Iri) -> str | None:
        """Canonical compact form of an IRI, never an alias spelling."""
        term = self._by_iri.get(self.canonical_iri(iri))
        return term.curie if term is not None else None

    def manifest(self) -> dict:
        return {
            "namespaces": {p: ns.value for p, ns in sorted(NAMESPACES.items())},
            "terms": [
                {"curie": t.curie, "iri": t.iri.value, "kind": t.kind, "note": t.note}
                for t in sorted(self._terms, key=lambda t: t.curie)
            ],
            "aliases": dict(sorted(ALIAS_CURIES.items())),
        }


REGISTRY = TermRegistry()


def term(curie: str) -> Iri:
    """Strictly resolve a compact name that must exist in the registry."""
    return REGISTRY.resolve(curie, strict=True)


def standard_prefixes() -> dict[str, Iri]:
    """The prefix prologue this project's Turtle documents declare."""
    return dict(NAMESPACES)


# UN/CEFACT unit codes the pricing machinery understands, with dimensions.
UNITS: dict[str, tuple[str, str]] = {
    "HRS": ("hour", "time"),
    "MON": ("month", "time"),
    "E34": ("gigabyte", "information"),
}

# Informal spellings mapped onto canonical codes.
UNIT_ALIASES: dict[str, str] = {"GB": "E34", "HR": "HRS", "HOUR": "HRS"}


class UnknownUnitError(DmccError):
    def __init__(self, code: str):
        super().__init__(f"unknown unit code {code!r}")
        self.code = code


def normalize_unit(code: str) -> str:
    """Canonical unit code for a spelling, or raise UnknownUnitError."""
    upper = code.strip().upper()
    upper = UNIT_ALIASES.get(upper, upper)
    if upper not in UNITS:
        raise UnknownUnitError(code)
    return upper


def unit_known(code: str) -> bool:
    try:
        normalize_unit(code)
    except UnknownUnitError:
        return False
    return True


def unit_dimension(code: str) -> str:
    return UNITS[normalize_unit(code)][1]


# Interval unit labels seen in the wild, normalized for comparison. The
# misspelling "Percentaje" occurs in real service descriptions.
_UNIT_TEXT_FORMS: dict[str, str] = {
    "percent": "percent",
    "percentage": "percent",
    "percentaje": "percent",
    "%": "percent",
}


def normalize_unit_text(text: str) -> str:
    low = text.strip().lower()
    return _UNIT_TEXT_FORMS.get(low, low)


# Curated ISO 4217 currency codes; enough for the providers this toolkit
# models. Unknown codes only downgrade to a validation warning.
ISO_4217: frozenset[str] = frozenset(
    """
    AED ARS AUD BGN BHD BOB BRL CAD CHF CLP CNY COP CRC CZK DKK DOP DZD EGP
    EUR GBP GEL GHS GTQ HKD HNL HUF IDR ILS INR ISK JMD JOD JPY KES KRW KWD
    KZT LKR MAD MXN MYR NGN NOK NZD OMR PAB PEN PHP PKR PLN PYG QAR RON RSD
    SAR SEK SGD THB TND TRY TTD TWD TZS UAH UGX USD UYU VND ZAR ZMW
    """.split()
)


def currency_known(code: str) -> bool:
    return code in ISO_4217


if __name__ == "__main__":
    print(json.dumps(REGISTRY.manifest(), indent=2, sort_keys=False))
