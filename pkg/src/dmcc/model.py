"""Typed view of service descriptions: lift graphs into objects and back.

Extraction is a pure read over an immutable graph. Missing optional links
yield absent fields; only structurally broken data (dangling aspect links,
unparseable numerics) raises. The typed objects are immutable and can be
lowered back into a graph whose re-extraction is a fixed point.

JSON export uses the stable field names documented in README (shape version
``MODEL_JSON_VERSION``); decimals are serialized as strings to stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from decimal import Decimal, InvalidOperation

from .errors import DmccError
from .graph import Graph
from .terms import BlankNode, Iri, Literal, RDF_TYPE, Term, Triple, XSD_BOOLEAN, XSD_DECIMAL, XSD_INTEGER, nt_form
from . import vocab
from .vocab import UnknownUnitError, normalize_unit, normalize_unit_text, term

MODEL_JSON_VERSION = "1"

HTTP_METHODS = ("GET", "POST", "PUT", "DELETE", "PATCH")
COMPENSATION_KINDS = ("percentOfBill", "serviceCredits")


class ExtractionError(DmccError):
    """A graph could not be lifted into the typed model."""


class WrongTypeError(ExtractionError):
    def __init__(self, node: Term, expected: str):
        super().__init__(f"{nt_form(node)} is not typed {expected}")
        self.node = node
        self.expected = expected


class DanglingReferenceError(ExtractionError):
    def __init__(self, node: Term, predicate: str, target: Term):
        super().__init__(
            f"{predicate} on {nt_form(node)} points at {nt_form(target)}, which has no triples"
        )
        self.node = node
        self.predicate = predicate
        self.target = target


class MalformedLiteralError(ExtractionError):
    def __init__(self, where: str, value: object):
        super().__init__(f"malformed value for {where}: {value!r}")
        self.where = where


class MalformedIntervalError(ExtractionError):
    def __init__(self, node: Term, reason: str):
        super().__init__(f"malformed interval at {nt_form(node)}: {reason}")
        self.node = node


class MalformedBooleanError(ExtractionError):
    def __init__(self, where: str, value: object):
        super().__init__(f"boolean field {where} must be 'true' or 'false', got {value!r}")
        self.where = where


class InvariantViolation(DmccError):
    def __init__(self, field_name: str, reason: str):
        super().__init__(f"invariant violated on {field_name}: {reason}")
        self.field = field_name


# ---------------------------------------------------------------------------
# Typed model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PostalAddress:
    country: str | None = None
    locality: str | None = None


@dataclass(frozen=True)
class ContactPoint:
    contact_type: str | None = None
    languages: tuple[str, ...] = ()
    email: str | None = None


@dataclass(frozen=True)
class InteractionParameter:
    name: str
    description: str | None = None


@dataclass(frozen=True)
class InteractionPoint:
    node: Term
    http_method: str | None = None
    url_template: str | None = None
    content_type: str | None = None
    parameters: tuple[InteractionParameter, ...] = ()


@dataclass(frozen=True)
class Authentication:
    node: Term
    requires: str | None = None  # all | none | partial
    mechanism: str | None = None  # direct | oauth | other
    mechanism_label: str | None = None
    credential: str | None = None  # apiKey | usernamePassword | token | other
    grounding_field: str | None = None
    transmission: str | None = None  # viaUri | viaHeader | other
    # original graph terms, kept so lowering is faithful for non-enum values
    requires_ref: Iri | None = None
    mechanism_type_ref: Iri | None = None
    credential_type_ref: Iri | None = None
    transmission_ref: Iri | None = None


@dataclass(frozen=True)
class Interval:
    min: Decimal
    max: Decimal
    unit: str  # normalized unit label, e.g. "percent"


@dataclass(frozen=True)
class Compensation:
    kind: str  # percentOfBill | serviceCredits
    amount: Decimal


@dataclass(frozen=True)
class SlaTerm:
    name: str
    definitions: tuple[Interval, ...] = ()
    # aligned 1:1 with definitions; None marks a range with no compensation
    compensations: tuple[Compensation | None, ...] = ()
    paired_by_order: bool = False
    unpaired_compensations: int = 0


@dataclass(frozen=True)
class SlaAgreement:
    node: Term
    terms: tuple[SlaTerm, ...] = ()


@dataclass(frozen=True)
class Quantity:
    amount: Decimal
    unit: str


@dataclass(frozen=True)
class PriceSpec:
    node: Term | None = None
    unit_price: Decimal = Decimal(0)
    currency: str | None = None
    unit: str | None = None
    max_charge: Decimal | None = None


@dataclass(frozen=True)
class Instance:
    node: Term
    ram_gb: Decimal | None = None
    cpu_model: str | None = None
    cores: int | None = None
    storage_gb: Decimal | None = None


@dataclass(frozen=True)
class Region:
    node: Term
    code: str = ""
    display_name: str | None = None


@dataclass(frozen=True)
class Compound:
    node: Term
    price_spec: PriceSpec | None = None
    instance: Instance | None = None
    region: Region | None = None
    allowance: Quantity | None = None

    def billing_unit(self) -> str | None:
        """Unit this component charges or includes, with allowance fallback."""
        if self.price_spec is not None and self.price_spec.unit:
            return self.price_spec.unit
        if self.allowance is not None:
            return self.allowance.unit
        return None


@dataclass(frozen=True)
class PricingPlan:
    node: Term
    name: str = ""
    min_price: Decimal | None = None
    max_price: Decimal | None = None
    currency: str = ""
    compounds: tuple[Compound, ...] = ()


@dataclass(frozen=True)
class Parameter:
    title: str
    description: str | None = None
    default_value: str | None = None
    mandatory: bool = True


@dataclass(frozen=True)
class DataInputSpec:
    description: str | None = None
    format: str | None = None


@dataclass(frozen=True)
class OutputSpec:
    kind: str  # model | modelEvaluation | data
    format: str | None = None
    storage_bucket: str | None = None
    title: str | None = None
    description: str | None = None


@dataclass(frozen=True)
class MLFunction:
    node: Term
    name: str = ""
    parameters: tuple[Parameter, ...] = ()
    inputs: tuple[DataInputSpec, ...] = ()
    outputs: tuple[OutputSpec, ...] = ()


@dataclass(frozen=True)
class MLService:
    node: Term
    label: str | None = None
    description: str | None = None
    interaction: InteractionPoint | None = None
    sla: SlaAgreement | None = None
    function: MLFunction | None = None
    authentication: Authentication | None = None
    pricing: tuple[PricingPlan, ...] = ()


@dataclass(frozen=True)
class ServiceProvider:
    node: Term
    name: str
    label: str | None = None
    description: str | None = None
    legal_name: str | None = None
    naics: str | None = None
    url: Iri | None = None
    location: PostalAddress | None = None
    contacts: tuple[ContactPoint, ...] = ()
    services: tuple[MLService, ...] = ()
    catalog_ref: Term | None = None


# Field-to-vocabulary mapping; a meta-test keeps it aligned with the registry.
FIELD_TERMS: dict[str, str] = {
    "ServiceProvider.label": "rdfs:label",
    "ServiceProvider.description": "dc:description",
    "ServiceProvider.name": "gr:name",
    "ServiceProvider.legal_name": "gr:legalName",
    "ServiceProvider.naics": "gr:hasNAICS",
    "ServiceProvider.url": "s:url",
    "ServiceProvider.location": "s:serviceLocation",
    "ServiceProvider.contacts": "s:contactPoint",
    "ServiceProvider.services": "dmcc:hasMLService",
    "ServiceProvider.catalog_ref": "dmcc:hasOfferCatalog",
    "PostalAddress.country": "s:addressCountry",
    "PostalAddress.locality": "s:addressLocality",
    "ContactPoint.contact_type": "s:contactType",
    "ContactPoint.languages": "s:availableLanguage",
    "ContactPoint.email": "s:email",
    "MLService.label": "rdfs:label",
    "MLService.description": "dc:description",
    "MLService.interaction": "dmcc:hasInteractionPoint",
    "MLService.sla": "dmcc:hasServiceCommitment",
    "MLService.function": "dmcc:hasFunction",
    "MLService.authentication": "dmcc:hasAuthentication",
    "MLService.pricing": "dmcc:hasPricingPlan",
    "InteractionPoint.http_method": "s:httpMethod",
    "InteractionPoint.url_template": "s:urlTemplate",
    "InteractionPoint.content_type": "s:contentType",
    "InteractionPoint.parameters": "dmcc:hasParameter",
    "Authentication.requires": "waa:requiresAuthentication",
    "Authentication.mechanism": "waa:hasAuthenticationMechanism",
    "Authentication.credential": "waa:hasInputCredentials",
    "Authentication.grounding_field": "waa:isGroundedIn",
    "Authentication.transmission": "waa:wayOfSendingInformation",
    "SlaAgreement.terms": "ccsla:containsTerm",
    "SlaTerm.name": "dc:title",
    "SlaTerm.definitions": "ccsla:hasDefinition",
    "SlaTerm.compensations": "ccsla:hasCompensation",
    "Interval.min": "s:minValue",
    "Interval.max": "s:maxValue",
    "Interval.unit": "s:unitText",
    "Compensation.kind": "ccsla:compensationKind",
    "Compensation.amount": "s:value",
    "PricingPlan.name": "dc:title",
    "PricingPlan.min_price": "ccpricing:minPrice",
    "PricingPlan.max_price": "ccpricing:maxPrice",
    "PricingPlan.currency": "gr:priceCurrency",
    "PricingPlan.compounds": "ccpricing:hasCompound",
    "Compound.price_spec": "ccpricing:hasPriceSpecification",
    "Compound.instance": "ccpricing:hasInstance",
    "Compound.region": "ccpricing:hasRegion",
    "Compound.allowance": "gr:includesObject",
    "PriceSpec.unit_price": "gr:hasCurrencyValue",
    "PriceSpec.currency": "gr:priceCurrency",
    "PriceSpec.unit": "gr:hasUnitOfMeasurement",
    "PriceSpec.max_charge": "gr:max",
    "Quantity.amount": "gr:amountOfThisGood",
    "Quantity.unit": "gr:hasUnitOfMeasurement",
    "Instance.ram_gb": "ccinstances:hasRAM",
    "Instance.cpu_model": "ccinstances:cpu_model",
    "Instance.cores": "ccinstances:cores",
    "Instance.storage_gb": "ccinstances:hasHD",
    "Region.code": "ccregions:code",
    "Region.display_name": "dc:title",
    "MLFunction.name": "dc:title",
    "MLFunction.parameters": "ccdm:hasInputParameters",
    "MLFunction.inputs": "mls:hasInput",
    "MLFunction.outputs": "mls:hasOutput",
    "Parameter.title": "dc:title",
    "Parameter.description": "dc:description",
    "Parameter.default_value": "ccdm:defaultvalue",
    "Parameter.mandatory": "ccdm:mandatory",
    "DataInputSpec.description": "dc:description",
    "DataInputSpec.format": "dc:format",
    "OutputSpec.storage_bucket": "ccdm:storagebucket",
    "OutputSpec.title": "dc:title",
    "OutputSpec.description": "dc:description",
}


# ---------------------------------------------------------------------------
# Extraction helpers
# ---------------------------------------------------------------------------


def _objs(g: Graph, node: Term, curie: str) -> list[Term]:
    return g.objects(node, term(curie))


def _first(g: Graph, node: Term, curie: str) -> Term | None:
    found = _objs(g, node, curie)
    return found[0] if found else None


def _text(g: Graph, node: Term, curie: str) -> str | None:
    for obj in _objs(g, node, curie):
        if isinstance(obj, Literal):
            return obj.lexical
    return None


def _decimal_of(obj: Term, where: str) -> Decimal:
    if not isinstance(obj, Literal):
        raise MalformedLiteralError(where, obj)
    try:
        return Decimal(obj.lexical)
    except InvalidOperation:
        raise MalformedLiteralError(where, obj.lexical) from None


def _decimal(g: Graph, node: Term, curie: str) -> Decimal | None:
    obj = _first(g, node, curie)
    if obj is None:
        return None
    return _decimal_of(obj, curie)


def _is_typed(g: Graph, node: Term, curie: str) -> bool:
    return Triple(node, RDF_TYPE, term(curie)) in g if isinstance(node, (Iri, BlankNode)) else False


def _types(g: Graph, node: Term) -> set[Iri]:
    return {o for o in g.objects(node, RDF_TYPE) if isinstance(o, Iri)}


def _node_name(node: Term) -> str:
    if isinstance(node, BlankNode):
        return node.label
    if isinstance(node, Iri):
        return node.value.rsplit("#", 1)[-1].rsplit("/", 1)[-1]
    return nt_form(node)


def _require_target(g: Graph, node: Term, curie: str, target: Term) -> None:
    if isinstance(target, Literal) or not g.has_subject(target):
        raise DanglingReferenceError(node, curie, target)


# ---------------------------------------------------------------------------
# Extraction
# ---------------------------------------------------------------------------


def list_providers(g: Graph) -> list[Term]:
    """All subjects typed as service providers, in canonical order."""
    return g.subjects_of_type(term("dmcc:MLServiceProvider"))


def list_services(g: Graph) -> list[Term]:
    return g.subjects_of_type(term("dmcc:MLService"))


def extract_provider(g: Graph, node: Term) -> ServiceProvider:
    if not _is_typed(g, node, "dmcc:MLServiceProvider"):
        raise WrongTypeError(node, "dmcc:MLServiceProvider")
    location = None
    loc_node = _first(g, node, "s:serviceLocation")
    if loc_node is not None:
        location = PostalAddress(
            country=_text(g, loc_node, "s:addressCountry"),
            locality=_text(g, loc_node, "s:addressLocality"),
        )
    contacts = []
    for cp in _objs(g, node, "s:contactPoint"):
        languages = []
        for lang in _objs(g, cp, "s:availableLanguage"):
            lang_name = _text(g, lang, "s:name")
            if lang_name:
                languages.append(lang_name)
        contacts.append(
            ContactPoint(
                contact_type=_text(g, cp, "s:contactType"),
                languages=tuple(sorted(languages)),
                email=_text(g, cp, "s:email"),
            )
        )
    contacts.sort(key=lambda c: (c.contact_type or "", c.email or ""))
    services = []
    for svc in _objs(g, node, "dmcc:hasMLService"):
        _require_target(g, node, "dmcc:hasMLService", svc)
        services.append(extract_service(g, svc))
    url = _first(g, node, "s:url")
    return ServiceProvider(
        node=node,
        name=_text(g, node, "gr:name") or _text(g, node, "rdfs:label") or _node_name(node),
        label=_text(g, node, "rdfs:label"),
        description=_text(g, node, "dc:description"),
        legal_name=_text(g, node, "gr:legalName"),
        naics=_text(g, node, "gr:hasNAICS"),
        url=url if isinstance(url, Iri) else None,
        location=location,
        contacts=tuple(contacts),
        services=tuple(services),
        catalog_ref=_first(g, node, "dmcc:hasOfferCatalog"),
    )


_ASPECT_LINKS = {
    "interaction": "dmcc:hasInteractionPoint",
    "sla": "dmcc:hasServiceCommitment",
    "function": "dmcc:hasFunction",
    "authentication": "dmcc:hasAuthentication",
    "pricing": "dmcc:hasPricingPlan",
}


def extract_service(g: Graph, node: Term) -> MLService:
    if not _is_typed(g, node, "dmcc:MLService"):
        raise WrongTypeError(node, "dmcc:MLService")
    targets: dict[str, list[Term]] = {}
    for aspect, curie in _ASPECT_LINKS.items():
        found = _objs(g, node, curie)
        for tgt in found:
            _require_target(g, node, curie, tgt)
        targets[aspect] = found

    interaction = sla = function = authentication = None
    if targets["interaction"]:
        interaction = extract_interaction(g, targets["interaction"][0])
    if targets["sla"]:
        sla = extract_sla(g, targets["sla"][0])
    if targets["function"]:
        function = extract_function(g, targets["function"][0])
    if targets["authentication"]:
        authentication = extract_authentication(g, targets["authentication"][0])
    pricing = tuple(extract_pricing(g, t) for t in targets["pricing"])
    return MLService(
        node=node,
        label=_text(g, node, "rdfs:label"),
        description=_text(g, node, "dc:description"),
        interaction=interaction,
        sla=sla,
        function=function,
        authentication=authentication,
        pricing=pricing,
    )


def extract_interaction(g: Graph, node: Term) -> InteractionPoint:
    # Entry-point details may sit on the interaction node itself, on an
    # action reached via hasEntryPoint, or on the action's target.
    candidates: list[Term] = [node]
    for action in _objs(g, node, "dmcc:hasEntryPoint"):
        candidates.append(action)
        candidates.extend(_objs(g, action, "s:target"))

    def find(curie: str) -> str | None:
        for cand in candidates:
            value = _text(g, cand, curie)
            if value is not None:
                return value
        return None

    method = find("s:httpMethod")
    if method is not None:
        method = method.upper()
        if method not in HTTP_METHODS:
            raise MalformedLiteralError("s:httpMethod", method)
    parameters = [
        InteractionParameter(
            name=_text(g, p, "dc:title") or _node_name(p),
            description=_text(g, p, "dc:description"),
        )
        for p in _objs(g, node, "dmcc:hasParameter")
    ]
    parameters.sort(key=lambda p: (p.name, p.description or ""))
    return InteractionPoint(
        node=node,
        http_method=method,
        url_template=find("s:urlTemplate"),
        content_type=find("s:contentType"),
        parameters=tuple(parameters),
    )


_REQUIRES_MAP = {"waa:All": "all"}
_MECHANISM_MAP = {"waa:Direct": "direct", "waa:OAuth": "oauth"}
_CREDENTIAL_MAP = {"waa:APIkey": "apiKey", "waa:UsernamePassword": "usernamePassword", "waa:Token": "token"}
_TRANSMISSION_MAP = {"waa:ViaURI": "viaUri", "waa:ViaHTTPHeader": "viaHeader"}


def _classify(iri: Iri | None, mapping: dict[str, str]) -> str | None:
    if iri is None:
        return None
    for curie, label in mapping.items():
        if iri == term(curie):
            return label
    return "other"


def extract_authentication(g: Graph, node: Term) -> Authentication:
    requires_ref = _first(g, node, "waa:requiresAuthentication")
    requires_ref = requires_ref if isinstance(requires_ref, Iri) else None
    requires = _classify(requires_ref, _REQUIRES_MAP)
    if requires == "other":
        requires = "partial"
    if requires is None:
        requires = "none"

    mech_node = _first(g, node, "waa:hasAuthenticationMechanism")
    mechanism = mechanism_label = None
    credential = grounding = None
    transmission = None
    mech_ref = cred_ref = trans_ref = None
    if mech_node is not None:
        mech_types = sorted(_types(g, mech_node), key=nt_form)
        mech_ref = mech_types[0] if mech_types else None
        mechanism = _classify(mech_ref, _MECHANISM_MAP)
        if mechanism == "other" and mech_ref is not None:
            mechanism_label = _node_name(mech_ref)
        cred_node = _first(g, mech_node, "waa:hasInputCredentials")
        if cred_node is not None:
            cred_types = sorted(_types(g, cred_node), key=nt_form)
            cred_ref = cred_types[0] if cred_types else None
            credential = _classify(cred_ref, _CREDENTIAL_MAP)
            grounding = _text(g, cred_node, "waa:isGroundedIn")
            if credential == "apiKey" and not grounding:
                raise MalformedLiteralError("waa:isGroundedIn", "API-key credential lacks a grounding field")
        trans = _first(g, mech_node, "waa:wayOfSendingInformation")
        trans_ref = trans if isinstance(trans, Iri) else None
        transmission = _classify(trans_ref, _TRANSMISSION_MAP)
    return Authentication(
        node=node,
        requires=requires,
        mechanism=mechanism,
        mechanism_label=mechanism_label,
        credential=credential,
        grounding_field=grounding,
        transmission=transmission,
        requires_ref=requires_ref,
        mechanism_type_ref=mech_ref,
        credential_type_ref=cred_ref,
        transmission_ref=trans_ref,
    )


def _interval_source(g: Graph, def_node: Term) -> Term | None:
    """Find the node carrying min/max, chasing value wrappers a few levels."""
    frontier = [def_node]
    for _ in range(4):
        next_frontier: list[Term] = []
        for cand in frontier:
            if _first(g, cand, "s:minValue") is not None or _first(g, cand, "s:maxValue") is not None:
                return cand
            next_frontier.extend(_objs(g, cand, "ccsla:hasDefinitionValue"))
            next_frontier.extend(_objs(g, cand, "s:value"))
        frontier = next_frontier
    return None


def _extract_compensation(g: Graph, node: Term) -> Compensation | None:
    """None when the node is incomplete; the validator reports the mismatch."""
    kind = _text(g, node, "ccsla:compensationKind")
    if kind is None:
        return None
    if kind not in COMPENSATION_KINDS:
        raise MalformedLiteralError("ccsla:compensationKind", kind)
    amount = _decimal(g, node, "s:value")
    if amount is None:
        return None
    return Compensation(kind=kind, amount=amount)


def extract_sla(g: Graph, node: Term) -> SlaAgreement:
    contains = term("ccsla:containsTerm")
    term_nodes = list(g.objects(node, contains))
    for alias_iri, canonical in vocab.REGISTRY.alias_iris.items():
        if canonical == contains:
            term_nodes.extend(g.objects(node, alias_iri))
    if not _is_typed(g, node, "ccsla:SLA") and not term_nodes:
        raise WrongTypeError(node, "ccsla:SLA")

    terms = []
    for term_node in term_nodes:
        name = _text(g, term_node, "dc:title") or _node_name(term_node)
        entries: list[tuple[Interval, Compensation | None, Term]] = []
        for def_node in _objs(g, term_node, "ccsla:hasDefinition"):
            source = _interval_source(g, def_node)
            if source is None:
                continue  # definition carries no value at all: absent, not malformed
            low = _decimal(g, source, "s:minValue")
            high = _decimal(g, source, "s:maxValue")
            if low is None or high is None:
                raise MalformedIntervalError(def_node, "missing minimum or maximum")
            unit = normalize_unit_text(_text(g, source, "s:unitText") or "")
            comp_node = _first(g, def_node, "ccsla:hasCompensation")
            comp = _extract_compensation(g, comp_node) if comp_node is not None else None
            entries.append((Interval(low, high, unit), comp, def_node))

        term_comp_nodes = _objs(g, term_node, "ccsla:hasCompensation")
        paired_by_order = False
        unpaired = 0
        if entries and all(comp is None for _, comp, _ in entries) and term_comp_nodes:
            # No per-range links: fall back to pairing sorted ranges with
            # sorted compensation nodes. The validator flags this.
            paired_by_order = True
            entries.sort(key=lambda e: (e[0].min, e[0].max))
            comps = [_extract_compensation(g, c) for c in term_comp_nodes]
            paired: list[tuple[Interval, Compensation | None, Term]] = []
            for i, (interval, _, def_node) in enumerate(entries):
                paired.append((interval, comps[i] if i < len(comps) else None, def_node))
            unpaired = max(0, len(comps) - len(entries))
            entries = paired
        else:
            unpaired = len(term_comp_nodes)
            entries.sort(key=lambda e: (e[0].min, e[0].max))

        terms.append(
            SlaTerm(
                name=name,
                definitions=tuple(e[0] for e in entries),
                compensations=tuple(e[1] for e in entries),
                paired_by_order=paired_by_order,
                unpaired_compensations=unpaired,
            )
        )
    terms.sort(key=lambda t: (t.name, tuple((i.min, i.max) for i in t.definitions)))
    return SlaAgreement(node=node, terms=tuple(terms))


def _extract_instance(g: Graph, node: Term) -> Instance:
    ram = storage = None
    cpu_model = None
    cores = None
    ram_node = _first(g, node, "ccinstances:hasRAM")
    if ram_node is not None:
        ram = _decimal(g, ram_node, "s:value")
        code = _text(g, ram_node, "s:unitCode")
        if code is not None and vocab.unit_known(code) and vocab.unit_dimension(code) != "information":
            raise MalformedLiteralError("s:unitCode", f"memory sized in non-information unit {code!r}")
    cpu_node = _first(g, node, "ccinstances:hasCPU")
    if cpu_node is not None:
        cpu_model = _text(g, cpu_node, "ccinstances:cpu_model")
        raw_cores = _decimal(g, cpu_node, "ccinstances:cores")
        if raw_cores is not None:
            if raw_cores != int(raw_cores):
                raise MalformedLiteralError("ccinstances:cores", raw_cores)
            cores = int(raw_cores)
    hd_node = _first(g, node, "ccinstances:hasHD")
    if hd_node is not None:
        storage = _decimal(g, hd_node, "s:value")
    return Instance(node=node, ram_gb=ram, cpu_model=cpu_model, cores=cores, storage_gb=storage)


def _extract_region(g: Graph, node: Term) -> Region:
    return Region(
        node=node,
        code=_text(g, node, "ccregions:code") or "",
        display_name=_text(g, node, "dc:title"),
    )


def _extract_price_spec(g: Graph, node: Term, strict_units: bool) -> tuple[PriceSpec, Quantity | None]:
    unit = _text(g, node, "gr:hasUnitOfMeasurement")
    if unit is not None:
        unit = _normalize_unit_lenient(unit, strict_units)
    spec = PriceSpec(
        node=node,
        unit_price=_decimal(g, node, "gr:hasCurrencyValue") or Decimal(0),
        currency=_text(g, node, "gr:priceCurrency"),
        unit=unit,
        max_charge=_decimal(g, node, "gr:max"),
    )
    allowance = None
    inc = _first(g, node, "gr:includesObject")
    if inc is not None:
        # an included good missing its amount or unit is an absent allowance
        amount = _decimal(g, inc, "gr:amountOfThisGood")
        inc_unit = _text(g, inc, "gr:hasUnitOfMeasurement")
        if amount is not None and inc_unit is not None:
            allowance = Quantity(amount=amount, unit=_normalize_unit_lenient(inc_unit, strict_units))
    return spec, allowance


def _normalize_unit_lenient(code: str, strict: bool) -> str:
    try:
        return normalize_unit(code)
    except UnknownUnitError:
        if strict:
            raise
        return code.strip().upper()


def extract_pricing(g: Graph, node: Term, strict_units: bool = True) -> PricingPlan:
    """Lift a pricing plan; with strict_units=False unknown unit codes are kept
    verbatim instead of raising, which the validator uses to warn."""
    if not _is_typed(g, node, "ccpricing:PricingPlan"):
        raise WrongTypeError(node, "ccpricing:PricingPlan")
    compounds = []
    for comp_node in _objs(g, node, "ccpricing:hasCompound"):
        spec = allowance = None
        spec_node = _first(g, comp_node, "ccpricing:hasPriceSpecification")
        if spec_node is not None:
            spec, allowance = _extract_price_spec(g, spec_node, strict_units)
        instance_node = _first(g, comp_node, "ccpricing:hasInstance")
        region_node = _first(g, comp_node, "ccpricing:hasRegion")
        compounds.append(
            Compound(
                node=comp_node,
                price_spec=spec,
                instance=_extract_instance(g, instance_node) if instance_node is not None else None,
                region=_extract_region(g, region_node) if region_node is not None else None,
                allowance=allowance,
            )
        )
    currency = _text(g, node, "gr:priceCurrency")
    if currency is None:
        spec_currencies = sorted({c.price_spec.currency for c in compounds if c.price_spec and c.price_spec.currency})
        currency = spec_currencies[0] if spec_currencies else ""
    return PricingPlan(
        node=node,
        name=_text(g, node, "dc:title") or _node_name(node),
        min_price=_decimal(g, node, "ccpricing:minPrice"),
        max_price=_decimal(g, node, "ccpricing:maxPrice"),
        currency=currency,
        compounds=tuple(compounds),
    )


def _parse_mandatory(g: Graph, node: Term) -> bool:
    obj = _first(g, node, "ccdm:mandatory")
    if obj is None:
        return True  # no opt-out means required
    if not isinstance(obj, Literal) or obj.lexical not in ("true", "false"):
        raise MalformedBooleanError("ccdm:mandatory", obj)
    return obj.lexical == "true"


def extract_function(g: Graph, node: Term) -> MLFunction:
    if not _is_typed(g, node, "ccdm:MLFunction"):
        raise WrongTypeError(node, "ccdm:MLFunction")
    parameters = []
    for block in _objs(g, node, "ccdm:hasInputParameters"):
        for p in _objs(g, block, "ccdm:hasParameter"):
            parameters.append(
                Parameter(
                    title=_text(g, p, "dc:title") or _node_name(p),
                    description=_text(g, p, "dc:description"),
                    default_value=_text(g, p, "ccdm:defaultvalue"),
                    mandatory=_parse_mandatory(g, p),
                )
            )
    parameters.sort(key=lambda p: p.title)
    inputs = []
    for inp in _objs(g, node, "mls:hasInput"):
        inputs.append(
            DataInputSpec(
                description=_text(g, inp, "dc:description"),
                format=_text(g, inp, "dc:format"),
            )
        )
    inputs.sort(key=lambda i: (i.description or "", i.format or ""))
    outputs = []
    for out in _objs(g, node, "mls:hasOutput"):
        types = _types(g, out)
        if term("ccdm:PMML_Model") in types:
            kind, fmt = "model", "PMML"
        elif term("mls:Model") in types:
            kind, fmt = "model", None
        elif term("mls:ModelEvaluation") in types:
            kind, fmt = "modelEvaluation", None
        elif term("mls:Data") in types:
            kind, fmt = "data", None
        else:
            continue  # unclassifiable output target
        explicit_fmt = _text(g, out, "dc:format")
        bucket = _first(g, out, "ccdm:storagebucket")
        outputs.append(
            OutputSpec(
                kind=kind,
                format=explicit_fmt or fmt,
                storage_bucket=bucket.value if isinstance(bucket, Iri) else (
                    bucket.lexical if isinstance(bucket, Literal) else None
                ),
                title=_text(g, out, "dc:title"),
                description=_text(g, out, "dc:description"),
            )
        )
    outputs.sort(key=lambda o: (o.title or "", o.kind))
    return MLFunction(
        node=node,
        name=_text(g, node, "dc:title") or _node_name(node),
        parameters=tuple(parameters),
        inputs=tuple(inputs),
        outputs=tuple(outputs),
    )


# ---------------------------------------------------------------------------
# Invariant checks (used by lower and by callers constructing models by hand)
# ---------------------------------------------------------------------------


def check_interval(interval: Interval, where: str = "interval") -> None:
    if interval.min > interval.max:
        raise InvariantViolation(f"{where}.min", "min exceeds max")
    if interval.unit == "percent" and (interval.min < 0 or interval.max > 100):
        raise InvariantViolation(f"{where}.unit", "percent interval outside [0, 100]")


def check_compensation(comp: Compensation, where: str = "compensation") -> None:
    if comp.kind not in COMPENSATION_KINDS:
        raise InvariantViolation(f"{where}.kind", f"unknown kind {comp.kind!r}")
    if comp.amount < 0:
        raise InvariantViolation(f"{where}.amount", "amount is negative")
    if comp.kind == "percentOfBill" and comp.amount > 100:
        raise InvariantViolation(f"{where}.amount", "percent of bill exceeds 100")


def check_provider(provider: ServiceProvider) -> None:
    if not provider.name:
        raise InvariantViolation("ServiceProvider.name", "empty name")
    for service in provider.services:
        check_service(service)


def check_service(service: MLService) -> None:
    if service.interaction is not None:
        method = service.interaction.http_method
        if method is not None and method not in HTTP_METHODS:
            raise InvariantViolation("InteractionPoint.http_method", f"unsupported method {method!r}")
    auth = service.authentication
    if auth is not None and auth.credential == "apiKey" and not auth.grounding_field:
        raise InvariantViolation("Authentication.grounding_field", "API-key credential lacks a grounding field")
    if service.sla is not None:
        for t in service.sla.terms:
            for i, interval in enumerate(t.definitions):
                check_interval(interval, f"SlaTerm[{t.name}].definitions[{i}]")
            for i, comp in enumerate(t.compensations):
                if comp is not None:
                    check_compensation(comp, f"SlaTerm[{t.name}].compensations[{i}]")
    if service.function is not None:
        titles = [p.title for p in service.function.parameters]
        if len(titles) != len(set(titles)):
            raise InvariantViolation("MLFunction.parameters", "duplicate parameter titles")
        for p in service.function.parameters:
            if not p.title:
                raise InvariantViolation("Parameter.title", "empty title")
    for plan in service.pricing:
        if plan.min_price is not None and plan.max_price is not None and plan.min_price > plan.max_price:
            raise InvariantViolation("PricingPlan.min_price", "min price exceeds max price")
        for c, compound in enumerate(plan.compounds):
            if compound.price_spec is None and compound.allowance is None:
                raise InvariantViolation(
                    f"Compound[{c}]", "needs a price specification or an allowance"
                )
            if compound.price_spec is not None and compound.price_spec.unit_price < 0:
                raise InvariantViolation("PriceSpec.unit_price", "negative unit price")
            if compound.allowance is not None and compound.allowance.amount < 0:
                raise InvariantViolation("Quantity.amount", "negative allowance")
            inst = compound.instance
            if inst is not None:
                for attr in ("ram_gb", "storage_gb"):
                    value = getattr(inst, attr)
                    if value is not None and value <= 0:
                        raise InvariantViolation(f"Instance.{attr}", "must be positive")
                if inst.cores is not None and inst.cores <= 0:
                    raise InvariantViolation("Instance.cores", "must be positive")


# ---------------------------------------------------------------------------
# Lowering
# ---------------------------------------------------------------------------


class _Builder:
    def __init__(self, used_labels: set[str]):
        self.triples: list[Triple] = []
        self._used = used_labels
        self._counter = 0

    def node_for(self, node: Term | None) -> Term:
        if node is not None:
            return node
        while True:
            label = f"n{self._counter}"
            self._counter += 1
            if label not in self._used:
                self._used.add(label)
                return BlankNode(label)

    def add(self, s: Term, p_curie: str, o: Term) -> None:
        self.triples.append(Triple(s, term(p_curie), o))

    def add_type(self, s: Term, cls_curie: str) -> None:
        self.triples.append(Triple(s, RDF_TYPE, term(cls_curie)))

    def add_text(self, s: Term, p_curie: str, value: str | None, lang: str | None = None) -> None:
        if value is not None:
            self.add(s, p_curie, Literal(value, language=lang))

    def add_decimal(self, s: Term, p_curie: str, value: Decimal | None) -> None:
        if value is not None:
            lexical = format(value, "f")
            datatype = XSD_DECIMAL if "." in lexical else XSD_INTEGER
            self.add(s, p_curie, Literal(lexical, datatype))

    def add_bool(self, s: Term, p_curie: str, value: bool) -> None:
        self.add(s, p_curie, Literal("true" if value else "false", XSD_BOOLEAN))


def _collect_labels(provider: ServiceProvider) -> set[str]:
    labels: set[str] = set()

    def visit(value: object) -> None:
        if isinstance(value, BlankNode):
            labels.add(value.label)
        elif isinstance(value, tuple):
            for item in value:
                visit(item)
        elif hasattr(value, "__dataclass_fields__"):
            for f in fields(value):
                visit(getattr(value, f.name))

    visit(provider)
    return labels


def lower(provider: ServiceProvider) -> Graph:
    """Build the graph a typed description denotes; inverse of extraction."""
    check_provider(provider)
    b = _Builder(_collect_labels(provider))
    node = b.node_for(provider.node)
    b.add_type(node, "dmcc:MLServiceProvider")
    b.add_text(node, "gr:name", provider.name)
    b.add_text(node, "rdfs:label", provider.label, lang="en" if provider.label else None)
    b.add_text(node, "dc:description", provider.description, lang="en" if provider.description else None)
    b.add_text(node, "gr:legalName", provider.legal_name)
    b.add_text(node, "gr:hasNAICS", provider.naics)
    if provider.url is not None:
        b.add(node, "s:url", provider.url)
    if provider.location is not None:
        loc = b.node_for(None)
        b.add(node, "s:serviceLocation", loc)
        b.add_type(loc, "s:PostalAddress")
        b.add_text(loc, "s:addressCountry", provider.location.country)
        b.add_text(loc, "s:addressLocality", provider.location.locality)
    for contact in provider.contacts:
        cp = b.node_for(None)
        b.add(node, "s:contactPoint", cp)
        b.add_type(cp, "s:ContactPoint")
        b.add_text(cp, "s:contactType", contact.contact_type)
        b.add_text(cp, "s:email", contact.email)
        for lang_name in contact.languages:
            lang = b.node_for(None)
            b.add(cp, "s:availableLanguage", lang)
            b.add_type(lang, "s:Language")
            b.add_text(lang, "s:name", lang_name)
    if provider.catalog_ref is not None:
        b.add(node, "dmcc:hasOfferCatalog", provider.catalog_ref)
    for service in provider.services:
        b.add(node, "dmcc:hasMLService", _lower_service(b, service))
    return Graph(b.triples, vocab.standard_prefixes())


def _lower_service(b: _Builder, service: MLService) -> Term:
    node = b.node_for(service.node)
    b.add_type(node, "dmcc:MLService")
    b.add_text(node, "rdfs:label", service.label, lang="en" if service.label else None)
    b.add_text(node, "dc:description", service.description, lang="en" if service.description else None)
    if service.interaction is not None:
        b.add(node, "dmcc:hasInteractionPoint", _lower_interaction(b, service.interaction))
    if service.sla is not None:
        b.add(node, "dmcc:hasServiceCommitment", _lower_sla(b, service.sla))
    if service.function is not None:
        b.add(node, "dmcc:hasFunction", _lower_function(b, service.function))
    if service.authentication is not None:
        b.add(node, "dmcc:hasAuthentication", _lower_authentication(b, service.authentication))
    for plan in service.pricing:
        b.add(node, "dmcc:hasPricingPlan", _lower_pricing(b, plan))
    return node


def _lower_interaction(b: _Builder, ip: InteractionPoint) -> Term:
    node = b.node_for(ip.node)
    b.add_type(node, "dmcc:Interaction")
    if ip.http_method or ip.url_template or ip.content_type:
        action = b.node_for(None)
        target = b.node_for(None)
        b.add(node, "dmcc:hasEntryPoint", action)
        b.add_type(action, "s:Action")
        b.add(action, "s:target", target)
        b.add_type(target, "s:EntryPoint")
        b.add_text(target, "s:httpMethod", ip.http_method)
        b.add_text(target, "s:urlTemplate", ip.url_template)
        b.add_text(target, "s:contentType", ip.content_type)
    for param in ip.parameters:
        p = b.node_for(None)
        b.add(node, "dmcc:hasParameter", p)
        b.add_text(p, "dc:title", param.name)
        b.add_text(p, "dc:description", param.description)
    return node


_REQUIRES_TERMS = {"all": "waa:All"}
_MECHANISM_TERMS = {"direct": "waa:Direct", "oauth": "waa:OAuth"}
_CREDENTIAL_TERMS = {"apiKey": "waa:APIkey", "usernamePassword": "waa:UsernamePassword", "token": "waa:Token"}
_TRANSMISSION_TERMS = {"viaUri": "waa:ViaURI", "viaHeader": "waa:ViaHTTPHeader"}


def _enum_iri(value: str | None, ref: Iri | None, mapping: dict[str, str]) -> Iri | None:
    if ref is not None:
        return ref
    if value in mapping:
        return term(mapping[value])
    return None


def _lower_authentication(b: _Builder, auth: Authentication) -> Term:
    node = b.node_for(auth.node)
    b.add_type(node, "dmcc:ServiceAuthentication")
    req = _enum_iri(auth.requires, auth.requires_ref, _REQUIRES_TERMS)
    if req is not None:
        b.add(node, "waa:requiresAuthentication", req)
    mech_type = _enum_iri(auth.mechanism, auth.mechanism_type_ref, _MECHANISM_TERMS)
    if auth.mechanism is not None or auth.credential is not None or auth.transmission is not None:
        mech = b.node_for(None)
        b.add(node, "waa:hasAuthenticationMechanism", mech)
        if mech_type is not None:
            b.triples.append(Triple(mech, RDF_TYPE, mech_type))
        if auth.credential is not None:
            cred = b.node_for(None)
            b.add(mech, "waa:hasInputCredentials", cred)
            cred_type = _enum_iri(auth.credential, auth.credential_type_ref, _CREDENTIAL_TERMS)
            if cred_type is not None:
                b.triples.append(Triple(cred, RDF_TYPE, cred_type))
            b.add_text(cred, "waa:isGroundedIn", auth.grounding_field)
        trans = _enum_iri(auth.transmission, auth.transmission_ref, _TRANSMISSION_TERMS)
        if trans is not None:
            b.add(mech, "waa:wayOfSendingInformation", trans)
    return node


def _lower_sla(b: _Builder, sla: SlaAgreement) -> Term:
    node = b.node_for(sla.node)
    b.add_type(node, "ccsla:SLA")
    for sla_term in sla.terms:
        t = b.node_for(None)
        b.add(node, "ccsla:containsTerm", t)
        b.add_type(t, "ccsla:Term")
        b.add_text(t, "dc:title", sla_term.name)
        for interval, comp in zip(sla_term.definitions, sla_term.compensations):
            d = b.node_for(None)
            b.add(t, "ccsla:hasDefinition", d)
            b.add_type(d, "ccsla:Definition")
            wrapper = b.node_for(None)
            quant = b.node_for(None)
            b.add(d, "ccsla:hasDefinitionValue", wrapper)
            b.add_type(wrapper, "s:structuredValue")
            b.add(wrapper, "s:value", quant)
            b.add_type(quant, "s:QuantitativeValue")
            b.add_decimal(quant, "s:minValue", interval.min)
            b.add_decimal(quant, "s:maxValue", interval.max)
            b.add_text(quant, "s:unitText", interval.unit or None)
            if comp is not None:
                c = b.node_for(None)
                b.add(d, "ccsla:hasCompensation", c)
                b.add_type(c, "ccsla:Compensation")
                b.add_text(c, "ccsla:compensationKind", comp.kind)
                b.add_decimal(c, "s:value", comp.amount)
    return node


def _lower_pricing(b: _Builder, plan: PricingPlan) -> Term:
    node = b.node_for(plan.node)
    b.add_type(node, "ccpricing:PricingPlan")
    b.add_text(node, "dc:title", plan.name or None)
    b.add_text(node, "gr:priceCurrency", plan.currency or None)
    b.add_decimal(node, "ccpricing:minPrice", plan.min_price)
    b.add_decimal(node, "ccpricing:maxPrice", plan.max_price)
    for compound in plan.compounds:
        c = b.node_for(compound.node)
        b.add(node, "ccpricing:hasCompound", c)
        b.add_type(c, "ccpricing:Compound")
        spec = compound.price_spec
        if spec is not None or compound.allowance is not None:
            s = b.node_for(spec.node if spec is not None else None)
            b.add(c, "ccpricing:hasPriceSpecification", s)
            b.add_type(s, "gr:PriceSpecification")
            if spec is not None:
                if spec.unit_price:
                    b.add_decimal(s, "gr:hasCurrencyValue", spec.unit_price)
                b.add_text(s, "gr:priceCurrency", spec.currency)
                b.add_text(s, "gr:hasUnitOfMeasurement", spec.unit)
                b.add_decimal(s, "gr:max", spec.max_charge)
            if compound.allowance is not None:
                inc = b.node_for(None)
                b.add(s, "gr:includesObject", inc)
                b.add_type(inc, "gr:TypeAndQualityNode")
                b.add(inc, "gr:amountOfThisGood", Literal(format(compound.allowance.amount, "f")))
                b.add_text(inc, "gr:hasUnitOfMeasurement", compound.allowance.unit)
        if compound.instance is not None:
            b.add(c, "ccpricing:hasInstance", _lower_instance(b, compound.instance))
        if compound.region is not None:
            b.add(c, "ccpricing:hasRegion", _lower_region(b, compound.region))
    return node


def _lower_instance(b: _Builder, inst: Instance) -> Term:
    node = b.node_for(inst.node)
    if any(t.subject == node for t in b.triples):
        return node  # already lowered (instances may be shared by compounds)
    b.add_type(node, "ccinstances:Instance")
    if inst.ram_gb is not None:
        ram = b.node_for(None)
        b.add(node, "ccinstances:hasRAM", ram)
        b.add_type(ram, "ccinstances:ram")
        b.add(ram, "s:value", Literal(format(inst.ram_gb, "f")))
        b.add_text(ram, "s:unitCode", "E34")
    if inst.cpu_model is not None or inst.cores is not None:
        cpu = b.node_for(None)
        b.add(node, "ccinstances:hasCPU", cpu)
        b.add_type(cpu, "ccinstances:cpu")
        b.add_text(cpu, "ccinstances:cpu_model", inst.cpu_model)
        if inst.cores is not None:
            b.add(cpu, "ccinstances:cores", Literal(str(inst.cores), XSD_INTEGER))
    if inst.storage_gb is not None:
        hd = b.node_for(None)
        b.add(node, "ccinstances:hasHD", hd)
        b.add_type(hd, "ccinstances:hd")
        b.add(hd, "s:value", Literal(format(inst.storage_gb, "f")))
        b.add_text(hd, "s:unitCode", "E34")
    return node


def _lower_region(b: _Builder, region: Region) -> Term:
    node = b.node_for(region.node)
    if any(t.subject == node for t in b.triples):
        return node
    b.add_type(node, "ccregions:Region")
    b.add_text(node, "ccregions:code", region.code or None)
    b.add_text(node, "dc:title", region.display_name)
    return node


def _lower_function(b: _Builder, fn: MLFunction) -> Term:
    node = b.node_for(fn.node)
    b.add_type(node, "ccdm:MLFunction")
    b.add_text(node, "dc:title", fn.name or None)
    if fn.parameters:
        block = b.node_for(None)
        b.add(node, "ccdm:hasInputParameters", block)
        b.add_type(block, "ccdm:MLServiceInputParameters")
        for param in fn.parameters:
            p = b.node_for(None)
            b.add(block, "ccdm:hasParameter", p)
            b.add_type(p, "ccdm:MLServiceInputParameter")
            b.add_text(p, "dc:title", param.title)
            b.add_text(p, "dc:description", param.description)
            b.add_text(p, "ccdm:defaultvalue", param.default_value)
            b.add_bool(p, "ccdm:mandatory", param.mandatory)
    for inp in fn.inputs:
        i = b.node_for(None)
        b.add(node, "mls:hasInput", i)
        b.add_type(i, "ccdm:MLServiceInput")
        b.add_text(i, "dc:description", inp.description)
        b.add_text(i, "dc:format", inp.format)
    for out in fn.outputs:
        o = b.node_for(None)
        b.add(node, "mls:hasOutput", o)
        if out.kind == "model" and out.format == "PMML":
            b.add_type(o, "ccdm:PMML_Model")
        elif out.kind == "model":
            b.add_type(o, "mls:Model")
        elif out.kind == "modelEvaluation":
            b.add_type(o, "mls:ModelEvaluation")
        elif out.kind == "data":
            b.add_type(o, "mls:Data")
        else:
            raise InvariantViolation("OutputSpec.kind", f"unknown kind {out.kind!r}")
        if out.format is not None and out.format != "PMML":
            b.add_text(o, "dc:format", out.format)
        if out.storage_bucket is not None:
            try:
                b.add(o, "ccdm:storagebucket", Iri(out.storage_bucket))
            except ValueError:
                b.add(o, "ccdm:storagebucket", Literal(out.storage_bucket))
        b.add_text(o, "dc:title", out.title)
        b.add_text(o, "dc:description", out.description)
    return node


# ---------------------------------------------------------------------------
# JSON export
# ---------------------------------------------------------------------------


def _dec_str(value: Decimal | None) -> str | None:
    return None if value is None else format(value, "f")


def _node_str(node: Term | None) -> str | None:
    return None if node is None else nt_form(node)


def to_jsonable(obj: object) -> object:
    """Stable JSON shape for typed model objects (see MODEL_JSON_VERSION)."""
    if obj is None:
        return None
    if isinstance(obj, ServiceProvider):
        return {
            "node": _node_str(obj.node),
            "name": obj.name,
            "label": obj.label,
            "description": obj.description,
            "legalName": obj.legal_name,
            "naics": obj.naics,
            "url": obj.url.value if obj.url else None,
            "location": to_jsonable(obj.location),
            "contacts": [to_jsonable(c) for c in obj.contacts],
            "catalogRef": _node_str(obj.catalog_ref),
            "services": [to_jsonable(s) for s in obj.services],
        }
    if isinstance(obj, PostalAddress):
        return {"country": obj.country, "locality": obj.locality}
    if isinstance(obj, ContactPoint):
        return {"contactType": obj.contact_type, "languages": list(obj.languages), "email": obj.email}
    if isinstance(obj, MLService):
        return {
            "node": _node_str(obj.node),
            "label": obj.label,
            "description": obj.description,
            "interaction": to_jsonable(obj.interaction),
            "sla": to_jsonable(obj.sla),
            "function": to_jsonable(obj.function),
            "authentication": to_jsonable(obj.authentication),
            "pricing": [to_jsonable(p) for p in obj.pricing],
        }
    if isinstance(obj, InteractionPoint):
        return {
            "node": _node_str(obj.node),
            "httpMethod": obj.http_method,
            "urlTemplate": obj.url_template,
            "contentType": obj.content_type,
            "parameters": [{"name": p.name, "description": p.description} for p in obj.parameters],
        }
    if isinstance(obj, Authentication):
        return {
            "node": _node_str(obj.node),
            "requires": obj.requires,
            "mechanism": obj.mechanism,
            "mechanismLabel": obj.mechanism_label,
            "credential": obj.credential,
            "groundingField": obj.grounding_field,
            "transmission": obj.transmission,
        }
    if isinstance(obj, SlaAgreement):
        return {"node": _node_str(obj.node), "terms": [to_jsonable(t) for t in obj.terms]}
    if isinstance(obj, SlaTerm):
        return {
            "name": obj.name,
            "definitions": [to_jsonable(d) for d in obj.definitions],
            "compensations": [to_jsonable(c) for c in obj.compensations],
        }
    if isinstance(obj, Interval):
        return {"min": _dec_str(obj.min), "max": _dec_str(obj.max), "unit": obj.unit}
    if isinstance(obj, Compensation):
        return {"kind": obj.kind, "amount": _dec_str(obj.amount)}
    if isinstance(obj, PricingPlan):
        return {
            "node": _node_str(obj.node),
            "name": obj.name,
            "minPrice": _dec_str(obj.min_price),
            "maxPrice": _dec_str(obj.max_price),
            "currency": obj.currency,
            "compounds": [to_jsonable(c) for c in obj.compounds],
        }
    if isinstance(obj, Compound):
        return {
            "node": _node_str(obj.node),
            "priceSpec": to_jsonable(obj.price_spec),
            "instance": to_jsonable(obj.instance),
            "region": to_jsonable(obj.region),
            "allowance": to_jsonable(obj.allowance),
        }
    if isinstance(obj, PriceSpec):
        return {
            "unitPrice": _dec_str(obj.unit_price),
            "currency": obj.currency,
            "unit": obj.unit,
            "maxCharge": _dec_str(obj.max_charge),
        }
    if isinstance(obj, Quantity):
        return {"amount": _dec_str(obj.amount), "unit": obj.unit}
    if isinstance(obj, Instance):
        return {
            "node": _node_str(obj.node),
            "ramGB": _dec_str(obj.ram_gb),
            "cpuModel": obj.cpu_model,
            "cores": obj.cores,
            "storageGB": _dec_str(obj.storage_gb),
        }
    if isinstance(obj, Region):
        return {"node": _node_str(obj.node), "code": obj.code, "displayName": obj.display_name}
    if isinstance(obj, MLFunction):
        return {
            "node": _node_str(obj.node),
            "name": obj.name,
            "parameters": [to_jsonable(p) for p in obj.parameters],
            "inputs": [{"description": i.description, "format": i.format} for i in obj.inputs],
            "outputs": [to_jsonable(o) for o in obj.outputs],
        }
    if isinstance(obj, Parameter):
        return {
            "title": obj.title,
            "description": obj.description,
            "defaultValue": obj.default_value,
            "mandatory": obj.mandatory,
        }
    if isinstance(obj, OutputSpec):
        return {
            "kind": obj.kind,
            "format": obj.format,
            "storageBucket": obj.storage_bucket,
            "title": obj.title,
            "description": obj.description,
        }
    raise TypeError(f"no JSON shape for {type(obj).__name__}")
