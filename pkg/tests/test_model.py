from decimal import Decimal

import pytest

from conftest import KMEANS_SERVICE, PROVIDER, RF_SERVICE, remove_aspect
from dmcc.graph import Graph
from dmcc.isomorphism import isomorphic
from dmcc.model import (
    Compensation,
    DanglingReferenceError,
    FIELD_TERMS,
    Interval,
    InvariantViolation,
    MalformedBooleanError,
    MLService,
    Parameter,
    Quantity,
    ServiceProvider,
    SlaAgreement,
    SlaTerm,
    WrongTypeError,
    check_interval,
    extract_function,
    extract_pricing,
    extract_provider,
    extract_service,
    extract_sla,
    list_providers,
    lower,
    to_jsonable,
)
from dmcc.terms import BlankNode, Iri, Literal, RDF_TYPE, Triple
from dmcc.turtle import parse_turtle
from dmcc.validate import validate
from dmcc.vocab import REGISTRY, term


@pytest.fixture(scope="module")
def provider(full_graph):
    return extract_provider(full_graph, PROVIDER)


@pytest.fixture(scope="module")
def rf_service(provider):
    return next(s for s in provider.services if s.node == RF_SERVICE)


@pytest.fixture(scope="module")
def kmeans_service(provider):
    return next(s for s in provider.services if s.node == KMEANS_SERVICE)


def test_list_providers(full_graph, providers_graph):
    assert list_providers(full_graph) == [PROVIDER]
    assert list_providers(Graph()) == []
    # two-provider dataset: count via raw type-triple scan as the oracle
    scan = [
        t.subject
        for t in providers_graph.match(None, RDF_TYPE, term("dmcc:MLServiceProvider"))
    ]
    assert len(scan) == 2
    assert list_providers(providers_graph) == sorted(scan, key=lambda n: n.label)


def test_provider_fields(provider):
    assert provider.legal_name == "U. of Granada"
    assert provider.naics == "541519"
    assert provider.url == Iri("http://www.dicits.ugr.es")
    assert provider.location.country == "ES"
    assert provider.location.locality == "Granada"
    assert len(provider.services) == 2
    assert provider.catalog_ref == BlankNode("MLServiceDicitsCatalog")
    contact = provider.contacts[0]
    assert contact.email == "ml@dicits.ugr.es"
    assert contact.languages == ("English",)


def test_provider_with_only_name():
    doc = """
    @prefix dmcc: <http://dicits.ugr.es/linkeddata/dmcc#> .
    @prefix gr:   <http://purl.org/goodrelations/v1#> .
    _:p a dmcc:MLServiceProvider ; gr:name "Solo" .
    """
    p = extract_provider(parse_turtle(doc), BlankNode("p"))
    assert p.name == "Solo"
    assert p.legal_name is None and p.url is None and p.location is None
    assert p.contacts == () and p.services == () and p.catalog_ref is None


def test_not_a_provider(full_graph):
    with pytest.raises(WrongTypeError):
        extract_provider(full_graph, RF_SERVICE)


def test_service_has_all_five_aspects(rf_service):
    assert rf_service.interaction is not None
    assert rf_service.sla is not None
    assert rf_service.function is not None
    assert rf_service.authentication is not None
    assert len(rf_service.pricing) == 2


def test_service_with_only_label():
    doc = """
    @prefix dmcc: <http://dicits.ugr.es/linkeddata/dmcc#> .
    @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
    _:s a dmcc:MLService ; rdfs:label "bare" .
    """
    s = extract_service(parse_turtle(doc), BlankNode("s"))
    assert s.label == "bare"
    assert s.interaction is None and s.sla is None and s.function is None
    assert s.authentication is None and s.pricing == ()


def test_dangling_authentication_reference(full_graph):
    from dmcc.graph import bounded_description

    auth_triples = bounded_description(full_graph, BlankNode("MLServiceAuth"))
    reduced = Graph(set(full_graph) - auth_triples, full_graph.prefixes)
    with pytest.raises(DanglingReferenceError) as err:
        extract_service(reduced, RF_SERVICE)
    assert err.value.predicate == "dmcc:hasAuthentication"


def test_interaction_extraction(rf_service):
    ip = rf_service.interaction
    assert ip.http_method == "POST"
    assert ip.url_template == "http://dicits.ugr.es/ml/rf/"
    assert ip.content_type == "application/json"
    assert [p.name for p in ip.parameters] == ["data"]


def test_authentication_extraction(rf_service):
    auth = rf_service.authentication
    assert auth.requires == "all"
    assert auth.mechanism == "direct"
    assert auth.credential == "apiKey"
    assert auth.grounding_field == "key"
    assert auth.transmission == "viaUri"


def test_sla_interval_values(rf_service):
    (t,) = rf_service.sla.terms
    assert t.name == "MUP"
    assert [(i.min, i.max, i.unit) for i in t.definitions] == [
        (Decimal("0.00"), Decimal("99.00"), "percent"),
        (Decimal("99.00"), Decimal("99.99"), "percent"),
    ]
    assert [(c.kind, c.amount) for c in t.compensations] == [
        ("serviceCredits", Decimal("30")),
        ("serviceCredits", Decimal("10")),
    ]


def test_sla_percent_table(kmeans_service):
    (t,) = kmeans_service.sla.terms
    assert [(c.kind, c.amount) for c in t.compensations] == [
        ("percentOfBill", Decimal("25")),
        ("percentOfBill", Decimal("10")),
    ]


def test_sla_with_zero_terms():
    doc = """
    @prefix ccsla: <http://dicits.ugr.es/linkeddata/ccsla#> .
    _:sla a ccsla:SLA .
    """
    sla = extract_sla(parse_turtle(doc), BlankNode("sla"))
    assert sla.terms == ()


def test_pricing_free_plan(rf_service):
    free = next(p for p in rf_service.pricing if p.name == "Free plan")
    (compound,) = free.compounds
    assert compound.allowance == Quantity(Decimal("250"), "HRS")
    assert compound.price_spec.max_charge == Decimal("0.00")
    assert free.currency == "USD"
    assert compound.billing_unit() == "HRS"


def test_pricing_instance_details(rf_service):
    free = next(p for p in rf_service.pricing if p.name == "Free plan")
    inst = free.compounds[0].instance
    assert inst.ram_gb == Decimal("64")
    assert inst.cpu_model == "Intel i7"
    region = free.compounds[0].region
    assert region.code == "eu-south-granada"


def test_pricing_plan_with_no_compounds():
    doc = """
    @prefix ccpricing: <http://dicits.ugr.es/linkeddata/ccpricing#> .
    @prefix dc: <http://purl.org/dc/terms/> .
    _:plan a ccpricing:PricingPlan ; dc:title "Empty" .
    """
    plan = extract_pricing(parse_turtle(doc), BlankNode("plan"))
    assert plan.compounds == ()


def test_function_parameters(rf_service):
    fn = rf_service.function
    assert fn.name == "RandomForest"
    ntrees = next(p for p in fn.parameters if p.title == "ntrees")
    assert ntrees.default_value == "100"
    assert ntrees.mandatory is False
    mtry = next(p for p in fn.parameters if p.title == "mtry")
    assert mtry.mandatory is True


def test_function_pmml_output(kmeans_service):
    out = next(o for o in kmeans_service.function.outputs if o.kind == "model")
    assert out.format == "PMML"
    assert out.storage_bucket == "dicits://models/"
    assert out.title == "PMML Model"


def test_function_with_zero_parameters():
    doc = """
    @prefix ccdm: <http://dicits.ugr.es/linkeddata/ccdm#> .
    @prefix dc: <http://purl.org/dc/terms/> .
    _:f a ccdm:MLFunction ; dc:title "bare" .
    """
    fn = extract_function(parse_turtle(doc), BlankNode("f"))
    assert fn.parameters == () and fn.inputs == () and fn.outputs == ()


def test_mandatory_rejects_non_boolean():
    doc = """
    @prefix ccdm: <http://dicits.ugr.es/linkeddata/ccdm#> .
    @prefix dc: <http://purl.org/dc/terms/> .
    _:f a ccdm:MLFunction ;
      ccdm:hasInputParameters [ ccdm:hasParameter [ dc:title "p" ; ccdm:mandatory "maybe" ] ] .
    """
    with pytest.raises(MalformedBooleanError):
        extract_function(parse_turtle(doc), BlankNode("f"))


def test_mandatory_accepts_bare_boolean():
    doc = """
    @prefix ccdm: <http://dicits.ugr.es/linkeddata/ccdm#> .
    @prefix dc: <http://purl.org/dc/terms/> .
    _:f a ccdm:MLFunction ;
      ccdm:hasInputParameters [ ccdm:hasParameter [ dc:title "p" ; ccdm:mandatory false ] ] .
    """
    fn = extract_function(parse_turtle(doc), BlankNode("f"))
    assert fn.parameters[0].mandatory is False


# --- lowering ---------------------------------------------------------------


def test_lower_extract_is_fixed_point(full_graph, provider):
    lowered = lower(provider)
    again = extract_provider(lowered, provider.node)
    assert again == provider
    # and the generated graph is conformant (warnings are fine)
    assert validate(lowered).error_count == 0


def test_lower_round_trip_on_two_provider_dataset(providers_graph):
    for node in list_providers(providers_graph):
        p = extract_provider(providers_graph, node)
        assert extract_provider(lower(p), p.node) == p


def test_lower_minimal_provider_triple_count():
    p = ServiceProvider(node=BlankNode("p"), name="X", services=(MLService(node=BlankNode("s")),))
    g = lower(p)
    # exactly: provider type, name, service link, service type
    assert len(g) == 4
    assert Triple(BlankNode("p"), term("dmcc:hasMLService"), BlankNode("s")) in g


def test_lower_rejects_inverted_interval():
    bad = ServiceProvider(
        node=BlankNode("p"),
        name="X",
        services=(
            MLService(
                node=BlankNode("s"),
                sla=SlaAgreement(
                    node=BlankNode("sla"),
                    terms=(
                        SlaTerm(
                            name="MUP",
                            definitions=(Interval(Decimal("99.99"), Decimal("99.00"), "percent"),),
                            compensations=(Compensation("percentOfBill", Decimal("10")),),
                        ),
                    ),
                ),
            ),
        ),
    )
    with pytest.raises(InvariantViolation) as err:
        lower(bad)
    assert "min" in err.value.field


def test_check_interval_percent_bounds():
    with pytest.raises(InvariantViolation):
        check_interval(Interval(Decimal("-1"), Decimal("50"), "percent"))
    check_interval(Interval(Decimal("-5"), Decimal("5"), "celsius"))  # non-percent units free


def test_lower_never_emits_alias_spelling(provider):
    lowered = lower(provider)
    alias_iri = next(iter(REGISTRY.alias_iris))
    assert not lowered.match(None, alias_iri, None)
    assert lowered.match(None, term("ccsla:containsTerm"), None)


def test_extraction_total_on_optionals(full_graph):
    # dropping any single non-structural triple must never break extraction
    structural = {term(c) for c in (
        "dmcc:hasMLService", "dmcc:hasInteractionPoint", "dmcc:hasServiceCommitment",
        "dmcc:hasFunction", "dmcc:hasAuthentication", "dmcc:hasPricingPlan",
    )}
    removable = [
        t for t in full_graph
        if t.predicate not in structural and t.predicate != RDF_TYPE
        # keep interval bounds: a half-deleted range is a declared error case
        and t.predicate not in (term("s:minValue"), term("s:maxValue"))
        and not (t.predicate == term("waa:isGroundedIn"))
    ]
    for t in removable:
        reduced = Graph(set(full_graph) - {t}, full_graph.prefixes)
        extract_provider(reduced, PROVIDER)  # must not raise


def test_field_term_map_is_registered():
    for field_name, curie in FIELD_TERMS.items():
        iri = REGISTRY.resolve(curie, strict=True)
        assert REGISTRY.known(iri), field_name


def test_json_export_shape(provider):
    data = to_jsonable(provider)
    assert data["legalName"] == "U. of Granada"
    assert data["naics"] == "541519"
    assert len(data["services"]) == 2
    rf = next(s for s in data["services"] if s["node"] == "_:MLServiceDicitsRF")
    free = next(p for p in rf["pricing"] if p["name"] == "Free plan")
    assert free["compounds"][0]["allowance"] == {"amount": "250", "unit": "HRS"}
    assert free["compounds"][0]["priceSpec"]["maxCharge"] == "0.00"
    assert free["compounds"][0]["instance"]["ramGB"] == "64"
    assert free["compounds"][0]["instance"]["cpuModel"] == "Intel i7"
