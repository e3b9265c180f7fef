import pytest

from conftest import ALL_FIXTURE_FILES
from dmcc.graph import Graph
from dmcc.isomorphism import isomorphic
from dmcc.terms import BlankNode, Iri, Literal, RDF_TYPE, Triple, XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER
from dmcc.turtle import TurtleParseError, UnknownPrefixError, parse_turtle, serialize_turtle
from dmcc.vocab import term

PROLOGUE = """
@prefix dc:   <http://purl.org/dc/terms/> .
@prefix ex:   <http://example.org/> .
@prefix ccdm: <http://dicits.ugr.es/linkeddata/ccdm#> .
"""


def test_empty_document():
    g = parse_turtle("")
    assert len(g) == 0
    assert dict(g.prefixes) == {}


def test_comment_only_document():
    assert len(parse_turtle("# nothing here\n   # still nothing")) == 0


def test_parameter_block_yields_five_triples():
    doc = PROLOGUE + """
    _:parameter_01
      a ccdm:MLServiceInputParameter ;
        ccdm:defaultvalue "100" ;
        ccdm:mandatory "false" ;
        dc:description "Number of trees" ;
        dc:title "ntrees" .
    """
    g = parse_turtle(doc)
    assert len(g.match(BlankNode("parameter_01"))) == 5
    assert g.literal(BlankNode("parameter_01"), term("dc:title")) == "ntrees"


def test_unknown_prefix_error_names_the_prefix():
    with pytest.raises(UnknownPrefixError) as err:
        parse_turtle("xyz:foo xyz:bar xyz:baz .")
    assert err.value.prefix == "xyz"
    assert "xyz" in str(err.value)


def test_provider_block_has_two_service_links(full_graph):
    objs = full_graph.objects(BlankNode("MLProvider"), term("dmcc:hasMLService"))
    assert objs == [BlankNode("MLServiceDicitsKMeans"), BlankNode("MLServiceDicitsRF")]


@pytest.mark.parametrize(
    "lexical,datatype",
    [("250", XSD_INTEGER), ("0.00", XSD_DECIMAL), ("99.99", XSD_DECIMAL), ("-4", XSD_INTEGER), ("1.5e3", XSD_DOUBLE)],
)
def test_bare_numbers_get_turtle_datatypes(lexical, datatype):
    g = parse_turtle(f"{PROLOGUE} ex:s ex:p {lexical} .")
    obj = next(iter(g)).object
    assert obj == Literal(lexical, datatype)


def test_bare_booleans():
    g = parse_turtle(PROLOGUE + "ex:s ex:p true, false .")
    objs = {t.object for t in g}
    assert objs == {Literal("true", XSD_BOOLEAN), Literal("false", XSD_BOOLEAN)}


def test_language_and_datatype_annotations():
    g = parse_turtle(PROLOGUE + 'ex:s dc:title "hola"@es ; ex:p "42"^^<http://www.w3.org/2001/XMLSchema#integer> .')
    objs = {t.object for t in g}
    assert Literal("hola", language="es") in objs
    assert Literal("42", XSD_INTEGER) in objs


def test_string_escapes_round_trip():
    g = parse_turtle(PROLOGUE + r'ex:s ex:p "line\nbreak \"quoted\" tab\té" .')
    lit = next(iter(g)).object
    assert lit.lexical == 'line\nbreak "quoted" tab\té'
    again = parse_turtle(serialize_turtle(g))
    assert next(iter(again)).object == lit


def test_anonymous_blank_nodes_get_fresh_labels():
    g = parse_turtle(PROLOGUE + "_:b0 ex:p [ ex:q [ ex:r 1 ] ] .")
    labels = {t.subject.label for t in g if isinstance(t.subject, BlankNode)}
    # the document already uses b0, so generated labels must skip it
    assert "b0" in labels and len(labels) == 3


def test_predicate_and_object_lists_with_trailing_semicolon():
    g = parse_turtle(PROLOGUE + "ex:s ex:p 1, 2 ; ex:q 3 ; .")
    assert len(g) == 3


def test_error_position_is_one_based():
    with pytest.raises(TurtleParseError) as err:
        parse_turtle("@prefix ex: <http://example.org/> .\nex:s ex:p ; .")
    assert err.value.line == 2
    assert err.value.column >= 10


@pytest.mark.parametrize(
    "doc,fragment",
    [
        ("ex:s ex:p (1 2) .", "collections"),
        ("<< ex:s ex:p 1 >> ex:q 2 .", "quoted triples"),
        ("@base <http://example.org/> .", "base"),
        ("ex:s ex:p <relative> .", "IRI"),
    ],
)
def test_unsupported_constructs_fail_loudly(doc, fragment):
    with pytest.raises(TurtleParseError) as err:
        parse_turtle(PROLOGUE + doc)
    assert fragment.lower() in str(err.value).lower()


def test_prefix_redefinition_last_wins():
    doc = """
    @prefix p: <http://one.example/> .
    @prefix p: <http://two.example/> .
    p:s p:p p:o .
    """
    g = parse_turtle(doc)
    assert next(iter(g)).subject == Iri("http://two.example/s")


def test_sparql_style_prefix_directive():
    g = parse_turtle("PREFIX ex: <http://example.org/>\nex:s ex:p 1 .")
    assert len(g) == 1


def test_serializer_is_deterministic_identical_text():
    doc = PROLOGUE + "ex:s ex:p 1, 2 ; ex:q [ ex:r 3 ] ."
    g1 = parse_turtle(doc)
    g2 = Graph(list(g1), g1.prefixes)
    assert serialize_turtle(g1) == serialize_turtle(g2)


def test_serializer_uses_prefixes_and_a_keyword():
    g = parse_turtle(PROLOGUE + "ex:s a ccdm:MLFunction .")
    text = serialize_turtle(g)
    assert "ex:s a ccdm:MLFunction ." in text
    assert "@prefix ccdm:" in text


def test_empty_graph_serializes_to_prefixes_only():
    assert serialize_turtle(Graph()) == ""
    g = Graph(prefixes={"ex": Iri("http://example.org/")})
    assert serialize_turtle(g).strip() == "@prefix ex: <http://example.org/> ."


@pytest.mark.parametrize("path", ALL_FIXTURE_FILES, ids=lambda p: p.name)
def test_fixture_round_trip_isomorphic(path):
    g = parse_turtle(path.read_text(encoding="utf-8"))
    again = parse_turtle(serialize_turtle(g))
    assert isomorphic(g, again)


def test_pricing_listing_round_trip_keeps_ram_structure(full_graph):
    text = serialize_turtle(full_graph)
    again = parse_turtle(text)
    instance = BlankNode("InstanceFree")
    ram_links = again.match(instance, term("ccinstances:hasRAM"), None)
    assert len(ram_links) == 1
    assert len(again.match(instance)) >= 3
    ram_node = ram_links[0].object
    assert again.literal(ram_node, term("s:unitCode")) == "E34"


def test_literal_subject_rejected():
    with pytest.raises(TurtleParseError):
        parse_turtle(PROLOGUE + '"text" ex:p 1 .')
