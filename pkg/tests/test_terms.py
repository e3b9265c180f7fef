import pytest

from dmcc.terms import (
    BlankNode,
    Iri,
    Literal,
    RDF_LANGSTRING,
    Triple,
    XSD_DECIMAL,
    XSD_STRING,
    nt_form,
)


@pytest.mark.parametrize("bad", ["", "no-scheme", "has space:x", "tab\there:x"])
def test_iri_rejects_malformed(bad):
    with pytest.raises(ValueError):
        Iri(bad)


def test_iri_accepts_nonstandard_schemes():
    assert Iri("dicits://models/").value == "dicits://models/"


def test_blank_label_required():
    with pytest.raises(ValueError):
        BlankNode("")


def test_literal_language_coerces_datatype():
    lit = Literal("ML Provider", language="en")
    assert lit.datatype == RDF_LANGSTRING
    with pytest.raises(ValueError):
        Literal("x", XSD_DECIMAL, language="en")
    with pytest.raises(ValueError):
        Literal("x", RDF_LANGSTRING)


def test_literal_equality_is_lexical():
    # no value-space normalization: "1" and "01" stay distinct
    assert Literal("1", XSD_DECIMAL) != Literal("01", XSD_DECIMAL)
    assert Literal("a") == Literal("a", XSD_STRING)


def test_triple_position_constraints():
    s, p, o = BlankNode("a"), Iri("http://example.org/p"), Literal("x")
    Triple(s, p, o)
    with pytest.raises(ValueError):
        Triple(Literal("x"), p, o)
    with pytest.raises(ValueError):
        Triple(s, BlankNode("p"), o)


def test_nt_form_escapes_lowercase_hex():
    assert nt_form(Literal("a\x01b")) == '"a\\u0001b"'
    assert nt_form(Literal('say "hi"\n')) == '"say \\"hi\\"\\n"'
    assert nt_form(Iri("http://example.org/é")) == "<http://example.org/é>"
    assert nt_form(Iri("urn:x:a^b")) == "<urn:x:a\\u005eb>"


def test_nt_form_literal_forms():
    assert nt_form(Literal("hi", language="en")) == '"hi"@en'
    assert nt_form(Literal("1.5", XSD_DECIMAL)) == '"1.5"^^<http://www.w3.org/2001/XMLSchema#decimal>'
    assert nt_form(BlankNode("b0")) == "_:b0"
