"""RDF terms and triples: IRIs, blank nodes, literals, and their canonical text form.

Term equality is structural. Literals compare by (lexical, datatype, language);
no value-space normalization happens here, so ``"1"`` and ``"01"`` are distinct
literals even when typed as integers. Consumers that need numeric values parse
the value space themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

XSD = "http://www.w3.org/2001/XMLSchema#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"


@dataclass(frozen=True, slots=True)
class Iri:
    """An absolute IRI."""

    value: str

    def __post_init__(self) -> None:
        if not self.value:
            raise ValueError("IRI must be non-empty")
        if ":" not in self.value:
            raise ValueError(f"IRI has no scheme separator: {self.value!r}")
        if any(ch.isspace() for ch in self.value):
            raise ValueError(f"IRI contains whitespace: {self.value!r}")

    def __repr__(self) -> str:
        return f"Iri({self.value!r})"


@dataclass(frozen=True, slots=True)
class BlankNode:
    """A blank node; the label is meaningful only within one graph."""

    label: str

    def __post_init__(self) -> None:
        if not self.label:
            raise ValueError("blank node label must be non-empty")

    def __repr__(self) -> str:
        return f"BlankNode({self.label!r})"


XSD_STRING = Iri(XSD + "string")
XSD_INTEGER = Iri(XSD + "integer")
XSD_DECIMAL = Iri(XSD + "decimal")
XSD_DOUBLE = Iri(XSD + "double")
XSD_BOOLEAN = Iri(XSD + "boolean")
RDF_TYPE = Iri(RDF + "type")
RDF_LANGSTRING = Iri(RDF + "langString")
RDFS_LABEL = Iri(RDFS + "label")


@dataclass(frozen=True, slots=True)
class Literal:
    """An RDF literal.

    A language tag forces the datatype to ``rdf:langString``; passing a tag with
    the default datatype coerces it. Ill-typed literals (e.g. a non-numeric
    lexical with a decimal datatype) are representable; value-space checks are
    the consumer's job.
    """

    lexical: str
    datatype: Iri = XSD_STRING
    language: str | None = None

    def __post_init__(self) -> None:
        if self.language is not None:
            if not self.language:
                raise ValueError("language tag must be non-empty when present")
            if self.datatype == XSD_STRING:
                object.__setattr__(self, "datatype", RDF_LANGSTRING)
            elif self.datatype != RDF_LANGSTRING:
                raise ValueError("language-tagged literal must use the language-string datatype")
        elif self.datatype == RDF_LANGSTRING:
            raise ValueError("language-string literal requires a language tag")

    def __repr__(self) -> str:
        if self.language is not None:
            return f"Literal({self.lexical!r}@{self.language})"
        if self.datatype == XSD_STRING:
            return f"Literal({self.lexical!r})"
        return f"Literal({self.lexical!r}^^{self.datatype.value})"


Term = Union[Iri, BlankNode, Literal]


@dataclass(frozen=True, slots=True)
class Triple:
    """A subject/predicate/object statement with RDF position constraints."""

    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self) -> None:
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise ValueError(f"triple subject must be an IRI or blank node: {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise ValueError(f"triple predicate must be an IRI: {self.predicate!r}")
        if not isinstance(self.object, (Iri, BlankNode, Literal)):
            raise ValueError(f"triple object must be a term: {self.object!r}")


def _escape_literal(text: str) -> str:
    out = []
    for ch in text:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20 or ch == "\x7f":
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return "".join(out)


_IRI_UNSAFE = set('<>"{}|^`\\')


def _escape_iri(text: str) -> str:
    out = []
    for ch in text:
        if ch in _IRI_UNSAFE or ord(ch) <= 0x20 or ch == "\x7f":
            code = ord(ch)
            if code > 0xFFFF:
                out.append(f"\\U{code:08x}")
            else:
                out.append(f"\\u{code:04x}")
        else:
            out.append(ch)
    return "".join(out)


def nt_form(term: Term) -> str:
    """Canonical N-Triples text of a term; hex escapes use lowercase digits.

    This form is the sort key for every deterministic ordering in the package.
    """
    if isinstance(term, Iri):
        return f"<{_escape_iri(term.value)}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    if isinstance(term, Literal):
        quoted = f'"{_escape_literal(term.lexical)}"'
        if term.language is not None:
            return f"{quoted}@{term.language}"
        if term.datatype == XSD_STRING:
            return quoted
        return f"{quoted}^^<{_escape_iri(term.datatype.value)}>"
    raise TypeError(f"not an RDF term: {term!r}")


def triple_key(triple: Triple) -> tuple[str, str, str]:
    """Deterministic sort key for a triple."""
    return (nt_form(triple.subject), nt_form(triple.predicate), nt_form(triple.object))
