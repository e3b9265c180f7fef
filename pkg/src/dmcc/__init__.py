"""dmcc: parse, validate, query, and price Linked Data descriptions of cloud data-mining services."""

from .graph import Graph, merge_graphs, relabel_blanks
from .isomorphism import isomorphic
from .ntriples import serialize_ntriples
from .terms import BlankNode, Iri, Literal, Term, Triple
from .turtle import TurtleParseError, UnknownPrefixError, parse_turtle, serialize_turtle

__version__ = "0.1.0"

__all__ = [
    "BlankNode",
    "Graph",
    "Iri",
    "Literal",
    "Term",
    "Triple",
    "TurtleParseError",
    "UnknownPrefixError",
    "isomorphic",
    "merge_graphs",
    "parse_turtle",
    "relabel_blanks",
    "serialize_ntriples",
    "serialize_turtle",
    "__version__",
]
