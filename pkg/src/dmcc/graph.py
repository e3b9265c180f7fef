"""Immutable RDF graph with set semantics and deterministic iteration order."""

from __future__ import annotations

import re
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .terms import BlankNode, Iri, Literal, RDF_TYPE, Term, Triple, triple_key

_PREFIX_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_-]*$")


class Graph:
    """A frozen set of triples plus the prefix map it was read with.

    Triples are deduplicated and kept in a sorted canonical order, so all read
    operations are deterministic and safe to run concurrently.
    """

    __slots__ = ("_set", "_sorted", "_prefixes")

    def __init__(self, triples: Iterable[Triple] = (), prefixes: Mapping[str, Iri] | None = None):
        self._set = frozenset(triples)
        self._sorted = tuple(sorted(self._set, key=triple_key))
        entries = dict(prefixes or {})
        for prefix, ns in entries.items():
            if prefix and not _PREFIX_RE.match(prefix):
                raise ValueError(f"invalid prefix name: {prefix!r}")
            if not isinstance(ns, Iri):
                raise TypeError(f"namespace for prefix {prefix!r} must be an Iri")
        self._prefixes = MappingProxyType(entries)

    @property
    def prefixes(self) -> Mapping[str, Iri]:
        return self._prefixes

    def __len__(self) -> int:
        return len(self._set)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._sorted)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._set

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._set == other._set and dict(self._prefixes) == dict(other._prefixes)

    def __hash__(self) -> int:
        return hash(self._set)

    def __repr__(self) -> str:
        return f"Graph({len(self._set)} triples, {len(self._prefixes)} prefixes)"

    def match(
        self,
        subject: Term | None = None,
        predicate: Term | None = None,
        object: Term | None = None,
    ) -> list[Triple]:
        """All triples agreeing with every bound position; None is a wildcard."""
        return [
            t
            for t in self._sorted
            if (subject is None or t.subject == subject)
            and (predicate is None or t.predicate == predicate)
            and (object is None or t.object == object)
        ]

    def objects(self, subject: Term, predicate: Term) -> list[Term]:
        return [t.object for t in self.match(subject, predicate)]

    def subjects(self, predicate: Term | None = None, object: Term | None = None) -> list[Term]:
        seen: list[Term] = []
        for t in self.match(None, predicate, object):
            if t.subject not in seen:
                seen.append(t.subject)
        return seen

    def subjects_of_type(self, cls: Iri) -> list[Term]:
        return self.subjects(RDF_TYPE, cls)

    def value(self, subject: Term, predicate: Term) -> Term | None:
        """First object in canonical order, or None."""
        found = self.objects(subject, predicate)
        return found[0] if found else None

    def literal(self, subject: Term, predicate: Term) -> str | None:
        """Lexical form of the first literal object, or None."""
        for obj in self.objects(subject, predicate):
            if isinstance(obj, Literal):
                return obj.lexical
        return None

    def has_subject(self, node: Term) -> bool:
        """True when the node occurs in subject position at least once."""
        return bool(self.match(node, None, None))

    def with_prefixes(self, prefixes: Mapping[str, Iri]) -> Graph:
        merged = dict(self._prefixes)
        merged.update(prefixes)
        return Graph(self._set, merged)


def bounded_description(graph: Graph, node: Term) -> set[Triple]:
    """Triples about a node plus, recursively, about blank nodes it points at.

    This is the subgraph a deletion experiment removes when an aspect node
    goes away; IRI objects are not followed.
    """
    seen: set[Term] = set()
    out: set[Triple] = set()
    stack: list[Term] = [node]
    while stack:
        current = stack.pop()
        if current in seen:
            continue
        seen.add(current)
        for t in graph.match(current, None, None):
            out.add(t)
            if isinstance(t.object, BlankNode) and t.object not in seen:
                stack.append(t.object)
    return out


_LABEL_SAFE_RE = re.compile(r"[^A-Za-z0-9_-]")


def _relabel_term(term: Term, prefix: str) -> Term:
    if isinstance(term, BlankNode):
        return BlankNode(f"{prefix}_{term.label}")
    return term


def relabel_blanks(graph: Graph, prefix: str) -> Graph:
    """Prefix every blank-node label, keeping the graph otherwise unchanged."""
    safe = _LABEL_SAFE_RE.sub("_", prefix) or "g"
    triples = (
        Triple(
            _relabel_term(t.subject, safe),
            t.predicate,
            _relabel_term(t.object, safe),
        )
        for t in graph
    )
    return Graph(triples, graph.prefixes)


def merge_graphs(named: list[tuple[str, Graph]]) -> Graph:
    """Union several graphs into one.

    With more than one input, blank-node labels are namespaced by the given
    name (normally the source file stem) so nodes from different documents can
    never coalesce by label accident.
    """
    if not named:
        return Graph()
    if len(named) == 1:
        return named[0][1]
    triples: list[Triple] = []
    prefixes: dict[str, Iri] = {}
    for name, graph in named:
        relabeled = relabel_blanks(graph, name)
        triples.extend(relabeled)
        prefixes.update(relabeled.prefixes)
    return Graph(triples, prefixes)
