import itertools
import random

import pytest

from dmcc.graph import Graph, bounded_description, merge_graphs, relabel_blanks
from dmcc.isomorphism import isomorphic
from dmcc.terms import BlankNode, Iri, Literal, Triple

P = Iri("http://example.org/p")
Q = Iri("http://example.org/q")


def _triple(i: int) -> Triple:
    return Triple(BlankNode(f"s{i % 5}"), P if i % 2 else Q, Literal(str(i)))


def test_set_semantics_on_duplicates():
    t = _triple(1)
    g = Graph([t, t, t])
    assert len(g) == 1


def test_iteration_is_sorted_and_stable():
    triples = [_triple(i) for i in range(10)]
    random.Random(0).shuffle(triples)
    g1 = Graph(triples)
    g2 = Graph(reversed(triples))
    assert list(g1) == list(g2)


def test_match_wildcards_and_full_binding(full_graph):
    assert full_graph.match() == list(full_graph)
    t = next(iter(full_graph))
    assert full_graph.match(t.subject, t.predicate, t.object) == [t]
    absent = Triple(BlankNode("nope"), P, Literal("x"))
    assert full_graph.match(absent.subject, absent.predicate, absent.object) == []


def test_match_monotone_in_bound_positions(full_graph):
    # binding one more position can only shrink the result
    t = next(iter(full_graph))
    combos = [
        (None, None, None),
        (t.subject, None, None),
        (t.subject, t.predicate, None),
        (t.subject, t.predicate, t.object),
    ]
    for looser, tighter in itertools.pairwise(combos):
        loose = set(full_graph.match(*looser))
        tight = set(full_graph.match(*tighter))
        assert tight <= loose


def test_prefix_validation():
    with pytest.raises(ValueError):
        Graph(prefixes={"bad prefix": Iri("http://example.org/")})
    g = Graph(prefixes={"": Iri("http://example.org/")})
    assert g.prefixes[""].value == "http://example.org/"


def test_relabel_blanks_keeps_structure():
    g = Graph([Triple(BlankNode("a"), P, BlankNode("b"))])
    renamed = relabel_blanks(g, "file1")
    assert len(renamed) == 1
    t = next(iter(renamed))
    assert t.subject == BlankNode("file1_a")
    assert t.object == BlankNode("file1_b")
    assert isomorphic(g, renamed)


def test_merge_single_graph_untouched(full_graph):
    assert merge_graphs([("full", full_graph)]) == full_graph


def test_merge_prevents_blank_coalescing():
    g1 = Graph([Triple(BlankNode("x"), P, Literal("1"))])
    g2 = Graph([Triple(BlankNode("x"), P, Literal("2"))])
    merged = merge_graphs([("a", g1), ("b", g2)])
    assert len(merged) == 2
    assert len({t.subject for t in merged}) == 2


def test_merge_order_yields_isomorphic_graphs(full_graph, providers_graph):
    ab = merge_graphs([("f1", full_graph), ("f2", providers_graph)])
    ba = merge_graphs([("f2", providers_graph), ("f1", full_graph)])
    assert isomorphic(ab, ba)


def test_bounded_description_follows_blanks_only():
    inner = BlankNode("inner")
    outer = BlankNode("outer")
    other = Iri("http://example.org/elsewhere")
    g = Graph(
        [
            Triple(outer, P, inner),
            Triple(inner, P, Literal("leaf")),
            Triple(inner, Q, other),
            Triple(other, P, Literal("not followed")),
        ]
    )
    desc = bounded_description(g, outer)
    assert len(desc) == 3
    assert Triple(other, P, Literal("not followed")) not in desc
