import itertools
import random

import pytest

from conftest import ALL_FIXTURE_FILES, load_fixture
from dmcc.graph import Graph, relabel_blanks
from dmcc.isomorphism import isomorphic
from dmcc.terms import BlankNode, Iri, Literal, Triple

P = Iri("http://example.org/p")
Q = Iri("http://example.org/q")


def _blanks(g: Graph) -> list[BlankNode]:
    out = set()
    for t in g:
        for x in (t.subject, t.object):
            if isinstance(x, BlankNode):
                out.add(x)
    return sorted(out, key=lambda n: n.label)


def oracle_isomorphic(a: Graph, b: Graph) -> bool:
    """Exhaustive bijection search; only usable for small blank-node counts."""
    if len(a) != len(b):
        return False
    blanks_a, blanks_b = _blanks(a), _blanks(b)
    if len(blanks_a) != len(blanks_b):
        return False

    def mapped(t: Triple, m: dict) -> Triple:
        s = m.get(t.subject, t.subject)
        o = m.get(t.object, t.object)
        return Triple(s, t.predicate, o)

    b_set = set(b)
    for perm in itertools.permutations(blanks_b):
        m = dict(zip(blanks_a, perm))
        if all(mapped(t, m) in b_set for t in a):
            return True
    return False


def _random_graph(rng: random.Random, n_blanks: int, n_draws: int) -> Graph:
    blanks = [BlankNode(f"n{i}") for i in range(n_blanks)]
    triples = set()
    for _ in range(n_draws):
        s = rng.choice(blanks)
        p = rng.choice([P, Q])
        o = rng.choice(blanks + [Literal(str(rng.randint(0, 2)))])
        triples.add(Triple(s, p, o))
    return Graph(triples)


def test_identity(full_graph):
    assert isomorphic(full_graph, full_graph)


@pytest.mark.parametrize("path", ALL_FIXTURE_FILES, ids=lambda p: p.name)
def test_reflexive_and_symmetric_on_fixtures(path):
    g = load_fixture(path.name)
    renamed = relabel_blanks(g, "other")
    assert isomorphic(g, renamed)
    assert isomorphic(renamed, g)


def test_blank_rename_bijection_matches_oracle():
    rng = random.Random(7)
    for trial in range(30):
        n_blanks = rng.randint(1, 6)
        g = _random_graph(rng, n_blanks, rng.randint(n_blanks, 12))
        # arbitrary bijective relabeling
        renamed = relabel_blanks(g, f"r{trial}")
        assert isomorphic(g, renamed), f"trial {trial}"
        assert oracle_isomorphic(g, renamed), f"oracle disagrees on trial {trial}"


def test_random_pairs_agree_with_oracle():
    rng = random.Random(13)
    agree = 0
    for trial in range(60):
        a = _random_graph(rng, rng.randint(1, 5), rng.randint(2, 9))
        b = _random_graph(rng, rng.randint(1, 5), rng.randint(2, 9))
        assert isomorphic(a, b) == oracle_isomorphic(a, b), f"trial {trial}"
        agree += 1
    assert agree == 60


def test_extra_triple_breaks_isomorphism(full_graph):
    extra = Triple(BlankNode("MLProvider"), P, Literal("extra"))
    bigger = Graph(list(full_graph) + [extra], full_graph.prefixes)
    assert not isomorphic(full_graph, bigger)
    assert not isomorphic(bigger, full_graph)


def test_same_counts_different_wiring():
    a = Graph([Triple(BlankNode("x"), P, BlankNode("x"))])
    b = Graph([Triple(BlankNode("x"), P, BlankNode("y"))])
    assert len(a) == len(b)
    assert not isomorphic(a, b)
    assert not oracle_isomorphic(a, b)


def test_isomorphic_graphs_share_ground_subset(full_graph):
    renamed = relabel_blanks(full_graph, "twin")
    ground = lambda g: {t for t in g if not isinstance(t.subject, BlankNode) and not isinstance(t.object, BlankNode)}
    assert ground(full_graph) == ground(renamed)
