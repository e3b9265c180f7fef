from __future__ import annotations

from pathlib import Path

import pytest

from dmcc.graph import Graph, bounded_description
from dmcc.terms import BlankNode, Term
from dmcc.turtle import parse_turtle
from dmcc.vocab import term

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
QUERIES = ROOT / "queries"

RF_SERVICE = BlankNode("MLServiceDicitsRF")
KMEANS_SERVICE = BlankNode("MLServiceDicitsKMeans")
PROVIDER = BlankNode("MLProvider")

ALL_FIXTURE_FILES = sorted(FIXTURES.glob("*.ttl"))


def load_fixture(name: str) -> Graph:
    return parse_turtle((FIXTURES / name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def full_graph() -> Graph:
    return load_fixture("full.ttl")


@pytest.fixture(scope="session")
def providers_graph() -> Graph:
    return load_fixture("providers.ttl")


def remove_aspect(g: Graph, service: Term, predicate_curie: str) -> Graph:
    """Deletion experiment: drop an aspect link and the subgraph it points at."""
    pred = term(predicate_curie)
    links = g.match(service, pred, None)
    doomed = set(links)
    for link in links:
        doomed |= bounded_description(g, link.object)
    return Graph(set(g) - doomed, g.prefixes)
