"""N-Triples export: one sorted line per triple, bit-deterministic."""

from __future__ import annotations

from .graph import Graph
from .terms import nt_form


def serialize_ntriples(graph: Graph) -> str:
    """Serialize with absolute IRIs only; equal graphs yield identical bytes."""
    lines = sorted(
        f"{nt_form(t.subject)} {nt_form(t.predicate)} {nt_form(t.object)} ."
        for t in graph
    )
    if not lines:
        return ""
    return "\n".join(lines) + "\n"
