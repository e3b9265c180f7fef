"""Blank-node-aware graph isomorphism via signature-pruned backtracking.

Graphs in this domain are desk-scale (tens of blank nodes), so a backtracking
search seeded by ground-triple equality and per-node structural signatures is
exact and fast enough.
"""

from __future__ import annotations

from collections import Counter

from .graph import Graph
from .terms import BlankNode, Term, Triple, nt_form


def _blank_in(triple: Triple) -> bool:
    return isinstance(triple.subject, BlankNode) or isinstance(triple.object, BlankNode)


def _map_term(term: Term, mapping: dict[BlankNode, BlankNode]) -> Term:
    if isinstance(term, BlankNode):
        return mapping[term]
    return term


def _signature(triples: list[Triple], node: BlankNode) -> tuple:
    parts = []
    for t in triples:
        if t.subject == node and t.object == node:
            parts.append(("so", nt_form(t.predicate)))
        elif t.subject == node:
            other = "*" if isinstance(t.object, BlankNode) else nt_form(t.object)
            parts.append(("s", nt_form(t.predicate), other))
        elif t.object == node:
            other = "*" if isinstance(t.subject, BlankNode) else nt_form(t.subject)
            parts.append(("o", nt_form(t.predicate), other))
    return tuple(sorted(parts))


def _blanks(graph: Graph) -> list[BlankNode]:
    seen: dict[BlankNode, None] = {}
    for t in graph:
        if isinstance(t.subject, BlankNode):
            seen.setdefault(t.subject)
        if isinstance(t.object, BlankNode):
            seen.setdefault(t.object)
    return list(seen)


def isomorphic(a: Graph, b: Graph) -> bool:
    """True iff some blank-node bijection maps a's triples exactly onto b's."""
    if len(a) != len(b):
        return False
    ground_a = {t for t in a if not _blank_in(t)}
    ground_b = {t for t in b if not _blank_in(t)}
    if ground_a != ground_b:
        return False

    var_a = [t for t in a if _blank_in(t)]
    var_b = {t for t in b if _blank_in(t)}
    blanks_a = _blanks(a)
    blanks_b = _blanks(b)
    if len(blanks_a) != len(blanks_b):
        return False
    if not blanks_a:
        return True

    sig_a = {n: _signature(var_a, n) for n in blanks_a}
    var_b_list = list(var_b)
    sig_b = {n: _signature(var_b_list, n) for n in blanks_b}
    if Counter(sig_a.values()) != Counter(sig_b.values()):
        return False

    candidates = {
        n: [m for m in blanks_b if sig_b[m] == sig_a[n]] for n in blanks_a
    }
    order = sorted(blanks_a, key=lambda n: (len(candidates[n]), n.label))
    touching: dict[BlankNode, list[Triple]] = {n: [] for n in blanks_a}
    for t in var_a:
        if isinstance(t.subject, BlankNode):
            touching[t.subject].append(t)
        if isinstance(t.object, BlankNode) and t.object != t.subject:
            touching[t.object].append(t)

    mapping: dict[BlankNode, BlankNode] = {}
    used: set[BlankNode] = set()

    def consistent(node: BlankNode) -> bool:
        for t in touching[node]:
            s_ok = not isinstance(t.subject, BlankNode) or t.subject in mapping
            o_ok = not isinstance(t.object, BlankNode) or t.object in mapping
            if s_ok and o_ok:
                mapped = Triple(
                    _map_term(t.subject, mapping),
                    t.predicate,
                    _map_term(t.object, mapping),
                )
                if mapped not in var_b:
                    return False
        return True

    def search(index: int) -> bool:
        if index == len(order):
            return True
        node = order[index]
        for target in candidates[node]:
            if target in used:
                continue
            mapping[node] = target
            used.add(target)
            if consistent(node) and search(index + 1):
                return True
            del mapping[node]
            used.remove(target)
        return False

    return search(0)
