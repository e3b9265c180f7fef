#!/usr/bin/env python3
"""Regenerate derived fixtures and the vocabulary manifest.

Derived from fixtures/full.ttl and fixtures/cloudml-provider.ttl.part:
  - fixtures/providers.ttl        (two-provider dataset)
  - fixtures/missing-*.ttl        (single-aspect deletion fixtures)
  - src/dmcc/data/vocab_manifest.json

Run from the repository root after editing the source fixtures.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from dmcc.graph import Graph, bounded_description  # noqa: E402
from dmcc.terms import BlankNode  # noqa: E402
from dmcc.turtle import parse_turtle, serialize_turtle  # noqa: E402
from dmcc.vocab import REGISTRY, term  # noqa: E402

DELETIONS = {
    "missing-auth": "dmcc:hasAuthentication",
    "missing-sla": "dmcc:hasServiceCommitment",
    "missing-pricing": "dmcc:hasPricingPlan",
    "missing-function": "dmcc:hasFunction",
    "missing-interaction": "dmcc:hasInteractionPoint",
}
TARGET_SERVICE = BlankNode("MLServiceDicitsRF")


def remove_aspect(g: Graph, service: BlankNode, predicate_curie: str) -> Graph:
    pred = term(predicate_curie)
    links = g.match(service, pred, None)
    doomed = set(links)
    for link in links:
        doomed |= bounded_description(g, link.object)
    return Graph(set(g) - doomed, g.prefixes)


def main() -> None:
    fixtures = ROOT / "fixtures"
    full_text = (fixtures / "full.ttl").read_text(encoding="utf-8")
    part_text = (fixtures / "cloudml-provider.ttl.part").read_text(encoding="utf-8")

    header = (
        "# Two-provider dataset: the DICITS provider from full.ttl plus CloudML Studio.\n"
        "# Regenerate with scripts/gen_fixtures.py after editing full.ttl or the part file.\n\n"
    )
    (fixtures / "providers.ttl").write_text(header + full_text + "\n" + part_text, encoding="utf-8")

    full = parse_turtle(full_text)
    for stem, curie in DELETIONS.items():
        reduced = remove_aspect(full, TARGET_SERVICE, curie)
        banner = (
            f"# Derived from full.ttl by removing the {curie} link of\n"
            f"# _:MLServiceDicitsRF together with the linked subgraph.\n"
            f"# Regenerate with scripts/gen_fixtures.py.\n\n"
        )
        (fixtures / f"{stem}.ttl").write_text(banner + serialize_turtle(reduced), encoding="utf-8")

    manifest = ROOT / "src" / "dmcc" / "data" / "vocab_manifest.json"
    manifest.parent.mkdir(parents=True, exist_ok=True)
    manifest.write_text(json.dumps(REGISTRY.manifest(), indent=2) + "\n", encoding="utf-8")
    print("regenerated providers.ttl, missing-*.ttl, vocab_manifest.json")


if __name__ == "__main__":
    main()
