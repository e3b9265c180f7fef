"""Command-line entry point.

Subcommands: convert, validate, extract, query, sla-comp, quote, broker.
Data goes to stdout, diagnostics to stderr. Exit codes: 0 success/conformant,
1 validation errors present, 2 usage or parse error (including requests the
data cannot satisfy), 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path

from .broker import best_offer, compare, offers_table, providers_offering
from .errors import DmccError
from .graph import Graph, merge_graphs
from .model import MODEL_JSON_VERSION, Quantity, extract_provider, extract_service, list_providers, to_jsonable
from .ntriples import serialize_ntriples
from .pricing import UsageRequest, quote as quote_plan
from .query import evaluate, parse_query
from .sla import Observation, compensation_amount, compensation_for
from .terms import BlankNode, Iri, Literal, Term, nt_form
from .turtle import parse_turtle, serialize_turtle
from .validate import validate, validate_strict
from .vocab import REGISTRY, term

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_IO = 3


class _UsageError(DmccError):
    pass


def _load_graph(paths: list[str]) -> Graph:
    named = []
    seen: dict[str, int] = {}
    for path in paths:
        text = Path(path).read_text(encoding="utf-8")
        stem = Path(path).stem
        seen[stem] = seen.get(stem, 0) + 1
        if seen[stem] > 1:  # same stem twice must not coalesce blank labels
            stem = f"{stem}_{seen[stem]}"
        named.append((stem, parse_turtle(text)))
    return merge_graphs(named)


def _node_ref(g: Graph, ref: str) -> Term:
    if ref.startswith("_:"):
        return BlankNode(ref[2:])
    if ref.startswith("<") and ref.endswith(">"):
        return Iri(ref[1:-1])
    if ":" in ref:
        prefix, local = ref.split(":", 1)
        ns = g.prefixes.get(prefix)
        if ns is not None:
            return Iri(ns.value + local)
        return REGISTRY.resolve(ref)
    raise _UsageError(f"cannot interpret node reference {ref!r}; use _:label, <iri>, or prefix:local")


def _decimal_arg(raw: str, what: str) -> Decimal:
    try:
        return Decimal(raw)
    except InvalidOperation:
        raise _UsageError(f"{what} must be a decimal number, got {raw!r}") from None


def _usage_from_args(g: Graph, args: argparse.Namespace) -> UsageRequest:
    quantities = []
    if args.hours is not None:
        quantities.append(Quantity(_decimal_arg(args.hours, "--hours"), "HRS"))
    if getattr(args, "gb", None) is not None:
        quantities.append(Quantity(_decimal_arg(args.gb, "--gb"), "E34"))
    if not quantities:
        raise _UsageError("give at least one usage quantity (--hours or --gb)")
    instance_ref = _node_ref(g, args.instance) if getattr(args, "instance", None) else None
    region_ref = None
    if getattr(args, "region", None):
        found = g.match(None, term("ccregions:code"), Literal(args.region))
        if not found:
            raise _UsageError(f"no region with code {args.region!r} in the data")
        region_ref = found[0].subject
    try:
        return UsageRequest(tuple(quantities), instance_ref=instance_ref, region_ref=region_ref)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _emit_json(payload: object) -> None:
    print(json.dumps(payload, indent=2))


# --------------------------------------------------------------------------
# Subcommand handlers
# --------------------------------------------------------------------------


def _cmd_convert(args: argparse.Namespace) -> int:
    g = _load_graph(args.files)
    if args.to == "ntriples":
        sys.stdout.write(serialize_ntriples(g))
    else:
        sys.stdout.write(serialize_turtle(g))
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    g = _load_graph(args.files)
    report = validate_strict(g) if args.strict else validate(g)
    if args.json:
        _emit_json(report.to_json())
    else:
        print(report.to_text())
    return EXIT_VALIDATION if report.error_count else EXIT_OK


def _provider_summary(g: Graph, node: Term) -> str:
    provider = extract_provider(g, node)
    lines = [f"{provider.name} ({nt_form(provider.node)})"]
    if provider.legal_name:
        lines.append(f"  legal name: {provider.legal_name}")
    for service in provider.services:
        aspects = [
            name
            for name, value in (
                ("interaction", service.interaction),
                ("sla", service.sla),
                ("function", service.function),
                ("authentication", service.authentication),
            )
            if value is not None
        ]
        if service.pricing:
            aspects.append(f"{len(service.pricing)} plan(s)")
        fn = f" function={service.function.name}" if service.function else ""
        lines.append(f"  service {nt_form(service.node)}:{fn} [{', '.join(aspects)}]")
    return "\n".join(lines)


def _cmd_extract(args: argparse.Namespace) -> int:
    g = _load_graph(args.files)
    if args.provider:
        nodes = [_node_ref(g, args.provider)]
    else:
        nodes = list_providers(g)
        if not nodes:
            raise _UsageError("no providers in the data")
    if args.json:
        providers = [to_jsonable(extract_provider(g, n)) for n in nodes]
        payload: dict[str, object] = {"formatVersion": MODEL_JSON_VERSION}
        if args.provider:
            payload["provider"] = providers[0]
        else:
            payload["providers"] = providers
        _emit_json(payload)
    else:
        print("\n".join(_provider_summary(g, n) for n in nodes))
    return EXIT_OK


def _cmd_query(args: argparse.Namespace) -> int:
    q = parse_query(Path(args.file).read_text(encoding="utf-8"))
    g = _load_graph(args.files)
    result = evaluate(g, q)
    if result.filter_warnings:
        print(f"warning: {result.filter_warnings} row(s) dropped by type errors in filters", file=sys.stderr)
    if args.json:
        _emit_json(result.to_json())
        return EXIT_OK
    if not result.columns:
        print("(no columns)")
        return EXIT_OK
    table = [list(result.columns)]
    for row in result.rows:
        table.append([nt_form(row[c]) for c in result.columns])
    widths = [max(len(r[i]) for r in table) for i in range(len(result.columns))]
    for i, row in enumerate(table):
        print("  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)).rstrip())
        if i == 0:
            print("  ".join("-" * w for w in widths))
    return EXIT_OK


def _service_sla(g: Graph, ref: str | None):
    if ref is not None:
        service = extract_service(g, _node_ref(g, ref))
    else:
        from .model import list_services

        nodes = list_services(g)
        if len(nodes) != 1:
            raise _UsageError("--service is required when the data holds more than one service")
        service = extract_service(g, nodes[0])
    if service.sla is None:
        raise _UsageError(f"service {nt_form(service.node)} has no level agreement")
    return service.sla


def _cmd_sla_comp(args: argparse.Namespace) -> int:
    g = _load_graph(args.files)
    sla = _service_sla(g, args.service)
    obs = Observation(args.term, _decimal_arg(args.value, "--value"), args.unit)
    result = compensation_for(sla, obs)
    payload = result.to_json()
    if args.bill is not None:
        owed = compensation_amount(result, _decimal_arg(args.bill, "--bill"))
        payload["payout"] = format(owed, "f")
    _emit_json(payload)
    return EXIT_OK


def _find_plan(g: Graph, ref: str):
    from .model import extract_pricing

    return extract_pricing(g, _node_ref(g, ref))


def _cmd_quote(args: argparse.Namespace) -> int:
    g = _load_graph(args.files)
    plan = _find_plan(g, args.plan)
    usage = _usage_from_args(g, args)
    breakdown = quote_plan(plan, usage)
    if args.json:
        _emit_json({"plan": plan.name, "node": nt_form(plan.node), **breakdown.to_json()})
    else:
        print(f"plan: {plan.name} ({nt_form(plan.node)})")
        for item in breakdown.items:
            print(
                f"  {format(item.billed_quantity, 'f')} {item.unit}"
                f" x {format(item.unit_price, 'f')} = {item.to_json()['subtotal']} {breakdown.currency}"
            )
        for q in breakdown.allowance_applied:
            print(f"  allowance: {format(q.amount, 'f')} {q.unit}")
        if breakdown.cap_applied is not None:
            print(f"  cap applied: -{format(breakdown.cap_applied, 'f')}")
        print(f"total: {breakdown.to_json()['total']} {breakdown.currency}")
    return EXIT_OK


def _cmd_broker(args: argparse.Namespace) -> int:
    g = _load_graph(args.files)
    if args.hours is None and args.gb is None:
        offers = providers_offering(g, args.function)
        if args.json:
            _emit_json([o.to_json() for o in offers])
        else:
            print(offers_table(offers))
        return EXIT_OK
    usage = _usage_from_args(g, args)
    offers = compare(g, args.function, usage)
    if args.best:
        offers = [best_offer(g, args.function, usage)]
    if args.report:
        from .report import render_comparison_report

        title = f"{args.function}: cost comparison"
        csv_path, fig_path = render_comparison_report(offers, args.report, title)
        print(f"report written: {csv_path} {fig_path}", file=sys.stderr)
    if args.json:
        _emit_json([o.to_json() for o in offers])
    else:
        print(offers_table(offers))
    return EXIT_OK


# --------------------------------------------------------------------------
# Parser wiring
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dmcc",
        description="Parse, validate, query, and price Turtle descriptions of data-mining services.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="re-serialize Turtle input")
    p.add_argument("files", nargs="+", metavar="FILE.ttl")
    p.add_argument("--to", choices=("ntriples", "turtle"), default="ntriples")
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("validate", help="run conformance checks")
    p.add_argument("files", nargs="+", metavar="FILE.ttl")
    p.add_argument("--strict", action="store_true", help="also warn on unregistered IRIs")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("extract", help="lift providers into the typed model")
    p.add_argument("files", nargs="+", metavar="FILE.ttl")
    p.add_argument("--provider", metavar="NODE", help="_:label, <iri>, or prefix:local")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("query", help="evaluate a SELECT query")
    p.add_argument("files", nargs="+", metavar="FILE.ttl")
    p.add_argument("--file", required=True, metavar="QUERY.rq")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("sla-comp", help="compensation for an observed metric value")
    p.add_argument("files", nargs="+", metavar="FILE.ttl")
    p.add_argument("--service", metavar="NODE")
    p.add_argument("--term", required=True, metavar="NAME")
    p.add_argument("--value", required=True, metavar="DECIMAL")
    p.add_argument("--unit", default="percent")
    p.add_argument("--bill", metavar="DECIMAL", help="billed amount, adds a payout field")
    p.set_defaults(func=_cmd_sla_comp)

    p = sub.add_parser("quote", help="price a usage scenario under one plan")
    p.add_argument("files", nargs="+", metavar="FILE.ttl")
    p.add_argument("--plan", required=True, metavar="NODE")
    p.add_argument("--hours", metavar="N")
    p.add_argument("--gb", metavar="N")
    p.add_argument("--instance", metavar="NODE")
    p.add_argument("--region", metavar="CODE")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_quote)

    p = sub.add_parser("broker", help="compare providers offering a function")
    p.add_argument("files", nargs="+", metavar="FILE.ttl")
    p.add_argument("--function", required=True, metavar="NAME")
    p.add_argument("--hours", metavar="N")
    p.add_argument("--gb", metavar="N")
    p.add_argument("--instance", metavar="NODE")
    p.add_argument("--region", metavar="CODE")
    p.add_argument("--best", action="store_true", help="print only the cheapest offer")
    p.add_argument("--report", metavar="DIR", help="write comparison.csv and comparison.png")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_broker)

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (FileNotFoundError, PermissionError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DmccError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
