"""Command-line entry point: convert, validate, query, ingest, exec, versions, serve.

Exit codes: 0 success (and `validate` conforms), 1 domain failure
(validation violations, unknown query, bad bindings), 2 input-format failure
(unparseable documents, bad flags).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .cq import UnboundParameter, UnknownQuery, catalog, find, run
from .mapper import MalformedTimestamp
from .model import OrderingError, parse_timestamp, version_chain
from .rdfio import (
    SerializationOptions,
    TurtleParseError,
    parse_turtle,
    serialize,
)
from .session import SessionError, overrun_report, start_execution
from .store import Graph, load_snapshot, save_snapshot
from .validation import builtin_rules, validate
from .vocab import Iri, UnknownPrefix, expand


class CliError(Exception):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


def _sniff_format(path: str, explicit: str | None) -> str:
    if explicit:
        return explicit
    return "ntriples" if path.endswith(".nt") else "turtle"


def _load_graph(path: str, fmt: str | None = None) -> Graph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", 2)
    try:
        graph, _ = parse_turtle(text)
    except TurtleParseError as exc:
        lines = "\n".join(f"{path}:{d}" for d in exc.diagnostics)
        raise CliError(lines, 2)
    return graph


def _resolve_term(value: str, graph: Graph) -> Iri:
    if value.startswith("<") and value.endswith(">"):
        value = value[1:-1]
    if "://" in value or value.startswith("urn:"):
        return Iri(value)
    try:
        return expand(value, graph.prefixes)
    except UnknownPrefix:
        raise CliError(f"cannot resolve {value!r}: unknown prefix", 1)


def _cmd_convert(args: argparse.Namespace) -> int:
    graph = _load_graph(args.infile, _sniff_format(args.infile, args.from_format))
    opts = SerializationOptions(format=args.to, prefixes=graph.prefixes)
    output = serialize(graph, opts)
    if args.out:
        Path(args.out).write_text(output, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(output)
    return 0


def _select_rules(rules_file: str | None):
    if rules_file is None:
        return None
    try:
        wanted = {
            line.strip()
            for line in Path(rules_file).read_text(encoding="utf-8").splitlines()
            if line.strip() and not line.strip().startswith("#")
        }
    except OSError as exc:
        raise CliError(f"cannot read rules file: {exc}", 2)
    by_id = {rule.id: rule for rule in builtin_rules()}
    unknown = wanted - set(by_id)
    if unknown:
        raise CliError(f"unknown rule ids: {', '.join(sorted(unknown))}", 2)
    return [by_id[rule_id] for rule_id in sorted(wanted)]


def _cmd_validate(args: argparse.Namespace) -> int:
    graph = _load_graph(args.infile)
    report = validate(graph, _select_rules(args.rules))
    sys.stdout.write(report.to_json() if args.json else report.to_text())
    return 0 if report.conforms else 1


def _cmd_query(args: argparse.Namespace) -> int:
    graph = _load_graph(args.infile)
    try:
        query = find(args.cq)
    except UnknownQuery:
        raise CliError(f"unknown query {args.cq!r}; see `pkf query --list`", 1)
    bindings = {}
    for item in args.bind or ():
        name, _, value = item.partition("=")
        if not value:
            raise CliError(f"--bind needs name=<iri>, got {item!r}", 2)
        bindings[name] = _resolve_term(value, graph)
    try:
        table = run(graph, query, bindings)
    except UnboundParameter as exc:
        raise CliError(str(exc), 1)
    sys.stdout.write(table.to_json() if args.json else table.to_tsv())
    return 0


def _cmd_list_queries(_args: argparse.Namespace) -> int:
    for q in catalog():
        params = ", ".join(q.parameters)
        sys.stdout.write(f"{q.id}\t{q.question}\t[{params}]\n")
    return 0


def _cmd_ingest(args: argparse.Namespace) -> int:
    store = load_snapshot(args.store) if Path(args.store).exists() else Graph()
    incoming = _load_graph(args.infile)
    candidate = store.copy()
    candidate.update(incoming)
    report = validate(candidate)
    if not report.conforms and not args.force:
        sys.stderr.write(report.to_text())
        raise CliError("ingest rejected: graph does not conform (use --force to override)", 1)
    save_snapshot(candidate, args.store)
    sys.stdout.write(f"ingested {len(incoming)} triples; store now holds {len(candidate)}\n")
    return 0


def _cmd_versions(args: argparse.Namespace) -> int:
    graph = _load_graph(args.infile)
    procedure = _resolve_term(args.procedure, graph)
    try:
        chain = version_chain(graph, procedure)
    except OrderingError as exc:
        raise CliError(f"broken version chain: {exc}", 1)
    for version in chain:
        sys.stdout.write(version.value + "\n")
    return 0


def _cmd_exec(args: argparse.Namespace) -> int:
    store = load_snapshot(args.store) if Path(args.store).exists() else Graph()
    try:
        script = json.loads(Path(args.script).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read script: {exc}", 2)
    try:
        session = start_execution(
            store,
            _resolve_term(script["procedure"], store),
            _resolve_term(script["agent"], store),
            parse_timestamp(script["started_at"]),
        )
        for event in script.get("events", ()):
            kind = event["event"]
            at = parse_timestamp(event["at"])
            if kind == "start_step":
                session.start_step(_resolve_term(event["step"], store), at)
            elif kind == "end_step":
                session.end_step(_resolve_term(event["step"], store), at)
            elif kind == "question":
                session.ask_question(event["text"], at)
            elif kind == "feedback":
                session.leave_feedback(event["text"], at)
            elif kind == "issue":
                session.report_issue(
                    _resolve_term(event["error"], store),
                    at,
                    cause=event.get("cause"),
                    solution=event.get("solution"),
                )
            else:
                raise CliError(f"unknown event type {kind!r}", 2)
        finish = script["finish"]
        trace = session.finish(
            _resolve_term(finish["status"], store), parse_timestamp(finish["at"])
        )
    except (SessionError, MalformedTimestamp, KeyError, ValueError) as exc:
        if isinstance(exc, CliError):
            raise
        raise CliError(f"execution script failed: {exc}", 1)
    from .mapper import lower_execution

    store.update(lower_execution(trace))
    save_snapshot(store, args.store)
    report = overrun_report(trace, store)
    if args.json:
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write("step\texpected_s\tactual_s\tdelta_s\n")
        for row in report.rows:
            expected = "" if row.expected_s is None else f"{row.expected_s:g}"
            delta = "" if row.delta_s is None else f"{row.delta_s:+g}"
            sys.stdout.write(f"{row.step.value}\t{expected}\t{row.actual_s:g}\t{delta}\n")
    sys.stdout.write(f"execution: {trace.id.value}\n")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    listen = args.listen or os.environ.get("PKF_LISTEN", "127.0.0.1:8000")
    host, _, port = listen.rpartition(":")
    if not host or not port.isdigit():
        raise CliError(f"--listen needs host:port, got {listen!r}", 2)
    store_path = args.store or os.environ.get("PKF_STORE")
    app = create_app(store_path)
    uvicorn.run(app, host=host, port=int(port), log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pkf", description="Procedural-knowledge graph toolkit"
    )
    parser.add_argument("--version", action="version", version=f"pkf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    convert = sub.add_parser("convert", help="convert between RDF serializations")
    convert.add_argument("--in", dest="infile", required=True)
    convert.add_argument("--from", dest="from_format", choices=["turtle", "ntriples"])
    convert.add_argument("--to", required=True, choices=["turtle", "ntriples", "jsonld"])
    convert.add_argument("--out")
    convert.set_defaults(func=_cmd_convert)

    val = sub.add_parser("validate", help="run the shape rules over a document")
    val.add_argument("--in", dest="infile", required=True)
    val.add_argument("--rules", help="file listing rule ids to run (one per line)")
    val.add_argument("--json", action="store_true")
    val.set_defaults(func=_cmd_validate)

    query = sub.add_parser("query", help="run a competency question")
    query.add_argument("--in", dest="infile", required=True)
    query.add_argument("--cq", required=True)
    query.add_argument("--bind", action="append", metavar="name=<iri>")
    query.add_argument("--json", action="store_true")
    query.add_argument("--tsv", action="store_true")
    query.set_defaults(func=_cmd_query)

    cqs = sub.add_parser("cqs", help="list the competency-question catalog")
    cqs.set_defaults(func=_cmd_list_queries)

    ingest = sub.add_parser("ingest", help="merge a document into a store snapshot")
    ingest.add_argument("--store", required=True)
    ingest.add_argument("--in", dest="infile", required=True)
    ingest.add_argument("--force", action="store_true")
    ingest.set_defaults(func=_cmd_ingest)

    versions = sub.add_parser("versions", help="print a procedure's version chain")
    versions.add_argument("--in", dest="infile", required=True)
    versions.add_argument("--procedure", required=True)
    versions.set_defaults(func=_cmd_versions)

    execute = sub.add_parser("exec", help="replay an execution script against a store")
    execute.add_argument("--store", required=True)
    execute.add_argument("--script", required=True)
    execute.add_argument("--json", action="store_true")
    execute.set_defaults(func=_cmd_exec)

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--store")
    serve.add_argument("--listen", metavar="host:port")
    serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, matching the format-failure code
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(str(exc) + "\n")
        return exc.exit_code
    except TurtleParseError as exc:
        for diag in exc.diagnostics:
            sys.stderr.write(str(diag) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
