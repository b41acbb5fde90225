"""Command-line front end.

ingest   cluster manifest -> grammar file
analyze  grammar file -> terminal summary, optional CSV export
kdb      inspect and edit the persistent knowledge base
serve    run the wire API

The knowledge base lives at the path named by KAMAS_KDB_PATH (or --kdb).
"""

from __future__ import annotations

import argparse
import collections
import sys

from .errors import InputError, KamasError
from .filters import CallFilterState, RuleFilterState
from .gateway import KDB_PATH_ENV, Session, ingest_manifest
from .kdb import BENIGN, MALICIOUS


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except KamasError as exc:
        print("kamas: %s" % exc, file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kamas",
        description="grammar-based behavior analysis for clustered call traces",
    )
    parser.add_argument(
        "--kdb",
        metavar="PATH",
        default=None,
        help="knowledge-base file (default: $%s)" % KDB_PATH_ENV,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="infer a grammar file from a cluster manifest")
    p.add_argument("manifest", help="text file listing one trace file per line")
    p.add_argument("-o", "--output", required=True, help="grammar file to write")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("analyze", help="summarize a grammar file")
    p.add_argument("grammar", help="grammar file produced by ingest")
    p.add_argument("--csv", metavar="PATH", default=None, help="write the rule table as CSV")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("kdb", help="knowledge-base maintenance")
    kdb_sub = p.add_subparsers(dest="kdb_command", required=True)

    k = kdb_sub.add_parser("list", help="print the knowledge tree")
    k.set_defaults(func=_cmd_kdb_list)

    k = kdb_sub.add_parser("add", help="attach a call-sequence rule to a node")
    k.add_argument("node", type=int, help="node id (see 'kdb list')")
    k.add_argument("calls", nargs="+", help="call names in order")
    k.add_argument("--benign", action="store_true", help="mark the pattern benign")
    k.set_defaults(func=_cmd_kdb_add)

    k = kdb_sub.add_parser("node", help="create a tree node")
    k.add_argument("label", help="node label")
    k.add_argument("--parent", type=int, default=None, help="parent node id (default: new root)")
    k.set_defaults(func=_cmd_kdb_node)

    k = kdb_sub.add_parser("activate", help="switch a subtree on or off")
    k.add_argument("node", type=int, help="node id")
    k.add_argument("--off", action="store_true", help="deactivate instead")
    k.set_defaults(func=_cmd_kdb_activate)

    p = sub.add_parser("serve", help="run the wire API server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def _session(args) -> Session:
    return Session(kdb_path=args.kdb)


def _mutable_session(args) -> Session:
    session = _session(args)
    if not session.kdb_path:
        raise InputError(
            "no knowledge-base path; set %s or pass --kdb" % KDB_PATH_ENV
        )
    return session


def _cmd_ingest(args) -> int:
    doc = ingest_manifest(args.manifest, args.output)
    print(
        "wrote %s: %d rules, %d calls, %d samples"
        % (args.output, doc.grammar.rule_count, doc.sentinel_base, doc.sample_count)
    )
    return 0


def _cmd_analyze(args) -> int:
    session = _session(args)
    summary = session.load_document(args.grammar)
    print("rules    %d" % summary["rules"])
    print("calls    %d" % summary["calls"])
    print("samples  %d" % summary["samples"])
    tally = collections.Counter(rec.knowledge_state for rec in session.document.rules)
    for state in sorted(tally):
        print("%s  %d" % (state.wire, tally[state]))
    if args.csv:
        data = session.export_rules_csv(CallFilterState(), RuleFilterState())
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        print("csv written to %s" % args.csv)
    return 0


def _cmd_kdb_list(args) -> int:
    session = _session(args)
    for node, ancestors in session.kdb.walk():
        indent = "  " * len(ancestors)
        flag = "on " if node.active else "off"
        print("%s[%d] %s (%s)" % (indent, node.node_id, node.label, flag))
        for rule in node.rules:
            print("%s  #%d %s: %s" % (indent, rule.rule_id, rule.polarity, " ".join(rule.calls)))
    return 0


def _cmd_kdb_add(args) -> int:
    session = _mutable_session(args)
    polarity = BENIGN if args.benign else MALICIOUS
    result = session.kdb_add_rule(args.node, args.calls, polarity)
    print("added rule #%d" % result["rule_id"])
    return 0


def _cmd_kdb_node(args) -> int:
    session = _mutable_session(args)
    result = session.kdb_add_node(args.label, args.parent)
    print("added node [%d]" % result["node_id"])
    return 0


def _cmd_kdb_activate(args) -> int:
    session = _mutable_session(args)
    session.kdb_set_active(args.node, not args.off)
    print("node [%d] %s" % (args.node, "deactivated" if args.off else "activated"))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    app = create_app(_session(args))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0
