"""Regenerate tests/fixtures/study.json from the backend's synthetic corpus.

The fixture freezes wire payloads (summary, rules, calls, knowledge base,
histograms, a few rule details) exactly as the gateway serves them, so the
explorer's tests exercise real payload shapes without a running backend.

Run from frontend/:  python scripts/make_fixture.py
"""

import json
import pathlib
import sys
import tempfile

from kamas import synth
from kamas.filters import CallFilterState, RuleFilterState
from kamas.gateway import Session

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "study.json"


def main() -> int:
    traces, trace_names = synth.study_cluster()
    with tempfile.TemporaryDirectory() as tmp:
        manifest = synth.write_cluster(traces, trace_names, tmp)
        session = Session()
        summary = session.load_document(manifest)

    # One drop target besides the default root.
    node = session.kdb_add_node("persistence", 1)

    empty_call = CallFilterState()
    empty_rule = RuleFilterState()
    rules = session.query_rules(empty_call, empty_rule)

    # Pick interesting details: the widest pattern list (the gateway caps it
    # at five), one mid-size rule with at least one repeat, and one rule with
    # no repeats at all.
    best_id, best_n = None, -1
    arc_id = None
    plain_id = None
    for row in rules["rules"]:
        detail = session.rule_detail(row["id"])
        n = len(detail["patterns"])
        if n > best_n:
            best_id, best_n = row["id"], n
        if arc_id is None and 1 <= n < 5:
            arc_id = row["id"]
        if plain_id is None and n == 0:
            plain_id = row["id"]
        if best_n == 5 and arc_id is not None and plain_id is not None:
            break

    chosen = {rid for rid in (best_id, arc_id, plain_id, rules["rules"][0]["id"]) if rid is not None}
    details = {str(rid): session.rule_detail(rid) for rid in sorted(chosen)}

    fixture = {
        "summary": summary,
        "rules": rules,
        "calls": session.query_calls(empty_call),
        "kdb": session.kdb_snapshot(),
        "histograms": {
            "occurrence": session.histogram("occurrence", 10),
            "length": session.histogram("length", 10),
        },
        "details": details,
        "drop_target_node": node["node_id"],
        "max_pattern_rule": best_id,
        "arc_rule": arc_id if arc_id is not None else best_id,
        "plain_rule": plain_id,
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(fixture, ensure_ascii=False) + "\n", encoding="utf-8")
    print(
        "wrote %s: %d rules, %d calls, %d details (max patterns %d)"
        % (OUT, fixture["rules"]["total"], len(fixture["calls"]), len(details), best_n)
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
