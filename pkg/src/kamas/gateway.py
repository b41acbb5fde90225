"""Session gateway: one loaded cluster document, one knowledge base.

Everything the CLI and the wire API do goes through a Session.  The session
owns the mutable state — the current document, its classified rule table,
and the knowledge base — and guards it with a single lock.  Queries are
pure reads of that state; knowledge-base mutations persist the KDB and
synchronously reclassify the loaded rule table, bumping
classification_version exactly once per mutation or document load.
"""

from __future__ import annotations

import os
import threading

from . import analytics, filters
from .errors import InputError, NotFoundError, PreconditionError
from .grammar import GRAMMAR_MAGIC, infer_grammar, read_grammar_text, write_grammar_text
from .kdb import MALICIOUS, KnowledgeBase
from .model import build_cluster_stream, read_manifest_text
from .patterns import find_repeats

KDB_PATH_ENV = "KAMAS_KDB_PATH"

MAX_DETAIL_PATTERNS = 5
DEFAULT_PAGE_SIZE = 100


def document_from_text(text: str, base_dir: str = ".") -> "ClusterDocument":
    """Build a document from raw source text.

    Text beginning with the grammar-file magic is parsed as a grammar file;
    anything else is treated as a cluster manifest whose relative paths
    resolve against base_dir.  Manifest ingestion runs grammar inference.
    """
    head = text.lstrip().splitlines()
    if head and head[0].strip() == GRAMMAR_MAGIC:
        return read_grammar_text(text)
    traces, names = read_manifest_text(text, base_dir)
    doc = build_cluster_stream(traces, names)
    doc.grammar = infer_grammar(doc.stream)
    return doc


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc.strerror or exc)) from None


def ingest_manifest(manifest_path: str, out_path: str) -> "ClusterDocument":
    """CLI ingest: manifest -> inferred grammar file on disk."""
    text = _read_text(manifest_path)
    doc = document_from_text(text, os.path.dirname(os.path.abspath(manifest_path)))
    data = write_grammar_text(doc)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(data)
    return doc


class Session:
    """Single-document analysis session with a persistent knowledge base."""

    def __init__(self, kdb_path: str | None = None):
        if kdb_path is None:
            kdb_path = os.environ.get(KDB_PATH_ENV) or None
        self.kdb_path = kdb_path
        if kdb_path and os.path.exists(kdb_path):
            self.kdb = KnowledgeBase.load(kdb_path)
        else:
            self.kdb = KnowledgeBase.with_default_schema()
        self.document = None
        self.classification_version = 0
        self._lock = threading.RLock()

    # -- document lifecycle ------------------------------------------------

    def load_document(self, path: str) -> dict:
        text = _read_text(path)
        return self.load_document_text(text, os.path.dirname(os.path.abspath(path)))

    def load_document_text(self, text: str, base_dir: str = ".") -> dict:
        doc = document_from_text(text, base_dir)
        records = analytics.build_rule_table(doc)
        with self._lock:
            doc.rules = analytics.classify_records(records, doc, self.kdb)
            self.document = doc
            self.classification_version += 1
            return self.summary()

    def summary(self) -> dict:
        with self._lock:
            doc = self._require_document()
            return {
                "rules": len(doc.rules),
                "calls": doc.sentinel_base,
                "samples": doc.sample_count,
                "classification_version": self.classification_version,
            }

    def _require_document(self):
        doc = self.document
        if doc is None:
            raise PreconditionError("no document loaded")
        return doc

    # -- queries -----------------------------------------------------------

    def query_calls(self, call_state: filters.CallFilterState) -> list[dict]:
        with self._lock:
            doc = self._require_document()
            visible = filters.filter_calls(call_state, doc)
            return [
                {
                    "id": cid,
                    "name": doc.calls.name_of(cid),
                    "occurrence": int(doc.call_occurrence[cid]),
                }
                for cid in sorted(visible)
            ]

    def query_rules(
        self,
        call_state: filters.CallFilterState,
        rule_state: filters.RuleFilterState,
        sort: str | None = None,
        page: int | None = None,
        page_size: int = DEFAULT_PAGE_SIZE,
    ) -> dict:
        with self._lock:
            doc = self._require_document()
            visible = filters.filter_calls(call_state, doc)
            rule_ids = filters.filter_rules(rule_state, doc, visible)
            by_id = {rec.rule_id: rec for rec in doc.rules}
            records = [by_id[rid] for rid in rule_ids]
            records = _sort_records(records, sort)
            total = len(records)
            if page is not None:
                if page < 0 or page_size < 1:
                    raise InputError("page and page_size must be non-negative")
                records = records[page * page_size : (page + 1) * page_size]
            return {
                "total": total,
                "page": page,
                "classification_version": self.classification_version,
                "rules": [self._rule_row(doc, rec) for rec in records],
            }

    def rule_detail(self, rule_id: int) -> dict:
        with self._lock:
            doc = self._require_document()
            rec = None
            for cand in doc.rules:
                if cand.rule_id == rule_id:
                    rec = cand
                    break
            if rec is None:
                raise NotFoundError("unknown rule id %d" % rule_id)
            pats = find_repeats(rec.expansion, k=MAX_DETAIL_PATTERNS)
            row = self._rule_row(doc, rec)
            row["per_trace_counts"] = list(rec.per_trace_counts)
            row["trace_names"] = [t.name for t in doc.traces]
            row["patterns"] = [
                {
                    "calls": [doc.calls.name_of(c) for c in pat.subsequence],
                    "occurrences": list(pat.occurrences),
                    "count": pat.count,
                }
                for pat in pats
            ]
            return row

    def histogram(self, field: str, bins: int = 10) -> dict:
        with self._lock:
            doc = self._require_document()
            if field == "occurrence":
                values = [rec.occurrence for rec in doc.rules]
            elif field == "length":
                values = [rec.length for rec in doc.rules]
            else:
                raise InputError("unknown histogram field %r" % field)
            hist = analytics.histogram(values, bins, field=field)
            return {
                "field": hist.field,
                "edges": list(hist.edges),
                "counts": list(hist.counts),
            }

    def export_rules_csv(
        self,
        call_state: filters.CallFilterState,
        rule_state: filters.RuleFilterState,
    ) -> str:
        with self._lock:
            doc = self._require_document()
            visible = filters.filter_calls(call_state, doc)
            rule_ids = set(filters.filter_rules(rule_state, doc, visible))
            records = [rec for rec in doc.rules if rec.rule_id in rule_ids]
            return analytics.rules_to_csv(records, doc.calls)

    def _rule_row(self, doc, rec) -> dict:
        return {
            "id": rec.rule_id,
            "occurrence": rec.occurrence,
            "equal": rec.equal_distribution,
            "length": rec.length,
            "knowledge_state": rec.knowledge_state.wire,
            "calls": [doc.calls.name_of(c) for c in rec.expansion],
        }

    # -- knowledge-base mutation --------------------------------------------

    def kdb_snapshot(self) -> dict:
        with self._lock:
            obj = self.kdb.to_obj()
            obj["classification_version"] = self.classification_version
            return obj

    def kdb_add_node(self, label: str, parent_id: int | None = None) -> dict:
        with self._lock:
            node = self.kdb.add_node(label, parent_id)
            self._commit_kdb()
            return {
                "node_id": node.node_id,
                "classification_version": self.classification_version,
            }

    def kdb_add_rule(self, node_id: int, calls, polarity: str = MALICIOUS) -> dict:
        with self._lock:
            rule = self.kdb.add_rule(node_id, calls, polarity)
            self._commit_kdb()
            return {
                "rule_id": rule.rule_id,
                "classification_version": self.classification_version,
            }

    def kdb_set_active(self, node_id: int, active: bool) -> dict:
        with self._lock:
            self.kdb.set_active(node_id, active)
            self._commit_kdb()
            return {"classification_version": self.classification_version}

    def kdb_remove_rule(self, rule_id: int) -> dict:
        with self._lock:
            self.kdb.remove_rule(rule_id)
            self._commit_kdb()
            return {"classification_version": self.classification_version}

    def _commit_kdb(self):
        """Persist the KDB and bring loaded rules in line with it."""
        if self.kdb_path:
            self.kdb.save(self.kdb_path)
        doc = self.document
        if doc is not None:
            doc.rules = analytics.classify_records(doc.rules, doc, self.kdb)
        self.classification_version += 1


_SORT_KEYS = {
    "id": lambda r: r.rule_id,
    "occurrence": lambda r: r.occurrence,
    "length": lambda r: r.length,
    "state": lambda r: int(r.knowledge_state),
    "equal": lambda r: r.equal_distribution,
}


def _sort_records(records, sort):
    """Stable sort by one projection key; '-' prefix flips direction."""
    if not sort:
        return records
    reverse = sort.startswith("-")
    key = _SORT_KEYS.get(sort.lstrip("-+"))
    if key is None:
        raise InputError("unknown sort key %r" % sort)
    return sorted(records, key=key, reverse=reverse)
