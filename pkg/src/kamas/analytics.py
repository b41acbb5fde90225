"""Per-rule analytics derived from an inferred grammar.

The rule table has one record per non-start rule, in creation order.  A
rule's occurrence is how often it appears in the full derivation of the
start rule, not how often its expansion occurs as a substring; overlapping
or re-derived appearances are a property of the text, occurrence is a
property of the grammar.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .errors import InputError, IntegrityError
from .grammar import Ref
from .kdb import KnowledgeState


@dataclass(frozen=True)
class RuleRecord:
    """Everything the overview table shows about one grammar rule."""

    rule_id: int
    expansion: tuple[int, ...]          # call ids, in order
    length: int                         # == len(expansion)
    occurrence: int                     # derivation count
    per_trace_counts: tuple[int, ...]   # occurrence split by trace
    equal_distribution: bool            # same count in every trace, and > 0
    fingerprint: frozenset[int]         # distinct call ids
    knowledge_state: KnowledgeState = KnowledgeState.NOT_KNOWN


def fingerprint(expansion) -> frozenset:
    """Distinct call ids of an expansion; order and multiplicity dropped."""
    exp = tuple(expansion)
    if not exp:
        raise InputError("expansion must be non-empty")
    return frozenset(exp)


def equal_distribution(per_trace_counts) -> bool:
    """True when every trace holds the same share and there is any at all."""
    counts = tuple(per_trace_counts)
    return sum(counts) > 0 and len(set(counts)) == 1


def _flatten(grammar):
    """Flattened productions plus the id mappings the walk kernel needs."""
    ids = grammar.rule_ids()
    if grammar.start != ids[0]:
        # the kernel walks from slot 0; put the start rule there
        ids.remove(grammar.start)
        ids.insert(0, grammar.start)
    slot = {rid: i for i, rid in enumerate(ids)}
    tok = []
    off = [0]
    for rid in ids:
        for sym in grammar.productions[rid]:
            if isinstance(sym, Ref):
                tok.append(-(slot[sym.rule] + 1))
            else:
                tok.append(sym)
        off.append(len(tok))
    return ids, np.asarray(tok, np.int64), np.asarray(off, np.int64)


def _expansions(grammar) -> dict[int, tuple[int, ...]]:
    """Every rule's terminal sequence, shared bottom-up."""
    prods = grammar.productions
    out = {}

    def need(rid):
        order = []
        seen = set()
        stack = [(rid, 0)]
        while stack:
            r, i = stack.pop()
            body = prods[r]
            while i < len(body):
                sym = body[i]
                if isinstance(sym, Ref) and sym.rule not in out and sym.rule not in seen:
                    stack.append((r, i + 1))
                    stack.append((sym.rule, 0))
                    break
                i += 1
            else:
                seen.add(r)
                order.append(r)
        return order

    for rid in prods:
        if rid in out:
            continue
        for r in need(rid):
            if r in out:
                continue
            parts = []
            for sym in prods[r]:
                if isinstance(sym, Ref):
                    parts.extend(out[sym.rule])
                else:
                    parts.append(sym)
            out[r] = tuple(parts)
    return out


def build_rule_table(document) -> list[RuleRecord]:
    """Materialize RuleRecords for every non-start rule, id ascending.

    Occurrences come from one depth-first walk of the start derivation;
    each occurrence lands in the trace whose span contains its start
    position, which the boundary sentinels make unambiguous.
    """
    g = document.grammar
    if g is None:
        raise InputError("document has no grammar yet")
    ids, tok, off = _flatten(g)
    occ, per, err = _kernels.walk(
        tok, off, np.int64(document.sentinel_base), np.int64(len(document.traces))
    )
    if int(err) != 0:
        raise IntegrityError("grammar contains a reference cycle")

    expansions = _expansions(g)
    records = []
    for i, rid in enumerate(ids):
        if rid == g.start:
            continue
        exp = expansions[rid]
        counts = tuple(int(c) for c in per[i])
        records.append(
            RuleRecord(
                rule_id=rid,
                expansion=exp,
                length=len(exp),
                occurrence=int(occ[i]),
                per_trace_counts=counts,
                equal_distribution=equal_distribution(counts),
                fingerprint=fingerprint(exp),
            )
        )
    records.sort(key=lambda r: r.rule_id)
    return records


def classify_records(records, document, kb) -> list[RuleRecord]:
    """Fresh records with knowledge_state recomputed against a base."""
    states = kb.classify_many(document.calls, [r.expansion for r in records])
    return [
        r if r.knowledge_state is s else replace(r, knowledge_state=s)
        for r, s in zip(records, states)
    ]


@dataclass(frozen=True)
class Histogram:
    """Counts of one numeric rule field over equal-width bins."""

    field: str
    edges: tuple[float, ...]   # len(counts) + 1, strictly increasing
    counts: tuple[int, ...]


def histogram(values, bins: int, field: str = "") -> Histogram:
    """Equal-width histogram over [min, max], last bin closed.

    An empty value list yields all-zero counts over unit placeholder bins;
    a single repeated value puts all mass in the first of `bins` unit-wide
    bins starting at that value.
    """
    if bins < 1:
        raise InputError("bins must be >= 1")
    vals = [int(v) for v in values]
    if not vals:
        return Histogram(field=field, edges=tuple(float(i) for i in range(bins + 1)),
                         counts=(0,) * bins)
    lo = min(vals)
    hi = max(vals)
    if lo == hi:
        edges = tuple(float(lo + i) for i in range(bins + 1))
        counts = [0] * bins
        counts[0] = len(vals)
        return Histogram(field=field, edges=edges, counts=tuple(counts))
    counts, edges = np.histogram(np.asarray(vals), bins=bins, range=(lo, hi))
    return Histogram(
        field=field,
        edges=tuple(float(e) for e in edges),
        counts=tuple(int(c) for c in counts),
    )


CSV_HEADER = "rule_id,occurrence,equal,length,knowledge_state,calls"


def rules_to_csv(records, call_table) -> str:
    """Render records as CSV, one line per rule, LF line endings.

    The calls column is the expansion's names joined with ``|``; names
    containing the CSV delimiter get quoted by the writer.
    """
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER.split(","))
    for r in records:
        w.writerow([
            r.rule_id,
            r.occurrence,
            "true" if r.equal_distribution else "false",
            r.length,
            r.knowledge_state.wire,
            "|".join(call_table.name_of(c) for c in r.expansion),
        ])
    return buf.getvalue()
