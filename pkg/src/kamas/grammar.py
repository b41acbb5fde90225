"""Grammar inference over id streams, plus expansion, counting and checks.

A grammar is a set of productions over terminals (stream ids) and rule
references, with rule 0 as the start.  Inference replaces every repeated
adjacent pair by a rule reference, so each surviving rule names a pattern
that occurs at least twice; the start rule derives the original stream
exactly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InputError, IntegrityError, ParseError

GRAMMAR_MAGIC = "KAMAS-GRAMMAR 1"


@dataclass(frozen=True)
class Ref:
    """A reference to another rule inside a production body."""

    rule: int


@dataclass
class Grammar:
    """Productions keyed by rule id; bodies mix terminal ids and Refs."""

    productions: dict[int, tuple]
    start: int = 0

    @property
    def rule_count(self) -> int:
        """Number of rules besides the start rule."""
        return len(self.productions) - 1

    def rule_ids(self) -> list[int]:
        return sorted(self.productions)


def infer_grammar(stream) -> Grammar:
    """Run inference on a 1-d array of non-negative ids.

    Rule ids are dense (0..R) in creation order.  Capacity is retried
    upward on the rare overflow, so the result is deterministic in the
    input alone.
    """
    arr = np.ascontiguousarray(stream, dtype=np.int64)
    if arr.ndim != 1:
        raise InputError("stream must be one-dimensional")
    if arr.size == 0:
        raise InputError("stream is empty")
    if int(arr.min()) < 0:
        raise InputError("stream ids must be non-negative")

    mult = 4
    while True:
        ids, off, tok, flag = _kernels.sequitur(arr, mult)
        if int(flag) == 0:
            break
        mult *= 2
        if mult > 256:
            raise IntegrityError("inference exceeded every capacity bound")

    dense = {int(orig): i for i, orig in enumerate(ids.tolist())}
    productions = {}
    for i in range(len(ids)):
        body = []
        for v in tok[off[i]:off[i + 1]].tolist():
            body.append(v if v >= 0 else Ref(dense[-v - 1]))
        productions[i] = tuple(body)
    return Grammar(productions=productions)


def expand(grammar: Grammar, rule: int | None = None) -> list[int]:
    """Expand a rule (default: start) back into its terminal id sequence."""
    prods = grammar.productions
    if rule is None:
        rule = grammar.start
    if rule not in prods:
        raise IntegrityError("no production for rule %d" % rule)
    out = []
    stack = [iter(prods[rule])]
    while stack:
        tail = stack[-1]
        descended = False
        for sym in tail:
            if isinstance(sym, Ref):
                if sym.rule not in prods:
                    raise IntegrityError("dangling reference to rule %d" % sym.rule)
                if len(stack) > len(prods):
                    raise IntegrityError("cycle while expanding rule %d" % rule)
                stack.append(iter(prods[sym.rule]))
                descended = True
                break
            out.append(sym)
        if not descended:
            stack.pop()
    return out


def derivation_counts(grammar: Grammar) -> dict[int, int]:
    """How often each rule occurs in the full derivation of the start rule.

    The start rule counts once; every other rule counts the sum over its
    referencing rules of their count times the number of references.  Rules
    unreachable from the start get 0.  Cyclic grammars raise IntegrityError.
    """
    prods = grammar.productions
    refs = {}
    for rid, body in prods.items():
        c = Counter()
        for sym in body:
            if isinstance(sym, Ref):
                if sym.rule not in prods:
                    raise IntegrityError("dangling reference to rule %d" % sym.rule)
                c[sym.rule] += 1
        refs[rid] = c

    pending = {rid: 0 for rid in prods}
    for c in refs.values():
        for child in c:
            pending[child] += 1

    counts = {rid: 0 for rid in prods}
    counts[grammar.start] = 1
    ready = [rid for rid, p in pending.items() if p == 0]
    done = 0
    while ready:
        rid = ready.pop()
        done += 1
        for child, mult in refs[rid].items():
            counts[child] += counts[rid] * mult
            pending[child] -= 1
            if pending[child] == 0:
                ready.append(child)
    if done != len(prods):
        raise IntegrityError("grammar contains a reference cycle")
    return counts


def _digram_sites(body):
    """Digram start offsets that could be rewritten independently.

    Two occurrences of a pair only conflict when they share no symbol, so
    inside a run of one repeated symbol the pairs are counted greedily from
    the left: x x x exposes one site, x x x x two.
    """
    sites = []
    n = len(body)
    i = 0
    while i < n - 1:
        if body[i] == body[i + 1]:
            j = i
            while j + 1 < n and body[j + 1] == body[i]:
                j += 1
            k = j - i + 1
            sites.extend(range(i, i + 2 * (k // 2), 2))
            i = j
        else:
            sites.append(i)
            i += 1
    return sites


def validate(grammar: Grammar) -> list[str]:
    """Structural checks; returns human-readable violations (empty = clean).

    Checked: every reference resolves, non-start bodies have at least two
    symbols, every non-start rule is referenced at least twice, every rule
    is reachable from the start, and no digram occurs at two distinct sites
    anywhere in the grammar.
    """
    prods = grammar.productions
    problems = []
    if grammar.start not in prods:
        return ["start rule %d missing" % grammar.start]

    ref_count = Counter()
    for rid, body in prods.items():
        if rid != grammar.start and len(body) < 2:
            problems.append("rule %d body has %d symbols" % (rid, len(body)))
        for sym in body:
            if isinstance(sym, Ref):
                if sym.rule not in prods:
                    problems.append("rule %d references missing rule %d" % (rid, sym.rule))
                else:
                    ref_count[sym.rule] += 1

    for rid in prods:
        if rid == grammar.start:
            continue
        if ref_count[rid] < 2:
            problems.append("rule %d referenced %d times" % (rid, ref_count[rid]))

    seen = {grammar.start}
    frontier = [grammar.start]
    while frontier:
        rid = frontier.pop()
        for sym in prods[rid]:
            if isinstance(sym, Ref) and sym.rule in prods and sym.rule not in seen:
                seen.add(sym.rule)
                frontier.append(sym.rule)
    for rid in prods:
        if rid not in seen:
            problems.append("rule %d unreachable from start" % rid)

    digrams = {}
    for rid, body in prods.items():
        for i in _digram_sites(body):
            key = (body[i], body[i + 1])
            digrams.setdefault(key, []).append((rid, i))
    for key, places in sorted(digrams.items(), key=lambda kv: str(kv[0])):
        if len(places) > 1:
            problems.append(
                "digram %r occurs %d times (first two: rule %d pos %d, rule %d pos %d)"
                % (key, len(places), places[0][0], places[0][1], places[1][0], places[1][1])
            )
    return problems


def _topological_ids(grammar: Grammar) -> list[int]:
    """Rule ids ordered parents-before-children, ties by ascending id."""
    import heapq

    prods = grammar.productions
    children = {rid: sorted({s.rule for s in body if isinstance(s, Ref)})
                for rid, body in prods.items()}
    pending = {rid: 0 for rid in prods}
    for cs in children.values():
        for c in cs:
            pending[c] += 1
    heap = [rid for rid, p in pending.items() if p == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        rid = heapq.heappop(heap)
        order.append(rid)
        for c in children[rid]:
            pending[c] -= 1
            if pending[c] == 0:
                heapq.heappush(heap, c)
    if len(order) != len(prods):
        raise IntegrityError("grammar contains a reference cycle")
    return order


def write_grammar_text(document) -> str:
    """Serialize a document's grammar to the exchange text format.

    Line 1 is the magic, line 2 the sample count, then one line per trace
    (index and name), then one production line per rule with tokens
    ``t:<call>`` for terminals, ``s:<k>`` for the k-th trace boundary and
    ``r:<id>`` for references.  Productions are listed in topological
    order with ties by id, which makes the output canonical: re-reading
    and re-writing reproduces it byte for byte.
    """
    if document.grammar is None:
        raise InputError("document has no grammar yet")
    g = document.grammar
    lines = [GRAMMAR_MAGIC, "samples %d" % len(document.traces)]
    for t in document.traces:
        lines.append("trace %d %s" % (t.index, t.name))
    base = document.sentinel_base
    for rid in _topological_ids(g):
        toks = []
        for sym in g.productions[rid]:
            if isinstance(sym, Ref):
                toks.append("r:%d" % sym.rule)
            elif sym >= base:
                toks.append("s:%d" % (sym - base))
            else:
                toks.append("t:%s" % document.calls.name_of(sym))
        lines.append("%d -> %s" % (rid, " ".join(toks)))
    return "\n".join(lines) + "\n"


def write_grammar_file(document, path: str) -> None:
    text = write_grammar_text(document)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def read_grammar_text(text: str):
    """Parse the exchange format back into a ClusterDocument.

    Call ids are assigned in order of first appearance in the production
    lines; the stream, spans and occurrence counts are rebuilt by expanding
    the start rule.  Raises ParseError with a line number on malformed
    input, unknown rule references, or inconsistent trace structure.
    """
    from .model import CallTable, ClusterDocument, TraceMeta

    lines = text.splitlines()
    if not lines or lines[0].strip() != GRAMMAR_MAGIC:
        raise ParseError("expected %r header" % GRAMMAR_MAGIC, line=1)
    if len(lines) < 2 or not lines[1].startswith("samples "):
        raise ParseError("expected 'samples <count>'", line=2)
    try:
        n_traces = int(lines[1].split()[1])
    except (IndexError, ValueError):
        raise ParseError("bad sample count", line=2) from None
    if n_traces < 1:
        raise ParseError("sample count must be positive", line=2)

    names = [None] * n_traces
    lineno = 2
    for k in range(n_traces):
        lineno = 3 + k
        if lineno > len(lines):
            raise ParseError("missing trace line %d" % k, line=len(lines))
        parts = lines[lineno - 1].split(None, 2)
        if len(parts) != 3 or parts[0] != "trace":
            raise ParseError("expected 'trace <index> <name>'", line=lineno)
        try:
            idx = int(parts[1])
        except ValueError:
            raise ParseError("bad trace index %r" % parts[1], line=lineno) from None
        if idx != k:
            raise ParseError("trace index %d out of order (expected %d)" % (idx, k), line=lineno)
        names[k] = parts[2]

    table = CallTable()
    raw = {}
    pending_refs = []
    for off, line in enumerate(lines[2 + n_traces:], start=3 + n_traces):
        if not line.strip():
            continue
        head, sep, rest = line.partition("->")
        if not sep:
            raise ParseError("expected '<id> -> <tokens>'", line=off)
        try:
            rid = int(head.strip())
        except ValueError:
            raise ParseError("bad rule id %r" % head.strip(), line=off) from None
        if rid in raw:
            raise ParseError("duplicate production for rule %d" % rid, line=off)
        body = []
        for tok in rest.split():
            kind, sep2, payload = tok.partition(":")
            if not sep2 or not payload:
                raise ParseError("bad token %r" % tok, line=off)
            if kind == "t":
                body.append(table.intern(payload))
            elif kind == "s":
                try:
                    b = int(payload)
                except ValueError:
                    raise ParseError("bad boundary %r" % tok, line=off) from None
                if not 0 <= b < n_traces - 1:
                    raise ParseError("boundary %d out of range" % b, line=off)
                body.append(("s", b))
            elif kind == "r":
                try:
                    target = int(payload)
                except ValueError:
                    raise ParseError("bad reference %r" % tok, line=off) from None
                pending_refs.append((target, off))
                body.append(Ref(target))
            else:
                raise ParseError("unknown token kind %r" % kind, line=off)
        if not body:
            raise ParseError("empty production for rule %d" % rid, line=off)
        raw[rid] = body
    if 0 not in raw:
        raise ParseError("no production for start rule 0")
    for target, off in pending_refs:
        if target not in raw:
            raise ParseError("reference to missing rule %d" % target, line=off)

    base = len(table)
    productions = {}
    for rid, body in raw.items():
        productions[rid] = tuple(
            base + sym[1] if isinstance(sym, tuple) else sym for sym in body
        )
    g = Grammar(productions=productions)
    try:
        derivation_counts(g)  # cycles must surface before any walk runs
    except IntegrityError as exc:
        raise ParseError(str(exc)) from None

    stream = expand(g)
    spans = []
    start = 0
    for pos, v in enumerate(stream):
        if v >= base:
            if v - base != len(spans):
                raise ParseError("boundary %d out of order in derivation" % (v - base))
            spans.append((start, pos))
            start = pos + 1
    spans.append((start, len(stream)))
    if len(spans) != n_traces:
        raise ParseError(
            "derivation has %d traces, header says %d" % (len(spans), n_traces)
        )
    for s, e in spans:
        if e <= s:
            raise ParseError("derivation contains an empty trace")

    arr = np.asarray(stream, dtype=np.int64)
    occ = np.bincount(arr[arr < base], minlength=base).astype(np.int64)
    metas = [
        TraceMeta(index=i, name=names[i], start=s, end=e)
        for i, (s, e) in enumerate(spans)
    ]
    return ClusterDocument(
        calls=table,
        traces=metas,
        stream=arr,
        sentinel_base=base,
        call_occurrence=occ,
        grammar=g,
    )


def read_grammar_file(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return read_grammar_text(fh.read())
