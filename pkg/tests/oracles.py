"""Independent reference implementations the test suite checks against.

Everything here is written for obviousness, not speed: plain loops, no
shared code with the package internals.  When a test compares package
output to an oracle, both sides must stay separate routes to the answer.
"""

from __future__ import annotations

import re

from kamas.grammar import Ref
from kamas.kdb import KnowledgeState


# -- grammar ---------------------------------------------------------------

def oracle_expand(productions, rule=0):
    """Recursive expansion with memoization over a production dict."""
    memo = {}

    def go(rid):
        if rid in memo:
            return memo[rid]
        out = []
        for sym in productions[rid]:
            if isinstance(sym, Ref):
                out.extend(go(sym.rule))
            else:
                out.append(sym)
        memo[rid] = out
        return out

    return go(rule)


def oracle_digram_dup(productions):
    """True when any symbol pair occurs at two independently rewritable sites.

    Within a run of one repeated symbol, sites are the greedy left-to-right
    non-overlapping pairs: three in a row is one site, four is two.
    """
    seen = {}
    for rid, body in productions.items():
        i = 0
        while i < len(body) - 1:
            if body[i] == body[i + 1]:
                j = i
                while j + 1 < len(body) and body[j + 1] == body[i]:
                    j += 1
                run = j - i + 1
                for s in range(run // 2):
                    key = (body[i], body[i])
                    if key in seen:
                        return True
                    seen[key] = (rid, i + 2 * s)
                i = j
            else:
                key = (body[i], body[i + 1])
                if key in seen:
                    return True
                seen[key] = (rid, i)
                i += 1
    return False


def oracle_underused(productions, start=0):
    """Non-start rule ids referenced fewer than twice."""
    refs = {rid: 0 for rid in productions}
    for body in productions.values():
        for sym in body:
            if isinstance(sym, Ref):
                refs[sym.rule] += 1
    return sorted(rid for rid in productions if rid != start and refs[rid] < 2)


def brute_rule_counts(productions, sentinel_base, n_traces, start=0):
    """Derivation counts by literally unrolling the whole derivation.

    Returns (occurrence dict, per-trace dict of lists).  A rule occurrence
    is attributed to the trace being emitted when the rule is entered;
    separator symbols advance the trace cursor.
    """
    occ = {rid: 0 for rid in productions}
    per = {rid: [0] * n_traces for rid in productions}
    state = {"trace": 0}

    def walk(rid):
        occ[rid] += 1
        if state["trace"] < n_traces:
            per[rid][state["trace"]] += 1
        for sym in productions[rid]:
            if isinstance(sym, Ref):
                walk(sym.rule)
            elif sym >= sentinel_base:
                state["trace"] += 1

    import sys

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10000))
    try:
        walk(start)
    finally:
        sys.setrecursionlimit(old)
    return occ, per


def substring_count(haystack, needle):
    """Occurrences of needle in haystack, overlaps included."""
    n = len(needle)
    if n == 0 or n > len(haystack):
        return 0
    return sum(
        1 for i in range(len(haystack) - n + 1) if tuple(haystack[i : i + n]) == tuple(needle)
    )


# -- repeats ---------------------------------------------------------------

def brute_repeats(seq, k):
    """Cubic repeated-subsequence search, straight from the definition.

    Candidates are distinct windows of length >= 2 with at least two greedy
    leftmost non-overlapping occurrences.  A candidate is suppressed when a
    longer window with the same occurrence count contains it at a fixed
    offset and its occurrence list is exactly the longer one shifted.
    Survivors rank by (longer, more frequent, earlier); top k returned as
    (subsequence tuple, occurrence tuple) pairs.
    """
    seq = tuple(seq)
    n = len(seq)
    if n < 4:
        return []

    candidates = {}
    for length in range(2, n // 2 + 1):
        for start in range(n - length + 1):
            window = seq[start : start + length]
            if window in candidates:
                continue
            positions = []
            i = 0
            while i <= n - length:
                if seq[i : i + length] == window:
                    positions.append(i)
                    i += length
                else:
                    i += 1
            if len(positions) >= 2:
                candidates[window] = tuple(positions)

    items = list(candidates.items())
    kept = []
    for window, positions in items:
        suppressed = False
        for other, opos in items:
            if len(other) <= len(window) or len(opos) != len(positions):
                continue
            offset = positions[0] - opos[0]
            if offset < 0 or offset + len(window) > len(other):
                continue
            if other[offset : offset + len(window)] != window:
                continue
            if all(p == q + offset for p, q in zip(positions, opos)):
                suppressed = True
                break
        if not suppressed:
            kept.append((window, positions))

    kept.sort(key=lambda it: (-len(it[0]), -len(it[1]), it[1][0]))
    return kept[:k]


# -- knowledge classification ----------------------------------------------

def naive_classify(kb, expansion_names):
    """Exact-then-substring scan over the active patterns of a KDB tree."""
    active = []

    def collect(node, ancestors_active):
        live = ancestors_active and node.active
        if live:
            for rule in node.rules:
                active.append(tuple(rule.calls))
        for child in node.children:
            collect(child, live)

    for root in kb.roots:
        collect(root, True)

    target = tuple(expansion_names)
    for pat in active:
        if pat == target:
            return KnowledgeState.FULLY_KNOWN
    for pat in active:
        if len(pat) < len(target):
            for i in range(len(target) - len(pat) + 1):
                if target[i : i + len(pat)] == pat:
                    return KnowledgeState.PARTIALLY_KNOWN
    return KnowledgeState.NOT_KNOWN


# -- filters -----------------------------------------------------------------

_META = set(".^$*+?{}[]()|\\")


def _name_matches(pattern, name, case_sensitive):
    if not pattern:
        return True
    flags = 0 if case_sensitive else re.IGNORECASE
    if _META.intersection(pattern):
        return re.search(pattern, name, flags) is not None
    return re.search(re.escape(pattern), name, flags) is not None


def naive_filter_calls(doc, state):
    """One flat conjunction pass over every call."""
    out = set()
    for cid in range(doc.sentinel_base):
        occ = int(doc.call_occurrence[cid])
        name = doc.calls.name_of(cid)
        ok = True
        if state.occurrence_min is not None and occ < state.occurrence_min:
            ok = False
        if state.occurrence_max is not None and occ > state.occurrence_max:
            ok = False
        if not _name_matches(state.name_pattern, name, state.case_sensitive):
            ok = False
        if state.id_selection is not None and cid not in state.id_selection:
            ok = False
        if state.table_selection is not None and cid not in state.table_selection:
            ok = False
        if ok:
            out.add(cid)
    return out


def naive_filter_rules(doc, rule_state, visible_calls):
    """One flat conjunction pass over every rule record."""
    out = []
    for rec in doc.rules:
        ok = len(set(rec.fingerprint) & set(visible_calls)) > 0
        if rec.knowledge_state not in rule_state.knowledge_states:
            ok = False
        if rule_state.multiples_only:
            if rec.occurrence <= 0 or rec.occurrence % doc.sample_count != 0:
                ok = False
        if rule_state.equal_only and not rec.equal_distribution:
            ok = False
        if rule_state.occurrence_min is not None and rec.occurrence < rule_state.occurrence_min:
            ok = False
        if rule_state.occurrence_max is not None and rec.occurrence > rule_state.occurrence_max:
            ok = False
        if rule_state.length_min is not None and rec.length < rule_state.length_min:
            ok = False
        if rule_state.length_max is not None and rec.length > rule_state.length_max:
            ok = False
        if ok:
            out.append(rec.rule_id)
    return out
