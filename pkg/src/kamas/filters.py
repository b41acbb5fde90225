"""The two chained dynamic-query pipelines.

Call filters narrow the call table; their output (the visible call set)
feeds the rule pipeline, whose own predicates then produce the visible rule
list.  Every predicate is conjunctive: an item passes a pipeline only when
it satisfies all active predicates at once.  Both stages are pure functions
over an immutable document snapshot.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import FilterError, InputError
from .kdb import KnowledgeState

ALL_STATES = frozenset(KnowledgeState)

_REGEX_CHARS = set(".^$*+?{}[]()|\\")


def _check_range(lo, hi, what):
    if lo is not None and hi is not None and lo > hi:
        raise InputError("%s range [%s, %s] is inverted" % (what, lo, hi))


@dataclass(frozen=True)
class CallFilterState:
    """Predicates over single calls; defaults pass everything."""

    occurrence_min: int | None = None
    occurrence_max: int | None = None
    name_pattern: str = ""
    case_sensitive: bool = False
    id_selection: frozenset | None = None
    table_selection: frozenset | None = None

    def validate(self):
        _check_range(self.occurrence_min, self.occurrence_max, "call occurrence")


@dataclass(frozen=True)
class RuleFilterState:
    """Predicates over rule records; defaults pass everything."""

    multiples_only: bool = False
    equal_only: bool = False
    knowledge_states: frozenset = field(default=ALL_STATES)
    occurrence_min: int | None = None
    occurrence_max: int | None = None
    length_min: int | None = None
    length_max: int | None = None

    def validate(self):
        _check_range(self.occurrence_min, self.occurrence_max, "rule occurrence")
        _check_range(self.length_min, self.length_max, "rule length")


def compile_pattern(pattern: str, case_sensitive: bool):
    """Build a match predicate from the pattern text.

    Text without regular-expression metacharacters is a substring search;
    anything else is compiled as a regular expression and searched, not
    anchored.  Returns None for the empty pattern (pass-all).
    """
    if not pattern:
        return None
    flags = 0 if case_sensitive else re.IGNORECASE
    if not _REGEX_CHARS.intersection(pattern):
        rx = re.compile(re.escape(pattern), flags)
    else:
        try:
            rx = re.compile(pattern, flags)
        except re.error as exc:
            raise FilterError("invalid pattern: %s" % exc) from None
    return rx.search


def filter_calls(state: CallFilterState, doc) -> set[int]:
    """Visible call ids: every active call predicate must hold."""
    state.validate()
    match = compile_pattern(state.name_pattern, state.case_sensitive)
    lo = state.occurrence_min
    hi = state.occurrence_max
    ids = state.id_selection
    table = state.table_selection

    out = set()
    for cid in range(doc.sentinel_base):
        if ids is not None and cid not in ids:
            continue
        if table is not None and cid not in table:
            continue
        occ = int(doc.call_occurrence[cid])
        if lo is not None and occ < lo:
            continue
        if hi is not None and occ > hi:
            continue
        if match is not None and match(doc.calls.name_of(cid)) is None:
            continue
        out.add(cid)
    return out


def filter_rules(state: RuleFilterState, doc, visible_calls: set[int]) -> list[int]:
    """Visible rule ids in table order.

    A rule must touch the visible call set and satisfy every active rule
    predicate.  multiples_only keeps rules whose occurrence is a positive
    multiple of the sample count.
    """
    state.validate()
    states = state.knowledge_states
    samples = doc.sample_count
    # the common all-visible case makes the intersection test vacuous
    everything = len(visible_calls) == doc.sentinel_base

    out = []
    for rec in doc.rules:
        if not everything and visible_calls.isdisjoint(rec.fingerprint):
            continue
        if state.multiples_only and (rec.occurrence <= 0 or rec.occurrence % samples != 0):
            continue
        if state.equal_only and not rec.equal_distribution:
            continue
        if rec.knowledge_state not in states:
            continue
        if state.occurrence_min is not None and rec.occurrence < state.occurrence_min:
            continue
        if state.occurrence_max is not None and rec.occurrence > state.occurrence_max:
            continue
        if state.length_min is not None and rec.length < state.length_min:
            continue
        if state.length_max is not None and rec.length > state.length_max:
            continue
        out.append(rec.rule_id)
    return out
