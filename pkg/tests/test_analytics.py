import numpy as np
import pytest

from kamas.analytics import (
    CSV_HEADER,
    Histogram,
    RuleRecord,
    build_rule_table,
    classify_records,
    equal_distribution,
    fingerprint,
    histogram,
    rules_to_csv,
)
from kamas.errors import InputError
from kamas.kdb import KnowledgeBase, KnowledgeState
from kamas.model import CallTable

from .conftest import make_document, random_stream
from .oracles import brute_rule_counts, substring_count


def _records(doc):
    return {rec.rule_id: rec for rec in doc.rules}


class TestRuleTable:
    def test_start_rule_excluded_and_sorted(self, tiny_doc):
        ids = [rec.rule_id for rec in tiny_doc.rules]
        assert 0 not in ids
        assert ids == sorted(ids)
        assert len(ids) == tiny_doc.grammar.rule_count

    def test_occurrence_matches_brute_unrolling(self):
        rng = np.random.default_rng(21)
        for _ in range(30):
            n_traces = int(rng.integers(1, 5))
            traces = [
                ["c%d" % int(v) for v in rng.integers(0, 8, int(rng.integers(1, 90)))]
                for _ in range(n_traces)
            ]
            doc = make_document(traces)
            occ, per = brute_rule_counts(
                doc.grammar.productions, doc.sentinel_base, doc.sample_count
            )
            for rec in doc.rules:
                assert rec.occurrence == occ[rec.rule_id]
                assert list(rec.per_trace_counts) == per[rec.rule_id]

    def test_per_trace_counts_sum_to_occurrence(self, tiny_doc):
        for rec in tiny_doc.rules:
            assert sum(rec.per_trace_counts) == rec.occurrence

    def test_occurrence_never_exceeds_substring_count(self, tiny_doc):
        stream = tiny_doc.stream.tolist()
        for rec in tiny_doc.rules:
            assert rec.occurrence <= substring_count(stream, rec.expansion)

    def test_expansion_and_length(self, tiny_doc):
        from kamas.grammar import expand

        for rec in tiny_doc.rules:
            assert list(rec.expansion) == expand(tiny_doc.grammar, rec.rule_id)
            assert rec.length == len(rec.expansion)

    def test_requires_grammar(self):
        from kamas.model import build_cluster_stream

        doc = build_cluster_stream([["a", "b"]])
        with pytest.raises(InputError):
            build_rule_table(doc)

    def test_fresh_records_start_not_known(self, tiny_doc):
        assert all(rec.knowledge_state is KnowledgeState.NOT_KNOWN for rec in tiny_doc.rules)


class TestFingerprintAndDistribution:
    def test_fingerprint_is_distinct_ids(self):
        assert fingerprint((3, 1, 3, 2)) == frozenset({1, 2, 3})

    def test_fingerprint_empty_rejected(self):
        with pytest.raises(InputError):
            fingerprint(())

    def test_equal_distribution(self):
        assert equal_distribution((2, 2, 2))
        assert not equal_distribution((2, 1, 2))
        assert not equal_distribution((0, 0, 0))  # vacuous equality does not count
        assert equal_distribution((5,))

    def test_records_carry_both(self, tiny_doc):
        for rec in tiny_doc.rules:
            assert rec.fingerprint == frozenset(rec.expansion)
            assert rec.equal_distribution == (
                len(set(rec.per_trace_counts)) == 1 and rec.occurrence > 0
            )


class TestClassifyRecords:
    def test_states_follow_kdb(self, tiny_doc):
        kb = KnowledgeBase.with_default_schema()
        target = tiny_doc.rules[0]
        names = [tiny_doc.calls.name_of(c) for c in target.expansion]
        kb.add_rule(1, names, "malicious")
        out = classify_records(tiny_doc.rules, tiny_doc, kb)
        by_id = {r.rule_id: r for r in out}
        assert by_id[target.rule_id].knowledge_state is KnowledgeState.FULLY_KNOWN
        # input list untouched
        assert target.knowledge_state is KnowledgeState.NOT_KNOWN

    def test_noop_when_kdb_empty(self, tiny_doc):
        out = classify_records(tiny_doc.rules, tiny_doc, KnowledgeBase.with_default_schema())
        assert [r.knowledge_state for r in out] == [KnowledgeState.NOT_KNOWN] * len(out)


class TestHistogram:
    def test_bins_and_counts(self):
        h = histogram([1, 2, 2, 3, 10], 3, field="occurrence")
        assert h.field == "occurrence"
        assert len(h.edges) == 4
        assert sum(h.counts) == 5
        assert h.edges[0] == 1 and h.edges[-1] == 10

    def test_max_value_lands_in_last_bin(self):
        h = histogram([0, 10], 5)
        assert h.counts[-1] == 1

    def test_degenerate_single_value(self):
        h = histogram([7, 7, 7], 4)
        assert h.counts[0] == 3
        assert sum(h.counts) == 3
        assert h.edges[0] == 7

    def test_empty_values(self):
        h = histogram([], 4)
        assert sum(h.counts) == 0
        assert len(h.edges) == 5

    def test_bad_bin_count(self):
        with pytest.raises(InputError):
            histogram([1], 0)


class TestCsvExport:
    def _table(self):
        t = CallTable()
        for name in ("NtOpenFile", "NtClose", "weird,name"):
            t.intern(name)
        return t

    def test_header_and_rows(self):
        t = self._table()
        rec = RuleRecord(
            rule_id=4,
            expansion=(0, 1),
            length=2,
            occurrence=6,
            per_trace_counts=(3, 3),
            equal_distribution=True,
            fingerprint=frozenset({0, 1}),
            knowledge_state=KnowledgeState.PARTIALLY_KNOWN,
        )
        text = rules_to_csv([rec], t)
        lines = text.split("\n")
        assert lines[0] == CSV_HEADER
        assert lines[1] == "4,6,true,2,partially_known,NtOpenFile|NtClose"
        assert text.endswith("\n")

    def test_header_only_when_empty(self):
        assert rules_to_csv([], self._table()) == CSV_HEADER + "\n"

    def test_comma_in_name_is_quoted(self):
        t = self._table()
        rec = RuleRecord(
            rule_id=1,
            expansion=(2, 0),
            length=2,
            occurrence=2,
            per_trace_counts=(2,),
            equal_distribution=True,
            fingerprint=frozenset({0, 2}),
            knowledge_state=KnowledgeState.NOT_KNOWN,
        )
        line = rules_to_csv([rec], t).split("\n")[1]
        assert line == '1,2,true,2,not_known,"weird,name|NtOpenFile"'

    def test_lf_line_endings(self, tiny_doc):
        text = rules_to_csv(tiny_doc.rules, tiny_doc.calls)
        assert "\r" not in text
        assert len(text.split("\n")) == len(tiny_doc.rules) + 2
