import numpy as np
import pytest

from kamas import synth
from kamas.grammar import infer_grammar
from kamas.model import build_cluster_stream


def make_document(traces, names=None):
    """Cluster document with grammar and rule table, ready for queries."""
    from kamas.analytics import build_rule_table

    doc = build_cluster_stream(traces, names)
    doc.grammar = infer_grammar(doc.stream)
    doc.rules = build_rule_table(doc)
    return doc


def random_stream(rng, max_len=2000, max_alpha=50):
    """Random terminal stream with a bias toward repeated motifs."""
    n = int(rng.integers(1, max_len + 1))
    alpha = int(rng.integers(1, max_alpha + 1))
    style = int(rng.integers(0, 3))
    if style == 0:
        return rng.integers(0, alpha, n).astype(np.int64)
    if style == 1:
        # motif soup: repeated chunks glued with noise
        out = []
        motifs = [rng.integers(0, alpha, int(rng.integers(2, 9))) for _ in range(6)]
        while len(out) < n:
            if rng.integers(0, 100) < 70:
                m = motifs[int(rng.integers(0, len(motifs)))]
                reps = int(rng.integers(1, 4))
                out.extend(list(m) * reps)
            else:
                out.append(int(rng.integers(0, alpha)))
        return np.array(out[:n], np.int64)
    # run-heavy: long stretches of one symbol
    out = []
    while len(out) < n:
        out.extend([int(rng.integers(0, alpha))] * int(rng.integers(1, 12)))
    return np.array(out[:n], np.int64)


@pytest.fixture
def tiny_doc():
    """Four short traces with obvious shared structure."""
    traces = [
        ["open", "read", "write", "close", "open", "read", "write", "close"],
        ["open", "read", "write", "close", "probe"],
        ["probe", "open", "read", "write", "close"],
        ["open", "read", "open", "read", "write", "close"],
    ]
    return make_document(traces, ["a", "b", "c", "d"])


@pytest.fixture(scope="session")
def study_doc():
    """The pinned 16-sample cluster (794 rules).  Treat as read-only."""
    traces, names = synth.study_cluster()
    return make_document(traces, names)
