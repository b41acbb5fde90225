"""Deterministic synthetic trace clusters for tests, benchmarks, and demos.

Real sandbox traces are not distributable, so the test fixtures are grown
from a tiny self-contained linear-congruential generator: same seed, same
cluster, on every platform and library version.  Traces are concatenations
of reused call motifs plus uniform noise, which gives the inference step
realistic amounts of shared structure to fold into rules.
"""

from __future__ import annotations

import itertools
import os

_PREFIXES = ("Nt", "Zw", "Rtl", "Ldr", "Csr")
_VERBS = (
    "Create", "Open", "Read", "Write", "Close", "Query", "Set", "Delete",
    "Load", "Map", "Alloc", "Free", "Send", "Recv", "Connect", "Enum",
    "Lock", "Unlock", "Wait", "Notify",
)
_OBJECTS = (
    "File", "Key", "Process", "Thread", "Section", "Event", "Mutant", "Port",
    "Token", "Socket", "Pipe", "Region", "Timer", "Value", "Module", "Page",
    "Handle", "Device", "Window", "Buffer",
)

_MASK = (1 << 64) - 1


class Lcg:
    """64-bit linear congruential generator (top 31 bits used)."""

    def __init__(self, seed: int):
        self.state = (seed * 2862933555777941757 + 3037000493) & _MASK

    def below(self, n: int) -> int:
        self.state = (self.state * 6364136223846793005 + 1442695040888963407) & _MASK
        return (self.state >> 33) % n

    def range(self, lo: int, hi: int) -> int:
        """Uniform in the inclusive range [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def make_names(n: int) -> list[str]:
    """n distinct plausible API-call names, deterministically enumerated."""
    base = ["".join(parts) for parts in itertools.product(_PREFIXES, _VERBS, _OBJECTS)]
    out = []
    for i in range(n):
        if i < len(base):
            out.append(base[i])
        else:
            out.append(base[i % len(base)] + str(i // len(base)))
    return out


def make_cluster(
    seed: int,
    n_traces: int,
    n_calls: int,
    n_motifs: int,
    n_common: int,
    motif_max: int = 8,
    trace_len: tuple[int, int] = (400, 700),
    pct_common: int = 45,
    pct_any: int = 35,
    pct_repeat: int = 30,
    repeat_max: int = 3,
    cover_all: bool = False,
) -> tuple[list[list[str]], list[str]]:
    """Grow a cluster of traces sharing a motif library.

    Each trace draws motifs — mostly from a small "common" pool so structure
    repeats across traces — occasionally repeating one back-to-back, with
    uniform single-call noise in between.  cover_all appends any never-drawn
    call once at the end, guaranteeing the whole alphabet is interned.
    """
    rng = Lcg(seed)
    names = make_names(n_calls)

    ids = list(range(n_calls))
    rng.shuffle(ids)
    motifs = []
    pos = 0
    while len(motifs) < n_motifs:
        length = rng.range(2, motif_max)
        if pos + length > n_calls:
            pos = 0
            rng.shuffle(ids)
        motifs.append(tuple(ids[pos : pos + length]))
        pos += length

    traces = []
    used = set()
    for _ in range(n_traces):
        target = rng.range(*trace_len)
        seq: list[int] = []
        while len(seq) < target:
            roll = rng.below(100)
            if roll < pct_common:
                motif = motifs[rng.below(n_common)]
            elif roll < pct_common + pct_any:
                motif = motifs[rng.below(n_motifs)]
            else:
                cid = rng.below(n_calls)
                seq.append(cid)
                used.add(cid)
                continue
            reps = rng.range(2, repeat_max) if rng.below(100) < pct_repeat else 1
            for _ in range(reps):
                seq.extend(motif)
            used.update(motif)
        traces.append(seq)

    if cover_all:
        missing = [cid for cid in range(n_calls) if cid not in used]
        for i, cid in enumerate(missing):
            traces[i % n_traces].append(cid)

    named = [[names[cid] for cid in seq] for seq in traces]
    trace_names = ["sample%02d" % i for i in range(n_traces)]
    return named, trace_names


# The study-scale cluster: 16 samples whose inferred grammar has exactly
# 794 rules.  The seed below was pinned by scanning seeds under these
# parameters until the inference produced that rule count; the regression
# suite asserts it still does.
STUDY_SEED = 75


def study_cluster() -> tuple[list[list[str]], list[str]]:
    return make_cluster(
        seed=STUDY_SEED,
        n_traces=16,
        n_calls=660,
        n_motifs=440,
        n_common=100,
        trace_len=(1250, 1750),
        pct_common=30,
        pct_any=45,
    )


# The stress-scale cluster: matches the largest documented deployment,
# at least 7278 rules over at least 8078 distinct calls.
SCALE_SEED = 7


def scale_cluster() -> tuple[list[list[str]], list[str]]:
    return make_cluster(
        seed=SCALE_SEED,
        n_traces=16,
        n_calls=8500,
        n_motifs=3400,
        n_common=650,
        trace_len=(24000, 32000),
        pct_common=30,
        pct_any=45,
        cover_all=True,
    )


def write_cluster(traces: list[list[str]], names: list[str], dest: str) -> str:
    """Write trace files plus a manifest under dest; returns the manifest path."""
    os.makedirs(dest, exist_ok=True)
    manifest_lines = []
    for seq, name in zip(traces, names):
        fname = name + ".trace"
        with open(os.path.join(dest, fname), "w", encoding="utf-8") as fh:
            fh.write("\n".join(seq) + "\n")
        manifest_lines.append(fname)
    manifest = os.path.join(dest, "cluster.manifest")
    with open(manifest, "w", encoding="utf-8") as fh:
        fh.write("\n".join(manifest_lines) + "\n")
    return manifest
