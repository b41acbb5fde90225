"""Repeated contiguous patterns inside one rule expansion.

The detail view highlights the few largest internal repeats of a rule.  A
candidate is any subsequence of length two or more that occurs at least
twice under a greedy left-to-right, non-overlapping scan.  Candidates that
are merely windows of a longer candidate occurring at the very same spots
are dropped, then the survivors are ranked by length, count and first
position, and only the top k remain.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError


@dataclass(frozen=True)
class RepeatPattern:
    """One repeated subsequence and where its counted occurrences start."""

    subsequence: tuple[int, ...]
    occurrences: tuple[int, ...]   # ascending, pairwise non-overlapping

    @property
    def count(self) -> int:
        return len(self.occurrences)


def _greedy_positions(raw_positions, length):
    """Non-overlapping occurrence starts, scanning left to right."""
    out = []
    limit = -1
    for p in raw_positions:
        if p >= limit:
            out.append(p)
            limit = p + length
    return out


def find_repeats(expansion, k: int = 5) -> list[RepeatPattern]:
    """The k largest repeated subsequences of an expansion.

    Expansions shorter than four symbols cannot hold two copies of a
    two-symbol pattern, so they yield nothing.  Ranking: longer first, more
    occurrences first, earlier first occurrence first; that order has no
    ties because equal length and first position forces equal content.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    seq = tuple(expansion)
    n = len(seq)
    if n < 4:
        return []

    # distinct windows per length, stopping at the first length that no
    # longer repeats anywhere (longer ones then cannot either)
    candidates = []  # (length, window, greedy positions)
    for m in range(2, n // 2 + 1):
        raw = {}
        for i in range(n - m + 1):
            raw.setdefault(seq[i:i + m], []).append(i)
        repeated = False
        for window, positions in raw.items():
            if len(positions) < 2:
                continue
            repeated = True
            greedy = _greedy_positions(positions, m)
            if len(greedy) >= 2:
                candidates.append((m, window, greedy))
        if not repeated:
            break

    # a window of a longer candidate repeating at exactly the same spots
    # (same count, in step) carries no information of its own; matching
    # counts let the shift offset be read off the first occurrences
    by_count = {}
    for cand in candidates:
        by_count.setdefault(len(cand[2]), []).append(cand)
    survivors = []
    for group in by_count.values():
        group.sort(key=lambda c: -c[0])
        for i, (m, window, pos) in enumerate(group):
            suppressed = False
            for m2, window2, pos2 in group[:i]:
                if m2 == m:
                    continue
                o = pos[0] - pos2[0]
                if 0 <= o <= m2 - m and window2[o:o + m] == window \
                        and all(p == q + o for p, q in zip(pos, pos2)):
                    suppressed = True
                    break
            if not suppressed:
                survivors.append((m, window, pos))

    survivors.sort(key=lambda c: (-c[0], -len(c[2]), c[2][0]))
    return [
        RepeatPattern(subsequence=window, occurrences=tuple(pos))
        for m, window, pos in survivors[:k]
    ]
