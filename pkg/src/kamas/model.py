"""Trace ingestion and the shared document model.

A cluster document bundles everything later stages work on: the interned
call table, per-trace metadata, and the single concatenated id stream that
grammar inference consumes.  Trace boundaries are marked with sentinel ids
that occur exactly once each, so no repeated pattern can cross a boundary.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NotFoundError, ParseError

PARAM_SEP = "#"


class CallTable:
    """Bidirectional mapping between call names and dense integer ids.

    Ids are handed out in first-seen order starting at 0 and are stable for
    the lifetime of the document.
    """

    def __init__(self):
        self._ids = {}
        self._names = []

    def __len__(self):
        return len(self._names)

    def __contains__(self, name):
        return name in self._ids

    def intern(self, name: str) -> int:
        if not name:
            raise InputError("call name must be non-empty")
        cid = self._ids.get(name)
        if cid is None:
            cid = len(self._names)
            self._ids[name] = cid
            self._names.append(name)
        return cid

    def id_of(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise NotFoundError("unknown call name: %r" % name) from None

    def name_of(self, cid: int) -> str:
        if 0 <= cid < len(self._names):
            return self._names[cid]
        raise NotFoundError("unknown call id: %d" % cid)

    def names(self) -> list[str]:
        return list(self._names)


@dataclass
class TraceMeta:
    """Where one trace sits inside the concatenated stream."""

    index: int
    name: str
    start: int  # first stream position of this trace
    end: int    # one past the last position; sentinels live outside spans

    @property
    def length(self) -> int:
        return self.end - self.start


@dataclass
class ClusterDocument:
    """A loaded trace cluster, before or after grammar inference."""

    calls: CallTable
    traces: list[TraceMeta]
    stream: np.ndarray            # int64 ids, calls then per-boundary sentinels
    sentinel_base: int            # ids >= this are boundary sentinels
    call_occurrence: np.ndarray   # stream count per call id
    grammar: object = None        # filled in by grammar inference
    rules: list = field(default_factory=list)  # RuleRecord table

    @property
    def sample_count(self) -> int:
        return len(self.traces)

    def occurrence_total(self, cid: int) -> int:
        if not 0 <= cid < self.sentinel_base:
            raise NotFoundError("unknown call id: %d" % cid)
        return int(self.call_occurrence[cid])


def parse_trace(text: str, keep_params: bool = False) -> list[str]:
    """Split raw trace text into a list of call names, one call per line.

    Arguments recorded behind the ``#`` separator are dropped unless
    *keep_params* is set.  Blank lines are skipped.  A line that yields an
    empty or whitespace-containing name raises ParseError with its line
    number; names must be single tokens so the grammar file format stays
    unambiguous.
    """
    calls = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        name = line if keep_params else line.split(PARAM_SEP, 1)[0]
        if not name:
            raise ParseError("call name empty after removing parameters", line=lineno)
        if any(ch.isspace() for ch in name):
            raise ParseError("call name contains whitespace: %r" % name, line=lineno)
        calls.append(name)
    return calls


def build_cluster_stream(traces: list[list[str]], names: list[str] | None = None) -> ClusterDocument:
    """Intern all calls and concatenate traces into one sentinel-separated stream.

    Call ids are assigned first (0..C-1, in first-seen order across traces),
    then one fresh sentinel id per boundary (C..C+T-2).  Each sentinel occurs
    exactly once, so no digram containing one can repeat and inferred rules
    can never span two traces.
    """
    if not traces:
        raise InputError("need at least one trace")
    for i, t in enumerate(traces):
        if not t:
            raise InputError("trace %d is empty" % i)
    if names is None:
        names = ["trace%d" % i for i in range(len(traces))]
    if len(names) != len(traces):
        raise InputError("got %d names for %d traces" % (len(names), len(traces)))

    table = CallTable()
    id_traces = [[table.intern(c) for c in t] for t in traces]

    base = len(table)
    stream = []
    metas = []
    for i, ids in enumerate(id_traces):
        if i > 0:
            stream.append(base + i - 1)  # sentinel between trace i-1 and i
        start = len(stream)
        stream.extend(ids)
        metas.append(TraceMeta(index=i, name=names[i], start=start, end=len(stream)))

    arr = np.asarray(stream, dtype=np.int64)
    occ = np.bincount(arr[arr < base], minlength=base)
    return ClusterDocument(
        calls=table,
        traces=metas,
        stream=arr,
        sentinel_base=base,
        call_occurrence=occ.astype(np.int64),
    )


def read_manifest(path: str) -> tuple[list[list[str]], list[str]]:
    """Load a cluster manifest: one trace-file path per line, in trace order.

    Paths are resolved relative to the manifest's directory.  Blank lines and
    lines starting with ``#`` are skipped.  Returns (traces, names) ready for
    build_cluster_stream; the trace name is the file's stem.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return read_manifest_text(text, os.path.dirname(os.path.abspath(path)))


def read_manifest_text(text: str, root: str) -> tuple[list[list[str]], list[str]]:
    """read_manifest over manifest content, resolving paths against root."""
    lines = text.splitlines()
    traces = []
    names = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tpath = line if os.path.isabs(line) else os.path.join(root, line)
        try:
            with open(tpath, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError("cannot read trace file %r: %s" % (line, exc), line=lineno)
        traces.append(parse_trace(text))
        names.append(os.path.splitext(os.path.basename(tpath))[0])
    if not traces:
        raise ParseError("manifest lists no trace files")
    return traces, names
