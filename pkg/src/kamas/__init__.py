"""Grammar-based behavior analysis for clustered malware call traces.

Pipeline: parse traces into a cluster document, infer a context-free
grammar over the concatenated call stream, analyze the rules (occurrence,
distribution, repeats), classify them against a curated knowledge base,
and explore the result through filters, a CLI, and a wire API.

The web layer lives in :mod:`kamas.api` (``create_app``) and is imported
separately so the analysis core stays usable without it.
"""

from .errors import (
    ConflictError,
    FilterError,
    InputError,
    IntegrityError,
    KamasError,
    NotFoundError,
    ParseError,
    PreconditionError,
)
from .model import (
    CallTable,
    ClusterDocument,
    TraceMeta,
    build_cluster_stream,
    parse_trace,
    read_manifest,
)
from .grammar import (
    Grammar,
    Ref,
    derivation_counts,
    expand,
    infer_grammar,
    read_grammar_file,
    read_grammar_text,
    validate,
    write_grammar_file,
    write_grammar_text,
)
from .analytics import (
    Histogram,
    RuleRecord,
    build_rule_table,
    classify_records,
    equal_distribution,
    fingerprint,
    histogram,
    rules_to_csv,
)
from .patterns import RepeatPattern, find_repeats
from .kdb import KnowledgeBase, KnowledgeState
from .filters import CallFilterState, RuleFilterState, filter_calls, filter_rules
from .gateway import Session

__version__ = "0.1.0"

__all__ = [
    "KamasError", "InputError", "ParseError", "IntegrityError",
    "NotFoundError", "ConflictError", "PreconditionError", "FilterError",
    "CallTable", "ClusterDocument", "TraceMeta",
    "parse_trace", "build_cluster_stream", "read_manifest",
    "Grammar", "Ref", "infer_grammar", "expand", "derivation_counts",
    "validate", "read_grammar_file", "read_grammar_text",
    "write_grammar_file", "write_grammar_text",
    "RuleRecord", "Histogram", "build_rule_table", "classify_records",
    "fingerprint", "equal_distribution", "histogram", "rules_to_csv",
    "RepeatPattern", "find_repeats",
    "KnowledgeBase", "KnowledgeState",
    "CallFilterState", "RuleFilterState", "filter_calls", "filter_rules",
    "Session",
    "__version__",
]
