"""The knowledge base: a tree of categorized call patterns.

Externalized analyst knowledge lives in a forest of labeled nodes; each
node holds rules, which are call-name sequences tagged malicious or benign.
A rule takes part in matching only while its node and every ancestor are
active.  Loaded documents are classified against the active rules: a
grammar rule whose call sequence equals a known pattern is fully known, one
that merely contains a known pattern as a contiguous part is partially
known.  Matching is by name, so one base applies to any document.
"""

from __future__ import annotations

import enum
import json
import os
import time
from dataclasses import dataclass, field

from .errors import ConflictError, InputError, NotFoundError, ParseError

MALICIOUS = "malicious"
BENIGN = "benign"


class KnowledgeState(enum.IntEnum):
    """How much of a grammar rule is covered by active knowledge."""

    NOT_KNOWN = 0
    PARTIALLY_KNOWN = 1
    FULLY_KNOWN = 2

    @property
    def wire(self) -> str:
        return self.name.lower()

    @classmethod
    def from_wire(cls, text: str) -> "KnowledgeState":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise InputError("unknown knowledge state %r" % text) from None


@dataclass
class KdbRule:
    """One known call pattern."""

    rule_id: int
    calls: tuple[str, ...]
    polarity: str  # MALICIOUS or BENIGN
    created: str   # ISO-8601 UTC


@dataclass
class KdbNode:
    """A category in the tree; owns rules and child categories."""

    node_id: int
    label: str
    active: bool = True
    children: list["KdbNode"] = field(default_factory=list)
    rules: list[KdbRule] = field(default_factory=list)


def _now_iso() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


class KnowledgeBase:
    """The tree plus id bookkeeping, matching and persistence."""

    def __init__(self):
        self.roots: list[KdbNode] = []
        self._next_node = 1
        self._next_rule = 1

    @classmethod
    def with_default_schema(cls) -> "KnowledgeBase":
        """A fresh base with one root to drop rules into."""
        kb = cls()
        kb.add_node("behavior")
        return kb

    # -- tree structure -------------------------------------------------

    def add_node(self, label: str, parent_id: int | None = None) -> KdbNode:
        if not label or not label.strip():
            raise InputError("node label must be non-empty")
        parent = self.node(parent_id) if parent_id is not None else None
        node = KdbNode(node_id=self._next_node, label=label)
        self._next_node += 1
        if parent is None:
            self.roots.append(node)
        else:
            parent.children.append(node)
        return node

    def node(self, node_id: int) -> KdbNode:
        for node, _ in self.walk():
            if node.node_id == node_id:
                return node
        raise NotFoundError("no knowledge node %d" % node_id)

    def walk(self):
        """Yield (node, ancestors) over the whole forest, depth first."""
        stack = [(n, ()) for n in reversed(self.roots)]
        while stack:
            node, anc = stack.pop()
            yield node, anc
            for child in reversed(node.children):
                stack.append((child, anc + (node,)))

    def set_active(self, node_id: int, active: bool) -> KdbNode:
        node = self.node(node_id)
        node.active = bool(active)
        return node

    def subtree_counts(self) -> dict[int, int]:
        """Rules per node including everything below, active or not."""
        counts = {}

        def visit(node):
            total = len(node.rules)
            for child in node.children:
                total += visit(child)
            counts[node.node_id] = total
            return total

        for root in self.roots:
            visit(root)
        return counts

    # -- rules ----------------------------------------------------------

    def add_rule(self, node_id: int, calls, polarity: str, created: str | None = None) -> KdbRule:
        """Attach a call pattern to a node.

        The same sequence may appear under different nodes, but within one
        node a duplicate is a conflict.
        """
        calls = tuple(calls)
        if not calls:
            raise InputError("a knowledge rule needs at least one call")
        for c in calls:
            if not c or any(ch.isspace() for ch in c):
                raise InputError("bad call name %r in knowledge rule" % c)
        if polarity not in (MALICIOUS, BENIGN):
            raise InputError("polarity must be %r or %r" % (MALICIOUS, BENIGN))
        node = self.node(node_id)
        for r in node.rules:
            if r.calls == calls:
                raise ConflictError(
                    "pattern already stored as rule %d under node %d"
                    % (r.rule_id, node.node_id)
                )
        rule = KdbRule(
            rule_id=self._next_rule,
            calls=calls,
            polarity=polarity,
            created=created or _now_iso(),
        )
        self._next_rule += 1
        node.rules.append(rule)
        return rule

    def remove_rule(self, rule_id: int) -> KdbRule:
        for node, _ in self.walk():
            for i, r in enumerate(node.rules):
                if r.rule_id == rule_id:
                    return node.rules.pop(i)
        raise NotFoundError("no knowledge rule %d" % rule_id)

    def find_rule(self, rule_id: int) -> tuple[KdbNode, KdbRule]:
        for node, _ in self.walk():
            for r in node.rules:
                if r.rule_id == rule_id:
                    return node, r
        raise NotFoundError("no knowledge rule %d" % rule_id)

    def active_rules(self) -> list[KdbRule]:
        """Rules whose node and all of its ancestors are active."""
        out = []
        for node, anc in self.walk():
            if node.active and all(a.active for a in anc):
                out.extend(node.rules)
        return out

    # -- classification ---------------------------------------------------

    def classify(self, expansion) -> KnowledgeState:
        """State of one call-name sequence against the active rules.

        Exact equality with any active pattern wins; otherwise an active
        pattern occurring as a contiguous part grades it partially known.
        """
        exp = tuple(expansion)
        if not exp:
            raise InputError("expansion must be non-empty")
        best = KnowledgeState.NOT_KNOWN
        for rule in self.active_rules():
            if rule.calls == exp:
                return KnowledgeState.FULLY_KNOWN
            if best is KnowledgeState.NOT_KNOWN and len(rule.calls) < len(exp) \
                    and _contains(exp, rule.calls):
                best = KnowledgeState.PARTIALLY_KNOWN
        return best

    def classify_many(self, call_table, expansions) -> list[KnowledgeState]:
        """Batch classify interned-id expansions of one document.

        Semantically identical to classify() after translating ids to
        names; patterns that use names the document never interned can
        match nothing and are skipped up front.
        """
        exact = set()
        subs = set()
        for rule in self.active_rules():
            ids = []
            for name in rule.calls:
                if name not in call_table:
                    ids = None
                    break
                ids.append(call_table.id_of(name))
            if ids is None:
                continue
            ids = tuple(ids)
            exact.add(ids)
            subs.add(ids)

        out = []
        for exp in expansions:
            exp = tuple(exp)
            if exp in exact:
                out.append(KnowledgeState.FULLY_KNOWN)
                continue
            state = KnowledgeState.NOT_KNOWN
            for pat in subs:
                if len(pat) < len(exp) and _contains(exp, pat):
                    state = KnowledgeState.PARTIALLY_KNOWN
                    break
            out.append(state)
        return out

    def classify_with_polarity(self, call_table, expansions):
        """Like classify_many, but paired with the best match's polarity.

        The best match is the exact-equality rule if any, else the first
        containing rule in tree order; None when nothing matches.  The UI
        crosses this with the state for its diverging color scale.
        """
        exact = {}
        ordered = []
        for rule in self.active_rules():
            ids = []
            for name in rule.calls:
                if name not in call_table:
                    ids = None
                    break
                ids.append(call_table.id_of(name))
            if ids is None:
                continue
            ids = tuple(ids)
            if ids not in exact:
                exact[ids] = rule.polarity
            ordered.append((ids, rule.polarity))

        out = []
        for exp in expansions:
            exp = tuple(exp)
            hit = exact.get(exp)
            if hit is not None:
                out.append((KnowledgeState.FULLY_KNOWN, hit))
                continue
            found = None
            for pat, pol in ordered:
                if len(pat) < len(exp) and _contains(exp, pat):
                    found = pol
                    break
            if found is None:
                out.append((KnowledgeState.NOT_KNOWN, None))
            else:
                out.append((KnowledgeState.PARTIALLY_KNOWN, found))
        return out

    # -- persistence ------------------------------------------------------

    def to_obj(self) -> dict:
        def node_obj(node):
            return {
                "id": node.node_id,
                "label": node.label,
                "active": node.active,
                "rules": [
                    {
                        "id": r.rule_id,
                        "calls": list(r.calls),
                        "polarity": r.polarity,
                        "created": r.created,
                    }
                    for r in node.rules
                ],
                "children": [node_obj(c) for c in node.children],
            }

        return {"version": 1, "tree": [node_obj(n) for n in self.roots]}

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), indent=2, ensure_ascii=False) + "\n"

    def save(self, path: str) -> None:
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())
        os.replace(tmp, path)

    @classmethod
    def from_json(cls, text: str) -> "KnowledgeBase":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError("knowledge base is not valid JSON: %s" % exc)
        if not isinstance(doc, dict) or doc.get("version") != 1:
            raise ParseError("unsupported knowledge base version %r" % (
                doc.get("version") if isinstance(doc, dict) else None))
        if not isinstance(doc.get("tree"), list):
            raise ParseError("knowledge base has no tree list")

        kb = cls()
        seen_nodes = set()
        seen_rules = set()

        def parse_node(obj):
            if not isinstance(obj, dict):
                raise ParseError("tree entries must be objects")
            try:
                nid = int(obj["id"])
                label = str(obj["label"])
            except (KeyError, TypeError, ValueError):
                raise ParseError("node needs an integer id and a label") from None
            if nid in seen_nodes:
                raise ParseError("duplicate node id %d" % nid)
            seen_nodes.add(nid)
            node = KdbNode(node_id=nid, label=label, active=bool(obj.get("active", True)))
            patterns_here = set()
            for robj in obj.get("rules", []):
                try:
                    rid = int(robj["id"])
                    calls = tuple(str(c) for c in robj["calls"])
                    polarity = str(robj["polarity"])
                    created = str(robj.get("created", _now_iso()))
                except (KeyError, TypeError, ValueError):
                    raise ParseError("malformed rule under node %d" % nid) from None
                if rid in seen_rules:
                    raise ParseError("duplicate rule id %d" % rid)
                if not calls:
                    raise ParseError("rule %d has no calls" % rid)
                if polarity not in (MALICIOUS, BENIGN):
                    raise ParseError("rule %d has polarity %r" % (rid, polarity))
                if calls in patterns_here:
                    raise ParseError("pattern of rule %d appears twice in node %d" % (rid, nid))
                seen_rules.add(rid)
                patterns_here.add(calls)
                node.rules.append(
                    KdbRule(rule_id=rid, calls=calls, polarity=polarity, created=created)
                )
            for cobj in obj.get("children", []):
                node.children.append(parse_node(cobj))
            return node

        for obj in doc["tree"]:
            kb.roots.append(parse_node(obj))
        kb._next_node = max(seen_nodes, default=0) + 1
        kb._next_rule = max(seen_rules, default=0) + 1
        return kb

    @classmethod
    def load(cls, path: str) -> "KnowledgeBase":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def _contains(haystack: tuple, needle: tuple) -> bool:
    """Contiguous subsequence test."""
    n = len(needle)
    if n == 0 or n > len(haystack):
        return False
    first = needle[0]
    for i in range(len(haystack) - n + 1):
        if haystack[i] == first and haystack[i:i + n] == needle:
            return True
    return False
