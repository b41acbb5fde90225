"""Hot kernels: grammar inference and the derivation walk.

Each kernel is written once as a plain Python function over numpy arrays and
compiled with numba at import time when that is possible.  Three names are
exported per kernel: ``*_py`` (always the interpreted original), ``*_jit``
(compiled, or None when numba is unavailable), and the bare name, which is
whichever of the two the package selected.  Setting the environment variable
``KAMAS_NO_NUMBA`` to anything but ``0`` forces the interpreted path.

The inference kernel keeps the grammar in flat int64 arrays: ``val``/``nxt``/
``prv`` form doubly linked circular symbol lists, one per rule, closed by a
guard node.  Symbol encoding: a terminal id t is stored as t, a reference to
rule r as -(2r + 2), the guard of rule r as -(2r + 1).  Freed nodes are
stamped with FREED and never reused, which keeps stale work-stack entries
detectable.
"""

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

USING_NUMBA = HAVE_NUMBA and os.environ.get("KAMAS_NO_NUMBA", "0") == "0"

FREED = -(2 ** 62)


def _sequitur_impl(stream, cap_mult):
    """Online digram-replacement inference over a terminal id stream.

    Returns (rule_ids, offsets, tokens, overflow).  rule_ids are creation
    ids of surviving rules in ascending order (the start rule is id 0);
    rule k's body is tokens[offsets[k]:offsets[k+1]], with terminals >= 0
    and a reference to creation id r stored as -(r + 1).  overflow is 1
    when preallocated capacity ran out; callers retry with a larger
    cap_mult and must discard the other outputs.
    """
    n = stream.shape[0]
    cap = cap_mult * n + 32
    val = np.full(cap, FREED, np.int64)
    nxt = np.full(cap, -1, np.int64)
    prv = np.full(cap, -1, np.int64)
    # creation ids are never reused, so the id space must cover total
    # creations, not live rules; every creation allocates >= 3 nodes
    max_rules = cap // 3 + 8
    rule_guard = np.full(max_rules, -1, np.int64)
    rule_refs = np.zeros(max_rules, np.int64)
    stack = np.empty(cap, np.int64)
    # counters: 0 next unused node, 1 rule count, 2 stack top, 3 overflow
    cnt = np.zeros(4, np.int64)
    scratch = cap - 1

    index = {(np.int64(-9), np.int64(-9)): np.int64(-9)}
    del index[(np.int64(-9), np.int64(-9))]

    def is_guard(v):
        return v < 0 and v != FREED and ((-v) & 1) == 1

    def is_ref(v):
        return v < 0 and v != FREED and ((-v) & 1) == 0

    def ref_rule(v):
        return (-v - 2) // 2

    def alloc(v):
        node = cnt[0]
        if node >= scratch:
            cnt[3] = 1
            return scratch
        cnt[0] = node + 1
        val[node] = v
        nxt[node] = -1
        prv[node] = -1
        return node

    def push(x):
        t = cnt[2]
        if t >= cap:
            cnt[3] = 1
            return
        stack[t] = x
        cnt[2] = t + 1

    def delete_digram(s):
        # drop the index entry for the digram starting at s, if it is s's
        t = nxt[s]
        if t < 0:
            return
        vs = val[s]
        vt = val[t]
        if is_guard(vs) or is_guard(vt):
            return
        k = (vs, vt)
        if k in index and index[k] == s:
            del index[k]

    def join(l, r):
        # relink l -> r; keeps the index consistent across the splice
        if nxt[l] >= 0:
            delete_digram(l)
            # runs of one symbol share nodes between overlapping digrams, so
            # the entry must be moved onto a survivor before relinking
            rp = prv[r]
            rn = nxt[r]
            if rp >= 0 and rn >= 0 and val[r] == val[rp] and val[r] == val[rn]:
                index[(val[r], val[rn])] = r
            lp = prv[l]
            ln = nxt[l]
            if lp >= 0 and ln >= 0 and val[l] == val[ln] and val[l] == val[lp]:
                index[(val[lp], val[l])] = lp
        nxt[l] = r
        prv[r] = l

    def insert_after(q, s):
        join(s, nxt[q])
        join(q, s)

    def delete_node(s):
        join(prv[s], nxt[s])
        v = val[s]
        if not is_guard(v):
            delete_digram(s)
            if is_ref(v):
                rule_refs[ref_rule(v)] -= 1
        val[s] = FREED
        nxt[s] = -1
        prv[s] = -1

    def substitute(s, r):
        # replace the digram starting at s with one reference to rule r
        q = prv[s]
        delete_node(s)
        delete_node(nxt[q])
        m = alloc(-(2 * r + 2))
        rule_refs[r] += 1
        insert_after(q, m)
        push(m)
        push(q)

    def expand_sole(b):
        # rule down to one use: splice its body over that last reference
        r = ref_rule(val[b])
        g = rule_guard[r]
        f = nxt[g]
        l = prv[g]
        left = prv[b]
        right = nxt[b]
        delete_digram(b)
        join(left, f)
        join(l, right)
        val[b] = FREED
        nxt[b] = -1
        prv[b] = -1
        val[g] = FREED
        nxt[g] = -1
        prv[g] = -1
        rule_guard[r] = -1
        rule_refs[r] = 0
        push(l)
        push(left)

    def do_match(x, m):
        # two non-overlapping occurrences of one digram: rewrite both
        pm = prv[m]
        mn = nxt[m]
        nn = nxt[mn]
        if is_guard(val[pm]) and is_guard(val[nn]):
            r = (-val[pm] - 1) // 2
            substitute(x, r)
        else:
            r = cnt[1]
            if r >= max_rules:
                cnt[3] = 1
                return
            cnt[1] = r + 1
            g = alloc(-(2 * r + 1))
            nxt[g] = g
            prv[g] = g
            rule_guard[r] = g
            rule_refs[r] = 0
            v1 = val[m]
            v2 = val[mn]
            c1 = alloc(v1)
            c2 = alloc(v2)
            if is_ref(v1):
                rule_refs[ref_rule(v1)] += 1
            if is_ref(v2):
                rule_refs[ref_rule(v2)] += 1
            insert_after(g, c1)
            insert_after(c1, c2)
            substitute(m, r)
            substitute(x, r)
            index[(v1, v2)] = nxt[g]
        # usage of the digram's rules just dropped; inline any now used once
        g = rule_guard[r]
        b1 = nxt[g]
        if is_ref(val[b1]) and rule_refs[ref_rule(val[b1])] == 1:
            expand_sole(b1)
        b2 = prv[g]
        if b2 != b1 and is_ref(val[b2]) and rule_refs[ref_rule(val[b2])] == 1:
            expand_sole(b2)

    def check_site(x):
        # enforce digram uniqueness for the pair now starting at node x
        if x < 0 or val[x] == FREED:
            return
        y = nxt[x]
        if y < 0:
            return
        vx = val[x]
        vy = val[y]
        if is_guard(vx) or is_guard(vy):
            return
        k = (vx, vy)
        if k not in index:
            index[k] = x
            return
        m = index[k]
        if m == x:
            return
        if val[m] != vx or nxt[m] < 0 or val[nxt[m]] != vy:
            index[k] = x
            return
        if nxt[m] == x or nxt[x] == m:
            return
        do_match(x, m)

    g0 = alloc(np.int64(-1))
    nxt[g0] = g0
    prv[g0] = g0
    rule_guard[0] = g0
    cnt[1] = 1

    for i in range(n):
        t = alloc(stream[i])
        insert_after(prv[g0], t)
        push(prv[t])
        while cnt[2] > 0 and cnt[3] == 0:
            cnt[2] -= 1
            check_site(stack[cnt[2]])
        if cnt[3] != 0:
            break

    if cnt[3] != 0:
        return (
            np.empty(0, np.int64),
            np.zeros(1, np.int64),
            np.empty(0, np.int64),
            np.int64(1),
        )

    total = 0
    alive = 0
    for r in range(cnt[1]):
        g = rule_guard[r]
        if g < 0:
            continue
        alive += 1
        b = nxt[g]
        while b != g:
            total += 1
            b = nxt[b]
    out_ids = np.empty(alive, np.int64)
    out_off = np.zeros(alive + 1, np.int64)
    out_tok = np.empty(total, np.int64)
    k = 0
    pos = 0
    for r in range(cnt[1]):
        g = rule_guard[r]
        if g < 0:
            continue
        out_ids[k] = r
        b = nxt[g]
        while b != g:
            v = val[b]
            if v >= 0:
                out_tok[pos] = v
            else:
                out_tok[pos] = -((-v - 2) // 2 + 1)
            pos += 1
            b = nxt[b]
        k += 1
        out_off[k] = pos
    return out_ids, out_off, out_tok, np.int64(0)


def _walk_impl(tok, off, sentinel_base, n_traces):
    """Depth-first derivation walk of an acyclic grammar (start rule 0).

    tok/off hold flattened productions; a reference to the rule in slot s
    (0 <= s < len(off) - 1, NOT a creation id) is encoded as -(s + 1).
    Callers re-encode inference output accordingly; out-of-range slots are
    not checked here.  Returns (occurrence, per_trace, error): how often
    each rule occurs in the full derivation, the same split by the trace
    whose span contains each occurrence's start position, and 1 if the walk
    exceeded the depth a DAG permits (a cycle; results are then meaningless).
    """
    nr = off.shape[0] - 1
    occ = np.zeros(nr, np.int64)
    per = np.zeros((nr, n_traces), np.int64)
    fr = np.empty(nr + 2, np.int64)
    fi = np.empty(nr + 2, np.int64)
    depth = 0
    fr[0] = 0
    fi[0] = 0
    occ[0] = 1
    if n_traces > 0:
        per[0, 0] = 1
    trace = 0
    while depth >= 0:
        r = fr[depth]
        i = fi[depth]
        if i >= off[r + 1] - off[r]:
            depth -= 1
            continue
        fi[depth] = i + 1
        v = tok[off[r] + i]
        if v >= 0:
            if v >= sentinel_base:
                trace += 1
        else:
            s = -v - 1
            occ[s] += 1
            if trace < n_traces:
                per[s, trace] += 1
            depth += 1
            if depth >= nr + 2:
                return occ, per, np.int64(1)
            fr[depth] = s
            fi[depth] = 0
    return occ, per, np.int64(0)


sequitur_py = _sequitur_impl
walk_py = _walk_impl

if HAVE_NUMBA:
    sequitur_jit = njit(cache=True)(_sequitur_impl)
    walk_jit = njit(cache=True)(_walk_impl)
else:
    sequitur_jit = None
    walk_jit = None

if USING_NUMBA:
    sequitur = sequitur_jit
    walk = walk_jit
else:
    sequitur = sequitur_py
    walk = walk_py
