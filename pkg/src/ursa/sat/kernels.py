"""CDCL search kernels.

All solver state lives in a tuple of numpy arrays (see ``STATE_FIELDS``)
so the functions compile unchanged under numba.  Literals are encoded as
``2 * var + sign`` with 0-based variables; sign 1 means negated.

Watch lists are singly linked through the clauses: entry ``2 * c + w``
stands for clause ``c`` watching the literal at arena offset ``w`` (0 or
1) of that clause.  Moving a watch relinks the entry in O(1), so the
lists never need separate storage.
"""

import numpy as np

from ._accel import kernel

# scalar slots in ``st``
NV = 0
NCL = 1
ARENA = 2
QHEAD = 3
TRAIL = 4
DL = 5
OK = 6
HEAP = 7
NLEARNTS = 8
CONFLICTS = 9
DECISIONS = 10
PROPAGATIONS = 11
RESTARTS = 12
MAX_LEARNTS = 13
NASSUMP = 14
REDUCES = 15
LUBY_BASE = 16
NSCALARS = 17

# slots in ``fs``
VAR_INC = 0
CLA_INC = 1
VAR_DECAY = 2
CLA_DECAY = 3

# results
UNSAT = 0
SAT = 1
UNSAT_ASSUMPTIONS = 2
GROW = 3

STATE_FIELDS = (
    "st", "fs", "assigns", "level", "reason", "trail", "trail_lim", "activity",
    "polarity", "heap", "heap_pos", "seen", "watch_head", "wnext", "cl_start",
    "cl_len", "cl_learnt", "cl_act", "arena", "learnt_buf", "assumptions", "stack",
)


def new_state(nv, clause_cap, arena_cap):
    st = np.zeros(NSCALARS, np.int64)
    st[NV] = nv
    st[OK] = 1
    st[HEAP] = nv
    st[MAX_LEARNTS] = 10000
    st[LUBY_BASE] = 64
    fs = np.zeros(4, np.float64)
    fs[VAR_INC] = 1.0
    fs[CLA_INC] = 1.0
    fs[VAR_DECAY] = 0.95
    fs[CLA_DECAY] = 0.999
    n = max(nv, 1)
    return (
        st, fs,
        np.full(n, -1, np.int8),            # assigns
        np.zeros(n, np.int64),              # level
        np.full(n, -1, np.int64),           # reason
        np.zeros(n, np.int64),              # trail
        np.zeros(2 * n + 2, np.int64),      # trail_lim (assumption levels may be empty)
        np.zeros(n, np.float64),            # activity
        np.zeros(n, np.int8),               # polarity (saved phase)
        np.arange(n, dtype=np.int64),       # heap
        np.arange(n, dtype=np.int64),       # heap_pos
        np.zeros(n, np.int8),               # seen
        np.full(2 * n, -1, np.int64),       # watch_head
        np.full(2 * clause_cap, -1, np.int64),  # wnext
        np.zeros(clause_cap, np.int64),     # cl_start
        np.zeros(clause_cap, np.int64),     # cl_len
        np.zeros(clause_cap, np.int8),      # cl_learnt
        np.zeros(clause_cap, np.float64),   # cl_act
        np.zeros(arena_cap, np.int64),      # arena
        np.zeros(n + 1, np.int64),          # learnt_buf
        np.zeros(n + 1, np.int64),          # assumptions
        np.zeros(n + 1, np.int64),          # stack
    )


# -- small helpers ----------------------------------------------------------

@kernel
def lit_value(assigns, lit):
    a = assigns[lit >> 1]
    if a < 0:
        return -1
    return a ^ (lit & 1)


@kernel
def luby(y, x):
    size = 1
    seq = 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return y ** seq


@kernel
def heap_before(activity, a, b):
    return activity[a] > activity[b] or (activity[a] == activity[b] and a < b)


@kernel
def heap_up(heap, heap_pos, activity, i):
    v = heap[i]
    while i > 0:
        parent = (i - 1) >> 1
        u = heap[parent]
        if not heap_before(activity, v, u):
            break
        heap[i] = u
        heap_pos[u] = i
        i = parent
    heap[i] = v
    heap_pos[v] = i


@kernel
def heap_down(heap, heap_pos, activity, size, i):
    v = heap[i]
    while True:
        child = 2 * i + 1
        if child >= size:
            break
        if child + 1 < size and heap_before(activity, heap[child + 1], heap[child]):
            child += 1
        u = heap[child]
        if not heap_before(activity, u, v):
            break
        heap[i] = u
        heap_pos[u] = i
        i = child
    heap[i] = v
    heap_pos[v] = i


@kernel
def heap_insert(S, v):
    st = S[0]
    heap = S[9]
    heap_pos = S[10]
    if heap_pos[v] >= 0:
        return
    i = st[HEAP]
    heap[i] = v
    heap_pos[v] = i
    st[HEAP] = i + 1
    heap_up(heap, heap_pos, S[7], i)


@kernel
def heap_pop(S):
    st = S[0]
    heap = S[9]
    heap_pos = S[10]
    top = heap[0]
    size = st[HEAP] - 1
    st[HEAP] = size
    heap_pos[top] = -1
    if size > 0:
        last = heap[size]
        heap[0] = last
        heap_pos[last] = 0
        heap_down(heap, heap_pos, S[7], size, 0)
    return top


@kernel
def heapify(S):
    """Rebuild the heap from the variables currently in it."""
    st = S[0]
    heap = S[9]
    heap_pos = S[10]
    size = st[HEAP]
    for i in range(size):
        heap_pos[heap[i]] = i
    for i in range((size >> 1) - 1, -1, -1):
        heap_down(heap, heap_pos, S[7], size, i)


@kernel
def bump_var(S, v):
    fs = S[1]
    activity = S[7]
    heap_pos = S[10]
    activity[v] += fs[VAR_INC]
    if activity[v] > 1e100:
        nv = S[0][NV]
        for u in range(nv):
            activity[u] *= 1e-100
        fs[VAR_INC] *= 1e-100
    if heap_pos[v] >= 0:
        heap_up(S[9], heap_pos, activity, heap_pos[v])


@kernel
def bump_clause(S, c):
    fs = S[1]
    cl_act = S[17]
    cl_act[c] += fs[CLA_INC]
    if cl_act[c] > 1e20:
        ncl = S[0][NCL]
        cl_learnt = S[16]
        for d in range(ncl):
            if cl_learnt[d]:
                cl_act[d] *= 1e-20
        fs[CLA_INC] *= 1e-20


# -- trail ------------------------------------------------------------------

@kernel
def enqueue(S, lit, why):
    st = S[0]
    v = lit >> 1
    S[2][v] = 1 - (lit & 1)
    S[3][v] = st[DL]
    S[4][v] = why
    S[5][st[TRAIL]] = lit
    st[TRAIL] += 1


@kernel
def new_level(S):
    st = S[0]
    S[6][st[DL]] = st[TRAIL]
    st[DL] += 1


@kernel
def cancel_until(S, lvl):
    st = S[0]
    if st[DL] <= lvl:
        return
    assigns = S[2]
    reason = S[4]
    trail = S[5]
    polarity = S[8]
    stop = S[6][lvl]
    for i in range(st[TRAIL] - 1, stop - 1, -1):
        v = trail[i] >> 1
        polarity[v] = assigns[v]
        assigns[v] = -1
        reason[v] = -1
        heap_insert(S, v)
    st[TRAIL] = stop
    st[QHEAD] = stop
    st[DL] = lvl


# -- clauses ----------------------------------------------------------------

@kernel
def attach(S, c):
    watch_head = S[12]
    wnext = S[13]
    start = S[14][c]
    arena = S[18]
    for w in range(2):
        lit = arena[start + w]
        e = 2 * c + w
        wnext[e] = watch_head[lit]
        watch_head[lit] = e


@kernel
def store_clause(S, lits, n, learnt):
    """Append a clause of ``n >= 2`` literals and watch its first two."""
    st = S[0]
    c = st[NCL]
    start = st[ARENA]
    arena = S[18]
    for i in range(n):
        arena[start + i] = lits[i]
    S[14][c] = start
    S[15][c] = n
    S[16][c] = learnt
    S[17][c] = 0.0
    st[ARENA] = start + n
    st[NCL] = c + 1
    if learnt:
        st[NLEARNTS] += 1
    attach(S, c)
    return c


@kernel
def add_clauses(S, flat, offsets):
    """Add clauses at decision level 0 (DIMACS literals, 1-based).

    Literals false at level 0 are dropped and clauses already satisfied at
    level 0 are skipped.  Returns the number of clauses stored.
    """
    st = S[0]
    cancel_until(S, 0)
    assigns = S[2]
    seen = S[11]
    buf = S[19]
    stored = 0
    for k in range(offsets.shape[0] - 1):
        if st[OK] == 0:
            break
        n = 0
        satisfied = False
        for j in range(offsets[k], offsets[k + 1]):
            x = flat[j]
            lit = 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1
            val = lit_value(assigns, lit)
            if val == 1:
                satisfied = True
                break
            if val == 0:
                continue
            mark = 1 + (lit & 1)
            s = seen[lit >> 1]
            if s == mark:
                continue
            if s != 0:
                satisfied = True  # tautology
                break
            seen[lit >> 1] = mark
            buf[n] = lit
            n += 1
        for j in range(n):
            seen[buf[j] >> 1] = 0
        # clear marks also on the early-exit paths
        for j in range(offsets[k], offsets[k + 1]):
            x = flat[j]
            seen[(x - 1) if x > 0 else (-x - 1)] = 0
        if satisfied:
            continue
        if n == 0:
            st[OK] = 0
        elif n == 1:
            enqueue(S, buf[0], -1)
            if propagate(S) >= 0:
                st[OK] = 0
        else:
            store_clause(S, buf, n, 0)
            stored += 1
    return stored


# -- propagation and analysis -----------------------------------------------

@kernel
def propagate(S):
    """Unit propagation; returns a conflicting clause index or -1."""
    st = S[0]
    assigns = S[2]
    trail = S[5]
    watch_head = S[12]
    wnext = S[13]
    cl_start = S[14]
    cl_len = S[15]
    arena = S[18]
    while st[QHEAD] < st[TRAIL]:
        p = trail[st[QHEAD]]
        st[QHEAD] += 1
        st[PROPAGATIONS] += 1
        false_lit = p ^ 1
        prev = -1
        e = watch_head[false_lit]
        while e != -1:
            nxt = wnext[e]
            c = e >> 1
            w = e & 1
            start = cl_start[c]
            other = arena[start + 1 - w]
            if lit_value(assigns, other) == 1:
                prev = e
                e = nxt
                continue
            moved = False
            for k in range(start + 2, start + cl_len[c]):
                cand = arena[k]
                if lit_value(assigns, cand) != 0:
                    arena[k] = arena[start + w]
                    arena[start + w] = cand
                    if prev == -1:
                        watch_head[false_lit] = nxt
                    else:
                        wnext[prev] = nxt
                    wnext[e] = watch_head[cand]
                    watch_head[cand] = e
                    moved = True
                    break
            if moved:
                e = nxt
                continue
            prev = e
            if lit_value(assigns, other) == 0:
                st[QHEAD] = st[TRAIL]
                return c
            enqueue(S, other, c)
            e = nxt
    return -1


@kernel
def analyze(S, confl):
    """First-UIP learning.  Writes the clause to ``learnt_buf`` (asserting
    literal first, a literal of the backjump level second) and returns
    ``(length, backjump level)``.
    """
    st = S[0]
    level = S[3]
    reason = S[4]
    trail = S[5]
    seen = S[11]
    cl_start = S[14]
    cl_len = S[15]
    cl_learnt = S[16]
    arena = S[18]
    out = S[19]
    stack = S[21]
    dl = st[DL]
    path = 0
    n = 1
    p_var = -1
    p = -1
    idx = st[TRAIL] - 1
    while True:
        if cl_learnt[confl]:
            bump_clause(S, confl)
        start = cl_start[confl]
        for j in range(start, start + cl_len[confl]):
            q = arena[j]
            v = q >> 1
            if v == p_var or seen[v] or level[v] == 0:
                continue
            bump_var(S, v)
            seen[v] = 1
            if level[v] >= dl:
                path += 1
            else:
                out[n] = q
                n += 1
        while not seen[trail[idx] >> 1]:
            idx -= 1
        p = trail[idx]
        p_var = p >> 1
        idx -= 1
        confl = reason[p_var]
        seen[p_var] = 0
        path -= 1
        if path <= 0:
            break
    out[0] = p ^ 1

    # drop literals implied by the rest of the clause
    for i in range(1, n):
        stack[i] = out[i]
    kept = 1
    for i in range(1, n):
        q = out[i]
        r = reason[q >> 1]
        redundant = r >= 0
        if redundant:
            start = cl_start[r]
            for j in range(start, start + cl_len[r]):
                u = arena[j] >> 1
                if u != (q >> 1) and not seen[u] and level[u] > 0:
                    redundant = False
                    break
        if not redundant:
            out[kept] = q
            kept += 1
    for i in range(1, n):
        seen[stack[i] >> 1] = 0
    n = kept

    bt = 0
    if n > 1:
        best = 1
        for i in range(2, n):
            if level[out[i] >> 1] > level[out[best] >> 1]:
                best = i
        tmp = out[1]
        out[1] = out[best]
        out[best] = tmp
        bt = level[out[1] >> 1]
    return n, bt


@kernel
def pick_branch(S):
    st = S[0]
    assigns = S[2]
    while st[HEAP] > 0:
        v = heap_pop(S)
        if assigns[v] < 0:
            # saved phase; never assigned means false
            return 2 * v + (1 - S[8][v])
    return -1


@kernel
def reduce_db(S):
    """Delete the less active half of the long learnt clauses.

    Runs at decision level 0 only, so no deleted clause can be a reason.
    """
    st = S[0]
    reason = S[4]
    watch_head = S[12]
    cl_start = S[14]
    cl_len = S[15]
    cl_learnt = S[16]
    cl_act = S[17]
    arena = S[18]
    ncl = st[NCL]
    count = 0
    for c in range(ncl):
        if cl_learnt[c] and cl_len[c] > 2:
            count += 1
    cand = np.empty(count, np.int64)
    acts = np.empty(count, np.float64)
    k = 0
    for c in range(ncl):
        if cl_learnt[c] and cl_len[c] > 2:
            cand[k] = c
            acts[k] = cl_act[c]
            k += 1
    order = np.argsort(acts, kind="mergesort")
    drop = np.zeros(ncl, np.int8)
    for i in range(count // 2):
        drop[cand[order[i]]] = 1
    # compact in place; destinations never overtake sources
    dst = 0
    pos = 0
    for c in range(ncl):
        if drop[c]:
            st[NLEARNTS] -= 1
            continue
        start = cl_start[c]
        length = cl_len[c]
        for j in range(length):
            arena[pos + j] = arena[start + j]
        cl_start[dst] = pos
        cl_len[dst] = length
        cl_learnt[dst] = cl_learnt[c]
        cl_act[dst] = cl_act[c]
        pos += length
        dst += 1
    st[NCL] = dst
    st[ARENA] = pos
    for i in range(watch_head.shape[0]):
        watch_head[i] = -1
    for c in range(dst):
        attach(S, c)
    for i in range(st[TRAIL]):
        reason[S[5][i] >> 1] = -1
    st[REDUCES] += 1


@kernel
def search(S):
    """Run CDCL until SAT, UNSAT, a failed assumption, or a full buffer.

    The state stays consistent when ``GROW`` is returned: the caller
    enlarges the clause buffers and calls again.
    """
    st = S[0]
    fs = S[1]
    assigns = S[2]
    assumptions = S[20]
    buf = S[19]
    if st[OK] == 0:
        return UNSAT
    cancel_until(S, 0)
    nv = st[NV]
    since_restart = 0
    budget = st[LUBY_BASE] * luby(2, st[RESTARTS])
    while True:
        if st[ARENA] + nv + 2 > S[18].shape[0] or st[NCL] + 2 > S[14].shape[0]:
            return GROW
        confl = propagate(S)
        if confl >= 0:
            st[CONFLICTS] += 1
            since_restart += 1
            if st[DL] == 0:
                st[OK] = 0
                return UNSAT
            n, bt = analyze(S, confl)
            cancel_until(S, bt)
            if n == 1:
                enqueue(S, buf[0], -1)
            else:
                c = store_clause(S, buf, n, 1)
                bump_clause(S, c)
                enqueue(S, buf[0], c)
            fs[VAR_INC] /= fs[VAR_DECAY]
            fs[CLA_INC] /= fs[CLA_DECAY]
            continue
        if since_restart >= budget:
            st[RESTARTS] += 1
            cancel_until(S, 0)
            since_restart = 0
            budget = st[LUBY_BASE] * luby(2, st[RESTARTS])
            if st[NLEARNTS] >= st[MAX_LEARNTS]:
                reduce_db(S)
                st[MAX_LEARNTS] += st[MAX_LEARNTS] // 10
            continue
        nxt = -1
        while st[DL] < st[NASSUMP]:
            p = assumptions[st[DL]]
            val = lit_value(assigns, p)
            if val == 1:
                new_level(S)
            elif val == 0:
                return UNSAT_ASSUMPTIONS
            else:
                nxt = p
                break
        if nxt == -1:
            nxt = pick_branch(S)
            if nxt == -1:
                return SAT
            st[DECISIONS] += 1
        new_level(S)
        enqueue(S, nxt, -1)
