# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Bitset branch-and-bound clique search (greedy colouring bound).

Vertex ``i`` is bit ``i & 63`` of word ``i >> 6``.  Colour classes are built by
repeatedly taking the lowest remaining candidate, so the vertex numbering is
the colouring order; callers renumber before calling.
"""
from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memcpy
from libc.stdint cimport uint64_t, int32_t
from posix.time cimport clock_gettime, timespec, CLOCK_MONOTONIC

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef double _now():
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + ts.tv_nsec * 1e-9


cdef struct Search:
    const uint64_t* adj
    int m
    int words
    int best
    int upper
    int target
    bint enumerate
    long long cap
    long long found
    long long nodes
    long long node_limit
    double deadline
    bint aborted
    int32_t* clique
    int32_t* best_clique
    uint64_t** pbuf
    uint64_t** ubuf
    int32_t** obuf
    int32_t** cbuf
    uint64_t* qbuf


cdef int _ensure_depth(Search* s, int depth) except -1:
    if s.pbuf[depth] == NULL:
        s.pbuf[depth] = <uint64_t*> malloc(s.words * sizeof(uint64_t))
        s.ubuf[depth] = <uint64_t*> malloc(s.words * sizeof(uint64_t))
        s.obuf[depth] = <int32_t*> malloc(s.m * sizeof(int32_t))
        s.cbuf[depth] = <int32_t*> malloc(s.m * sizeof(int32_t))
        if (s.pbuf[depth] == NULL or s.ubuf[depth] == NULL
                or s.obuf[depth] == NULL or s.cbuf[depth] == NULL):
            raise MemoryError()
    return 0


cdef int _expand(Search* s, int depth, list out) except -1:
    # candidates for this node are in s.pbuf[depth]; current clique has `depth` vertices
    cdef uint64_t* P = s.pbuf[depth]
    cdef uint64_t* U = s.ubuf[depth]
    cdef uint64_t* Q = s.qbuf
    cdef int32_t* order = s.obuf[depth]
    cdef int32_t* col = s.cbuf[depth]
    cdef const uint64_t* row
    cdef int words = s.words
    cdef int w, w0, v, i, idx = 0, colour = 0, kmin
    cdef uint64_t bits, any_bits
    cdef uint64_t* NP

    s.nodes += 1
    if (s.nodes & 1023) == 0:
        if (s.deadline > 0 and _now() > s.deadline) or (
                s.node_limit > 0 and s.nodes > s.node_limit):
            s.aborted = True
            return 0

    if s.enumerate:
        kmin = s.target - depth
    else:
        kmin = s.best - depth + 1
    if kmin < 1:
        kmin = 1

    memcpy(U, P, words * sizeof(uint64_t))
    w0 = 0
    while True:
        while w0 < words and U[w0] == 0:
            w0 += 1
        if w0 == words:
            break
        colour += 1
        memcpy(Q + w0, U + w0, (words - w0) * sizeof(uint64_t))
        w = w0
        while w < words:
            bits = Q[w]
            if bits == 0:
                w += 1
                continue
            v = (w << 6) + __builtin_ctzll(bits)
            Q[w] &= Q[w] - 1
            U[w] &= ~((<uint64_t> 1) << (v & 63))
            row = s.adj + <long long> v * words
            for i in range(w, words):
                Q[i] &= ~row[i]
            if colour >= kmin:
                order[idx] = v
                col[idx] = colour
                idx += 1

    _ensure_depth(s, depth + 1)
    NP = s.pbuf[depth + 1]
    for i in range(idx - 1, -1, -1):
        if s.enumerate:
            if depth + col[i] < s.target:
                return 0
        elif depth + col[i] <= s.best:
            return 0
        v = order[i]
        s.clique[depth] = v
        row = s.adj + <long long> v * words
        any_bits = 0
        for w in range(words):
            NP[w] = P[w] & row[w]
            any_bits |= NP[w]
        if s.enumerate:
            if depth + 1 == s.target:
                out.append([s.clique[t] for t in range(depth + 1)])
                s.found += 1
                if s.cap > 0 and s.found >= s.cap:
                    s.aborted = True
                    return 0
            elif any_bits:
                _expand(s, depth + 1, out)
        elif any_bits == 0:
            if depth + 1 > s.best:
                s.best = depth + 1
                memcpy(s.best_clique, s.clique, (depth + 1) * sizeof(int32_t))
                if s.best >= s.upper:
                    return 0
        else:
            _expand(s, depth + 1, out)
            if s.best >= s.upper:
                return 0
        if s.aborted:
            return 0
        P[v >> 6] &= ~((<uint64_t> 1) << (v & 63))
    return 0


def clique_search(cnp.ndarray adj, int lower=0, int upper=-1, int target=0,
                  bint enumerate=False, long long cap=0, double time_limit=0.0,
                  long long node_limit=0):
    """Run the search on a (m, words) uint64 adjacency array.

    Returns ``(best, witness, complete, nodes, found)``.  In maximise mode
    ``witness`` is a clique larger than ``lower`` (or None); in enumerate mode
    ``found`` lists every clique of size ``target``.
    """
    cdef cnp.ndarray[cnp.uint64_t, ndim=2, mode="c"] a = np.ascontiguousarray(adj, dtype=np.uint64)
    cdef int m = a.shape[0]
    cdef int words = a.shape[1] if m else 1
    cdef Search s
    cdef int depth_cap = m + 2
    cdef int d
    cdef list out = []
    if m == 0:
        return lower, None, True, 0, out
    if upper < 0 or upper > m:
        upper = m
    s.adj = <const uint64_t*> a.data
    s.m = m
    s.words = words
    s.best = lower
    s.upper = upper
    s.target = target
    s.enumerate = enumerate
    s.cap = cap
    s.found = 0
    s.nodes = 0
    s.node_limit = node_limit
    s.deadline = _now() + time_limit if time_limit > 0 else 0.0
    s.aborted = False
    s.clique = <int32_t*> malloc(depth_cap * sizeof(int32_t))
    s.best_clique = <int32_t*> malloc(depth_cap * sizeof(int32_t))
    s.pbuf = <uint64_t**> calloc(depth_cap, sizeof(uint64_t*))
    s.ubuf = <uint64_t**> calloc(depth_cap, sizeof(uint64_t*))
    s.obuf = <int32_t**> calloc(depth_cap, sizeof(int32_t*))
    s.cbuf = <int32_t**> calloc(depth_cap, sizeof(int32_t*))
    s.qbuf = <uint64_t*> malloc(words * sizeof(uint64_t))
    try:
        if (s.clique == NULL or s.best_clique == NULL or s.pbuf == NULL or s.ubuf == NULL
                or s.obuf == NULL or s.cbuf == NULL or s.qbuf == NULL):
            raise MemoryError()
        _ensure_depth(&s, 0)
        for d in range(words):
            s.pbuf[0][d] = 0
        for d in range(m):
            s.pbuf[0][d >> 6] |= (<uint64_t> 1) << (d & 63)
        if not (enumerate and target <= 0) and lower < upper:
            _expand(&s, 0, out)
        witness = None
        if not enumerate and s.best > lower:
            witness = [s.best_clique[d] for d in range(s.best)]
        return s.best, witness, not s.aborted, s.nodes, out
    finally:
        for d in range(depth_cap):
            if s.pbuf != NULL:
                free(s.pbuf[d])
            if s.ubuf != NULL:
                free(s.ubuf[d])
            if s.obuf != NULL:
                free(s.obuf[d])
            if s.cbuf != NULL:
                free(s.cbuf[d])
        free(s.pbuf)
        free(s.ubuf)
        free(s.obuf)
        free(s.cbuf)
        free(s.qbuf)
        free(s.clique)
        free(s.best_clique)
