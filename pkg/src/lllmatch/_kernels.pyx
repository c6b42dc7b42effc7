# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.  Semantics mirror ``_kernels_py`` exactly.

Girth is returned as an int with 0 meaning "no cycle".
"""

from libc.stdlib cimport malloc, free

BACKEND = "cython"


cdef struct GirthWork:
    int n
    int E
    int *eu
    int *ev
    int *deg
    int *off
    int *fill
    int *nbr
    int *dist
    int *parent
    int *queue


cdef int _work_alloc(GirthWork *w, int n, int E) nogil:
    w.n = n
    w.E = E
    w.eu = <int *> malloc(E * sizeof(int))
    w.ev = <int *> malloc(E * sizeof(int))
    w.deg = <int *> malloc(n * sizeof(int))
    w.off = <int *> malloc((n + 1) * sizeof(int))
    w.fill = <int *> malloc(n * sizeof(int))
    w.nbr = <int *> malloc(2 * E * sizeof(int))
    w.dist = <int *> malloc(n * sizeof(int))
    w.parent = <int *> malloc(n * sizeof(int))
    w.queue = <int *> malloc(n * sizeof(int))
    if (w.eu == NULL or w.ev == NULL or w.deg == NULL or w.off == NULL or w.fill == NULL
            or w.nbr == NULL or w.dist == NULL or w.parent == NULL or w.queue == NULL):
        return -1
    return 0


cdef void _work_free(GirthWork *w) nogil:
    free(w.eu)
    free(w.ev)
    free(w.deg)
    free(w.off)
    free(w.fill)
    free(w.nbr)
    free(w.dist)
    free(w.parent)
    free(w.queue)


cdef int _girth(GirthWork *w) nogil:
    """Girth of the multigraph held in w.eu/w.ev (0-based vertices)."""
    cdef int n = w.n, E = w.E
    cdef int i, j, k, u, v, a, b, root, head, tail, du, best, cand
    for i in range(E):
        if w.eu[i] == w.ev[i]:
            return 1
    for u in range(n):
        w.deg[u] = 0
    for i in range(E):
        w.deg[w.eu[i]] += 1
        w.deg[w.ev[i]] += 1
    w.off[0] = 0
    for u in range(n):
        w.off[u + 1] = w.off[u] + w.deg[u]
        w.fill[u] = w.off[u]
    for i in range(E):
        a = w.eu[i]
        b = w.ev[i]
        w.nbr[w.fill[a]] = b
        w.fill[a] += 1
        w.nbr[w.fill[b]] = a
        w.fill[b] += 1
    for u in range(n):
        for j in range(w.off[u], w.off[u + 1]):
            for k in range(j + 1, w.off[u + 1]):
                if w.nbr[j] == w.nbr[k]:
                    return 2
    best = 0
    for u in range(n):
        w.dist[u] = -1
    for root in range(n):
        head = 0
        tail = 1
        w.queue[0] = root
        w.dist[root] = 0
        w.parent[root] = -1
        while head < tail:
            u = w.queue[head]
            head += 1
            du = w.dist[u]
            if best and 2 * du >= best:
                break
            for j in range(w.off[u], w.off[u + 1]):
                v = w.nbr[j]
                if w.dist[v] == -1:
                    w.dist[v] = du + 1
                    w.parent[v] = u
                    w.queue[tail] = v
                    tail += 1
                elif w.parent[u] != v:
                    cand = du + w.dist[v] + 1
                    if best == 0 or cand < best:
                        best = cand
        for j in range(tail):
            w.dist[w.queue[j]] = -1
        if best == 3:
            break
    return best


def sample_girths(const long long[:, ::1] choices, const int[::1] vertex_of, int n,
                  int[::1] out):
    """Girth of the projection of each sampled matching.

    Row t of ``choices`` drives the pool sampler: at step s the last pool
    entry is matched with pool[choices[t, s]], which is then swap-removed.
    """
    cdef Py_ssize_t trials = choices.shape[0]
    cdef int half = <int> choices.shape[1]
    cdef int N = 2 * half
    cdef Py_ssize_t t
    cdef int s, m, a, b, j, i
    cdef GirthWork w
    cdef int *pool = <int *> malloc(N * sizeof(int))
    cdef int rc = _work_alloc(&w, n, half)
    if pool == NULL or rc != 0:
        free(pool)
        _work_free(&w)
        raise MemoryError()
    with nogil:
        for t in range(trials):
            for i in range(N):
                pool[i] = i
            m = N
            for s in range(half):
                a = pool[m - 1]
                j = <int> choices[t, s]
                b = pool[j]
                pool[j] = pool[m - 2]
                m -= 2
                w.eu[s] = vertex_of[a]
                w.ev[s] = vertex_of[b]
            out[t] = _girth(&w)
    free(pool)
    _work_free(&w)


cdef void _enum_rec(int *partner, int N, int half, int depth, const int[::1] vertex_of,
                    GirthWork *w, long long[::1] hist) nogil:
    cdef int a, b, g
    if depth == half:
        g = _girth(w)
        hist[g] += 1
        return
    a = 0
    while partner[a] != -1:
        a += 1
    for b in range(a + 1, N):
        if partner[b] != -1:
            continue
        partner[a] = b
        partner[b] = a
        w.eu[depth] = vertex_of[a]
        w.ev[depth] = vertex_of[b]
        _enum_rec(partner, N, half, depth + 1, vertex_of, w, hist)
        partner[a] = -1
        partner[b] = -1


def girth_histogram(const int[::1] vertex_of, int n, int first_partner, long long[::1] hist):
    """Add girth counts of every perfect matching containing edge (0, first_partner).

    ``hist[g]`` counts girth g; ``hist[0]`` counts forests.
    """
    cdef int N = <int> vertex_of.shape[0]
    cdef int half = N // 2
    cdef int i
    cdef GirthWork w
    cdef int *partner = <int *> malloc(N * sizeof(int))
    cdef int rc = _work_alloc(&w, n, half)
    if partner == NULL or rc != 0:
        free(partner)
        _work_free(&w)
        raise MemoryError()
    with nogil:
        for i in range(N):
            partner[i] = -1
        partner[0] = first_partner
        partner[first_partner] = 0
        w.eu[0] = vertex_of[0]
        w.ev[0] = vertex_of[first_partner]
        _enum_rec(partner, N, half, 1, vertex_of, &w, hist)
    free(partner)
    _work_free(&w)


def cycle_mask_histogram(int n, long long[::1] hist):
    """hist[mask] += #permutations of [n] whose set of cycle lengths is ``mask``.

    Bit L of mask is set when some cycle has length L.  Heap's algorithm.
    """
    cdef int *perm = <int *> malloc(n * sizeof(int))
    cdef int *c = <int *> malloc(n * sizeof(int))
    cdef char *seen = <char *> malloc(n * sizeof(char))
    cdef int i, j, L, tmp
    cdef long mask
    if perm == NULL or c == NULL or seen == NULL:
        free(perm)
        free(c)
        free(seen)
        raise MemoryError()
    with nogil:
        for i in range(n):
            perm[i] = i
            c[i] = 0
        i = 0
        while True:
            mask = 0
            for j in range(n):
                seen[j] = 0
            for j in range(n):
                if not seen[j]:
                    L = 0
                    tmp = j
                    while not seen[tmp]:
                        seen[tmp] = 1
                        tmp = perm[tmp]
                        L += 1
                    mask |= (<long> 1) << L
            hist[mask] += 1
            while i < n and c[i] >= i:
                c[i] = 0
                i += 1
            if i >= n:
                break
            if i % 2 == 0:
                tmp = perm[0]
                perm[0] = perm[i]
                perm[i] = tmp
            else:
                tmp = perm[c[i]]
                perm[c[i]] = perm[i]
                perm[i] = tmp
            c[i] += 1
            i = 0
    free(perm)
    free(c)
    free(seen)
