"""Pure-Python versions of the compiled kernels, used when the extension is absent."""

from __future__ import annotations

BACKEND = "python"


def girth_of_edges(edges, n: int) -> int:
    """Girth of a multigraph on vertices ``0..n-1``; 0 when acyclic."""
    for a, b in edges:
        if a == b:
            return 1
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    for nb in adj:
        if len(nb) != len(set(nb)):
            return 2
    best = 0
    dist = [-1] * n
    parent = [-1] * n
    for root in range(n):
        queue = [root]
        dist[root] = 0
        parent[root] = -1
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            du = dist[u]
            if best and 2 * du >= best:
                break
            pu = parent[u]
            for v in adj[u]:
                if dist[v] == -1:
                    dist[v] = du + 1
                    parent[v] = u
                    queue.append(v)
                elif pu != v:
                    cand = du + dist[v] + 1
                    if best == 0 or cand < best:
                        best = cand
        for v in queue:
            dist[v] = -1
        if best == 3:
            break
    return best


def sample_girths(choices, vertex_of, n, out):
    half = len(choices[0]) if len(choices) else 0
    N = 2 * half
    vertex_of = list(vertex_of)
    for t, row in enumerate(choices):
        pool = list(range(N))
        m = N
        edges = []
        for j in row.tolist() if hasattr(row, "tolist") else row:
            a = pool[m - 1]
            b = pool[j]
            pool[j] = pool[m - 2]
            m -= 2
            edges.append((vertex_of[a], vertex_of[b]))
        out[t] = girth_of_edges(edges, n)


def girth_histogram(vertex_of, n, first_partner, hist):
    vertex_of = list(vertex_of)
    N = len(vertex_of)
    partner = [-1] * N
    partner[0] = first_partner
    partner[first_partner] = 0
    edges = [(vertex_of[0], vertex_of[first_partner])]

    def rec():
        if 2 * len(edges) == N:
            hist[girth_of_edges(edges, n)] += 1
            return
        a = partner.index(-1)
        for b in range(a + 1, N):
            if partner[b] != -1:
                continue
            partner[a] = b
            partner[b] = a
            edges.append((vertex_of[a], vertex_of[b]))
            rec()
            edges.pop()
            partner[a] = -1
            partner[b] = -1

    rec()


def cycle_mask_histogram(n, hist):
    from itertools import permutations

    for perm in permutations(range(n)):
        seen = [False] * n
        mask = 0
        for j in range(n):
            if not seen[j]:
                L = 0
                k = j
                while not seen[k]:
                    seen[k] = True
                    k = perm[k]
                    L += 1
                mask |= 1 << L
        hist[mask] += 1
