"""Exact degree, betweenness, closeness and clustering on unweighted graphs.

Edge weights are ignored here: all shortest paths are hop counts.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np

from .graph import Graph

MEASURES = ("degree", "betweenness", "closeness", "clustering")

# Betweenness sources are summed chunk by chunk in a fixed order, so the
# result does not depend on how many workers process the chunks.
_BRANDES_CHUNK = 128


@dataclass
class CentralityVector:
    measure: str
    scores: np.ndarray

    def __post_init__(self):
        self.scores = np.asarray(self.scores, dtype=np.float64)
        if self.scores.ndim != 1:
            raise ValueError("scores must be one-dimensional")
        if not np.all(np.isfinite(self.scores)):
            raise ValueError(f"{self.measure} scores must be finite")

    def __len__(self) -> int:
        return len(self.scores)


def degree_centrality(g: Graph) -> CentralityVector:
    return CentralityVector("degree", np.diff(g.csr().indptr).astype(np.float64))


@numba.njit(cache=True, nogil=True)
def _brandes(indptr, indices, sources, n):
    bc = np.zeros(n)
    sigma = np.zeros(n)
    delta = np.zeros(n)
    dist = np.full(n, -1, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    for s in sources:
        sigma[:] = 0.0
        delta[:] = 0.0
        dist[:] = -1
        sigma[s] = 1.0
        dist[s] = 0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            dv = dist[v] + 1
            for j in range(indptr[v], indptr[v + 1]):
                w = indices[j]
                if dist[w] < 0:
                    dist[w] = dv
                    order[tail] = w
                    tail += 1
                if dist[w] == dv:
                    sigma[w] += sigma[v]
        for i in range(tail - 1, 0, -1):
            w = order[i]
            dw = dist[w] - 1
            coeff = (1.0 + delta[w]) / sigma[w]
            for j in range(indptr[w], indptr[w + 1]):
                v = indices[j]
                if dist[v] == dw:
                    delta[v] += sigma[v] * coeff
            bc[w] += delta[w]
    return bc


def betweenness_centrality(g: Graph, workers: int = 1) -> CentralityVector:
    """Brandes accumulation over unordered pairs (ordered-pair sum halved)."""
    n = g.vertex_count
    csr = g.csr()
    chunks = [
        np.arange(lo, min(lo + _BRANDES_CHUNK, n), dtype=np.int64)
        for lo in range(0, n, _BRANDES_CHUNK)
    ]

    def run(src):
        return _brandes(csr.indptr, csr.indices, src, n)

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    total = np.zeros(n)
    for part in parts:
        total += part
    return CentralityVector("betweenness", total / 2.0)


@numba.njit(cache=True, nogil=True)
def _closeness(indptr, indices, n):
    out = np.zeros(n)
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist[:] = -1
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        total = 0
        while head < tail:
            v = queue[head]
            head += 1
            for j in range(indptr[v], indptr[v + 1]):
                w = indices[j]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    total += dist[w]
                    queue[tail] = w
                    tail += 1
        reach = tail - 1
        if total > 0 and n > 1:
            out[s] = (reach / total) * (reach / (n - 1))
    return out


def closeness_centrality(g: Graph) -> CentralityVector:
    """Wasserman-Faust closeness: ``((r-1)/sum d) * ((r-1)/(n-1))``.

    ``r`` counts the vertices reachable from ``u`` including ``u``; on a
    connected graph this is plain ``(n-1)/sum d``.
    """
    csr = g.csr()
    return CentralityVector("closeness", _closeness(csr.indptr, csr.indices, g.vertex_count))


@numba.njit(cache=True, nogil=True)
def _clustering(indptr, indices, n):
    out = np.zeros(n)
    mark = np.zeros(n, dtype=np.bool_)
    for u in range(n):
        deg = indptr[u + 1] - indptr[u]
        if deg < 2:
            continue
        for j in range(indptr[u], indptr[u + 1]):
            mark[indices[j]] = True
        links = 0
        for j in range(indptr[u], indptr[u + 1]):
            w = indices[j]
            for k in range(indptr[w], indptr[w + 1]):
                if mark[indices[k]]:
                    links += 1
        for j in range(indptr[u], indptr[u + 1]):
            mark[indices[j]] = False
        # each triangle through u was seen from both of its other corners
        out[u] = links / (deg * (deg - 1.0))
    return out


def clustering_coefficient(g: Graph) -> CentralityVector:
    csr = g.csr()
    return CentralityVector("clustering", _clustering(csr.indptr, csr.indices, g.vertex_count))


_DISPATCH = {
    "degree": degree_centrality,
    "betweenness": betweenness_centrality,
    "closeness": closeness_centrality,
    "clustering": clustering_coefficient,
}


def compute(g: Graph, measure: str) -> CentralityVector:
    try:
        fn = _DISPATCH[measure]
    except KeyError:
        raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}") from None
    return fn(g)
