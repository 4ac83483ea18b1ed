"""Undirected graph with dense integer vertices and positive edge weights."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised when an operation would break a graph invariant."""


@dataclass(frozen=True)
class CSR:
    """Compressed adjacency arrays used by the numeric kernels.

    ``indices[indptr[v]:indptr[v + 1]]`` are the neighbours of ``v`` in
    ascending order; ``weights`` and ``edge_ids`` are aligned with them.
    """

    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    edge_ids: np.ndarray


class Graph:
    """Undirected simple graph on vertices ``0 .. vertex_count - 1``.

    External identifiers (GML ids, edge-list tokens) live in ``labels``;
    everything else addresses vertices by index.
    """

    def __init__(self, vertex_count: int = 0, labels: Sequence[str] | None = None):
        if vertex_count < 0:
            raise GraphError("vertex_count must be non-negative")
        if labels is not None and len(labels) != vertex_count:
            raise GraphError("labels must have one entry per vertex")
        self._adj: list[dict[int, float]] = [{} for _ in range(vertex_count)]
        self.labels: list[str] = (
            list(labels) if labels is not None else [str(i) for i in range(vertex_count)]
        )
        self._edge_count = 0
        self._csr: CSR | None = None
        self._edges: list[tuple[int, int]] | None = None

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[tuple[int, int]],
        weights: Iterable[float] | None = None,
        labels: Sequence[str] | None = None,
    ) -> Graph:
        g = cls(vertex_count, labels)
        if weights is None:
            for u, v in edges:
                g.add_edge(int(u), int(v))
        else:
            for (u, v), w in zip(edges, weights, strict=True):
                g.add_edge(int(u), int(v), float(w))
        return g

    @property
    def vertex_count(self) -> int:
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def __len__(self) -> int:
        return len(self._adj)

    def __repr__(self) -> str:
        return f"Graph(vertex_count={self.vertex_count}, edge_count={self.edge_count})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.labels == other.labels and self._adj == other._adj

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < len(self._adj):
            raise GraphError(f"vertex {v} out of range [0, {len(self._adj)})")

    def add_vertex(self, label: str | None = None) -> int:
        self._adj.append({})
        idx = len(self._adj) - 1
        self.labels.append(str(idx) if label is None else label)
        self._invalidate()
        return idx

    def add_edge(self, u: int, v: int, w: float = 1.0) -> None:
        """Insert edge ``{u, v}``; re-adding an existing edge replaces its weight."""
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise GraphError(f"self-loop on vertex {u} is not allowed")
        if not w > 0 or not np.isfinite(w):
            raise GraphError(f"edge weight must be finite and > 0, got {w!r}")
        if v not in self._adj[u]:
            self._edge_count += 1
        self._adj[u][v] = w
        self._adj[v][u] = w
        self._invalidate()

    def _invalidate(self) -> None:
        self._csr = None
        self._edges = None

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < len(self._adj) and v in self._adj[u]

    def weight(self, u: int, v: int) -> float:
        try:
            return self._adj[u][v]
        except (IndexError, KeyError):
            raise GraphError(f"no edge {{{u}, {v}}}") from None

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self._adj[v])

    def adjacency(self, v: int) -> list[tuple[int, float]]:
        """Neighbours of ``v`` with edge weights, in ascending neighbour order."""
        self._check_vertex(v)
        return sorted(self._adj[v].items())

    def neighbors(self, v: int) -> list[int]:
        self._check_vertex(v)
        return sorted(self._adj[v])

    def edges(self) -> list[tuple[int, int]]:
        """All edges as ``(u, v)`` with ``u < v``, sorted; position is the edge id."""
        if self._edges is None:
            self._edges = sorted(
                (u, v) for u, nbrs in enumerate(self._adj) for v in nbrs if u < v
            )
        return self._edges

    def edge_weights(self) -> list[float]:
        return [self._adj[u][v] for u, v in self.edges()]

    @property
    def is_weighted(self) -> bool:
        return any(w != 1.0 for nbrs in self._adj for w in nbrs.values())

    def binarized(self) -> Graph:
        """Copy of this graph with every weight set to 1.0."""
        return Graph.from_edges(self.vertex_count, self.edges(), labels=self.labels)

    def relabeled(self, perm: Sequence[int]) -> Graph:
        """Copy where old vertex ``i`` becomes vertex ``perm[i]``."""
        n = self.vertex_count
        if sorted(perm) != list(range(n)):
            raise GraphError("perm must be a permutation of range(vertex_count)")
        labels = [""] * n
        for i, p in enumerate(perm):
            labels[p] = self.labels[i]
        g = Graph(n, labels)
        for (u, v), w in zip(self.edges(), self.edge_weights()):
            g.add_edge(perm[u], perm[v], w)
        return g

    def csr(self) -> CSR:
        if self._csr is None:
            n = self.vertex_count
            edge_id = {e: i for i, e in enumerate(self.edges())}
            indptr = np.zeros(n + 1, dtype=np.int64)
            indices, weights, eids = [], [], []
            for u in range(n):
                for v, w in sorted(self._adj[u].items()):
                    indices.append(v)
                    weights.append(w)
                    eids.append(edge_id[(u, v) if u < v else (v, u)])
                indptr[u + 1] = len(indices)
            self._csr = CSR(
                indptr=indptr,
                indices=np.asarray(indices, dtype=np.int64),
                weights=np.asarray(weights, dtype=np.float64),
                edge_ids=np.asarray(eids, dtype=np.int64),
            )
        return self._csr


def connected_components(g: Graph) -> list[set[int]]:
    """Maximal connected vertex sets, ordered by their smallest vertex."""
    seen = [False] * g.vertex_count
    out: list[set[int]] = []
    for start in range(g.vertex_count):
        if seen[start]:
            continue
        seen[start] = True
        comp = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in g._adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.add(v)
                    queue.append(v)
        out.append(comp)
    return out
