"""Seeded generators for the three synthetic network families.

All generators draw from ``numpy.random.default_rng(seed)``, so a fixed
``(model, params, seed)`` reproduces the same graph within one numpy build.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph

MODELS = ("er", "nws", "ba_tf")


def gen_er(v: int, p: float, seed: int) -> Graph:
    """G(v, p): every unordered pair joined independently with probability ``p``."""
    if v < 1:
        raise ValueError("gen_er needs v >= 1")
    _check_prob(p)
    rng = np.random.default_rng(seed)
    g = Graph(v)
    for u in range(v - 1):
        hits = np.flatnonzero(rng.random(v - u - 1) < p)
        for off in hits.tolist():
            g.add_edge(u, u + 1 + off)
    return g


def gen_nws(v: int, k: int, p: float, seed: int) -> Graph:
    """Newman-Watts-Strogatz small world: a k-ring plus random shortcuts.

    Each ring edge ``(u, w)`` spawns, with probability ``p``, one shortcut
    from ``u`` to a uniformly drawn vertex. A draw that hits ``u`` or an
    existing neighbour is dropped, not redrawn. Odd ``k`` behaves as ``k - 1``.
    """
    if not v > k >= 2:
        raise ValueError("gen_nws needs v > k >= 2")
    _check_prob(p)
    rng = np.random.default_rng(seed)
    g = Graph(v)
    ring = [(u, (u + j) % v) for u in range(v) for j in range(1, k // 2 + 1)]
    for u, w in ring:
        g.add_edge(u, w)
    coins = rng.random(len(ring))
    picks = rng.integers(0, v, size=len(ring))
    for (u, _), coin, w in zip(ring, coins.tolist(), picks.tolist()):
        if coin < p and w != u and not g.has_edge(u, w):
            g.add_edge(u, w)
    return g


def gen_ba_tf(v: int, e: int, p: float, seed: int) -> Graph:
    """Holme-Kim growth: preferential attachment with triad formation.

    Starts from ``e`` isolated vertices; every later vertex adds exactly ``e``
    edges, so the result has ``e * (v - e)`` edges. After a PA attachment to
    ``w`` each further slot is, with probability ``p``, a link to a random
    neighbour of ``w`` not yet linked to the newcomer (falling back to PA).
    PA samples from the flat list of edge endpoints and redraws duplicates.
    """
    if not v > e >= 1:
        raise ValueError("gen_ba_tf needs v > e >= 1")
    _check_prob(p)
    rng = np.random.default_rng(seed)
    g = Graph(v)
    endpoints: list[int] = []

    def attach_pa(u: int, chosen: set[int]) -> int:
        pool = endpoints if endpoints else range(u)
        while True:
            t = pool[int(rng.random() * len(pool))]
            if t not in chosen:
                return t

    for u in range(e, v):
        chosen: set[int] = set()
        w = attach_pa(u, chosen)
        chosen.add(w)
        g.add_edge(u, w)
        while len(chosen) < e:
            if rng.random() < p:
                options = [x for x in g.neighbors(w) if x != u and x not in chosen]
                if options:
                    t = options[int(rng.random() * len(options))]
                    chosen.add(t)
                    g.add_edge(u, t)
                    continue
            w = attach_pa(u, chosen)
            chosen.add(w)
            g.add_edge(u, w)
        for t in chosen:
            endpoints.extend((u, t))
    return g


def _check_prob(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class GenSpec:
    model: str
    v: int
    p: float
    seed: int
    k: int = 6
    e: int = 5

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; expected one of {MODELS}")
        _check_prob(self.p)
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.model == "ba_tf" and not self.v > self.e >= 1:
            raise ValueError("ba_tf needs v > e >= 1")
        if self.model == "nws" and not self.v > self.k >= 2:
            raise ValueError("nws needs v > k >= 2")

    def build(self) -> Graph:
        if self.model == "er":
            return gen_er(self.v, self.p, self.seed)
        if self.model == "nws":
            return gen_nws(self.v, self.k, self.p, self.seed)
        return gen_ba_tf(self.v, self.e, self.p, self.seed)
