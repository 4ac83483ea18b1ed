"""Game of Thieves: swarm-based vertex and edge centrality.

Every vertex starts with ``Φ0`` vdiamonds and hosts a number of thieves.
An empty thief takes a weighted random step from its current vertex,
loop-erasing its path, and grabs a vdiamond if the vertex has one. A loaded
thief walks its recorded path back home one edge per epoch and drops the
vdiamond there. After ``T`` epochs the time-averaged vdiamond count Φ̄ ranks
vertices (low Φ̄ = central) and the averaged loaded traversals Ψ̄ rank
edges (high Ψ̄ = central).

Two engines are provided. :func:`run_got` is the production path (a numba
epoch kernel). :func:`run_got_reference` drives the step functions
:func:`step_empty_thief` / :func:`step_loaded_thief` on :class:`Thief`
objects. Given the same seed both consume the same uniforms and produce
bit-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numba
import numpy as np

from .centrality import CentralityVector
from .graph import Graph


class ConservationError(AssertionError):
    """Σ Φ + loaded thieves drifted from |V|·Φ0."""


def default_epochs(vertex_count: int) -> int:
    """``max(1, floor(ln(|V|)**3))``, e.g. 12 for ten vertices."""
    if vertex_count <= 1:
        return 1
    return max(1, math.floor(math.log(vertex_count) ** 3))


@dataclass(frozen=True)
class GotConfig:
    thieves_per_vertex: int = 1
    initial_vdiamonds: int | None = None  # None means |V|
    epochs: int | None = None  # None means default_epochs(|V|)
    seed: int = 0

    def __post_init__(self):
        if self.thieves_per_vertex < 1:
            raise ValueError("thieves_per_vertex must be positive")
        if self.initial_vdiamonds is not None and self.initial_vdiamonds < 0:
            raise ValueError("initial_vdiamonds must be non-negative")
        if self.epochs is not None and self.epochs < 1:
            raise ValueError("epochs must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def vdiamonds_for(self, g: Graph) -> int:
        return g.vertex_count if self.initial_vdiamonds is None else self.initial_vdiamonds

    def epochs_for(self, g: Graph) -> int:
        return default_epochs(g.vertex_count) if self.epochs is None else self.epochs


def thief_steps(g: Graph, cfg: GotConfig) -> int:
    return cfg.epochs_for(g) * cfg.thieves_per_vertex * g.vertex_count


class ThiefState(str, Enum):
    EMPTY = "empty"
    LOADED = "loaded"


@dataclass
class Thief:
    home: int
    path: list[int] = field(default_factory=list)
    state: ThiefState = ThiefState.EMPTY

    def __post_init__(self):
        if not self.path:
            self.path = [self.home]

    @property
    def location(self) -> int:
        return self.path[-1]


@dataclass
class GotState:
    phi: np.ndarray
    psi: np.ndarray
    thieves: list[Thief]
    phi_running_sum: np.ndarray
    psi_running_sum: np.ndarray
    epoch: int = 0

    @classmethod
    def initial(cls, g: Graph, cfg: GotConfig) -> GotState:
        n = g.vertex_count
        phi = np.full(n, cfg.vdiamonds_for(g), dtype=np.int64)
        psi = np.zeros(g.edge_count, dtype=np.int64)
        thieves = [Thief(home=v) for v in range(n) for _ in range(cfg.thieves_per_vertex)]
        return cls(phi, psi, thieves, phi.copy(), np.zeros(g.edge_count, dtype=np.int64))

    def loaded_count(self) -> int:
        return sum(t.state is ThiefState.LOADED for t in self.thieves)


def _sampling_table(g: Graph) -> np.ndarray:
    """Per-vertex cumulative neighbour weights, aligned with the CSR arrays."""
    csr = g.csr()
    cum = np.empty_like(csr.weights)
    for v in range(g.vertex_count):
        lo, hi = csr.indptr[v], csr.indptr[v + 1]
        cum[lo:hi] = np.cumsum(csr.weights[lo:hi])
    return cum


def _edge_index(g: Graph, v: int, u: int) -> int:
    csr = g.csr()
    lo, hi = csr.indptr[v], csr.indptr[v + 1]
    j = lo + int(np.searchsorted(csr.indices[lo:hi], u))
    return int(csr.edge_ids[j])


def _pick_neighbor(g: Graph, cum: np.ndarray, v: int, uniform: float) -> int | None:
    csr = g.csr()
    lo, hi = int(csr.indptr[v]), int(csr.indptr[v + 1])
    if lo == hi:
        return None
    target = uniform * cum[hi - 1]
    j = lo + int(np.searchsorted(cum[lo:hi], target, side="right"))
    return int(csr.indices[min(j, hi - 1)])


def _empty_move(t: Thief, s: GotState, g: Graph, cum: np.ndarray, uniform: float) -> None:
    u = _pick_neighbor(g, cum, t.location, uniform)
    if u is None:
        return
    if u in t.path:
        del t.path[t.path.index(u) + 1 :]
    else:
        t.path.append(u)
    # A vdiamond grabbed at home would be dropped again on the spot.
    if u != t.home and s.phi[u] > 0:
        s.phi[u] -= 1
        t.state = ThiefState.LOADED


def step_empty_thief(
    t: Thief, s: GotState, g: Graph, rng: np.random.Generator | float
) -> None:
    """One epoch for an empty thief.

    The next vertex ``u`` is drawn from the neighbours of the current vertex
    with probability ``Ω_vu / Σ_w Ω_vw``. ``rng`` may be a generator or a
    pre-drawn uniform in ``[0, 1)``.
    """
    if t.state is not ThiefState.EMPTY:
        raise ValueError("step_empty_thief called on a loaded thief")
    uniform = rng if isinstance(rng, float) else float(rng.random())
    _empty_move(t, s, g, _sampling_table(g), uniform)


def step_loaded_thief(t: Thief, s: GotState, g: Graph) -> None:
    if t.state is not ThiefState.LOADED:
        raise ValueError("step_loaded_thief called on an empty thief")
    if len(t.path) < 2:
        raise RuntimeError(f"loaded thief of home {t.home} has no path to walk back")
    v = t.path.pop()
    u = t.path[-1]
    s.psi[_edge_index(g, v, u)] += 1
    if u == t.home:
        s.phi[u] += 1
        t.state = ThiefState.EMPTY


def _check_conservation(phi: np.ndarray, loaded: int, expected: int, epoch: int) -> None:
    total = int(phi.sum()) + loaded
    if total != expected or (phi.size and phi.min() < 0):
        raise ConservationError(
            f"epoch {epoch}: sum(phi) + loaded = {total}, expected {expected}"
        )


EpochHook = Callable[[int, np.ndarray, int], None]


def _finish(g: Graph, phi_sum: np.ndarray, psi_sum: np.ndarray, epochs: int):
    vertex = CentralityVector("got_vertex", phi_sum / epochs)
    edge = {e: float(c) / epochs for e, c in zip(g.edges(), psi_sum.tolist())}
    return vertex, edge


def run_got_reference(
    g: Graph, cfg: GotConfig = GotConfig(), *, validate: bool = False,
    on_epoch: EpochHook | None = None,
) -> tuple[CentralityVector, dict[tuple[int, int], float]]:
    """Pure-Python engine built from the step functions. Slow; used as an oracle."""
    if g.vertex_count < 1:
        raise ValueError("GoT needs at least one vertex")
    epochs = cfg.epochs_for(g)
    expected = g.vertex_count * cfg.vdiamonds_for(g)
    rng = np.random.default_rng(cfg.seed)
    cum = _sampling_table(g)
    s = GotState.initial(g, cfg)
    for ep in range(1, epochs + 1):
        uniforms = rng.random(len(s.thieves))
        s.psi[:] = 0
        for t, u in zip(s.thieves, uniforms.tolist()):
            if t.state is ThiefState.EMPTY:
                _empty_move(t, s, g, cum, u)
            else:
                step_loaded_thief(t, s, g)
        s.epoch = ep
        s.phi_running_sum += s.phi
        s.psi_running_sum += s.psi
        loaded = s.loaded_count()
        if validate:
            _check_conservation(s.phi, loaded, expected, ep)
        if on_epoch is not None:
            on_epoch(ep, s.phi, loaded)
    return _finish(g, s.phi_running_sum, s.psi_running_sum, epochs)


@numba.njit(cache=True)
def _epoch(indptr, indices, cum, edge_ids, phi, psi, home, loaded, paths, plen, uniforms):
    """Advance every thief once, in id order. Returns -1 or the id of a broken thief."""
    for t in range(home.shape[0]):
        n_path = plen[t]
        v = paths[t, n_path - 1]
        if not loaded[t]:
            lo = indptr[v]
            hi = indptr[v + 1]
            if lo == hi:
                continue
            target = uniforms[t] * cum[hi - 1]
            a = lo
            b = hi
            while a < b:
                mid = (a + b) // 2
                if cum[mid] <= target:
                    a = mid + 1
                else:
                    b = mid
            if a >= hi:
                a = hi - 1
            u = indices[a]
            pos = -1
            for i in range(n_path):
                if paths[t, i] == u:
                    pos = i
                    break
            if pos >= 0:
                plen[t] = pos + 1
            else:
                paths[t, n_path] = u
                plen[t] = n_path + 1
            if u != home[t] and phi[u] > 0:
                phi[u] -= 1
                loaded[t] = True
        else:
            if n_path < 2:
                return t
            u = paths[t, n_path - 2]
            plen[t] = n_path - 1
            a = indptr[v]
            b = indptr[v + 1]
            while a < b:
                mid = (a + b) // 2
                if indices[mid] < u:
                    a = mid + 1
                else:
                    b = mid
            psi[edge_ids[a]] += 1
            if n_path == 2:
                phi[u] += 1
                loaded[t] = False
    return -1


def run_got(
    g: Graph, cfg: GotConfig = GotConfig(), *, validate: bool = False,
    on_epoch: EpochHook | None = None,
) -> tuple[CentralityVector, dict[tuple[int, int], float]]:
    """Play the game for ``T`` epochs and return ``(Φ̄ per vertex, Ψ̄ per edge)``.

    Φ̄ sums the vdiamond counts of epochs ``0..T`` and divides by ``T``; Ψ̄
    sums the loaded traversals of epochs ``1..T`` and divides by ``T``.
    ``validate`` checks conservation after every epoch; ``on_epoch`` is
    called as ``on_epoch(epoch, phi, loaded_count)``.
    """
    n = g.vertex_count
    if n < 1:
        raise ValueError("GoT needs at least one vertex")
    epochs = cfg.epochs_for(g)
    phi0 = cfg.vdiamonds_for(g)
    expected = n * phi0
    csr = g.csr()
    cum = _sampling_table(g)
    rng = np.random.default_rng(cfg.seed)

    home = np.repeat(np.arange(n, dtype=np.int64), cfg.thieves_per_vertex)
    n_thieves = home.shape[0]
    # a loop-erased path is simple and grows by at most one vertex per epoch
    capacity = min(n, epochs + 1)
    paths = np.empty((n_thieves, capacity), dtype=np.int64 if n > 2**31 - 1 else np.int32)
    paths[:, 0] = home
    plen = np.ones(n_thieves, dtype=np.int64)
    loaded = np.zeros(n_thieves, dtype=np.bool_)
    phi = np.full(n, phi0, dtype=np.int64)
    psi = np.zeros(g.edge_count, dtype=np.int64)
    phi_sum = phi.copy()
    psi_sum = np.zeros_like(psi)

    for ep in range(1, epochs + 1):
        uniforms = rng.random(n_thieves)
        psi[:] = 0
        bad = _epoch(csr.indptr, csr.indices, cum, csr.edge_ids, phi, psi,
                     home, loaded, paths, plen, uniforms)
        if bad >= 0:
            raise RuntimeError(f"loaded thief {bad} has no path to walk back (epoch {ep})")
        phi_sum += phi
        psi_sum += psi
        if validate or on_epoch is not None:
            n_loaded = int(loaded.sum())
            if validate:
                _check_conservation(phi, n_loaded, expected, ep)
            if on_epoch is not None:
                on_epoch(ep, phi, n_loaded)
    return _finish(g, phi_sum, psi_sum, epochs)
