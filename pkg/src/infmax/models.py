"""Diffusion model families and live-edge simulation sampling.

Four model kinds share one live-edge representation:

* ``ic``      -- every edge live independently with its probability.
* ``lt``      -- threshold dynamics in live-edge form: each node keeps at
                 most one incoming edge, edge ``(u, v)`` with probability
                 equal to its weight, no edge with the leftover mass.
* ``bdep``    -- grouped edges (at most ``b`` per group, shared tail) are
                 all live or all dead together; ungrouped edges behave as
                 in ``ic``.
* ``mixture`` -- draw one component model by weight, then sample it.

A :class:`Simulation` is one i.i.d. draw: a boolean live mask over the
model's edge list plus the ``(master_seed, sim_index)`` that produced it.
Reachability within ``tau`` steps is a BFS over live edges.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .graph import Graph, as_seed_tuple, read_edge_list, write_edge_list
from . import rng

IC = "ic"
LT = "lt"
BDEP = "bdep"
MIXTURE = "mixture"

_WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Simulation:
    """One draw of concurrently live edges.

    ``live`` indexes the owning model's edge list.  Identical
    ``(master_seed, sim_index)`` always reproduce identical live edges.
    """
    live: np.ndarray
    master_seed: int
    sim_index: int
    component: int | None = None

    def live_edge_ids(self) -> np.ndarray:
        return np.flatnonzero(self.live)


@dataclass(frozen=True, eq=False)
class DiffusionModel:
    """A tagged model family owning a graph (the edge union, for mixtures)."""
    kind: str
    graph: Graph
    b: int | None = None
    components: tuple["DiffusionModel", ...] = ()
    component_weights: np.ndarray | None = None
    component_offsets: np.ndarray | None = None

    @property
    def num_nodes(self) -> int:
        return self.graph.num_nodes

    @property
    def min_component_weight(self) -> float:
        if self.kind != MIXTURE:
            raise ValueError("min_component_weight is defined for mixtures only")
        return float(self.component_weights.min())

    @cached_property
    def _plan(self):
        return _sampling_plan(self)

    @cached_property
    def marginal_edge_probs(self) -> np.ndarray:
        """Per-edge marginal live probability, dependence ignored."""
        if self.kind == MIXTURE:
            probs = np.array(self.graph.probs, dtype=np.float64)
            for c, (off, comp) in enumerate(zip(self.component_offsets, self.components)):
                m = comp.graph.num_edges
                probs[off:off + m] *= self.component_weights[c]
            return probs
        return np.array(self.graph.probs, dtype=np.float64)


def ic_model(graph: Graph) -> DiffusionModel:
    if np.any(graph.groups >= 0):
        raise ValueError("independent-cascade models take ungrouped edges only")
    return DiffusionModel(IC, graph)


def lt_model(graph: Graph) -> DiffusionModel:
    """Threshold model; edge probabilities are the incoming weights."""
    if np.any(graph.groups >= 0):
        raise ValueError("threshold models take ungrouped edges only")
    if graph.num_edges:
        sums = np.bincount(graph.heads, weights=graph.probs, minlength=graph.num_nodes)
        if sums.max() > 1.0 + _WEIGHT_SUM_TOL:
            raise ValueError("incoming weights must sum to at most 1 per node")
    return DiffusionModel(LT, graph)


def bdep_model(graph: Graph, b: int) -> DiffusionModel:
    if int(b) < 1:
        raise ValueError("group size bound must be at least 1")
    b = int(b)
    for gid in np.unique(graph.groups[graph.groups >= 0]):
        size = int(np.count_nonzero(graph.groups == gid))
        if size > b:
            raise ValueError(f"group {gid} has {size} edges, bound is {b}")
    return DiffusionModel(BDEP, graph, b=b)


def mixture_model(components) -> DiffusionModel:
    """Mixture of models on one node set; nested mixtures are flattened."""
    flat: list[tuple[DiffusionModel, float]] = []
    for model, weight in components:
        weight = float(weight)
        if weight <= 0.0:
            raise ValueError("component weights must be positive")
        if model.kind == MIXTURE:
            for sub, w in zip(model.components, model.component_weights):
                flat.append((sub, weight * float(w)))
        else:
            flat.append((model, weight))
    if not flat:
        raise ValueError("mixture needs at least one component")
    total = sum(w for _, w in flat)
    if abs(total - 1.0) > _WEIGHT_SUM_TOL:
        raise ValueError("component weights must sum to 1")
    first = flat[0][0]
    for model, _ in flat[1:]:
        if model.num_nodes != first.num_nodes:
            raise ValueError("mixture components must share the node set")
        if not np.array_equal(model.graph.node_weights, first.graph.node_weights):
            raise ValueError("mixture components must share node weights")
    # Union graph: concatenated component edges, groups remapped to stay disjoint.
    tails, heads, probs, groups = [], [], [], []
    offsets = np.zeros(len(flat), dtype=np.int64)
    group_base = 0
    for c, (model, _) in enumerate(flat):
        g = model.graph
        offsets[c] = sum(len(t) for t in tails)
        tails.append(g.tails)
        heads.append(g.heads)
        probs.append(g.probs)
        remapped = np.where(g.groups >= 0, g.groups + group_base, -1)
        groups.append(remapped.astype(np.int64))
        if g.groups.size and g.groups.max() >= 0:
            group_base += int(g.groups.max()) + 1
    union = Graph(first.num_nodes,
                  np.concatenate(tails) if tails else np.empty(0, np.int64),
                  np.concatenate(heads) if heads else np.empty(0, np.int64),
                  np.concatenate(probs) if probs else np.empty(0, np.float64),
                  np.concatenate(groups) if groups else np.empty(0, np.int64),
                  first.graph.node_weights)
    return DiffusionModel(
        MIXTURE, union,
        components=tuple(m for m, _ in flat),
        component_weights=np.array([w for _, w in flat], dtype=np.float64),
        component_offsets=offsets)


# ---------------------------------------------------------------------------
# Sampling
#
# Each simulation owns a fixed-width block of a single keyed counter
# stream: the draw for (master_seed, sim_index, unit j) sits at stream
# word sim_index * stride + j, where stride rounds the model's unit count
# up to the generator's 4-word counter block.  Single simulations jump to
# their block with an O(1) counter advance; pools draw whole ranges in
# one vectorized call.  Both paths produce identical bits.

def _stride(width: int) -> int:
    return ((width + 3) // 4) * 4


def _sim_uniforms(master_seed: int, stream_id: int, sim_index: int, width: int) -> np.ndarray:
    g = rng.stream(master_seed, stream_id, 0)
    if width == 0:
        return np.empty(0, dtype=np.float64)
    g.bit_generator.advance(int(sim_index) * (_stride(width) // 4))
    return g.random(width)


def _block_uniforms(master_seed: int, stream_id: int, start: int, count: int,
                    width: int) -> np.ndarray:
    g = rng.stream(master_seed, stream_id, 0)
    if width == 0:
        return np.empty((count, 0), dtype=np.float64)
    stride = _stride(width)
    g.bit_generator.advance(int(start) * (stride // 4))
    return g.random(int(count) * stride).reshape(int(count), stride)[:, :width]


def _sampling_plan(model: DiffusionModel):
    g = model.graph
    if model.kind == LT:
        per_node = []
        for v in range(g.num_nodes):
            edges = g.in_edges(v)
            if edges.size:
                per_node.append((v, edges, np.cumsum(g.probs[edges])))
        return per_node
    if model.kind == BDEP:
        gids = np.unique(g.groups[g.groups >= 0])
        units = []
        for gid in gids:
            members = np.flatnonzero(g.groups == gid)
            units.append((members, float(g.probs[members[0]])))
        loose = np.flatnonzero(g.groups < 0)
        return units, loose
    if model.kind == MIXTURE:
        cum = np.cumsum(model.component_weights)
        cum[-1] = 1.0
        return cum
    return None


def _sample_live_block(model: DiffusionModel, master_seed: int, start: int, count: int):
    """Live masks for ``count`` consecutive simulation indices."""
    g = model.graph
    m = g.num_edges
    if model.kind == IC:
        u = _block_uniforms(master_seed, rng.STREAM_EDGES, start, count, m)
        return u < g.probs, None
    if model.kind == LT:
        u = _block_uniforms(master_seed, rng.STREAM_NODES, start, count, g.num_nodes)
        live = np.zeros((count, m), dtype=bool)
        for v, edges, cum in model._plan:
            picks = np.searchsorted(cum, u[:, v], side="right")
            for slot in range(edges.size):
                live[picks == slot, edges[slot]] = True
        return live, None
    if model.kind == BDEP:
        units, loose = model._plan
        u = _block_uniforms(master_seed, rng.STREAM_UNITS, start, count,
                            len(units) + loose.size)
        live = np.zeros((count, m), dtype=bool)
        for j, (members, p) in enumerate(units):
            live[:, members] = (u[:, j] < p)[:, None]
        if loose.size:
            live[:, loose] = u[:, len(units):] < g.probs[loose]
        return live, None
    if model.kind == MIXTURE:
        cum = model._plan
        u = _block_uniforms(master_seed, rng.STREAM_MIXTURE, start, count, 1)[:, 0]
        comps = np.searchsorted(cum, u, side="right").astype(np.int64)
        live = np.zeros((count, m), dtype=bool)
        for c, comp in enumerate(model.components):
            rows = comps == c
            if not rows.any():
                continue
            sub, _ = _sample_live_block(comp, master_seed, start, count)
            off = int(model.component_offsets[c])
            live[rows, off:off + sub.shape[1]] = sub[rows]
        return live, comps
    raise ValueError(f"unknown model kind {model.kind!r}")


def _sample_live(model: DiffusionModel, master_seed: int, sim_index: int):
    g = model.graph
    m = g.num_edges
    if model.kind == IC:
        u = _sim_uniforms(master_seed, rng.STREAM_EDGES, sim_index, m)
        return u < g.probs, None
    if model.kind == LT:
        live = np.zeros(m, dtype=bool)
        u = _sim_uniforms(master_seed, rng.STREAM_NODES, sim_index, g.num_nodes)
        for v, edges, cum in model._plan:
            pick = int(np.searchsorted(cum, u[v], side="right"))
            if pick < edges.size:
                live[edges[pick]] = True
        return live, None
    if model.kind == BDEP:
        units, loose = model._plan
        live = np.zeros(m, dtype=bool)
        u = _sim_uniforms(master_seed, rng.STREAM_UNITS, sim_index,
                          len(units) + loose.size)
        for j, (members, p) in enumerate(units):
            if u[j] < p:
                live[members] = True
        if loose.size:
            live[loose] = u[len(units):] < g.probs[loose]
        return live, None
    if model.kind == MIXTURE:
        cum = model._plan
        u = _sim_uniforms(master_seed, rng.STREAM_MIXTURE, sim_index, 1)[0]
        comp = int(np.searchsorted(cum, u, side="right"))
        sub_live, _ = _sample_live(model.components[comp], master_seed, sim_index)
        live = np.zeros(m, dtype=bool)
        off = int(model.component_offsets[comp])
        live[off:off + sub_live.size] = sub_live
        return live, comp
    raise ValueError(f"unknown model kind {model.kind!r}")


def sample_simulation(model: DiffusionModel, master_seed: int, sim_index: int) -> Simulation:
    """Draw simulation ``sim_index`` of the stream keyed by ``master_seed``."""
    live, comp = _sample_live(model, master_seed, sim_index)
    live.setflags(write=False)
    return Simulation(live, rng.check_master_seed(master_seed), int(sim_index), comp)


def sample_pool(model: DiffusionModel, master_seed: int, count: int,
                start: int = 0, threads: int = 1):
    """Live masks for simulation indices ``start .. start+count-1``.

    Returns ``(live, components)`` where ``live`` is a ``(count, m)``
    boolean matrix and ``components`` is an int array for mixtures and
    ``None`` otherwise.  The result is independent of ``threads``.
    """
    rng.check_master_seed(master_seed)
    m = model.graph.num_edges
    live = np.empty((count, m), dtype=bool)
    comps = np.empty(count, dtype=np.int64) if model.kind == MIXTURE else None

    def fill(lo, hi):
        rows, row_comps = _sample_live_block(model, master_seed, start + lo, hi - lo)
        live[lo:hi] = rows
        if comps is not None:
            comps[lo:hi] = row_comps

    threads = max(1, int(threads))
    if threads == 1 or count < 2 * threads:
        fill(0, count)
    else:
        bounds = np.linspace(0, count, threads + 1).astype(int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(fill, bounds[t], bounds[t + 1]) for t in range(threads)]
            for f in futures:
                f.result()
    return live, comps


# ---------------------------------------------------------------------------
# Reachability

class ReachScratch:
    """Reusable BFS workspace (visited epochs + queue) for one node count."""

    def __init__(self, num_nodes: int):
        self.visited = np.zeros(num_nodes, dtype=np.int64)
        self.depth = np.zeros(num_nodes, dtype=np.int64)
        self.queue = np.empty(num_nodes, dtype=np.int64)
        self.epoch = 0


def _bfs(graph: Graph, live: np.ndarray, seeds, tau: int,
         scratch: ReachScratch | None, reverse: bool) -> np.ndarray:
    if scratch is None or scratch.visited.shape[0] != graph.num_nodes:
        scratch = ReachScratch(graph.num_nodes)
    scratch.epoch += 1
    epoch = scratch.epoch
    visited, depth, queue = scratch.visited, scratch.depth, scratch.queue
    head = 0
    for s in seeds:
        visited[s] = epoch
        depth[s] = 0
        queue[head] = s
        head += 1
    tail_ptr = 0
    endpoint = graph.tails if reverse else graph.heads
    edges_of = graph.in_edges if reverse else graph.out_edges
    while tail_ptr < head:
        v = int(queue[tail_ptr])
        tail_ptr += 1
        d = int(depth[v])
        if d >= tau:
            continue
        for e in edges_of(v):
            if not live[e]:
                continue
            w = int(endpoint[e])
            if visited[w] != epoch:
                visited[w] = epoch
                depth[w] = d + 1
                queue[head] = w
                head += 1
    out = np.sort(queue[:head].copy())
    return out


def reach_set(graph: Graph, sim: Simulation, seeds, tau: int,
              scratch: ReachScratch | None = None) -> np.ndarray:
    """Nodes reachable from ``seeds`` by live paths of length <= ``tau``."""
    seeds = as_seed_tuple(graph.num_nodes, seeds)
    if tau < 0:
        raise ValueError("step limit must be nonnegative")
    return _bfs(graph, sim.live, seeds, int(tau), scratch, reverse=False)


def reach_value(graph: Graph, sim: Simulation, seeds, tau: int,
                scratch: ReachScratch | None = None) -> float:
    """Total node weight of the reachable set (its size, for unit weights)."""
    ids = reach_set(graph, sim, seeds, tau, scratch)
    return float(graph.node_weights[ids].sum())


def reverse_reach_set(graph: Graph, live: np.ndarray, target: int, tau: int,
                      scratch: ReachScratch | None = None) -> np.ndarray:
    """Nodes that reach ``target`` by live paths of length <= ``tau``."""
    return _bfs(graph, live, (int(target),), int(tau), scratch, reverse=True)


def reach_mask_batch(graph: Graph, live: np.ndarray, seeds, tau: int) -> np.ndarray:
    """Active-node masks for a stack of simulations.

    ``live`` is ``(rows, m)``; returns ``(rows, n)`` booleans.  Matches
    :func:`reach_set` row by row.
    """
    seeds = as_seed_tuple(graph.num_nodes, seeds)
    rows = live.shape[0]
    active = np.zeros((rows, graph.num_nodes), dtype=bool)
    active[:, list(seeds)] = True
    frontier = active.copy()
    tails, heads = graph.tails, graph.heads
    for _ in range(int(tau)):
        nxt = np.zeros_like(active)
        for e in range(graph.num_edges):
            nxt[:, heads[e]] |= frontier[:, tails[e]] & live[:, e]
        nxt &= ~active
        if not nxt.any():
            break
        active |= nxt
        frontier = nxt
    return active


def reach_values_batch(graph: Graph, live: np.ndarray, seeds, tau: int) -> np.ndarray:
    return reach_mask_batch(graph, live, seeds, tau) @ graph.node_weights


# ---------------------------------------------------------------------------
# Model reduction (conditioning on a set being already active)

def reduce_model(model: DiffusionModel, active) -> DiffusionModel:
    """Restrict an independent-cascade model to the nodes outside ``active``.

    Edges among the kept nodes keep their probabilities; node weights are
    restricted, so queries on the result measure marginal value.  The kept
    nodes are relabelled densely and the original ids recorded as labels.
    """
    if model.kind != IC:
        raise ValueError("reduction implemented for IC only")
    g = model.graph
    if active:
        active = as_seed_tuple(g.num_nodes, active)
    removed = set(active)
    kept = [v for v in range(g.num_nodes) if v not in removed]
    remap = {v: i for i, v in enumerate(kept)}
    edges = []
    for t, h, p in ((int(g.tails[e]), int(g.heads[e]), float(g.probs[e]))
                    for e in range(g.num_edges)):
        if t in remap and h in remap:
            edges.append((remap[t], remap[h], p))
    reduced = Graph.from_edges(len(kept), edges,
                               node_weights=g.node_weights[kept],
                               labels=tuple(kept))
    return ic_model(reduced)


# ---------------------------------------------------------------------------
# Model files: a JSON document referencing edge-list graph files.

def save_model(model: DiffusionModel, path) -> None:
    """Write ``path`` (JSON) plus edge-list companions next to it."""
    path = Path(path)
    stem = path.name.rsplit(".", 1)[0]
    if model.kind == MIXTURE:
        entries = []
        for c, comp in enumerate(model.components):
            comp_path = path.with_name(f"{stem}.comp{c}.model")
            save_model(comp, comp_path)
            entries.append({"path": comp_path.name,
                            "weight": float(model.component_weights[c])})
        doc = {"kind": MIXTURE, "components": entries}
    else:
        graph_path = path.with_name(stem + ".edges")
        write_edge_list(model.graph, graph_path)
        doc = {"kind": model.kind, "graph_path": graph_path.name}
        if model.kind == BDEP:
            doc["b"] = int(model.b)
    path.write_text(json.dumps(doc, indent=2) + "\n")


def load_model(path) -> DiffusionModel:
    path = Path(path)
    doc = json.loads(path.read_text())
    kind = doc.get("kind")
    if kind == MIXTURE:
        components = [(load_model(path.parent / entry["path"]), float(entry["weight"]))
                      for entry in doc["components"]]
        return mixture_model(components)
    graph = read_edge_list(path.parent / doc["graph_path"])
    if kind == IC:
        return ic_model(graph)
    if kind == LT:
        overrides = doc.get("lt_weights")
        if overrides:
            probs = np.array(graph.probs)
            index = {(int(graph.tails[e]), int(graph.heads[e])): e
                     for e in range(graph.num_edges)}
            for t, h, w in overrides:
                if (int(t), int(h)) not in index:
                    raise ValueError(f"lt_weights names missing edge ({t}, {h})")
                probs[index[(int(t), int(h))]] = float(w)
            graph = Graph(graph.num_nodes, graph.tails, graph.heads, probs,
                          graph.groups, graph.node_weights, graph.labels)
        return lt_model(graph)
    if kind == BDEP:
        return bdep_model(graph, int(doc["b"]))
    raise ValueError(f"unknown model kind {kind!r}")
