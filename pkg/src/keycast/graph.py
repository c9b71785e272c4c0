"""Acyclic multigraph instances and the cut / tight-set combinatorics on them.

Terminal-set indices are 1-based throughout (``D_1 .. D_l``), edge ids are
unique integers and node ids are ints or strings.  Every edge has unit
capacity; parallel edges are distinct edges with distinct ids.
"""

from __future__ import annotations

import heapq
import json
from collections import deque
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Hashable, Iterable

Node = Hashable

SECRECY_MODES = ("none", "node_eavesdropper", "custom")


class InstanceError(ValueError):
    """Raised for instances that violate the model (cycles, bad terminals, ...)."""


class InfeasibleInstance(InstanceError):
    pass


def node_key(n: Node):
    """Sort key putting ints before strings so mixed id types still order."""
    if isinstance(n, bool):
        return (2, str(n))
    if isinstance(n, int):
        return (0, n)
    return (1, str(n))


@dataclass(frozen=True)
class Edge:
    id: int
    tail: Node
    head: Node


@dataclass(frozen=True)
class Instance:
    nodes: tuple
    edges: tuple[Edge, ...]
    source: Node
    terminal_sets: tuple[frozenset, ...]
    secrecy_mode: str = "none"
    secrecy_sets: tuple[tuple[frozenset, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(sorted(set(self.nodes), key=node_key)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.id)))
        object.__setattr__(
            self, "terminal_sets", tuple(frozenset(d) for d in self.terminal_sets)
        )
        if self.secrecy_mode not in SECRECY_MODES:
            raise InstanceError(f"unknown secrecy mode {self.secrecy_mode!r}")
        self._validate()
        if self.secrecy_mode == "node_eavesdropper":
            sets = tuple(
                tuple(
                    frozenset(e.id for e in self.in_edges[v])
                    for v in self.nodes
                    if v != self.source and v not in d
                )
                for d in self.terminal_sets
            )
        elif self.secrecy_mode == "none":
            if any(any(b) for b in self.secrecy_sets):
                raise InstanceError("secrecy mode 'none' with nonempty secrecy sets")
            sets = tuple(() for _ in self.terminal_sets)
        else:
            sets = tuple(tuple(frozenset(b) for b in bs) for bs in self.secrecy_sets)
            if len(sets) != len(self.terminal_sets):
                raise InstanceError("need one secrecy collection per terminal set")
            known = set(self.edge_by_id)
            for bs in sets:
                for b in bs:
                    if not b <= known:
                        raise InstanceError(f"secrecy set refers to unknown edges {sorted(b - known)}")
        object.__setattr__(self, "secrecy_sets", sets)

    def _validate(self) -> None:
        nodes = set(self.nodes)
        if self.source not in nodes:
            raise InstanceError(f"source {self.source!r} is not a node")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise InstanceError("edge ids must be unique")
        for e in self.edges:
            if e.tail not in nodes or e.head not in nodes:
                raise InstanceError(f"edge {e.id} has an endpoint outside the node set")
            if e.tail == e.head:
                raise InstanceError(f"edge {e.id} is a self-loop")
        if not self.terminal_sets:
            raise InstanceError("instance has no terminal sets")
        seen: set = set()
        for i, d in enumerate(self.terminal_sets, start=1):
            if not d:
                raise InstanceError(f"terminal set {i} is empty")
            if not d <= nodes:
                raise InstanceError(f"terminal set {i} contains unknown nodes")
            if self.source in d:
                raise InstanceError("the source cannot be a terminal")
            if seen & d:
                raise InstanceError("terminal sets must be disjoint")
            seen |= d
        if self.in_edges[self.source]:
            raise InstanceError("the source must have no incoming edges")
        for t in seen:
            if self.out_edges[t]:
                raise InstanceError(f"terminal {t!r} has outgoing edges")
        self.node_rank  # raises on cycles

    @cached_property
    def edge_by_id(self) -> dict[int, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def in_edges(self) -> dict[Node, list[Edge]]:
        res: dict = {v: [] for v in self.nodes}
        for e in self.edges:
            res[e.head].append(e)
        return res

    @cached_property
    def out_edges(self) -> dict[Node, list[Edge]]:
        res: dict = {v: [] for v in self.nodes}
        for e in self.edges:
            res[e.tail].append(e)
        return res

    @cached_property
    def node_rank(self) -> dict[Node, int]:
        """Kahn ordering, always taking the smallest ready node id."""
        indeg = {v: len(self.in_edges[v]) for v in self.nodes}
        heap = [(node_key(v), v) for v in self.nodes if indeg[v] == 0]
        heapq.heapify(heap)
        rank = {}
        while heap:
            _, v = heapq.heappop(heap)
            rank[v] = len(rank)
            for e in self.out_edges[v]:
                indeg[e.head] -= 1
                if indeg[e.head] == 0:
                    heapq.heappush(heap, (node_key(e.head), e.head))
        if len(rank) != len(self.nodes):
            raise InstanceError("graph has a directed cycle")
        return rank

    @cached_property
    def edge_rank(self) -> dict[int, int]:
        order = sorted(self.edges, key=lambda e: (self.node_rank[e.tail], e.id))
        return {e.id: i for i, e in enumerate(order)}

    @cached_property
    def edges_in_order(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges, key=lambda e: self.edge_rank[e.id]))

    @cached_property
    def nodes_in_order(self) -> tuple:
        return tuple(sorted(self.nodes, key=self.node_rank.__getitem__))

    @property
    def terminals(self) -> frozenset:
        return frozenset().union(*self.terminal_sets)

    @property
    def num_sets(self) -> int:
        return len(self.terminal_sets)

    def terminal_set(self, j: int) -> frozenset:
        if not 1 <= j <= len(self.terminal_sets):
            raise IndexError(f"terminal set index {j} out of range 1..{len(self.terminal_sets)}")
        return self.terminal_sets[j - 1]

    def set_index_of(self, d: Node) -> int | None:
        for i, ds in enumerate(self.terminal_sets, start=1):
            if d in ds:
                return i
        return None

    def in_edge_ids(self, v: Node) -> list[int]:
        return [e.id for e in self.in_edges[v]]

    # --- JSON -----------------------------------------------------------------

    def to_json(self) -> dict:
        def sort_ids(ids):
            return sorted(ids, key=node_key)

        return {
            "nodes": list(self.nodes),
            "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in self.edges],
            "source": self.source,
            "terminal_sets": [sort_ids(d) for d in self.terminal_sets],
            "secrecy_mode": self.secrecy_mode,
            "secrecy_sets": [[sorted(b) for b in bs] for bs in self.secrecy_sets],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Instance":
        try:
            edges = tuple(Edge(int(e["id"]), e["tail"], e["head"]) for e in data["edges"])
            return cls(
                nodes=tuple(data["nodes"]),
                edges=edges,
                source=data["source"],
                terminal_sets=tuple(frozenset(d) for d in data["terminal_sets"]),
                secrecy_mode=data.get("secrecy_mode", "none"),
                secrecy_sets=tuple(
                    tuple(frozenset(b) for b in bs) for bs in data.get("secrecy_sets", [])
                ),
            )
        except (KeyError, TypeError) as exc:
            raise InstanceError(f"malformed instance: {exc}") from exc


def make_instance(
    edges: Iterable[tuple[Node, Node]],
    source: Node,
    terminal_sets: Iterable[Iterable[Node]],
    nodes: Iterable[Node] = (),
    secrecy_mode: str = "none",
) -> Instance:
    """Build an instance from ``(tail, head)`` pairs; edge ids follow list order."""
    edge_objs = tuple(Edge(i, u, v) for i, (u, v) in enumerate(edges))
    all_nodes = set(nodes) | {source}
    for e in edge_objs:
        all_nodes |= {e.tail, e.head}
    terminal_sets = [list(d) for d in terminal_sets]
    for d in terminal_sets:
        all_nodes |= set(d)
    return Instance(tuple(all_nodes), edge_objs, source, tuple(frozenset(d) for d in terminal_sets),
                    secrecy_mode=secrecy_mode)


def load_instance(path) -> Instance:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"{path}: not valid JSON ({exc})") from exc
    return Instance.from_json(data)


def save_instance(instance: Instance, path) -> None:
    with open(path, "w") as fh:
        json.dump(instance.to_json(), fh, indent=2)
        fh.write("\n")


# --- reachability and cuts ------------------------------------------------------


def topological_edge_order(instance: Instance) -> dict[int, int]:
    """Map edge id -> position; ties between edges of one tail go by edge id."""
    return dict(instance.edge_rank)


def reachable(instance: Instance, removed_edges: Iterable[int] = ()) -> tuple[set, set]:
    """Nodes and edges reachable from the source once ``removed_edges`` are cut."""
    removed = set(removed_edges)
    unknown = removed - set(instance.edge_by_id)
    if unknown:
        raise InstanceError(f"unknown edge ids {sorted(unknown)}")
    nodes = {instance.source}
    edges = set()
    queue = deque([instance.source])
    while queue:
        u = queue.popleft()
        for e in instance.out_edges[u]:
            if e.id in removed:
                continue
            edges.add(e.id)
            if e.head not in nodes:
                nodes.add(e.head)
                queue.append(e.head)
    return nodes, edges


def separating_edge(instance: Instance, d: Node) -> int | None:
    """Lowest-ranked single edge whose removal cuts ``d`` off, or None."""
    if d not in reachable(instance)[0]:
        raise InstanceError(f"node {d!r} is not reachable from the source")
    for e in instance.edges_in_order:
        if d not in reachable(instance, {e.id})[0]:
            return e.id
    return None


def cut_set(instance: Instance, j: int) -> frozenset[int]:
    """C_j: separating edges of the terminals in D_j (2-edge-connected ones add nothing)."""
    out = set()
    for d in instance.terminal_set(j):
        e = separating_edge(instance, d)
        if e is not None:
            out.add(e)
    return frozenset(out)


def tight_set_edge(instance: Instance, e: int) -> frozenset[int]:
    """T_e: edges disconnected from the source by removing ``e``."""
    _, alive = reachable(instance, {e})
    return frozenset(set(instance.edge_by_id) - alive - {e})


def tight_set_cut(instance: Instance, j: int, cut: Iterable[int] | None = None) -> frozenset[int]:
    """T_j: edges disconnected by removing C_j, not counting C_j itself."""
    c = set(cut_set(instance, j) if cut is None else cut)
    if not c:
        return frozenset()
    _, alive = reachable(instance, c)
    return frozenset(set(instance.edge_by_id) - alive - c)


# --- max flow -------------------------------------------------------------------


def _unit_max_flow(arcs: list[tuple], s, t) -> int:
    """Max flow with unit capacity per arc (parallel arcs add up)."""
    cap: dict = {}
    adj: dict = {}
    for u, v in arcs:
        cap[(u, v)] = cap.get((u, v), 0) + 1
        cap.setdefault((v, u), 0)
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    flow = 0
    while True:
        parent = {s: None}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for v in adj.get(u, ()):
                if v not in parent and cap[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            return flow
        v = t
        while parent[v] is not None:
            u = parent[v]
            cap[(u, v)] -= 1
            cap[(v, u)] += 1
            v = u
        flow += 1


def count_edge_disjoint_paths(instance: Instance, v: Node) -> int:
    if v == instance.source:
        raise InstanceError("target must differ from the source")
    if v not in instance.node_rank:
        raise InstanceError(f"unknown node {v!r}")
    arcs = [(e.tail, e.head) for e in instance.edges]
    return _unit_max_flow(arcs, instance.source, v)


def count_vertex_disjoint_paths(instance: Instance, v: Node) -> int:
    """Internally vertex-disjoint s-v paths.

    Paths are vertex sequences, so parallel copies of one (tail, head) pair
    count once; in particular a bundle of parallel s->v edges is one path.
    """
    s = instance.source
    if v == s:
        raise InstanceError("target must differ from the source")
    if v not in instance.node_rank:
        raise InstanceError(f"unknown node {v!r}")

    def out_side(n):
        return n if n in (s, v) else ("out", n)

    def in_side(n):
        return n if n in (s, v) else ("in", n)

    arcs = [(("in", n), ("out", n)) for n in instance.nodes if n not in (s, v)]
    arcs += sorted(
        {(out_side(e.tail), in_side(e.head)) for e in instance.edges},
        key=repr,
    )
    return _unit_max_flow(arcs, s, v)


# --- normalisation --------------------------------------------------------------


def normalize_terminals(instance: Instance) -> Instance:
    """Give every terminal exactly one in-edge by hanging a fresh node ``d'`` off it."""
    nodes = list(instance.nodes)
    edges = list(instance.edges)
    sets = [set(d) for d in instance.terminal_sets]
    secrecy = [list(bs) for bs in instance.secrecy_sets]
    next_id = max((e.id for e in edges), default=-1) + 1
    existing = set(nodes)
    for d in sorted(instance.terminals, key=node_key):
        in_ids = frozenset(instance.in_edge_ids(d))
        if len(in_ids) < 2:
            continue
        new = f"{d}'"
        while new in existing:
            new += "'"
        existing.add(new)
        nodes.append(new)
        edges.append(Edge(next_id, d, new))
        for ds in sets:
            if d in ds:
                ds.discard(d)
                ds.add(new)
        secrecy = [
            [frozenset({next_id}) if b == in_ids else b for b in bs] for bs in secrecy
        ]
        next_id += 1
    if nodes == list(instance.nodes):
        return instance
    if instance.secrecy_mode == "node_eavesdropper":
        # Re-deriving node sets on the new graph would treat the demoted
        # terminal d as an outsider of its own set; keep the remapped
        # originals (In(d) -> In(d')) as explicit edge sets instead.
        mode, sets_out = "custom", tuple(tuple(bs) for bs in secrecy)
    elif instance.secrecy_mode == "custom":
        mode, sets_out = "custom", instance.secrecy_sets
    else:
        mode, sets_out = "none", ()
    return Instance(tuple(nodes), tuple(edges), instance.source,
                    tuple(frozenset(d) for d in sets), mode, sets_out)


def prune_unreachable(instance: Instance) -> Instance:
    """Drop nodes and edges the source cannot reach; losing a terminal is an error."""
    alive_nodes, alive_edges = reachable(instance)
    lost = instance.terminals - alive_nodes
    if lost:
        raise InfeasibleInstance(
            f"terminals unreachable from the source: {sorted(lost, key=node_key)}"
        )
    if len(alive_nodes) == len(instance.nodes) and len(alive_edges) == len(instance.edges):
        return instance
    sets = instance.secrecy_sets
    if instance.secrecy_mode == "custom":
        sets = tuple(tuple(b & alive_edges for b in bs) for bs in sets)
    return replace(
        instance,
        nodes=tuple(alive_nodes),
        edges=tuple(e for e in instance.edges if e.id in alive_edges),
        secrecy_sets=sets,
    )
