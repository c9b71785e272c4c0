"""Secure multiple key-cast by vertex coloring and secret sharing.

Source symbols are ``(s, a, b)``.  Every node ``u`` ends up knowing the two
shares ``s + c_u a`` and ``a + c_u b`` for its color ``c_u``, and terminal set
``D_i`` uses the key ``s + c_{d_i} a``.  A node learns nothing about a key
whose color differs from its own, so with terminal colors unique to their
set, every node outside ``D_i`` is blind to ``K_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .dot import vertex_colored_dot
from .field import choose_field
from .graph import (
    Instance,
    InstanceError,
    count_edge_disjoint_paths,
    count_vertex_disjoint_paths,
    node_key,
    prune_unreachable,
)
from .lincode import LinearCode, Report, rank, verify_code
from .nonsecure import InvariantError

NEWLY_COLORED = "NEWLY_COLORED"
COLOR_PRESERVING = "COLOR_PRESERVING"


@dataclass(frozen=True)
class Conditions:
    ok: bool
    node: object = None
    reason: str = ""

    def __bool__(self):
        return self.ok


@dataclass
class VertexColoring:
    color: dict = field(default_factory=dict)
    kind: dict = field(default_factory=dict)
    representative: dict[int, object] = field(default_factory=dict)
    num_colors: int = 0


def check_conditions(instance: Instance) -> Conditions:
    """Terminals need two vertex-disjoint paths, other nodes two edge-disjoint ones."""
    for d in sorted(instance.terminals, key=lambda v: instance.node_rank[v]):
        n = count_vertex_disjoint_paths(instance, d)
        if n < 2:
            return Conditions(False, d, f"terminal {d} has {n} vertex-disjoint path(s) from the source")
    for v in instance.nodes_in_order:
        if v == instance.source or v in instance.terminals:
            continue
        n = count_edge_disjoint_paths(instance, v)
        if n < 2:
            return Conditions(False, v, f"node {v} has {n} edge-disjoint path(s) from the source")
    return Conditions(True)


def vertex_coloring(instance: Instance, check: bool = True) -> VertexColoring:
    """Color nodes in topological order, then give each terminal set one color.

    ``check=False`` skips the connectivity precondition; the classification is
    still well defined on any DAG whose nodes are all reachable.
    """
    if check:
        cond = check_conditions(instance)
        if not cond:
            raise InstanceError(cond.reason)
    s = instance.source
    col = VertexColoring()
    col.color[s] = 1
    col.num_colors = 1
    for u in instance.nodes_in_order:
        if u == s:
            continue
        tails = [e.tail for e in instance.in_edges[u]]
        if not tails:
            raise InstanceError(f"node {u!r} is not reachable from the source")
        tail_colors = {col.color[t] for t in tails}
        if all(t == s for t in tails):
            col.num_colors += 1
            col.color[u] = col.num_colors
            col.kind[u] = COLOR_PRESERVING
        elif len(tail_colors) > 1:
            col.num_colors += 1
            col.color[u] = col.num_colors
            col.kind[u] = NEWLY_COLORED
        else:
            col.color[u] = tail_colors.pop()
            col.kind[u] = COLOR_PRESERVING
    for i, ds in enumerate(instance.terminal_sets, start=1):
        rep = min(ds, key=node_key)
        col.representative[i] = rep
        for d in ds:
            col.color[d] = col.color[rep]
    return col


def classify_oracle(instance: Instance, v) -> bool:
    """True when ``v`` is 2-vertex-connected from the source (max-flow answer)."""
    return count_vertex_disjoint_paths(instance, v) >= 2


def node_shares(c: int) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
    """Coefficients of ``s + c a`` and ``a + c b`` over the basis (s, a, b)."""
    return (1, c, 0), (0, 1, c)


def build_secure_code(instance: Instance, coloring: VertexColoring, F=None) -> LinearCode:
    F = F or choose_field(coloring.num_colors)
    if max(coloring.color.values()) >= F.order:
        raise InstanceError(f"colors do not fit in GF(2^{F.k})")
    s = instance.source
    msgs: dict[int, tuple] = {}
    for u in instance.nodes_in_order:
        if u == s:
            continue
        cu = coloring.color[u]
        ins = sorted(instance.in_edges[u], key=lambda e: instance.edge_rank[e.id])
        if coloring.kind[u] == NEWLY_COLORED:
            first = ins[0]
            second = next(
                (e for e in ins if coloring.color[e.tail] != coloring.color[first.tail]), None
            )
            if second is None:
                raise InvariantError(f"newly colored node {u!r} lacks differently colored in-neighbors")
            chosen = {}
            for e in (first, second):
                cv = coloring.color[e.tail]
                # (s + c_v a) + c_u (a + c_v b)
                chosen[e.id] = (1, cv ^ cu, F.mul(cv, cu))
        else:
            if len(ins) < 2:
                raise InvariantError(f"color preserving node {u!r} has fewer than two in-edges")
            one, two = node_shares(cu)
            chosen = {ins[0].id: one, ins[1].id: two}
        for e in ins:
            msgs[e.id] = chosen.get(e.id, (0, 0, 0))
    keys = {i: node_shares(coloring.color[d])[0] for i, d in coloring.representative.items()}
    return LinearCode(("s", "a", "b"), F, msgs, keys)


def as_node_eavesdropper(instance: Instance) -> Instance:
    if instance.secrecy_mode == "node_eavesdropper":
        return instance
    if instance.secrecy_mode == "custom":
        raise InstanceError("secure key-cast only supports node-eavesdropper secrecy sets")
    return replace(instance, secrecy_mode="node_eavesdropper", secrecy_sets=())


def verify_secure(instance: Instance, code: LinearCode, exhaustive: bool = False,
                  coloring: VertexColoring | None = None) -> Report:
    """Decoding, PWI and single-node secrecy; plus share-span checks given a coloring."""
    report = verify_code(as_node_eavesdropper(instance), code, exhaustive=exhaustive)
    if coloring is not None:
        F = code.field
        for u in instance.nodes_in_order:
            if u == instance.source:
                continue
            received = [code.edge_msgs[e] for e in instance.in_edge_ids(u)]
            shares = list(node_shares(coloring.color[u]))
            ok = rank(received, F) == 2 and rank(received + shares, F) == 2
            report.add(f"shares of {u} span exactly its pair", ok)
    return report


@dataclass
class SecureResult:
    instance: Instance
    conditions: Conditions
    code: LinearCode | None = None
    coloring: VertexColoring | None = None
    report: Report | None = None

    @property
    def ok(self) -> bool:
        return self.code is not None and self.report is not None and self.report.ok

    @property
    def rate(self) -> int:
        return 1 if self.ok else 0


def construct_secure(instance: Instance, exhaustive: bool = False) -> SecureResult:
    inst = as_node_eavesdropper(prune_unreachable(instance))
    cond = check_conditions(inst)
    if not cond:
        return SecureResult(inst, cond)
    coloring = vertex_coloring(inst, check=False)
    code = build_secure_code(inst, coloring)
    report = verify_secure(inst, code, exhaustive=exhaustive, coloring=coloring)
    return SecureResult(inst, cond, code, coloring, report)


def to_dot(instance: Instance, coloring: VertexColoring) -> str:
    return vertex_colored_dot(instance, coloring)
