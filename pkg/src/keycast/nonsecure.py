"""Non-secure multiple key-cast: feasibility test and two-stage edge coloring.

An edge colored ``alpha`` carries ``a + alpha*b``.  Stage one walks the edges
in topological order and gives each uncolored edge ``e`` (together with every
edge that only ``e`` feeds, the set T_e) a fresh color.  Stage two gives each
terminal set ``D_j`` a fresh color ``alpha_j`` on its cut set C_j and on T_j,
so every terminal of ``D_j`` receives ``K_j = a + alpha_j*b``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .dot import edge_colored_dot
from .field import choose_field
from .graph import (
    Instance,
    InstanceError,
    cut_set,
    node_key,
    normalize_terminals,
    prune_unreachable,
    reachable,
    tight_set_cut,
    tight_set_edge,
)
from .lincode import LinearCode, Report, validate_local_computability, verify_code

STAGE1 = "STAGE1"
STAGE2 = "STAGE2"


class InvariantError(AssertionError):
    """A property the construction relies on did not hold."""


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    witness: tuple | None = None  # (i, j, d): C_j cuts d in D_i off the source

    def __bool__(self):
        return self.feasible


@dataclass
class EdgeColoring:
    color: dict[int, int] = field(default_factory=dict)
    stage: dict[int, str] = field(default_factory=dict)
    second_stage_colors: dict[int, int] = field(default_factory=dict)
    stage1_color: dict[int, int] = field(default_factory=dict)
    cut_sets: dict[int, frozenset] = field(default_factory=dict)
    tight_sets: dict[int, frozenset] = field(default_factory=dict)
    num_colors: int = 0


def check_feasibility(instance: Instance) -> Feasibility:
    """Every d in D_i must stay reachable once C_j (j != i) is removed."""
    cuts = {j: cut_set(instance, j) for j in range(1, instance.num_sets + 1)}
    for j, c in cuts.items():
        alive = reachable(instance, c)[0]
        for i in range(1, instance.num_sets + 1):
            if i == j:
                continue
            for d in sorted(instance.terminal_set(i), key=str):
                if d not in alive:
                    return Feasibility(False, (i, j, d))
    return Feasibility(True)


def first_stage_coloring(
    instance: Instance, on_step: Callable[[EdgeColoring], None] | None = None
) -> EdgeColoring:
    coloring = EdgeColoring()
    for e in instance.edges_in_order:
        if e.id in coloring.color:
            continue
        tight = tight_set_edge(instance, e.id)
        clash = tight & coloring.color.keys()
        if clash:
            raise InvariantError(f"T_{e.id} contains previously colored edges {sorted(clash)}")
        coloring.num_colors += 1
        for x in tight | {e.id}:
            coloring.color[x] = coloring.num_colors
            coloring.stage[x] = STAGE1
        if on_step is not None:
            on_step(coloring)
    coloring.stage1_color = dict(coloring.color)
    return coloring


def second_stage_coloring(instance: Instance, stage1: EdgeColoring) -> EdgeColoring:
    ell = instance.num_sets
    cuts = {j: cut_set(instance, j) for j in range(1, ell + 1)}
    tights = {j: tight_set_cut(instance, j, cuts[j]) for j in range(1, ell + 1)}

    for j in range(1, ell + 1):
        for jj in range(j + 1, ell + 1):
            shared = tights[j] & tights[jj]
            if shared:
                raise InvariantError(f"T_{j} and T_{jj} share edges {sorted(shared)}")
    all_cut = sorted(set().union(*cuts.values()))
    by_color: dict[int, int] = {}
    for e in all_cut:
        c = stage1.color[e]
        if c in by_color:
            raise InvariantError(f"cut edges {by_color[c]} and {e} share stage-1 color {c}")
        by_color[c] = e

    out = EdgeColoring(
        color=dict(stage1.color),
        stage=dict(stage1.stage),
        stage1_color=dict(stage1.stage1_color or stage1.color),
        cut_sets=cuts,
        tight_sets=tights,
        num_colors=stage1.num_colors,
    )
    for j in range(1, ell + 1):
        if not cuts[j]:
            # Only on unnormalised input: every terminal of D_j is 2-edge-connected
            # and already hears some stage-1 color; reuse the first one it hears.
            d = min(instance.terminal_set(j), key=node_key)
            ins = sorted(instance.in_edges[d], key=lambda e: instance.edge_rank[e.id])
            if not ins:
                raise InvariantError(f"terminal {d!r} has no in-edges")
            out.second_stage_colors[j] = out.color[ins[0].id]
            continue
        out.num_colors += 1
        out.second_stage_colors[j] = out.num_colors
        for e in cuts[j] | tights[j]:
            out.color[e] = out.num_colors
            out.stage[e] = STAGE2
    return out


def build_code(instance: Instance, coloring: EdgeColoring, F=None) -> LinearCode:
    F = F or choose_field(coloring.num_colors)
    top = max(coloring.color.values(), default=0)
    if top >= F.order:
        raise InstanceError(f"color {top} does not fit in GF(2^{F.k})")
    return LinearCode(
        basis=("a", "b"),
        field=F,
        edge_msgs={e: (1, c) for e, c in coloring.color.items()},
        keys={j: (1, a) for j, a in coloring.second_stage_colors.items()},
    )


@dataclass
class KeycastResult:
    instance: Instance
    feasibility: Feasibility
    code: LinearCode | None = None
    coloring: EdgeColoring | None = None
    report: Report | None = None

    @property
    def ok(self) -> bool:
        return self.code is not None and self.report is not None and self.report.ok

    @property
    def rate(self) -> int:
        return 1 if self.ok else 0


def prepare(instance: Instance) -> Instance:
    if any(any(b) for b in instance.secrecy_sets):
        raise InstanceError("non-secure key-cast needs an instance without secrecy sets")
    return normalize_terminals(prune_unreachable(instance))


def construct(instance: Instance, exhaustive: bool = False) -> KeycastResult:
    """Prune, normalise, test feasibility, color, build and verify a rate-1 code."""
    inst = prepare(instance)
    feas = check_feasibility(inst)
    if not feas:
        return KeycastResult(inst, feas)
    stage1 = first_stage_coloring(inst)
    coloring = second_stage_coloring(inst, stage1)
    code = build_code(inst, coloring)
    report = verify_code(inst, code, exhaustive=exhaustive)
    return KeycastResult(inst, feas, code, coloring, report)


def partial_code(instance: Instance, coloring: EdgeColoring) -> LinearCode:
    """Code restricted to the edges colored so far (for intermediate checks)."""
    F = choose_field(max(coloring.num_colors, 1) + instance.num_sets)
    return LinearCode(("a", "b"), F, {e: (1, c) for e, c in coloring.color.items()}, {})


def stepwise_valid(instance: Instance) -> bool:
    """Run stage one checking local computability after every inductive step."""
    failures = []

    def step(col):
        if not validate_local_computability(instance, partial_code(instance, col), partial=True).ok:
            failures.append(dict(col.color))

    first_stage_coloring(instance, on_step=step)
    return not failures


def to_dot(instance: Instance, coloring: EdgeColoring) -> str:
    return edge_colored_dot(instance, coloring)
