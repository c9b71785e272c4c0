"""Graphviz DOT renderings of colored instances."""

from __future__ import annotations

from .graph import Instance, node_key

# Fill colors for terminal sets; cycles when there are more sets than entries.
PALETTE = (
    "#e41a1c", "#984ea3", "#377eb8", "#4daf4a", "#ff7f00",
    "#a65628", "#f781bf", "#999999", "#66c2a5", "#ffd92f",
)


def _q(x) -> str:
    return '"' + str(x).replace('"', r"\"") + '"'


def edge_colored_dot(instance: Instance, coloring) -> str:
    lines = ["digraph keycast {", "  rankdir=LR;"]
    for v in sorted(instance.nodes, key=node_key):
        i = instance.set_index_of(v)
        if v == instance.source:
            lines.append(f"  {_q(v)} [shape=doublecircle];")
        elif i is not None:
            lines.append(f'  {_q(v)} [shape=box, label="{v}\\nK_{i}"];')
        else:
            lines.append(f"  {_q(v)};")
    for e in instance.edges_in_order:
        c = coloring.color.get(e.id)
        stage = coloring.stage.get(e.id, "")
        label = f"α={c} [{stage}]" if c is not None else "uncolored"
        lines.append(f'  {_q(e.tail)} -> {_q(e.head)} [label="{label}", id="e{e.id}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def vertex_colored_dot(instance: Instance, coloring) -> str:
    lines = ["digraph securecast {", "  rankdir=LR;"]
    for i, ds in enumerate(instance.terminal_sets, start=1):
        fill = PALETTE[(i - 1) % len(PALETTE)]
        lines.append(f"  subgraph cluster_D{i} {{")
        lines.append(f'    label="D_{i}"; style=dashed;')
        for d in sorted(ds, key=node_key):
            lines.append(
                f'    {_q(d)} [shape=box, style=filled, fillcolor="{fill}", '
                f'label="{d}\\nc={coloring.color[d]} [{_kind(coloring, d)}]"];'
            )
        lines.append("  }")
    for v in sorted(instance.nodes, key=node_key):
        if v in instance.terminals:
            continue
        shape = "doublecircle" if v == instance.source else "ellipse"
        lines.append(f'  {_q(v)} [shape={shape}, label="{v}\\nc={coloring.color[v]} [{_kind(coloring, v)}]"];')
    for e in instance.edges_in_order:
        lines.append(f'  {_q(e.tail)} -> {_q(e.head)} [id="e{e.id}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _kind(coloring, v) -> str:
    kind = coloring.kind.get(v)
    if kind is None:
        return "S"
    return "N" if kind == "NEWLY_COLORED" else "P"
