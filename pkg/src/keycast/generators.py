"""Instance families: the three-layer gap network, the secure tight example and
its many-set variant, and seeded random DAGs for property tests."""

from __future__ import annotations

import random

from .graph import Edge, Instance, InstanceError


def gen_fig3(ell: int) -> Instance:
    """s =2 parallel edges=> x -> d_1 .. d_ell, one singleton terminal set per d_i."""
    if ell < 1:
        raise InstanceError("need at least one terminal set")
    edges = [Edge(0, "s", "x"), Edge(1, "s", "x")]
    edges += [Edge(i + 1, "x", f"d{i}") for i in range(1, ell + 1)]
    nodes = ["s", "x"] + [f"d{i}" for i in range(1, ell + 1)]
    return Instance(tuple(nodes), tuple(edges), "s",
                    tuple(frozenset({f"d{i}"}) for i in range(1, ell + 1)))


def _secure_core(ell: int, name) -> Instance:
    # x and y each get two parallel edges from s, z hears from both; the first
    # terminal of every set listens to x and z, the second to y and z.
    edges = [("s", "x"), ("s", "x"), ("s", "y"), ("s", "y"), ("x", "z"), ("y", "z")]
    sets = []
    for i in range(1, ell + 1):
        d1, d2 = name(i, 1), name(i, 2)
        edges += [("x", d1), ("z", d1), ("y", d2), ("z", d2)]
        sets.append(frozenset({d1, d2}))
    nodes = {"s", "x", "y", "z"} | {d for ds in sets for d in ds}
    return Instance(
        tuple(nodes),
        tuple(Edge(i, u, v) for i, (u, v) in enumerate(edges)),
        "s",
        tuple(sets),
        secrecy_mode="node_eavesdropper",
    )


def gen_secure_tight() -> Instance:
    """Two sets {d11, d12}, {d21, d22}; eavesdroppers x, y, z and the other set."""
    return _secure_core(2, lambda i, j: f"d{i}{j}")


def gen_fig4(ell: int) -> Instance:
    """The tight example with ``ell`` terminal pairs hung off the same x, y, z core."""
    if ell < 1:
        raise InstanceError("need at least one terminal set")
    return _secure_core(ell, lambda i, j: f"d{i}_{j}")


def gen_random_dag(
    seed: int,
    nodes: int,
    edge_prob: float = 0.4,
    ell: int = 2,
    terminals_per_set: int = 1,
    parallel_prob: float = 0.3,
) -> Instance:
    """Random DAG on ``0 .. nodes-1`` with source 0 and terminals at the end.

    Node ids follow a topological order.  Every non-source node gets at least
    one in-edge from an earlier non-terminal node, so all terminals are
    reachable; extra parallel edges are drawn with ``parallel_prob`` to make
    2-connected nodes common.
    """
    n_term = ell * terminals_per_set
    if ell < 1 or terminals_per_set < 1:
        raise InstanceError("need ell >= 1 and terminals_per_set >= 1")
    if nodes < n_term + 1:
        raise InstanceError(f"{nodes} nodes cannot hold a source and {n_term} terminals")
    if not 0 <= edge_prob <= 1 or not 0 <= parallel_prob <= 1:
        raise InstanceError("probabilities must lie in [0, 1]")
    rng = random.Random(seed)
    inner = nodes - n_term
    edges: list[tuple[int, int]] = []
    for v in range(1, nodes):
        tails = range(min(v, inner))
        incoming = []
        for u in tails:
            if rng.random() < edge_prob:
                incoming.append(u)
                if rng.random() < parallel_prob:
                    incoming.append(u)
        if not incoming:
            incoming.append(rng.choice(tails))
        edges += [(u, v) for u in incoming]
    terms = list(range(inner, nodes))
    rng.shuffle(terms)
    sets = tuple(
        frozenset(terms[i * terminals_per_set : (i + 1) * terminals_per_set]) for i in range(ell)
    )
    return Instance(
        tuple(range(nodes)),
        tuple(Edge(i, u, v) for i, (u, v) in enumerate(edges)),
        0,
        sets,
    )
