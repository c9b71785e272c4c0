"""
Secure key-cast by vertex coloring
==================================

Relays x, y, z and two terminal pairs, wired so that every terminal has two
vertex-disjoint paths from the source.  Each node ends up holding two shares of its own color;
a key whose color differs from the node's stays hidden from it.
"""

# %%
import numpy as np

from keycast.generators import gen_secure_tight
from keycast.lincode import exhaustive_mi_oracle
from keycast.secure import check_conditions, construct_secure

inst = gen_secure_tight()
print("conditions:", check_conditions(inst))

# %% Colors and their classification.
res = construct_secure(inst)
col = res.coloring
for v in inst.nodes_in_order:
    print(f"{v:>4}  color {col.color[v]}  {col.kind.get(v, 'source')}")

# %% Shares carried on every edge, over the basis (s, a, b).
for e in inst.edges_in_order:
    print(f"{e.tail:>3} -> {e.head:<4} {res.code.edge_msgs[e.id]}")
print("keys:", res.code.keys)

# %% Leakage table: bits of K_i an eavesdropper at v learns (by enumerating 16^3 tuples).
watchers = [v for v in inst.nodes_in_order if v != inst.source]
leak = np.array([
    [float(exhaustive_mi_oracle(inst, res.code, i, inst.in_edge_ids(v))) for v in watchers]
    for i in (1, 2)
])
print(watchers)
print(leak)  # 4 bits exactly where v belongs to D_i, 0 elsewhere
