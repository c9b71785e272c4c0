"""
How often do random networks admit key-cast?
============================================

Draw random DAGs and count how many pass the non-secure feasibility test and
the secure connectivity conditions; every feasible one gets a verified code.
"""

# %%
import numpy as np

from keycast.generators import gen_random_dag
from keycast.graph import prune_unreachable
from keycast.nonsecure import construct
from keycast.secure import check_conditions, construct_secure

probs = (0.3, 0.5, 0.7)
trials = 200
keycast_ok = np.zeros(len(probs))
secure_ok = np.zeros(len(probs))
for col, p in enumerate(probs):
    for seed in range(trials):
        inst = prune_unreachable(gen_random_dag(seed, 10, p, ell=2))
        res = construct(inst)
        if res.code is not None:
            assert res.ok
            keycast_ok[col] += 1
        if check_conditions(inst):
            assert construct_secure(inst).ok
            secure_ok[col] += 1

# %%
print("edge probability:   ", probs)
print("key-cast feasible:  ", keycast_ok / trials)
print("secure conditions:  ", secure_ok / trials)
