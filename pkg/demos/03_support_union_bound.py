"""
Support unions of weight-capped codes, and the rate gap
=======================================================

Among any M binary words of length n and weight at most w n, some pair has a
support union of at most n w (2 - w) (1 + 1/(M - 1)).  Exhaustive search on
small parameters shows how close the worst codebook comes to that bound.
"""

# %%
from fractions import Fraction

import numpy as np

from keycast.analysis import format_report, sr_gap_report_nonsecure, verify_plotkin_exhaustive

w = Fraction(1, 2)
table = np.zeros((6, 3))
for n in range(1, 7):
    for col, M in enumerate((2, 3, 4)):
        chk = verify_plotkin_exhaustive(n, M, w)
        assert chk.ok
        table[n - 1, col] = float(chk.bound - (chk.worst or 0))
print("slack (bound - worst min union), w = 1/2, columns M = 2, 3, 4")
print(table)

# %% As M grows the bound approaches 3n/4 for w = 1/2, which caps what
# source reconstruction can achieve; key-cast still reaches rate 1.
for eps in (Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)):
    print(format_report(sr_gap_report_nonsecure(eps)))
    print()
