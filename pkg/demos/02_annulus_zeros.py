"""Counting the zeros of S and L on an annulus.

For n boundary curves the Szegő kernel has n - 1 zeros and the Garabedian
kernel none, apart from its pole at the base point.
"""
# %% Setup: annulus 0.5 < |z| < 1
import numpy as np

from wkern import annulus, assemble, combined_ledger, garabedian_from_szego, oracles, sample_weight, solve_szego
from wkern.weights import constant, exp_trig

dom = annulus(0.5, 256)
sys1 = assemble(dom, sample_weight(constant(1.0), dom))

# %% One zero for every base point, at -rho / conj(a) for real base points
for a in (0.7, 0.6 + 0.2j, -0.8j):
    s = solve_szego(sys1, a)
    rep = combined_ledger(s, garabedian_from_szego(s))
    z0 = rep.szego_zeros[0][0]
    print(f"a={a}: ledger {rep.ledger_total}, zero {z0:.12f}")
print("closed form for a = 0.7:", oracles.annulus_szego_zero(0.7, 0.5))

# %% A weight keeps the total count but may move the zero from S to L
w = exp_trig(curves=[{"a": [0.6], "b": [0.2]}, {"c": np.log(2.0)}])
sysw = assemble(dom, sample_weight(w, dom))
s = solve_szego(sysw, 0.7)
rep = combined_ledger(s, garabedian_from_szego(s))
print("weighted: ledger", rep.ledger_total)
print("  zeros of S:", [z for z, _, _ in rep.szego_zeros])
print("  zeros of L:", [z for z, _, _ in rep.garabedian_zeros])
