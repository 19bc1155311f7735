"""Szegő and Garabedian kernels of the unit disk against their closed forms.

Run with ``python3 demos/01_disk_closed_forms.py``.
"""
# %% Setup: the unit disk with 256 trapezoidal nodes
import numpy as np

from wkern import assemble, caratheodory, disk, garabedian_from_szego, oracles, sample_weight, solve_szego
from wkern.weights import abs2_poly, constant

dom = disk(256)
sys1 = assemble(dom, sample_weight(constant(1.0), dom))
print("condition number of the scaled system:", sys1.assembly_report["condition"])

# %% The unweighted kernel pair at a = 0.3
a = 0.3
s = solve_szego(sys1, a)
l = garabedian_from_szego(s)
z = np.array([0.0, 0.5j, -0.4 + 0.2j])
print("S error:", np.max(np.abs(s(z) - oracles.disk_szego(z, a))))
print("L error:", np.max(np.abs(l(z) - oracles.disk_garabedian(z, a))))

# %% A weight |z - 2|^2 has an explicit kernel too
sysw = assemble(dom, sample_weight(abs2_poly([2.0]), dom))
sw = solve_szego(sysw, a)
exact = oracles.abs2_szego(oracles.disk_szego(z, a), z - 2, a - 2)
print("weighted S error:", np.max(np.abs(sw(z) - exact)))

# %% The metric c(a) = 2 pi S(a, a) equals 1 / (1 - |a|^2)
for p in (0.0, 0.5, 0.8j):
    print(f"c({p}) = {caratheodory(sys1, p):.15f}   exact {1 / (1 - abs(p) ** 2):.15f}")
