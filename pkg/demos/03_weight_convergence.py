"""Convergence of weighted kernels as the weight tends to 1.

The family phi_k = exp(cos t / k) tends to 1. On the disk it equals
|exp(z / 2k)|^2, so the error is known exactly and decays like 1/k.
"""
# %% Setup
import numpy as np

from wkern import disk, oracles
from wkern.experiments import convergence_study, rows_to_csv
from wkern.weights import constant, perturbation_family

dom = disk(128)
probes = np.array([0.3, -0.4j, 0.2 + 0.5j])
ks = [1, 2, 4, 8, 16]

# %% Measured errors
rec = convergence_study(dom, constant(1.0), lambda k: perturbation_family(1.0, k), ks, probes=probes)
print(rows_to_csv(rec.rows()))

# %% Compared with the exact error |S| |exp(-(z + conj w) / 2k) - 1|
zz, ww = np.meshgrid(probes, probes, indexing="ij")
s0 = oracles.disk_szego(zz, ww)
for i, k in enumerate(ks):
    exact = np.max(np.abs(s0 * (np.exp(-(zz + np.conj(ww)) / (2 * k)) - 1)))
    print(f"k={k:2d}  measured {rec.errors['interior_interior']['S'][i]:.3e}  exact {exact:.3e}")
print("ratio k=16 over k=2:", rec.ratio("interior_interior", "S", 16, 2))
