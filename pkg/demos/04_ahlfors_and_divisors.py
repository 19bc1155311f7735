"""Weighted Ahlfors maps and divisor-constrained kernels.

On an annulus the Ahlfors map is a two-sheeted cover of the disk with
|f| = 1 on both boundary circles. Imposing zeros through a divisor gives
the extremal map of the constrained Hardy space.
"""
# %% Setup
import numpy as np

from wkern import Divisor, ahlfors, annulus, assemble, deflate, extremal_map_A, sample_weight
from wkern.maps import boundary_modulus_residual
from wkern.weights import exp_trig

dom = annulus(0.5, 256)
sysw = assemble(dom, sample_weight(exp_trig([0.4], [0.1]), dom))

# %% The weighted Ahlfors map at a = 0.7
f = ahlfors(sysw, 0.7)
print("max | |f| - 1 | on the boundary:", boundary_modulus_residual(f))
print("f'(a) =", f.derivative_at_base)

# %% A divisor with a double point at -0.6i, imposed on the unweighted kernel
from wkern.weights import constant

sys1 = assemble(dom, sample_weight(constant(1.0), dom))
k = deflate(sys1, Divisor(((-0.6j, 2),)))
fa = extremal_map_A(k, 0.7)
print("boundary modulus:", np.max(np.abs(np.abs(fa.boundary) - 1)))
print("values at the divisor:", np.abs(fa.divisor_values()))
