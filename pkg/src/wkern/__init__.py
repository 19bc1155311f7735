"""Weighted Szegő and Garabedian kernels on smooth bounded planar domains.

The kernels are computed from a second-kind boundary integral equation of
Kerzman-Stein type discretized by the Nyström method on the periodic
trapezoidal rule. On top of the solver sit weighted Ahlfors maps, the
weighted Carathéodory metric, zero counting for the kernel pair, divisor
constrained Hardy spaces and numerical convergence studies.
"""

from .divisor import Divisor, deflate, extremal_map_A, garabedian_A
from .garabedian import GarabedianField, eval_garabedian, garabedian_from_szego
from .geometry import BoundaryCurve, Domain, annulus, build_curve, disk, domain_from_dict, domain_to_dict
from .maps import ahlfors, caratheodory, reconstruct_q
from .szego import NystromSystem, SzegoField, assemble, cauchy_transform, inner_product, solve_szego, solve_szego_many
from .tolerances import DEFAULTS, with_overrides
from .weights import WeightSpec, sample_weight, weight_from_dict
from .zeros import ZeroReport, combined_ledger, count_zeros, locate_zeros

__version__ = "0.1.0"
