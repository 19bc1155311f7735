"""Weighted Garabedian kernels manufactured from Szegő boundary values.

On the boundary L_phi(z, a) = i phi(z) conj(S_phi(z, a)) conj(T(z)). The
regular part l_phi = L_phi - 1/(2 pi (z - a)) is holomorphic in the domain and
is extended inside by its Cauchy integral.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import spectral
from .errors import GarabedianZero, PoleHit, ReciprocalMismatch, WeightMismatch
from .geometry import distance_to_boundary
from .szego import anti_hardy_residual, cauchy_transform, solve_szego
from .tolerances import DEFAULTS


@dataclass(frozen=True, eq=False)
class GarabedianField:
    """Boundary values of L_phi(., a) and of its regular part l_phi(., a)."""

    base: complex
    boundary: np.ndarray
    regular: np.ndarray
    szego_ref: object

    @property
    def domain(self):
        return self.szego_ref.domain

    @property
    def tol(self):
        return self.szego_ref.system.tol

    def __call__(self, z):
        return eval_garabedian(self, z)

    def regular_part(self, z, order=0):
        return cauchy_transform(self.domain, self.regular, z, order, self.tol)

    def zero_function(self):
        """Holomorphic g(z) = 2 pi (z - a) L_phi(z, a); same zeros as L_phi, g(a) = 1."""
        return _PoleFree(self)

    def holomorphy_residual(self):
        return anti_hardy_residual(self.domain, self.regular)

    def to_dict(self):
        d = {
            "base": [self.base.real, self.base.imag],
            "nodes": int(self.domain.total_nodes),
            "values": [[v.real, v.imag] for v in self.boundary],
            "pole": [self.base.real, self.base.imag],
        }
        return d


class _PoleFree:
    def __init__(self, field):
        self.field = field

    def __call__(self, z):
        a = self.field.base
        return 1.0 + 2 * np.pi * (np.asarray(z) - a) * self.field.regular_part(z)

    def derivative(self, z, order=1):
        a = self.field.base
        z = np.asarray(z, dtype=complex)
        l0 = self.field.regular_part(z)
        l1 = self.field.regular_part(z, 1)
        if order == 1:
            return 2 * np.pi * (l0 + (z - a) * l1)
        l2 = self.field.regular_part(z, 2)
        return 2 * np.pi * (2 * l1 + (z - a) * l2)


def garabedian_from_szego(field):
    dom = field.domain
    phi = field.weight.phi
    lb = 1j * phi * np.conj(field.boundary) * np.conj(dom.T)
    with np.errstate(divide="ignore", invalid="ignore"):
        reg = lb - 1.0 / (2 * np.pi * (dom.z - field.base))
    for arr in (lb, reg):
        arr.setflags(write=False)
    return GarabedianField(field.base, lb, reg, field)


def eval_garabedian(field, z):
    """L_phi(z, a) for z in the closed domain, z != a.

    Interior points use the Cauchy integral of the regular part; points on
    the boundary use trigonometric interpolation of the regular part.
    """
    tol = field.tol
    scalar = np.ndim(z) == 0
    pts = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    if np.any(np.abs(pts - field.base) < tol["pole_hit"]):
        raise PoleHit("evaluation at the pole of the Garabedian kernel")
    dist, ci, t = distance_to_boundary(field.domain, pts)
    on = dist < 1e-10
    reg = np.empty(pts.shape, dtype=complex)
    if np.any(on):
        for c in np.unique(ci[on]):
            sel = on & (ci == c)
            reg[sel] = spectral.interpolate(field.regular[field.domain.curve_slice(int(c))], t[sel])
    if np.any(~on):
        reg[~on] = cauchy_transform(field.domain, field.regular, pts[~on], 0, tol)
    out = reg + 1.0 / (2 * np.pi * (pts - field.base))
    if np.any(np.abs(out) < tol["garabedian_zero"]):
        warnings.warn("Garabedian kernel vanishes at an evaluation point", GarabedianZero, stacklevel=2)
    return out[0] if scalar else out.reshape(np.shape(z))


def residue_estimate(field, radii=(1e-2, 5e-3, 2.5e-3), directions=4):
    """Extrapolate (z - a) L_phi(z, a) to z = a along several directions."""
    est = []
    for k in range(directions):
        u = np.exp(2j * np.pi * k / directions)
        r = np.asarray(radii)
        vals = np.array([(ri * u) * eval_garabedian(field, field.base + ri * u) for ri in r])
        # quadratic in r near the pole
        coef = np.polyfit(r, vals, 2)
        est.append(coef[-1])
    return np.array(est)


def check_reciprocal(w1, w2, tol=None):
    tol = DEFAULTS if tol is None else tol
    dev = np.max(np.abs(w1.phi * w2.phi - 1.0))
    if dev > tol["reciprocal"]:
        raise ReciprocalMismatch(f"weights are not reciprocal (max deviation {dev:.2e})")


def transpose_identity_residual(system_phi, system_inv_phi, pairs):
    """max over (z, a) of |L_phi(z, a) + L_{1/phi}(a, z)|."""
    if system_phi.domain.total_nodes != system_inv_phi.domain.total_nodes or not np.allclose(
        system_phi.domain.z, system_inv_phi.domain.z
    ):
        raise WeightMismatch("systems live on different domains")
    check_reciprocal(system_phi.weight, system_inv_phi.weight, system_phi.tol)
    res = 0.0
    for z, a in pairs:
        l1 = garabedian_from_szego(solve_szego(system_phi, a))(z)
        l2 = garabedian_from_szego(solve_szego(system_inv_phi, z))(a)
        res = max(res, abs(l1 + l2))
    return res


def boundary_zero_suspects(field, rel=None):
    """Node indices where |S_phi(z_j, a)| < rel * median node modulus."""
    rel = field.system.tol["boundary_zero_suspect"] if rel is None else rel
    mod = np.abs(field.boundary)
    return np.nonzero(mod < rel * np.median(mod))[0]
