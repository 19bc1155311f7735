"""Weighted Ahlfors maps, the weighted Carathéodory metric and q-functions.

The weighted Ahlfors map with base a is F = S_phi(., a) / L_phi(., a). It is
evaluated through regular parts,

    F(z) = 2 pi (z - a) S_phi(z, a) / (1 + 2 pi (z - a) l_phi(z, a)),

so that the zero of F at a needs no cancellation.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveDiagonal, NotSimplyConnected, SchemaError, SzegoZero
from .garabedian import garabedian_from_szego
from .szego import cauchy_transform, solve_szego
from .zeros import count_zeros, offset_contour


@dataclass(frozen=True, eq=False)
class AhlforsMap:
    base: complex
    szego: object
    garabedian: object
    derivative_at_base: float

    @property
    def domain(self):
        return self.szego.domain

    @property
    def boundary(self):
        """F at the boundary nodes."""
        return self.szego.boundary / self.garabedian.boundary

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        d = z - self.base
        s = self.szego(z)
        l = self.garabedian.regular_part(z)
        return 2 * np.pi * d * s / (1 + 2 * np.pi * d * l)

    def derivative(self, z, order=1):
        if order != 1:
            raise ValueError("only first derivatives are provided")
        z = np.asarray(z, dtype=complex)
        d = z - self.base
        s, ds = self.szego(z), self.szego.derivative(z, 1)
        l, dl = self.garabedian.regular_part(z), self.garabedian.regular_part(z, 1)
        num = 2 * np.pi * d * s
        den = 1 + 2 * np.pi * d * l
        dnum = 2 * np.pi * (s + d * ds)
        dden = 2 * np.pi * (l + d * dl)
        return (dnum * den - num * dden) / den**2

    def boundary_image(self):
        """Rows (curve, t, re F, im F) tracing the image of every boundary curve."""
        dom = self.domain
        vals = self.boundary
        return [(int(dom.curve_index[j]), float(dom.t[j]), vals[j].real, vals[j].imag) for j in range(dom.total_nodes)]


def ahlfors(system, a):
    s = solve_szego(system, a)
    g = garabedian_from_szego(s)
    saa = s(a)
    return AhlforsMap(complex(a), s, g, float(2 * np.pi * saa.real))


def boundary_modulus_residual(fmap):
    """max_j | |F(z_j)| - 1/phi_j |."""
    return float(np.max(np.abs(np.abs(fmap.boundary) - 1.0 / fmap.szego.weight.phi)))


def derivative_fd_residual(fmap, h=1e-4):
    """| central difference of F at the base - 2 pi S_phi(a, a) |."""
    a = fmap.base
    fd = (fmap(a + h) - fmap(a - h)) / (2 * h)
    return float(abs(abs(fd) - fmap.derivative_at_base))


def caratheodory(system, z):
    """c_phi(z) = 2 pi S_phi(z, z)."""
    s = solve_szego(system, z)
    v = s(z)
    if not v.real > 0:
        raise NonPositiveDiagonal(f"S_phi(z, z) = {v} is not positive")
    return float(2 * np.pi * v.real)


def disk_competitors(fmap, centers=()):
    """|f'(a)| for competitors f = M_a B exp(-G) on a circular domain.

    G is holomorphic with Re G = log phi on the circle (Herglotz integral),
    M_a is the Möbius map with zero at a and B runs over the disk
    automorphisms with zeros at ``centers`` (B = 1 always included). Each
    competitor has boundary modulus |f| = 1/phi and f(a) = 0.
    """
    dom = fmap.domain
    if dom.n != 1 or set(dom.curves[0].freqs) != {0, 1}:
        raise SchemaError("competitor family is defined on a circle only")
    c = dom.curves[0]
    cen = c.center
    r = abs(c.coeffs[c.freqs == 1][0])
    a = (fmap.base - cen) / r
    logphi = np.log(fmap.szego.weight.phi)
    e = (c.z - cen) / r
    g_a = np.mean((e + a) / (e - a) * logphi)
    # |M_a'(a)| in the scaled variable, back to the original one
    base = np.exp(-g_a.real) / (1 - abs(a) ** 2) / r
    out = [float(base)]
    for b in centers:
        b = complex(b)
        if abs(b) >= 1:
            continue
        out.append(float(base * abs((a - b) / (1 - np.conj(b) * a))))
    return np.array(out)


@dataclass(frozen=True, eq=False)
class QFunction:
    """Zero-free holomorphic q with |q|^2 = phi on the boundary and q(a) > 0."""

    base: complex
    boundary: np.ndarray
    normalization: float
    domain: object

    def __call__(self, z):
        return cauchy_transform(self.domain, self.boundary, z)

    def modulus_residual(self, phi):
        return float(np.max(np.abs(np.abs(self.boundary) ** 2 - phi)))

    def zero_count(self):
        return count_zeros(self, offset_contour(self.domain))


def reconstruct_q(system_unweighted, system_weighted, a):
    """q = S(., a) / (c S_phi(., a)) with c = sqrt(S(a, a) / S_phi(a, a))."""
    dom = system_weighted.domain
    if dom.n != 1:
        raise NotSimplyConnected("q-function reconstruction needs a simply connected domain")
    if system_unweighted.domain.total_nodes != dom.total_nodes or not np.allclose(system_unweighted.domain.z, dom.z):
        raise SchemaError("systems live on different domains")
    s = solve_szego(system_unweighted, a)
    sp = solve_szego(system_weighted, a)
    if np.min(np.abs(sp.boundary)) < system_weighted.tol["szego_zero"]:
        raise SzegoZero("weighted Szegő kernel vanishes on the boundary")
    c = float(np.sqrt(s(a).real / sp(a).real))
    q = s.boundary / (c * sp.boundary)
    q.setflags(write=False)
    return QFunction(complex(a), q, c, dom)


def boundary_image_csv(fmap):
    lines = ["curve,t,re,im"]
    for ci, t, x, y in fmap.boundary_image():
        lines.append(f"{ci},{t:.17g},{x:.17g},{y:.17g}")
    return "\n".join(lines) + "\n"


def rigid_motion_caratheodory(system_factory, domain, weight, z, rotation, shift):
    """Relative change of c_phi(z) after moving domain, weight and point together."""
    c0 = caratheodory(system_factory(domain, weight), z)
    moved = domain.transformed(rotation, shift)
    c1 = caratheodory(system_factory(moved, weight.transport()), rotation * z + shift)
    return abs(c1 - c0) / abs(c0)
