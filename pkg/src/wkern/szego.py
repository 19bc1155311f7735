"""Weighted Szegő kernels by Nyström discretization of the Kerzman–Stein equation.

For a positive boundary weight phi the Szegő kernel S_phi(., a) solves

    (I - A_phi) S_phi(., a) = C_a / phi   on the boundary,

where C_a(z) = conj(T(z) / (2 pi i (z - a))) and A_phi = C - C*_phi is the
(smooth, skew-adjoint in L^2(phi ds)) Kerzman–Stein kernel. All integrals
use the periodic trapezoid rule on equispaced parameter nodes.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from . import spectral
from .errors import (
    AccuracyWarning,
    AssemblyDiagnostic,
    BasePointNearBoundary,
    BasePointOutside,
    IllConditioned,
    PointOutside,
    ShapeMismatch,
    SingularSystem,
)
from .geometry import distance_to_boundary, local_spacing, winding_values
from .tolerances import DEFAULTS

TWO_PI_I = 2j * np.pi


def _pair_kernel(zi, dzi, spi, phii, zj, dzj, spj, phij):
    # off-diagonal kernel A_phi(i, j), broadcasting over all arguments
    d = zj - zi
    return (dzj / d + np.conj(-dzi / d) * (phij * spj) / (phii * spi)) / TWO_PI_I


def kernel_matrix(domain, weight):
    """Dense Kerzman–Stein kernel values A_phi(i, j) (without quadrature weights)."""
    z, dz, sp = domain.z, domain.dz, domain.speed
    phi, dphi = weight.phi, weight.dphi
    n = z.size
    d = z[None, :] - z[:, None]
    np.fill_diagonal(d, 1.0)
    ratio = (phi * sp)[None, :] / (phi * sp)[:, None]
    a = (dz[None, :] / d + np.conj(-dz[:, None] / d) * ratio) / TWO_PI_I
    a[np.arange(n), np.arange(n)] = -(dphi / phi) / TWO_PI_I
    return a


def _richardson_diagonal(domain, weight, rows):
    """Extrapolate A_phi(t_i, t_i + delta) to delta = 0 for selected rows."""
    out = np.empty(len(rows), dtype=complex)
    for k, i in enumerate(rows):
        ci = int(domain.curve_index[i])
        curve = domain.curves[ci]
        sl = domain.curve_slice(ci)
        phi_curve = weight.phi[sl]
        ti = domain.t[i]
        zi, dzi = domain.z[i], domain.dz[i]

        def sym(delta):
            ts = np.array([ti + delta, ti - delta])
            zj, dzj = curve.evaluate(ts), curve.evaluate(ts, 1)
            phij = spectral.interpolate(phi_curve, ts)
            vals = _pair_kernel(zi, dzi, abs(dzi), weight.phi[i], zj, dzj, np.abs(dzj), phij)
            return vals.mean()

        deltas = 0.05 * 0.5 ** np.arange(3)
        level = [sym(d) for d in deltas]
        for p in (1, 2):
            f = 4.0**p
            level = [(f * level[j + 1] - level[j]) / (f - 1) for j in range(len(level) - 1)]
        out[k] = level[0]
    return out


@dataclass(frozen=True, eq=False)
class NystromSystem:
    """Factored Nyström matrix I - A_phi diag(h) for one (domain, weight) pair.

    The factorization is of the symmetrically scaled matrix D M D^-1 with
    D = sqrt(phi |z'| h); there the kernel part is skew-Hermitian, so the
    scaled matrix has all singular values >= 1 whatever the weight range.
    """

    domain: object
    weight: object
    matrix: np.ndarray
    quad: np.ndarray
    factorization: tuple
    scaling: np.ndarray
    assembly_report: dict = field(default_factory=dict)
    tol: dict = field(default_factory=lambda: dict(DEFAULTS), repr=False)

    @property
    def kernel(self):
        # recover A_phi from the stored matrix
        return (np.eye(self.matrix.shape[0]) - self.matrix) / self.quad[None, :]

    def solve(self, rhs):
        """Solve M u = rhs (vector or columns) with one step of iterative refinement."""
        rhs = np.asarray(rhs, dtype=complex)
        d = self.scaling if rhs.ndim == 1 else self.scaling[:, None]
        u = sla.lu_solve(self.factorization, rhs * d) / d
        scale = max(np.max(np.abs(rhs * d)), 1e-300)
        r = rhs - self.matrix @ u
        if np.max(np.abs(r * d)) / scale > self.tol["refinement_residual"] * 1e-3:
            u = u + sla.lu_solve(self.factorization, r * d) / d
            r = rhs - self.matrix @ u
        res = np.max(np.abs(r * d)) / scale
        if res > self.tol["refinement_residual"]:
            raise IllConditioned(f"refinement residual {res:.3e} exceeds tolerance")
        return u


def assemble(domain, weight, tol=None, diagnose=True):
    """Assemble and LU-factor the Nyström matrix for ``(domain, weight)``.

    The analytic diagonal -phi'/(2 pi i phi) is checked on a few rows against a
    Richardson extrapolation of the off-diagonal kernel.
    """
    tol = dict(DEFAULTS if tol is None else tol)
    n = domain.total_nodes
    if weight.phi.shape != (n,):
        raise ShapeMismatch("weight samples do not match the domain nodes")
    a = kernel_matrix(domain, weight)
    if not np.all(np.isfinite(a)):
        raise SingularSystem("non-finite kernel entries")
    h = np.asarray(domain.h)
    matrix = np.eye(n, dtype=complex) - a * h[None, :]
    report = {}
    if diagnose:
        rows = np.unique(np.linspace(0, n - 1, 8).astype(int))
        extrap = _richardson_diagonal(domain, weight, rows)
        scale = max(1.0, np.max(np.abs(a[rows, rows])))
        err = float(np.max(np.abs(extrap - a[rows, rows])) / scale)
        report["diagonal_richardson_error"] = err
        if err > tol["diagonal_richardson"]:
            raise AssemblyDiagnostic(f"diagonal limit disagrees with extrapolation by {err:.3e}")
    d = np.sqrt(weight.phi * domain.speed * h)
    scaled = matrix * d[:, None] / d[None, :]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", sla.LinAlgWarning)
            lu = sla.lu_factor(scaled)
    except (sla.LinAlgError, sla.LinAlgWarning, ValueError) as exc:
        raise SingularSystem(str(exc)) from exc
    anorm = np.linalg.norm(scaled, 1)
    rcond, info = sla.lapack.zgecon(lu[0], anorm, norm="1")
    if info != 0 or rcond <= 0:
        raise SingularSystem("condition estimate failed")
    # condition in the weighted L^2(phi ds) norm, where the kernel is skew-adjoint
    report["condition"] = float(1.0 / rcond)
    report["condition_ok"] = report["condition"] < tol["condition_max"]
    for arr in (matrix, lu[0], lu[1], h, d):
        arr.setflags(write=False)
    return NystromSystem(domain, weight, matrix, h, lu, d, report, tol)


# -- Cauchy kernel and solves -----------------------------------------------------------


def check_base(domain, a, tol=None):
    tol = DEFAULTS if tol is None else tol
    w = winding_values(domain, np.array([a]))[0]
    if abs(w - 1) > 0.25:
        raise BasePointOutside(f"base point {a} is not inside the domain")
    dist = distance_to_boundary(domain, [a])[0][0]
    spacing = local_spacing(domain, [a])[0]
    if dist < tol["base_clearance_spacings"] * spacing:
        raise BasePointNearBoundary(
            f"base point {a} is {dist:.3e} from the boundary (< {tol['base_clearance_spacings']:g} node spacings)"
        )


def cauchy_kernel(domain, a, check=True, tol=None):
    """C_a(z_j) = conj(T_j / (2 pi i (z_j - a))) at every node."""
    a = complex(a)
    if check:
        check_base(domain, a, tol)
    return np.conj(domain.T / (TWO_PI_I * (domain.z - a)))


@dataclass(frozen=True, eq=False)
class SzegoField:
    """Boundary values S_phi(z_j, a) of the weighted Szegő kernel."""

    base: complex
    boundary: np.ndarray
    system: NystromSystem
    base_node: int = None

    @property
    def domain(self):
        return self.system.domain

    @property
    def weight(self):
        return self.system.weight

    def __call__(self, points):
        return eval_interior(self, points)

    def derivative(self, z, order=1):
        return eval_derivative(self, z, order)

    def to_dict(self):
        vals = np.where(np.isfinite(self.boundary), self.boundary, np.nan)
        return {
            "base": [self.base.real, self.base.imag],
            "nodes": int(self.domain.total_nodes),
            "values": [[v.real, v.imag] for v in vals],
        }


def solve_szego(system, a):
    """Boundary values of S_phi(., a) for one interior base point ``a``."""
    a = complex(a)
    rhs = cauchy_kernel(system.domain, a, tol=system.tol) / system.weight.phi
    u = system.solve(rhs)
    u.setflags(write=False)
    return SzegoField(a, u, system)


def solve_szego_many(system, bases):
    """S_phi(., a) for several base points with one multi-column solve."""
    bases = [complex(a) for a in bases]
    if not bases:
        return []
    cols = np.column_stack([cauchy_kernel(system.domain, a, tol=system.tol) for a in bases])
    u = system.solve(cols / system.weight.phi[:, None])
    fields = []
    for k, a in enumerate(bases):
        col = np.ascontiguousarray(u[:, k])
        col.setflags(write=False)
        fields.append(SzegoField(a, col, system))
    return fields


def boundary_cauchy_limit(domain, values, m, dvalues=None):
    """Interior boundary limit at node ``m`` of the Cauchy integral of node data.

    ``values`` may carry extra leading axes (one row per function). ``dvalues``
    is d/dt of the data at node ``m``; it is computed spectrally when omitted.
    """
    values = np.asarray(values, dtype=complex)
    w = domain.z[m]
    d = domain.z - w
    d[m] = 1.0
    cz = domain.dz * domain.h / d / TWO_PI_I
    cz[m] = 0.0
    vm = values[..., m]
    total = vm + ((values - vm[..., None]) * cz).sum(axis=-1)
    if dvalues is None:
        ci = int(domain.curve_index[m])
        sl = domain.curve_slice(ci)
        dvalues = spectral.differentiate(values[..., sl])[..., m - sl.start]
    return total + domain.h[m] * dvalues / TWO_PI_I


def solve_szego_boundary(system, m):
    """S_phi(z_i, w) for the boundary node w = z_m, at all nodes i != m.

    Splits S_phi(., w) = C_w / phi + u; the right-hand side A_phi(C_w / phi) is
    the conjugated boundary limit of a Cauchy integral of a smooth kernel row.
    Entry ``m`` of the returned field is undefined (nan).
    """
    dom, wt = system.domain, system.weight
    a = system.kernel
    g = np.conj(a) / (wt.phi * dom.speed)[None, :]
    b = np.conj(boundary_cauchy_limit(dom, g, m))
    u = system.solve(b)
    w = dom.z[m]
    d = dom.z - w
    d[m] = 1.0
    cw = np.conj(dom.T / (TWO_PI_I * d)) / wt.phi
    vals = cw + u
    vals[m] = np.nan
    vals.setflags(write=False)
    return SzegoField(complex(w), vals, system, base_node=int(m))


# -- Cauchy transforms ----------------------------------------------------------------


def _fine_boundary(domain, factor):
    zs, dzs, hs, curves = [], [], [], []
    for i, c in enumerate(domain.curves):
        m = c.N * factor
        t = 2 * np.pi * np.arange(m) / m
        zs.append(c.evaluate(t))
        dzs.append(c.evaluate(t, 1))
        hs.append(np.full(m, 2 * np.pi / m))
        curves.append(m)
    return np.concatenate(zs), np.concatenate(dzs), np.concatenate(hs)


def _upsample(domain, values, factor):
    if factor == 1:
        return values
    return np.concatenate([spectral.resample(v, v.shape[-1] * factor) for v in domain.split(values)], axis=-1)


def _power_of_two_at_least(x):
    return 1 << max(0, int(np.ceil(np.log2(max(x, 1.0)))))


def cauchy_transform(domain, values, points, order=0, tol=None, check=True):
    """(order! / 2 pi i) * integral of values(zeta) / (zeta - z)^(order+1) d zeta.

    Far from the boundary this is the plain trapezoid rule on the native
    nodes. Closer than ``near_boundary`` or eight node spacings (where the
    trapezoid error exp(-2 pi d / h) exceeds roundoff) the boundary data are
    spectrally upsampled so the distance spans at least eight fine spacings,
    and the value at the nearest sample is subtracted. ``values`` may be 1-d (one function)
    or 2-d with one function per row.
    """
    tol = DEFAULTS if tol is None else tol
    values = np.asarray(values, dtype=complex)
    scalar = np.ndim(points) == 0
    pts = np.atleast_1d(np.asarray(points, dtype=complex)).ravel()
    single = values.ndim == 1
    vals2 = values[None, :] if single else values
    if vals2.shape[-1] != domain.total_nodes:
        raise ShapeMismatch("boundary data do not match the domain nodes")
    if check and pts.size:
        inside = np.abs(winding_values(domain, pts) - 1) < 0.5
        if not np.all(inside):
            raise PointOutside(f"{int((~inside).sum())} evaluation point(s) outside the domain")
    dist = distance_to_boundary(domain, pts)[0] if pts.size else np.zeros(0)
    if pts.size and dist.min() < tol["accuracy_warning"]:
        warnings.warn(f"evaluation {dist.min():.2e} from the boundary; accuracy degrades", AccuracyWarning, stacklevel=2)
    out = np.empty((vals2.shape[0], pts.size), dtype=complex)
    fact = float(np.prod(np.arange(1, order + 1)))
    max_step = np.max(domain.ds)
    factors = np.ones(pts.size, dtype=int)
    near = dist < max(tol["near_boundary"], 8 * max_step)
    if np.any(near):
        want = 8 * max_step / np.maximum(dist[near], 1e-12)
        factors[near] = [min(64, _power_of_two_at_least(x)) for x in want]
    for f in np.unique(factors):
        sel = np.nonzero(factors == f)[0]
        if f == 1 and not np.any(near[sel]):
            zb, dzb, hb, vb = domain.z, domain.dz, domain.h, vals2
        else:
            zb, dzb, hb = _fine_boundary(domain, int(f))
            vb = _upsample(domain, vals2, int(f))
        w = dzb * hb / TWO_PI_I
        for start in range(0, sel.size, 1024):
            idx = sel[start:start + 1024]
            p = pts[idx]
            diff = zb[None, :] - p[:, None]
            kern = w[None, :] / diff ** (order + 1)
            sub = near[idx]
            res = vb @ kern.T
            if np.any(sub):
                # subtract the value at the nearest sample; its integral is 1 (order 0) or 0
                j = np.argmin(np.abs(diff[sub]), axis=1)
                vstar = vb[:, j]
                ksub = kern[sub]
                corr = vstar * ksub.sum(axis=1)[None, :]
                res[:, sub] = res[:, sub] - corr + (vstar if order == 0 else 0.0)
            out[:, idx] = fact * res
    if single:
        out = out[0]
        return out[0] if scalar else out.reshape(np.shape(points))
    return out[:, 0] if scalar else out


def _require_interior_data(field):
    if field.base_node is not None:
        raise ValueError("boundary-based fields are singular on the boundary; evaluate S(z, w) via the interior base")


def eval_interior(field, points):
    """Interior values of a boundary field via its Cauchy integral."""
    _require_interior_data(field)
    return cauchy_transform(field.domain, field.boundary, points, 0, field.system.tol)


def eval_derivative(field, z, order=1):
    """d^order/dz^order of the holomorphic extension of ``field`` at interior ``z``."""
    _require_interior_data(field)
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    return cauchy_transform(field.domain, field.boundary, z, order, field.system.tol)


def inner_product(u, v, weight, domain):
    """<u, v>_phi = sum_j u_j conj(v_j) phi_j |z'_j| h_j."""
    u, v = np.asarray(u), np.asarray(v)
    n = domain.total_nodes
    if u.shape[-1] != n or v.shape[-1] != n or weight.phi.shape != (n,):
        raise ShapeMismatch("node layouts differ")
    return np.sum(u * np.conj(v) * weight.phi * domain.ds, axis=-1)


def boundary_cauchy_all(domain, values):
    """Interior boundary limit of the Cauchy integral of node data at every node."""
    values = np.asarray(values, dtype=complex)
    d = domain.z[None, :] - domain.z[:, None]
    np.fill_diagonal(d, 1.0)
    cz = (domain.dz * domain.h)[None, :] / d / TWO_PI_I
    np.fill_diagonal(cz, 0.0)
    du = np.concatenate([spectral.differentiate(v) for v in domain.split(values)], axis=-1)
    off = cz @ values - cz.sum(axis=1) * values
    return values + off + domain.h * du / TWO_PI_I


def anti_hardy_residual(domain, values):
    """sup_j |u_j - (C u)_+(z_j)|: zero when u is the trace of a holomorphic function."""
    values = np.asarray(values, dtype=complex)
    return float(np.max(np.abs(values - boundary_cauchy_all(domain, values))))


def szego_matrix(system, zs, ws):
    """S_phi(z_i, w_k) for interior z_i and interior w_k."""
    fields = solve_szego_many(system, ws)
    vals = np.array([f.boundary for f in fields])
    return cauchy_transform(system.domain, vals, np.asarray(zs, dtype=complex), 0, system.tol).T if fields else np.zeros((len(zs), 0))
