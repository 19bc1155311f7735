"""Smooth multiply connected planar domains bounded by Fourier curves.

Every boundary curve is stored by its Fourier coefficients

    z(t) = sum_k c_k exp(i k t),   t in [0, 2*pi),

and sampled on N equispaced nodes. z', z'' are evaluated analytically from
the coefficients. The first curve of a :class:`Domain` is the outer boundary
(counterclockwise); the remaining curves bound holes and run clockwise, so
the domain always lies to the left of the tangent.
"""

from dataclasses import dataclass, field

import numpy as np

from . import spectral
from .errors import BadDescriptor, DegenerateCurve, SchemaError, TooCloseToBoundary
from .tolerances import DEFAULTS


def _is_power_of_two(n):
    return n >= 1 and (n & (n - 1)) == 0


class BoundaryCurve:
    """One analytic closed curve sampled on N equispaced parameter nodes."""

    def __init__(self, freqs, coeffs, nodes, orientation=1):
        freqs = np.asarray(freqs, dtype=int)
        coeffs = np.asarray(coeffs, dtype=complex)
        if freqs.shape != coeffs.shape or freqs.ndim != 1 or freqs.size == 0:
            raise BadDescriptor("frequencies and coefficients must be matching 1-d arrays")
        if not np.all(np.isfinite(coeffs)):
            raise BadDescriptor("non-finite Fourier coefficient")
        if orientation not in (1, -1):
            raise BadDescriptor("orientation must be +1 or -1")
        if not _is_power_of_two(int(nodes)) or nodes < 32:
            raise BadDescriptor(f"node count must be a power of two >= 32, got {nodes}")
        # match the requested traversal direction; signed area = pi * sum k |c_k|^2
        area = np.pi * np.sum(freqs * np.abs(coeffs) ** 2)
        if area == 0:
            raise DegenerateCurve("curve encloses no area")
        if np.sign(area) != orientation:
            freqs = -freqs
        order = np.argsort(freqs)
        self.freqs = freqs[order]
        self.coeffs = coeffs[order]
        self.orientation = orientation
        self.N = int(nodes)
        self.t = 2.0 * np.pi * np.arange(self.N) / self.N
        self.h = 2.0 * np.pi / self.N
        self.z, self.dz, self.ddz = (self.evaluate(self.t, d) for d in (0, 1, 2))
        self.speed = np.abs(self.dz)
        if self.speed.min() < DEFAULTS["min_speed"]:
            raise DegenerateCurve("parametrization speed vanishes at a node")
        self.T = self.dz / self.speed
        for arr in (self.z, self.dz, self.ddz, self.speed, self.T):
            arr.setflags(write=False)

    def evaluate(self, t, derivative=0):
        t = np.asarray(t, dtype=float)
        mult = (1j * self.freqs) ** derivative * self.coeffs
        return np.exp(1j * np.multiply.outer(t, self.freqs)) @ mult

    @property
    def center(self):
        zero = self.freqs == 0
        return complex(self.coeffs[zero].sum())

    @property
    def length(self):
        return float(np.sum(self.speed) * self.h)

    @property
    def spacing(self):
        """Arclength node spacing |z'| h per node."""
        return self.speed * self.h

    def resample(self, nodes):
        return BoundaryCurve(self.freqs, self.coeffs, nodes, self.orientation)

    def transformed(self, rotation=1.0, shift=0.0):
        """Image under the rigid motion z -> rotation * z + shift (|rotation| = 1)."""
        coeffs = self.coeffs * rotation
        freqs = self.freqs
        if 0 in freqs:
            coeffs = coeffs.copy()
            coeffs[freqs == 0] += shift
        else:
            freqs = np.append(freqs, 0)
            coeffs = np.append(coeffs, shift)
        return BoundaryCurve(freqs, coeffs, self.N, self.orientation)

    def descriptor(self):
        kmax = int(np.max(np.abs(self.freqs)))
        full = np.zeros(2 * kmax + 1, dtype=complex)
        full[self.freqs + kmax] = self.coeffs
        return {
            "kind": "fourier",
            "coeffs": [[c.real, c.imag] for c in full],
            "orientation": self.orientation,
        }

    def __repr__(self):
        return f"BoundaryCurve(N={self.N}, orientation={self.orientation:+d}, kmax={np.abs(self.freqs).max()})"


def _as_complex(value, what):
    try:
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ValueError
            return complex(float(value[0]), float(value[1]))
        return complex(value)
    except (TypeError, ValueError):
        raise BadDescriptor(f"{what} must be a complex number or an [x, y] pair") from None


def build_curve(descriptor, nodes, orientation=None):
    """Build a curve from ``{"kind": "circle"|"ellipse"|"fourier", ...}``.

    Fourier coefficient lists are centered: entry j holds frequency
    j - (len - 1) // 2, so ``[[0,0],[0,0],[1,0]]`` is the unit circle.
    """
    if not isinstance(descriptor, dict) or "kind" not in descriptor:
        raise BadDescriptor("curve descriptor must be a mapping with a 'kind'")
    kind = descriptor["kind"]
    if orientation is None:
        orientation = int(descriptor.get("orientation", 1))
    if kind == "circle":
        c = _as_complex(descriptor.get("center", 0.0), "center")
        r = float(descriptor.get("radius", 1.0))
        if not r > 0:
            raise BadDescriptor("radius must be positive")
        return BoundaryCurve([0, 1], [c, r], nodes, orientation)
    if kind == "ellipse":
        c = _as_complex(descriptor.get("center", 0.0), "center")
        a = float(descriptor.get("a", 1.0))
        b = float(descriptor.get("b", 1.0))
        if not (a > 0 and b > 0):
            raise BadDescriptor("semi-axes must be positive")
        # c + a cos t + i b sin t
        return BoundaryCurve([-1, 0, 1], [(a - b) / 2, c, (a + b) / 2], nodes, orientation)
    if kind == "fourier":
        raw = descriptor.get("coeffs")
        if not isinstance(raw, (list, tuple)) or len(raw) == 0 or len(raw) % 2 == 0:
            raise BadDescriptor("fourier coeffs must be an odd-length list of [re, im] pairs")
        coeffs = np.array([_as_complex(c, "coefficient") for c in raw])
        kmax = (len(coeffs) - 1) // 2
        freqs = np.arange(-kmax, kmax + 1)
        keep = coeffs != 0
        return BoundaryCurve(freqs[keep], coeffs[keep], nodes, orientation)
    raise BadDescriptor(f"unknown curve kind {kind!r}")


@dataclass(frozen=True)
class Domain:
    """Ordered boundary curves: outer first (orientation +1) then holes (-1)."""

    curves: tuple
    offsets: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        curves = tuple(self.curves)
        if len(curves) == 0:
            raise SchemaError("a domain needs at least one curve")
        object.__setattr__(self, "curves", curves)
        if curves[0].orientation != 1 or any(c.orientation != -1 for c in curves[1:]):
            raise SchemaError("outer curve must be counterclockwise, holes clockwise")
        offsets = np.cumsum([0] + [c.N for c in curves])
        object.__setattr__(self, "offsets", offsets)
        cat = {
            name: np.concatenate([getattr(c, name) for c in curves])
            for name in ("z", "dz", "ddz", "speed", "T", "t")
        }
        cat["h"] = np.concatenate([np.full(c.N, c.h) for c in curves])
        cat["curve_index"] = np.concatenate([np.full(c.N, i) for i, c in enumerate(curves)])
        for name, arr in cat.items():
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        self._check_nesting()

    @property
    def n(self):
        return len(self.curves)

    @property
    def total_nodes(self):
        return int(self.offsets[-1])

    @property
    def ds(self):
        """Arclength quadrature weights |z'_j| h_j."""
        return self.speed * self.h

    def curve_slice(self, i):
        return slice(int(self.offsets[i]), int(self.offsets[i + 1]))

    def split(self, values):
        return [values[..., self.curve_slice(i)] for i in range(self.n)]

    def with_nodes(self, nodes):
        return Domain(tuple(c.resample(nodes) for c in self.curves))

    def transformed(self, rotation=1.0, shift=0.0):
        return Domain(tuple(c.transformed(rotation, shift) for c in self.curves))

    def bounding_box(self):
        z = self.curves[0].z
        return (z.real.min(), z.real.max(), z.imag.min(), z.imag.max())

    def _check_nesting(self):
        if self.n == 1:
            return
        outer = self.curves[0]
        for i, c in enumerate(self.curves[1:], start=1):
            w_outer = _curve_winding(outer, c.center)
            if round(w_outer) != 1 or abs(c.z - c.center).min() < 1e-12:
                raise SchemaError(f"hole {i} does not lie inside the outer curve")
            if _curve_winding(outer, c.z).min() < 0.5:
                raise SchemaError(f"hole {i} crosses the outer curve")
            for j, d in enumerate(self.curves[1:], start=1):
                if j != i and abs(round(_curve_winding(d, c.center))) != 0:
                    raise SchemaError(f"holes {i} and {j} are nested")


def _curve_winding(curve, p):
    p = np.asarray(p, dtype=complex)
    diff = curve.z[None, :] - np.atleast_1d(p)[:, None]
    w = (curve.dz[None, :] / diff).sum(axis=1) * curve.h / (2j * np.pi)
    return w.real if p.ndim else w.real[0]


def winding_values(domain, points):
    """Raw (unrounded) total winding of the boundary about each point.

    For points within a few node spacings of a curve the trapezoid sum for
    that curve is replaced by a side-of-curve test at the nearest point.
    """
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    dist, nearest, tnear = distance_to_boundary(domain, points)
    out = np.zeros(points.shape, dtype=float)
    for ci, c in enumerate(domain.curves):
        w = _curve_winding(c, points)
        close = (nearest == ci) & (dist < 4 * c.spacing.max())
        if np.any(close):
            tc = tnear[close]
            side = np.imag(np.conj(c.evaluate(tc, 1)) * (points[close] - c.evaluate(tc)))
            left = side > 0
            if c.orientation == 1:
                w[close] = np.where(left, 1.0, 0.0)
            else:
                w[close] = np.where(left, 0.0, -1.0)
        out += w
    return out


def winding_number(domain, p):
    """Total winding number of the oriented boundary about ``p`` (1 inside, 0 outside)."""
    scalar = np.ndim(p) == 0
    points = np.atleast_1d(np.asarray(p, dtype=complex))
    near = np.min(np.abs(domain.z[None, :] - points[:, None]), axis=1)
    if np.any(near < DEFAULTS["node_clearance"]):
        raise TooCloseToBoundary("point coincides with a boundary node")
    w = winding_values(domain, points)
    rounded = np.rint(w)
    if np.any(np.abs(w - rounded) > DEFAULTS["winding_offset"]):
        raise TooCloseToBoundary("winding integral is not close to an integer")
    rounded = rounded.astype(int)
    return int(rounded[0]) if scalar else rounded


def is_interior(domain, p):
    points = np.atleast_1d(np.asarray(p, dtype=complex))
    near = np.min(np.abs(domain.z[None, :] - points[:, None]), axis=1)
    w = winding_values(domain, points)
    inside = (np.abs(w - 1) < 0.5) & (near >= DEFAULTS["node_clearance"])
    return bool(inside[0]) if np.ndim(p) == 0 else inside


def tangent_winding(domain):
    """Total turning of the unit tangent divided by 2*pi; equals 2 - n."""
    total = 0.0
    for c in domain.curves:
        ang = np.angle(c.T)
        steps = np.diff(np.concatenate([ang, ang[:1]]))
        steps = (steps + np.pi) % (2 * np.pi) - np.pi
        total += steps.sum()
    return int(np.rint(total / (2 * np.pi)))


def distance_to_boundary(domain, points):
    """Distance from each point to the boundary.

    Returns ``(dist, curve_index, t)``: nearest node refined by one Newton
    step on |z(t) - p|^2.
    """
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    best = np.full(points.shape, np.inf)
    best_curve = np.zeros(points.shape, dtype=int)
    best_t = np.zeros(points.shape)
    for ci, c in enumerate(domain.curves):
        d = np.abs(c.z[None, :] - points[:, None])
        j = np.argmin(d, axis=1)
        t = c.t[j]
        diff = c.z[j] - points
        g = 2 * np.real(np.conj(diff) * c.dz[j])
        hess = 2 * (np.abs(c.dz[j]) ** 2 + np.real(np.conj(diff) * c.ddz[j]))
        step = np.where(hess > 0, g / np.where(hess > 0, hess, 1.0), 0.0)
        step = np.clip(step, -c.h, c.h)
        t_new = t - step
        d_new = np.abs(c.evaluate(t_new) - points)
        use = d_new < d[np.arange(points.size), j]
        t = np.where(use, t_new, t)
        dmin = np.where(use, d_new, d[np.arange(points.size), j])
        better = dmin < best
        best = np.where(better, dmin, best)
        best_curve = np.where(better, ci, best_curve)
        best_t = np.where(better, t % (2 * np.pi), best_t)
    return best, best_curve, best_t


def local_spacing(domain, points):
    """Arclength node spacing at the boundary node nearest to each point."""
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    j = np.argmin(np.abs(domain.z[None, :] - points[:, None]), axis=1)
    return domain.ds[j]


def boundary_interpolate(domain, values, curve, t, derivative=0):
    """Trigonometric interpolation of node data on one curve at parameters ``t``."""
    return spectral.interpolate(values[domain.curve_slice(curve)], t, derivative)


# -- constructors ---------------------------------------------------------------


def disk(nodes=256, center=0.0, radius=1.0):
    return Domain((build_curve({"kind": "circle", "center": center, "radius": radius}, nodes),))


def annulus(rho=0.5, nodes=256, center=0.0, radius=1.0):
    outer = build_curve({"kind": "circle", "center": center, "radius": radius}, nodes)
    inner = build_curve({"kind": "circle", "center": center, "radius": rho * radius}, nodes, orientation=-1)
    return Domain((outer, inner))


def domain_from_dict(doc, nodes=None):
    if not isinstance(doc, dict) or not isinstance(doc.get("curves"), list):
        raise SchemaError("domain document needs a 'curves' list")
    n = int(nodes if nodes is not None else doc.get("nodes", 256))
    curves = []
    for i, desc in enumerate(doc["curves"]):
        default = 1 if i == 0 else -1
        orientation = int(desc.get("orientation", default)) if isinstance(desc, dict) else default
        curves.append(build_curve(desc, n, orientation=orientation))
    return Domain(tuple(curves))


def domain_to_dict(domain):
    return {"curves": [c.descriptor() for c in domain.curves], "nodes": domain.curves[0].N}
