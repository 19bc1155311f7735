"""Argument-principle counting and localization of zeros of holomorphic fields.

Smooth closed contours (inward offsets of the boundary, circles) use the
periodic trapezoid rule with spectral differentiation along the contour.
Rectangular quadtree cells use Gauss-Legendre sides, an unwrapped phase for
the count and an integrated-by-parts logarithm for the power-sum moments.
"""

from dataclasses import dataclass, field
import warnings
from functools import lru_cache

import numpy as np

from . import spectral
from .errors import AccuracyWarning, LedgerMismatch, NonIntegerWinding, Unresolved, ZeroOnContour
from .geometry import distance_to_boundary, winding_values
from .tolerances import DEFAULTS

# -- contours -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Contour:
    """Union of closed curves, each sampled on equispaced parameter nodes."""

    pieces: tuple  # of (points, dpoints) arrays

    @property
    def points(self):
        return np.concatenate([p for p, _ in self.pieces])

    def split(self, values):
        out, k = [], 0
        for p, _ in self.pieces:
            out.append(values[k:k + p.size])
            k += p.size
        return out


def circle_contour(center, radius, m=256):
    t = 2 * np.pi * np.arange(m) / m
    e = np.exp(1j * t)
    return Contour(((center + radius * e, 1j * radius * e),))


def boundary_contour(domain):
    return Contour(tuple((c.z, c.dz) for c in domain.curves))


def offset_contour(domain, spacings=None, refine=2):
    """Inward normal offset of each boundary curve by ``spacings`` node spacings."""
    spacings = DEFAULTS["contour_offset_spacings"] if spacings is None else spacings
    pieces = []
    for c in domain.curves:
        m = c.N * refine
        t = 2 * np.pi * np.arange(m) / m
        dz, ddz = c.evaluate(t, 1), c.evaluate(t, 2)
        sp = np.abs(dz)
        T = dz / sp
        dT = ddz / sp - dz * np.real(np.conj(dz) * ddz) / sp**3
        delta = spacings * np.max(c.speed) * c.h
        pieces.append((c.evaluate(t) + 1j * delta * T, dz + 1j * delta * dT))
    return Contour(tuple(pieces))


def _log_derivative_sums(contour, values, powers):
    # (1/2 pi i) * sum over pieces of the trapezoid rule for z^p f'/f dz
    out = np.zeros(len(powers), dtype=complex)
    for (p, _), f in zip(contour.pieces, contour.split(values)):
        df = spectral.differentiate(f)
        h = 2 * np.pi / p.size
        for k, q in enumerate(powers):
            out[k] += np.sum(p**q * df / f) * h
    return out / (2j * np.pi)


def phase_winding(contour, values):
    """Winding from the unwrapped phase; None when samples are too coarse to unwrap."""
    total = 0.0
    for f in contour.split(np.asarray(values, dtype=complex)):
        ang = np.angle(f)
        step = np.angle(np.exp(1j * np.diff(np.append(ang, ang[0]))))
        if np.max(np.abs(step)) > np.pi / 4:
            return None
        total += step.sum()
    return total / (2 * np.pi)


def contour_winding(contour, values, tol=None):
    """Winding number of samples ``values`` along ``contour``.

    The spectral log-derivative sum is used when it is close to an integer;
    otherwise (large dynamic range of |f|) the unwrapped phase decides.
    """
    tol = DEFAULTS if tol is None else tol
    values = np.asarray(values, dtype=complex)
    mod = np.abs(values)
    if mod.min() < tol["contour_min_modulus"] * mod.max():
        raise ZeroOnContour(f"relative field modulus {mod.min() / mod.max():.2e} on the contour")
    w = _log_derivative_sums(contour, values, [0])[0].real
    if abs(w - np.rint(w)) <= 0.25:
        return w
    wp = phase_winding(contour, values)
    if wp is None:
        raise NonIntegerWinding(f"winding {w:.4f} is not close to an integer")
    return wp


def count_zeros(evaluator, contour, tol=None):
    """Zeros minus poles of ``evaluator`` enclosed by ``contour``."""
    return int(np.rint(contour_winding(contour, evaluator(contour.points), tol)))


def _derivative(evaluator, z):
    if hasattr(evaluator, "derivative"):
        return evaluator.derivative(z, 1)
    h = 1e-5
    return (evaluator(z + h) - evaluator(z - h)) / (2 * h)


def newton_refine(evaluator, z, multiplicity=1, steps=2):
    for _ in range(steps):
        f = evaluator(z)
        df = _derivative(evaluator, z)
        if df == 0:
            break
        z = z - multiplicity * f / df
    return complex(z)


def _roots_from_power_sums(s):
    # Newton's identities: power sums s_1..s_k -> monic polynomial coefficients
    k = len(s)
    e = np.zeros(k + 1, dtype=complex)
    e[0] = 1.0
    for m in range(1, k + 1):
        acc = 0.0
        for i in range(1, m + 1):
            acc += (-1) ** (i - 1) * e[m - i] * s[i - 1]
        e[m] = acc / m
    coeffs = [(-1) ** m * e[m] for m in range(k + 1)]
    return np.roots(coeffs) if k else np.zeros(0, dtype=complex)


def _cluster(roots, scale):
    groups = []
    for r in roots:
        for g in groups:
            if abs(g[0] - r) < 1e-3 * scale:
                g.append(r)
                break
        else:
            groups.append([r])
    return [(complex(np.mean(g)), len(g)) for g in groups]


def locate_field_zeros(evaluator, domain=None, contour=None, tol=None, count=None):
    """Zeros of a holomorphic field inside the offset contour, with multiplicities.

    Locations come from the power-sum moments of f'/f on the contour,
    followed by two Newton steps.
    """
    tol = DEFAULTS if tol is None else tol
    domain = evaluator.domain if domain is None else domain
    contour = offset_contour(domain) if contour is None else contour
    vals = evaluator(contour.points)
    if count is None:
        count = int(np.rint(contour_winding(contour, vals, tol)))
    if count <= 0:
        return []
    s = _log_derivative_sums(contour, vals, list(range(1, count + 1)))
    x0, x1, y0, y1 = domain.bounding_box()
    roots = _cluster(_roots_from_power_sums(s), max(x1 - x0, y1 - y0))
    out = []
    for r, m in roots:
        z = newton_refine(evaluator, r, m)
        if abs(winding_values(domain, np.array([z]))[0] - 1) > 0.5:
            raise Unresolved(f"moment-based zero {z} is not inside the domain")
        out.append((z, m))
    return out


# -- quadtree ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _gauss_legendre(m):
    return np.polynomial.legendre.leggauss(m)


def _cell_perimeter(cell, per_side):
    x0, x1, y0, y1 = cell
    corners = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    x, w = _gauss_legendre(per_side)
    pts, gl_mask, sides = [], [], []
    for s in range(4):
        a, b = corners[s], corners[(s + 1) % 4]
        pts.append([a])
        gl_mask.append([False])
        pts.append(a + (b - a) * (x + 1) / 2)
        gl_mask.append([True] * per_side)
        sides.append((a, b, w))
    return np.concatenate(pts), np.concatenate(gl_mask), sides


def _cell_moments(evaluator, cell, kmax=2, per_side=24, max_per_side=192):
    """Winding count and power sums s_1..s_kmax on a rectangle, or None if a zero hugs the edge."""
    while per_side <= max_per_side:
        pts, gl, sides = _cell_perimeter(cell, per_side)
        f = evaluator(pts)
        if np.min(np.abs(f)) == 0:
            return None
        ang = np.angle(f)
        closed = np.append(ang, ang[0])
        step = np.angle(np.exp(1j * np.diff(closed)))
        if np.max(np.abs(step)) < np.pi / 4:
            break
        per_side *= 2
    else:
        return None
    phase = ang[0] + np.concatenate([[0.0], np.cumsum(step[:-1])])
    total = phase[-1] + step[-1] - ang[0]
    k = int(np.rint(total / (2 * np.pi)))
    if k <= 0:
        return k, np.zeros(0, dtype=complex)
    kmax = min(kmax, k)
    logf = np.log(np.abs(f)) + 1j * phase
    z0 = pts[0]
    s = np.zeros(kmax, dtype=complex)
    glpts = pts[gl].reshape(4, per_side)
    gllog = logf[gl].reshape(4, per_side)
    for p in range(1, kmax + 1):
        integral = 0.0
        for side, (a, b, w) in enumerate(sides):
            integral += np.sum(w * glpts[side] ** (p - 1) * gllog[side]) * (b - a) / 2
        s[p - 1] = (z0**p * 2j * np.pi * k - p * integral) / (2j * np.pi)
    return k, s


def _cell_admissibility(domain, cell, margin):
    """'inside', 'outside' or 'straddle' relative to the domain with ``margin``."""
    if domain is None:
        return "inside"
    x0, x1, y0, y1 = cell
    centre = complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))
    half_diag = 0.5 * np.hypot(x1 - x0, y1 - y0)
    d_c = distance_to_boundary(domain, [centre])[0][0]
    if d_c > half_diag + margin:
        inside_c = abs(winding_values(domain, np.array([centre]))[0] - 1) < 0.5
        return "inside" if inside_c else "outside"
    if d_c < 0.5 * min(x1 - x0, y1 - y0):
        return "straddle"
    pts, _, _ = _cell_perimeter(cell, 16)
    inside = np.abs(winding_values(domain, pts) - 1) < 0.5
    dist = distance_to_boundary(domain, pts)[0]
    z = domain.z
    nodes_in = np.any((z.real >= x0) & (z.real <= x1) & (z.imag >= y0) & (z.imag <= y1))
    if np.all(inside) and dist.min() >= margin and not nodes_in:
        return "inside"
    if not np.any(inside) and not nodes_in and dist.min() >= margin:
        return "outside"
    return "straddle"


def locate_zeros(evaluator, region, expected=None, domain=None, tol=None):
    """Quadtree search for zeros of a holomorphic ``evaluator`` in a rectangle.

    ``region`` is ``(x0, x1, y0, y1)``. With ``domain`` given, cells must stay
    inside it with the quadtree margin; cells straddling the boundary are
    refined down to the margin scale and then dropped. Returns a list of
    ``(location, multiplicity)``.
    """
    tol = DEFAULTS if tol is None else tol
    margin, max_depth = tol["quadtree_margin"], int(tol["quadtree_depth"])
    found, dropped = [], []
    stack = [(tuple(float(v) for v in region), 0)]
    while stack:
        cell, depth = stack.pop()
        x0, x1, y0, y1 = cell
        size = max(x1 - x0, y1 - y0)
        kind = _cell_admissibility(domain, cell, margin)
        if kind == "outside":
            continue
        if kind == "straddle":
            if size > margin and depth < max_depth:
                stack.extend((c, depth + 1) for c in _split(cell))
            else:
                dropped.append(cell)
            continue
        res = _cell_moments(evaluator, cell)
        if res is None:
            if depth >= max_depth:
                raise Unresolved("zero on a cell edge at the depth limit", cell=cell)
            stack.extend((c, depth + 1) for c in _split(cell))
            continue
        k, s = res
        if k == 0:
            continue
        if k < 0:
            raise Unresolved("negative count: the evaluator has a pole in the region", cell=cell)
        mu = s[0] / k
        spread = abs(s[1] / k - mu**2) if k >= 2 else 0.0
        if k == 1 or spread < (1e-4 * size) ** 2:
            found.append((newton_refine(evaluator, complex(mu), k), k))
            continue
        if depth >= max_depth:
            raise Unresolved(f"{k} zeros not separated at depth {max_depth}", cell=cell)
        stack.extend((c, depth + 1) for c in _split(cell))
    total = sum(m for _, m in found)
    if expected is not None and total != expected:
        raise Unresolved(f"located {total} zeros, expected {expected}", cell=dropped[0] if dropped else None)
    found.sort(key=lambda zm: (round(zm[0].real, 12), zm[0].imag))
    return found


def _split(cell):
    # off-centre split so symmetric zeros do not fall on cell edges
    x0, x1, y0, y1 = cell
    xm = x0 + 0.5317 * (x1 - x0)
    ym = y0 + 0.4683 * (y1 - y0)
    return [(x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)]


# -- ledger -----------------------------------------------------------------------


@dataclass
class ZeroReport:
    base: complex
    szego_zeros: list
    garabedian_zeros: list
    ledger_total: int
    boundary_suspects: list
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        def enc(items):
            return [{"z": [z.real, z.imag], "m": int(m), "where": where} for z, m, where in items]

        return {
            "base": [self.base.real, self.base.imag],
            "ledger": int(self.ledger_total),
            "szego": enc(self.szego_zeros),
            "garabedian": enc(self.garabedian_zeros),
            "boundary_suspects": [int(j) for j in self.boundary_suspects],
            "diagnostics": self.diagnostics,
        }


def _suspect_clusters(idx, n):
    if len(idx) == 0:
        return 0
    idx = np.sort(idx)
    gaps = np.diff(idx) > 1
    clusters = 1 + int(np.sum(gaps))
    if clusters > 1 and idx[0] == 0 and idx[-1] == n - 1:
        clusters -= 1
    return clusters


def combined_ledger(s_field, g_field, tol=None):
    """Interior zeros of S_phi(., w) and L_phi(., w) and their combined count."""
    from .garabedian import boundary_zero_suspects

    tol = s_field.system.tol if tol is None else tol
    dom = s_field.domain
    suspects = boundary_zero_suspects(s_field)
    # on the boundary itself the windings count every interior zero; the
    # offset contour is pulled closer until it agrees with them
    target = None
    if len(suspects) == 0:
        bc = boundary_contour(dom)
        ws, wl = phase_winding(bc, s_field.boundary), phase_winding(bc, g_field.boundary)
        if ws is not None and wl is not None and max(abs(ws - np.rint(ws)), abs(wl - np.rint(wl))) <= 0.25:
            target = (int(np.rint(ws)), int(np.rint(wl)) + 1)
    spacings = tol["contour_offset_spacings"]
    while True:
        contour = offset_contour(dom, spacings)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AccuracyWarning)
            z_s = count_zeros(s_field, contour, tol)
            # L_phi has a simple pole at the base: its winding is (zeros - 1)
            z_l = count_zeros(g_field, contour, tol) + 1
        if target is None or (z_s, z_l) == target or spacings <= 0.25:
            break
        spacings /= 2
    g = g_field.zero_function()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AccuracyWarning)
        loc_s = locate_field_zeros(s_field, dom, contour, tol, count=z_s)
        loc_l = locate_field_zeros(g, dom, contour, tol, count=z_l)
    diag = {"winding_szego": z_s, "winding_garabedian": z_l, "contour_offset_spacings": spacings}
    if target is not None and (z_s, z_l) != target:
        raise LedgerMismatch(f"offset contour counts {(z_s, z_l)} never matched the boundary windings {target}")
    n_bdy = 0
    for ci, c in enumerate(dom.curves):
        sl = dom.curve_slice(ci)
        local = suspects[(suspects >= sl.start) & (suspects < sl.stop)] - sl.start
        n_bdy += _suspect_clusters(local, c.N)
    if len(suspects) == 0:
        prod = s_field.boundary * g_field.boundary
        wb = phase_winding(boundary_contour(dom), prod)
        if wb is None:
            raise NonIntegerWinding("boundary phase of S L is under-resolved")
        diag["boundary_winding_SL"] = float(wb)
        if abs(wb - (dom.n - 2)) > 0.25:
            raise LedgerMismatch(f"boundary winding of S L is {wb:.3f}, expected {dom.n - 2}")
        winding_total = int(np.rint(wb)) + 1
    else:
        winding_total = None
    located = sum(m for _, m in loc_s) + sum(m for _, m in loc_l)
    if located != z_s + z_l:
        raise LedgerMismatch(f"located {located} zeros but the contour count is {z_s + z_l}")
    if winding_total is not None and winding_total != z_s + z_l:
        raise LedgerMismatch(f"boundary winding predicts {winding_total} interior zeros, contour count {z_s + z_l}")
    ledger = z_s + z_l + n_bdy
    diag["winding_total"] = winding_total
    diag["located_total"] = located
    diag["residual_szego"] = [float(abs(s_field(z))) for z, _ in loc_s]
    diag["residual_garabedian"] = [float(abs(g(z))) for z, _ in loc_l]
    return ZeroReport(
        s_field.base,
        [(z, m, "interior") for z, m in loc_s],
        [(z, m, "interior") for z, m in loc_l],
        ledger,
        [int(j) for j in suspects],
        diag,
    )
