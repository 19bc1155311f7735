"""Szegő and Garabedian kernels of Hardy spaces with prescribed zeros.

For an effective divisor A = {(b_mu, m_mu)} the kernel of the subspace of
functions vanishing to order m_mu at b_mu is obtained by deflation,

    S_A(z, w) = S(z, w) - e(z)^T G^{-1} conj(e(w)),

where e_p = d^r/d conj(b)^r S(., b) represents f -> f^(r)(b) and G is the
Gram matrix of these representers.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np

from .errors import PoleHit, SchemaError, SingularGram
from .geometry import winding_values
from .szego import TWO_PI_I, SzegoField, anti_hardy_residual, cauchy_transform, check_base


@dataclass(frozen=True)
class Divisor:
    points: tuple  # of (complex, int)

    def __post_init__(self):
        pts = tuple((complex(b), int(m)) for b, m in self.points)
        if any(m < 1 for _, m in pts):
            raise SchemaError("divisor multiplicities must be >= 1")
        locs = [b for b, _ in pts]
        for i in range(len(locs)):
            for j in range(i):
                if abs(locs[i] - locs[j]) < 1e-12:
                    raise SchemaError("divisor points must be distinct")
        object.__setattr__(self, "points", pts)

    @property
    def total_degree(self):
        return sum(m for _, m in self.points)

    def functionals(self):
        return [(b, r) for b, m in self.points for r in range(m)]

    def polynomial(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones(z.shape, dtype=complex)
        for b, m in self.points:
            out = out * (z - b) ** m
        return out

    @classmethod
    def parse(cls, text):
        """Parse ``"x+yi:m,x+yi:m"``."""
        pts = []
        for item in filter(None, (s.strip() for s in text.split(","))):
            loc, _, mult = item.partition(":")
            try:
                pts.append((complex(loc.replace("i", "j").replace(" ", "")), int(mult or 1)))
            except ValueError as exc:
                raise SchemaError(f"cannot parse divisor point {item!r}") from exc
        return cls(tuple(pts))


class _BaseKernel:
    """The unweighted Szegő kernel viewed through the deflation interface."""

    def __init__(self, system):
        self.system = system

    @property
    def domain(self):
        return self.system.domain

    def column(self, b, r):
        dom = self.domain
        rhs = np.conj(factorial(r) * dom.T / (TWO_PI_I * (dom.z - b) ** (r + 1))) / self.system.weight.phi
        return self.system.solve(rhs)

    def columns(self, functionals):
        if not functionals:
            return np.zeros((self.domain.total_nodes, 0), dtype=complex)
        dom = self.domain
        cols = [np.conj(factorial(r) * dom.T / (TWO_PI_I * (dom.z - b) ** (r + 1))) for b, r in functionals]
        return self.system.solve(np.column_stack(cols) / self.system.weight.phi[:, None])

    def boundary(self, w):
        return self.columns([(complex(w), 0)])[:, 0]


@dataclass(frozen=True, eq=False)
class DivisorKernel:
    divisor: Divisor
    source: object
    cols: np.ndarray
    gram: np.ndarray
    gram_condition: float
    active: tuple

    @property
    def domain(self):
        return self.source.domain

    @property
    def system(self):
        return self.source.system

    def boundary(self, w):
        """Boundary values of S_A(., w) for interior w."""
        base = self.source.boundary(w)
        if not self.active:
            return base
        ew = cauchy_transform(self.domain, self.cols.T, complex(w), 0, self.system.tol)
        c = np.linalg.solve(self.gram, np.conj(ew))
        return base - self.cols @ c

    def column(self, b, r):
        base = self.source.column(b, r)
        if not self.active:
            return base
        # d^r/dw^r of e(w), conjugated
        deriv = cauchy_transform(self.domain, self.cols.T, complex(b), r, self.system.tol)
        return base - self.cols @ np.linalg.solve(self.gram, np.conj(deriv))

    def columns(self, functionals):
        return np.column_stack([self.column(b, r) for b, r in functionals]) if functionals else self.cols[:, :0]

    def field(self, w):
        check_base(self.domain, complex(w), self.system.tol)
        vals = self.boundary(w)
        vals.setflags(write=False)
        return SzegoField(complex(w), vals, self.system)

    def __call__(self, z, w):
        return self.field(w)(z)

    def constraint_residual(self, w):
        f = self.field(w)
        res = 0.0
        for b, r in self.divisor.functionals():
            res = max(res, abs(cauchy_transform(self.domain, f.boundary, b, r, self.system.tol)))
        return res


def deflate(source, divisor, tol=None):
    """Deflate a Szegő kernel (``NystromSystem`` with phi = 1, or a DivisorKernel)."""
    if not isinstance(source, (_BaseKernel, DivisorKernel)):
        if not np.allclose(source.weight.phi, 1.0):
            raise SchemaError("deflation starts from the unweighted kernel")
        source = _BaseKernel(source)
    tol = dict(source.system.tol if tol is None else tol)
    dom = source.domain
    for b, _ in divisor.points:
        if abs(winding_values(dom, np.array([b]))[0] - 1) > 0.5:
            raise SchemaError(f"divisor point {b} is not inside the domain")
    funcs = divisor.functionals()
    cols = source.columns(funcs)
    # constraints already satisfied by the source are dropped
    if funcs and isinstance(source, DivisorKernel):
        ref = _root(source).columns(funcs)
        keep = [k for k in range(len(funcs)) if np.max(np.abs(cols[:, k])) > 1e-8 * np.max(np.abs(ref[:, k]))]
    else:
        keep = list(range(len(funcs)))
    funcs = [funcs[k] for k in keep]
    cols = cols[:, keep]
    m = len(funcs)
    gram = np.zeros((m, m), dtype=complex)
    for q, (b, r) in enumerate(funcs):
        gram[q] = cauchy_transform(dom, cols.T, b, r, tol)
    cond = float(np.linalg.cond(gram)) if m else 1.0
    if cond > tol["gram_condition"]:
        raise SingularGram(f"Gram matrix condition {cond:.2e}: divisor points too close")
    cols.setflags(write=False)
    return DivisorKernel(divisor, source, cols, gram, cond, tuple(funcs))


def _root(kernel):
    while isinstance(kernel, DivisorKernel):
        kernel = kernel.source
    return kernel


@dataclass(frozen=True, eq=False)
class DivisorGarabedian:
    """L_A(., a) stored as g = P L_A - P(a) / (2 pi (z - a)), P the divisor polynomial."""

    base: complex
    boundary: np.ndarray
    regular: np.ndarray
    kernel: DivisorKernel

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z - self.base) < self.kernel.system.tol["pole_hit"]):
            raise PoleHit("evaluation at the base point")
        pz = self.kernel.divisor.polynomial(z)
        pa = self.kernel.divisor.polynomial(self.base)
        g = cauchy_transform(self.kernel.domain, self.regular, z, 0, self.kernel.system.tol)
        return (g + pa / (2 * np.pi * (z - self.base))) / pz

    def holomorphy_residual(self):
        return anti_hardy_residual(self.kernel.domain, self.regular)


def garabedian_A(kernel, a):
    a = complex(a)
    dom = kernel.domain
    s = kernel.field(a)
    lb = 1j * np.conj(s.boundary) * np.conj(dom.T)
    pz = kernel.divisor.polynomial(dom.z)
    pa = kernel.divisor.polynomial(a)
    reg = pz * lb - pa / (2 * np.pi * (dom.z - a))
    return DivisorGarabedian(a, lb, reg, kernel)


class ExtremalMapA:
    """F = S_A(., a) / L_A(., a) evaluated without the pole/zero cancellation at a."""

    def __init__(self, kernel, a):
        a = complex(a)
        for b, _ in kernel.divisor.points:
            if abs(a - b) < 1e-12:
                raise SchemaError("base point coincides with a divisor point")
        self.kernel = kernel
        self.base = a
        self.szego = kernel.field(a)
        self.garabedian = garabedian_A(kernel, a)

    @property
    def boundary(self):
        return self.szego.boundary / self.garabedian.boundary

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        d = z - self.base
        pz = self.kernel.divisor.polynomial(z)
        pa = self.kernel.divisor.polynomial(self.base)
        g = cauchy_transform(self.kernel.domain, self.garabedian.regular, z, 0, self.kernel.system.tol)
        return 2 * np.pi * d * self.szego(z) * pz / (2 * np.pi * d * g + pa)

    def divisor_values(self):
        return np.array([self(b) for b, _ in self.kernel.divisor.points])


def extremal_map_A(kernel, a):
    return ExtremalMapA(kernel, a)


def theorem_neh_check(system_unweighted, roots, mults, points, weighted_system=None):
    """max |S_phi(z, w) q(z) conj(q(w)) - S_A(z, w)| over pairs from ``points``.

    q = prod (z - r)^m, phi = |q|^2 on the boundary, A = interior roots of q.
    """
    from .szego import assemble, solve_szego_many
    from .weights import abs2_poly, sample_weight

    dom = system_unweighted.domain
    mults = list(mults) if mults is not None else [1] * len(roots)
    if weighted_system is None:
        weighted_system = assemble(dom, sample_weight(abs2_poly(roots, mults), dom), system_unweighted.tol)
    inside = np.abs(winding_values(dom, np.array(roots, dtype=complex)) - 1) < 0.5 if len(roots) else []
    div = Divisor(tuple((r, m) for r, m, k in zip(roots, mults, inside) if k))
    kern = deflate(system_unweighted, div)
    pts = np.asarray(points, dtype=complex)

    def q(z):
        out = np.ones(np.shape(z), dtype=complex)
        for r, m in zip(roots, mults):
            out = out * (np.asarray(z) - r) ** m
        return out

    res = 0.0
    fields = solve_szego_many(weighted_system, pts)
    for w, fw in zip(pts, fields):
        sphi = fw(pts)
        sa = kern.field(w)(pts)
        res = max(res, float(np.max(np.abs(sphi * q(pts) * np.conj(q(w)) - sa))))
    return res


def sc2_check(system_unweighted, roots, points, a=None):
    """Disk identity S_A q(z) conj(q(w)) = p(z) conj(p(w)) S(z, w), q zero-free with |q| = |p|."""
    from .maps import reconstruct_q
    from .szego import assemble, solve_szego_many
    from .weights import abs2_poly, sample_weight

    dom = system_unweighted.domain
    roots = [complex(r) for r in roots]
    weighted = assemble(dom, sample_weight(abs2_poly(roots), dom), system_unweighted.tol)
    a = complex(points[0]) if a is None else complex(a)
    qf = reconstruct_q(system_unweighted, weighted, a)
    kern = deflate(system_unweighted, Divisor(tuple((r, 1) for r in roots)))
    pts = np.asarray(points, dtype=complex)

    def p(z):
        out = np.ones(np.shape(z), dtype=complex)
        for r in roots:
            out = out * (np.asarray(z) - r)
        return out

    qv = qf(pts)
    res = 0.0
    for k, (w, fw) in enumerate(zip(pts, solve_szego_many(system_unweighted, pts))):
        lhs = kern.field(w)(pts) * qv * np.conj(qv[k])
        rhs = p(pts) * np.conj(p(w)) * fw(pts)
        res = max(res, float(np.max(np.abs(lhs - rhs))))
    return res
