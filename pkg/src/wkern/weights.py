"""Positive smooth boundary weights and their parameter derivatives.

A weight is described by a :class:`WeightSpec` and materialised on the
nodes of a domain by :func:`sample_weight`. Parameter derivatives are
analytic for closed-form constructors and spectral for the two-pass
constructors built from an unweighted kernel solve.
"""

from dataclasses import dataclass, field

import numpy as np

from . import spectral
from .errors import MissingSolver, NonPositiveWeight, NoSzegoZero, SchemaError
from .geometry import winding_values
from .tolerances import DEFAULTS

CONSTRUCTORS = ("constant", "exp_trig", "abs2_poly", "poisson", "abs2_szego", "inv_abs2_garabedian")
TWO_PASS = ("abs2_szego", "inv_abs2_garabedian")


@dataclass(frozen=True)
class WeightSpec:
    constructor: str
    params: dict = field(default_factory=dict)
    inverse: bool = False

    def __post_init__(self):
        if self.constructor not in CONSTRUCTORS:
            raise SchemaError(f"unknown weight constructor {self.constructor!r}")

    def inverted(self):
        return WeightSpec(self.constructor, self.params, not self.inverse)

    def to_dict(self):
        doc = {"constructor": self.constructor}
        doc.update(_params_to_json(self.params))
        if self.inverse:
            doc["inverse"] = True
        return doc


@dataclass(frozen=True)
class WeightSamples:
    """Node values of a weight (``phi``) and d(phi)/dt (``dphi``)."""

    phi: np.ndarray
    dphi: np.ndarray
    spec: WeightSpec
    b0: complex = None
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        for arr in (self.phi, self.dphi):
            arr.setflags(write=False)

    def reciprocal(self):
        return WeightSamples(1.0 / self.phi, -self.dphi / self.phi**2, self.spec.inverted(), self.b0, dict(self.info))

    def transport(self):
        """The same samples re-used on a rigidly moved copy of the domain."""
        return WeightSamples(self.phi.copy(), self.dphi.copy(), self.spec, self.b0, dict(self.info))


# -- spec constructors -------------------------------------------------------------


def constant(c=1.0):
    return WeightSpec("constant", {"c": float(c)})


def exp_trig(a=(), b=(), curves=None):
    """phi = exp(c + sum_k a_k cos(k t) + b_k sin(k t)), k = 1, 2, ...

    ``curves`` gives one ``{"c": c, "a": [...], "b": [...]}`` per boundary
    curve; a single entry (or bare ``a``/``b``) applies to every curve.
    """
    if curves is None:
        curves = [{"a": list(a), "b": list(b)}]
    curves = tuple(
        {"c": float(c.get("c", 0.0)), "a": tuple(float(x) for x in c.get("a", ())), "b": tuple(float(x) for x in c.get("b", ()))}
        for c in curves
    )
    return WeightSpec("exp_trig", {"curves": curves})


def abs2_poly(roots, mults=None):
    roots = tuple(complex(r) for r in roots)
    mults = tuple(int(m) for m in (mults if mults is not None else [1] * len(roots)))
    if len(mults) != len(roots) or any(m < 1 for m in mults):
        raise SchemaError("abs2_poly needs one positive multiplicity per root")
    return WeightSpec("abs2_poly", {"roots": roots, "mults": mults})


def poisson(a0):
    return WeightSpec("poisson", {"A0": complex(a0)})


def abs2_szego(a0):
    return WeightSpec("abs2_szego", {"A0": complex(a0)})


def inv_abs2_garabedian(a0):
    return WeightSpec("inv_abs2_garabedian", {"A0": complex(a0)})


def perturbation_family(eps, k_index):
    """phi_k(t) = exp((eps / k) cos t) on every curve; tends to 1 as k grows."""
    if k_index < 1:
        raise ValueError("k_index must be >= 1")
    return exp_trig(a=[eps / k_index])


# -- sampling ------------------------------------------------------------------


def _exp_trig_samples(spec, domain):
    curves = spec.params["curves"]
    if len(curves) == 1:
        curves = curves * domain.n
    if len(curves) != domain.n:
        raise SchemaError("exp_trig needs one coefficient set per curve (or a single shared one)")
    phi, dphi = [], []
    for c, coef in zip(domain.curves, curves):
        e = np.full(c.N, coef["c"])
        de = np.zeros(c.N)
        for k, ak in enumerate(coef["a"], start=1):
            e += ak * np.cos(k * c.t)
            de -= k * ak * np.sin(k * c.t)
        for k, bk in enumerate(coef["b"], start=1):
            e += bk * np.sin(k * c.t)
            de += k * bk * np.cos(k * c.t)
        p = np.exp(e)
        phi.append(p)
        dphi.append(p * de)
    return np.concatenate(phi), np.concatenate(dphi), {}


def _abs2_poly_samples(spec, domain):
    z, dz = domain.z, domain.dz
    roots, mults = spec.params["roots"], spec.params["mults"]
    logphi = np.zeros(z.shape)
    dlog = np.zeros(z.shape)
    for r, m in zip(roots, mults):
        diff = z - r
        if np.min(np.abs(diff)) < 1e-10:
            raise NonPositiveWeight(f"root {r} lies on the boundary")
        logphi += m * np.log(np.abs(diff) ** 2)
        dlog += 2 * m * np.real(dz / diff)
    inside = np.abs(winding_values(domain, np.array(roots)) - 1) < 0.5 if roots else np.zeros(0, bool)
    info = {"roots_inside": [bool(x) for x in inside]}
    phi = np.exp(logphi)
    return phi, phi * dlog, info


def _poisson_samples(spec, domain):
    if domain.n != 1 or not (len(domain.curves[0].freqs) == 2 and set(domain.curves[0].freqs) == {0, 1}):
        raise SchemaError("the closed-form Poisson weight needs a single circular boundary")
    c = domain.curves[0]
    center, r = c.center, abs(c.coeffs[c.freqs == 1][0])
    a0 = spec.params["A0"]
    if abs(a0 - center) >= r:
        raise SchemaError("Poisson base point must lie in the disk")
    diff = c.z - a0
    q = np.abs(diff) ** 2
    k = (r**2 - abs(a0 - center) ** 2) / (2 * np.pi * r)
    phi = k / q
    dq = 2 * np.real(np.conj(diff) * c.dz)
    return phi, -k * dq / q**2, {}


def _two_pass_samples(spec, domain, solver):
    from .garabedian import garabedian_from_szego
    from .szego import solve_szego
    from .zeros import locate_field_zeros

    if solver is None:
        raise MissingSolver(f"{spec.constructor} needs an unweighted solver")
    if solver.domain.total_nodes != domain.total_nodes or not np.allclose(solver.domain.z, domain.z):
        raise SchemaError("solver domain does not match the weight domain")
    if not np.allclose(solver.weight.phi, 1.0):
        raise SchemaError("two-pass weights are built from the unweighted (phi = 1) kernel")
    a0 = spec.params["A0"]
    s_a0 = solve_szego(solver, a0)
    if spec.constructor == "abs2_szego":
        phi = np.abs(s_a0.boundary) ** 2
        return phi, _spectral_dt(domain, phi), None, {}
    if domain.n == 1:
        raise NoSzegoZero("S(., A0) has no zero in a simply connected domain")
    zeros = locate_field_zeros(s_a0)
    if not zeros:
        raise NoSzegoZero("no interior zero of S(., A0) was found")
    b0 = complex(zeros[0][0])
    garab = garabedian_from_szego(solve_szego(solver, b0))
    phi = 1.0 / np.abs(garab.boundary) ** 2
    return phi, _spectral_dt(domain, phi), b0, {"zeros_of_S_A0": [complex(z) for z, _ in zeros]}


def _spectral_dt(domain, values):
    return np.concatenate([spectral.differentiate(v) for v in domain.split(values)])


def sample_weight(spec, domain, solver=None):
    """Sample ``spec`` on the nodes of ``domain``.

    ``solver`` is an unweighted :class:`~wkern.szego.NystromSystem` on the
    same nodes; it is required by the two-pass constructors only.
    """
    b0 = None
    if spec.constructor == "constant":
        c = spec.params.get("c", 1.0)
        phi, dphi, info = np.full(domain.total_nodes, float(c)), np.zeros(domain.total_nodes), {}
    elif spec.constructor == "exp_trig":
        phi, dphi, info = _exp_trig_samples(spec, domain)
    elif spec.constructor == "abs2_poly":
        phi, dphi, info = _abs2_poly_samples(spec, domain)
    elif spec.constructor == "poisson":
        phi, dphi, info = _poisson_samples(spec, domain)
    else:
        phi, dphi, b0, info = _two_pass_samples(spec, domain, solver)
    if np.min(phi) <= DEFAULTS["min_weight"] or not np.all(np.isfinite(phi)):
        raise NonPositiveWeight("weight is not positive at every node")
    if spec.inverse:
        phi, dphi = 1.0 / phi, -dphi / phi**2
    return WeightSamples(phi, dphi, spec, b0, info)


def unit_weight(domain):
    return sample_weight(constant(1.0), domain)


# -- json ------------------------------------------------------------------------


def _params_to_json(params):
    out = {}
    for key, value in params.items():
        if key in ("A0",):
            out[key] = [value.real, value.imag]
        elif key == "roots":
            out[key] = [[r.real, r.imag] for r in value]
        elif key == "curves":
            out[key] = [{"c": c["c"], "a": list(c["a"]), "b": list(c["b"])} for c in value]
        else:
            out[key] = list(value) if isinstance(value, tuple) else value
    return out


def _pair(v, what):
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    raise SchemaError(f"{what} must be an [x, y] pair")


def weight_from_dict(doc):
    if not isinstance(doc, dict) or "constructor" not in doc:
        raise SchemaError("weight document needs a 'constructor'")
    kind = doc["constructor"]
    inverse = bool(doc.get("inverse", False))
    if kind == "constant":
        spec = constant(doc.get("c", 1.0))
    elif kind == "exp_trig":
        curves = doc.get("curves")
        if not isinstance(curves, list) or not curves:
            raise SchemaError("exp_trig needs a non-empty 'curves' list")
        spec = exp_trig(curves=curves)
    elif kind == "abs2_poly":
        roots = doc.get("roots")
        if not isinstance(roots, list):
            raise SchemaError("abs2_poly needs a 'roots' list")
        spec = abs2_poly([_pair(r, "root") for r in roots], doc.get("mults"))
    elif kind in ("poisson", "abs2_szego", "inv_abs2_garabedian"):
        spec = WeightSpec(kind, {"A0": _pair(doc.get("A0", [0.0, 0.0]), "A0")})
    else:
        raise SchemaError(f"unknown weight constructor {kind!r}")
    return spec.inverted() if inverse else spec
