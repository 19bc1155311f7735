"""Oracle suite behind ``wkern verify``: closed forms where the domain admits
them, structural identities everywhere.
"""

from dataclasses import dataclass

import numpy as np

from . import oracles
from .divisor import Divisor, deflate, theorem_neh_check
from .experiments import _is_circle, _is_round_annulus, interior_probes, product_identity
from .garabedian import garabedian_from_szego, residue_estimate, transpose_identity_residual
from .maps import ahlfors, boundary_modulus_residual, caratheodory
from .szego import assemble, inner_product, solve_szego, solve_szego_many
from .weights import abs2_poly, abs2_szego, constant, exp_trig, poisson, sample_weight
from .zeros import combined_ledger


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float

    @property
    def ok(self):
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    def to_dict(self):
        return {"name": self.name, "residual": self.residual, "tolerance": self.tolerance, "ok": self.ok}


def _generic(domain, weight, tol, probes):
    out = []
    sys_ = assemble(domain, sample_weight(weight, domain), tol)
    fields = solve_szego_many(sys_, probes)
    mat = np.array([f(probes) for f in fields])  # [w, z]
    out.append(Check("hermitian symmetry", float(np.max(np.abs(mat - mat.conj().T))), tol["hermitian"]))
    # reproducing property on h = S(., b) itself: <S(., b), S(., a)> = S(a, b)
    rep = 0.0
    for i, fa in enumerate(fields):
        for j, fb in enumerate(fields):
            ip = inner_product(fb.boundary, fa.boundary, sys_.weight, domain)
            rep = max(rep, abs(ip - mat[j, i]))
    out.append(Check("reproducing property", float(rep), tol["reproducing"]))
    gars = [garabedian_from_szego(f) for f in fields]
    out.append(Check("holomorphy of l", max(g.holomorphy_residual() for g in gars), tol["holomorphy"]))
    out.append(Check("garabedian residue", max(float(np.max(np.abs(residue_estimate(g) - 1 / (2 * np.pi)))) for g in gars[:2]), 1e-6))
    inv = assemble(domain, sample_weight(weight.inverted(), domain), tol)
    pairs = [(probes[i], probes[j]) for i in range(len(probes)) for j in range(len(probes)) if i != j][:10]
    out.append(Check("transpose identity", transpose_identity_residual(sys_, inv, pairs), tol["transpose"]))
    fmap = ahlfors(sys_, probes[0])
    out.append(Check("ahlfors boundary modulus", boundary_modulus_residual(fmap), tol["boundary_modulus"]))
    rep_z = combined_ledger(fields[0], gars[0])
    out.append(Check("zero ledger = n - 1", float(abs(rep_z.ledger_total - (domain.n - 1))), 0.0))
    return out


def _disk(domain, tol):
    out = []
    c = domain.curves[0]
    cen, r = c.center, abs(c.coeffs[c.freqs == 1][0])
    a = cen + 0.3 * r
    sys1 = assemble(domain, sample_weight(constant(1.0), domain), tol)
    s = solve_szego(sys1, a)
    g = garabedian_from_szego(s)
    out.append(Check("disk S closed form", float(np.max(np.abs(s.boundary - oracles.disk_szego(domain.z, a, cen, r)))), tol["disk_closed_form"]))
    out.append(Check("disk L closed form", float(np.max(np.abs(g.boundary - oracles.disk_garabedian(domain.z, a)))), tol["disk_closed_form"]))
    if abs(cen) > 1e-14 or abs(r - 1) > 1e-14:
        return out
    z = domain.z
    # |z - 2|^2 weight
    sysm = assemble(domain, sample_weight(abs2_poly([2.0]), domain), tol)
    sm = solve_szego(sysm, 0.3)
    exact = oracles.abs2_szego(oracles.disk_szego(z, 0.3), z - 2, 0.3 - 2)
    out.append(Check("mainexam S", float(np.max(np.abs(sm.boundary - exact))), tol["mainexam"]))
    lm = garabedian_from_szego(sm)
    exact_l = oracles.abs2_garabedian(oracles.disk_garabedian(z, 0.3), z - 2, 0.3 - 2)
    out.append(Check("mainexam L", float(np.max(np.abs(lm.boundary - exact_l))), tol["mainexam"]))
    sp = solve_szego(assemble(domain, sample_weight(poisson(0.4), domain), tol), 0.4)
    out.append(Check("poisson weight", float(np.max(np.abs(sp.boundary - 1))), tol["poisson"]))
    sq = solve_szego(assemble(domain, sample_weight(abs2_szego(0.4), domain, sys1), tol), 0.4)
    out.append(Check("|S(., A0)|^2 weight", float(np.max(np.abs(sq.boundary - 1 / oracles.disk_szego(0.4, 0.4).real))), tol["abs2_szego"]))
    out.append(Check("metric at 0", abs(caratheodory(sys1, 0.0) - 1.0), tol["metric"]))
    out.append(Check("metric at 0.5", abs(caratheodory(sys1, 0.5) - 4.0 / 3.0), tol["metric"]))
    probes = np.array([0.1, -0.3 + 0.2j, 0.5j, 0.4 - 0.4j])
    rep = product_identity(domain, exp_trig([1.0]), probes)
    out.append(Check("product identity", rep.max_residual, tol["product_disk"]))
    out.append(Check("bergman relation", rep.bergman_residual, tol["bergman_disk"]))
    for n in (1, 2):
        kern = deflate(sys1, Divisor(((0.0, n),)))
        w = 0.2 - 0.3j
        sa = kern.field(w)(probes)
        exact = probes**n * np.conj(w) ** n * oracles.disk_szego(probes, w)
        out.append(Check(f"divisor z^{n}", float(np.max(np.abs(sa - exact))), tol["divisor_disk"]))
    out.append(Check("weighted vs deflated kernel, q = z", theorem_neh_check(sys1, [0.0], [1], probes), 1e-7))
    return out


def _annulus(domain, rho, tol):
    out = []
    z = domain.z
    a = 0.7
    sys1 = assemble(domain, sample_weight(constant(1.0), domain), tol)
    s = solve_szego(sys1, a)
    out.append(Check("annulus S closed form", float(np.max(np.abs(s.boundary - oracles.annulus_szego(z, a, rho)))), tol["disk_closed_form"]))
    g = garabedian_from_szego(s)
    out.append(Check("annulus L closed form", float(np.max(np.abs(g.boundary - oracles.annulus_garabedian(z, a, rho)))), tol["disk_closed_form"]))
    pw = exp_trig(curves=[{"c": 0.0}, {"c": float(np.log(3.0))}])
    sp = solve_szego(assemble(domain, sample_weight(pw, domain), tol), a)
    exact = oracles.annulus_szego(z, a, rho, 1.0, 3.0)
    out.append(Check("piecewise-constant weight", float(np.max(np.abs(sp.boundary - exact))), tol["disk_closed_form"]))
    sq = solve_szego(assemble(domain, sample_weight(abs2_szego(a), domain, sys1), tol), a)
    out.append(Check("|S(., A0)|^2 weight", float(np.max(np.abs(sq.boundary - 1 / s(a).real))), tol["abs2_szego"]))
    rep = combined_ledger(s, g)
    zero = rep.szego_zeros[0][0] if rep.szego_zeros else np.nan
    out.append(Check("ledger zero location", float(abs(zero - oracles.annulus_szego_zero(a, rho))), 1e-8))
    probes = interior_probes(domain, 6)
    prod = product_identity(domain, pw, probes)
    out.append(Check("rank-one minor", prod.minor, tol["rank_one_minor"]))
    out.append(Check("harmonic-measure fit", prod.fit_residual, tol["rank_one_fit"]))
    out.append(Check("weighted vs deflated kernel, q = z - 0.7", theorem_neh_check(sys1, [0.7], [1], probes[:4]), tol["neh_annulus"]))
    return out


def run_checks(domain, weight=None, tol=None):
    """All applicable checks for ``domain`` (and ``weight`` for the structural ones)."""
    from .tolerances import DEFAULTS

    tol = dict(DEFAULTS if tol is None else tol)
    weight = exp_trig([0.5]) if weight is None else weight
    checks = []
    if _is_circle(domain):
        checks += _disk(domain, tol)
    rho = _is_round_annulus(domain)
    if rho is not None:
        checks += _annulus(domain, rho, tol)
    checks += _generic(domain, weight, tol, interior_probes(domain, 4))
    return checks
