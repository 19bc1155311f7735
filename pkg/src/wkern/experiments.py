"""Numerical studies: kernel convergence under weight perturbation, zero
tracking towards the boundary, Ahlfors map convergence, and product
identities between S_phi, S_{1/phi} and S.
"""

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from . import oracles
from .errors import SchemaError, TrackLost, Unresolved
from .garabedian import garabedian_from_szego
from .geometry import distance_to_boundary, winding_values
from .maps import ahlfors
from .szego import assemble, solve_szego, solve_szego_boundary, solve_szego_many
from .weights import abs2_poly, constant, exp_trig, perturbation_family, sample_weight
from .zeros import combined_ledger

# -- probe sets ----------------------------------------------------------------------


def interior_probes(domain, count=6, clearance=0.15, seed=42):
    """Deterministic interior points at least ``clearance`` from the boundary."""
    rng = np.random.default_rng(seed)
    x0, x1, y0, y1 = domain.bounding_box()
    pts = []
    while len(pts) < count:
        cand = rng.uniform(x0, x1, 64) + 1j * rng.uniform(y0, y1, 64)
        inside = np.abs(winding_values(domain, cand) - 1) < 0.5
        far = distance_to_boundary(domain, cand)[0] >= clearance
        pts.extend(cand[inside & far][: count - len(pts)])
    return np.array(pts)


def boundary_probes(domain, per_curve=8):
    idx = []
    for i, c in enumerate(domain.curves):
        start = domain.curve_slice(i).start
        step = c.N // per_curve
        idx.extend(start + step * np.arange(per_curve) + step // 3)
    return np.array(idx)


def _pairs_apart(za, zb, gap):
    return np.abs(za[:, None] - zb[None, :]) >= gap


@dataclass
class ConvergenceRecord:
    k_values: list
    errors: dict  # probe set -> {"S": [...], "l": [...]}
    limit: str = ""
    meta: dict = field(default_factory=dict)

    def rows(self):
        out = []
        for i, k in enumerate(self.k_values):
            row = {"k": k}
            for probe, d in self.errors.items():
                row[f"{probe}_S"] = d["S"][i]
                row[f"{probe}_l"] = d["l"][i]
            out.append(row)
        return out

    def ratio(self, probe, which, k_hi, k_lo):
        e = self.errors[probe][which]
        return e[self.k_values.index(k_hi)] / e[self.k_values.index(k_lo)]


def _kernel_samples(system, zi, bnodes, gap):
    """S and l on the three probe sets for one system."""
    dom = system.domain
    phi = system.weight.phi
    fields = solve_szego_many(system, zi)
    gars = [garabedian_from_szego(f) for f in fields]
    mask_ii = _pairs_apart(zi, zi, gap)
    s_ii = np.array([f(zi) for f in fields]).T  # [z, w]
    l_ii = np.array([g.regular_part(zi) for g in gars]).T
    zb = dom.z[bnodes]
    s_bi = np.array([f.boundary[bnodes] for f in fields]).T
    l_bi = np.array([g.regular[bnodes] for g in gars]).T
    s_bb = np.full((bnodes.size, bnodes.size), np.nan, dtype=complex)
    l_bb = np.full_like(s_bb, np.nan)
    for k, m in enumerate(bnodes):
        fb = solve_szego_boundary(system, int(m))
        vals = fb.boundary[bnodes]
        s_bb[:, k] = vals
        lb = 1j * phi[bnodes] * np.conj(vals) * np.conj(dom.T[bnodes])
        with np.errstate(divide="ignore", invalid="ignore"):
            l_bb[:, k] = lb - 1.0 / (2 * np.pi * (zb - dom.z[m]))
    mask_bb = _pairs_apart(zb, zb, gap)
    mask_bi = _pairs_apart(zb, zi, gap)
    return {
        "interior_interior": (s_ii, l_ii, mask_ii),
        "boundary_interior": (s_bi, l_bi, mask_bi),
        "boundary_boundary": (s_bb, l_bb, mask_bb),
    }


def convergence_study(domain, limit_weight, family, k_list, probes=None, boundary_per_curve=8, gap=0.2, seed=42):
    """Sup errors of S_{phi_k} and l_{phi_k} against the limit weight on three probe sets.

    ``family`` maps k to a WeightSpec. Boundary probe pairs are restricted to
    |z - w| >= ``gap`` (the diagonal is excluded).
    """
    zi = interior_probes(domain, seed=seed) if probes is None else np.asarray(probes, dtype=complex)
    bnodes = boundary_probes(domain, boundary_per_curve)
    ref_sys = assemble(domain, sample_weight(limit_weight, domain))
    ref = _kernel_samples(ref_sys, zi, bnodes, gap)
    errors = {name: {"S": [], "l": []} for name in ref}
    sup_dev = []
    for k in k_list:
        wk = sample_weight(family(k), domain)
        sup_dev.append(float(np.max(np.abs(wk.phi - ref_sys.weight.phi))))
        cur = _kernel_samples(assemble(domain, wk), zi, bnodes, gap)
        for name, (s0, l0, mask) in ref.items():
            s1, l1, _ = cur[name]
            errors[name]["S"].append(float(np.max(np.abs(s1 - s0)[mask])))
            errors[name]["l"].append(float(np.max(np.abs(l1 - l0)[mask])))
    meta = {"weight_sup_deviation": sup_dev, "interior_probes": [[z.real, z.imag] for z in zi],
            "boundary_nodes": [int(j) for j in bnodes]}
    return ConvergenceRecord(list(k_list), errors, limit_weight.constructor, meta)


# -- zero tracking --------------------------------------------------------------------


def nodes_for_distance(domain, dist, clearance=5.0, minimum=64, maximum=2048):
    """Smallest power-of-two node count keeping ``dist`` >= clearance node spacings."""
    spacing = float(np.max(domain.ds)) * domain.curves[0].N  # spacing times N
    n = minimum
    while n < maximum and dist < clearance * spacing / n:
        n *= 2
    return n


def _single_zero(report):
    zs = [(z, "szego") for z, m, _ in report.szego_zeros for _ in range(m)]
    zs += [(z, "garabedian") for z, m, _ in report.garabedian_zeros for _ in range(m)]
    return zs


def zero_tracking(domain, k_list, boundary_point, distances, eps=1.0, nodes_max=2048):
    """Ledger zero Z_k(w_j) as w_j = a + d_j n(a) approaches the boundary point a.

    n(a) is the inward unit normal; ``k_list`` may contain ``None`` for the
    unweighted kernel. The reference Z(a) extrapolates the unweighted zeros
    at the two smallest distances (doubled grids) linearly to d = 0; its
    distance to the nearer of the two is quoted as the uncertainty.
    """
    if domain.n != 2:
        raise SchemaError("zero tracking follows the single ledger zero of a doubly connected domain")
    dist0, ci, t0 = distance_to_boundary(domain, [boundary_point])
    c = domain.curves[int(ci[0])]
    a = complex(c.evaluate(t0[0]))
    normal = 1j * c.evaluate(t0[0], 1) / abs(c.evaluate(t0[0], 1))

    def field(k, d, n):
        dom = domain.with_nodes(n)
        spec = constant(1.0) if k is None else perturbation_family(eps, k)
        sys_ = assemble(dom, sample_weight(spec, dom))
        w = a + d * normal
        s = solve_szego(sys_, w)
        return w, s, garabedian_from_szego(s)

    # reference: unweighted zeros at the two smallest distances on doubled
    # grids, extrapolated linearly to d = 0
    d1, d2 = sorted(distances)[:2]
    refs = []
    for d in (d1, d2):
        n_ref = min(nodes_max, 2 * nodes_for_distance(domain, d))
        _, s_ref, g_ref = field(None, d, n_ref)
        zs = _single_zero(combined_ledger(s_ref, g_ref))
        if len(zs) != domain.n - 1 or len(zs) != 1:
            raise TrackLost("reference ledger does not show a single zero")
        refs.append(zs[0][0])
    z_ref = (d2 * refs[0] - d1 * refs[1]) / (d2 - d1)
    unc = float(abs(z_ref - refs[0]))
    rows = []
    for j, d in enumerate(distances):
        n = nodes_for_distance(domain, d)
        for k in k_list:
            w, s, g = field(k, d, n)
            try:
                rep = combined_ledger(s, g)
            except Unresolved as exc:
                raise TrackLost(f"zero lost at d={d}, k={k}: {exc}") from exc
            zs = _single_zero(rep)
            row = {"j": j, "k": "inf" if k is None else k, "d": d, "nodes": n, "w": w, "ledger": rep.ledger_total}
            if zs:
                # match to the reference zero
                zbest, factor = min(zs, key=lambda zf: abs(zf[0] - z_ref))
                row.update(zero=zbest, factor=factor, distance=float(abs(zbest - z_ref)))
            rows.append(row)
    return {"boundary_point": a, "reference": z_ref, "reference_uncertainty": unc, "rows": rows}


# -- Ahlfors convergence --------------------------------------------------------------


def ahlfors_convergence(domain, k_list, bases, eps=1.0, limit=None):
    """sup over boundary nodes and bases of |F_k - F| for phi_k = exp((eps/k) cos t)."""
    limit = constant(1.0) if limit is None else limit
    ref_sys = assemble(domain, sample_weight(limit, domain))
    refs = {complex(a): ahlfors(ref_sys, a) for a in bases}
    table = []
    k0 = None
    for k in k_list:
        sys_k = assemble(domain, sample_weight(perturbation_family(eps, k), domain))
        err = 0.0
        good = True
        ledgers = []
        for a, fref in refs.items():
            fk = ahlfors(sys_k, a)
            err = max(err, float(np.max(np.abs(fk.boundary - fref.boundary))))
            rep = combined_ledger(fk.szego, fk.garabedian)
            zs = sum(m for _, m, _ in rep.szego_zeros)
            zl = sum(m for _, m, _ in rep.garabedian_zeros)
            ledgers.append({"base": a, "szego": zs, "garabedian": zl, "ledger": rep.ledger_total})
            good &= zl == 0 and zs == domain.n - 1
        if good and k0 is None:
            k0 = k
        elif not good:
            k0 = None
        table.append({"k": k, "error": err, "garabedian_zero_free": bool(good), "ledgers": ledgers})
    return {"rows": table, "empirical_k0": k0}


# -- product identities ---------------------------------------------------------------


@dataclass
class ResidualReport:
    residual: np.ndarray
    max_residual: float
    rank: int
    minor: float = None
    fit_coefficient: complex = None
    fit_residual: float = None
    bergman_residual: float = None
    singular_values: list = field(default_factory=list)

    def to_dict(self):
        d = {
            "max_residual": self.max_residual,
            "rank": self.rank,
            "minor": self.minor,
            "fit_residual": self.fit_residual,
            "bergman_residual": self.bergman_residual,
            "singular_values": self.singular_values,
        }
        if self.fit_coefficient is not None:
            d["fit_coefficient"] = [self.fit_coefficient.real, self.fit_coefficient.imag]
        return d


def _max_minor(r):
    m = r.shape[0]
    best = 0.0
    for i in range(m):
        for j in range(m):
            for k in range(i + 1, m):
                for l in range(j + 1, m):
                    num = abs(r[i, j] * r[k, l] - r[i, l] * r[k, j])
                    den = abs(r[i, j] * r[k, l]) + abs(r[i, l] * r[k, j])
                    if den > 0:
                        best = max(best, num / den)
    return best


def _is_circle(domain):
    return domain.n == 1 and set(domain.curves[0].freqs) == {0, 1}


def _is_round_annulus(domain):
    if domain.n != 2:
        return None
    out, inn = domain.curves
    if set(out.freqs) != {0, 1} or set(inn.freqs) != {0, -1}:
        return None
    if abs(out.center) > 1e-14 or abs(inn.center) > 1e-14 or abs(abs(out.coeffs[out.freqs == 1][0]) - 1) > 1e-14:
        return None
    return abs(inn.coeffs[inn.freqs == -1][0])


def product_identity(domain, weight_spec, probes, rank_tol=1e-6):
    """R_ij = S_phi(z_i, w_j) S_{1/phi}(z_i, w_j) - S(z_i, w_j)^2 from three factorizations."""
    from .garabedian import check_reciprocal

    pts = np.asarray(probes, dtype=complex)
    w1 = sample_weight(weight_spec, domain)
    w2 = sample_weight(weight_spec.inverted(), domain)
    check_reciprocal(w1, w2)
    mats = []
    for w in (w1, w2, sample_weight(constant(1.0), domain)):
        sys_ = assemble(domain, w)
        mats.append(np.array([f(pts) for f in solve_szego_many(sys_, pts)]).T)
    sp, sq, s0 = mats
    prod = sp * sq
    r = prod - s0**2
    sv = np.linalg.svd(r, compute_uv=False)
    scale = float(np.max(np.abs(s0**2)))
    rank = int(np.sum(sv > rank_tol * scale))
    rep = ResidualReport(r, float(np.max(np.abs(r))), rank, singular_values=[float(x) for x in sv])
    if _is_circle(domain):
        zz, ww = np.meshgrid(pts, pts, indexing="ij")
        k = oracles.disk_bergman(zz, ww)
        rep.bergman_residual = float(np.max(np.abs(4 * np.pi * prod - k)))
    rho = _is_round_annulus(domain)
    if rho is not None:
        u = oracles.annulus_harmonic_derivative(pts, rho)
        basis = np.outer(u, np.conj(u))
        alpha = np.vdot(basis.ravel(), r.ravel()) / np.vdot(basis.ravel(), basis.ravel())
        rep.fit_coefficient = complex(alpha)
        fit = float(np.max(np.abs(r - alpha * basis)))
        if rank == 0:
            # R vanishes to roundoff: the zero matrix has rank 0 and every minor is 0
            rep.minor = 0.0
            rep.fit_residual = fit / scale
        else:
            rep.minor = _max_minor(r)
            rep.fit_residual = fit / rep.max_residual
    return rep


# -- output ---------------------------------------------------------------------------


def _plain(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, np.generic):
        return v.item()
    return v


def rows_to_csv(rows):
    if not rows:
        return ""
    keys = list(rows[0].keys())
    for r in rows[1:]:
        keys.extend(k for k in r if k not in keys)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in rows:
        out = []
        for k in keys:
            v = r.get(k, "")
            if isinstance(v, complex):
                out.append(f"{v.real:.17g}{v.imag:+.17g}j")
            elif isinstance(v, float):
                out.append(f"{v:.17g}")
            else:
                out.append(v)
        w.writerow(out)
    return buf.getvalue()


def gnuplot_script(csv_name, columns, title, logscale=True):
    lines = ["set datafile separator ','", f"set title '{title}'", "set key outside"]
    if logscale:
        lines.append("set logscale y")
    plots = [f"'{csv_name}' using 1:{c} with linespoints title columnhead({c})" for c in columns]
    lines.append("plot " + ", ".join(plots))
    return "\n".join(lines) + "\n"


def summary_json(obj):
    return json.dumps(obj, default=_plain, indent=2, sort_keys=True)


# -- spectral self-convergence --------------------------------------------------------


def _mainexam_residual(nodes, root=1.1, base=0.7):
    from .geometry import disk

    dom = disk(nodes)
    sys_ = assemble(dom, sample_weight(abs2_poly([root]), dom))
    s = solve_szego(sys_, base)
    exact = oracles.abs2_szego(oracles.disk_szego(dom.z, base), dom.z - root, base - root)
    return float(np.max(np.abs(s.boundary - exact)))


def _annulus_residual(nodes, rho=0.5, base=0.7, c_inner=3.0):
    from .geometry import annulus

    dom = annulus(rho, nodes)
    spec = constant(1.0) if c_inner == 1.0 else exp_trig(curves=[{"c": 0.0}, {"c": float(np.log(c_inner))}])
    s = solve_szego(assemble(dom, sample_weight(spec, dom)), base)
    exact = oracles.annulus_szego(dom.z, base, rho, 1.0, c_inner)
    return float(np.max(np.abs(s.boundary - exact)))


SELF_CONVERGENCE_CASES = {
    "disk_abs2_root_1.1": _mainexam_residual,
    "annulus_unweighted": lambda n: _annulus_residual(n, c_inner=1.0),
    "annulus_piecewise_constant": _annulus_residual,
}


def spectral_self_convergence(cases=None, n_lo=128, n_hi=256, floor=1e-11):
    """Oracle residuals at two resolutions and whether doubling gains >= 10x.

    Residuals already below ``floor`` at the coarse resolution count as converged.
    """
    cases = SELF_CONVERGENCE_CASES if cases is None else cases
    rows = []
    for name, fn in cases.items():
        lo, hi = fn(n_lo), fn(n_hi)
        ok = lo <= floor or hi <= floor or lo / hi >= 10.0
        rows.append({"case": name, "n_lo": n_lo, "n_hi": n_hi, "residual_lo": lo, "residual_hi": hi, "ok": bool(ok)})
    return rows
