"""Command-line interface ``wkern``.

Exit codes: 0 success, 1 tolerance failure, 2 schema error, 3 solver error.
"""

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import experiments
from .divisor import Divisor, deflate, extremal_map_A, garabedian_A
from .errors import SchemaError, WkernError
from .garabedian import garabedian_from_szego, residue_estimate
from .geometry import domain_from_dict
from .maps import ahlfors, boundary_image_csv, boundary_modulus_residual, caratheodory, derivative_fd_residual, reconstruct_q
from .szego import assemble, solve_szego
from .tolerances import with_overrides
from .weights import constant, perturbation_family, sample_weight, weight_from_dict
from .zeros import combined_ledger

SUBCOMMANDS = (
    "solve", "eval", "garabedian", "ahlfors", "metric", "zeros", "divisor",
    "reconstruct-q", "converge", "track", "identities", "verify",
)

# -- serialization --------------------------------------------------------------------


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return format(obj, ".17g") if math.isfinite(obj) else "null"
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [pad + json.dumps(k) + ": " + _encode(obj[k], indent, level + 1) for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    """Deterministic JSON: sorted keys, floats at 17 significant digits, complex as [re, im]."""
    return _encode(_plain(obj), indent, 0) + "\n"


# -- argument handling ----------------------------------------------------------------


def _pair(text, what):
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise SchemaError(f"{what} must be 'x,y'") from exc
    if len(parts) != 2:
        raise SchemaError(f"{what} must be 'x,y'")
    return complex(parts[0], parts[1])


def _load_json(path, what):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise SchemaError(f"{what} file {path!r} not found") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{what} file {path!r} is not valid JSON: {exc}") from exc


def _points_from(doc):
    if isinstance(doc, dict):
        doc = doc.get("points")
    if not isinstance(doc, list):
        raise SchemaError("a point grid is a list of [x, y] pairs (or {'points': [...]})")
    try:
        return np.array([complex(float(p[0]), float(p[1])) for p in doc])
    except (TypeError, ValueError, IndexError) as exc:
        raise SchemaError("grid entries must be [x, y] pairs") from exc


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise SchemaError(f"expected a comma-separated integer list, got {text!r}") from exc


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise SchemaError(f"expected a comma-separated number list, got {text!r}") from exc


class RunConfig:
    """Parsed command line: loaded domain, weight spec, base points, tolerances."""

    def __init__(self, args):
        self.args = args
        self.command = args.command
        self.seed = args.seed
        n = args.nodes
        if n is not None and (n < 32 or n > 2048 or n & (n - 1)):
            raise SchemaError("--nodes must be a power of two in [32, 2048]")
        overrides = {}
        for item in args.tol or []:
            key, sep, value = item.partition("=")
            if not sep:
                raise SchemaError(f"--tol expects key=value, got {item!r}")
            try:
                overrides[key.strip()] = float(value)
            except ValueError as exc:
                raise SchemaError(f"tolerance value {value!r} is not a number") from exc
        try:
            self.tol = with_overrides(overrides)
        except KeyError as exc:
            raise SchemaError(str(exc)) from exc
        if args.domain is None:
            raise SchemaError("--domain is required")
        self.domain = domain_from_dict(_load_json(args.domain, "domain"), n)
        self.nodes = self.domain.curves[0].N
        if self.nodes < 32 or self.nodes > 2048 or self.nodes & (self.nodes - 1):
            raise SchemaError("node count must be a power of two in [32, 2048]")
        self.weight = weight_from_dict(_load_json(args.weight, "weight")) if args.weight else constant(1.0)
        self.bases = [_pair(b, "--base") for b in (args.base or [])]
        self.point = _pair(args.point, "--point") if args.point else None
        self.grid = _points_from(_load_json(args.eval, "grid")) if args.eval else None
        self._system = None
        self._unweighted = None

    @property
    def base(self):
        if not self.bases:
            raise SchemaError("--base x,y is required for this command")
        return self.bases[0]

    def points(self):
        pts = [] if self.grid is None else list(self.grid)
        if self.point is not None:
            pts.insert(0, self.point)
        if not pts:
            raise SchemaError("give --point x,y or --eval grid.json")
        return np.array(pts)

    def unweighted(self):
        if self._unweighted is None:
            self._unweighted = assemble(self.domain, sample_weight(constant(1.0), self.domain), self.tol)
        return self._unweighted

    def system(self, weight=None):
        if weight is not None:
            return assemble(self.domain, self._sample(weight), self.tol)
        if self._system is None:
            self._system = assemble(self.domain, self._sample(self.weight), self.tol)
        return self._system

    def _sample(self, spec):
        two_pass = spec.constructor in ("abs2_szego", "inv_abs2_garabedian")
        return sample_weight(spec, self.domain, self.unweighted() if two_pass else None)


# -- commands -------------------------------------------------------------------------


def _system_summary(system):
    return {"nodes": int(system.domain.total_nodes), "curves": system.domain.n, **system.assembly_report}


def cmd_solve(cfg):
    sysm = cfg.system()
    out = {"system": _system_summary(sysm), "fields": []}
    for a in cfg.bases or [cfg.base]:
        f = solve_szego(sysm, a)
        out["fields"].append(f.to_dict())
    return out, True


def cmd_eval(cfg):
    sysm = cfg.system()
    pts = cfg.points()
    rows = []
    for a in cfg.bases or [cfg.base]:
        f = solve_szego(sysm, a)
        vals = f(pts)
        rows.extend({"z": z, "w": a, "S": v} for z, v in zip(pts, vals))
    return {"values": rows}, True


def cmd_garabedian(cfg):
    sysm = cfg.system()
    out = {"fields": []}
    for a in cfg.bases or [cfg.base]:
        g = garabedian_from_szego(solve_szego(sysm, a))
        d = g.to_dict()
        d["holomorphy_residual"] = g.holomorphy_residual()
        d["residue"] = residue_estimate(g)
        ok = d["holomorphy_residual"] <= cfg.tol["holomorphy"]
        if cfg.point is not None or cfg.grid is not None:
            pts = cfg.points()
            d["interior"] = [{"z": z, "L": v} for z, v in zip(pts, g(pts))]
        out["fields"].append(d)
    return out, ok


def cmd_ahlfors(cfg):
    fmap = ahlfors(cfg.system(), cfg.base)
    mod = boundary_modulus_residual(fmap)
    fd = derivative_fd_residual(fmap)
    out = {
        "base": fmap.base,
        "derivative_at_base": fmap.derivative_at_base,
        "boundary_modulus_residual": mod,
        "derivative_fd_residual": fd,
        "boundary": [{"curve": c, "t": t, "F": [x, y]} for c, t, x, y in fmap.boundary_image()],
    }
    ok = mod <= cfg.tol["boundary_modulus"] and fd <= cfg.tol["derivative_fd"]
    return out, ok, boundary_image_csv(fmap)


def cmd_metric(cfg):
    z = cfg.point if cfg.point is not None else cfg.base
    return caratheodory(cfg.system(), z), True


def cmd_zeros(cfg):
    sysm = cfg.system()
    reps = []
    for a in cfg.bases or [cfg.base]:
        s = solve_szego(sysm, a)
        rep = combined_ledger(s, garabedian_from_szego(s), cfg.tol)
        reps.append(rep.to_dict())
    ok = all(r["ledger"] == cfg.domain.n - 1 for r in reps)
    return reps[0] if len(reps) == 1 else reps, ok


def cmd_divisor(cfg):
    if not cfg.args.points:
        raise SchemaError('--points "x+yi:m,..." is required')
    div = Divisor.parse(cfg.args.points)
    kern = deflate(cfg.unweighted(), div)
    a = cfg.base
    pts = cfg.points() if (cfg.point is not None or cfg.grid is not None) else np.zeros(0, dtype=complex)
    s = kern.field(a)
    out = {
        "divisor": [{"z": b, "m": m} for b, m in div.points],
        "gram_condition": kern.gram_condition,
        "constraint_residual": kern.constraint_residual(a),
        "base": a,
        "values": [],
    }
    la = garabedian_A(kern, a)
    fa = extremal_map_A(kern, a)
    vals_s = s(pts) if len(pts) else []
    vals_l = la(pts) if len(pts) else []
    for z, sv, lv in zip(pts, vals_s, vals_l):
        out["values"].append({"z": z, "S_A": sv, "L_A": lv})
    out["extremal_divisor_values"] = fa.divisor_values()
    out["extremal_boundary_modulus_residual"] = float(np.max(np.abs(np.abs(fa.boundary) - 1)))
    ok = out["constraint_residual"] <= cfg.tol["divisor_constraint"]
    return out, ok


def cmd_reconstruct_q(cfg):
    q = reconstruct_q(cfg.unweighted(), cfg.system(), cfg.base)
    res = q.modulus_residual(cfg.system().weight.phi)
    zc = q.zero_count()
    out = {"base": q.base, "normalization": q.normalization, "modulus_residual": res, "zero_count": zc,
           "boundary": q.boundary}
    return out, res <= cfg.tol["q_modulus"] and zc == 0


def cmd_converge(cfg):
    ks = _int_list(cfg.args.k)
    eps = cfg.args.eps
    rec = experiments.convergence_study(cfg.domain, constant(1.0), lambda k: perturbation_family(eps, k), ks, seed=cfg.seed)
    summary = {"k": rec.k_values, "errors": rec.errors, "meta": rec.meta, "ratios": {}}
    ok = True
    if len(ks) >= 2:
        lo = 2 if 2 in ks else ks[0]
        for probe in rec.errors:
            for which in ("S", "l"):
                r = rec.ratio(probe, which, ks[-1], lo)
                summary["ratios"][f"{probe}_{which}"] = r
                ok &= r <= cfg.tol["convergence_ratio"]
    return summary, ok, experiments.rows_to_csv(rec.rows())


def cmd_track(cfg):
    if cfg.point is None:
        raise SchemaError("--point x,y (the boundary point a) is required")
    ks = [None] + _int_list(cfg.args.k)
    dists = _float_list(cfg.args.distances)
    tr = experiments.zero_tracking(cfg.domain, ks, cfg.point, dists, eps=cfg.args.eps)
    ok = all(r["ledger"] == cfg.domain.n - 1 for r in tr["rows"])
    csv_rows = [{k: v for k, v in r.items()} for r in tr["rows"]]
    return tr, ok, experiments.rows_to_csv(csv_rows)


def cmd_identities(cfg):
    from .garabedian import transpose_identity_residual

    probes = experiments.interior_probes(cfg.domain, 6, seed=cfg.seed)
    rep = experiments.product_identity(cfg.domain, cfg.weight, probes)
    inv = cfg.system(cfg.weight.inverted())
    pairs = [(probes[i], probes[(i + 1) % len(probes)]) for i in range(len(probes))]
    tr = transpose_identity_residual(cfg.system(), inv, pairs)
    out = {"product": rep.to_dict(), "transpose_residual": tr}
    ok = tr <= cfg.tol["transpose"]
    if rep.bergman_residual is not None:
        ok &= rep.max_residual <= cfg.tol["product_disk"] and rep.bergman_residual <= cfg.tol["bergman_disk"]
    if rep.minor is not None:
        ok &= rep.minor <= cfg.tol["rank_one_minor"] and rep.fit_residual <= cfg.tol["rank_one_fit"]
    return out, ok


def cmd_verify(cfg):
    from .verify import run_checks

    checks = run_checks(cfg.domain, cfg.weight if cfg.args.weight else None, cfg.tol)
    width = max(len(c.name) for c in checks)
    lines = [f"{'check':<{width}}  {'residual':>10}  {'tolerance':>9}  result"]
    for c in checks:
        lines.append(f"{c.name:<{width}}  {c.residual:10.3e}  {c.tolerance:9.1e}  {'pass' if c.ok else 'FAIL'}")
    ok = all(c.ok for c in checks)
    return {"checks": [c.to_dict() for c in checks], "ok": ok, "table": "\n".join(lines)}, ok


COMMANDS = {
    "solve": cmd_solve, "eval": cmd_eval, "garabedian": cmd_garabedian, "ahlfors": cmd_ahlfors,
    "metric": cmd_metric, "zeros": cmd_zeros, "divisor": cmd_divisor, "reconstruct-q": cmd_reconstruct_q,
    "converge": cmd_converge, "track": cmd_track, "identities": cmd_identities, "verify": cmd_verify,
}


def build_parser():
    p = argparse.ArgumentParser(prog="wkern", description="Weighted Szegő and Garabedian kernels on smooth planar domains.")
    p.add_argument("command", choices=SUBCOMMANDS)
    p.add_argument("--domain", help="domain JSON file")
    p.add_argument("--weight", help="weight JSON file (default: phi = 1)")
    p.add_argument("--nodes", type=int, help="nodes per boundary curve (power of two, 32..2048)")
    p.add_argument("--base", action="append", help="base point x,y (repeatable)")
    p.add_argument("--point", help="evaluation point x,y")
    p.add_argument("--eval", help="JSON grid of [x, y] evaluation points")
    p.add_argument("--points", help='divisor points "x+yi:m,..."')
    p.add_argument("--out", help="write the JSON result (and CSV next to it) instead of printing")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", action="append", metavar="KEY=VALUE", help="override a tolerance (repeatable)")
    p.add_argument("--k", default="1,2,4,8,16", help="perturbation indices k")
    p.add_argument("--eps", type=float, default=1.0, help="perturbation amplitude")
    p.add_argument("--distances", default="0.3,0.2,0.1", help="distances of the tracked base points")
    p.add_argument("--gnuplot", action="store_true", help="also emit a gnuplot script for CSV outputs")
    return p


def _emit(cfg, result, csv_text):
    out = cfg.args.out
    if cfg.command == "metric" and out is None:
        sys.stdout.write(repr(float(result)) + "\n")
        return
    if cfg.command == "verify" and out is None:
        sys.stdout.write(result["table"] + "\n")
        return
    text = dumps(result)
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    if csv_text:
        csv_path = path.with_suffix(".csv")
        csv_path.write_text(csv_text)
        if cfg.args.gnuplot:
            cols = list(range(2, 2 + csv_text.splitlines()[0].count(",")))
            script = experiments.gnuplot_script(csv_path.name, cols, cfg.command)
            path.with_suffix(".gp").write_text(script)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    np.random.seed(args.seed)
    try:
        cfg = RunConfig(args)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = COMMANDS[cfg.command](cfg)
        result, ok = res[0], res[1]
        csv_text = res[2] if len(res) > 2 else None
        _emit(cfg, result, csv_text)
    except SchemaError as exc:
        sys.stderr.write(f"wkern: schema error: {exc}\n")
        return 2
    except WkernError as exc:
        sys.stderr.write(f"wkern: {type(exc).__name__}: {exc}\n")
        return 3
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
