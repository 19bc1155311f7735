import numpy as np

from wkern import oracles
from wkern.experiments import (
    ConvergenceRecord,
    _max_minor,
    ahlfors_convergence,
    convergence_study,
    gnuplot_script,
    interior_probes,
    nodes_for_distance,
    rows_to_csv,
    summary_json,
    zero_tracking,
)
from wkern.geometry import disk, distance_to_boundary
from wkern.weights import constant, perturbation_family


def test_probes_are_interior_and_deterministic(annulus256):
    p1 = interior_probes(annulus256, 6, seed=1)
    p2 = interior_probes(annulus256, 6, seed=1)
    assert np.array_equal(p1, p2)
    assert np.all(distance_to_boundary(annulus256, p1)[0] >= 0.15)


def test_constant_family_has_zero_error(disk256):
    rec = convergence_study(disk256, constant(1.0), lambda k: constant(1.0), [1, 2])
    for probe in rec.errors.values():
        assert max(probe["S"] + probe["l"]) == 0.0


def test_disk_convergence_errors_match_closed_form():
    # phi_k = exp(cos t / k) = |exp(z / 2k)|^2, so S_k = S exp(-(z + conj w) / 2k)
    dom = disk(128)
    probes = np.array([0.3, -0.4j, 0.2 + 0.5j])
    rec = convergence_study(dom, constant(1.0), lambda k: perturbation_family(1.0, k), [2, 16], probes=probes)
    zz, ww = np.meshgrid(probes, probes, indexing="ij")
    s0 = oracles.disk_szego(zz, ww)
    for i, k in enumerate((2, 16)):
        exact = np.max(np.abs(s0 * (np.exp(-(zz + np.conj(ww)) / (2 * k)) - 1)))
        assert abs(rec.errors["interior_interior"]["S"][i] - exact) < 1e-12


def test_convergence_record_rows():
    rec = ConvergenceRecord([1, 2], {"a": {"S": [1.0, 0.5], "l": [2.0, 1.0]}})
    assert rec.rows() == [{"k": 1, "a_S": 1.0, "a_l": 2.0}, {"k": 2, "a_S": 0.5, "a_l": 1.0}]
    assert rec.ratio("a", "S", 2, 1) == 0.5
    assert rows_to_csv(rec.rows()).splitlines()[0] == "k,a_S,a_l"


def test_annulus_convergence_is_monotone_on_boundary_pairs(annulus256):
    rec = convergence_study(annulus256, constant(1.0), lambda k: perturbation_family(1.0, k), [1, 2, 4, 8])
    e = rec.errors["boundary_boundary"]["S"]
    assert all(b < a for a, b in zip(e, e[1:]))


def test_ahlfors_convergence_identity_family(disk256):
    res = ahlfors_convergence(disk256, [1, 2], [0.3], limit=constant(1.0), eps=0.0)
    assert all(r["error"] < 1e-14 for r in res["rows"])
    assert res["empirical_k0"] == 1


def test_ahlfors_convergence_annulus_zero_free(annulus256):
    res = ahlfors_convergence(annulus256, [16], [0.7, -0.72])
    assert res["rows"][0]["garabedian_zero_free"]


def test_zero_tracking_distances_decrease(annulus256):
    tr = zero_tracking(annulus256, [None, 4], 1.0, [0.3, 0.2, 0.15])
    rows = [r for r in tr["rows"] if r["k"] == "inf"]
    d = [r["distance"] for r in rows]
    assert d[0] > d[1] > d[2]
    assert all(r["ledger"] == 1 for r in tr["rows"])
    last = [r for r in tr["rows"] if r["k"] == 4][-1]
    first = [r for r in tr["rows"] if r["k"] == 4][0]
    assert last["distance"] < first["distance"]
    # the limit zero of the unweighted kernel is -rho / conj(a)
    assert abs(tr["reference"] - (-0.5)) < 0.05


def test_nodes_for_distance(annulus256):
    assert nodes_for_distance(annulus256, 0.5) == 64
    n = nodes_for_distance(annulus256, 0.05)
    assert 5 * 2 * np.pi / n <= 0.05 < 5 * 2 * np.pi / (n / 2)


def test_minor_of_rank_one_matrix():
    u = np.array([1.0, 2.0 + 1j, -0.5])
    assert _max_minor(np.outer(u, u.conj())) < 1e-15
    assert _max_minor(np.eye(3)) == 1.0


def test_output_helpers():
    txt = summary_json({"a": 1 + 2j, "b": np.float64(0.5)})
    assert '"a": [' in txt
    gp = gnuplot_script("x.csv", [2, 3], "t")
    assert "plot 'x.csv' using 1:2" in gp
