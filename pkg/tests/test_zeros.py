import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wkern import oracles
from wkern.errors import NonIntegerWinding, Unresolved, ZeroOnContour
from wkern.garabedian import garabedian_from_szego
from wkern.szego import solve_szego
from wkern.zeros import (
    boundary_contour,
    circle_contour,
    combined_ledger,
    contour_winding,
    count_zeros,
    locate_field_zeros,
    locate_zeros,
    offset_contour,
)


class Poly:
    def __init__(self, roots):
        self.roots = list(roots)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones(z.shape, dtype=complex)
        for r in self.roots:
            out = out * (z - r)
        return out

    def derivative(self, z, order=1):
        z = np.asarray(z, dtype=complex)
        total = np.zeros(z.shape, dtype=complex)
        for i in range(len(self.roots)):
            term = np.ones(z.shape, dtype=complex)
            for j, r in enumerate(self.roots):
                if j != i:
                    term = term * (z - r)
            total = total + term
        return total


def test_count_identity_on_circle():
    assert count_zeros(lambda z: z, circle_contour(0, 0.5)) == 1


def test_disk_szego_has_no_zero(disk_system):
    s = solve_szego(disk_system, 0.3)
    assert count_zeros(s, circle_contour(0, 0.9)) == 0


def test_zero_on_contour_raises():
    with pytest.raises(ZeroOnContour):
        count_zeros(lambda z: z - 0.5, circle_contour(0, 0.5, 64))


def test_non_integer_winding():
    # a phase jump that neither the spectral sum nor unwrapping can resolve
    c = circle_contour(0, 1.0, 16)
    with pytest.raises(NonIntegerWinding):
        contour_winding(c, np.exp(1j * np.linspace(0, 3.5, 16)))


def test_quadtree_polynomial(disk256):
    zs = locate_zeros(Poly([0.0, 0.5]), (-0.9, 0.9, -0.9, 0.9), expected=2, domain=disk256)
    assert len(zs) == 2
    assert np.allclose(sorted(z.real for z, _ in zs), [0.0, 0.5], atol=1e-12)


def test_quadtree_double_zero(disk256):
    zs = locate_zeros(Poly([0.2 + 0.1j, 0.2 + 0.1j, -0.4]), (-0.9, 0.9, -0.9, 0.9), domain=disk256)
    mults = sorted(m for _, m in zs)
    assert mults == [1, 2]


def test_quadtree_expected_mismatch(disk256):
    with pytest.raises(Unresolved):
        locate_zeros(Poly([0.1]), (-0.9, 0.9, -0.9, 0.9), expected=2, domain=disk256)


def test_annulus_ledger_zero(annulus_system):
    a = 0.7
    s = solve_szego(annulus_system, a)
    rep = combined_ledger(s, garabedian_from_szego(s))
    assert rep.ledger_total == 1
    assert rep.garabedian_zeros == []
    z, m, where = rep.szego_zeros[0]
    assert m == 1 and where == "interior"
    assert abs(z - oracles.annulus_szego_zero(a, 0.5)) < 1e-10
    assert 0.5 < abs(z) < 1
    d = rep.to_dict()
    assert d["ledger"] == 1 and d["szego"][0]["m"] == 1


def test_annulus_zero_against_grid_scan(annulus_system):
    s = solve_szego(annulus_system, 0.7 + 0.2j)
    found = locate_field_zeros(s)
    # brute-force modulus scan on a coarse polar grid
    r = np.linspace(0.55, 0.95, 60)
    th = np.linspace(0, 2 * np.pi, 200, endpoint=False)
    grid = (r[:, None] * np.exp(1j * th[None, :])).ravel()
    best = grid[np.argmin(np.abs(s(grid)))]
    assert abs(found[0][0] - best) < 0.03


def test_boundary_vs_offset_winding(annulus_system):
    s = solve_szego(annulus_system, 0.7)
    dom = annulus_system.domain
    wb = contour_winding(boundary_contour(dom), s.boundary)
    wo = contour_winding(offset_contour(dom), s(offset_contour(dom).points))
    assert round(wb) == round(wo) == 1


@settings(max_examples=10, deadline=None)
@given(st.floats(min_value=0.63, max_value=0.75), st.floats(min_value=0.0, max_value=6.28))
def test_annulus_zero_follows_reflection(r, theta):
    sys_ = _system128()
    w = r * np.exp(1j * theta)
    s = solve_szego(sys_, w)
    zs = locate_field_zeros(s)
    assert len(zs) == 1
    assert abs(zs[0][0] - oracles.annulus_szego_zero(w, 0.5)) < 1e-9


_cache = {}


def _annulus128():
    from wkern.geometry import annulus

    if "dom" not in _cache:
        _cache["dom"] = annulus(0.5, 128)
    return _cache["dom"]


def _system128():
    from wkern.szego import assemble
    from wkern.weights import constant, sample_weight

    if "sys" not in _cache:
        dom = _annulus128()
        _cache["sys"] = assemble(dom, sample_weight(constant(1.0), dom))
    return _cache["sys"]
