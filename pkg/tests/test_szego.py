import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wkern import oracles
from wkern.errors import (
    AccuracyWarning,
    BasePointNearBoundary,
    BasePointOutside,
    ShapeMismatch,
)
from wkern.geometry import disk, domain_from_dict
from wkern.szego import (
    anti_hardy_residual,
    assemble,
    cauchy_transform,
    inner_product,
    kernel_matrix,
    solve_szego,
    solve_szego_boundary,
    solve_szego_many,
    szego_matrix,
)
from wkern.weights import abs2_poly, constant, exp_trig, sample_weight


def test_disk_kernel_matrix_vanishes_for_unit_weight(disk256):
    a = kernel_matrix(disk256, sample_weight(constant(1.0), disk256))
    assert np.max(np.abs(a)) < 1e-13


def test_assembly_report(disk_system, annulus_system):
    for s in (disk_system, annulus_system):
        rep = s.assembly_report
        assert rep["diagonal_richardson_error"] < 1e-6
        assert rep["condition_ok"]


def test_kernel_part_is_skew_adjoint(annulus256):
    w = sample_weight(exp_trig([0.7], [0.2]), annulus256)
    a = kernel_matrix(annulus256, w)
    # skew-adjoint in L^2(phi ds): D A D^-1 is skew-Hermitian, D = sqrt(phi ds)
    d = np.sqrt(w.phi * annulus256.ds)
    m = (d[:, None] * a / d[None, :]) * annulus256.h
    assert np.max(np.abs(m + m.conj().T)) < 1e-12 * max(1.0, np.max(np.abs(m)))


def test_annulus_closed_form_with_piecewise_constants(annulus256):
    spec = exp_trig(curves=[{"c": np.log(1.3)}, {"c": np.log(0.6)}])
    sys_ = assemble(annulus256, sample_weight(spec, annulus256))
    a = 0.7 + 0.1j
    s = solve_szego(sys_, a)
    assert np.max(np.abs(s.boundary - oracles.annulus_szego(annulus256.z, a, 0.5, 1.3, 0.6))) < 1e-13
    z = np.array([0.8, -0.6 + 0.2j, 0.55j])
    assert np.max(np.abs(s(z) - oracles.annulus_szego(z, a, 0.5, 1.3, 0.6))) < 1e-13


def test_interior_and_derivative_evaluation(disk_system):
    s = solve_szego(disk_system, 0.3)
    z = np.array([0.0, 0.5j, -0.7 + 0.1j, 0.95])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AccuracyWarning)
        assert np.max(np.abs(s(z) - oracles.disk_szego(z, 0.3))) < 1e-12
    exact_d1 = 0.3 / (2 * np.pi * (1 - 0.3 * z[:3]) ** 2)
    exact_d2 = 2 * 0.09 / (2 * np.pi * (1 - 0.3 * z[:3]) ** 3)
    assert np.max(np.abs(s.derivative(z[:3], 1) - exact_d1)) < 1e-12
    assert np.max(np.abs(s.derivative(z[:3], 2) - exact_d2)) < 1e-11


def test_near_boundary_evaluation_warns(disk_system):
    s = solve_szego(disk_system, 0.3)
    with pytest.warns(AccuracyWarning):
        v = s(0.99 * np.exp(0.3j))
    assert abs(v - oracles.disk_szego(0.99 * np.exp(0.3j), 0.3)) < 1e-10


def test_base_point_checks(disk_system):
    with pytest.raises(BasePointOutside):
        solve_szego(disk_system, 1.5)
    with pytest.raises(BasePointNearBoundary):
        solve_szego(disk_system, 0.995)


def test_many_equals_single(annulus_system):
    bases = [0.7, -0.6j, 0.8 + 0.1j]
    many = solve_szego_many(annulus_system, bases)
    for a, f in zip(bases, many):
        assert np.max(np.abs(f.boundary - solve_szego(annulus_system, a).boundary)) < 1e-14


def test_boundary_base_hermitian_symmetry(annulus256):
    sys_ = assemble(annulus256, sample_weight(exp_trig([0.5]), annulus256))
    m, i = 17, 300
    fb = solve_szego_boundary(sys_, m)
    assert np.isnan(fb.boundary[m])
    gb = solve_szego_boundary(sys_, i)
    assert abs(fb.boundary[i] - np.conj(gb.boundary[m])) < 1e-12


def test_boundary_base_matches_closed_form(annulus_system, annulus256):
    # the Laurent series converges for z on the inner circle, w on the outer
    fb = solve_szego_boundary(annulus_system, 40)
    mask = annulus256.curve_index == 1
    exact = oracles.annulus_szego(annulus256.z[mask], annulus256.z[40], 0.5)
    assert np.max(np.abs(fb.boundary[mask] - exact)) < 1e-12


def test_cauchy_transform_reproduces_polynomials(annulus256):
    vals = annulus256.z**3 - 2j * annulus256.z + 1 / annulus256.z
    z = np.array([0.7, -0.6j, 0.9 * np.exp(1j)])
    ex = z**3 - 2j * z + 1 / z
    assert np.max(np.abs(cauchy_transform(annulus256, vals, z) - ex)) < 1e-11
    d1 = cauchy_transform(annulus256, vals, z, order=1)
    assert np.max(np.abs(d1 - (3 * z**2 - 2j - 1 / z**2))) < 1e-11


def test_anti_hardy_residual_separates(disk256):
    assert anti_hardy_residual(disk256, disk256.z**2) < 1e-13
    assert anti_hardy_residual(disk256, np.conj(disk256.z)) > 0.1


def test_inner_product_shape_check(disk256, annulus256):
    w = sample_weight(constant(1.0), disk256)
    with pytest.raises(ShapeMismatch):
        inner_product(disk256.z, annulus256.z, w, disk256)


def test_szego_matrix_and_positivity(annulus_system):
    pts = np.array([0.7, -0.6j, 0.8 + 0.1j, -0.75])
    m = szego_matrix(annulus_system, pts, pts)
    assert np.max(np.abs(m - m.conj().T)) < 1e-13
    assert np.min(np.linalg.eigvalsh((m + m.conj().T) / 2)) > 0


def test_mainexam_convergence_is_spectral():
    errs = []
    for n in (64, 128, 256):
        d = disk(n)
        s = solve_szego(assemble(d, sample_weight(abs2_poly([1.3]), d)), 0.5)
        ex = oracles.abs2_szego(oracles.disk_szego(d.z, 0.5), d.z - 1.3, 0.5 - 1.3)
        errs.append(np.max(np.abs(s.boundary - ex)))
    assert errs[1] < errs[0] / 100 and errs[2] < max(errs[1] / 100, 1e-14)


@settings(max_examples=15, deadline=None)
@given(
    st.floats(min_value=-0.6, max_value=0.6),
    st.floats(min_value=-0.6, max_value=0.6),
    st.floats(min_value=-0.8, max_value=0.8),
    st.floats(min_value=-0.8, max_value=0.8),
)
def test_reproducing_property_random_bases(x1, y1, c1, s1):
    dom = domain_from_dict({"curves": [{"kind": "ellipse", "a": 1.0, "b": 0.8}]}, 128)
    sys_ = assemble(dom, sample_weight(exp_trig([c1], [s1]), dom))
    a, b = complex(x1, y1 * 0.8), complex(y1, x1 * 0.8)
    fa, fb = solve_szego_many(sys_, [a, b])
    # <S(., b), S(., a)>_phi = S(a, b) and hermitian symmetry
    ip = inner_product(fb.boundary, fa.boundary, sys_.weight, dom)
    assert abs(ip - fb(a)) < 1e-10
    assert abs(fb(a) - np.conj(fa(b))) < 1e-10
    assert fa(a).real > 0
