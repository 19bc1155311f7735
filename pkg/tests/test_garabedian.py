import numpy as np
import pytest

from wkern import oracles
from wkern.errors import PoleHit, ReciprocalMismatch
from wkern.garabedian import (
    boundary_zero_suspects,
    check_reciprocal,
    eval_garabedian,
    garabedian_from_szego,
    residue_estimate,
    transpose_identity_residual,
)
from wkern.szego import assemble, solve_szego
from wkern.weights import constant, exp_trig, sample_weight


def test_disk_garabedian_closed_form(disk_system):
    g = garabedian_from_szego(solve_szego(disk_system, 0.3 - 0.2j))
    z = np.array([0.1, -0.5j, 0.7 + 0.1j])
    assert np.max(np.abs(g(z) - oracles.disk_garabedian(z, 0.3 - 0.2j))) < 1e-13
    assert np.max(np.abs(g.regular_part(z))) < 1e-13


def test_annulus_regular_part_closed_form(annulus_system):
    a = 0.7 + 0.1j
    g = garabedian_from_szego(solve_szego(annulus_system, a))
    z = np.array([0.8, -0.6 + 0.2j, 0.55j])
    assert np.max(np.abs(g.regular_part(z) - oracles.annulus_garabedian_regular(z, a, 0.5))) < 1e-13


def test_boundary_evaluation_interpolates(annulus_system, annulus256):
    g = garabedian_from_szego(solve_szego(annulus_system, 0.7))
    t = 0.123
    zb = np.exp(1j * t)
    assert abs(eval_garabedian(g, zb) - oracles.annulus_garabedian(zb, 0.7, 0.5)) < 1e-11


def test_pole_and_residue(annulus_system):
    g = garabedian_from_szego(solve_szego(annulus_system, 0.7))
    with pytest.raises(PoleHit):
        g(0.7)
    assert np.max(np.abs(residue_estimate(g) - 1 / (2 * np.pi))) < 1e-6


def test_zero_function_is_regular_and_normalized(annulus_system):
    g = garabedian_from_szego(solve_szego(annulus_system, 0.7))
    f = g.zero_function()
    assert abs(f(0.7) - 1) < 1e-14
    z = 0.6 - 0.3j
    assert abs(f(z) - 2 * np.pi * (z - 0.7) * g(z)) < 1e-13
    h = 1e-5
    fd = (f(z + h) - f(z - h)) / (2 * h)
    assert abs(f.derivative(z) - fd) < 1e-8


def test_transpose_identity(annulus256):
    spec = exp_trig([0.9], [-0.2])
    s1 = assemble(annulus256, sample_weight(spec, annulus256))
    s2 = assemble(annulus256, sample_weight(spec.inverted(), annulus256))
    assert transpose_identity_residual(s1, s2, [(0.7, -0.6j), (0.8 + 0.1j, -0.75)]) < 1e-13


def test_reciprocal_mismatch(disk256):
    w1 = sample_weight(exp_trig([0.5]), disk256)
    with pytest.raises(ReciprocalMismatch):
        check_reciprocal(w1, sample_weight(constant(1.0), disk256))


def test_no_boundary_suspects_for_smooth_case(annulus_system):
    s = solve_szego(annulus_system, 0.7)
    assert boundary_zero_suspects(s).size == 0


def test_to_dict_has_pole(disk_system):
    d = garabedian_from_szego(solve_szego(disk_system, 0.3)).to_dict()
    assert d["pole"] == [0.3, 0.0] and len(d["values"]) == 256
