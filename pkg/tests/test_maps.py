import numpy as np
import pytest

from wkern import oracles
from wkern.errors import NonPositiveDiagonal, NotSimplyConnected
from wkern.geometry import domain_from_dict
from wkern.maps import (
    ahlfors,
    boundary_image_csv,
    boundary_modulus_residual,
    caratheodory,
    disk_competitors,
    reconstruct_q,
    rigid_motion_caratheodory,
)
from wkern.szego import assemble
from wkern.weights import abs2_poly, exp_trig, sample_weight


def test_disk_ahlfors_is_mobius(disk_system):
    a = 0.3 - 0.2j
    fmap = ahlfors(disk_system, a)
    z = np.array([0.0, 0.5j, -0.6 + 0.1j, a])
    assert np.max(np.abs(fmap(z) - oracles.disk_ahlfors(z, a))) < 1e-13
    assert abs(fmap.derivative_at_base - 1 / (1 - abs(a) ** 2)) < 1e-13
    assert abs(fmap.derivative(a) - 1 / (1 - abs(a) ** 2)) < 1e-12


def test_annulus_ahlfors_image(annulus_system):
    fmap = ahlfors(annulus_system, 0.7)
    assert boundary_modulus_residual(fmap) < 1e-12
    # a two-sheeted cover: the image of every boundary curve winds once around 0
    for i in range(2):
        vals = fmap.boundary[annulus_system.domain.curve_slice(i)]
        turn = np.sum(np.angle(np.roll(vals, -1) / vals)) / (2 * np.pi)
        assert round(turn) == 1
    assert abs(fmap(0.7)) < 1e-14
    assert boundary_image_csv(fmap).startswith("curve,t,re,im")


def test_weighted_extremal_bound_attained(disk256):
    # |f'(a)| over the competitor family never exceeds c_phi(a) and the best one attains it
    sys_ = assemble(disk256, sample_weight(exp_trig([0.7], [0.3]), disk256))
    a = 0.2 + 0.1j
    comp = disk_competitors(ahlfors(sys_, a), centers=[0.1, -0.5j, 0.9])
    c = caratheodory(sys_, a)
    assert np.all(comp <= c * (1 + 1e-12))
    assert abs(comp[0] - c) < 1e-12


def test_metric_is_positive_and_monotone_under_weight_scaling(disk256, disk_system):
    c1 = caratheodory(disk_system, 0.4)
    sys2 = assemble(disk256, sample_weight(exp_trig(curves=[{"c": np.log(4.0)}]), disk256))
    # S_{c phi} = S_phi / c
    assert abs(caratheodory(sys2, 0.4) - c1 / 4) < 1e-13


def test_nonpositive_diagonal_is_an_error_type():
    assert issubclass(NonPositiveDiagonal, Exception)


def test_reconstruct_q_for_abs2_weight(disk256, disk_system):
    sys_w = assemble(disk256, sample_weight(abs2_poly([1.5 + 0.5j]), disk256))
    q = reconstruct_q(disk_system, sys_w, 0.0)
    # q is (z - r) up to a unimodular constant, fixed by q(0) > 0
    exact = (disk256.z - (1.5 + 0.5j)) * abs(1.5 + 0.5j) / (-(1.5 + 0.5j))
    assert np.max(np.abs(q.boundary - exact)) < 1e-12
    assert q.zero_count() == 0


def test_reconstruct_q_needs_simple_connectivity(annulus_system):
    with pytest.raises(NotSimplyConnected):
        reconstruct_q(annulus_system, annulus_system, 0.7)


def test_rigid_motion_invariance():
    dom = domain_from_dict({"curves": [{"kind": "fourier", "coeffs": [[0.05, 0.02], [0, 0], [0.1, 0], [1, 0], [0.08, 0]]}]}, 128)
    w = sample_weight(exp_trig([0.3], [0.1]), dom)
    assert rigid_motion_caratheodory(assemble, dom, w, 0.1 + 0.1j, np.exp(2.1j), -0.7 + 0.4j) < 1e-12
