import numpy as np
import pytest

from wkern import oracles
from wkern.errors import MissingSolver, NonPositiveWeight, NoSzegoZero, SchemaError
from wkern.weights import (
    abs2_poly,
    abs2_szego,
    constant,
    exp_trig,
    inv_abs2_garabedian,
    perturbation_family,
    poisson,
    sample_weight,
    weight_from_dict,
)


def test_constant_and_inverse(disk256):
    w = sample_weight(constant(2.5), disk256)
    assert np.all(w.phi == 2.5) and np.all(w.dphi == 0)
    assert np.allclose(sample_weight(constant(2.5).inverted(), disk256).phi, 0.4)


def test_exp_trig_derivative_is_exact(annulus256):
    spec = exp_trig(curves=[{"a": [0.3, 0.1], "b": [0.2]}, {"c": 0.5, "a": [0.4]}])
    w = sample_weight(spec, annulus256)
    from wkern.spectral import differentiate

    ref = np.concatenate([differentiate(p) for p in annulus256.split(w.phi)])
    assert np.max(np.abs(w.dphi - ref)) < 1e-12
    inner = annulus256.split(w.phi)[1]
    assert np.isclose(np.exp(np.mean(np.log(inner))), np.exp(0.5))


def test_abs2_poly_matches_modulus(disk256):
    w = sample_weight(abs2_poly([2.0, 0.3j], [1, 2]), disk256)
    z = disk256.z
    assert np.allclose(w.phi, np.abs(z - 2) ** 2 * np.abs(z - 0.3j) ** 4)
    assert w.info["roots_inside"] == [False, True]


def test_poisson_integrates_to_one(disk256):
    w = sample_weight(poisson(0.3 + 0.4j), disk256)
    assert abs(np.sum(w.phi * disk256.ds) - 1) < 1e-13
    assert np.allclose(w.phi, oracles.disk_poisson(disk256.z, 0.3 + 0.4j))


def test_poisson_needs_circle(annulus256):
    with pytest.raises(SchemaError):
        sample_weight(poisson(0.7), annulus256)


def test_two_pass_weights_need_a_solver(disk256, disk_system):
    with pytest.raises(MissingSolver):
        sample_weight(abs2_szego(0.2), disk256)
    w = sample_weight(abs2_szego(0.2), disk256, disk_system)
    assert np.allclose(w.phi, np.abs(oracles.disk_szego(disk256.z, 0.2)) ** 2)
    with pytest.raises(NoSzegoZero):
        sample_weight(inv_abs2_garabedian(0.2), disk256, disk_system)


def test_inverse_garabedian_weight_locates_b0(annulus256, annulus_system):
    w = sample_weight(inv_abs2_garabedian(0.7), annulus256, annulus_system)
    assert abs(w.b0 - oracles.annulus_szego_zero(0.7, 0.5)) < 1e-10


def test_nonpositive_weight(disk256):
    with pytest.raises(NonPositiveWeight):
        sample_weight(abs2_poly([disk256.z[5]]), disk256)


def test_perturbation_family_tends_to_one(disk256):
    devs = [np.max(np.abs(sample_weight(perturbation_family(1.0, k), disk256).phi - 1)) for k in (1, 4, 16)]
    assert devs[0] > devs[1] > devs[2]
    with pytest.raises(ValueError):
        perturbation_family(1.0, 0)


@pytest.mark.parametrize(
    "spec",
    [constant(1.5), exp_trig([0.2], [0.1]), abs2_poly([2 + 1j], [2]), poisson(0.1j), abs2_szego(0.3), exp_trig([1.0]).inverted()],
)
def test_json_roundtrip(spec):
    assert weight_from_dict(spec.to_dict()) == spec


def test_bad_weight_documents():
    for doc in ({}, {"constructor": "nope"}, {"constructor": "exp_trig"}, {"constructor": "abs2_poly", "roots": 3}):
        with pytest.raises(SchemaError):
            weight_from_dict(doc)


def test_samples_are_read_only(disk256):
    w = sample_weight(constant(1.0), disk256)
    with pytest.raises(ValueError):
        w.phi[0] = 2.0
