import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wkern import spectral
from wkern.errors import BadDescriptor, DegenerateCurve, SchemaError, TooCloseToBoundary
from wkern.geometry import (
    annulus,
    build_curve,
    disk,
    distance_to_boundary,
    domain_from_dict,
    domain_to_dict,
    is_interior,
    tangent_winding,
    winding_number,
)


def test_circle_nodes_and_tangent():
    d = disk(64)
    assert np.allclose(d.z, np.exp(1j * d.t))
    assert np.allclose(d.T, 1j * d.z)
    assert np.allclose(d.ds.sum(), 2 * np.pi)


def test_annulus_orientation_and_tangent_winding():
    a = annulus(0.5, 64)
    assert [c.orientation for c in a.curves] == [1, -1]
    assert tangent_winding(a) == 2 - a.n
    assert tangent_winding(disk(64)) == 1


def test_ellipse_length_against_scipy():
    from scipy.special import ellipe

    c = build_curve({"kind": "ellipse", "a": 1.0, "b": 0.6}, 128)
    assert abs(c.length - 4 * ellipe(1 - 0.36)) < 1e-13


def test_fourier_descriptor_roundtrip():
    doc = {"curves": [{"kind": "fourier", "coeffs": [[0.1, 0], [0, 0], [1, 0], [0, 0], [0.05, 0.02]]}]}
    d = domain_from_dict(doc, 128)
    d2 = domain_from_dict(domain_to_dict(d))
    assert np.allclose(d.z, d2.z)


def test_winding_and_interior():
    a = annulus(0.5, 128)
    assert winding_number(a, 0.75) == 1
    assert winding_number(a, 0.2) == 0
    assert winding_number(a, 1.5) == 0
    assert list(is_interior(a, np.array([0.75, 0.25, 2.0]))) == [True, False, False]
    with pytest.raises(TooCloseToBoundary):
        winding_number(a, a.z[3])


def test_distance_to_boundary():
    d = disk(128)
    dist, ci, t = distance_to_boundary(d, np.array([0.5, 0.3j, -0.9]))
    assert np.allclose(dist, [0.5, 0.7, 0.1], atol=1e-6)


def test_rigid_motion_preserves_geometry():
    c = build_curve({"kind": "ellipse", "a": 1.0, "b": 0.7}, 64)
    m = c.transformed(np.exp(0.4j), 1 + 2j)
    assert abs(m.length - c.length) < 1e-13
    assert np.allclose(m.speed, c.speed)


@pytest.mark.parametrize(
    "desc,err",
    [
        ({"kind": "circle", "radius": -1}, BadDescriptor),
        ({"kind": "blob"}, BadDescriptor),
        ({"kind": "fourier", "coeffs": [[1, 0], [0, 0]]}, BadDescriptor),
        ({"kind": "fourier", "coeffs": [[0, 0], [1, 0], [0, 0]]}, DegenerateCurve),
    ],
)
def test_bad_descriptors(desc, err):
    with pytest.raises(err):
        build_curve(desc, 64)


def test_bad_node_count_and_nesting():
    with pytest.raises(BadDescriptor):
        build_curve({"kind": "circle"}, 100)
    with pytest.raises(SchemaError):
        domain_from_dict({"curves": [{"kind": "circle"}, {"kind": "circle", "center": [3, 0], "radius": 0.5}]}, 64)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10), st.floats(min_value=0.0, max_value=6.28))
def test_spectral_derivative_and_interpolation(k, t0):
    n = 64
    t = 2 * np.pi * np.arange(n) / n
    f = np.cos(k * t) + 0.5 * np.sin((k + 1) * t)
    df = -k * np.sin(k * t) + 0.5 * (k + 1) * np.cos((k + 1) * t)
    assert np.max(np.abs(spectral.differentiate(f) - df)) < 1e-11 * (k + 2)
    val = spectral.interpolate(f, t0)
    assert abs(val - (np.cos(k * t0) + 0.5 * np.sin((k + 1) * t0))) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=0.2, max_value=0.8), st.floats(min_value=0.0, max_value=6.28), st.floats(min_value=0.05, max_value=0.95))
def test_annulus_winding_property(rho, theta, frac):
    a = annulus(rho, 64)
    r = rho + frac * (1 - rho)
    p = r * np.exp(1j * theta)
    if min(r - rho, 1 - r) > 0.05:
        assert winding_number(a, p) == 1
    assert winding_number(a, 0.5 * rho * np.exp(1j * theta)) == 0
