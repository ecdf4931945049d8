import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from zonelab.sphere import (
    Arrangement,
    Zone,
    cap_measure_fraction,
    constants,
    kappa,
    sample_uniform,
    spherical_distance,
    unit_vector,
    zone_contains,
    zone_measure_fraction,
)

coords = st.lists(st.floats(-10, 10, allow_nan=False), min_size=3, max_size=6).filter(
    lambda v: np.linalg.norm(v) > 1e-3
)


def test_unit_vector_normalizes():
    v = unit_vector([3.0, 0.0, 4.0])
    assert np.allclose(v, [0.6, 0.0, 0.8])
    with pytest.raises(ValueError):
        unit_vector([0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        unit_vector([1.0])


@given(coords)
def test_unit_vector_has_unit_norm(v):
    assert abs(np.linalg.norm(unit_vector(v)) - 1.0) < 1e-12


def test_spherical_distance_examples():
    e1, e2 = np.eye(3)[:2]
    assert spherical_distance(e1, e2) == pytest.approx(math.pi / 2)
    assert spherical_distance(e1, -e1) == pytest.approx(math.pi)
    assert spherical_distance(e1, e1) == 0.0
    # tiny angles keep full relative precision
    eps = 1e-9
    p = unit_vector([1.0, eps, 0.0])
    assert spherical_distance(e1, p) == pytest.approx(eps, rel=1e-6)
    with pytest.raises(ValueError):
        spherical_distance(e1, np.ones(4) / 2)


@given(coords, coords)
def test_spherical_distance_symmetric_and_bounded(a, b):
    if len(a) != len(b):
        return
    p, q = unit_vector(a), unit_vector(b)
    d = spherical_distance(p, q)
    assert 0.0 <= d <= math.pi + 1e-12
    assert d == pytest.approx(spherical_distance(q, p), abs=1e-12)
    assert d == pytest.approx(math.acos(np.clip(p @ q, -1, 1)), abs=1e-6)


def test_zone_membership_closed_and_open():
    z = Zone([0, 0, 1], 0.1)
    assert zone_contains(z, [1, 0, 0])
    assert not zone_contains(z, [0, 0, 1])
    assert not zone_contains(z, [0, 0, 1], mode="open")
    with pytest.raises(ValueError):
        zone_contains(z, [1, 0, 0], mode="ajar")
    with pytest.raises(ValueError):
        Zone([0, 0, 1], math.pi / 2)
    assert Zone([0, 0, 2], 0.1) == z
    assert z.width == pytest.approx(0.2)


def test_zone_is_symmetric_under_pole_negation(rng):
    x = sample_uniform(3, rng, 1000)
    a = Zone([1, 2, 3], 0.3).contains(x)
    b = Zone([-1, -2, -3], 0.3).contains(x)
    assert np.array_equal(a, b)


def test_sample_uniform_shapes_and_moments(rng):
    x = sample_uniform(4, rng, 200_000)
    assert x.shape == (200_000, 4)
    assert np.allclose(np.linalg.norm(x, axis=1), 1.0)
    assert np.abs(x.mean(axis=0)).max() < 0.01
    # E[x_i^2] = 1/d
    assert np.allclose((x ** 2).mean(axis=0), 0.25, atol=0.005)
    assert sample_uniform(3, rng).shape == (3,)


def test_kappa_values():
    assert kappa(0) == pytest.approx(1.0)
    assert kappa(1) == pytest.approx(2.0)
    assert kappa(2) == pytest.approx(math.pi)
    assert kappa(3) == pytest.approx(4 * math.pi / 3)
    assert kappa(4) == pytest.approx(math.pi ** 2 / 2)


@pytest.mark.parametrize("d", [3, 4, 5, 7])
@pytest.mark.parametrize("theta", [1e-4, 0.1, 0.7, math.pi / 2, 2.5])
def test_cap_fraction_matches_quadrature(d, theta):
    # normalized measure of a cap = int_0^theta sin^{d-2} / int_0^pi sin^{d-2}
    num, _ = integrate.quad(lambda s: math.sin(s) ** (d - 2), 0, theta)
    den, _ = integrate.quad(lambda s: math.sin(s) ** (d - 2), 0, math.pi)
    assert cap_measure_fraction(d, theta) == pytest.approx(num / den, rel=1e-9, abs=1e-15)


@pytest.mark.parametrize("d", [3, 4, 6])
def test_zone_fraction_complements_caps(d):
    for t in (1e-6, 0.05, 0.4, 1.2):
        assert zone_measure_fraction(d, t) == pytest.approx(1 - 2 * cap_measure_fraction(d, math.pi / 2 - t), abs=1e-9)
    # on S^2 a zone of half-width t has normalized area sin t
    assert zone_measure_fraction(3, 0.3) == pytest.approx(math.sin(0.3))


def test_zone_fraction_small_t_keeps_precision():
    assert zone_measure_fraction(3, 1e-12) == pytest.approx(1e-12, rel=1e-9)


def test_measure_argument_checks():
    with pytest.raises(ValueError):
        cap_measure_fraction(1, 0.1)
    with pytest.raises(ValueError):
        cap_measure_fraction(3, -0.1)
    with pytest.raises(ValueError):
        zone_measure_fraction(3, 2.0)


def test_arrangement_basics(rng):
    poles = rng.standard_normal((5, 3))
    arr = Arrangement(3, poles, 0.2)
    assert arr.n == len(arr) == 5
    assert np.allclose(np.linalg.norm(arr.poles, axis=1), 1.0)
    with pytest.raises(AttributeError):
        arr.dim = 4
    with pytest.raises(ValueError):
        arr.poles[0, 0] = 1.0
    assert arr == Arrangement.from_zones(arr.zones)
    assert Arrangement(3).n == 0
    with pytest.raises(ValueError):
        Arrangement(3, poles, 2.0)
    with pytest.raises(ValueError):
        Arrangement(2, [[1, 0]], 0.1)
    with pytest.raises(ValueError):
        Arrangement.from_zones([])


def test_arrangement_depth_modes():
    arr = Arrangement(3, np.eye(3), math.asin(0.5))
    x = np.array([[1.0, 0.0, 0.0], unit_vector([1, 1, 1]), [0.5, math.sqrt(0.75), 0.0]])
    assert arr.depth(x).tolist() == [2, 0, 2]
    # the third point lies on the boundary of zone 1: closed counts it, open does not
    assert arr.depth(x, "open").tolist() == [2, 0, 1]
    assert arr.depth(x, "open", tol=1e-9).tolist() == [2, 0, 1]
    with pytest.raises(ValueError):
        arr.depth(x, "ajar")
    assert Arrangement(3).depth(x).tolist() == [0, 0, 0]


def test_constants_d3():
    c = constants(3)
    assert c.m_d == pytest.approx(math.sqrt(6 * math.pi) + 1)
    assert c.c_d == pytest.approx(2 * 2 * 3 * kappa(3) / kappa(2))
    assert c.B_d == pytest.approx(max(math.e * c.C_star_d, 2) + 1)
    assert c.bgw_ratio > 1 / math.sqrt(6 * math.pi)
    assert c.A_d > math.e * c.C_star_d
    assert set(c.as_dict()) >= {"m_d", "c_d", "C_star_d"}
    with pytest.raises(ValueError):
        constants(2)


@pytest.mark.parametrize("d", range(3, 60, 7))
def test_kappa_ratio_inequality(d):
    assert constants(d).bgw_ratio > 1 / math.sqrt(2 * math.pi * d)
