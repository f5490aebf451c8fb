from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spherewave.errors import ChartOverflow
from spherewave.geometry import (
    NORTH_POLE,
    SOUTH_POLE,
    Chart,
    Complex3,
    Rotation3,
    SpherePoint,
    XiPoint,
    angular_distance,
    antipode,
    dot,
    embed,
    eta_of_beta,
    half_turn_swapping,
    rotation_taking,
    xi_convert,
)

thetas = st.floats(0.0, math.pi)
phis = st.floats(0.0, 2 * math.pi, exclude_max=True)
betas = st.complex_numbers(max_magnitude=20, allow_nan=False, allow_infinity=False).filter(
    lambda b: abs(b.imag) < 8)


def test_embed_axis_points():
    assert np.allclose(embed(SpherePoint(math.pi / 2, 0)).as_array(), [1, 0, 0], atol=1e-16)
    assert np.allclose(embed(NORTH_POLE).as_array(), [0, 0, 1])
    assert np.allclose(embed(SpherePoint(math.pi / 2, math.pi / 2)).as_array(), [0, 1, 0],
                       atol=1e-16)


def test_sphere_point_canonical_form():
    assert SpherePoint(0.0, 1.3).phi == 0.0
    assert SpherePoint(math.pi, 4.0).phi == 0.0
    assert SpherePoint(1.0, -0.5).phi == pytest.approx(2 * math.pi - 0.5)
    with pytest.raises(ValueError):
        SpherePoint(3.5)


def test_dot_is_bilinear_without_conjugation():
    assert dot(Complex3(1, 0, 0), Complex3(1, 0, 0)) == 1
    assert dot(Complex3(1, 0, 1j), Complex3(1, 0, 1j)) == 0
    assert Complex3(1, 0, 1j).is_null()


def test_embed_grid_on_sphere():
    th, ph = np.meshgrid(np.linspace(0, math.pi, 100), np.linspace(0, 2 * math.pi, 100))
    x = np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])
    assert np.abs(np.sum(x * x, axis=0) - 1).max() <= 1e-14
    for t, p in [(0.3, 1.0), (2.9, 5.5)]:
        assert embed(SpherePoint(t, p)).is_on_sphere(1e-14)


def test_eta_examples():
    assert np.allclose(eta_of_beta(0).as_array(), [1, 0, 1j])
    assert np.allclose(eta_of_beta(math.pi / 2).as_array(), [0, 1, 1j], atol=1e-16)
    with pytest.raises(ChartOverflow):
        eta_of_beta(complex(0, math.inf))


@given(betas)
def test_eta_is_null(beta):
    e = eta_of_beta(beta).as_array()
    assert abs(np.sum(e * e)) <= 1e-12 * max(1.0, np.abs(e).max() ** 2)


def test_eta_null_dense_grid():
    b = (np.linspace(0, 2 * math.pi, 200)[:, None] + 1j * np.linspace(-2, 2, 50)[None]).ravel()
    e = eta_of_beta(b)
    assert np.abs(np.sum(e * e, axis=0)).max() <= 1e-12 * np.abs(e).max() ** 2


def test_xi_convert_examples():
    assert xi_convert(XiPoint.beta(0), Chart.TAU_PLUS).coordinate == 1
    assert abs(xi_convert(XiPoint.beta(1j), Chart.TAU_PLUS).coordinate - math.exp(-1)) < 1e-16
    with pytest.raises(ChartOverflow):
        xi_convert(XiPoint(Chart.TAU_MINUS, 0), Chart.BETA)
    with pytest.raises(ChartOverflow):
        xi_convert(XiPoint(Chart.TAU_PLUS, 0), Chart.TAU_MINUS)
    with pytest.raises(ChartOverflow):
        XiPoint(Chart.BETA, complex(0, math.inf))


def test_xi_infinite_points():
    assert XiPoint(Chart.TAU_PLUS, 0).is_plus_infinity
    assert XiPoint(Chart.TAU_MINUS, 0).is_minus_infinity
    assert XiPoint(Chart.TAU_MINUS, 0).tau_plus() == complex(math.inf)


@given(betas, st.sampled_from([Chart.TAU_PLUS, Chart.TAU_MINUS]))
def test_chart_round_trip(beta, chart):
    p = XiPoint.beta(beta)
    back = p.to(chart).to(Chart.BETA)
    assert p.same_point(back, 1e-12)
    d = back.coordinate - p.coordinate
    assert abs(complex((d.real + math.pi) % (2 * math.pi) - math.pi, d.imag)) <= 1e-12 * (
        1 + math.exp(abs(beta.imag)))


def test_beta_reduced_to_strip():
    p = XiPoint.beta(complex(-0.5, 0.2))
    assert 0 <= p.coordinate.real < 2 * math.pi
    assert p.same_point(XiPoint.beta(complex(-0.5 + 2 * math.pi, 0.2)))


def test_rotation_examples():
    assert np.allclose(rotation_taking(NORTH_POLE, NORTH_POLE).matrix, np.eye(3))
    r = rotation_taking(NORTH_POLE, SOUTH_POLE)
    assert np.allclose(r.matrix @ [0, 0, 1], [0, 0, -1], atol=1e-15)
    assert r.is_proper()
    # axis of smallest index orthogonal to the pole is e1: (x, y, z) -> (x, -y, -z)
    assert np.allclose(r.matrix, np.diag([1.0, -1.0, -1.0]), atol=1e-15)
    r = rotation_taking(NORTH_POLE, SpherePoint(math.pi / 2, 0))
    assert np.allclose(r.matrix @ [0, 0, 1], [1, 0, 0], atol=1e-15)


@given(thetas, phis, thetas, phis)
def test_rotation_taking_properties(t1, p1, t2, p2):
    a, b = SpherePoint(t1, p1), SpherePoint(t2, p2)
    r = rotation_taking(a, b)
    assert r.is_proper(1e-12)
    assert np.abs(r.matrix @ a.xyz - b.xyz).max() <= 1e-12


def test_rotation_is_read_only():
    r = Rotation3(np.eye(3))
    with pytest.raises(ValueError):
        r.matrix[0, 0] = 2.0


@given(thetas, phis)
def test_half_turn_swaps(t, p):
    a = SpherePoint(t, p)
    r = half_turn_swapping(NORTH_POLE, a)
    assert r.is_proper(1e-12)
    assert np.abs(r.matrix @ NORTH_POLE.xyz - a.xyz).max() <= 1e-12
    assert np.abs(r.matrix @ a.xyz - NORTH_POLE.xyz).max() <= 1e-12


def test_antipode_examples():
    assert antipode(NORTH_POLE) == SOUTH_POLE
    a = antipode(SpherePoint(math.pi / 2, 0))
    assert a.theta == pytest.approx(math.pi / 2) and a.phi == pytest.approx(math.pi)


@given(thetas, phis)
def test_antipode_involution(t, p):
    x = SpherePoint(t, p)
    assert angular_distance(antipode(antipode(x)), x) <= 1e-12
    assert np.allclose(antipode(x).xyz, -x.xyz, atol=1e-15)
