from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spherewave.characteristics import (
    characteristic_directions,
    characteristic_line,
    line_point,
    opposite,
    phi_beta,
    phi_map,
    phi_map_complex,
    phi_tau_plus,
    psi_map,
    psi_map_complex,
    psi_xyz,
)
from spherewave.errors import PreconditionViolation
from spherewave.geometry import (
    NORTH_POLE,
    SOUTH_POLE,
    Chart,
    Complex3,
    SpherePoint,
    XiPoint,
    angular_distance,
    antipode,
    dot,
)

interior_theta = st.floats(1e-3, math.pi - 1e-3)
phis = st.floats(0.0, 2 * math.pi, exclude_max=True)
complex_small = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def _parallel(a, b):
    a, b = np.asarray(a, complex), np.asarray(b, complex)
    return np.abs(np.cross(a, b)).max() <= 1e-14


def test_directions_at_north_pole():
    pair = characteristic_directions(0.0, 0.0)
    assert _parallel(pair.eta_plus.as_array(), [1, 1j, 0])
    assert _parallel(pair.eta_minus.as_array(), [-1, 1j, 0])
    for s in (1, -1):
        e = pair.eta(s)
        assert abs(dot(e, e)) <= 1e-12
        assert abs(dot(pair.base, e)) <= 1e-12


def test_directions_on_equator():
    pair = characteristic_directions(math.pi / 2, 0.0)
    assert np.allclose(pair.eta_plus.as_array(), [0, 1, 1j], atol=1e-16)
    assert np.allclose(pair.eta_minus.as_array(), [0, -1, 1j], atol=1e-16)


@given(complex_small, complex_small)
def test_directions_invariants_complex_angles(theta, phi):
    pair = characteristic_directions(theta, phi)
    scale = max(np.abs(pair.eta_plus.as_array()).max(), np.abs(pair.base.as_array()).max())
    for s in (1, -1):
        e = pair.eta(s)
        assert abs(dot(e, e)) <= 1e-12 * scale ** 2
        assert abs(dot(pair.base, e)) <= 1e-12 * scale ** 2


def test_line_point_examples():
    np_ = Complex3(0, 0, 1)
    assert line_point(np_, Complex3(1, 1j, 0), 0) == np_
    z = line_point(np_, Complex3(1, 1j, 0), 1)
    assert np.allclose(z.as_array(), [1, 1j, 1])
    assert z.is_on_sphere()


def test_line_point_rejects_bad_input():
    with pytest.raises(PreconditionViolation):
        line_point(Complex3(0, 0, 2), Complex3(1, 1j, 0), 1)
    with pytest.raises(PreconditionViolation):
        line_point(Complex3(0, 0, 1), Complex3(1, 0, 0), 1)
    with pytest.raises(PreconditionViolation):
        line_point(Complex3(1, 0, 0), Complex3(1, 1j, 0), 1)


@given(complex_small, complex_small, complex_small, st.sampled_from([1, -1]))
def test_lines_lie_in_sphere_and_hyperplane(theta, phi, c, sign):
    pair = characteristic_directions(theta, phi)
    base = pair.base.as_array()
    if np.abs(base).max() > 50:
        return
    z = line_point(pair.base, pair.eta(sign), c, tol=1e-8)
    scale = 1 + np.abs(z.as_array()).max() ** 2
    assert abs(dot(z, z) - 1) <= 1e-12 * scale
    # the line lies in the tangent hyperplane z . base = 1
    assert abs(dot(z, pair.base) - 1) <= 1e-12 * scale


def test_phi_map_poles_are_exact():
    assert phi_map(NORTH_POLE, 1) == XiPoint(Chart.TAU_PLUS, 0)
    assert phi_map(NORTH_POLE, -1) == XiPoint(Chart.TAU_MINUS, 0)
    assert phi_map(SOUTH_POLE, 1) == XiPoint(Chart.TAU_MINUS, 0)
    assert phi_map(SOUTH_POLE, -1) == XiPoint(Chart.TAU_PLUS, 0)


def test_phi_map_equator_example():
    p = phi_map(SpherePoint(math.pi / 2, 0), 1)
    assert p.chart is Chart.BETA
    assert abs(p.coordinate - math.pi / 2) <= 1e-15


def test_psi_map_examples():
    x = psi_map(XiPoint.beta(math.pi / 2), 1)
    assert x.theta == pytest.approx(math.pi / 2) and x.phi == pytest.approx(0.0, abs=1e-15)
    for b in np.linspace(0, 2 * math.pi, 7):
        assert psi_map(XiPoint.beta(b), 1).theta == pytest.approx(math.pi / 2)
        assert psi_map(XiPoint.beta(b), -1).theta == pytest.approx(math.pi / 2)
    p = XiPoint.beta(1j * math.log(3))
    plus, minus = psi_map(p, 1), psi_map(p, -1)
    assert plus.theta == pytest.approx(2 * math.atan(1 / 3))
    assert plus.phi == pytest.approx(1.5 * math.pi)
    assert minus.theta == pytest.approx(math.pi - 2 * math.atan(1 / 3))
    assert minus.phi == pytest.approx(math.pi / 2)


def test_psi_of_infinite_points_are_poles():
    assert psi_map(XiPoint(Chart.TAU_PLUS, 0), 1) == NORTH_POLE
    assert psi_map(XiPoint(Chart.TAU_MINUS, 0), 1) == SOUTH_POLE
    assert psi_map(XiPoint(Chart.TAU_PLUS, 0), -1) == SOUTH_POLE
    assert psi_map(XiPoint(Chart.TAU_MINUS, 0), -1) == NORTH_POLE


@given(interior_theta, phis, st.sampled_from([1, -1]))
def test_psi_inverts_phi(theta, phi, sign):
    x = SpherePoint(theta, phi)
    assert angular_distance(psi_map(phi_map(x, sign), sign), x) <= 1e-10


@given(st.floats(0, 2 * math.pi), st.floats(-6, 6), st.sampled_from([1, -1]))
def test_phi_inverts_psi(re, im, sign):
    p = XiPoint.beta(complex(re, im))
    assert phi_map(psi_map(p, sign), sign).same_point(p, 1e-10)


@given(interior_theta, phis, st.sampled_from([1, -1]))
def test_incidence(theta, phi, sign):
    x = SpherePoint(theta, phi)
    eta = phi_map(x, sign).eta()
    assert abs(dot(x.xyz.astype(complex), eta)) <= 1e-10 * np.abs(eta.as_array()).max()


@given(interior_theta, phis)
def test_antipodal_pairing(theta, phi):
    x = SpherePoint(theta, phi)
    assert phi_map(antipode(x), 1).same_point(phi_map(x, -1), 1e-10)
    assert phi_map(antipode(x), -1).same_point(phi_map(x, 1), 1e-10)
    # the two Xi-points of x are "opposite": beta- = conj(beta+) + pi
    assert opposite(phi_map(x, 1)).same_point(phi_map(x, -1), 1e-10)


def test_opposite_swaps_infinite_points():
    assert opposite(XiPoint(Chart.TAU_PLUS, 0)) == XiPoint(Chart.TAU_MINUS, 0)
    assert opposite(XiPoint(Chart.TAU_MINUS, 0)) == XiPoint(Chart.TAU_PLUS, 0)


def test_vectorised_maps_match_scalar(rng):
    th = rng.uniform(0.1, 3.0, 50)
    ph = rng.uniform(0, 2 * math.pi, 50)
    xyz = np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])
    for sign in (1, -1):
        b = phi_beta(xyz, sign)
        for i in range(0, 50, 7):
            assert XiPoint.beta(b[i]).same_point(phi_map(SpherePoint(th[i], ph[i]), sign), 1e-12)
        assert np.abs(psi_xyz(b, sign) - xyz).max() <= 1e-12
    assert np.isinf(phi_tau_plus(np.array([0.0, 0.0, 1.0]), -1))


def test_complex_extension_reduces_to_real():
    for th, ph in [(0.4, 1.0), (2.0, 5.0)]:
        a = phi_map_complex(th, ph, 1)
        assert a.same_point(phi_map(SpherePoint(th, ph), 1), 1e-13)
        back = psi_map_complex(th, ph, -1)
        assert angular_distance(back, SpherePoint(th, ph)) <= 1e-10


@given(complex_small, complex_small, st.sampled_from([1, -1]))
def test_complex_point_line_meets_real_sphere(theta, phi, sign):
    # the characteristic line of a complex point z passes through Psi(z)
    z = characteristic_directions(theta, phi).base.as_array()
    if not np.all(np.isfinite(z)) or np.abs(z).max() > 20:
        return
    p = phi_map_complex(theta, phi, sign)
    x = psi_map(p, sign).xyz
    eta = p.eta().as_array()
    eta = eta / np.abs(eta).max()
    # z - x is parallel to eta
    c = np.vdot(eta, z - x) / np.vdot(eta, eta)
    assert np.abs(z - x - c * eta).max() <= 1e-8 * (1 + np.abs(z).max())


@given(st.floats(0, 2 * math.pi), st.floats(-2, 2), st.sampled_from([1, -1]))
def test_single_real_intersection(re, im, sign):
    p = XiPoint.beta(complex(re, im))
    base, eta = characteristic_line(p, sign)
    b, e = base.as_array(), eta.as_array()
    grid = np.linspace(-2, 2, 81)
    c = grid[:, None] + 1j * grid[None, :]
    imag_norm = np.linalg.norm((b[:, None, None] + c[None] * e[:, None, None]).imag, axis=0)
    i, j = np.unravel_index(np.argmin(imag_norm), imag_norm.shape)
    assert abs(c[i, j]) <= 1e-12
    assert imag_norm[i, j] <= 1e-12
    others = np.sort(imag_norm.ravel())[1]
    assert others > 1e-3
    assert cmath.isclose(dot(b, b), 1)
