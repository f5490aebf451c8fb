from __future__ import annotations

import math

import numpy as np
import pytest

from spherewave.errors import ChartInvalid, SingularPoint, StencilTooClose
from spherewave.geometry import SpherePoint, embed_complex
from spherewave.green import GreenProblem, green_closed
from spherewave.planewaves import PlaneWaveSpec, local_branch
from spherewave.verification import (
    StencilControl,
    affine_field,
    clbo_affine_residual,
    clbo_xi_residual,
    clbo_xi_singularity_probe,
    convergence_ratio,
    holomorphy_defect,
    lbo_residual,
    xi_coordinates,
    xi_operator_coefficients,
)

LAM = 0.3 + 0.2j
X = SpherePoint(1.9, 0.6)
Z = embed_complex(1.9 + 0.2j, 0.6 - 0.1j)


def test_stencil_control():
    assert StencilControl().h == 1e-3
    assert StencilControl(4e-3).halved().h == 2e-3
    with pytest.raises(ValueError):
        StencilControl(1.0)
    with pytest.raises(ValueError):
        StencilControl(1e-3, order=4)


def test_constant_field_residual_is_the_shift():
    assert abs(lbo_residual(lambda t, p: 1.0, X, LAM) - LAM * (LAM + 1)) <= 1e-9
    assert abs(clbo_affine_residual(lambda a, b: 1.0, Z, LAM) - LAM * (LAM + 1)) <= 1e-9
    assert abs(clbo_xi_residual(lambda e, b: 1.0, 0.5, 0.3, LAM) - LAM * (LAM + 1)) <= 1e-9


def test_first_harmonic_is_an_eigenfunction():
    # z1 solves the equation for degree 1; for other degrees the residual is
    # (lam (lam + 1) - 2) z1, a negative control for the stencil
    r = lbo_residual(lambda t, p: math.sin(t) * math.cos(p), X, LAM)
    expected = (LAM * (LAM + 1) - 2) * X.xyz[0]
    assert abs(r - expected) <= 1e-6
    assert abs(lbo_residual(lambda t, p: math.sin(t) * math.cos(p), X, 1.0)) <= 1e-6
    ra = clbo_affine_residual(lambda a, b: a, Z, LAM)
    assert abs(ra - (LAM * (LAM + 1) - 2) * Z.z1) <= 1e-9
    for h in (1e-3, 5e-4, 2.5e-4):
        assert abs(lbo_residual(lambda t, p: math.sin(t) * math.cos(p), X, LAM,
                                StencilControl(h))) >= 1e-2
        assert abs(clbo_affine_residual(lambda a, b: a, Z, LAM, StencilControl(h))) >= 1e-2


@pytest.mark.parametrize("kind", ["w1", "w2"])
def test_complex_plane_wave_residual_is_second_order(kind):
    spec = PlaneWaveSpec(kind, LAM)
    field = affine_field(local_branch(spec, Z, 1.9 + 0.3j), Z)
    r = convergence_ratio(lambda c: clbo_affine_residual(field, Z, LAM, c), StencilControl(4e-3))
    assert 3.6 <= r <= 4.4


def test_complex_green_residual_is_second_order():
    field = affine_field(lambda z: green_closed(GreenProblem(LAM), z), Z)
    r = convergence_ratio(lambda c: clbo_affine_residual(field, Z, LAM, c), StencilControl(4e-3))
    assert 3.6 <= r <= 4.4


def test_holomorphy_defect():
    field = affine_field(local_branch(PlaneWaveSpec("w2", LAM), Z, 1.9 + 0.3j), Z)
    assert holomorphy_defect(field, Z, StencilControl(1e-4)) <= 1e-6
    assert holomorphy_defect(lambda a, b: np.conj(a), Z) >= 0.5


def test_affine_chart_guard():
    z = embed_complex(math.pi / 2, 0.0)
    with pytest.raises(ChartInvalid):
        clbo_affine_residual(lambda a, b: 1.0, z, LAM)
    with pytest.raises(ChartInvalid):
        affine_field(lambda z: 1.0, np.array([1.0, 0.0, 0.0]))


def test_stencil_too_close():
    with pytest.raises(StencilTooClose):
        lbo_residual(lambda t, p: 1.0, SpherePoint(0.005, 0.0), LAM)
    with pytest.raises(StencilTooClose):
        lbo_residual(lambda t, p: 1.0, SpherePoint(0.5, 0.0), LAM,
                     singular=[SpherePoint(0.505, 0.0)])

    def bad(t, p):
        raise SingularPoint("boom")

    with pytest.raises(StencilTooClose):
        lbo_residual(bad, X, LAM)
    with pytest.raises(StencilTooClose):
        lbo_residual(lambda t, p: float("nan"), X, LAM)
    with pytest.raises(StencilTooClose):
        clbo_xi_residual(lambda e, b: 1.0, 0.005, 0.3, LAM)


def test_green_residual_refuses_listed_singularity():
    def f(t, p):
        return green_closed(GreenProblem(LAM), SpherePoint(t, p))

    with pytest.raises(StencilTooClose):
        lbo_residual(f, SpherePoint(math.pi - 0.5, 0.0), LAM, StencilControl(0.01),
                     singular=[SpherePoint(math.pi - 0.45, 0.0)])


def test_xi_coordinates_lie_on_the_complex_sphere():
    for eps, beta in ((0.5 + 0.1j, 0.7 + 0.2j), (0.05, 2.0), (0.9j, -1.0)):
        z = xi_coordinates(eps, beta)
        assert abs(z @ z - 1) <= 1e-12 * np.abs(z).max() ** 2


@pytest.mark.parametrize("kind", ["w1", "w2"])
def test_xi_chart_residual_is_second_order(kind):
    eps, beta = 0.5 + 0.1j, 0.7 + 0.2j
    field = local_branch(PlaneWaveSpec(kind, LAM), xi_coordinates(eps, beta), 1.9 + 0.3j)

    def f(e, b):
        return field(xi_coordinates(e, b))

    r = convergence_ratio(lambda c: clbo_xi_residual(f, eps, beta, LAM, c), StencilControl(4e-3))
    assert 3.6 <= r <= 4.4


def test_xi_singularity_probe():
    rep = clbo_xi_singularity_probe(LAM, [0.1, 0.01, 0.001])
    assert rep["monotone_vanishing"]
    first = rep["rows"][-1]
    assert first["eps"] == 0.1
    assert (first["d2_eps"], first["d_eps"], first["d2_beta"]) == pytest.approx(
        (-0.0099, 0.001, 0.01))
    assert rep["max_at_smallest_eps"] == pytest.approx(1e-6)
    assert xi_operator_coefficients(0.0) == (0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        clbo_xi_singularity_probe(LAM, [0.5])
