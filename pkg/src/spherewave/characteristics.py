"""
Characteristic lines of the complex sphere and the maps Phi+/-, Psi+/-.

Every point of the complex sphere lies on exactly two complex lines
``base + c * eta`` contained in the sphere.  Their directions eta+(z),
eta-(z) are null vectors orthogonal to z.  For a real point x the two lines
meet the sphere at infinity at Phi+(x), Phi-(x); conversely every point p of
Xi lies on two lines which meet the real sphere at Psi+(p), Psi-(p).

In the tau+ chart, Phi+ is a stereographic projection from the south pole
(rotated by i): tau+ = i (x1 + i x2) / (1 + x3).  Great circles therefore
map to circles, which the contour code relies on.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionViolation
from .geometry import Chart, Complex3, SpherePoint, XiPoint, as_vec, dot, embed_complex, reduce_beta


@dataclass(frozen=True)
class CharDirectionPair:
    eta_plus: Complex3
    eta_minus: Complex3
    base: Complex3

    def eta(self, sign: int) -> Complex3:
        return self.eta_plus if sign > 0 else self.eta_minus


def _check_sign(sign: int) -> int:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return sign


def characteristic_directions(theta: complex, phi: complex) -> CharDirectionPair:
    """Directions of the two characteristic lines through z(theta, phi)."""
    ct, st = cmath.cos(theta), cmath.sin(theta)
    cp, sp = cmath.cos(phi), cmath.sin(phi)
    eta_p = Complex3(-1j * ct * cp - sp, -1j * ct * sp + cp, 1j * st)
    eta_m = Complex3(-1j * ct * cp + sp, -1j * ct * sp - cp, 1j * st)
    return CharDirectionPair(eta_p, eta_m, embed_complex(theta, phi))


def line_point(base, eta, c: complex, tol: float = 1e-10) -> Complex3:
    """Point ``base + c * eta`` of a characteristic line."""
    b = as_vec(base)
    e = as_vec(eta)
    scale = max(float(np.abs(e).max()), 1e-300)
    if abs(dot(b, b) - 1.0) > tol:
        raise PreconditionViolation("base is not on the complex sphere")
    if abs(dot(e, e)) > tol * scale ** 2:
        raise PreconditionViolation("eta is not a null direction")
    if abs(dot(b, e)) > tol * scale:
        raise PreconditionViolation("eta is not orthogonal to base")
    return Complex3.from_array(b + c * e)


# ---------------------------------------------------------------------------
# Phi: sphere -> Xi
# ---------------------------------------------------------------------------

def phi_map(x: SpherePoint, sign: int) -> XiPoint:
    """Xi-point of the characteristic line L_sign(x).

    The poles go to the exact chart zeros: Phi+(NP) = +i*inf (tau+ = 0),
    Phi-(NP) = -i*inf (tau- = 0), and the reverse for the south pole.
    """
    _check_sign(sign)
    th, ph = x.theta, x.phi
    if th == 0.0:
        return XiPoint(Chart.TAU_PLUS if sign > 0 else Chart.TAU_MINUS, 0.0)
    if th == math.pi:
        return XiPoint(Chart.TAU_MINUS if sign > 0 else Chart.TAU_PLUS, 0.0)
    arg = 1j * cmath.exp(sign * 1j * ph) * math.tan(th / 2.0)
    return XiPoint(Chart.BETA, -sign * 1j * cmath.log(arg))


def phi_map_complex(theta: complex, phi: complex, sign: int) -> XiPoint:
    """Phi+/- extended to complex polar angles (same closed form)."""
    _check_sign(sign)
    t = cmath.tan(theta / 2.0)
    if t == 0:
        return XiPoint(Chart.TAU_PLUS if sign > 0 else Chart.TAU_MINUS, 0.0)
    arg = 1j * cmath.exp(sign * 1j * phi) * t
    return XiPoint(Chart.BETA, -sign * 1j * cmath.log(arg))


def phi_tau_plus(xyz: np.ndarray, sign: int) -> np.ndarray:
    """tau+ coordinate of Phi_sign(x) for a (3, ...) stack of real points.

    ``inf`` is returned where the image is beta = -i*inf.
    """
    _check_sign(sign)
    x1, x2, x3 = xyz
    w = x1 + 1j * x2
    with np.errstate(divide="ignore", invalid="ignore"):
        if sign > 0:
            out = 1j * w / (1.0 + x3)
        else:
            out = -1j * w / (1.0 - x3)
    return np.where(np.isnan(out), complex(np.inf), out)


def phi_beta(xyz: np.ndarray, sign: int) -> np.ndarray:
    """Strip coordinate of Phi_sign(x) (principal log, not reduced)."""
    return -1j * np.log(phi_tau_plus(xyz, sign))


# ---------------------------------------------------------------------------
# Psi: Xi -> sphere
# ---------------------------------------------------------------------------

def _modulus_and_re_beta(p: XiPoint) -> tuple[float, float]:
    """|exp(i beta)| (may be 0 or inf) and Re(beta)."""
    c = p.coordinate
    if p.chart is Chart.BETA:
        return math.exp(-c.imag), c.real
    if p.chart is Chart.TAU_PLUS:
        return abs(c), (cmath.phase(c) if c != 0 else 0.0)
    if c == 0:
        return math.inf, 0.0
    return 1.0 / abs(c), -cmath.phase(c)


def psi_map(p: XiPoint, sign: int) -> SpherePoint:
    """Real point on the characteristic line L_sign(p)."""
    _check_sign(sign)
    m, re_beta = _modulus_and_re_beta(p)
    half = math.atan(m) if math.isfinite(m) else math.pi / 2.0
    if sign > 0:
        return SpherePoint(2.0 * half, re_beta - math.pi / 2.0)
    return SpherePoint(math.pi - 2.0 * half, re_beta + math.pi / 2.0)


def psi_map_complex(theta: complex, phi: complex, sign: int) -> SpherePoint:
    """Real point where L_sign(z) crosses the real sphere, z complex."""
    return psi_map(phi_map_complex(theta, phi, sign), sign)


def psi_xyz(beta: np.ndarray, sign: int) -> np.ndarray:
    """Vectorised Psi_sign on an array of strip coordinates; returns (3, N)."""
    _check_sign(sign)
    beta = np.asarray(beta, dtype=complex)
    half = np.arctan(np.exp(-beta.imag))
    if sign > 0:
        th, ph = 2.0 * half, beta.real - np.pi / 2.0
    else:
        th, ph = np.pi - 2.0 * half, beta.real + np.pi / 2.0
    return np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])


def characteristic_line(p: XiPoint, sign: int) -> tuple[Complex3, Complex3]:
    """(real base point, direction) of the line L_sign(p)."""
    base = psi_map(p, sign)
    x = base.xyz
    return Complex3.from_array(x), p.eta()


def opposite(p: XiPoint) -> XiPoint:
    """The point conj(beta) + pi, image of the antipodal map on Xi."""
    tp = p.tau_plus()
    if cmath.isinf(tp):
        return XiPoint(Chart.TAU_PLUS, 0.0)
    if tp == 0:
        return XiPoint(Chart.TAU_MINUS, 0.0)
    if p.chart is Chart.BETA:
        return XiPoint(Chart.BETA, reduce_beta(p.coordinate.conjugate() + math.pi))
    return XiPoint(Chart.TAU_PLUS, -1.0 / tp.conjugate())
