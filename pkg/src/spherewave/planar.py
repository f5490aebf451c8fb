"""
Planar Helmholtz reference case for the sliding-contour construction.

The outgoing point-source field u = -(i/4) H0^(1)(k r) of
(Laplacian + k^2) u = delta is written as

    u(y) = 1/(4 pi i) * integral over gamma^(m) of exp(i k (y1 cos psi + y2 sin psi)) d psi

for y in the half-plane X^(m): y1 > 0, y2 > 0, y1 < 0, y2 < 0 for
m = 1..4.  gamma^(1) descends from -pi/2 + iT to -pi/2, runs along the real
axis to pi/2, then descends to pi/2 - iT; on both vertical legs the
integrand decays like exp(-k y1 sinh s).  gamma^(m) is gamma^(1) shifted by
(m - 1) pi/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .contours import Contour, QuadratureControl, integrate, line_segment
from .errors import DomainError, DomainViolation, PreconditionViolation, TailNotConverged
from .special import hankel_h0_1

PLANAR_DOMAINS = (1, 2, 3, 4)
TAIL_HEIGHT_MAX = 12.0


@dataclass(frozen=True)
class PlanarProblem:
    k: float
    y1: float
    y2: float

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0):
            raise PreconditionViolation("wavenumber must be positive")
        if self.k * self.r > 30.0:
            raise PreconditionViolation(f"k r = {self.k * self.r:.4g} exceeds 30")

    @property
    def r(self) -> float:
        return math.hypot(self.y1, self.y2)

    def domains(self) -> frozenset[int]:
        out = set()
        if self.y1 > 0:
            out.add(1)
        if self.y2 > 0:
            out.add(2)
        if self.y1 < 0:
            out.add(3)
        if self.y2 < 0:
            out.add(4)
        return frozenset(out)

    def boundary_distance(self, m: int) -> float:
        """Distance from y to the edge of the half-plane X^(m)."""
        a = (m - 1) * math.pi / 2.0
        return self.y1 * math.cos(a) + self.y2 * math.sin(a)


def planar_closed(p: PlanarProblem) -> complex:
    """-(i/4) H0^(1)(k r)."""
    if p.r == 0.0:
        raise DomainError("the field is singular at the source (r = 0)")
    return -0.25j * hankel_h0_1(p.k * p.r)


def tail_height(k: float, d: float, rel_tol: float) -> float:
    """Leg height T with exp(-k d sinh(T - 1)) below rel_tol."""
    return math.asinh(math.log(1.0 / rel_tol) / (k * d)) + 1.0


def sommerfeld_contour(m: int, height: float) -> Contour:
    """gamma^(m): down the left leg, along the real axis, down the right leg."""
    if m not in PLANAR_DOMAINS:
        raise ValueError("m must be in 1..4")
    s = (m - 1) * math.pi / 2.0
    a, b = -math.pi / 2.0 + s, math.pi / 2.0 + s
    return Contour([
        line_segment(complex(a, height), complex(a, 0.0)),
        line_segment(complex(a, 0.0), complex(b, 0.0)),
        line_segment(complex(b, 0.0), complex(b, -height)),
    ], closed_on_xi=False)


def planar_pw(p: PlanarProblem, m: int, ctrl: QuadratureControl | None = None,
              full_output: bool = False):
    """Plane-wave (Sommerfeld-type) integral for the planar point source.

    Raises
    ------
    DomainViolation
        y is not in the open half-plane X^(m).
    TailNotConverged
        The leg height needed for the tail to fall below ``rel_tol`` exceeds
        12, which happens when y is very close to the half-plane edge.
    """
    ctrl = ctrl or QuadratureControl()
    if p.r == 0.0:
        raise DomainError("the field is singular at the source (r = 0)")
    if p.k * p.r <= 0.05:
        raise PreconditionViolation(f"k r = {p.k * p.r:.3g} is below 0.05")
    if m not in p.domains():
        raise DomainViolation(f"y is not in X^({m})")
    d = p.boundary_distance(m)
    height = tail_height(p.k, d, ctrl.rel_tol)
    if height > TAIL_HEIGHT_MAX:
        raise TailNotConverged(f"leg height {height:.3g} needed; y is too close to the edge")
    k, y1, y2 = p.k, p.y1, p.y2

    def f(psi):
        return np.exp(1j * k * (y1 * np.cos(psi) + y2 * np.sin(psi)))

    val, err, _ = integrate(f, sommerfeld_contour(m, height), ctrl, full_output=True)
    scale = 1.0 / (4j * math.pi)
    if full_output:
        return scale * val, abs(scale) * err
    return scale * val
