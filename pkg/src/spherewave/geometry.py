"""
Complex sphere and sphere-at-infinity geometry.

Points of the complexified sphere z1^2 + z2^2 + z3^2 = 1 and null directions
eta . eta = 0 live in C^3.  The set of null directions modulo scaling (the
sphere at infinity, Xi) is a Riemann sphere, covered here by three charts:

* ``BETA``:      the strip coordinate beta, eta(beta) = (cos beta, sin beta, i),
                 with Re(beta) reduced to [0, 2*pi);
* ``TAU_PLUS``:  tau+ = exp(+i*beta), which contains beta = +i*inf at tau+ = 0;
* ``TAU_MINUS``: tau- = exp(-i*beta), which contains beta = -i*inf at tau- = 0.

The dot product is bilinear throughout; nothing is ever conjugated.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ChartOverflow

TWO_PI = 2.0 * math.pi

#: Tolerance used when comparing points of Xi modulo 2*pi.
XI_TOL = 1e-10


# ---------------------------------------------------------------------------
# Points of C^3
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Complex3:
    """A point of C^3 (sphere point or null direction)."""

    z1: complex
    z2: complex
    z3: complex

    def __array__(self, dtype=None, copy=None):
        return np.array([self.z1, self.z2, self.z3], dtype=dtype or complex)

    def __iter__(self):
        yield self.z1
        yield self.z2
        yield self.z3

    @classmethod
    def from_array(cls, a) -> "Complex3":
        a = np.asarray(a, dtype=complex)
        return cls(complex(a[0]), complex(a[1]), complex(a[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.z1, self.z2, self.z3], dtype=complex)

    def is_on_sphere(self, tol: float = 1e-12) -> bool:
        return abs(dot(self, self) - 1.0) <= tol

    def is_null(self, tol: float = 1e-12) -> bool:
        a = self.as_array()
        return abs(dot(a, a)) <= tol and bool(np.any(a != 0))

    def scaled(self, c: complex) -> "Complex3":
        return Complex3(c * self.z1, c * self.z2, c * self.z3)


Vec3 = Union[Complex3, np.ndarray, tuple, list]


def as_vec(v: Vec3) -> np.ndarray:
    """Return ``v`` as a complex (3,) or (3, ...) array."""
    if isinstance(v, Complex3):
        return v.as_array()
    return np.asarray(v, dtype=complex)


def dot(a: Vec3, b: Vec3):
    """Bilinear dot product ``a1*b1 + a2*b2 + a3*b3`` (no conjugation).

    Broadcasts over trailing axes, so ``a`` may be a (3,) vector and ``b``
    a (3, N) stack of vectors.
    """
    a = as_vec(a)
    b = as_vec(b)
    out = a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    return complex(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Real sphere points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpherePoint:
    """Real point of the unit sphere in polar coordinates (radians)."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = float(self.theta)
        if not (0.0 <= theta <= math.pi):
            raise ValueError(f"theta={theta} outside [0, pi]")
        phi = float(self.phi) % TWO_PI
        if phi >= TWO_PI:
            phi = 0.0
        if theta == 0.0 or theta == math.pi:
            phi = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_vector(cls, x) -> "SpherePoint":
        x = np.real_if_close(as_vec(x)).astype(float)
        x = x / np.linalg.norm(x)
        rho = math.hypot(x[0], x[1])
        theta = math.atan2(rho, x[2])
        phi = math.atan2(x[1], x[0]) if rho > 0 else 0.0
        return cls(theta, phi)

    @property
    def xyz(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi),
                         math.cos(self.theta)])


NORTH_POLE = SpherePoint(0.0, 0.0)
SOUTH_POLE = SpherePoint(math.pi, 0.0)


def embed(p: SpherePoint) -> Complex3:
    """Cartesian embedding of a real sphere point into C^3."""
    x = p.xyz
    return Complex3(complex(x[0]), complex(x[1]), complex(x[2]))


def embed_complex(theta: complex, phi: complex) -> Complex3:
    """Point of the complex sphere with complex polar angles."""
    st = cmath.sin(theta)
    return Complex3(st * cmath.cos(phi), st * cmath.sin(phi), cmath.cos(theta))


def antipode(p: SpherePoint) -> SpherePoint:
    return SpherePoint(math.pi - p.theta, p.phi + math.pi)


def angular_distance(a: SpherePoint, b: SpherePoint) -> float:
    xa, xb = a.xyz, b.xyz
    return math.atan2(np.linalg.norm(np.cross(xa, xb)), float(xa @ xb))


# ---------------------------------------------------------------------------
# Sphere at infinity
# ---------------------------------------------------------------------------

class Chart(str, enum.Enum):
    BETA = "beta"
    TAU_PLUS = "tau+"
    TAU_MINUS = "tau-"


def reduce_beta(beta: complex) -> complex:
    """Reduce Re(beta) to [0, 2*pi)."""
    beta = complex(beta)
    re = beta.real % TWO_PI
    if re >= TWO_PI:
        re = 0.0
    return complex(re, beta.imag)


@dataclass(frozen=True)
class XiPoint:
    """A point of the sphere at infinity in one of the three charts.

    Infinite strip points beta = +i*inf and beta = -i*inf exist only as
    ``XiPoint(Chart.TAU_PLUS, 0)`` and ``XiPoint(Chart.TAU_MINUS, 0)``.
    """

    chart: Chart
    coordinate: complex

    def __post_init__(self):
        chart = Chart(self.chart)
        c = complex(self.coordinate)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ChartOverflow(f"non-finite coordinate {c} in chart {chart.value}")
        if chart is Chart.BETA:
            c = reduce_beta(c)
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "coordinate", c)

    @classmethod
    def beta(cls, beta: complex) -> "XiPoint":
        return cls(Chart.BETA, beta)

    @property
    def is_plus_infinity(self) -> bool:
        """True for beta = +i*inf."""
        return self.chart is Chart.TAU_PLUS and self.coordinate == 0

    @property
    def is_minus_infinity(self) -> bool:
        """True for beta = -i*inf."""
        return self.chart is Chart.TAU_MINUS and self.coordinate == 0

    def to(self, chart: Chart) -> "XiPoint":
        return xi_convert(self, chart)

    def tau_plus(self) -> complex:
        """tau+ coordinate; ``inf`` for beta = -i*inf."""
        if self.chart is Chart.TAU_PLUS:
            return self.coordinate
        if self.chart is Chart.TAU_MINUS:
            return complex(math.inf) if self.coordinate == 0 else 1.0 / self.coordinate
        return cmath.exp(1j * self.coordinate)

    def eta(self) -> Complex3:
        """A representative null vector of this class."""
        if self.chart is Chart.BETA:
            return eta_of_beta(self.coordinate)
        t = self.coordinate
        if self.chart is Chart.TAU_PLUS:
            return Complex3((1 + t * t) / 2, 1j * (1 - t * t) / 2, 1j * t)
        return Complex3((1 + t * t) / 2, -1j * (1 - t * t) / 2, 1j * t)

    def distance(self, other: "XiPoint") -> float:
        """Chordal distance on the tau+ Riemann sphere (~|d beta| near Im beta = 0)."""
        return chordal_distance(self.tau_plus(), other.tau_plus())

    def same_point(self, other: "XiPoint", tol: float = XI_TOL) -> bool:
        return self.distance(other) <= tol


def chordal_distance(a: complex, b: complex) -> float:
    if cmath.isinf(a) and cmath.isinf(b):
        return 0.0
    if cmath.isinf(a):
        a, b = b, a
    if cmath.isinf(b):
        return 2.0 / math.sqrt(1.0 + abs(a) ** 2)
    return 2.0 * abs(a - b) / math.sqrt((1.0 + abs(a) ** 2) * (1.0 + abs(b) ** 2))


def eta_of_beta(beta):
    """Null direction (cos beta, sin beta, i).

    Accepts a scalar (returns ``Complex3``) or an array (returns a (3, N)
    array).
    """
    if np.ndim(beta) == 0:
        beta = complex(beta)
        if not (math.isfinite(beta.real) and math.isfinite(beta.imag)):
            raise ChartOverflow("eta(beta) needs finite beta; use a tau chart")
        return Complex3(cmath.cos(beta), cmath.sin(beta), 1j)
    beta = np.asarray(beta, dtype=complex)
    return np.array([np.cos(beta), np.sin(beta), np.full(beta.shape, 1j)])


def xi_convert(p: XiPoint, target: Chart) -> XiPoint:
    """Express ``p`` in another chart; raises ChartOverflow if impossible."""
    target = Chart(target)
    if p.chart is target:
        return p
    c = p.coordinate
    if p.chart is Chart.BETA:
        if target is Chart.TAU_PLUS:
            return XiPoint(target, cmath.exp(1j * c))
        return XiPoint(target, cmath.exp(-1j * c))
    # p is in a tau chart
    if c == 0:
        if target is Chart.BETA:
            raise ChartOverflow(f"{p.chart.value}=0 is beta = "
                                f"{'+' if p.chart is Chart.TAU_PLUS else '-'}i*inf")
        raise ChartOverflow("tau+=0 and tau-=0 are each other's points at infinity")
    if target is Chart.BETA:
        if p.chart is Chart.TAU_PLUS:
            return XiPoint(target, -1j * cmath.log(c))
        return XiPoint(target, 1j * cmath.log(c))
    return XiPoint(target, 1.0 / c)


# ---------------------------------------------------------------------------
# Rotations
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Rotation3:
    """Proper real rotation of R^3."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __call__(self, v):
        if isinstance(v, SpherePoint):
            return SpherePoint.from_vector(self.matrix @ v.xyz)
        if isinstance(v, Complex3):
            return Complex3.from_array(self.matrix @ v.as_array())
        return self.matrix @ np.asarray(v)

    @property
    def T(self) -> "Rotation3":
        return Rotation3(self.matrix.T)

    def is_proper(self, tol: float = 1e-12) -> bool:
        m = self.matrix
        return (np.abs(m @ m.T - np.eye(3)).max() <= tol
                and abs(np.linalg.det(m) - 1.0) <= tol)


def _axis_angle(axis: np.ndarray, angle: float) -> np.ndarray:
    k = axis / np.linalg.norm(axis)
    K = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    return np.eye(3) + math.sin(angle) * K + (1.0 - math.cos(angle)) * (K @ K)


def rotation_taking(a: SpherePoint, b: SpherePoint) -> Rotation3:
    """Rotation about a x b carrying ``a`` onto ``b`` (Rodrigues).

    For antipodal input the rotation is by pi about the first coordinate
    axis not parallel to ``a``, projected orthogonally to ``a``.
    """
    xa, xb = a.xyz, b.xyz
    axis = np.cross(xa, xb)
    s = np.linalg.norm(axis)
    c = float(xa @ xb)
    if s < 1e-15:
        if c > 0:
            return Rotation3(np.eye(3))
        for e in np.eye(3):
            perp = e - (e @ xa) * xa
            if np.linalg.norm(perp) > 1e-8:
                return Rotation3(_axis_angle(perp, math.pi))
    return Rotation3(_axis_angle(axis, math.atan2(s, c)))


def half_turn_swapping(a: SpherePoint, b: SpherePoint) -> Rotation3:
    """Rotation by pi about the bisector of ``a`` and ``b``; swaps the two."""
    n = a.xyz + b.xyz
    if np.linalg.norm(n) < 1e-12:
        return rotation_taking(a, b)
    n = n / np.linalg.norm(n)
    return Rotation3(2.0 * np.outer(n, n) - np.eye(3))
