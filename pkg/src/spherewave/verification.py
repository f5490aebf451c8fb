"""
Finite-difference residuals of the Laplace-Beltrami operator and its
complexification, used to check that fields are solutions.

Real fields are differentiated in (theta, phi).  Holomorphic fields on the
complex sphere are differentiated in the affine chart (z1, z2) with
z3 = +-sqrt(1 - z1^2 - z2^2), using central differences along the real
directions of z1 and z2; holomorphy makes that direction immaterial, which
:func:`holomorphy_defect` checks.  All stencils are second order.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ChartInvalid, SingularPoint, StencilTooClose
from .geometry import SpherePoint, angular_distance, as_vec
from .special import degree_value

RealField = Callable[[float, float], complex]
AffineField = Callable[[complex, complex], complex]


@dataclass(frozen=True)
class StencilControl:
    h: float = 1e-3
    order: int = 2

    def __post_init__(self):
        if not 1e-6 <= self.h <= 1e-1:
            raise ValueError("h must lie in [1e-6, 1e-1]")
        if self.order != 2:
            raise ValueError("only second-order stencils are provided")

    def halved(self) -> "StencilControl":
        return StencilControl(self.h / 2.0, self.order)


def _safe(f, *args) -> complex:
    try:
        v = complex(f(*args))
    except SingularPoint as exc:
        raise StencilTooClose(f"stencil touches a singular point: {exc}") from exc
    if not cmath.isfinite(v):
        raise StencilTooClose("non-finite field value on the stencil")
    return v


def lbo_residual(f: RealField, x: SpherePoint, lam, ctrl: StencilControl | None = None,
                 singular: Sequence[SpherePoint] = ()) -> complex:
    """(Delta + lam (lam + 1)) f at x by central differences.

    Delta = d^2/dtheta^2 + cot(theta) d/dtheta + sin(theta)^-2 d^2/dphi^2.
    ``f`` takes (theta, phi).  ``singular`` lists points the stencil must
    stay 10 h away from.

    Raises
    ------
    StencilTooClose
        x is within 10 h of a pole or of a listed singular point, or the
        field is singular on the stencil.
    """
    ctrl = ctrl or StencilControl()
    lam = degree_value(lam, guard=False)
    h = ctrl.h
    th, ph = x.theta, x.phi
    if th < 10 * h or math.pi - th < 10 * h:
        raise StencilTooClose("stencil too close to a pole of the coordinates")
    for s in singular:
        if angular_distance(x, s) < 10 * h:
            raise StencilTooClose("stencil too close to a singular point of the field")
    f0 = _safe(f, th, ph)
    ftp, ftm = _safe(f, th + h, ph), _safe(f, th - h, ph)
    fpp, fpm = _safe(f, th, ph + h), _safe(f, th, ph - h)
    d2t = (ftp - 2 * f0 + ftm) / h ** 2
    d1t = (ftp - ftm) / (2 * h)
    d2p = (fpp - 2 * f0 + fpm) / h ** 2
    lap = d2t + math.cos(th) / math.sin(th) * d1t + d2p / math.sin(th) ** 2
    return lap + lam * (lam + 1) * f0


def affine_field(field: Callable[[np.ndarray], complex], z) -> AffineField:
    """Wrap a field on the complex sphere as a function of (z1, z2).

    z3 is taken on the sheet of the anchor point ``z``:
    z3 = z3_anchor * sqrt((1 - z1^2 - z2^2)/z3_anchor^2), continuous near
    the anchor.
    """
    anchor = complex(as_vec(z)[2])
    if abs(anchor) < 1e-300:
        raise ChartInvalid("anchor has z3 = 0")

    def g(z1: complex, z2: complex) -> complex:
        z3 = anchor * cmath.sqrt((1.0 - z1 * z1 - z2 * z2) / (anchor * anchor))
        return field(np.array([z1, z2, z3], dtype=complex))

    return g


def _affine_derivatives(f: AffineField, z1: complex, z2: complex, h: complex):
    f0 = _safe(f, z1, z2)
    f1p, f1m = _safe(f, z1 + h, z2), _safe(f, z1 - h, z2)
    f2p, f2m = _safe(f, z1, z2 + h), _safe(f, z1, z2 - h)
    fpp, fpm = _safe(f, z1 + h, z2 + h), _safe(f, z1 + h, z2 - h)
    fmp, fmm = _safe(f, z1 - h, z2 + h), _safe(f, z1 - h, z2 - h)
    d1 = (f1p - f1m) / (2 * h)
    d2 = (f2p - f2m) / (2 * h)
    d11 = (f1p - 2 * f0 + f1m) / h ** 2
    d22 = (f2p - 2 * f0 + f2m) / h ** 2
    d12 = (fpp - fpm - fmp + fmm) / (4 * h * h)
    return f0, d1, d2, d11, d22, d12


def clbo_affine_residual(f: AffineField, z, lam, ctrl: StencilControl | None = None
                         ) -> complex:
    """Complexified operator plus lam (lam + 1) applied to f at z.

    In the affine chart the operator reads
    d11 + d22 - (z1^2 d11 + z2^2 d22 + 2 z1 z2 d12) - 2 (z1 d1 + z2 d2).

    Raises
    ------
    ChartInvalid
        |z3| < 0.1, where the chart degenerates.
    StencilTooClose
        The field is singular on the stencil.
    """
    ctrl = ctrl or StencilControl()
    lam = degree_value(lam, guard=False)
    z = as_vec(z)
    if abs(z[2]) < 0.1:
        raise ChartInvalid(f"|z3| = {abs(z[2]):.3g} < 0.1: affine chart invalid")
    z1, z2 = complex(z[0]), complex(z[1])
    f0, d1, d2, d11, d22, d12 = _affine_derivatives(f, z1, z2, ctrl.h)
    op = (d11 + d22 - (z1 * z1 * d11 + z2 * z2 * d22 + 2 * z1 * z2 * d12)
          - 2 * (z1 * d1 + z2 * d2))
    return op + lam * (lam + 1) * f0


def holomorphy_defect(f: AffineField, z, ctrl: StencilControl | None = None) -> float:
    """Largest relative gap between real- and imaginary-direction derivatives."""
    ctrl = ctrl or StencilControl()
    z = as_vec(z)
    z1, z2 = complex(z[0]), complex(z[1])
    _, a1, a2, _, _, _ = _affine_derivatives(f, z1, z2, ctrl.h)
    _, b1, b2, _, _, _ = _affine_derivatives(f, z1, z2, 1j * ctrl.h)
    scale = 1.0 + max(abs(a1), abs(a2))
    return max(abs(a1 - b1), abs(a2 - b2)) / scale


def xi_coordinates(eps: complex, beta: complex) -> np.ndarray:
    """Point eps^-1 (cos beta, sin beta, i sqrt(1 - eps^2)) of the complex sphere."""
    return np.array([cmath.cos(beta), cmath.sin(beta), 1j * cmath.sqrt(1 - eps * eps)]) / eps


def clbo_xi_residual(f: AffineField, eps: complex, beta: complex, lam,
                     ctrl: StencilControl | None = None) -> complex:
    """Operator residual in the (eps, beta) coordinates near Xi.

    (eps^4 - eps^2) d_eps^2 + eps^3 d_eps + eps^2 d_beta^2 + lam (lam + 1);
    ``f`` takes (eps, beta).
    """
    ctrl = ctrl or StencilControl()
    lam = degree_value(lam, guard=False)
    h = ctrl.h
    if abs(eps) < 10 * h:
        raise StencilTooClose("stencil reaches the sphere at infinity")
    f0 = _safe(f, eps, beta)
    fep, fem = _safe(f, eps + h, beta), _safe(f, eps - h, beta)
    fbp, fbm = _safe(f, eps, beta + h), _safe(f, eps, beta - h)
    dee = (fep - 2 * f0 + fem) / h ** 2
    de = (fep - fem) / (2 * h)
    dbb = (fbp - 2 * f0 + fbm) / h ** 2
    op = (eps ** 4 - eps ** 2) * dee + eps ** 3 * de + eps ** 2 * dbb
    return op + lam * (lam + 1) * f0


def xi_operator_coefficients(eps: float) -> tuple[float, float, float]:
    """Coefficients (eps^4 - eps^2, eps^3, eps^2) of the operator near Xi."""
    return eps ** 4 - eps ** 2, eps ** 3, eps ** 2


def clbo_xi_singularity_probe(lam, eps_grid: Sequence[float]) -> dict:
    """Tabulate the principal-part coefficients of the operator near Xi.

    All three vanish at eps = 0, so the operator degenerates on Xi.  The
    report lists the coefficients for each eps and whether their magnitudes
    decrease monotonically as eps decreases.
    """
    lam = degree_value(lam, guard=False)
    eps = sorted(float(e) for e in eps_grid)
    for e in eps:
        if not 0.0 <= e <= 0.1:
            raise ValueError(f"eps = {e} outside [0, 0.1]")
    rows = [{"eps": e, "d2_eps": c[0], "d_eps": c[1], "d2_beta": c[2]}
            for e in eps for c in [xi_operator_coefficients(e)]]
    mags = np.array([[abs(r["d2_eps"]), abs(r["d_eps"]), abs(r["d2_beta"])] for r in rows])
    monotone = bool(np.all(np.diff(mags, axis=0) >= 0.0)) if len(rows) > 1 else True
    return {
        "lambda": [lam.real, lam.imag],
        "rows": rows,
        "monotone_vanishing": monotone,
        "max_at_smallest_eps": float(mags[0].max()) if rows else 0.0,
    }


def convergence_ratio(residual: Callable[[StencilControl], complex],
                      ctrl: StencilControl | None = None) -> float:
    """|residual(h)| / |residual(h/2)|; close to 4 for a second-order stencil
    applied to an exact solution."""
    ctrl = ctrl or StencilControl()
    r1 = abs(residual(ctrl))
    r2 = abs(residual(ctrl.halved()))
    return r1 / r2 if r2 > 0 else math.inf
