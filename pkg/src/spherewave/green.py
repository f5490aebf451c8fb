"""
Green's function of the Laplace-Beltrami operator: closed form and
plane-wave representations with sliding contours.

With the source at the north pole and reference point at the south pole,

    G(x) = A_lam * integral over gamma^(m) of w2(x, eta(beta); SP) d beta,
    A_lam = (-i)^(-lam) / (8 pi sin(pi lam)),

for x in the domain X^(m).  Along the contour the plane wave factorises:
with tau = exp(i beta),

    x . eta(beta) = -i (1 - x3)/2 * (1 - tau/tau_a) * (1 - tau_b/tau),

where tau_a = Phi+(x) and tau_b = Phi-(x) in the tau+ chart.  Every gamma^(m)
is a circle in the tau+ plane with 0 and tau_b inside and tau_a outside.
A bracket is a non-positive real only for tau on the segment [0, tau_b] or
on the ray from tau_a outward, and the disc is convex, so neither bracket
meets the principal cut on the contour.  Principal powers then give the
branch that is continuous in x from the south pole.  ``method="tracked"``
computes the same branch by unwrapping the phase along the meridian from
the south pole instead.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .characteristics import phi_beta, phi_tau_plus
from .contours import (
    Contour,
    QuadratureControl,
    build_gamma,
    great_circle_frame,
    great_circle_image,
    integrate,
)
from .errors import (
    ChartOverflow,
    DomainViolation,
    NoValidDomain,
    PoleError,
    PreconditionViolation,
    SourceCoincidence,
)
from .geometry import (
    NORTH_POLE,
    SOUTH_POLE,
    Chart,
    SpherePoint,
    angular_distance,
    antipode,
    as_vec,
    half_turn_swapping,
    rotation_taking,
)
from .planewaves import continue_along, meridian_path
from .special import Degree, SeriesControl, legendre_p_series

DOMAIN_IDS = (1, 2, 3, 4, 5)
DEFAULT_DELTA = 0.1
CLEARANCE = 1e-3


@dataclass(frozen=True)
class GreenProblem:
    """Degree, source point and plane-wave reference point.

    The reference defaults to the antipode of the source.
    """

    lam: Degree | complex
    source: SpherePoint = NORTH_POLE
    reference: SpherePoint | None = field(default=None)

    def __post_init__(self):
        if not isinstance(self.lam, Degree):
            object.__setattr__(self, "lam", Degree(self.lam))
        if self.reference is None:
            object.__setattr__(self, "reference", antipode(self.source))

    @property
    def amplitude(self) -> complex:
        """A_lam = exp(i pi lam / 2) / (8 pi sin(pi lam))."""
        lam = self.lam.value
        return cmath.exp(0.5j * math.pi * lam) / (8.0 * math.pi * cmath.sin(math.pi * lam))

    @property
    def amplitude_w1(self) -> complex:
        """(-i)^(1 + lam) / (8 pi sin(pi (-1 - lam)))."""
        lam = self.lam.value
        return (cmath.exp(-0.5j * math.pi * (1.0 + lam))
                / (8.0 * math.pi * cmath.sin(math.pi * (-1.0 - lam))))

    def with_lambda(self, lam) -> "GreenProblem":
        return GreenProblem(lam, self.source, self.reference)


def _xyz(x) -> np.ndarray:
    if isinstance(x, SpherePoint):
        return x.xyz
    return np.real_if_close(as_vec(x))


# ---------------------------------------------------------------------------
# Closed form
# ---------------------------------------------------------------------------

def green_closed(prob: GreenProblem, x, ctrl: SeriesControl | None = None) -> complex:
    """P_lam(-x . x0) / (4 sin(pi lam)).

    ``x`` may be a :class:`SpherePoint` or a point of the complex sphere
    (a :class:`Complex3` or length-3 array), in which case the complexified
    formula is used with the principal branch of P_lam.

    Raises
    ------
    SourceCoincidence
        x is within 1e-8 rad of the source.
    """
    lam = prob.lam.value
    x0 = prob.source.xyz
    if isinstance(x, SpherePoint):
        if angular_distance(x, prob.source) < 1e-8:
            raise SourceCoincidence("observation point coincides with the source")
        q = -float(x.xyz @ x0)
        q = min(1.0, max(q, -1.0 + 1e-300))
    else:
        z = as_vec(x)
        c = complex(z @ x0)
        # the angle between z and x0 is about sqrt(2 |1 - z.x0|)
        if math.sqrt(2.0 * abs(1.0 - c)) < 1e-8:
            raise SourceCoincidence("observation point coincides with the source")
        q = -c
        if abs(q.imag) < 1e-300:
            q = q.real
    p = legendre_p_series(lam, q, ctrl)
    return p / (4.0 * cmath.sin(math.pi * lam))


# ---------------------------------------------------------------------------
# Domains and contours
# ---------------------------------------------------------------------------

def membership(x, delta: float = DEFAULT_DELTA) -> frozenset[int]:
    """Indices m with x in X^(m).

    X^(1): theta > pi/2; X^(2): x3 < x1/delta; X^(3): x3 < x2/delta;
    X^(4): x3 < -x1/delta; X^(5): x3 < -x2/delta.
    """
    x1, x2, x3 = _xyz(x)
    out = set()
    if x3 < 0.0:
        out.add(1)
    if x3 < x1 / delta:
        out.add(2)
    if x3 < x2 / delta:
        out.add(3)
    if x3 < -x1 / delta:
        out.add(4)
    if x3 < -x2 / delta:
        out.add(5)
    return frozenset(out)


def excluded_cap_angle(delta: float = DEFAULT_DELTA) -> float:
    """Polar angle mu = 2 delta of the cap left uncovered by the domains."""
    return 2.0 * delta


@functools.lru_cache(maxsize=64)
def sliding_contour(m: int, delta: float = DEFAULT_DELTA) -> Contour:
    """Cached gamma^(m) for the given delta."""
    return build_gamma(m, delta)


def singular_points(x) -> tuple[complex, complex]:
    """Strip coordinates of Phi+(x) and Phi-(x)."""
    xyz = _xyz(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        bp = complex(phi_beta(xyz, 1))
        bm = complex(phi_beta(xyz, -1))
    return bp, bm


def clearance(x, m: int, delta: float = DEFAULT_DELTA) -> float:
    """Distance from gamma^(m) to the nearer of Phi+(x), Phi-(x)."""
    c = sliding_contour(m, delta)
    return min(c.distance_to(b) for b in singular_points(x))


def _check_domain(x, m: int, delta: float):
    if m not in DOMAIN_IDS:
        raise ValueError(f"domain index {m} not in 1..5")
    if m not in membership(x, delta):
        raise DomainViolation(f"x is not in X^({m}) for delta={delta}")


# ---------------------------------------------------------------------------
# Plane-wave integrands
# ---------------------------------------------------------------------------

def continued_wave(xyz: np.ndarray, beta: np.ndarray, exponent: complex) -> np.ndarray:
    """(-i (x . eta)/(SP . eta))^exponent on a sliding contour, factored form.

    Valid for beta on gamma^(m) and x in X^(m); equals the branch obtained by
    continuing from x = SP.
    """
    x1, x2, x3 = (float(v) for v in xyz)
    tau = np.exp(1j * np.asarray(beta, dtype=complex))
    half = 0.5 * (1.0 - x3)
    inv_a = -1j * (x1 - 1j * x2) / (1.0 - x3)      # 1/Phi+(x) in the tau+ chart
    tau_b = -1j * (x1 + 1j * x2) / (1.0 - x3)      # Phi-(x) in the tau+ chart
    log_w = (-0.5j * math.pi + math.log(half)
             + np.log(1.0 - tau * inv_a) + np.log(1.0 - tau_b / tau))
    return np.exp(exponent * log_w)


def tracked_wave(xyz: np.ndarray, beta: np.ndarray, exponent: complex) -> np.ndarray:
    """Same branch as :func:`continued_wave`, by phase continuation along the
    meridian from the south pole to x."""
    path = meridian_path(SOUTH_POLE.xyz, np.asarray(xyz, dtype=float))
    return continue_along(exponent, SOUTH_POLE, path, beta)


def _representation(prob: GreenProblem, x, m: int, exponent: complex, amplitude: complex,
                    ctrl: QuadratureControl | None, delta: float, method: str,
                    full_output: bool):
    if angular_distance(prob.source, NORTH_POLE) > 1e-14:
        raise PreconditionViolation("this representation needs the source at the north pole")
    if angular_distance(prob.reference, SOUTH_POLE) > 1e-14:
        raise PreconditionViolation("this representation needs the reference at the south pole")
    _check_domain(x, m, delta)
    xyz = _xyz(x)
    if method == "factored":
        def f(beta):
            return continued_wave(xyz, beta, exponent)
    elif method == "tracked":
        def f(beta):
            return tracked_wave(xyz, beta, exponent)
    else:
        raise ValueError(f"unknown method {method!r}")
    ctrl = ctrl or QuadratureControl()
    val, err, _ = integrate(f, sliding_contour(m, delta), ctrl, full_output=True)
    if full_output:
        return amplitude * val, abs(amplitude) * err
    return amplitude * val


def green_pw(prob: GreenProblem, x, m: int = 1, ctrl: QuadratureControl | None = None,
             delta: float = DEFAULT_DELTA, method: str = "factored",
             full_output: bool = False):
    """Green's function from the w2 plane-wave integral over gamma^(m).

    Parameters
    ----------
    prob
        Problem with the source at the north pole (reference south pole).
    x
        Observation point in X^(m).
    m
        Sliding-contour index 1..5.
    ctrl
        Quadrature control.
    delta
        Sliding-contour parameter.
    method
        ``"factored"`` (closed-form branch) or ``"tracked"`` (phase
        continuation along the meridian); both give the same branch.
    full_output
        Also return the quadrature error estimate (scaled by |A_lam|).

    Raises
    ------
    DomainViolation
        x is outside X^(m).
    """
    return _representation(prob, x, m, prob.lam.value, prob.amplitude, ctrl, delta,
                           method, full_output)


def green_pw_w1(prob: GreenProblem, x, m: int = 1, ctrl: QuadratureControl | None = None,
                delta: float = DEFAULT_DELTA, method: str = "factored",
                full_output: bool = False):
    """Green's function from the w1 plane-wave integral (degree -1 - lam)."""
    return _representation(prob, x, m, -1.0 - prob.lam.value, prob.amplitude_w1, ctrl,
                           delta, method, full_output)


def select_domain(x, delta: float = DEFAULT_DELTA) -> int:
    """Smallest m with x in X^(m) and singular points >= 1e-3 from gamma^(m)."""
    for m in sorted(membership(x, delta)):
        if clearance(x, m, delta) >= CLEARANCE:
            return m
    raise NoValidDomain(f"no sliding contour covers the point for delta={delta}; "
                        f"the excluded cap is theta <= {excluded_cap_angle(delta):.4g}")


def green_pw_general(prob: GreenProblem, x: SpherePoint, ctrl: QuadratureControl | None = None,
                     delta: float = DEFAULT_DELTA, full_output: bool = False):
    """Plane-wave Green's function for an arbitrary source position.

    The frame is rotated so the source sits at the north pole; the
    observation point is then handled by the first admissible sliding
    contour.  With ``full_output`` returns (value, m, error_estimate).

    Raises
    ------
    NoValidDomain
        The rotated point lies in the excluded polar cap.
    """
    if angular_distance(prob.reference, antipode(prob.source)) > 1e-12:
        raise PreconditionViolation("reference must be the antipode of the source")
    if angular_distance(x, prob.source) < 1e-8:
        raise SourceCoincidence("observation point coincides with the source")
    rot = rotation_taking(prob.source, NORTH_POLE)
    y = rot.matrix @ x.xyz
    m = select_domain(y, delta)
    base = GreenProblem(prob.lam)
    val, err = green_pw(base, y, m, ctrl, delta, full_output=True)
    if full_output:
        return val, m, err
    return val


# ---------------------------------------------------------------------------
# Reciprocity: the Moebius map and the source form
# ---------------------------------------------------------------------------

def tau_minus_of_phi(x) -> tuple[complex, complex]:
    """tau- chart coordinates (tau^+, tau^-) of Phi+(x) and Phi-(x)."""
    xyz = _xyz(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        tp = complex(1.0 / phi_tau_plus(xyz, 1))
        tm = complex(1.0 / phi_tau_plus(xyz, -1))
    return tp, tm


def mobius_upsilon(tau, x) -> complex | np.ndarray:
    """t = tau^+ (tau - tau^-)/(tau - tau^+) in the tau- chart.

    The map is its own inverse.  For x = NP it is the identity.

    Raises
    ------
    PoleError
        tau equals tau^+(x).
    ChartOverflow
        x is the south pole, where tau^+ = 0 and tau^- is infinite.
    """
    tp, tm = tau_minus_of_phi(x)
    tau = np.asarray(tau, dtype=complex)
    if cmath.isinf(tp) and tm == 0:
        out = tau
    elif tp == 0 or cmath.isinf(tm):
        raise ChartOverflow("the map degenerates at the south pole")
    else:
        if np.any(np.abs(tau - tp) < 1e-14 * max(1.0, abs(tp))):
            raise PoleError("tau coincides with the pole tau^+(x) of the map")
        out = tp * (tau - tm) / (tau - tp)
    return complex(out) if out.ndim == 0 else out


def mobius_upsilon_inverse(t, x) -> complex | np.ndarray:
    """Inverse map tau = tau^+ (t - tau^-)/(t - tau^+); same formula."""
    return mobius_upsilon(t, x)


def mobius_upsilon_derivative(tau, x):
    tp, tm = tau_minus_of_phi(x)
    tau = np.asarray(tau, dtype=complex)
    return tp * (tm - tp) / (tau - tp) ** 2


def source_form(x0) -> callable:
    """Coefficient of Omega_{x0} in the tau- chart.

    i (1/(t - tau^-) - 1/(t - tau^+)): simple poles at Phi-(x0) with
    residue i and at Phi+(x0) with residue -i.  For x0 = NP it is i dt/t,
    which is d beta.
    """
    tp, tm = tau_minus_of_phi(x0)
    if cmath.isinf(tp):
        return lambda t: 1j * (1.0 / (t - tm))
    if cmath.isinf(tm):
        return lambda t: -1j * (1.0 / (t - tp))
    return lambda t: 1j * (1.0 / (t - tm) - 1.0 / (t - tp))


def upsilon_contour_discrepancy(x, m: int, delta: float = DEFAULT_DELTA,
                                n: int = 4096) -> float:
    """Hausdorff distance between Upsilon(gamma^(m)(NP)) and gamma^(m)(x).

    gamma^(m)(x) is the Phi-image of the rotated great circle R C^(m), with
    R the half-turn carrying NP to x; for m = 1 the circle is the equator.
    Distances are chordal, measured on the Riemann sphere of the tau- chart,
    so curves passing near tau- = infinity are treated fairly.
    """
    x_pt = x if isinstance(x, SpherePoint) else SpherePoint.from_vector(x)
    rot = half_turn_swapping(NORTH_POLE, x_pt).matrix
    u, v = great_circle_frame(m, delta)
    image = great_circle_image(u, v, rotation=rot)
    t = np.linspace(0.0, 1.0, n)
    target = _riemann_sphere(np.exp(-1j * image.point(t)))
    source = _riemann_sphere(
        mobius_upsilon(np.exp(-1j * sliding_contour(m, delta).sample(n)), x_pt))
    return max(_directed_hausdorff(source, target), _directed_hausdorff(target, source))


def _riemann_sphere(z: np.ndarray) -> np.ndarray:
    """Inverse stereographic projection onto the unit sphere, shape (N, 3)."""
    r2 = np.abs(z) ** 2
    return np.stack([2 * z.real, 2 * z.imag, r2 - 1.0], axis=1) / (r2 + 1.0)[:, None]


def _directed_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """max over points of a of the distance to the closed polyline b.

    The nearest vertex of b is found first; the distance is then taken to
    the two polyline edges meeting there.
    """
    if np.linalg.norm(b[0] - b[-1]) < 1e-12:
        b = b[:-1]
    gram = (np.sum(a * a, axis=1)[:, None] + np.sum(b * b, axis=1)[None, :]
            - 2.0 * a @ b.T)
    k = np.argmin(gram, axis=1)
    n = len(b)
    best = np.full(len(a), np.inf)
    for j0, j1 in ((k - 1) % n, k), (k, (k + 1) % n):
        p0, d = b[j0], b[j1] - b[j0]
        dd = np.maximum(np.sum(d * d, axis=1), 1e-300)
        w = a - p0
        s = np.clip(np.sum(w * d, axis=1) / dd, 0.0, 1.0)
        best = np.minimum(best, np.linalg.norm(w - s[:, None] * d, axis=1))
    return float(best.max())


def pullback_pair(lam, x, ctrl: QuadratureControl | None = None) -> tuple[complex, complex]:
    """Integrals of omega1 over gamma^(1) and of omega2 over Upsilon(gamma^(1)).

    omega1 = w2(x, p; SP) d beta and omega2 = w2(NP, p; -x) Omega_x.  The
    second integral is computed through the substitution t = Upsilon(tau),
    tau = exp(-i beta), with w2(NP, p; -x) continued along the great arc
    from -x to NP.  For x in X^(1) the two agree.
    """
    prob = GreenProblem(lam)
    x_pt = x if isinstance(x, SpherePoint) else SpherePoint.from_vector(x)
    _check_domain(x_pt, 1, DEFAULT_DELTA)
    xyz = x_pt.xyz
    ctrl = ctrl or QuadratureControl()
    omega_x = source_form(x_pt)
    arc = meridian_path(-xyz, NORTH_POLE.xyz)

    def f2(beta):
        tau = np.exp(-1j * beta)
        t = mobius_upsilon(tau, x_pt)
        dt_dbeta = mobius_upsilon_derivative(tau, x_pt) * (-1j * tau)
        w = continue_along(prob.lam.value, -xyz, arc, t, chart=Chart.TAU_MINUS)
        return w * omega_x(t) * dt_dbeta

    def f1(beta):
        return continued_wave(xyz, beta, prob.lam.value)

    g1 = sliding_contour(1, DEFAULT_DELTA)
    return integrate(f1, g1, ctrl), integrate(f2, g1, ctrl)
