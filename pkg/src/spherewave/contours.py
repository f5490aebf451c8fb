"""
Contours on the sphere at infinity and adaptive complex quadrature.

A :class:`Contour` is an ordered list of smooth segments, each a map
[0, 1] -> C in the beta chart together with its derivative.  Integrals of
a form ``f(beta) d beta`` are computed with a globally adaptive 15-point
Gauss-Kronrod rule: every round evaluates all freshly split intervals in a
single vectorised call per segment, which keeps the Python overhead flat.

The sliding contours gamma^(m) are built here as well.  gamma^(1) is the
real segment [-pi, pi].  gamma^(2) is Phi+(C2) where C2 is the great circle
x3 = x1/delta; since C2 is invariant under x -> -x, Phi+(C2) and Phi-(C2)
are the same closed curve.  gamma^(3..5) are gamma^(2) shifted by multiples
of pi/2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ContourError, NoConvergence, OrientationUnresolved, SingularOnPath
from .geometry import TWO_PI, Chart, XiPoint

Integrand = Callable[[np.ndarray], np.ndarray]

# 15-point Kronrod nodes (positive half) and weights, with the embedded
# 7-point Gauss weights on the odd-indexed nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

KRONROD_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
# Gauss nodes are xgk[1], xgk[3], xgk[5], xgk[7] and their mirrors.
for _i, _w in zip((1, 3, 5), _WG[:3]):
    GAUSS_WEIGHTS[_i] = _w
    GAUSS_WEIGHTS[14 - _i] = _w
GAUSS_WEIGHTS[7] = _WG[3]


@dataclass(frozen=True)
class QuadratureControl:
    rel_tol: float = 1e-10
    max_depth: int = 18
    min_intervals: int = 4

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_depth < 1 or self.min_intervals < 1:
            raise ValueError("max_depth and min_intervals must be >= 1")


# ---------------------------------------------------------------------------
# Segments and contours
# ---------------------------------------------------------------------------

class Segment:
    """Smooth map [0, 1] -> C with its derivative, both vectorised."""

    def __init__(self, point: Callable, deriv: Callable, label: str = ""):
        self._point = point
        self._deriv = deriv
        self.label = label

    def point(self, t):
        return np.asarray(self._point(np.asarray(t, dtype=float)), dtype=complex)

    def deriv(self, t):
        return np.asarray(self._deriv(np.asarray(t, dtype=float)), dtype=complex)

    def start(self) -> complex:
        return complex(self.point(np.array([0.0]))[0])

    def end(self) -> complex:
        return complex(self.point(np.array([1.0]))[0])

    def shifted(self, s: complex) -> "Segment":
        return Segment(lambda t: self._point(t) + s, self._deriv, self.label)

    def reversed(self) -> "Segment":
        return Segment(lambda t: self._point(1.0 - t), lambda t: -self._deriv(1.0 - t),
                       self.label)


def line_segment(a: complex, b: complex) -> Segment:
    a, b = complex(a), complex(b)
    return Segment(lambda t: a + (b - a) * t, lambda t: np.full(np.shape(t), b - a),
                   label=f"line {a}->{b}")


def circle_segment(center: complex, radius: float) -> Segment:
    """Positively oriented circle, one full turn."""
    center = complex(center)
    return Segment(lambda t: center + radius * np.exp(2j * np.pi * t),
                   lambda t: 2j * np.pi * radius * np.exp(2j * np.pi * t),
                   label="circle")


class Contour:
    """Oriented piecewise-smooth path in one chart.

    Parameters
    ----------
    segments
        Consecutive segments; the end of each must meet the start of the
        next (modulo 2*pi in the beta chart).
    closed_on_xi
        Whether the path closes as a loop (end equal to start modulo 2*pi).
    chart
        The chart the coordinates refer to; only ``Chart.BETA`` admits the
        2*pi identification.
    """

    def __init__(self, segments: Sequence[Segment], closed_on_xi: bool = False,
                 chart: Chart = Chart.BETA, check: bool = True):
        if not segments:
            raise ContourError("a contour needs at least one segment")
        self.segments = tuple(segments)
        self.closed_on_xi = bool(closed_on_xi)
        self.chart = Chart(chart)
        self._cache: dict = {}
        if check:
            self._validate()

    def _gap(self, a: complex, b: complex) -> float:
        d = b - a
        if self.chart is Chart.BETA:
            d = complex((d.real + math.pi) % TWO_PI - math.pi, d.imag)
        return abs(d)

    def _validate(self):
        for s0, s1 in zip(self.segments, self.segments[1:]):
            if self._gap(s0.end(), s1.start()) > 1e-10:
                raise ContourError("consecutive segments do not meet")
        if self.closed_on_xi:
            if self.chart is not Chart.BETA:
                gap = abs(self.end() - self.start())
            else:
                gap = self._gap(self.start(), self.end())
            if gap > 1e-10:
                raise ContourError("contour flagged closed does not close")
        t = np.linspace(0.0, 1.0, 64)
        for s in self.segments:
            if np.min(np.abs(s.deriv(t))) == 0.0:
                raise ContourError("segment derivative vanishes")

    def start(self) -> complex:
        return self.segments[0].start()

    def end(self) -> complex:
        return self.segments[-1].end()

    def shifted(self, s: complex) -> "Contour":
        return Contour([seg.shifted(s) for seg in self.segments], self.closed_on_xi,
                       self.chart)

    def reversed(self) -> "Contour":
        return Contour([seg.reversed() for seg in reversed(self.segments)],
                       self.closed_on_xi, self.chart)

    def sample(self, n_per_segment: int = 256) -> np.ndarray:
        """Points along the contour, in path order, endpoints included."""
        key = ("sample", n_per_segment)
        if key not in self._cache:
            t = np.linspace(0.0, 1.0, n_per_segment)
            pts = [s.point(t) for s in self.segments]
            self._cache[key] = np.concatenate(pts)
        return self._cache[key]

    def distance_to(self, beta: complex, n_per_segment: int = 2048) -> float:
        """Approximate distance from ``beta`` to the contour (modulo 2*pi)."""
        if not np.isfinite(beta):
            return math.inf
        pts = self.sample(n_per_segment)
        d = pts - beta
        if self.chart is Chart.BETA:
            d = ((d.real + np.pi) % TWO_PI - np.pi) + 1j * d.imag
        return float(np.min(np.abs(d)))

    def winding_number(self, point: complex, n_per_segment: int = 2048) -> int:
        """Winding number of the closed contour about ``point``.

        In the beta chart the contour is mapped to the tau+ plane first, so
        a loop going once around the cylinder winds once around points
        above it (Im beta larger) and zero times around points below.
        ``point`` may be +-i*inf given as ``complex(0, +-inf)``.
        """
        pts = self.sample(n_per_segment)
        if self.chart is Chart.BETA:
            pts = np.exp(1j * pts)
            if np.isinf(point.imag):
                point = 0j if point.imag > 0 else complex(np.inf)
            else:
                point = np.exp(1j * point)
        if np.isinf(point):
            return 0
        ang = np.angle((pts[1:] - point) / (pts[:-1] - point))
        close = np.angle((pts[0] - point) / (pts[-1] - point))
        return int(round((ang.sum() + close) / TWO_PI))

    # -- serialisation -----------------------------------------------------

    def to_dict(self, n_per_segment: int = 256) -> dict:
        t = np.linspace(0.0, 1.0, n_per_segment)
        segs = []
        for s in self.segments:
            p = s.point(t)
            segs.append({"samples": [[float(z.real), float(z.imag)] for z in p]})
        return {"segments": segs, "closed": self.closed_on_xi, "chart": self.chart.value}

    def to_json(self, n_per_segment: int = 256) -> str:
        return json.dumps(self.to_dict(n_per_segment))

    @classmethod
    def from_dict(cls, d: dict) -> "Contour":
        """Rebuild a piecewise-linear contour from serialised samples."""
        segments = []
        for sd in d["segments"]:
            pts = np.array([complex(re, im) for re, im in sd["samples"]])
            for a, b in zip(pts[:-1], pts[1:]):
                if a != b:
                    segments.append(line_segment(a, b))
        return cls(segments, bool(d.get("closed", False)), Chart(d.get("chart", "beta")))

    @classmethod
    def from_json(cls, s: str) -> "Contour":
        return cls.from_dict(json.loads(s))


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

def _gk_eval(f: Integrand, seg: Segment, a: np.ndarray, b: np.ndarray, rel_tol: float):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    t = c[:, None] + h[:, None] * KRONROD_NODES[None, :]
    flat = t.ravel()
    vals = np.asarray(f(seg.point(flat)), dtype=complex) * seg.deriv(flat)
    vals = vals.reshape(t.shape)
    if not np.all(np.isfinite(vals)):
        raise SingularOnPath("non-finite integrand value on the contour")
    if np.max(np.abs(vals)) > 1.0 / rel_tol:
        raise SingularOnPath(f"|integrand| = {np.max(np.abs(vals)):.3g} exceeds 1/rel_tol")
    k = h * (vals @ KRONROD_WEIGHTS)
    g = h * (vals @ GAUSS_WEIGHTS)
    return k, np.abs(k - g)


def integrate(f: Integrand, contour: Contour, ctrl: QuadratureControl | None = None,
              full_output: bool = False):
    """Integrate ``f(beta) d beta`` along ``contour``.

    ``f`` receives a 1-D complex array of contour points and must return an
    array of the same shape.  Refinement stops when the summed Kronrod-Gauss
    error estimate is below ``rel_tol * (1 + |result|)``.

    Returns the integral, or ``(value, error_estimate, n_evaluations)`` when
    ``full_output`` is set.

    Raises
    ------
    NoConvergence
        An interval needing refinement has reached ``max_depth``.
    SingularOnPath
        The integrand is non-finite or exceeds ``1/rel_tol`` at a node.
    """
    ctrl = ctrl or QuadratureControl()
    n0 = ctrl.min_intervals
    edges = np.linspace(0.0, 1.0, n0 + 1)
    seg_idx, lo, hi, depth, vals, errs = [], [], [], [], [], []
    for i, seg in enumerate(contour.segments):
        k, e = _gk_eval(f, seg, edges[:-1], edges[1:], ctrl.rel_tol)
        seg_idx.append(np.full(n0, i))
        lo.append(edges[:-1])
        hi.append(edges[1:])
        depth.append(np.zeros(n0, dtype=int))
        vals.append(k)
        errs.append(e)
    seg_idx = np.concatenate(seg_idx)
    lo, hi = np.concatenate(lo), np.concatenate(hi)
    depth = np.concatenate(depth)
    vals, errs = np.concatenate(vals), np.concatenate(errs)
    nevals = 15 * len(vals)

    while True:
        total = vals.sum()
        err = errs.sum()
        target = ctrl.rel_tol * (1.0 + abs(total))
        if err <= target:
            break
        # split intervals carrying more than their share of the budget
        width = (hi - lo) / len(contour.segments)
        split = errs > target * width
        if not split.any():
            split = errs >= errs.max()
        if np.any(depth[split] >= ctrl.max_depth):
            raise NoConvergence(f"quadrature reached max_depth={ctrl.max_depth}; "
                                f"error {err:.3g} > target {target:.3g}")
        keep = ~split
        mid = 0.5 * (lo[split] + hi[split])
        new_seg = np.concatenate([seg_idx[split], seg_idx[split]])
        new_lo = np.concatenate([lo[split], mid])
        new_hi = np.concatenate([mid, hi[split]])
        new_depth = np.concatenate([depth[split], depth[split]]) + 1
        new_vals = np.empty(len(new_lo), dtype=complex)
        new_errs = np.empty(len(new_lo))
        for i, seg in enumerate(contour.segments):
            sel = new_seg == i
            if sel.any():
                k, e = _gk_eval(f, seg, new_lo[sel], new_hi[sel], ctrl.rel_tol)
                new_vals[sel] = k
                new_errs[sel] = e
        nevals += 15 * len(new_lo)
        seg_idx = np.concatenate([seg_idx[keep], new_seg])
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        depth = np.concatenate([depth[keep], new_depth])
        vals = np.concatenate([vals[keep], new_vals])
        errs = np.concatenate([errs[keep], new_errs])

    total = complex(vals.sum())
    if full_output:
        return total, float(errs.sum()), nevals
    return total


def deform_check(f: Integrand, c1: Contour, c2: Contour,
                 ctrl: QuadratureControl | None = None) -> float:
    """Relative discrepancy between the integrals of ``f`` over two contours."""
    i1 = integrate(f, c1, ctrl)
    i2 = integrate(f, c2, ctrl)
    return abs(i1 - i2) / (1.0 + abs(i1))


# ---------------------------------------------------------------------------
# Residues
# ---------------------------------------------------------------------------

def dbeta_coefficient(chart: Chart) -> Callable[[np.ndarray], np.ndarray]:
    """Coefficient of the form d beta in a chart coordinate.

    tau+ = exp(i beta) gives d beta = -i d tau+/tau+;
    tau- = exp(-i beta) gives d beta = i d tau-/tau-.
    """
    chart = Chart(chart)
    if chart is Chart.BETA:
        return lambda z: np.ones_like(z)
    if chart is Chart.TAU_PLUS:
        return lambda tau: -1j / tau
    return lambda tau: 1j / tau


def residue_probe(f: Integrand, center: XiPoint, radius: float,
                  ctrl: QuadratureControl | None = None) -> complex:
    """(1/(2 pi i)) times the integral of ``f`` over a small circle.

    ``f`` is the coefficient of the form in the chart of ``center``; the
    circle |z - center| = radius is positively oriented in that chart.
    """
    c = Contour([circle_segment(center.coordinate, radius)], closed_on_xi=True,
                chart=Chart.TAU_PLUS if center.chart is Chart.BETA else center.chart)
    return integrate(f, c, ctrl) / (2j * math.pi)


# ---------------------------------------------------------------------------
# Sliding contours
# ---------------------------------------------------------------------------

def great_circle_frame(m: int, delta: float) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal frame (u, v) spanning the great circle C^(m).

    C^(2): x3 = x1/delta, C^(3): x3 = x2/delta, C^(4): x3 = -x1/delta,
    C^(5): x3 = -x2/delta.  Frames for m > 2 are C^(2)'s rotated about the
    polar axis by (m - 2) * pi/2.
    """
    if m == 1:
        return np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
    u = np.array([delta, 0.0, 1.0]) / math.hypot(1.0, delta)
    v = np.array([0.0, 1.0, 0.0])
    a = (m - 2) * math.pi / 2.0
    rz = np.array([[math.cos(a), -math.sin(a), 0.0],
                   [math.sin(a), math.cos(a), 0.0],
                   [0.0, 0.0, 1.0]])
    return rz @ u, rz @ v


def domain_normal(m: int, delta: float) -> np.ndarray:
    """Unit vector n with X^(m) = {x : n . x > 0}."""
    if m == 1:
        return np.array([0.0, 0.0, -1.0])
    a = (m - 2) * math.pi / 2.0
    n = np.array([math.cos(a), math.sin(a), -delta])
    return n / np.linalg.norm(n)


def great_circle_image(u: np.ndarray, v: np.ndarray, rotation: np.ndarray | None = None
                       ) -> Segment:
    """Phi+ image of the great circle s -> cos(s) u + sin(s) v, s = 2 pi t.

    The strip coordinate is continuous along the whole turn: with
    w = c1 + i c2 = A e^{is} + B e^{-is}, arg w is carried as
    s + arg A + Arg(1 + (B/A) e^{-2is}) (the |B| > |A| case mirrors it),
    so Re beta changes by exactly +-2 pi over the loop.  ``rotation``
    optionally maps the circle before projecting.
    """
    if rotation is not None:
        u, v = rotation @ u, rotation @ v
    U = complex(u[0], u[1])
    V = complex(v[0], v[1])
    A = (U - 1j * V) / 2.0
    B = (U + 1j * V) / 2.0
    if abs(A) == abs(B):
        raise OrientationUnresolved("great circle passes through a pole")
    if abs(A) > abs(B):
        wind, ratio, arg_lead = 1, B / A, math.atan2(A.imag, A.real)
    else:
        wind, ratio, arg_lead = -1, A / B, math.atan2(B.imag, B.real)

    def parts(t):
        s = TWO_PI * t
        cs, sn = np.cos(s), np.sin(s)
        w = cs * U + sn * V
        c3 = cs * u[2] + sn * v[2]
        dw = -sn * U + cs * V
        dc3 = -sn * u[2] + cs * v[2]
        return s, w, c3, dw, dc3

    def point(t):
        s, w, c3, _, _ = parts(t)
        arg_w = wind * s + arg_lead + np.angle(1.0 + ratio * np.exp(-2j * wind * s))
        arg_tau = arg_w + np.pi / 2.0
        log_mod = np.log(np.abs(w)) - np.log1p(c3)
        return arg_tau - 1j * log_mod

    def deriv(t):
        _, w, c3, dw, dc3 = parts(t)
        return TWO_PI * (-1j) * (dw / w - dc3 / (1.0 + c3))

    return Segment(point, deriv, label="great-circle image")


def build_gamma(m: int, delta: float = 0.1, samples: int = 256) -> Contour:
    """Sliding contour gamma^(m), m = 1..5.

    gamma^(1) is beta(t) = -pi + 2 pi t.  For m >= 2 the contour is the
    Phi-image of C^(m), oriented so that Re beta increases by 2 pi (the
    sense of gamma^(1)); the orientation is confirmed by checking that a
    point deep inside X^(1) n X^(m) has Phi+(x) below and Phi-(x) above
    both gamma^(1) and gamma^(m).
    """
    if m not in (1, 2, 3, 4, 5):
        raise ValueError("m must be in 1..5")
    if m == 1:
        return Contour([line_segment(-math.pi, math.pi)], closed_on_xi=True)
    if not 0.0 < delta <= 0.5:
        raise ValueError("delta must lie in (0, 0.5]")
    if samples < 64:
        raise ValueError("samples must be >= 64")
    u, v = great_circle_frame(2, delta)
    seg = great_circle_image(u, v)
    c2 = Contour([seg], closed_on_xi=True)
    if _re_advance(c2, samples) < 0:
        c2 = c2.reversed()
    if abs(_re_advance(c2, samples) - TWO_PI) > 1e-8 or not _separates_like_gamma1(c2, delta):
        raise OrientationUnresolved(f"could not orient gamma^({m}) for delta={delta}")
    if m == 2:
        return c2
    return c2.shifted((m - 2) * math.pi / 2.0)


def _re_advance(c: Contour, samples: int) -> float:
    pts = c.sample(samples)
    return float(pts[-1].real - pts[0].real)


def _separates_like_gamma1(c: Contour, delta: float) -> bool:
    from .characteristics import phi_beta

    # a point well inside X^(1) n X^(2)
    x = np.array([math.sin(2.5), 0.0, math.cos(2.5)])
    if not (x[2] < x[0] / delta):
        return False
    b_plus = complex(phi_beta(x, 1))
    b_minus = complex(phi_beta(x, -1))
    g1 = build_gamma(1)
    return (c.winding_number(b_plus) == g1.winding_number(b_plus) == 0
            and c.winding_number(b_minus) == g1.winding_number(b_minus) == 1)
