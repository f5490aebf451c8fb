"""
Plane waves w1, w2 on the sphere and continuous branch tracking.

For a point p of Xi with null representative eta, the plane waves are

    w2(x, p; x_ref) = (-i (x . eta) / (x_ref . eta)) ** lam
    w1(x, p; x_ref) = (-i (x . eta) / (x_ref . eta)) ** (-1 - lam)

so that both equal (-i) ** exponent at x = x_ref.  The ratio is invariant
under rescaling eta, which makes the value a function on Xi.  Away from
x_ref the value depends on the sheet; :func:`evaluate` uses the principal
power and :func:`evaluate_tracked` / :func:`continue_along` carry the phase
continuously instead.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .contours import Contour
from .errors import SingularPoint, StepTooLarge
from .geometry import Chart, Complex3, SpherePoint, XiPoint, as_vec
from .special import Degree

SINGULAR_GUARD = 1e-13
PHASE_STEP_LIMIT = math.pi / 2.0
MAX_BISECTIONS = 20


class PlaneWaveKind(str, enum.Enum):
    W1 = "w1"
    W2 = "w2"


@dataclass(frozen=True)
class PlaneWaveSpec:
    kind: PlaneWaveKind
    lam: Degree | complex
    x_ref: SpherePoint | Complex3 = field(default_factory=lambda: SpherePoint(math.pi))

    def __post_init__(self):
        object.__setattr__(self, "kind", PlaneWaveKind(self.kind))
        if not isinstance(self.lam, Degree):
            object.__setattr__(self, "lam", Degree(self.lam))

    @property
    def exponent(self) -> complex:
        lam = self.lam.value
        return lam if self.kind is PlaneWaveKind.W2 else -1.0 - lam

    @property
    def ref_vector(self) -> np.ndarray:
        return _point_vector(self.x_ref)


@dataclass
class BranchState:
    """Running phase of the ratio (x . eta)/(x_ref . eta) along a path.

    ``accumulated_phase`` is the continuous argument of the ratio at the
    last visited point; ``last_argument`` is the ratio itself there.  A
    fresh state (``last_argument`` None) starts on the principal branch.
    """

    accumulated_phase: float = 0.0
    last_argument: complex | None = None


def _point_vector(x) -> np.ndarray:
    if isinstance(x, SpherePoint):
        return x.xyz.astype(complex)
    return as_vec(x)


def eta_array(chart: Chart, coords: np.ndarray) -> np.ndarray:
    """Null representatives (3, N) for chart coordinates.

    beta: (cos b, sin b, i); tau+: tau * eta(beta); tau-: tau- * eta(beta).
    Scaling does not matter for plane waves, and these forms stay finite at
    the chart origins.
    """
    c = np.asarray(coords, dtype=complex)
    chart = Chart(chart)
    if chart is Chart.BETA:
        return np.array([np.cos(c), np.sin(c), 1j * np.ones_like(c)])
    c2 = c * c
    if chart is Chart.TAU_PLUS:
        return np.array([(1 + c2) / 2, 0.5j * (1 - c2), 1j * c])
    return np.array([(1 + c2) / 2, -0.5j * (1 - c2), 1j * c])


def plane_wave_at_ref(spec: PlaneWaveSpec) -> complex:
    """Value at x = x_ref: exp(-i pi e / 2) with e the exponent."""
    return complex(np.exp(-0.5j * math.pi * spec.exponent))


def ratio(spec: PlaneWaveSpec, x, eta: np.ndarray) -> np.ndarray:
    """(x . eta)/(x_ref . eta) for eta of shape (3,) or (3, N)."""
    xv = _point_vector(x)
    eta = np.asarray(eta, dtype=complex)
    num = np.tensordot(xv, eta, axes=(0, 0))
    den = np.tensordot(spec.ref_vector, eta, axes=(0, 0))
    scale = np.sqrt(np.sum(np.abs(eta) ** 2, axis=0))
    if np.any(np.abs(num) < SINGULAR_GUARD * scale):
        raise SingularPoint("x . eta vanishes: x lies on the singular set of the wave")
    if np.any(np.abs(den) < SINGULAR_GUARD * scale):
        raise SingularPoint("x_ref . eta vanishes: p is a singular point of the reference")
    return num / den


def evaluate(spec: PlaneWaveSpec, x, p: XiPoint | complex | np.ndarray) -> complex | np.ndarray:
    """Principal-branch plane wave at x for the Xi point(s) p.

    ``p`` is an :class:`XiPoint` or a beta-chart coordinate (scalar or
    array).  ``x`` is a :class:`SpherePoint` or a complex point of the
    sphere.
    """
    if isinstance(p, XiPoint):
        eta = eta_array(p.chart, np.asarray(p.coordinate))
    else:
        eta = eta_array(Chart.BETA, np.asarray(p))
    r = ratio(spec, x, eta)
    out = np.exp(spec.exponent * np.log(-1j * r))
    return complex(out) if np.ndim(out) == 0 else out


def _value_from_phase(spec: PlaneWaveSpec, r: np.ndarray, phase: np.ndarray) -> np.ndarray:
    # (-i r)^e on the sheet where arg r = phase
    return np.exp(spec.exponent * (np.log(np.abs(r)) + 1j * (phase - math.pi / 2.0)))


def _unwrap_segment(spec, x, chart, seg, t0, t1, r0, r1, depth=0) -> float:
    """Phase increment of the ratio between parameters t0 and t1."""
    step = float(np.angle(r1 / r0))
    if abs(step) < PHASE_STEP_LIMIT:
        return step
    if depth >= MAX_BISECTIONS:
        raise StepTooLarge(f"phase step {step:.3f} rad persists after {depth} bisections")
    tm = 0.5 * (t0 + t1)
    rm = complex(ratio(spec, x, eta_array(chart, seg.point(np.array([tm]))))[0])
    return (_unwrap_segment(spec, x, chart, seg, t0, tm, r0, rm, depth + 1)
            + _unwrap_segment(spec, x, chart, seg, tm, t1, rm, r1, depth + 1))


def evaluate_tracked(spec: PlaneWaveSpec, x, path: Contour, state: BranchState | None = None,
                     n_samples: int = 256) -> np.ndarray:
    """Plane-wave values along ``path`` with the phase carried continuously.

    The path is sampled at ``n_samples`` points per segment (segment ends
    shared).  Consecutive samples whose phase differs by more than pi/2 are
    bisected, up to 20 levels.  ``state`` is updated in place, so several
    calls can continue one another.

    Raises
    ------
    StepTooLarge
        The phase jump could not be resolved by bisection (the path passes
        too close to a singular point).
    """
    state = state if state is not None else BranchState()
    t = np.linspace(0.0, 1.0, n_samples)
    out = []
    for k, seg in enumerate(path.segments):
        r = ratio(spec, x, eta_array(path.chart, seg.point(t)))
        phases = np.empty(len(t))
        if state.last_argument is None:
            phase = float(np.angle(r[0]))
        else:
            phase = state.accumulated_phase + float(np.angle(r[0] / state.last_argument))
        phases[0] = phase
        for i in range(1, len(t)):
            phase += _unwrap_segment(spec, x, path.chart, seg, t[i - 1], t[i], r[i - 1], r[i])
            phases[i] = phase
        state.accumulated_phase = phase
        state.last_argument = complex(r[-1])
        vals = _value_from_phase(spec, r, phases)
        out.append(vals if k == 0 else vals[1:])
    return np.concatenate(out)


def monodromy_factor(spec: PlaneWaveSpec, x, loop: Contour, n_samples: int = 256) -> complex:
    """Ratio last/first of the tracked values around a closed loop."""
    vals = evaluate_tracked(spec, x, loop, BranchState(), n_samples)
    return complex(vals[-1] / vals[0])


def continue_along(exponent: complex, x_ref, x_path, points: np.ndarray,
                   chart: Chart = Chart.BETA, n_min: int = 64, n_max: int = 1 << 14
                   ) -> np.ndarray:
    """Plane-wave values at the end of an observation-point path.

    Computes (-i (x . eta)/(x_ref . eta))^exponent at x = ``x_path(1)``
    on the sheet reached continuously from x_ref.  ``x_path(s)`` for s in
    [0, 1] returns points of the (complex) sphere with shape (3, len(s)) and
    must start at x_ref.  The phase is unwrapped along s for every Xi point
    in ``points`` (coordinates in ``chart``) at once; the s grid is doubled
    until no step exceeds pi/2.
    """
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    eta = eta_array(chart, points)
    ref = _point_vector(x_ref)
    den = np.tensordot(ref, eta, axes=(0, 0))
    scale = np.sqrt(np.sum(np.abs(eta) ** 2, axis=0))
    if np.any(np.abs(den) < SINGULAR_GUARD * scale):
        raise SingularPoint("x_ref . eta vanishes on the requested points")
    n = n_min
    while True:
        s = np.linspace(0.0, 1.0, n)
        xs = np.asarray(x_path(s), dtype=complex)
        r = np.tensordot(xs.T, eta, axes=(1, 0)) / den[None, :]
        if np.any(np.abs(r) < SINGULAR_GUARD * scale / np.abs(den)):
            raise SingularPoint("the observation path crosses a singular point")
        steps = np.angle(r[1:] / r[:-1])
        if np.max(np.abs(steps)) < PHASE_STEP_LIMIT:
            break
        n *= 2
        if n > n_max:
            raise StepTooLarge("phase continuation along the observation path failed")
    phase = np.angle(r[0]) + steps.sum(axis=0)
    return np.exp(exponent * (np.log(np.abs(r[-1])) + 1j * (phase - math.pi / 2.0)))


def meridian_path(x_start: np.ndarray, x_end: np.ndarray):
    """Great-circle arc from ``x_start`` to ``x_end`` (not antipodal)."""
    a = np.asarray(x_start, dtype=float)
    b = np.asarray(x_end, dtype=float)
    omega = math.acos(max(-1.0, min(1.0, float(a @ b))))
    if omega < 1e-15:
        return lambda s: np.repeat(a[:, None], len(np.atleast_1d(s)), axis=1)
    if 1.0 + float(a @ b) < 1e-14:
        raise ValueError("antipodal endpoints do not fix a unique arc")

    def path(s):
        s = np.atleast_1d(s)
        w0 = np.sin((1 - s) * omega) / math.sin(omega)
        w1 = np.sin(s * omega) / math.sin(omega)
        return a[:, None] * w0 + b[:, None] * w1

    return path


def local_branch(spec: PlaneWaveSpec, anchor, p: XiPoint | complex):
    """Plane wave near ``anchor`` on the sheet of the principal value there.

    Returns a function of a (complex) sphere point that continues the
    principal value at ``anchor`` without crossing the principal cut, which
    is what finite-difference stencils around complex points need.
    """
    if isinstance(p, XiPoint):
        eta = eta_array(p.chart, np.asarray(p.coordinate))
    else:
        eta = eta_array(Chart.BETA, np.asarray(p))
    c0 = -1j * complex(ratio(spec, anchor, eta))
    log_c0 = np.log(c0)

    def field(z) -> complex:
        c = -1j * complex(ratio(spec, z, eta))
        return complex(np.exp(spec.exponent * (log_c0 + np.log(c / c0))))

    return field
