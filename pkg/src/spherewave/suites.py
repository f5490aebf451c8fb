"""
Seeded self-check suites behind ``spherewave verify``.

Each suite computes one worst-case residual and compares it with its
default tolerance (or the caller's override).  The checks are small
versions of the test-suite properties, sized to run in a few seconds.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .characteristics import phi_beta, phi_tau_plus, psi_xyz
from .contours import Contour, build_gamma, circle_segment, dbeta_coefficient, residue_probe
from .geometry import Chart, SpherePoint, XiPoint, eta_of_beta, rotation_taking, xi_convert
from .green import GreenProblem, green_closed, green_pw, green_pw_general, membership, pullback_pair
from .planar import PlanarProblem, planar_closed, planar_pw
from .planewaves import PlaneWaveSpec, local_branch, monodromy_factor
from .special import (
    bessel_j0,
    bessel_j0_prime,
    bessel_y0,
    bessel_y0_prime,
    legendre_p_integral,
    legendre_p_series,
)
from .verification import StencilControl, convergence_ratio, lbo_residual

LAMBDAS = (0.5, -0.7 + 0.5j, 1.4 - 0.5j, 0.3 + 0.2j)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    max_residual: float
    tolerance: float
    seconds: float

    def as_dict(self, timing: bool = False) -> dict:
        d = {"suite": self.name, "passed": self.passed,
             "max_residual": self.max_residual, "tolerance": self.tolerance}
        if timing:
            d["seconds"] = self.seconds
        return d


def _random_points(rng, n, theta_lo=0.0, theta_hi=math.pi):
    c = rng.uniform(math.cos(theta_hi), math.cos(theta_lo), n)
    return [SpherePoint(math.acos(ci), p) for ci, p in zip(c, rng.uniform(0, 2 * math.pi, n))]


def _geometry(rng) -> float:
    beta = rng.uniform(0, 2 * math.pi, 200) + 1j * rng.uniform(-3, 3, 200)
    eta = eta_of_beta(beta)
    worst = float(np.abs(np.sum(eta * eta, axis=0)).max())
    for b in beta[:50]:
        p = XiPoint.beta(b)
        back = xi_convert(xi_convert(p, Chart.TAU_PLUS), Chart.BETA)
        d = back.coordinate - p.coordinate
        worst = max(worst, abs(complex((d.real + math.pi) % (2 * math.pi) - math.pi, d.imag)))
    for a, b in zip(_random_points(rng, 20), _random_points(rng, 20)):
        r = rotation_taking(a, b).matrix
        worst = max(worst, float(np.abs(r @ r.T - np.eye(3)).max()),
                    abs(np.linalg.det(r) - 1.0), float(np.abs(r @ a.xyz - b.xyz).max()))
    return worst


def _characteristics(rng) -> float:
    pts = np.array([p.xyz for p in _random_points(rng, 500, 1e-3, math.pi - 1e-3)]).T
    worst = 0.0
    for sign in (1, -1):
        back = psi_xyz(phi_beta(pts, sign), sign)
        worst = max(worst, float(np.abs(back - pts).max()))
    pair = np.abs(phi_tau_plus(-pts, 1) - phi_tau_plus(pts, -1))
    return max(worst, float(pair.max()))


def _special(rng) -> float:
    worst = 0.0
    for lam in LAMBDAS:
        for q in (0.06, 0.4, 0.9):
            s = legendre_p_series(lam, q)
            worst = max(worst, abs(legendre_p_integral(lam, q) - s) / (1 + abs(s)),
                        abs(legendre_p_series(-1 - lam, q) - s) / (1 + abs(s)))
    for x in (0.5, 2.0, 11.0, 20.0):
        w = bessel_j0(x) * bessel_y0_prime(x) - bessel_j0_prime(x) * bessel_y0(x)
        worst = max(worst, abs(w - 2 / (math.pi * x)))
    return worst


def _contours(rng) -> float:
    r1 = residue_probe(dbeta_coefficient(Chart.TAU_MINUS), XiPoint(Chart.TAU_MINUS, 0), 0.5)
    r2 = residue_probe(dbeta_coefficient(Chart.TAU_PLUS), XiPoint(Chart.TAU_PLUS, 0), 0.5)
    worst = max(abs(r1 - 1j), abs(r2 + 1j))
    g2 = build_gamma(2, 0.1)
    for sign in (1, -1):
        x = psi_xyz(g2.sample(512), sign)
        worst = max(worst, float(np.abs(np.array([1.0, 0.0, -0.1]) @ x).max()))
    return worst


def _plane_waves(rng) -> float:
    worst = 0.0
    x = SpherePoint(2.0, 0.7)
    bp = complex(phi_beta(x.xyz, 1))
    loop = Contour([circle_segment(bp, 0.05)], closed_on_xi=True)
    for lam in LAMBDAS:
        f2 = monodromy_factor(PlaneWaveSpec("w2", lam), x, loop)
        f1 = monodromy_factor(PlaneWaveSpec("w1", lam), x, loop)
        worst = max(worst, abs(f2 - np.exp(2j * math.pi * lam)),
                    abs(f1 - np.exp(-2j * math.pi * (1 + lam))))
    return worst


def _green(rng) -> float:
    worst = 0.0
    for lam in LAMBDAS:
        prob = GreenProblem(lam)
        for x in _random_points(rng, 5, math.pi / 2 + 0.05, math.pi):
            c = green_closed(prob, x)
            worst = max(worst, abs(green_pw(prob, x, 1) - c) / (1 + abs(c)))
        for x in _random_points(rng, 5, 0.3, math.pi):
            ms = sorted(membership(x))
            vals = [green_pw(prob, x, m) for m in ms]
            c = green_closed(prob, x)
            worst = max([worst] + [abs(v - c) / (1 + abs(c)) for v in vals])
    lam = 0.3 + 0.2j
    for x, x0 in zip(_random_points(rng, 5), _random_points(rng, 5)):
        if math.acos(np.clip(x.xyz @ x0.xyz, -1, 1)) < 0.3:
            continue
        a = green_pw_general(GreenProblem(lam, x0), x)
        b = green_pw_general(GreenProblem(lam, x), x0)
        worst = max(worst, abs(a - b) / (1 + abs(a)))
    i1, i2 = pullback_pair(lam, SpherePoint(2.2, 0.4))
    return max(worst, abs(i1 - i2) / (1 + abs(i1)))


def _planar(rng) -> float:
    worst = 0.0
    for m in (1, 2, 3, 4):
        centre = (m - 1) * math.pi / 2
        for _ in range(4):
            r = rng.uniform(0.5, 5.0)
            a = centre + rng.uniform(-1.3, 1.3)
            p = PlanarProblem(1.0, r * math.cos(a), r * math.sin(a))
            c = planar_closed(p)
            for n in p.domains():
                worst = max(worst, abs(planar_pw(p, n) - c) / abs(c))
    return worst


def _verification(rng) -> float:
    worst = 0.0
    lam = 0.3 + 0.2j
    spec = PlaneWaveSpec("w2", lam)
    for x in _random_points(rng, 5, 0.5, math.pi - 0.5):
        beta = complex(rng.uniform(0, 2 * math.pi), rng.uniform(-1, 1))
        field = local_branch(spec, x.xyz, beta)

        def f(t, p, field=field):
            return field(np.array([math.sin(t) * math.cos(p), math.sin(t) * math.sin(p),
                                   math.cos(t)]))

        ratio = convergence_ratio(lambda c: lbo_residual(f, x, lam, c), StencilControl(4e-3))
        worst = max(worst, abs(ratio - 4.0))
    return worst


# (function, default tolerance)
SUITES: dict[str, tuple[Callable, float]] = {
    "geometry": (_geometry, 1e-12),
    "characteristics": (_characteristics, 1e-10),
    "special": (_special, 1e-10),
    "contours": (_contours, 1e-8),
    "plane_waves": (_plane_waves, 1e-8),
    "green": (_green, 1e-8),
    "planar": (_planar, 1e-6),
    "verification": (_verification, 0.4),
}


def run_suite(name: str, seed: int = 42, tol: float | None = None) -> SuiteResult:
    fn, default_tol = SUITES[name]
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    residual = float(fn(rng))
    seconds = time.perf_counter() - t0
    tolerance = default_tol if tol is None else tol
    return SuiteResult(name, bool(residual <= tolerance), residual, tolerance, seconds)
