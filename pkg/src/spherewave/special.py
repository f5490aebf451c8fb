"""
Special functions: gamma, digamma, Legendre P of complex degree, Bessel J0/Y0.

The Legendre function P_lam(q) is available three ways:

* ``legendre_p_series``: hypergeometric sum around q = 1; past the midpoint
  q = 0 it switches to the logarithmic expansion around q = -1, because the
  parameter combination c - a - b is zero there and the plain sum would need
  thousands of terms as q -> -1.
* ``legendre_p_integral``: the trigonometric integral on (0, 1], evaluated
  with the adaptive quadrature of :mod:`spherewave.contours`.
* ``legendre_p_infinity``: the pair of inverse-power series valid for |z| > 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoConvergence, PoleError, PreconditionViolation

EULER_GAMMA = 0.57721566490153286060651209008240243
INTEGER_GUARD = 1e-6

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


@dataclass(frozen=True)
class Degree:
    """Complex degree lam, kept away from the resonant integers.

    ``guard=False`` lifts the integer exclusion; tests use it to compare
    with Legendre polynomials.
    """

    value: complex
    guard: bool = True

    def __post_init__(self):
        v = complex(self.value)
        object.__setattr__(self, "value", v)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise PreconditionViolation("degree must be finite")
        if self.guard and abs(v - round(v.real)) < INTEGER_GUARD:
            raise PreconditionViolation(
                f"degree {v} is within {INTEGER_GUARD} of an integer (resonant)")

    def __complex__(self) -> complex:
        return self.value

    @property
    def mirror(self) -> "Degree":
        """The partner degree -1 - lam."""
        return Degree(-1.0 - self.value, self.guard)


def degree_value(lam, guard: bool = True) -> complex:
    """Plain complex value of ``lam`` (a number or a :class:`Degree`)."""
    if isinstance(lam, Degree):
        return lam.value
    return Degree(lam, guard).value


@dataclass(frozen=True)
class SeriesControl:
    rel_tol: float = 1e-12
    max_terms: int = 500

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


# ---------------------------------------------------------------------------
# Gamma and digamma
# ---------------------------------------------------------------------------

def _near_nonpositive_integer(z: complex, tol: float = 1e-12) -> bool:
    return z.real < 0.5 and abs(z - round(z.real)) < tol and round(z.real) <= 0


def gamma(z: complex) -> complex:
    """Gamma function by the Lanczos approximation (g = 7, 9 terms).

    The reflection formula covers Re z < 1/2.  Relative accuracy is about
    1e-15 near the real axis and better than 1e-12 for |z| <= 20.
    """
    z = complex(z)
    if _near_nonpositive_integer(z):
        raise PoleError(f"gamma has a pole at z = {z}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * gamma(1.0 - z))
    z -= 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * cmath.exp((z + 0.5) * cmath.log(t) - t) * acc


_BERNOULLI_OVER_2K = (1 / 12, -1 / 120, 1 / 252, -1 / 240, 1 / 132, -691 / 32760, 1 / 12)


def digamma(z: complex) -> complex:
    """Logarithmic derivative of gamma (reflection, recurrence, asymptotics)."""
    z = complex(z)
    if _near_nonpositive_integer(z):
        raise PoleError(f"digamma has a pole at z = {z}")
    if z.real < 0.5:
        return digamma(1.0 - z) - math.pi / cmath.tan(math.pi * z)
    acc = 0j
    while abs(z) < 15.0:
        acc -= 1.0 / z
        z += 1.0
    inv2 = 1.0 / (z * z)
    tail = 0j
    p = inv2
    for c in _BERNOULLI_OVER_2K:
        tail += c * p
        p *= inv2
    return acc + cmath.log(z) - 0.5 / z - tail


# ---------------------------------------------------------------------------
# Legendre P
# ---------------------------------------------------------------------------

def _sum_until_small(terms, ctrl: SeriesControl, where: str) -> complex:
    """Sum a term generator until two consecutive terms are negligible."""
    total = 0j
    quiet = 0
    for n, t in enumerate(terms):
        if n >= ctrl.max_terms:
            raise NoConvergence(f"{where}: max_terms={ctrl.max_terms} reached")
        total += t
        if t == 0 or abs(t) <= ctrl.rel_tol * abs(total) * 1e-2:
            quiet += 1
            if quiet >= 2 or t == 0:
                return total
        else:
            quiet = 0
    return total


def _hyp_terms(lam: complex, z: complex):
    """Terms of 2F1(-lam, lam + 1; 1; z)."""
    a, b = -lam, lam + 1.0
    t = 1.0 + 0j
    n = 0
    while True:
        yield t
        t *= (a + n) * (b + n) / ((n + 1.0) ** 2) * z
        n += 1


def _log_terms(lam: complex, w: complex):
    """Terms of the expansion of 2F1(-lam, lam + 1; 1; 1 - w) around w = 0.

    For c = a + b the function is
    -(sin(pi lam)/pi) * sum (a)_n (b)_n/(n!)^2 w^n
                          [2 psi(n+1) - psi(a+n) - psi(b+n) - log w].
    The prefactor is applied by the caller.
    """
    a, b = -lam, lam + 1.0
    log_w = cmath.log(w)
    psi_one = -EULER_GAMMA
    psi_a = digamma(a)
    psi_b = digamma(b)
    coef = 1.0 + 0j
    n = 0
    while True:
        yield coef * (2.0 * psi_one - psi_a - psi_b - log_w)
        coef *= (a + n) * (b + n) / ((n + 1.0) ** 2) * w
        psi_one += 1.0 / (n + 1.0)
        psi_a += 1.0 / (a + n)
        psi_b += 1.0 / (b + n)
        n += 1


def legendre_p_series(lam, q: complex, ctrl: SeriesControl | None = None,
                      guard: bool = True) -> complex:
    """P_lam(q) from its hypergeometric representation.

    Parameters
    ----------
    lam
        Degree (complex or :class:`Degree`).
    q
        Argument with -1 < q <= 1; complex q with |1 - q| < 2 or |1 + q| < 2
        is accepted as well (principal branch, cut along q <= -1).
    ctrl
        Series truncation control.
    guard
        Enforce the resonant-integer exclusion on ``lam``.
    """
    ctrl = ctrl or SeriesControl()
    lam = degree_value(lam, guard)
    q = complex(q)
    z = (1.0 - q) / 2.0
    w = (1.0 + q) / 2.0
    if abs(q.imag) < 1e-300 and not (-1.0 < q.real <= 1.0):
        raise DomainError(f"q = {q.real} outside (-1, 1]")
    if abs(z) <= abs(w) or abs(w) >= 1.0:
        if abs(z) >= 1.0:
            raise DomainError(f"q = {q} outside the convergence region")
        return _sum_until_small(_hyp_terms(lam, z), ctrl, "legendre_p_series")
    if abs(w) == 0.0:
        raise DomainError("q = -1 is a logarithmic singularity")
    if abs(lam - round(lam.real)) < 1e-14:
        # P_n is a polynomial; the terminating sum is exact at any q
        return _sum_until_small(_hyp_terms(lam, z), ctrl, "legendre_p_series")
    s = _sum_until_small(_log_terms(lam, w), ctrl, "legendre_p_series (log form)")
    return -cmath.sin(math.pi * lam) / math.pi * s


def legendre_p_integral(lam, q: float, rel_tol: float = 1e-12, guard: bool = True
                        ) -> complex:
    """P_lam(q) = (1/2pi) * integral over [-pi, pi] of (q + i sqrt(1-q^2) cos a)^lam.

    Valid for 0 < q <= 1, where the base stays in the right half-plane and
    the principal power is continuous.
    """
    from .contours import QuadratureControl, build_gamma, integrate

    lam = degree_value(lam, guard)
    q = float(q)
    if not 0.0 < q <= 1.0:
        raise DomainError(f"q = {q} outside (0, 1]")
    s = math.sqrt(max(0.0, 1.0 - q * q))

    def f(alpha):
        return np.exp(lam * np.log(q + 1j * s * np.cos(alpha.real)))

    ctrl = QuadratureControl(rel_tol=rel_tol)
    return integrate(f, build_gamma(1), ctrl) / (2.0 * math.pi)


def _half_integer_hit(lam: complex, tol: float = 1e-12) -> bool:
    return abs((lam - 0.5) - round((lam - 0.5).real)) < tol


def infinity_amplitude(lam: complex) -> complex:
    """A(lam) = 2^(-lam-1) Gamma(-1/2 - lam) / (sqrt(pi) Gamma(-lam))."""
    return (2.0 ** (-lam - 1.0) * gamma(-0.5 - lam)
            / (math.sqrt(math.pi) * gamma(-lam)))


def infinity_coefficients(lam: complex, n_terms: int) -> np.ndarray:
    """a_n(lam) for n < n_terms, from the ratio
    a_{n+1}/a_n = (2n + lam + 1)(2n + lam + 2) / (4 (n + lam + 3/2)(n + 1))."""
    a = np.empty(n_terms, dtype=complex)
    a[0] = 1.0
    for n in range(n_terms - 1):
        a[n + 1] = (a[n] * (2 * n + lam + 1.0) * (2 * n + lam + 2.0)
                    / (4.0 * (n + lam + 1.5) * (n + 1.0)))
    return a


def legendre_p_infinity(lam, z: complex, ctrl: SeriesControl | None = None,
                        guard: bool = True) -> complex:
    """P_lam(z) for |z| > 1 from the two inverse-power series.

    P = A(lam) z^(-lam-1) sum a_n(lam) z^(-2n)
        + A(-lam-1) z^lam sum a_n(-lam-1) z^(-2n),   principal powers.

    Raises
    ------
    DomainError
        |z| <= 1 + 1e-6 or z on the cut (-inf, 0].
    PoleError
        Half-integer lam, where the gamma factors of A(lam) or A(-lam-1)
        are singular.
    """
    ctrl = ctrl or SeriesControl()
    lam = degree_value(lam, guard)
    z = complex(z)
    if abs(z) <= 1.0 + 1e-6:
        raise DomainError(f"|z| = {abs(z)} is not > 1")
    if z.imag == 0.0 and z.real <= 0.0:
        raise DomainError("z lies on the cut (-inf, 0]")
    if _half_integer_hit(lam):
        which = "A(lambda)" if lam.real > -0.5 + 1e-9 else "A(-lambda-1)"
        if abs(lam + 0.5) < 1e-12:
            which = "A(lambda) and A(-lambda-1)"
        raise PoleError(f"{which} has a gamma pole at half-integer lambda = {lam}")
    inv2 = 1.0 / (z * z)

    def series(mu: complex):
        def terms():
            a = 1.0 + 0j
            p = 1.0 + 0j
            n = 0
            while True:
                yield a * p
                a *= (2 * n + mu + 1.0) * (2 * n + mu + 2.0) / (4.0 * (n + mu + 1.5) * (n + 1.0))
                p *= inv2
                n += 1
        return _sum_until_small(terms(), ctrl, "legendre_p_infinity")

    mu = -lam - 1.0
    log_z = cmath.log(z)
    first = infinity_amplitude(lam) * cmath.exp(-(lam + 1.0) * log_z) * series(lam)
    second = infinity_amplitude(mu) * cmath.exp(lam * log_z) * series(mu)
    return first + second


# ---------------------------------------------------------------------------
# Bessel functions of order zero (real argument)
# ---------------------------------------------------------------------------

_SERIES_LIMIT = 12.0
_BESSEL_MAX = 30.0


def _check_bessel_arg(x: float, allow_zero: bool) -> float:
    x = float(x)
    lo_ok = x >= 0.0 if allow_zero else x > 0.0
    if not (lo_ok and x <= _BESSEL_MAX):
        raise DomainError(f"x = {x} outside the supported range (0, {_BESSEL_MAX}]")
    return x


def _series_j0_y0(x: float) -> tuple[float, float, float, float]:
    """J0, Y0 and their derivatives from the ascending series (x <= 12)."""
    u = 0.25 * x * x
    j = 0.0
    dj = 0.0
    sy = 0.0
    dsy = 0.0
    term = 1.0          # u^k / (k!)^2
    harmonic = 0.0
    k = 0
    while True:
        sign = -1.0 if k % 2 else 1.0
        j += sign * term
        if k > 0:
            # d/dx u^k = k u^(k-1) x/2
            dterm = term * k / u * 0.5 * x
            dj += sign * dterm
            sy += -sign * harmonic * term
            dsy += -sign * harmonic * dterm
        k += 1
        term *= u / (k * k)
        harmonic += 1.0 / k
        if term < 1e-18 * max(1.0, abs(j)) and k > 4:
            break
    ell = math.log(0.5 * x) + EULER_GAMMA
    y = (2.0 / math.pi) * (ell * j + sy)
    dy = (2.0 / math.pi) * (j / x + ell * dj + dsy)
    return j, y, dj, dy


def _hankel_asymptotic(nu: int, x: float) -> complex:
    """H^(1)_nu(x) from its large-argument expansion (nu = 0 or 1)."""
    mu = 4.0 * nu * nu
    total = 0j
    a = 1.0
    prev = math.inf
    k = 0
    while True:
        t = a * (1j ** k) / x ** k
        if abs(t) > prev or abs(t) < 1e-17:
            break
        total += t
        prev = abs(t)
        k += 1
        a *= (mu - (2 * k - 1) ** 2) / (k * 8.0)
    phase = x - nu * math.pi / 2.0 - math.pi / 4.0
    return math.sqrt(2.0 / (math.pi * x)) * cmath.exp(1j * phase) * total


def _j0_y0_all(x: float) -> tuple[float, float, float, float]:
    if x <= _SERIES_LIMIT:
        return _series_j0_y0(x)
    h0 = _hankel_asymptotic(0, x)
    h1 = _hankel_asymptotic(1, x)
    return h0.real, h0.imag, -h1.real, -h1.imag


def bessel_j0(x: float) -> float:
    """J0(x) for 0 <= x <= 30."""
    x = _check_bessel_arg(x, allow_zero=True)
    if x == 0.0:
        return 1.0
    return _j0_y0_all(x)[0]


def bessel_y0(x: float) -> float:
    """Y0(x) for 0 < x <= 30."""
    return _j0_y0_all(_check_bessel_arg(x, allow_zero=False))[1]


def bessel_j0_prime(x: float) -> float:
    x = _check_bessel_arg(x, allow_zero=True)
    if x == 0.0:
        return 0.0
    return _j0_y0_all(x)[2]


def bessel_y0_prime(x: float) -> float:
    return _j0_y0_all(_check_bessel_arg(x, allow_zero=False))[3]


def hankel_h0_1(x: float) -> complex:
    """H0^(1)(x) = J0(x) + i Y0(x) for 0 < x <= 30."""
    j, y, _, _ = _j0_y0_all(_check_bessel_arg(x, allow_zero=False))
    return complex(j, y)
