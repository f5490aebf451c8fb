"""Plane-wave representations for the Laplace-Beltrami equation on the sphere."""

from .contours import Contour, QuadratureControl, build_gamma, integrate
from .geometry import NORTH_POLE, SOUTH_POLE, Chart, SpherePoint, XiPoint
from .green import (GreenProblem, green_closed, green_pw, green_pw_general, green_pw_w1,
                    membership, select_domain)
from .planar import PlanarProblem, planar_closed, planar_pw
from .planewaves import PlaneWaveSpec, evaluate, monodromy_factor
from .special import Degree, legendre_p_infinity, legendre_p_integral, legendre_p_series

__all__ = [
    "Chart", "Contour", "Degree", "GreenProblem", "NORTH_POLE", "PlanarProblem",
    "PlaneWaveSpec", "QuadratureControl", "SOUTH_POLE", "SpherePoint", "XiPoint",
    "build_gamma", "evaluate", "green_closed", "green_pw", "green_pw_general", "green_pw_w1",
    "integrate", "legendre_p_infinity", "legendre_p_integral", "legendre_p_series",
    "membership", "monodromy_factor", "planar_closed", "planar_pw", "select_domain",
]
