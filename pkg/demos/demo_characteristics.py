"""
Characteristic lines and the sphere at infinity
===============================================

Every point of the real sphere lies on two complex lines that stay inside
the complex sphere.  Each line has a null direction, and null directions
up to scale form the sphere at infinity Xi.  This script walks through
that geometry and the branching of the plane waves built on it.
"""

from __future__ import annotations

import math

import numpy as np

from spherewave.characteristics import characteristic_directions, phi_map, psi_map
from spherewave.contours import Contour, circle_segment
from spherewave.geometry import SpherePoint, dot
from spherewave.planewaves import PlaneWaveSpec, evaluate, monodromy_factor

# %%
# The two null directions at a point are orthogonal to the position vector
# and square to zero under the bilinear dot product.
x = SpherePoint(2.0, 0.7)
pair = characteristic_directions(x.theta, x.phi)
for sign in (1, -1):
    eta = pair.eta(sign)
    print(f"sign {sign:+d}: eta.eta = {abs(dot(eta, eta)):.1e}, "
          f"x.eta = {abs(dot(pair.base, eta)):.1e}")

# %%
# Phi sends x to the Xi-points of its two lines; Psi undoes it.
for sign in (1, -1):
    p = phi_map(x, sign)
    back = psi_map(p, sign)
    print(f"Phi{'+' if sign > 0 else '-'}(x) = beta {p.coordinate:.6f}; "
          f"Psi returns theta={back.theta:.12f}, phi={back.phi:.12f}")

# %%
# The antipode swaps the two maps.
minus_x = SpherePoint(math.pi - x.theta, x.phi + math.pi)
print("Phi+(-x) equals Phi-(x):", phi_map(minus_x, 1).same_point(phi_map(x, -1), 1e-12))

# %%
# A plane wave of degree lambda vanishes or blows up at Phi+(x) and
# Phi-(x) as a function of beta.  Carrying it once around Phi+(x)
# multiplies it by exp(2 pi i lambda).
lam = 0.3 + 0.2j
b = phi_map(x, 1).coordinate
loop = Contour([circle_segment(b, 0.05)], closed_on_xi=True)
factor = monodromy_factor(PlaneWaveSpec("w2", lam), x, loop)
print(f"monodromy {factor:.12f} vs exp(2 pi i lam) {np.exp(2j * math.pi * lam):.12f}")

# %%
# Near the branch point the modulus follows the exponent: slope Re(lambda).
rho = np.logspace(-2, -6, 5)
vals = evaluate(PlaneWaveSpec("w2", lam), x, b + rho)
slope = np.polyfit(np.log(rho), np.log(np.abs(vals)), 1)[0]
print(f"log-log slope {slope:.6f} (Re lambda = {lam.real})")
