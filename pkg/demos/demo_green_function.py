"""
The Green's function as a sum of plane waves
============================================

The Green's function of the Laplace-Beltrami operator with a source at the
north pole is a Legendre function of the polar angle.  Integrating plane
waves over a contour on the sphere at infinity reproduces it.  One contour
works in the southern hemisphere; tilted great circles give four more,
and together they cover everything except a small cap around the source.
"""

from __future__ import annotations

import math

import numpy as np

from spherewave.geometry import SpherePoint
from spherewave.green import (GreenProblem, excluded_cap_angle, green_closed, green_pw,
                              green_pw_general, membership, select_domain)

prob = GreenProblem(0.3 + 0.2j)

# %%
# In the southern hemisphere the straight contour (m = 1) is enough.
for theta in (1.8, 2.4, 3.0):
    x = SpherePoint(theta, 0.5)
    closed, pw = green_closed(prob, x), green_pw(prob, x, 1)
    print(f"theta={theta}: closed {closed:.12f}  plane waves {pw:.12f}")

# %%
# A northern point sits in X^(2) but not X^(1).  Where domains overlap,
# all admissible contours give the same value.
x = SpherePoint(1.0, 0.2)
print("domains containing x:", sorted(membership(x)))
for m in sorted(membership(x)):
    print(f"  m={m}: {green_pw(prob, x, m):.14f}")
print(f"  closed form: {green_closed(prob, x):.14f}")

# %%
# Sweep the sphere.  Only the cap theta < 2 delta is left out.
rng = np.random.default_rng(1)
worst, used = 0.0, {}
for _ in range(400):
    x = SpherePoint(math.acos(rng.uniform(-1, math.cos(excluded_cap_angle()))),
                    rng.uniform(0, 2 * math.pi))
    m = select_domain(x.xyz)
    used[m] = used.get(m, 0) + 1
    worst = max(worst, abs(green_pw(prob, x, m) - green_closed(prob, x))
                / abs(green_closed(prob, x)))
print("contour usage:", dict(sorted(used.items())), f"worst relative error {worst:.2e}")

# %%
# Moving the source is a rotation.  The result is symmetric in the two points.
x, x0 = SpherePoint(1.2, 0.3), SpherePoint(2.1, 4.0)
a = green_pw_general(GreenProblem(prob.lam, x0), x)
b = green_pw_general(GreenProblem(prob.lam, x), x0)
print(f"G(x; x0) = {a:.14f}\nG(x0; x) = {b:.14f}")
