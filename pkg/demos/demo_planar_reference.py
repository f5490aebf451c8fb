"""
The flat-space analogue
=======================

In the plane the outgoing point source -(i/4) H0(kr) has the classical
representation as a superposition of plane waves exp(i k y.(cos psi,
sin psi)) along a contour with two vertical legs.  The same sliding idea
applies: four shifted contours, one per half-plane, agree where the
half-planes overlap.
"""

from __future__ import annotations

import math

from spherewave.planar import PlanarProblem, planar_closed, planar_pw, tail_height

# %%
# One point in the first quadrant belongs to half-planes 1 and 2.
p = PlanarProblem(1.0, 0.6, 0.8)
print("Hankel form:", planar_closed(p))
for m in sorted(p.domains()):
    print(f"contour {m}:  ", planar_pw(p, m))

# %%
# The vertical legs decay like exp(-k d sinh s), with d the distance to
# the half-plane edge.  Close to the edge they must be much taller.
for d in (1.0, 0.1, 0.01, 0.001):
    print(f"d = {d:<6} leg height {tail_height(1.0, d, 1e-10):.2f}")

# %%
# Around a circle of radius 3 each admissible contour reproduces the field.
worst = 0.0
for i in range(16):
    a = 2 * math.pi * (i + 0.5) / 16
    p = PlanarProblem(1.0, 3 * math.cos(a), 3 * math.sin(a))
    c = planar_closed(p)
    for m in p.domains():
        worst = max(worst, abs(planar_pw(p, m) - c) / abs(c))
print(f"worst relative error on the circle: {worst:.2e}")
