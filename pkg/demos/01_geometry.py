"""Proportionate areas on the torus and the sphere.

Two points split the surface into four regions. The smallest region's
share of the total area is the distance-like quantity used for every
angle in the test.
"""

import math

import numpy as np

from angularcp import numeric_surface_area, proportionate_area, region_areas, sphere, square_of_angle, torus

tor = torus(0.5)
sph = sphere()

p1, p2 = (0.0, 0.0), (math.pi / 2, 3 * math.pi / 4)
print("torus regions:", [round(a, 4) for a in region_areas(tor, p1, p2)])
print("sphere regions:", [round(a, 4) for a in region_areas(sph, p1, p2)])

# closed-form fractions agree with direct surface integration
frac = region_areas(tor, (0.0, 0.3), (1.2, 2.0)).a1
quad = numeric_surface_area(tor, (0.0, 1.2), (0.3, 2.0))
print(f"a1 closed form {frac:.10f}  quadrature {quad:.10f}")

# the square of an angle grows like t^2 near zero and peaks at a quarter
t = np.linspace(0, math.pi, 7)
for ti, s in zip(t, square_of_angle(tor, t)):
    print(f"t={ti:5.3f}  torus {s:.4f}")
print("sphere, t=pi/4:", round(float(square_of_angle(sph, math.pi / 4)), 4))
print("proportionate area (0,0)-(pi,pi):", proportionate_area(tor, (0, 0), (math.pi, math.pi)))
