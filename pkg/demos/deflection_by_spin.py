"""Spin turns a rolling disk the way charge turns a particle.

Three disks leave the same point of a sphere with the same velocity, spinning
backward, not at all, and forward.  The spinless one runs a great circle;
the spinning ones bend to either side with turning rate L K / (m v).  On a
cylinder the same spin does nothing, because K = 0.
"""

import math

import numpy as np

from gyrosurf import charts, models
from gyrosurf.integrators import IntegratorSettings, integrate

sphere = charts.sphere(1.0)
y0 = np.array([math.pi / 2, 0.0, 0.0, 1.0])
settings = IntegratorSettings(dt=1e-3, n_steps=3000, sample_every=100)

print("unit sphere, launch along the equator at unit speed, m = 1:")
print("  L     final x1   final x2   measured k_geo   L K / (m v)")
for L in (-0.5, 0.0, 0.5):
    traj = integrate(models.MagneticModel(sphere, 1.0, L), y0, settings)
    k = traj.monitors["k_geo"][-1]
    print("  %+.1f  %9.5f  %9.5f  %+14.9f  %+12.9f"
          % (L, traj.column("x1")[-1], traj.column("x2")[-1], k, L))

print()
print("cylinder, same experiment:")
cyl = charts.cylinder(1.0, half_length=20.0)
y0 = np.array([0.0, 0.0, 0.3, 1.0])
free = integrate(models.GeodesicModel(cyl, 1.0, None), y0, settings)
for L in (-0.5, 0.5):
    traj = integrate(models.MagneticModel(cyl, 1.0, L), y0, settings)
    gap = np.max(np.abs(traj.states - free.states))
    print("  L = %+.1f deviates from the free path by %.2e" % (L, gap))
