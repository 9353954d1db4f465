"""Gaussian curvature across the built-in surfaces.

Prints the closed-form curvature next to a small-patch estimate obtained by
carrying a vector around the patch boundary, so the two derivations of K
can be compared by eye.
"""

import math

from gyrosurf import charts
from gyrosurf.geometry import gauss_bonnet_patch_K, geometry_jet

SAMPLES = [
    ("plane", charts.plane(), (0.3, -1.2)),
    ("cylinder r=1", charts.cylinder(1.0), (0.5, 2.0)),
    ("sphere R=1", charts.sphere(1.0), (1.0, 0.7)),
    ("sphere R=2", charts.sphere(2.0), (1.0, 0.7)),
    ("torus outer", charts.torus(2.0, 0.5), (0.0, 1.0)),
    ("torus top", charts.torus(2.0, 0.5), (math.pi / 2, 1.0)),
    ("torus inner", charts.torus(2.0, 0.5), (math.pi, 1.0)),
    ("saddle k=1", charts.saddle(1.0), (0.0, 0.0)),
]

print("surface          point              K           patch estimate")
for name, chart, x in SAMPLES:
    K = geometry_jet(chart, x).K
    if chart.orthogonal:
        est = "%+.8f" % gauss_bonnet_patch_K(chart, x, 0.01, 0.01)
    else:
        est = "(needs orthogonal chart)"
    print("%-16s (%6.3f, %6.3f)  %+.8f  %s" % (name, x[0], x[1], K, est))

# the patch is anchored at its corner, so the estimate converges to K at
# the patch center as the square shrinks
print()
print("torus inner equator, shrinking square patches:")
tor = charts.torus(2.0, 0.5)
for s in (0.2, 0.1, 0.05, 0.025):
    est = gauss_bonnet_patch_K(tor, (math.pi, 1.0), s, s)
    center = (math.pi + s / 2, 1.0 + s / 2)
    err = est - geometry_jet(tor, center).K
    print("  side %.3f  estimate %+.8f  error %+.2e" % (s, est, err))
