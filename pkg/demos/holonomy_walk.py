"""Carrying a vector around closed loops on a sphere.

The angle a parallel-carried vector turns equals the curvature collected
inside the loop.  A latitude at tilt pi/3 on the unit sphere turns it by
exactly pi; Foucault's pendulum is the same walk done by the Earth.
"""

import math

from gyrosurf import charts, verify

sphere = charts.sphere(1.0)

print("latitude loops on the unit sphere (transport = area mod 2 pi):")
print("  tilt      transport    enclosed area    -2 pi cos(tilt)")
for x1 in (0.3, math.pi / 3, math.pi / 2, 2.2):
    res = verify.holonomy_loop(sphere, verify.LatitudeLoop(x1))
    print("  %7.4f  %+10.6f  %+14.6f  %+14.6f"
          % (x1, res.transport, res.area, -2 * math.pi * math.cos(x1)))

res = verify.holonomy_loop(sphere, verify.LatitudeLoop(math.pi / 3))
print()
print("at tilt pi/3 the turn is -pi, i.e. pi mod 2 pi: mismatch %.2e"
      % abs(verify.wrap_angle(res.transport) - math.pi))

print()
print("coordinate rectangles, transport vs area:")
for chart, name, corner in ((sphere, "sphere", (0.7, 0.3)),
                            (charts.torus(2.0, 0.5), "torus", (2.5, 1.0)),
                            (charts.plane(), "plane", (-1.0, -1.0))):
    res = verify.holonomy_loop(chart, verify.RectangleLoop(corner, 0.8, 0.6))
    print("  %-7s transport %+11.8f  area %+11.8f  gap %.1e"
          % (name, res.transport, res.area, res.mismatch))
