"""Model objects: chart, parameters and potential behind one flat interface.

The pure right-hand sides in `dynamics` speak state objects; integrators,
oracles and the CLI want flat float vectors.  Each model class fixes a state
layout, forwards to its right-hand side, and exposes the scalars every
monitor needs (energy, metric speed, axial spin) plus the Lagrangian the
discrete residual oracle differentiates.

State layouts:

* surface models: y = (x1, x2, v1, v2)
* full disk and top: y = (x1, x2, theta, v1, v2, theta_dot)

Positions always come first, so `y[:n_pos]` are the generalized coordinates.
"""

from __future__ import annotations

import math

import numpy as np

from . import dynamics
from .charts import SurfaceChart
from .dynamics import (
    DiskParams,
    FullState,
    ReducedState,
    TopParams,
    top_to_sphere,
)
from .errors import NonOrthogonalChartError
from .geometry import geometry_jet
from .potentials import Potential, none as no_potential


class _SurfaceModel:
    """Shared plumbing for the (x, v) models."""

    columns = ("x1", "x2", "v1", "v2")
    n_pos = 2

    def __init__(self, chart: SurfaceChart, m: float, potential: Potential | None):
        if m <= 0.0:
            raise ValueError("m must be positive")
        self.chart = chart
        self.monitor_chart = chart
        self.m = float(m)
        self.potential = potential if potential is not None else no_potential()

    def pack(self, state: ReducedState) -> np.ndarray:
        return np.concatenate([state.x, state.v])

    def unpack(self, y) -> ReducedState:
        y = np.asarray(y, dtype=float)
        return ReducedState(x=y[0:2], v=y[2:4])

    def position(self, y) -> np.ndarray:
        return np.asarray(y, dtype=float)[0:2]

    def velocity(self, y) -> np.ndarray:
        return np.asarray(y, dtype=float)[2:4]

    def accel_from_rate(self, dy) -> np.ndarray:
        return np.asarray(dy, dtype=float)[2:4]

    def speed(self, y) -> float:
        s = self.unpack(y)
        g = geometry_jet(self.chart, s.x).g
        return math.sqrt(float(s.v @ g @ s.v))

    def omega_a(self, y) -> float:
        return math.nan

    def _kinetic_matrix(self, jet):
        return self.m * jet.g

    def lagrangian(self, q, qdot) -> float:
        """Routhian-reduced Lagrangian; the L f.v term carries the charge."""
        q = np.asarray(q, dtype=float)
        qdot = np.asarray(qdot, dtype=float)
        jet = geometry_jet(self.chart, q)
        value = 0.5 * float(qdot @ self._kinetic_matrix(jet) @ qdot) \
            - self.potential.value(jet.x)
        charge = getattr(self, "L", 0.0)
        if charge != 0.0:
            if jet.f is None:
                raise NonOrthogonalChartError(
                    "charged Lagrangian needs an orthogonal chart"
                )
            value += charge * float(jet.f @ qdot)
        return value


class GeodesicModel(_SurfaceModel):
    name = "geodesic"

    def rhs(self, y) -> np.ndarray:
        dx, dv = dynamics.geodesic_rhs(self.chart, self.m, self.potential,
                                       self.unpack(y))
        return np.concatenate([dx, dv])

    def energy(self, y) -> float:
        return dynamics.magnetic_energy(self.chart, self.m, self.potential,
                                        self.unpack(y))


class MagneticModel(_SurfaceModel):
    name = "magnetic"

    def __init__(self, chart, m, L, potential=None):
        super().__init__(chart, m, potential)
        self.L = float(L)

    def rhs(self, y) -> np.ndarray:
        dx, dv = dynamics.magnetic_geodesic_rhs(self.chart, self.m, self.L,
                                                self.potential, self.unpack(y))
        return np.concatenate([dx, dv])

    def energy(self, y) -> float:
        return dynamics.magnetic_energy(self.chart, self.m, self.potential,
                                        self.unpack(y))


class ReducedDiskModel(_SurfaceModel):
    name = "reduced_disk"

    def __init__(self, chart, m, I_d, L, potential=None,
                 omega_d_form: str = "third_form"):
        super().__init__(chart, m, potential)
        if I_d < 0.0:
            raise ValueError("I_d must be nonnegative")
        self.I_d = float(I_d)
        self.L = float(L)
        self.omega_d_form = omega_d_form

    def rhs(self, y) -> np.ndarray:
        dx, dv = dynamics.reduced_disk_rhs(
            self.chart, self.m, self.I_d, self.L, self.potential,
            self.unpack(y), self.omega_d_form,
        )
        return np.concatenate([dx, dv])

    def energy(self, y) -> float:
        return dynamics.reduced_disk_energy(
            self.chart, self.m, self.I_d, self.potential, self.unpack(y),
            self.omega_d_form,
        )

    def _kinetic_matrix(self, jet):
        mass = self.m * jet.g
        if self.I_d != 0.0:
            mass = mass + self.I_d * dynamics._spin_inertia_matrix(
                self.chart, jet.x, self.omega_d_form
            )
        return mass


class FullDiskModel:
    name = "full_disk"
    columns = ("x1", "x2", "theta", "v1", "v2", "theta_dot")
    n_pos = 3

    def __init__(self, chart: SurfaceChart, disk: DiskParams,
                 potential: Potential | None = None,
                 omega_d_form: str = "third_form"):
        self.chart = chart
        self.monitor_chart = chart
        self.disk = disk
        self.potential = potential if potential is not None else no_potential()
        self.omega_d_form = omega_d_form

    def pack(self, state: FullState) -> np.ndarray:
        return np.concatenate(
            [state.x, [state.theta], state.v, [state.theta_dot]]
        )

    def unpack(self, y) -> FullState:
        y = np.asarray(y, dtype=float)
        return FullState(x=y[0:2], v=y[3:5], theta=y[2], theta_dot=y[5])

    def position(self, y) -> np.ndarray:
        return np.asarray(y, dtype=float)[0:2]

    def velocity(self, y) -> np.ndarray:
        return np.asarray(y, dtype=float)[3:5]

    def accel_from_rate(self, dy) -> np.ndarray:
        return np.asarray(dy, dtype=float)[3:5]

    def rhs(self, y) -> np.ndarray:
        dx, dv, dth, dthd = dynamics.full_disk_rhs(
            self.chart, self.disk, self.potential, self.unpack(y),
            self.omega_d_form,
        )
        return np.concatenate([dx, [dth], dv, [dthd]])

    def energy(self, y) -> float:
        return dynamics.full_disk_energy(
            self.chart, self.disk, self.potential, self.unpack(y),
            self.omega_d_form,
        )

    def speed(self, y) -> float:
        s = self.unpack(y)
        g = geometry_jet(self.chart, s.x).g
        return math.sqrt(float(s.v @ g @ s.v))

    def omega_a(self, y) -> float:
        s = self.unpack(y)
        jet = geometry_jet(self.chart, s.x)
        return dynamics.axial_spin(jet, s)

    def lagrangian(self, q, qdot) -> float:
        """Full three-coordinate Lagrangian; q = (x1, x2, theta)."""
        q = np.asarray(q, dtype=float)
        qdot = np.asarray(qdot, dtype=float)
        jet = geometry_jet(self.chart, q[0:2])
        v = qdot[0:2]
        omega_a = qdot[2] + float(jet.f @ v)
        mass = self.disk.m * jet.g + self.disk.I_d * dynamics._spin_inertia_matrix(
            self.chart, jet.x, self.omega_d_form
        )
        return (
            0.5 * self.disk.I_a * omega_a**2
            + 0.5 * float(v @ mass @ v)
            - self.potential.value(jet.x)
        )


class TopModel:
    name = "top"
    columns = ("x1", "x2", "theta", "v1", "v2", "theta_dot")
    n_pos = 3

    def __init__(self, top: TopParams):
        self.top = top
        self.equivalence = top_to_sphere(top)
        # axis-direction monitors live on the equivalent sphere
        self.monitor_chart = self.equivalence.chart()
        self.chart = None

    def pack(self, state: FullState) -> np.ndarray:
        return np.concatenate(
            [state.x, [state.theta], state.v, [state.theta_dot]]
        )

    def unpack(self, y) -> FullState:
        y = np.asarray(y, dtype=float)
        return FullState(x=y[0:2], v=y[3:5], theta=y[2], theta_dot=y[5])

    def position(self, y) -> np.ndarray:
        return np.asarray(y, dtype=float)[0:2]

    def velocity(self, y) -> np.ndarray:
        return np.asarray(y, dtype=float)[3:5]

    def accel_from_rate(self, dy) -> np.ndarray:
        return np.asarray(dy, dtype=float)[3:5]

    def rhs(self, y) -> np.ndarray:
        dx, dv, dth, dthd = dynamics.top_rhs(self.top, self.unpack(y))
        return np.concatenate([dx, [dth], dv, [dthd]])

    def energy(self, y) -> float:
        return dynamics.top_energy(self.top, self.unpack(y))

    def speed(self, y) -> float:
        s = self.unpack(y)
        g = geometry_jet(self.monitor_chart, s.x).g
        return math.sqrt(float(s.v @ g @ s.v))

    def omega_a(self, y) -> float:
        s = self.unpack(y)
        return float(s.theta_dot + s.v[1] * math.cos(float(s.x[0])))

    def lagrangian(self, q, qdot) -> float:
        q = np.asarray(q, dtype=float)
        qdot = np.asarray(qdot, dtype=float)
        t = self.top
        s, c = math.sin(q[0]), math.cos(q[0])
        omega3 = qdot[2] + qdot[1] * c
        return (
            0.5 * t.I1 * (qdot[0] ** 2 + qdot[1] ** 2 * s * s)
            + 0.5 * t.I3 * omega3**2
            - t.M * t.g * t.ell * c
        )
