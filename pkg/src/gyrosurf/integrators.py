"""Fixed-step time integration with per-sample diagnostic monitors.

The schemes are deliberately plain: classical RK4 and the explicit midpoint
rule, fixed step, no adaptivity, no internal state.  Rerunning a scenario
reproduces the same floats bit for bit.

Monitors are evaluated on the stored samples after stepping and never touch
the integration state.  A step that leaves the chart domain truncates the
trajectory at the last valid sample and flags it; non-finite states abort.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import ReducedState
from .errors import (
    DomainError,
    NonFiniteStateError,
    SpeedFloorError,
)
from .geometry import J_FLAT, geometry_jet

CURVATURE_SPEED_FLOOR = 1e-8

SCHEMES = ("rk4", "midpoint")


@dataclass(frozen=True)
class IntegratorSettings:
    dt: float
    n_steps: int
    sample_every: int = 1
    scheme: str = "rk4"

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValueError("dt must be positive")
        if self.n_steps < 1:
            raise ValueError("n_steps must be at least 1")
        if self.sample_every < 1:
            raise ValueError("sample_every must be at least 1")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")


@dataclass
class Trajectory:
    """Sampled states plus diagnostic monitor tracks.

    states has one row per retained sample; column names are in `columns`.
    monitors maps name -> array aligned with `times`; entries that are not
    defined at a sample (axial spin of an uncharged model, curvature of a
    stalled point) hold NaN.
    """

    model: str
    columns: tuple[str, ...]
    times: np.ndarray
    states: np.ndarray
    monitors: dict[str, np.ndarray] = field(default_factory=dict)
    truncated: bool = False
    truncation_reason: str | None = None

    @property
    def n_samples(self) -> int:
        return self.times.size

    def column(self, name: str) -> np.ndarray:
        return self.states[:, self.columns.index(name)]


def _rk4_step(rhs, y: np.ndarray, dt: float) -> np.ndarray:
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * dt * k1)
    k3 = rhs(y + 0.5 * dt * k2)
    k4 = rhs(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _midpoint_step(rhs, y: np.ndarray, dt: float) -> np.ndarray:
    k1 = rhs(y)
    return y + dt * rhs(y + 0.5 * dt * k1)


def geodesic_curvature_monitor(chart, state: ReducedState, accel) -> float:
    """Signed geodesic curvature of the traced path at one state.

    k = <Dv/dt, Jv>_g / |v|_g^3 with Dv/dt the covariant acceleration
    assembled from the coordinate acceleration `accel`.  Positive k bends
    the path to the left of the motion.  Below the speed floor the quantity
    is 0/0; that raises rather than returning garbage.
    """
    jet = geometry_jet(chart, state.x)
    v = state.v
    speed_sq = float(v @ jet.g @ v)
    if speed_sq < CURVATURE_SPEED_FLOOR**2:
        raise SpeedFloorError(
            f"metric speed {math.sqrt(max(speed_sq, 0.0))!r} below floor"
        )
    cov_accel = np.asarray(accel, dtype=float) + np.einsum(
        "kij,i,j->k", jet.christoffel, v, v
    )
    # <D, Jv>_g = sqrt(det g) * D . (J_flat v)
    return float(
        jet.sqrt_det_g * (cov_accel @ (J_FLAT @ v)) / speed_sq**1.5
    )


def _monitor_rows(model, y: np.ndarray) -> tuple[float, float, float, float, float]:
    energy = model.energy(y)
    speed = model.speed(y)
    omega = model.omega_a(y)
    try:
        accel = model.accel_from_rate(model.rhs(y))
        k_geo = geodesic_curvature_monitor(
            model.monitor_chart,
            ReducedState(x=model.position(y), v=model.velocity(y)),
            accel,
        )
    except (SpeedFloorError, DomainError):
        k_geo = math.nan
    try:
        K = geometry_jet(model.monitor_chart, model.position(y)).K
    except DomainError:
        K = math.nan
    return energy, speed, omega, k_geo, K


def integrate(model, y0, settings: IntegratorSettings) -> Trajectory:
    """Advance `model.rhs` from y0 and collect samples plus monitors.

    Parameters
    ----------
    model
        Object with rhs/energy/speed/omega_a/position/velocity/
        accel_from_rate, a `columns` tuple and a `monitor_chart` (see
        `gyrosurf.models`).
    y0 : array_like
        Flat initial state in the model's layout.
    settings : IntegratorSettings

    Returns
    -------
    Trajectory
        Sample 0 is y0.  If a step raises DomainError the trajectory ends at
        the last valid sample with `truncated` set and the reason recorded.

    Raises
    ------
    NonFiniteStateError
        A step produced NaN or infinity.
    """
    y = np.array(y0, dtype=float).reshape(-1)
    if y.size != len(model.columns):
        raise ValueError(
            f"state length {y.size} does not match layout {model.columns}"
        )
    step_fn = _rk4_step if settings.scheme == "rk4" else _midpoint_step

    times = [0.0]
    samples = [y.copy()]
    truncated = False
    reason = None
    for step in range(1, settings.n_steps + 1):
        try:
            y = step_fn(model.rhs, y, settings.dt)
        except DomainError as exc:
            truncated = True
            reason = f"step {step}: {exc}"
            break
        if not np.all(np.isfinite(y)):
            raise NonFiniteStateError(f"non-finite state at step {step}")
        if step % settings.sample_every == 0:
            times.append(step * settings.dt)
            samples.append(y.copy())

    states = np.array(samples)
    monitor_names = ("E", "speed", "omega_a", "k_geo", "K")
    rows = np.empty((states.shape[0], len(monitor_names)))
    for i in range(states.shape[0]):
        rows[i] = _monitor_rows(model, states[i])
    monitors = {name: rows[:, j].copy() for j, name in enumerate(monitor_names)}

    return Trajectory(
        model=model.name,
        columns=tuple(model.columns),
        times=np.array(times),
        states=states,
        monitors=monitors,
        truncated=truncated,
        truncation_reason=reason,
    )
