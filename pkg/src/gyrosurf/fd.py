"""Finite-difference stencils for chart derivatives and oracle checks.

All stencils are 4th-order central differences. `f` may return a scalar
or an ndarray; shapes pass through unchanged.
"""

import numpy as np

FIRST_STEP_SCALE = 1e-5
SECOND_STEP_SCALE = 1e-3


def step(x, k: int, scale: float = FIRST_STEP_SCALE) -> float:
    """Relative step h = scale * (1 + |x_k|)."""
    return scale * (1.0 + abs(float(np.asarray(x, dtype=float)[k])))


def partial(f, x, k: int, h: float):
    """4th-order central estimate of the partial of f along coordinate k."""
    x = np.asarray(x, dtype=float)
    e = np.zeros_like(x)
    e[k] = 1.0
    return (
        -np.asarray(f(x + 2.0 * h * e))
        + 8.0 * np.asarray(f(x + h * e))
        - 8.0 * np.asarray(f(x - h * e))
        + np.asarray(f(x - 2.0 * h * e))
    ) / (12.0 * h)


def gradient(f, x, scale: float = FIRST_STEP_SCALE):
    """All first partials, stacked along a new leading axis."""
    x = np.asarray(x, dtype=float)
    return np.stack([partial(f, x, k, step(x, k, scale)) for k in range(x.size)])


def second_partial(f, x, k: int, l: int, inner_scale: float = FIRST_STEP_SCALE,
                   outer_scale: float = SECOND_STEP_SCALE):
    """Mixed second partial d_k d_l f.

    The outer stencil differentiates the FD first-derivative map.  The outer
    step is coarser than the inner one: differencing a quantity already
    carrying ~eps/h_inner noise at the inner step would cost six digits.
    """
    x = np.asarray(x, dtype=float)

    def inner(y):
        return partial(f, y, l, step(y, l, inner_scale))

    return partial(inner, x, k, step(x, k, outer_scale))
