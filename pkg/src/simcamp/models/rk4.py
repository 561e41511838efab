"""Classical fixed-step fourth-order Runge-Kutta."""
from __future__ import annotations

from typing import Callable

import numpy as np

from ..errors import NumericsError

VectorField = Callable[[np.ndarray], np.ndarray]


def rk4_step(f: VectorField, x: np.ndarray, dt: float) -> np.ndarray:
    if not dt > 0:
        raise ValueError("dt must be positive")
    with np.errstate(over="ignore", invalid="ignore"):
        k1 = f(x)
        k2 = f(x + 0.5 * dt * k1)
        k3 = f(x + 0.5 * dt * k2)
        k4 = f(x + dt * k3)
        out = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(out)):
        raise NumericsError(f"non-finite state after RK4 step: {out}")
    return out


def rk4_integrate(f: VectorField, x: np.ndarray, dt: float, steps: int) -> np.ndarray:
    for _ in range(steps):
        x = rk4_step(f, x, dt)
    return x
