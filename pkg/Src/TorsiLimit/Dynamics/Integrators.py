# File: Integrators.py
# Path: /root/pkg/Src/TorsiLimit/Dynamics/Integrators.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 12:55PM

"""Fixed-step classical Runge-Kutta integration."""

from typing import Callable, Optional

import numpy as np

Derivative = Callable[[float, np.ndarray], np.ndarray]
StepGuard = Callable[[float, np.ndarray], None]


def rk4_step(fn: Derivative, t: float, y: np.ndarray, h: float) -> np.ndarray:
    """Advance y by one RK4 step of size h."""
    k1 = fn(t, y)
    k2 = fn(t + h / 2, y + h * k1 / 2)
    k3 = fn(t + h / 2, y + h * k2 / 2)
    k4 = fn(t + h, y + h * k3)
    return y + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6


def integrate_fixed_step(
    fn: Derivative,
    y0: np.ndarray,
    dt: float,
    n_steps: int,
    t0: float = 0.0,
    guard: Optional[StepGuard] = None,
) -> np.ndarray:
    """Integrate n_steps RK4 steps; returns the (n_steps + 1, len(y0)) trajectory.

    The guard, when given, sees every accepted state and may raise to abort.
    """
    trajectory = np.empty((n_steps + 1, y0.size))
    trajectory[0] = y0
    y = y0.astype(float)
    for k in range(n_steps):
        t = t0 + k * dt
        y = rk4_step(fn, t, y, dt)
        if guard is not None:
            guard(t + dt, y)
        trajectory[k + 1] = y
    return trajectory
