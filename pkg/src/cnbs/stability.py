"""Von Neumann amplification factors for the explicit and Crank-Nicolson
discretisations of u_t = D u_xx, plus an explicit solver that exhibits the
conditional stability of the forward scheme.

With mesh ratio ``C = D dt / h**2`` and wavenumber angle ``theta = k h``:

* explicit:        A = 1 - 2C(1 - cos theta) = 1 - 4C sin^2(theta/2)
* Crank-Nicolson:  A = (1 - 2C sin^2(theta/2)) / (1 + 2C sin^2(theta/2))

The Crank-Nicolson factor follows from inserting a Fourier mode into the
scheme that averages C/2 times the second difference at both time levels.
A frequently printed variant with 4C in place of 2C is kept as
:func:`amp_cn_4c`; it is also bounded by one but does not match the scheme
as written (the one-step ratio of :func:`cnbs.fdcore.cn_heat_solve` agrees
with :func:`amp_cn`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from cnbs.fdcore import GridFunction


@dataclass(frozen=True)
class AmplificationSample:
    c_ratio: float
    theta: float
    a_value: float

    def __post_init__(self):
        if not 0.0 < self.theta <= math.pi:
            raise ValueError(f"theta must lie in (0, pi], got {self.theta}")


def amp_explicit(c_ratio, theta):
    return 1.0 - 2.0 * c_ratio * (1.0 - np.cos(theta))


def amp_cn(c_ratio, theta):
    q = 2.0 * c_ratio * np.sin(0.5 * np.asarray(theta)) ** 2
    return (1.0 - q) / (1.0 + q)


def amp_cn_4c(c_ratio, theta):
    q = 4.0 * c_ratio * np.sin(0.5 * np.asarray(theta)) ** 2
    return (1.0 - q) / (1.0 + q)


def amplification_table(c_values, thetas) -> list[tuple[float, float, float, float]]:
    """Rows ``(C, theta, A_explicit, A_cn)`` over the Cartesian product."""
    rows = []
    for c in c_values:
        for th in thetas:
            rows.append((float(c), float(th), float(amp_explicit(c, th)), float(amp_cn(c, th))))
    return rows


def explicit_heat_solve(n_space: int, n_time: int, c_ratio: float) -> list[GridFunction]:
    """Forward-Euler march ``F[i] += C (F[i-1] - 2F[i] + F[i+1])`` on [0, 1].

    Starts from ``sin(pi x)`` with zero boundaries and returns all
    ``n_time + 1`` levels. Rounding error seeds the high modes, so for
    ``C > 1/2`` the solution grows like ``|1 - 4C|**n`` once those modes
    dominate.
    """
    if n_space < 3:
        raise ValueError(f"n_space must be >= 3, got {n_space}")
    if n_time < 0:
        raise ValueError(f"n_time must be >= 0, got {n_time}")
    if c_ratio < 0:
        raise ValueError(f"c_ratio must be >= 0, got {c_ratio}")
    h = 1.0 / n_space
    u = np.sin(math.pi * h * np.arange(n_space + 1))
    u[0] = u[-1] = 0.0
    history = [GridFunction(u.copy(), h)]
    for _ in range(n_time):
        new = u.copy()
        new[1:-1] = u[1:-1] + c_ratio * (u[:-2] - 2.0 * u[1:-1] + u[2:])
        u = new
        history.append(GridFunction(u.copy(), h))
    return history
