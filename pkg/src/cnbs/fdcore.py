"""Central difference operators, the Thomas tridiagonal solver and a
Crank-Nicolson solver for the model heat problem

    u_t = u_xx on [0, 1],  u(0, t) = u(1, t) = 0,  u(x, 0) = sin(pi x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


class SingularMatrixError(ZeroDivisionError):
    """A zero pivot was met during forward elimination."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"zero pivot at row {index}")


@dataclass(frozen=True)
class Tridiagonal:
    """Three-band matrix. ``lower[i]`` sits at (i+1, i), ``upper[i]`` at (i, i+1)."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        diag = np.asarray(self.diag, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        n = diag.shape[0] if diag.ndim == 1 else -1
        if n < 1 or lower.shape != (n - 1,) or upper.shape != (n - 1,):
            raise ValueError(
                f"inconsistent band lengths: lower={lower.shape}, diag={diag.shape}, "
                f"upper={upper.shape}"
            )
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "upper", upper)

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    @classmethod
    def constant(cls, n: int, lower: float, diag: float, upper: float) -> "Tridiagonal":
        return cls(np.full(n - 1, lower), np.full(n, diag), np.full(n - 1, upper))

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = self.diag * x
        y[1:] += self.lower * x[:-1]
        y[:-1] += self.upper * x[1:]
        return y

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.lower, -1) + np.diag(self.upper, 1)

    def is_diagonally_dominant(self) -> bool:
        off = np.zeros(self.n)
        off[1:] += np.abs(self.lower)
        off[:-1] += np.abs(self.upper)
        return bool(np.all(np.abs(self.diag) >= off))


def thomas_solve(m: Tridiagonal, rhs) -> np.ndarray:
    """Solve ``m @ x = rhs`` by the Thomas recursion (no pivoting).

    Parameters
    ----------
    m : Tridiagonal
        System matrix. Diagonal dominance guarantees stability but is not
        checked here; see :meth:`Tridiagonal.is_diagonally_dominant`.
    rhs : array_like
        Right-hand side of length ``m.n``.

    Returns
    -------
    ndarray
        Solution vector.

    Raises
    ------
    SingularMatrixError
        If a pivot is exactly zero; ``index`` names the row.
    """
    d = np.asarray(rhs, dtype=float)
    n = m.n
    if d.shape != (n,):
        raise ValueError(f"rhs has shape {d.shape}, expected ({n},)")
    a, b, c = m.lower, m.diag, m.upper
    cp = np.empty(max(n - 1, 0))
    dp = np.empty(n)

    pivot = b[0]
    if pivot == 0.0:
        raise SingularMatrixError(0)
    if n > 1:
        cp[0] = c[0] / pivot
    dp[0] = d[0] / pivot
    for i in range(1, n):
        pivot = b[i] - a[i - 1] * cp[i - 1]
        if pivot == 0.0:
            raise SingularMatrixError(i)
        if i < n - 1:
            cp[i] = c[i] / pivot
        dp[i] = (d[i] - a[i - 1] * dp[i - 1]) / pivot

    x = dp
    for i in range(n - 2, -1, -1):
        x[i] -= cp[i] * x[i + 1]
    return x


@dataclass(frozen=True)
class MeshParams:
    """Spacing, step and the two dimensionless mesh ratios used for the heat problem.

    ``s_ratio = h**2 / dt`` is the ratio appearing in the computational form
    of the scheme; ``c_ratio = diffusivity * dt / h**2`` is the usual mesh
    ratio of the stability analysis. ``diag_r = 2 (1 + s_ratio)`` is the
    diagonal of the implicit system (not an interest rate).
    """

    h: float
    dt: float
    diffusivity: float = 1.0

    def __post_init__(self):
        if not (self.h > 0 and self.dt > 0 and self.diffusivity > 0):
            raise ValueError("h, dt and diffusivity must all be > 0")

    @property
    def s_ratio(self) -> float:
        return self.h**2 / self.dt

    @property
    def diag_r(self) -> float:
        return 2.0 * (1.0 + self.s_ratio)

    @property
    def c_ratio(self) -> float:
        return self.diffusivity * self.dt / self.h**2


@dataclass(frozen=True)
class GridFunction:
    """Samples of a function on the uniform nodes ``origin + i*h``."""

    values: np.ndarray
    h: float
    origin: float = 0.0

    @property
    def nodes(self) -> np.ndarray:
        return self.origin + self.h * np.arange(len(self.values))

    def __len__(self):
        return len(self.values)


def _check_interior(f: GridFunction, i: int):
    n = len(f.values)
    if n < 3:
        raise ValueError("difference operators need at least 3 samples")
    if not 1 <= i <= n - 2:
        raise IndexError(f"index {i} outside interior range [1, {n - 2}]")


def central_first_diff(f: GridFunction, i: int) -> float:
    _check_interior(f, i)
    v = f.values
    return (v[i + 1] - v[i - 1]) / (2.0 * f.h)


def central_second_diff(f: GridFunction, i: int) -> float:
    _check_interior(f, i)
    v = f.values
    return (v[i + 1] + v[i - 1] - 2.0 * v[i]) / f.h**2


def heat_exact(x, t: float) -> np.ndarray:
    """Separable solution e^{-pi^2 t} sin(pi x) of the model problem."""
    return np.exp(-math.pi**2 * t) * np.sin(math.pi * np.asarray(x, dtype=float))


def cn_heat_solve(
    n_space: int,
    n_time: int,
    t_end: float,
    initial: Callable[[np.ndarray], np.ndarray] | None = None,
) -> list[GridFunction]:
    """March the model heat problem with Crank-Nicolson.

    Each step solves ``-u[i-1] + r u[i] - u[i+1] = b[i]`` over the interior
    nodes, with ``r = 2(1+s)``, ``s = h**2/dt`` and
    ``b[i] = u_old[i-1] + 2(s-1) u_old[i] + u_old[i+1]``.

    Parameters
    ----------
    n_space : int
        Number of intervals on [0, 1] (``h = 1/n_space``), >= 3.
    n_time : int
        Number of time steps (``dt = t_end/n_time``), >= 1.
    t_end : float
        Final time.
    initial : callable, optional
        Initial data; defaults to ``sin(pi x)``. Boundary values stay zero.

    Returns
    -------
    list of GridFunction
        The solution at every time level, ``n_time + 1`` entries.
    """
    if n_space < 3:
        raise ValueError(f"n_space must be >= 3, got {n_space}")
    if n_time < 1:
        raise ValueError(f"n_time must be >= 1, got {n_time}")
    if not t_end > 0:
        raise ValueError(f"t_end must be > 0, got {t_end}")
    mesh = MeshParams(h=1.0 / n_space, dt=t_end / n_time)
    x = mesh.h * np.arange(n_space + 1)
    u = np.sin(math.pi * x) if initial is None else np.asarray(initial(x), dtype=float).copy()
    u[0] = u[-1] = 0.0

    s = mesh.s_ratio
    system = Tridiagonal.constant(n_space - 1, -1.0, mesh.diag_r, -1.0)
    history = [GridFunction(u.copy(), mesh.h)]
    for _ in range(n_time):
        b = u[:-2] + 2.0 * (s - 1.0) * u[1:-1] + u[2:]
        # zero Dirichlet data at both levels: no boundary correction to b
        new = np.zeros_like(u)
        new[1:-1] = thomas_solve(system, b)
        u = new
        history.append(GridFunction(u.copy(), mesh.h))
    return history
