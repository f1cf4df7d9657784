"""Crank-Nicolson solution of the Black-Scholes PDE in asset-price coordinates.

The backward equation is marched in time-to-expiry ``tau = T - t``:

    V_tau = 1/2 sigma^2 S^2 V_SS + r S V_S - r V,   V(S, 0) = payoff(S)

on ``S in [0, s_max]`` with Dirichlet data at both ends. Each step solves

    (I - dtau/2 L) V^{j+1} = (I + dtau/2 L) V^j + boundary terms

over the interior nodes with the Thomas algorithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from cnbs.analytic import MarketQuery, OptionKind, OptionSpec, option_price, payoff
from cnbs.fdcore import SingularMatrixError, Tridiagonal, thomas_solve


@dataclass(frozen=True)
class SpatialGrid:
    s_max: float
    n_space: int

    def __post_init__(self):
        if not (math.isfinite(self.s_max) and self.s_max > 0):
            raise ValueError(f"s_max must be > 0, got {self.s_max}")
        if int(self.n_space) != self.n_space or self.n_space < 3:
            raise ValueError(f"n_space must be an integer >= 3, got {self.n_space}")

    @property
    def spacing(self) -> float:
        return self.s_max / self.n_space

    @property
    def nodes(self) -> np.ndarray:
        nodes = self.spacing * np.arange(self.n_space + 1)
        nodes[-1] = self.s_max
        return nodes

    @classmethod
    def strike_midway(cls, strike: float, s_max: float, n_space: int) -> "SpatialGrid":
        """Grid near ``(s_max, n_space)`` whose spacing puts ``strike`` halfway between nodes.

        The node count is moved to the nearest value with ``strike = (k + 1/2) h``;
        when ``s_max / strike`` does not allow that exactly, ``s_max`` is nudged
        to ``n_space * h``.
        """
        k = max(int(round(strike * n_space / s_max - 0.5)), 0)
        h = strike / (k + 0.5)
        m = max(int(round(s_max / h)), 3)
        while m * h <= strike:
            m += 1
        s_new = s_max if math.isclose(m * h, s_max, rel_tol=1e-12) else m * h
        return cls(s_new, m)


@dataclass(frozen=True)
class TimeGrid:
    expiry: float
    n_time: int

    def __post_init__(self):
        if not self.expiry > 0:
            raise ValueError(f"expiry must be > 0, got {self.expiry}")
        if int(self.n_time) != self.n_time or self.n_time < 1:
            raise ValueError(f"n_time must be an integer >= 1, got {self.n_time}")

    @property
    def step(self) -> float:
        return self.expiry / self.n_time

    @property
    def taus(self) -> np.ndarray:
        taus = self.step * np.arange(self.n_time + 1)
        taus[-1] = self.expiry
        return taus


@dataclass(frozen=True)
class PriceSurface:
    """Option values on the (asset node, time-to-expiry step) grid.

    ``values[i, j]`` is V at ``S = s_axis[i]`` and ``tau = tau_axis[j]``;
    column 0 is the payoff at expiry.
    """

    values: np.ndarray
    s_axis: np.ndarray
    tau_axis: np.ndarray
    spec: OptionSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.values.shape != (len(self.s_axis), len(self.tau_axis)):
            raise ValueError(
                f"values shape {self.values.shape} does not match axes "
                f"({len(self.s_axis)}, {len(self.tau_axis)})"
            )
        self.values.setflags(write=False)

    @property
    def expiry(self) -> float:
        return float(self.tau_axis[-1])


def bs_coefficients(spec: OptionSpec, grid: SpatialGrid):
    """Stencil weights ``(a, b, c)`` of the discrete operator at every node.

    ``(L V)_i = a_i V_{i-1} + b_i V_i + c_i V_{i+1}`` with central
    differences for both derivatives.
    """
    S = grid.nodes
    dS = grid.spacing
    diff = 0.5 * spec.volatility**2 * S**2 / dS**2
    conv = spec.rate * S / (2.0 * dS)
    return diff - conv, -2.0 * diff - spec.rate, diff + conv


def build_bs_operator(spec: OptionSpec, grid: SpatialGrid) -> Tridiagonal:
    """Discrete Black-Scholes operator restricted to interior nodes 1..M-1."""
    a, b, c = bs_coefficients(spec, grid)
    return Tridiagonal(a[2:-1], b[1:-1], c[1:-2])


def terminal_payoff(spec: OptionSpec, grid: SpatialGrid) -> np.ndarray:
    S = grid.nodes
    if spec.kind is OptionKind.CALL:
        return np.maximum(S - spec.strike, 0.0)
    return np.maximum(spec.strike - S, 0.0)


def boundary_values(spec: OptionSpec, tau: float, s_max: float) -> tuple[float, float]:
    """Dirichlet data ``(V(0, tau), V(s_max, tau))``."""
    if not 0.0 <= tau <= spec.expiry * (1 + 1e-12):
        raise ValueError(f"tau must lie in [0, {spec.expiry}], got {tau}")
    discounted = spec.strike * math.exp(-spec.rate * tau)
    if spec.kind is OptionKind.CALL:
        return 0.0, s_max - discounted
    return discounted, 0.0


def cn_bs_solve(spec: OptionSpec, grid: SpatialGrid, tgrid: TimeGrid) -> PriceSurface:
    """Price surface of ``spec`` by Crank-Nicolson time stepping.

    Raises
    ------
    ValueError
        If the grid does not extend beyond the strike or the time grid does
        not span the contract's expiry.
    SingularMatrixError
        If a step system is singular; the message names the step.
    """
    if grid.s_max <= spec.strike:
        raise ValueError(f"s_max={grid.s_max} must exceed the strike {spec.strike}")
    if not math.isclose(tgrid.expiry, spec.expiry, rel_tol=1e-12):
        raise ValueError(f"time grid spans {tgrid.expiry}, contract expiry is {spec.expiry}")
    M, N = grid.n_space, tgrid.n_time
    half = 0.5 * tgrid.step
    a, b, c = bs_coefficients(spec, grid)
    a_in, b_in, c_in = a[1:-1], b[1:-1], c[1:-1]
    implicit = Tridiagonal(-half * a_in[1:], 1.0 - half * b_in, -half * c_in[:-1])
    taus = tgrid.taus

    V = np.empty((M + 1, N + 1))
    V[:, 0] = terminal_payoff(spec, grid)
    for j in range(N):
        old = V[:, j]
        low, high = boundary_values(spec, taus[j + 1], grid.s_max)
        rhs = old[1:-1] + half * (a_in * old[:-2] + b_in * old[1:-1] + c_in * old[2:])
        rhs[0] += half * a_in[0] * low
        rhs[-1] += half * c_in[-1] * high
        try:
            V[1:-1, j + 1] = thomas_solve(implicit, rhs)
        except SingularMatrixError as exc:
            raise SingularMatrixError(exc.index, f"step {j + 1}: {exc}") from exc
        V[0, j + 1] = low
        V[-1, j + 1] = high
    return PriceSurface(V, grid.nodes, taus, spec)


def price_at(surface: PriceSurface, spot: float, time: float) -> float:
    """Bilinear interpolation of the surface at calendar time ``time``."""
    S, taus = surface.s_axis, surface.tau_axis
    tau = surface.expiry - time
    if not S[0] <= spot <= S[-1]:
        raise ValueError(f"spot {spot} outside grid [{S[0]}, {S[-1]}]")
    if not -1e-12 * surface.expiry <= tau <= surface.expiry:
        raise ValueError(f"time {time} outside [0, {surface.expiry}]")
    tau = max(tau, 0.0)
    i = min(int(np.searchsorted(S, spot, side="right")) - 1, len(S) - 2)
    j = min(int(np.searchsorted(taus, tau, side="right")) - 1, len(taus) - 2)
    ws = (spot - S[i]) / (S[i + 1] - S[i])
    wt = (tau - taus[j]) / (taus[j + 1] - taus[j])
    v = surface.values
    lo = v[i, j] if ws == 0 else (1 - ws) * v[i, j] + ws * v[i + 1, j]
    if wt == 0:
        return float(lo)
    hi = v[i, j + 1] if ws == 0 else (1 - ws) * v[i, j + 1] + ws * v[i + 1, j + 1]
    return float((1 - wt) * lo + wt * hi)


@dataclass(frozen=True)
class ConvergenceRow:
    M: int
    N: int
    h: float
    dt: float
    error: float
    order: float | None


@dataclass
class ConvergenceReport:
    rows: list[ConvergenceRow]

    @property
    def orders(self) -> list[float]:
        return [r.order for r in self.rows if r.order is not None]

    @property
    def fitted_order(self) -> float:
        """Least-squares slope of log(error) against log(h)."""
        h = np.log([r.h for r in self.rows])
        e = np.log([r.error for r in self.rows])
        return float(np.polyfit(h, e, 1)[0])


def observed_order(e_coarse: float, e_fine: float, h_coarse: float = 2.0, h_fine: float = 1.0) -> float:
    """``log(e_coarse/e_fine) / log(h_coarse/h_fine)``; log2 of the error ratio for halving."""
    return math.log(e_coarse / e_fine) / math.log(h_coarse / h_fine)


def convergence_study(
    spec: OptionSpec,
    base_m: int,
    base_n: int,
    levels: int,
    s_max: float | None = None,
    probe_spot: float | None = None,
    strike_midway: bool = False,
) -> ConvergenceReport:
    """Refine M and N by doubling and record the error at a probe.

    The probe defaults to ``S = strike`` at ``t = 0`` and the reference is
    the closed-form price. With ``strike_midway`` each level's node count is
    adjusted so the strike sits halfway between nodes; orders then use the
    actual spacing ratio.
    """
    if levels < 2:
        raise ValueError(f"levels must be >= 2, got {levels}")
    s_max = 4.0 * spec.strike if s_max is None else s_max
    spot = spec.strike if probe_spot is None else probe_spot
    exact = option_price(spec, MarketQuery(spot, 0.0))
    rows: list[ConvergenceRow] = []
    for level in range(levels):
        m, n = base_m * 2**level, base_n * 2**level
        grid = SpatialGrid.strike_midway(spec.strike, s_max, m) if strike_midway else SpatialGrid(s_max, m)
        tgrid = TimeGrid(spec.expiry, n)
        err = abs(price_at(cn_bs_solve(spec, grid, tgrid), spot, 0.0) - exact)
        order = None
        if rows:
            prev = rows[-1]
            order = observed_order(prev.error, err, prev.h, grid.spacing) if err > 0 else math.inf
        rows.append(ConvergenceRow(grid.n_space, n, grid.spacing, tgrid.step, err, order))
    return ConvergenceReport(rows)
