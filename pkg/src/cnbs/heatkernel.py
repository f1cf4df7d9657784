"""Option pricing through the heat equation.

The substitutions ``S = E e^x``, ``tau = sigma^2 (T - t) / 2``,
``V = E e^{alpha x + beta tau} u(x, tau)`` with ``k = r / (sigma^2/2)``,
``alpha = -(k - 1)/2`` and ``beta = -(k + 1)^2 / 4`` turn the Black-Scholes
equation into ``u_tau = u_xx`` on the whole line. Its solution is the
convolution of the transformed payoff with the Gaussian heat kernel, which
is evaluated here by composite Simpson quadrature. Nothing in this module
uses the closed-form pricer, so it serves as an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from cnbs.analytic import MarketQuery, OptionKind, OptionSpec, payoff

# Gaussian tail cut-off: exp(-ln(1/eps)) = eps of the kernel mass is dropped
TAIL_EPS = 1e-16


@dataclass(frozen=True)
class HeatCoords:
    x: float
    tau: float
    k_dim: float
    alpha: float
    beta: float


def to_heat_coords(spec: OptionSpec, q: MarketQuery) -> HeatCoords:
    if q.spot <= 0:
        raise ValueError(f"heat coordinates need spot > 0, got {q.spot}")
    if spec.volatility <= 0:
        raise ValueError("heat coordinates need volatility > 0")
    if q.time > spec.expiry:
        raise ValueError(f"time {q.time} is past expiry {spec.expiry}")
    half_var = 0.5 * spec.volatility**2
    k = spec.rate / half_var
    return HeatCoords(
        x=math.log(q.spot / spec.strike),
        tau=half_var * (spec.expiry - q.time),
        k_dim=k,
        alpha=-0.5 * (k - 1.0),
        beta=-0.25 * (k + 1.0) ** 2,
    )


def u0(x, k_dim: float, kind: OptionKind | str):
    """Transformed payoff. Works elementwise on arrays."""
    x = np.asarray(x, dtype=float)
    up = np.exp(0.5 * (k_dim + 1.0) * x)
    down = np.exp(0.5 * (k_dim - 1.0) * x)
    diff = up - down if OptionKind.parse(kind) is OptionKind.CALL else down - up
    out = np.maximum(diff, 0.0)
    return float(out) if out.ndim == 0 else out


def window_half_width(k_dim: float, tau: float, eps: float = TAIL_EPS) -> float:
    # kernel tail below eps after the exponential growth of u0 shifts the peak by (k+1) tau
    return math.sqrt(4.0 * tau * math.log(1.0 / eps)) + (abs(k_dim) + 1.0) * tau


def _simpson(f_vals: np.ndarray, a: float, b: float) -> float:
    n = len(f_vals) - 1
    h = (b - a) / n
    return h / 3.0 * (f_vals[0] + f_vals[-1] + 4.0 * f_vals[1:-1:2].sum() + 2.0 * f_vals[2:-1:2].sum())


def _pieces(kind, x: float, w: float) -> list[tuple[float, float]]:
    """Sub-intervals of [x - w, x + w] where u0 is nonzero, split at its kink s = 0."""
    lo, hi = x - w, x + w
    if OptionKind.parse(kind) is OptionKind.CALL:
        lo = max(lo, 0.0)
    else:
        hi = min(hi, 0.0)
    return [(lo, hi)] if hi > lo else []


def convolution_simpson(kind, k_dim: float, x: float, tau: float, n_panels: int) -> float:
    """Fixed-resolution Simpson estimate of the heat-kernel convolution.

    ``n_panels`` Simpson panels (``2*n_panels`` subintervals) cover the
    support of u0 inside the truncation window.
    """
    w = window_half_width(k_dim, tau)
    total = 0.0
    for a, b in _pieces(kind, x, w):
        s = np.linspace(a, b, 2 * n_panels + 1)
        f = u0(s, k_dim, kind) * np.exp(-((x - s) ** 2) / (4.0 * tau))
        total += _simpson(f, a, b)
    return total / (2.0 * math.sqrt(math.pi * tau))


def heat_convolution(
    kind, k_dim: float, x: float, tau: float, tol: float = 1e-10, max_panels: int = 1 << 20
) -> float:
    """Solve ``u_tau = u_xx`` with initial data ``u0`` at ``(x, tau)``.

    The panel count doubles until the change between successive Simpson
    estimates (a Richardson bound on the error of the finer one, times 15)
    falls below ``tol`` relative to the result.

    Raises
    ------
    ValueError
        For ``tau < 0`` or ``tol <= 0``.
    ArithmeticError
        If ``max_panels`` is reached before the tolerance.
    """
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    if tau == 0:
        return u0(x, k_dim, kind)
    n = 64
    prev = convolution_simpson(kind, k_dim, x, tau, n)
    while n < max_panels:
        n *= 2
        cur = convolution_simpson(kind, k_dim, x, tau, n)
        if abs(cur - prev) <= tol * abs(cur) or cur == prev:
            return cur
        prev = cur
    raise ArithmeticError(f"heat convolution did not reach tol={tol} with {n} panels")


def price_via_heat_kernel(spec: OptionSpec, q: MarketQuery, tol: float = 1e-10) -> float:
    """Option value ``E e^{alpha x + beta tau} u(x, tau)``."""
    hc = to_heat_coords(spec, q)
    if hc.tau == 0:
        return payoff(spec.kind, q.spot, spec.strike)
    u = heat_convolution(spec.kind, hc.k_dim, hc.x, hc.tau, tol)
    return spec.strike * math.exp(hc.alpha * hc.x + hc.beta * hc.tau) * u
