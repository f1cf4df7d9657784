"""European option pricing by Crank-Nicolson finite differences on the
Black-Scholes PDE, with closed-form, heat-kernel and Monte Carlo oracles."""

from cnbs.analytic import (
    DegenerateInputError,
    MarketQuery,
    OptionKind,
    OptionSpec,
    call_price,
    d1_d2,
    norm_cdf,
    option_price,
    payoff,
    put_price,
)
from cnbs.bspricer import (
    ConvergenceReport,
    PriceSurface,
    SpatialGrid,
    TimeGrid,
    cn_bs_solve,
    convergence_study,
    price_at,
)
from cnbs.fdcore import SingularMatrixError, Tridiagonal, cn_heat_solve, thomas_solve
from cnbs.heatkernel import price_via_heat_kernel
from cnbs.mc import GbmParams, McEstimate, mc_price, simulate_path
from cnbs.stability import amp_cn, amp_explicit, explicit_heat_solve

__version__ = "0.1.0"

__all__ = [
    "ConvergenceReport",
    "DegenerateInputError",
    "GbmParams",
    "MarketQuery",
    "McEstimate",
    "OptionKind",
    "OptionSpec",
    "PriceSurface",
    "SingularMatrixError",
    "SpatialGrid",
    "TimeGrid",
    "Tridiagonal",
    "amp_cn",
    "amp_explicit",
    "call_price",
    "cn_bs_solve",
    "cn_heat_solve",
    "convergence_study",
    "d1_d2",
    "explicit_heat_solve",
    "mc_price",
    "norm_cdf",
    "option_price",
    "payoff",
    "price_at",
    "price_via_heat_kernel",
    "put_price",
    "simulate_path",
    "thomas_solve",
]
