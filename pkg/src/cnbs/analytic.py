"""Closed-form Black-Scholes valuation of European calls and puts.

Every other engine in the package is checked against these functions, so
they are total over valid contracts: the zero-volatility, zero-spot and
at-expiry limits are resolved in closed form instead of raising.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class DegenerateInputError(ValueError):
    """Raised when d1/d2 are undefined (zero spot, zero volatility or t = T)."""


class OptionKind(str, enum.Enum):
    CALL = "call"
    PUT = "put"

    @classmethod
    def parse(cls, value: "OptionKind | str") -> "OptionKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"option kind must be 'call' or 'put', got {value!r}") from None


@dataclass(frozen=True)
class OptionSpec:
    """Contract terms of a European vanilla option.

    Parameters
    ----------
    kind : OptionKind
        Call or put.
    strike : float
        Exercise price, > 0.
    rate : float
        Continuously compounded risk-free rate, >= 0.
    volatility : float
        Annualised volatility, >= 0.
    expiry : float
        Time to expiry in years, > 0.
    """

    kind: OptionKind
    strike: float
    rate: float
    volatility: float
    expiry: float

    def __post_init__(self):
        object.__setattr__(self, "kind", OptionKind.parse(self.kind))
        for name in ("strike", "rate", "volatility", "expiry"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.strike <= 0:
            raise ValueError(f"strike must be > 0, got {self.strike}")
        if self.expiry <= 0:
            raise ValueError(f"expiry must be > 0, got {self.expiry}")
        if self.volatility < 0:
            raise ValueError(f"volatility must be >= 0, got {self.volatility}")
        if self.rate < 0:
            raise ValueError(f"rate must be >= 0, got {self.rate}")

    def replace(self, **changes) -> "OptionSpec":
        fields = dict(
            kind=self.kind,
            strike=self.strike,
            rate=self.rate,
            volatility=self.volatility,
            expiry=self.expiry,
        )
        fields.update(changes)
        return OptionSpec(**fields)


@dataclass(frozen=True)
class MarketQuery:
    """Spot price and calendar time (years from inception) of a valuation."""

    spot: float
    time: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.spot) and self.spot >= 0):
            raise ValueError(f"spot must be finite and >= 0, got {self.spot!r}")
        if not (math.isfinite(self.time) and self.time >= 0):
            raise ValueError(f"time must be finite and >= 0, got {self.time!r}")


def _time_to_expiry(spec: OptionSpec, q: MarketQuery) -> float:
    if q.time > spec.expiry:
        raise ValueError(f"time {q.time} is past expiry {spec.expiry}")
    return spec.expiry - q.time


def norm_cdf(x: float) -> float:
    """Standard normal cumulative distribution function.

    Evaluated through the complementary error function, which keeps full
    relative accuracy in the lower tail and absolute error at the level of
    double rounding everywhere.
    """
    if not math.isfinite(x):
        raise ValueError(f"norm_cdf needs a finite argument, got {x!r}")
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def payoff(kind: OptionKind | str, spot: float, strike: float) -> float:
    if OptionKind.parse(kind) is OptionKind.CALL:
        return max(spot - strike, 0.0)
    return max(strike - spot, 0.0)


def d1_d2(spec: OptionSpec, q: MarketQuery) -> tuple[float, float]:
    tau = _time_to_expiry(spec, q)
    if q.spot <= 0:
        raise DegenerateInputError("d1/d2 undefined at zero spot")
    if spec.volatility <= 0:
        raise DegenerateInputError("d1/d2 undefined at zero volatility")
    if tau <= 0:
        raise DegenerateInputError("d1/d2 undefined at expiry")
    sig_sqrt = spec.volatility * math.sqrt(tau)
    log_m = math.log(q.spot) - math.log(spec.strike)
    d1 = (log_m + (spec.rate + 0.5 * spec.volatility**2) * tau) / sig_sqrt
    return d1, d1 - sig_sqrt


def call_price(spec: OptionSpec, q: MarketQuery) -> float:
    """Black-Scholes value of a European call (the ``kind`` field is ignored)."""
    tau = _time_to_expiry(spec, q)
    S, E = q.spot, spec.strike
    if tau == 0:
        return max(S - E, 0.0)
    discount = E * math.exp(-spec.rate * tau)
    if S == 0:
        return 0.0
    if spec.volatility == 0:
        return max(S - discount, 0.0)
    d1, d2 = d1_d2(spec, q)
    value = S * norm_cdf(d1) - discount * norm_cdf(d2)
    # clip rounding excursions outside the no-arbitrage band
    return min(max(value, S - discount, 0.0), S)


def put_price(spec: OptionSpec, q: MarketQuery) -> float:
    """Black-Scholes value of a European put (the ``kind`` field is ignored)."""
    tau = _time_to_expiry(spec, q)
    S, E = q.spot, spec.strike
    if tau == 0:
        return max(E - S, 0.0)
    discount = E * math.exp(-spec.rate * tau)
    if S == 0:
        return discount
    if spec.volatility == 0:
        return max(discount - S, 0.0)
    d1, d2 = d1_d2(spec, q)
    value = discount * norm_cdf(-d2) - S * norm_cdf(-d1)
    return min(max(value, discount - S, 0.0), discount)


def option_price(spec: OptionSpec, q: MarketQuery) -> float:
    """Dispatch on ``spec.kind``."""
    if spec.kind is OptionKind.CALL:
        return call_price(spec, q)
    return put_price(spec, q)
