"""Geometric Brownian motion paths and a risk-neutral Monte Carlo pricer.

Terminal prices are drawn from the exact lognormal law, so the estimator
carries no time-discretisation bias. Draws are generated in fixed-size
chunks, chunk ``i`` seeded by the ``i``-th child of
``numpy.random.SeedSequence(seed)``; the estimate is therefore identical
for any number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from cnbs.analytic import OptionKind, OptionSpec

CHUNK = 1 << 16


@dataclass(frozen=True)
class GbmParams:
    drift: float
    volatility: float
    s0: float

    def __post_init__(self):
        if not self.s0 > 0:
            raise ValueError(f"s0 must be > 0, got {self.s0}")
        if self.volatility < 0:
            raise ValueError(f"volatility must be >= 0, got {self.volatility}")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_paths: int
    seed: int


def simulate_path(params: GbmParams, horizon: float, n_steps: int, seed: int) -> np.ndarray:
    """One realisation ``S_0..S_n`` on an even grid over ``[0, horizon]``."""
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    if not horizon > 0:
        raise ValueError(f"horizon must be > 0, got {horizon}")
    dt = horizon / n_steps
    z = np.random.default_rng(seed).standard_normal(n_steps)
    log_inc = (params.drift - 0.5 * params.volatility**2) * dt + params.volatility * math.sqrt(dt) * z
    path = np.empty(n_steps + 1)
    path[0] = params.s0
    path[1:] = params.s0 * np.exp(np.cumsum(log_inc))
    return path


def _chunk_sizes(n_paths: int) -> list[int]:
    full, rest = divmod(n_paths, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def _chunk_stats(values: np.ndarray) -> tuple[int, float, float]:
    if values.min() == values.max():
        return len(values), float(values[0]), 0.0
    mean = float(values.mean())
    return len(values), mean, float(((values - mean) ** 2).sum())


def _combine(stats) -> tuple[int, float, float]:
    # pairwise update of (count, mean, sum of squared deviations), applied in chunk order
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in stats:
        total = n + nb
        delta = mb - mean
        mean += delta * nb / total
        m2 += m2b + delta * delta * n * nb / total
        n = total
    return n, mean, m2


def _terminal_draws(spec: OptionSpec, s0: float, seq: np.random.SeedSequence, size: int) -> np.ndarray:
    z = np.random.default_rng(seq).standard_normal(size)
    T, sig = spec.expiry, spec.volatility
    return s0 * np.exp((spec.rate - 0.5 * sig**2) * T + sig * math.sqrt(T) * z)


def _estimate(spec, s0, n_paths, seed, workers, transform) -> McEstimate:
    if n_paths < 2:
        raise ValueError(f"n_paths must be >= 2, got {n_paths}")
    if not s0 > 0:
        raise ValueError(f"s0 must be > 0, got {s0}")
    sizes = _chunk_sizes(n_paths)
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(i):
        return _chunk_stats(transform(_terminal_draws(spec, s0, seqs[i], sizes[i])))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(run, range(len(sizes))))
    else:
        stats = [run(i) for i in range(len(sizes))]
    n, mean, m2 = _combine(stats)
    disc = math.exp(-spec.rate * spec.expiry)
    sd = math.sqrt(m2 / (n - 1))
    return McEstimate(disc * mean, disc * sd / math.sqrt(n), n, seed)


def mc_price(spec: OptionSpec, s0: float, n_paths: int, seed: int = 0, workers: int = 1) -> McEstimate:
    """Discounted mean payoff over ``n_paths`` risk-neutral terminal draws.

    Parameters
    ----------
    spec : OptionSpec
        Contract; the simulation drift is ``spec.rate``.
    s0 : float
        Spot at valuation time (``t = 0``).
    n_paths : int
        Number of terminal draws, >= 2.
    seed : int
        Root seed; part of the returned estimate.
    workers : int
        Threads used to generate chunks. Does not change the result.
    """
    E = spec.strike
    if spec.kind is OptionKind.CALL:
        transform = lambda s: np.maximum(s - E, 0.0)  # noqa: E731
    else:
        transform = lambda s: np.maximum(E - s, 0.0)  # noqa: E731
    return _estimate(spec, s0, n_paths, seed, workers, transform)


def mc_discounted_terminal(spec: OptionSpec, s0: float, n_paths: int, seed: int = 0, workers: int = 1) -> McEstimate:
    """Estimate of ``e^{-rT} E[S_T]``, which equals ``s0`` under the risk-neutral drift."""
    return _estimate(spec, s0, n_paths, seed, workers, lambda s: s)
