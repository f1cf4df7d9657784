"""Empirical order of the CN schemes: model heat problem and Black-Scholes call/put."""

from dataclasses import dataclass

import numpy as np

from cnbs.analytic import OptionSpec
from cnbs.bspricer import convergence_study
from cnbs.fdcore import cn_heat_solve, heat_exact


@dataclass
class Config:
    heat_levels: tuple = (10, 20, 40, 80, 160)
    bs_base: int = 100
    bs_levels: int = 4


def heat_table(cfg: Config):
    print("heat problem, t=0.5, dt=h")
    print(f"{'h':>10} {'max error':>12} {'order':>7}")
    prev = None
    for n in cfg.heat_levels:
        g = cn_heat_solve(n, n // 2, 0.5)[-1]
        err = np.abs(g.values - heat_exact(g.nodes, 0.5)).max()
        order = "" if prev is None else f"{np.log2(prev / err):7.3f}"
        print(f"{1 / n:10.5f} {err:12.4e} {order}")
        prev = err


def bs_table(cfg: Config, spec: OptionSpec, midway: bool):
    report = convergence_study(spec, cfg.bs_base, cfg.bs_base, cfg.bs_levels, strike_midway=midway)
    print(f"\n{spec.kind.value} E={spec.strike} r={spec.rate} sigma={spec.volatility} T={spec.expiry} midway={midway}")
    print(f"{'M':>6} {'N':>6} {'error':>12} {'order':>7}")
    for r in report.rows:
        order = "" if r.order is None else f"{r.order:7.3f}"
        print(f"{r.M:6d} {r.N:6d} {r.error:12.4e} {order}")
    print(f"fitted order {report.fitted_order:.3f}")


if __name__ == "__main__":
    cfg = Config()
    heat_table(cfg)
    for spec in (OptionSpec("call", 10.0, 0.1, 0.4, 0.5), OptionSpec("put", 100.0, 0.25, 0.3, 1.0)):
        for midway in (False, True):
            bs_table(cfg, spec, midway)
