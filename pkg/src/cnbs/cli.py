"""Command-line front end.

Subcommands: price, surface, converge, stability, mc, paths, volsweep.
Tabular output is CSV, written to ``--out`` or stdout.

Exit codes: 0 success, 2 validation error (including unwritable output
paths), 3 numerical failure, 4 convergence gate failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from cnbs.analytic import MarketQuery, OptionKind, OptionSpec, option_price
from cnbs.bspricer import (
    PriceSurface,
    SpatialGrid,
    TimeGrid,
    cn_bs_solve,
    convergence_study,
    price_at,
)
from cnbs.fdcore import SingularMatrixError
from cnbs.heatkernel import price_via_heat_kernel
from cnbs.mc import GbmParams, mc_price, simulate_path
from cnbs.stability import amplification_table

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_GATE = 4

COMMANDS = ("price", "surface", "converge", "stability", "mc", "paths", "volsweep")
ENGINES = ("analytic", "pde", "heatkernel", "mc", "all")

SURFACE_HEADER = ["S", "tau", "value"]
CONVERGENCE_HEADER = ["M", "N", "h", "dt", "error", "order"]
STABILITY_HEADER = ["C", "theta", "A_explicit", "A_cn"]
PATHS_HEADER = ["step", "time", "price"]
VOLSWEEP_HEADER = ["sigma", "price_analytic", "price_pde", "abs_diff"]


class ValidationError(ValueError):
    pass


def fmt(x) -> str:
    # 17 significant digits round-trip a double exactly
    return "" if x is None else format(float(x), ".17g")


@dataclass
class RunConfig:
    command: str
    spec: OptionSpec
    spot: float
    time: float = 0.0
    m_space: int = 400
    n_time: int = 400
    s_max: float | None = None
    strike_midway: bool = False
    engine: str = "all"
    seed: int = 0
    out: str | None = None
    levels: int = 3
    min_order: float = 1.5
    paths: int = 1_000_000
    n_steps: int = 252
    drift: float | None = None
    workers: int = 1
    vol_from: float = 0.05
    vol_to: float = 1.0
    vol_steps: int = 20
    c_values: tuple[float, ...] = (0.1, 0.4, 0.5, 0.6, 1.0, 10.0, 100.0)
    n_theta: int = 8

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.engine not in ENGINES:
            raise ValidationError(f"unknown engine {self.engine!r}")
        if self.s_max is None:
            self.s_max = 4.0 * self.spec.strike
        if not self.s_max > self.spec.strike:
            raise ValidationError(f"--smax must exceed the strike, got {self.s_max}")
        if not (math.isfinite(self.spot) and 0 <= self.spot):
            raise ValidationError(f"--spot must be >= 0, got {self.spot}")
        if not 0 <= self.time <= self.spec.expiry:
            raise ValidationError(f"--time must lie in [0, expiry], got {self.time}")
        checks = {
            "--mspace": self.m_space >= 3,
            "--ntime": self.n_time >= 1,
            "--levels": self.levels >= 2,
            "--paths": self.paths >= 2,
            "--nsteps": self.n_steps >= 1,
            "--workers": self.workers >= 1,
            "--vol-steps": self.vol_steps >= 1,
            "--vol-from": 0 < self.vol_from <= self.vol_to,
            "--n-theta": self.n_theta >= 1,
            "--c-values": all(c >= 0 for c in self.c_values),
        }
        bad = [flag for flag, ok in checks.items() if not ok]
        if bad:
            raise ValidationError(f"invalid value for {', '.join(bad)}")

    @property
    def query(self) -> MarketQuery:
        return MarketQuery(self.spot, self.time)

    def grid(self, spec: OptionSpec | None = None) -> tuple[SpatialGrid, TimeGrid]:
        spec = spec or self.spec
        if self.strike_midway:
            grid = SpatialGrid.strike_midway(spec.strike, self.s_max, self.m_space)
        else:
            grid = SpatialGrid(self.s_max, self.m_space)
        return grid, TimeGrid(spec.expiry, self.n_time)


def write_surface_csv(surface: PriceSurface, path) -> None:
    """Write ``S,tau,value`` rows, node-major then time."""
    rows = [
        (fmt(s), fmt(t), fmt(surface.values[i, j]))
        for i, s in enumerate(surface.s_axis)
        for j, t in enumerate(surface.tau_axis)
    ]
    _write_csv(path, SURFACE_HEADER, rows)


def read_surface_csv(path) -> PriceSurface:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != SURFACE_HEADER:
            raise ValueError(f"unexpected surface header {header}")
        data = np.array([[float(x) for x in row] for row in reader])
    s_axis = np.unique(data[:, 0])
    tau_axis = np.unique(data[:, 1])
    values = data[:, 2].reshape(len(s_axis), len(tau_axis))
    return PriceSurface(values, s_axis, tau_axis)


def _write_csv(path, header, rows) -> None:
    if path is None or path == "-":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    Path(path).write_text(buf.getvalue())


def _price(cfg: RunConfig) -> int:
    spec, q = cfg.spec, cfg.query
    engines = ("analytic", "pde", "heatkernel", "mc") if cfg.engine == "all" else (cfg.engine,)
    rows = []
    for engine in engines:
        if engine == "analytic":
            rows.append((engine, fmt(option_price(spec, q)), ""))
        elif engine == "pde":
            surface = cn_bs_solve(spec, *cfg.grid())
            rows.append((engine, fmt(price_at(surface, q.spot, q.time)), ""))
        elif engine == "heatkernel":
            rows.append((engine, fmt(price_via_heat_kernel(spec, q)), ""))
        else:
            remaining = spec.replace(expiry=spec.expiry - q.time) if q.time else spec
            est = mc_price(remaining, q.spot, cfg.paths, cfg.seed, cfg.workers)
            rows.append((engine, fmt(est.mean), fmt(est.std_error)))
    _write_csv(cfg.out, ["engine", "price", "std_error"], rows)
    return EXIT_OK


def _surface(cfg: RunConfig) -> int:
    write_surface_csv(cn_bs_solve(cfg.spec, *cfg.grid()), cfg.out)
    return EXIT_OK


def _converge(cfg: RunConfig) -> int:
    report = convergence_study(
        cfg.spec,
        cfg.m_space,
        cfg.n_time,
        cfg.levels,
        s_max=cfg.s_max,
        probe_spot=cfg.spot,
        strike_midway=cfg.strike_midway,
    )
    rows = [(r.M, r.N, fmt(r.h), fmt(r.dt), fmt(r.error), fmt(r.order)) for r in report.rows]
    _write_csv(cfg.out, CONVERGENCE_HEADER, rows)
    order = report.fitted_order
    if not order >= cfg.min_order:
        print(f"error: fitted order {order:.4f} below --min-order {cfg.min_order}", file=sys.stderr)
        return EXIT_GATE
    return EXIT_OK


def _stability(cfg: RunConfig) -> int:
    thetas = math.pi * np.arange(1, cfg.n_theta + 1) / cfg.n_theta
    rows = [tuple(fmt(v) for v in row) for row in amplification_table(cfg.c_values, thetas)]
    _write_csv(cfg.out, STABILITY_HEADER, rows)
    return EXIT_OK


def _mc(cfg: RunConfig) -> int:
    est = mc_price(cfg.spec, cfg.spot, cfg.paths, cfg.seed, cfg.workers)
    _write_csv(
        cfg.out,
        ["mean", "std_error", "n_paths", "seed"],
        [(fmt(est.mean), fmt(est.std_error), est.n_paths, est.seed)],
    )
    return EXIT_OK


def _paths(cfg: RunConfig) -> int:
    drift = cfg.spec.rate if cfg.drift is None else cfg.drift
    params = GbmParams(drift, cfg.spec.volatility, cfg.spot)
    path = simulate_path(params, cfg.spec.expiry, cfg.n_steps, cfg.seed)
    dt = cfg.spec.expiry / cfg.n_steps
    rows = [(j, fmt(j * dt), fmt(s)) for j, s in enumerate(path)]
    _write_csv(cfg.out, PATHS_HEADER, rows)
    return EXIT_OK


def _volsweep(cfg: RunConfig) -> int:
    sigmas = np.linspace(cfg.vol_from, cfg.vol_to, cfg.vol_steps)

    def one(sigma):
        spec = cfg.spec.replace(volatility=float(sigma))
        exact = option_price(spec, cfg.query)
        pde = price_at(cn_bs_solve(spec, *cfg.grid(spec)), cfg.spot, cfg.time)
        return fmt(sigma), fmt(exact), fmt(pde), fmt(abs(pde - exact))

    # map() preserves input order whatever the completion order
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        rows = list(pool.map(one, sigmas))
    _write_csv(cfg.out, VOLSWEEP_HEADER, rows)
    return EXIT_OK


HANDLERS = {
    "price": _price,
    "surface": _surface,
    "converge": _converge,
    "stability": _stability,
    "mc": _mc,
    "paths": _paths,
    "volsweep": _volsweep,
}


def run(cfg: RunConfig) -> int:
    try:
        return HANDLERS[cfg.command](cfg)
    except (SingularMatrixError, ArithmeticError) as exc:
        print(f"error: numerical failure in {cfg.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: cannot write {cfg.out}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"error: {cfg.command}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_VALIDATION, f"error: {message}\n")


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--kind", choices=["call", "put"], default="call")
    common.add_argument("--strike", type=float, default=10.0)
    common.add_argument("--rate", type=float, default=0.1)
    common.add_argument("--vol", type=float, default=0.4)
    common.add_argument("--expiry", type=float, default=0.5)
    common.add_argument("--spot", type=float, help="default: the strike")
    common.add_argument("--time", type=float, default=0.0, help="valuation time in years from now")
    common.add_argument("--smax", type=float, help="default: 4 x strike")
    common.add_argument("--mspace", type=int, default=400)
    common.add_argument("--ntime", type=int, default=400)
    common.add_argument("--strike-midway", action="store_true")
    common.add_argument("--engine", choices=ENGINES, default="all")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--levels", type=int, default=3)
    common.add_argument("--min-order", type=float, default=1.5)
    common.add_argument("--paths", type=int, default=1_000_000)
    common.add_argument("--nsteps", type=int, default=252)
    common.add_argument("--drift", type=float, help="real-world drift for `paths` (default: rate)")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--vol-from", type=float, default=0.05)
    common.add_argument("--vol-to", type=float, default=1.0)
    common.add_argument("--vol-steps", type=int, default=20)
    common.add_argument("--c-values", type=_float_list, default=RunConfig.c_values)
    common.add_argument("--n-theta", type=int, default=8)

    parser = _Parser(prog="cnbs", description="European option pricing by Crank-Nicolson finite differences")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    try:
        spec = OptionSpec(OptionKind.parse(ns.kind), ns.strike, ns.rate, ns.vol, ns.expiry)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    return RunConfig(
        command=ns.command,
        spec=spec,
        spot=ns.strike if ns.spot is None else ns.spot,
        time=ns.time,
        m_space=ns.mspace,
        n_time=ns.ntime,
        s_max=ns.smax,
        strike_midway=ns.strike_midway,
        engine=ns.engine,
        seed=ns.seed,
        out=ns.out,
        levels=ns.levels,
        min_order=ns.min_order,
        paths=ns.paths,
        n_steps=ns.nsteps,
        drift=ns.drift,
        workers=ns.workers,
        vol_from=ns.vol_from,
        vol_to=ns.vol_to,
        vol_steps=ns.vol_steps,
        c_values=ns.c_values,
        n_theta=ns.n_theta,
    )


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
