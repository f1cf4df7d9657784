"""Write price surfaces for the two reference scenarios over a volatility grid.

    python scripts/figure_surfaces.py --outdir out/
"""

import argparse
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from cnbs.analytic import OptionSpec
from cnbs.bspricer import SpatialGrid, TimeGrid, cn_bs_solve
from cnbs.cli import write_surface_csv


@dataclass
class Scenario:
    name: str
    kind: str
    strike: float
    rate: float
    expiry: float
    m_space: int = 200
    n_time: int = 200
    vols: list = field(default_factory=lambda: list(np.round(np.linspace(0.1, 1.0, 10), 2)))


SCENARIOS = [
    Scenario("call_E10", "call", 10.0, 0.1, 0.5),
    Scenario("put_E100", "put", 100.0, 0.25, 1.0),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="out")
    args = parser.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for sc in SCENARIOS:
        for vol in sc.vols:
            spec = OptionSpec(sc.kind, sc.strike, sc.rate, float(vol), sc.expiry)
            surface = cn_bs_solve(spec, SpatialGrid(4 * sc.strike, sc.m_space), TimeGrid(sc.expiry, sc.n_time))
            path = outdir / f"{sc.name}_sigma{vol:.2f}.csv"
            write_surface_csv(surface, path)
            print(path)


if __name__ == "__main__":
    main()
