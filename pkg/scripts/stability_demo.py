"""Amplification factors and explicit-scheme blow-up versus Crank-Nicolson decay."""

import math

import numpy as np

from cnbs.fdcore import cn_heat_solve
from cnbs.stability import amp_cn, amp_cn_4c, amp_explicit, explicit_heat_solve

if __name__ == "__main__":
    print(f"{'C':>6} {'A_explicit(pi)':>15} {'A_cn(pi)':>10} {'A_cn_4C(pi)':>12}")
    for c in (0.1, 0.4, 0.5, 0.6, 1.0, 10.0, 100.0):
        print(f"{c:6.2f} {amp_explicit(c, math.pi):15.4f} {amp_cn(c, math.pi):10.4f} {amp_cn_4c(c, math.pi):12.4f}")

    n, steps = 20, 200
    print(f"\nmax|u| after {steps} steps, h=1/{n}")
    for c in (0.4, 0.5, 0.6, 5.0):
        exp_peak = np.abs(explicit_heat_solve(n, steps, c)[-1].values).max()
        dt = c / n**2
        cn_peak = np.abs(cn_heat_solve(n, steps, steps * dt)[-1].values).max()
        print(f"C={c:4.1f}  explicit {exp_peak:12.4e}   crank-nicolson {cn_peak:12.4e}")
