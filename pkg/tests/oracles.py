"""Reference computations that share no code with the package."""

import mpmath as mp
import numpy as np

mp.mp.dps = 30


def norm_cdf_quad(x) -> float:
    """Standard normal CDF by adaptive Gauss-Legendre quadrature of the density."""
    x = mp.mpf(x)
    density = lambda s: mp.exp(-s * s / 2)  # noqa: E731
    return float(mp.quad(density, [-mp.inf, 0, x]) / mp.sqrt(2 * mp.pi))


def dense_solve(lower, diag, upper, rhs) -> np.ndarray:
    """Assemble the full matrix and solve by LU with partial pivoting."""
    a = np.diag(diag) + np.diag(lower, -1) + np.diag(upper, 1)
    return np.linalg.solve(a, rhs)


def heat_closed_form(kind, k_dim, x, tau) -> float:
    """Heat-kernel solution for the transformed payoff as I1 - I2.

    I_j = exp(c x/2 + c^2 tau/4) N(x/sqrt(2 tau) + c sqrt(2 tau)/2) with
    c = k+1 for I1 and c = k-1 for I2; the put follows by symmetry of the
    kernel (flip the sign of the Gaussian argument and swap the terms).
    """
    x, tau = mp.mpf(x), mp.mpf(tau)
    ncdf = lambda z: mp.ncdf(z)  # noqa: E731

    def term(c, sign):
        d = sign * (x / mp.sqrt(2 * tau) + c * mp.sqrt(2 * tau) / 2)
        return mp.exp(c * x / 2 + c * c * tau / 4) * ncdf(d)

    if kind == "call":
        return float(term(k_dim + 1, 1) - term(k_dim - 1, 1))
    return float(term(k_dim - 1, -1) - term(k_dim + 1, -1))


def bs_reference(kind, S, E, r, sigma, tau) -> float:
    """Black-Scholes price at 30 digits through mpmath's normal CDF."""
    S, E, r, sigma, tau = map(mp.mpf, (S, E, r, sigma, tau))
    sq = sigma * mp.sqrt(tau)
    d1 = (mp.log(S / E) + (r + sigma**2 / 2) * tau) / sq
    d2 = d1 - sq
    if kind == "call":
        return float(S * mp.ncdf(d1) - E * mp.exp(-r * tau) * mp.ncdf(d2))
    return float(E * mp.exp(-r * tau) * mp.ncdf(-d2) - S * mp.ncdf(-d1))
