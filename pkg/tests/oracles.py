"""Independent numerical oracles shared by the test modules.

These deliberately avoid the library's own integration and closed-form
code paths: plain Gauss-Legendre panels for normal expectations (with the
interval length taken straight from the interval endpoints) and midpoint
Riemann sums for memberships over the parameter axis.
"""

import math

import numpy as np

from fuzzyci.specfun import normal_quantile

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(40)


def quadrature_el(length_fn, theta, stderr, kinks):
    """Gauss-Legendre expectation of a piecewise-linear length function.

    Panels split at the kink locations keep each integrand smooth; +-9
    standard errors truncate the Gaussian tail far below 1e-6.
    """
    lo, hi = theta - 9.0 * stderr, theta + 9.0 * stderr
    points = sorted({lo, hi, *[k for k in kinks if lo < k < hi]})
    total = 0.0
    for p, q in zip(points, points[1:]):
        mid, half = 0.5 * (p + q), 0.5 * (q - p)
        x = mid + half * _NODES
        dens = np.exp(-0.5 * ((x - theta) / stderr) ** 2) / (
            stderr * math.sqrt(2.0 * math.pi)
        )
        lengths = np.array([length_fn(float(v)) for v in x])
        total += half * float(np.sum(_WEIGHTS * dens * lengths))
    return total


def oracle_el_psi_o(theta, fam):
    """Expected length of the o-anchored normal membership, by quadrature."""
    a, b = fam.bounds
    c = normal_quantile(fam.gamma) * fam.stderr
    o = fam.o

    def length(x):
        lo = max(a, min(o, x - c))
        hi = min(b, max(o, x + c))
        return max(0.0, hi - lo)

    return quadrature_el(length, theta, fam.stderr, [a + c, o + c, o - c, b - c])


def oracle_el_nl(theta, fam):
    """Expected length of the truncated two-sided interval, by quadrature."""
    a, b = fam.bounds
    d = normal_quantile(0.5 * (1.0 + fam.gamma)) * fam.stderr

    def length(x):
        return max(0.0, min(b, x + d) - max(a, x - d))

    return quadrature_el(length, theta, fam.stderr, [a - d, a + d, b - d, b + d])


def riemann_mass(psi, lo, hi, n_points, split=()):
    """Midpoint-rule mass of a membership, split at known jump locations."""
    edges = sorted({lo, hi, *[s for s in split if lo < s < hi]})
    total = 0.0
    for a, b in zip(edges, edges[1:]):
        m = max(1, round(n_points * (b - a) / (hi - lo)))
        h = (b - a) / m
        total += h * math.fsum(psi(a + (k + 0.5) * h) for k in range(m))
    return total
