"""Generalized gamma function of a multigraph.

    Gamma_G(n) = int_{alpha >= 0} exp(-sum alpha) P_G(alpha)^(n-1) d alpha

P_G is homogeneous of degree L (the loop number), so the radial scale
integrates out:

    Gamma_G(n) = Gamma(E + (n-1) L) / Gamma(E) * E_u[P_G(u)^(n-1)],

with u uniform on the simplex.  That is the ``simplex-mc`` estimator.  At
n = 0 its second moment can diverge (P^-2 is not integrable near faces
where a bubble shrinks), so ``sector-mc`` splits the projective integral
into the E! orderings of the edge parameters.  In the sector where
alpha_s1 >= alpha_s2 >= ... set alpha_s1 = 1 and alpha_sk = t_2 ... t_k;
the Jacobian prod t_k^(E-k) cancels the leading monomial of P_G in every
sector, leaving a bounded integrand on the unit cube.  The sector is drawn
by ranking E uniform keys.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import _backend
from .errors import PoleError
from .multigraph import MultiGraph, exact_gamma, loop_number
from .quad import IntegralEstimate, mc_expectation

METHODS = ("simplex-mc", "sector-mc", "exact-tree-count")
DEFAULT_SAMPLES = 10_000_000


@dataclass(frozen=True)
class GammaQuery:
    graph: MultiGraph
    n: float
    method: str = "sector-mc"

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"Gamma_G(n) is defined here for n >= 0, got {self.n}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")


def radial_degree(graph: MultiGraph, n: float) -> float:
    """E + (n-1) L, the argument of the ordinary gamma factor."""
    return graph.edge_count + (n - 1) * loop_number(graph)


def gamma_value(
    q: GammaQuery,
    n_samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    *,
    robust: str | None = None,
    threads: int = 1,
) -> IntegralEstimate:
    """Estimate Gamma_G(n).

    ``robust`` is passed to ``mc_expectation``; by default it is ``"auto"``
    at n = 0 (kurtosis-triggered median-of-means) and ``"off"`` elsewhere.
    """
    G = q.graph
    degree = radial_degree(G, q.n)
    if degree <= 0:
        raise PoleError(f"E + (n-1)L = {degree} <= 0: outside the convergent region")
    if q.n == 1:
        # P^0 == 1 and the gamma factors cancel
        return IntegralEstimate(1.0, 0.0, 0, "exact", None)
    if q.method == "exact-tree-count":
        if int(q.n) != q.n:
            raise ValueError("exact evaluation needs an integer n >= 1")
        value: Fraction = exact_gamma(G, int(q.n))
        return IntegralEstimate(float(value), 0.0, 0, "exact", None)

    if robust is None:
        robust = "auto" if q.n == 0 else "off"
    mono = G._symanzik.index_array
    power = float(q.n - 1)
    E = G.edge_count
    if q.method == "simplex-mc":

        def g(u):
            return _backend.simplex_integrand(u, mono, power)

        est = mc_expectation(
            g, E, "dirichlet-simplex", n_samples, seed, robust=robust, threads=threads
        )
        scale = math.exp(math.lgamma(degree) - math.lgamma(E))
    else:
        L = loop_number(G)

        def g(u):
            return _backend.sector_integrand(u, mono, power, L)

        est = mc_expectation(
            g, 2 * E - 1, "unit-cube", n_samples, seed, robust=robust, threads=threads
        )
        scale = math.exp(math.lgamma(E + 1) + math.lgamma(degree))
    return est.scaled(scale)


def gamma_f1_recurrence(n: float, gamma_n: float) -> float:
    """Gamma_{G(f1)}(n+1) from Gamma_{G(f1)}(n)."""
    c = 3 * (3 * n + 2) * (3 * n + 1) * (2 * n + 1) * n / (32 * (n + 1))
    return c * gamma_n + (11 * n + 8) / (8 * (n + 1)) * math.gamma(n + 1) ** 3


def gamma_f2_recurrence(n: float, gamma_f2_n: float, gamma_f1_n: float) -> float:
    """Gamma_{G(f2)}(n+1) from Gamma_{G(f2)}(n) and Gamma_{G(f1)}(n)."""
    denom = 105 + 286 * n + 252 * n**2 + 72 * n**3
    a = (
        4 * n
        * (15 + 137 * n + 510 * n**2 + 988 * n**3 + 1048 * n**4 + 576 * n**5 + 128 * n**6)
        / 3
    )
    b = (
        n
        * (810 + 6905 * n + 22363 * n**2 + 34450 * n**3 + 25268 * n**4 + 7080 * n**5)
        / 32
    )
    c = (840 + 2893 * n + 3228 * n**2 + 1172 * n**3) / 8
    g1 = math.gamma(n + 1)
    return (a * gamma_f2_n + b * g1 * gamma_f1_n + c * g1**4) / denom
