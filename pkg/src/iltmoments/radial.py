"""Deterministic position-space routes for rotation-invariant vacuum graphs.

A graph integral in the plane with propagator K0 on every edge,

    pos(G) = int prod_{v != v0} d^2 x_v  prod_e K0(|x_i - x_j|),

is tied to the parametric gamma function by the heat-kernel form of K0:

    pos(G) = (4 pi)^(V-1) / 2^E * Gamma_G(0).

Three tools cover the graphs needed here.

* Ring graphs (a cycle of edge bundles) reduce to one radial Fourier
  integral, with K0 -> 2 pi / (k^2 + 1) and K0^2 -> ``bubble_ft``.
* Convolving a radial function with K0 uses the addition theorem,
  (u * K0)(r) = 2 pi [K0(r) int_0^r rho u I0 + I0(r) int_r^oo rho u K0],
  evaluated on a Gauss-Legendre panel grid with spectral cumulative sums.
* The one non-planar case (K4 with a doubled edge) is expanded in angular
  harmonics about one endpoint of the doubled edge; harmonic m contributes
  a doubly radial integral of I_m K_m kernels.

Large and small Bessel values are carried as logarithms (scipy's
exponentially scaled ive/kve) so that I_m(a) K_m(b) products stay finite
for every harmonic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre
from scipy import special

from . import _backend
from .quad import IntegralEstimate, adaptive_cubature

NODES_PER_PANEL = 24
RADIUS = 50.0


def _cumulative_matrix(n: int) -> np.ndarray:
    """S with (S f)_i = int_{-1}^{x_i} f for f sampled at the Gauss nodes x."""
    x, _ = legendre.leggauss(n)
    vander = legendre.legvander(x, n - 1)
    integ = np.empty((n, n))
    for i in range(n):
        c = np.zeros(n)
        c[i] = 1.0
        integ[:, i] = legendre.legval(x, legendre.legint(c, lbnd=-1))
    return integ @ np.linalg.inv(vander)


_GL_X, _GL_W = legendre.leggauss(NODES_PER_PANEL)
_GL_S = _cumulative_matrix(NODES_PER_PANEL)


def default_breakpoints(radius: float = RADIUS) -> list[float]:
    # geometric panels resolve the log singularities at the origin
    bp = [0.0] + [10.0**k for k in range(-14, 0)] + [0.25, 0.5, 0.75]
    bp += list(np.arange(1.0, 6.0, 0.5)) + list(np.arange(6.0, radius + 1e-9, 1.0))
    return bp


@dataclass(frozen=True)
class PanelGrid:
    """Gauss-Legendre panels on [0, R]; ``nodes`` and ``weights`` are (P, n)."""

    lower: np.ndarray
    upper: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    cumulative: np.ndarray  # (P, n, n) per-panel spectral integration

    @classmethod
    def build(cls, extra=(), radius: float = RADIUS) -> "PanelGrid":
        bp = sorted(set(default_breakpoints(radius)) | {e for e in extra if 0 < e < radius})
        bp = np.asarray(bp)
        a, b = bp[:-1], bp[1:]
        half = (b - a) / 2
        nodes = half[:, None] * (_GL_X[None, :] + 1) + a[:, None]
        weights = half[:, None] * _GL_W[None, :]
        cumulative = half[:, None, None] * _GL_S[None]
        return cls(a, b, nodes, weights, cumulative)

    def plane_integral(self, g) -> float:
        """int d^2x g(|x|) for g sampled at the nodes."""
        return 2 * math.pi * float(np.sum(self.weights * self.nodes * g))


def log_i(m: int, z):
    """log I_m(z), with the leading small-z term where ive underflows."""
    z = np.asarray(z, dtype=np.float64)
    with np.errstate(all="ignore"):
        v = np.log(special.ive(m, z)) + z
    bad = ~np.isfinite(v)
    if bad.any():
        zz = z[bad]
        v[bad] = m * np.log(zz / 2) - math.lgamma(m + 1) + np.log1p(zz * zz / (4 * (m + 1)))
    return v


def log_k(m: int, z):
    """log K_m(z), with the leading small-z term where kve overflows."""
    z = np.asarray(z, dtype=np.float64)
    with np.errstate(all="ignore"):
        v = np.log(special.kve(m, z)) - z
    bad = ~np.isfinite(v)
    if bad.any():
        zz = z[bad]
        v[bad] = math.lgamma(m) - math.log(2) + m * np.log(2 / zz)
    return v


def forward(grid: PanelGrid, f, li, lk):
    """out(r) = int_0^r f(rho) I(rho) K(r) d rho at every node.

    ``li``/``lk`` hold log I and log K at the nodes; any leading axes of
    ``f``, ``li``, ``lk`` are treated as a batch.
    """
    P = grid.nodes.shape[0]
    out = np.empty(np.broadcast_shapes(f.shape, li.shape, lk.shape))
    cend = li[..., -1]  # log I near each panel's right end
    # panel totals scaled by exp(-cend) so that they stay O(1)
    totals = np.sum(grid.weights * f * np.exp(li - cend[..., None]), axis=-1)
    acc = np.zeros(out.shape[:-2])
    for q in range(P):
        inside = np.einsum(
            "ij,...j,...ij->...i",
            grid.cumulative[q],
            f[..., q, :],
            np.exp(li[..., q, None, :] + lk[..., q, :, None]),
        )
        if q:
            inside = inside + acc[..., None] * np.exp(cend[..., q - 1, None] + lk[..., q, :])
            nxt = cend[..., q] - cend[..., q - 1]
            acc = acc * np.exp(-nxt) + totals[..., q]
        else:
            acc = totals[..., 0]
        out[..., q, :] = inside
    return out


def backward(grid: PanelGrid, f, li, lk):
    """out(r) = int_r^R f(rho) K(rho) I(r) d rho at every node."""
    P = grid.nodes.shape[0]
    out = np.empty(np.broadcast_shapes(f.shape, li.shape, lk.shape))
    cstart = lk[..., 0]
    totals = np.sum(grid.weights * f * np.exp(lk - cstart[..., None]), axis=-1)
    acc = np.zeros(out.shape[:-2])
    for q in range(P - 1, -1, -1):
        tail = grid.weights[q][None, :] - grid.cumulative[q]  # int_{x_i}^{b}
        inside = np.einsum(
            "ij,...j,...ij->...i",
            tail,
            f[..., q, :],
            np.exp(lk[..., q, None, :] + li[..., q, :, None]),
        )
        if q < P - 1:
            inside = inside + acc[..., None] * np.exp(cstart[..., q + 1, None] + li[..., q, :])
            acc = acc * np.exp(cstart[..., q + 1] - cstart[..., q]) + totals[..., q]
        else:
            acc = totals[..., q]
        out[..., q, :] = inside
    return out


def convolve_k0(grid: PanelGrid, u) -> np.ndarray:
    """(u * K0)(r) at the grid nodes for a radial u sampled there."""
    li, lk = log_i(0, grid.nodes), log_k(0, grid.nodes)
    f = grid.nodes * u
    return 2 * math.pi * (forward(grid, f, li, lk) + backward(grid, f, li, lk))


def k0_nodes(grid: PanelGrid) -> np.ndarray:
    return _backend.k0k1(grid.nodes.ravel())[0].reshape(grid.nodes.shape)


# Fourier side: f^(k) = int d^2x f(|x|) exp(i k.x)


def propagator_ft(k):
    return 2 * math.pi / (k * k + 1)


def bubble_ft(k):
    """Fourier transform of K0(|x|)^2."""
    k = np.asarray(k, dtype=np.float64)
    s = np.sqrt(k * k + 4)
    small = k < 1e-4
    kk = np.where(small, 1.0, k)
    with np.errstate(all="ignore"):
        big = 4 * math.pi * np.log((s + kk) / 2) / (kk * s)  # (s+k)(s-k) = 4
    return np.where(small, 2 * math.pi * (0.5 - k * k / 12), big)


def ring(bubbles: int, propagators: int, tol: float = 1e-12) -> IntegralEstimate:
    """Position value of a cycle made of K0^2 bundles and single K0 edges."""

    def integrand(k):
        return k * bubble_ft(k) ** bubbles * propagator_ft(k) ** propagators / (2 * math.pi)

    def f(x):
        # k in [0, 1] directly, k = 1/u beyond; the tail decays algebraically
        u = x[:, 0]
        inner = integrand(u)
        with np.errstate(all="ignore"):
            outer = np.where(u > 0, integrand(1 / np.where(u > 0, u, 1.0)) / (u * u), 0.0)
        return inner + outer

    return adaptive_cubature(f, [(0.0, 1.0)], tol=tol)


def sunset_position(tol: float = 1e-12) -> IntegralEstimate:
    """int d^2x K0(|x|)^3, which equals (3 pi / 2) zeta_f."""

    def f(x):
        r = x[:, 0]
        return 2 * math.pi * r * _backend.k0k1(r)[0] ** 3

    return adaptive_cubature(f, [(0.0, np.inf)], tol=tol)


def melon4_position(tol: float = 1e-12) -> IntegralEstimate:
    """int d^2x K0(|x|)^4: two vertices joined by four edges."""

    def f(x):
        r = x[:, 0]
        return 2 * math.pi * r * _backend.k0k1(r)[0] ** 4

    return adaptive_cubature(f, [(0.0, np.inf)], tol=tol)


@lru_cache(maxsize=None)
def _default_grid() -> PanelGrid:
    return PanelGrid.build()


def _grid_estimate(value: float) -> IntegralEstimate:
    # the panel grid is converged far below this; truncation at R dominates
    return IntegralEstimate(value, 1e-10 * abs(value), _default_grid().nodes.size, "position")


@lru_cache(maxsize=None)
def _chain() -> np.ndarray:
    """C = K0^2 * K0 at the default nodes."""
    g = _default_grid()
    return convolve_k0(g, k0_nodes(g) ** 2)


def v7_position() -> IntegralEstimate:
    """K4 minus one edge with two opposite edges doubled: int C^2 K0."""
    g = _default_grid()
    return _grid_estimate(g.plane_integral(_chain() ** 2 * k0_nodes(g)))


def t_d_position() -> IntegralEstimate:
    """int K0^3 (C * K0): a triple bundle closed by K0, K0^2, K0."""
    g = _default_grid()
    k0 = k0_nodes(g)
    return _grid_estimate(g.plane_integral(k0**3 * convolve_k0(g, _chain())))


def f4_position() -> IntegralEstimate:
    """Ring of two triple bundles joined by single edges: int (K0^3 * K0)^2."""
    g = _default_grid()
    u = convolve_k0(g, k0_nodes(g) ** 3)
    return _grid_estimate(g.plane_integral(u * u))


def kite_pi(s: float, harmonics: int = 40) -> float:
    """Pi(s) = int d^2x d^2y phi(x) phi(y) K0(|x - y|), phi(x) = K0(|x|) K0(|x - s|).

    Each harmonic m of K0(|x - s|) and of K0(|x - y|) is an I_m K_m
    product; terms fall off like m^-5 and the remainder after ``harmonics``
    is added as t_M * M / 4.
    """
    g = PanelGrid.build(extra=(s,))
    r = g.nodes
    li = np.stack([log_i(k, r) for k in range(harmonics + 1)])
    lk = np.stack([log_k(k, r) for k in range(harmonics + 1)])
    lis = np.array([log_i(k, np.array([s]))[0] for k in range(harmonics + 1)])[:, None, None]
    lks = np.array([log_k(k, np.array([s]))[0] for k in range(harmonics + 1)])[:, None, None]
    h = np.exp(np.where(r[None] < s, li + lks, lis + lk))
    f = r[None] * k0_nodes(g)[None] * h
    inner = forward(g, f, li, lk)
    terms = 2 * np.sum(g.weights[None] * f * inner, axis=(1, 2))
    total = terms[0] + 2 * terms[1:].sum() + 2 * terms[-1] * harmonics / 4
    return (2 * math.pi) ** 2 * total


def _s_quadrature(nodes_per_panel: int):
    bp = [0.0] + [10.0**k for k in range(-12, 0)]
    bp += [0.25, 0.5, 0.75, 1, 1.25, 1.5, 2, 2.5, 3, 3.5, 4, 5, 6, 7, 8, 9, 10]
    bp += [12, 14, 16, 18, 20, 23, 26, 30]
    x, w = legendre.leggauss(nodes_per_panel)
    s, ws = [], []
    for a, b in zip(bp[:-1], bp[1:]):
        s.extend((b - a) * (x + 1) / 2 + a)
        ws.extend((b - a) * w / 2)
    return np.array(s), np.array(ws)


def v5_position(nodes_per_panel: int = 8, harmonics: int = 30) -> IntegralEstimate:
    """K4 with one doubled edge: int d^2s K0(s)^2 Pi(s)."""
    s, ws = _s_quadrature(nodes_per_panel)
    pi_s = np.array([kite_pi(float(v), harmonics) for v in s])
    k0 = _backend.k0k1(s)[0]
    value = 2 * math.pi * float(np.sum(ws * s * k0**2 * pi_s))
    return IntegralEstimate(value, 1e-7 * value, len(s), "position")


def gamma_from_position(pos: float, vertex_count: int, edge_count: int) -> float:
    """Gamma_G(0) = 2^E / (4 pi)^(V-1) * pos(G)."""
    return pos * 2.0**edge_count / (4 * math.pi) ** (vertex_count - 1)
