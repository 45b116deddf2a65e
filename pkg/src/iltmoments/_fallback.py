"""Numpy implementations of the hot kernels.

Same signatures as the compiled ``_kernels`` module.  Used when the
extension is not built or when ``ILTMOMENTS_PURE=1``.
"""

from __future__ import annotations

import numpy as np

EULER_GAMMA = 0.57721566490153286061
SERIES_SWITCH = 2.0
_N_SERIES = 16


def _series(x):
    y = 0.25 * x * x
    lg = np.log(0.5 * x) + EULER_GAMMA
    term0 = np.ones_like(x)
    term1 = np.ones_like(x)
    h_k = 0.0
    k0 = np.zeros_like(x)
    k1s = np.zeros_like(x)
    for k in range(_N_SERIES):
        h_k1 = h_k + 1.0 / (k + 1)
        k0 += term0 * (h_k - lg)
        k1s += term1 * (lg - 0.5 * (h_k + h_k1))
        term0 = term0 * y / ((k + 1) * (k + 1))
        term1 = term1 * y / ((k + 1) * (k + 2))
        h_k = h_k1
    return k0, 1.0 / x + 0.5 * x * k1s


def _scaled_cf(x):
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(x)
    q2 = np.ones_like(x)
    a1 = 0.25
    q = np.full_like(x, a1)
    c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, 2000):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = h + delh
        dels = q * delh
        s = s + dels
        if np.all(np.abs(dels / s) < 1e-17):
            break
    h = a1 * h
    k0e = np.sqrt(np.pi / (2.0 * x)) / s
    return k0e, k0e * (x + 0.5 - h) / x


def k0k1(x):
    """Arrays (K0(x), K1(x)) for x > 0 elementwise."""
    x = np.asarray(x, dtype=np.float64)
    k0 = np.empty_like(x)
    k1 = np.empty_like(x)
    lo = x <= SERIES_SWITCH
    if lo.any():
        k0[lo], k1[lo] = _series(x[lo])
    hi = ~lo
    if hi.any():
        xh = x[hi]
        e0, e1 = _scaled_cf(xh)
        scale = np.exp(-xh)
        k0[hi] = e0 * scale
        k1[hi] = e1 * scale
    return k0, k1


def xk1(x):
    """x*K1(x) elementwise for x >= 0, with 1 at x = 0."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    small = x < 1e-4
    xs = x[small]
    with np.errstate(divide="ignore", invalid="ignore"):
        val = 1.0 + 0.5 * xs * xs * (np.log(0.5 * xs) + EULER_GAMMA - 0.5)
    out[small] = np.where(xs == 0.0, 1.0, val)
    big = ~small
    if big.any():
        out[big] = x[big] * k0k1(x[big])[1]
    return out


def symanzik_eval(alpha, monomials):
    """Kirchhoff-Symanzik polynomial at each row of ``alpha`` (shape (m, E))."""
    alpha = np.asarray(alpha, dtype=np.float64)
    monomials = np.asarray(monomials, dtype=np.intp)
    # (m, n_mono, L) gather, product over L, sum over monomials
    return np.prod(alpha[:, monomials], axis=2).sum(axis=1)


def simplex_integrand(u, monomials, power):
    """P(u)^power for simplex points u."""
    return symanzik_eval(u, monomials) ** power


def sector_integrand(u, monomials, power, loops):
    """Hepp-sector integrand on the unit cube of dimension 2E-1.

    The first E-1 coordinates are the sector variables t, the last E are
    random keys whose ordering picks the sector.  Returns
    ``J(t) * P(alpha)^power / (sum alpha)^(E + power*loops)``.
    """
    u = np.asarray(u, dtype=np.float64)
    m, width = u.shape
    n_edges = (width + 1) // 2
    t = u[:, : n_edges - 1]
    perm = np.argsort(u[:, n_edges - 1 :], axis=1, kind="stable")
    ordered = np.ones((m, n_edges))
    ordered[:, 1:] = np.cumprod(t, axis=1)
    alpha = np.empty((m, n_edges))
    np.put_along_axis(alpha, perm, ordered, axis=1)
    jac = np.prod(t ** np.arange(n_edges - 2, -1, -1, dtype=np.float64), axis=1)
    poly = symanzik_eval(alpha, monomials)
    total = alpha.sum(axis=1)
    return jac * poly**power / total ** (n_edges + power * loops)
