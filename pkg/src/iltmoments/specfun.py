"""Modified Bessel functions K0, K1 and the constants zeta(2), zeta(3), zeta_f.

The scalar routines here are the pure-Python reference.  Array versions
used by the integrators live in the kernel backend (see ``_backend``) and
are tested against these.

K0/K1 use the ascending series for ``x <= 2`` and Steed's continued
fraction (Temme's CF2 form) for ``x > 2``.  The continued fraction returns
exponentially scaled values directly, so there is no cancellation on the
large-x side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061
SERIES_SWITCH = 2.0

# B_2k for the trigamma asymptotic series
_BERNOULLI = (1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6)


def _k01_series(x: float) -> tuple[float, float]:
    y = 0.25 * x * x
    lg = math.log(0.5 * x) + EULER_GAMMA
    term0 = 1.0  # y^k / (k!)^2
    term1 = 1.0  # y^k / (k! (k+1)!)
    h_k = 0.0
    k0 = 0.0
    k1s = 0.0
    k = 0
    while True:
        h_k1 = h_k + 1.0 / (k + 1)
        c0 = term0 * (h_k - lg)
        c1 = term1 * (lg - 0.5 * (h_k + h_k1))
        k0 += c0
        k1s += c1
        if abs(term0) < 1e-18 * abs(k0) and k > 2:
            break
        k += 1
        term0 *= y / (k * k)
        term1 *= y / (k * (k + 1))
        h_k = h_k1
    return k0, 1.0 / x + 0.5 * x * k1s


def _k01_scaled_cf(x: float) -> tuple[float, float]:
    """exp(x)*K0(x), exp(x)*K1(x) by Steed's method; valid for x >= 1."""
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, 2000):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < 1e-17:
            break
    h *= a1
    k0e = math.sqrt(math.pi / (2.0 * x)) / s
    return k0e, k0e * (x + 0.5 - h) / x


def _check_domain(x: float) -> float:
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"K0/K1 need x > 0, got {x!r}")
    return x


def bessel_k0(x: float) -> float:
    """Modified Bessel function of the second kind, order 0."""
    x = _check_domain(x)
    if x <= SERIES_SWITCH:
        return _k01_series(x)[0]
    if x > 745.0:
        return 0.0
    return _k01_scaled_cf(x)[0] * math.exp(-x)


def bessel_k1(x: float) -> float:
    """Modified Bessel function of the second kind, order 1."""
    x = _check_domain(x)
    if x <= SERIES_SWITCH:
        return _k01_series(x)[1]
    if x > 745.0:
        return 0.0
    return _k01_scaled_cf(x)[1] * math.exp(-x)


def x_bessel_k1(x: float) -> float:
    """x*K1(x), with the removable point x=0 filled in (value 1).

    Below 1e-4 the two-term expansion
    ``1 + (x^2/2)(ln(x/2) + gamma - 1/2)`` is used; the next term is O(x^4 ln x).
    """
    x = float(x)
    if x < 0.0:
        raise DomainError(f"x*K1(x) needs x >= 0, got {x!r}")
    if x < 1e-4:
        if x == 0.0:
            return 1.0
        return 1.0 + 0.5 * x * x * (math.log(0.5 * x) + EULER_GAMMA - 0.5)
    return x * bessel_k1(x)


def trigamma(x: float) -> float:
    """psi_1(x) for x > 0 via upward recurrence then the asymptotic series."""
    if not x > 0.0:
        raise DomainError(f"trigamma implemented for x > 0 only, got {x!r}")
    shift = []
    while x < 20.0:
        shift.append(1.0 / (x * x))
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    tail = 0.0
    p = inv * inv2  # x^-(2k+1) for k = 1
    for b2k in _BERNOULLI:
        tail += b2k * p
        p *= inv2
    return math.fsum(shift + [inv, 0.5 * inv2, tail])


def zeta2() -> float:
    return math.pi**2 / 6.0


def zeta3() -> float:
    """Apery's constant from the central-binomial series (5/2) sum (-1)^(k+1)/(k^3 C(2k,k))."""
    terms = []
    for k in range(1, 40):
        t = 1.0 / (k**3 * math.comb(2 * k, k))
        terms.append(t if k % 2 else -t)
        if t < 1e-20:
            break
    return 2.5 * math.fsum(terms)


def zeta_f() -> float:
    """sum_{p>=0} 1/(1+3p)^2 - 1/(2+3p)^2, as (psi_1(1/3) - psi_1(2/3))/9."""
    return (trigamma(1.0 / 3.0) - trigamma(2.0 / 3.0)) / 9.0


@dataclass(frozen=True)
class SeriesBracket:
    partial: float
    lower: float
    upper: float

    @property
    def estimate(self) -> float:
        return 0.5 * (self.lower + self.upper)


def zeta_f_series(n_terms: int = 10**6) -> SeriesBracket:
    """Direct partial sum of the zeta_f series with integral bounds on the tail.

    The summand is positive and decreasing, so
    ``int_N^inf t <= sum_{p>=N} t(p) <= t(N) + int_N^inf t``.
    """
    import numpy as np

    p = np.arange(n_terms, dtype=np.float64)
    terms = 1.0 / (1.0 + 3.0 * p) ** 2 - 1.0 / (2.0 + 3.0 * p) ** 2
    partial = math.fsum(terms.tolist())
    n = float(n_terms)
    integral = (1.0 / (1.0 + 3.0 * n) - 1.0 / (2.0 + 3.0 * n)) / 3.0
    t_n = 1.0 / (1.0 + 3.0 * n) ** 2 - 1.0 / (2.0 + 3.0 * n) ** 2
    return SeriesBracket(partial, partial + integral, partial + integral + t_n)


@dataclass(frozen=True)
class SpecialConstants:
    zeta2: float
    zeta3: float
    zeta_f: float
    pi: float = math.pi


def special_constants() -> SpecialConstants:
    return SpecialConstants(zeta2=zeta2(), zeta3=zeta3(), zeta_f=zeta_f())
