"""Integration engines.

``adaptive_cubature``
    Globally adaptive subdivision for 1-3 dimensions.  1-d uses the
    Gauss-Kronrod 7/15 pair, 2-d and 3-d the Genz-Malik degree 7/5 pair.
    Both are open rules, so integrable endpoint singularities (log K0 at
    the origin) are never evaluated; refinement moves toward them.
    Semi-infinite axes ``[a, inf)`` are mapped to ``[0, 1)`` by
    ``x = a - log(1 - t)``.

``mc_expectation``
    Streaming Monte Carlo mean with standard error.  Samples are drawn in
    fixed-size chunks, each from its own Philox substream keyed by
    ``(seed, chunk index)``, and chunk statistics are merged in chunk order,
    so results do not depend on the number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, TaintedEstimateError


@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    error: float
    evaluations: int
    method: str
    seed: int | None = None
    estimator: str = "mean"
    kurtosis: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.error) and self.error >= 0.0):
            raise ValueError(f"error must be finite and nonnegative, got {self.error}")

    @property
    def relative_error(self) -> float:
        return self.error / abs(self.value) if self.value else math.inf

    def scaled(self, factor: float) -> "IntegralEstimate":
        return IntegralEstimate(
            self.value * factor,
            self.error * abs(factor),
            self.evaluations,
            self.method,
            self.seed,
            self.estimator,
            self.kurtosis,
        )

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "error": self.error,
            "evaluations": self.evaluations,
            "method": self.method,
            "seed": self.seed,
            "estimator": self.estimator,
        }


def exact(value: float) -> IntegralEstimate:
    """A closed-form value wrapped as an estimate with zero error."""
    return IntegralEstimate(float(value), 0.0, 0, "closed-form")


def combine(terms) -> IntegralEstimate:
    """Sum of independent estimates, errors added in quadrature.

    ``terms`` is an iterable of ``(coefficient, IntegralEstimate)``.
    """
    terms = list(terms)
    value = math.fsum(c * est.value for c, est in terms)
    error = math.sqrt(math.fsum((c * est.error) ** 2 for c, est in terms))
    evals = sum(est.evaluations for _, est in terms)
    methods = sorted({est.method for _, est in terms})
    return IntegralEstimate(value, error, evals, "+".join(methods))


# ---------------------------------------------------------------- cubature

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_GK_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_GK_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GK_WG = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes
_GK_WG[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def _genz_malik(dim: int):
    """Points on [-1, 1]^dim and the degree-7 / degree-5 weight vectors."""
    l2 = math.sqrt(9.0 / 70.0)
    l3 = math.sqrt(9.0 / 10.0)
    l5 = math.sqrt(9.0 / 19.0)
    pts = [np.zeros(dim)]
    w7 = [(12824 - 9120 * dim + 400 * dim**2) / 19683]
    w5 = [(729 - 950 * dim + 50 * dim**2) / 729]
    for lam, a7, a5 in ((l2, 980 / 6561, 245 / 486), (l3, (1820 - 400 * dim) / 19683, (265 - 100 * dim) / 1458)):
        for i in range(dim):
            for s in (1.0, -1.0):
                p = np.zeros(dim)
                p[i] = s * lam
                pts.append(p)
                w7.append(a7)
                w5.append(a5)
    for i in range(dim):
        for j in range(i + 1, dim):
            for si in (1.0, -1.0):
                for sj in (1.0, -1.0):
                    p = np.zeros(dim)
                    p[i] = si * l3
                    p[j] = sj * l3
                    pts.append(p)
                    w7.append(200 / 19683)
                    w5.append(25 / 729)
    for signs in np.ndindex(*(2,) * dim):
        pts.append(np.array([l5 if s == 0 else -l5 for s in signs]))
        w7.append(6859 / 19683 / 2**dim)
        w5.append(0.0)
    return np.array(pts), np.array(w7), np.array(w5), l2, l3


def _map_axes(bounds):
    """Per-axis maps from the unit box to the integration domain."""
    lo = np.zeros(len(bounds))
    hi = np.ones(len(bounds))
    infinite = np.zeros(len(bounds), dtype=bool)
    shift = np.zeros(len(bounds))
    for k, (a, b) in enumerate(bounds):
        a, b = float(a), float(b)
        if math.isinf(a):
            raise ValueError("lower bounds must be finite")
        if math.isinf(b):
            infinite[k] = True
            shift[k] = a
        else:
            if not b > a:
                raise ValueError(f"empty interval {(a, b)}")
            lo[k], hi[k] = a, b
    return lo, hi, infinite, shift


class _Problem:
    def __init__(self, f, bounds):
        self.f = f
        self.dim = len(bounds)
        self.lo, self.hi, self.infinite, self.shift = _map_axes(bounds)
        self.evaluations = 0

    def __call__(self, t):
        # t: (n, dim) in the box; returns f * jacobian of the semi-infinite maps
        x = t.copy()
        jac = np.ones(t.shape[0])
        for k in np.flatnonzero(self.infinite):
            one = 1.0 - t[:, k]
            # nodes rounded onto t = 1 sit at infinity and carry no weight
            end = one <= 0.0
            one[end] = 1e-300
            x[:, k] = self.shift[k] - np.log(one)
            jac /= one
            jac[end] = 0.0
        self.evaluations += t.shape[0]
        vals = np.asarray(self.f(x), dtype=np.float64) * jac
        if not np.all(np.isfinite(vals)):
            raise FloatingPointError("integrand returned non-finite values")
        return vals


def _rule_1d(problem, centers, halfs):
    pts = centers[:, None, :] + halfs[:, None, :] * _GK_NODES[None, :, None]
    vals = problem(pts.reshape(-1, 1)).reshape(len(centers), 15)
    scale = halfs[:, 0]
    k = scale * (vals @ _GK_WK)
    g = scale * (vals @ _GK_WG)
    split_axis = np.zeros(len(centers), dtype=np.intp)
    return k, np.abs(k - g), split_axis


def _make_rule_nd(dim):
    pts, w7, w5, l2, l3 = _genz_malik(dim)
    ratio = (l2 / l3) ** 2

    def rule(problem, centers, halfs):
        n = len(centers)
        x = centers[:, None, :] + halfs[:, None, :] * pts[None, :, :]
        vals = problem(x.reshape(-1, dim)).reshape(n, len(pts))
        vol = np.prod(2.0 * halfs, axis=1)
        i7 = vol * (vals @ w7)
        i5 = vol * (vals @ w5)
        f0 = vals[:, 0]
        # fourth differences along each axis pick the split direction
        diffs = np.empty((n, dim))
        for i in range(dim):
            a = 1 + 2 * i
            b = 1 + 2 * dim + 2 * i
            diffs[:, i] = np.abs(
                vals[:, a] + vals[:, a + 1] - 2 * f0 - ratio * (vals[:, b] + vals[:, b + 1] - 2 * f0)
            )
        # prefer the longest edge among near-ties to avoid slivers
        diffs = diffs * (1.0 + 1e-12 * halfs)
        return i7, np.abs(i7 - i5), np.argmax(diffs, axis=1)

    return rule


def adaptive_cubature(
    f,
    bounds,
    tol: float = 1e-8,
    atol: float = 0.0,
    max_evaluations: int = 20_000_000,
    initial_splits: int = 1,
) -> IntegralEstimate:
    """Integrate ``f`` over a box with finite or ``[a, inf)`` axes.

    ``f`` maps an ``(n, dim)`` array of points to ``n`` values.  Refinement
    stops when the summed region error is below ``max(tol*|I|, atol)``.
    Raises ConvergenceError (with the running estimate) when the evaluation
    budget runs out.
    """
    dim = len(bounds)
    if dim not in (1, 2, 3):
        raise ValueError("adaptive_cubature supports 1 to 3 dimensions")
    problem = _Problem(f, bounds)
    rule = _rule_1d if dim == 1 else _make_rule_nd(dim)

    # the initial grid is a uniform product split of the unit box
    k = max(1, int(initial_splits))
    edges = (np.arange(k) + 0.5) / k
    centers = np.array(np.meshgrid(*([edges] * dim), indexing="ij")).reshape(dim, -1).T
    halfs = np.full_like(centers, 0.5 / k)
    lo, hi = problem.lo, problem.hi
    centers = lo + centers * (hi - lo)
    halfs = halfs * (hi - lo)

    values, errors, axes = rule(problem, centers, halfs)
    while True:
        total = math.fsum(values.tolist())
        err = math.fsum(errors.tolist())
        if err <= max(tol * abs(total), atol):
            return IntegralEstimate(total, err, problem.evaluations, "cubature")
        if problem.evaluations >= max_evaluations:
            best = IntegralEstimate(total, err, problem.evaluations, "cubature")
            raise ConvergenceError(
                f"cubature budget exhausted: error {err:.3g} vs target "
                f"{max(tol * abs(total), atol):.3g}",
                best,
            )
        # split every region carrying a large share of the error
        order = np.argsort(-errors, kind="stable")
        csum = np.cumsum(errors[order])
        n_split = int(np.searchsorted(csum, 0.5 * err)) + 1
        n_split = max(1, min(n_split, len(order), 4096))
        pick = np.sort(order[:n_split])
        keep = np.ones(len(values), dtype=bool)
        keep[pick] = False

        c = centers[pick]
        h = halfs[pick].copy()
        ax = axes[pick]
        rows = np.arange(len(pick))
        h[rows, ax] *= 0.5
        c_lo = c.copy()
        c_hi = c.copy()
        c_lo[rows, ax] -= h[rows, ax]
        c_hi[rows, ax] += h[rows, ax]
        new_c = np.concatenate([c_lo, c_hi])
        new_h = np.concatenate([h, h])
        v, e, a = rule(problem, new_c, new_h)

        centers = np.concatenate([centers[keep], new_c])
        halfs = np.concatenate([halfs[keep], new_h])
        values = np.concatenate([values[keep], v])
        errors = np.concatenate([errors[keep], e])
        axes = np.concatenate([axes[keep], a])


# ------------------------------------------------------------- Monte Carlo

SAMPLERS = ("iid-exponential", "dirichlet-simplex", "unit-cube")
DEFAULT_CHUNK = 1 << 16
KURTOSIS_THRESHOLD = 50.0
DEFAULT_MOM_BATCHES = 32


def substream(seed: int, chunk: int) -> np.random.Generator:
    """Counter-based generator for one chunk, keyed by (seed, chunk)."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(chunk),))
    return np.random.Generator(np.random.Philox(ss))


def _draw(rng, sampler, m, dim):
    if sampler == "iid-exponential":
        return rng.standard_exponential((m, dim))
    if sampler == "dirichlet-simplex":
        x = rng.standard_exponential((m, dim))
        return x / x.sum(axis=1, keepdims=True)
    if sampler == "unit-cube":
        return rng.random((m, dim))
    raise ValueError(f"unknown sampler {sampler!r}; expected one of {SAMPLERS}")


@dataclass
class _Moments:
    """Count, mean and central power sums M2..M4, mergeable in order."""

    n: int = 0
    mean: float = 0.0
    m2: float = 0.0
    m3: float = 0.0
    m4: float = 0.0

    @classmethod
    def of(cls, x: np.ndarray) -> "_Moments":
        if len(x) == 0:
            return cls()
        ref = x[0]
        mean = ref + float(np.mean(x - ref))
        d = x - mean
        d2 = d * d
        return cls(len(x), mean, float(d2.sum()), float((d2 * d).sum()), float((d2 * d2).sum()))

    def merge(self, o: "_Moments") -> "_Moments":
        if o.n == 0:
            return self
        if self.n == 0:
            return o
        na, nb = self.n, o.n
        n = na + nb
        delta = o.mean - self.mean
        mean = self.mean + delta * nb / n
        m2 = self.m2 + o.m2 + delta**2 * na * nb / n
        m3 = (
            self.m3 + o.m3
            + delta**3 * na * nb * (na - nb) / n**2
            + 3.0 * delta * (na * o.m2 - nb * self.m2) / n
        )
        m4 = (
            self.m4 + o.m4
            + delta**4 * na * nb * (na * na - na * nb + nb * nb) / n**3
            + 6.0 * delta**2 * (na * na * o.m2 + nb * nb * self.m2) / n**2
            + 4.0 * delta * (na * o.m3 - nb * self.m3) / n
        )
        return _Moments(n, mean, m2, m3, m4)

    @property
    def variance(self) -> float:
        return self.m2 / (self.n - 1) if self.n > 1 else 0.0

    @property
    def kurtosis(self) -> float | None:
        if self.n < 4 or self.m2 == 0.0:
            return None
        return self.n * self.m4 / self.m2**2


def mc_expectation(
    g,
    dim: int,
    sampler: str,
    n: int,
    seed: int,
    *,
    robust: str = "off",
    batches: int = DEFAULT_MOM_BATCHES,
    chunk_size: int = DEFAULT_CHUNK,
    threads: int = 1,
    kurtosis_threshold: float = KURTOSIS_THRESHOLD,
) -> IntegralEstimate:
    """Estimate E[g(X)] for X drawn from ``sampler`` in ``dim`` dimensions.

    ``robust`` selects the estimator: ``"off"`` is the sample mean with its
    standard error; ``"mom"`` is the median of ``batches`` contiguous batch
    means; ``"auto"`` switches to median-of-means when the sample kurtosis
    exceeds ``kurtosis_threshold``.
    """
    if n < 2:
        raise ValueError("need at least two samples")
    if robust not in ("off", "mom", "auto"):
        raise ValueError(f"robust must be 'off', 'mom' or 'auto', got {robust!r}")
    if sampler not in SAMPLERS:
        raise ValueError(f"unknown sampler {sampler!r}; expected one of {SAMPLERS}")
    n = int(n)
    batches = max(1, min(int(batches), n // 2))
    n_chunks = -(-n // chunk_size)
    # global index boundaries of the median-of-means batches
    bounds = [(b * n) // batches for b in range(batches + 1)]

    def work(c: int):
        start = c * chunk_size
        m = min(chunk_size, n - start)
        x = _draw(substream(seed, c), sampler, m, dim)
        vals = np.asarray(g(x), dtype=np.float64).reshape(m)
        finite = np.isfinite(vals)
        bad = int(m - finite.sum())
        mom = _Moments.of(vals)
        # per-batch sums over the part of this chunk each batch covers
        per_batch = []
        b = max(0, int(np.searchsorted(bounds, start, side="right")) - 1)
        while b < batches and bounds[b] < start + m:
            lo = max(bounds[b], start) - start
            hi = min(bounds[b + 1], start + m) - start
            per_batch.append((b, hi - lo, float(vals[lo:hi].sum())))
            b += 1
        return mom, bad, per_batch

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, range(n_chunks)))
    else:
        results = [work(c) for c in range(n_chunks)]

    total = _Moments()
    rejected = 0
    batch_n = np.zeros(batches, dtype=np.int64)
    batch_sum = np.zeros(batches)
    for mom, bad, per_batch in results:
        rejected += bad
        total = total.merge(mom)
        for b, cnt, s in per_batch:
            batch_n[b] += cnt
            batch_sum[b] += s
    if rejected:
        raise TaintedEstimateError(
            f"{rejected} of {n} samples were not finite", rejected
        )

    kurt = total.kurtosis
    use_mom = robust == "mom" or (
        robust == "auto" and kurt is not None and kurt > kurtosis_threshold
    )
    if use_mom and batches >= 3:
        means = batch_sum / batch_n
        value = float(np.median(means))
        # normal-theory standard error of the median of batch means
        spread = float(np.std(means, ddof=1))
        error = math.sqrt(math.pi / 2.0) * spread / math.sqrt(batches)
        return IntegralEstimate(value, error, n, "monte-carlo", seed, "median-of-means", _opt_float(kurt))
    return IntegralEstimate(
        float(total.mean),
        math.sqrt(total.variance / n),
        n,
        "monte-carlo",
        seed,
        "mean",
        _opt_float(kurt),
    )


def _opt_float(x):
    return None if x is None else float(x)
