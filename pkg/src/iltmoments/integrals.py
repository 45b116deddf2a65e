"""Graph integrals I(F), script-I(F) and the constants of the fourth moment.

For a class F with graph G = G(F) (E edges, loop number L):

    I(F)        = 4^E / (4 pi)^L * Gamma_G(0)
    script-I(F) = 4^(E-1) / (4 pi)^(L-1) * sum_e Gamma_{G - e}(0)

The edge sum collapses over edge orbits.  Three routes are offered:

``closed``      exact expressions in pi, zeta(3) and zeta_f where known;
``parametric``  Monte Carlo of Gamma_G(0) (``gammafn``);
``position``    deterministic position-space evaluation (``radial``) and
                the 3-d cubature of T_D.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import _backend, radial
from .combinatorics import REFERENCE_MATRICES
from .errors import ConstantsParseError, MalformedInputError
from .gammafn import DEFAULT_SAMPLES, GammaQuery, gamma_value
from .multigraph import (
    MultiGraph,
    delete_edge,
    edge_orbits,
    graph_from_matrix,
    isomorphic,
    loop_number,
)
from .quad import IntegralEstimate, adaptive_cubature, combine, exact
from .specfun import zeta3, zeta_f

CLASSES = tuple(REFERENCE_MATRICES)
METHODS = ("closed", "parametric", "position")
# classes sharing a symmetrized graph share every integral
TRANSPOSE_PARTNER = {"f3": "f2", "f7": "f5", "f8": "f6"}

PROVENANCE = {
    "closed-form": "closed-form",
    "monte-carlo": "parametric-mc",
    "cubature": "position-cubature",
    "position": "position-cubature",
    "external": "external-constant",
}


@dataclass(frozen=True)
class IntegralRecord:
    matrix_class: str
    I_value: IntegralEstimate | None
    script_I_value: IntegralEstimate | None
    provenance: str
    expressions: dict = field(default_factory=dict)


def _check_class(label: str) -> str:
    if label not in REFERENCE_MATRICES:
        raise MalformedInputError(f"unknown class {label!r}; expected one of {CLASSES}")
    return label


def class_graph(label: str) -> MultiGraph:
    return graph_from_matrix(REFERENCE_MATRICES[_check_class(label)])


def provenance_of(est: IntegralEstimate) -> str:
    return PROVENANCE.get(est.method, est.method)


# ------------------------------------------------------------ closed forms

CLOSED_I = {
    "f1": ("28*zeta3/pi^3", lambda: 28 * zeta3() / math.pi**3),
    "f2": ("48*zeta3/pi^4", lambda: 48 * zeta3() / math.pi**4),
}
CLOSED_SCRIPT_I = {
    "f1": ("48*zeta_f/pi^2", lambda: 48 * zeta_f() / math.pi**2),
    "f2": ("352*zeta3/(3*pi^3)", lambda: 352 * zeta3() / (3 * math.pi**3)),
}


def closed_expression(kind: str, label: str) -> str | None:
    table = CLOSED_I if kind == "I" else CLOSED_SCRIPT_I
    entry = table.get(TRANSPOSE_PARTNER.get(label, label))
    return entry[0] if entry else None


def t_u() -> IntegralEstimate:
    """T_U = 2 pi ((3 pi / 2) zeta_f)^2; the graph factorizes into two sunsets."""
    return exact(2 * math.pi * (1.5 * math.pi * zeta_f()) ** 2)


# ---------------------------------------------------------------- T_D


def _t_d_integrand(x):
    r1, r2, phi = x[:, 0], x[:, 1], x[:, 2]
    rho = np.sqrt(np.maximum(r1 * r1 + r2 * r2 - 2 * r1 * r2 * np.cos(phi), 0.0))
    k1 = _backend.k0k1(r1)[0]
    k2 = _backend.k0k1(r2)[0]
    # 2 pi * pi from the outer measure and the K0 * K0 identity; phi in
    # [0, pi] counted twice
    return 4 * math.pi**2 * r1 * k1**3 * r2 * k2**2 * _backend.xk1(rho)


def t_d(tol: float = 1e-4) -> IntegralEstimate:
    """T_D by adaptive cubature of its 3-d radial/angular form.

    The angle between the two radial variables only enters through
    rho = |x1 - x2|; rho K1(rho) tends to 1 as rho -> 0.
    """
    if not tol >= 1e-6:
        raise ValueError(f"t_d needs tol >= 1e-6, got {tol}")
    bounds = [(0.0, np.inf), (0.0, np.inf), (0.0, math.pi)]
    return adaptive_cubature(_t_d_integrand, bounds, tol=tol)


def k0_convolution_check(x_norm: float, tol: float = 1e-10) -> float:
    """Relative residual of int d^2y K0(|y|) K0(|x - y|) = pi |x| K1(|x|)."""
    if not x_norm > 0:
        raise ValueError("x_norm must be positive")
    x = float(x_norm)

    def f(p):
        r, phi = p[:, 0], p[:, 1]
        rho = np.sqrt(np.maximum(r * r + x * x - 2 * r * x * np.cos(phi), 0.0))
        with np.errstate(divide="ignore"):
            k_rho = _backend.k0k1(np.where(rho > 0, rho, 1.0))[0]
        return 2 * r * _backend.k0k1(r)[0] * np.where(rho > 0, k_rho, 0.0)

    # split at r = |x| so the log singularity of K0(|x - y|) sits on a corner
    inner = adaptive_cubature(f, [(0.0, x), (0.0, math.pi)], tol=tol)
    outer = adaptive_cubature(f, [(x, np.inf), (0.0, math.pi)], tol=tol)
    lhs = inner.value + outer.value
    rhs = math.pi * float(_backend.xk1(np.array([x]))[0])
    return abs(lhs - rhs) / rhs


# ------------------------------------------------------- the V constants

V_NAMES = ("V5", "V7", "V8")


def _single_orbit(G: MultiGraph, edges) -> None:
    """Assert that deleting any of ``edges`` gives the same graph."""
    for orbit in edge_orbits(G):
        if set(orbit) & set(edges) and set(orbit) != set(edges):
            raise AssertionError(
                f"edges {sorted(edges)} are not one deletion orbit (found {orbit})"
            )


@lru_cache(maxsize=None)
def v_graph(which: str) -> MultiGraph:
    """V8 = G(f5) - e (any e); V7 and V5 = G(f6) - e with e unpaired / paired."""
    if which == "V8":
        G = class_graph("f5")
        _single_orbit(G, range(G.edge_count))
        return delete_edge(G, 0)
    if which not in ("V5", "V7"):
        raise MalformedInputError(f"unknown constant {which!r}; expected one of {V_NAMES}")
    G = class_graph("f6")
    count = {pair: G.edges.count(pair) for pair in G.edges}
    paired = [e for e, pair in enumerate(G.edges) if count[pair] > 1]
    unpaired = [e for e, pair in enumerate(G.edges) if count[pair] == 1]
    chosen = paired if which == "V5" else unpaired
    _single_orbit(G, chosen)
    return delete_edge(G, chosen[0])


def t_d_graph() -> MultiGraph:
    """G(f4) minus one edge of a parallel triple."""
    G = class_graph("f4")
    triple = [e for e, pair in enumerate(G.edges) if G.edges.count(pair) == 3]
    _single_orbit(G, triple)
    return delete_edge(G, triple[0])


def position_to_gamma(G: MultiGraph) -> float:
    """Factor turning a position value of G into Gamma_G(0)."""
    return radial.gamma_from_position(1.0, G.vertex_count, G.edge_count)


@lru_cache(maxsize=None)
def _v_position(which: str, v5_resolution: tuple = (8, 30)) -> IntegralEstimate:
    if which == "V8":
        pos = radial.ring(3, 1)
    elif which == "V7":
        pos = radial.v7_position()
    else:
        pos = radial.v5_position(*v5_resolution)
    est = pos.scaled(position_to_gamma(v_graph(which)))
    return IntegralEstimate(est.value, est.error, est.evaluations, "position")


def gamma_v(
    which: str,
    n_samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    method: str = "sector-mc",
    threads: int = 1,
) -> IntegralEstimate:
    """Gamma_V(0) for V in {V5, V7, V8} by Monte Carlo or the position route."""
    G = v_graph(which)
    if method == "position":
        return _v_position(which)
    return gamma_value(GammaQuery(G, 0, method), n_samples, seed, threads=threads)


def t_d_parametric(n_samples: int = DEFAULT_SAMPLES, seed: int = 0, threads: int = 1):
    """T_D from sector Monte Carlo of its graph, for cross-checking ``t_d``."""
    G = t_d_graph()
    est = gamma_value(GammaQuery(G, 0), n_samples, seed, threads=threads)
    return est.scaled(1.0 / position_to_gamma(G))


# --------------------------------------------------------- I and script-I


def _i_prefactor(G: MultiGraph) -> float:
    return 4.0 ** G.edge_count / (4 * math.pi) ** loop_number(G)


def _position_I(label: str) -> IntegralEstimate:
    base = TRANSPOSE_PARTNER.get(label, label)
    if base == "f1":
        pos = radial.melon4_position()
    elif base == "f2":
        pos = radial.ring(3, 0)
    elif base == "f5":
        pos = radial.ring(4, 0)
    elif base == "f4":
        pos = radial.f4_position()
    else:
        raise ValueError(f"no position route for I({label})")
    G = class_graph(label)
    # I = (2/pi)^E * pos, combining the Gamma/position and I/Gamma factors
    return pos.scaled((2 / math.pi) ** G.edge_count)


def I_of(
    label: str,
    method: str = "closed",
    n_samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    threads: int = 1,
) -> IntegralEstimate:
    """I(F) for a labelled class.

    ``closed`` falls back to ``parametric`` where no closed form is known.
    """
    _check_class(label)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    base = TRANSPOSE_PARTNER.get(label, label)
    if method == "closed" and base in CLOSED_I:
        return exact(CLOSED_I[base][1]())
    if method == "position":
        return _position_I(label)
    G = class_graph(label)
    est = gamma_value(GammaQuery(G, 0), n_samples, seed, threads=threads)
    return est.scaled(_i_prefactor(G))


def _script_prefactor(G: MultiGraph) -> float:
    return 4.0 ** (G.edge_count - 1) / (4 * math.pi) ** (loop_number(G) - 1)


def _position_script_I(label: str, tol: float) -> IntegralEstimate:
    base = TRANSPOSE_PARTNER.get(label, label)
    if base == "f1":
        pos = radial.sunset_position()
        est = pos.scaled(4 * (2 / math.pi) ** 3)
    elif base == "f2":
        # G(f2) - e: two K0^2 bundles and one K0 around a triangle
        est = radial.ring(2, 1).scaled(6 * (2 / math.pi) ** 5)
    elif base == "f4":
        est = combine([(2.0, t_u()), (6.0, t_d(max(tol, 1e-6)))]).scaled((2 / math.pi) ** 7)
    elif base == "f5":
        est = _v_position("V8").scaled(64 / math.pi**4 * 8)
    else:
        est = combine([(4.0, _v_position("V7")), (4.0, _v_position("V5"))])
        est = est.scaled(64 / math.pi**4)
    return IntegralEstimate(est.value, est.error, est.evaluations, "position")


def script_I_of(
    label: str,
    method: str = "closed",
    n_samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    threads: int = 1,
    tol: float = 1e-4,
) -> IntegralEstimate:
    """script-I(F) for a labelled class.

    ``parametric`` sums Monte Carlo Gamma(0) over one edge per deletion
    orbit, weighted by orbit size; orbit k uses seed ``seed + k``.
    """
    _check_class(label)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    base = TRANSPOSE_PARTNER.get(label, label)
    if method == "closed" and base in CLOSED_SCRIPT_I:
        return exact(CLOSED_SCRIPT_I[base][1]())
    if method == "position":
        return _position_script_I(label, tol)
    G = class_graph(label)
    terms = []
    for k, orbit in enumerate(edge_orbits(G)):
        H = delete_edge(G, orbit[0])
        est = gamma_value(GammaQuery(H, 0), n_samples, seed + k, threads=threads)
        terms.append((float(len(orbit)), est))
    return combine(terms).scaled(_script_prefactor(G))


def integral_record(label: str, method: str = "closed", **kwargs) -> IntegralRecord:
    I_est = I_of(label, method, **{k: v for k, v in kwargs.items() if k != "tol"})
    S_est = script_I_of(label, method, **kwargs)
    provenance = sorted({provenance_of(I_est), provenance_of(S_est)})
    expressions = {}
    for kind in ("I", "script_I"):
        expr = closed_expression(kind, label)
        if expr and method == "closed":
            expressions[kind] = expr
    return IntegralRecord(label, I_est, S_est, "+".join(provenance), expressions)


def transpose_consistent(a: str, b: str) -> bool:
    """Whether two classes have isomorphic symmetrized graphs."""
    return isomorphic(class_graph(a), class_graph(b))


# ------------------------------------------------------------ constants file

CONSTANT_NAMES = ("gamma_V5", "gamma_V7", "gamma_V8", "T_D", "zeta_f")
ZETA_F_CONSISTENCY = 1e-12
_NUMBER = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


class ConstantsWarning(UserWarning):
    """A supplied constant disagrees with its internal evaluation."""


@dataclass(frozen=True)
class ConstantsTable:
    values: dict
    source: str | None = None
    text: dict = field(default_factory=dict)  # name -> literal as written

    def __contains__(self, name):
        return name in self.values

    def __getitem__(self, name):
        return self.values[name]

    def get(self, name, default=None):
        return self.values.get(name, default)

    def __len__(self):
        return len(self.values)

    def estimate(self, name: str) -> IntegralEstimate:
        return IntegralEstimate(self.values[name], 0.0, 0, "external")


def parse_constants(text: str, source: str | None = None) -> ConstantsTable:
    values, literal = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ConstantsParseError(f"expected 'name value', got {raw.strip()!r}", lineno)
        name, token = parts
        if name not in CONSTANT_NAMES:
            raise ConstantsParseError(f"unknown constant {name!r}", lineno)
        if name in values:
            raise ConstantsParseError(f"duplicate entry for {name}", lineno)
        if not _NUMBER.match(token):
            raise ConstantsParseError(f"malformed number {token!r}", lineno)
        try:
            digits = len(Decimal(token).as_tuple().digits)
        except InvalidOperation:
            raise ConstantsParseError(f"malformed number {token!r}", lineno) from None
        if digits > 40:
            raise ConstantsParseError(f"{token!r} has more than 40 significant digits", lineno)
        value = float(token)
        if not math.isfinite(value):
            raise ConstantsParseError(f"value {token!r} out of range", lineno)
        values[name] = value
        literal[name] = token
    if "zeta_f" in values and abs(values["zeta_f"] - zeta_f()) > ZETA_F_CONSISTENCY:
        warnings.warn(
            f"zeta_f = {values['zeta_f']!r} differs from the internal value {zeta_f()!r}",
            ConstantsWarning,
            stacklevel=3,
        )
    return ConstantsTable(values, source, literal)


def load_constants(path) -> ConstantsTable:
    """Read ``name value`` lines (``#`` starts a comment)."""
    p = Path(path)
    return parse_constants(p.read_text(encoding="utf-8"), str(p))


def format_constants(values: dict, header: str = "") -> str:
    lines = [f"# {h}" for h in header.splitlines()] if header else []
    width = max(len(n) for n in CONSTANT_NAMES)
    for name in CONSTANT_NAMES:
        if name in values:
            lines.append(f"{name:<{width}} {values[name]!r}")
    return "\n".join(lines) + "\n"


def position_constants(v5_resolution: tuple = (8, 30)) -> dict:
    """Every file constant from the deterministic routes.

    ``v5_resolution`` is (Gauss nodes per s-panel, angular harmonics) for
    the V5 route; the default takes about 20 s, (16, 40) about a minute.
    """
    return {
        "gamma_V5": _v_position("V5", tuple(v5_resolution)).value,
        "gamma_V7": _v_position("V7").value,
        "gamma_V8": _v_position("V8").value,
        "T_D": radial.t_d_position().value,
        "zeta_f": zeta_f(),
    }
