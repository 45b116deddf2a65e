"""Moments of the renormalized intersection local time and the closed-walk limit.

m2, m3 and the closed-walk moments are closed forms in pi, zeta(2),
zeta(3) and zeta_f.  m4 additionally needs three Gamma_V(0) constants and
T_D, which ``build_report`` takes from Monte Carlo, from the deterministic
position routes, or from a constants file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import integrals
from .combinatorics import classes_by_label
from .errors import IncompleteConstantsError
from .quad import IntegralEstimate
from .specfun import zeta2, zeta3, zeta_f

M4_INPUTS = ("gamma_V5", "gamma_V7", "gamma_V8", "T_D")
NORM4 = 1.0 / (16 * math.pi**4)
# d m4 / d input
M4_COEFFICIENTS = {
    "gamma_V5": 11 * NORM4,
    "gamma_V7": 11 * NORM4,
    "gamma_V8": 5 * NORM4,
    "T_D": 6 / math.pi**3 * NORM4,
}


def moment2(zf: float | None = None) -> float:
    zf = zeta_f() if zf is None else zf
    return (1 + 3 * zf - zeta2()) / (4 * math.pi**2)


def moment3(zf: float | None = None) -> float:
    zf = zeta_f() if zf is None else zf
    return (311 * zeta3() / 18 - 4 - 15 * zf) / (16 * math.pi**3)


def m4_constant_part(zf: float | None = None) -> float:
    """The part of 16 pi^4 m4 that involves no graph constant."""
    zf = zeta_f() if zf is None else zf
    pi = math.pi
    return (
        9 - pi**2 + pi**4 / 60 + (37 - 3 * pi**2) * zf + 9 * zf**2 - 1243 * zeta3() / 54
    )


@dataclass(frozen=True)
class Moment4:
    value: float
    uncertainty: float
    contributions: dict  # input name -> |coefficient| * input uncertainty


def moment4(gamma_v5=None, gamma_v7=None, gamma_v8=None, t_d=None) -> Moment4:
    """E(beta^4) with first-order propagation of the input uncertainties.

    Inputs are IntegralEstimate instances or ``(value, uncertainty)`` pairs.
    """
    given = dict(zip(M4_INPUTS, (gamma_v5, gamma_v7, gamma_v8, t_d)))
    missing = [k for k, v in given.items() if v is None]
    if missing:
        raise IncompleteConstantsError(missing)
    values, errors = {}, {}
    for name, v in given.items():
        if isinstance(v, IntegralEstimate):
            values[name], errors[name] = v.value, v.error
        else:
            values[name], errors[name] = float(v[0]), float(v[1])
        if not (math.isfinite(values[name]) and math.isfinite(errors[name])):
            raise ValueError(f"{name} must have a finite value and uncertainty")
    value = NORM4 * m4_constant_part() + math.fsum(
        M4_COEFFICIENTS[k] * values[k] for k in M4_INPUTS
    )
    contributions = {k: abs(M4_COEFFICIENTS[k]) * errors[k] for k in M4_INPUTS}
    total = math.sqrt(math.fsum(c * c for c in contributions.values()))
    return Moment4(value, total, contributions)


def closed_moments() -> tuple[float, float]:
    """Second and third moments of the closed-walk limit."""
    m2c = (7 * zeta3() - 2 * zeta2()) / (8 * math.pi**2)
    m3c = -7 * zeta3() / (16 * math.pi**3)
    return m2c, m3c


def skewness(m2: float, m3: float) -> float:
    return m3 / m2**1.5


def excess_kurtosis(m2: float, m4: float) -> float:
    return m4 / m2**2 - 3


# ------------------------------------------------------------------ report

# the table of weights, cofactors and multiplicities for r = 2, 3, 4
EXPECTED_TABLE = {
    "f1": (1, 2, 4),
    "f2": (1, 3, 1),
    "f3": (2, 4, 8),
    "f4": (12, 4, 4),
    "f5": (6, 8, 16),
    "f6": (12, 6, 2),
    "f7": (3, 4, 1),
    "f8": (6, 5, 1),
}

CONSTANT_ROUTES = ("sector-mc", "simplex-mc", "position")


@dataclass(frozen=True)
class ReportOptions:
    samples: int = 10_000_000
    seed: int = 0
    tol: float = 1e-4
    threads: int = 1
    gamma_method: str = "sector-mc"
    constants: integrals.ConstantsTable | None = None

    def __post_init__(self):
        if self.gamma_method not in CONSTANT_ROUTES:
            raise ValueError(f"gamma_method must be one of {CONSTANT_ROUTES}")


@dataclass(frozen=True)
class MomentReport:
    m2: float
    m3: float
    m4: float | None
    m2_closed: float
    m3_closed: float
    gamma1: float
    gamma2: float | None
    gamma1_closed: float
    constants_used: dict  # name -> (value, uncertainty or None, provenance)
    error_budget: dict  # moment -> absolute uncertainty
    m4_contributions: dict = field(default_factory=dict)
    table: dict = field(default_factory=dict)
    diagnostics: tuple = ()
    notes: tuple = ()


def _provenance_tag(est: IntegralEstimate) -> str:
    if est.method == "external":
        return "external-constant"
    if est.method == "monte-carlo":
        return "internal-mc"
    return "internal-cubature"


def _check_table(diagnostics: list) -> dict:
    table = {}
    for label, cls in classes_by_label().items():
        row = (cls.weight, cls.cofactor, cls.multiplicity)
        table[label] = {
            "g": cls.weight,
            "cof": cls.cofactor,
            "M": cls.multiplicity,
            "gU": str(cls.weighted_u),
        }
        if row != EXPECTED_TABLE[label]:
            diagnostics.append(f"table mismatch for {label}: {row} != {EXPECTED_TABLE[label]}")
    return table


def _internal(name: str, opts: ReportOptions, index: int) -> IntegralEstimate:
    if name == "T_D":
        if opts.gamma_method == "position":
            return integrals.radial.t_d_position()
        return integrals.t_d(max(opts.tol, 1e-6))
    which = name.split("_")[1]
    # one substream family per constant
    return integrals.gamma_v(
        which, opts.samples, opts.seed + index, opts.gamma_method, opts.threads
    )


def build_report(options: ReportOptions | None = None) -> MomentReport:
    """Run enumeration checks, the integrals and the moment assembly."""
    opts = options or ReportOptions()
    diagnostics: list[str] = []
    table = _check_table(diagnostics)

    consts = opts.constants
    zf = zeta_f()
    used = {
        "zeta2": (zeta2(), None, "closed-form"),
        "zeta3": (zeta3(), None, "closed-form"),
        "zeta_f": (zf, None, "closed-form"),
    }
    if consts is not None and "zeta_f" in consts:
        # m2 and m3 stay on the internal value; the file entry is a check
        if abs(consts["zeta_f"] - zf) > integrals.ZETA_F_CONSISTENCY:
            diagnostics.append("supplied zeta_f disagrees with the internal value")

    inputs: dict[str, IntegralEstimate] = {}
    for index, name in enumerate(M4_INPUTS):
        try:
            if consts is not None and name in consts:
                est = consts.estimate(name)
            else:
                est = _internal(name, opts, index)
        except Exception as exc:  # reported, not dropped
            diagnostics.append(f"{name}: {type(exc).__name__}: {exc}")
            continue
        inputs[name] = est
        used[name] = (
            est.value,
            None if est.method == "external" else est.error,
            _provenance_tag(est),
        )

    m2 = moment2()
    m3 = moment3()
    m2c, m3c = closed_moments()
    budget = {"m2": 0.0, "m3": 0.0, "m2_closed": 0.0, "m3_closed": 0.0}
    m4 = gamma2 = None
    contributions = {}
    try:
        res = moment4(*(inputs.get(k) for k in M4_INPUTS))
    except IncompleteConstantsError as exc:
        diagnostics.append(str(exc))
    else:
        m4 = res.value
        gamma2 = excess_kurtosis(m2, m4)
        budget["m4"] = res.uncertainty
        contributions = res.contributions

    gamma1 = skewness(m2, m3)
    notes = [
        f"rescaled walk limit: skewness {-gamma1!r}",
    ]
    if gamma2 is not None:
        notes.append(f"rescaled walk limit: excess kurtosis {gamma2!r}")
    return MomentReport(
        m2=m2,
        m3=m3,
        m4=m4,
        m2_closed=m2c,
        m3_closed=m3c,
        gamma1=gamma1,
        gamma2=gamma2,
        gamma1_closed=skewness(m2c, m3c),
        constants_used=used,
        error_budget=budget,
        m4_contributions=contributions,
        table=table,
        diagnostics=tuple(diagnostics),
        notes=tuple(notes),
    )
