import math

import pytest

from iltmoments import integrals, moments
from iltmoments.errors import IncompleteConstantsError
from iltmoments.moments import (
    M4_COEFFICIENTS,
    ReportOptions,
    build_report,
    closed_moments,
    moment2,
    moment3,
    moment4,
)
from iltmoments.quad import IntegralEstimate
from iltmoments.specfun import zeta2, zeta3, zeta_f, zeta_f_series

POSITION = {
    "gamma_V5": (0.8565905167291212, 1e-8),
    "gamma_V7": (1.0189569061909014, 1e-9),
    "gamma_V8": (1.1103912916056866, 1e-12),
    "T_D": (26.603086153012953, 1e-8),
}


def test_second_and_third():
    assert abs(moment2() - 0.043035) < 1e-6
    assert abs(moment3() - 0.010178) < 1e-6
    assert moment2() > 0
    assert moment2(zeta_f_series().estimate) == pytest.approx(moment2(), abs=1e-12)


def test_third_moment_identity():
    lhs = 16 * math.pi**3 * moment3() + 4 + 15 * zeta_f()
    assert lhs == pytest.approx(311 * zeta3() / 18, abs=1e-12)


def test_skewness_values():
    g1 = moments.skewness(moment2(), moment3())
    assert abs(g1 - 1.140051529) < 1e-9
    m2c, m3c = closed_moments()
    assert abs(m2c - 0.0649029) < 1e-7
    assert abs(m3c + 0.016961) < 1e-6
    assert abs(moments.skewness(m2c, m3c) + 1.0257865) < 1e-7
    assert 8 * math.pi**2 * m2c == pytest.approx(7 * zeta3() - 2 * zeta2(), abs=1e-12)


def test_fourth_moment_from_position_constants():
    res = moment4(*POSITION.values())
    assert 0.010063 <= res.value < 0.010064
    g2 = moments.excess_kurtosis(moment2(), res.value)
    assert 2.4335 <= g2 < 2.4336


def test_fourth_moment_accepts_estimates():
    est = [IntegralEstimate(v, e, 1, "position") for v, e in POSITION.values()]
    assert moment4(*est).value == moment4(*POSITION.values()).value


def test_fourth_moment_missing_inputs():
    with pytest.raises(IncompleteConstantsError) as info:
        moment4(POSITION["gamma_V5"], None, POSITION["gamma_V8"], None)
    assert info.value.missing == ("gamma_V7", "T_D")


def test_propagation_is_linear():
    base = moment4(*POSITION.values())
    doubled = dict(POSITION)
    v, e = doubled["gamma_V8"]
    doubled["gamma_V8"] = (v, 2 * e)
    res = moment4(*doubled.values())
    assert res.contributions["gamma_V8"] == 2 * base.contributions["gamma_V8"]
    expected = math.sqrt(sum((M4_COEFFICIENTS[k] * POSITION[k][1]) ** 2 for k in POSITION))
    assert base.uncertainty == pytest.approx(expected, rel=1e-14)
    assert M4_COEFFICIENTS["gamma_V5"] == M4_COEFFICIENTS["gamma_V7"] == 11 / (16 * math.pi**4)
    assert M4_COEFFICIENTS["T_D"] == pytest.approx(6 / math.pi**3 / (16 * math.pi**4))


def test_fourth_moment_rejects_nonfinite():
    bad = dict(POSITION, T_D=(math.inf, 0.0))
    with pytest.raises(ValueError):
        moment4(*bad.values())


@pytest.fixture(scope="module")
def small_report():
    return build_report(ReportOptions(samples=50_000, seed=3))


def test_report_closed_parts(small_report):
    r = small_report
    assert abs(r.m2 - 0.043035) < 1e-6 and abs(r.m3 - 0.010178) < 1e-6
    assert r.gamma1 == pytest.approx(r.m3 / r.m2**1.5, abs=1e-14)
    assert r.gamma1_closed == pytest.approx(r.m3_closed / r.m2_closed**1.5, abs=1e-14)
    assert r.gamma1 > 0 and r.gamma1_closed < 0
    assert r.diagnostics == ()
    assert r.table["f4"] == {"g": 12, "cof": 4, "M": 4, "gU": "12"}


def test_report_budget_and_provenance(small_report):
    r = small_report
    assert r.error_budget["m2"] == 0.0
    recomputed = math.sqrt(sum(c * c for c in r.m4_contributions.values()))
    assert r.error_budget["m4"] == pytest.approx(recomputed, rel=1e-14)
    assert r.constants_used["gamma_V5"][2] == "internal-mc"
    assert r.constants_used["T_D"][2] == "internal-cubature"
    assert r.constants_used["zeta3"] == (zeta3(), None, "closed-form")
    assert any("skewness" in n for n in r.notes)
    assert any("excess kurtosis" in n for n in r.notes)


def test_report_closed_parts_do_not_depend_on_options(small_report):
    other = build_report(ReportOptions(samples=20_000, seed=99, tol=1e-3))
    for name in ("m2", "m3", "m2_closed", "m3_closed", "gamma1", "gamma1_closed"):
        assert getattr(other, name) == getattr(small_report, name)


def test_report_determinism(small_report):
    again = build_report(ReportOptions(samples=50_000, seed=3, threads=3))
    assert again == small_report


def test_report_with_packaged_constants():
    from iltmoments.cli import packaged_constants

    r = build_report(ReportOptions(constants=packaged_constants()))
    assert abs(r.m4 - 0.010063) <= 1e-5
    assert abs(r.gamma2 - 2.4335) <= 5e-3
    assert all(r.constants_used[k][2] == "external-constant" for k in moments.M4_INPUTS)


def test_report_collects_failures(tmp_path):
    opts = ReportOptions(samples=20_000, constants=integrals.parse_constants("T_D 26.6\n"))
    r = build_report(opts)
    assert r.m4 is not None

    class Broken(integrals.ConstantsTable):
        def estimate(self, name):
            raise RuntimeError("unreadable")

    r = build_report(ReportOptions(samples=20_000, constants=Broken({"T_D": 1.0})))
    assert r.m4 is None
    assert any("T_D" in d and "unreadable" in d for d in r.diagnostics)
    assert any("missing inputs" in d for d in r.diagnostics)


def test_report_options_validation():
    with pytest.raises(ValueError):
        ReportOptions(gamma_method="guess")
