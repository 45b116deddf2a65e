"""Command-line interface: ``iltmoments {enumerate,integrals,moments,verify,constants}``.

Exit codes: 0 success, 1 computation failure, 2 usage error, 3 a
verification check outside tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from importlib import resources

from . import __version__, integrals, moments
from .combinatorics import classes_by_label, classify, enumerate_matrices
from .errors import IltError
from .quad import IntegralEstimate

EXIT_OK, EXIT_FAILURE, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2, 3
THREADS_ENV = "ILTMOMENTS_THREADS"
MIN_SAMPLES = 1000
TOL_RANGE = (1e-12, 1e-2)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _threads(text: str) -> int:
    if text == "auto":
        return os.cpu_count() or 1
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1 or 'auto'")
    return n


def _samples(text: str) -> int:
    n = int(float(text))
    if n < MIN_SAMPLES:
        raise argparse.ArgumentTypeError(f"samples must be >= {MIN_SAMPLES}")
    return n


def _tol(text: str) -> float:
    t = float(text)
    if not TOL_RANGE[0] <= t <= TOL_RANGE[1]:
        raise argparse.ArgumentTypeError(f"tol must lie in [{TOL_RANGE[0]}, {TOL_RANGE[1]}]")
    return t


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=_samples, default=10_000_000)
    common.add_argument("--tol", type=_tol, default=1e-4)
    common.add_argument(
        "--threads",
        type=_threads,
        default=os.environ.get(THREADS_ENV, "1"),
        help=f"worker threads (default from ${THREADS_ENV}, else 1)",
    )
    common.add_argument("--constants", metavar="PATH", help="constants file (name value lines)")

    p = _Parser(prog="iltmoments", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("enumerate", parents=[common], help="matrix classes of order r")
    e.add_argument("--r", type=int, required=True)

    i = sub.add_parser("integrals", parents=[common], help="I(F) and script-I(F)")
    i.add_argument("--class", dest="cls", choices=integrals.CLASSES, required=True)
    i.add_argument("--method", choices=integrals.METHODS, default="closed")

    m = sub.add_parser("moments", parents=[common], help="moment report")
    m.add_argument("--method", choices=("parametric", "position"), default="parametric")

    sub.add_parser("verify", parents=[common], help="check against reference values")

    c = sub.add_parser("constants", parents=[common], help="write a constants file")
    c.add_argument("--output", "-o", default="-")
    return p


# ---------------------------------------------------------------- rendering


def _field(value, uncertainty, provenance) -> dict:
    return {"value": value, "uncertainty": uncertainty, "provenance": provenance}


def _from_estimate(est: IntegralEstimate) -> dict:
    tag = integrals.provenance_of(est)
    return _field(est.value, None if tag == "closed-form" else est.error, tag)


def _render(doc: dict, fmt: str, rows: list[dict] | None = None) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    results = doc["results"]
    if fmt == "csv":
        buf = io.StringIO()
        if rows is not None:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        else:
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["name", "value", "uncertainty", "provenance"])
            for name, f in results.items():
                if isinstance(f, dict) and "value" in f:
                    w.writerow([name, repr(f["value"]), f["uncertainty"], f["provenance"]])
        return buf.getvalue()
    lines = []
    if rows is not None:
        keys = list(rows[0])
        widths = {k: max(len(k), *(len(str(r[k])) for r in rows)) for k in keys}
        lines.append("  ".join(k.rjust(widths[k]) for k in keys))
        lines.extend("  ".join(str(r[k]).rjust(widths[k]) for k in keys) for r in rows)
    else:
        for name, f in results.items():
            if isinstance(f, dict) and "value" in f:
                unc = "" if f["uncertainty"] is None else f" +/- {f['uncertainty']:.3g}"
                val = f["value"]
                val = f"{val:.12g}" if isinstance(val, float) else str(val)
                lines.append(f"{name:<16} {val}{unc}  [{f['provenance']}]")
            elif isinstance(f, list):
                lines.extend(f"{name}: {item}" for item in f)
            else:
                lines.append(f"{name:<16} {f}")
    return "\n".join(lines) + "\n"


def _meta(args) -> dict:
    return {
        "command": args.command,
        "seed": args.seed,
        "samples": args.samples,
        "tol": args.tol,
        "version": __version__,
    }


def _document(args, results: dict) -> dict:
    prov = {k: v["provenance"] for k, v in results.items() if isinstance(v, dict) and "provenance" in v}
    return {"meta": _meta(args), "results": results, "provenance": prov}


def _load_constants(args):
    return integrals.load_constants(args.constants) if args.constants else None


def packaged_constants() -> integrals.ConstantsTable:
    text = resources.files("iltmoments").joinpath("data/constants.txt").read_text("utf-8")
    return integrals.parse_constants(text, "iltmoments/data/constants.txt")


# ----------------------------------------------------------------- commands


def cmd_enumerate(args) -> tuple[dict, list[dict], int]:
    classes = classify(enumerate_matrices(args.r))
    classes.sort(key=lambda c: (c.label is None, int(c.label[1:]) if c.label else 0, c.representative))
    rows = []
    for k, c in enumerate(classes, start=1):
        rows.append(
            {
                "class": c.label or f"c{k}",
                "F": ";".join("".join(map(str, row)) for row in c.representative),
                "g": c.weight,
                "cof": c.cofactor,
                "M": c.multiplicity,
            }
        )
    results = {
        "r": args.r,
        "matrix_count": sum(c.weight for c in classes),
        "class_count": len(classes),
        "classes": rows,
    }
    doc = {"meta": _meta(args), "results": results, "provenance": {"classes": "exact"}}
    return doc, rows, EXIT_OK


def cmd_integrals(args) -> tuple[dict, None, int]:
    kw = dict(n_samples=args.samples, seed=args.seed, threads=args.threads)
    results = {}
    label = args.cls
    try:
        results[f"I_{label}"] = _from_estimate(integrals.I_of(label, args.method, **kw))
    except ValueError as exc:
        results[f"I_{label}"] = _field(None, None, f"unavailable: {exc}")
    results[f"script_I_{label}"] = _from_estimate(
        integrals.script_I_of(label, args.method, tol=args.tol, **kw)
    )
    for kind in ("I", "script_I"):
        expr = integrals.closed_expression(kind, label)
        if expr and args.method == "closed":
            results[f"{kind}_{label}_expression"] = expr
    return _document(args, results), None, EXIT_OK


def _report_results(rep: moments.MomentReport) -> dict:
    closed = lambda v: _field(v, None, "closed-form")  # noqa: E731
    results = {
        "m2": closed(rep.m2),
        "m3": closed(rep.m3),
        "m2_closed": closed(rep.m2_closed),
        "m3_closed": closed(rep.m3_closed),
        "gamma1": closed(rep.gamma1),
        "gamma1_closed": closed(rep.gamma1_closed),
    }
    if rep.m4 is not None:
        tags = sorted({rep.constants_used[k][2] for k in moments.M4_INPUTS})
        tag = "+".join(["closed-form"] + tags)
        m4_unc = rep.error_budget["m4"]
        results["m4"] = _field(rep.m4, m4_unc, tag)
        # first-order: d gamma2 = d m4 / m2^2
        results["gamma2"] = _field(rep.gamma2, m4_unc / rep.m2**2, tag)
    for name, (value, unc, tag) in rep.constants_used.items():
        results[name] = _field(value, unc, tag)
    for label, row in rep.table.items():
        for col in ("g", "cof", "M"):
            results[f"{col}_{label}"] = _field(row[col], None, "exact")
    results["diagnostics"] = list(rep.diagnostics)
    results["notes"] = list(rep.notes)
    return results


def cmd_moments(args) -> tuple[dict, None, int]:
    opts = moments.ReportOptions(
        samples=args.samples,
        seed=args.seed,
        tol=args.tol,
        threads=args.threads,
        gamma_method="position" if args.method == "position" else "sector-mc",
        constants=_load_constants(args),
    )
    rep = moments.build_report(opts)
    status = EXIT_FAILURE if rep.m4 is None else EXIT_OK
    return _document(args, _report_results(rep)), None, status


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    target: float
    slack: float  # allowance on top of --tol (e.g. last printed digit)

    def ok(self, tol: float) -> bool:
        return math.isfinite(self.value) and abs(self.value - self.target) <= self.slack + tol


def _printed(name, value, printed: str) -> Check:
    """Compare with a reference value given to a fixed number of digits."""
    decimals = len(printed.split(".")[1]) if "." in printed else 0
    return Check(name, value, float(printed), 10.0**-decimals)


def verification_checks(constants: integrals.ConstantsTable, tol: float) -> list[Check]:
    from .specfun import zeta_f, zeta_f_series

    m2, m3 = moments.moment2(), moments.moment3()
    m2c, m3c = moments.closed_moments()
    checks = [
        _printed("zeta_f", zeta_f(), "0.781302412896486"),
        Check("zeta_f_series", zeta_f_series().estimate, zeta_f(), 1e-12),
        _printed("m2", m2, "0.043035"),
        _printed("m3", m3, "0.010178"),
        _printed("m2_closed", m2c, "0.0649029"),
        _printed("m3_closed", m3c, "-0.016961"),
        _printed("gamma1", moments.skewness(m2, m3), "1.140051529"),
        _printed("gamma1_closed", moments.skewness(m2c, m3c), "-1.0257865"),
    ]
    # closed forms against the independent position-space routes
    for label in ("f1", "f2"):
        for kind, fn in (("I", integrals.I_of), ("script_I", integrals.script_I_of)):
            closed = fn(label, "closed").value
            pos = fn(label, "position").value
            checks.append(Check(f"{kind}_{label}_routes", pos, closed, 1e-9 * abs(closed)))
    for x in (0.5, 1.0, 2.0):
        checks.append(Check(f"k0_convolution_{x}", integrals.k0_convolution_check(x), 0.0, 1e-6))
    expected = moments.EXPECTED_TABLE
    for label, cls in classes_by_label().items():
        got = (cls.weight, cls.cofactor, cls.multiplicity)
        checks.append(Check(f"table_{label}", float(got == expected[label]), 1.0, 0.0))
    rep = moments.build_report(moments.ReportOptions(constants=constants, tol=max(tol, 1e-6)))
    if rep.m4 is not None:
        checks.append(_printed("m4", rep.m4, "0.010063"))
        checks.append(_printed("gamma2", rep.gamma2, "2.4335"))
    return checks


def cmd_verify(args) -> tuple[dict, list[dict], int]:
    constants = _load_constants(args) or packaged_constants()
    checks = verification_checks(constants, args.tol)
    rows = []
    for c in checks:
        rows.append(
            {
                "check": c.name,
                "value": repr(c.value),
                "target": repr(c.target),
                "status": "pass" if c.ok(args.tol) else "FAIL",
            }
        )
    failed = [r["check"] for r in rows if r["status"] != "pass"]
    results = {
        "checks": rows,
        "failed": failed,
        "constants_source": constants.source,
    }
    doc = {"meta": _meta(args), "results": results, "provenance": {"m4": "external-constant"}}
    return doc, rows, EXIT_MISMATCH if failed else EXIT_OK


def cmd_constants(args) -> tuple[str, int]:
    values = integrals.position_constants()
    header = (
        "Graph constants from the deterministic position-space routes.\n"
        f"iltmoments {__version__}"
    )
    return integrals.format_constants(values, header), EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "constants":
            text, status = cmd_constants(args)
            if args.output == "-":
                sys.stdout.write(text)
            else:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(text)
            return status
        handler = {
            "enumerate": cmd_enumerate,
            "integrals": cmd_integrals,
            "moments": cmd_moments,
            "verify": cmd_verify,
        }[args.command]
        doc, rows, status = handler(args)
    except (IltError, ValueError, OSError, FloatingPointError) as exc:
        print(f"iltmoments: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    sys.stdout.write(_render(doc, args.format, rows))
    for d in doc["results"].get("diagnostics", []) or []:
        print(f"diagnostic: {d}", file=sys.stderr)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
