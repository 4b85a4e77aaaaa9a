"""End-to-end verification that a projection sequence and a trace behave as
a Szego pair on declared self-adjoint operators: empirical spectral
integrals against reference integrals, with the accompanying commutator
ratios and trace estimates."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ._util import report_csv
from .diagnostics import FolnerReport, fit_decay_slope, folner_profile
from .spectral import (
    EmpiricalMeasure,
    ReferenceMeasure,
    TestFunction,
    empirical_measure,
    hat,
    integrate,
    kolmogorov_distance,
    monomial,
)
from .traces import (
    NCPolynomial,
    TraceReport,
    canonical_trace,
    nc_adjoint,
    trace_convergence_report,
)


class MissingReferenceError(ValueError):
    """Every operator under test needs a declared reference measure."""


class NotSelfAdjointError(ValueError):
    """Szego-pair tests are defined for self-adjoint elements only."""


def hat_family(lo: float, hi: float, count: int = 17):
    """Piecewise-linear hats on a uniform grid over [lo, hi]."""
    if hi <= lo:
        hi = lo + 1.0
    nodes = np.linspace(lo, hi, count + 2)
    return [hat(nodes[i], nodes[i + 1], nodes[i + 2]) for i in range(count)]


def default_f_family(support, degree: int = 6, hats: int = 17):
    """Monomials up to `degree` plus hats spanning the empirical support."""
    fam = [monomial(k) for k in range(degree + 1)]
    fam += hat_family(support[0], support[1], hats)
    return fam


def moments_reference(a: NCPolynomial, order: int = 6) -> ReferenceMeasure:
    """Moment list tau(a^0..a^order) of a self-adjoint rotation-algebra element."""
    star = nc_adjoint(a)
    for m, k in set(a.monomials()) | set(star.monomials()):
        if abs(a.coefficient(m, k) - star.coefficient(m, k)) > 1e-12:
            raise NotSelfAdjointError("moment reference requires a = a*")
    moments = []
    power = a._coerce(1)
    for _ in range(order + 1):
        t = canonical_trace(power)
        if abs(t.imag) > 1e-10:
            raise NotSelfAdjointError("trace of a power came out non-real")
        moments.append(t.real)
        power = power * a
    return ReferenceMeasure(moments=moments)


@dataclass
class SzegoReport:
    """Per (operator, n, f) integral comparison, Kolmogorov track, summary,
    and the coupled commutator-ratio and trace reports."""

    rows: list = field(default_factory=list)
    kolmogorov_rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    folner: FolnerReport | None = None
    trace: TraceReport | None = None

    COLUMNS = ("label", "n", "d_n", "f", "empirical", "reference", "error")
    KS_COLUMNS = ("label", "n", "d_n", "kolmogorov")

    def to_json(self) -> str:
        payload = {
            "rows": self.rows,
            "kolmogorov": self.kolmogorov_rows,
            "summary": self.summary,
        }
        if self.folner is not None:
            payload["folner"] = json.loads(self.folner.to_json())
        if self.trace is not None:
            payload["trace"] = json.loads(self.trace.to_json())
        return json.dumps(payload, indent=2, sort_keys=True)

    def to_csv(self) -> str:
        return report_csv(self.rows, self.COLUMNS)

    def plot_csv(self) -> str:
        """n vs max f-error per operator, log-log ready."""
        rows = []
        for label in sorted({r["label"] for r in self.rows}):
            for n in sorted({r["n"] for r in self.rows if r["label"] == label}):
                errs = [r["error"] for r in self.rows if r["label"] == label and r["n"] == n]
                d_n = next(r["d_n"] for r in self.rows if r["label"] == label and r["n"] == n)
                rows.append({"label": label, "n": n, "d_n": d_n, "max_error": max(errs)})
        return report_csv(rows, ("label", "n", "d_n", "max_error"))


def szego_pair_test(ops, seq, refs, f_family=None, p_list=(2,), trace_refs=None,
                    sa_tol: float = 1e-10) -> SzegoReport:
    """Quantify weak convergence of empirical spectral measures to references.

    `ops` is a list of (label, spec), `refs` maps label to ReferenceMeasure.
    Hat-function integrals and Kolmogorov distances are reported only for
    references carrying a CDF grid; moments-only references contribute
    moment errors alone.
    """
    ops = list(ops)
    for label, _ in ops:
        if label not in refs:
            raise MissingReferenceError(f"no reference measure for {label!r}")

    report = SzegoReport()
    measures = {}
    for label, op in ops:
        for n, proj in seq:
            measures[(label, n)] = empirical_measure(op, proj, herm_tol=sa_tol)

    for label, op in ops:
        ref = refs[label]
        last_n = seq.n_list[-1]
        if f_family is None:
            support_meas = measures[(label, last_n)]
            fam = default_f_family((support_meas.atoms[0], support_meas.atoms[-1]))
        else:
            fam = f_family
        for n, proj in seq:
            meas = measures[(label, n)]
            for f in fam:
                if ref.xs is None and f.kind != "poly":
                    continue
                emp = integrate(meas, f)
                rv = integrate(ref, f)
                report.rows.append(
                    {
                        "label": label,
                        "n": n,
                        "d_n": proj.rank,
                        "f": f.name,
                        "empirical": emp,
                        "reference": rv,
                        "error": abs(emp - rv),
                    }
                )
            if ref.xs is not None:
                report.kolmogorov_rows.append(
                    {
                        "label": label,
                        "n": n,
                        "d_n": proj.rank,
                        "kolmogorov": kolmogorov_distance(meas, ref),
                    }
                )

    report.rows.sort(key=lambda r: (r["label"], r["n"], r["f"]))
    report.kolmogorov_rows.sort(key=lambda r: (r["label"], r["n"]))

    for label, _ in ops:
        mine = [r for r in report.rows if r["label"] == label]
        ns = sorted({r["n"] for r in mine})
        max_err = {n: max(r["error"] for r in mine if r["n"] == n) for n in ns}
        d_of = {r["n"]: r["d_n"] for r in mine}
        report.summary[label] = {
            "largest_n": ns[-1],
            "max_error_at_largest_n": max_err[ns[-1]],
            "error_decay_slope": fit_decay_slope(
                [d_of[n] for n in ns], [max_err[n] for n in ns]
            ),
        }

    report.folner = folner_profile(ops, seq, p_list=p_list)
    report.trace = trace_convergence_report(ops, seq, refs=trace_refs)
    return report
