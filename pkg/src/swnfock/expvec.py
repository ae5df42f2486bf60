"""Exponential vectors ψ(f) = Σ_m B*_f^m Φ / m! and their numerical checks.

Truncated inner products come from the normal-ordering engine; the closed form
comes from the kernel module. Everything here compares the two, or follows
them along dominated step approximations of a sampled function.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .approx import ROUNDOFF, ApproxSchedule, dominated_step
from .errors import DomainViolation
from .kernel import KernelConfig, KernelValue, kernel, kernel_quad, kernel_step
from .numeric import FLOAT, mode_zero
from .report import VerificationReport
from .swnalg import creator_series
from .testfn import SampledFunction, StepFunction, sup_norm

DEFAULT_TRUNCATION = 40
PSD_SHIFTS = (0.0, 1e-12, 1e-10)


class Verdict(str, enum.Enum):
    CONVERGED = "Converged"
    DIVERGING = "Diverging"
    UNDETERMINED = "Undetermined"


@dataclass
class SeriesDiagnostics:
    partial_sums: list
    closed_form: KernelValue | None
    residuals: list[float]
    verdict: Verdict
    domain_violation: bool = False

    def to_json(self) -> dict:
        return {
            "partial_sums": list(self.partial_sums),
            "closed_form": None if self.closed_form is None else self.closed_form.to_json(),
            "residuals": list(self.residuals),
            "verdict": self.verdict.value,
            "domain_violation": self.domain_violation,
        }


@dataclass
class GramReport:
    matrix: np.ndarray
    psd_shift: float | None
    verdict: bool
    hermitian: bool = field(default=True)

    def to_json(self) -> dict:
        return {
            "matrix": [[{"re": z.real, "im": z.imag} for z in row] for row in self.matrix.tolist()],
            "psd_shift": self.psd_shift,
            "hermitian": self.hermitian,
            "verdict": self.verdict,
        }


def _partial_sums(f: StepFunction, g: StepFunction, c, M: int, mode: str | None) -> list:
    terms = creator_series(f, g, c, M, mode=mode)
    sums, total = [], mode_zero(mode)
    for t in terms:
        total = total + t
        sums.append(total)
    return sums


def truncated_inner(f: StepFunction, g: StepFunction, c, M: int, mode: str | None = None):
    """``<Σ_{m<=M} B*_f^m Φ/m!, Σ_{m<=M} B*_g^m Φ/m!>``; cross terms vanish by grading."""
    if M < 0:
        raise ValueError("truncation order must be nonnegative")
    return _partial_sums(f, g, c, M, mode)[-1]


def _as_float(x) -> complex:
    return complex(x)


def _check_half(*fs) -> None:
    for f in fs:
        s = sup_norm(f)
        if not s < 0.5:
            raise DomainViolation(f"||f||∞ = {s!r} is not below 1/2")


def series_vs_closed(f: StepFunction, g: StepFunction | None, c, M: int = DEFAULT_TRUNCATION,
                     tol: float = 1e-8, mode: str | None = None) -> SeriesDiagnostics:
    """Partial sums of the exponential-vector series against the closed-form kernel."""
    g = f if g is None else g
    _check_half(f, g)
    closed = kernel_step(f, g, KernelConfig(c=float(c)))
    sums = _partial_sums(f, g, c, M, mode)
    ref = abs(closed.value)
    residuals = [abs(_as_float(s) - closed.value) / ref for s in sums]
    verdict = Verdict.CONVERGED if residuals[-1] < tol else Verdict.UNDETERMINED
    return SeriesDiagnostics(sums, closed, residuals, verdict)


def divergence_probe(f: StepFunction, c, M_max: int, tol: float = 1e-8,
                     mode: str | None = None) -> SeriesDiagnostics:
    """Partial sums of ||Σ_{m<=M} B*_f^m Φ/m!||^2 up to ``M_max``, for any f.

    Diverging: sums non-decreasing and the last one more than 1.5 times the
    one at half the truncation. Converged: agrees with the closed form within
    ``tol``. Undetermined otherwise.
    """
    sums = _partial_sums(f, f, c, M_max, mode)
    closed, violation = None, False
    try:
        closed = kernel_step(f, f, KernelConfig(c=float(c)))
    except DomainViolation:
        violation = True
    reals = [float(_as_float(s).real) for s in sums]
    if closed is not None:
        residuals = [abs(_as_float(s) - closed.value) / abs(closed.value) for s in sums]
    else:
        residuals = []
    nondecreasing = all(b >= a for a, b in zip(reals, reals[1:]))
    half = reals[M_max // 2]
    if residuals and residuals[-1] < tol:
        verdict = Verdict.CONVERGED
    elif nondecreasing and M_max >= 2 and half > 0 and reals[-1] / half > 1.5:
        verdict = Verdict.DIVERGING
    else:
        verdict = Verdict.UNDETERMINED
    return SeriesDiagnostics(sums, closed, residuals, verdict, domain_violation=violation)


def exchange_limits_report(f: SampledFunction, sched: ApproxSchedule, c, M: int = 30,
                           tol: float = 1e-4, cfg: KernelConfig | None = None) -> VerificationReport:
    """Table ``T[n][M'] = ||Σ_{m<=M'} B*_{f_n}^m Φ/m!||^2`` over the schedule.

    Checks: rows non-decreasing in M'; every entry below ``||ψ(f)||^2 + 1``;
    the iterated limits (M' then n, and n then M') agree within ``tol``. The
    M' -> ∞ limit of a row is the closed-form kernel of ``f_n``. Computed in
    float mode.
    """
    _check_half(f)
    cfg = cfg or KernelConfig(c=float(c))
    reference = kernel_quad(f, f, cfg).value.real
    columns = ["level"] + [f"M={m}" for m in range(M + 1)] + ["closed"]
    report = VerificationReport("exchange_limits", columns)
    table, closed = [], []
    for n in sched:
        fn = dominated_step(f, n)
        row = [s.real for s in _partial_sums(fn, fn, c, M, FLOAT)]
        table.append(row)
        closed.append(kernel_step(fn, fn, cfg).value.real)
        report.rows.append({"level": n, **{f"M={m}": x for m, x in enumerate(row)}, "closed": closed[-1]})
    bound = reference + 1.0
    limit_m_then_n = table[-1][-1]
    limit_n_then_m = closed[-1]
    slack = ROUNDOFF * reference
    report.values.update({
        "kernel_quad": reference,
        "dominating_bound": bound,
        "max_entry": max(max(row) for row in table),
        "limit_M_then_n": limit_m_then_n,
        "limit_n_then_M": limit_n_then_m,
        "limit_gap": abs(limit_m_then_n - limit_n_then_m),
    })
    report.checks.update({
        "rows_nondecreasing": all(b >= a for row in table for a, b in zip(row, row[1:])),
        "dominated_bound": all(x <= bound for row in table for x in row),
        "limits_agree": abs(limit_m_then_n - limit_n_then_m) <= tol * reference,
        "limits_match_quad": max(abs(limit_m_then_n - reference),
                                 abs(limit_n_then_m - reference)) <= tol * reference + slack,
    })
    return report


def difference_norm_sq(f, fn: StepFunction, c, tol: float = 1e-12,
                       cfg: KernelConfig | None = None) -> float:
    """``||ψ(f) - ψ(f_n)||^2 = K(f,f) - 2 Re K(f_n,f) + K(f_n,f_n)``, clamped at 0 above -tol."""
    _check_half(f, fn)
    cfg = cfg or KernelConfig(c=float(c))
    kff = kernel(f, f, cfg).value
    knf = kernel(fn, f, cfg).value
    knn = kernel(fn, fn, cfg).value
    value = kff.real - 2.0 * knf.real + knn.real
    scale = max(1.0, abs(kff))
    if value < -tol * scale:
        raise ArithmeticError(f"negative squared distance {value!r}; quadrature too coarse")
    return max(value, 0.0)


def _cholesky_ok(a: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        return False
    return True


def gram(fs: Sequence[StepFunction], c) -> GramReport:
    """Kernel matrix of the exponential vectors of ``fs`` with a shifted-Cholesky PSD test."""
    _check_half(*fs)
    cfg = KernelConfig(c=float(c))
    n = len(fs)
    mat = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        mat[i, i] = kernel_step(fs[i], fs[i], cfg).value.real
        for j in range(i + 1, n):
            z = kernel_step(fs[i], fs[j], cfg).value
            mat[i, j] = z
            mat[j, i] = z.conjugate()
    hermitian = bool(np.array_equal(mat, mat.conj().T))
    eye = np.eye(n)
    shift = next((s for s in PSD_SHIFTS if _cholesky_ok(mat + s * eye)), None)
    return GramReport(mat, shift, verdict=shift is not None and hermitian, hermitian=hermitian)
