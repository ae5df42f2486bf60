"""Dominated step approximations of sampled functions.

``dominated_step(f, n)`` puts on every cell of an ``n``-cell grid the smallest
sample modulus found in that cell, with the phase of the cell's middle sample.
Hence ``|f_n| <= |f|`` at every sample, and on nested dyadic grids the cell
minima are monotone, so ``|f_n| <= |f_{2n}|`` as well. This is one admissible
construction; any measurable phase would do.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from .errors import DomainViolation, IncompatibleGrid
from .kernel import KernelConfig, kernel_quad, kernel_step
from .numeric import QComplex
from .report import VerificationReport
from .testfn import Box, SampledFunction, StepFunction, eval_step, sup_norm

# relative slack for comparing two float evaluations of the same quantity
ROUNDOFF = 1e-12


@dataclass(frozen=True)
class ApproxSchedule:
    """Strictly increasing grid sizes, each a power of two times the first."""

    levels: tuple

    def __post_init__(self):
        levels = tuple(int(n) for n in self.levels)
        if not levels:
            raise ValueError("schedule needs at least one level")
        if levels[0] < 1:
            raise ValueError("levels must be positive")
        for a, b in zip(levels, levels[1:]):
            if not b > a:
                raise ValueError(f"levels must increase strictly: {a} then {b}")
        for n in levels:
            ratio, rem = divmod(n, levels[0])
            if rem or ratio & (ratio - 1):
                raise ValueError(f"level {n} is not a power-of-two multiple of {levels[0]}")
        object.__setattr__(self, "levels", levels)

    @classmethod
    def dyadic(cls, first_exp: int, last_exp: int) -> "ApproxSchedule":
        return cls(tuple(2**k for k in range(first_exp, last_exp + 1)))

    def __iter__(self):
        return iter(self.levels)

    def __len__(self):
        return len(self.levels)


def _cell_values(f: SampledFunction, n: int) -> np.ndarray:
    if n < 1 or f.n % n:
        raise IncompatibleGrid(f"grid size {n} does not divide the sample grid {f.n}")
    block = f.values.reshape(n, f.n // n)
    mins = np.abs(block).min(axis=1)
    mid = block[:, block.shape[1] // 2]
    mod = np.abs(mid)
    out = np.zeros(n, dtype=np.complex128)
    nz = mod > 0
    out[nz] = mid[nz] * (mins[nz] / mod[nz])
    # rounding in the rescale may push a modulus one ulp above the minimum
    over = np.abs(out) > mins
    while np.any(over):
        out[over] *= 1.0 - 2.0**-52
        over = np.abs(out) > mins
    return out


def dominated_step(f: SampledFunction, n: int) -> StepFunction:
    """Step function on ``n`` uniform cells with ``|f_n| <= |f|`` at every sample."""
    values = _cell_values(f, n)
    lo, hi = mpq(f.lo), mpq(f.hi)
    width = (hi - lo) / n
    edges = [lo + k * width for k in range(n + 1)]
    cells = tuple(
        (Box((edges[k],), (edges[k + 1],)), QComplex(v.real, v.imag))
        for k, v in enumerate(values)
    )
    return StepFunction(1, cells)


def domination_excess(f: SampledFunction, fn: StepFunction) -> float:
    """``max_samples (|f_n| - |f|)``; nonpositive when ``f_n`` is dominated."""
    return float(np.max(np.abs(eval_step(fn, f.midpoints())) - np.abs(f.values)))


def l2_distance(f: SampledFunction, fn: StepFunction, oversample: int = 1) -> float:
    """Midpoint-rule ``||f - f_n||_2`` on the sample grid refined ``oversample`` times."""
    m = f.n * oversample
    t = SampledFunction.midpoints_of(f.lo, f.hi, m)
    diff = f.resample(m) - eval_step(fn, t)
    return math.sqrt(((f.hi - f.lo) / m) * math.fsum(np.abs(diff) ** 2))


def _check_admissible(f) -> None:
    s = sup_norm(f)
    if not s < 0.5:
        raise DomainViolation(f"||f||∞ = {s!r} is not below 1/2")


def convergence_report(f: SampledFunction, sched: ApproxSchedule, cfg: KernelConfig) -> VerificationReport:
    """Kernel of the dominated approximations along ``sched`` against the quadrature kernel."""
    _check_admissible(f)
    reference = kernel_quad(f, f, cfg).value.real
    report = VerificationReport("convergence", ["level", "l2_error", "kernel", "excess"])
    for n in sched:
        fn = dominated_step(f, n)
        report.rows.append({
            "level": n,
            "l2_error": l2_distance(f, fn),
            "kernel": kernel_step(fn, fn, cfg).value.real,
            "excess": domination_excess(f, fn),
        })
    kernels = report.column("kernel")
    last = kernels[-1]
    report.values.update({
        "kernel_quad": reference,
        "final_gap": reference - last,
    })
    slack = ROUNDOFF * reference
    report.checks.update({
        "dominated": all(x <= 0.0 for x in report.column("excess")),
        "kernel_nondecreasing": all(b >= a - slack for a, b in zip(kernels, kernels[1:])),
        "kernel_below_quad": all(k <= reference + slack for k in kernels),
        "final_within_tol": abs(reference - last) <= 10 * cfg.tol * reference,
    })
    return report
