"""The exponential-vector correlation kernel

    K(f, g) = exp(-(c/2) ∫ ln(1 - 4 conj(f(t)) g(t)) dt)

evaluated exactly on step functions and by midpoint quadrature on sampled
functions, together with the a-priori bound on |ln K| obtained from
|ln(1 + x)| <= M_δ |x| for |x| <= 1 - δ.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DimensionMismatch, DomainViolation, IncompatibleGrid, NoConvergence
from .testfn import (
    SampledFunction,
    StepFunction,
    l1_norm_product,
    eval_step,
    refine,
    sample_step,
    sup_norm,
)


@dataclass(frozen=True)
class KernelConfig:
    """SWN constant ``c`` plus quadrature controls.

    ``quad_cells`` is the minimum number of cells of the first quadrature
    level, ``max_refinements`` the number of grid doublings allowed before
    giving up, ``tol`` the relative change between levels accepted as
    converged.
    """

    c: float = 1.0
    quad_cells: int = 1024
    max_refinements: int = 10
    tol: float = 1e-10

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.quad_cells < 1 or self.max_refinements < 0:
            raise ValueError("quadrature settings must be positive")


@dataclass(frozen=True)
class KernelValue:
    value: complex
    abs_log_bound: float
    error_estimate: float = 0.0

    def to_json(self) -> dict:
        return {
            "value": {"re": self.value.real, "im": self.value.imag},
            "abs_log_bound": self.abs_log_bound,
            "error_estimate": self.error_estimate,
        }


def _as_config(cfg) -> KernelConfig:
    if isinstance(cfg, KernelConfig):
        return cfg
    return KernelConfig(c=float(cfg))


def log_bound_constant(delta: float) -> float:
    """``M_δ = -ln(δ) / (1 - δ)``, so that |ln(1+x)| <= M_δ |x| whenever |x| <= 1 - δ."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return -math.log(delta) / (1.0 - delta)


def integrability_check(f, g, cfg) -> float:
    """Bound ``(c/2) M_δ 4 ||conj(f) g||_1`` on |ln K(f, g)|, δ = 1 - 4 ||f||∞ ||g||∞."""
    cfg = _as_config(cfg)
    if f.dim != g.dim:
        raise DimensionMismatch(f"dimension mismatch: {f.dim} vs {g.dim}")
    rho = 4.0 * sup_norm(f) * sup_norm(g)
    if not rho < 1.0:
        raise DomainViolation(f"4 ||f||∞ ||g||∞ = {rho!r} is not below 1")
    l1 = _l1_product(f, g)
    if l1 == 0.0:
        return 0.0
    return 0.5 * cfg.c * log_bound_constant(1.0 - rho) * 4.0 * l1


def _l1_product(f, g) -> float:
    if isinstance(f, StepFunction) and isinstance(g, StepFunction):
        return l1_norm_product(f, g)
    fs, gs, n, lo, hi = _common_samples(f, g)
    return ((hi - lo) / n) * math.fsum(np.abs(fs) * np.abs(gs))


def _step_cells(f: StepFunction, g: StepFunction):
    """Per-cell (conj(a) b, volume), raising DomainViolation where |4 conj(a) b| >= 1."""
    fr, gr = refine(f, g)
    w, vol = [], []
    for (box, a), (_, b) in zip(fr.cells, gr.cells):
        if not (a and b):
            continue
        if 16 * a.abs2() * b.abs2() >= 1:
            raise DomainViolation(
                f"|4 conj(f) g| = {4 * abs(a) * abs(b)!r} >= 1 on cell "
                f"[{float(box.lo[0])}, {float(box.hi[0])})" + ("..." if box.dim > 1 else "")
            )
        w.append(complex(a.conjugate() * b))
        vol.append(float(box.volume))
    return np.array(w, dtype=np.complex128), np.array(vol, dtype=np.float64)


def _pointwise_bound(c: float, w: np.ndarray, vol: np.ndarray) -> float:
    # same bound with δ taken from the largest |4 conj(f) g| actually attained
    if w.size == 0:
        return 0.0
    rho = float(np.max(4.0 * np.abs(w)))
    l1 = math.fsum(np.abs(w) * vol)
    return 0.5 * c * log_bound_constant(1.0 - rho) * 4.0 * l1


def kernel_step(f: StepFunction, g: StepFunction, cfg) -> KernelValue:
    """Closed-form kernel on step functions: ∏ (1 - 4 conj(a) b)^(-c |C| / 2)."""
    cfg = _as_config(cfg)
    if f.dim != g.dim:
        raise DimensionMismatch(f"dimension mismatch: {f.dim} vs {g.dim}")
    w, vol = _step_cells(f, g)
    s = _backend.log_sum(w, vol)
    value = cmath.exp(-0.5 * cfg.c * s)
    try:
        bound = integrability_check(f, g, cfg)
    except DomainViolation:
        bound = _pointwise_bound(cfg.c, w, vol)
    return KernelValue(value, bound, 0.0)


def _common_samples(f, g):
    """Both functions sampled on one grid of one interval."""
    if isinstance(f, StepFunction) and isinstance(g, SampledFunction):
        return _common_samples(_sampled_like(f, g), g)
    if isinstance(f, SampledFunction) and isinstance(g, StepFunction):
        return _common_samples(f, _sampled_like(g, f))
    if (f.lo, f.hi) != (g.lo, g.hi):
        raise IncompatibleGrid(f"domains differ: [{f.lo}, {f.hi}) vs [{g.lo}, {g.hi})")
    n = max(f.n, g.n)
    if n % f.n or n % g.n:
        raise IncompatibleGrid(f"grids {f.n} and {g.n} do not nest")
    return f.resample(n), g.resample(n), n, f.lo, f.hi


def _sampled_like(step: StepFunction, ref: SampledFunction) -> SampledFunction:
    if step.dim != 1:
        raise DimensionMismatch("sampled kernels are one-dimensional")
    lo, hi = ref.lo, ref.hi
    for box in step.support():
        if float(box.lo[0]) < lo or float(box.hi[0]) > hi:
            raise IncompatibleGrid("step function support leaves the sampled domain")
    return SampledFunction(lo, hi, sample_step(step, lo, hi, ref.n),
                           source=functools.partial(eval_step, step))


def _quad_log_integral(fs: np.ndarray, gs: np.ndarray, h: float) -> complex:
    w = np.conj(fs) * gs
    if np.any(16.0 * np.abs(w) ** 2 >= 1.0):
        k = int(np.argmax(np.abs(w)))
        raise DomainViolation(f"|4 conj(f) g| = {4 * abs(w[k])!r} >= 1 at sample {k}")
    return _backend.log_sum(w, np.full(w.shape, h))


def kernel_quad(f, g, cfg) -> KernelValue:
    """Kernel of sampled functions by composite midpoint rule with grid doubling.

    Stops once two successive levels change the kernel by less than
    ``cfg.tol`` relative; the error estimate is that last change.
    """
    cfg = _as_config(cfg)
    if f.dim != g.dim:
        raise DimensionMismatch(f"dimension mismatch: {f.dim} vs {g.dim}")
    rho = 4.0 * sup_norm(f) * sup_norm(g)
    if not rho < 1.0:
        raise DomainViolation(f"4 ||f||∞ ||g||∞ = {rho!r} is not below 1")
    if isinstance(f, StepFunction):
        f = _sampled_like(f, g)
    if isinstance(g, StepFunction):
        g = _sampled_like(g, f)
    fs, gs, n, lo, hi = _common_samples(f, g)
    base = n
    while n < cfg.quad_cells:
        n *= 2
    ff, gg = f, g

    def level(m: int) -> complex:
        h = (hi - lo) / m
        return cmath.exp(-0.5 * cfg.c * _quad_log_integral(ff.resample(m), gg.resample(m), h))

    previous = level(n)
    change = math.inf
    for _ in range(cfg.max_refinements):
        n *= 2
        current = level(n)
        change = abs(current - previous)
        previous = current
        if change <= cfg.tol * abs(current):
            bound = integrability_check(f, g, cfg)
            return KernelValue(current, bound, change)
    raise NoConvergence(
        f"kernel quadrature did not settle within {cfg.max_refinements} doublings "
        f"from {base} cells (last change {change:.3e})"
    )


def kernel(f, g, cfg) -> KernelValue:
    """Exact kernel for two step functions, quadrature otherwise."""
    if isinstance(f, StepFunction) and isinstance(g, StepFunction):
        return kernel_step(f, g, cfg)
    return kernel_quad(f, g, cfg)
