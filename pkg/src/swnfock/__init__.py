"""Square-of-white-noise algebra in its Fock representation.

Exact normal ordering of generator words on the vacuum, the closed-form
exponential-vector kernel, and numerical checks of the extension of
exponential vectors from step functions to bounded L2 functions.
"""

from ._backend import backend_name
from .approx import ApproxSchedule, convergence_report, dominated_step
from .errors import DimensionMismatch, DomainViolation, IncompatibleGrid, NoConvergence
from .expvec import (
    GramReport,
    SeriesDiagnostics,
    Verdict,
    difference_norm_sq,
    divergence_probe,
    exchange_limits_report,
    gram,
    series_vs_closed,
    truncated_inner,
)
from .kernel import (
    KernelConfig,
    KernelValue,
    integrability_check,
    kernel,
    kernel_quad,
    kernel_step,
    log_bound_constant,
)
from .numeric import QComplex, numeric_mode, set_numeric_mode, using_mode
from .report import VerificationReport
from .swnalg import (
    CreatorVector,
    Generator,
    NormalWord,
    adjoint,
    apply_annihilator,
    apply_creator,
    apply_number,
    creator_power_norm,
    inner_creator_powers,
    vacuum_expectation,
)
from .testfn import (
    Box,
    SampledFunction,
    StepFunction,
    conj,
    l2_inner,
    l2_norm,
    pointwise_mul,
    refine,
    scale,
    sup_norm,
)

__version__ = "0.1.0"
