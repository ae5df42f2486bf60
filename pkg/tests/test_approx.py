import numpy as np
import pytest

from swnfock.approx import (
    ApproxSchedule,
    convergence_report,
    domination_excess,
    dominated_step,
    l2_distance,
)
from swnfock.errors import DomainViolation, IncompatibleGrid
from swnfock.kernel import KernelConfig, kernel_step
from swnfock.testfn import SampledFunction, StepFunction, eval_step, sup_norm

from .conftest import gaussian_045


def gaussian(amp):
    return SampledFunction.from_callable(lambda t: amp * np.exp(-t * t), -4, 4, 1024)


class TestSchedule:
    def test_dyadic(self):
        assert ApproxSchedule.dyadic(4, 6).levels == (16, 32, 64)

    def test_power_multiple(self):
        assert len(ApproxSchedule((3, 6, 24))) == 3

    @pytest.mark.parametrize("levels", [(), (8, 8), (16, 8), (4, 12), (0, 2)])
    def test_rejects(self, levels):
        with pytest.raises(ValueError):
            ApproxSchedule(levels)


class TestDominatedStep:
    def test_fixed_point(self):
        step = StepFunction.from_intervals([(0, 0.25, 0.1), (0.25, 0.5, 0.3j), (0.5, 1, -0.2)])
        f = SampledFunction.from_step(step, 0, 1, 64)
        fn = dominated_step(f, 4)
        t = f.midpoints()
        np.testing.assert_array_equal(eval_step(fn, t), eval_step(step, t))

    def test_gaussian_dominated(self):
        f = gaussian(0.4)
        for n in (4, 16, 64):
            fn = dominated_step(f, n)
            assert sup_norm(fn) <= 0.4
            assert domination_excess(f, fn) <= 0

    def test_phase_from_middle_sample(self):
        values = np.array([0.3, 0.2j, 0.1j, 0.4])
        f = SampledFunction(0.0, 1.0, values)
        fn = dominated_step(f, 1)
        (_, a), = fn.cells
        assert complex(a) == pytest.approx(0.1j)

    def test_zero_middle_sample(self):
        f = SampledFunction(0.0, 1.0, np.array([0.3, 0.0, 0.1]))
        assert dominated_step(f, 1).nonzero().is_zero()

    def test_incompatible(self):
        with pytest.raises(IncompatibleGrid):
            dominated_step(gaussian(0.4), 3)

    def test_nested_monotone(self, rng):
        for _ in range(5):
            f = SampledFunction(0.0, 1.0, 0.45 * rng.random(256) * np.exp(2j * np.pi * rng.random(256)))
            t = f.midpoints()
            prev = None
            for n in (4, 16, 64, 256):
                cur = np.abs(eval_step(dominated_step(f, n), t))
                assert np.all(cur <= np.abs(f.values))
                if prev is not None:
                    # moduli equal the nested cell minima up to the rescale's rounding
                    assert np.all(prev <= cur * (1 + 4 * np.finfo(float).eps))
                prev = cur

    def test_l2_error_halves(self):
        f = SampledFunction.from_callable(gaussian_045, -4, 4, 2048)
        errs = [l2_distance(f, dominated_step(f, n), oversample=10) for n in (8, 16, 32, 64, 128, 256)]
        assert all(b <= a for a, b in zip(errs, errs[1:]))


class TestConvergenceReport:
    def test_constant(self):
        f = SampledFunction(0.0, 1.0, np.full(64, 0.25 + 0j))
        rep = convergence_report(f, ApproxSchedule.dyadic(0, 4), KernelConfig())
        assert rep.passed
        assert set(rep.column("kernel")) == {kernel_step(StepFunction.indicator(0, 1, 0.25),
                                                          StepFunction.indicator(0, 1, 0.25), 1).value.real}
        assert max(rep.column("l2_error")) == 0

    def test_zero(self):
        f = SampledFunction(0.0, 1.0, np.zeros(32))
        rep = convergence_report(f, ApproxSchedule.dyadic(1, 5), KernelConfig())
        assert rep.passed
        assert rep.column("kernel") == [1.0] * 5 and rep.column("l2_error") == [0.0] * 5

    def test_gaussian_partial(self):
        f = SampledFunction.from_callable(gaussian_045, -4, 4, 1024)
        rep = convergence_report(f, ApproxSchedule.dyadic(4, 10), KernelConfig())
        assert rep.checks["dominated"] and rep.checks["kernel_nondecreasing"]
        assert rep.checks["kernel_below_quad"]
        errs = rep.column("l2_error")
        assert errs[-1] < errs[0]

    def test_coarse_schedule_fails_tolerance(self):
        f = SampledFunction.from_callable(gaussian_045, -4, 4, 1024)
        rep = convergence_report(f, ApproxSchedule.dyadic(2, 5), KernelConfig())
        assert not rep.checks["final_within_tol"] and not rep.passed

    def test_domain(self):
        f = SampledFunction(0.0, 1.0, np.full(4, 0.5))
        with pytest.raises(DomainViolation):
            convergence_report(f, ApproxSchedule((1, 2)), KernelConfig())
