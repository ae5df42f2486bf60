import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swnfock.approx import dominated_step
from swnfock.errors import DimensionMismatch
from swnfock.numeric import QComplex, using_mode
from swnfock.swnalg import (
    CreatorVector,
    Generator,
    Kind,
    adjoint,
    apply_annihilator,
    apply_creator,
    apply_number,
    creator_power_norm,
    creator_series,
    inner_creator_powers,
    vacuum_expectation,
    word_from_json,
    word_to_json,
)
from swnfock.testfn import SampledFunction, StepFunction, l2_inner

from .conftest import random_step, step_functions

S = StepFunction
B, Bs, N = Generator.annihilator, Generator.creator, Generator.number
PHI = CreatorVector.vacuum()
I01 = S.indicator(0, 1)


def single_mode_norms(sigma2, t, c, m_max):
    """Independent oracle: r_m = m (2ct + 4(m-1)) |σ|^2 r_{m-1}, r_0 = 1."""
    from fractions import Fraction

    r = [Fraction(1)]
    for m in range(1, m_max + 1):
        r.append(m * (2 * Fraction(c) * Fraction(t) + 4 * (m - 1)) * Fraction(sigma2) * r[-1])
    return r


class TestCreator:
    def test_on_vacuum(self):
        v = apply_creator(I01, PHI)
        (w,) = v.words()
        assert w.coefficient == 1 and w.labels == (I01,)

    def test_power(self):
        v = PHI
        for _ in range(3):
            v = apply_creator(I01, v)
        (w,) = v.words()
        assert w.labels == (I01,) * 3

    def test_linearity(self):
        f, h1, h2 = I01, S.indicator(0, 2, 0.5), S.indicator(1, 3, 1j)
        u = apply_creator(h1, PHI)
        w = apply_creator(h2, PHI)
        assert apply_creator(f, u + w) == apply_creator(f, u) + apply_creator(f, w)

    def test_label_scaling_merges(self):
        # B*_{2h} = 2 B*_h
        h, h2 = S.indicator(0, 1, 0.25), S.indicator(0, 1, 0.5)
        assert apply_creator(h2, PHI) == apply_creator(h, PHI).scale(2)

    def test_creators_commute(self):
        f, g = S.indicator(0, 1, 0.5), S.indicator(0.5, 2, 1j)
        assert apply_creator(f, apply_creator(g, PHI)) == apply_creator(g, apply_creator(f, PHI))


class TestNumber:
    def test_kills_vacuum(self):
        assert apply_number(I01, PHI).is_zero()

    def test_single_commutator(self):
        sigma = S.indicator(0, 1, 0.3 - 0.2j)
        v = apply_creator(sigma, PHI)
        assert apply_number(I01, v) == v.scale(2)

    def test_eigenvalue_two_k(self):
        v = apply_creator(I01, apply_creator(I01, PHI))
        assert apply_number(I01, v) == v.scale(4)

    def test_label_product(self):
        g, h = S.indicator(0, 2, 0.5), S.indicator(1, 3, 1)
        expected = apply_creator(g * h, PHI).scale(2)
        assert apply_number(g, apply_creator(h, PHI)) == expected


class TestAnnihilator:
    def test_kills_vacuum(self):
        assert apply_annihilator(I01, PHI, 1).is_zero()

    def test_one_step(self):
        v = apply_annihilator(I01, apply_creator(I01, PHI), 1)
        assert v == PHI.scale(2)

    def test_antilinear_in_label(self):
        f, g = S.indicator(0, 1, 1j), S.indicator(0, 2, 0.5)
        v = apply_annihilator(f, apply_creator(g, PHI), 1)
        assert v.vacuum_coefficient == 2 * l2_inner(f, g)

    @pytest.mark.parametrize("t,c", [(1, 1), (2, 0.5), (0.75, 3)])
    def test_two_creators(self, t, c):
        f = S.indicator(0, t)
        v = apply_annihilator(f, apply_creator(f, apply_creator(f, PHI)), c)
        expected = apply_creator(f, PHI).scale(QComplex(4) * QComplex(c) * QComplex(t) + 8)
        assert v == expected

    def test_two_creators_value_twelve(self):
        v = apply_annihilator(I01, apply_creator(I01, apply_creator(I01, PHI)), 1)
        assert v == apply_creator(I01, PHI).scale(12)

    def test_dimension_mismatch(self):
        v = apply_creator(I01, PHI)
        with pytest.raises(DimensionMismatch):
            apply_annihilator(S.indicator((0, 0), (1, 1)), v, 1)


class TestVacuumExpectation:
    def test_empty_word(self):
        assert vacuum_expectation([], 1) == 1

    def test_number_on_vacuum(self):
        assert vacuum_expectation([N(I01)], 1) == 0

    def test_one_step(self):
        assert vacuum_expectation([B(I01), Bs(I01)], 1) == 2

    def test_two_mode_recursion(self):
        assert vacuum_expectation([B(I01), B(I01), Bs(I01), Bs(I01)], 1) == 24

    def test_float_mode(self):
        assert vacuum_expectation([B(I01), B(I01), Bs(I01), Bs(I01)], 1, mode="float") == 24.0

    def test_number_annihilator_commutator(self):
        # [N_f, B_g] = -2 B_{conj(f) g}, the adjoint of [N_f, B*_g] = 2 B*_{fg}
        f, g, h = S.indicator(0, 2, 0.5j), S.indicator(1, 3, 0.75), S.indicator(0, 3, 0.25 - 0.5j)
        lhs = (vacuum_expectation([N(f), B(g), Bs(h), Bs(h)], 1)
               - vacuum_expectation([B(g), N(f), Bs(h), Bs(h)], 1))
        rhs = -2 * vacuum_expectation([B(f.conjugate() * g), Bs(h), Bs(h)], 1)
        assert lhs == rhs

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            vacuum_expectation([B(I01), Bs(S.indicator((0, 0), (1, 1)))], 1)


def _random_word(rng, length):
    kinds = [Kind.CREATOR, Kind.ANNIHILATOR, Kind.NUMBER]
    return [Generator(kinds[int(rng.integers(3))], random_step(rng, max_cells=2, bound=1.0))
            for _ in range(length)]


class TestAdjoint:
    def test_creator(self):
        assert adjoint([Bs(I01)]) == [B(I01)]

    def test_number_conjugates(self):
        f = S.indicator(0, 1, 1 + 2j)
        assert adjoint([N(f)]) == [N(f.conjugate())]

    def test_involution(self, rng):
        for _ in range(10):
            w = _random_word(rng, 4)
            assert adjoint(adjoint(w)) == w

    def test_expectation_symmetry(self, rng):
        for _ in range(25):
            w = _random_word(rng, int(rng.integers(1, 6)))
            assert vacuum_expectation(adjoint(w), 1.5) == vacuum_expectation(w, 1.5).conjugate()

    def test_json_round_trip(self):
        w = [B(I01), N(S.indicator(0, 2, 0.5j)), Bs(I01)]
        assert word_from_json(word_to_json(w)) == w


class TestPermutationInvariance:
    def test_adjacent_creators_and_annihilators(self, rng):
        for _ in range(10):
            fs = [random_step(rng, max_cells=3, bound=1.0) for _ in range(4)]
            base = [B(fs[0]), B(fs[1]), Bs(fs[2]), Bs(fs[3])]
            swapped_b = [B(fs[1]), B(fs[0]), Bs(fs[2]), Bs(fs[3])]
            swapped_c = [B(fs[0]), B(fs[1]), Bs(fs[3]), Bs(fs[2])]
            value = vacuum_expectation(base, 0.7)
            assert vacuum_expectation(swapped_b, 0.7) == value
            assert vacuum_expectation(swapped_c, 0.7) == value


class TestCreatorPowers:
    def test_zero_power(self):
        assert creator_power_norm(I01, 0, 1) == 1

    def test_single_mode_values(self):
        assert [creator_power_norm(I01, m, 1) for m in (1, 2, 3)] == [2, 24, 720]

    @pytest.mark.parametrize("factorize", [True, False])
    def test_recursion_oracle(self, factorize):
        oracle = single_mode_norms(1, 1, 1, 12)
        for m in range(13):
            assert creator_power_norm(I01, m, 1, factorize=factorize) == oracle[m]

    @pytest.mark.parametrize("sigma,t,c", [(0.5, 2, 1), (0.3 + 0.4j, 0.5, 2), (-1j / 3, 1.25, 0.5)])
    def test_homogeneity(self, sigma, t, c):
        f = S.indicator(0, t, sigma)
        s2 = QComplex.coerce(sigma).abs2()
        base = single_mode_norms(1, t, c, 8)
        for m in range(9):
            assert creator_power_norm(f, m, c) == base[m] * s2**m
            assert creator_power_norm(f, m, c) == creator_power_norm(S.indicator(0, t), m, c) * s2**m

    def test_inner_small_orders(self):
        f, g = S.indicator(0, 2, 0.5 + 0.25j), S.indicator(1, 3, -0.5)
        assert inner_creator_powers(f, 0, g, 0, 1) == 1
        assert inner_creator_powers(f, 1, g, 1, 1.5) == 3 * l2_inner(f, g)
        assert inner_creator_powers(f, 1, g, 2, 1, factorize=False) == 0

    def test_grading_brute_force(self, rng):
        for _ in range(8):
            f, g = random_step(rng, 3, 1.0), random_step(rng, 3, 1.0)
            m, n = rng.integers(0, 4, size=2)
            if m == n:
                continue
            assert inner_creator_powers(f, int(m), g, int(n), 1, factorize=False) == 0
            assert inner_creator_powers(f, int(m), g, int(n), 1) == 0

    def test_factorized_matches_brute_force(self, rng):
        for _ in range(12):
            f, g = random_step(rng, 3, 1.0), random_step(rng, 3, 1.0)
            c = [0.5, 1, 2][int(rng.integers(3))]
            for m in range(4):
                assert (inner_creator_powers(f, m, g, m, c)
                        == inner_creator_powers(f, m, g, m, c, factorize=False))

    def test_disjoint_support_factorization(self):
        f = S.from_intervals([(0, 1, 0.5), (1, 1.5, 0.25j)])
        g = S.from_intervals([(2, 3, -0.75)])
        for m, n in itertools.product(range(3), range(3)):
            word = [Bs(f)] * m + [Bs(g)] * n
            norm = vacuum_expectation(adjoint(word) + word, 1.25)
            assert norm == creator_power_norm(f, m, 1.25) * creator_power_norm(g, n, 1.25)

    def test_nonnegative_real(self, rng):
        for _ in range(10):
            f = random_step(rng, 4, 1.0)
            for m in range(5):
                assert creator_power_norm(f, m, 0.5) >= 0

    def test_float_series_matches_rational(self, rng):
        for _ in range(10):
            f, g = random_step(rng), random_step(rng)
            exact = creator_series(f, g, 1.0, 30, mode="rational")
            approx = creator_series(f, g, 1.0, 30, mode="float")
            for a, b in zip(exact, approx):
                assert abs(complex(a) - b) <= 1e-13 * max(1.0, abs(complex(a)))

    def test_l2_continuity_fixed_order(self):
        # f_n -> f in L2 along dominated approximations of a sampled step function
        third = 1 / 3
        f = S.from_intervals([(0, third, 0.3), (third, 1, 0.2j)])
        samples = SampledFunction.from_step(f, 0, 1, 2**12)
        with using_mode("float"):
            target = [creator_power_norm(f, m, 1) for m in range(1, 5)]
            errs = []
            for k in range(2, 13):
                fn = dominated_step(samples, 2**k)
                errs.append(max(abs(creator_power_norm(fn, m, 1) - target[m - 1]) for m in range(1, 5)))
        assert errs[-1] < 1e-3
        assert errs[-1] < errs[0] / 100


@given(step_functions(max_cells=3, bound=1.0), step_functions(max_cells=3, bound=1.0),
       st.integers(0, 3), st.integers(0, 3))
@settings(max_examples=25, deadline=None)
def test_grading_property(f, g, m, n):
    value = inner_creator_powers(f, m, g, n, 1, factorize=False)
    if m != n:
        assert value == 0
    else:
        assert value == inner_creator_powers(f, m, g, n, 1)
