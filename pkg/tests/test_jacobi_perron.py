"""The expansion algorithm, its Euclidean form, termination, periodicity."""

import random
from fractions import Fraction as F

import pytest

from padic_mcf.errors import DigitMapViolation, InsufficientPrecision
from padic_mcf.jacobi_perron import (
    JPState,
    euclid_expand,
    jp_expand,
    jp_step,
    lift_to_integer_tuple,
    reexpand_check,
    verify_termination_dependence,
)
from padic_mcf.mcf import (
    MCF,
    ConvergentsTable,
    check_convergence_conditions,
    evaluate_finite,
    reconstruct_initial,
)
from padic_mcf.numberfield import NumberField, PAdicEmbedding
from padic_mcf.padic import PAdicApprox, browkin_s, valuation


@pytest.fixture(scope="module")
def emb_cubic_q5():
    return PAdicEmbedding.create(NumberField([F(-1), F(-1), F(-8, 5), F(1)]), 5, 32)


@pytest.fixture(scope="module")
def emb_cubic_q7():
    return PAdicEmbedding.create(NumberField([F(-1), F(2), F(3, 7), F(1)]), 7, 32)


@pytest.fixture(scope="module")
def emb_cuberoot2():
    return PAdicEmbedding.create(NumberField([-2, 0, 0, 1]), 5, 32)


def random_inputs(rng, m, bound=10**6):
    return tuple(
        F(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(m)
    )


class TestJPStep:
    def test_first_step_of_stop_example(self):
        res = jp_step(JPState(5, (F(31, 26), F(21, 26)), 0))
        assert res.quotients == (1, 1)
        assert res.next_state.alphas == (F(-26, 5), F(-1))
        assert res.next_state.n == 1

    def test_second_step_terminates(self):
        res = jp_step(JPState(5, (F(-26, 5), F(-1)), 1))
        assert res.quotients == (F(-1, 5), F(-1))
        assert res.next_state is None

    def test_first_step_of_q5_pair(self):
        res = jp_step(JPState(5, (F(23, 5), F(14, 19)), 0))
        assert res.quotients == (F(-2, 5), 1)
        assert res.next_state.alphas == (F(-19, 5), F(-19))

    def test_zero_in_inner_coordinate_continues(self):
        # alpha^(1) - a^(1) = 0 is legal for m = 2; only the last coordinate stops
        res = jp_step(JPState(5, (F(1), F(1, 5)), 0))
        assert res.quotients == (1, F(1, 5))
        assert res.next_state is None  # here the last difference is also 0
        res2 = jp_step(JPState(5, (F(1), F(1, 5) + 5), 0))
        assert res2.next_state is not None
        assert res2.next_state.alphas[1] == 0  # exact zero propagates


class TestJPExpand:
    def test_q5_pair_a(self):
        res = jp_expand((F(23, 5), F(14, 19)), 5)
        assert res.is_finite and res.steps == 4
        assert res.mcf.sequences()[:2] == (
            (F(-2, 5), F(6, 5), F(6, 5), F(4, 5)),
            (F(1), F(1), F(-1), F(-1)),
        )
        assert evaluate_finite(res.mcf) == (F(23, 5), F(14, 19))

    def test_q5_pair_b(self):
        res = jp_expand((F(7, 3), F(11, 20)), 5)
        assert res.mcf.sequences()[:2] == (
            (F(-1), F(-4, 5), F(-3, 5)),
            (F(9, 5), F(-1), F(0)),
        )

    def test_q7_pair(self):
        res = jp_expand((F(31, 16), F(123, 7)), 7)
        assert res.mcf.sequences()[:2] == (
            (F(-2), F(-16, 7), F(13, 7), F(17, 7), F(2, 7)),
            (F(-24, 7), F(-2), F(2), F(-2), F(-1)),
        )

    def test_q11_triples(self):
        res = jp_expand((F(-5, 4), F(29, 11), F(3, 4)), 11)
        assert res.mcf.sequences()[:3] == (
            (F(-4), F(4, 11)),
            (F(29, 11), F(1)),
            (F(-2), F(0)),
        )
        res2 = jp_expand((F(-7, 4), F(2, 5), F(1, 3)), 11)
        assert res2.mcf.sequences()[:3] == (
            (F(1), F(-3, 11), F(-5, 11), F(4, 11)),
            (F(-4), F(-2), F(0), F(0)),
            (F(4), F(1), F(-4), F(0)),
        )

    def test_periodic_q5_cubic(self, emb_cubic_q5):
        field = emb_cubic_q5.field
        alpha = emb_cubic_q5(field.generator())
        beta = 1 + 1 / alpha
        res = jp_expand((alpha, beta), 5, detect_period=True)
        assert res.status == "periodic"
        assert (res.preperiod, res.period) == (0, 1)
        assert res.mcf.rows == ((F(8, 5), F(1), F(1)),)
        assert res.witness == (0, 1)

    def test_periodic_q7_cubic(self, emb_cubic_q7):
        field = emb_cubic_q7.field
        gamma = emb_cubic_q7(field.generator())
        delta = -2 + 1 / gamma
        res = jp_expand((gamma, delta), 7, detect_period=True)
        assert (res.status, res.preperiod, res.period) == ("periodic", 0, 1)
        assert res.mcf.rows == ((F(-3, 7), F(-2), F(1)),)

    def test_periodicity_witness_is_reproducible(self, emb_cubic_q5):
        field = emb_cubic_q5.field
        alpha = emb_cubic_q5(field.generator())
        res = jp_expand((alpha, 1 + 1 / alpha), 5, detect_period=True)
        state = res.witness_state
        for _ in range(res.period):
            state = jp_step(state).next_state
        assert tuple(a.alg for a in state.alphas) == tuple(
            a.alg for a in res.witness_state.alphas
        )

    def test_cuberoot_pair_true_expansion(self, emb_cuberoot2):
        # independent routes agree: the quotients below were derived by hand
        # and the value is confirmed by the double evaluation inside
        # evaluate_finite (backward substitution vs final convergent)
        theta = emb_cuberoot2(emb_cuberoot2.field.generator())
        res = jp_expand((theta, F(5, 4)), 5)
        assert res.is_finite
        assert res.mcf.sequences()[:2] == (
            (F(-2), F(4, 5), F(-1, 5)),
            (F(0), F(-1), F(0)),
        )
        assert evaluate_finite(res.mcf) == (F(-19, 2), F(5, 4))

    def test_truncation(self):
        res = jp_expand((F(23, 5), F(14, 19)), 5, max_steps=2)
        assert res.status == "truncated" and res.steps == 2

    def test_identity_reconstruction_at_every_step(self):
        inputs = (F(23, 5), F(14, 19))
        state = JPState(5, inputs, 0)
        table = ConvergentsTable(2)
        while True:
            res = jp_step(state)
            table.push(res.quotients + (F(1),))
            if res.next_state is None:
                break
            state = res.next_state
            alphas = state.alphas + (F(1),)
            assert reconstruct_initial(table, alphas) == inputs

    def test_identity_reconstruction_algebraic(self, emb_cubic_q5):
        field = emb_cubic_q5.field
        alpha = emb_cubic_q5(field.generator())
        beta = 1 + 1 / alpha
        state = JPState(5, (alpha, beta), 0)
        table = ConvergentsTable(2)
        for _ in range(3):
            res = jp_step(state)
            table.push(res.quotients + (F(1),))
            state = res.next_state
            alphas = state.alphas + (F(1),)
            got = reconstruct_initial(table, alphas)
            assert got[0].alg == alpha.alg and got[1].alg == beta.alg

    def test_output_conditions_and_norm_product(self):
        rng = random.Random(42)
        for _ in range(25):
            p = rng.choice((3, 5, 7, 11))
            m = rng.choice((2, 3))
            res = jp_expand(random_inputs(rng, m, bound=10**4), p)
            assert res.is_finite
            rep = check_convergence_conditions(res.mcf, p, unit_numerators=True)
            assert rep.ok
            table = ConvergentsTable(m)
            acc = 0
            for n, row in enumerate(res.mcf.rows):
                table.push(row)
                if n >= 1:
                    acc += valuation(row[0], p)
                    assert valuation(table.column(0)[m], p) == acc

    def test_rational_inputs_always_terminate(self):
        rng = random.Random(9)
        for _ in range(40):
            p = rng.choice((3, 5, 7, 11))
            m = rng.choice((1, 2, 3))
            res = jp_expand(random_inputs(rng, m), p)
            assert res.is_finite


class TestDigitMapPlugin:
    def test_wrapped_browkin_is_accepted(self):
        calls = []

        def my_map(x, p):
            calls.append(x)
            return browkin_s(x, p)

        res = jp_expand((F(23, 5), F(14, 19)), 5, digit_map=my_map)
        assert res.is_finite and calls
        assert res.mcf.sequences()[0] == (F(-2, 5), F(6, 5), F(6, 5), F(4, 5))

    def test_constant_map_is_rejected(self):
        def bad_map(x, p):
            return F(2)

        with pytest.raises(DigitMapViolation):
            jp_expand((F(23, 5), F(14, 19)), 5, digit_map=bad_map)

    def test_out_of_range_map_is_rejected(self):
        def bad_map(x, p):
            s = browkin_s(x, p)
            return s + p  # correct residue class, Euclidean size too large

        with pytest.raises(DigitMapViolation):
            jp_expand((F(23, 5), F(14, 19)), 5, digit_map=bad_map)


class TestEuclid:
    def test_lift(self):
        assert lift_to_integer_tuple((F(23, 5), F(14, 19))) == (437, 70, 95)

    def test_equivalence_on_lifted_tuple(self):
        jp = jp_expand((F(23, 5), F(14, 19)), 5)
        eu, trace = euclid_expand((437, 70, 95), 5)
        assert eu.mcf.rows == jp.mcf.rows
        assert eu.is_finite
        assert trace[-1][-1] == 0

    def test_one_dimensional_case(self):
        eu, _ = euclid_expand((F(23, 5), 1), 5)
        jp = jp_expand((F(23, 5),), 5)
        assert eu.mcf.rows == jp.mcf.rows

    def test_trace_norms_strictly_decrease(self):
        rng = random.Random(5)
        for _ in range(30):
            p = rng.choice((3, 5, 7, 11))
            m = rng.choice((1, 2, 3))
            xs = lift_to_integer_tuple(random_inputs(rng, m, bound=10**4))
            res, trace = euclid_expand(xs, p)
            assert res.is_finite
            vals = [valuation(t[-1], p) for t in trace[:-1]]
            assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_zero_last_coordinate_rejected(self):
        with pytest.raises(ZeroDivisionError):
            euclid_expand((F(1), F(2), F(0)), 5)

    def test_random_equivalence(self):
        rng = random.Random(17)
        for _ in range(25):
            p = rng.choice((3, 5, 7, 11))
            m = rng.choice((2, 3))
            ratios = random_inputs(rng, m, bound=10**4)
            xs = lift_to_integer_tuple(ratios)
            jp = jp_expand(ratios, p)
            eu, _ = euclid_expand(xs, p)
            assert eu.mcf.rows == jp.mcf.rows


class TestTerminationDependence:
    def test_rational_inputs(self):
        for inputs in ((F(31, 26), F(21, 26)), (F(23, 5), F(14, 19))):
            res = jp_expand(inputs, 5)
            dep = verify_termination_dependence(res, inputs)
            assert sum(c * v for c, v in zip(dep, inputs + (F(1),))) == 0

    def test_cuberoot_case(self, emb_cuberoot2):
        theta = emb_cuberoot2(emb_cuberoot2.field.generator())
        res = jp_expand((theta, F(5, 4)), 5)
        dep = verify_termination_dependence(res, (theta, F(5, 4)))
        assert dep == (F(0), F(4), F(-5))

    def test_non_finite_rejected(self, emb_cubic_q5):
        alpha = emb_cubic_q5(emb_cubic_q5.field.generator())
        res = jp_expand((alpha, 1 + 1 / alpha), 5, detect_period=True)
        with pytest.raises(ValueError):
            verify_termination_dependence(res, (alpha, 1 + 1 / alpha))


class TestReexpand:
    def test_q5_expansion_reproduces_itself(self):
        res = jp_expand((F(23, 5), F(14, 19)), 5)
        rep = reexpand_check(res.mcf, 5)
        assert rep.matches and not rep.failed_hypotheses

    def test_single_row_fixed_point(self):
        mcf = MCF(2, [(F(-2, 5), F(1), F(1))])
        rep = reexpand_check(mcf, 5)
        assert rep.matches

    def test_recorded_cuberoot_block(self):
        mcf = MCF.unit_from_sequences([[1, F(4, 5), F(12, 5)], [0, 1, 0]])
        rep = reexpand_check(mcf, 5)
        assert rep.matches and rep.value == (F(133, 48), F(5, 4))
        assert not rep.failed_hypotheses

    def test_violated_hypotheses_are_reported(self):
        mcf = MCF.unit_from_sequences([[3, 1], [1, 0]])  # |a_1^(1)| = 1, not > 1
        rep = reexpand_check(mcf, 5)
        assert not rep.matches
        assert any(h.startswith("norm_conditions") for h in rep.failed_hypotheses)


class TestApproxBackend:
    def test_termination_is_undecidable(self):
        ax = PAdicApprox.from_rational(F(23, 5), 5, 10)
        ay = PAdicApprox.from_rational(F(14, 19), 5, 10)
        with pytest.raises(InsufficientPrecision):
            jp_expand((ax, ay), 5)

    def test_never_claims_periodic(self, emb_cubic_q5):
        field = emb_cubic_q5.field
        alpha = emb_cubic_q5(field.generator())
        beta = 1 + 1 / alpha
        a = alpha.to_approx(20)
        b = beta.to_approx(20)
        res = jp_expand((a, b), 5, max_steps=4, detect_period=True)
        assert res.status == "truncated"
        assert res.period_candidate == (0, 1)
        assert res.mcf.rows == ((F(8, 5), F(1), F(1)),) * 4

    def test_euclid_termination_is_undecidable(self):
        xs = tuple(
            PAdicApprox.from_rational(F(v), 5, 10) for v in (437, 70, 95)
        )
        with pytest.raises(InsufficientPrecision):
            euclid_expand(xs, 5)
