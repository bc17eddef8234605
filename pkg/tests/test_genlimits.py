"""Bounded sequences, Cesaro estimators, and step-function lifts."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dixtrace.config import LadderPlan
from dixtrace.errors import DomainError, InsufficientDataError
from dixtrace.genlimits import (
    BoundedSequence,
    ExplicitStep,
    LimitEstimate,
    average_window,
    calL_sequence,
    cesaro,
    dilate,
    exp_substitute,
    floor_lift,
    limit_estimate,
    limit_estimate_sampled,
    shift,
)

LN2 = 0.6931471805599453


class TestBoundedSequence:
    def test_from_values_padding(self):
        a = BoundedSequence.from_values([1.0, -2.0], pad_zero=True)
        np.testing.assert_array_equal(a.window(1, 4), [1.0, -2.0, 0.0, 0.0])
        b = BoundedSequence.from_values([1.0, -2.0], pad_zero=False)
        with pytest.raises(InsufficientDataError):
            b.window(1, 3)

    def test_bound_enforced(self):
        a = BoundedSequence(lambda k: k.astype(float), bound=2.0)
        with pytest.raises(Exception):
            a.window(1, 5)

    def test_shift_and_dilate_definitions(self):
        a = BoundedSequence.from_values([10.0, 20.0, 30.0, 40.0], pad_zero=True)
        np.testing.assert_array_equal(shift(a, 2).window(1, 3), [30.0, 40.0, 0.0])
        np.testing.assert_array_equal(
            dilate(a, 3).window(1, 7), [10.0, 10.0, 10.0, 20.0, 20.0, 20.0, 30.0]
        )


class TestCesaro:
    def test_first_order_matches_fsum(self, rng):
        vals = rng.uniform(-1.0, 1.0, size=500)
        a = BoundedSequence.from_values(vals, pad_zero=True)
        for n in (1, 2, 17, 500):
            assert cesaro(a, n) == pytest.approx(math.fsum(vals[:n]) / n, rel=1e-13)

    def test_higher_orders_match_direct_iteration(self, rng):
        vals = rng.uniform(-1.0, 1.0, size=300)
        a = BoundedSequence.from_values(vals, pad_zero=True)
        ks = np.arange(1.0, 301.0)
        level = np.cumsum(vals) / ks
        assert cesaro(a, 300, order=2) == pytest.approx(
            np.cumsum(level)[-1] / 300.0, rel=1e-12
        )

    def test_chunking_invariance(self, rng):
        vals = rng.uniform(-1.0, 1.0, size=1000)
        a = BoundedSequence.from_values(vals, pad_zero=True)
        assert cesaro(a, 1000, chunk=64) == pytest.approx(
            cesaro(a, 1000, chunk=1 << 20), rel=1e-13
        )

    @given(st.integers(2, 8), st.integers(5, 60))
    @settings(deadline=None, max_examples=40)
    def test_dilation_identity(self, j, n):
        rng = np.random.default_rng(j * 1000 + n)
        vals = rng.uniform(-1.0, 1.0, size=n)
        a = BoundedSequence.from_values(vals, pad_zero=True)
        assert cesaro(dilate(a, j), j * n) == pytest.approx(cesaro(a, n), rel=1e-11, abs=1e-12)

    @given(st.integers(1, 25), st.integers(30, 500))
    @settings(deadline=None, max_examples=40)
    def test_shift_bound(self, j, n):
        rng = np.random.default_rng(j * 7919 + n)
        vals = rng.uniform(-1.0, 1.0, size=n + j)
        a = BoundedSequence.from_values(vals, pad_zero=True)
        gap = abs(cesaro(shift(a, j), n) - cesaro(a, n))
        assert gap <= 2.0 * j * a.bound / n + 1e-12


class TestLimitEstimate:
    def test_constant_converges_exactly(self):
        a = BoundedSequence(lambda k: np.full(len(k), 0.75), bound=1.0)
        est = limit_estimate(a, plan=LadderPlan(1 << 8, 1 << 14))
        assert est.is_converged and est.value == 0.75
        assert est.contains(0.75)

    def test_parity_oscillation_converges_to_zero(self):
        a = BoundedSequence(lambda k: (-1.0) ** k, bound=1.0)
        est = limit_estimate(a, plan=LadderPlan(1 << 8, 1 << 15))
        assert est.is_converged
        assert abs(est.value) < 1e-3

    def test_log_oscillation_bands(self):
        def rule(k):
            kk = k.astype(np.float64)
            return np.sin(2.0 * np.pi * np.log2(np.log2(kk + 3.0)))

        a = BoundedSequence(rule, bound=1.0)
        est = limit_estimate(a, plan=LadderPlan(1 << 8, 1 << 18))
        assert est.status == "band"
        assert est.width() > 0.5
        assert est.lo >= -1.0 and est.hi <= 1.0

    def test_finite_support_enclosure_is_zero(self):
        a = BoundedSequence.from_values([5.0, -3.0, 2.0], pad_zero=True)
        est = limit_estimate(a, plan=LadderPlan(1 << 8, 1 << 14))
        if est.is_converged:
            assert est.value == 0.0
        else:
            assert est.lo == 0.0 and est.hi == 0.0

    def test_sampled_band_covers_values(self):
        ns = np.array([2**j for j in range(8, 21)])
        vals = 1.0 + 0.3 * np.sin(np.log(ns))
        est = limit_estimate_sampled(ns, vals, threshold=1e-3)
        assert est.status == "band"
        tail = vals[len(vals) // 2 :]
        assert est.lo <= tail.min() and est.hi >= tail.max()

    def test_sampled_converged_with_errors(self):
        ns = np.array([2**j for j in range(8, 21)])
        vals = np.full(len(ns), 2.5)
        est = limit_estimate_sampled(ns, vals, threshold=1e-3, errors=np.full(len(ns), 1e-6))
        assert est.is_converged
        assert est.value == pytest.approx(2.5, abs=1e-9)
        assert est.error >= 1e-6

    def test_to_dict_round_trip_fields(self):
        est = LimitEstimate.band(1.0, 2.0, "test", note={"k": [1, 2]})
        d = est.to_dict()
        assert d["status"] == "band" and d["lo"] == 1.0 and d["hi"] == 2.0
        assert d["detail"]["note"] == {"k": [1, 2]}
        assert not est.contains(2.5)
        assert est.contains(1.5)


class TestStepFunctions:
    def test_explicit_step_integrate(self):
        f = ExplicitStep([0.0, 1.0, 2.5], [3.0, -1.0], tail_value=0.5)
        assert f.integrate(0.0, 4.0) == pytest.approx(3.0 - 1.5 + 0.75)
        assert f.integrate(0.5, 1.0) == pytest.approx(1.5)
        assert f.integrate(2.0, 2.0) == 0.0
        with pytest.raises(DomainError):
            f.integrate(3.0, 1.0)

    def test_floor_lift_values_and_cuts(self):
        a = BoundedSequence.from_values([2.0, 4.0, 6.0], pad_zero=True)
        lift = floor_lift(a)
        assert lift.value(1.0) == 2.0
        assert lift.value(2.7) == 4.0
        assert lift.value(3.0) == 6.0
        assert average_window(lift, 2) == pytest.approx(2.0)
        assert lift.integrate(1.0, 3.5) == pytest.approx(2.0 + 4.0 + 0.5 * 6.0)

    def test_exp_substitute_domain_guard(self):
        with pytest.raises(DomainError):
            exp_substitute(ExplicitStep([0.0, 1.0], [1.0], tail_value=0.0))

    def test_exp_substitute_integrates_with_correct_measure(self):
        # inner is the indicator of [1, e) lifted from a sequence on integers;
        # after substitution the window [0, 1) in the new variable maps back
        a = BoundedSequence.from_values([1.0], pad_zero=True)
        sub = exp_substitute(floor_lift(a))
        got = sub.integrate(0.0, 1.0)
        # indicator of [1, 2) under t = e^x: integral over x in [0, ln 2)
        assert got == pytest.approx(LN2, rel=1e-12)


class TestTransport:
    def test_first_basis_vector_gives_ln2(self):
        e1 = BoundedSequence.from_values([1.0], pad_zero=True)
        assert calL_sequence(e1, 1) == pytest.approx(LN2, abs=1e-15)

    def test_constant_sequence_is_fixed_point(self):
        c = BoundedSequence(lambda k: np.full(len(k), 1.25), bound=2.0)
        for k in (1, 2, 5, 10):
            assert calL_sequence(c, k) == pytest.approx(1.25, rel=1e-12)

    def test_depth_guard(self):
        a = BoundedSequence.from_values([1.0] * 10, pad_zero=False)
        with pytest.raises(InsufficientDataError):
            calL_sequence(a, 5)

    def test_decaying_perturbation_washes_out(self):
        a = BoundedSequence(
            lambda k: 0.5 + 1.0 / np.sqrt(k.astype(np.float64)), bound=1.5
        )
        vals = [calL_sequence(a, k) for k in range(1, 14)]
        assert abs(vals[-1] - 0.5) < 0.01
        assert abs(vals[-1] - 0.5) < abs(vals[0] - 0.5)
