"""Task model validation, exact utilization arithmetic, and response bounds."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rtmix.core import (
    Task,
    TaskSystem,
    bounds_from_parts,
    ceil_div,
    check_general_utilization_bound,
    interval_width_certificates,
    is_harmonic,
    jitter_free_bounds,
    lcm_capped,
    magnitude_cap,
    response_bounds,
    utilization,
    validate,
)
from rtmix.errors import (
    InvalidInstance,
    OverflowLimit,
    PreconditionViolated,
    UtilizationExceeded,
)


class TestValidate:
    def test_demo_system_is_valid(self, demo_system):
        validate(demo_system)

    def test_minimal_task(self):
        validate(TaskSystem([Task(1, 1, 0, 1)]))

    def test_jitter_above_period_rejected(self):
        with pytest.raises(InvalidInstance, match="jitter"):
            validate(TaskSystem([Task(1, 5, 6)]))

    def test_empty_system_rejected(self):
        with pytest.raises(InvalidInstance, match="at least one"):
            validate(TaskSystem([]))

    @pytest.mark.parametrize(
        "task, fragment",
        [
            (Task(0, 5, 0), "execution time"),
            (Task(1, 0, 0), "period"),
            (Task(2, 5, 0, 1), "deadline"),
            (Task(2, 5, 0, 6), "deadline"),
        ],
    )
    def test_first_violation_is_named(self, task, fragment):
        with pytest.raises(InvalidInstance, match=fragment):
            validate(TaskSystem([task]))


class TestUtilization:
    def test_demo_higher_priority(self, demo_system):
        assert utilization(demo_system, exclude_last=True) == Fraction(181, 390)

    def test_single_task_excluded_sum_is_zero(self):
        assert utilization(TaskSystem([Task(1, 2, 0)]), exclude_last=True) == 0

    def test_extreme_three_task_system_has_full_utilization(self):
        ts = TaskSystem([Task(1, 2, 2), Task(1, 4, 4), Task(1, 4, 4)])
        assert utilization(ts) == 1

    def test_gate_passes_on_demo(self, demo_system):
        report = check_general_utilization_bound(demo_system)
        assert report.schedulability_bound_holds

    def test_gate_rejects_full_prefix(self):
        ts = TaskSystem([Task(1, 1, 0), Task(1, 1, 0)])
        with pytest.raises(UtilizationExceeded):
            check_general_utilization_bound(ts)

    def test_equality_case_of_refined_bound(self):
        # prefix utilization 3/4 equals 1 - 1/lcm(2,4)
        ts = TaskSystem([Task(1, 2, 2), Task(1, 4, 4), Task(1, 4, 4)])
        report = check_general_utilization_bound(ts)
        m = math.lcm(2, 4)
        assert report.higher_priority == 1 - Fraction(1, m)

    @given(st.lists(st.tuples(st.integers(1, 9), st.integers(1, 9)), min_size=2, max_size=5))
    def test_strict_bound_equals_refined_bound(self, pairs):
        # integrality: sum c/p < 1 over the prefix iff sum <= 1 - 1/lcm(prefix periods)
        tasks = [Task(min(c, p), p, 0) for c, p in pairs]
        ts = TaskSystem(tasks)
        prefix = ts.tasks[:-1]
        hp = sum(Fraction(t.c, t.p) for t in prefix)
        m = math.lcm(*[t.p for t in prefix])
        assert (hp < 1) == (hp <= 1 - Fraction(1, m))


class TestHarmonic:
    def test_divisor_chain(self):
        assert is_harmonic([2, 4, 4])

    def test_demo_periods_are_not_harmonic(self, demo_system):
        assert not is_harmonic(demo_system)

    def test_singleton(self):
        assert is_harmonic([7])

    @given(st.lists(st.integers(1, 60), min_size=1, max_size=6))
    def test_harmonic_iff_lcm_is_max(self, values):
        if is_harmonic(values):
            assert math.lcm(*values) == max(values)

    @given(st.integers(1, 8), st.lists(st.sampled_from([1, 2, 3, 4]), min_size=0, max_size=5))
    def test_built_chains_are_harmonic(self, start, factors):
        chain = [start]
        for f in factors:
            chain.append(chain[-1] * f)
        assert is_harmonic(chain)
        assert math.lcm(*chain) == max(chain)


class TestRationalArithmetic:
    @given(
        st.fractions(max_denominator=50),
        st.fractions(max_denominator=50),
        st.fractions(max_denominator=50),
    )
    def test_field_identities_are_exact(self, a, b, c):
        assert (a + b) - b == a
        assert a * (b + c) == a * b + a * c
        if b != 0:
            assert (a / b) * b == a

    @given(st.integers(-200, 200), st.integers(1, 50))
    def test_ceil_div_matches_fraction_ceiling(self, num, den):
        assert ceil_div(num, den) == math.ceil(Fraction(num, den))


class TestBounds:
    def test_demo_values(self, demo_system):
        b = response_bounds(demo_system)
        assert b.ell == Fraction(6245, 209)
        assert b.u1 - b.ell == Fraction(8580, 209)
        assert b.u2 == 390
        assert b.u == min(math.ceil(b.u1), b.u2)

    def test_extreme_system_is_tight(self):
        ts = TaskSystem([Task(1, 2, 2), Task(1, 4, 4), Task(1, 4, 4)])
        b = response_bounds(ts)
        assert b.ell == 12 == b.u2

    def test_single_higher_task_zero_jitter(self):
        ts = TaskSystem([Task(1, 2, 0), Task(1, 4, 0)])
        b = response_bounds(ts)
        assert b.ell == 2

    def test_u2_is_multiple_of_prefix_lcm(self, demo_system):
        b = response_bounds(demo_system)
        assert b.u2 % math.lcm(65, 30) == 0

    @given(st.lists(st.tuples(st.integers(1, 8), st.integers(1, 12)), min_size=1, max_size=5))
    def test_u2_multiple_of_lcm_and_ell_below_u1(self, pairs):
        from hypothesis import assume

        tasks = [Task(min(c, p), p, 0) for c, p in pairs]
        ts = TaskSystem(tasks)
        assume(utilization(ts, exclude_last=True) < 1)
        b = response_bounds(ts)
        prefix = [t.p for t in ts.tasks[:-1]]
        assert b.u2 % (math.lcm(*prefix) if prefix else 1) == 0
        assert b.ell <= b.u1

    def test_empty_interference(self):
        b = bounds_from_parts(9, [])
        assert (b.ell, b.u1, b.u2, b.u) == (9, 9, 9, 9)

    def test_overflow_limit_on_tiny_cap(self, demo_system):
        with pytest.raises(OverflowLimit):
            response_bounds(demo_system, cap=10)

    def test_magnitude_cap_env_override(self, monkeypatch):
        monkeypatch.setenv("RTMIX_LIMIT_BITS", "4")
        assert magnitude_cap() == 15
        with pytest.raises(OverflowLimit):
            lcm_capped([7, 9])


class TestJitterFreeBounds:
    def test_two_equal_periods(self):
        ts = TaskSystem([Task(1, 2, 0), Task(1, 2, 0)])
        assert jitter_free_bounds(ts) == (2, 2)

    def test_single_task(self):
        ts = TaskSystem([Task(3, 7, 0)])
        assert jitter_free_bounds(ts) == (3, 7)

    def test_harmonic_three_tasks(self):
        ts = TaskSystem([Task(1, 2, 0), Task(1, 4, 0), Task(1, 4, 0)])
        assert jitter_free_bounds(ts) == (4, 4)

    def test_rejects_jitter(self, demo_system):
        with pytest.raises(PreconditionViolated):
            jitter_free_bounds(demo_system)


class TestWidthCertificates:
    def test_demo_all_hold(self, demo_system):
        checks = interval_width_certificates(demo_system)
        assert len(checks) == 3 and all(c.holds for c in checks)

    def test_extreme_system(self):
        ts = TaskSystem([Task(1, 2, 2), Task(1, 4, 4), Task(1, 4, 4)])
        assert all(c.holds for c in interval_width_certificates(ts))

    def test_single_task(self):
        assert all(c.holds for c in interval_width_certificates(TaskSystem([Task(2, 5, 1)])))
