"""Reverse direction: mixing set instances solved through response times."""

import math
import random

import pytest
from hypothesis import given, settings

from conftest import bounded_mix_instances, mix_enum_oracle
from rtmix.errors import PreconditionViolated
from rtmix.gen import random_mix_instance
from rtmix.mixing import MixInstance, is_unbounded, solve_bruteforce
from rtmix.reverse import (
    mix_leq_via_rtc,
    shift_record,
    solve_constant_beta,
    solve_crowded,
    solve_general_via_shift,
)


class TestMixLeqViaRtc:
    def test_bracketing_the_optimum(self):
        inst = MixInstance(1, [(1, 2, 4), (1, 4, 4)])
        assert solve_bruteforce(inst).objective == 3
        assert mix_leq_via_rtc(inst, 4, 3) is True
        assert mix_leq_via_rtc(inst, 4, 2) is False

    def test_empty_instance(self):
        assert mix_leq_via_rtc(MixInstance(1, []), 2, 1) is True

    def test_rejects_bad_jitter_encoding(self):
        inst = MixInstance(1, [(1, 2, 9)])  # b - beta > a
        with pytest.raises(PreconditionViolated):
            mix_leq_via_rtc(inst, 4, 2)

    def test_rejects_nonunit_s_weight(self):
        inst = MixInstance(2, [(1, 2, 4)])
        with pytest.raises(PreconditionViolated):
            mix_leq_via_rtc(inst, 4, 2)

    def test_rejects_nonpositive_dual_constant(self):
        inst = MixInstance(1, [(1, 2, 4)])
        with pytest.raises(PreconditionViolated):
            mix_leq_via_rtc(inst, 4, 4)

    def test_monotone_in_k(self):
        inst = MixInstance(1, [(1, 2, 5), (2, 4, 6)])
        beta = 4
        verdicts = [mix_leq_via_rtc(inst, beta, k) for k in range(0, beta)]
        assert verdicts == sorted(verdicts)


class TestSolveCrowded:
    def test_two_term_example(self):
        inst = MixInstance(1, [(1, 2, 4), (1, 4, 5)])
        assert solve_crowded(inst).objective == solve_bruteforce(inst).objective

    def test_all_rhs_equal_lcm(self):
        inst = MixInstance(1, [(1, 2, 4), (1, 4, 4)])
        assert solve_crowded(inst).objective == solve_bruteforce(inst).objective == 3

    def test_weighted_example(self):
        inst = MixInstance(1, [(2, 3, 9), (1, 9, 11)])
        assert solve_crowded(inst).objective == solve_bruteforce(inst).objective

    def test_heavy_weights_push_optimum_to_beta(self):
        # optimal objective reaches b_min itself, exercising the dual-maximum
        # tail behind the k <= beta - 1 probe range
        inst = MixInstance(1, [(2, 2, 5)])
        got = solve_crowded(inst)
        assert got.objective == solve_bruteforce(inst).objective == 5

    def test_unbounded_instances_rejected(self):
        from rtmix.errors import Unbounded

        with pytest.raises(Unbounded):
            solve_crowded(MixInstance(1, [(100, 2, 4)]))

    def test_rejects_uncrowded_rhs(self):
        with pytest.raises(PreconditionViolated):
            solve_crowded(MixInstance(1, [(1, 2, 1)]))

    def test_seeded_equivalence(self):
        for seed in range(120):
            rng = random.Random(seed)
            base = random_mix_instance(seed, rng.randint(1, 5), 16, harmonic=rng.random() < 0.5)
            if not base.terms:
                continue
            m = math.lcm(*base.capacities())
            floor_b = m + rng.randint(0, 8)
            terms = []
            for t in base.terms:
                b = floor_b + rng.randint(0, t.a)
                terms.append((t.w, t.a, b))
            b_min = min(b for _, _, b in terms)
            terms = [(w, a, min(b, b_min + a)) for w, a, b in terms]
            inst = MixInstance(1, terms)
            assert solve_crowded(inst).objective == solve_bruteforce(inst).objective


class TestShift:
    def test_negative_rhs_example(self):
        inst = MixInstance(1, [(1, 2, -3), (2, 4, 1)])
        got = solve_general_via_shift(inst)
        want = solve_bruteforce(inst)
        assert got.objective == want.objective == -1

    def test_offsets_land_in_the_crowded_window(self):
        inst = MixInstance(1, [(1, 2, -3), (2, 4, 1), (1, 8, 21)])
        rec = shift_record(inst)
        assert rec.m == 8
        for t, off in zip(inst.terms, rec.offsets):
            assert rec.m <= t.b + off * t.a <= rec.m + t.a

    def test_already_crowded_instance_gets_nonpositive_offsets(self):
        inst = MixInstance(1, [(1, 2, 5), (1, 4, 6)])
        rec = shift_record(inst)
        assert all(off <= 0 for off in rec.offsets)
        assert solve_general_via_shift(inst).objective == solve_bruteforce(inst).objective

    def test_single_term(self):
        inst = MixInstance(1, [(1, 5, 0)])
        assert solve_general_via_shift(inst).objective == solve_bruteforce(inst).objective

    @given(bounded_mix_instances())
    @settings(max_examples=60)
    def test_objective_matches_bruteforce(self, inst):
        if is_unbounded(inst):
            return
        got = solve_general_via_shift(inst)
        m = math.lcm(*inst.capacities()) if inst.terms else 1
        obj, _ = mix_enum_oracle(inst, m)
        assert got.objective == obj


class TestConstantBeta:
    def test_harmonic_pair(self):
        inst = MixInstance(1, [(1, 2, 4), (1, 4, 4)])
        assert solve_constant_beta(inst, 4).objective == 3

    def test_zero_weight_single_term(self):
        inst = MixInstance(1, [(0, 5, 5)])
        sol = solve_constant_beta(inst, 5)
        assert sol.objective == 0

    def test_empty_instance(self):
        assert solve_constant_beta(MixInstance(1, []), 10).objective == 0

    def test_rejects_small_beta_on_harmonic_path(self):
        inst = MixInstance(1, [(1, 2, 3), (1, 4, 3)])
        with pytest.raises(PreconditionViolated):
            solve_constant_beta(inst, 3)

    def test_rejects_small_beta_on_general_path(self):
        inst = MixInstance(1, [(1, 4, 8), (1, 6, 8)])  # lcm = 12
        with pytest.raises(PreconditionViolated):
            solve_constant_beta(inst, 8)

    def test_rejects_mismatched_rhs(self):
        inst = MixInstance(1, [(1, 2, 4), (1, 4, 5)])
        with pytest.raises(PreconditionViolated):
            solve_constant_beta(inst, 4)

    def test_seeded_equivalence(self):
        for seed in range(120):
            rng = random.Random(seed ^ 0x5)
            harmonic = rng.random() < 0.5
            base = random_mix_instance(seed, rng.randint(1, 5), 20, harmonic=harmonic)
            caps = base.capacities()
            if not caps:
                continue
            floor_b = max(caps) if harmonic else math.lcm(*caps)
            beta = floor_b + rng.randint(0, 15)
            inst = MixInstance(1, [(t.w, t.a, beta) for t in base.terms])
            assert solve_constant_beta(inst, beta).objective == solve_bruteforce(inst).objective
