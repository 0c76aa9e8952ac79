import math

import pytest

from pptq import (NegativeNegativity, QuasiState, log_negativity,
                  max_entangled, one_shot_exact_cost,
                  one_shot_exact_distillable, random_state, tensor_power)
from pptq.negativity import _one_shot_cost_from_en, _pow2_ceil, _pow2_floor
from conftest import entangled_blend, maximally_mixed


class TestLogNegativity:
    @pytest.mark.parametrize("d", [2, 3, 4, 8])
    def test_mes(self, d):
        val = log_negativity(max_entangled(d))
        assert abs(val.log_negativity - math.log2(d)) < 1e-10
        assert abs(val.trace_norm_pt - d) < 1e-10

    def test_ppt_state_zero(self):
        for seed in range(20):
            s = random_state(2, 2, seed)
            if s.ppt_flag.value == "ppt":
                assert abs(log_negativity(s).log_negativity) < 1e-9

    def test_internal_consistency(self):
        for seed in range(5):
            v = log_negativity(entangled_blend(2, 3, seed))
            assert abs(v.log_negativity - math.log2(v.trace_norm_pt)) < 1e-12

    def test_nonnegative_for_trace_one(self):
        # ||X||_1 >= |tr X| = 1 forces E_N >= 0 for every quasi-state
        from pptq import random_quasi_state
        for seed in range(20):
            s = random_quasi_state(2, 2, 0.6, seed)
            assert log_negativity(s).log_negativity >= -1e-12

    def test_tensor_power_additive(self):
        for seed in (3, 4):
            rho = entangled_blend(2, 2, seed)
            en = log_negativity(rho).log_negativity
            for n in (2, 3):
                big = QuasiState(tensor_power(rho.op, n))
                assert abs(log_negativity(big).log_negativity - n * en) < 1e-9


class TestPow2Helpers:
    def test_exact_integers(self):
        assert _pow2_floor(3.0) == 8
        assert _pow2_ceil(3.0) == 8
        assert _pow2_floor(0.0) == 1

    def test_snap_band(self):
        x = 2 * math.log2(3)  # within one ulp of log2(9)
        assert _pow2_floor(x) == 9
        assert _pow2_ceil(x) == 9

    def test_non_integer(self):
        assert _pow2_floor(2.5) == 5  # 2^2.5 = 5.656...
        assert _pow2_ceil(2.5) == 6

    def test_large_exponent(self):
        d = _pow2_floor(100.0)
        assert d == 2 ** 100
        assert math.log2(_pow2_floor(100.5)) == pytest.approx(100.5, abs=1e-9)

    def test_huge_rank_from_many_copies(self):
        # E_N(Phi8) = 3 exactly, so 30 copies distill rank 2^90
        log_d, d = one_shot_exact_distillable(max_entangled(8), 30)
        assert d == 2 ** 90
        assert log_d == 90.0
        log_c, c = one_shot_exact_cost(max_entangled(8), 30)
        assert c == 2 ** 90


class TestOneShot:
    def test_phi2_three_copies(self):
        log_d, d = one_shot_exact_distillable(max_entangled(2), 3)
        assert d == 8 and abs(log_d - 3.0) < 1e-12
        log_c, c = one_shot_exact_cost(max_entangled(2), 3)
        assert c == 8

    def test_ppt_state(self):
        s = maximally_mixed(2, 2)
        for n in (1, 5):
            log_d, d = one_shot_exact_distillable(s, n)
            assert d == 1 and log_d == 0.0
        log_c, c = one_shot_exact_cost(s, 5)
        assert c == 1

    def test_integer_boundary_phi3(self):
        # E_N = log2 3 at n = 2 lands exactly on d = 9 for floor and ceil
        phi3 = max_entangled(3)
        _, d = one_shot_exact_distillable(phi3, 2)
        _, c = one_shot_exact_cost(phi3, 2)
        assert d == 9 and c == 9

    def test_sandwich_and_convergence(self):
        for seed in (5, 6, 7):
            rho = entangled_blend(2, 2, seed)
            en = log_negativity(rho).log_negativity
            for n in range(1, 13):
                log_d, _ = one_shot_exact_distillable(rho, n)
                log_c, _ = one_shot_exact_cost(rho, n)
                assert log_d <= n * en + 1e-9 <= log_c + 2e-9
                assert log_c - log_d < 1.0 + 1e-9
                assert abs(log_d / n - en) <= 1.0 / n
                assert abs(log_c / n - en) <= 1.0 / n

    def test_negative_negativity_guard(self):
        with pytest.raises(NegativeNegativity):
            _one_shot_cost_from_en(-0.5, 1)

    def test_bad_n(self):
        with pytest.raises(ValueError):
            one_shot_exact_distillable(max_entangled(2), 0)
