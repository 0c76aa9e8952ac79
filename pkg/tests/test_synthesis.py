import numpy as np
import pytest

from pptq import (DimensionMismatch, ParseError, PreconditionViolated,
                  apply_channel, constant_channel, en_monotone_check,
                  identity_channel, load_channel, log_negativity,
                  max_entangled, partial_transpose, random_quasi_state,
                  random_state, save_channel, synthesize, trace_norm,
                  transpose_channel, verify)
from pptq.synthesis import ChannelChoi, _double_pt
from conftest import entangled_blend, maximally_mixed, ordered_pair


def trace_dist(a, b):
    d = a - b
    return float(np.abs(np.linalg.eigvalsh(0.5 * (d + d.conj().T))).sum())


class TestSynthesize:
    def test_phi4_to_phi2(self):
        rho, sigma = max_entangled(4), max_entangled(2)
        ch, cert = synthesize(rho, sigma)
        rep = verify(ch, rho, sigma)
        assert rep.all_passed()
        out = apply_channel(ch, rho)
        assert trace_dist(out.matrix, sigma.matrix) <= 1e-8

    def test_phi2_to_phi2_saturated(self):
        rho = max_entangled(2)
        ch, _ = synthesize(rho, rho)
        rep = verify(ch, rho, rho)
        assert rep.all_passed()

    def test_ppt_source_rejected(self):
        with pytest.raises(PreconditionViolated):
            synthesize(maximally_mixed(2, 2), max_entangled(2))

    def test_npt_to_ppt_target(self):
        rho = entangled_blend(2, 2, 1, weight=0.5)
        assert log_negativity(rho).log_negativity > 0.1
        sigma = maximally_mixed(2, 2)
        ch, cert = synthesize(rho, sigma)
        assert cert.branch == "constant"
        assert verify(ch, rho, sigma).all_passed()

    def test_quasi_state_pair(self):
        rho = random_quasi_state(2, 2, 0.6, 3)
        sigma = random_quasi_state(2, 2, 0.3, 4)
        if (log_negativity(rho).log_negativity
                < log_negativity(sigma).log_negativity):
            rho, sigma = sigma, rho
        ch, _ = synthesize(rho, sigma)
        rep = verify(ch, rho, sigma)
        # quasi-operations need not be CP; the contract checks must hold
        assert rep.synthesis_contract_passed()

    def test_cross_dimension_pair(self):
        rho = max_entangled(3)          # 3x3, E_N = log2 3
        sigma = entangled_blend(2, 2, 9)  # 2x2 target
        ch, _ = synthesize(rho, sigma)
        assert ch.in_dims == (3, 3) and ch.out_dims == (2, 2)
        assert verify(ch, rho, sigma).synthesis_contract_passed()

    def test_certificate_invariants(self):
        for seed in range(10):
            rho, sigma = ordered_pair(2, 3, 40 + seed)
            ch, cert = synthesize(rho, sigma)
            tn = trace_norm(partial_transpose(rho.op))
            assert abs(cert.tr_r_plus - cert.tr_r_minus - 1.0) <= 1e-9
            assert abs(cert.tr_r_plus + cert.tr_r_minus - tn) <= 1e-9
            assert cert.lambda_min >= -1e-9
            assert cert.spectrum_sigma_pt.eigenvalues[cert.chosen_k] >= 0

    def test_tp_by_construction(self):
        for seed in range(5):
            rho, sigma = ordered_pair(3, 3, 70 + seed)
            ch, _ = synthesize(rho, sigma)
            rep = verify(ch)
            assert rep.tp.residual <= 1e-10

    def test_converse_rejected(self):
        rho = random_state(2, 2, 55)
        sigma = max_entangled(2)
        with pytest.raises(PreconditionViolated):
            synthesize(rho, sigma)

    def test_some_valid_syntheses_are_not_cp(self):
        # the maps go beyond quantum operations: the contract holds while
        # the raw Choi picks up negative eigenvalues on some valid pairs
        seen_non_cp = False
        for seed in range(20):
            rho, sigma = ordered_pair(2, 2, 1000 + seed)
            ch, _ = synthesize(rho, sigma)
            rep = verify(ch, rho, sigma)
            assert rep.synthesis_contract_passed()
            if not rep.cp.passed:
                seen_non_cp = True
        assert seen_non_cp


class TestApply:
    def test_identity(self):
        s = entangled_blend(2, 2, 12)
        out = apply_channel(identity_channel(2, 2), s)
        assert trace_dist(out.matrix, s.matrix) < 1e-12

    def test_constant(self):
        target = random_state(2, 2, 13)
        ch = constant_channel(target, (2, 3))
        s = random_quasi_state(2, 3, 0.4, 14)
        out = apply_channel(ch, s)
        assert trace_dist(out.matrix, target.matrix) < 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            apply_channel(identity_channel(2, 2), random_state(2, 3, 1))

    def test_choi_convention_against_direct_action(self):
        # the Choi contraction must reproduce the map action for the three
        # reference maps whose action is known in closed form
        s = random_quasi_state(2, 2, 0.5, 15)
        assert trace_dist(apply_channel(identity_channel(2, 2), s).matrix,
                          s.matrix) < 1e-12
        target = random_state(2, 2, 16)
        assert trace_dist(
            apply_channel(constant_channel(target, (2, 2)), s).matrix,
            target.matrix) < 1e-12
        pt_direct = partial_transpose(s.op).matrix
        assert trace_dist(apply_channel(transpose_channel(2, 2), s).matrix,
                          pt_direct) < 1e-12


class TestVerify:
    def test_identity_all_pass(self):
        rep = verify(identity_channel(2, 2))
        assert rep.all_passed()
        assert rep.cp.residual >= -1e-12
        assert rep.pptq.residual >= -1e-12

    def test_transpose_map_spectra(self):
        # computed truth at d = 2: the double-PT of the transpose-map Choi
        # is that same Choi, so cp and pptq both fail while hp and tp pass
        ch = transpose_channel(2, 2)
        j = ch.choi
        jg = _double_pt(j, (2, 2), (2, 2))
        assert np.allclose(jg, j, atol=1e-14)
        assert np.linalg.eigvalsh(j).min() < -0.9
        rep = verify(ch)
        assert rep.hp.passed and rep.tp.passed
        assert not rep.cp.passed
        assert not rep.pptq.passed

    def test_hermiticity_corruption_detected(self):
        ch = identity_channel(2, 2)
        bad = ch.choi.copy()
        bad[0, 1] += 1e-3
        rep = verify(ChannelChoi(ch.in_dims, ch.out_dims, bad))
        assert not rep.hp.passed

    def test_pptq_corruption_detected(self):
        rho, sigma = max_entangled(4), max_entangled(2)
        ch, _ = synthesize(rho, sigma)
        jg = _double_pt(ch.choi, ch.in_dims, ch.out_dims)
        w, v = np.linalg.eigh(jg)
        bump = np.outer(v[:, 0], v[:, 0].conj())
        corrupted = _double_pt(jg - 1e-3 * bump, ch.in_dims, ch.out_dims)
        rep = verify(ChannelChoi(ch.in_dims, ch.out_dims, corrupted))
        assert (not rep.cp.passed) or (not rep.pptq.passed)

    def test_maps_check_flags_wrong_target(self):
        rho, sigma = max_entangled(4), max_entangled(2)
        ch, _ = synthesize(rho, sigma)
        wrong = random_state(2, 2, 77)
        rep = verify(ch, rho, wrong)
        assert not rep.maps_rho_to_sigma.passed


class TestEnMonotone:
    def test_identity_equality(self):
        rep = en_monotone_check(identity_channel(2, 2), trials=10, seed=0)
        assert rep.violations == 0
        assert abs(rep.worst_excess) < 1e-12

    def test_synthesized_channel(self):
        rho, sigma = max_entangled(4), max_entangled(2)
        ch, _ = synthesize(rho, sigma)
        rep = en_monotone_check(ch, trials=50, seed=1)
        assert rep.violations == 0

    def test_violating_channel_detected(self):
        # constant map onto an entangled state raises E_N on PPT inputs
        ch = constant_channel(max_entangled(2), (2, 2))
        assert not verify(ch).pptq.passed
        rep = en_monotone_check(ch, trials=20, seed=2)
        assert rep.violations > 0


class TestChannelSerialization:
    def test_round_trip(self, tmp_path):
        rho, sigma = max_entangled(4), max_entangled(2)
        ch, _ = synthesize(rho, sigma)
        p = tmp_path / "ch.json"
        save_channel(ch, p)
        first = p.read_bytes()
        loaded = load_channel(p)
        assert np.abs(loaded.choi - ch.choi).max() == 0.0
        assert loaded.in_dims == ch.in_dims
        save_channel(loaded, p)
        assert p.read_bytes() == first

    def test_bad_convention(self, tmp_path):
        p = tmp_path / "ch.json"
        save_channel(identity_channel(1, 2), p)
        p.write_text(p.read_text().replace("input-major-row-major", "other"))
        with pytest.raises(ParseError):
            load_channel(p)

    def test_shape_mismatch(self, tmp_path):
        p = tmp_path / "ch.json"
        save_channel(identity_channel(1, 2), p)
        p.write_text(p.read_text().replace('"in_dims": [1, 2]',
                                           '"in_dims": [2, 2]'))
        with pytest.raises(ParseError):
            load_channel(p)
