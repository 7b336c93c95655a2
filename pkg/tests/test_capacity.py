import numpy as np
import pytest

from qshannon import capacity as cap
from qshannon import channels as ch


class TestBlahutArimoto:
    def test_noiseless_binary(self):
        res = cap.blahut_arimoto(np.eye(2))
        assert res.value == pytest.approx(1.0, abs=1e-9)
        assert res.converged

    def test_bsc_closed_form(self):
        for p in (0.05, 0.2, 0.45):
            res = cap.blahut_arimoto(ch.bsc(p), tol=1e-10)
            assert res.value == pytest.approx(1 - cap.binary_entropy(p), abs=1e-7)

    def test_useless_channel_zero(self):
        w = np.full((2, 2), 0.5)
        assert cap.blahut_arimoto(w).value == pytest.approx(0.0, abs=1e-9)

    def test_erasure_classical(self):
        # binary erasure channel: capacity 1 - p
        p = 0.3
        w = np.array([[1 - p, 0.0], [0.0, 1 - p], [p, p]])
        assert cap.blahut_arimoto(w, tol=1e-10).value == pytest.approx(1 - p, abs=1e-7)

    def test_asymmetric_channel_gap_small(self):
        w = np.array([[0.9, 0.2], [0.1, 0.8]])
        res = cap.blahut_arimoto(w, tol=1e-10)
        assert res.gap_estimate < 1e-9

    def test_invalid_matrix(self):
        with pytest.raises(ValueError):
            cap.blahut_arimoto(np.array([[0.5, 0.5], [0.2, 0.5]]))


class TestOneShotQuantum:
    def test_identity_channel(self):
        res = cap.one_shot_quantum_capacity(ch.identity_channel(2), restarts=3)
        assert res.value == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("p,d", [(0.0, 2), (0.25, 2), (0.25, 3), (0.4, 2)])
    def test_erasure_closed_form(self, p, d):
        res = cap.one_shot_quantum_capacity(ch.erasure(p, d), restarts=4)
        assert res.value == pytest.approx(cap.erasure_q1(p, d), abs=1e-5)

    def test_antidegradable_zero(self):
        res = cap.one_shot_quantum_capacity(ch.erasure(0.5, 2), restarts=4)
        assert res.value <= 1e-5

    def test_depolarizing_matches_mixed_input_formula(self):
        p = 0.05
        res = cap.one_shot_quantum_capacity(ch.depolarizing(p), restarts=4)
        assert res.value == pytest.approx(cap.depolarizing_q1_mm(p), abs=1e-5)


class TestEntanglementAssisted:
    def test_identity_gives_two_bits(self):
        res = cap.entanglement_assisted_capacity(ch.identity_channel(2), restarts=3)
        assert res.value == pytest.approx(2.0, abs=1e-6)

    def test_erasure_closed_form(self):
        p = 0.3
        res = cap.entanglement_assisted_capacity(ch.erasure(p, 2), restarts=3)
        assert res.value == pytest.approx(2 * (1 - p), abs=1e-5)

    def test_depolarizing_closed_form(self):
        p = 0.2
        res = cap.entanglement_assisted_capacity(ch.depolarizing(p), restarts=3)
        assert res.value == pytest.approx(cap.depolarizing_ce(p), abs=1e-5)


class TestHolevoChiChannel:
    def test_noiseless_qubit_one_bit(self):
        res = cap.holevo_chi_channel(ch.identity_channel(2), restarts=4)
        assert res.value == pytest.approx(1.0, abs=1e-5)

    def test_depolarizing_closed_form(self):
        p = 0.15
        res = cap.holevo_chi_channel(ch.depolarizing(p), restarts=4)
        assert res.value == pytest.approx(cap.depolarizing_c1(p), abs=1e-5)

    def test_ensemble_is_normalized(self):
        res = cap.holevo_chi_channel(ch.depolarizing(0.1), restarts=2)
        probs = [p for p, _ in res.argmax]
        assert sum(probs) == pytest.approx(1.0)
        for _, rho in res.argmax:
            assert np.trace(rho).real == pytest.approx(1.0)


class TestClosedForms:
    def test_endpoints(self):
        assert cap.depolarizing_c1(0.0) == pytest.approx(1.0)
        assert cap.depolarizing_ce(0.0) == pytest.approx(2.0)
        assert cap.depolarizing_q1_mm(0.0) == pytest.approx(1.0)
        assert cap.depolarizing_ce(0.75) == pytest.approx(0.0, abs=1e-12)

    def test_zero_crossing_bracketed(self):
        root = cap.depolarizing_q1_zero()
        assert 0.18 < root < 0.20
        assert abs(cap.depolarizing_q1_mm(root)) < 1e-10

    def test_erasure_clamped(self):
        assert cap.erasure_q1(0.6, 2) == 0.0
        assert cap.erasure_q1(0.25, 3) == pytest.approx(0.5 * np.log2(3))


class TestSweep:
    def test_rows_and_csv(self):
        rows = cap.capacity_sweep("erasure", [0.0, 0.25], ("Q1",), restarts=2)
        assert len(rows) == 2
        csv = cap.sweep_to_csv_rows(rows)
        assert csv[0] == "family,p,quantity,value,err,converged"
        assert csv[1].startswith("erasure,0,Q1,1,")

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            cap.capacity_sweep("nope", [0.1])
