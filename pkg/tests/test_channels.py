import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_state
from qshannon._rng import stream
from qshannon import channels as ch
from qshannon.entropy import von_neumann_entropy
from qshannon.linalg import (
    density_from_matrix,
    maximally_mixed,
    partial_trace,
    qubits,
    trace_distance,
)


class TestKrausValidation:
    def test_incomplete_kraus_rejected(self):
        with pytest.raises(ValueError):
            ch.KrausChannel((0.5 * np.eye(2),), 2, 2)

    def test_wrong_shape_rejected(self):
        with pytest.raises(ValueError):
            ch.KrausChannel((np.eye(3),), 2, 2)

    def test_env_dim_counts_operators(self):
        assert ch.depolarizing(0.1).env_dim == 4
        assert ch.amplitude_damping(0.1).env_dim == 2


class TestApplyAndDilate:
    def test_identity_preserves(self):
        rho = random_state((2,), "A", 3)
        out = ch.apply(ch.identity_channel(2), rho)
        assert trace_distance(out.matrix, rho.matrix) < 1e-12

    def test_dilation_is_isometry(self):
        v = ch.dilate(ch.depolarizing(0.3)).isometry
        assert np.max(np.abs(v.conj().T @ v - np.eye(2))) < 1e-10

    def test_dilated_state_marginals(self):
        channel = ch.amplitude_damping(0.35)
        rho = random_state((2,), "A", 5)
        be = ch.dilate_state(channel, rho)
        assert trace_distance(partial_trace(be, ["B"]).matrix,
                              ch.apply(channel, rho).matrix) < 1e-10
        assert trace_distance(partial_trace(be, ["E"]).matrix,
                              ch.apply(ch.complementary(channel), rho).matrix) < 1e-10

    def test_output_trace_preserved(self):
        rho = random_state((3,), "A", 7)
        out = ch.apply(ch.erasure(0.4, 3), rho)
        assert np.trace(out.matrix).real == pytest.approx(1.0)


class TestChoi:
    def test_unit_trace(self):
        for channel in (ch.depolarizing(0.2), ch.erasure(0.3, 2),
                        ch.completely_dephasing(3)):
            assert np.trace(ch.choi_matrix(channel)).real == pytest.approx(1.0)

    def test_positive_semidefinite(self):
        j = ch.choi_matrix(ch.amplitude_damping(0.6))
        assert np.min(np.linalg.eigvalsh(j)) > -1e-12

    def test_equality_invariant_under_kraus_gauge(self):
        # mixing Kraus operators by a unitary leaves the channel unchanged
        channel = ch.amplitude_damping(0.3)
        k0, k1 = channel.kraus_ops
        u = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        mixed = ch.KrausChannel((u[0, 0] * k0 + u[0, 1] * k1,
                                 u[1, 0] * k0 + u[1, 1] * k1), 2, 2)
        assert ch.channels_equal(channel, mixed)

    def test_inequality_detected(self):
        assert not ch.channels_equal(ch.depolarizing(0.1), ch.depolarizing(0.2))


class TestCatalog:
    def test_depolarizing_action(self):
        rho = density_from_matrix(np.diag([1.0, 0.0]))
        out = ch.apply(ch.depolarizing(0.75), rho)  # completely depolarizing
        assert trace_distance(out.matrix, np.eye(2) / 2) < 1e-12

    def test_amplitude_damping_decay(self):
        rho = density_from_matrix(np.diag([0.0, 1.0]))
        out = ch.apply(ch.amplitude_damping(0.3), rho)
        assert out.matrix[0, 0].real == pytest.approx(0.3)

    def test_erasure_flag_probability(self):
        rho = random_state((2,), "A", 11)
        out = ch.apply(ch.erasure(0.4, 2), rho)
        assert out.matrix[2, 2].real == pytest.approx(0.4)

    def test_completely_dephasing_kills_coherence(self):
        rho = density_from_matrix(np.array([[0.5, 0.5], [0.5, 0.5]]))
        out = ch.apply(ch.completely_dephasing(2), rho)
        assert abs(out.matrix[0, 1]) < 1e-12

    def test_generalized_dephasing_interpolates(self):
        # unit overlaps: identity; zero overlaps: completely dephasing
        ident = ch.generalized_dephasing(np.ones((2, 2)))
        assert ch.channels_equal(ident, ch.identity_channel(2))
        full = ch.generalized_dephasing(np.eye(2))
        assert ch.channels_equal(full, ch.completely_dephasing(2))

    def test_from_classical_matches_probabilities(self):
        w = np.array([[0.8, 0.3], [0.2, 0.7]])
        channel = ch.from_classical(w)
        out = ch.apply(channel, density_from_matrix(np.diag([1.0, 0.0])))
        assert np.diag(out.matrix).real == pytest.approx([0.8, 0.2])

    def test_cq_channel_breaks_entanglement(self):
        outs = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
        channel = ch.cq_channel(np.eye(2), outs)
        # the Choi state of an entanglement-breaking channel is separable;
        # here it is diagonal, so its partial transpose stays PSD
        j = ch.choi_matrix(channel).reshape(2, 2, 2, 2)
        jt = np.transpose(j, (0, 3, 2, 1)).reshape(4, 4)
        assert np.min(np.linalg.eigvalsh(jt)) > -1e-12

    def test_bsc_matrix(self):
        w = ch.bsc(0.1)
        assert w.sum(axis=0) == pytest.approx([1.0, 1.0])
        assert w[1, 0] == pytest.approx(0.1)


class TestComplementary:
    def test_entropy_exchange_symmetry(self):
        # for any input, H(B) of the dilated state uses the channel and H(E)
        # the complement; on a pure input both entropies agree
        channel = ch.depolarizing(0.23)
        rho = density_from_matrix(np.array([[1.0, 0.0], [0.0, 0.0]]))
        h_b = von_neumann_entropy(ch.apply(channel, rho))
        h_e = von_neumann_entropy(ch.apply(ch.complementary(channel), rho))
        assert h_b == pytest.approx(h_e, abs=1e-9)

    def test_amplitude_damping_complement_is_damping(self):
        p = 0.3
        comp = ch.complementary(ch.amplitude_damping(p))
        assert ch.channels_equal(comp, ch.amplitude_damping(1 - p))


class TestCompose:
    def test_amplitude_damping_semigroup(self):
        a = ch.amplitude_damping(0.2)
        b = ch.amplitude_damping(0.3)
        combined = ch.compose(b, a)
        assert ch.channels_equal(combined, ch.amplitude_damping(1 - 0.8 * 0.7))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            ch.compose(ch.identity_channel(3), ch.identity_channel(2))


class TestDegradability:
    @pytest.mark.parametrize("p", [0.1, 0.25, 0.4])
    def test_amplitude_damping_closed_form(self, p):
        channel = ch.amplitude_damping(p)
        t = ch.degrading_map(channel)
        assert t.params["p"] == pytest.approx((1 - 2 * p) / (1 - p))
        assert trace_distance(ch.choi_matrix(ch.compose(t, channel)),
                              ch.choi_matrix(ch.complementary(channel))) < 1e-8

    @pytest.mark.parametrize("p,d", [(0.1, 2), (0.25, 3)])
    def test_erasure_closed_form(self, p, d):
        channel = ch.erasure(p, d)
        t = ch.degrading_map(channel)
        assert trace_distance(ch.choi_matrix(ch.compose(t, channel)),
                              ch.choi_matrix(ch.complementary(channel))) < 1e-8

    def test_antidegradable_region_returns_none(self):
        assert ch.degrading_map(ch.amplitude_damping(0.7)) is None
        assert ch.degrading_map(ch.erasure(0.7, 2)) is None

    def test_is_degradable(self):
        assert ch.is_degradable(ch.amplitude_damping(0.2))
        assert not ch.is_degradable(ch.amplitude_damping(0.8))

    def test_numerical_search_on_dephasing(self):
        # generalized dephasing is degradable; the search has no closed form here
        g = np.array([[1.0, 0.6], [0.6, 1.0]])
        channel = ch.generalized_dephasing(g)
        t = ch.degrading_map(channel)
        assert t is not None
        assert trace_distance(ch.choi_matrix(ch.compose(t, channel)),
                              ch.choi_matrix(ch.complementary(channel))) < 1e-6


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.0, 1.0))
def test_apply_preserves_state_validity(idx, p):
    rho = random_state((2,), "A", 13, index=idx)
    out = ch.apply(ch.depolarizing(p), rho)
    assert np.trace(out.matrix).real == pytest.approx(1.0)
    assert np.min(np.linalg.eigvalsh(out.matrix)) > -1e-10
