import itertools
import math

import numpy as np
import pytest

from qshannon import coding
from qshannon.coding import (
    CompressionReport,
    EnumerationCapError,
    TypicalitySpec,
    bsc_random_code_sim,
    concentration_sim,
    is_typical,
    schumacher_projector,
    schumacher_sim,
    sequence_log_prob,
    slepian_wolf_sim,
    typical_set_census,
)
from qshannon.entropy import shannon_entropy
from qshannon.linalg import density_from_matrix


class TestTypicality:
    def test_sequence_log_prob(self):
        p = [0.5, 0.5]
        assert sequence_log_prob([0, 1, 0], p) == pytest.approx(-3.0)
        assert sequence_log_prob([0, 1], [1.0, 0.0]) == -math.inf

    def test_is_typical_uniform_always(self):
        spec = TypicalitySpec(4, 0.1)
        assert is_typical([0, 1, 0, 1], [0.5, 0.5], spec)

    def test_census_matches_brute_force(self):
        p = np.array([0.7, 0.2, 0.1])
        spec = TypicalitySpec(5, 0.3)
        rep = typical_set_census(p, spec)
        count = 0
        prob = 0.0
        for seq in itertools.product(range(3), repeat=5):
            if is_typical(seq, p, spec):
                count += 1
                prob += 2.0 ** sequence_log_prob(seq, p)
        assert rep.count == count
        assert rep.total_prob == pytest.approx(prob, abs=1e-12)

    def test_census_size_bound(self):
        p = np.array([0.75, 0.25])
        spec = TypicalitySpec(20, 0.15)
        rep = typical_set_census(p, spec)
        assert rep.count <= 2.0 ** (spec.n * (rep.entropy + spec.delta))

    def test_census_cap(self):
        with pytest.raises(EnumerationCapError):
            typical_set_census(np.full(4, 0.25), TypicalitySpec(20, 0.1))


class TestSlepianWolf:
    PXY = np.array([[0.40, 0.05], [0.05, 0.50]])

    def test_high_rate_succeeds(self):
        rep = slepian_wolf_sim(self.PXY, n=24, rate=0.9, trials=300, seed=5)
        assert rep.success_prob > 0.85

    def test_insufficient_rate_fails_often(self):
        rep = slepian_wolf_sim(self.PXY, n=24, rate=0.1, trials=300, seed=5)
        assert rep.success_prob < 0.5

    def test_rate_monotonicity(self):
        lo = slepian_wolf_sim(self.PXY, n=20, rate=0.3, trials=200, seed=7)
        hi = slepian_wolf_sim(self.PXY, n=20, rate=0.8, trials=200, seed=7)
        assert hi.success_prob >= lo.success_prob - 0.05

    def test_deterministic(self):
        a = slepian_wolf_sim(self.PXY, n=16, rate=0.6, trials=100, seed=11)
        b = slepian_wolf_sim(self.PXY, n=16, rate=0.6, trials=100, seed=11)
        assert a.success_prob == b.success_prob


class TestBscCode:
    def test_above_capacity_rate_fails(self):
        rep = bsc_random_code_sim(0.2, n=14, rate=0.95, trials=200, seed=13)
        assert rep.success_prob < 0.7

    def test_below_capacity_rate_succeeds(self):
        rep = bsc_random_code_sim(0.05, n=14, rate=0.3, trials=200, seed=13)
        assert rep.success_prob > 0.9

    def test_codeword_cap(self):
        with pytest.raises(EnumerationCapError):
            bsc_random_code_sim(0.05, n=31, rate=0.95, trials=10, seed=1)

    def test_noiseless_nearly_perfect(self):
        # only codebook collisions (random tie-breaks) can cause errors
        rep = bsc_random_code_sim(0.0, n=14, rate=0.3, trials=100, seed=17)
        assert rep.success_prob > 0.95


class TestSchumacherProjector:
    RHO = density_from_matrix(np.array([[0.75, 0.25], [0.25, 0.25]]))

    def test_projector_properties(self):
        sub = schumacher_projector(self.RHO, TypicalitySpec(3, 0.5))
        p = sub.projector
        assert p is not None
        assert np.max(np.abs(p @ p - p)) < 1e-10                 # idempotent
        assert np.trace(p).real == pytest.approx(sub.dim)

    def test_weight_matches_projected_trace(self):
        sub = schumacher_projector(self.RHO, TypicalitySpec(3, 0.5))
        rho3 = self.RHO.matrix
        big = np.kron(np.kron(rho3, rho3), rho3)
        assert np.trace(sub.projector @ big).real == pytest.approx(sub.weight)

    def test_weight_grows_with_delta(self):
        w = [schumacher_projector(self.RHO, TypicalitySpec(3, d)).weight
             for d in (0.3, 0.5, 3.0)]
        assert w[0] <= w[1] <= w[2]
        assert w[2] == pytest.approx(1.0)

    def test_enumeration_cap(self):
        with pytest.raises(EnumerationCapError):
            schumacher_projector(self.RHO, TypicalitySpec(20, 0.5))


class TestSchumacherSim:
    ENSEMBLE = [(0.5, np.array([1.0, 0.0])),
                (0.5, np.array([1.0, 1.0]) / math.sqrt(2))]

    def test_fidelity_bounds(self):
        rep = schumacher_sim(self.ENSEMBLE, 3, spec=TypicalitySpec(3, 0.5))
        assert rep.lower_bound <= rep.fidelity <= 1.0
        assert rep.fidelity <= rep.weight + 1e-12

    def test_full_space_perfect(self):
        rep = schumacher_sim(self.ENSEMBLE, 2, spec=TypicalitySpec(2, 5.0))
        assert rep.fidelity == pytest.approx(1.0)

    def test_rate_mode_ky_fan(self):
        rep = schumacher_sim(self.ENSEMBLE, 3, rate=2 / 3)
        assert rep.ky_fan_bound is not None
        assert rep.fidelity <= rep.ky_fan_bound + 1e-12
        assert rep.dim <= 2 ** 2

    def test_rate_monotone_in_dimension(self):
        lo = schumacher_sim(self.ENSEMBLE, 3, rate=1 / 3)
        hi = schumacher_sim(self.ENSEMBLE, 3, rate=1.0)
        assert hi.fidelity >= lo.fidelity


class TestConcentration:
    def test_exact_identity(self):
        # mean concentrated ebits plus outcome entropy equals n H(p) exactly
        n, p = 30, 0.3
        rep = concentration_sim(p, n, trials=100, seed=19)
        pmf = [math.comb(n, m) * p ** m * (1 - p) ** (n - m) for m in range(n + 1)]
        h_m = -sum(q * math.log2(q) for q in pmf if q > 0)
        assert rep.exact_mean_log2_d + h_m == pytest.approx(
            n * shannon_entropy([p, 1 - p]), abs=1e-9)

    def test_histogram_counts_sum(self):
        rep = concentration_sim(0.2, 20, trials=500, seed=23)
        assert sum(rep.histogram.values()) == 500

    def test_deterministic(self):
        a = concentration_sim(0.2, 20, trials=200, seed=29)
        b = concentration_sim(0.2, 20, trials=200, seed=29)
        assert a.mean_log2_d == b.mean_log2_d

    def test_degenerate_p(self):
        rep = concentration_sim(0.0, 10, trials=50, seed=31)
        assert rep.mean_log2_d == 0.0
