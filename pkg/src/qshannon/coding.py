"""Typicality machinery and end-to-end coding simulators: typical-set census,
Slepian-Wolf binning, random coding over the binary symmetric channel,
block compression of quantum sources, and entanglement concentration.

Exhaustive quantities are computed exactly by enumerating sequence type
classes (compositions) with multinomial weights, which keeps the census and
the quantum-compression numbers exact far beyond naive enumeration.  Hard
enumeration caps trigger clear errors instead of silent sampling.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._rng import stream
from .entropy import shannon_entropy, validate_prob_dist
from .linalg import DensityOperator, eig_hermitian

CENSUS_CAP = 2 ** 24
QUANTUM_CAP = 2 ** 14
CODEWORD_CAP = 2 ** 14


class EnumerationCapError(ValueError):
    """Raised when an exhaustive computation would exceed its size cap."""


@dataclass(frozen=True)
class TypicalitySpec:
    n: int
    delta: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("block length must be >= 1")
        if self.delta <= 0:
            raise ValueError("delta must be positive")


@dataclass
class SimReport:
    success_prob: float
    rate: float
    fidelity: float
    trials: int
    mc_stderr: float
    op: str = ""
    params: dict = field(default_factory=dict)
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "op": self.op,
            "params": self.params,
            "success_prob": self.success_prob,
            "rate": self.rate,
            "fidelity": self.fidelity,
            "trials": self.trials,
            "mc_stderr": self.mc_stderr,
            "seed": self.seed,
        }


def _bernoulli_stderr(p_hat: float, trials: int) -> float:
    return math.sqrt(max(p_hat * (1 - p_hat), 0.0) / trials) if trials else 0.0


# ---------------------------------------------------------------------------
# classical typicality
# ---------------------------------------------------------------------------

def sequence_log_prob(x: Sequence[int], p) -> float:
    """log2 probability of an i.i.d. sequence; -inf on a zero-probability letter."""
    p = validate_prob_dist(p)
    total = 0.0
    for letter in x:
        if p[letter] <= 0:
            return -math.inf
        total += math.log2(p[letter])
    return total


def is_typical(x: Sequence[int], p, spec: TypicalitySpec) -> bool:
    """Two-sided check on the empirical per-letter information rate:
    H - delta <= -(1/n) log2 p(x) <= H + delta."""
    n = len(x)
    h = shannon_entropy(p)
    lp = sequence_log_prob(x, p)
    if lp == -math.inf:
        return False
    rate = -lp / n
    return h - spec.delta <= rate <= h + spec.delta


def _compositions(n: int, d: int):
    """All count vectors of length d summing to n."""
    if d == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, d - 1):
            yield (first,) + rest


def _multinomial(counts: Sequence[int]) -> int:
    total = sum(counts)
    out = 1
    rem = total
    for c in counts:
        out *= math.comb(rem, c)
        rem -= c
    return out


def _type_rate(counts: Sequence[int], logp: np.ndarray) -> float:
    """-(1/n) log2 of any sequence with these letter counts; inf if impossible."""
    n = sum(counts)
    total = 0.0
    for c, lp in zip(counts, logp):
        if c == 0:
            continue
        if lp == -math.inf:
            return math.inf
        total += c * lp
    return -total / n


@dataclass(frozen=True)
class CensusReport:
    count: int
    total_prob: float
    n: int
    delta: float
    entropy: float


def typical_set_census(p, spec: TypicalitySpec) -> CensusReport:
    """Exact size and probability of the typical set, via type classes."""
    p = validate_prob_dist(p)
    d = p.size
    if d ** spec.n > CENSUS_CAP:
        raise EnumerationCapError(
            f"{d}^{spec.n} sequences exceeds the census cap {CENSUS_CAP}")
    h = shannon_entropy(p)
    logp = np.array([math.log2(x) if x > 0 else -math.inf for x in p])
    count = 0
    prob = 0.0
    for counts in _compositions(spec.n, d):
        rate = _type_rate(counts, logp)
        if h - spec.delta <= rate <= h + spec.delta:
            m = _multinomial(counts)
            count += m
            prob += m * 2.0 ** (-rate * spec.n)
    return CensusReport(count, min(prob, 1.0), spec.n, spec.delta, h)


# ---------------------------------------------------------------------------
# Slepian-Wolf binning
# ---------------------------------------------------------------------------

def slepian_wolf_sim(pxy, n: int, rate: float, trials: int, seed: int,
                     delta: float = 0.5) -> SimReport:
    """Source coding with side information: x is hashed into 2^{nR} bins and
    the decoder scans the received bin for sequences jointly typical with y,
    ranking survivors by conditional likelihood p(x|y) (random tie-break).

    The bin scan is simulated exactly: under uniform independent binning,
    the number of competitors of each joint type present in the bin is
    Binomial(type size, 1/#bins), so no sequences are ever materialized."""
    pxy = np.asarray(pxy, dtype=float)
    dx, dy = pxy.shape
    px = pxy.sum(axis=1)
    py = pxy.sum(axis=0)
    hx, hy = shannon_entropy(px), shannon_entropy(py)
    hxy = shannon_entropy(pxy.reshape(-1))
    nbins = max(int(round(2.0 ** (n * rate))), 1)

    flat = pxy.reshape(-1)
    log_pxy = np.where(flat > 0, np.log2(np.where(flat > 0, flat, 1.0)), -np.inf)
    log_px = np.where(px > 0, np.log2(np.where(px > 0, px, 1.0)), -np.inf)
    # conditional log-likelihood log2 p(x|y) per joint cell
    with np.errstate(divide="ignore", invalid="ignore"):
        log_cond = log_pxy.reshape(dx, dy) - np.where(py > 0, np.log2(
            np.where(py > 0, py, 1.0)), -np.inf)[None, :]

    def jointly_typical(joint_counts: np.ndarray) -> bool:
        # three two-sided conditions: on p(x), p(y), and p(x, y)
        cx = joint_counts.sum(axis=1)
        cy = joint_counts.sum(axis=0)
        for counts, logp, h in ((cx, log_px, hx),
                                (cy, np.where(py > 0, np.log2(np.where(py > 0, py, 1.0)), -np.inf), hy),
                                (joint_counts.reshape(-1), log_pxy, hxy)):
            rate_ = _type_rate(counts, np.asarray(logp))
            if not (h - delta <= rate_ <= h + delta):
                return False
        return True

    errors = 0
    for t in range(trials):
        rng = stream(seed, t)
        joint = rng.multinomial(n, flat).reshape(dx, dy)
        cy = joint.sum(axis=0)
        own_typical = jointly_typical(joint)
        own_ll = float(np.sum(joint * np.where(np.isfinite(log_cond), log_cond, 0.0)))
        if np.any(joint[~np.isfinite(log_cond)] > 0):
            own_ll = -math.inf

        # enumerate competitor joint types with the same y-composition
        better = 0      # typical competitors with strictly higher likelihood
        equal = 0       # typical competitors tying the true sequence
        any_typical = 0
        per_y_comps = [list(_compositions(int(cy[y]), dx)) for y in range(dy)]
        for combo in itertools.product(*per_y_comps):
            comp_counts = np.array(combo, dtype=int).T  # (dx, dy)
            if not jointly_typical(comp_counts):
                continue
            size = 1
            for y in range(dy):
                size *= _multinomial(combo[y])
            if np.array_equal(comp_counts, joint):
                size -= 1  # exclude the true sequence itself
            if size <= 0:
                continue
            ll = float(np.sum(comp_counts * np.where(np.isfinite(log_cond), log_cond, 0.0)))
            if np.any(comp_counts[~np.isfinite(log_cond)] > 0):
                continue  # zero conditional probability: never chosen
            k = rng.binomial(size, 1.0 / nbins)
            if k == 0:
                continue
            any_typical += k
            if not own_typical:
                continue
            if ll > own_ll + 1e-12:
                better += k
            elif abs(ll - own_ll) <= 1e-12:
                equal += k

        if not own_typical:
            errors += 1
        elif better > 0:
            errors += 1
        elif equal > 0 and rng.random() >= 1.0 / (equal + 1):
            errors += 1

    err = errors / trials
    return SimReport(1 - err, rate, math.nan, trials, _bernoulli_stderr(err, trials),
                     op="slepian_wolf", seed=seed,
                     params={"n": n, "rate": rate, "delta": delta})


# ---------------------------------------------------------------------------
# BSC random coding
# ---------------------------------------------------------------------------

def bsc_random_code_sim(p: float, n: int, rate: float, trials: int, seed: int) -> SimReport:
    """Random codebook over the binary symmetric channel with minimum-Hamming-
    distance decoding; reports the empirical block error rate."""
    if not 0 <= p <= 1:
        raise ValueError("flip probability outside [0,1]")
    n_codewords = max(int(round(2.0 ** (n * rate))), 2)
    if n_codewords > CODEWORD_CAP:
        raise EnumerationCapError(
            f"2^(nR) = {n_codewords} codewords exceeds the cap {CODEWORD_CAP}")
    errors = 0
    for t in range(trials):
        rng = stream(seed, t)
        book = rng.integers(0, 2, size=(n_codewords, n), dtype=np.uint8)
        msg = int(rng.integers(n_codewords))
        noise = (rng.random(n) < p).astype(np.uint8)
        received = book[msg] ^ noise
        dist = np.count_nonzero(book ^ received[None, :], axis=1)
        best = dist.min()
        winners = np.flatnonzero(dist == best)
        choice = winners[int(rng.integers(winners.size))]
        if choice != msg:
            errors += 1
    err = errors / trials
    return SimReport(1 - err, rate, math.nan, trials, _bernoulli_stderr(err, trials),
                     op="bsc_random_code", seed=seed,
                     params={"p": p, "n": n, "rate": rate})


# ---------------------------------------------------------------------------
# quantum source compression
# ---------------------------------------------------------------------------

@dataclass
class TypicalSubspace:
    dim: int
    weight: float
    typical_types: list[tuple[tuple[int, ...], float]]  # (eigen-index counts, log2 prob/letter-seq)
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    n: int
    projector: Optional[np.ndarray] = None


def schumacher_projector(rho: DensityOperator, spec: TypicalitySpec,
                         materialize_cap: int = 2 ** 12) -> TypicalSubspace:
    """Projector data for the delta-typical subspace of rho^(tensor n).

    The subspace is spanned by product eigenvectors whose eigenvalue product
    lies in [2^{-n(H+delta)}, 2^{-n(H-delta)}]; membership depends only on
    the type of the eigen-index sequence."""
    d = rho.dim
    if d ** spec.n > QUANTUM_CAP:
        raise EnumerationCapError(
            f"{d}^{spec.n} exceeds the quantum enumeration cap {QUANTUM_CAP}")
    vals, vecs = eig_hermitian(rho.matrix)
    vals = np.clip(vals, 0.0, None)
    h = shannon_entropy(vals)
    logp = np.array([math.log2(v) if v > 1e-300 else -math.inf for v in vals])
    typical = []
    dim = 0
    weight = 0.0
    for counts in _compositions(spec.n, d):
        rate = _type_rate(counts, logp)
        if h - spec.delta <= rate <= h + spec.delta:
            m = _multinomial(counts)
            typical.append((counts, -rate * spec.n))
            dim += m
            weight += m * 2.0 ** (-rate * spec.n)
    sub = TypicalSubspace(dim, min(weight, 1.0), typical, vals, vecs, spec.n)
    if d ** spec.n <= materialize_cap:
        sub.projector = _materialize_projector(sub, d)
    return sub


def _typical_mask(sub: TypicalSubspace, d: int) -> np.ndarray:
    """Boolean mask over all d^n eigen-index sequences, True when typical."""
    typical_types = {t for t, _ in sub.typical_types}
    mask = np.zeros(d ** sub.n, dtype=bool)
    for idx, seq in enumerate(itertools.product(range(d), repeat=sub.n)):
        counts = tuple(seq.count(a) for a in range(d))
        mask[idx] = counts in typical_types
    return mask


def _materialize_projector(sub: TypicalSubspace, d: int) -> np.ndarray:
    mask = _typical_mask(sub, d)
    u = sub.eigenvectors
    big_u = u
    for _ in range(sub.n - 1):
        big_u = np.kron(big_u, u)
    cols = big_u[:, mask]
    return cols @ cols.conj().T


def _rank_limited_subspace(rho: DensityOperator, n: int, max_dim: int) -> TypicalSubspace:
    """Subspace of the largest product eigenvalues, grown whole type classes
    at a time while staying within max_dim basis vectors."""
    d = rho.dim
    vals, vecs = eig_hermitian(rho.matrix)
    vals = np.clip(vals, 0.0, None)
    logp = np.array([math.log2(v) if v > 1e-300 else -math.inf for v in vals])
    classes = []
    for counts in _compositions(n, d):
        rate = _type_rate(counts, logp)
        if math.isinf(rate):
            continue
        classes.append((counts, -rate * n, _multinomial(counts)))
    classes.sort(key=lambda c: -c[1])  # largest eigenvalue product first
    chosen = []
    dim = 0
    weight = 0.0
    for counts, lg, m in classes:
        if dim + m > max_dim:
            break
        chosen.append((counts, lg))
        dim += m
        weight += m * 2.0 ** lg
    return TypicalSubspace(dim, weight, chosen, vals, vecs, n)


@dataclass
class CompressionReport:
    fidelity: float
    weight: float
    dim: int
    rate: float
    lower_bound: float       # 2 * weight - 1
    ky_fan_bound: Optional[float] = None


def schumacher_sim(ensemble, n: int, spec: Optional[TypicalitySpec] = None,
                   rate: Optional[float] = None) -> CompressionReport:
    """Exact average fidelity of block compression of a pure-state source.

    Each block is projected onto the retained subspace; on failure the most
    likely retained product eigenstate is substituted.  Pass `spec` for the
    delta-typical subspace or `rate` (qubits per letter) for a rank-limited
    subspace of at most 2^{n rate} dimensions."""
    probs = validate_prob_dist([p for p, _ in ensemble])
    states = [np.asarray(v, dtype=complex).reshape(-1) for _, v in ensemble]
    d = states[0].size
    m_letters = len(states)
    if m_letters ** n > QUANTUM_CAP:
        raise EnumerationCapError(
            f"{m_letters}^{n} message sequences exceeds the cap {QUANTUM_CAP}")
    rho_m = sum(p * np.outer(v, v.conj()) for p, v in zip(probs, states))
    from .linalg import density_from_matrix
    rho = density_from_matrix(rho_m)

    ky_fan = None
    if spec is not None:
        sub = schumacher_projector(rho, spec, materialize_cap=0)
    elif rate is not None:
        max_dim = max(int(math.floor(2.0 ** (n * rate))), 1)
        sub = _rank_limited_subspace(rho, n, max_dim)
        all_vals = np.sort(np.clip(sub.eigenvalues, 0, None))[::-1]
        prod_vals = all_vals
        for _ in range(n - 1):
            prod_vals = np.sort(np.outer(prod_vals, all_vals).reshape(-1))[::-1]
        ky_fan = float(prod_vals[:max_dim].sum())
    else:
        raise ValueError("provide either spec or rate")

    vals, vecs = sub.eigenvalues, sub.eigenvectors
    # per-letter overlap table O[x, k] = |<eigvec_k | state_x>|^2
    overlap = np.abs(np.einsum("dk,xd->xk", vecs.conj(), np.array(states))) ** 2

    typical_types = {t: lg for t, lg in sub.typical_types}
    if not typical_types:
        return CompressionReport(0.0, 0.0, 0, rate or math.nan, -1.0, ky_fan)

    # most likely retained eigenstate: constant sequence of the heaviest
    # admissible arrangement (largest per-letter eigenvalue within the top type)
    top_type = max(typical_types, key=lambda t: typical_types[t])
    junk_seq = []
    for k in range(d):
        junk_seq.extend([k] * top_type[k])
    junk_seq.sort(key=lambda k: -vals[k])
    junk_seq = tuple(junk_seq)

    def w_of_type(x_counts: tuple[int, ...]) -> float:
        # dynamic program over eigen-index compositions: probability that a
        # product state with these letter counts projects into the subspace
        letters = []
        for x in range(m_letters):
            letters.extend([x] * x_counts[x])
        # states over partial eigen-counts
        table = {(0,) * d: 1.0}
        for x in letters:
            new = {}
            for key, amp in table.items():
                for k in range(d):
                    nk = list(key)
                    nk[k] += 1
                    nk = tuple(nk)
                    new[nk] = new.get(nk, 0.0) + amp * overlap[x, k]
            table = new
        return sum(v for key, v in table.items() if key in typical_types)

    w_cache: dict[tuple[int, ...], float] = {}
    fbar = 0.0
    for seq in itertools.product(range(m_letters), repeat=n):
        p_seq = float(np.prod([probs[x] for x in seq]))
        if p_seq == 0.0:
            continue
        counts = tuple(seq.count(x) for x in range(m_letters))
        if counts not in w_cache:
            w_cache[counts] = w_of_type(counts)
        w = w_cache[counts]
        junk_overlap = float(np.prod([overlap[x, k] for x, k in zip(seq, junk_seq)]))
        fbar += p_seq * (w * w + (1 - w) * junk_overlap)

    eff_rate = rate if rate is not None else math.log2(max(sub.dim, 1)) / n
    return CompressionReport(fbar, sub.weight, sub.dim, eff_rate,
                             2 * sub.weight - 1, ky_fan)


# ---------------------------------------------------------------------------
# entanglement concentration
# ---------------------------------------------------------------------------

@dataclass
class ConcentrationReport:
    histogram: dict[int, int]
    expected_counts: dict[int, float]
    mean_log2_d: float
    rate: float
    exact_mean_log2_d: float
    chi2_pvalue: float


def concentration_sim(p: float, n: int, trials: int, seed: int) -> ConcentrationReport:
    """Repeated local total-occupation measurement on n copies of a two-party
    state with Schmidt weights (1-p, p): outcome m arrives with the binomial
    law and leaves a maximally entangled state of rank C(n, m)."""
    if not 0 <= p <= 1:
        raise ValueError("Schmidt parameter outside [0,1]")
    if n > 64:
        raise EnumerationCapError("binary concentration capped at n = 64")
    rng = stream(seed, 0)
    outcomes = rng.binomial(n, p, size=trials)
    hist = {int(m): int(c) for m, c in zip(*np.unique(outcomes, return_counts=True))}
    log_d = np.array([math.log2(math.comb(n, int(m))) for m in outcomes])
    pmf = np.array([math.comb(n, m) * (p ** m) * ((1 - p) ** (n - m)) for m in range(n + 1)])
    exact_mean = float(sum(pmf[m] * math.log2(math.comb(n, m)) for m in range(n + 1)))
    expected = {m: trials * pmf[m] for m in range(n + 1)}

    # chi-squared against the exact binomial, pooling cells with tiny expectation
    obs, exp = [], []
    spill_o = spill_e = 0.0
    for m in range(n + 1):
        e = expected[m]
        o = hist.get(m, 0)
        if e < 5:
            spill_o += o
            spill_e += e
        else:
            obs.append(o)
            exp.append(e)
    if spill_e > 0:
        obs.append(spill_o)
        exp.append(spill_e)
    from scipy.stats import chisquare
    exp = np.array(exp) * (sum(obs) / sum(exp))
    _, pvalue = chisquare(obs, exp)

    return ConcentrationReport(hist, expected, float(log_d.mean()),
                               float(log_d.mean() / n), exact_mean, float(pvalue))
