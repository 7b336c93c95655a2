"""Quantum channels: Kraus representation, Stinespring dilation, complementary
channels, a constructor catalog, and degradability certification.

Channel equality is always decided on Choi matrices (trace-norm distance),
which is basis independent and insensitive to the isometric freedom on the
environment only where it should be.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from ._rng import stream
from .linalg import (
    DensityOperator,
    SubsystemLayout,
    dagger,
    trace_distance,
)

COMPLETENESS_TOL = 1e-10
CHOI_EQUALITY_TOL = 1e-8


@dataclass(frozen=True)
class KrausChannel:
    """Completely positive trace-preserving map given by Kraus operators.

    `kind`/`params` are optional catalog metadata used by closed-form
    degradability results and capacity sweeps; they never affect the map.
    """

    kraus_ops: tuple[np.ndarray, ...]
    dim_in: int
    dim_out: int
    kind: Optional[str] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus_ops)
        object.__setattr__(self, "kraus_ops", ops)
        if not ops:
            raise ValueError("need at least one Kraus operator")
        for k in ops:
            if k.shape != (self.dim_out, self.dim_in):
                raise ValueError(f"Kraus shape {k.shape} != ({self.dim_out}, {self.dim_in})")
        s = sum(dagger(k) @ k for k in ops)
        if np.max(np.abs(s - np.eye(self.dim_in))) > COMPLETENESS_TOL:
            raise ValueError("Kraus operators do not satisfy the completeness relation")

    @property
    def env_dim(self) -> int:
        return len(self.kraus_ops)


@dataclass(frozen=True)
class IsometricDilation:
    """Isometry V: A -> B otimes E with V = sum_k K_k otimes |k>_E."""

    isometry: np.ndarray
    dim_b: int
    dim_e: int

    def __post_init__(self):
        v = np.asarray(self.isometry, dtype=complex)
        object.__setattr__(self, "isometry", v)
        if np.max(np.abs(dagger(v) @ v - np.eye(v.shape[1]))) > COMPLETENESS_TOL:
            raise ValueError("dilation matrix is not an isometry")


def apply(channel: KrausChannel, rho: DensityOperator | np.ndarray) -> DensityOperator:
    """N(rho) = sum_k K rho K†."""
    m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=complex)
    if m.shape[0] != channel.dim_in:
        raise ValueError(f"input dim {m.shape[0]} != channel dim_in {channel.dim_in}")
    out = sum(k @ m @ dagger(k) for k in channel.kraus_ops)
    return DensityOperator(out, SubsystemLayout((channel.dim_out,), ("B",)))


def dilate(channel: KrausChannel) -> IsometricDilation:
    """Stinespring isometry with output ordered B otimes E and |E| = #Kraus ops."""
    db, de, da = channel.dim_out, channel.env_dim, channel.dim_in
    v = np.zeros((db * de, da), dtype=complex)
    for k_idx, k in enumerate(channel.kraus_ops):
        for b in range(db):
            v[b * de + k_idx, :] += k[b, :]
    return IsometricDilation(v, db, de)


def dilate_state(channel: KrausChannel, rho: DensityOperator | np.ndarray) -> DensityOperator:
    """Joint output-environment state V rho V† with layout (B, E)."""
    m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=complex)
    if m.shape[0] != channel.dim_in:
        raise ValueError("dimension mismatch")
    v = dilate(channel).isometry
    lay = SubsystemLayout((channel.dim_out, channel.env_dim), ("B", "E"))
    return DensityOperator(v @ m @ dagger(v), lay)


def complementary(channel: KrausChannel) -> KrausChannel:
    """Map to the environment: trace out B from the dilation.

    The complement's Kraus operator for output-basis index b of B is
    L_b[k, a] = K_k[b, a]."""
    stack = np.stack(channel.kraus_ops)           # (k, b, a)
    ops = tuple(stack[:, b, :] for b in range(channel.dim_out))
    return KrausChannel(ops, channel.dim_in, channel.env_dim,
                        kind=_complement_kind(channel), params=dict(channel.params))


def _complement_kind(channel: KrausChannel) -> Optional[str]:
    return f"{channel.kind}_complement" if channel.kind else None


def compose(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    """outer after inner."""
    if inner.dim_out != outer.dim_in:
        raise ValueError("dimension mismatch in composition")
    ops = tuple(a @ k for a in outer.kraus_ops for k in inner.kraus_ops)
    return KrausChannel(ops, inner.dim_in, outer.dim_out)


def choi_matrix(channel: KrausChannel) -> np.ndarray:
    """(N otimes id) applied to the maximally entangled state, ordered B otimes A."""
    d = channel.dim_in
    j = np.zeros((channel.dim_out * d, channel.dim_out * d), dtype=complex)
    for k in channel.kraus_ops:
        w = k.reshape(-1) / np.sqrt(d)   # amplitude at (b, a) is K[b, a]/sqrt(d)
        j += np.outer(w, w.conj())
    return j


def channels_equal(a: KrausChannel, b: KrausChannel, tol: float = CHOI_EQUALITY_TOL) -> bool:
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        return False
    return trace_distance(choi_matrix(a), choi_matrix(b)) <= tol


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _check_prob(p: float):
    if not 0 <= p <= 1:
        raise ValueError(f"probability parameter {p} outside [0, 1]")


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel((np.eye(d, dtype=complex),), d, d, kind="identity")


def depolarizing(p: float) -> KrausChannel:
    """Qubit map (1 - 4p/3)|psi><psi| + (4p/3) I/2 on pure inputs."""
    _check_prob(p)
    ops = [np.sqrt(1 - p) * _PAULI["I"]]
    ops += [np.sqrt(p / 3) * _PAULI[s] for s in "XYZ"]
    return KrausChannel(tuple(ops), 2, 2, kind="depolarizing", params={"p": p})


def amplitude_damping(p: float) -> KrausChannel:
    """Qubit decay |1> -> |0> with probability p."""
    _check_prob(p)
    k0 = np.array([[1, 0], [0, np.sqrt(1 - p)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(p)], [0, 0]], dtype=complex)
    return KrausChannel((k0, k1), 2, 2, kind="amplitude_damping", params={"p": p})


def erasure(p: float, d: int = 2) -> KrausChannel:
    """With probability p the input is replaced by the flag state |e>, the last
    basis vector of the enlarged (d+1)-dimensional output space."""
    _check_prob(p)
    if d < 2:
        raise ValueError("input dimension must be >= 2")
    keep = np.zeros((d + 1, d), dtype=complex)
    keep[:d, :] = np.eye(d)
    ops = [np.sqrt(1 - p) * keep]
    for i in range(d):
        e = np.zeros((d + 1, d), dtype=complex)
        e[d, i] = np.sqrt(p)
        ops.append(e)
    return KrausChannel(tuple(ops), d, d + 1, kind="erasure", params={"p": p, "d": d})


def generalized_dephasing(env_overlaps: np.ndarray) -> KrausChannel:
    """Dephasing whose environment records the basis label in states with the
    given Gram matrix of overlaps (PSD, unit diagonal)."""
    g = np.asarray(env_overlaps, dtype=complex)
    d = g.shape[0]
    if g.shape != (d, d) or np.max(np.abs(g - dagger(g))) > 1e-10:
        raise ValueError("overlap matrix must be Hermitian square")
    if np.max(np.abs(np.diag(g) - 1)) > 1e-10:
        raise ValueError("overlap matrix must have unit diagonal")
    vals, vecs = np.linalg.eigh(g)
    if vals.min() < -1e-10:
        raise ValueError("overlap matrix must be positive semidefinite")
    # columns of m are the environment record states: m†m = G
    m = (vecs * np.sqrt(np.clip(vals, 0, None))) @ dagger(vecs)
    ops = tuple(np.diag(m[k, :]) for k in range(d))
    return KrausChannel(ops, d, d, kind="generalized_dephasing")


def completely_dephasing(d: int) -> KrausChannel:
    """Kills all off-diagonal matrix elements in the computational basis."""
    ops = []
    for i in range(d):
        k = np.zeros((d, d), dtype=complex)
        k[i, i] = 1
        ops.append(k)
    return KrausChannel(tuple(ops), d, d, kind="completely_dephasing")


def cq_channel(basis: np.ndarray, output_states: Sequence[np.ndarray]) -> KrausChannel:
    """Measure in `basis` (orthonormal columns), then prepare the matching
    output state: the measure-and-prepare, entanglement-breaking form."""
    b = np.asarray(basis, dtype=complex)
    d_in = b.shape[0]
    if b.shape[1] != d_in or np.max(np.abs(dagger(b) @ b - np.eye(d_in))) > 1e-10:
        raise ValueError("basis columns must be orthonormal")
    outs = [np.asarray(s, dtype=complex) for s in output_states]
    if len(outs) != d_in:
        raise ValueError("need one output state per basis vector")
    d_out = outs[0].shape[0]
    ops = []
    for i in range(d_in):
        vals, vecs = np.linalg.eigh(outs[i])
        for j in range(d_out):
            if vals[j] > 1e-14:
                ops.append(np.sqrt(vals[j]) * np.outer(vecs[:, j], b[:, i].conj()))
    return KrausChannel(tuple(ops), d_in, d_out, kind="cq")


def from_classical(w: np.ndarray) -> KrausChannel:
    """Quantum lift of a column-stochastic transition matrix p(y|x): dephase,
    then shuffle basis states with the classical probabilities."""
    w = np.asarray(w, dtype=float)
    dy, dx = w.shape
    if w.min() < 0 or np.max(np.abs(w.sum(axis=0) - 1)) > 1e-12:
        raise ValueError("transition matrix must be column-stochastic")
    ops = []
    for y in range(dy):
        for x in range(dx):
            if w[y, x] > 0:
                k = np.zeros((dy, dx), dtype=complex)
                k[y, x] = np.sqrt(w[y, x])
                ops.append(k)
    return KrausChannel(tuple(ops), dx, dy, kind="classical")


def bsc(p: float) -> np.ndarray:
    """Binary symmetric channel transition matrix (column-stochastic)."""
    _check_prob(p)
    return np.array([[1 - p, p], [p, 1 - p]])


# ---------------------------------------------------------------------------
# degradability
# ---------------------------------------------------------------------------

def _erasure_degrading(p: float, d: int) -> KrausChannel:
    """Closed-form degrading map for erasure(p <= 1/2): a q-erasure from B into
    the complement's index convention (flag at index 0, message shifted up)."""
    q = (1 - 2 * p) / (1 - p)
    shift = np.zeros((d + 1, d + 1), dtype=complex)
    for i in range(d):
        shift[1 + i, i] = np.sqrt(1 - q)
    ops = [shift]
    for j in range(d):
        e = np.zeros((d + 1, d + 1), dtype=complex)
        e[0, j] = np.sqrt(q)
        ops.append(e)
    flag = np.zeros((d + 1, d + 1), dtype=complex)
    flag[0, d] = 1
    ops.append(flag)
    return KrausChannel(tuple(ops), d + 1, d + 1, kind="erasure_degrading",
                        params={"q": q, "d": d})


def _search_degrading(channel: KrausChannel, restarts: int = 10,
                      seed: int = 20240824, residual_tol: float = 1e-6) -> Optional[KrausChannel]:
    """Numerical search for T with T∘N = N_c, over Stinespring isometries of
    the candidate degrading map.  Returns None when no candidate reaches the
    residual tolerance."""
    comp = complementary(channel)
    target = choi_matrix(comp)
    db, de = channel.dim_out, channel.env_dim
    env = de  # rank budget for the degrading map
    nrow = de * env

    def kraus_from(x: np.ndarray) -> list[np.ndarray]:
        z = (x[: nrow * db] + 1j * x[nrow * db:]).reshape(nrow, db)
        # project onto the isometry manifold so the candidate is always CPTP
        gram = dagger(z) @ z
        vals, vecs = np.linalg.eigh(gram)
        inv_sqrt = (vecs * (1 / np.sqrt(np.clip(vals, 1e-12, None)))) @ dagger(vecs)
        w = z @ inv_sqrt
        return [w.reshape(de, env, db)[:, k, :] for k in range(env)]

    def objective(x: np.ndarray) -> float:
        ops = kraus_from(x)
        t = KrausChannel(tuple(ops), db, de)
        diff = choi_matrix(compose(t, channel)) - target
        return float(np.sum(np.abs(diff) ** 2))

    best = None
    best_val = np.inf
    for r in range(restarts):
        rng = stream(seed, r)
        x0 = rng.standard_normal(2 * nrow * db)
        res = minimize(objective, x0, method="L-BFGS-B",
                       options={"maxiter": 500, "ftol": 1e-14, "gtol": 1e-12})
        if res.fun < best_val:
            best_val = res.fun
            best = res.x
    if best is None:
        return None
    t = KrausChannel(tuple(kraus_from(best)), db, de)
    residual = trace_distance(choi_matrix(compose(t, channel)), target)
    return t if residual <= residual_tol else None


def degrading_map(channel: KrausChannel) -> Optional[KrausChannel]:
    """T with T∘N = N_c (Choi distance <= 1e-8 for closed forms), or None.

    Closed forms cover amplitude damping and erasure at p <= 1/2; anything
    else falls back to a seeded numerical search.  A None result is evidence
    of non-degradability, not a certificate."""
    if channel.kind == "amplitude_damping":
        p = channel.params["p"]
        if p <= 0.5:
            return amplitude_damping((1 - 2 * p) / (1 - p))
        return None
    if channel.kind == "erasure":
        p, d = channel.params["p"], channel.params["d"]
        if p <= 0.5:
            return _erasure_degrading(p, d)
        return None
    return _search_degrading(channel)


def is_degradable(channel: KrausChannel, tol: float = CHOI_EQUALITY_TOL) -> bool:
    t = degrading_map(channel)
    if t is None:
        return False
    return trace_distance(choi_matrix(compose(t, channel)),
                          choi_matrix(complementary(channel))) <= max(tol, 1e-6)
