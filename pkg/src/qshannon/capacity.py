"""Single-letter capacity optimizers: Blahut-Arimoto for classical channels,
Holevo chi, one-shot quantum capacity, and entanglement-assisted capacity.

All values are in bits per channel use.  The ensemble/state optimizers certify
lower bounds (best value over seeded restarts); Blahut-Arimoto and the
entanglement-assisted ascent also report a duality gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq, minimize

from ._rng import stream
from .channels import KrausChannel, apply, complementary, depolarizing, erasure
from .entropy import shannon_entropy
from .linalg import dagger

LN2 = math.log(2)


@dataclass
class CapacityResult:
    value: float
    argmax: object
    iterations: int
    converged: bool
    gap_estimate: float = 0.0
    raw_value: Optional[float] = None


# ---------------------------------------------------------------------------
# classical capacity
# ---------------------------------------------------------------------------

def blahut_arimoto(w: np.ndarray, tol: float = 1e-9, max_iter: int = 100_000) -> CapacityResult:
    """max_X I(X;Y) for a column-stochastic transition matrix p(y|x).

    Stops when the standard duality gap (max over inputs of the per-letter
    divergence minus the current mutual information) drops below tol."""
    w = np.asarray(w, dtype=float)
    if w.min() < 0 or np.max(np.abs(w.sum(axis=0) - 1)) > 1e-10:
        raise ValueError("transition matrix must be column-stochastic")
    dy, dx = w.shape
    r = np.full(dx, 1.0 / dx)
    logw = np.where(w > 0, np.log2(np.where(w > 0, w, 1.0)), 0.0)
    lower = -np.inf
    for it in range(1, max_iter + 1):
        q = w @ r
        with np.errstate(divide="ignore"):
            logq = np.where(q > 0, np.log2(np.where(q > 0, q, 1.0)), 0.0)
        # d[x] = D(W(.|x) || q) in bits
        d = np.einsum("yx,yx->x", w, logw - logq[:, None])
        lower = float(np.log2(np.sum(r * np.exp2(d))))
        upper = float(d.max())
        if upper - lower < tol:
            r = r * np.exp2(d - d.max())
            r /= r.sum()
            return CapacityResult(lower, r, it, True, upper - lower)
        r = r * np.exp2(d - d.max())
        r /= r.sum()
    return CapacityResult(lower, r, max_iter, False, upper - lower)


# ---------------------------------------------------------------------------
# shared pieces for the quantum optimizers
# ---------------------------------------------------------------------------

def _log2_psd(m: np.ndarray, floor: float = 1e-18) -> np.ndarray:
    """Matrix log2 with eigenvalues clamped away from zero (smoothed)."""
    vals, vecs = np.linalg.eigh(m)
    vals = np.clip(vals.real, floor, None)
    return (vecs * np.log2(vals)) @ dagger(vecs)


def _adjoint(channel: KrausChannel, x: np.ndarray) -> np.ndarray:
    return sum(dagger(k) @ x @ k for k in channel.kraus_ops)


def _channel_mat(channel: KrausChannel, m: np.ndarray) -> np.ndarray:
    return sum(k @ m @ dagger(k) for k in channel.kraus_ops)


def _entropy_bits(m: np.ndarray) -> float:
    vals = np.clip(np.linalg.eigvalsh(m), 0.0, None)
    nz = vals[vals > 1e-14]
    return float(-np.sum(nz * np.log2(nz)))


def _rho_objective_factory(channel: KrausChannel, assisted: bool):
    """Objective f(rho) and its Hermitian gradient for the coherent-information
    (assisted=False) or I(R;B) (assisted=True) functional."""
    comp = complementary(channel)

    def f_and_grad(rho: np.ndarray) -> tuple[float, np.ndarray]:
        out_b = _channel_mat(channel, rho)
        out_e = _channel_mat(comp, rho)
        val = _entropy_bits(out_b) - _entropy_bits(out_e)
        grad = -_adjoint(channel, _log2_psd(out_b)) + _adjoint(comp, _log2_psd(out_e))
        if assisted:
            val += _entropy_bits(rho)
            grad += -_log2_psd(rho) - np.eye(rho.shape[0]) / LN2
        return val, grad

    return f_and_grad


def _maximize_over_states(channel: KrausChannel, f_and_grad, restarts: int,
                          seed: int, tol: float) -> tuple[float, np.ndarray, int]:
    """Maximize a state functional over rho = L L† / tr(L L†), multi-start."""
    d = channel.dim_in

    def unpack(x: np.ndarray) -> np.ndarray:
        return (x[: d * d] + 1j * x[d * d:]).reshape(d, d)

    def neg(x: np.ndarray):
        ell = unpack(x)
        t = np.trace(ell @ dagger(ell)).real
        rho = (ell @ dagger(ell)) / t
        val, g = f_and_grad(rho)
        m = g - np.trace(g @ rho).real * np.eye(d)
        gl = (2.0 / t) * (m @ ell)
        return -val, -np.concatenate([gl.real.reshape(-1), gl.imag.reshape(-1)])

    best_val, best_rho, evals = -np.inf, None, 0
    for r in range(restarts):
        rng = stream(seed, r)
        x0 = rng.standard_normal(2 * d * d)
        res = minimize(neg, x0, jac=True, method="L-BFGS-B",
                       options={"maxiter": 10_000, "ftol": 1e-13, "gtol": 1e-9})
        evals += res.nit
        if -res.fun > best_val:
            best_val = -res.fun
            ell = unpack(res.x)
            best_rho = (ell @ dagger(ell)) / np.trace(ell @ dagger(ell)).real
    # the maximally mixed input is exactly optimal for the covariant catalog
    # families; always include it as a candidate
    mm = np.eye(d) / d
    mm_val, _ = f_and_grad(mm)
    if mm_val > best_val:
        best_val, best_rho = mm_val, mm
    return best_val, best_rho, evals


def one_shot_quantum_capacity(channel: KrausChannel, restarts: int = 10,
                              tol: float = 1e-8, seed: int = 11) -> CapacityResult:
    """Q1 = max over inputs of the coherent information, clamped at 0 in
    `value` with the raw optimum kept in `raw_value`."""
    f = _rho_objective_factory(channel, assisted=False)
    val, rho, iters = _maximize_over_states(channel, f, restarts, seed, tol)
    return CapacityResult(max(val, 0.0), rho, iters, True, raw_value=val)


def entanglement_assisted_capacity(channel: KrausChannel, tol: float = 1e-8,
                                   restarts: int = 5, seed: int = 13) -> CapacityResult:
    """C_E = max over inputs of I(R;B) = H(rho) + H(N(rho)) - H(N_c(rho)).

    The objective is concave, so the multi-start ascent converges to the
    global optimum; the gap estimate is the spread across restart optima."""
    f = _rho_objective_factory(channel, assisted=True)
    vals = []
    best_val, best_rho = -np.inf, None
    iters = 0
    for r in range(restarts):
        v, rho, it = _maximize_over_states(channel, f, 1, seed + r, tol)
        vals.append(v)
        iters += it
        if v > best_val:
            best_val, best_rho = v, rho
    gap = float(max(vals) - min(vals)) if vals else 0.0
    return CapacityResult(best_val, best_rho, iters, gap < 1e-6, gap)


def holevo_chi_channel(channel: KrausChannel, ensemble_size: Optional[int] = None,
                       restarts: int = 10, tol: float = 1e-8,
                       seed: int = 17) -> CapacityResult:
    """Lower bound on the product-state capacity chi(N): best ensemble of
    pure inputs found by gradient ascent over states and probabilities."""
    d = channel.dim_in
    m = ensemble_size if ensemble_size is not None else d * d
    nv = 2 * m * d  # real parameters for m unnormalized complex vectors

    def unpack(x: np.ndarray):
        vecs = (x[: m * d] + 1j * x[m * d: nv]).reshape(m, d)
        logits = x[nv:]
        return vecs, logits

    def neg(x: np.ndarray):
        vecs, logits = unpack(x)
        a = logits - logits.max()
        p = np.exp(a)
        p /= p.sum()
        ts = np.einsum("id,id->i", vecs.conj(), vecs).real
        rhos = [np.outer(v, v.conj()) / t for v, t in zip(vecs, ts)]
        sigmas = [_channel_mat(channel, r) for r in rhos]
        sbar = sum(pi * s for pi, s in zip(p, sigmas))
        h_members = np.array([_entropy_bits(s) for s in sigmas])
        chi = _entropy_bits(sbar) - float(p @ h_members)

        log_sbar = _log2_psd(sbar)
        grad_x = np.zeros_like(x)
        for i in range(m):
            gi = p[i] * _adjoint(channel, _log2_psd(sigmas[i]) - log_sbar)
            mmat = gi - np.trace(gi @ rhos[i]).real * np.eye(d)
            gv = (2.0 / ts[i]) * (mmat @ vecs[i])
            grad_x[i * d: (i + 1) * d] = gv.real
            grad_x[m * d + i * d: m * d + (i + 1) * d] = gv.imag
        gp = np.array([-np.trace(s @ log_sbar).real - h for s, h in zip(sigmas, h_members)])
        grad_x[nv:] = p * (gp - float(p @ gp))
        return -chi, -grad_x

    best_val, best_x, iters = -np.inf, None, 0
    for r in range(restarts):
        rng = stream(seed, r)
        x0 = np.concatenate([rng.standard_normal(nv), rng.standard_normal(m) * 0.1])
        res = minimize(neg, x0, jac=True, method="L-BFGS-B",
                       options={"maxiter": 10_000, "ftol": 1e-13, "gtol": 1e-9})
        iters += res.nit
        if -res.fun > best_val:
            best_val, best_x = -res.fun, res.x

    vecs, logits = unpack(best_x)
    a = logits - logits.max()
    p = np.exp(a)
    p /= p.sum()
    ensemble = [(float(pi), np.outer(v, v.conj()) / (v.conj() @ v).real)
                for pi, v in zip(p, vecs)]
    return CapacityResult(best_val, ensemble, iters, True)


# ---------------------------------------------------------------------------
# closed forms for the catalog families
# ---------------------------------------------------------------------------

def binary_entropy(p: float) -> float:
    return shannon_entropy([p, 1 - p])


def depolarizing_c1(p: float) -> float:
    """Product-state capacity: orthogonal inputs are optimal by symmetry."""
    return 1.0 - binary_entropy(2 * p / 3)


def depolarizing_ce(p: float) -> float:
    """Entanglement-assisted capacity at the (optimal) maximally mixed input."""
    return 2.0 - shannon_entropy([1 - p, p / 3, p / 3, p / 3])


def depolarizing_q1_mm(p: float) -> float:
    """Coherent information of the maximally mixed input (exact by covariance)."""
    return 1.0 - shannon_entropy([1 - p, p / 3, p / 3, p / 3])


def depolarizing_q1_zero(bracket: tuple[float, float] = (0.05, 0.3)) -> float:
    """Smallest p where the maximally-mixed-input coherent information hits 0."""
    return float(brentq(depolarizing_q1_mm, *bracket, xtol=1e-12))


def erasure_q1(p: float, d: int = 2) -> float:
    return max((1 - 2 * p) * math.log2(d), 0.0)


_FAMILIES = {
    "depolarizing": lambda p: depolarizing(p),
    "erasure": lambda p: erasure(p, 2),
}


@dataclass
class SweepRow:
    family: str
    p: float
    quantity: str
    value: float
    err: float
    converged: bool


def capacity_sweep(family: str, grid: Sequence[float],
                   which: Sequence[str] = ("C1", "CE", "Q1"),
                   restarts: int = 6, seed: int = 19) -> list[SweepRow]:
    """Capacity quantities over a parameter grid for a catalog family."""
    if family not in _FAMILIES:
        raise ValueError(f"unknown family {family!r}; have {sorted(_FAMILIES)}")
    make = _FAMILIES[family]
    rows = []
    for p in grid:
        ch = make(p)
        values = {}
        if "C1" in which:
            res = holevo_chi_channel(ch, restarts=restarts, seed=seed)
            values["C1"] = (res.value, res.converged)
        if "CE" in which:
            res = entanglement_assisted_capacity(ch, restarts=max(restarts // 2, 2), seed=seed)
            values["CE"] = (res.value, res.converged)
        if "Q1" in which:
            res = one_shot_quantum_capacity(ch, restarts=restarts, seed=seed)
            values["Q1"] = (res.value, res.converged)
        for q in which:
            v, conv = values[q]
            rows.append(SweepRow(family, float(p), q, float(v), 0.0, conv))
    return rows


def sweep_to_csv_rows(rows: list[SweepRow]) -> list[str]:
    out = ["family,p,quantity,value,err,converged"]
    for r in rows:
        out.append(f"{r.family},{r.p:.12g},{r.quantity},{r.value:.12g},"
                   f"{r.err:.12g},{str(r.converged).lower()}")
    return out
