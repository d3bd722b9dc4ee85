"""Detectors over the real-valued system: linear, brute-force ML, LAS, RTS.

All detectors minimize phi(d) = d^T R d - 2 y_mf^T d over the lattice A^{2k}.
The reactive tabu search keeps a per-(coordinate, symbol, neighbor) tabu
matrix whose tenure P adapts to detected solution repetitions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .signal_set import SignalSet, quantize_array, symbol_indices
from .stbc import RealSystem

ML_ENUM_LIMIT = 2 ** 20


class SearchSpaceError(ValueError):
    """Brute-force enumeration requested on a space beyond the guard size."""


def ml_cost(sys: RealSystem, x: np.ndarray) -> float:
    """phi(x) = x^T R x - 2 y_mf^T x."""
    return float(x @ (sys.R @ x) - 2.0 * (sys.y_mf @ x))


# ---------------------------------------------------------------------------
# Linear detectors
# ---------------------------------------------------------------------------

def mmse_detect(sys: RealSystem, sset: SignalSet) -> np.ndarray:
    """Quantized MMSE estimate: solve (R + (sigma2/Es) I) w = y_mf.

    Es is the mean complex-symbol energy, i.e. twice the mean PAM energy;
    per real component the noise/signal variance ratio is sigma2/Es.
    """
    es = 2.0 * sset.mean_energy
    dim = sys.R.shape[0]
    A = sys.R + (sys.sigma2 / es) * np.eye(dim)
    w = np.linalg.solve(A, sys.y_mf)
    return quantize_array(sset, w)


def mf_detect(sys: RealSystem, sset: SignalSet) -> np.ndarray:
    """Quantized matched-filter output: y_mf scaled by 1/diag(R)."""
    d = np.diag(sys.R)
    if np.any(d == 0):
        raise np.linalg.LinAlgError("zero diagonal in R; MF undefined")
    return quantize_array(sset, sys.y_mf / d)


# ---------------------------------------------------------------------------
# Brute-force ML
# ---------------------------------------------------------------------------

def ml_brute_force(sys: RealSystem, sset: SignalSet,
                   chunk: int = 4096) -> tuple[np.ndarray, float]:
    """Exhaustive minimizer of phi over A^{2k}; ties broken lexicographically."""
    dim = sys.R.shape[0]
    if sset.M ** dim > ML_ENUM_LIMIT:
        raise SearchSpaceError(
            f"{sset.M}^{dim} candidates exceed the enumeration guard")
    best_cost = np.inf
    best = None
    it = itertools.product(sset.symbols, repeat=dim)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            break
        D = np.asarray(block)
        costs = np.einsum("ij,ij->i", D @ sys.R, D) - 2.0 * (D @ sys.y_mf)
        i = int(np.argmin(costs))
        if costs[i] < best_cost:
            best_cost = float(costs[i])
            best = D[i].copy()
    return best, best_cost


# ---------------------------------------------------------------------------
# Reactive tabu search
# ---------------------------------------------------------------------------

@dataclass
class RtsConfig:
    """Search parameters; defaults follow the STBC operating point."""

    p0: int = 2                # initial tabu period
    beta: float = 1.0          # tabu-period relaxation factor (0.1 for V-BLAST)
    alpha1: float = 0.05       # absolute stopping threshold
    alpha2: float = 0.0005     # per-iteration relaxed stopping threshold
    min_iter: int = 20
    max_iter: int = 300
    max_rep: int = 75

    def __post_init__(self) -> None:
        if self.p0 < 0:
            raise ValueError(f"p0 must be non-negative, got {self.p0}")
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not 1 <= self.min_iter <= self.max_iter:
            raise ValueError(
                f"need 1 <= min_iter <= max_iter, got {self.min_iter}, {self.max_iter}")


def fixed_iteration_config(iterations: int = 300) -> RtsConfig:
    """Config that always runs exactly `iterations` iterations."""
    return RtsConfig(alpha1=0.0, alpha2=0.0, min_iter=iterations,
                     max_iter=iterations, max_rep=10 ** 9)


@dataclass
class RtsState:
    """Mutable search state for one decode call."""

    x: np.ndarray              # current vector in A^{2k}
    qidx: np.ndarray           # symbol index of each coordinate of x
    g: np.ndarray              # best-so-far vector
    best_cost: float
    cur_cost: float
    f: np.ndarray              # R x - y_mf, maintained incrementally
    tabu: np.ndarray           # (2k M, N) non-negative integers
    P: int                     # current tabu period
    rdiag: np.ndarray          # diag(R), cached
    neg_y_sq: float            # -y^T y, the unconstrained cost floor
    l_rep: float = 0.0         # running mean repetition length
    cost_history: dict = field(default_factory=dict)
    iters_since_p_change: int = 0
    repetition_count: int = 0
    m: int = 0                 # completed iterations


def init_rts_state(sys: RealSystem, sset: SignalSet, x0: np.ndarray,
                   config: RtsConfig) -> RtsState:
    x0 = np.asarray(x0, dtype=float)
    dim = sys.R.shape[0]
    if x0.shape != (dim,):
        raise ValueError(f"x0 must have shape ({dim},), got {x0.shape}")
    qidx = symbol_indices(sset, x0)
    x = x0.copy()
    f = sys.R @ x - sys.y_mf
    cost = ml_cost(sys, x)
    state = RtsState(
        x=x, qidx=qidx, g=x.copy(), best_cost=cost, cur_cost=cost, f=f,
        tabu=np.zeros((dim * sset.M, sset.N), dtype=np.int64),
        P=config.p0, rdiag=np.diag(sys.R).copy(),
        neg_y_sq=-float(sys.y @ sys.y))
    state.cost_history[cost] = 0
    return state


def _all_move_deltas(state: RtsState, sset: SignalSet) -> tuple[np.ndarray, np.ndarray]:
    """Steps e and cost changes C for all 2kN single-coordinate moves."""
    nb = sset.neighbors[state.qidx]               # (2k, N)
    e = nb - state.x[:, None]
    C = 2.0 * e * state.f[:, None] + e * e * state.rdiag[:, None]
    return e, C


def rts_cost_delta(state: RtsState, sys: RealSystem, sset: SignalSet,
                   u: int, v: int) -> float:
    """Exact cost change of replacing x[u] by its v-th symbol neighbor:
    C = 2 e f[u] + e^2 R[u, u] with e the symbol step."""
    e = sset.neighbors[state.qidx[u], v] - state.x[u]
    return float(2.0 * e * state.f[u] + e * e * state.rdiag[u])


def rts_select_move(state: RtsState, sys: RealSystem,
                    sset: SignalSet) -> tuple[int, int]:
    """Pick the accepted move: best cost change, subject to tabu/aspiration.

    Candidates are scanned in ascending cost order (ties: smallest coordinate,
    then smallest neighbor index). A move is accepted if it beats the
    best-so-far cost (aspiration) or is not tabu. If every move is tabu, the
    tabu matrix is relaxed by the minimum positive guard value until one is.
    """
    N = sset.N
    _, C = _all_move_deltas(state, sset)
    flat = C.ravel()
    order = np.argsort(flat, kind="stable")
    rows = np.arange(len(state.x)) * sset.M + state.qidx
    for idx in order:
        u, v = divmod(int(idx), N)
        if state.cur_cost + flat[idx] < state.best_cost:
            return u, v
        if state.tabu[rows[u], v] == 0:
            return u, v
    # Every move is tabu and none aspirates: relax by the minimum positive
    # value among the guards of the 2kN candidate moves.
    while True:
        guards = state.tabu[rows]
        positive = guards[guards > 0]
        dec = int(positive.min())
        np.subtract(state.tabu, dec, out=state.tabu)
        np.maximum(state.tabu, 0, out=state.tabu)
        guards = state.tabu[rows]
        for idx in order:
            u, v = divmod(int(idx), N)
            if guards[u, v] == 0:
                return u, v


def rts_apply_move(state: RtsState, sys: RealSystem, sset: SignalSet,
                   u: int, v: int) -> None:
    """Apply move (u, v): update x, f, cost, tabu marks, and best-so-far.

    The move just made and its reversal are marked tabu for P iterations,
    except that an improving move leaves both entries at zero.
    """
    M = sset.M
    q_old = state.qidx[u]
    q_new = sset.neighbor_idx[q_old, v]
    new_sym = sset.neighbors[q_old, v]
    e = new_sym - state.x[u]
    state.x[u] = new_sym
    state.qidx[u] = q_new
    state.f += e * sys.R[u]
    # Full recomputation keeps the cost fingerprint bit-stable per vector,
    # so revisits are detected exactly.
    state.cur_cost = ml_cost(sys, state.x)
    improving = state.cur_cost < state.best_cost
    mark = 0 if improving else state.P + 1
    state.tabu[u * M + q_old, v] = mark
    v_rev = sset.reverse_idx[q_old, v]
    if v_rev >= 0:
        state.tabu[u * M + q_new, v_rev] = mark
    if improving:
        state.best_cost = state.cur_cost
        np.copyto(state.g, state.x)


def rts_reactive_update(state: RtsState, config: RtsConfig) -> None:
    """Adapt the tabu period from solution repetitions.

    A repetition (same cost fingerprint seen before) lengthens P; a long
    stretch without any P change (more than beta * l_rep iterations)
    shortens it, floored at 1.
    """
    state.iters_since_p_change += 1
    key = state.cur_cost
    last = state.cost_history.get(key)
    if last is not None:
        state.repetition_count += 1
        rep_len = state.m - last
        state.l_rep += (rep_len - state.l_rep) / state.repetition_count
        state.P += 1
        state.iters_since_p_change = 0
    elif state.iters_since_p_change > config.beta * state.l_rep:
        state.P = max(state.P - 1, 1)
        state.iters_since_p_change = 0
    state.cost_history[key] = state.m


def rts_decrement_tabu(state: RtsState) -> None:
    """Age every tabu entry by one, clamped at zero."""
    np.subtract(state.tabu, 1, out=state.tabu)
    np.maximum(state.tabu, 0, out=state.tabu)


def rts_should_stop(state: RtsState, sys: RealSystem, config: RtsConfig) -> bool:
    """Stopping rule: near the -y^T y floor, too many repetitions, or cap."""
    if state.repetition_count > config.max_rep:
        return True
    if state.m >= config.max_iter:
        return True
    if state.neg_y_sq == 0.0:
        return False
    if state.m >= config.min_iter:
        ratio = abs(state.best_cost - state.neg_y_sq) / abs(state.neg_y_sq)
        if ratio < config.alpha1:
            return True
        if ratio < state.m * config.alpha2:
            return True
    return False


def rts_decode(sys: RealSystem, sset: SignalSet,
               config: RtsConfig | None = None,
               x0: np.ndarray | None = None,
               trace: list | None = None) -> tuple[np.ndarray, int, float]:
    """Run the reactive tabu search from x0 (default: quantized MMSE).

    Returns (best vector, iterations run, best cost). When given, `trace`
    collects (iteration, current cost, best cost) tuples.
    """
    cfg = config if config is not None else RtsConfig()
    if x0 is None:
        x0 = mmse_detect(sys, sset)
    state = init_rts_state(sys, sset, x0, cfg)
    if trace is not None:
        trace.append((0, state.cur_cost, state.best_cost))
    while not rts_should_stop(state, sys, cfg):
        state.m += 1
        u, v = rts_select_move(state, sys, sset)
        rts_apply_move(state, sys, sset, u, v)
        rts_reactive_update(state, cfg)
        rts_decrement_tabu(state)
        if trace is not None:
            trace.append((state.m, state.cur_cost, state.best_cost))
    return state.g.copy(), state.m, state.best_cost


# ---------------------------------------------------------------------------
# Likelihood ascent search (greedy descent baseline)
# ---------------------------------------------------------------------------

def las_decode(sys: RealSystem, sset: SignalSet,
               x0: np.ndarray | None = None,
               trace: list | None = None) -> tuple[np.ndarray, int]:
    """Greedy descent: apply the most cost-reducing single-coordinate move
    until none remains. Strictly decreasing cost, hence terminating."""
    if x0 is None:
        x0 = mmse_detect(sys, sset)
    x = np.asarray(x0, dtype=float).copy()
    qidx = symbol_indices(sset, x)
    f = sys.R @ x - sys.y_mf
    rdiag = np.diag(sys.R)
    N = sset.N
    iters = 0
    while True:
        nb = sset.neighbors[qidx]
        e = nb - x[:, None]
        C = 2.0 * e * f[:, None] + e * e * rdiag[:, None]
        idx = int(np.argmin(C))
        u, v = divmod(idx, N)
        if C[u, v] >= 0:
            break
        x[u] = nb[u, v]
        qidx[u] = sset.neighbor_idx[qidx[u], v]
        f += e[u, v] * sys.R[u]
        iters += 1
        if trace is not None:
            trace.append((iters, ml_cost(sys, x)))
    return x, iters
