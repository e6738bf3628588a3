"""
Sparse recovery of the delay-Doppler map and conversion of recovered
support cells to physical target parameters.

`matrix_omp` is the workhorse: greedy matched-filter atom selection over
the (delay bin, slow-time column) grid, joint least-squares amplitude
refit, residual update. The Nyquist regime additionally splits into
independent per-range-bin subproblems (`nyquist_reduce`) solvable by
`omp_vector` or `l1_vector` (FISTA with continuation and debiasing).
All solvers are deterministic: score ties break toward the lowest
(row, column) cell and an atom is never selected twice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .measurement import FrequencySubset, SparseMap, build_A, build_B, kron_columns, vec
from .signal_model import PhaseCode, RadarParams


class RecoveryError(RuntimeError):
    pass


@dataclass(frozen=True)
class L1Params:
    """FISTA settings for the l1 subproblem solver."""

    max_iterations: int = 3000
    tolerance: float = 1e-8
    continuation_steps: int = 6
    final_penalty_ratio: float = 1e-6
    support_threshold: float = 0.1
    debias: bool = True


@dataclass(frozen=True)
class RecoveryConfig:
    """Stopping rule and grid refinement for the sparse solvers.

    Exactly one of target_count (known sparsity) or residual_threshold
    (Frobenius norm stopping) must be set.
    """

    target_count: int | None = None
    residual_threshold: float | None = None
    overdiscretization: int = 1
    l1: L1Params = field(default_factory=L1Params)

    def __post_init__(self):
        if (self.target_count is None) == (self.residual_threshold is None):
            raise ValueError(
                "set exactly one of target_count / residual_threshold"
            )
        if self.target_count is not None and self.target_count < 0:
            raise ValueError("target_count must be nonnegative")
        if self.overdiscretization < 1 or int(self.overdiscretization) != self.overdiscretization:
            raise ValueError("overdiscretization must be a positive integer")


@dataclass(frozen=True)
class TargetEstimate:
    """Recovered target: ambiguity order, folded delay, Doppler, amplitude."""

    ambiguity_order: int
    folded_delay: float
    doppler: float
    amplitude: complex

    def full_delay(self, pri: float) -> float:
        return self.folded_delay + self.ambiguity_order * pri


def build_overdiscretized(
    params: RadarParams,
    code: PhaseCode,
    subset: FrequencySubset,
    ambiguity: int,
    gamma: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Dictionary pair (A_g, B_g) on grids refined by the integer gamma.

    gamma = 1 reproduces the plain model matrices bit for bit.
    """
    a = build_A(subset, params.nyquist_bins, gamma=gamma)
    b = build_B(code, params.pulse_count, ambiguity, gamma=gamma)
    return a, b


def _column_norms(m: np.ndarray) -> np.ndarray:
    return np.linalg.norm(m, axis=0)


def matrix_omp(
    y: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    config: RecoveryConfig,
) -> SparseMap:
    """Greedy sparse solve of Y = A X B^T.

    Per iteration: score every cell (n, c) by the normalized matched
    filter |a_n^H R conj(b_c)| / (||a_n|| ||b_c||), add the argmax to the
    support (ties to the lowest (n, c)), refit all supported amplitudes
    jointly by least squares against vec(Y), and rebuild the residual.
    Stops after target_count atoms or when the residual Frobenius norm
    drops to residual_threshold. Zero-norm dictionary columns are never
    candidates; later slow-time blocks have fewer live rows, which the
    normalization compensates.
    """
    y = np.asarray(y, dtype=complex)
    if a.shape[0] != y.shape[0] or b.shape[0] != y.shape[1]:
        raise ValueError(
            f"dimension mismatch: Y {y.shape}, A {a.shape}, B {b.shape}"
        )
    n_cells = a.shape[1] * b.shape[1]
    norm_a = _column_norms(a)
    norm_b = _column_norms(b)
    live = norm_b > 0.0
    admissible = int(np.count_nonzero(live)) * a.shape[1]
    if config.target_count is not None:
        if config.target_count > admissible:
            raise RecoveryError(
                f"requested {config.target_count} atoms but only "
                f"{admissible} admissible cells exist"
            )
        max_iters = config.target_count
    else:
        max_iters = min(admissible, y.size)

    scale = np.outer(norm_a, np.where(live, norm_b, np.inf))
    y_vec = vec(y)
    residual = y.copy()
    rows: list[int] = []
    cols: list[int] = []
    amps = np.zeros(0, dtype=complex)
    basis = np.zeros((y.size, 0), dtype=complex)

    for it in range(max_iters):
        if config.residual_threshold is not None:
            if np.linalg.norm(residual) <= config.residual_threshold:
                break
        scores = np.abs(a.conj().T @ residual @ b.conj()) / scale
        for r, c in zip(rows, cols):
            scores[r, c] = -np.inf
        flat = int(np.argmax(scores))
        n, c = divmod(flat, b.shape[1])
        rows.append(n)
        cols.append(c)
        new_col = np.kron(b[:, c], a[:, n])
        basis = np.hstack([basis, new_col[:, None]])
        amps, _, rank, _ = np.linalg.lstsq(basis, y_vec, rcond=None)
        if rank < basis.shape[1]:
            raise RecoveryError(
                f"singular least-squares system at iteration {it + 1}, "
                f"support {list(zip(rows, cols))}"
            )
        residual = y - (basis @ amps).reshape(y.shape, order="F")

    return SparseMap(
        shape=(a.shape[1], b.shape[1]),
        rows=np.asarray(rows, dtype=int),
        cols=np.asarray(cols, dtype=int),
        amplitudes=amps,
    )


def extract_targets(
    sparse_map: SparseMap,
    params: RadarParams,
    gamma: int = 1,
) -> list[TargetEstimate]:
    """Physical parameters of every support cell.

    On the refined grid, column index c decodes as order q = c // (gamma P)
    and Doppler bin c mod gamma P; delays step T_r / (gamma N) and Dopplers
    1 / (gamma P T_r). With gamma = 1 this inverts the on-grid scene
    mapping exactly.
    """
    P = params.pulse_count
    N = params.nyquist_bins
    if sparse_map.shape[0] != gamma * N or sparse_map.shape[1] % (gamma * P) != 0:
        raise ValueError("sparse map shape inconsistent with params and gamma")
    out = []
    for n, c, amp in zip(sparse_map.rows, sparse_map.cols, sparse_map.amplitudes):
        q = int(c) // (gamma * P)
        p = int(c) - q * gamma * P
        out.append(
            TargetEstimate(
                ambiguity_order=q,
                folded_delay=float(n) * params.pri / (gamma * N),
                doppler=float(p) / (gamma * P * params.pri),
                amplitude=complex(amp),
            )
        )
    return out


def nyquist_reduce(y: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Split a Nyquist observation into per-range-bin right-hand sides.

    Returns G of shape (P, N) whose column n is g_n = [Y^T conj(A)]_n / N,
    scaled so the noiseless on-grid identity reads exactly B x_n = g_n
    with x_n the n-th row of X transposed.
    """
    y = np.asarray(y, dtype=complex)
    n_bins = a.shape[1]
    if a.shape[0] != n_bins or y.shape[0] != n_bins:
        raise ValueError("nyquist_reduce requires a square (K = N) Fourier matrix")
    return (y.T @ a.conj()) / n_bins


def omp_vector(g: np.ndarray, b: np.ndarray, config: RecoveryConfig) -> SparseMap:
    """Vector OMP for one subproblem B x = g.

    Same matched-filter / joint-LS / residual loop and tie policy as
    matrix_omp restricted to a single row; returned map has shape (1, PQ).
    """
    g = np.asarray(g, dtype=complex).reshape(-1)
    if b.shape[0] != g.size:
        raise ValueError("dimension mismatch between g and B")
    norm_b = _column_norms(b)
    live = norm_b > 0.0
    admissible = int(np.count_nonzero(live))
    if config.target_count is not None:
        if config.target_count > admissible:
            raise RecoveryError("requested more atoms than admissible columns")
        max_iters = config.target_count
    else:
        max_iters = min(admissible, g.size)
    scale = np.where(live, norm_b, np.inf)

    residual = g.copy()
    cols: list[int] = []
    amps = np.zeros(0, dtype=complex)
    for it in range(max_iters):
        if config.residual_threshold is not None:
            if np.linalg.norm(residual) <= config.residual_threshold:
                break
        scores = np.abs(b.conj().T @ residual) / scale
        scores[cols] = -np.inf
        c = int(np.argmax(scores))
        cols.append(c)
        amps, _, rank, _ = np.linalg.lstsq(b[:, cols], g, rcond=None)
        if rank < len(cols):
            raise RecoveryError(
                f"singular least-squares system at iteration {it + 1}, support {cols}"
            )
        residual = g - b[:, cols] @ amps
    return SparseMap(
        shape=(1, b.shape[1]),
        rows=np.zeros(len(cols), dtype=int),
        cols=np.asarray(cols, dtype=int),
        amplitudes=amps,
    )


@dataclass(frozen=True)
class L1Result:
    solution: np.ndarray
    support: np.ndarray
    iterations: int
    converged: bool


def _soft_threshold(x: np.ndarray, t: float) -> np.ndarray:
    mag = np.abs(x)
    shrink = np.maximum(mag - t, 0.0)
    return np.where(mag > 0, x * (shrink / np.maximum(mag, 1e-300)), 0.0)


def l1_vector(g: np.ndarray, b: np.ndarray, config: RecoveryConfig) -> L1Result:
    """Approximate basis pursuit for B x = g via penalized FISTA.

    Minimizes 0.5 ||B x - g||^2 + lam ||x||_1 with geometric continuation
    of lam toward final_penalty_ratio * ||B^H g||_inf, warm-starting each
    stage. The result is thresholded at support_threshold * max|x| and,
    when configured, debiased by least squares on the detected support.
    Non-convergence within the iteration cap returns the best iterate with
    converged = False.
    """
    g = np.asarray(g, dtype=complex).reshape(-1)
    if b.shape[0] != g.size:
        raise ValueError("dimension mismatch between g and B")
    p = config.l1
    if np.linalg.norm(g) == 0.0:
        return L1Result(
            solution=np.zeros(b.shape[1], dtype=complex),
            support=np.zeros(0, dtype=int),
            iterations=0,
            converged=True,
        )
    lip = np.linalg.norm(b, 2) ** 2
    step = 1.0 / lip
    corr = np.abs(b.conj().T @ g)
    lam_hi = 0.5 * corr.max()
    lam_lo = max(p.final_penalty_ratio * corr.max(), 1e-300)
    lams = np.geomspace(lam_hi, lam_lo, p.continuation_steps)

    x = np.zeros(b.shape[1], dtype=complex)
    total_iters = 0
    converged = True
    budget = p.max_iterations
    per_stage = max(budget // p.continuation_steps, 1)
    for lam in lams:
        z = x.copy()
        t_mom = 1.0
        stage_ok = False
        for _ in range(per_stage):
            total_iters += 1
            grad = b.conj().T @ (b @ z - g)
            x_new = _soft_threshold(z - step * grad, step * lam)
            t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t_mom**2))
            z = x_new + ((t_mom - 1.0) / t_new) * (x_new - x)
            delta = np.linalg.norm(x_new - x)
            x = x_new
            t_mom = t_new
            if delta <= p.tolerance * max(np.linalg.norm(x), 1e-300):
                stage_ok = True
                break
        if not stage_ok:
            converged = False

    mag = np.abs(x)
    support = np.flatnonzero(mag > p.support_threshold * mag.max()) if mag.max() > 0 else np.zeros(0, dtype=int)
    if p.debias and support.size:
        coef, _, _, _ = np.linalg.lstsq(b[:, support], g, rcond=None)
        x = np.zeros(b.shape[1], dtype=complex)
        x[support] = coef
    return L1Result(solution=x, support=support, iterations=total_iters, converged=converged)


def map_from_vector(x: np.ndarray, row: int, n_rows: int, count: int | None = None) -> SparseMap:
    """Sparse map from one recovered bin vector, keeping the top entries."""
    x = np.asarray(x).reshape(-1)
    nz = np.flatnonzero(np.abs(x) > 0)
    if count is not None and nz.size > count:
        order = np.argsort(np.abs(x[nz]))[::-1]
        nz = np.sort(nz[order[:count]])
    return SparseMap(
        shape=(n_rows, x.size),
        rows=np.full(nz.size, row, dtype=int),
        cols=nz,
        amplitudes=x[nz],
    )
