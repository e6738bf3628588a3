"""
Structured measurement operators for the coefficient-domain observation
model Y = A X B^T.

A is a partial Fourier matrix (rows = selected frequency bins), B stacks
one phase-coded slow-time block per ambiguity order, and X is the sparse
delay-Doppler map whose nonzeros are the targets. The Kronecker
vectorization helpers exist for oracles and small-instance analysis, not
for the production recovery path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal_model import PhaseCode, RadarParams, TargetScene, Waveform, waveform_spectrum

VEC_ENTRY_CAP = 4_000_000


@dataclass(frozen=True)
class FrequencySubset:
    """Sorted distinct frequency bin indices kappa within [0, N-1]."""

    indices: np.ndarray
    total_bins: int

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=int)
        object.__setattr__(self, "indices", idx)
        if idx.ndim != 1 or idx.size == 0:
            raise ValueError("subset must be a nonempty 1-D index list")
        if np.any(np.diff(idx) <= 0):
            raise ValueError("subset indices must be strictly increasing")
        if idx[0] < 0 or idx[-1] >= self.total_bins:
            raise ValueError("subset indices must lie in [0, N-1]")

    @property
    def size(self) -> int:
        return int(self.indices.size)

    @property
    def is_nyquist(self) -> bool:
        return self.size == self.total_bins


def admissible_bins(n_bins: int, waveform: Waveform, pri: float, floor_ratio: float = 0.1) -> np.ndarray:
    """Frequency bins whose pulse-spectrum magnitude clears the floor.

    Bins where |H(2 pi m / T_r)| < floor_ratio * max|H| would amplify noise
    without bound under normalization and are excluded from selection.
    """
    omega = 2.0 * np.pi * np.arange(n_bins) / pri
    mag = np.abs(waveform_spectrum(waveform, omega))
    return np.flatnonzero(mag >= floor_ratio * mag.max())


def select_subset(
    n_bins: int,
    k: int,
    strategy: str = "random",
    seed=0,
    explicit=None,
    waveform: Waveform | None = None,
    pri: float | None = None,
) -> FrequencySubset:
    """Choose the kappa frequency subset.

    strategy 'nyquist' returns {0..N-1}; 'random' draws k bins uniformly
    without replacement (restricted to spectrum-floor-admissible bins when
    a waveform and PRI are supplied); 'explicit' validates a caller list.
    Random selection yields a full-spark partial Fourier matrix with high
    probability; `analysis.spark_bruteforce` can certify small instances.
    """
    if not (1 <= k <= n_bins):
        raise ValueError("need 1 <= K <= N")
    if strategy == "nyquist":
        if k != n_bins:
            raise ValueError("nyquist subset requires K == N")
        return FrequencySubset(np.arange(n_bins), n_bins)
    if strategy == "random":
        pool = np.arange(n_bins)
        if waveform is not None:
            if pri is None:
                raise ValueError("pri is required for the spectral-floor filter")
            pool = admissible_bins(n_bins, waveform, pri)
            if pool.size < k:
                raise ValueError("fewer admissible bins than requested K")
        rng = np.random.default_rng(seed)
        picked = np.sort(rng.choice(pool, size=k, replace=False))
        return FrequencySubset(picked, n_bins)
    if strategy == "explicit":
        if explicit is None:
            raise ValueError("explicit strategy needs an index list")
        idx = np.sort(np.asarray(list(explicit), dtype=int))
        if np.unique(idx).size != idx.size:
            raise ValueError("explicit subset contains duplicates")
        if idx.size != k:
            raise ValueError("explicit subset length differs from K")
        if waveform is not None and pri is not None:
            ok = set(admissible_bins(n_bins, waveform, pri).tolist())
            bad = [int(i) for i in idx if int(i) not in ok]
            if bad:
                raise ValueError(f"explicit bins below spectral floor: {bad}")
        return FrequencySubset(idx, n_bins)
    raise ValueError(f"unknown subset strategy {strategy!r}")


def build_A(subset: FrequencySubset, n_bins: int | None = None, gamma: int = 1) -> np.ndarray:
    """Partial Fourier matrix A[k, n] = exp(-j 2 pi n m_k / (gamma N)).

    Shape (K, gamma * N). gamma > 1 refines the delay grid to
    T_r / (gamma N) for off-grid dictionaries; gamma = 1 is the plain
    model matrix.
    """
    if n_bins is None:
        n_bins = subset.total_bins
    if gamma < 1:
        raise ValueError("gamma must be >= 1")
    n = np.arange(gamma * n_bins)
    return np.exp(-2j * np.pi * np.outer(subset.indices, n) / (gamma * n_bins))


def build_B(code: PhaseCode, pulse_count: int, ambiguity: int, gamma: int = 1) -> np.ndarray:
    """Phase-coded slow-time matrix, one P x (gamma P) block per order q.

    Block q has entries exp(-j 2 pi b p / (gamma P)) * z[b - q]; the code
    convention z[p] = 0 outside the train zeroes the first q rows, so the
    last block keeps P - Q + 1 live rows. Shape (P, gamma * P * Q).
    """
    if code.pulse_count != pulse_count:
        raise ValueError("phase code length must equal pulse_count")
    if not (1 <= ambiguity <= pulse_count):
        raise ValueError("need 1 <= Q <= P")
    if gamma < 1:
        raise ValueError("gamma must be >= 1")
    b = np.arange(pulse_count)
    p = np.arange(gamma * pulse_count)
    base = np.exp(-2j * np.pi * np.outer(b, p) / (gamma * pulse_count))
    blocks = [base * code.shifted(q)[:, None] for q in range(ambiguity)]
    return np.hstack(blocks)


@dataclass(frozen=True)
class SparseMap:
    """Sparse delay-Doppler map: amplitudes at (row n, column q*P + p).

    rows/cols/amplitudes are parallel arrays; shape is (N, P*Q) for the
    plain grid or (gamma N, gamma P Q) for refined dictionaries.
    """

    shape: tuple[int, int]
    rows: np.ndarray
    cols: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=int)
        cols = np.asarray(self.cols, dtype=int)
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "amplitudes", amps)
        if not (rows.size == cols.size == amps.size):
            raise ValueError("rows, cols, amplitudes must have equal length")
        if rows.size:
            if rows.min() < 0 or rows.max() >= self.shape[0]:
                raise ValueError("row index out of range")
            if cols.min() < 0 or cols.max() >= self.shape[1]:
                raise ValueError("column index out of range")
        if len({(int(r), int(c)) for r, c in zip(rows, cols)}) != rows.size:
            raise ValueError("duplicate support cell")

    @property
    def count(self) -> int:
        return int(self.rows.size)

    def to_dense(self) -> np.ndarray:
        x = np.zeros(self.shape, dtype=complex)
        x[self.rows, self.cols] = self.amplitudes
        return x

    @classmethod
    def from_dense(cls, x: np.ndarray) -> "SparseMap":
        rows, cols = np.nonzero(x)
        return cls(shape=x.shape, rows=rows, cols=cols, amplitudes=x[rows, cols])


def scene_to_map(scene: TargetScene, ambiguity: int | None = None, gamma: int = 1) -> SparseMap:
    """Sparse map of an on-grid scene under a surveillance window Q.

    Q defaults to the scene's own ambiguity factor but may be larger (the
    dictionary covers more orders than the scene realizes).
    """
    if not scene.on_grid:
        raise ValueError("scene must be on-grid to have an exact sparse map")
    params = scene.params
    q_max = ambiguity if ambiguity is not None else scene.ambiguity_factor
    if scene.targets and q_max < scene.ambiguity_factor:
        raise ValueError("surveillance Q smaller than the scene's ambiguity factor")
    P = params.pulse_count
    N = params.nyquist_bins
    rows, cols, amps = [], [], []
    for tgt, gi in zip(scene.targets, scene.grid):
        rows.append(gamma * gi.delay_bin)
        cols.append(gamma * P * gi.order + gamma * gi.doppler_bin)
        amps.append(tgt.effective_amplitude(params.pri))
    return SparseMap(
        shape=(gamma * N, gamma * P * q_max),
        rows=np.asarray(rows, dtype=int),
        cols=np.asarray(cols, dtype=int),
        amplitudes=np.asarray(amps, dtype=complex),
    )


def forward_model(a: np.ndarray, x: SparseMap | np.ndarray, b: np.ndarray) -> np.ndarray:
    """Noiseless observation Y = A X B^T."""
    dense = x.to_dense() if isinstance(x, SparseMap) else np.asarray(x)
    if a.shape[1] != dense.shape[0] or b.shape[1] != dense.shape[1]:
        raise ValueError(
            f"dimension mismatch: A {a.shape}, X {dense.shape}, B {b.shape}"
        )
    return a @ dense @ b.T


def vectorize_model(a: np.ndarray, b: np.ndarray, cap: int = VEC_ENTRY_CAP) -> np.ndarray:
    """Dense T = B kron A with vec(A X B^T) = T vec(X) (column stacking).

    Guarded by an entry cap: this operator exists for oracles and tests,
    never for the production path.
    """
    entries = a.shape[0] * b.shape[0] * a.shape[1] * b.shape[1]
    if entries > cap:
        raise ValueError(
            f"kron operator would hold {entries} entries (cap {cap})"
        )
    return np.kron(b, a)


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(x).flatten(order="F")


def unvec(v: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    return np.asarray(v).reshape(shape, order="F")


def kron_columns(a: np.ndarray, b: np.ndarray, rows, cols) -> np.ndarray:
    """Columns b_c kron a_n of the vectorized operator for given cells."""
    rows = np.asarray(rows, dtype=int)
    cols = np.asarray(cols, dtype=int)
    out = np.empty((a.shape[0] * b.shape[0], rows.size), dtype=complex)
    for j, (n, c) in enumerate(zip(rows, cols)):
        out[:, j] = np.kron(b[:, c], a[:, n])
    return out


def export_matrix(m: np.ndarray, path) -> None:
    """Write a complex matrix as text: one row per line, re+imj tokens."""
    arr = np.atleast_2d(np.asarray(m, dtype=complex))
    with open(path, "w") as fh:
        for row in arr:
            fh.write(" ".join(f"{v.real:.17g}{v.imag:+.17g}j" for v in row))
            fh.write("\n")


def import_matrix(path) -> np.ndarray:
    """Read a matrix written by export_matrix."""
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([complex(tok) for tok in line.split()])
    return np.asarray(rows, dtype=complex)
