"""
Radar parameterization and received-signal synthesis for random pulse
phase coded (RPPC) pulse trains.

Two synthesis routes are provided for the per-PRI normalized Fourier
coefficients that all recovery code consumes:

* the physical route: time-domain echo synthesis (`synthesize_received`),
  Fourier-series extraction (`fourier_coefficients`) and deconvolution by
  the pulse spectrum (`normalize_coefficients`);
* the idealized route: direct evaluation of the coefficient model, either
  for arbitrary scenes (`synthesize_coefficients`) or for scenes aligned
  to the delay/Doppler grid (`synthesize_ongrid`).

Everything here is a pure function of its inputs plus an explicit seed;
values are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

WAVE_SPEED = 3.0e8


class SpectralFloorError(ValueError):
    """Raised when requested frequency bins fall below the usable spectrum floor."""

    def __init__(self, indices):
        self.indices = list(indices)
        super().__init__(
            f"pulse spectrum below floor at frequency indices {self.indices}"
        )


@dataclass(frozen=True)
class RadarParams:
    """Pulse-train and grid constants of a single-PRF pulse-Doppler radar.

    Parameters
    ----------
    pulse_count : int
        Number of transmitted pulses P in the coherent processing interval.
    pri : float
        Pulse repetition interval T_r in seconds.
    carrier : float
        Carrier frequency f_c in Hz.
    bandwidth : float
        Baseband pulse bandwidth B_h in Hz.
    pulse_width : float
        Pulse duration T_h in seconds.
    wave_speed : float
        Propagation speed in m/s.
    """

    pulse_count: int
    pri: float
    carrier: float
    bandwidth: float
    pulse_width: float
    wave_speed: float = WAVE_SPEED

    def __post_init__(self):
        if self.pulse_count < 1:
            raise ValueError("pulse_count must be >= 1")
        if not (0.0 < self.pulse_width < self.pri):
            raise ValueError("pulse width must satisfy 0 < T_h < T_r")
        if self.bandwidth * self.pulse_width < 1.0:
            raise ValueError("time-bandwidth product B_h*T_h must be >= 1")
        if self.nyquist_bins < 1:
            raise ValueError("B_h*T_r must be >= 1")

    @property
    def nyquist_bins(self) -> int:
        """Number of Fourier coefficients per PRI, N = floor(B_h * T_r)."""
        return int(math.floor(self.bandwidth * self.pri))

    @property
    def delay_bin(self) -> float:
        """Delay resolution bin T_r / N in seconds."""
        return self.pri / self.nyquist_bins

    @property
    def doppler_bin(self) -> float:
        """Doppler resolution bin 1 / (P * T_r) in Hz."""
        return 1.0 / (self.pulse_count * self.pri)

    @property
    def wavelength(self) -> float:
        return self.wave_speed / self.carrier

    @property
    def max_range(self) -> float:
        """Maximum unambiguous range c * T_r / 2 of a conventional radar."""
        return self.wave_speed * self.pri / 2.0

    @property
    def max_velocity(self) -> float:
        """Maximum unambiguous radial velocity lambda / (4 * T_r)."""
        return self.wavelength / (4.0 * self.pri)

    @property
    def unambiguous_doppler(self) -> float:
        """Width 1/T_r of the unambiguous Doppler region."""
        return 1.0 / self.pri


@dataclass(frozen=True)
class Waveform:
    """Constant-modulus linear FM (chirp) baseband pulse.

    The pulse occupies exactly [0, pulse_width); samples outside return 0.
    Doppler is stored as a frequency; velocity readout is v = doppler *
    wavelength / 2, aliased into the unambiguous region.
    """

    bandwidth: float
    pulse_width: float
    kind: str = "lfm"

    def __post_init__(self):
        if self.kind != "lfm":
            raise ValueError(f"unsupported waveform kind {self.kind!r}")
        if self.bandwidth <= 0 or self.pulse_width <= 0:
            raise ValueError("bandwidth and pulse_width must be positive")

    @property
    def chirp_rate(self) -> float:
        return self.bandwidth / self.pulse_width

    @property
    def energy(self) -> float:
        # |h(t)| = 1 on the support, so the pulse energy is just T_h.
        return self.pulse_width


def lfm_sample(waveform: Waveform, t) -> np.ndarray | complex:
    """Evaluate the chirp e^{j pi (B_h/T_h) t^2} on its half-open support.

    Scalar in, scalar out; array in, array out. Returns 0 outside
    [0, pulse_width).
    """
    t_arr = np.asarray(t, dtype=float)
    inside = (t_arr >= 0.0) & (t_arr < waveform.pulse_width)
    phase = np.pi * waveform.chirp_rate * np.square(np.where(inside, t_arr, 0.0))
    out = np.where(inside, np.exp(1j * phase), 0.0 + 0.0j)
    if np.isscalar(t) or t_arr.ndim == 0:
        return complex(out)
    return out


def waveform_spectrum(waveform: Waveform, omega) -> np.ndarray | complex:
    """Continuous-time spectrum H(omega) = int h(t) e^{-j omega t} dt.

    Composite trapezoid over [0, T_h] with at least 16 points per cycle of
    the largest instantaneous frequency involved (chirp sweep plus the
    evaluation frequency), and never fewer than 1024 points.
    """
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    f_eval = np.max(np.abs(om)) / (2.0 * np.pi) if om.size else 0.0
    rate = 16.0 * (waveform.bandwidth + f_eval)
    n = max(1024, int(math.ceil(rate * waveform.pulse_width)) + 1)
    t = np.linspace(0.0, waveform.pulse_width, n)
    # closed form of the chirp on its support; the gate is the integral limit
    h = np.exp(1j * np.pi * waveform.chirp_rate * t**2)
    vals = np.trapz(h[None, :] * np.exp(-1j * om[:, None] * t[None, :]), t, axis=1)
    if np.isscalar(omega):
        return complex(vals[0])
    return vals


def sampled_spectrum(waveform: Waveform, pri: float, num_samples: int) -> np.ndarray:
    """Discrete pulse spectrum on the stream grid of one PRI.

    Left-endpoint Riemann sum of h(t) e^{-j 2 pi m t / T_r} over
    num_samples points covering [0, T_r) -- the same quadrature that
    `fourier_coefficients` applies to a stream, so dividing extracted
    coefficients by these values cancels the discretization error exactly.
    Returns H~[m] for m = 0..num_samples-1 (units of H, i.e. seconds).
    """
    dt = pri / num_samples
    t = np.arange(num_samples) * dt
    h = np.asarray(lfm_sample(waveform, t))
    return np.fft.fft(h) * dt


@dataclass(frozen=True)
class Target:
    """Point scatterer: full round-trip delay, Doppler frequency, amplitude.

    The full delay may exceed the PRI; folding arithmetic is relative to a
    PRI supplied by the caller.
    """

    delay: float
    doppler: float
    amplitude: complex = 1.0 + 0.0j

    def __post_init__(self):
        if self.delay < 0.0:
            raise ValueError("delay must be nonnegative")

    def ambiguity_order(self, pri: float) -> int:
        return int(math.floor(self.delay / pri))

    def folded_delay(self, pri: float) -> float:
        return self.delay - self.ambiguity_order(pri) * pri

    def effective_amplitude(self, pri: float) -> complex:
        """Amplitude with the folded-delay Doppler phase absorbed."""
        return self.amplitude * np.exp(
            -2j * np.pi * self.doppler * self.folded_delay(pri)
        )


@dataclass(frozen=True)
class GridIndex:
    """On-grid placement: delay bin n, Doppler bin p, ambiguity order q."""

    delay_bin: int
    doppler_bin: int
    order: int


@dataclass(frozen=True)
class TargetScene:
    """A list of targets together with the radar they are observed by.

    `grid` is set when the scene was constructed on the delay/Doppler grid;
    it keeps the exact integer indices so grid-domain code does not have to
    re-derive them from floating-point delays.
    """

    params: RadarParams
    targets: tuple[Target, ...]
    grid: tuple[GridIndex, ...] | None = None

    def __post_init__(self):
        pri = self.params.pri
        for i, tg in enumerate(self.targets):
            if not (0.0 <= tg.doppler < 1.0 / pri):
                raise ValueError(
                    f"target {i}: doppler must lie in [0, 1/T_r)"
                )
        if self.grid is not None:
            if len(self.grid) != len(self.targets):
                raise ValueError("grid indices and targets differ in length")
            seen = set()
            for i, gi in enumerate(self.grid):
                if not (0 <= gi.delay_bin < self.params.nyquist_bins):
                    raise ValueError(f"target {i}: delay bin out of range")
                if not (0 <= gi.doppler_bin < self.params.pulse_count):
                    raise ValueError(f"target {i}: doppler bin out of range")
                key = (gi.delay_bin, self.params.pulse_count * gi.order + gi.doppler_bin)
                if key in seen:
                    raise ValueError(f"target {i}: duplicate grid cell {key}")
                seen.add(key)

    @property
    def on_grid(self) -> bool:
        return self.grid is not None

    @property
    def target_count(self) -> int:
        return len(self.targets)

    @property
    def ambiguity_factor(self) -> int:
        """Q = max ambiguity order + 1; 1 for an empty scene."""
        if not self.targets:
            return 1
        return max(t.ambiguity_order(self.params.pri) for t in self.targets) + 1


def scene_from_grid(params: RadarParams, entries) -> TargetScene:
    """Build an on-grid scene from (delay_bin, doppler_bin, order, amplitude).

    Delays are n * T_r / N + q * T_r and Dopplers p / (P * T_r) exactly.
    """
    targets = []
    grid = []
    for n, p, q, amp in entries:
        if q < 0:
            raise ValueError("ambiguity order must be nonnegative")
        targets.append(
            Target(
                delay=n * params.delay_bin + q * params.pri,
                doppler=p * params.doppler_bin,
                amplitude=complex(amp),
            )
        )
        grid.append(GridIndex(int(n), int(p), int(q)))
    return TargetScene(params=params, targets=tuple(targets), grid=tuple(grid))


def scene_from_targets(params: RadarParams, targets) -> TargetScene:
    """Build an off-grid scene from Target records (or (delay, doppler, amp))."""
    out = []
    for t in targets:
        if isinstance(t, Target):
            out.append(t)
        else:
            d, nu, amp = t
            out.append(Target(delay=float(d), doppler=float(nu), amplitude=complex(amp)))
    return TargetScene(params=params, targets=tuple(out))


@dataclass(frozen=True)
class PhaseCode:
    """Per-pulse unit-modulus code z[p] = e^{j phi[p]}; zero off the train."""

    phases: tuple[float, ...]

    @classmethod
    def random(cls, pulse_count: int, rng) -> "PhaseCode":
        rng = np.random.default_rng(rng)
        return cls(phases=tuple(rng.uniform(0.0, 2.0 * np.pi, pulse_count)))

    @classmethod
    def constant(cls, pulse_count: int) -> "PhaseCode":
        """Uncoded train, z[p] = 1 for every pulse."""
        return cls(phases=(0.0,) * pulse_count)

    @property
    def pulse_count(self) -> int:
        return len(self.phases)

    @property
    def values(self) -> np.ndarray:
        return np.exp(1j * np.asarray(self.phases))

    def z(self, p) -> np.ndarray | complex:
        """Code value at pulse index p; exactly 0 outside [0, P-1]."""
        p_arr = np.asarray(p)
        inside = (p_arr >= 0) & (p_arr < self.pulse_count)
        vals = np.where(inside, np.exp(1j * np.asarray(self.phases)[np.where(inside, p_arr, 0)]), 0.0 + 0.0j)
        if np.isscalar(p) or p_arr.ndim == 0:
            return complex(vals)
        return vals

    def shifted(self, q: int) -> np.ndarray:
        """Vector z[b - q] for b = 0..P-1."""
        return self.z(np.arange(self.pulse_count) - q)


@dataclass(frozen=True)
class NoiseSpec:
    """Additive noise level stated as total transmit SNR.

    snr_db = None means noiseless. The reference variance follows the total
    transmit SNR convention: sigma^2 = P_total * E_pulse / SNR_linear, with
    E_pulse = T_h for the constant-modulus chirp.
    """

    snr_db: float | None = None

    @property
    def noiseless(self) -> bool:
        return self.snr_db is None

    def variance(self, total_pulses: int, pulse_energy: float) -> float:
        """Band-limited AWGN variance sigma^2 for the stated total SNR."""
        if self.noiseless:
            return 0.0
        snr_lin = 10.0 ** (self.snr_db / 10.0)
        return total_pulses * pulse_energy / snr_lin

    def coefficient_variance(self, params: RadarParams, total_pulses: int | None = None) -> float:
        """Variance of one raw (un-normalized) Fourier coefficient.

        White noise of total variance sigma^2 over the band B_h contributes
        sigma^2 / (B_h * T_r) per Fourier coefficient of one PRI.
        """
        if self.noiseless:
            return 0.0
        p_tot = params.pulse_count if total_pulses is None else total_pulses
        sigma2 = self.variance(p_tot, params.pulse_width)
        return sigma2 / (params.bandwidth * params.pri)

    def normalized_variance(self, params: RadarParams, total_pulses: int | None = None) -> float:
        """Variance of one normalized coefficient, flat in-band convention.

        Division by the chirp spectrum (|H|^2 ~ T_h / B_h in band) rescales
        the per-coefficient variance to T_r * sigma^2 / T_h. The true
        post-division variance is weakly frequency dependent; downstream
        code follows the usual practice of treating it as white.
        """
        if self.noiseless:
            return 0.0
        p_tot = params.pulse_count if total_pulses is None else total_pulses
        sigma2 = self.variance(p_tot, params.pulse_width)
        return params.pri * sigma2 / params.pulse_width


def complex_gaussian(rng, shape, variance: float) -> np.ndarray:
    """Circular complex Gaussian samples with the given total variance."""
    if variance == 0.0:
        return np.zeros(shape, dtype=complex)
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def synthesize_received(
    params: RadarParams,
    waveform: Waveform,
    scene: TargetScene,
    code: PhaseCode,
    noise: NoiseSpec = NoiseSpec(),
    oversample: int = 4,
    seed=0,
    total_pulses: int | None = None,
) -> np.ndarray:
    """Time-domain echo streams, one row per PRI.

    Returns a (P, oversample * N) complex array; row b holds the received
    baseband signal y_b(t + b T_r) sampled uniformly on [0, T_r) at rate
    oversample * B_h. Each echo keeps its exact per-sample Doppler phase
    e^{-j 2 pi nu t}; no slow-time approximation is applied here. Noise is
    i.i.d. complex Gaussian per sample with variance sigma^2 * oversample,
    which reproduces the in-band spectral density of band-limited AWGN of
    total variance sigma^2.
    """
    if oversample < 1:
        raise ValueError("oversample must be >= 1")
    if code.pulse_count != params.pulse_count:
        raise ValueError("phase code length must equal pulse_count")
    P = params.pulse_count
    N = params.nyquist_bins
    S = oversample * N
    pri = params.pri

    max_nu_th = max(
        (t.doppler * waveform.pulse_width for t in scene.targets), default=0.0
    )
    if max_nu_th > 0.1:
        warnings.warn(
            f"max doppler*pulse_width = {max_nu_th:.3f} strains the slow-time "
            "model used by grid-domain recovery",
            stacklevel=2,
        )

    dt = pri / S
    t_total = np.arange(P * S) * dt
    y = np.zeros(P * S, dtype=complex)
    zvals = code.values

    for i, tgt in enumerate(scene.targets):
        q = tgt.ambiguity_order(pri)
        if q >= P:
            raise ValueError(
                f"target {i}: ambiguity order {q} >= pulse count {P}; "
                "echo falls outside the CPI"
            )
        for p in range(P):
            start = tgt.delay + p * pri
            if start >= P * pri:
                break
            lo = int(math.ceil(start / dt - 1e-12))
            hi = min(int(math.ceil((start + waveform.pulse_width) / dt - 1e-12)), P * S)
            if hi <= lo:
                continue
            ts = t_total[lo:hi]
            y[lo:hi] += (
                tgt.amplitude
                * zvals[p]
                * np.asarray(lfm_sample(waveform, ts - start))
                * np.exp(-2j * np.pi * tgt.doppler * ts)
            )

    streams = y.reshape(P, S)
    if not noise.noiseless:
        p_tot = P if total_pulses is None else total_pulses
        sigma2 = noise.variance(p_tot, waveform.energy)
        rng = np.random.default_rng(seed)
        streams = streams + complex_gaussian(rng, (P, S), sigma2 * oversample)
    return streams


def fourier_coefficients(stream, subset) -> np.ndarray:
    """Fourier-series coefficients of one aligned PRI at the subset bins.

    Y_b[m_k] = (1/T_r) int_0^{T_r} y_b(t + b T_r) e^{-j 2 pi m_k t / T_r} dt,
    approximated by the left-endpoint Riemann sum over the provided uniform
    samples. Accepts a single stream (S,) or a stack (P, S); returns (K,) or
    (K, P) accordingly.
    """
    arr = np.asarray(stream)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    S = arr.shape[1]
    idx = subset.indices
    if idx.size and idx.max() >= S:
        raise ValueError("frequency index exceeds the stream sample count")
    coeffs = np.fft.fft(arr, axis=1)[:, idx] / S
    return coeffs[0] if single else coeffs.T


def normalize_coefficients(
    coeffs,
    waveform: Waveform,
    params: RadarParams,
    subset,
    num_samples: int,
    floor_ratio: float = 0.1,
) -> np.ndarray:
    """Deconvolve raw coefficients by the pulse spectrum: Y~ = T_r Y / H.

    H is evaluated on the same num_samples stream grid the coefficients
    were extracted from, so the quadrature error of the two transforms
    cancels. Raises SpectralFloorError listing every requested index whose
    |H| falls below floor_ratio times the in-band maximum.
    """
    N = params.nyquist_bins
    spec = sampled_spectrum(waveform, params.pri, num_samples)
    floor = floor_ratio * np.max(np.abs(spec[:N]))
    idx = subset.indices
    bad = idx[np.abs(spec[idx]) < floor]
    if bad.size:
        raise SpectralFloorError(bad.tolist())
    h_sel = spec[idx]
    arr = np.asarray(coeffs)
    if arr.ndim == 1:
        return params.pri * arr / h_sel
    return params.pri * arr / h_sel[:, None]


def synthesize_coefficients(
    params: RadarParams,
    scene: TargetScene,
    code: PhaseCode,
    subset,
    noise: NoiseSpec = NoiseSpec(),
    seed=0,
    total_pulses: int | None = None,
) -> np.ndarray:
    """Normalized coefficient matrix evaluated directly from the model.

    Y[k, b] = sum_l a~_l e^{-j 2 pi nu_l b T_r} e^{-j 2 pi m_k tau_l / T_r}
    z[b - q_l] plus white noise at the flat normalized level. Works for
    arbitrary (possibly off-grid) scenes; this is how observations are
    produced when the slow-time phase model itself is the ground truth.
    """
    P = params.pulse_count
    pri = params.pri
    m = subset.indices
    Y = np.zeros((m.size, P), dtype=complex)
    b = np.arange(P)
    for i, tgt in enumerate(scene.targets):
        q = tgt.ambiguity_order(pri)
        if q >= P:
            raise ValueError(
                f"target {i}: ambiguity order {q} >= pulse count {P}"
            )
        slow = np.exp(-2j * np.pi * tgt.doppler * b * pri) * code.shifted(q)
        fast = np.exp(-2j * np.pi * m * tgt.folded_delay(pri) / pri)
        Y += tgt.effective_amplitude(pri) * np.outer(fast, slow)
    if not noise.noiseless:
        rng = np.random.default_rng(seed)
        Y = Y + complex_gaussian(
            rng, Y.shape, noise.normalized_variance(params, total_pulses)
        )
    return Y


def synthesize_ongrid(
    params: RadarParams,
    scene: TargetScene,
    code: PhaseCode,
    subset,
    noise: NoiseSpec = NoiseSpec(),
    seed=0,
    total_pulses: int | None = None,
) -> np.ndarray:
    """Observation matrix for an on-grid scene from the integer-index model.

    Y[k, b] = sum_l a~_l W_P^{b p_l} W_N^{m_k n_l} z[b - q_l] + noise.
    Accumulated target by target from the stored grid indices; noiseless
    output equals the measurement-model triple product A X B^T.
    """
    if not scene.on_grid:
        raise ValueError("synthesize_ongrid requires an on-grid scene")
    P = params.pulse_count
    N = params.nyquist_bins
    m = subset.indices
    b = np.arange(P)
    Y = np.zeros((m.size, P), dtype=complex)
    for tgt, gi in zip(scene.targets, scene.grid):
        if gi.order >= P:
            raise ValueError("ambiguity order >= pulse count")
        fast = np.exp(-2j * np.pi * m * gi.delay_bin / N)
        slow = np.exp(-2j * np.pi * b * gi.doppler_bin / P) * code.shifted(gi.order)
        Y += tgt.effective_amplitude(params.pri) * np.outer(fast, slow)
    if not noise.noiseless:
        rng = np.random.default_rng(seed)
        Y = Y + complex_gaussian(
            rng, Y.shape, noise.normalized_variance(params, total_pulses)
        )
    return Y


def observe_time_domain(
    params: RadarParams,
    waveform: Waveform,
    scene: TargetScene,
    code: PhaseCode,
    subset,
    noise: NoiseSpec = NoiseSpec(),
    oversample: int = 4,
    seed=0,
    total_pulses: int | None = None,
) -> np.ndarray:
    """Full physical pipeline: synthesize, extract, normalize.

    Noise is injected on the raw Fourier coefficients (variance
    sigma^2 / (B_h T_r) each) rather than on the time samples, then
    normalized together with the signal; over the selected band this
    matches the band-limited time-domain model in distribution.
    """
    streams = synthesize_received(
        params, waveform, scene, code, NoiseSpec(), oversample, seed
    )
    raw = fourier_coefficients(streams, subset)
    if not noise.noiseless:
        rng = np.random.default_rng(seed)
        raw = raw + complex_gaussian(
            rng, raw.shape, noise.coefficient_variance(params, total_pulses)
        )
    return normalize_coefficients(
        raw, waveform, params, subset, num_samples=streams.shape[1]
    )
