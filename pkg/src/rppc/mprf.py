"""
Multiple-PRF (MPRF) baseline: two uncoded pulse trains at different PRIs,
recovered separately and fused by unfold-and-match clustering.

Each train sees only folded delays; ambiguity is resolved afterwards by
enumerating whole-PRI unfoldings of Doppler-matched estimate pairs and
keeping the pair whose unfolded delays agree best. A small folded-delay
error on one train can therefore jump the resolved range by a full PRI
multiple - the known failure mode of this scheme, and the reason the
jointly processed phase-coded train is the interesting comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measurement import build_A, build_B, select_subset
from .recovery import RecoveryConfig, TargetEstimate, extract_targets, matrix_omp
from .signal_model import (
    NoiseSpec,
    PhaseCode,
    RadarParams,
    TargetScene,
    synthesize_coefficients,
)


@dataclass(frozen=True)
class MprfConfig:
    """Two-train setup plus matching tolerances.

    surveillance is the ambiguity factor expressed in first-train PRIs:
    resolved delays are searched in [0, surveillance * first.pri].
    Defaults: Doppler tolerance of one bin of the coarser train, delay
    tolerance of one range bin 1/B_h.
    """

    first: RadarParams
    second: RadarParams
    surveillance: int
    doppler_match_tol: float | None = None
    delay_match_tol: float | None = None

    def __post_init__(self):
        if self.first.pri == self.second.pri:
            raise ValueError("the two trains must use distinct PRIs")
        if self.first.carrier != self.second.carrier or (
            self.first.bandwidth != self.second.bandwidth
            or self.first.pulse_width != self.second.pulse_width
        ):
            raise ValueError("trains must share carrier and waveform")
        if self.surveillance < 1:
            raise ValueError("surveillance window must cover >= 1 PRI")

    @property
    def doppler_tol(self) -> float:
        if self.doppler_match_tol is not None:
            return self.doppler_match_tol
        return max(self.first.doppler_bin, self.second.doppler_bin)

    @property
    def delay_tol(self) -> float:
        if self.delay_match_tol is not None:
            return self.delay_match_tol
        return 1.0 / self.first.bandwidth

    def unfold_count(self, train: RadarParams) -> int:
        """Whole-PRI shifts needed to cover the surveillance window."""
        window = self.surveillance * self.first.pri
        return int(math.ceil(window / train.pri))


@dataclass(frozen=True)
class MprfResolution:
    resolved: tuple[TargetEstimate, ...]
    unmatched_first: tuple[TargetEstimate, ...]
    unmatched_second: tuple[TargetEstimate, ...]


def mprf_recover_train(
    y: np.ndarray,
    params: RadarParams,
    subset,
    count: int,
) -> list[TargetEstimate]:
    """Ambiguous per-train recovery: OMP against the uncoded Q=1 dictionary.

    Estimates carry folded delays in [0, T_r) of this train; ambiguity
    orders are all zero by construction.
    """
    code = PhaseCode.constant(params.pulse_count)
    a = build_A(subset, params.nyquist_bins)
    b = build_B(code, params.pulse_count, 1)
    found = matrix_omp(y, a, b, RecoveryConfig(target_count=count))
    return extract_targets(found, params)


def mprf_cluster_resolve(
    first_estimates,
    second_estimates,
    config: MprfConfig,
) -> MprfResolution:
    """Fuse folded per-train estimates into unambiguous delays.

    For every Doppler-matched pair, enumerate unfolded delay candidates
    tau_i + k_i * T_{r,i} over the surveillance window and keep the
    unfolding with the smallest disagreement. Pairs agreeing within the
    delay tolerance are accepted nearest-first, each estimate consumed at
    most once; the midpoint becomes the resolved delay and the Doppler is
    averaged. Leftovers are reported, not raised.
    """
    k1 = config.unfold_count(config.first) + 1
    k2 = config.unfold_count(config.second) + 1
    shifts1 = np.arange(k1) * config.first.pri
    shifts2 = np.arange(k2) * config.second.pri

    candidates = []
    for i, e1 in enumerate(first_estimates):
        for j, e2 in enumerate(second_estimates):
            if abs(e1.doppler - e2.doppler) > config.doppler_tol:
                continue
            c1 = e1.folded_delay + shifts1
            c2 = e2.folded_delay + shifts2
            gaps = np.abs(c1[:, None] - c2[None, :])
            best = np.unravel_index(int(np.argmin(gaps)), gaps.shape)
            gap = float(gaps[best])
            if gap > config.delay_tol:
                continue
            delay = 0.5 * (c1[best[0]] + c2[best[1]])
            candidates.append((gap, i, j, delay))

    candidates.sort(key=lambda t: (t[0], t[1], t[2]))
    used_i: set[int] = set()
    used_j: set[int] = set()
    resolved = []
    for gap, i, j, delay in candidates:
        if i in used_i or j in used_j:
            continue
        used_i.add(i)
        used_j.add(j)
        e1 = first_estimates[i]
        e2 = second_estimates[j]
        order = int(math.floor(delay / config.first.pri))
        resolved.append(
            TargetEstimate(
                ambiguity_order=order,
                folded_delay=delay - order * config.first.pri,
                doppler=0.5 * (e1.doppler + e2.doppler),
                amplitude=0.5 * (e1.amplitude + e2.amplitude),
            )
        )
    unmatched_first = tuple(
        e for i, e in enumerate(first_estimates) if i not in used_i
    )
    unmatched_second = tuple(
        e for j, e in enumerate(second_estimates) if j not in used_j
    )
    return MprfResolution(
        resolved=tuple(resolved),
        unmatched_first=unmatched_first,
        unmatched_second=unmatched_second,
    )


def mprf_run(
    scene: TargetScene,
    config: MprfConfig,
    subset_size: int,
    count: int,
    noise: NoiseSpec = NoiseSpec(),
    rng=0,
    total_pulses: int | None = None,
) -> MprfResolution:
    """Synthesize, recover and resolve both trains for one scene.

    Both trains observe the same physical targets with their own folding;
    the noise level derives from the combined transmit energy of the two
    trains so the comparison against single-train coding is at matched
    total SNR.
    """
    rng = np.random.default_rng(rng)
    if total_pulses is None:
        total_pulses = config.first.pulse_count + config.second.pulse_count
    estimates = []
    for train in (config.first, config.second):
        local = TargetScene(params=train, targets=scene.targets)
        subset = select_subset(train.nyquist_bins, subset_size, "random", rng)
        code = PhaseCode.constant(train.pulse_count)
        y = synthesize_coefficients(
            train, local, code, subset, noise, seed=rng, total_pulses=total_pulses
        )
        estimates.append(mprf_recover_train(y, train, subset, count))
    return mprf_cluster_resolve(estimates[0], estimates[1], config)
