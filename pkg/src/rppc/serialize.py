"""
JSON round-trips for radar parameters, target scenes, recovery results
and experiment tables. Complex numbers travel as [re, im] pairs; SI units
(seconds, hertz) as plain floats.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .analysis import ExperimentResult
from .measurement import SparseMap
from .recovery import TargetEstimate
from .signal_model import GridIndex, RadarParams, Target, TargetScene


def _cplx(value) -> list[float]:
    c = complex(value)
    return [c.real, c.imag]


def _from_cplx(pair) -> complex:
    return complex(pair[0], pair[1])


def params_to_dict(params: RadarParams) -> dict:
    return {
        "pulse_count": params.pulse_count,
        "pri": params.pri,
        "carrier": params.carrier,
        "bandwidth": params.bandwidth,
        "pulse_width": params.pulse_width,
        "wave_speed": params.wave_speed,
    }


def params_from_dict(doc: dict) -> RadarParams:
    return RadarParams(
        pulse_count=int(doc["pulse_count"]),
        pri=float(doc["pri"]),
        carrier=float(doc["carrier"]),
        bandwidth=float(doc["bandwidth"]),
        pulse_width=float(doc["pulse_width"]),
        wave_speed=float(doc.get("wave_speed", 3.0e8)),
    )


def scene_to_dict(scene: TargetScene) -> dict:
    doc = {
        "params": params_to_dict(scene.params),
        "targets": [
            {
                "delay": t.delay,
                "doppler": t.doppler,
                "amplitude": _cplx(t.amplitude),
            }
            for t in scene.targets
        ],
    }
    if scene.on_grid:
        doc["grid"] = [
            {"delay_bin": g.delay_bin, "doppler_bin": g.doppler_bin, "order": g.order}
            for g in scene.grid
        ]
    return doc


def scene_from_dict(doc: dict) -> TargetScene:
    params = params_from_dict(doc["params"])
    targets = tuple(
        Target(
            delay=float(t["delay"]),
            doppler=float(t["doppler"]),
            amplitude=_from_cplx(t["amplitude"]),
        )
        for t in doc["targets"]
    )
    grid = None
    if "grid" in doc:
        grid = tuple(
            GridIndex(
                delay_bin=int(g["delay_bin"]),
                doppler_bin=int(g["doppler_bin"]),
                order=int(g["order"]),
            )
            for g in doc["grid"]
        )
    return TargetScene(params=params, targets=targets, grid=grid)


def save_scene(scene: TargetScene, path) -> None:
    with open(path, "w") as fh:
        json.dump(scene_to_dict(scene), fh, indent=2)


def load_scene(path) -> TargetScene:
    with open(path) as fh:
        return scene_from_dict(json.load(fh))


def estimates_to_records(
    estimates, pri: float, sparse_map: SparseMap | None = None,
    residual_norm: float | None = None, iterations: int | None = None,
    converged: bool = True,
) -> dict:
    """Structured recovery record: support, amplitudes, physical readout."""
    doc = {
        "converged": converged,
        "estimates": [
            {
                "ambiguity_order": e.ambiguity_order,
                "folded_delay": e.folded_delay,
                "doppler": e.doppler,
                "full_delay": e.full_delay(pri),
                "amplitude": _cplx(e.amplitude),
            }
            for e in estimates
        ],
    }
    if sparse_map is not None:
        doc["support"] = [
            {"row": int(r), "col": int(c), "amplitude": _cplx(a)}
            for r, c, a in zip(sparse_map.rows, sparse_map.cols, sparse_map.amplitudes)
        ]
    if residual_norm is not None:
        doc["residual_norm"] = float(residual_norm)
    if iterations is not None:
        doc["iterations"] = int(iterations)
    return doc


def estimates_from_records(doc: dict) -> list[TargetEstimate]:
    return [
        TargetEstimate(
            ambiguity_order=int(e["ambiguity_order"]),
            folded_delay=float(e["folded_delay"]),
            doppler=float(e["doppler"]),
            amplitude=_from_cplx(e["amplitude"]),
        )
        for e in doc["estimates"]
    ]


def write_curve_csv(result: ExperimentResult, curve: str, path) -> None:
    """One tabular file per curve: header row plus one row per sweep point."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [result.sweep_name, "trials", "hits", "hit_rate", "mean_runtime_ms"]
        )
        for row in result.rows(curve):
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def save_result(result: ExperimentResult, path) -> None:
    with open(path, "w") as fh:
        json.dump(result.to_document(), fh, indent=2)


def dump_json(doc: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)


def load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
