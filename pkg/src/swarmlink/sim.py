"""Monte Carlo sweep engine and results serialization.

Every trial draws its randomness from a stream derived from the master seed
and counters, so results are independent of execution order and identical
whether points run serially or on a process pool. Trials reuse the same
stream key across sweep-axis values (common random numbers): curves along
the axis then differ only through the physics, not through fresh noise.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channel import channel_set
from .equalization import geometric_equalizer, optimal_equalizer
from .errors import InvalidInput, NumericalError, SwarmLinkError
from .geometry import place_swarm
from .precoding import geometric_precoder
from .rates import RateReport, capacity, rate_ideal_rx, rate_linear, rate_upper_geo, sinr_per_stream
from .scenario import (
    AXIS_INTER_SAT_DISTANCE,
    AXIS_MEAN_ELEVATION,
    AXIS_TRANSMIT_POWER,
    ScenarioConfig,
    config_digest,
)
from .units import dbw_to_watt, deg_to_rad, km_to_m

_CHAIN_TOL = 1e-9

_CSV_COLUMNS = (
    "axis_value",
    "r_opt",
    "r_per",
    "r_lin_geo",
    "r_lin_opt_eq",
    "r_upper",
    "r_opt_std",
    "r_per_std",
    "r_lin_geo_std",
    "r_lin_opt_eq_std",
    "r_upper_std",
    "trials",
    "config_digest",
)


@dataclass(frozen=True)
class SweepRecord:
    """Aggregated rates at one sweep point."""

    axis_value: float
    mean: RateReport
    std: RateReport
    num_trials: int
    config_digest: str


def trial_stream(seed: int, time_index: int, trial_index: int) -> np.random.Generator:
    """Independent random stream for one (time slot, trial) pair."""
    ss = np.random.SeedSequence(seed, spawn_key=(time_index, trial_index))
    return np.random.default_rng(ss)


def run_point(
    config: ScenarioConfig,
    theta_mean_rad: float,
    inter_sat_distance_m: float,
    total_tx_power_w: float,
    trial_index: int,
    time_index: int = 0,
) -> RateReport:
    """Evaluate every rate metric for one channel realization.

    Places the swarm, draws one link-budget realization from the
    (seed, time_index, trial_index) stream, and computes the capacity, the
    ideal-receiver rate of the geometric precoder, both linear-equalizer sum
    rates, and the geometric upper bound. Deterministic given its arguments.
    """
    arrays = config.arrays
    swarm = place_swarm(
        theta_mean_rad, inter_sat_distance_m, config.num_satellites, config.orbit
    )
    rng = trial_stream(config.seed, time_index, trial_index)
    channels = channel_set(swarm, arrays, config.loss, rng)

    rho = total_tx_power_w / config.num_satellites
    precoder = geometric_precoder(swarm, arrays, rho)
    blocks = channels.per_satellite_true

    r_opt = capacity(channels.stacked_true, total_tx_power_w, config.noise_power_w)
    r_per = rate_ideal_rx(channels.stacked_true, precoder, config.noise_power_w)

    sigma_bar_sq = config.noise_power_w / (
        channels.gain_power * arrays.num_tx_per_sat * rho
    )
    eq_geo = geometric_equalizer(channels.rx_steering_matrix, sigma_bar_sq)
    sinrs_geo = sinr_per_stream(eq_geo, blocks, precoder, config.noise_power_w)
    r_lin_geo = rate_linear(sinrs_geo)

    eq_opt = optimal_equalizer(blocks, precoder, config.noise_power_w)
    sinrs_opt = sinr_per_stream(eq_opt, blocks, precoder, config.noise_power_w)
    r_lin_opt = rate_linear(sinrs_opt)

    r_upper = rate_upper_geo(channels.rx_steering_matrix, sigma_bar_sq)

    if r_lin_opt > r_per + _CHAIN_TOL or r_per > r_opt + _CHAIN_TOL:
        raise NumericalError(
            f"rate chain violated: r_lin_opt={r_lin_opt!r} r_per={r_per!r} "
            f"r_opt={r_opt!r}"
        )
    return RateReport(
        r_opt=r_opt,
        r_per=r_per,
        r_lin_geo=r_lin_geo,
        r_lin_opt_eq=r_lin_opt,
        r_upper=r_upper,
        per_stream_sinr=tuple(sinrs_geo),
    )


def _point_parameters(config: ScenarioConfig, axis_value: float) -> tuple[float, float]:
    """(inter-satellite distance m, transmit power W) for one axis value."""
    if config.sweep.axis == AXIS_INTER_SAT_DISTANCE:
        return km_to_m(axis_value), config.total_tx_power_w
    if config.sweep.axis == AXIS_TRANSMIT_POWER:
        return config.inter_sat_distance_m, dbw_to_watt(axis_value)
    return config.inter_sat_distance_m, config.total_tx_power_w


def _theta_slots_rad(config: ScenarioConfig, axis_value: float) -> list[float]:
    if config.sweep.axis == AXIS_MEAN_ELEVATION:
        return [deg_to_rad(axis_value)]
    if config.sweep.time_average:
        return list(config.pass_grid_rad())
    return [deg_to_rad(config.sweep.theta_mean_deg)]


_WORKER_CONFIG: ScenarioConfig | None = None


def _init_worker(config: ScenarioConfig) -> None:
    global _WORKER_CONFIG
    _WORKER_CONFIG = config


def _eval_task(task: tuple[float, float, float, int, int]) -> RateReport:
    theta_mean, distance, power, trial, time_index = task
    return run_point(_WORKER_CONFIG, theta_mean, distance, power, trial, time_index)


def _aggregate(reports: list[RateReport], axis_value: float, config: ScenarioConfig, digest: str) -> SweepRecord:
    fields = ("r_opt", "r_per", "r_lin_geo", "r_lin_opt_eq", "r_upper")
    data = {f: np.array([getattr(r, f) for r in reports]) for f in fields}
    sinrs = np.array([r.per_stream_sinr for r in reports])
    mean = RateReport(
        **{f: float(np.mean(data[f])) for f in fields},
        per_stream_sinr=tuple(float(x) for x in np.mean(sinrs, axis=0)),
    )
    std = RateReport(
        **{f: float(np.std(data[f])) for f in fields},
        per_stream_sinr=tuple(float(x) for x in np.std(sinrs, axis=0)),
    )
    return SweepRecord(
        axis_value=axis_value,
        mean=mean,
        std=std,
        num_trials=config.trials,
        config_digest=digest,
    )


def run_sweep(config: ScenarioConfig, workers: int = 1) -> list[SweepRecord]:
    """Run the configured sweep, averaging each point over trials.

    Points whose sweep sets ``time_average`` additionally average over the
    pass grid. With ``workers > 1`` the trials run on a process pool; the
    merge order is fixed by the task list, so results are identical to the
    serial run. Fails fast with the axis value attached to the first error.
    """
    digest = config_digest(config)
    per_value_tasks: list[tuple[float, list[tuple[float, float, float, int, int]]]] = []
    for axis_value in config.sweep.values:
        distance, power = _point_parameters(config, axis_value)
        tasks = [
            (theta, distance, power, trial, time_index)
            for time_index, theta in enumerate(_theta_slots_rad(config, axis_value))
            for trial in range(config.trials)
        ]
        per_value_tasks.append((axis_value, tasks))

    records: list[SweepRecord] = []
    if workers <= 1:
        for axis_value, tasks in per_value_tasks:
            try:
                reports = [_eval_task_with(config, task) for task in tasks]
            except SwarmLinkError as exc:
                raise type(exc)(
                    f"sweep point {config.sweep.axis}={axis_value}: {exc}"
                ) from exc
            records.append(_aggregate(reports, axis_value, config, digest))
        return records

    flat = [task for _, tasks in per_value_tasks for task in tasks]
    with ProcessPoolExecutor(
        max_workers=workers, initializer=_init_worker, initargs=(config,)
    ) as pool:
        results = iter(pool.map(_eval_task, flat, chunksize=64))
        for axis_value, tasks in per_value_tasks:
            try:
                reports = [next(results) for _ in tasks]
            except SwarmLinkError as exc:
                raise type(exc)(
                    f"sweep point {config.sweep.axis}={axis_value}: {exc}"
                ) from exc
            records.append(_aggregate(reports, axis_value, config, digest))
    return records


def _eval_task_with(config: ScenarioConfig, task: tuple[float, float, float, int, int]) -> RateReport:
    theta_mean, distance, power, trial, time_index = task
    return run_point(config, theta_mean, distance, power, trial, time_index)


def _format_float(value: float) -> str:
    return repr(float(value))


def serialize_results(records: "list[SweepRecord]", fmt: str = "csv") -> bytes:
    """Serialize sweep records to CSV or JSON bytes (lossless round trip)."""
    if not records:
        raise InvalidInput("no sweep records to serialize")
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS)
        for rec in records:
            writer.writerow(
                [
                    _format_float(rec.axis_value),
                    _format_float(rec.mean.r_opt),
                    _format_float(rec.mean.r_per),
                    _format_float(rec.mean.r_lin_geo),
                    _format_float(rec.mean.r_lin_opt_eq),
                    _format_float(rec.mean.r_upper),
                    _format_float(rec.std.r_opt),
                    _format_float(rec.std.r_per),
                    _format_float(rec.std.r_lin_geo),
                    _format_float(rec.std.r_lin_opt_eq),
                    _format_float(rec.std.r_upper),
                    str(rec.num_trials),
                    rec.config_digest,
                ]
            )
        return buffer.getvalue().encode()
    if fmt == "json":
        payload = {"records": [_record_to_dict(rec) for rec in records]}
        return (json.dumps(payload, indent=2) + "\n").encode()
    raise InvalidInput(f"unknown output format {fmt!r}")


def _report_to_dict(report: RateReport) -> dict:
    return {
        "r_opt": report.r_opt,
        "r_per": report.r_per,
        "r_lin_geo": report.r_lin_geo,
        "r_lin_opt_eq": report.r_lin_opt_eq,
        "r_upper": report.r_upper,
        "per_stream_sinr": list(report.per_stream_sinr),
    }


def _record_to_dict(rec: SweepRecord) -> dict:
    return {
        "axis_value": rec.axis_value,
        "mean": _report_to_dict(rec.mean),
        "std": _report_to_dict(rec.std),
        "trials": rec.num_trials,
        "config_digest": rec.config_digest,
    }


def parse_results_csv(data: bytes) -> list[SweepRecord]:
    """Parse CSV bytes produced by :func:`serialize_results`."""
    reader = csv.reader(io.StringIO(data.decode()))
    header = next(reader, None)
    if header is None or tuple(header) != _CSV_COLUMNS:
        raise InvalidInput("unrecognized results CSV header")
    records = []
    for row in reader:
        values = [float(x) for x in row[:11]]
        records.append(
            SweepRecord(
                axis_value=values[0],
                mean=RateReport(*values[1:6]),
                std=RateReport(*values[6:11]),
                num_trials=int(row[11]),
                config_digest=row[12],
            )
        )
    return records


def write_results(
    records: "list[SweepRecord]",
    out_dir: "str | Path",
    basename: str,
    fmt: str = "csv",
) -> Path:
    """Write serialized records under ``out_dir``, returning the path."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / f"{basename}.{fmt}"
        path.write_bytes(serialize_results(records, fmt))
    except OSError as exc:
        raise SwarmLinkError(f"cannot write results to {out_dir}: {exc}") from exc
    return path
