"""Monte Carlo sweep over (scheme, direction, UE count) with CSV output.

Drops are generated once per (n_ues, drop_index) and shared by every
scheme and direction at that point.  Per-drop work is independent, so the
sweep can fan out over worker processes; results are keyed by drop index
and reduced in order, making parallel and serial runs byte-identical.
``AEROLINK_THREADS`` caps the worker count (0 or unset = auto).
"""

from __future__ import annotations

import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import cic
from .allocation import (
    RbAllocation,
    allocate_terrestrial_icic,
    allocate_uav_scheme3,
    allocate_uav_scheme4,
    allocate_uavs_reserved,
)
from .config import SystemConfig
from .errors import AerolinkError, ConfigurationError, SimulationError
from .geometry import Layout, build_layout
from .metrics import sum_rates
from .rng import Stream, substream
from .scenario import generate_drop

CSV_HEADER = (
    "scheme,direction,n_ues,n_drops,uav_rate_mean,uav_rate_se,"
    "terr_rate_mean,terr_rate_se,net_rate_mean,net_rate_se"
)


@dataclass(frozen=True)
class SweepRow:
    scheme: int
    direction: str
    n_ues: int
    n_drops: int
    uav_rate_mean: float
    uav_rate_se: float
    terr_rate_mean: float
    terr_rate_se: float
    net_rate_mean: float
    net_rate_se: float


@dataclass
class SweepResult:
    rows: list[SweepRow]
    # (scheme, direction, n_ues) -> (n_drops, 2) array of per-drop
    # (uav, terrestrial) sums; populated when run_sweep keeps them.
    per_drop: dict[tuple[int, str, int], np.ndarray] | None = None


def evaluate_drop(
    drop,
    layout: Layout,
    cfg: SystemConfig,
    schemes,
    directions,
) -> dict[tuple[int, str], tuple[float, float]]:
    """(uav sum-rate, terrestrial sum-rate) for each requested (scheme, direction).

    Scheme pipelines share substreams, so e.g. schemes 1 and 2 place UAVs
    identically and schemes 3-5 share one terrestrial allocation.
    """

    def rng(tag: Stream):
        return substream(cfg.master_seed, drop.drop_index, tag)

    out: dict[tuple[int, str], tuple[float, float]] = {}
    reserved = None
    if 1 in schemes or 2 in schemes:
        reserved = allocate_uavs_reserved(drop, cfg, rng(Stream.ALLOC_UAV_RESERVED))
    allocs: dict[int, RbAllocation] = {}
    if 1 in schemes:
        allocs[1] = reserved
    if 2 in schemes:
        forbidden = np.zeros((layout.n_cells, cfg.n_rbs), dtype=bool)
        forbidden[:, reserved.uav_rb] = True
        ue_rb2 = allocate_terrestrial_icic(drop, cfg, layout, forbidden, rng(Stream.ALLOC_TERRESTRIAL))
        allocs[2] = RbAllocation(
            ue_rb=ue_rb2,
            uav_rb=reserved.uav_rb,
            ue_serving=drop.ue_serving,
            uav_serving=drop.uav_serving,
            n_rbs=cfg.n_rbs,
        )
    shared_ue_rb = None
    if any(s in schemes for s in (3, 4, 5)):
        shared_ue_rb = allocate_terrestrial_icic(drop, cfg, layout, None, rng(Stream.ALLOC_TERRESTRIAL))
    if 3 in schemes:
        allocs[3] = allocate_uav_scheme3(drop, cfg, layout, shared_ue_rb, rng(Stream.ALLOC_UAV_SHARED))

    for direction in directions:
        alloc4 = None
        if 4 in schemes or 5 in schemes:
            alloc4 = allocate_uav_scheme4(
                drop, cfg, layout, shared_ue_rb, rng(Stream.ALLOC_UAV_SHARED), direction
            )
        for scheme in schemes:
            if scheme in (1, 2, 3):
                alloc, plan = allocs[scheme], None
            elif scheme == 4:
                alloc, plan = alloc4, None
            else:
                if direction == "uplink":
                    plan = cic.plan_uplink_cic(drop, alloc4, cfg, layout)
                else:
                    plan = cic.plan_downlink_cic(drop, alloc4, cfg, layout)
                alloc = RbAllocation(
                    ue_rb=alloc4.ue_rb,
                    uav_rb=alloc4.uav_rb,
                    ue_serving=alloc4.ue_serving,
                    uav_serving=alloc4.uav_serving,
                    n_rbs=cfg.n_rbs,
                    cic=plan,
                )
            record = sum_rates(drop, alloc, plan, cfg, direction)
            out[(scheme, direction)] = (record.uav_sum_rate, record.terrestrial_sum_rate)
    return out


def _eval_chunk(args) -> list[tuple[int, dict]]:
    cfg, layout, n_ues, drop_indices = args
    results = []
    for d in drop_indices:
        try:
            drop = generate_drop(cfg, layout, d, n_ues)
            results.append((d, evaluate_drop(drop, layout, cfg, cfg.schemes, cfg.directions)))
        except AerolinkError as exc:
            raise SimulationError(f"drop {d} at n_ues={n_ues}: {exc}") from exc
    return results


def resolve_workers(n_drops: int, workers: int | None = None) -> int:
    if workers is None:
        raw = os.environ.get("AEROLINK_THREADS", "0").strip()
        try:
            workers = int(raw)
        except ValueError:
            raise ConfigurationError(f"AEROLINK_THREADS must be an integer, got '{raw}'") from None
    if workers < 0:
        raise ConfigurationError(f"worker count must be non-negative, got {workers}")
    if workers == 0:
        workers = os.cpu_count() or 1
    if n_drops < 16:  # not worth forking for tiny runs
        return 1
    return min(workers, n_drops)


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(values))
    if values.size < 2:
        return mean, 0.0
    return mean, float(np.std(values, ddof=1) / math.sqrt(values.size))


def run_sweep(
    cfg: SystemConfig,
    layout: Layout | None = None,
    workers: int | None = None,
    progress: bool = False,
    keep_per_drop: bool = False,
) -> SweepResult:
    """Run the configured sweep; deterministic for a fixed (config, seed)
    regardless of worker count.  With ``keep_per_drop`` the result also
    carries the per-drop sums, enabling paired scheme comparisons."""
    if layout is None:
        layout = build_layout(cfg.tiers, cfg.cell_radius_m, cfg.bs_height_m)
    n_workers = resolve_workers(cfg.n_drops, workers)
    per_point: dict[int, dict[tuple[int, str], np.ndarray]] = {}
    for n_ues in cfg.n_ues:
        start = time.perf_counter()
        drop_ids = list(range(cfg.n_drops))
        if n_workers == 1:
            chunks = [_eval_chunk((cfg, layout, n_ues, drop_ids))]
        else:
            size = math.ceil(len(drop_ids) / n_workers)
            args = [
                (cfg, layout, n_ues, drop_ids[i : i + size])
                for i in range(0, len(drop_ids), size)
            ]
            with ProcessPoolExecutor(max_workers=n_workers) as pool:
                chunks = list(pool.map(_eval_chunk, args))
        merged = [item for chunk in chunks for item in chunk]
        merged.sort(key=lambda item: item[0])
        sums = {
            key: np.array([rec[key] for _d, rec in merged])
            for key in merged[0][1]
        }
        per_point[n_ues] = sums
        if progress:
            elapsed = time.perf_counter() - start
            print(
                f"[aerolink] n_ues={n_ues}: {cfg.n_drops} drops, "
                f"{len(sums)} scheme/direction records, {elapsed:.1f}s",
                file=sys.stderr,
            )

    rows = []
    per_drop = {} if keep_per_drop else None
    for scheme in cfg.schemes:
        for direction in cfg.directions:
            for n_ues in cfg.n_ues:
                values = per_point[n_ues][(scheme, direction)]
                if per_drop is not None:
                    per_drop[(scheme, direction, n_ues)] = values
                uav_mean, uav_se = _mean_se(values[:, 0])
                terr_mean, terr_se = _mean_se(values[:, 1])
                _, net_se = _mean_se(values[:, 0] + values[:, 1])
                net_mean = uav_mean + terr_mean  # exact row invariant
                rows.append(
                    SweepRow(
                        scheme, direction, n_ues, cfg.n_drops,
                        uav_mean, uav_se, terr_mean, terr_se, net_mean, net_se,
                    )
                )
    return SweepResult(rows, per_drop)


def format_csv(result: SweepResult, rate_scale: float = 1.0) -> str:
    lines = [CSV_HEADER]
    for row in result.rows:
        fields = [
            str(row.scheme),
            row.direction,
            str(row.n_ues),
            str(row.n_drops),
        ] + [
            f"{value * rate_scale:.12g}"
            for value in (
                row.uav_rate_mean, row.uav_rate_se,
                row.terr_rate_mean, row.terr_rate_se,
                row.net_rate_mean, row.net_rate_se,
            )
        ]
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def write_csv(result: SweepResult, path: str, rate_scale: float = 1.0) -> None:
    """Write the sweep CSV (>=10 significant digits, newline-terminated)."""
    text = format_csv(result, rate_scale)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise SimulationError(f"cannot write CSV to '{path}': {exc}") from exc
