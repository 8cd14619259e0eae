"""RB scheduling for terrestrial UEs and UAVs (schemes 1-4).

Scheme 1 reserves the whole band for UAVs; scheme 2 adds opportunistic
terrestrial access to RBs no UAV holds; scheme 3 runs terrestrial ICIC
over all RBs and slots each UAV into an RB unused by its serving cell and
first tier; scheme 4 replaces scheme 3's random pick by the lowest sensed
power.  UAV RBs are always pairwise distinct.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from . import kernels
from .config import SystemConfig
from .errors import InfeasibleError
from .geometry import Layout
from .scenario import Drop

if TYPE_CHECKING:
    from .cic import CicPlan


@dataclass
class RbAllocation:
    """Per-drop schedule: RB per UE (-1 = unscheduled) and per UAV."""

    ue_rb: np.ndarray
    uav_rb: np.ndarray
    ue_serving: np.ndarray
    uav_serving: np.ndarray
    n_rbs: int
    cic: "CicPlan | None" = field(default=None)

    @property
    def terrestrial(self) -> dict[tuple[int, int], int]:
        """(cell, rb) -> UE id for every scheduled terrestrial UE."""
        return {
            (int(self.ue_serving[t]), int(r)): t
            for t, r in enumerate(self.ue_rb)
            if r >= 0
        }

    @property
    def unscheduled_ues(self) -> frozenset[int]:
        return frozenset(int(t) for t in np.nonzero(self.ue_rb < 0)[0])

    def cell_occupancy(self, n_cells: int) -> np.ndarray:
        """Boolean (cell, rb) terrestrial occupancy table."""
        occ = np.zeros((n_cells, self.n_rbs), dtype=bool)
        sched = self.ue_rb >= 0
        occ[self.ue_serving[sched], self.ue_rb[sched]] = True
        return occ

    def ues_on_rb(self, rb: int) -> np.ndarray:
        return np.nonzero(self.ue_rb == rb)[0]

    def uav_on_rb(self, rb: int) -> int | None:
        hits = np.nonzero(self.uav_rb == rb)[0]
        return int(hits[0]) if hits.size else None


def _normalize_forbidden(forbidden, n_cells: int, n_rbs: int) -> np.ndarray:
    if forbidden is None:
        return np.zeros((n_cells, n_rbs), dtype=bool)
    if isinstance(forbidden, np.ndarray):
        return forbidden.astype(bool)
    out = np.zeros((n_cells, n_rbs), dtype=bool)
    for cell, rbs in forbidden.items():
        for r in rbs:
            out[cell, r] = True
    return out


def allocate_uavs_reserved(drop: Drop, cfg: SystemConfig, rng: np.random.Generator) -> RbAllocation:
    """Schemes 1-2: UAVs take distinct RBs uniformly at random; no UEs."""
    if drop.n_uavs > cfg.n_rbs:
        raise InfeasibleError(
            f"cannot give {drop.n_uavs} UAVs orthogonal RBs out of {cfg.n_rbs}"
        )
    uav_rb = rng.permutation(cfg.n_rbs)[: drop.n_uavs].astype(np.int64)
    return RbAllocation(
        ue_rb=np.full(drop.n_ues, -1, dtype=np.int64),
        uav_rb=uav_rb,
        ue_serving=drop.ue_serving,
        uav_serving=drop.uav_serving,
        n_rbs=cfg.n_rbs,
    )


def allocate_terrestrial_icic(
    drop: Drop,
    cfg: SystemConfig,
    layout: Layout,
    forbidden,
    rng: np.random.Generator,
) -> np.ndarray:
    """Greedy terrestrial ICIC; returns the per-UE RB array (-1 unscheduled).

    UEs are processed in a seeded random order.  The random order and the
    tie-break uniforms are drawn once regardless of the forbidden set, so
    schemes sharing a substream schedule identically where feasible.
    """
    neigh, ndeg = layout.neighbor_arrays()
    order = rng.permutation(drop.n_ues).astype(np.int64)
    tie = rng.random(drop.n_ues)
    forb = _normalize_forbidden(forbidden, layout.n_cells, cfg.n_rbs)
    return kernels.icic_assign(
        order, drop.ue_serving, neigh, ndeg, forb, tie, cfg.n_rbs
    )


def sensing_matrix(
    drop: Drop, ue_rb: np.ndarray, cfg: SystemConfig, direction: str
) -> np.ndarray:
    """Sensed power (mW) per (UAV, RB) over the terrestrial allocation.

    Large-scale only: fading is averaged out of the sensing observable.
    Downlink sums BS transmissions at the UAV (own serving BS excluded);
    uplink sums terrestrial UE transmissions over the UE->UAV links.
    """
    p_mw = cfg.tx_power_mw
    n_cells = drop.ue_bs.path_loss_db.shape[1]
    onehot = np.zeros((drop.n_ues, cfg.n_rbs))
    sched = ue_rb >= 0
    onehot[np.nonzero(sched)[0], ue_rb[sched]] = 1.0
    if direction == "uplink":
        lin = 10.0 ** (drop.ue_uav.large_scale_db / 10.0)  # (n_ues, n_uavs)
        return p_mw * (lin.T @ onehot)
    cell_tx = np.zeros((n_cells, cfg.n_rbs))
    np.add.at(cell_tx, (drop.ue_serving[sched], ue_rb[sched]), 1.0)
    cell_tx = np.minimum(cell_tx, 1.0)  # one downlink signal per (cell, rb)
    lin_bs = 10.0 ** (drop.uav_bs.large_scale_db / 10.0)  # (n_uavs, n_cells)
    sensed = p_mw * (lin_bs @ cell_tx)
    own = p_mw * lin_bs[np.arange(drop.n_uavs), drop.uav_serving]
    sensed -= own[:, None] * cell_tx[drop.uav_serving, :]
    return sensed


def sense_rb_power(
    uav: int, rb: int, direction: str, drop: Drop, alloc: RbAllocation, cfg: SystemConfig
) -> float:
    """Reference single-(UAV, RB) sensing sum, mirroring ``sensing_matrix``
    but also counting co-channel UAV serving BSs in the downlink."""
    p_mw = cfg.tx_power_mw
    total = 0.0
    if direction == "uplink":
        ls = drop.ue_uav.large_scale_db
        for t in alloc.ues_on_rb(rb):
            total += p_mw * 10.0 ** (ls[t, uav] / 10.0)
        return total
    ls = drop.uav_bs.large_scale_db
    own = int(drop.uav_serving[uav])
    tx_cells = {int(drop.ue_serving[t]) for t in alloc.ues_on_rb(rb)}
    for v, r in enumerate(alloc.uav_rb):
        if v != uav and r == rb:
            tx_cells.add(int(drop.uav_serving[v]))
    for c in sorted(tx_cells):
        if c != own:
            total += p_mw * 10.0 ** (ls[uav, c] / 10.0)
    return total


def _allocate_uavs_shared(
    drop: Drop,
    cfg: SystemConfig,
    layout: Layout,
    ue_rb: np.ndarray,
    rng: np.random.Generator,
    sensed: np.ndarray | None,
) -> RbAllocation:
    if drop.n_uavs > cfg.n_rbs:
        raise InfeasibleError(
            f"cannot give {drop.n_uavs} UAVs orthogonal RBs out of {cfg.n_rbs}"
        )
    neigh, ndeg = layout.neighbor_arrays()
    order = rng.permutation(drop.n_uavs).astype(np.int64)
    pick = rng.random(drop.n_uavs)
    occ = np.zeros((layout.n_cells, cfg.n_rbs), dtype=bool)
    sched = ue_rb >= 0
    occ[drop.ue_serving[sched], ue_rb[sched]] = True
    use_sensing = sensed is not None
    if sensed is None:
        sensed = np.zeros((drop.n_uavs, cfg.n_rbs))
    uav_rb = kernels.uav_assign(
        order, drop.uav_serving, neigh, ndeg, occ, sensed, use_sensing, pick, cfg.n_rbs
    )
    return RbAllocation(
        ue_rb=ue_rb.copy(),
        uav_rb=uav_rb,
        ue_serving=drop.ue_serving,
        uav_serving=drop.uav_serving,
        n_rbs=cfg.n_rbs,
    )


def allocate_uav_scheme3(
    drop: Drop,
    cfg: SystemConfig,
    layout: Layout,
    ue_rb: np.ndarray,
    rng: np.random.Generator,
) -> RbAllocation:
    """Terrestrial-ICIC UAV placement: uniform pick from the available set."""
    return _allocate_uavs_shared(drop, cfg, layout, ue_rb, rng, None)


def allocate_uav_scheme4(
    drop: Drop,
    cfg: SystemConfig,
    layout: Layout,
    ue_rb: np.ndarray,
    rng: np.random.Generator,
    direction: str,
) -> RbAllocation:
    """Sensing-assisted UAV placement: lowest sensed power wins, ties to
    the lowest RB index."""
    sensed = sensing_matrix(drop, ue_rb, cfg, direction)
    return _allocate_uavs_shared(drop, cfg, layout, ue_rb, rng, sensed)
