"""Monte Carlo drop generation: node placement, association, link tables.

A Drop is a pure function of (config, layout, drop_index): every random
quantity comes from a purpose-tagged substream of
(master_seed, drop_index).  UE-indexed draws are laid out so that the
first k UEs of a drop are identical for any UE count >= k, and all
UAV-side draws are independent of the UE count entirely.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import channel
from .channel import LinkClass
from .config import SystemConfig
from .geometry import Layout
from .rng import Stream, substream


@dataclass
class LinkTable:
    """Per-(node, endpoint) channel realizations for one link class.

    Arrays are (n_nodes, n_endpoints); endpoints are BS sites except for
    the UE <-> UAV table where they are UAVs and the antenna gain is zero.
    """

    link_class: LinkClass
    is_los: np.ndarray
    path_loss_db: np.ndarray
    shadowing_db: np.ndarray
    antenna_gain_db: np.ndarray
    small_scale: np.ndarray
    amplitude: np.ndarray = field(repr=False)

    @property
    def large_scale_db(self) -> np.ndarray:
        return -self.path_loss_db - self.shadowing_db + self.antenna_gain_db

    @property
    def power_gain(self) -> np.ndarray:
        """Linear power gain including fading, |amplitude|^2."""
        return np.abs(self.amplitude) ** 2


@dataclass
class Drop:
    """One static snapshot: positions, associations, frozen link gains."""

    drop_index: int
    ue_xy: np.ndarray
    uav_xy: np.ndarray
    ue_serving: np.ndarray
    uav_serving: np.ndarray
    ue_bs: LinkTable
    uav_bs: LinkTable
    ue_uav: LinkTable

    @property
    def n_ues(self) -> int:
        return self.ue_xy.shape[0]

    @property
    def n_uavs(self) -> int:
        return self.uav_xy.shape[0]


def sample_positions(n: int, layout: Layout, rng: np.random.Generator) -> np.ndarray:
    """Uniform points over the union of the hex cells, one at a time.

    Sequential per-point rejection keeps the stream prefix-stable: drawing
    n+1 points reproduces the first n exactly.
    """
    half = layout.tiers * layout.inter_site_distance_m + layout.cell_radius_m
    out = np.empty((n, 2))
    for i in range(n):
        while True:
            p = rng.uniform(-half, half, size=2)
            if layout.contains(p)[0]:
                out[i] = p
                break
    return out


def _sample_bs_table(
    xy: np.ndarray,
    node_height: float,
    link_class: LinkClass,
    layout: Layout,
    cfg: SystemConfig,
    rng_los: np.random.Generator,
    rng_shadow: np.random.Generator,
    rng_fade: np.random.Generator,
    rng_phase: np.random.Generator | None,
) -> LinkTable:
    n = xy.shape[0]
    centers = layout.centers
    d2d = np.hypot(xy[:, 0:1] - centers[None, :, 0], xy[:, 1:2] - centers[None, :, 1])
    dz = node_height - cfg.bs_height_m
    d3d = np.hypot(d2d, dz)

    p_los = channel.los_probability(link_class, d2d, node_height)
    is_los = rng_los.random((n, layout.n_cells)) < p_los
    pl = channel.path_loss_db(link_class, is_los, d3d, d2d, node_height, cfg.fc_ghz, cfg.bs_height_m)
    sigma = channel.shadowing_sigma_db(link_class, is_los, node_height)
    sh = sigma * rng_shadow.standard_normal((n, layout.n_cells))

    elev = np.degrees(np.arctan2(dz, d2d))
    gain = channel.antenna_gain_db(
        elev, cfg.ant_gain_max_dbi, cfg.downtilt_deg, cfg.ant_beamwidth_deg, cfg.ant_sla_db
    )

    fade = channel.rayleigh_fading(rng_fade, (n, layout.n_cells))
    if rng_phase is not None:
        phase = np.exp(1j * rng_phase.uniform(0.0, 2.0 * np.pi, (n, layout.n_cells)))
        small = np.where(is_los, phase, fade)
    else:
        small = fade
    amp = 10.0 ** ((-pl - sh + gain) / 20.0) * small
    return LinkTable(link_class, is_los, pl, sh, gain, small, amp)


def _sample_ue_uav_table(
    ue_xy: np.ndarray,
    uav_xy: np.ndarray,
    cfg: SystemConfig,
    rng_los: np.random.Generator,
    rng_shadow: np.random.Generator,
    rng_fade: np.random.Generator,
    rng_phase: np.random.Generator,
) -> LinkTable:
    n, m = ue_xy.shape[0], uav_xy.shape[0]
    d2d = np.hypot(ue_xy[:, 0:1] - uav_xy[None, :, 0], ue_xy[:, 1:2] - uav_xy[None, :, 1])
    d3d = np.hypot(d2d, cfg.uav_altitude_m - cfg.ue_height_m)
    h = cfg.uav_altitude_m

    p_los = channel.los_probability(LinkClass.UE_TO_UAV, d2d, h)
    is_los = rng_los.random((n, m)) < p_los
    pl = channel.path_loss_db(LinkClass.UE_TO_UAV, is_los, d3d, d2d, h, cfg.fc_ghz)
    sigma = channel.shadowing_sigma_db(LinkClass.UE_TO_UAV, is_los, h)
    sh = sigma * rng_shadow.standard_normal((n, m))
    gain = np.zeros((n, m))

    fade = channel.rayleigh_fading(rng_fade, (n, m))
    phase = np.exp(1j * rng_phase.uniform(0.0, 2.0 * np.pi, (n, m)))
    small = np.where(is_los, phase, fade)
    amp = 10.0 ** ((-pl - sh + gain) / 20.0) * small
    return LinkTable(LinkClass.UE_TO_UAV, is_los, pl, sh, gain, small, amp)


def association_metric_db(table: LinkTable, cfg: SystemConfig) -> np.ndarray:
    """Per-(node, BS) association metric: path loss + shadowing, optionally
    net of antenna gain.  Fast fading is excluded."""
    metric = table.path_loss_db + table.shadowing_db
    if cfg.association_includes_antenna:
        metric = metric - table.antenna_gain_db
    return metric


def associate_all(table: LinkTable, cfg: SystemConfig) -> np.ndarray:
    """Serving cell per node: argmin of the metric, ties to the lowest id."""
    return np.argmin(association_metric_db(table, cfg), axis=1).astype(np.int64)


def associate(node_index: int, table: LinkTable, cfg: SystemConfig) -> int:
    return int(associate_all(table, cfg)[node_index])


def generate_drop(cfg: SystemConfig, layout: Layout, drop_index: int, n_ues: int) -> Drop:
    """Build one snapshot with n_ues terrestrial UEs and cfg.n_uavs UAVs."""

    def rng(tag: Stream) -> np.random.Generator:
        return substream(cfg.master_seed, drop_index, tag)

    ue_xy = sample_positions(n_ues, layout, rng(Stream.UE_POSITION))
    uav_xy = sample_positions(cfg.n_uavs, layout, rng(Stream.UAV_POSITION))

    ue_bs = _sample_bs_table(
        ue_xy, cfg.ue_height_m, LinkClass.BS_TO_UE, layout, cfg,
        rng(Stream.UE_BS_LOS), rng(Stream.UE_BS_SHADOW), rng(Stream.UE_BS_FADE), None,
    )
    uav_bs = _sample_bs_table(
        uav_xy, cfg.uav_altitude_m, LinkClass.BS_TO_UAV, layout, cfg,
        rng(Stream.UAV_BS_LOS), rng(Stream.UAV_BS_SHADOW), rng(Stream.UAV_BS_FADE),
        rng(Stream.UAV_BS_PHASE),
    )
    ue_uav = _sample_ue_uav_table(
        ue_xy, uav_xy, cfg,
        rng(Stream.UE_UAV_LOS), rng(Stream.UE_UAV_SHADOW), rng(Stream.UE_UAV_FADE),
        rng(Stream.UE_UAV_PHASE),
    )

    return Drop(
        drop_index=drop_index,
        ue_xy=ue_xy,
        uav_xy=uav_xy,
        ue_serving=associate_all(ue_bs, cfg),
        uav_serving=associate_all(uav_bs, cfg),
        ue_bs=ue_bs,
        uav_bs=uav_bs,
        ue_uav=ue_uav,
    )
