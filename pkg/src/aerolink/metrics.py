"""Per-link SINRs and sum spectral efficiencies.

The fast path evaluates all plain (no-cancellation) SINRs with vectorized
power sums; users touched by a cooperative-cancellation plan are
re-evaluated coherently through the per-user reference functions, which
are also the oracle surface for the property tests.  Rates are Shannon
spectral efficiencies, log2(1 + SINR) in bps/Hz.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .allocation import RbAllocation
from .cic import CicPlan
from .config import SystemConfig
from .scenario import Drop


@dataclass
class MetricsRecord:
    uav_sum_rate: float
    terrestrial_sum_rate: float
    network_sum_rate: float
    uav_rates: np.ndarray
    ue_rates: np.ndarray


def _uplink_interferers(alloc: RbAllocation, rb: int, skip_ue: int | None, skip_uav: int | None):
    """Transmitters on an RB in canonical order: UEs ascending, then UAV."""
    for t in alloc.ues_on_rb(rb):
        if skip_ue is None or t != skip_ue:
            yield ("ue", int(t))
    v = alloc.uav_on_rb(rb)
    if v is not None and v != skip_uav:
        yield ("uav", v)


def uplink_sinr(
    receiver_cell: int,
    tx: tuple[str, int],
    rb: int,
    drop: Drop,
    alloc: RbAllocation,
    plan: CicPlan | None,
    cfg: SystemConfig,
) -> float:
    """SINR of one uplink transmission at its serving BS.

    Cancellations listed in the plan delete the matching UAV term; a
    quantize-and-forward link targeting this receiver switches to the
    two-observation MMSE combiner over (own antenna, forwarded signal).
    """
    kind, idx = tx
    p = cfg.tx_power_mw
    noise = cfg.noise_rb_mw
    if kind == "ue":
        if alloc.ue_rb[idx] != rb or alloc.ue_serving[idx] != receiver_cell:
            raise ValueError(f"UE {idx} is not scheduled on RB {rb} at cell {receiver_cell}")
        desired = p * float(np.abs(drop.ue_bs.amplitude[idx, receiver_cell]) ** 2)
        skip_ue, skip_uav = idx, None
    elif kind == "uav":
        if alloc.uav_rb[idx] != rb or alloc.uav_serving[idx] != receiver_cell:
            raise ValueError(f"UAV {idx} is not scheduled on RB {rb} at cell {receiver_cell}")
        desired = p * float(np.abs(drop.uav_bs.amplitude[idx, receiver_cell]) ** 2)
        skip_ue, skip_uav = None, idx
    else:
        raise ValueError(f"unknown transmitter kind {kind!r}")

    if plan is not None and kind == "ue":
        for qf in plan.qf_links:
            if qf.cochannel_cell == receiver_cell and alloc.uav_rb[qf.uav] == rb:
                return _qf_mmse_sinr(receiver_cell, idx, rb, qf, drop, alloc, cfg)

    cancelled = plan.uplink_cancellations if plan is not None else frozenset()
    interference = 0.0
    for okind, oidx in _uplink_interferers(alloc, rb, skip_ue, skip_uav):
        if okind == "uav" and kind == "ue" and (receiver_cell, oidx) in cancelled:
            continue
        table = drop.ue_bs if okind == "ue" else drop.uav_bs
        interference += p * float(np.abs(table.amplitude[oidx, receiver_cell]) ** 2)
    return desired / (interference + noise)


def _qf_mmse_sinr(
    receiver_cell: int,
    ue: int,
    rb: int,
    qf,
    drop: Drop,
    alloc: RbAllocation,
    cfg: SystemConfig,
) -> float:
    """MMSE SINR over the receiver's own antenna and the helper's
    quantized observation; all co-channel transmitters enter the
    interference covariance."""
    p = cfg.tx_power_mw
    noise = cfg.noise_rb_mw
    sqrt_p = np.sqrt(p)
    cells = (receiver_cell, qf.helper_cell)
    h = sqrt_p * np.array([drop.ue_bs.amplitude[ue, c] for c in cells])
    r_cov = np.diag([noise, noise + qf.sigma_q2_mw]).astype(complex)
    for okind, oidx in _uplink_interferers(alloc, rb, ue, None):
        table = drop.ue_bs if okind == "ue" else drop.uav_bs
        v = sqrt_p * np.array([table.amplitude[oidx, c] for c in cells])
        r_cov += np.outer(v, v.conj())
    return float(np.real(h.conj() @ np.linalg.solve(r_cov, h)))


def _downlink_messages(drop: Drop, alloc: RbAllocation, rb: int):
    """Messages in flight on an RB: ("ue", t, origin cell) then ("uav", v)."""
    for t in alloc.ues_on_rb(rb):
        yield ("ue", int(t), int(alloc.ue_serving[t]))
    v = alloc.uav_on_rb(rb)
    if v is not None:
        yield ("uav", v, int(alloc.uav_serving[v]))


def downlink_sinr(
    receiver: tuple[str, int],
    rb: int,
    drop: Drop,
    alloc: RbAllocation,
    plan: CicPlan | None,
    cfg: SystemConfig,
) -> float:
    """Coherent downlink SINR at a UE or UAV receiver.

    Every message on the RB is assembled as a complex sum of the origin
    BS's transmission and any helper transmissions carrying the same
    message.  Helper emissions reach terrestrial receivers only when
    honest_helper_accounting is on; the UAV always sees them.
    """
    kind, idx = receiver
    p = cfg.tx_power_mw
    sqrt_p = np.sqrt(p)
    noise = cfg.noise_rb_mw
    if kind == "ue":
        if alloc.ue_rb[idx] != rb:
            raise ValueError(f"UE {idx} is not scheduled on RB {rb}")
        chan = drop.ue_bs.amplitude[idx]
        helpers_visible = plan is not None and cfg.honest_helper_accounting
    elif kind == "uav":
        if alloc.uav_rb[idx] != rb:
            raise ValueError(f"UAV {idx} is not on RB {rb}")
        chan = drop.uav_bs.amplitude[idx]
        helpers_visible = plan is not None
    else:
        raise ValueError(f"unknown receiver kind {kind!r}")

    uav_on_rb = alloc.uav_on_rb(rb)
    by_component: dict = {}
    if helpers_visible:
        for (b, comp), w in plan.helper_weights.items():
            by_component.setdefault(comp, []).append((b, w))
    desired = None
    interference = 0.0
    for message in _downlink_messages(drop, alloc, rb):
        amp = sqrt_p * complex(chan[message[2]])
        if helpers_visible and uav_on_rb is not None:
            if message[0] == "ue":
                for b, w in by_component.get(("t", uav_on_rb, message[2]), ()):
                    amp += complex(chan[b]) * w
            else:
                entry = plan.uav_message_helper.get(message[1])
                if entry is not None:
                    amp += complex(chan[entry[0]]) * entry[1]
        power = abs(amp) ** 2
        if message[0] == kind and message[1] == idx:
            desired = power
        else:
            interference += power
    assert desired is not None
    return desired / (interference + noise)


def _one_hot(assignment: np.ndarray, n_rbs: int) -> np.ndarray:
    out = np.zeros((assignment.shape[0], n_rbs))
    sched = assignment >= 0
    out[np.nonzero(sched)[0], assignment[sched]] = 1.0
    return out


def _plain_rates(drop: Drop, alloc: RbAllocation, cfg: SystemConfig, direction: str):
    """Vectorized no-plan SINRs for every scheduled UE and UAV."""
    p = cfg.tx_power_mw
    noise = cfg.noise_rb_mw
    pu = p * drop.ue_bs.power_gain
    pv = p * drop.uav_bs.power_gain
    n_cells = pu.shape[1]
    ue_hot = _one_hot(alloc.ue_rb, cfg.n_rbs)
    uav_hot = _one_hot(alloc.uav_rb, cfg.n_rbs)

    if direction == "uplink":
        # Total received power per (cell, rb) from every transmitter on it.
        total = pu.T @ ue_hot + pv.T @ uav_hot
    else:
        # Transmissions per (cell, rb): one per scheduled UE, one per UAV.
        tx_count = np.zeros((n_cells, cfg.n_rbs))
        sched = alloc.ue_rb >= 0
        np.add.at(tx_count, (alloc.ue_serving[sched], alloc.ue_rb[sched]), 1.0)
        uav_live = alloc.uav_rb >= 0
        np.add.at(tx_count, (alloc.uav_serving[uav_live], alloc.uav_rb[uav_live]), 1.0)
        total_ue = pu @ tx_count
        total_uav = pv @ tx_count

    ue_rates = np.zeros(drop.n_ues)
    ue_idx = np.nonzero(alloc.ue_rb >= 0)[0]
    if ue_idx.size:
        k, r = alloc.ue_serving[ue_idx], alloc.ue_rb[ue_idx]
        desired = pu[ue_idx, k]
        received = total[k, r] if direction == "uplink" else total_ue[ue_idx, r]
        ue_rates[ue_idx] = np.log2(1.0 + desired / (received - desired + noise))
    uav_rates = np.zeros(drop.n_uavs)
    uav_idx = np.nonzero(alloc.uav_rb >= 0)[0]
    if uav_idx.size:
        s, r = alloc.uav_serving[uav_idx], alloc.uav_rb[uav_idx]
        desired = pv[uav_idx, s]
        received = total[s, r] if direction == "uplink" else total_uav[uav_idx, r]
        uav_rates[uav_idx] = np.log2(1.0 + desired / (received - desired + noise))
    return ue_rates, uav_rates


def sum_rates(
    drop: Drop,
    alloc: RbAllocation,
    plan: CicPlan | None,
    cfg: SystemConfig,
    direction: str,
) -> MetricsRecord:
    """Sum spectral efficiencies for one (drop, allocation, plan, direction)."""
    if plan is not None and plan.direction != direction:
        raise ValueError(f"plan direction {plan.direction!r} does not match {direction!r}")
    ue_rates, uav_rates = _plain_rates(drop, alloc, cfg, direction)

    if plan is not None and not plan.is_empty:
        if direction == "uplink":
            affected = {
                (cell, int(alloc.uav_rb[u]))
                for cell, u in plan.uplink_cancellations
            } | {
                (qf.cochannel_cell, int(alloc.uav_rb[qf.uav]))
                for qf in plan.qf_links
            }
            schedule = alloc.terrestrial
            for cell, rb in affected:
                t = schedule.get((cell, rb))
                if t is not None:
                    sinr = uplink_sinr(cell, ("ue", t), rb, drop, alloc, plan, cfg)
                    ue_rates[t] = np.log2(1.0 + sinr)
        else:
            helped_uavs = {comp[1] for (_b, comp) in plan.helper_weights}
            helped_uavs |= set(plan.uav_message_helper)
            for u in sorted(helped_uavs):
                rb = int(alloc.uav_rb[u])
                sinr = downlink_sinr(("uav", u), rb, drop, alloc, plan, cfg)
                uav_rates[u] = np.log2(1.0 + sinr)
            if cfg.honest_helper_accounting:
                helped_rbs = {int(alloc.uav_rb[u]) for u in helped_uavs}
                for rb in sorted(helped_rbs):
                    for t in alloc.ues_on_rb(rb):
                        sinr = downlink_sinr(("ue", int(t)), rb, drop, alloc, plan, cfg)
                        ue_rates[t] = np.log2(1.0 + sinr)

    uav_sum = float(np.sum(uav_rates))
    terr_sum = float(np.sum(ue_rates))
    return MetricsRecord(
        uav_sum_rate=uav_sum,
        terrestrial_sum_rate=terr_sum,
        network_sum_rate=uav_sum + terr_sum,
        uav_rates=uav_rates,
        ue_rates=ue_rates,
    )
