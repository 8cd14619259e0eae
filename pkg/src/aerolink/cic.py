"""Cooperative interference cancellation (scheme 5).

Uplink: for every UAV, the two co-channel cells nearest its serving site
receive the decoded UAV message over backhaul and subtract it before
decoding their own UE (decode-and-forward); optionally one further cell
is served by a quantize-and-forward observation from a nearby idle BS.

Downlink: every co-channel cell forwards its UE's message to its two
nearest idle BSs, which transmit phase-opposed copies so the interference
cancels at the UAV; helper transmit power is split by a deterministic
greedy.  Optionally the UAV's serving BS shares the UAV message with the
nearest idle BS for constructive combining.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

import numpy as np

from .allocation import RbAllocation
from .config import SystemConfig
from .errors import PlanningError
from .geometry import Layout
from .scenario import Drop

RESIDUAL_EPS = 1e-12


@dataclass(frozen=True)
class QfLink:
    helper_cell: int
    cochannel_cell: int
    uav: int
    sigma_q2_mw: float


@dataclass
class CicPlan:
    """Bookkeeping produced by the planners and consumed by the metrics.

    ``helper_weights`` maps (helper cell, component id) to the complex
    transmit amplitude in sqrt(mW); component ids are ("t", uav, cell) for
    forwarded terrestrial messages and ("u", uav) for the UAV message.
    """

    direction: str
    uplink_cancellations: frozenset[tuple[int, int]] = frozenset()
    qf_links: tuple[QfLink, ...] = ()
    downlink_helpers: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    helper_weights: dict[tuple[int, Hashable], complex] = field(default_factory=dict)
    uav_message_helper: dict[int, tuple[int, complex]] = field(default_factory=dict)

    @property
    def is_empty(self) -> bool:
        return not (
            self.uplink_cancellations
            or self.qf_links
            or self.helper_weights
            or self.uav_message_helper
        )

    def helper_spent_power(self) -> dict[int, float]:
        spent: dict[int, float] = {}
        for (helper, _comp), w in self.helper_weights.items():
            spent[helper] = spent.get(helper, 0.0) + abs(w) ** 2
        return spent


def empty_plan(direction: str) -> CicPlan:
    return CicPlan(direction=direction)


def _site_distance(layout: Layout, a: int, b: int) -> float:
    dx = layout.centers[a, 0] - layout.centers[b, 0]
    dy = layout.centers[a, 1] - layout.centers[b, 1]
    return math.hypot(dx, dy)


def _nearest(layout: Layout, anchor: int, pool, count: int) -> list[int]:
    """The ``count`` pool cells nearest the anchor site, ties to lower id."""
    ranked = sorted(pool, key=lambda c: (_site_distance(layout, anchor, c), c))
    return ranked[:count]


def allocate_helper_power(
    residuals: Sequence[tuple[Hashable, complex]],
    helpers: Mapping[int, tuple[complex, float, set]],
) -> dict[tuple[int, Hashable], complex]:
    """Greedy helper transmit-amplitude allocation.

    Repeatedly take the component with the largest residual magnitude
    (tie: lowest id), spend the strongest-channel helper with budget left
    (tie: lowest id) to oppose the residual phasor, either zeroing the
    residual or exhausting the helper.  Components whose helpers are all
    exhausted freeze.  Deterministic; every helper ends within budget.
    """
    res: dict[Hashable, complex] = {}
    for comp, amp in residuals:
        if comp in res:
            raise PlanningError(f"duplicate component id {comp!r}")
        res[comp] = complex(amp)
    serves: dict[Hashable, list[int]] = {comp: [] for comp in res}
    budgets: dict[int, float] = {}
    for b, (gain, budget, comps) in helpers.items():
        if budget <= 0:
            raise PlanningError(f"helper {b!r} has non-positive budget {budget}")
        budgets[b] = float(budget)
        for comp in comps:
            if comp not in res:
                raise PlanningError(f"helper {b!r} references unknown component {comp!r}")
            serves[comp].append(b)

    weights: dict[tuple[int, Hashable], complex] = {}

    def headroom(b: int, comp: Hashable) -> float:
        """Largest extra amplitude helper b can put on comp within budget.

        Budgeted on accumulated per-component magnitudes: repeat touches of
        one (helper, component) pair add colinearly, so the spendable
        amplitude is sqrt(budget - power on other components) minus the
        amplitude already on this one.
        """
        spent_other = sum(
            abs(w) ** 2 for (bb, cc), w in weights.items() if bb == b and cc != comp
        )
        room = max(budgets[b] - spent_other, 0.0)
        return math.sqrt(room) - abs(weights.get((b, comp), 0.0))

    frozen: set[Hashable] = set()
    while True:
        live = [
            (abs(res[comp]), comp)
            for comp in res
            if comp not in frozen and abs(res[comp]) >= RESIDUAL_EPS
        ]
        if not live:
            break
        mag, comp = max(live, key=lambda item: (item[0], _neg_key(item[1])))
        usable = [
            b for b in serves[comp]
            if abs(helpers[b][0]) > 0.0 and headroom(b, comp) > RESIDUAL_EPS
        ]
        if not usable:
            frozen.add(comp)
            continue
        b = max(usable, key=lambda h: (abs(helpers[h][0]), -h))
        g = helpers[b][0]
        unit = res[comp] / mag
        delta_a = min(headroom(b, comp), mag / abs(g))
        delta_w = -unit * abs(g) * delta_a / g
        key = (b, comp)
        weights[key] = weights.get(key, 0.0) + delta_w
        res[comp] = res[comp] + g * delta_w
    return weights


class _NegKey:
    """Order-reversing wrapper so max() breaks ties toward the lowest id."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __lt__(self, other):
        return other.value < self.value

    def __eq__(self, other):
        return self.value == other.value


def _neg_key(value):
    return _NegKey(value)


def _cochannel_cells(drop: Drop, alloc: RbAllocation, rb: int, exclude: int) -> list[int]:
    cells = {int(drop.ue_serving[t]) for t in alloc.ues_on_rb(rb)}
    cells.discard(exclude)
    return sorted(cells)


def _idle_cells(drop: Drop, alloc: RbAllocation, rb: int, n_cells: int, exclude: int) -> list[int]:
    busy = {int(drop.ue_serving[t]) for t in alloc.ues_on_rb(rb)}
    busy.add(exclude)
    return [c for c in range(n_cells) if c not in busy]


def plan_uplink_cic(drop: Drop, alloc: RbAllocation, cfg: SystemConfig, layout: Layout) -> CicPlan:
    """Decode-and-forward to the two nearest co-channel BSs per UAV, plus
    one quantize-and-forward link per UAV when enabled."""
    cancellations: set[tuple[int, int]] = set()
    qf_links: list[QfLink] = []
    noise_mw = cfg.noise_rb_mw
    p_mw = cfg.tx_power_mw
    for u in range(drop.n_uavs):
        rb = int(alloc.uav_rb[u])
        if rb < 0:
            continue
        serving = int(drop.uav_serving[u])
        cochannel = _cochannel_cells(drop, alloc, rb, serving)
        if not cochannel:
            continue
        ranked = sorted(cochannel, key=lambda c: (_site_distance(layout, serving, c), c))
        for cell in ranked[:2]:
            cancellations.add((cell, u))
        if cfg.qf_enabled and len(ranked) > 2:
            target = ranked[2]
            pool = _idle_cells(drop, alloc, rb, layout.n_cells, serving)
            if pool:
                helper = _nearest(layout, target, pool, 1)[0]
                rx_total = p_mw * float(
                    np.abs(drop.uav_bs.amplitude[u, helper]) ** 2
                )
                for t in alloc.ues_on_rb(rb):
                    rx_total += p_mw * float(np.abs(drop.ue_bs.amplitude[t, helper]) ** 2)
                rx_total += noise_mw
                sigma_q2 = rx_total / (2.0 ** (2 * cfg.qf_bits) - 1.0)
                qf_links.append(QfLink(helper, target, u, sigma_q2))
    return CicPlan(
        direction="uplink",
        uplink_cancellations=frozenset(cancellations),
        qf_links=tuple(qf_links),
    )


def plan_downlink_cic(drop: Drop, alloc: RbAllocation, cfg: SystemConfig, layout: Layout) -> CicPlan:
    """Destructive helper transmission toward the UAV with greedy power
    splitting; optional constructive forwarding of the UAV message."""
    plan = CicPlan(direction="downlink")
    sqrt_p = math.sqrt(cfg.tx_power_mw)
    for u in range(drop.n_uavs):
        rb = int(alloc.uav_rb[u])
        if rb < 0:
            continue
        serving = int(drop.uav_serving[u])
        cochannel = _cochannel_cells(drop, alloc, rb, serving)
        idle = _idle_cells(drop, alloc, rb, layout.n_cells, serving)
        if not idle:
            continue  # no helpers: rates reduce to scheme 4 exactly
        residuals: list[tuple[Hashable, complex]] = []
        helper_comps: dict[int, set] = {}
        for cell in cochannel:
            comp = ("t", u, cell)
            residuals.append((comp, sqrt_p * complex(drop.uav_bs.amplitude[u, cell])))
            chosen = _nearest(layout, cell, idle, 2)
            plan.downlink_helpers[(u, cell)] = tuple(chosen)
            for b in chosen:
                helper_comps.setdefault(b, set()).add(comp)
        uav_comp = None
        if cfg.forward_uav_message:
            uav_comp = ("u", u)
            b_su = _nearest(layout, serving, idle, 1)[0]
            residuals.append(
                (uav_comp, -sqrt_p * complex(drop.uav_bs.amplitude[u, serving]))
            )
            helper_comps.setdefault(b_su, set()).add(uav_comp)
        if not residuals:
            continue
        helpers = {
            b: (complex(drop.uav_bs.amplitude[u, b]), cfg.tx_power_mw, comps)
            for b, comps in helper_comps.items()
        }
        weights = allocate_helper_power(residuals, helpers)
        for (b, comp), w in weights.items():
            if comp == uav_comp:
                prev = plan.uav_message_helper.get(u)
                amp = w if prev is None else prev[1] + w
                plan.uav_message_helper[u] = (b, amp)
            else:
                plan.helper_weights[(b, comp)] = plan.helper_weights.get((b, comp), 0.0) + w
    return plan
