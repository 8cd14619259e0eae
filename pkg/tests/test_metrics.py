import math

import numpy as np
import pytest

from aerolink import (
    SystemConfig,
    downlink_sinr,
    generate_drop,
    plan_downlink_cic,
    sum_rates,
    uplink_sinr,
)
from aerolink.allocation import RbAllocation
from aerolink.cic import CicPlan, QfLink
from aerolink.metrics import _plain_rates


def bare_alloc(drop, ue_rb=None, uav_rb=None, n_rbs=10):
    return RbAllocation(
        ue_rb=np.asarray(ue_rb if ue_rb is not None else np.full(drop.n_ues, -1), dtype=np.int64),
        uav_rb=np.asarray(uav_rb if uav_rb is not None else np.full(drop.n_uavs, -1), dtype=np.int64),
        ue_serving=drop.ue_serving,
        uav_serving=drop.uav_serving,
        n_rbs=n_rbs,
    )


@pytest.fixture
def cfg():
    return SystemConfig(n_ues=(6,), master_seed=31)


@pytest.fixture
def drop(layout, cfg):
    return generate_drop(cfg, layout, 0, 6)


def test_noise_power_value(cfg):
    assert 10.0 * math.log10(cfg.noise_rb_mw) == pytest.approx(-111.44727494896694, rel=1e-12)


def test_isolated_uplink_sinr(layout, cfg, drop):
    k = int(drop.ue_serving[0])
    drop.ue_bs.amplitude[0, k] = math.sqrt(100.0 * cfg.noise_rb_mw / cfg.tx_power_mw)
    ue_rb = np.full(6, -1)
    ue_rb[0] = 4
    alloc = bare_alloc(drop, ue_rb=ue_rb)
    assert uplink_sinr(k, ("ue", 0), 4, drop, alloc, None, cfg) == pytest.approx(100.0, rel=1e-12)


def test_unscheduled_tx_rejected(layout, cfg, drop):
    alloc = bare_alloc(drop)
    with pytest.raises(ValueError):
        uplink_sinr(0, ("ue", 0), 3, drop, alloc, None, cfg)
    with pytest.raises(ValueError):
        downlink_sinr(("ue", 0), 3, drop, alloc, None, cfg)


def test_cancellation_equals_genie_deletion(layout, cfg, drop):
    """Post-cancellation SINR is bitwise the SINR with the UAV term deleted."""
    k = int(drop.ue_serving[0])
    if int(drop.uav_serving[0]) == k:
        drop.uav_serving[0] = (k + 3) % 37
    ue_rb = np.full(6, -1)
    ue_rb[0] = 2
    ue_rb[1] = 2
    if int(drop.ue_serving[1]) == k:
        drop.ue_serving[1] = (k + 5) % 37
    uav_rb = np.full(8, -1)
    uav_rb[0] = 2
    alloc = bare_alloc(drop, ue_rb=ue_rb, uav_rb=uav_rb)
    plan = CicPlan(direction="uplink", uplink_cancellations=frozenset({(k, 0)}))
    with_plan = uplink_sinr(k, ("ue", 0), 2, drop, alloc, plan, cfg)
    genie_alloc = bare_alloc(drop, ue_rb=ue_rb, uav_rb=np.full(8, -1))
    genie = uplink_sinr(k, ("ue", 0), 2, drop, genie_alloc, None, cfg)
    assert with_plan == genie
    assert with_plan > uplink_sinr(k, ("ue", 0), 2, drop, alloc, None, cfg)


def test_deleting_interference_never_decreases_sinr(layout, cfg):
    rng = np.random.default_rng(77)
    for trial in range(10):
        local = SystemConfig(n_ues=(30,), master_seed=int(rng.integers(1e6)))
        d = generate_drop(local, layout, 0, 30)
        ue_rb = np.full(30, -1)
        ue_rb[:12] = rng.integers(0, 10, size=12)
        ue_rb[0] = 5
        uav_rb = np.full(8, -1)
        uav_rb[0] = 5
        full = bare_alloc(d, ue_rb=ue_rb, uav_rb=uav_rb)
        k = int(d.ue_serving[0])
        base = uplink_sinr(k, ("ue", 0), 5, d, full, None, local)
        for drop_ue in range(1, 12):
            if ue_rb[drop_ue] != 5:
                continue
            reduced_rb = ue_rb.copy()
            reduced_rb[drop_ue] = -1
            reduced = bare_alloc(d, ue_rb=reduced_rb, uav_rb=uav_rb)
            assert uplink_sinr(k, ("ue", 0), 5, d, reduced, None, local) >= base


def test_vectorized_rates_match_per_user_reference(layout):
    cfg = SystemConfig(n_ues=(40,), master_seed=4)
    drop = generate_drop(cfg, layout, 0, 40)
    rng = np.random.default_rng(8)
    ue_rb = rng.integers(-1, 10, size=40)
    # Enforce one UE per (cell, rb).
    seen = set()
    for t in range(40):
        key = (int(drop.ue_serving[t]), int(ue_rb[t]))
        if ue_rb[t] >= 0 and key in seen:
            ue_rb[t] = -1
        seen.add(key)
    uav_rb = rng.permutation(10)[:8]
    alloc = bare_alloc(drop, ue_rb=ue_rb, uav_rb=uav_rb)
    for direction in ("uplink", "downlink"):
        ue_rates, uav_rates = _plain_rates(drop, alloc, cfg, direction)
        for t in range(40):
            if ue_rb[t] < 0:
                assert ue_rates[t] == 0.0
                continue
            k = int(drop.ue_serving[t])
            if direction == "uplink":
                sinr = uplink_sinr(k, ("ue", t), int(ue_rb[t]), drop, alloc, None, cfg)
            else:
                sinr = downlink_sinr(("ue", t), int(ue_rb[t]), drop, alloc, None, cfg)
            assert ue_rates[t] == pytest.approx(math.log2(1 + sinr), rel=1e-9)
        for u in range(8):
            s = int(drop.uav_serving[u])
            if direction == "uplink":
                sinr = uplink_sinr(s, ("uav", u), int(uav_rb[u]), drop, alloc, None, cfg)
            else:
                sinr = downlink_sinr(("uav", u), int(uav_rb[u]), drop, alloc, None, cfg)
            assert uav_rates[u] == pytest.approx(math.log2(1 + sinr), rel=1e-9)


class TestQuantizeForward:
    def build(self, layout, bits, cfg_kw=None):
        cfg = SystemConfig(n_ues=(3,), master_seed=12, qf_enabled=True, qf_bits=bits, **(cfg_kw or {}))
        drop = generate_drop(cfg, layout, 0, 3)
        drop.ue_serving[:] = [10, 14, 30]
        drop.uav_serving[0] = 0
        ue_rb = np.array([6, 6, 6])
        uav_rb = np.full(8, -1)
        uav_rb[0] = 6
        alloc = bare_alloc(drop, ue_rb=ue_rb, uav_rb=uav_rb)
        sigma = self.sigma_q(drop, cfg)
        plan = CicPlan(
            direction="uplink",
            qf_links=(QfLink(helper_cell=2, cochannel_cell=10, uav=0, sigma_q2_mw=sigma),),
        )
        return cfg, drop, alloc, plan

    @staticmethod
    def sigma_q(drop, cfg):
        p = cfg.tx_power_mw
        rx = p * abs(drop.uav_bs.amplitude[0, 2]) ** 2
        for t in range(3):
            rx += p * abs(drop.ue_bs.amplitude[t, 2]) ** 2
        rx += cfg.noise_rb_mw
        return rx / (2.0 ** (2 * cfg.qf_bits) - 1.0)

    def test_mmse_at_least_single_observation(self, layout):
        cfg, drop, alloc, plan = self.build(layout, bits=8)
        with_qf = uplink_sinr(10, ("ue", 0), 6, drop, alloc, plan, cfg)
        single = uplink_sinr(10, ("ue", 0), 6, drop, alloc, None, cfg)
        assert with_qf >= single - 1e-12

    def test_monotone_in_bits_toward_perfect_forwarding(self, layout):
        values = []
        for bits in (2, 4, 6, 8, 12, 16):
            cfg, drop, alloc, plan = self.build(layout, bits=bits)
            values.append(uplink_sinr(10, ("ue", 0), 6, drop, alloc, plan, cfg))
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
        cfg, drop, alloc, _ = self.build(layout, bits=16)
        perfect_plan = CicPlan(
            direction="uplink",
            qf_links=(QfLink(helper_cell=2, cochannel_cell=10, uav=0, sigma_q2_mw=0.0),),
        )
        perfect = uplink_sinr(10, ("ue", 0), 6, drop, alloc, perfect_plan, cfg)
        assert values[-1] <= perfect + 1e-12
        assert values[-1] == pytest.approx(perfect, rel=1e-6)


class TestDownlinkCic:
    def test_full_cancellation_reaches_noise_limited_sinr(self, layout):
        cfg = SystemConfig(n_ues=(1,), master_seed=3)
        drop = generate_drop(cfg, layout, 0, 1)
        drop.uav_serving[0] = 0
        drop.ue_serving[0] = 20
        # Helpers everywhere have channels at least as strong as the one
        # interferer, so the greedy zeroes the residual.
        drop.uav_bs.amplitude[0, :] = 0.001 + 0.0j
        drop.uav_bs.amplitude[0, 0] = 0.01 + 0.0j
        drop.uav_bs.amplitude[0, 20] = 0.0005 + 0.0j
        ue_rb = np.array([4])
        uav_rb = np.full(8, -1)
        uav_rb[0] = 4
        alloc = bare_alloc(drop, ue_rb=ue_rb, uav_rb=uav_rb)
        plan = plan_downlink_cic(drop, alloc, cfg, layout)
        assert not plan.is_empty
        sinr = downlink_sinr(("uav", 0), 4, drop, alloc, plan, cfg)
        expected = cfg.tx_power_mw * 0.01**2 / cfg.noise_rb_mw
        assert sinr == pytest.approx(expected, rel=1e-12)

    def test_uav_message_forwarding_doubles_amplitude(self, layout):
        """Unit channels, equal powers: desired power rises 4x while the
        lone co-channel interferer is erased."""
        cfg = SystemConfig(n_ues=(0,), master_seed=3, forward_uav_message=True)
        drop = generate_drop(cfg, layout, 0, 0)
        drop.uav_serving[0] = 0
        drop.uav_bs.amplitude[0, :] = 1.0 + 0.0j
        uav_rb = np.full(8, -1)
        uav_rb[0] = 4
        alloc = bare_alloc(drop, ue_rb=np.zeros((0,), dtype=np.int64), uav_rb=uav_rb)
        plan = plan_downlink_cic(drop, alloc, cfg, layout)
        assert 0 in plan.uav_message_helper
        no_help = downlink_sinr(("uav", 0), 4, drop, alloc, None, cfg)
        helped = downlink_sinr(("uav", 0), 4, drop, alloc, plan, cfg)
        assert helped == pytest.approx(4.0 * no_help, rel=1e-12)

    def test_ghost_helpers_leave_terrestrial_rates_untouched(self, layout):
        """honest_helper_accounting off: scheme-5 downlink terrestrial
        rates equal scheme-4 rates on the same allocation, exactly."""
        cfg = SystemConfig(n_ues=(80,), master_seed=9, honest_helper_accounting=False)
        drop = generate_drop(cfg, layout, 0, 80)
        from tests.test_cic import shared_alloc

        alloc = shared_alloc(drop, cfg, layout, "downlink")
        plan = plan_downlink_cic(drop, alloc, cfg, layout)
        assert not plan.is_empty
        with_plan = sum_rates(drop, alloc, plan, cfg, "downlink")
        without = sum_rates(drop, alloc, None, cfg, "downlink")
        assert np.array_equal(with_plan.ue_rates, without.ue_rates)
        assert with_plan.terrestrial_sum_rate == without.terrestrial_sum_rate
        assert with_plan.uav_sum_rate > without.uav_sum_rate

    def test_honest_helpers_change_terrestrial_rates(self, layout):
        cfg = SystemConfig(n_ues=(80,), master_seed=9, honest_helper_accounting=True)
        drop = generate_drop(cfg, layout, 0, 80)
        from tests.test_cic import shared_alloc

        alloc = shared_alloc(drop, cfg, layout, "downlink")
        plan = plan_downlink_cic(drop, alloc, cfg, layout)
        with_plan = sum_rates(drop, alloc, plan, cfg, "downlink")
        without = sum_rates(drop, alloc, None, cfg, "downlink")
        assert not np.array_equal(with_plan.ue_rates, without.ue_rates)


class TestSumRates:
    def test_two_user_example(self, layout, cfg, drop):
        k0 = int(drop.ue_serving[0])
        k1 = int(drop.ue_serving[1])
        if k1 == k0:
            drop.ue_serving[1] = k1 = (k0 + 1) % 37
        p, n = cfg.tx_power_mw, cfg.noise_rb_mw
        drop.ue_bs.amplitude[0, k0] = math.sqrt(3.0 * n / p)
        drop.ue_bs.amplitude[1, k1] = math.sqrt(15.0 * n / p)
        ue_rb = np.array([0, 3, -1, -1, -1, -1])  # separate RBs: no cross terms
        alloc = bare_alloc(drop, ue_rb=ue_rb)
        rec = sum_rates(drop, alloc, None, cfg, "uplink")
        assert rec.terrestrial_sum_rate == pytest.approx(6.0, rel=1e-9)
        assert rec.uav_sum_rate == 0.0

    def test_single_user_unit_sinr(self, layout, cfg, drop):
        k = int(drop.ue_serving[0])
        drop.ue_bs.amplitude[0, k] = math.sqrt(cfg.noise_rb_mw / cfg.tx_power_mw)
        ue_rb = np.full(6, -1)
        ue_rb[0] = 0
        rec = sum_rates(drop, bare_alloc(drop, ue_rb=ue_rb), None, cfg, "downlink")
        assert rec.terrestrial_sum_rate == pytest.approx(1.0, rel=1e-12)

    def test_network_sum_is_exact(self, layout):
        cfg = SystemConfig(n_ues=(50,), master_seed=21)
        drop = generate_drop(cfg, layout, 0, 50)
        from tests.test_cic import shared_alloc

        alloc = shared_alloc(drop, cfg, layout)
        for direction in ("uplink", "downlink"):
            rec = sum_rates(drop, alloc, None, cfg, direction)
            assert rec.network_sum_rate == rec.uav_sum_rate + rec.terrestrial_sum_rate
            assert rec.uav_sum_rate >= 0.0 and rec.terrestrial_sum_rate >= 0.0

    def test_unscheduled_ues_contribute_zero(self, layout, cfg, drop):
        rec = sum_rates(drop, bare_alloc(drop), None, cfg, "uplink")
        assert rec.terrestrial_sum_rate == 0.0
        assert (rec.ue_rates == 0.0).all()

    def test_isolated_link_invariant_under_rb_choice(self, layout, cfg, drop):
        k = int(drop.ue_serving[0])
        for rb in (0, 7):
            ue_rb = np.full(6, -1)
            ue_rb[0] = rb
            sinr = uplink_sinr(k, ("ue", 0), rb, drop, bare_alloc(drop, ue_rb=ue_rb), None, cfg)
            if rb == 0:
                first = sinr
        assert sinr == first

    def test_plan_direction_mismatch_rejected(self, layout, cfg, drop):
        plan = CicPlan(direction="uplink")
        with pytest.raises(ValueError):
            sum_rates(drop, bare_alloc(drop), plan, cfg, "downlink")
