"""Benchmark the numba-compiled allocation kernels against the plain
Python/numpy fallback (the path selected by AEROLINK_NUMBA=0).

Both paths run the same source, so outputs are checked for bitwise
equality before timing.  Run:

    python benchmarks/bench_backends.py
"""

import time

import numpy as np

from aerolink import SystemConfig, build_layout, generate_drop, run_sweep
from aerolink import kernels
from aerolink.allocation import allocate_terrestrial_icic
from aerolink.rng import Stream, substream


def kernel_inputs(n_ues=200, seed=3):
    layout = build_layout(3, 800.0, 25.0)
    cfg = SystemConfig(master_seed=seed, n_ues=(n_ues,))
    drop = generate_drop(cfg, layout, 0, n_ues)
    neigh, ndeg = layout.neighbor_arrays()
    rng = substream(seed, 0, Stream.ALLOC_TERRESTRIAL)
    order = rng.permutation(n_ues).astype(np.int64)
    tie = rng.random(n_ues)
    forbidden = np.zeros((37, 10), dtype=bool)
    icic_args = (order, drop.ue_serving, neigh, ndeg, forbidden, tie, 10)

    ue_rb = allocate_terrestrial_icic(drop, cfg, layout, None, substream(seed, 0, Stream.ALLOC_TERRESTRIAL))
    occ = np.zeros((37, 10), dtype=bool)
    sched = ue_rb >= 0
    occ[drop.ue_serving[sched], ue_rb[sched]] = True
    urng = substream(seed, 0, Stream.ALLOC_UAV_SHARED)
    uav_order = urng.permutation(8).astype(np.int64)
    picks = urng.random(8)
    sensed = np.random.default_rng(seed).random((8, 10))
    uav_args = (uav_order, drop.uav_serving, neigh, ndeg, occ, sensed, True, picks, 10)
    return icic_args, uav_args


def time_fn(fn, args, repeats):
    fn(*args)  # warm-up (and JIT compile on the numba path)
    start = time.perf_counter()
    for _ in range(repeats):
        fn(*args)
    return (time.perf_counter() - start) / repeats


def main():
    print(f"active backend: {kernels.backend_name()}")
    icic_args, uav_args = kernel_inputs()

    if kernels.NUMBA_ENABLED:
        assert np.array_equal(kernels.icic_assign(*icic_args), kernels.icic_assign_py(*icic_args))
        assert np.array_equal(kernels.uav_assign(*uav_args), kernels.uav_assign_py(*uav_args))
        print("outputs: numba and python paths agree bitwise")

    rows = []
    for name, fast, slow, args, reps in (
        ("terrestrial ICIC greedy (200 UEs)", kernels.icic_assign, kernels.icic_assign_py, icic_args, 200),
        ("UAV RB selection (8 UAVs)", kernels.uav_assign, kernels.uav_assign_py, uav_args, 2000),
    ):
        t_py = time_fn(slow, args, max(reps // 20, 5))
        if kernels.NUMBA_ENABLED:
            t_jit = time_fn(fast, args, reps)
            rows.append((name, t_py, t_jit, t_py / t_jit))
        else:
            rows.append((name, t_py, None, None))

    print(f"\n{'kernel':<38} {'python':>12} {'numba':>12} {'speedup':>9}")
    for name, t_py, t_jit, speed in rows:
        jit = f"{t_jit * 1e6:9.1f} us" if t_jit else "          --"
        spd = f"{speed:8.1f}x" if speed else "       --"
        print(f"{name:<38} {t_py * 1e6:9.1f} us {jit} {spd}")

    cfg = SystemConfig(n_ues=(40, 120), n_drops=60, master_seed=11)
    start = time.perf_counter()
    run_sweep(cfg, workers=1)
    elapsed = time.perf_counter() - start
    print(
        f"\nend-to-end sweep (2 UE counts x 60 drops, all schemes, both "
        f"directions, {kernels.backend_name()} backend): {elapsed:.1f}s"
    )
    print("re-run with AEROLINK_NUMBA=0 to time the pure-python fallback end to end")


if __name__ == "__main__":
    main()
