import numpy as np
import pytest

from aerolink import kernels


def random_inputs(seed, n_ues=60, n_cells=37, n_rbs=10, max_deg=6):
    rng = np.random.default_rng(seed)
    neigh = np.full((n_cells, max_deg), -1, dtype=np.int64)
    ndeg = rng.integers(3, max_deg + 1, size=n_cells)
    for c in range(n_cells):
        others = rng.choice([x for x in range(n_cells) if x != c], size=ndeg[c], replace=False)
        neigh[c, : ndeg[c]] = others
    order = rng.permutation(n_ues).astype(np.int64)
    serving = rng.integers(0, n_cells, size=n_ues).astype(np.int64)
    forbidden = rng.random((n_cells, n_rbs)) < 0.15
    tie = rng.random(n_ues)
    return order, serving, neigh, ndeg.astype(np.int64), forbidden, tie, n_rbs


@pytest.mark.skipif(not kernels.NUMBA_ENABLED, reason="numba backend disabled")
def test_compiled_and_python_paths_agree():
    """The JIT-compiled kernels and their plain-Python sources produce
    bitwise-identical schedules."""
    for seed in range(8):
        args = random_inputs(seed)
        compiled = kernels.icic_assign(*args)
        plain = kernels.icic_assign_py(*args)
        assert np.array_equal(compiled, plain)

        rng = np.random.default_rng(seed + 100)
        occ = rng.random((37, 10)) < 0.4
        uav_order = rng.permutation(8).astype(np.int64)
        uav_serving = rng.integers(0, 37, size=8).astype(np.int64)
        sensed = rng.random((8, 10))
        picks = rng.random(8)
        for use_sensing in (False, True):
            a = kernels.uav_assign(
                uav_order, uav_serving, args[2], args[3], occ, sensed, use_sensing, picks, 10
            )
            b = kernels.uav_assign_py(
                uav_order, uav_serving, args[2], args[3], occ, sensed, use_sensing, picks, 10
            )
            assert np.array_equal(a, b)


def test_backend_name_matches_flag():
    assert kernels.backend_name() in ("numba", "python")
    assert kernels.backend_name() == ("numba" if kernels.NUMBA_ENABLED else "python")


def test_icic_respects_forbidden_and_uniqueness():
    args = random_inputs(3)
    order, serving, neigh, ndeg, forbidden, tie, n_rbs = args
    out = kernels.icic_assign(*args)
    used = set()
    for ue, rb in enumerate(out):
        if rb < 0:
            continue
        assert not forbidden[serving[ue], rb]
        key = (serving[ue], rb)
        assert key not in used
        used.add(key)
