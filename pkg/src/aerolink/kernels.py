"""Hot allocation kernels, JIT-compiled with numba when available.

Set ``AEROLINK_NUMBA=0`` to run the same functions as plain Python/numpy
(useful for debugging and as the reference path for the backend
benchmark).  Both paths execute the identical source, so results agree
bit for bit.  Random choices are injected as pre-drawn uniforms, keeping
the kernels pure.
"""

from __future__ import annotations

import os

import numpy as np


def _resolve_backend() -> bool:
    flag = os.environ.get("AEROLINK_NUMBA", "auto").strip().lower()
    if flag in ("0", "off", "false", "no"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        if flag in ("1", "on", "true", "yes"):
            raise
        return False
    return True


NUMBA_ENABLED = _resolve_backend()

if NUMBA_ENABLED:
    from numba import njit

    def _jit(fn):
        return njit(cache=True)(fn)
else:

    def _jit(fn):
        return fn


def _icic_assign_impl(order, serving, neigh, ndeg, forbidden, tie, n_rbs):
    """Greedy terrestrial RB assignment with first-tier conflict avoidance.

    Each UE (in the given order) takes an RB unused in its serving cell and
    not forbidden there, preferring RBs with the fewest scheduled users in
    first-tier neighbor cells; ties break uniformly via the UE's pre-drawn
    uniform.  Returns -1 for UEs with no admissible RB.
    """
    n_cells = forbidden.shape[0]
    occupied = np.zeros((n_cells, n_rbs), np.bool_)
    out = np.full(order.shape[0], -1, np.int64)
    cand = np.empty(n_rbs, np.int64)
    conf = np.empty(n_rbs, np.int64)
    for ii in range(order.shape[0]):
        ue = order[ii]
        c = serving[ue]
        m = 0
        best = n_cells + 1
        for r in range(n_rbs):
            if occupied[c, r] or forbidden[c, r]:
                continue
            cnt = 0
            for jj in range(ndeg[c]):
                if occupied[neigh[c, jj], r]:
                    cnt += 1
            cand[m] = r
            conf[m] = cnt
            m += 1
            if cnt < best:
                best = cnt
        if m == 0:
            continue
        k = 0
        for jj in range(m):
            if conf[jj] == best:
                k += 1
        pick = int(tie[ue] * k)
        if pick >= k:
            pick = k - 1
        seen = 0
        chosen = -1
        for jj in range(m):
            if conf[jj] == best:
                if seen == pick:
                    chosen = cand[jj]
                    break
                seen += 1
        out[ue] = chosen
        occupied[c, chosen] = True
    return out


def _uav_assign_impl(order, serving, neigh, ndeg, occupied, sensed, use_sensing, pick, n_rbs):
    """Sequential UAV RB selection over a fixed terrestrial allocation.

    Primary choice: RBs unused in the serving cell and its first tier and
    not held by an earlier UAV (uniform pick, or lowest sensed power when
    ``use_sensing``).  Fallback stage 1 relaxes only the neighbor
    condition (minimize first-tier co-channel users); stage 2, reached
    when the serving cell itself has every RB busy, additionally allows
    own-cell reuse and counts the serving cell in the conflicts.
    """
    m_uavs = order.shape[0]
    taken = np.zeros(n_rbs, np.bool_)
    out = np.full(m_uavs, -1, np.int64)
    cand = np.empty(n_rbs, np.int64)
    conf = np.empty(n_rbs, np.int64)
    for ii in range(m_uavs):
        u = order[ii]
        c = serving[u]
        m = 0
        for r in range(n_rbs):
            if taken[r] or occupied[c, r]:
                continue
            clean = True
            for jj in range(ndeg[c]):
                if occupied[neigh[c, jj], r]:
                    clean = False
                    break
            if clean:
                cand[m] = r
                m += 1
        if m > 0:
            if use_sensing:
                chosen = cand[0]
                for jj in range(1, m):
                    if sensed[u, cand[jj]] < sensed[u, chosen]:
                        chosen = cand[jj]
            else:
                idx = int(pick[u] * m)
                if idx >= m:
                    idx = m - 1
                chosen = cand[idx]
            out[u] = chosen
            taken[chosen] = True
            continue
        # Fallback stage 1: own cell still free on the RB.
        m = 0
        best = n_rbs * 64
        for r in range(n_rbs):
            if taken[r] or occupied[c, r]:
                continue
            cnt = 0
            for jj in range(ndeg[c]):
                if occupied[neigh[c, jj], r]:
                    cnt += 1
            cand[m] = r
            conf[m] = cnt
            m += 1
            if cnt < best:
                best = cnt
        if m == 0:
            # Fallback stage 2: any RB not held by another UAV; the serving
            # cell's own user counts as a conflict too.
            best = n_rbs * 64
            for r in range(n_rbs):
                if taken[r]:
                    continue
                cnt = 0
                if occupied[c, r]:
                    cnt += 1
                for jj in range(ndeg[c]):
                    if occupied[neigh[c, jj], r]:
                        cnt += 1
                cand[m] = r
                conf[m] = cnt
                m += 1
                if cnt < best:
                    best = cnt
        if m == 0:
            # Every RB held by another UAV; unreachable when n_uavs <= n_rbs.
            continue
        k = 0
        for jj in range(m):
            if conf[jj] == best:
                k += 1
        if use_sensing:
            chosen = -1
            for jj in range(m):
                if conf[jj] == best:
                    if chosen < 0 or sensed[u, cand[jj]] < sensed[u, chosen]:
                        chosen = cand[jj]
        else:
            idx = int(pick[u] * k)
            if idx >= k:
                idx = k - 1
            seen = 0
            chosen = -1
            for jj in range(m):
                if conf[jj] == best:
                    if seen == idx:
                        chosen = cand[jj]
                        break
                    seen += 1
        out[u] = chosen
        taken[chosen] = True
    return out


icic_assign = _jit(_icic_assign_impl)
uav_assign = _jit(_uav_assign_impl)

# Plain-Python references for the backend benchmark and equivalence tests.
icic_assign_py = _icic_assign_impl
uav_assign_py = _uav_assign_impl


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "python"
