"""Hexagonal multi-tier cell layout and distance/angle queries.

The layout is a pointy-top hexagonal grid: cell 0 sits at the origin and
tier t adds the 6t cells at hex distance t, enumerated counter-clockwise
starting from the +x axis.  ``cell_radius_m`` is the hex circumradius
(center to vertex), so the inter-site distance is sqrt(3) * radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, GeometryError

SQRT3 = math.sqrt(3.0)

# Axial steps walking one ring counter-clockwise from its +x corner.
_RING_STEPS = ((-1, 1), (-1, 0), (0, -1), (1, -1), (1, 0), (0, 1))


@dataclass(frozen=True)
class CellSite:
    id: int
    center: tuple[float, float]
    bs_height_m: float

    @property
    def xyz(self) -> tuple[float, float, float]:
        return (self.center[0], self.center[1], self.bs_height_m)


@dataclass
class Layout:
    """Immutable after construction; shared read-only by all workers."""

    cells: list[CellSite]
    tiers: int
    cell_radius_m: float
    neighbor_map: tuple[tuple[int, ...], ...]
    centers: np.ndarray = field(repr=False)  # (n_cells, 2)

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def bs_height_m(self) -> float:
        return self.cells[0].bs_height_m

    @property
    def inter_site_distance_m(self) -> float:
        return SQRT3 * self.cell_radius_m

    def neighbor_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Neighbor lists as a (n_cells, max_degree) int array padded with -1."""
        deg = np.array([len(nb) for nb in self.neighbor_map], dtype=np.int64)
        table = np.full((self.n_cells, max(int(deg.max()), 1)), -1, dtype=np.int64)
        for i, nb in enumerate(self.neighbor_map):
            table[i, : len(nb)] = nb
        return table, deg

    def contains(self, xy: np.ndarray) -> np.ndarray:
        """True for each 2-D point inside the union of the hex cells.

        A point belongs to the union iff the nearest lattice site (via cube
        rounding in axial coordinates) lies within ``tiers`` rings.
        """
        xy = np.atleast_2d(np.asarray(xy, dtype=float))
        d = self.inter_site_distance_m
        r_ax = 2.0 * xy[:, 1] / (SQRT3 * d)
        q_ax = xy[:, 0] / d - 0.5 * r_ax
        q, r = _cube_round(q_ax, r_ax)
        dist = (np.abs(q) + np.abs(r) + np.abs(q + r)) // 2
        return dist <= self.tiers


def _cube_round(q: np.ndarray, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    s = -q - r
    qi, ri, si = np.rint(q), np.rint(r), np.rint(s)
    dq, dr, ds = np.abs(qi - q), np.abs(ri - r), np.abs(si - s)
    fix_q = (dq > dr) & (dq > ds)
    fix_r = ~fix_q & (dr > ds)
    qi = np.where(fix_q, -ri - si, qi)
    ri = np.where(fix_r, -qi - si, ri)
    return qi.astype(np.int64), ri.astype(np.int64)


def _axial_to_xy(q: int, r: int, inter_site: float) -> tuple[float, float]:
    return (inter_site * (q + 0.5 * r), inter_site * (SQRT3 / 2.0) * r)


def build_layout(tiers: int, cell_radius_m: float, bs_height_m: float) -> Layout:
    """Build the hex grid: 1 + 3*t*(t+1) cells for t tiers (37 at t=3)."""
    if tiers < 0 or int(tiers) != tiers:
        raise ConfigurationError(f"tiers must be a non-negative integer, got {tiers}")
    if cell_radius_m <= 0:
        raise ConfigurationError(f"cell_radius_m must be positive, got {cell_radius_m}")
    if bs_height_m <= 0:
        raise ConfigurationError(f"bs_height_m must be positive, got {bs_height_m}")

    d = SQRT3 * cell_radius_m
    coords: list[tuple[int, int]] = [(0, 0)]
    for t in range(1, int(tiers) + 1):
        q, r = t, 0
        for step in _RING_STEPS:
            for _ in range(t):
                coords.append((q, r))
                q, r = q + step[0], r + step[1]

    cells = [
        CellSite(i, _axial_to_xy(q, r, d), float(bs_height_m))
        for i, (q, r) in enumerate(coords)
    ]
    centers = np.array([c.center for c in cells], dtype=float)

    # First-tier neighbors: inter-site distance within 1% of sqrt(3)*radius.
    cutoff = 1.01 * d
    neighbor_map = []
    for i in range(len(cells)):
        dist = np.hypot(centers[:, 0] - centers[i, 0], centers[:, 1] - centers[i, 1])
        nb = np.nonzero((dist > 0) & (dist <= cutoff))[0]
        neighbor_map.append(tuple(int(j) for j in nb))

    return Layout(cells, int(tiers), float(cell_radius_m), tuple(neighbor_map), centers)


def distance_3d(a, b) -> float:
    """Euclidean distance between two 3-D points."""
    return math.dist(tuple(a), tuple(b))


def elevation_angle_deg(bs: CellSite, node) -> float:
    """Elevation of ``node`` seen from the BS antenna, degrees in (-90, 90].

    Positive above the BS horizon; a node directly overhead returns +90.
    """
    x, y, z = float(node[0]), float(node[1]), float(node[2])
    d2d = math.hypot(x - bs.center[0], y - bs.center[1])
    dz = z - bs.bs_height_m
    if d2d == 0.0 and dz == 0.0:
        raise GeometryError("elevation angle undefined for coincident points")
    return math.degrees(math.atan2(dz, d2d))
