"""Large-scale and small-scale channel models for every link class.

Ground links (BS <-> terrestrial UE) follow the 3GPP UMa model (TR 38.901
style); links with an aerial endpoint (BS <-> UAV, UE <-> UAV) follow the
UMa aerial-vehicle extension (TR 36.777 Table B style).  These exact
expressions are the normative formulas of this simulator.

Conventions: distances in meters, frequency in GHz, gains in dB, powers in
mW.  The composite amplitude is the linear-amplitude product of path loss,
shadowing, antenna gain and small-scale fading, so that
|composite|^2 = 10**((-PL - SH + G)/10) * |small|^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .geometry import CellSite

SPEED_OF_LIGHT = 3.0e8  # m/s, per 3GPP evaluation convention


class LinkClass(Enum):
    BS_TO_UE = "bs_to_ue"
    BS_TO_UAV = "bs_to_uav"
    UE_TO_UAV = "ue_to_uav"

    @property
    def is_aerial(self) -> bool:
        return self is not LinkClass.BS_TO_UE

    @property
    def has_bs_endpoint(self) -> bool:
        return self is not LinkClass.UE_TO_UAV


@dataclass(frozen=True)
class LinkGain:
    is_los: bool
    path_loss_db: float
    shadowing_db: float
    antenna_gain_db: float
    small_scale: complex
    composite_amplitude: complex

    @property
    def large_scale_db(self) -> float:
        return -self.path_loss_db - self.shadowing_db + self.antenna_gain_db


def los_probability(link_class: LinkClass, d2d_m, h_ut_m: float):
    """Probability that the link is line-of-sight.

    Aerial endpoints above 100 m are always LoS; between 22.5 m and 100 m
    the aerial-vehicle UMa curve applies with p1 = 4300*log10(h) - 3800 and
    d1 = max(460*log10(h) - 700, 18).  At or below 22.5 m the ground UMa
    curve applies (certain LoS within 18 m).
    """
    d2d = np.asarray(d2d_m, dtype=float)
    h = float(h_ut_m)
    if link_class.is_aerial and h > 100.0:
        out = np.ones_like(d2d)
    elif link_class.is_aerial and h > 22.5:
        p1 = 4300.0 * math.log10(h) - 3800.0
        d1 = max(460.0 * math.log10(h) - 700.0, 18.0)
        out = _los_curve(d2d, d1, p1)
    else:
        out = _los_curve(d2d, 18.0, 63.0)
    return out if out.ndim else float(out)


def _los_curve(d2d: np.ndarray, d1: float, p1: float) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.where(d2d > 0, d1 / np.maximum(d2d, 1e-300), 1.0)
        p = frac + np.exp(-d2d / p1) * (1.0 - frac)
    return np.where(d2d <= d1, 1.0, np.minimum(p, 1.0))


def breakpoint_distance_m(h_bs_m: float, h_ut_m: float, fc_ghz: float) -> float:
    """Dual-slope breakpoint with 1 m effective environment height."""
    return 4.0 * (h_bs_m - 1.0) * (h_ut_m - 1.0) * fc_ghz * 1e9 / SPEED_OF_LIGHT


def path_loss_db(
    link_class: LinkClass,
    is_los,
    d3d_m,
    d2d_m,
    h_ut_m: float,
    fc_ghz: float,
    h_bs_m: float = 25.0,
):
    """Path loss in dB for the given link class and LoS state.

    Links with an aerial endpoint use the aerial UMa expressions with the
    aerial endpoint's altitude as h; UE <-> UAV links reuse them as well.
    """
    d3d = np.asarray(d3d_m, dtype=float)
    d2d = np.asarray(d2d_m, dtype=float)
    los = np.asarray(is_los, dtype=bool)
    lg_d3d = np.log10(d3d)
    if link_class.is_aerial:
        pl_los = 28.0 + 22.0 * lg_d3d + 20.0 * math.log10(fc_ghz)
        pl_nlos = (
            -17.5
            + (46.0 - 7.0 * math.log10(h_ut_m)) * lg_d3d
            + 20.0 * math.log10(40.0 * math.pi * fc_ghz / 3.0)
        )
    else:
        pl_los = _terrestrial_los(d3d, d2d, h_ut_m, fc_ghz, h_bs_m)
        nlos_prime = (
            13.54
            + 39.08 * lg_d3d
            + 20.0 * math.log10(fc_ghz)
            - 0.6 * (h_ut_m - 1.5)
        )
        pl_nlos = np.maximum(pl_los, nlos_prime)
    out = np.where(los, pl_los, pl_nlos)
    return out if out.ndim else float(out)


def _terrestrial_los(d3d, d2d, h_ut_m, fc_ghz, h_bs_m):
    d_bp = breakpoint_distance_m(h_bs_m, h_ut_m, fc_ghz)
    pl1 = 28.0 + 22.0 * np.log10(d3d) + 20.0 * math.log10(fc_ghz)
    pl2 = (
        28.0
        + 40.0 * np.log10(d3d)
        + 20.0 * math.log10(fc_ghz)
        - 9.0 * math.log10(d_bp**2 + (h_bs_m - h_ut_m) ** 2)
    )
    return np.where(d2d <= d_bp, pl1, pl2)


def shadowing_sigma_db(link_class: LinkClass, is_los, h_ut_m: float):
    """Lognormal shadowing standard deviation in dB."""
    los = np.asarray(is_los, dtype=bool)
    if link_class.is_aerial and h_ut_m > 22.5:
        sigma_los = 4.64 * math.exp(-0.0066 * h_ut_m)
    else:
        sigma_los = 4.0
    out = np.where(los, sigma_los, 6.0)
    return out if out.ndim else float(out)


def antenna_gain_db(
    elevation_deg,
    max_gain_dbi: float = 8.0,
    downtilt_deg: float = 10.0,
    beamwidth_deg: float = 10.0,
    sla_db: float = 20.0,
):
    """Vertical BS antenna pattern, omnidirectional in azimuth.

    Boresight sits at elevation -downtilt; attenuation is quadratic in the
    off-boresight angle and saturates at sla_db.
    """
    phi = np.asarray(elevation_deg, dtype=float)
    att = np.minimum(12.0 * ((phi + downtilt_deg) / beamwidth_deg) ** 2, sla_db)
    out = max_gain_dbi - att
    return out if out.ndim else float(out)


def rayleigh_fading(rng: np.random.Generator, shape=()) -> np.ndarray:
    """Unit-variance circularly-symmetric complex Gaussian samples."""
    z = rng.standard_normal(shape + (2,))
    return (z[..., 0] + 1j * z[..., 1]) / math.sqrt(2.0)


def sample_link(
    link_class: LinkClass,
    tx,
    rx,
    rng: np.random.Generator,
    bs_site: CellSite | None = None,
    fc_ghz: float = 2.0,
    max_gain_dbi: float = 8.0,
    downtilt_deg: float = 10.0,
    beamwidth_deg: float = 10.0,
    sla_db: float = 20.0,
) -> LinkGain:
    """Draw one link realization: LoS state, shadowing, fading, composite.

    Aerial LoS links fade in phase only (|small| = 1); all other links are
    Rayleigh.  The antenna gain applies only when ``bs_site`` marks one
    endpoint as a BS.  Draw order is fixed (LoS, shadowing, fading) so a
    positioned stream reproduces the same LinkGain.
    """
    tx = np.asarray(tx, dtype=float)
    rx = np.asarray(rx, dtype=float)
    d2d = math.hypot(tx[0] - rx[0], tx[1] - rx[1])
    d3d = math.dist(tx, rx)
    if bs_site is not None:
        # The non-BS endpoint is whichever point is not the antenna location.
        node = rx if tuple(tx) == bs_site.xyz else tx
    else:
        node = None
    if link_class is LinkClass.BS_TO_UE:
        h_ut = node[2] if node is not None else min(tx[2], rx[2])
    else:
        h_ut = max(tx[2], rx[2])  # aerial endpoint altitude

    is_los = bool(rng.random() < los_probability(link_class, d2d, h_ut))
    h_bs = bs_site.bs_height_m if bs_site is not None else 25.0
    pl = float(path_loss_db(link_class, is_los, d3d, d2d, h_ut, fc_ghz, h_bs))
    sh = float(shadowing_sigma_db(link_class, is_los, h_ut)) * float(rng.standard_normal())

    if node is not None:
        elev = math.degrees(
            math.atan2(node[2] - bs_site.bs_height_m,
                       math.hypot(node[0] - bs_site.center[0], node[1] - bs_site.center[1]))
        )
        gain = float(antenna_gain_db(elev, max_gain_dbi, downtilt_deg, beamwidth_deg, sla_db))
    else:
        gain = 0.0

    if link_class.is_aerial and is_los:
        small = complex(np.exp(1j * rng.uniform(0.0, 2.0 * math.pi)))
    else:
        small = complex(rayleigh_fading(rng))

    amp = 10.0 ** ((-pl - sh + gain) / 20.0) * small
    return LinkGain(is_los, pl, sh, gain, small, amp)
