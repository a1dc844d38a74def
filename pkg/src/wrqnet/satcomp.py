"""Satellite-vs-ground daily secret-key-rate comparison.

A sun-synchronous satellite in a given configuration (uplink/downlink, night
or day) delivers R_orb secret bits per channel use during an effective
zenith-pass transit time t_Q per day.  Ground networks deliver a per-use
flooding capacity around the clock.  Comparing daily totals in decibels
yields a critical inter-nodal separation (and nodal density) at which the
satellite starts to win.

The orbital per-use rates are published constants; t_Q is not, so it is
calibrated once from the repeater-chain parity separation (215 km for the
night-time downlink) and shared across configurations by default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

from .capacity import DEFAULT_FIBRE, FibreParams

__all__ = [
    "EarthGeom",
    "SatConfig",
    "NoCriticalPoint",
    "EARTH",
    "PRESETS",
    "CHAIN_PARITY_SEPARATION_KM",
    "slant_distance",
    "sat_daily_rate",
    "wrn_daily_rate",
    "chain_daily_rate",
    "daily_advantage",
    "calibrate_transit_time",
    "critical_separation",
    "critical_density",
]


@dataclass(frozen=True)
class EarthGeom:
    R_E: float = 6371.0  # km


EARTH = EarthGeom()

# Repeater-chain separation at which the night-time downlink achieves daily
# parity; anchors the default transit-time calibration.
CHAIN_PARITY_SEPARATION_KM = 215.0


@dataclass(frozen=True)
class SatConfig:
    """One satellite operating configuration.

    R_orb is the per-use secret-key rate of the satellite link, h the orbital
    altitude in km, t_Q the effective daily transit time in seconds.
    """

    label: str
    R_orb: float
    altitude_km: float
    t_Q: float

    def __post_init__(self) -> None:
        if self.R_orb <= 0:
            raise ValueError("R_orb must be positive")
        if self.altitude_km < 100:
            raise ValueError("orbital altitude must be at least 100 km")


class NoCriticalPoint(Exception):
    """The daily-rate advantage has no sign change in the search bracket."""


def slant_distance(h: float, theta: float, geom: EarthGeom = EARTH,
                   form: str = "standard") -> float:
    """Slant range from a ground station to a satellite at zenith angle theta.

    form="standard": sqrt(h^2 + 2*h*R_E + R_E^2 cos^2(theta)) - R_E cos(theta),
    which satisfies the zenith sanity check z(theta=0) = h.
    form="printed" keeps a 2*h*R_E^2 middle term for fidelity comparisons,
    even though it is dimensionally inconsistent and fails that check.
    """
    if h < 0:
        raise ValueError("altitude must be non-negative")
    if abs(theta) > math.pi / 2:
        raise ValueError("zenith angle must satisfy |theta| <= pi/2")
    c = math.cos(theta)
    if form == "standard":
        mid = 2.0 * h * geom.R_E
    elif form == "printed":
        mid = 2.0 * h * geom.R_E ** 2
    else:
        raise ValueError("form must be 'standard' or 'printed'")
    return math.sqrt(h * h + mid + (geom.R_E * c) ** 2) - geom.R_E * c


def chain_daily_rate(d_max: float, p: FibreParams = DEFAULT_FIBRE) -> float:
    """Daily secret-key bits of a repeater chain with maximum link d_max."""
    if d_max <= 0:
        raise ValueError("d_max must be positive")
    return -p.alpha * p.t_daily * math.log2(1.0 - 10.0 ** (-p.gamma * d_max))


def wrn_daily_rate(d_max: float, chars,
                   p: FibreParams = DEFAULT_FIBRE) -> float:
    """Daily secret-key bits of a weakly-regular network at link length d_max.

    This is the guaranteed flooding capacity obtained by inverting the
    maximum-link-length relation at d_max — i.e. delta times the single-edge
    capacity — times the number of channel uses per day.
    """
    return chars.delta * chain_daily_rate(d_max, p)


def sat_daily_rate(cfg: SatConfig, p: FibreParams = DEFAULT_FIBRE) -> float:
    """Daily secret-key bits delivered by one satellite pass per day."""
    if cfg.t_Q <= 0:
        raise ValueError("transit time must be positive")
    return p.alpha * cfg.t_Q * cfg.R_orb


def daily_advantage(ground: float, sat: float) -> float:
    """Ground-over-satellite daily-rate advantage, 10*log10(ground/sat) dB.

    Negative values mean the satellite wins.
    """
    if ground <= 0 or sat <= 0:
        raise ValueError("daily rates must be positive")
    return 10.0 * math.log10(ground / sat)


def calibrate_transit_time(cfg: SatConfig, d_star_chain: float,
                           p: FibreParams = DEFAULT_FIBRE) -> float:
    """Transit time making the chain's daily rate at d_star equal the
    satellite's: t_Q = t_daily * C(d_star) / R_orb."""
    if d_star_chain <= 0:
        raise ValueError("d_star_chain must be positive")
    c = -math.log2(1.0 - 10.0 ** (-p.gamma * d_star_chain))
    return p.t_daily * c / cfg.R_orb


def _make_presets() -> dict[str, SatConfig]:
    base = {
        "down-night": (3.066e-2, 530.0),
        "down-day": (3.041e-2, 530.0),
        "up-night": (4.244e-2, 103.0),
        "up-day": (2.737e-2, 103.0),
    }
    anchor = SatConfig("down-night", base["down-night"][0],
                       base["down-night"][1], t_Q=1.0)
    t_q = calibrate_transit_time(anchor, CHAIN_PARITY_SEPARATION_KM)
    return {label: SatConfig(label, r_orb, h, t_q)
            for label, (r_orb, h) in base.items()}


# All presets share the transit time calibrated on the night-time downlink;
# override via dataclasses.replace for per-configuration values.
PRESETS: dict[str, SatConfig] = _make_presets()


def critical_separation(cfg: SatConfig, p: FibreParams = DEFAULT_FIBRE,
                        chars=None, bracket: tuple[float, float] = (1.0, 2000.0),
                        tol: float = 1e-6) -> float:
    """Separation d* at which the ground network's daily rate matches the
    satellite's (chars=None compares against the repeater chain)."""
    sat = sat_daily_rate(cfg, p)

    def f(d: float) -> float:
        ground = (chain_daily_rate(d, p) if chars is None
                  else wrn_daily_rate(d, chars, p))
        if ground <= 0.0:  # capacity underflow at very long links
            return -math.inf
        return daily_advantage(ground, sat)

    lo, hi = bracket
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise NoCriticalPoint(
            f"no sign change of the daily advantage on [{lo}, {hi}] km")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def critical_density(chars, cfg: SatConfig,
                     p: FibreParams = DEFAULT_FIBRE) -> float:
    """Nodal density xi / d*^2 below which the satellite wins."""
    d_star = critical_separation(cfg, p, chars)
    return chars.xi / d_star ** 2
