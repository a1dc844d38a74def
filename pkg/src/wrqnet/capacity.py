"""Closed-form capacity, link-length and nodal-density relations.

Single lossy fibres of length d (km) and loss rate gamma (per km) have
transmissivity eta = 10**(-gamma*d) and a two-way assisted secret-key
capacity of -log2(1 - eta) bits per channel use.  Combining this bound with
the cut-growth quantity delta of a weakly-regular architecture yields
threshold single-edge capacities, maximum link lengths, and minimum nodal
densities guaranteeing a target end-to-end (flooding) capacity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "FibreParams",
    "InfiniteCapacity",
    "DegenerateThreshold",
    "WAXMAN_ZETA",
    "WAXMAN_RHO_CRIT",
    "transmissivity",
    "plob_capacity",
    "inverse_plob_length",
    "threshold_capacity",
    "neighborhood_threshold_capacity",
    "max_link_length",
    "neighborhood_max_link_length",
    "min_nodal_density",
    "critical_density",
    "waxman_expected_capacity",
    "flooding_bounds",
    "with_plob_capacities",
]

# Regression constants for the expected flooding capacity of random
# (Waxman-type) networks as a function of nodal density.
WAXMAN_ZETA = 4358.0
WAXMAN_RHO_CRIT = 4.25e-4


@dataclass(frozen=True)
class FibreParams:
    """Fibre-channel parameters.

    gamma    : loss exponent per km (0.02 for standard optical fibre)
    alpha    : channel uses per second (source clock rate)
    t_daily  : seconds per day
    """

    gamma: float = 0.02
    alpha: float = 1.0e7
    t_daily: float = 8.64e4

    def __post_init__(self) -> None:
        if self.gamma <= 0 or self.alpha <= 0 or self.t_daily <= 0:
            raise ValueError("all fibre parameters must be strictly positive")


DEFAULT_FIBRE = FibreParams()


class InfiniteCapacity(Exception):
    """Raised for a zero-length channel (unit transmissivity)."""


class DegenerateThreshold(Exception):
    """Raised when 1/(k-1) < 1/delta and the stricter user-edge threshold
    would be non-positive (the constraint is vacuous rather than clamped)."""


def transmissivity(d: float, p: FibreParams = DEFAULT_FIBRE) -> float:
    """Transmissivity eta = 10**(-gamma*d) of a fibre of length d km."""
    if d < 0:
        raise ValueError("distance must be non-negative")
    return 10.0 ** (-p.gamma * d)


def plob_capacity(d: float, p: FibreParams = DEFAULT_FIBRE) -> float:
    """Secret-key capacity -log2(1 - 10**(-gamma*d)) of a length-d fibre."""
    if d < 0:
        raise ValueError("distance must be non-negative")
    if d == 0:
        raise InfiniteCapacity("zero-length channel has unbounded capacity")
    eta = 10.0 ** (-p.gamma * d)
    # for very long fibres eta underflows to 0 and the capacity to 0
    return -math.log2(1.0 - eta) if eta > 0 else 0.0


def inverse_plob_length(c: float, p: FibreParams = DEFAULT_FIBRE) -> float:
    """Fibre length whose capacity equals c bits/use (inverse of plob_capacity)."""
    if c <= 0:
        raise ValueError("capacity must be positive")
    return -math.log10(1.0 - 2.0 ** (-c)) / p.gamma


def threshold_capacity(target: float, delta: int) -> float:
    """Single-edge threshold C_min = C_target / delta for all network edges."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    return target / delta


def neighborhood_threshold_capacity(target: float, k: int, delta: int) -> float:
    """Stricter user-edge threshold (1/(k-1) - 1/delta) * C_target."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if delta <= 0:
        raise ValueError("delta must be positive")
    coeff = 1.0 / (k - 1) - 1.0 / delta
    if coeff < 0:
        raise DegenerateThreshold(
            f"1/(k-1) < 1/delta for k={k}, delta={delta}: the user-edge "
            "threshold is vacuous")
    return coeff * target


def max_link_length(target: float, delta: int,
                    p: FibreParams = DEFAULT_FIBRE) -> float:
    """Maximum bulk fibre length guaranteeing the flooding bounds.

    d_max = -(1/gamma) * log10(1 - 2**(-C_target/delta)).
    """
    return inverse_plob_length(threshold_capacity(target, delta), p)


def neighborhood_max_link_length(target: float, k: int, delta: int,
                                 p: FibreParams = DEFAULT_FIBRE) -> float:
    """Maximum user-edge fibre length guaranteeing flooding optimality."""
    c = neighborhood_threshold_capacity(target, k, delta)
    if c == 0:
        return math.inf
    return inverse_plob_length(c, p)


def min_nodal_density(target: float, delta: int, xi: float,
                      p: FibreParams = DEFAULT_FIBRE) -> float:
    """Minimum nodal density xi * gamma**2 * log10(1 - 2**(-C/delta))**-2.

    Equals xi / d_max**2 identically.
    """
    if target <= 0 or xi <= 0:
        raise ValueError("target capacity and xi must be positive")
    log_term = math.log10(1.0 - 2.0 ** (-target / delta))
    return xi * p.gamma ** 2 / log_term ** 2


def critical_density(chars, p: FibreParams = DEFAULT_FIBRE) -> float:
    """Nodal density achieving 1 bit per network use end-to-end."""
    return min_nodal_density(1.0, chars.delta, chars.xi, p)


def waxman_expected_capacity(rho: float) -> float:
    """Expected flooding capacity zeta*(rho - rho_crit) - 1 of a random net.

    Negative values are returned as-is; callers clamp for display.
    """
    if rho < 0:
        raise ValueError("density must be non-negative")
    return WAXMAN_ZETA * (rho - WAXMAN_RHO_CRIT) - 1.0


def flooding_bounds(target: float, chars) -> tuple[float, float]:
    """Guaranteed flooding-capacity interval [omega * C, C]."""
    return (float(chars.omega) * target, target)


def with_plob_capacities(net, p: FibreParams = DEFAULT_FIBRE):
    """Copy of a network with capacities derived from edge lengths.

    Edges with an explicit capacity keep it; null capacities are filled in
    from the lossy-fibre bound at the edge's length.
    """
    caps = [e.capacity if e.capacity is not None else plob_capacity(e.length_km, p)
            for e in net.edges]
    return net.with_capacities(caps)
