"""Per-link math: SINR, interference, rates, reliability, and power bounds.

All powers are linear milliwatts and all gains are linear power ratios.
Decibel conversion happens at configuration boundaries only.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional


class GroupcastRole(enum.IntEnum):
    """Transmitting role inside a platoon."""

    PLV = 0  # platoon leader vehicle
    PRV = 1  # platoon relay vehicle


@dataclass(frozen=True)
class LinkBudget:
    """One receiver's view of a transmission on a single subchannel."""

    tx_power_mw: float
    mean_gain: float
    interference_mw: float
    noise_mw: float

    def __post_init__(self) -> None:
        if self.tx_power_mw < 0.0:
            raise ValueError(f"tx power must be >= 0 mW, got {self.tx_power_mw}")
        if self.mean_gain < 0.0:
            raise ValueError(f"mean gain must be >= 0, got {self.mean_gain}")
        if self.interference_mw < 0.0:
            raise ValueError(f"interference must be >= 0 mW, got {self.interference_mw}")
        if self.noise_mw <= 0.0:
            raise ValueError(f"noise power must be > 0 mW, got {self.noise_mw}")


def groupcast_sinr(budget: LinkBudget) -> float:
    """Mean-gain SINR seen by one receiver."""
    return budget.tx_power_mw * budget.mean_gain / (budget.noise_mw + budget.interference_mw)


def ie_interference(sharers: Iterable[tuple[float, float]]) -> float:
    """Interference at a platoon receiver from the entity sharing its subchannel.

    ``sharers`` holds (tx_power_mw, gain_to_receiver) pairs; a subchannel is
    shared by at most one uplink entity, so more than one pair is an error.
    """
    sharers = list(sharers)
    if len(sharers) > 1:
        raise ValueError(f"subchannel shared by {len(sharers)} entities, at most 1 allowed")
    if not sharers:
        return 0.0
    power_mw, gain = sharers[0]
    return power_mw * gain


def groupcaster_interference(sharers: Iterable[tuple[float, float]]) -> float:
    """Interference at the base station from the groupcaster sharing an uplink.

    Same single-sharer rule as :func:`ie_interference`, seen from the other
    side of the sharing pair.
    """
    sharers = list(sharers)
    if len(sharers) > 1:
        raise ValueError(f"subchannel shared by {len(sharers)} groupcasters, at most 1 allowed")
    if not sharers:
        return 0.0
    power_mw, gain = sharers[0]
    return power_mw * gain


def rate_bps_per_hz(sinr: float) -> float:
    """Shannon spectral efficiency for a given linear SINR."""
    if sinr < 0.0:
        raise ValueError(f"SINR must be >= 0, got {sinr}")
    return math.log2(1.0 + sinr)


def qos_sinr_threshold(rate_bps_per_hz: float) -> float:
    """Minimum linear SINR that sustains the given rate."""
    if rate_bps_per_hz < 0.0:
        raise ValueError(f"rate must be >= 0, got {rate_bps_per_hz}")
    return 2.0 ** rate_bps_per_hz - 1.0


def success_probability(
    tx_power_mw: float,
    mean_gain: float,
    interference_mw: float,
    noise_mw: float,
    gamma_thr: float,
) -> float:
    """Probability that the faded SINR clears ``gamma_thr``.

    Fading is unit-mean exponential on the received power, which gives the
    closed form exp(-gamma_thr * (noise + interference) / (power * gain)).
    A silent transmitter or a dead link never succeeds.
    """
    if tx_power_mw <= 0.0 or mean_gain <= 0.0:
        return 0.0
    return math.exp(-gamma_thr * (noise_mw + interference_mw) / (tx_power_mw * mean_gain))


def power_upper_bound(
    ie_power_mw: float,
    ie_to_bs_gain: float,
    sharer_to_bs_gain: float,
    noise_mw: float,
    delta_thr: float,
    p_max_mw: float,
) -> Optional[float]:
    """Largest groupcast power that keeps the sharing entity's uplink at QoS.

    Solves P * h_share <= P_ie * h_ie / delta_thr - noise for P and clips to
    the hardware limit. Returns None when even a silent groupcaster could not
    protect the uplink (the pairing is infeasible, not an error).
    """
    if sharer_to_bs_gain <= 0.0:
        raise ValueError(f"sharer gain must be > 0, got {sharer_to_bs_gain}")
    raw = (ie_power_mw * ie_to_bs_gain / delta_thr - noise_mw) / sharer_to_bs_gain
    if raw <= 0.0:
        return None
    return min(p_max_mw, raw)
