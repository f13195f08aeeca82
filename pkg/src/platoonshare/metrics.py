"""Evaluation metrics computed from a scenario plus a committed allocation.

All four metrics use mean channel gains; fading never enters here. A
groupcast hop is only as fast as its weakest intended receiver, so hop
rates come from the minimum SINR across the hop's receiver segment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import LinkGains
from .link import GroupcastRole, rate_bps_per_hz
from .matching import Allocation, CandidateMatch, UNPAIRED
from .scenario import Scenario

# Relative slack when testing entity SINR against the QoS threshold: the
# greedy allocator commits powers that land exactly on the threshold.
_QOS_REL_TOL = 1e-9


@dataclass(frozen=True)
class MetricsReport:
    """One evaluation row: latency, entity QoS, channel use, efficiency."""

    avg_latency_ms: float
    qos_satisfaction_rate: float
    allocated_subchannels: int
    spectral_efficiency: float
    coverage_failures: int

    def __post_init__(self):
        problems = []
        if not 0.0 <= self.qos_satisfaction_rate <= 1.0:
            problems.append(f"qos_satisfaction_rate {self.qos_satisfaction_rate} not in [0, 1]")
        if self.allocated_subchannels < 0:
            problems.append("allocated_subchannels negative")
        if self.coverage_failures < 0:
            problems.append("coverage_failures negative")
        if self.avg_latency_ms < 0:
            problems.append("latency negative")
        if self.spectral_efficiency < 0:
            problems.append("spectral_efficiency negative")
        if problems:
            raise ValueError("invalid metrics: " + "; ".join(problems))


def _receiver_segment(match: CandidateMatch, boundary: int, size: int) -> range:
    """Member indices a match must deliver to, given the relay boundary."""
    if match.role == int(GroupcastRole.PLV):
        return range(1, size) if boundary == -1 else range(1, boundary + 1)
    return range(boundary + 1, size)


def _worst_receiver_sinr(
    scenario: Scenario, gains: LinkGains, match: CandidateMatch, boundary: int
) -> Optional[float]:
    """Minimum mean-gain SINR over the match's receiver segment.

    Returns None for an empty segment (an idle relay hop has nobody to
    reach, which is different from reaching somebody at zero rate).
    """
    m = match.platoon
    size = scenario.platoons[m].size
    segment = _receiver_segment(match, boundary, size)
    if len(segment) == 0:
        return None
    receivers = np.asarray(segment)
    tx = 0 if match.role == int(GroupcastRole.PLV) else boundary
    signal = match.power_mw * gains.intra_platoon[m][tx, receivers]
    if match.ie == UNPAIRED:
        interference = 0.0
    else:
        interference = gains.ie_power_mw[match.ie] * gains.ie_to_vehicle[m][match.ie, receivers]
    return float((signal / (scenario.params.noise_mw + interference)).min())


def platoon_latency(
    scenario: Scenario, allocation: Allocation, *, gains: Optional[LinkGains] = None
) -> float:
    """Mean store-and-forward delivery time across served platoons, in ms.

    A relayed platoon pays both hops sequentially; the head must be fully
    received before the relay re-groupcasts it. Platoons whose selected
    relay never got a subchannel cannot finish delivery and count as
    infinite; platoons with no allocation at all are excluded from the mean.
    """
    if gains is None:
        gains = LinkGains.from_scenario(scenario)
    params = scenario.params
    bits = params.packet_size_bytes * 8
    bandwidth = params.subchannel_bandwidth_hz

    by_platoon: dict[int, dict[int, CandidateMatch]] = {}
    for match in allocation.matches:
        by_platoon.setdefault(match.platoon, {})[match.role] = match

    latencies = []
    for m, hops in sorted(by_platoon.items()):
        plv = hops.get(int(GroupcastRole.PLV))
        if plv is None:
            continue
        boundary = allocation.prv_indices[m]
        total_ms = 0.0
        for role in (int(GroupcastRole.PLV), int(GroupcastRole.PRV)):
            if role == int(GroupcastRole.PRV) and boundary == -1:
                break
            match = hops.get(role)
            if match is None:
                # Relay selected but never given a subchannel: the tail
                # members never receive the message.
                total_ms = math.inf
                break
            worst = _worst_receiver_sinr(scenario, gains, match, boundary)
            if worst is None:
                continue
            rate = rate_bps_per_hz(worst)
            if rate == 0.0:
                total_ms = math.inf
                break
            total_ms += bits / (rate * bandwidth) * 1e3
        latencies.append(total_ms)
    if not latencies:
        raise ValueError("allocation serves no platoon; latency undefined")
    return float(np.mean(latencies))


def qos_satisfaction(
    scenario: Scenario, allocation: Allocation, *, gains: Optional[LinkGains] = None
) -> float:
    """Fraction of sharing entities whose uplink SINR meets its threshold.

    Only entities that actually share a subchannel enter the denominator;
    an allocation with no sharing at all scores 1.0.
    """
    if gains is None:
        gains = LinkGains.from_scenario(scenario)
    params = scenario.params
    sharers = [match for match in allocation.matches if match.ie != UNPAIRED]
    if not sharers:
        return 1.0
    satisfied = 0
    for match in sharers:
        tx = 0 if match.role == int(GroupcastRole.PLV) else allocation.prv_indices[match.platoon]
        h_tx = gains.vehicle_to_bs[match.platoon][tx]
        sinr = (
            gains.ie_power_mw[match.ie]
            * gains.ie_to_bs[match.ie]
            / (params.noise_mw + match.power_mw * h_tx)
        )
        if sinr >= params.delta_thr * (1.0 - _QOS_REL_TOL):
            satisfied += 1
    return satisfied / len(sharers)


def subchannel_count(allocation: Allocation) -> int:
    """Subchannels held by groupcasters; every match occupies exactly one."""
    return len(allocation.matches)


def spectral_efficiency(
    scenario: Scenario, allocation: Allocation, *, gains: Optional[LinkGains] = None
) -> float:
    """Mean worst-receiver rate in bps/Hz across allocated subchannels.

    An idle hop (empty receiver segment) wastes its subchannel and
    contributes zero. Empty allocations score zero.
    """
    if not allocation.matches:
        return 0.0
    if gains is None:
        gains = LinkGains.from_scenario(scenario)
    rates = []
    for match in allocation.matches:
        worst = _worst_receiver_sinr(scenario, gains, match, allocation.prv_indices[match.platoon])
        rates.append(0.0 if worst is None else rate_bps_per_hz(worst))
    return float(np.mean(rates))


def compute_metrics(
    scenario: Scenario, allocation: Allocation, *, gains: Optional[LinkGains] = None
) -> MetricsReport:
    """Evaluate all metrics at once, reusing one gain table."""
    if gains is None:
        gains = LinkGains.from_scenario(scenario)
    failures = set(allocation.coverage_failed) | set(allocation.unserved_platoons)
    return MetricsReport(
        avg_latency_ms=platoon_latency(scenario, allocation, gains=gains),
        qos_satisfaction_rate=qos_satisfaction(scenario, allocation, gains=gains),
        allocated_subchannels=subchannel_count(allocation),
        spectral_efficiency=spectral_efficiency(scenario, allocation, gains=gains),
        coverage_failures=len(failures),
    )
