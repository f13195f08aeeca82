"""Allocation methods: greedy resource sharing (RSPG) and two baselines.

Each method turns a scenario into an :class:`~platoonshare.matching.Allocation`.
The estimator classes wrap the functional pipelines with the familiar
fit/get_params API; ``allocation_`` holds the result after ``fit``.
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .channel import LinkGains
from .link import GroupcastRole
from .matching import (
    Allocation,
    CandidateMatch,
    UNPAIRED,
    _bound_matrix,
    greedy_pair_matching,
)
from .scenario import Scenario, _PAIRING_STREAM
from .validation import check_scenario


def select_prvs(
    scenario: Scenario,
    plv_matches: Sequence[CandidateMatch],
    *,
    gains: Optional[LinkGains] = None,
) -> tuple:
    """Walk each platoon outward from the leader and pick the relay member.

    A member passes while its mean SINR at the committed leader power,
    including the paired entity's interference, stays above the receiver
    threshold. The last passing member becomes the relay; platoons whose
    leader reaches everyone get -1. A platoon whose first member already
    fails is flagged as a coverage failure instead of getting a nonsensical
    relay at the leader itself.

    Returns ``(prv_indices, coverage_failed)``.
    """
    if gains is None:
        gains = LinkGains.from_scenario(scenario)
    params = scenario.params
    prv_indices = [-1] * params.num_platoons
    flagged = set()
    for match in plv_matches:
        m = match.platoon
        g_leader = gains.intra_platoon[m][0]
        n_members = g_leader.shape[0]
        interference = gains.ie_power_mw[match.ie] * gains.ie_to_vehicle[m][match.ie]
        boundary = -1
        for j in range(1, n_members):
            sinr = match.power_mw * g_leader[j] / (params.noise_mw + interference[j])
            if sinr <= params.gamma_thr:
                boundary = j - 1
                break
        prv_indices[m] = boundary
        if boundary == 0:
            prv_indices[m] = -1
            flagged.add(m)
    return prv_indices, frozenset(flagged)


def _strict_receiver_filter(x, gains, params, ie_ids, platoon_ids, tx_vehicle):
    """Drop pairs whose own groupcast members would sit below threshold.

    Optional extra feasibility screen; the baseline pipeline leaves member
    coverage to the relay walk and the metrics instead.
    """
    for col, m in enumerate(platoon_ids):
        t = tx_vehicle[int(m)]
        g = gains.intra_platoon[m]
        receivers = np.arange(t + 1, g.shape[0])
        if receivers.size == 0:
            continue
        g_rx = g[t, receivers]
        interference = (
            gains.ie_power_mw[ie_ids, None] * gains.ie_to_vehicle[m][ie_ids][:, receivers]
        )
        with np.errstate(invalid="ignore"):
            worst = (x[:, col : col + 1] * g_rx[None, :] / (params.noise_mw + interference)).min(axis=1)
            x[worst < params.gamma_thr, col] = np.nan
    return x


def rspg_allocate(
    scenario: Scenario,
    *,
    gains: Optional[LinkGains] = None,
    strict_receiver_qos: bool = False,
) -> Allocation:
    """Two-round greedy sharing: leaders first, then the selected relays.

    Every committed transmitter uses the full power its paired entity can
    tolerate, so shared uplinks sit exactly at their QoS threshold unless
    the hardware cap binds first.
    """
    if gains is None:
        gains = LinkGains.from_scenario(scenario)
    params = scenario.params
    n_platoons, n_ies, n_subchannels = params.num_platoons, params.num_ies, params.num_subchannels

    all_ies = np.arange(n_ies)
    all_platoons = np.arange(n_platoons)
    leader_tx = {m: 0 for m in range(n_platoons)}
    x = _bound_matrix(gains, params, all_ies, all_platoons, leader_tx)
    if strict_receiver_qos:
        x = _strict_receiver_filter(x, gains, params, all_ies, all_platoons, leader_tx)
    plv_matches = greedy_pair_matching(
        x, all_ies, all_platoons, range(n_subchannels), int(GroupcastRole.PLV)
    )
    matched = {m.platoon for m in plv_matches}
    unserved = tuple(sorted(set(range(n_platoons)) - matched))

    prv_indices, flagged = select_prvs(scenario, plv_matches, gains=gains)

    eligible = [m for m in range(n_platoons) if prv_indices[m] >= 1]
    prv_matches = []
    if eligible:
        used_ies = {m.ie for m in plv_matches}
        used_ks = {m.subchannel for m in plv_matches}
        rem_ies = np.array([c for c in range(n_ies) if c not in used_ies], dtype=int)
        rem_ks = [k for k in range(n_subchannels) if k not in used_ks]
        relay_tx = {m: prv_indices[m] for m in eligible}
        if rem_ies.size and rem_ks:
            x2 = _bound_matrix(gains, params, rem_ies, np.array(eligible), relay_tx)
            if strict_receiver_qos:
                x2 = _strict_receiver_filter(x2, gains, params, rem_ies, np.array(eligible), relay_tx)
            prv_matches = greedy_pair_matching(
                x2, rem_ies, np.array(eligible), rem_ks, int(GroupcastRole.PRV)
            )
    relayed = {m.platoon for m in prv_matches}
    coverage_failed = tuple(sorted(set(flagged) | (set(eligible) - relayed)))

    return Allocation(
        matches=plv_matches + prv_matches,
        prv_indices=prv_indices,
        method="rspg",
        coverage_failed=coverage_failed,
        unserved_platoons=unserved,
    )


def centralized_allocate(scenario: Scenario, *, gains: Optional[LinkGains] = None) -> Allocation:
    """Always-relay baseline with interference-free minimum-power planning.

    Each platoon gets a leader hop and a relay hop on their own subchannels,
    with the relay position chosen to minimise the summed transmit power.
    Entities may share those subchannels only when their own uplink QoS
    survives the fixed powers; sharing never changes the powers.
    """
    if gains is None:
        gains = LinkGains.from_scenario(scenario)
    params = scenario.params
    n_platoons = params.num_platoons

    plv_power = np.zeros(n_platoons)
    prv_power = np.zeros(n_platoons)
    prv_indices = []
    coverage_failed = set()
    for m in range(n_platoons):
        g = gains.intra_platoon[m]
        size = g.shape[0]
        best = None
        for r in range(1, size):
            head = params.gamma_thr * params.noise_mw / g[0, r]
            tail = params.gamma_thr * params.noise_mw / g[r, size - 1] if r < size - 1 else 0.0
            if best is None or head + tail < best[0]:
                best = (head + tail, r, head, tail)
        _, r, head, tail = best
        prv_indices.append(r)
        if head > params.p_max_mw or tail > params.p_max_mw:
            coverage_failed.add(m)
        plv_power[m] = min(head, params.p_max_mw)
        prv_power[m] = min(tail, params.p_max_mw)

    matches = []
    used_ies: set = set()
    free_ks = list(range(params.num_subchannels))
    rounds = (
        (int(GroupcastRole.PLV), plv_power, {m: 0 for m in range(n_platoons)}),
        (int(GroupcastRole.PRV), prv_power, {m: prv_indices[m] for m in range(n_platoons)}),
    )
    for role, powers, tx_vehicle in rounds:
        ie_ids = np.array([c for c in range(params.num_ies) if c not in used_ies], dtype=int)
        x = np.full((ie_ids.size, n_platoons), np.nan)
        for m in range(n_platoons):
            h_tx = gains.vehicle_to_bs[m][tx_vehicle[m]]
            uplink_sinr = (
                gains.ie_power_mw[ie_ids]
                * gains.ie_to_bs[ie_ids]
                / (params.noise_mw + powers[m] * h_tx)
            )
            x[uplink_sinr >= params.delta_thr, m] = powers[m]
        commits = greedy_pair_matching(x, ie_ids, np.arange(n_platoons), free_ks, role)
        matches.extend(commits)
        used_ies.update(c.ie for c in commits)
        committed_ks = {c.subchannel for c in commits}
        free_ks = [k for k in free_ks if k not in committed_ks]
        paired = {c.platoon for c in commits}
        for m in range(n_platoons):
            if m not in paired:
                matches.append(CandidateMatch(UNPAIRED, free_ks.pop(0), m, role, float(powers[m])))

    return Allocation(
        matches=matches,
        prv_indices=prv_indices,
        method="centralized",
        coverage_failed=tuple(sorted(coverage_failed)),
        unserved_platoons=(),
    )


def no_relay_allocate(scenario: Scenario, *, gains: Optional[LinkGains] = None) -> Allocation:
    """Single-hop baseline: the leader alone reaches the whole platoon.

    Each platoon holds one subchannel. Its transmit power holds the tail
    member exactly at the receiver threshold, rising to absorb a sharing
    entity's interference; sharing is allowed only while that power fits
    under the cap. The shared entity's own uplink QoS is not enforced. The
    sharing entity is a seeded uniform pick among the tolerable ones.
    """
    if gains is None:
        gains = LinkGains.from_scenario(scenario)
    params = scenario.params
    rng = np.random.default_rng([scenario.rng_seed, _PAIRING_STREAM])

    matches = []
    used_ies: set = set()
    coverage_failed = set()
    for m in range(params.num_platoons):
        g_tail = gains.intra_platoon[m][0, -1]
        p_alone = params.gamma_thr * params.noise_mw / g_tail
        ie_ids = np.array([c for c in range(params.num_ies) if c not in used_ies], dtype=int)
        interference = gains.ie_power_mw[ie_ids] * gains.ie_to_vehicle[m][ie_ids, -1]
        p_required = params.gamma_thr * (params.noise_mw + interference) / g_tail
        feasible = np.flatnonzero(p_required <= params.p_max_mw)
        if feasible.size:
            pick = int(rng.choice(feasible))
            ie = int(ie_ids[pick])
            used_ies.add(ie)
            matches.append(CandidateMatch(ie, m, m, int(GroupcastRole.PLV), float(p_required[pick])))
        else:
            if p_alone > params.p_max_mw:
                coverage_failed.add(m)
            matches.append(
                CandidateMatch(
                    UNPAIRED, m, m, int(GroupcastRole.PLV), float(min(p_alone, params.p_max_mw))
                )
            )

    return Allocation(
        matches=matches,
        prv_indices=[-1] * params.num_platoons,
        method="no_relay",
        coverage_failed=tuple(sorted(coverage_failed)),
        unserved_platoons=(),
    )


class BaseAllocator(BaseEstimator):
    """Scenario-to-allocation estimator; ``fit`` validates and allocates."""

    def fit(self, scenario: Scenario, y=None):
        check_scenario(scenario)
        self.allocation_ = self._allocate(scenario)
        self.n_platoons_ = scenario.params.num_platoons
        return self

    def fit_allocate(self, scenario: Scenario) -> Allocation:
        return self.fit(scenario).allocation_

    def _allocate(self, scenario: Scenario) -> Allocation:
        raise NotImplementedError


class RspgAllocator(BaseAllocator):
    """Greedy two-round resource sharing with relay selection."""

    def __init__(self, strict_receiver_qos: bool = False):
        self.strict_receiver_qos = strict_receiver_qos

    def _allocate(self, scenario: Scenario) -> Allocation:
        return rspg_allocate(scenario, strict_receiver_qos=self.strict_receiver_qos)


class CentralizedAllocator(BaseAllocator):
    """Always-relay minimum-power baseline."""

    def _allocate(self, scenario: Scenario) -> Allocation:
        return centralized_allocate(scenario)


class NoRelayAllocator(BaseAllocator):
    """Single-hop baseline without relays."""

    def _allocate(self, scenario: Scenario) -> Allocation:
        return no_relay_allocate(scenario)


ALLOCATORS = {
    "rspg": RspgAllocator,
    "centralized": CentralizedAllocator,
    "no_relay": NoRelayAllocator,
}
