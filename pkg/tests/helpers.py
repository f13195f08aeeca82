"""Shared test fixtures: the documented greedy walk-through plus gain stubs.

The candidate tables below are the published worked example of the greedy
matcher, expressed 0-based as (ie, subchannel, platoon, power_bound_mw).
The bounds in the tables cannot be recomputed from any geometry (they are
illustrative), so tests inject them directly into the sort/commit pipeline
and pair them with hand-built gains that reproduce the published relay
boundaries at the committed powers.
"""
from __future__ import annotations

import numpy as np

from platoonshare import (
    IndividualEntity,
    ModelParams,
    Platoon,
    Position,
    Scenario,
)
from platoonshare.channel import LinkGains
from platoonshare.link import GroupcastRole
from platoonshare.matching import CandidateMatch

ROUND1 = [
    (0, 0, 1, 43.4),
    (0, 0, 2, 40.5),
    (1, 0, 0, 37.2),
    (1, 0, 2, 38.4),
    (4, 5, 2, 41.1),
    (1, 2, 0, 50.7),
    (2, 2, 2, 50.4),
    (1, 5, 2, 49.8),
    (0, 3, 0, 49.6),
    (0, 4, 2, 48.3),
    (0, 2, 1, 46.1),
    (2, 0, 1, 39.1),
]

ROUND2 = [
    (3, 1, 0, 37.5),
    (3, 3, 2, 37.6),
    (4, 1, 2, 35.4),
    (3, 3, 0, 34.1),
    (4, 1, 0, 32.8),
    (4, 5, 2, 35.6),
    (3, 1, 2, 29.7),
]

SORTED_ROUND1_HEAD = [50.7, 50.4, 49.8, 49.6, 48.3, 46.1]

EXPECTED_PLV = [
    (1, 2, 0, 50.7),
    (0, 4, 2, 48.3),
    (2, 0, 1, 39.1),
]

EXPECTED_PRV = [
    (3, 3, 2, 37.6),
    (4, 1, 0, 32.8),
]

EXPECTED_BOUNDARIES = [4, -1, 3]

EXAMPLE_SIZES = (6, 6, 5)


def as_candidates(table, role):
    return [CandidateMatch(c, k, m, int(role), x) for c, k, m, x in table]


def example_params() -> ModelParams:
    return ModelParams(
        num_platoons=3,
        num_ies=5,
        num_subchannels=6,
        max_platoon_size=6,
        gamma_thr=1.0,
        noise_mw=1.0,
    )


def example_scenario() -> Scenario:
    """Three platoons, five entities; positions are structural placeholders."""
    params = example_params()
    platoons = []
    for m, size in enumerate(EXAMPLE_SIZES):
        vehicles = [Position(1000.0 * m + 10.0 * j, 200.0) for j in range(size)]
        platoons.append(Platoon(id=m, vehicles=vehicles))
    ies = [IndividualEntity(c, Position(37.0 * c + 5.0, -150.0), 1.0) for c in range(5)]
    return Scenario(
        params=params,
        bs_position=Position(0.0, 0.0),
        platoons=platoons,
        ies=ies,
        rng_seed=0,
    )


def example_gains() -> LinkGains:
    """Gains that reproduce the published relay boundaries [4, -1, 3].

    Committed leader powers are 50.7, 39.1, 48.3 and every member sees unit
    noise plus unit interference from the paired entity, so a leader-to-
    member gain of 2*margin/power puts that member's SINR exactly at margin.
    """
    committed = {0: 50.7, 1: 39.1, 2: 48.3}
    margins = {
        0: [2.0, 2.0, 2.0, 2.0, 0.5],
        1: [2.0, 2.0, 2.0, 2.0, 2.0],
        2: [2.0, 2.0, 2.0, 0.5],
    }
    intra = []
    ie_to_vehicle = []
    vehicle_to_bs = []
    for m, size in enumerate(EXAMPLE_SIZES):
        g = np.full((size, size), 0.1)
        np.fill_diagonal(g, 0.0)
        g[0, 1:] = 2.0 * np.array(margins[m]) / committed[m]
        intra.append(g)
        ie_to_vehicle.append(np.ones((5, size)))
        vehicle_to_bs.append(np.ones(size))
    return LinkGains(
        ie_power_mw=np.ones(5),
        ie_to_bs=np.ones(5),
        vehicle_to_bs=vehicle_to_bs,
        ie_to_vehicle=ie_to_vehicle,
        intra_platoon=intra,
    )


def run_worked_example():
    """Full greedy pipeline on the injected tables; returns (matches, boundaries)."""
    from platoonshare import select_prvs, sort_candidates, resulted_matching

    scenario = example_scenario()
    gains = example_gains()
    plv = resulted_matching(
        sort_candidates(as_candidates(ROUND1, GroupcastRole.PLV)),
        unmatched_ies=set(range(5)),
        unmatched_subchannels=set(range(6)),
        unmatched_platoons=set(range(3)),
    )
    boundaries, flagged = select_prvs(scenario, plv, gains=gains)
    assert not flagged
    eligible = {m for m in range(3) if boundaries[m] >= 1}
    prv = resulted_matching(
        sort_candidates(as_candidates(ROUND2, GroupcastRole.PRV)),
        unmatched_ies={3, 4},
        unmatched_subchannels={1, 3, 5},
        unmatched_platoons=eligible,
    )
    return plv + prv, boundaries
