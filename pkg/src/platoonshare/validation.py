"""Input validation helpers shared by the estimators and the CLI."""
from __future__ import annotations

import math
from collections import Counter

from .matching import Allocation, UNPAIRED
from .params import ModelParams
from .scenario import Scenario

# Relative slack for power-cap comparisons on committed float powers.
_POWER_REL_TOL = 1e-9


def check_params(params: ModelParams) -> ModelParams:
    if not isinstance(params, ModelParams):
        raise TypeError(f"expected ModelParams, got {type(params).__name__}")
    params.validate()
    return params


def check_scenario(scenario: Scenario) -> Scenario:
    if not isinstance(scenario, Scenario):
        raise TypeError(f"expected Scenario, got {type(scenario).__name__}")
    check_params(scenario.params)
    problems = []
    if len(scenario.platoons) != scenario.params.num_platoons:
        problems.append(
            f"expected {scenario.params.num_platoons} platoons, found {len(scenario.platoons)}"
        )
    if len(scenario.ies) != scenario.params.num_ies:
        problems.append(f"expected {scenario.params.num_ies} entities, found {len(scenario.ies)}")
    for idx, platoon in enumerate(scenario.platoons):
        if platoon.id != idx:
            problems.append(f"platoon ids must be sequential from 0, found {platoon.id} at {idx}")
        if not 2 <= platoon.size <= scenario.params.max_platoon_size:
            problems.append(f"platoon {platoon.id} size {platoon.size} out of range")
        positions = {(v.x, v.y) for v in platoon.vehicles}
        if len(positions) != platoon.size:
            problems.append(f"platoon {platoon.id} has coincident vehicles")
        for vehicle in platoon.vehicles:
            if not (math.isfinite(vehicle.x) and math.isfinite(vehicle.y)):
                problems.append(f"platoon {platoon.id} has a non-finite vehicle position")
                break
    for idx, ie in enumerate(scenario.ies):
        if ie.id != idx:
            problems.append(f"entity ids must be sequential from 0, found {ie.id} at {idx}")
        if ie.tx_power_mw <= 0:
            problems.append(f"entity {ie.id} has non-positive transmit power")
        if not (math.isfinite(ie.position.x) and math.isfinite(ie.position.y)):
            problems.append(f"entity {ie.id} has a non-finite position")
    if problems:
        raise ValueError("invalid scenario: " + "; ".join(problems))
    return scenario


def check_allocation(scenario: Scenario, allocation: Allocation) -> Allocation:
    """Enforce the structural allocation invariants.

    Each subchannel, each entity, and each (platoon, role) pair may appear
    in at most one match; relay matches require a selected relay; committed
    powers stay within (0, cap] apart from explicit idle-relay zeros.
    """
    check_scenario(scenario)
    params = scenario.params
    problems = []

    if len(allocation.prv_indices) != params.num_platoons:
        problems.append(
            f"prv_indices has length {len(allocation.prv_indices)}, "
            f"expected {params.num_platoons}"
        )
    else:
        for m, boundary in enumerate(allocation.prv_indices):
            size = scenario.platoons[m].size
            if boundary != -1 and not 1 <= boundary <= size - 1:
                problems.append(f"platoon {m} relay index {boundary} not in -1 or [1, {size - 1}]")

    subchannel_uses = Counter(match.subchannel for match in allocation.matches)
    ie_uses = Counter(match.ie for match in allocation.matches if match.ie != UNPAIRED)
    role_uses = Counter((match.platoon, match.role) for match in allocation.matches)
    for k, n in subchannel_uses.items():
        if n > 1:
            problems.append(f"subchannel {k} used by {n} matches")
    for c, n in ie_uses.items():
        if n > 1:
            problems.append(f"entity {c} shares {n} subchannels")
    for (m, role), n in role_uses.items():
        if n > 1:
            problems.append(f"platoon {m} role {role} matched {n} times")

    for match in allocation.matches:
        if match.ie != UNPAIRED and not 0 <= match.ie < params.num_ies:
            problems.append(f"match references unknown entity {match.ie}")
        if not 0 <= match.subchannel < params.num_subchannels:
            problems.append(f"match references unknown subchannel {match.subchannel}")
        if not 0 <= match.platoon < params.num_platoons:
            problems.append(f"match references unknown platoon {match.platoon}")
        if match.role not in (0, 1):
            problems.append(f"match has unknown groupcast role {match.role}")
        if match.role == 1 and 0 <= match.platoon < len(allocation.prv_indices):
            if allocation.prv_indices[match.platoon] == -1:
                problems.append(f"platoon {match.platoon} has a relay match but no relay selected")
        if not 0 <= match.power_mw <= params.p_max_mw * (1 + _POWER_REL_TOL):
            problems.append(f"match power {match.power_mw} mW outside [0, {params.p_max_mw}]")

    for label, members in (
        ("coverage_failed", allocation.coverage_failed),
        ("unserved", allocation.unserved_platoons),
    ):
        for m in members:
            if not 0 <= m < params.num_platoons:
                problems.append(f"{label} references unknown platoon {m}")

    if problems:
        raise ValueError("invalid allocation: " + "; ".join(problems))
    return allocation
