"""Candidate generation, priority ordering, and greedy commitment.

A candidate is one way to let a platoon groupcaster reuse an entity's uplink
subchannel; its value x is the largest transmit power that still protects
the uplink. Commitment walks candidates in descending x and takes a triple
whenever its entity, subchannel, and platoon are all still free.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .channel import LinkGains
from .link import GroupcastRole

UNPAIRED = -1  # entity slot of a match holding a subchannel exclusively


class CandidateMatch(NamedTuple):
    """One (entity, subchannel, platoon, role) pairing with its power value."""

    ie: int
    subchannel: int
    platoon: int
    role: int
    power_mw: float


@dataclass
class Allocation:
    """Committed matches plus the relay decision per platoon.

    ``prv_indices[m]`` is the member index relaying for platoon m, or -1 when
    the leader's groupcast already reaches everyone. ``coverage_failed``
    lists platoons whose full membership is not reached at the committed
    powers; ``unserved_platoons`` got no subchannel at all.
    """

    matches: list
    prv_indices: list
    method: str = ""
    coverage_failed: frozenset = frozenset()
    unserved_platoons: frozenset = frozenset()

    def __post_init__(self):
        # normalize containers so equality is representation independent
        self.matches = list(self.matches)
        self.prv_indices = list(self.prv_indices)
        self.coverage_failed = frozenset(self.coverage_failed)
        self.unserved_platoons = frozenset(self.unserved_platoons)

    def matches_for(self, platoon: int) -> list:
        return [m for m in self.matches if m.platoon == platoon]

    def to_text(self) -> str:
        lines = [
            "allocation-v1",
            f"method: {self.method}",
            "prv_indices: " + ",".join(str(r) for r in self.prv_indices),
            "coverage_failed: " + ",".join(str(m) for m in sorted(self.coverage_failed)),
            "unserved: " + ",".join(str(m) for m in sorted(self.unserved_platoons)),
            "matches: ie,subchannel,platoon,role,power_mw",
        ]
        for m in self.matches:
            lines.append(f"{m.ie},{m.subchannel},{m.platoon},{m.role},{m.power_mw!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Allocation":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != "allocation-v1":
            raise ValueError("not an allocation file")

        def tail(prefix: str, line: str) -> str:
            if not line.startswith(prefix):
                raise ValueError(f"expected {prefix!r} line, got {line!r}")
            return line[len(prefix):].strip()

        method = tail("method:", lines[1])
        prv_raw = tail("prv_indices:", lines[2])
        failed_raw = tail("coverage_failed:", lines[3])
        unserved_raw = tail("unserved:", lines[4])
        if tail("matches:", lines[5]) != "ie,subchannel,platoon,role,power_mw":
            raise ValueError("unexpected match column layout")
        matches = []
        for line in lines[6:]:
            ie_s, k_s, m_s, g_s, x_s = line.split(",")
            matches.append(
                CandidateMatch(int(ie_s), int(k_s), int(m_s), GroupcastRole(int(g_s)), float(x_s))
            )
        parse_ids = lambda raw: tuple(int(v) for v in raw.split(",")) if raw else ()
        return cls(
            matches=matches,
            prv_indices=[int(v) for v in prv_raw.split(",")] if prv_raw else [],
            method=method,
            coverage_failed=parse_ids(failed_raw),
            unserved_platoons=parse_ids(unserved_raw),
        )


def _sort_key(candidate: CandidateMatch):
    # descending power; ties resolved by ascending subchannel, entity, platoon
    return (-candidate.power_mw, candidate.subchannel, candidate.ie, candidate.platoon)


def sort_candidates(candidates: Iterable[CandidateMatch]) -> list:
    return sorted(candidates, key=_sort_key)


def resulted_matching(
    sorted_candidates: Sequence[CandidateMatch],
    unmatched_ies: Iterable[int],
    unmatched_subchannels: Iterable[int],
    unmatched_platoons: Iterable[int],
) -> list:
    """Single greedy pass over a descending-x candidate list.

    A candidate commits only while its entity, subchannel, and platoon are
    all unmatched; each commitment removes all three. Stops early once every
    platoon is matched. Returns matches in commit order.
    """
    ies = set(unmatched_ies)
    subchannels = set(unmatched_subchannels)
    platoons = set(unmatched_platoons)
    committed = []
    for cand in sorted_candidates:
        if not platoons:
            break
        if cand.ie in ies and cand.subchannel in subchannels and cand.platoon in platoons:
            committed.append(cand)
            ies.discard(cand.ie)
            subchannels.discard(cand.subchannel)
            platoons.discard(cand.platoon)
    return committed


def _bound_matrix(
    gains: LinkGains,
    params,
    ie_ids: np.ndarray,
    platoon_ids: np.ndarray,
    tx_vehicle: dict,
) -> np.ndarray:
    """Power bound per (entity, platoon) pair; NaN marks infeasible pairs.

    The bound is independent of the subchannel because mean gains are flat
    across frequency at allocation time.
    """
    budget = gains.ie_power_mw[ie_ids] * gains.ie_to_bs[ie_ids] / params.delta_thr - params.noise_mw
    h_tx = np.array([gains.vehicle_to_bs[m][tx_vehicle[m]] for m in platoon_ids])
    raw = budget[:, None] / h_tx[None, :]
    x = np.minimum(raw, params.p_max_mw)
    x[raw <= 0.0] = np.nan
    return x


def generate_candidates(
    scenario,
    role: GroupcastRole,
    eligible_platoons: Iterable[int],
    available_ies: Iterable[int],
    available_subchannels: Iterable[int],
    *,
    gains: Optional[LinkGains] = None,
    prv_indices: Optional[Sequence[int]] = None,
) -> list:
    """Every feasible (entity, subchannel, platoon) triple for one role.

    PLV candidates transmit from the platoon leader; PRV candidates need
    ``prv_indices`` to locate each platoon's relay member.
    """
    if gains is None:
        gains = LinkGains.from_scenario(scenario)
    platoon_ids = np.array(sorted(eligible_platoons), dtype=int)
    ie_ids = np.array(sorted(available_ies), dtype=int)
    subchannels = sorted(available_subchannels)
    if len(platoon_ids) == 0 or len(ie_ids) == 0 or not subchannels:
        return []
    if role == GroupcastRole.PRV:
        if prv_indices is None:
            raise ValueError("PRV candidates need the relay index vector")
        tx_vehicle = {int(m): int(prv_indices[m]) for m in platoon_ids}
        for m, idx in tx_vehicle.items():
            if idx < 1:
                raise ValueError(f"platoon {m} has no relay selected")
    else:
        tx_vehicle = {int(m): 0 for m in platoon_ids}
    x = _bound_matrix(gains, scenario.params, ie_ids, platoon_ids, tx_vehicle)
    out = []
    for i, c in enumerate(ie_ids):
        for j, m in enumerate(platoon_ids):
            if np.isnan(x[i, j]):
                continue
            for k in subchannels:
                out.append(CandidateMatch(int(c), int(k), int(m), int(role), float(x[i, j])))
    return out


def greedy_pair_matching(
    x: np.ndarray,
    ie_ids: np.ndarray,
    platoon_ids: np.ndarray,
    free_subchannels: Sequence[int],
    role: int,
) -> list:
    """Greedy commitment on an (entity, platoon) bound matrix.

    Equivalent to sorting the full (entity, subchannel, platoon) cross
    product and running :func:`resulted_matching`: because x does not depend
    on the subchannel, each commitment simply takes the lowest free one.
    """
    x = np.asarray(x, dtype=float)
    ie_ids = np.asarray(ie_ids, dtype=int)
    platoon_ids = np.asarray(platoon_ids, dtype=int)
    flat = x.ravel()
    feasible = np.flatnonzero(~np.isnan(flat))
    if feasible.size == 0 or not len(free_subchannels):
        return []
    n_platoons = len(platoon_ids)
    c_idx = feasible // n_platoons
    m_idx = feasible % n_platoons
    order = np.lexsort((platoon_ids[m_idx], ie_ids[c_idx], -flat[feasible]))
    ks = sorted(free_subchannels)
    k_pos = 0
    used_c = set()
    used_m = set()
    committed = []
    for row in order:
        if len(used_m) == n_platoons or k_pos >= len(ks):
            break
        c = int(ie_ids[c_idx[row]])
        m = int(platoon_ids[m_idx[row]])
        if c in used_c or m in used_m:
            continue
        committed.append(CandidateMatch(c, ks[k_pos], m, role, float(flat[feasible[row]])))
        used_c.add(c)
        used_m.add(m)
        k_pos += 1
    return committed
