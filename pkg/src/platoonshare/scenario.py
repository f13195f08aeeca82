"""Scenario construction: road geometry, platoons, and individual entities.

The served area is an urban street block: four perpendicular road segments
form a square around the base station, each side at the configured offset
from the centre. Platoons drive along lanes of those sides; individual
entities (IEs) are scattered uniformly along the same lanes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np

from .params import ModelParams

ROAD_COUNT = 4  # north, south, east, west side of the block

# substream tags so each draw family is independent of the others
_PLATOON_STREAM = 1
_IE_STREAM = 2
_PAIRING_STREAM = 3
_FADING_STREAM = 4


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def distance_to(self, other: "Position") -> float:
        return float(np.hypot(self.x - other.x, self.y - other.y))


@dataclass
class Platoon:
    """An ordered column of vehicles; index 0 is the leader (PLV)."""

    id: int
    vehicles: list  # list[Position], leader first, monotone along one lane
    coverage_boundary: Optional[int] = None  # farthest covered member index, if known
    prv_index: int = -1                      # relay member index, -1 when none

    @property
    def size(self) -> int:
        return len(self.vehicles)


@dataclass
class IndividualEntity:
    """A non-platoon cellular uplink user sharing the block."""

    id: int
    position: Position
    tx_power_mw: float


@dataclass
class Scenario:
    params: ModelParams
    bs_position: Position
    platoons: list
    ies: list
    rng_seed: int

    def to_json(self) -> str:
        payload = {
            "format": "scenario-v1",
            "rng_seed": self.rng_seed,
            "params": asdict(self.params),
            "bs_position": [self.bs_position.x, self.bs_position.y],
            "platoons": [
                {
                    "id": p.id,
                    "vehicles": [[v.x, v.y] for v in p.vehicles],
                    "coverage_boundary": p.coverage_boundary,
                    "prv_index": p.prv_index,
                }
                for p in self.platoons
            ],
            "ies": [
                {"id": e.id, "position": [e.position.x, e.position.y], "tx_power_mw": e.tx_power_mw}
                for e in self.ies
            ],
        }
        return json.dumps(payload, sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Scenario":
        payload = json.loads(text)
        if payload.get("format") != "scenario-v1":
            raise ValueError(f"unsupported scenario format {payload.get('format')!r}")
        params = ModelParams(**payload["params"])
        platoons = [
            Platoon(
                id=p["id"],
                vehicles=[Position(x, y) for x, y in p["vehicles"]],
                coverage_boundary=p["coverage_boundary"],
                prv_index=p["prv_index"],
            )
            for p in payload["platoons"]
        ]
        ies = [
            IndividualEntity(id=e["id"], position=Position(*e["position"]), tx_power_mw=e["tx_power_mw"])
            for e in payload["ies"]
        ]
        return cls(
            params=params,
            bs_position=Position(*payload["bs_position"]),
            platoons=platoons,
            ies=ies,
            rng_seed=payload["rng_seed"],
        )


def distribute_vehicles(total: int, num_platoons: int, max_platoon_size: int, seed: int) -> list:
    """Split a vehicle total into per-platoon sizes, as balanced as possible.

    The remainder goes to platoons picked by a seeded permutation. The
    permutation depends only on the seed, so growing the total with a fixed
    seed never shrinks any platoon.
    """
    if num_platoons < 1:
        raise ValueError(f"need at least one platoon, got {num_platoons}")
    if total < 2 * num_platoons:
        raise ValueError(
            f"{total} vehicles cannot fill {num_platoons} platoons of at least 2 vehicles"
        )
    if total > num_platoons * max_platoon_size:
        raise ValueError(
            f"{total} vehicles exceed {num_platoons} platoons of at most {max_platoon_size}"
        )
    base, remainder = divmod(total, num_platoons)
    sizes = [base] * num_platoons
    order = np.random.default_rng(seed).permutation(num_platoons)
    for idx in order[:remainder]:
        sizes[int(idx)] += 1
    return sizes


def _road_point(road: int, lateral: float, along: float, offset: float) -> Position:
    # roads 0/1 run east-west at y = +/-offset, roads 2/3 run north-south at x = +/-offset
    if road == 0:
        return Position(along, offset + lateral)
    if road == 1:
        return Position(along, -offset + lateral)
    if road == 2:
        return Position(offset + lateral, along)
    if road == 3:
        return Position(-offset + lateral, along)
    raise ValueError(f"road index out of range: {road}")


def _lane_offsets(params: ModelParams) -> list:
    centre = (params.lanes - 1) / 2.0
    return [(lane - centre) * params.lane_width_m for lane in range(params.lanes)]


def _overlaps(intervals: list, lo: float, hi: float) -> bool:
    return any(lo < b and a < hi for a, b in intervals)


def generate_scenario(params: ModelParams, total_platoon_vehicles: int, seed: int) -> Scenario:
    """Draw one static snapshot of the block, deterministic per seed.

    Placement always reserves a maximum-size footprint per platoon, so the
    same seed gives identical leader and entity positions at every vehicle
    total; only the realised platoon lengths differ.
    """
    params.validate()
    sizes = distribute_vehicles(total_platoon_vehicles, params.num_platoons, params.max_platoon_size, seed)

    half = params.bs_road_offset_m  # road half-length, corner to corner
    footprint = (params.max_platoon_size - 1) * params.inter_vehicle_gap_m
    if footprint > 2 * half:
        raise ValueError(
            f"platoon footprint {footprint} m does not fit a road of length {2 * half} m"
        )
    lane_offsets = _lane_offsets(params)

    rng_platoons = np.random.default_rng([seed, _PLATOON_STREAM])
    occupied: dict = {}
    platoons = []
    for pid in range(params.num_platoons):
        for _ in range(1000):
            road = int(rng_platoons.integers(ROAD_COUNT))
            direction = 1 if int(rng_platoons.integers(2)) == 0 else -1
            lane = int(rng_platoons.integers(params.lanes))
            if direction > 0:
                start = float(rng_platoons.uniform(-half + footprint, half))
                lo, hi = start - footprint, start
            else:
                start = float(rng_platoons.uniform(-half, half - footprint))
                lo, hi = start, start + footprint
            slots = occupied.setdefault((road, lane), [])
            if not _overlaps(slots, lo, hi):
                slots.append((lo, hi))
                break
        else:
            raise ValueError(
                "could not place platoons without overlap; fewer or shorter platoons needed"
            )
        lateral = lane_offsets[lane]
        vehicles = [
            _road_point(road, lateral, start - direction * i * params.inter_vehicle_gap_m, half)
            for i in range(sizes[pid])
        ]
        platoons.append(Platoon(id=pid, vehicles=vehicles))

    rng_ies = np.random.default_rng([seed, _IE_STREAM])
    ies = []
    for eid in range(params.num_ies):
        road = int(rng_ies.integers(ROAD_COUNT))
        lane = int(rng_ies.integers(params.lanes))
        along = float(rng_ies.uniform(-half, half))
        ies.append(
            IndividualEntity(
                id=eid,
                position=_road_point(road, lane_offsets[lane], along, half),
                tx_power_mw=params.ie_tx_power_mw,
            )
        )

    return Scenario(
        params=params,
        bs_position=Position(0.0, 0.0),
        platoons=platoons,
        ies=ies,
        rng_seed=seed,
    )
