"""Pathloss, mean channel gains, and small-scale fading.

Two propagation models cover every link in the system: a street-level LOS
model for vehicle/entity links and a macro-cell model for anything received
at the base station. Gains are linear power ratios; pathloss is in dB.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .scenario import ModelParams, Position, Scenario

# LOS street model is calibrated down to a few metres; shorter links are clamped.
MIN_V2V_DISTANCE_M = 3.0


def db_to_linear(value_db):
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0) if isinstance(value_db, np.ndarray) else 10.0 ** (value_db / 10.0)


def linear_to_db(value):
    if np.any(np.asarray(value) <= 0.0):
        raise ValueError("dB conversion needs a positive linear value")
    return 10.0 * np.log10(value) if isinstance(value, np.ndarray) else 10.0 * np.log10(float(value))


def dbm_to_mw(value_dbm):
    return db_to_linear(value_dbm)


def mw_to_dbm(value_mw):
    return linear_to_db(value_mw)


class LinkClass(enum.Enum):
    """Which propagation model applies to a transmitter/receiver pair."""

    V2V_INTRA_PLATOON = "v2v_intra_platoon"  # vehicle to vehicle, same platoon
    V2V_CROSS = "v2v_cross"                  # individual entity to vehicle
    CELLULAR_UPLINK = "cellular_uplink"      # anything received at the BS


@dataclass(frozen=True)
class ChannelGain:
    """Mean gain plus an optional fading multiplier for one link."""

    mean_gain: float
    fading: float = 1.0

    def __post_init__(self) -> None:
        if self.mean_gain <= 0.0:
            raise ValueError(f"mean gain must be > 0, got {self.mean_gain}")
        if self.fading < 0.0:
            raise ValueError(f"fading multiplier must be >= 0, got {self.fading}")

    @property
    def instantaneous(self) -> float:
        return self.mean_gain * self.fading


def pathloss_cellular_db(distance_m):
    """Macro-cell pathloss, distance in metres (model itself works in km)."""
    if np.any(np.asarray(distance_m) <= 0.0):
        raise ValueError("distance must be > 0 m")
    return 128.1 + 37.6 * np.log10(np.asarray(distance_m, dtype=float) / 1000.0)


def pathloss_v2v_db(distance_m, carrier_freq_hz):
    """Street-level LOS pathloss, distance in metres, carrier in Hz."""
    if np.any(np.asarray(distance_m) <= 0.0):
        raise ValueError("distance must be > 0 m")
    if carrier_freq_hz <= 0.0:
        raise ValueError("carrier frequency must be > 0 Hz")
    d = np.maximum(np.asarray(distance_m, dtype=float), MIN_V2V_DISTANCE_M)
    fc_ghz = carrier_freq_hz / 1e9
    return 22.7 * np.log10(d) + 41.0 + 20.0 * np.log10(fc_ghz / 5.0)


def _v2v_gain(distance_m, carrier_freq_hz):
    # internal vector path: clamps instead of validating, callers own the checks
    d = np.maximum(np.asarray(distance_m, dtype=float), MIN_V2V_DISTANCE_M)
    fc_ghz = carrier_freq_hz / 1e9
    pl_db = 22.7 * np.log10(d) + 41.0 + 20.0 * np.log10(fc_ghz / 5.0)
    return 10.0 ** (-pl_db / 10.0)


def _cellular_gain(distance_m, bs_antenna_gain_dbi):
    d_km = np.asarray(distance_m, dtype=float) / 1000.0
    pl_db = 128.1 + 37.6 * np.log10(d_km)
    return 10.0 ** ((bs_antenna_gain_dbi - pl_db) / 10.0)


def mean_gain(tx: "Position", rx: "Position", link_class: LinkClass, params: "ModelParams") -> float:
    """Distance-based mean power gain between two positions.

    BS-bound links get the BS antenna gain; vehicle and entity antennas are
    0 dBi. Antenna heights are folded into the pathloss constants, geometry
    stays planar.
    """
    d = float(np.hypot(tx.x - rx.x, tx.y - rx.y))
    if d == 0.0:
        raise ValueError("transmitter and receiver are coincident")
    if link_class is LinkClass.CELLULAR_UPLINK:
        pl_db = float(pathloss_cellular_db(d))
        antenna_db = params.bs_antenna_gain_dbi
    elif link_class in (LinkClass.V2V_INTRA_PLATOON, LinkClass.V2V_CROSS):
        pl_db = float(pathloss_v2v_db(d, params.carrier_freq_hz))
        antenna_db = 0.0
    else:
        raise ValueError(f"unknown link class {link_class!r}")
    return 10.0 ** ((antenna_db - pl_db) / 10.0)


def sample_fading(rng: np.random.Generator, size=None):
    """Unit-mean exponential power fading draw(s)."""
    if size is None:
        return float(rng.exponential(1.0))
    return rng.exponential(1.0, size=size)


@dataclass
class LinkGains:
    """Precomputed mean gains for every link an allocator can query.

    Per-platoon arrays are indexed by the vehicle's position in the platoon
    (0 is the leader). ``intra_platoon[m][i, j]`` is the gain from vehicle i
    to vehicle j; the diagonal is zeroed because self-links never occur.
    """

    ie_power_mw: np.ndarray          # (C,)
    ie_to_bs: np.ndarray             # (C,)
    vehicle_to_bs: list              # [m] -> (V_m,)
    ie_to_vehicle: list              # [m] -> (C, V_m)
    intra_platoon: list              # [m] -> (V_m, V_m)

    @classmethod
    def from_scenario(cls, scenario: "Scenario") -> "LinkGains":
        params = scenario.params
        bs = np.array([scenario.bs_position.x, scenario.bs_position.y])
        ie_xy = np.array([[e.position.x, e.position.y] for e in scenario.ies])
        ie_power = np.array([e.tx_power_mw for e in scenario.ies])

        d_ie_bs = np.hypot(ie_xy[:, 0] - bs[0], ie_xy[:, 1] - bs[1])
        ie_to_bs = _cellular_gain(d_ie_bs, params.bs_antenna_gain_dbi)

        vehicle_to_bs = []
        ie_to_vehicle = []
        intra = []
        for platoon in scenario.platoons:
            veh_xy = np.array([[p.x, p.y] for p in platoon.vehicles])
            d_veh_bs = np.hypot(veh_xy[:, 0] - bs[0], veh_xy[:, 1] - bs[1])
            vehicle_to_bs.append(_cellular_gain(d_veh_bs, params.bs_antenna_gain_dbi))

            d_ie_veh = np.hypot(
                ie_xy[:, 0:1] - veh_xy[None, :, 0], ie_xy[:, 1:2] - veh_xy[None, :, 1]
            )
            ie_to_vehicle.append(_v2v_gain(d_ie_veh, params.carrier_freq_hz))

            d_intra = np.hypot(
                veh_xy[:, 0:1] - veh_xy[None, :, 0], veh_xy[:, 1:2] - veh_xy[None, :, 1]
            )
            g = _v2v_gain(d_intra, params.carrier_freq_hz)
            np.fill_diagonal(g, 0.0)
            intra.append(g)

        return cls(
            ie_power_mw=ie_power,
            ie_to_bs=ie_to_bs,
            vehicle_to_bs=vehicle_to_bs,
            ie_to_vehicle=ie_to_vehicle,
            intra_platoon=intra,
        )
