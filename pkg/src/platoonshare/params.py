"""System model parameters.

Canonical fields are linear (mW, Hz, metres); the config boundary accepts
the conventional dB/dBm spellings and converts once.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Mapping

from .channel import dbm_to_mw, db_to_linear
from .link import qos_sinr_threshold


@dataclass(frozen=True)
class ModelParams:
    """Static parameters shared by every scenario drawn from one configuration."""

    cell_radius_m: float = 1000.0
    bs_antenna_height_m: float = 25.0
    bs_antenna_gain_dbi: float = 8.0
    bs_road_offset_m: float = 100.0
    vehicle_antenna_height_m: float = 1.5
    lanes: int = 2
    lane_width_m: float = 4.0
    gamma_thr: float = db_to_linear(5.0)          # receiver SINR floor, linear
    delta_thr: float = qos_sinr_threshold(0.5)    # entity uplink QoS SINR, linear
    theta_th: float = 0.9                         # reporting threshold on reliability
    num_platoons: int = 5
    max_platoon_size: int = 11
    num_ies: int = 65
    num_subchannels: int = 65
    p_max_mw: float = dbm_to_mw(30.0)
    ie_tx_power_mw: float = dbm_to_mw(30.0)
    total_bandwidth_hz: float = 10e6
    carrier_freq_hz: float = 2e9
    pathloss_exponent: float = 3.0                # abstract-model exponent, tests only
    noise_mw: float = dbm_to_mw(-114.0)           # per subchannel
    packet_size_bytes: int = 300
    inter_vehicle_gap_m: float = 10.0

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        problems = []
        if self.num_platoons < 1:
            problems.append(f"num_platoons must be >= 1, got {self.num_platoons}")
        if self.num_ies < 1:
            problems.append(f"num_ies must be >= 1, got {self.num_ies}")
        if self.num_subchannels < 2 * self.num_platoons:
            problems.append(
                "num_subchannels must be >= 2 * num_platoons "
                f"({2 * self.num_platoons}), got {self.num_subchannels}"
            )
        if self.max_platoon_size < 2:
            problems.append(f"max_platoon_size must be >= 2, got {self.max_platoon_size}")
        if self.lanes < 1:
            problems.append(f"lanes must be >= 1, got {self.lanes}")
        for name in (
            "cell_radius_m",
            "bs_road_offset_m",
            "lane_width_m",
            "gamma_thr",
            "delta_thr",
            "p_max_mw",
            "ie_tx_power_mw",
            "total_bandwidth_hz",
            "carrier_freq_hz",
            "noise_mw",
            "inter_vehicle_gap_m",
        ):
            if getattr(self, name) <= 0.0:
                problems.append(f"{name} must be > 0, got {getattr(self, name)}")
        if not 0.0 < self.theta_th <= 1.0:
            problems.append(f"theta_th must be in (0, 1], got {self.theta_th}")
        if self.packet_size_bytes <= 0:
            problems.append(f"packet_size_bytes must be > 0, got {self.packet_size_bytes}")
        if self.bs_road_offset_m >= self.cell_radius_m:
            problems.append("bs_road_offset_m must be smaller than cell_radius_m")
        if problems:
            raise ValueError("; ".join(problems))

    @property
    def subchannel_bandwidth_hz(self) -> float:
        return self.total_bandwidth_hz / self.num_subchannels

    @classmethod
    def from_mapping(cls, cfg: Mapping) -> "ModelParams":
        """Build params from a config mapping.

        Accepts the canonical field names plus the dB/dBm spellings
        ``sinr_threshold_db``, ``ie_rate_qos_bps_hz``, ``max_tx_power_dbm``,
        ``ie_tx_power_dbm`` and ``noise_dbm``, which take precedence over
        their linear counterparts when both appear.
        """
        known = {f.name for f in fields(cls)}
        values = {k: v for k, v in cfg.items() if k in known}
        if "sinr_threshold_db" in cfg:
            values["gamma_thr"] = db_to_linear(float(cfg["sinr_threshold_db"]))
        if "ie_rate_qos_bps_hz" in cfg:
            values["delta_thr"] = qos_sinr_threshold(float(cfg["ie_rate_qos_bps_hz"]))
        if "max_tx_power_dbm" in cfg:
            values["p_max_mw"] = dbm_to_mw(float(cfg["max_tx_power_dbm"]))
        if "ie_tx_power_dbm" in cfg:
            values["ie_tx_power_mw"] = dbm_to_mw(float(cfg["ie_tx_power_dbm"]))
        if "noise_dbm" in cfg:
            values["noise_mw"] = dbm_to_mw(float(cfg["noise_dbm"]))
        convenience = {
            "sinr_threshold_db",
            "ie_rate_qos_bps_hz",
            "max_tx_power_dbm",
            "ie_tx_power_dbm",
            "noise_dbm",
        }
        unknown = set(cfg) - known - convenience
        if unknown:
            raise ValueError(f"unknown parameter names: {sorted(unknown)}")
        return cls(**values)
