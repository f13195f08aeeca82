"""Desk-scale simulator for subchannel sharing between vehicle platoons
groupcasting control messages and cellular uplink users.

Typical flow: build :class:`ModelParams`, generate a seeded
:class:`Scenario`, run an allocator, score it with :func:`compute_metrics`,
or drive the whole grid through :func:`run_sweep` / the ``platoonshare``
command line.
"""

from .allocators import (
    ALLOCATORS,
    BaseAllocator,
    CentralizedAllocator,
    NoRelayAllocator,
    RspgAllocator,
    centralized_allocate,
    no_relay_allocate,
    rspg_allocate,
    select_prvs,
)
from .channel import (
    ChannelGain,
    LinkClass,
    LinkGains,
    db_to_linear,
    dbm_to_mw,
    linear_to_db,
    mean_gain,
    mw_to_dbm,
    pathloss_cellular_db,
    pathloss_v2v_db,
    sample_fading,
)
from .link import (
    GroupcastRole,
    LinkBudget,
    groupcast_sinr,
    groupcaster_interference,
    ie_interference,
    power_upper_bound,
    qos_sinr_threshold,
    rate_bps_per_hz,
    success_probability,
)
from .matching import (
    UNPAIRED,
    Allocation,
    CandidateMatch,
    generate_candidates,
    resulted_matching,
    sort_candidates,
)
from .metrics import (
    MetricsReport,
    compute_metrics,
    platoon_latency,
    qos_satisfaction,
    spectral_efficiency,
    subchannel_count,
)
from .params import ModelParams
from .scenario import (
    IndividualEntity,
    Platoon,
    Position,
    Scenario,
    distribute_vehicles,
    generate_scenario,
)
from .sweep import (
    CSV_HEADER,
    METHODS,
    SweepConfig,
    SweepRow,
    emit_csv,
    evaluate_method,
    load_config,
    parse_csv,
    run_sweep,
)
from .validation import check_allocation, check_params, check_scenario

__version__ = "0.1.0"

__all__ = [
    "ALLOCATORS",
    "Allocation",
    "BaseAllocator",
    "CSV_HEADER",
    "CandidateMatch",
    "CentralizedAllocator",
    "ChannelGain",
    "GroupcastRole",
    "IndividualEntity",
    "LinkBudget",
    "LinkClass",
    "LinkGains",
    "METHODS",
    "MetricsReport",
    "ModelParams",
    "NoRelayAllocator",
    "Platoon",
    "Position",
    "RspgAllocator",
    "Scenario",
    "SweepConfig",
    "SweepRow",
    "UNPAIRED",
    "centralized_allocate",
    "check_allocation",
    "check_params",
    "check_scenario",
    "compute_metrics",
    "db_to_linear",
    "dbm_to_mw",
    "distribute_vehicles",
    "emit_csv",
    "evaluate_method",
    "generate_candidates",
    "generate_scenario",
    "groupcast_sinr",
    "groupcaster_interference",
    "ie_interference",
    "linear_to_db",
    "load_config",
    "mean_gain",
    "mw_to_dbm",
    "no_relay_allocate",
    "parse_csv",
    "pathloss_cellular_db",
    "pathloss_v2v_db",
    "platoon_latency",
    "power_upper_bound",
    "qos_satisfaction",
    "qos_sinr_threshold",
    "rate_bps_per_hz",
    "resulted_matching",
    "rspg_allocate",
    "run_sweep",
    "sample_fading",
    "select_prvs",
    "spectral_efficiency",
    "subchannel_count",
    "success_probability",
]
