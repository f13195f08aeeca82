"""Reported quantities: latency, qos satisfaction, subchannel count, spectral efficiency."""

import dataclasses
import math

import pytest

from platoonshare import (
    Allocation,
    CandidateMatch,
    GroupcastRole,
    IndividualEntity,
    LinkGains,
    MetricsReport,
    ModelParams,
    Platoon,
    Position,
    Scenario,
    UNPAIRED,
    compute_metrics,
    generate_scenario,
    platoon_latency,
    qos_satisfaction,
    rspg_allocate,
    spectral_efficiency,
    subchannel_count,
)

import numpy as np


def _stub_params(**overrides):
    base = dict(
        num_platoons=1,
        num_ies=2,
        num_subchannels=2,
        max_platoon_size=4,
        gamma_thr=1.0,
        delta_thr=0.5,
        noise_mw=1.0,
        total_bandwidth_hz=4.8e6,
        packet_size_bytes=300,
    )
    base.update(overrides)
    return ModelParams.from_mapping(base)


def _stub_scenario(params, sizes):
    platoons = []
    for m, size in enumerate(sizes):
        vehicles = [Position(float(10 * m + j), 0.0) for j in range(size)]
        platoons.append(Platoon(id=m, vehicles=vehicles))
    ies = [
        IndividualEntity(id=c, position=Position(-5.0 - c, 50.0), tx_power_mw=1.0)
        for c in range(params.num_ies)
    ]
    return Scenario(
        params=params,
        bs_position=Position(0.0, 100.0),
        platoons=platoons,
        ies=ies,
        rng_seed=0,
    )


def _uniform_gains(scenario, g=1.0):
    params = scenario.params
    sizes = [len(p.vehicles) for p in scenario.platoons]
    intra = []
    for size in sizes:
        mat = np.full((size, size), g, dtype=float)
        np.fill_diagonal(mat, 0.0)
        intra.append(mat)
    return LinkGains(
        ie_power_mw=np.full(params.num_ies, 1.0),
        ie_to_bs=np.full(params.num_ies, 1.0),
        vehicle_to_bs=[np.full(size, 1.0) for size in sizes],
        ie_to_vehicle=[np.full((params.num_ies, size), 1.0) for size in sizes],
        intra_platoon=intra,
    )


def _plv(ie, k, m, x):
    return CandidateMatch(ie, k, m, GroupcastRole.PLV, x)


def _prv(ie, k, m, x):
    return CandidateMatch(ie, k, m, GroupcastRole.PRV, x)


def test_single_hop_millisecond_oracle():
    # 2400 bits at rate 1 bps/Hz on a 2.4 MHz subchannel is exactly 1 ms
    params = _stub_params()
    scenario = _stub_scenario(params, [2])
    gains = _uniform_gains(scenario)
    alloc = Allocation(matches=[_plv(UNPAIRED, 0, 0, 1.0)], prv_indices=[-1], method="no_relay")
    assert params.subchannel_bandwidth_hz == pytest.approx(2.4e6, rel=1e-12)
    assert platoon_latency(scenario, alloc, gains=gains) == pytest.approx(1.0, rel=1e-12)


def test_relay_with_equal_hop_rates_doubles_latency():
    params = _stub_params(max_platoon_size=4)
    scenario = _stub_scenario(params, [3])
    gains = _uniform_gains(scenario)
    single = Allocation(matches=[_plv(UNPAIRED, 0, 0, 1.0)], prv_indices=[-1], method="a")
    relayed = Allocation(
        matches=[_plv(UNPAIRED, 0, 0, 1.0), _prv(UNPAIRED, 1, 0, 1.0)],
        prv_indices=[1],
        method="b",
    )
    t1 = platoon_latency(scenario, single, gains=gains)
    t2 = platoon_latency(scenario, relayed, gains=gains)
    assert t2 == pytest.approx(2.0 * t1, rel=1e-12)


def test_latency_improves_with_sinr():
    params = _stub_params()
    scenario = _stub_scenario(params, [2])
    gains = _uniform_gains(scenario)
    slow = Allocation(matches=[_plv(UNPAIRED, 0, 0, 1.0)], prv_indices=[-1], method="a")
    fast = Allocation(matches=[_plv(UNPAIRED, 0, 0, 8.0)], prv_indices=[-1], method="a")
    assert platoon_latency(scenario, fast, gains=gains) < platoon_latency(scenario, slow, gains=gains)


def test_latency_counts_pair_interference():
    params = _stub_params()
    scenario = _stub_scenario(params, [2])
    gains = _uniform_gains(scenario)
    clean = Allocation(matches=[_plv(UNPAIRED, 0, 0, 1.0)], prv_indices=[-1], method="a")
    shared = Allocation(matches=[_plv(0, 0, 0, 1.0)], prv_indices=[-1], method="a")
    assert platoon_latency(scenario, shared, gains=gains) > platoon_latency(
        scenario, clean, gains=gains
    )


def test_latency_infinite_when_relay_has_no_subchannel():
    params = _stub_params()
    scenario = _stub_scenario(params, [3])
    gains = _uniform_gains(scenario)
    alloc = Allocation(matches=[_plv(UNPAIRED, 0, 0, 1.0)], prv_indices=[1], method="a")
    assert platoon_latency(scenario, alloc, gains=gains) == math.inf


def test_latency_averages_only_served_platoons():
    params = _stub_params(num_platoons=2, num_subchannels=4, total_bandwidth_hz=9.6e6)
    scenario = _stub_scenario(params, [2, 2])
    gains = _uniform_gains(scenario)
    alloc = Allocation(
        matches=[_plv(UNPAIRED, 0, 0, 1.0)],
        prv_indices=[-1, -1],
        method="a",
        unserved_platoons=frozenset({1}),
    )
    assert platoon_latency(scenario, alloc, gains=gains) == pytest.approx(1.0, rel=1e-12)


def test_latency_undefined_without_any_served_platoon():
    params = _stub_params()
    scenario = _stub_scenario(params, [2])
    gains = _uniform_gains(scenario)
    empty = Allocation(matches=[], prv_indices=[-1], method="a")
    with pytest.raises(ValueError):
        platoon_latency(scenario, empty, gains=gains)


def test_qos_counts_only_sharing_entities():
    params = _stub_params(num_ies=5, num_subchannels=6, num_platoons=3, max_platoon_size=3)
    scenario = _stub_scenario(params, [2, 2, 2])
    gains = _uniform_gains(scenario)
    # ie uplink sinr with unit gains: 1 / (1 + x); delta 0.5 passes iff x <= 1
    alloc = Allocation(
        matches=[_plv(0, 0, 0, 1.0), _plv(1, 1, 1, 3.0), _plv(UNPAIRED, 2, 2, 1.0)],
        prv_indices=[-1, -1, -1],
        method="a",
    )
    assert qos_satisfaction(scenario, alloc, gains=gains) == pytest.approx(0.5, rel=1e-12)


def test_qos_exact_threshold_counts_as_satisfied():
    params = _stub_params()
    scenario = _stub_scenario(params, [2])
    gains = _uniform_gains(scenario)
    alloc = Allocation(matches=[_plv(0, 0, 0, 1.0)], prv_indices=[-1], method="a")
    assert qos_satisfaction(scenario, alloc, gains=gains) == 1.0


def test_qos_empty_when_nothing_shared():
    params = _stub_params()
    scenario = _stub_scenario(params, [2])
    gains = _uniform_gains(scenario)
    alloc = Allocation(matches=[_plv(UNPAIRED, 0, 0, 1.0)], prv_indices=[-1], method="a")
    assert qos_satisfaction(scenario, alloc, gains=gains) == 1.0


def test_subchannel_count_is_match_count():
    alloc = Allocation(
        matches=[_plv(UNPAIRED, 3, 0, 1.0), _prv(UNPAIRED, 5, 0, 1.0)],
        prv_indices=[1],
        method="a",
    )
    assert subchannel_count(alloc) == 2
    assert subchannel_count(Allocation(matches=[], prv_indices=[-1], method="a")) == 0


def test_spectral_efficiency_averages_per_match_rates():
    params = _stub_params(num_platoons=2, num_subchannels=4, max_platoon_size=3)
    scenario = _stub_scenario(params, [2, 2])
    gains = _uniform_gains(scenario)
    # rates log2(1+1)=1 and log2(1+3)=2 average to 1.5
    alloc = Allocation(
        matches=[_plv(UNPAIRED, 0, 0, 1.0), _plv(UNPAIRED, 1, 1, 3.0)],
        prv_indices=[-1, -1],
        method="a",
    )
    assert spectral_efficiency(scenario, alloc, gains=gains) == pytest.approx(1.5, rel=1e-12)


def test_spectral_efficiency_empty_allocation_is_zero():
    params = _stub_params()
    scenario = _stub_scenario(params, [2])
    gains = _uniform_gains(scenario)
    alloc = Allocation(matches=[], prv_indices=[-1], method="a")
    assert spectral_efficiency(scenario, alloc, gains=gains) == 0.0


def test_spectral_efficiency_uses_hop_segment_worst_receiver():
    params = _stub_params(max_platoon_size=4)
    scenario = _stub_scenario(params, [3])
    gains = _uniform_gains(scenario)
    g = gains.intra_platoon[0]
    g[0, 1] = 3.0  # leader hop reaches only member 1 (boundary 1)
    g[1, 2] = 1.0
    alloc = Allocation(
        matches=[_plv(UNPAIRED, 0, 0, 1.0), _prv(UNPAIRED, 1, 0, 1.0)],
        prv_indices=[1],
        method="b",
    )
    # leader hop worst over members 1..1: sinr 3 -> rate 2; relay hop member 2: sinr 1 -> rate 1
    assert spectral_efficiency(scenario, alloc, gains=gains) == pytest.approx(1.5, rel=1e-12)


def test_compute_metrics_assembles_report():
    params = ModelParams()
    scenario = generate_scenario(params, 30, seed=4)
    gains = LinkGains.from_scenario(scenario)
    alloc = rspg_allocate(scenario, gains=gains)
    report = compute_metrics(scenario, alloc, gains=gains)
    assert isinstance(report, MetricsReport)
    assert report.avg_latency_ms == pytest.approx(platoon_latency(scenario, alloc, gains=gains))
    assert report.qos_satisfaction_rate == pytest.approx(qos_satisfaction(scenario, alloc, gains=gains))
    assert report.allocated_subchannels == subchannel_count(alloc)
    assert report.spectral_efficiency == pytest.approx(spectral_efficiency(scenario, alloc, gains=gains))
    assert report.coverage_failures == len(alloc.coverage_failed | alloc.unserved_platoons)


def test_report_validation():
    with pytest.raises(ValueError):
        MetricsReport(1.0, 1.5, 5, 1.0, 0)
    with pytest.raises(ValueError):
        MetricsReport(-1.0, 0.5, 5, 1.0, 0)
    with pytest.raises(ValueError):
        MetricsReport(1.0, 0.5, -1, 1.0, 0)
    report = MetricsReport(math.inf, 1.0, 5, 1.0, 0)
    assert report.avg_latency_ms == math.inf
    with pytest.raises(dataclasses.FrozenInstanceError):
        report.coverage_failures = 3
