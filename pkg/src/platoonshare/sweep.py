"""Seeded sweep driver: scenarios -> allocations -> metrics -> CSV rows.

Every (total, method, seed) work item is independent and deterministic,
so a fixed configuration always reproduces the same output bytes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
import yaml

from .allocators import centralized_allocate, no_relay_allocate, rspg_allocate
from .channel import LinkGains
from .link import success_probability
from .matching import Allocation
from .metrics import MetricsReport, _receiver_segment, compute_metrics
from .params import ModelParams
from .scenario import Scenario, _FADING_STREAM, generate_scenario

METHODS = ("rspg", "centralized", "no_relay")

_METHOD_FUNCS = {
    "rspg": rspg_allocate,
    "centralized": centralized_allocate,
    "no_relay": no_relay_allocate,
}

CSV_HEADER = (
    "total_vehicles,method,seed_count,latency_ms_mean,latency_ms_std,"
    "qos_rate_mean,subchannels_mean,spectral_eff_mean,coverage_failures"
)


@dataclass(frozen=True)
class SweepConfig:
    """Everything one sweep needs; immutable so runs cannot drift."""

    params: ModelParams = field(default_factory=ModelParams)
    vehicle_totals: tuple = tuple(range(15, 56, 5))
    methods: tuple = METHODS
    seeds: tuple = tuple(range(20))
    monte_carlo_fading_draws: int = 0

    def __post_init__(self):
        object.__setattr__(self, "vehicle_totals", tuple(self.vehicle_totals))
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "seeds", tuple(self.seeds))
        problems = []
        if not self.vehicle_totals:
            problems.append("vehicle_totals is empty")
        if not self.methods:
            problems.append("methods is empty")
        if not self.seeds:
            problems.append("seeds is empty")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            problems.append(f"unknown methods {unknown}; choose from {list(METHODS)}")
        if self.monte_carlo_fading_draws < 0:
            problems.append("monte_carlo_fading_draws must be >= 0")
        if problems:
            raise ValueError("invalid sweep config: " + "; ".join(problems))


@dataclass(frozen=True)
class SweepRow:
    """One aggregated CSV row for a (total, method) sweep point."""

    total_vehicles: int
    method: str
    seed_count: int
    latency_ms_mean: float
    latency_ms_std: float
    qos_rate_mean: float
    subchannels_mean: float
    spectral_eff_mean: float
    coverage_failures: int


def evaluate_method(
    scenario: Scenario, method: str, *, gains: Optional[LinkGains] = None
) -> tuple[Allocation, MetricsReport]:
    """Allocate with one method and score it, reusing a shared gain table."""
    if method not in _METHOD_FUNCS:
        raise ValueError(f"unknown method {method!r}; choose from {list(METHODS)}")
    if gains is None:
        gains = LinkGains.from_scenario(scenario)
    allocation = _METHOD_FUNCS[method](scenario, gains=gains)
    return allocation, compute_metrics(scenario, allocation, gains=gains)


def _reliability_records(scenario, gains, allocation, method, draws, rng):
    """Fading outlook per match: closed form next to a Monte Carlo estimate.

    Both evaluate the worst receiver of each hop; empty hops are skipped.
    """
    params = scenario.params
    records = []
    for match in allocation.matches:
        boundary = allocation.prv_indices[match.platoon]
        segment = _receiver_segment(match, boundary, scenario.platoons[match.platoon].size)
        if len(segment) == 0:
            continue
        receivers = np.asarray(segment)
        tx = 0 if match.role == 0 else boundary
        gain = gains.intra_platoon[match.platoon][tx, receivers]
        if match.ie >= 0:
            interference = (
                gains.ie_power_mw[match.ie] * gains.ie_to_vehicle[match.platoon][match.ie, receivers]
            )
        else:
            interference = np.zeros_like(gain)
        sinr = match.power_mw * gain / (params.noise_mw + interference)
        worst = int(np.argmin(sinr))
        closed = success_probability(
            match.power_mw, float(gain[worst]), float(interference[worst]),
            params.noise_mw, params.gamma_thr,
        )
        beta = rng.standard_exponential(draws)
        empirical = float(np.mean(beta >= params.gamma_thr
                                  * (params.noise_mw + interference[worst])
                                  / (match.power_mw * gain[worst])))
        records.append({
            "method": method,
            "ie": match.ie,
            "subchannel": match.subchannel,
            "platoon": match.platoon,
            "role": match.role,
            "worst_receiver": int(receivers[worst]),
            "closed_form": closed,
            "empirical": empirical,
            "meets_threshold": bool(closed >= params.theta_th),
        })
    return records


def _dump_run(run_dir: Path, scenario, gains, results, config):
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / "scenario.json").write_text(scenario.to_json(), encoding="utf-8")
    for method, allocation in results:
        (run_dir / f"{method}.alloc.txt").write_text(allocation.to_text(), encoding="utf-8")
    if config.monte_carlo_fading_draws > 0:
        rng = np.random.default_rng([scenario.rng_seed, _FADING_STREAM])
        records = []
        for method, allocation in results:
            records.extend(_reliability_records(
                scenario, gains, allocation, method, config.monte_carlo_fading_draws, rng,
            ))
        payload = {
            "format": "reliability-v1",
            "draws": config.monte_carlo_fading_draws,
            "records": records,
        }
        (run_dir / "reliability.json").write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )


def run_sweep(config: SweepConfig, dump_dir: Optional[Path] = None) -> list[SweepRow]:
    """Run the full grid and aggregate across seeds per (total, method)."""
    per_point: dict[tuple[int, str], list[MetricsReport]] = {
        (total, method): [] for total in config.vehicle_totals for method in config.methods
    }
    for total in config.vehicle_totals:
        for seed in config.seeds:
            try:
                scenario = generate_scenario(config.params, total, seed)
                gains = LinkGains.from_scenario(scenario)
                results = []
                for method in config.methods:
                    allocation, report = evaluate_method(scenario, method, gains=gains)
                    per_point[(total, method)].append(report)
                    results.append((method, allocation))
            except Exception as exc:
                raise RuntimeError(f"sweep failed at total={total}, seed={seed}: {exc}") from exc
            if dump_dir is not None:
                run_dir = Path(dump_dir) / f"total_{total:03d}" / f"seed_{seed:04d}"
                _dump_run(run_dir, scenario, gains, results, config)

    rows = []
    for (total, method), reports in sorted(per_point.items()):
        latencies = np.array([r.avg_latency_ms for r in reports])
        rows.append(SweepRow(
            total_vehicles=total,
            method=method,
            seed_count=len(reports),
            latency_ms_mean=float(np.mean(latencies)),
            latency_ms_std=float(np.std(latencies)),
            qos_rate_mean=float(np.mean([r.qos_satisfaction_rate for r in reports])),
            subchannels_mean=float(np.mean([r.allocated_subchannels for r in reports])),
            spectral_eff_mean=float(np.mean([r.spectral_efficiency for r in reports])),
            coverage_failures=int(sum(r.coverage_failures for r in reports)),
        ))
    return rows


def emit_csv(rows: Sequence[SweepRow], path) -> None:
    """Write aggregated rows with full float precision, LF endings."""
    if not rows:
        raise ValueError("no sweep rows to emit")
    lines = [CSV_HEADER]
    for row in sorted(rows, key=lambda r: (r.total_vehicles, r.method)):
        lines.append(",".join([
            str(row.total_vehicles),
            row.method,
            str(row.seed_count),
            repr(float(row.latency_ms_mean)),
            repr(float(row.latency_ms_std)),
            repr(float(row.qos_rate_mean)),
            repr(float(row.subchannels_mean)),
            repr(float(row.spectral_eff_mean)),
            str(row.coverage_failures),
        ]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def parse_csv(path) -> list[SweepRow]:
    """Inverse of emit_csv; refuses files with a different header."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [line for line in text.split("\n") if line]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"unexpected CSV header in {path}")
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != 9:
            raise ValueError(f"malformed CSV row: {line!r}")
        rows.append(SweepRow(
            total_vehicles=int(cells[0]),
            method=cells[1],
            seed_count=int(cells[2]),
            latency_ms_mean=float(cells[3]),
            latency_ms_std=float(cells[4]),
            qos_rate_mean=float(cells[5]),
            subchannels_mean=float(cells[6]),
            spectral_eff_mean=float(cells[7]),
            coverage_failures=int(cells[8]),
        ))
    return rows


def load_config(path) -> SweepConfig:
    """Read a YAML sweep configuration.

    Top-level keys: params (mapping), vehicle_totals, methods, seeds
    (list, or an integer meaning seeds 0..n-1), monte_carlo_fading_draws.
    """
    raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ValueError(f"config root must be a mapping, got {type(raw).__name__}")
    known = {"params", "vehicle_totals", "methods", "seeds", "monte_carlo_fading_draws"}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ValueError(f"unknown config keys: {unknown}")
    kwargs = {}
    if "params" in raw:
        kwargs["params"] = ModelParams.from_mapping(raw["params"] or {})
    if "vehicle_totals" in raw:
        kwargs["vehicle_totals"] = tuple(int(t) for t in raw["vehicle_totals"])
    if "methods" in raw:
        kwargs["methods"] = tuple(raw["methods"])
    if "seeds" in raw:
        seeds = raw["seeds"]
        if isinstance(seeds, int):
            kwargs["seeds"] = tuple(range(seeds))
        else:
            kwargs["seeds"] = tuple(int(s) for s in seeds)
    if "monte_carlo_fading_draws" in raw:
        kwargs["monte_carlo_fading_draws"] = int(raw["monte_carlo_fading_draws"])
    return SweepConfig(**kwargs)
