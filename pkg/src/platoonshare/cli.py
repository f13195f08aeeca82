"""Command-line driver for seeded evaluation sweeps."""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from .sweep import METHODS, SweepConfig, emit_csv, load_config, run_sweep


def _parse_totals(text: str) -> tuple:
    """Accept '15..55:5' (inclusive range), '15..55', or '15,20,25'."""
    text = text.strip()
    if ".." in text:
        start_text, _, rest = text.partition("..")
        end_text, _, step_text = rest.partition(":")
        start, end = int(start_text), int(end_text)
        step = int(step_text) if step_text else 1
        if step <= 0:
            raise ValueError(f"totals step must be positive in {text!r}")
        if end < start:
            raise ValueError(f"totals range {text!r} is empty")
        return tuple(range(start, end + 1, step))
    return tuple(int(part) for part in text.split(","))


def _parse_methods(text: str) -> tuple:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="platoonshare",
        description="Groupcast resource-sharing simulator for vehicle platoons.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser(
        "simulate", help="run a seeded sweep and write an aggregate CSV"
    )
    simulate.add_argument("--config", type=Path, default=None,
                          help="YAML sweep configuration; flags override its values")
    simulate.add_argument("--totals", type=str, default=None,
                          help="vehicle totals, e.g. 15..55:5 or 15,25,35")
    simulate.add_argument("--methods", type=str, default=None,
                          help=f"comma-separated subset of {','.join(METHODS)}")
    simulate.add_argument("--seeds", type=int, default=None,
                          help="number of seeds per sweep point (seeds 0..N-1)")
    simulate.add_argument("--mc-draws", type=int, default=None,
                          help="fading draws for reliability dumps (0 disables)")
    simulate.add_argument("--out", type=Path, default=Path("results.csv"),
                          help="aggregate CSV output path")
    simulate.add_argument("--dump-dir", type=Path, default=None,
                          help="write per-run scenario and allocation artifacts here")
    return parser


def _simulate(ns: argparse.Namespace) -> int:
    config = load_config(ns.config) if ns.config is not None else SweepConfig()
    overrides = {}
    if ns.totals is not None:
        overrides["vehicle_totals"] = _parse_totals(ns.totals)
    if ns.methods is not None:
        overrides["methods"] = _parse_methods(ns.methods)
    if ns.seeds is not None:
        if ns.seeds <= 0:
            raise ValueError("--seeds must be a positive count")
        overrides["seeds"] = tuple(range(ns.seeds))
    if ns.mc_draws is not None:
        if ns.mc_draws < 0:
            raise ValueError("--mc-draws must be >= 0")
        overrides["monte_carlo_fading_draws"] = ns.mc_draws
    if overrides:
        config = replace(config, **overrides)

    rows = run_sweep(config, dump_dir=ns.dump_dir)
    emit_csv(rows, ns.out)
    print(f"wrote {len(rows)} rows to {ns.out}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.command == "simulate":
            return _simulate(ns)
        parser.error(f"unknown command {ns.command!r}")
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
