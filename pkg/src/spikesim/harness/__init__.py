"""Experiment orchestration: configs, sweeps, universality A/B, reports, plots, CLI."""

from .config import (SweepConfig, UniversalityConfig, parse_ensemble,
                     parse_sweep_config, parse_universality_config)
from .report import (PairComparison, SweepReport, ThetaSummary, TrialRecord,
                     UniversalityReport, load_sweep_report, write_sweep_csv,
                     write_sweep_json, write_universality_csv,
                     write_universality_json)
from .svgplot import render_sweep_svg, write_sweep_svg
from .sweep import run_sweep
from .universality import run_universality_ab, run_universality_config

__all__ = [
    "SweepConfig", "UniversalityConfig", "parse_sweep_config",
    "parse_universality_config", "parse_ensemble", "SweepReport", "TrialRecord",
    "ThetaSummary", "PairComparison", "UniversalityReport", "load_sweep_report",
    "write_sweep_csv", "write_sweep_json", "write_universality_csv",
    "write_universality_json", "render_sweep_svg", "write_sweep_svg", "run_sweep",
    "run_universality_ab", "run_universality_config",
]
