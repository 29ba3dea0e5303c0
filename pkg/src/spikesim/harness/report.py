"""Report containers and byte-deterministic CSV/JSON emission.

Float fields are serialized with Python's shortest round-trip repr, dict keys
are emitted sorted, and volatile metadata (wall time) is excluded unless asked
for, so rerunning the same config reproduces identical bytes and
JSON -> load -> emit is idempotent.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .. import __version__
from .config import SweepConfig

CSV_COLUMNS = ("group", "n", "noise_model", "theta", "trial", "seed",
               "empirical_loss", "prediction_mean", "prediction_stderr")


@dataclass(frozen=True)
class TrialRecord:
    theta_index: int
    theta: float
    trial: int
    seed: str
    empirical_loss: float


@dataclass(frozen=True)
class ThetaSummary:
    theta: float
    empirical_mean: float
    empirical_std: float
    prediction_mean: float
    prediction_stderr: float
    mc_samples: int


@dataclass(frozen=True)
class SweepReport:
    config: SweepConfig
    records: tuple[TrialRecord, ...]
    summaries: tuple[ThetaSummary, ...]
    version: str = __version__
    wall_time_s: float | None = None

    def summary_for(self, theta_index: int) -> ThetaSummary:
        return self.summaries[theta_index]


def summarize_trials(theta: float, losses, prediction) -> ThetaSummary:
    """Aggregate per-trial losses with the per-theta prediction."""
    losses = np.asarray(losses, dtype=np.float64)
    std = float(losses.std(ddof=1)) if losses.size > 1 else 0.0
    return ThetaSummary(theta=float(theta), empirical_mean=float(losses.mean()),
                        empirical_std=std, prediction_mean=prediction.mean,
                        prediction_stderr=prediction.stderr,
                        mc_samples=prediction.n_samples)


def _fmt(x: float) -> str:
    """Shortest round-trip decimal for a float (stable across runs)."""
    if isinstance(x, float) and not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    return repr(float(x))


def write_sweep_csv(report: SweepReport, path: str) -> None:
    """One row per (theta, trial); per-theta prediction columns repeated."""
    lines = [",".join(CSV_COLUMNS)]
    cfg = report.config
    for rec in report.records:
        summ = report.summaries[rec.theta_index]
        lines.append(",".join([
            str(cfg.group), str(cfg.n), cfg.noise_model, _fmt(rec.theta),
            str(rec.trial), rec.seed, _fmt(rec.empirical_loss),
            _fmt(summ.prediction_mean), _fmt(summ.prediction_stderr),
        ]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _sweep_payload(report: SweepReport, include_timing: bool) -> dict:
    meta = {"package": "spikesim", "version": report.version}
    if include_timing and report.wall_time_s is not None:
        meta["wall_time_s"] = report.wall_time_s
    return {
        "config": report.config.echo(),
        "records": [
            {"theta_index": r.theta_index, "theta": r.theta, "trial": r.trial,
             "seed": r.seed, "empirical_loss": r.empirical_loss}
            for r in report.records
        ],
        "summaries": [
            {"theta": s.theta, "empirical_mean": s.empirical_mean,
             "empirical_std": s.empirical_std, "prediction_mean": s.prediction_mean,
             "prediction_stderr": s.prediction_stderr, "mc_samples": s.mc_samples}
            for s in report.summaries
        ],
        "meta": meta,
    }


def write_sweep_json(report: SweepReport, path: str, include_timing: bool = False) -> None:
    payload = _sweep_payload(report, include_timing)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_sweep_report(path: str) -> SweepReport:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    config = SweepConfig.from_echo(data["config"])
    records = tuple(
        TrialRecord(theta_index=int(r["theta_index"]), theta=float(r["theta"]),
                    trial=int(r["trial"]), seed=str(r["seed"]),
                    empirical_loss=float(r["empirical_loss"]))
        for r in data["records"])
    summaries = tuple(
        ThetaSummary(theta=float(s["theta"]), empirical_mean=float(s["empirical_mean"]),
                     empirical_std=float(s["empirical_std"]),
                     prediction_mean=float(s["prediction_mean"]),
                     prediction_stderr=float(s["prediction_stderr"]),
                     mc_samples=int(s["mc_samples"]))
        for s in data["summaries"])
    meta = data.get("meta", {})
    return SweepReport(config=config, records=records, summaries=summaries,
                       version=str(meta.get("version", __version__)),
                       wall_time_s=meta.get("wall_time_s"))


@dataclass(frozen=True)
class PairComparison:
    i: int
    j: int
    mean_a: float
    stderr_a: float
    mean_b: float
    stderr_b: float

    @property
    def abs_diff(self) -> float:
        return abs(self.mean_a - self.mean_b)

    @property
    def combined_stderr(self) -> float:
        return math.hypot(self.stderr_a, self.stderr_b)


@dataclass(frozen=True)
class UniversalityReport:
    config_echo: dict
    pairs: tuple[PairComparison, ...]
    version: str = __version__
    wall_time_s: float | None = None

    @property
    def max_abs_diff(self) -> float:
        return max(p.abs_diff for p in self.pairs)

    @property
    def max_sigma(self) -> float:
        """Largest |difference| / combined standard error over pairs."""
        return max(p.abs_diff / p.combined_stderr if p.combined_stderr > 0 else math.inf
                   for p in self.pairs)


UNIVERSALITY_CSV_COLUMNS = ("i", "j", "mean_a", "stderr_a", "mean_b", "stderr_b",
                            "abs_diff", "combined_stderr")


def write_universality_csv(report: UniversalityReport, path: str) -> None:
    lines = [",".join(UNIVERSALITY_CSV_COLUMNS)]
    for p in report.pairs:
        lines.append(",".join([
            str(p.i), str(p.j), _fmt(p.mean_a), _fmt(p.stderr_a),
            _fmt(p.mean_b), _fmt(p.stderr_b), _fmt(p.abs_diff),
            _fmt(p.combined_stderr),
        ]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_universality_json(report: UniversalityReport, path: str,
                            include_timing: bool = False) -> None:
    meta = {"package": "spikesim", "version": report.version}
    if include_timing and report.wall_time_s is not None:
        meta["wall_time_s"] = report.wall_time_s
    payload = {
        "config": report.config_echo,
        "pairs": [
            {"i": p.i, "j": p.j, "mean_a": p.mean_a, "stderr_a": p.stderr_a,
             "mean_b": p.mean_b, "stderr_b": p.stderr_b,
             "abs_diff": p.abs_diff, "combined_stderr": p.combined_stderr}
            for p in report.pairs
        ],
        "meta": meta,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
