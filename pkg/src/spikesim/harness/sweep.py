"""Run theta sweeps of the full synchronization pipeline."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..ensembles import (SpikeConfig, build_spiked, sample_goe, sample_gue,
                         sample_truth_or_haar, sync_observation_matrix)
from ..groups import (CyclicGroup, average_loss, character, estimate_group_matrix,
                      haar_sample, pairwise_matrix)
from ..predictions import predict_sync_loss
from ..rng import derive_key, stream
from ..spectral import top_eigenpair
from .config import SweepConfig
from .report import SweepReport, ThetaSummary, TrialRecord, summarize_trials


def _planted_vector(group, x, n: int) -> np.ndarray:
    v = character(group, x) / np.sqrt(n)
    if isinstance(group, CyclicGroup) and group.order == 2:
        return v.real.copy()
    return v


def _run_trial(config: SweepConfig, theta_index: int, theta: float, trial: int) -> TrialRecord:
    group = config.group
    n = config.n
    trial_key = derive_key(config.master_seed, "sweep", theta_index, trial)
    x = haar_sample(group, n, stream(trial_key, "signal"))
    noise_rng = stream(trial_key, "noise")
    if config.noise_model == "truth-or-haar":
        p = theta / np.sqrt(n)
        y = sample_truth_or_haar(group, x, p, noise_rng)
        h = sync_observation_matrix(group, y)
    else:
        v = _planted_vector(group, x, n)
        real_case = isinstance(group, CyclicGroup) and group.order == 2
        noise = sample_goe(n, noise_rng) if real_case else sample_gue(n, noise_rng)
        h = build_spiked(SpikeConfig(theta, v), noise)
    estimate = top_eigenpair(h)
    m_hat = estimate_group_matrix(group, estimate.eigenvector, config.rounding)
    m_true = pairwise_matrix(group, x)
    loss = average_loss(group, m_true, m_hat, config.loss)
    return TrialRecord(theta_index=theta_index, theta=float(theta), trial=trial,
                       seed=str(trial_key), empirical_loss=loss)


def run_sweep(config: SweepConfig, workers: int = 1) -> SweepReport:
    """Execute every (theta, trial) cell and attach per-theta predictions.

    Each cell draws from streams named by (master_seed, theta-index, trial),
    and results are collected in task order, so the report is identical for
    any ``workers`` value; threads only buy wall time (the eigensolver releases
    the GIL).
    """
    start = time.perf_counter()
    tasks = [(ti, theta, t) for ti, theta in enumerate(config.theta_grid)
             for t in range(config.trials)]
    if workers > 1 and tasks:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = tuple(pool.map(lambda args: _run_trial(config, *args), tasks))
    else:
        records = tuple(_run_trial(config, *args) for args in tasks)
    summaries = []
    for ti, theta in enumerate(config.theta_grid):
        prediction = predict_sync_loss(
            config.group, theta, rounding=config.rounding, loss=config.loss,
            n_samples=config.mc_samples,
            seed=derive_key(config.master_seed, "prediction", ti))
        losses = [r.empirical_loss for r in records if r.theta_index == ti]
        summaries.append(summarize_trials(theta, losses, prediction))
    return SweepReport(config=config, records=records, summaries=tuple(summaries),
                       wall_time_s=time.perf_counter() - start)
