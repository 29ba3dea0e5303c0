"""A/B comparison of outlier-eigenvector statistics across noise ensembles.

Two ensembles with matching off-diagonal second moments should produce the
same distribution of smooth eigenvector observables; this module runs the
paired experiment and reports per-pair means with standard errors.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..ensembles import (EnsembleSpec, SpikeConfig, build_spiked, moment_profile,
                         sample_ensemble)
from ..errors import ValidationError
from ..rng import stream
from ..spectral import top_eigenpair
from .config import UniversalityConfig, parse_ensemble
from .report import PairComparison, UniversalityReport

PHI_FUNCS = {"tanh": np.tanh, "cos": np.cos, "sin": np.sin}

# analytic profiles must agree to rounding error off the diagonal
MOMENT_MATCH_TOL = 1e-12


def check_moment_match(spec_a: EnsembleSpec, spec_b: EnsembleSpec) -> None:
    """Reject ensemble pairs whose off-diagonal second moments differ.

    Diagonal variances are exempt: they only enter at lower order and the
    classical ensembles disagree there by design.
    """
    if spec_a.n != spec_b.n:
        raise ValidationError(f"ensemble sizes differ: {spec_a.n} vs {spec_b.n}")
    pa, pb = moment_profile(spec_a), moment_profile(spec_b)
    if pa.field != pb.field:
        raise ValidationError("ensembles must share the same field "
                              f"(got {pa.field} vs {pb.field})")
    off = ~np.eye(spec_a.n, dtype=bool)
    for name, a, b in (("re", pa.re2, pb.re2), ("im", pa.im2, pb.im2),
                       ("cross", pa.cross, pb.cross)):
        worst = float(np.abs(a[off] - b[off]).max())
        if worst > MOMENT_MATCH_TOL:
            raise ValidationError(
                f"off-diagonal {name} second moments are not matched "
                f"(max deviation {worst:.3e})")


def check_delocalized(v: np.ndarray) -> None:
    n = v.shape[0]
    peak = float(np.abs(v).max())
    if peak > n ** -0.25:
        raise ValidationError(
            f"signal vector is too localized: max|v_i| = {peak:.4f} exceeds "
            f"n^(-1/4) = {n ** -0.25:.4f}")


def _pair_stats(group_free_vec: np.ndarray, pairs, phi, n: int) -> np.ndarray:
    v = group_free_vec
    idx_i = np.array([p[0] for p in pairs])
    idx_j = np.array([p[1] for p in pairs])
    raw = n * np.real(v[idx_i] * np.conj(v[idx_j]))
    return phi(raw)


def run_universality_ab(spec_a: EnsembleSpec, spec_b: EnsembleSpec, v: np.ndarray,
                        theta: float, phi, pairs, trials: int, seed: int,
                        workers: int = 1, config_echo: dict | None = None,
                        ) -> UniversalityReport:
    """Compare phi(n * Re(u_i conj(u_j))) of the outlier eigenvector u between
    two moment-matched ensembles, with the same planted direction v.

    The two arms use independent streams keyed off ``seed``; matching is in
    distribution, not pathwise, so the comparison happens at the level of
    per-pair means and standard errors.
    """
    start = time.perf_counter()
    check_moment_match(spec_a, spec_b)
    n = spec_a.n
    v = np.asarray(v)
    if v.shape != (n,):
        raise ValidationError(f"signal vector must have shape ({n},), got {v.shape}")
    if abs(np.linalg.norm(v) - 1.0) > 1e-8:
        raise ValidationError("signal vector must be unit norm")
    field = moment_profile(spec_a).field
    if field == "R" and np.iscomplexobj(v) and np.abs(v.imag).max() != 0.0:
        raise ValidationError("real-field ensembles need a real signal vector")
    check_delocalized(v)
    if trials < 2:
        raise ValidationError("need at least 2 trials for standard errors")
    pairs = [(int(i), int(j)) for i, j in pairs]
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise ValidationError(f"invalid index pair ({i}, {j}) for n = {n}")
    phi_name = phi if isinstance(phi, str) else getattr(phi, "__name__", "custom")
    if isinstance(phi, str):
        if phi not in PHI_FUNCS:
            raise ValidationError(f"unknown statistic {phi!r}")
        phi = PHI_FUNCS[phi]
    spike = SpikeConfig(theta, v)

    def one_trial(task):
        label, spec, t = task
        w = sample_ensemble(spec, stream(seed, "universality", label, t))
        est = top_eigenpair(build_spiked(spike, w))
        return _pair_stats(est.eigenvector, pairs, phi, n)

    tasks = [(label, spec, t) for label, spec in (("a", spec_a), ("b", spec_b))
             for t in range(trials)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one_trial, tasks))
    else:
        rows = [one_trial(task) for task in tasks]
    stats_a = np.array(rows[:trials])
    stats_b = np.array(rows[trials:])
    root = np.sqrt(trials)
    comparisons = []
    for k, (i, j) in enumerate(pairs):
        comparisons.append(PairComparison(
            i=i, j=j,
            mean_a=float(stats_a[:, k].mean()),
            stderr_a=float(stats_a[:, k].std(ddof=1) / root),
            mean_b=float(stats_b[:, k].mean()),
            stderr_b=float(stats_b[:, k].std(ddof=1) / root)))
    if config_echo is None:
        config_echo = {
            "ensemble_a": _spec_echo(spec_a), "ensemble_b": _spec_echo(spec_b),
            "n": n, "theta": float(theta), "phi": phi_name,
            "n_pairs": len(pairs), "trials": trials, "master_seed": seed,
            "signal": "explicit",
        }
    return UniversalityReport(config_echo=config_echo, pairs=tuple(comparisons),
                              wall_time_s=time.perf_counter() - start)


def _spec_echo(spec: EnsembleSpec) -> str:
    if spec.kind == "generalized-wigner":
        tag = f"wigner:{spec.entry_law}"
        return tag + ":c" if spec.field == "C" else tag
    return spec.kind


def _signal_vector(kind: str, n: int, field: str, rng) -> np.ndarray:
    if kind == "uniform":
        v = np.ones(n)
    elif field == "C":
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    else:
        v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def _draw_pairs(n: int, n_pairs: int, rng) -> list[tuple[int, int]]:
    if n_pairs > n * (n - 1) // 2:
        raise ValidationError(f"cannot draw {n_pairs} distinct pairs from n = {n}")
    seen: set[tuple[int, int]] = set()
    out: list[tuple[int, int]] = []
    while len(out) < n_pairs:
        i = int(rng.integers(n))
        j = int(rng.integers(n))
        if i == j:
            continue
        if i > j:
            i, j = j, i
        if (i, j) in seen:
            continue
        seen.add((i, j))
        out.append((i, j))
    return out


def run_universality_config(config: UniversalityConfig, workers: int = 1,
                            ) -> UniversalityReport:
    """Config-file front end: build the signal and the index pairs from the
    master seed, then run the A/B comparison."""
    spec_a = parse_ensemble(config.ensemble_a, config.n)
    spec_b = parse_ensemble(config.ensemble_b, config.n)
    field = moment_profile(spec_a).field
    v = _signal_vector(config.signal, config.n, field,
                       stream(config.master_seed, "signal"))
    pairs = _draw_pairs(config.n, config.n_pairs,
                        stream(config.master_seed, "pairs"))
    return run_universality_ab(spec_a, spec_b, v, config.theta, config.phi, pairs,
                               config.trials, config.master_seed, workers=workers,
                               config_echo=config.echo())
