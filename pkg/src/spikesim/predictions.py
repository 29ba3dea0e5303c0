"""Limiting values of the averaged entrywise loss, by Monte Carlo and closed form.

Above the transition the rounded spectral estimator's average loss converges
to a fixed-dimension expectation: two Haar group elements x, y and two
standard F-Gaussians g, h, with the estimator entry modeled as

    (rho * chi(x) + tau * g) * (rho * conj(chi(y)) + tau * conj(h)),

where rho^2 is the limiting squared overlap and tau^2 = 1 - rho^2.  The field
F is R exactly when the group is Z/2 (real observation matrix), else C.  For
Z/2 with mismatch loss the expectation reduces in closed form to 2q(1-q) with
q = Phi(-sqrt(theta^2 - 1)).

Sampling is chunked with an independent named stream per chunk and a fixed
reduction order, so estimates are reproducible for a given (seed, chunk_size)
no matter how chunks are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .groups import (CyclicGroup, Group, LossSpec, character, difference,
                     haar_sample, loss_values, round_to_group)
from .limits import overlap_limit, residual_variance_limit
from .rng import stream

MIN_SAMPLES = 1000
DEFAULT_SAMPLES = 10 ** 6
DEFAULT_CHUNK = 1 << 20


@dataclass(frozen=True)
class PredictionEstimate:
    """Monte Carlo estimate of a limiting loss value.

    ``stderr`` is the sample standard deviation divided by sqrt(n_samples).
    """

    mean: float
    stderr: float
    n_samples: int
    theta: float
    label: str

    def __post_init__(self):
        if self.n_samples < MIN_SAMPLES:
            raise ValidationError(f"need at least {MIN_SAMPLES} samples, got {self.n_samples}")


def _check_supercritical(theta: float) -> float:
    theta = float(theta)
    if not np.isfinite(theta) or theta <= 1.0:
        raise ValueError(f"the limit formula requires theta > 1, got {theta!r}")
    return theta


def _gaussians(rng: np.random.Generator, m: int, field: str) -> np.ndarray:
    if field == "R":
        return rng.standard_normal(m)
    return (rng.standard_normal(m) + 1.0j * rng.standard_normal(m)) / np.sqrt(2.0)


def _chunked_mc(sample_fn, n_samples: int, seed: int, chunk_size: int):
    """Accumulate chunk sums in chunk order; returns (mean, stderr)."""
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    total = 0.0
    total_sq = 0.0
    done = 0
    index = 0
    while done < n_samples:
        m = min(chunk_size, n_samples - done)
        vals = sample_fn(stream(seed, "chunk", index), m)
        total += float(vals.sum())
        total_sq += float(np.square(vals).sum())
        done += m
        index += 1
    mean = total / n_samples
    var = max(0.0, total_sq - n_samples * mean * mean) / max(1, n_samples - 1)
    return mean, math.sqrt(var / n_samples)


def predict_sync_loss(group: Group, theta: float, rounding: str = None,
                      loss: LossSpec = None, n_samples: int = DEFAULT_SAMPLES,
                      seed: int = 0, chunk_size: int = DEFAULT_CHUNK) -> PredictionEstimate:
    """Monte Carlo value of the limiting average loss for a synchronization run.

    Samples x, y Haar on the group and g, h standard F-Gaussians (F = R iff
    the group is Z/2), rounds the modeled estimator entry back to the group,
    and averages loss(x * y^{-1}, rounded value).
    """
    theta = _check_supercritical(theta)
    if n_samples < MIN_SAMPLES:
        raise ValidationError(f"need at least {MIN_SAMPLES} samples, got {n_samples}")
    if not isinstance(seed, (int, np.integer)):
        raise TypeError("seed must be an int (named chunk streams are derived from it)")
    if rounding is None:
        rounding = "nearest-character" if isinstance(group, CyclicGroup) else "phase"
    if loss is None:
        loss = "mismatch" if isinstance(group, CyclicGroup) else "one-minus-cos"
    field = "R" if isinstance(group, CyclicGroup) and group.order == 2 else "C"
    rho = math.sqrt(overlap_limit(theta))
    tau = math.sqrt(residual_variance_limit(theta))

    def draw(rng: np.random.Generator, m: int) -> np.ndarray:
        x = haar_sample(group, m, rng)
        y = haar_sample(group, m, rng)
        g = _gaussians(rng, m, field)
        h = _gaussians(rng, m, field)
        prod = (rho * character(group, x) + tau * g) \
            * (rho * np.conj(character(group, y)) + tau * np.conj(h))
        decoded = round_to_group(group, prod, rounding)
        return loss_values(group, difference(group, x, y), decoded, loss)

    mean, err = _chunked_mc(draw, int(n_samples), int(seed), int(chunk_size))
    label = f"{group} {loss if isinstance(loss, str) else 'table'} {rounding}"
    return PredictionEstimate(mean=mean, stderr=err, n_samples=int(n_samples),
                              theta=theta, label=label)


def predict_entrywise(signal_sampler, psi, theta: float, field: str = "C",
                      n_samples: int = DEFAULT_SAMPLES, seed: int = 0,
                      chunk_size: int = DEFAULT_CHUNK,
                      label: str = "entrywise") -> PredictionEstimate:
    """Limiting average of a bounded test function of (true, estimated) entries.

    ``signal_sampler(rng, m)`` draws m scalars from the signal-coordinate
    distribution (unit-modulus values in the synchronization case, but any
    bounded law is allowed).  ``psi(first, second)`` maps the true product
    v * conj(w) and the modeled estimate
    (rho*v + tau*g)(rho*conj(w) + tau*h) to real values, vectorized.
    """
    theta = _check_supercritical(theta)
    if field not in ("R", "C"):
        raise ValidationError(f"field must be 'R' or 'C', got {field!r}")
    if n_samples < MIN_SAMPLES:
        raise ValidationError(f"need at least {MIN_SAMPLES} samples, got {n_samples}")
    if not isinstance(seed, (int, np.integer)):
        raise TypeError("seed must be an int")
    rho = math.sqrt(overlap_limit(theta))
    tau = math.sqrt(residual_variance_limit(theta))

    def draw(rng: np.random.Generator, m: int) -> np.ndarray:
        v = np.asarray(signal_sampler(rng, m))
        w = np.asarray(signal_sampler(rng, m))
        g = _gaussians(rng, m, field)
        h = _gaussians(rng, m, field)
        first = v * np.conj(w)
        second = (rho * v + tau * g) * (rho * np.conj(w) + tau * h)
        vals = np.asarray(psi(first, second), dtype=np.float64)
        if vals.shape != (m,):
            raise ValidationError("psi must return one real value per sample")
        return vals

    mean, err = _chunked_mc(draw, int(n_samples), int(seed), int(chunk_size))
    return PredictionEstimate(mean=mean, stderr=err, n_samples=int(n_samples),
                              theta=theta, label=label)


def z2_mismatch_exact(theta: float) -> float:
    """Closed-form limit of the Z/2 mismatch loss: 2q(1-q), q = Phi(-sqrt(theta^2-1)).

    With sign rounding an entry is misclassified iff exactly one of the two
    factors rho + tau*g, rho + tau*h is negative (the four sign patterns of
    (chi(x), chi(y)) are symmetric), and each factor is negative with
    probability Phi(-rho/tau).  Phi is evaluated through erfc, accurate to
    well below 1e-12.
    """
    theta = _check_supercritical(theta)
    q = 0.5 * math.erfc(math.sqrt(theta * theta - 1.0) / math.sqrt(2.0))
    return 2.0 * q * (1.0 - q)
