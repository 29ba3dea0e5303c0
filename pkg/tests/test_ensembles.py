"""Noise ensemble samplers: symmetry, moments, determinism, sync model."""

import numpy as np
import pytest

from spikesim import (
    EnsembleSpec,
    HermitianMatrix,
    SpikeConfig,
    ValidationError,
    build_spiked,
    character,
    derive_key,
    is_group_hermitian,
    moment_profile,
    pairwise_matrix,
    parse_group,
    sample_ensemble,
    sample_goe,
    sample_gue,
    sample_generalized_wigner,
    sample_truth_or_haar,
    stream,
    sync_observation_matrix,
    validate_ensemble_spec,
    validate_wigner_moment_profile,
)
from spikesim.ensembles import circle_distance
from spikesim.groups import haar_sample

Z2 = parse_group("Z/2")
Z5 = parse_group("Z/5")
U1 = parse_group("U(1)")


# ---------------------------------------------------------------- spec checks

def test_spec_rejects_unknown_kind_and_law():
    with pytest.raises(ValidationError):
        EnsembleSpec(kind="wishart", n=10)
    with pytest.raises(ValidationError):
        EnsembleSpec(kind="generalized-wigner", n=10, entry_law="cauchy")
    with pytest.raises(ValidationError):
        EnsembleSpec(kind="generalized-wigner", n=10)  # law required


def test_spec_field_constraints():
    with pytest.raises(ValidationError):
        EnsembleSpec(kind="goe", n=10, field="C")
    with pytest.raises(ValidationError):
        EnsembleSpec(kind="gue", n=10, field="R")
    with pytest.raises(ValidationError):
        EnsembleSpec(kind="goe", n=10, entry_law="gaussian")
    with pytest.raises(ValidationError):
        EnsembleSpec(kind="generalized-wigner", n=10, entry_law="gaussian", field="Q")


def test_spec_dimension_validation():
    with pytest.raises(ValidationError):
        EnsembleSpec(kind="goe", n=0)
    with pytest.raises(ValidationError):
        EnsembleSpec(kind="goe", n=2.5)
    spec = EnsembleSpec(kind="goe", n=7.0)
    assert spec.n == 7 and isinstance(spec.n, int)


def test_profile_row_sum_validation():
    n = 6
    prof = np.full((n, n), 1.0 / n)
    good = EnsembleSpec(kind="generalized-wigner", n=n, entry_law="gaussian",
                        variance_profile=prof)
    validate_ensemble_spec(good)  # flat rows sum to 1 exactly enough

    bad = prof.copy()
    bad[2, :] += 1e-3 / n
    bad[:, 2] = bad[2, :]
    spec = EnsembleSpec(kind="generalized-wigner", n=n, entry_law="gaussian",
                        variance_profile=bad)
    with pytest.raises(ValidationError, match="sum to 1"):
        validate_ensemble_spec(spec)


def test_profile_gamma_bounds():
    n = 8
    # symmetric transfer within rows 0 and 1 keeps row sums at 1 but drives
    # n*sigma^2_01 down to 0.1, below 1/gamma for gamma = 2
    prof = np.full((n, n), 1.0 / n)
    delta = 0.9 / n
    prof[0, 1] = prof[1, 0] = 1.0 / n - delta
    prof[0, 0] += delta
    prof[1, 1] += delta
    spec = EnsembleSpec(kind="generalized-wigner", n=n, entry_law="gaussian",
                        variance_profile=prof, gamma_w=2.0)
    with pytest.raises(ValidationError, match="n\\*sigma\\^2"):
        validate_ensemble_spec(spec)
    loose = EnsembleSpec(kind="generalized-wigner", n=n, entry_law="gaussian",
                         variance_profile=prof, gamma_w=10.0)
    validate_ensemble_spec(loose)  # 0.1 is exactly the loose lower edge
    with pytest.raises(ValidationError):
        EnsembleSpec(kind="goe", n=4, gamma_w=0.5)
    with pytest.raises(ValidationError, match="nonnegative"):
        neg = np.full((n, n), 1.0 / n)
        neg[0, 1] = neg[1, 0] = -1.0 / n
        neg[0, 0] += 2.0 / n
        neg[1, 1] += 2.0 / n
        validate_ensemble_spec(EnsembleSpec(kind="generalized-wigner", n=n,
                                            entry_law="gaussian", variance_profile=neg))


def test_profile_symmetry_and_shape_validation():
    n = 5
    asym = np.full((n, n), 1.0 / n)
    asym[0, 1] = 2.0 / n
    spec = EnsembleSpec(kind="generalized-wigner", n=n, entry_law="gaussian",
                        variance_profile=asym)
    with pytest.raises(ValidationError, match="symmetric"):
        validate_ensemble_spec(spec)
    wrong = EnsembleSpec(kind="generalized-wigner", n=n, entry_law="gaussian",
                         variance_profile=np.full((n + 1, n + 1), 1.0 / (n + 1)))
    with pytest.raises(ValidationError, match="shape"):
        validate_ensemble_spec(wrong)


# ------------------------------------------------------------------ gaussians

def test_goe_exact_symmetry_and_dtype():
    w = sample_goe(50, 0)
    assert w.is_real
    assert np.array_equal(w.entries, w.entries.T)


def test_goe_scalar_variances():
    # n = 1: the single entry is 2*g/sqrt(2), variance 2
    draws = np.array([sample_goe(1, derive_key(0, "goe1", i)).entries[0, 0]
                      for i in range(4000)])
    assert abs(draws.mean()) < 4.0 * draws.std() / np.sqrt(draws.size)
    assert abs(draws.var() - 2.0) < 0.15

    # pooled off-diagonal moments at n = 40
    offs = []
    iu = np.triu_indices(40, 1)
    for i in range(50):
        offs.append(sample_goe(40, derive_key(0, "goe40", i)).entries[iu])
    off = np.concatenate(offs)
    se = off.std(ddof=1) / np.sqrt(off.size)
    assert abs(off.mean()) <= 4.0 * se
    assert abs(off.var() - 1.0 / 40) < 0.002


def test_gue_hermitian_complex():
    w = sample_gue(50, 0)
    assert not w.is_real
    assert np.array_equal(w.entries, w.entries.conj().T)
    assert np.all(np.diag(w.entries).imag == 0)


def test_gue_entry_variances():
    # n = 1 reduces to a real N(0, 1) scalar
    draws = np.array([sample_gue(1, derive_key(0, "gue1", i)).entries[0, 0].real
                      for i in range(4000)])
    assert abs(draws.var() - 1.0) < 0.1

    n = 40
    iu = np.triu_indices(n, 1)
    offs = []
    for i in range(50):
        offs.append(sample_gue(n, derive_key(0, "gue40", i)).entries[iu])
    off = np.concatenate(offs)
    # E|W_12|^2 = 1/n, split evenly between the parts
    assert abs(np.mean(np.abs(off) ** 2) - 1.0 / n) < 0.002
    assert abs(np.mean(off.real ** 2) - 0.5 / n) < 0.002
    assert abs(np.mean(off.real * off.imag)) < 0.001


def test_spectral_norm_near_bulk_edge():
    w = sample_goe(1000, 7)
    assert 1.8 <= w.operator_norm() <= 2.2
    z = sample_gue(500, 7)
    assert 1.8 <= z.operator_norm() <= 2.2


# --------------------------------------------------------- generalized wigner

def flat_spec(n, law, field="R", kind="generalized-wigner"):
    return EnsembleSpec(kind=kind, n=n, entry_law=law, field=field)


def test_rademacher_entries_are_signs():
    n = 30
    w = sample_generalized_wigner(flat_spec(n, "rademacher"), 3).entries
    assert np.all(np.abs(np.abs(w) - 1.0 / np.sqrt(n)) < 1e-15)


def test_uniform_centered_entries_bounded():
    n = 30
    w = sample_generalized_wigner(flat_spec(n, "uniform-centered"), 3).entries
    off = w[np.triu_indices(n, 1)]
    assert np.all(np.abs(off) <= np.sqrt(3.0 / n) + 1e-15)
    assert off.std() > 0


def test_complex_field_splits_variance():
    n = 40
    offs = []
    iu = np.triu_indices(n, 1)
    for i in range(40):
        spec = flat_spec(n, "gaussian", field="C")
        offs.append(sample_generalized_wigner(spec, derive_key(0, "gw", i)).entries[iu])
    off = np.concatenate(offs)
    assert abs(np.mean(off.real ** 2) - 0.5 / n) < 0.002
    assert abs(np.mean(off.imag ** 2) - 0.5 / n) < 0.002
    assert abs(np.mean(off.real * off.imag)) < 0.001


def test_complex_rademacher_is_hermitian_not_real():
    w = sample_generalized_wigner(flat_spec(20, "rademacher", field="C"), 1)
    assert not w.is_real
    assert np.array_equal(w.entries, w.entries.conj().T)
    assert np.all(np.diag(w.entries).imag == 0)  # diagonal stays real


def test_sampler_rejects_goe_spec():
    with pytest.raises(ValidationError):
        sample_generalized_wigner(EnsembleSpec(kind="goe", n=10), 0)


def test_weakly_wigner_kind_uses_same_sampler():
    a = sample_generalized_wigner(flat_spec(25, "gaussian"), 9).entries
    b = sample_generalized_wigner(flat_spec(25, "gaussian", kind="weakly-wigner"), 9).entries
    assert np.array_equal(a, b)


def test_dispatch_matches_direct_samplers():
    assert np.array_equal(sample_ensemble(EnsembleSpec(kind="goe", n=15), 4).entries,
                          sample_goe(15, 4).entries)
    assert np.array_equal(sample_ensemble(EnsembleSpec(kind="gue", n=15, field="C"), 4).entries,
                          sample_gue(15, 4).entries)


def test_samplers_bit_deterministic():
    for spec in (EnsembleSpec(kind="goe", n=20),
                 EnsembleSpec(kind="gue", n=20, field="C"),
                 flat_spec(20, "rademacher"),
                 flat_spec(20, "uniform-centered", field="C")):
        a = sample_ensemble(spec, 123).entries
        b = sample_ensemble(spec, 123).entries
        assert np.array_equal(a, b)
        c = sample_ensemble(spec, 124).entries
        assert not np.array_equal(a, c)


# ---------------------------------------------------------------------- spike

def test_spike_config_validation():
    v = np.ones(4) / 2.0
    SpikeConfig(theta=0.0, v=v)  # pure noise allowed
    with pytest.raises(ValidationError):
        SpikeConfig(theta=-0.5, v=v)
    with pytest.raises(ValidationError):
        SpikeConfig(theta=np.inf, v=v)
    with pytest.raises(ValidationError):
        SpikeConfig(theta=1.5, v=np.ones(4))  # norm 2
    with pytest.raises(ValidationError):
        SpikeConfig(theta=1.5, v=np.ones((2, 2)) / 2.0)


def test_build_spiked_zero_noise():
    n = 6
    v = np.ones(n) / np.sqrt(n)
    h = build_spiked(SpikeConfig(theta=2.5, v=v), HermitianMatrix(np.zeros((n, n))))
    assert np.allclose(h.entries, 2.5 * np.outer(v, v), atol=1e-15)
    assert abs(np.trace(h.entries) - 2.5) < 1e-10


def test_build_spiked_dtype_paths():
    n = 8
    v = np.ones(n) / np.sqrt(n)
    real = build_spiked(SpikeConfig(theta=1.2, v=v), sample_goe(n, 0))
    assert real.is_real
    cplx = build_spiked(SpikeConfig(theta=1.2, v=v), sample_gue(n, 0))
    assert cplx.entries.dtype == np.complex128
    # complex signal forces the complex path even over real noise
    vc = np.full(n, 1.0 / np.sqrt(n), dtype=np.complex128)
    vc[0] *= 1.0j
    mixed = build_spiked(SpikeConfig(theta=1.2, v=vc), sample_goe(n, 0))
    assert mixed.entries.dtype == np.complex128


def test_build_spiked_dimension_mismatch():
    v = np.ones(4) / 2.0
    with pytest.raises(ValidationError):
        build_spiked(SpikeConfig(theta=1.0, v=v), sample_goe(5, 0))


# -------------------------------------------------------------- truth or haar

def test_truth_or_haar_degenerate_p():
    rng = stream(11, "toh")
    for group in (Z5, U1):
        x = haar_sample(group, 12, rng)
        y = sample_truth_or_haar(group, x, 1.0, stream(11, "p1"))
        d = pairwise_matrix(group, x)
        if group is Z5:
            assert np.array_equal(y, d)  # all-truth, exact for residues
        else:
            # lower triangle goes through angle inversion, so only equal up
            # to wrap-around rounding
            assert np.all(circle_distance(y, d) < 1e-12)
        assert is_group_hermitian(group, y)
    with pytest.raises(ValueError):
        sample_truth_or_haar(Z5, haar_sample(Z5, 5, rng), 1.5, 0)
    with pytest.raises(ValueError):
        sample_truth_or_haar(Z5, haar_sample(Z5, 5, rng), -0.1, 0)


def test_truth_or_haar_agreement_rate():
    # P(Y_ij = d_ij) = p + (1-p)/L for cyclic groups
    n, p = 2000, 0.3
    x = haar_sample(Z5, n, stream(12, "x"))
    y = sample_truth_or_haar(Z5, x, p, stream(12, "y"))
    d = pairwise_matrix(Z5, x)
    iu = np.triu_indices(n, 1)
    agree = np.mean(y[iu] == d[iu])
    expect = p + (1.0 - p) / 5.0
    se = np.sqrt(expect * (1.0 - expect) / iu[0].size)
    # 4 sigma: the seed is frozen, but leave headroom (one stream here sits
    # right at 3.0 sigma)
    assert abs(agree - expect) <= 4.0 * se

    # p = 0 is pure Haar: agreement only by chance
    y0 = sample_truth_or_haar(Z5, x, 0.0, stream(12, "y0"))
    agree0 = np.mean(y0[iu] == d[iu])
    se0 = np.sqrt(0.2 * 0.8 / iu[0].size)
    assert abs(agree0 - 0.2) <= 4.0 * se0


def test_truth_or_haar_group_hermitian_structure():
    for group in (Z2, Z5, U1):
        x = haar_sample(group, 30, stream(13, "x", str(group)))
        y = sample_truth_or_haar(group, x, 0.4, stream(13, "y", str(group)))
        assert is_group_hermitian(group, y)
        assert np.all(np.diag(y) == 0)
        if group is Z5:
            assert np.array_equal(y.T, np.mod(-y, 5))


def test_sync_observation_z2_exactly_real():
    n = 40
    x = haar_sample(Z2, n, stream(14, "x"))
    y = sample_truth_or_haar(Z2, x, 0.5, stream(14, "y"))
    h = sync_observation_matrix(Z2, y)
    assert h.is_real
    vals = np.unique(np.abs(h.entries))
    assert np.allclose(vals, 1.0 / np.sqrt(n))
    assert np.all(np.diag(h.entries) == 1.0 / np.sqrt(n))


def test_sync_observation_conditional_mean():
    # E[chi(Y_ij) * conj(chi(d_ij))] = p for a nontrivial character
    n, p = 400, 0.3
    for group in (Z5, U1):
        x = haar_sample(group, n, stream(15, "x", str(group)))
        y = sample_truth_or_haar(group, x, p, stream(15, "y", str(group)))
        h = sync_observation_matrix(group, y)
        d = pairwise_matrix(group, x)
        iu = np.triu_indices(n, 1)
        prod = h.entries[iu] * np.sqrt(n) * np.conj(character(group, d[iu]))
        se = prod.real.std(ddof=1) / np.sqrt(prod.size)
        assert abs(prod.real.mean() - p) <= 4.0 * se
        assert abs(prod.imag.mean()) <= 4.0 * max(se, 1e-12)


def test_sync_observation_rejects_broken_input():
    y = np.zeros((5, 5), dtype=np.int64)
    y[0, 1] = 2
    y[1, 0] = 2  # should be the inverse, 3
    with pytest.raises(ValidationError):
        sync_observation_matrix(Z5, y)


def test_circle_sync_observation_hermitian():
    n = 60
    x = haar_sample(U1, n, stream(16, "x"))
    y = sample_truth_or_haar(U1, x, 0.2, stream(16, "y"))
    h = sync_observation_matrix(U1, y)
    assert np.array_equal(h.entries, h.entries.conj().T)
    assert np.allclose(np.abs(h.entries), 1.0 / np.sqrt(n))


# ----------------------------------------------------------- moment validator

def test_validator_accepts_goe():
    mats = [sample_goe(200, derive_key(17, "v", i)) for i in range(20)]
    report = validate_wigner_moment_profile(mats, "R")
    assert report.passed, [c for c in report.checks if not c.passed]
    assert {c.name for c in report.checks} == {
        "offdiag-mean", "offdiag-second-moment", "diag-second-moment-bound"}


def test_validator_accepts_gue():
    mats = [sample_gue(200, derive_key(18, "v", i)) for i in range(20)]
    report = validate_wigner_moment_profile(mats, "C")
    assert report.passed, [c for c in report.checks if not c.passed]
    assert {c.name for c in report.checks} == {
        "offdiag-mean-re", "offdiag-mean-im", "offdiag-re-second-moment",
        "offdiag-im-second-moment", "offdiag-cross-moment",
        "diag-second-moment-bound"}


def test_validator_accepts_centered_sync_model():
    # after removing the rank-one mean, the observation matrix is weakly
    # Wigner: its entry variance is 1/n - p^2/n = 1/n + O(n^-2)
    n = 400
    theta = 2.0
    p = theta / np.sqrt(n)
    mats = []
    for i in range(10):
        x = haar_sample(Z2, n, stream(19, "x", i))
        y = sample_truth_or_haar(Z2, x, p, stream(19, "y", i))
        h = sync_observation_matrix(Z2, y).entries
        mean = p * character(Z2, pairwise_matrix(Z2, x)).real / np.sqrt(n)
        np.fill_diagonal(mean, 1.0 / np.sqrt(n))
        mats.append(h - mean)
    report = validate_wigner_moment_profile(mats, "R", eps_w=0.5)
    assert report.passed, [c for c in report.checks if not c.passed]


def test_validator_flags_wrong_scale():
    mats = [HermitianMatrix(1.5 * sample_goe(200, derive_key(20, "v", i)).entries)
            for i in range(10)]
    report = validate_wigner_moment_profile(mats, "R")
    assert not report.passed
    failed = [c.name for c in report.checks if not c.passed]
    assert "offdiag-second-moment" in failed


def test_validator_input_validation():
    with pytest.raises(ValidationError):
        validate_wigner_moment_profile([], "R")
    with pytest.raises(ValidationError):
        validate_wigner_moment_profile([sample_goe(10, 0)], "Q")
    with pytest.raises(ValidationError):
        validate_wigner_moment_profile([sample_goe(10, 0), sample_goe(12, 0)], "R")
    with pytest.raises(ValidationError):
        validate_wigner_moment_profile([sample_gue(10, 0)], "R")  # complex in R mode


# ------------------------------------------------------------ moment profiles

def test_moment_profile_goe():
    prof = moment_profile(EnsembleSpec(kind="goe", n=10))
    assert prof.field == "R"
    assert np.all(prof.re2 == 0.1)
    assert np.all(prof.im2 == 0.0)
    assert np.all(prof.diag_var == 0.2)


def test_moment_profile_gue():
    prof = moment_profile(EnsembleSpec(kind="gue", n=10, field="C"))
    assert prof.field == "C"
    assert np.all(prof.re2 == 0.05)
    assert np.all(prof.im2 == 0.05)
    assert np.all(prof.cross == 0.0)
    assert np.all(prof.diag_var == 0.1)


def test_moment_profile_flat_wigner_matches_goe_offdiag():
    spec = EnsembleSpec(kind="generalized-wigner", n=10, entry_law="rademacher")
    prof = moment_profile(spec)
    assert np.all(prof.re2 == 0.1)
    assert np.all(prof.diag_var == 0.1)  # unlike GOE's 2/n diagonal
    cspec = EnsembleSpec(kind="generalized-wigner", n=10, entry_law="gaussian", field="C")
    cprof = moment_profile(cspec)
    assert np.all(cprof.re2 == 0.05)
    assert np.all(cprof.im2 == 0.05)
