"""Top eigenpair extraction, resolvent solves, and exact rank-one cross-checks.

The estimator pipeline only needs the top eigenpair of a dense Hermitian
matrix, but the rank-one structure gives two independent routes to the same
quantities: the outlier eigenvalue solves the secular equation
v* (zI - W)^{-1} v = 1/theta, and the top eigenvector is proportional to
(lambda I - W)^{-1} v.  Both are implemented against linear solves so they can
cross-check the eigensolver, plus an isotropic local-law residual diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import BracketError, SingularShiftError, ValidationError
from .limits import semicircle_cauchy_transform
from .matrices import HermitianMatrix

SOLVE_RTOL = 1e-10


@dataclass(frozen=True)
class SpectralEstimate:
    """Top eigenpair with the gap to the second eigenvalue.

    ``eigenvector`` is unit and phase-fixed (largest-modulus entry real
    positive).  ``overlap_sq`` is |<eigenvector, v>|^2 against the planted
    vector when one was supplied, else None.
    """

    eigenvalue: float
    eigenvector: np.ndarray
    gap: float
    overlap_sq: float | None = None


def fix_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate a vector so its largest-modulus entry is real positive.

    Ties take the lowest index (argmax returns the first maximizer), making
    the output independent of which unit-phase representative the eigensolver
    produced.
    """
    vec = np.asarray(vec)
    idx = int(np.argmax(np.abs(vec)))
    pivot = vec[idx]
    if pivot == 0:
        raise ValueError("cannot fix the phase of the zero vector")
    if not np.iscomplexobj(vec):
        return vec.copy() if pivot > 0 else -vec
    return vec * np.conj(pivot / abs(pivot))


def overlap_sq(u: np.ndarray, v: np.ndarray) -> float:
    """Squared modulus of the inner product of two unit vectors, |<u, v>|^2.

    Invariant under phase rotation of either argument; defensively normalized
    so the result stays in [0, 1] up to rounding.
    """
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape or u.ndim != 1:
        raise ValueError(f"vectors must share a common 1-D shape, got {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ValueError("overlap with the zero vector is undefined")
    return float(abs(np.vdot(u, v)) ** 2 / (nu * nu * nv * nv))


def top_eigenpair(h: HermitianMatrix, planted: np.ndarray | None = None) -> SpectralEstimate:
    """Dense Hermitian eigendecomposition, returning the largest eigenpair."""
    if h.n < 2:
        raise ValueError("need n >= 2 for a top eigenpair with a gap")
    vals, vecs = np.linalg.eigh(h.entries)
    vec = fix_phase(vecs[:, -1])
    ov = overlap_sq(vec, planted) if planted is not None else None
    return SpectralEstimate(eigenvalue=float(vals[-1]), eigenvector=vec,
                            gap=float(vals[-1] - vals[-2]), overlap_sq=ov)


def _entries(w) -> np.ndarray:
    return w.entries if isinstance(w, HermitianMatrix) else np.asarray(w)


def _shifted_solver(w: np.ndarray, z: complex):
    """LU-factor (zI - W) once; returns (solve, matvec) closures."""
    if np.iscomplexobj(w) or complex(z).imag != 0.0:
        a = np.asarray(z * np.eye(w.shape[0], dtype=np.complex128) - w)
    else:
        a = float(np.real(z)) * np.eye(w.shape[0]) - np.real(w)
    lu, piv = scipy.linalg.lu_factor(a, check_finite=False)

    def solve(b):
        return scipy.linalg.lu_solve((lu, piv), b, check_finite=False)

    return solve, a.dot


def resolvent_solve(w, z: complex, b: np.ndarray) -> np.ndarray:
    """Solve (zI - W) x = b by direct factorization, verifying the residual.

    Raises SingularShiftError when the relative residual exceeds 1e-10, which
    is how shifts too close to spec(W) are detected.
    """
    wm = _entries(w)
    b = np.asarray(b)
    if b.shape[0] != wm.shape[0]:
        raise ValueError(f"rhs length {b.shape[0]} does not match dimension {wm.shape[0]}")
    norm_b = np.linalg.norm(b)
    if norm_b == 0:
        return np.zeros_like(b, dtype=np.complex128 if np.iscomplexobj(wm) or
                             complex(z).imag != 0 else np.float64)
    solve, matvec = _shifted_solver(wm, z)
    x = solve(b)
    rel = np.linalg.norm(matvec(x) - b) / norm_b
    if not np.isfinite(rel) or rel > SOLVE_RTOL:
        raise SingularShiftError(
            f"shift z = {z} is too close to the spectrum (relative residual {rel:.3e})")
    return x


def _check_unit(v: np.ndarray, name: str, tol: float = 1e-8) -> np.ndarray:
    v = np.asarray(v)
    if v.ndim != 1:
        raise ValueError(f"{name} must be a vector")
    if abs(np.linalg.norm(v) - 1.0) > tol:
        raise ValueError(f"{name} must be a unit vector")
    return v


def secular_root(w, v: np.ndarray, theta: float, bracket=None,
                 margin: float = 0.05, bisect_tol: float = 1e-12) -> float:
    """Solve v* (zI - W)^{-1} v = 1/theta for the outlier location.

    f(z) = v* R(z) v - 1/theta is strictly decreasing to the right of the
    spectrum, so the root is bracketed by a sign change: bisection narrows the
    bracket to ``bisect_tol``, then one Newton step using
    f'(z) = -||R(z) v||^2 (same solve) polishes the root.

    When ``bracket`` is omitted it defaults to
    [lambda_max(W) + margin, lambda_max(W) + theta + 1]; the upper end is safe
    because v* R(z) v <= 1/(z - lambda_max) forces the root below
    lambda_max + theta.  A missing sign change raises BracketError, which is
    the subcritical "no outlier" signal.
    """
    wm = _entries(w)
    v = _check_unit(v, "v")
    theta = float(theta)
    if theta <= 0:
        raise ValueError("theta must be positive")
    if bracket is None:
        lam_top = float(np.linalg.eigvalsh(wm)[-1])
        lo, hi = lam_top + margin, lam_top + theta + 1.0
    else:
        lo, hi = float(bracket[0]), float(bracket[1])
        if not lo < hi:
            raise ValueError(f"bracket must satisfy lo < hi, got [{lo}, {hi}]")

    def f_and_slope(z: float):
        x = resolvent_solve(wm, z, v)
        fz = float(np.real(np.vdot(v, x))) - 1.0 / theta
        return fz, -float(np.real(np.vdot(x, x)))

    flo, _ = f_and_slope(lo)
    fhi, _ = f_and_slope(hi)
    if not (flo > 0.0 > fhi):
        raise BracketError(
            f"no outlier: f has no sign change over [{lo:.6g}, {hi:.6g}] "
            f"(f(lo) = {flo:.3e}, f(hi) = {fhi:.3e})")
    while hi - lo > bisect_tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # float exhaustion
            break
        fm, _ = f_and_slope(mid)
        if fm > 0.0:
            lo = mid
        else:
            hi = mid
    z = 0.5 * (lo + hi)
    fz, slope = f_and_slope(z)
    if slope < 0.0:
        z = z - fz / slope
    return float(z)


def eigvec_via_resolvent(w, eigval: float, v: np.ndarray,
                         imag_offset: float = 0.0) -> np.ndarray:
    """Top eigenvector of theta*vv* + W from the noise resolvent alone.

    The rank-one identity makes R_W(lambda) v proportional to the spike
    eigenvector; the output is normalized and phase-fixed like
    ``top_eigenpair``.  ``imag_offset`` evaluates the resolvent at
    eigval + i*offset for diagnostics; the default 0 relies on the residual
    check to reject shifts inside the spectrum.
    """
    v = _check_unit(v, "v")
    z = complex(eigval, imag_offset) if imag_offset else float(eigval)
    x = resolvent_solve(w, z, v)
    return fix_phase(x / np.linalg.norm(x))


def local_law_residual(w, z: complex, x: np.ndarray, y: np.ndarray,
                       edge_margin: float = 0.1) -> float:
    """|x* R_W(z) y - G(z) <x, y>| with G the semicircle Cauchy transform.

    For Wigner noise this isotropic residual decays like n^{-1/2} at fixed z
    outside the bulk.  Shifts with Re(z) <= 2 + edge_margin are refused.
    """
    z = complex(z)
    if z.real <= 2.0 + edge_margin:
        raise ValueError(
            f"Re(z) = {z.real} is inside the guarded spectral region (need > {2.0 + edge_margin})")
    x = _check_unit(x, "x")
    y = _check_unit(y, "y")
    if x.shape != y.shape:
        raise ValueError("x and y must have equal length")
    r = resolvent_solve(w, z, y)
    val = np.vdot(x, r) - semicircle_cauchy_transform(z) * np.vdot(x, y)
    return float(abs(val))
