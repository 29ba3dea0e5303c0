"""Hermitian matrix container with construction-time checks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def symmetrize(a: np.ndarray) -> np.ndarray:
    """Return (a + a*)/2, which is exactly conjugate-symmetric in IEEE floats.

    Floating addition is commutative and conjugation is exact, so the (i, j)
    and (j, i) results are exact conjugates; dividing by 2 is exact.
    """
    a = np.asarray(a)
    return (a + a.conj().T) / 2.0


@dataclass(frozen=True)
class HermitianMatrix:
    """A dense Hermitian matrix, validated on construction.

    ``entries`` must satisfy entries[j, i] == conj(entries[i, j]) exactly; use
    ``symmetrize`` first if the input is only Hermitian up to rounding.  Real
    dtype marks the real-symmetric case (``is_real``), which downstream code
    uses to stay in real arithmetic.  Treat instances as immutable.
    """

    entries: np.ndarray
    is_real: bool = field(init=False)

    def __post_init__(self):
        a = np.asarray(self.entries)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"entries must be a square matrix, got shape {a.shape}")
        if a.shape[0] == 0:
            raise ValueError("empty matrix")
        if np.issubdtype(a.dtype, np.complexfloating):
            a = a.astype(np.complex128, copy=False)
        elif np.issubdtype(a.dtype, np.floating) or np.issubdtype(a.dtype, np.integer):
            a = a.astype(np.float64, copy=False)
        else:
            raise ValueError(f"unsupported dtype {a.dtype}")
        if not np.isfinite(a).all():
            raise ValueError("entries must be finite")
        if not np.array_equal(a, a.conj().T):
            raise ValueError("entries are not exactly conjugate-symmetric")
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "is_real", a.dtype == np.float64)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_nearly_hermitian(cls, a: np.ndarray) -> "HermitianMatrix":
        """Symmetrize and wrap; for inputs Hermitian only up to rounding."""
        return cls(symmetrize(a))

    def operator_norm(self) -> float:
        """Spectral norm via the full symmetric eigenvalue solver."""
        vals = np.linalg.eigvalsh(self.entries)
        return float(max(abs(vals[0]), abs(vals[-1])))
