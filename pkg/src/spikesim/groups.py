"""Compact abelian groups for synchronization: Z/L and the circle.

Group elements are stored as plain numpy arrays (or scalars): integer residues
in [0, L) for the cyclic group, float angles in [0, 2*pi) for the circle.  All
operations are vectorized and elementwise; pairwise matrices are just arrays of
elements with the group passed alongside.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

TWO_PI = 2.0 * np.pi

ROUND_KINDS = ("nearest-character", "phase")
LOSS_KINDS = ("mismatch", "one-minus-cos")


@dataclass(frozen=True)
class CyclicGroup:
    """Z/L under addition of residues; L >= 2."""

    order: int

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 2:
            raise ValidationError(f"cyclic group order must be an integer >= 2, got {self.order}")
        object.__setattr__(self, "order", int(self.order))

    def __str__(self):
        return f"Z/{self.order}"


@dataclass(frozen=True)
class CircleGroup:
    """R / 2*pi*Z, i.e. U(1) written additively in the angle."""

    def __str__(self):
        return "U(1)"


Group = CyclicGroup | CircleGroup


def parse_group(text: str) -> Group:
    """Parse 'Z/L' or 'U(1)' into a group object."""
    s = text.strip()
    if s == "U(1)":
        return CircleGroup()
    if s.startswith("Z/"):
        try:
            order = int(s[2:])
        except ValueError:
            raise ValidationError(f"bad cyclic group syntax {text!r}") from None
        return CyclicGroup(order)
    raise ValidationError(f"unrecognized group {text!r} (expected 'Z/L' or 'U(1)')")


def identity_element(group: Group):
    return 0 if isinstance(group, CyclicGroup) else 0.0


def _wrap_angle(x):
    """Reduce mod 2*pi into [0, 2*pi); np.mod can return exactly 2*pi for tiny
    negative inputs, which must fold to 0."""
    y = np.mod(x, TWO_PI)
    return np.where(y == TWO_PI, 0.0, y)


def canonicalize(group: Group, x):
    """Map representatives to canonical form (residues in [0, L), angles in [0, 2*pi))."""
    if isinstance(group, CyclicGroup):
        return np.mod(np.asarray(x, dtype=np.int64), group.order)
    return _wrap_angle(np.asarray(x, dtype=np.float64))


def inverse(group: Group, x):
    if isinstance(group, CyclicGroup):
        return np.mod(-np.asarray(x, dtype=np.int64), group.order)
    return _wrap_angle(-np.asarray(x, dtype=np.float64))


def compose(group: Group, x, y):
    if isinstance(group, CyclicGroup):
        return np.mod(np.asarray(x, dtype=np.int64) + np.asarray(y, dtype=np.int64), group.order)
    return _wrap_angle(np.asarray(x, dtype=np.float64) + np.asarray(y, dtype=np.float64))


def difference(group: Group, x, y):
    """x composed with the inverse of y."""
    if isinstance(group, CyclicGroup):
        return np.mod(np.asarray(x, dtype=np.int64) - np.asarray(y, dtype=np.int64), group.order)
    return _wrap_angle(np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64))


def haar_sample(group: Group, size, rng: np.random.Generator):
    """Draw Haar (uniform) group elements."""
    if isinstance(group, CyclicGroup):
        return rng.integers(0, group.order, size=size, dtype=np.int64)
    return rng.uniform(0.0, TWO_PI, size=size)


def character_table(group: CyclicGroup) -> np.ndarray:
    """The L character values exp(2*pi*i*k/L), k = 0..L-1.

    L = 2 and L = 4 are special-cased so the values are exact (+-1, +-i); the
    Z/2 observation matrix must be exactly real.
    """
    order = group.order
    if order == 2:
        return np.array([1.0 + 0.0j, -1.0 + 0.0j])
    if order == 4:
        return np.array([1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j])
    return np.exp(2.0j * np.pi * np.arange(order) / order)


def character(group: Group, x):
    """The standard injective character: exp(2*pi*i*x/L) resp. exp(i*x)."""
    if isinstance(group, CyclicGroup):
        return character_table(group)[canonicalize(group, x)]
    return np.exp(1.0j * np.asarray(x, dtype=np.float64))


def pairwise_matrix(group: Group, x) -> np.ndarray:
    """Matrix of relative alignments M[i, j] = x_i * x_j^{-1}.

    M is group-Hermitian (M[j, i] = M[i, j]^{-1}, identity diagonal) and
    satisfies the cocycle relation M[i, j] * M[j, k] = M[i, k].
    """
    x = np.asarray(x)
    if x.ndim != 1 or x.size == 0:
        raise ValidationError("x must be a nonempty 1-D array of group elements")
    return difference(group, x[:, None], x[None, :])


def _check_round_kind(group: Group, rounding: str) -> None:
    if rounding not in ROUND_KINDS:
        raise ValidationError(f"unknown rounding kind {rounding!r}")
    if isinstance(group, CyclicGroup) and rounding != "nearest-character":
        raise ValidationError("cyclic groups round by nearest-character")
    if isinstance(group, CircleGroup) and rounding != "phase":
        raise ValidationError("the circle group rounds by phase")


def round_to_group(group: Group, z, rounding: str = None):
    """Map complex numbers to group elements.

    Cyclic: argmin over the L character values of |z - chi(k)| (ties resolve
    to the smaller residue because argmin takes the first minimum; z = 0 is
    sent to the identity explicitly).  Circle: the phase angle of z, with
    z = 0 mapped to the identity.
    """
    if rounding is None:
        rounding = "nearest-character" if isinstance(group, CyclicGroup) else "phase"
    _check_round_kind(group, rounding)
    z = np.asarray(z, dtype=np.complex128)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if isinstance(group, CyclicGroup):
        table = character_table(group)
        flat = z.reshape(-1)
        out = np.empty(flat.shape, dtype=np.int64)
        # chunk the (points x L) distance table to bound memory
        step = max(1, (1 << 22) // group.order)
        for lo in range(0, flat.size, step):
            block = flat[lo:lo + step]
            d2 = np.abs(block[:, None] - table[None, :]) ** 2
            out[lo:lo + step] = np.argmin(d2, axis=1)
        # all characters are equidistant from the origin, but only exactly so
        # in exact arithmetic; route z = 0 to the identity explicitly
        out[flat == 0] = 0
        result = out.reshape(z.shape)
    else:
        ang = _wrap_angle(np.angle(z))
        result = np.where(z == 0, 0.0, ang)
    return result[0] if scalar else result


def estimate_group_matrix(group: Group, v_hat: np.ndarray, rounding: str = None) -> np.ndarray:
    """Entrywise rounding of n * v_hat_i * conj(v_hat_j) to group elements.

    This is the plug-in estimate of the relative-alignment matrix from a unit
    top eigenvector; it is invariant under a global phase on v_hat since the
    products are.
    """
    v_hat = np.asarray(v_hat)
    if v_hat.ndim != 1 or v_hat.size == 0:
        raise ValidationError("v_hat must be a nonempty vector")
    n = v_hat.size
    t = n * np.outer(v_hat, np.conj(v_hat))
    return round_to_group(group, t, rounding)


@dataclass(frozen=True)
class TableLoss:
    """Arbitrary loss on a cyclic group given as an L x L table, ell(x, y) = table[x, y]."""

    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.float64)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise ValidationError("loss table must be square")
        object.__setattr__(self, "table", t)


LossSpec = str | TableLoss


def _check_loss(group: Group, loss: LossSpec) -> None:
    if isinstance(loss, TableLoss):
        if not isinstance(group, CyclicGroup):
            raise ValidationError("table losses are defined for cyclic groups only")
        if loss.table.shape[0] != group.order:
            raise ValidationError(
                f"loss table is {loss.table.shape[0]}x{loss.table.shape[0]} "
                f"but the group has order {group.order}")
        return
    if loss not in LOSS_KINDS:
        raise ValidationError(f"unknown loss {loss!r}")
    if loss == "mismatch" and not isinstance(group, CyclicGroup):
        raise ValidationError("mismatch loss is defined for cyclic groups only")
    if loss == "one-minus-cos" and not isinstance(group, CircleGroup):
        raise ValidationError("one-minus-cos loss is defined for the circle group only")


def loss_values(group: Group, truth, estimate, loss: LossSpec) -> np.ndarray:
    """Elementwise loss between arrays of group elements."""
    _check_loss(group, loss)
    if isinstance(loss, TableLoss):
        a = canonicalize(group, truth)
        b = canonicalize(group, estimate)
        return loss.table[a, b]
    if loss == "mismatch":
        a = canonicalize(group, truth)
        b = canonicalize(group, estimate)
        return (a != b).astype(np.float64)
    t = np.asarray(truth, dtype=np.float64)
    e = np.asarray(estimate, dtype=np.float64)
    return 1.0 - np.cos(t - e)


def average_loss(group: Group, m_true: np.ndarray, m_est: np.ndarray, loss: LossSpec) -> float:
    """Mean loss over all n^2 ordered pairs (diagonal included)."""
    m_true = np.asarray(m_true)
    m_est = np.asarray(m_est)
    if m_true.shape != m_est.shape or m_true.ndim != 2 or m_true.shape[0] != m_true.shape[1]:
        raise ValidationError(
            f"alignment matrices must be square with equal shape, got {m_true.shape} vs {m_est.shape}")
    return float(np.mean(loss_values(group, m_true, m_est, loss)))
