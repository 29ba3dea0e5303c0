"""Deterministic named random streams.

Every stochastic routine in this package draws from a ``numpy.random.Generator``
backed by the counter-based Philox bit generator, keyed by a hash of a label
path.  Two properties follow:

* the map (master_seed, labels...) -> stream is stable: it depends only on
  SHA-256 and the Philox algorithm, not on how many other streams were created
  or in which order (unlike ``SeedSequence.spawn``);
* independent labels give independent streams, so work can be farmed out to
  threads/processes in any order without changing any drawn value.

A label path is an arbitrary tuple of ints / strings / floats, e.g.
``stream(master_seed, "sweep", theta_index, trial, "noise")``.
"""

from __future__ import annotations

import hashlib

import numpy as np

_SEP = "\x1f"  # unit separator; forbidden inside string labels


def _canonical(part) -> str:
    if isinstance(part, bool):
        raise TypeError("bool labels are ambiguous; use an int or a string")
    if isinstance(part, (int, np.integer)):
        return "i%d" % int(part)
    if isinstance(part, str):
        if _SEP in part:
            raise ValueError("label strings must not contain the separator byte 0x1f")
        return "s" + part
    if isinstance(part, float):
        return "f" + repr(part)
    raise TypeError(f"unsupported label type {type(part).__name__!r}")


def derive_key(*parts) -> int:
    """Return a 128-bit integer key from a label path.

    SHA-256 of the canonical path string, truncated to 16 bytes (little endian).
    """
    if not parts:
        raise ValueError("need at least one label part")
    label = _SEP.join(_canonical(p) for p in parts)
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:16], "little")


def stream(*parts) -> np.random.Generator:
    """Return a fresh Generator for the given label path."""
    return np.random.Generator(np.random.Philox(key=derive_key(*parts)))


def as_generator(seed) -> np.random.Generator:
    """Accept an int seed or a Generator; ints are mapped through ``stream``."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, (int, np.integer)):
        return stream(int(seed))
    raise TypeError(f"seed must be an int or numpy Generator, got {type(seed).__name__!r}")
