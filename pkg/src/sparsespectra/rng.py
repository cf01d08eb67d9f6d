"""Counter-based deterministic random streams.

Every random value in the package is a pure function of a 64-bit master
seed plus an ordered list of 64-bit labels (experiment, trial, row,
column, ...).  Values are produced by a SplitMix64-style finalizer, so
any entry of any matrix can be regenerated independently of the order in
which other entries were generated.  The scalar path uses Python ints
(exact mod-2^64 arithmetic); the vectorized path uses numpy uint64 and
is bit-identical to the scalar path.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_U_GOLDEN = np.uint64(_GOLDEN)
_U_MIX1 = np.uint64(_MIX1)
_U_MIX2 = np.uint64(_MIX2)


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a 64-bit integer."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def _fold(key: int, label: int) -> int:
    """Absorb one label into a stream key."""
    return mix64(((key + _GOLDEN) & _MASK) ^ mix64(label + _GOLDEN))


def mix64_array(z: np.ndarray) -> np.ndarray:
    """Vectorized SplitMix64 finalizer (uint64 in, uint64 out)."""
    z = z ^ (z >> np.uint64(30))
    z = z * _U_MIX1
    z = z ^ (z >> np.uint64(27))
    z = z * _U_MIX2
    return z ^ (z >> np.uint64(31))


def fold_array(key: np.ndarray | int, labels: np.ndarray) -> np.ndarray:
    """Vectorized label absorption, matching the scalar `_fold`."""
    if not isinstance(key, np.ndarray):
        key = np.uint64((key + _GOLDEN) & _MASK)
    else:
        key = key + _U_GOLDEN
    return mix64_array(key ^ mix64_array(labels + _U_GOLDEN))


def counter_value(key: int, counter: int) -> int:
    """The `counter`-th raw 64-bit output of the stream at `key`."""
    return mix64((key + (counter + 1) * _GOLDEN) & _MASK)


def counter_value_array(keys: np.ndarray, counter: int) -> np.ndarray:
    """Vectorized `counter_value` over an array of stream keys."""
    inc = np.uint64(((counter + 1) * _GOLDEN) & _MASK)
    return mix64_array(keys + inc)


def unit_open(raw: int) -> float:
    """Map a raw 64-bit value to a uniform in (0, 1] (safe for log)."""
    return ((raw >> 11) + 1) * 2.0**-53


def unit_half_open(raw: int) -> float:
    """Map a raw 64-bit value to a uniform in [0, 1)."""
    return (raw >> 11) * 2.0**-53


def unit_open_array(raw: np.ndarray) -> np.ndarray:
    return ((raw >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53


def unit_half_open_array(raw: np.ndarray) -> np.ndarray:
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53
