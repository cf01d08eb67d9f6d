"""Seed-addressed sampling of sparse random-matrix ensembles.

An ensemble is fully determined by an atom distribution (mean zero, unit
variance), a sparsity parameter alpha in (0, 1], a dimension n and a
deterministic diagonal shift pattern.  Entries of the sparse matrix are
independent copies of  indicator(rho) * x / sqrt(rho)  with
rho = n**(alpha - 1), so every entry keeps unit variance; the non-sparse
companion ensemble uses plain iid copies of the atom.

All sampling is a pure function of (spec, SeedPath): matrices are
bit-reproducible across runs, workers and generation order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .errors import ConfigError, DomainError, ResourceError

#: Largest matrix dimension the dense samplers/solvers will accept.
MAX_DIMENSION = 4096

#: Rows sampled per block when assembling a matrix (bounds peak memory;
#: the block layout depends only on n, keeping output bit-stable).
_BLOCK_ENTRIES = 1 << 22

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_TWO_PI = 2.0 * math.pi


class Atom(enum.Enum):
    """Entry distributions: mean zero, E|x|^2 = 1.

    The complex atoms draw real and imaginary parts independently, each
    with variance 1/2.
    """

    BERNOULLI_PM1 = "bernoulli"
    REAL_GAUSSIAN = "gaussian"
    COMPLEX_GAUSSIAN = "complex-gaussian"
    COMPLEX_BERNOULLI = "complex-bernoulli"

    @property
    def is_complex(self) -> bool:
        return self in (Atom.COMPLEX_GAUSSIAN, Atom.COMPLEX_BERNOULLI)


@dataclass(frozen=True)
class SeedPath:
    """Hierarchical deterministic seed: a master plus ordered labels.

    Distinct paths give statistically independent streams; equal paths
    always reproduce the same values.
    """

    master: int
    labels: tuple[int, ...] = ()

    def child(self, *labels: int) -> "SeedPath":
        return SeedPath(self.master, self.labels + tuple(int(v) for v in labels))

    def key(self) -> int:
        k = rng.mix64(self.master)
        for label in self.labels:
            k = rng._fold(k, label)
        return k


@dataclass(frozen=True)
class SparseParams:
    """Sparsity parameters; rho is always recomputed from (alpha, n)."""

    alpha: float
    n: int

    @property
    def rho(self) -> float:
        return float(self.n) ** (self.alpha - 1.0)


def make_sparse_params(alpha: float, n: int) -> SparseParams:
    """Validated constructor: alpha in (0, 1], n >= 1.

    n here is the sparsity scale; the dense-allocation limit
    MAX_DIMENSION is enforced by sample_matrix, not by the parameters.
    """
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    return SparseParams(float(alpha), int(n))


class ShiftKind(enum.Enum):
    ZERO = "zero"
    UNIV_DIAG = "univ-diag"
    OUTLIER_DIAG = "outlier-diag"
    CUSTOM_DIAG = "custom-diag"


# Diagonal blocks of the universality shift: (fraction denominator, value/sqrt(n)).
_UNIV_BLOCKS = ((4, -1.0 - 1.0j), (6, 1.2 - 0.8j), (12, 1.5 + 0.3j))


@dataclass(frozen=True)
class ShiftPattern:
    """Deterministic diagonal shift matrix family M_n.

    Every built-in pattern keeps (1/n^2) * ||M_n||_2^2 bounded by a
    constant independent of n.
    """

    kind: ShiftKind = ShiftKind.ZERO
    values: tuple[complex, ...] = field(default_factory=tuple)

    @staticmethod
    def zero() -> "ShiftPattern":
        return ShiftPattern(ShiftKind.ZERO)

    @staticmethod
    def univ_diag() -> "ShiftPattern":
        return ShiftPattern(ShiftKind.UNIV_DIAG)

    @staticmethod
    def outlier_diag() -> "ShiftPattern":
        return ShiftPattern(ShiftKind.OUTLIER_DIAG)

    @staticmethod
    def custom_diag(values) -> "ShiftPattern":
        return ShiftPattern(ShiftKind.CUSTOM_DIAG, tuple(complex(v) for v in values))

    def diagonal(self, n: int) -> np.ndarray:
        """The diagonal of M_n as a length-n complex vector."""
        diag = np.zeros(n, dtype=np.complex128)
        if self.kind is ShiftKind.ZERO:
            return diag
        if self.kind is ShiftKind.UNIV_DIAG:
            root = math.sqrt(n)
            start = 0
            for denom, value in _UNIV_BLOCKS:
                count = n // denom
                diag[start : start + count] = root * value
                start += count
            return diag
        if self.kind is ShiftKind.OUTLIER_DIAG:
            k = int(math.isqrt(n))
            diag[:k] = 2.0 * math.sqrt(n)
            return diag
        if len(self.values) > n:
            raise ConfigError(
                f"custom shift has {len(self.values)} values but n={n}"
            )
        diag[: len(self.values)] = self.values
        return diag

    def matrix(self, n: int) -> np.ndarray:
        return np.diag(self.diagonal(n))

    def hs_sq_normalized(self, n: int) -> float:
        """(1/n^2) * ||M_n||_2^2, the quantity that must stay bounded."""
        d = self.diagonal(n)
        return float(np.sum(np.abs(d) ** 2)) / float(n) ** 2

    def scaled_support_radius(self, n: int) -> float:
        """max |m_ii| / sqrt(n): how far the shifted clusters sit from 0."""
        d = self.diagonal(n)
        if d.size == 0:
            return 0.0
        return float(np.max(np.abs(d))) / math.sqrt(n)


@dataclass(frozen=True)
class EnsembleSpec:
    """Atom + sparsity + shift + sparse/dense switch: one sampling law.

    ``sparse=False`` makes the entry law exactly the atom (no indicator
    thinning, no rescaling), which coincides with alpha = 1.
    """

    atom: Atom
    params: SparseParams
    shift: ShiftPattern = ShiftPattern.zero()
    sparse: bool = True


def _atom_scalar(atom: Atom, u1: float, u2: float) -> complex:
    """One atom draw from two uniforms (u1 in (0,1], u2 in (0,1])."""
    if atom is Atom.BERNOULLI_PM1:
        return 1.0 + 0.0j if u1 <= 0.5 else -1.0 + 0.0j
    if atom is Atom.COMPLEX_BERNOULLI:
        re = _INV_SQRT2 if u1 <= 0.5 else -_INV_SQRT2
        im = _INV_SQRT2 if u2 <= 0.5 else -_INV_SQRT2
        return complex(re, im)
    r = math.sqrt(-2.0 * math.log(u1))
    z0 = r * math.cos(_TWO_PI * u2)
    if atom is Atom.REAL_GAUSSIAN:
        return complex(z0, 0.0)
    z1 = r * math.sin(_TWO_PI * u2)
    return complex(z0 * _INV_SQRT2, z1 * _INV_SQRT2)


def _atom_array(atom: Atom, u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    """Vectorized atom draws (complex128 array)."""
    if atom is Atom.BERNOULLI_PM1:
        return np.where(u1 <= 0.5, 1.0, -1.0).astype(np.complex128)
    if atom is Atom.COMPLEX_BERNOULLI:
        re = np.where(u1 <= 0.5, _INV_SQRT2, -_INV_SQRT2)
        im = np.where(u2 <= 0.5, _INV_SQRT2, -_INV_SQRT2)
        return re + 1j * im
    r = np.sqrt(-2.0 * np.log(u1))
    if atom is Atom.REAL_GAUSSIAN:
        return (r * np.cos(_TWO_PI * u2)).astype(np.complex128)
    z0 = r * np.cos(_TWO_PI * u2)
    z1 = r * np.sin(_TWO_PI * u2)
    return (z0 + 1j * z1) * _INV_SQRT2


def _entry_uniforms_scalar(key: int) -> tuple[float, float, float]:
    u_ind = rng.unit_half_open(rng.counter_value(key, 0))
    u1 = rng.unit_open(rng.counter_value(key, 1))
    u2 = rng.unit_open(rng.counter_value(key, 2))
    return u_ind, u1, u2


def sample_entry(
    atom: Atom, params: SparseParams, seed: SeedPath, sparse: bool = True
) -> complex:
    """One matrix entry: indicator(rho) * x / sqrt(rho), or plain x.

    Deterministic in (atom, params, seed).  With sparse=False (or
    rho = 1) the value is exactly an atom draw.
    """
    key = seed.key()
    u_ind, u1, u2 = _entry_uniforms_scalar(key)
    if not sparse:
        return _atom_scalar(atom, u1, u2)
    rho = params.rho
    if u_ind >= rho:
        return 0.0 + 0.0j
    return _atom_scalar(atom, u1, u2) * (1.0 / math.sqrt(rho))


def _entries_from_keys(
    atom: Atom, rho: float, sparse: bool, keys: np.ndarray
) -> np.ndarray:
    u1 = rng.unit_open_array(rng.counter_value_array(keys, 1))
    u2 = rng.unit_open_array(rng.counter_value_array(keys, 2))
    values = _atom_array(atom, u1, u2)
    if not sparse:
        return values
    u_ind = rng.unit_half_open_array(rng.counter_value_array(keys, 0))
    return np.where(u_ind < rho, values * (1.0 / math.sqrt(rho)), 0.0 + 0.0j)


def sample_entry_stream(
    atom: Atom,
    params: SparseParams,
    seed: SeedPath,
    count: int,
    sparse: bool = True,
) -> np.ndarray:
    """`count` iid entries; element i is addressed by seed.child(i)."""
    out = np.empty(count, dtype=np.complex128)
    base = seed.key()
    block = max(1, _BLOCK_ENTRIES)
    for start in range(0, count, block):
        stop = min(start + block, count)
        idx = np.arange(start, stop, dtype=np.uint64)
        keys = rng.fold_array(base, idx)
        out[start:stop] = _entries_from_keys(atom, params.rho, sparse, keys)
    return out


def sample_matrix(spec: EnsembleSpec, seed: SeedPath) -> np.ndarray:
    """Dense n x n sample of M_n + X_n (or M_n + Y_n when sparse=False).

    Entry (i, j) is addressed by seed.child(i, j), so the result does not
    depend on generation order or thread schedule.
    """
    n = spec.params.n
    if n > MAX_DIMENSION:
        raise ResourceError(f"n={n} exceeds the configured limit {MAX_DIMENSION}")
    out = np.empty((n, n), dtype=np.complex128)
    base = seed.key()
    cols = np.arange(n, dtype=np.uint64)
    rows_per_block = max(1, _BLOCK_ENTRIES // max(n, 1))
    for start in range(0, n, rows_per_block):
        stop = min(start + rows_per_block, n)
        row_keys = rng.fold_array(base, np.arange(start, stop, dtype=np.uint64))
        keys = rng.fold_array(row_keys[:, None], cols[None, :])
        out[start:stop] = _entries_from_keys(
            spec.atom, spec.params.rho, spec.sparse, keys
        )
    diag = spec.shift.diagonal(n)
    out[np.arange(n), np.arange(n)] += diag
    return out


def nonzero_triplets(matrix: np.ndarray):
    """Diagnostic (i, j, value) triplet arrays of the nonzero entries."""
    rows, cols = np.nonzero(matrix)
    return rows, cols, matrix[rows, cols]
