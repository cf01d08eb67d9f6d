"""Named Monte-Carlo experiments over the sparse matrix ensembles.

Each experiment maps a RunConfig to a RunReport: per-(n, trial) records,
deterministic medians/flags, and a provenance echo.  Trials are pure
functions of (config, n, trial) through seed-addressed sampling, so a
report is bit-identical no matter how many workers execute it.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import baselines, esd, linalg, rng
from .ensembles import (
    MAX_DIMENSION,
    Atom,
    EnsembleSpec,
    SeedPath,
    ShiftKind,
    ShiftPattern,
    make_sparse_params,
)
from .ensembles import sample_entry_stream, sample_matrix
from .errors import ConfigError, ContractError, ConvergenceError

#: Environment variable read for the default worker count.
WORKERS_ENV = "SPARSESPECTRA_WORKERS"

#: A run fails when exceptional trials exceed this fraction.
EXCEPTION_LIMIT = 0.05

#: Concentration window for the sparse law of large numbers.
LLN_EPSILON = 0.1

#: Outliers are eigenvalues within this distance of the shifted cluster.
OUTLIER_CAPTURE_RADIUS = 0.3

#: Bulk eigenvalues are those farther than this from the shifted cluster.
OUTLIER_EXCLUDE_RADIUS = 0.5

#: Normalized log-det values must agree between methods to this tolerance.
LOGDET_CROSSCHECK_TOL = 1e-4

#: Small-ball probability bound checked by the distance experiment.
DISTANCE_PROB_BOUND = 1e-2

#: sigma_n floor asserted by the least-singular experiment.
SIGMA_FLOOR = 1e-10

#: +-sigma agreement tolerance for the block-embedding spectrum.
PM_SPECTRUM_TOL = 1e-8


@dataclass(frozen=True)
class RunConfig:
    """Inputs of one experiment run; fully determines its RunReport."""

    experiment: str
    n_values: tuple[int, ...]
    atom: Atom = Atom.BERNOULLI_PM1
    atom_b: Atom | None = None
    alpha: float = 0.4
    trials: int = 5
    shift: ShiftPattern = field(default_factory=ShiftPattern.zero)
    master_seed: int = 0
    z_probe: complex = 0.0 + 0.0j
    c_probe: float = 0.5
    d_fraction: float = 0.5
    m_samples: int | None = None
    draws: int = 10_000_000
    shared_seed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))

    def second_atom(self) -> Atom:
        return self.atom_b if self.atom_b is not None else self.atom


@dataclass
class RunRecord:
    """One trial's measurements (or its exception)."""

    n: int
    trial: int
    values: dict
    esds: dict | None = None
    exception: str | None = None


@dataclass
class Flag:
    """A pass/fail verdict citing the criterion it checks."""

    criterion: str
    passed: bool
    detail: str


@dataclass
class RunReport:
    experiment: str
    config: RunConfig
    records: list
    summary: list
    flags: list
    exceptions: int
    version: str

    @property
    def failed(self) -> bool:
        return any(not f.passed for f in self.flags if f.criterion == "exception-rate")

    def flag(self, criterion: str) -> Flag | None:
        for f in self.flags:
            if f.criterion == criterion:
                return f
        return None


class _ExceptionalTrial(Exception):
    """Raised inside a trial to mark it exceptional (excluded from medians)."""


def _path(cfg: RunConfig, seed_id: int, n: int, trial: int, side: int) -> SeedPath:
    return SeedPath(cfg.master_seed).child(seed_id, n, trial, side)


def _sparse_spec(cfg: RunConfig, n: int, shift: ShiftPattern) -> EnsembleSpec:
    return EnsembleSpec(cfg.atom, make_sparse_params(cfg.alpha, n), shift, sparse=True)


def _dense_spec(cfg: RunConfig, n: int, shift: ShiftPattern) -> EnsembleSpec:
    return EnsembleSpec(
        cfg.second_atom(), make_sparse_params(1.0, n), shift, sparse=False
    )


def _grid_halfwidth(shift: ShiftPattern, n: int) -> float:
    return max(esd.GRID_HALFWIDTH, shift.scaled_support_radius(n) + 0.5)


def _median_by_n(records, key: str) -> dict:
    out = {}
    for rec in records:
        if rec.exception is None and key in rec.values:
            out.setdefault(rec.n, []).append(rec.values[key])
    return {n: float(np.median(vals)) for n, vals in out.items()}


def _decay_flag(cfg: RunConfig, medians: dict, metric: str) -> Flag | None:
    """Strictly-decreasing-medians flag; absent for single-point sweeps."""
    if len(cfg.n_values) < 2:
        return None
    if any(n not in medians for n in cfg.n_values):
        return Flag(
            f"monotone-decay:{metric}",
            False,
            "missing medians (all trials exceptional for some n)",
        )
    seq = [medians[n] for n in cfg.n_values]
    ok = all(b < a for a, b in zip(seq, seq[1:]))
    detail = " -> ".join(f"{v:.6g}" for v in seq)
    return Flag(f"monotone-decay:{metric}", ok, f"medians {detail}")


def _exception_flag(records) -> Flag:
    total = len(records)
    bad = sum(1 for r in records if r.exception is not None)
    ok = bad <= EXCEPTION_LIMIT * total
    return Flag(
        "exception-rate",
        ok,
        f"{bad}/{total} exceptional trials (limit {EXCEPTION_LIMIT:.0%})",
    )


# ---------------------------------------------------------------------------
# circular-law


def _circular_validate(cfg: RunConfig) -> None:
    if cfg.shift.kind is not ShiftKind.ZERO:
        raise ConfigError("circular-law requires the zero shift pattern")


def _circular_trial(cfg: RunConfig, n: int, trial: int) -> RunRecord:
    A = sample_matrix(_sparse_spec(cfg, n, ShiftPattern.zero()), _path(cfg, 1, n, trial, 0))
    e = esd.esd_from_matrix(A)
    values = {
        "radial_ks": esd.radial_ks(e),
        "kolmogorov": esd.kolmogorov_discrepancy(e, esd.UNIT_DISK),
        "second_moment": esd.second_moment(e),
    }
    return RunRecord(n, trial, values, esds={"": e.points})


def _circular_summarize(cfg: RunConfig, records):
    med_r = _median_by_n(records, "radial_ks")
    med_k = _median_by_n(records, "kolmogorov")
    summary = [
        {
            "n": n,
            "median_radial_ks": med_r.get(n),
            "median_kolmogorov": med_k.get(n),
        }
        for n in cfg.n_values
    ]
    flags = []
    for metric, med in (("radial_ks", med_r), ("kolmogorov", med_k)):
        f = _decay_flag(cfg, med, metric)
        if f is not None:
            flags.append(f)
    base = baselines.lookup("circular-law", "radial_ks", cfg.atom, cfg.alpha, cfg.n_values[-1])
    if base is not None and cfg.n_values[-1] in med_r:
        final = med_r[cfg.n_values[-1]]
        flags.append(
            Flag(
                "regression-baseline:radial_ks",
                final < base,
                f"final median {final:.6g} vs stored baseline {base:.6g}",
            )
        )
    return summary, flags


# ---------------------------------------------------------------------------
# universality


def _universality_trial(cfg: RunConfig, n: int, trial: int) -> RunRecord:
    hw = _grid_halfwidth(cfg.shift, n)
    A = sample_matrix(_sparse_spec(cfg, n, cfg.shift), _path(cfg, 2, n, trial, 0))
    B = sample_matrix(_dense_spec(cfg, n, cfg.shift), _path(cfg, 2, n, trial, 1))
    ea = esd.esd_from_matrix(A)
    eb = esd.esd_from_matrix(B)
    values = {"kolmogorov": esd.kolmogorov_discrepancy(ea, eb, halfwidth=hw)}
    for i, gap in enumerate(esd.test_function_gaps(ea, eb)):
        values[f"bump_gap_{i}"] = float(gap)
    return RunRecord(n, trial, values, esds={"sparse": ea.points, "dense": eb.points})


def _universality_summarize(cfg: RunConfig, records):
    med = _median_by_n(records, "kolmogorov")
    summary = []
    for n in cfg.n_values:
        row = {"n": n, "median_kolmogorov": med.get(n)}
        for i in range(9):
            bmed = _median_by_n(records, f"bump_gap_{i}")
            row[f"median_bump_gap_{i}"] = bmed.get(n)
        summary.append(row)
    flags = []
    f = _decay_flag(cfg, med, "kolmogorov")
    if f is not None:
        flags.append(f)
    return summary, flags


# ---------------------------------------------------------------------------
# shifted-outlier


def _outlier_validate(cfg: RunConfig) -> None:
    if cfg.shift.kind is not ShiftKind.OUTLIER_DIAG:
        raise ConfigError("shifted-outlier requires the outlier-diag shift pattern")


def _outlier_trial(cfg: RunConfig, n: int, trial: int) -> RunRecord:
    A = sample_matrix(_sparse_spec(cfg, n, cfg.shift), _path(cfg, 3, n, trial, 0))
    e = esd.esd_from_matrix(A)
    dist = np.abs(e.points - 2.0)
    count = int(np.count_nonzero(dist <= OUTLIER_CAPTURE_RADIUS))
    bulk = e.points[dist > OUTLIER_EXCLUDE_RADIUS]
    values = {"outlier_count": count, "bulk_fraction": bulk.size / e.n}
    if bulk.size:
        be = esd.ESD.from_points(bulk)
        values["bulk_radial_ks"] = esd.radial_ks(be)
        values["bulk_kolmogorov"] = esd.kolmogorov_discrepancy(be, esd.UNIT_DISK)
    return RunRecord(n, trial, values, esds={"": e.points})


def _outlier_summarize(cfg: RunConfig, records):
    med = _median_by_n(records, "bulk_radial_ks")
    summary = [
        {
            "n": n,
            "median_bulk_radial_ks": med.get(n),
            "outlier_band_lo": math.isqrt(n) // 2,
            "outlier_band_hi": 2 * math.isqrt(n),
        }
        for n in cfg.n_values
    ]
    flags = []
    ok = True
    details = []
    for rec in records:
        if rec.exception is not None:
            continue
        lo = math.isqrt(rec.n) // 2
        hi = 2 * math.isqrt(rec.n)
        c = rec.values["outlier_count"]
        details.append(f"n={rec.n} t={rec.trial} count={c}")
        if not lo <= c <= hi:
            ok = False
    flags.append(Flag("outlier-count-band", ok, "; ".join(details)))
    f = _decay_flag(cfg, med, "bulk_radial_ks")
    if f is not None:
        flags.append(f)
    return summary, flags


# ---------------------------------------------------------------------------
# logdet-convergence


def _logdet_validate(cfg: RunConfig) -> None:
    if abs(cfg.z_probe) > 3.0:
        raise ConfigError("logdet-convergence requires |z_probe| <= 3")


def _normalized_logdet(M: np.ndarray, n: int, z: complex) -> tuple[float, float]:
    T = M / math.sqrt(n) - z * np.eye(n)
    ld_s = linalg.log_abs_det(T, linalg.DetMethod.SINGULAR)
    if math.isinf(ld_s):
        raise _ExceptionalTrial("singular matrix: log-det is -inf")
    ld_r = linalg.log_abs_det(T, linalg.DetMethod.ROW_DIST)
    if math.isinf(ld_r):
        raise _ExceptionalTrial("singular matrix: row-distance log-det is -inf")
    gap = abs(ld_s - ld_r) / n
    if gap > LOGDET_CROSSCHECK_TOL:
        raise _ExceptionalTrial(f"log-det cross-check failed (gap {gap:.3e})")
    return ld_s / n, gap


def _logdet_trial(cfg: RunConfig, n: int, trial: int) -> RunRecord:
    side_b = 0 if cfg.shared_seed else 1
    spec_b = _sparse_spec(cfg, n, cfg.shift) if cfg.shared_seed else _dense_spec(cfg, n, cfg.shift)
    A = sample_matrix(_sparse_spec(cfg, n, cfg.shift), _path(cfg, 4, n, trial, 0))
    B = sample_matrix(spec_b, _path(cfg, 4, n, trial, side_b))
    la, ga = _normalized_logdet(A, n, cfg.z_probe)
    lb, gb = _normalized_logdet(B, n, cfg.z_probe)
    values = {
        "logdet_sparse": la,
        "logdet_dense": lb,
        "diff": la - lb,
        "abs_diff": abs(la - lb),
        "crosscheck_gap": max(ga, gb),
    }
    return RunRecord(n, trial, values)


def _logdet_summarize(cfg: RunConfig, records):
    med = _median_by_n(records, "abs_diff")
    summary = [{"n": n, "median_abs_diff": med.get(n)} for n in cfg.n_values]
    flags = []
    f = _decay_flag(cfg, med, "abs_diff")
    if f is not None:
        flags.append(f)
    return summary, flags


# ---------------------------------------------------------------------------
# distance-concentration


def _distance_dim(cfg: RunConfig, n: int) -> int:
    return int(cfg.d_fraction * n)


def _distance_validate(cfg: RunConfig) -> None:
    if not (0.0 < cfg.c_probe < 1.0):
        raise ConfigError("distance-concentration requires c_probe in (0, 1)")
    for n in cfg.n_values:
        d = _distance_dim(cfg, n)
        limit = n - n ** ((1.0 - cfg.alpha) / 6.0)
        if not 1 <= d <= limit:
            raise ConfigError(
                f"subspace dimension d={d} outside [1, n - n^((1-alpha)/6)] "
                f"= [1, {limit:.1f}] at n={n}"
            )


def _distance_trial(cfg: RunConfig, n: int, trial: int) -> RunRecord:
    d = _distance_dim(cfg, n)
    params = make_sparse_params(cfg.alpha, n)
    tail = sample_entry_stream(
        cfg.atom, params, _path(cfg, 5, n, trial, 0), n - d
    )
    # Mean-normalized sparse coordinates indicator*x/rho: distance to the
    # span of the first d coordinate vectors is the tail norm.
    dist = float(np.sqrt(np.sum(np.abs(tail) ** 2))) / math.sqrt(params.rho)
    threshold = cfg.c_probe * math.sqrt(n - d)
    values = {"dist": dist, "below": 1.0 if dist <= threshold else 0.0}
    return RunRecord(n, trial, values)


def _distance_summarize(cfg: RunConfig, records):
    summary = []
    flags = []
    for n in cfg.n_values:
        recs = [r for r in records if r.n == n and r.exception is None]
        hits = sum(r.values["below"] for r in recs)
        prob = hits / len(recs) if recs else float("nan")
        d = _distance_dim(cfg, n)
        summary.append({"n": n, "d": d, "hits": int(hits), "probability": prob})
        flags.append(
            Flag(
                "distance-small-ball",
                prob <= DISTANCE_PROB_BOUND,
                f"n={n} Pr(dist <= c*sqrt(n-d)) = {prob:.4g} "
                f"(bound {DISTANCE_PROB_BOUND})",
            )
        )
    return summary, flags


# ---------------------------------------------------------------------------
# least-singular


def _least_singular_trial(cfg: RunConfig, n: int, trial: int) -> RunRecord:
    A = sample_matrix(_sparse_spec(cfg, n, cfg.shift), _path(cfg, 6, n, trial, 0))
    sigma = linalg.least_singular_value(A)
    values = {"sigma_min": sigma, "degenerate": 1.0 if sigma <= SIGMA_FLOOR else 0.0}
    return RunRecord(n, trial, values)


def _least_singular_summarize(cfg: RunConfig, records):
    summary = []
    mins = {}
    degenerates = 0
    for n in cfg.n_values:
        vals = [
            r.values["sigma_min"]
            for r in records
            if r.n == n and r.exception is None
        ]
        degs = sum(
            int(r.values["degenerate"])
            for r in records
            if r.n == n and r.exception is None
        )
        degenerates += degs
        mins[n] = min(vals) if vals else float("nan")
        summary.append(
            {
                "n": n,
                "min_sigma": mins[n],
                "median_sigma": float(np.median(vals)) if vals else float("nan"),
                "degenerate_count": degs,
            }
        )
    flags = [
        Flag(
            "min-sigma-floor",
            all(m > SIGMA_FLOOR for m in mins.values()),
            "; ".join(f"n={n} min={m:.4g}" for n, m in mins.items()),
        )
    ]
    positive = [(n, m) for n, m in mins.items() if m > 0]
    if len(positive) >= 2:
        xs = np.log([float(n) for n, _ in positive])
        ys = np.log([m for _, m in positive])
        slope = float(np.polyfit(xs, ys, 1)[0])
        summary.append({"fitted_exponent_C": -slope})
    return summary, flags


# ---------------------------------------------------------------------------
# sparse-lln


def _lln_validate(cfg: RunConfig) -> None:
    if cfg.m_samples is not None and any(cfg.m_samples < n for n in cfg.n_values):
        raise ConfigError("sparse-lln requires m >= n")


def _lln_trial(cfg: RunConfig, n: int, trial: int) -> RunRecord:
    m = cfg.m_samples if cfg.m_samples is not None else n
    params = make_sparse_params(cfg.alpha, n)
    draws = sample_entry_stream(cfg.atom, params, _path(cfg, 7, n, trial, 0), m)
    mean = complex(np.mean(draws))
    return RunRecord(n, trial, {"abs_mean": abs(mean)})


def _lln_summarize(cfg: RunConfig, records):
    summary = []
    flags = []
    for n in cfg.n_values:
        vals = [
            r.values["abs_mean"] for r in records if r.n == n and r.exception is None
        ]
        within = sum(1 for v in vals if v <= LLN_EPSILON)
        frac = within / len(vals) if vals else float("nan")
        summary.append({"n": n, "within_count": within, "fraction": frac})
        if len(vals) > 1:
            flags.append(
                Flag(
                    "lln-concentration",
                    frac >= 0.9,
                    f"n={n}: {within}/{len(vals)} trials within {LLN_EPSILON}",
                )
            )
    return summary, flags


# ---------------------------------------------------------------------------
# truncation-decay


def _truncation_validate(cfg: RunConfig) -> None:
    if cfg.draws < 1_000_000:
        raise ConfigError("truncation-decay requires at least 1e6 draws")


def _truncation_jobs(cfg: RunConfig):
    return [(trial,) for trial in range(cfg.trials)]


def _abs_atom_draws(atom: Atom, seed, count: int) -> np.ndarray:
    """|x| for `count` atom draws (tail-sampling fast path).

    Gaussian branches use one counter stream per Box-Muller pair (both
    outputs consumed); |x| of the Bernoulli atoms is identically 1.
    """
    if atom in (Atom.BERNOULLI_PM1, Atom.COMPLEX_BERNOULLI):
        return np.ones(count)
    base = seed.key()
    pairs = (count + 1) // 2 if atom is Atom.REAL_GAUSSIAN else count
    keys = rng.fold_array(base, np.arange(pairs, dtype=np.uint64))
    u1 = rng.unit_open_array(rng.counter_value_array(keys, 1))
    r = np.sqrt(-2.0 * np.log(u1))
    if atom is Atom.COMPLEX_GAUSSIAN:
        # |x| = sqrt((z0^2 + z1^2)/2) = r/sqrt(2); the angle cancels.
        return r * (1.0 / math.sqrt(2.0))
    u2 = rng.unit_open_array(rng.counter_value_array(keys, 2))
    angle = 2.0 * math.pi * u2
    out = np.empty(2 * pairs)
    out[0::2] = r * np.cos(angle)
    out[1::2] = r * np.sin(angle)
    return np.abs(out[:count])


def _truncation_job(cfg: RunConfig, trial: int):
    count = cfg.draws // cfg.trials + (1 if trial < cfg.draws % cfg.trials else 0)
    # Atom draws shared across all n (thresholds differ, draws do not):
    # E|X 1_{|X| > n^(1-alpha/2)}| for X = indicator*x/rho reduces exactly
    # to E|x 1_{|x| > n^(alpha/2)}| over plain atom draws.
    block = 1 << 23
    records = [
        RunRecord(n, trial, {"sum_trunc": 0.0, "hits": 0.0, "draws": float(count)})
        for n in cfg.n_values
    ]
    seed = _path(cfg, 8, 0, trial, 0)
    done = 0
    while done < count:
        take = min(block, count - done)
        chunk = _abs_atom_draws(cfg.atom, seed.child(done), take)
        for rec in records:
            threshold = float(rec.n) ** (cfg.alpha / 2.0)
            mask = chunk > threshold
            rec.values["sum_trunc"] += float(np.sum(chunk[mask]))
            rec.values["hits"] += float(np.count_nonzero(mask))
        done += take
    return records


def _truncation_summarize(cfg: RunConfig, records):
    summary = []
    estimates = {}
    for n in cfg.n_values:
        recs = [r for r in records if r.n == n and r.exception is None]
        total = sum(r.values["sum_trunc"] for r in recs)
        draws = sum(r.values["draws"] for r in recs)
        hits = sum(r.values["hits"] for r in recs)
        est = total / draws if draws else float("nan")
        estimates[n] = est
        summary.append(
            {"n": n, "estimate": est, "hits": int(hits), "draws": int(draws)}
        )
    seq = [estimates[n] for n in cfg.n_values]
    ok = all(b <= a for a, b in zip(seq, seq[1:]))
    flags = [
        Flag(
            "trend-nonincreasing",
            ok,
            "estimates " + " -> ".join(f"{v:.6g}" for v in seq),
        )
    ]
    return summary, flags


# ---------------------------------------------------------------------------
# covariance-universality


def _covariance_validate(cfg: RunConfig) -> None:
    if not cfg.atom.is_complex:
        raise ConfigError(
            "covariance-universality requires a complex atom on the sparse side"
        )


def _pm_spectrum_check(A: np.ndarray, n: int) -> tuple[np.ndarray, float]:
    B = A / math.sqrt(n)
    eig = linalg.hermitian_eigen(linalg.dirac_block(A))
    sigma = linalg.singular_values(B).values
    expected = np.sort(np.concatenate([sigma, -sigma]))
    # The Gram route reports an exact zero only as ~sqrt(eps)*||B||;
    # identify sub-resolution magnitudes with zero before comparing.
    floor = linalg.GRAM_SIGMA_RTOL * linalg.hs_norm(B)
    eig_f = np.where(np.abs(eig) <= floor, 0.0, eig)
    exp_f = np.where(np.abs(expected) <= floor, 0.0, expected)
    gap = float(np.max(np.abs(eig_f - exp_f)))
    if gap > PM_SPECTRUM_TOL:
        raise ContractError(
            f"block-embedding spectrum deviates from +-sigma by {gap:.3e}"
        )
    return eig, gap


def _covariance_trial(cfg: RunConfig, n: int, trial: int) -> RunRecord:
    A = sample_matrix(_sparse_spec(cfg, n, ShiftPattern.zero()), _path(cfg, 9, n, trial, 0))
    B = sample_matrix(_dense_spec(cfg, n, ShiftPattern.zero()), _path(cfg, 9, n, trial, 1))
    eig_a, gap_a = _pm_spectrum_check(A, n)
    eig_b, gap_b = _pm_spectrum_check(B, n)
    sym_gap = float(np.max(np.abs(eig_a + eig_a[::-1])))
    values = {
        "ks_distance": esd.ks_two_sample_real(eig_a, eig_b),
        "pm_match_gap": max(gap_a, gap_b),
        "symmetry_gap": sym_gap,
    }
    esds = {
        "sparse": eig_a.astype(np.complex128),
        "dense": eig_b.astype(np.complex128),
    }
    return RunRecord(n, trial, values, esds=esds)


def _covariance_summarize(cfg: RunConfig, records):
    med = _median_by_n(records, "ks_distance")
    summary = [{"n": n, "median_ks": med.get(n)} for n in cfg.n_values]
    worst = max(
        (r.values["pm_match_gap"] for r in records if r.exception is None),
        default=0.0,
    )
    flags = [
        Flag(
            "pm-spectrum-match",
            worst <= PM_SPECTRUM_TOL,
            f"worst +-sigma gap {worst:.3e} (tolerance {PM_SPECTRUM_TOL})",
        )
    ]
    f = _decay_flag(cfg, med, "ks_distance")
    if f is not None:
        flags.append(f)
    return summary, flags


# ---------------------------------------------------------------------------
# rate-study


def _rate_validate(cfg: RunConfig) -> None:
    if cfg.atom_b is None:
        raise ConfigError("rate-study requires two atoms (set atom_b)")


def _rate_trial(cfg: RunConfig, n: int, trial: int) -> RunRecord:
    params = make_sparse_params(cfg.alpha, n)
    esds = {}
    values = {}
    for side, atom in ((0, cfg.atom), (1, cfg.second_atom())):
        spec = EnsembleSpec(atom, params, ShiftPattern.zero(), sparse=True)
        A = sample_matrix(spec, _path(cfg, 10, n, trial, side))
        e = esd.esd_from_matrix(A)
        label = "a" if side == 0 else "b"
        values[f"radial_ks_{label}"] = esd.radial_ks(e)
        values[f"kolmogorov_{label}"] = esd.kolmogorov_discrepancy(e, esd.UNIT_DISK)
        esds[label] = e.points
    return RunRecord(n, trial, values, esds=esds)


def _rate_summarize(cfg: RunConfig, records):
    summary = []
    for n in cfg.n_values:
        row = {"n": n}
        for key in ("radial_ks_a", "radial_ks_b", "kolmogorov_a", "kolmogorov_b"):
            med = _median_by_n(records, key)
            row[f"median_{key}"] = med.get(n)
        summary.append(row)
    return summary, []


# ---------------------------------------------------------------------------
# registry and runner


@dataclass(frozen=True)
class ExperimentDef:
    name: str
    seed_id: int
    description: str
    validate: object
    trial: object
    summarize: object
    jobs: object = None  # defaults to one job per (n, trial)
    dense_matrices: bool = True  # n_values are matrix dimensions


def _no_validate(cfg: RunConfig) -> None:
    return None


EXPERIMENTS: dict[str, ExperimentDef] = {
    e.name: e
    for e in (
        ExperimentDef(
            "circular-law",
            1,
            "scaled sparse iid matrices: ESD approaches the uniform law on the unit disk",
            _circular_validate,
            _circular_trial,
            _circular_summarize,
        ),
        ExperimentDef(
            "universality",
            2,
            "sparse vs non-sparse ESDs with the same deterministic shift converge together",
            _no_validate,
            _universality_trial,
            _universality_summarize,
        ),
        ExperimentDef(
            "shifted-outlier",
            3,
            "rank-sqrt(n) diagonal shift: ~sqrt(n) eigenvalues near 2, bulk fills the disk",
            _outlier_validate,
            _outlier_trial,
            _outlier_summarize,
        ),
        ExperimentDef(
            "logdet-convergence",
            4,
            "normalized log-determinants of sparse and non-sparse draws agree at a probe point",
            _logdet_validate,
            _logdet_trial,
            _logdet_summarize,
        ),
        ExperimentDef(
            "distance-concentration",
            5,
            "sparse random vectors keep macroscopic distance from fixed coordinate subspaces",
            _distance_validate,
            _distance_trial,
            _distance_summarize,
            dense_matrices=False,
        ),
        ExperimentDef(
            "least-singular",
            6,
            "smallest singular values stay above a polynomial floor",
            _no_validate,
            _least_singular_trial,
            _least_singular_summarize,
        ),
        ExperimentDef(
            "sparse-lln",
            7,
            "means of sparse draws concentrate on the atom mean",
            _lln_validate,
            _lln_trial,
            _lln_summarize,
            dense_matrices=False,
        ),
        ExperimentDef(
            "truncation-decay",
            8,
            "truncated absolute moments of rescaled sparse variables shrink with n",
            _truncation_validate,
            _truncation_job,
            _truncation_summarize,
            jobs=_truncation_jobs,
            dense_matrices=False,
        ),
        ExperimentDef(
            "covariance-universality",
            9,
            "block-embedding (+-singular-value) spectra of sparse and non-sparse draws converge together",
            _covariance_validate,
            _covariance_trial,
            _covariance_summarize,
        ),
        ExperimentDef(
            "rate-study",
            10,
            "side-by-side disk-convergence discrepancies for two atoms at equal sparsity",
            _rate_validate,
            _rate_trial,
            _rate_summarize,
        ),
    )
}


def experiment_ids() -> list[str]:
    return list(EXPERIMENTS)


def _default_jobs(cfg: RunConfig):
    return [(n, trial) for n in cfg.n_values for trial in range(cfg.trials)]


def _run_job(task):
    cfg, job = task
    exp = EXPERIMENTS[cfg.experiment]
    try:
        out = exp.trial(cfg, *job)
    except (_ExceptionalTrial, ConvergenceError) as exc:
        if len(job) == 2:
            return [RunRecord(job[0], job[1], {}, exception=str(exc))]
        return [RunRecord(n, job[0], {}, exception=str(exc)) for n in cfg.n_values]
    return out if isinstance(out, list) else [out]


def _validate_config(cfg: RunConfig) -> None:
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment id: {cfg.experiment!r}")
    if not cfg.n_values:
        raise ConfigError("n_values must not be empty")
    if any(n < 1 for n in cfg.n_values):
        raise ConfigError("n_values must be positive")
    if any(b <= a for a, b in zip(cfg.n_values, cfg.n_values[1:])):
        raise ConfigError("n_values must be strictly increasing")
    if EXPERIMENTS[cfg.experiment].dense_matrices and cfg.n_values[-1] > MAX_DIMENSION:
        raise ConfigError(
            f"{cfg.experiment} allocates dense n x n matrices; "
            f"n_values must be <= {MAX_DIMENSION}"
        )
    if cfg.trials < 1:
        raise ConfigError("trials must be >= 1")
    if not (0.0 < cfg.alpha <= 1.0):
        raise ConfigError("alpha must lie in (0, 1]")


def run_experiment(cfg: RunConfig, workers: int | None = None) -> RunReport:
    """Execute one experiment; bit-identical output for any worker count."""
    from . import __version__

    _validate_config(cfg)
    exp = EXPERIMENTS[cfg.experiment]
    exp.validate(cfg)
    jobs = exp.jobs(cfg) if exp.jobs is not None else _default_jobs(cfg)
    tasks = [(cfg, job) for job in jobs]
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    if workers <= 1 or len(tasks) <= 1:
        results = [_run_job(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, tasks, chunksize=1))
    records = [rec for group in results for rec in group]
    records.sort(key=lambda r: (r.n, r.trial))
    summary, flags = exp.summarize(cfg, records)
    exceptions = sum(1 for r in records if r.exception is not None)
    flags.append(_exception_flag(records))
    return RunReport(
        experiment=cfg.experiment,
        config=cfg,
        records=records,
        summary=summary,
        flags=flags,
        exceptions=exceptions,
        version=__version__,
    )
