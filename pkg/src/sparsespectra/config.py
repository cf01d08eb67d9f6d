"""Run-configuration text format.

Grammar: one `key = value` pair per line, `#` starts a comment (full
line or trailing), optional section headers `[ensemble]`, `[experiment]`
and `[output]` group the keys.  Unknown keys and unknown sections are
hard errors; numeric values are range-validated at parse time and every
error carries its line number.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ensembles import Atom, ShiftKind, ShiftPattern
from .errors import ConfigError
from .experiments import EXPERIMENTS, RunConfig

_SECTIONS = ("ensemble", "experiment", "output")

_ENSEMBLE_KEYS = ("atom", "atom_b", "alpha", "shift", "shift_values")
_EXPERIMENT_KEYS = (
    "experiment",
    "n_values",
    "trials",
    "master_seed",
    "z_probe",
    "c_probe",
    "d_fraction",
    "m",
    "draws",
    "shared_seed",
)
_OUTPUT_KEYS = ("out_dir", "write_esd_csv")
_ALL_KEYS = _ENSEMBLE_KEYS + _EXPERIMENT_KEYS + _OUTPUT_KEYS

_SHIFT_TOKENS = {k.value: k for k in ShiftKind}
_ATOM_TOKENS = {a.value: a for a in Atom}


@dataclass
class OutputOptions:
    """[output]-section options consumed by the CLI."""

    out_dir: str | None = None
    write_esd_csv: bool = True


def _parse_lines(text: str) -> dict[str, tuple[str, int]]:
    """Tokenize into {key: (raw value, line number)}, validating shape."""
    seen: dict[str, tuple[str, int]] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in _SECTIONS:
                raise ConfigError(f"unknown section [{section}]", lineno)
            continue
        if "=" not in line:
            raise ConfigError(f"expected `key = value`, got {line!r}", lineno)
        key, value = line.split("=", 1)
        key = key.strip().lower().replace("-", "_")
        value = value.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        if not value:
            raise ConfigError(f"empty value for key {key!r}", lineno)
        seen[key] = (value, lineno)
    return seen


def _parse_int(value: str, lineno: int, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {value!r}", lineno)


def _parse_float(value: str, lineno: int, key: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {value!r}", lineno)


def _parse_complex(value: str, lineno: int, key: str) -> complex:
    try:
        return complex(value.replace("i", "j").replace(" ", ""))
    except ValueError:
        raise ConfigError(f"{key} must be a complex literal, got {value!r}", lineno)


def _parse_bool(value: str, lineno: int, key: str) -> bool:
    token = value.lower()
    if token in ("true", "false"):
        return token == "true"
    raise ConfigError(f"{key} must be true or false, got {value!r}", lineno)


def parse_config(text: str) -> RunConfig:
    """Parse and range-validate a run configuration document.

    Defaults: experiment=circular-law, trials=5, alpha=0.4,
    atom=bernoulli, shift=zero, master_seed=0.  `n_values` is required.
    """
    entries = _parse_lines(text)
    total_lines = text.count("\n") + 1

    def raw(key):
        return entries.get(key)

    if raw("n_values") is None:
        raise ConfigError("missing required key 'n_values'", total_lines)

    value, lineno = raw("n_values")
    n_values = tuple(
        _parse_int(tok.strip(), lineno, "n_values") for tok in value.split(",")
    )
    if not n_values or any(n < 1 for n in n_values):
        raise ConfigError("n_values must be positive integers", lineno)
    # Matrix experiments additionally enforce MAX_DIMENSION at run time;
    # scalar experiments (lln, truncation, distance) allow larger n.
    if any(n > 100_000_000 for n in n_values):
        raise ConfigError("n_values out of range", lineno)
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ConfigError("n_values must be strictly increasing", lineno)

    experiment = "circular-law"
    if raw("experiment"):
        value, lineno = raw("experiment")
        experiment = value.strip().lower()
        if experiment not in EXPERIMENTS:
            known = ", ".join(EXPERIMENTS)
            raise ConfigError(f"unknown experiment {experiment!r} (known: {known})", lineno)

    atom = Atom.BERNOULLI_PM1
    if raw("atom"):
        value, lineno = raw("atom")
        if value.lower() not in _ATOM_TOKENS:
            raise ConfigError(f"unknown atom {value!r}", lineno)
        atom = _ATOM_TOKENS[value.lower()]

    atom_b = None
    if raw("atom_b"):
        value, lineno = raw("atom_b")
        if value.lower() not in _ATOM_TOKENS:
            raise ConfigError(f"unknown atom_b {value!r}", lineno)
        atom_b = _ATOM_TOKENS[value.lower()]

    # rate-study's canonical sweep uses the slow-convergence regime 0.2.
    alpha = 0.2 if experiment == "rate-study" else 0.4
    if raw("alpha"):
        value, lineno = raw("alpha")
        alpha = _parse_float(value, lineno, "alpha")
        if not (0.0 < alpha <= 1.0):
            raise ConfigError(f"alpha must lie in (0, 1], got {alpha}", lineno)

    trials = 5
    if raw("trials"):
        value, lineno = raw("trials")
        trials = _parse_int(value, lineno, "trials")
        if trials < 1:
            raise ConfigError("trials must be >= 1", lineno)

    shift = ShiftPattern.zero()
    if raw("shift"):
        value, lineno = raw("shift")
        token = value.lower()
        if token not in _SHIFT_TOKENS:
            raise ConfigError(f"unknown shift pattern {value!r}", lineno)
        kind = _SHIFT_TOKENS[token]
        if kind is ShiftKind.CUSTOM_DIAG:
            if raw("shift_values") is None:
                raise ConfigError("custom-diag shift requires shift_values", lineno)
            vraw, vline = raw("shift_values")
            values = tuple(
                _parse_complex(tok.strip(), vline, "shift_values")
                for tok in vraw.split(",")
            )
            shift = ShiftPattern.custom_diag(values)
        else:
            shift = ShiftPattern(kind)
    elif raw("shift_values"):
        _, lineno = raw("shift_values")
        raise ConfigError("shift_values requires shift = custom-diag", lineno)

    master_seed = 0
    if raw("master_seed"):
        value, lineno = raw("master_seed")
        master_seed = _parse_int(value, lineno, "master_seed")
        if not (0 <= master_seed < 2**64):
            raise ConfigError("master_seed must fit in 64 bits", lineno)

    z_probe = 0.0 + 0.0j
    if raw("z_probe"):
        value, lineno = raw("z_probe")
        z_probe = _parse_complex(value, lineno, "z_probe")
        if abs(z_probe) > 3.0:
            raise ConfigError("z_probe must satisfy |z| <= 3", lineno)

    c_probe = 0.5
    if raw("c_probe"):
        value, lineno = raw("c_probe")
        c_probe = _parse_float(value, lineno, "c_probe")
        if not (0.0 < c_probe < 1.0):
            raise ConfigError("c_probe must lie in (0, 1)", lineno)

    d_fraction = 0.5
    if raw("d_fraction"):
        value, lineno = raw("d_fraction")
        d_fraction = _parse_float(value, lineno, "d_fraction")
        if not (0.0 < d_fraction < 1.0):
            raise ConfigError("d_fraction must lie in (0, 1)", lineno)

    m_samples = None
    if raw("m"):
        value, lineno = raw("m")
        m_samples = _parse_int(value, lineno, "m")
        if m_samples < 1:
            raise ConfigError("m must be >= 1", lineno)

    draws = 10_000_000
    if raw("draws"):
        value, lineno = raw("draws")
        draws = _parse_int(value, lineno, "draws")
        if draws < 1:
            raise ConfigError("draws must be >= 1", lineno)

    shared_seed = False
    if raw("shared_seed"):
        value, lineno = raw("shared_seed")
        shared_seed = _parse_bool(value, lineno, "shared_seed")

    return RunConfig(
        experiment=experiment,
        n_values=n_values,
        atom=atom,
        atom_b=atom_b,
        alpha=alpha,
        trials=trials,
        shift=shift,
        master_seed=master_seed,
        z_probe=z_probe,
        c_probe=c_probe,
        d_fraction=d_fraction,
        m_samples=m_samples,
        draws=draws,
        shared_seed=shared_seed,
    )


def parse_output_options(text: str) -> OutputOptions:
    """Extract the [output] options from the same document."""
    entries = _parse_lines(text)
    opts = OutputOptions()
    if "out_dir" in entries:
        opts.out_dir = entries["out_dir"][0]
    if "write_esd_csv" in entries:
        value, lineno = entries["write_esd_csv"]
        opts.write_esd_csv = _parse_bool(value, lineno, "write_esd_csv")
    return opts


def _format_complex(z: complex) -> str:
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}j"


def render_config(cfg: RunConfig) -> str:
    """Serialize a RunConfig back to the config grammar (round-trips)."""
    lines = ["[ensemble]"]
    lines.append(f"atom = {cfg.atom.value}")
    if cfg.atom_b is not None:
        lines.append(f"atom_b = {cfg.atom_b.value}")
    lines.append(f"alpha = {cfg.alpha!r}")
    lines.append(f"shift = {cfg.shift.kind.value}")
    if cfg.shift.kind is ShiftKind.CUSTOM_DIAG:
        vals = ",".join(_format_complex(v) for v in cfg.shift.values)
        lines.append(f"shift_values = {vals}")
    lines.append("")
    lines.append("[experiment]")
    lines.append(f"experiment = {cfg.experiment}")
    lines.append(f"n_values = {','.join(str(n) for n in cfg.n_values)}")
    lines.append(f"trials = {cfg.trials}")
    lines.append(f"master_seed = {cfg.master_seed}")
    lines.append(f"z_probe = {_format_complex(cfg.z_probe)}")
    lines.append(f"c_probe = {cfg.c_probe!r}")
    lines.append(f"d_fraction = {cfg.d_fraction!r}")
    if cfg.m_samples is not None:
        lines.append(f"m = {cfg.m_samples}")
    lines.append(f"draws = {cfg.draws}")
    lines.append(f"shared_seed = {'true' if cfg.shared_seed else 'false'}")
    return "\n".join(lines) + "\n"


def ensemble_to_config(atom: Atom, alpha: float, shift: ShiftPattern) -> str:
    """Serialize just the ensemble section (EnsembleSpec interchange)."""
    lines = ["[ensemble]", f"atom = {atom.value}", f"alpha = {alpha!r}"]
    lines.append(f"shift = {shift.kind.value}")
    if shift.kind is ShiftKind.CUSTOM_DIAG:
        vals = ",".join(_format_complex(v) for v in shift.values)
        lines.append(f"shift_values = {vals}")
    return "\n".join(lines) + "\n"
