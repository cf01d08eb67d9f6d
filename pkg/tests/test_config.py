import pytest

from sparsespectra.config import (
    ensemble_to_config,
    parse_config,
    parse_output_options,
    render_config,
)
from sparsespectra.ensembles import Atom, ShiftKind, ShiftPattern
from sparsespectra.errors import ConfigError
from sparsespectra.experiments import RunConfig


def test_minimal_config_fills_defaults():
    cfg = parse_config("experiment=circular-law\nn_values=200,500\n")
    assert cfg.experiment == "circular-law"
    assert cfg.n_values == (200, 500)
    assert cfg.trials == 5
    assert cfg.alpha == 0.4
    assert cfg.atom is Atom.BERNOULLI_PM1
    assert cfg.shift.kind is ShiftKind.ZERO
    assert cfg.master_seed == 0


def test_rate_study_alpha_default():
    cfg = parse_config("experiment=rate-study\nn_values=100\natom_b=gaussian\n")
    assert cfg.alpha == 0.2
    cfg = parse_config("experiment=circular-law\nn_values=100\n")
    assert cfg.alpha == 0.4


def test_sections_and_comments():
    text = """
# run description
[ensemble]
atom = gaussian        # dense reference
alpha = 0.5

[experiment]
experiment = universality
n_values = 100, 200
trials = 3

[output]
out_dir = runs/demo
"""
    cfg = parse_config(text)
    assert cfg.atom is Atom.REAL_GAUSSIAN
    assert cfg.alpha == 0.5
    assert cfg.trials == 3
    opts = parse_output_options(text)
    assert opts.out_dir == "runs/demo"
    assert opts.write_esd_csv is True


def _line_of(err: ConfigError) -> int:
    assert err.line is not None
    return err.line


@pytest.mark.parametrize("alpha", ["0", "1.5", "-0.3"])
def test_alpha_out_of_range(alpha):
    with pytest.raises(ConfigError) as exc:
        parse_config(f"n_values=100\nalpha={alpha}\n")
    assert _line_of(exc.value) == 2


def test_unknown_key_is_hard_error_with_line():
    with pytest.raises(ConfigError) as exc:
        parse_config("n_values=100\nbogus=1\n")
    assert _line_of(exc.value) == 2


def test_unknown_section():
    with pytest.raises(ConfigError) as exc:
        parse_config("[nope]\nn_values=100\n")
    assert _line_of(exc.value) == 1


def test_duplicate_key():
    with pytest.raises(ConfigError) as exc:
        parse_config("n_values=100\nn_values=200\n")
    assert _line_of(exc.value) == 2


def test_missing_n_values():
    with pytest.raises(ConfigError) as exc:
        parse_config("experiment=circular-law\n")
    assert "n_values" in str(exc.value)


def test_unknown_experiment():
    with pytest.raises(ConfigError):
        parse_config("experiment=frobnicate\nn_values=100\n")


def test_n_values_must_increase():
    with pytest.raises(ConfigError):
        parse_config("n_values=200,100\n")


def test_n_values_limit():
    with pytest.raises(ConfigError):
        parse_config("n_values=1000000000\n")
    # matrix experiments reject oversized n at run time
    from sparsespectra.experiments import run_experiment

    with pytest.raises(ConfigError):
        run_experiment(parse_config("experiment=circular-law\nn_values=100000\n"))


def test_z_probe_range():
    with pytest.raises(ConfigError):
        parse_config("n_values=100\nz_probe=3+3j\n")
    cfg = parse_config("n_values=100\nz_probe=1+1i\n")
    assert cfg.z_probe == 1 + 1j


def test_master_seed_range():
    with pytest.raises(ConfigError):
        parse_config(f"n_values=100\nmaster_seed={2**64}\n")
    with pytest.raises(ConfigError):
        parse_config("n_values=100\nmaster_seed=-1\n")


def test_custom_shift_requires_values():
    with pytest.raises(ConfigError):
        parse_config("n_values=100\nshift=custom-diag\n")
    cfg = parse_config("n_values=100\nshift=custom-diag\nshift_values=1+2j, -3\n")
    assert cfg.shift.values == (1 + 2j, -3 + 0j)
    with pytest.raises(ConfigError):
        parse_config("n_values=100\nshift_values=1\n")


def test_malformed_line():
    with pytest.raises(ConfigError) as exc:
        parse_config("n_values=100\njust some words\n")
    assert _line_of(exc.value) == 2


def test_empty_value():
    with pytest.raises(ConfigError):
        parse_config("n_values=\n")


@pytest.mark.parametrize(
    "cfg",
    [
        RunConfig(experiment="circular-law", n_values=(100, 200)),
        RunConfig(
            experiment="universality",
            n_values=(64,),
            atom=Atom.COMPLEX_BERNOULLI,
            atom_b=Atom.REAL_GAUSSIAN,
            alpha=0.75,
            trials=2,
            shift=ShiftPattern.univ_diag(),
            master_seed=99,
        ),
        RunConfig(
            experiment="logdet-convergence",
            n_values=(50,),
            z_probe=0.5 - 0.25j,
            shared_seed=True,
            m_samples=200,
            draws=2_000_000,
            c_probe=0.25,
            d_fraction=0.125,
        ),
        RunConfig(
            experiment="shifted-outlier",
            n_values=(128,),
            shift=ShiftPattern.custom_diag([2.0 + 1j, -1.0]),
        ),
    ],
)
def test_render_parse_round_trip(cfg):
    assert parse_config(render_config(cfg)) == cfg


def test_ensemble_serialization_round_trip():
    text = ensemble_to_config(Atom.COMPLEX_GAUSSIAN, 0.6, ShiftPattern.outlier_diag())
    cfg = parse_config(text + "n_values = 10\n")
    assert cfg.atom is Atom.COMPLEX_GAUSSIAN
    assert cfg.alpha == 0.6
    assert cfg.shift.kind is ShiftKind.OUTLIER_DIAG
