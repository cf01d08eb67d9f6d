import os

import numpy as np
import pytest

os.environ.setdefault("SPARSESPECTRA_WORKERS", "2")

from sparsespectra.ensembles import Atom
from sparsespectra.experiments import RunConfig, run_experiment


def _esd_bank(n, trials, atom, alpha, seed):
    cfg = RunConfig(
        experiment="circular-law",
        n_values=(n,),
        atom=atom,
        alpha=alpha,
        trials=trials,
        master_seed=seed,
    )
    report = run_experiment(cfg)
    assert report.exceptions == 0
    return [rec.esds[""] for rec in report.records]


@pytest.fixture(scope="session")
def bernoulli_esds_1000():
    """20 independent sparse Bernoulli ESDs at n=1000, alpha=0.4."""
    return _esd_bank(1000, 20, Atom.BERNOULLI_PM1, 0.4, seed=1003)


@pytest.fixture(scope="session")
def bernoulli_esds_500():
    """20 independent sparse Bernoulli ESDs at n=500, alpha=0.4."""
    return _esd_bank(500, 20, Atom.BERNOULLI_PM1, 0.4, seed=1005)


@pytest.fixture(scope="session")
def bernoulli_esd_2000():
    """One sparse Bernoulli ESD at n=2000, alpha=0.4 (figure-scale)."""
    return _esd_bank(2000, 1, Atom.BERNOULLI_PM1, 0.4, seed=1007)[0]


@pytest.fixture(scope="session")
def gaussian_radial_medians():
    """Median radial KS of sparse Gaussian ESDs at n=200 and n=1000."""
    cfg = RunConfig(
        experiment="circular-law",
        n_values=(200, 1000),
        atom=Atom.REAL_GAUSSIAN,
        alpha=0.4,
        trials=5,
        master_seed=1009,
    )
    report = run_experiment(cfg)
    assert report.exceptions == 0
    return {row["n"]: row["median_radial_ks"] for row in report.summary}


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)
