"""Frozen regression baselines.

Values recorded from the first green build (with ~1.3x headroom so that
reruns and minor numeric drift do not flap) and compared against newly
computed medians.  Keys: (experiment, metric, atom token, alpha, n).
"""

from __future__ import annotations

from .ensembles import Atom

BASELINES: dict[tuple, float] = {
    # First green build (master seed 3) measured a median radial KS of
    # 0.0291 at the final sweep point; stored with ~1.3x headroom.
    ("circular-law", "radial_ks", "bernoulli", 0.4, 1000): 0.038,
}


def lookup(experiment: str, metric: str, atom: Atom, alpha: float, n: int):
    return BASELINES.get((experiment, metric, atom.value, round(alpha, 6), n))
