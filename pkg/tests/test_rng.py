import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsespectra import rng
from sparsespectra.ensembles import SeedPath


def test_counter_value_matches_splitmix_reference():
    # First output of the reference SplitMix64 stream seeded with 0.
    assert rng.counter_value(0, 0) == 0xE220A8397B1DCDAF
    assert rng.counter_value(0, 1) == rng.mix64(2 * 0x9E3779B97F4A7C15 % 2**64)


def test_same_path_same_key():
    a = SeedPath(42).child(1, 2, 3).key()
    b = SeedPath(42).child(1, 2, 3).key()
    assert a == b
    assert SeedPath(42).child(1, 2).child(3).key() == a


def test_distinct_paths_distinct_keys():
    keys = {
        SeedPath(42).child(*labels).key()
        for labels in [(0,), (1,), (0, 0), (0, 1), (1, 0), (2, 0, 0), (0, 0, 0)]
    }
    keys.add(SeedPath(43).child(0).key())
    assert len(keys) == 8


def test_uniform_ranges():
    vals_open = [rng.unit_open(rng.counter_value(9, c)) for c in range(1000)]
    vals_half = [rng.unit_half_open(rng.counter_value(9, c)) for c in range(1000)]
    assert all(0.0 < v <= 1.0 for v in vals_open)
    assert all(0.0 <= v < 1.0 for v in vals_half)
    assert rng.unit_open(0) > 0.0
    assert rng.unit_half_open(0) == 0.0
    assert rng.unit_open((1 << 64) - 1) == 1.0
    assert rng.unit_half_open((1 << 64) - 1) < 1.0


@given(
    master=st.integers(min_value=0, max_value=2**64 - 1),
    labels=st.lists(st.integers(min_value=0, max_value=2**63), max_size=5),
)
@settings(max_examples=200, deadline=None)
def test_scalar_vector_fold_agree(master, labels):
    key = rng.mix64(master)
    for label in labels:
        key = rng._fold(key, label)
    vec = np.uint64(rng.mix64(master))
    for label in labels:
        vec = rng.fold_array(int(vec), np.array([label], dtype=np.uint64))[0]
    assert int(vec) == key


def test_vectorized_counters_match_scalar():
    keys = np.array([rng.mix64(k) for k in range(64)], dtype=np.uint64)
    for counter in (0, 1, 2, 7):
        vec = rng.counter_value_array(keys, counter)
        ref = [rng.counter_value(int(k), counter) for k in keys]
        assert [int(v) for v in vec] == ref


def test_unit_arrays_match_scalars():
    raws = rng.counter_value_array(np.arange(100, dtype=np.uint64), 0)
    open_vals = rng.unit_open_array(raws)
    half_vals = rng.unit_half_open_array(raws)
    for i in range(100):
        assert open_vals[i] == rng.unit_open(int(raws[i]))
        assert half_vals[i] == rng.unit_half_open(int(raws[i]))
