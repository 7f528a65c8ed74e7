import numpy as np
import pytest
from hypothesis import given, strategies as st

from hetnet_sim.config import ConfigError
from hetnet_sim.spectrum import assign_fragments, fragment_band, overlap_count, overlap_matrix

from oracles import overlap_by_index


@pytest.mark.parametrize("n_f,size", [(1, 100), (2, 50), (4, 25), (10, 10)])
def test_fragment_sizes(n_f, size):
    frags = fragment_band(100, n_f)
    assert [len(f) for f in frags] == [size] * n_f
    covered = [i for f in frags for i in f.prb_indices]
    assert covered == list(range(100))


def test_four_fragments_exact():
    assert [(f.start, f.stop - 1) for f in fragment_band(100, 4)] == [(0, 24), (25, 49), (50, 74), (75, 99)]


def test_non_divisor_rejected():
    with pytest.raises(ConfigError, match="divisor"):
        fragment_band(100, 3)


def test_single_fragment_assignment():
    frags = fragment_band(100, 1)
    assert np.all(assign_fragments(50, frags, np.random.default_rng(0)) == 0)


def test_assignment_uniform():
    frags = fragment_band(100, 4)
    a = assign_fragments(10_000, frags, np.random.default_rng(1))
    freq = np.bincount(a, minlength=4) / 10_000
    assert np.all(np.abs(freq - 0.25) < 0.015)


def test_assignment_deterministic():
    frags = fragment_band(100, 10)
    a = assign_fragments(300, frags, np.random.default_rng(2))
    b = assign_fragments(300, frags, np.random.default_rng(2))
    assert np.array_equal(a, b)


def test_overlap_examples():
    assert overlap_count(set(range(10)), set(range(5, 15))) == 5
    f = fragment_band(100, 4)
    assert overlap_count(set(f[0].prb_indices), set(f[2].prb_indices)) == 0


prb_sets = st.sets(st.integers(0, 99), max_size=100)


@given(prb_sets, prb_sets)
def test_overlap_properties(a, b):
    assert overlap_count(a, b) == overlap_count(b, a) == overlap_by_index(a, b, 100)
    assert overlap_count(a, a) == len(a)
    assert overlap_count(a, set()) == 0


def test_overlap_matrix_matches_bruteforce():
    rng = np.random.default_rng(7)
    users = rng.random((12, 30)) < 0.3
    active = rng.random((5, 30)) < 0.5
    m = overlap_matrix(users, active)
    for u in range(12):
        for b in range(5):
            a = set(np.flatnonzero(users[u]).tolist())
            c = set(np.flatnonzero(active[b]).tolist())
            assert m[u, b] == overlap_by_index(a, c, 30)
