import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsvm.data import (NEGATIVE_CENTERS, POSITIVE_CENTERS, DataFormatError, Dataset, ToyConfig,
                       dumps_csv, generate_toy, parse_csv, read_csv, standard_normal_pairs, write_csv)


def test_zero_variance_gives_centres():
    d = generate_toy(ToyConfig(points_per_cluster=1, sigma1=0.0, sigma2=0.0))
    np.testing.assert_array_equal(d.X, np.vstack([POSITIVE_CENTERS, NEGATIVE_CENTERS]))
    np.testing.assert_array_equal(d.y, [1, 1, 1, 1, 1, -1, -1, -1, -1])
    r = 1 / math.sqrt(2)
    assert d.X[1].tolist() == [r, r]


def test_default_sizes():
    d = generate_toy()
    assert (d.n, d.n_pos, d.n_neg) == (450, 250, 200)


def test_same_seed_same_data():
    assert generate_toy(ToyConfig(seed=7)) == generate_toy(ToyConfig(seed=7))
    assert generate_toy(ToyConfig(seed=7)) != generate_toy(ToyConfig(seed=8))


def test_cluster_means_converge():
    k = 2000
    d = generate_toy(ToyConfig(seed=11, points_per_cluster=k))
    centres = np.vstack([POSITIVE_CENTERS, NEGATIVE_CENTERS])
    for c, centre in enumerate(centres):
        block = d.X[c * k:(c + 1) * k]
        assert np.all(np.abs(block.mean(axis=0) - centre) <= 0.02)


def test_box_muller_moments():
    z = standard_normal_pairs(np.random.Generator(np.random.PCG64(0)), 200_000)
    assert np.all(np.abs(z.mean(axis=0)) < 0.01)
    assert np.all(np.abs(z.std(axis=0) - 1) < 0.01)
    assert abs(np.corrcoef(z.T)[0, 1]) < 0.01


def test_cluster_spread_matches_sigma():
    k = 5000
    d = generate_toy(ToyConfig(seed=2, points_per_cluster=k, sigma1=0.2, sigma2=0.5))
    assert d.X[:k].std(axis=0) == pytest.approx([0.2, 0.2], rel=0.05)
    assert d.X[5 * k:6 * k].std(axis=0) == pytest.approx([0.5, 0.5], rel=0.05)


def test_csv_single_row():
    d = parse_csv("1,0.5,-0.25\n")
    np.testing.assert_array_equal(d.X, [[0.5, -0.25]])
    np.testing.assert_array_equal(d.y, [1.0])


def test_csv_comments_and_blank_lines():
    d = parse_csv("# header comment\n\n-1,1,2\n1,3,4\n")
    assert d.n == 2 and d.y.tolist() == [-1.0, 1.0]


@pytest.mark.parametrize("text, message", [
    ("2,0.5,0.5\n", "label must be -1 or 1 (line 1)"),
    ("1,0.5,0.5\n1,abc,2\n", "malformed number (line 2)"),
    ("1,0.5,0.5\n-1,1\n", "(line 2)"),
    ("1\n", "(line 1)"),
    ("# only a comment\n", "no data rows"),
    ("1,nan,0\n", "(line 1)"),
])
def test_csv_errors(text, message):
    with pytest.raises(DataFormatError) as exc:
        parse_csv(text)
    assert message in str(exc.value)


def test_round_trip_toy(tmp_path):
    d = generate_toy(ToyConfig(points_per_cluster=1, sigma1=0, sigma2=0))
    write_csv(d, tmp_path / "toy.csv")
    assert read_csv(tmp_path / "toy.csv") == d
    assert len((tmp_path / "toy.csv").read_text().splitlines()) == 9


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.sampled_from([-1.0, 1.0]),
                          st.floats(allow_nan=False, allow_infinity=False),
                          st.floats(allow_nan=False, allow_infinity=False)), min_size=1, max_size=20))
def test_round_trip_is_exact(rows):
    d = Dataset(np.array([r[1:] for r in rows]), np.array([r[0] for r in rows]))
    back = parse_csv(dumps_csv(d))
    assert np.array_equal(back.X, d.X) and np.array_equal(back.y, d.y)


def test_dataset_validation():
    with pytest.raises(ValueError):
        Dataset(np.zeros((2, 2)), [1.0, 0.0])
    with pytest.raises(ValueError):
        Dataset(np.zeros((2, 2)), [1.0])
    with pytest.raises(ValueError):
        Dataset(np.zeros((0, 2)), [])
