import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entchar import (
    DiscreteDistribution,
    InvalidDistributionError,
    RandomVectorDistribution,
    binary_entropy,
    conditional_subset_entropy,
    distribution_from_json,
    entropy,
    invert_binary_entropy,
    load_distribution,
    marginal,
    subset_entropy,
)
from conftest import random_product_joint

# independently evaluated -q log2 q - (1-q) log2 (1-q) at q = 1/8
HB_EIGHTH = 0.5435644431995964


def test_entropy_point_mass():
    assert entropy(DiscreteDistribution(("x",), (1.0,))) == 0.0


def test_entropy_uniform_eight():
    d = DiscreteDistribution(tuple("abcdefgh"), (0.125,) * 8)
    assert entropy(d) == 3.0


def test_entropy_half_quarter_quarter():
    d = DiscreteDistribution(("a", "b", "c"), (0.5, 0.25, 0.25))
    assert entropy(d) == 1.5


@pytest.mark.parametrize("q,expected", [(0.5, 1.0), (0.0, 0.0), (1.0, 0.0)])
def test_binary_entropy_exact_points(q, expected):
    assert binary_entropy(q) == expected


def test_binary_entropy_eighth():
    assert binary_entropy(0.125) == pytest.approx(HB_EIGHTH, abs=1e-12)


@pytest.mark.parametrize("q", [-0.1, 1.1, 2.0])
def test_binary_entropy_rejects_out_of_range(q):
    with pytest.raises(ValueError):
        binary_entropy(q)


def test_invert_binary_entropy_boundaries():
    assert invert_binary_entropy(1.0) == 0.5
    assert invert_binary_entropy(0.0) == 0.0
    assert invert_binary_entropy(HB_EIGHTH) == pytest.approx(0.125, abs=1e-10)


@pytest.mark.parametrize("v", [-0.01, 1.01])
def test_invert_binary_entropy_rejects_out_of_range(v):
    with pytest.raises(ValueError):
        invert_binary_entropy(v)


def test_invert_round_trip_grid():
    for i in range(1001):
        q = i / 1000
        back = invert_binary_entropy(binary_entropy(q))
        assert abs(back - min(q, 1.0 - q)) <= 1e-10


@given(st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=200, deadline=None)
def test_binary_entropy_symmetry(q):
    assert binary_entropy(q) == pytest.approx(binary_entropy(1.0 - q), abs=1e-12)
    assert 0.0 <= binary_entropy(q) <= 1.0


@given(st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=1, max_size=10))
@settings(max_examples=200, deadline=None)
def test_entropy_bounds(weights):
    total = math.fsum(weights)
    probs = tuple(w / total for w in weights)
    if abs(math.fsum(probs) - 1.0) > 1e-12:
        return
    d = DiscreteDistribution(tuple(f"o{i}" for i in range(len(probs))), probs)
    h = entropy(d)
    assert -1e-12 <= h <= math.log2(d.n) + 1e-9


def test_uniform_attains_maximum():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(2, 9))
        probs = rng.dirichlet(np.ones(n))
        probs = probs / probs.sum()
        try:
            d = DiscreteDistribution(tuple(f"o{i}" for i in range(n)), tuple(probs))
        except InvalidDistributionError:
            continue  # a sampled mass fell below the support floor
        assert entropy(d) <= math.log2(n) + 1e-9
    uniform = DiscreteDistribution(tuple("abcd"), (0.25,) * 4)
    assert entropy(uniform) == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("probs", [
    (0.5, 0.5, 0.1),            # sums above one
    (0.5, 0.4),                 # sums below one
    (1.0 + 1e-6,),              # single mass off
    (0.5, 0.5 - 1e-13, 1e-13),  # below the support floor
    (0.5, -0.5, 1.0),           # negative
])
def test_invalid_probabilities_rejected(probs):
    with pytest.raises(InvalidDistributionError):
        DiscreteDistribution(tuple(f"o{i}" for i in range(len(probs))), probs)


def test_duplicate_outcomes_rejected():
    with pytest.raises(InvalidDistributionError):
        DiscreteDistribution(("a", "a"), (0.5, 0.5))


def test_canonical_sorts_and_breaks_ties_by_label():
    d = DiscreteDistribution(("z", "m", "a"), (0.25, 0.5, 0.25))
    c = d.canonical()
    assert c.support == ("m", "a", "z")
    assert c.probs == (0.5, 0.25, 0.25)
    assert c.is_sorted


def test_marginal_table_rows_and_columns(table_x):
    rows = marginal(table_x, [0])
    assert sorted(rows.support) == ["a", "b", "c", "d"]
    assert all(p == 0.25 for p in rows.probs)
    cols = marginal(table_x, [1])
    assert sorted(cols.support) == ["1", "2", "3", "4"]
    assert all(p == 0.25 for p in cols.probs)


def test_marginal_identity_projection(table_x):
    both = marginal(table_x, [0, 1])
    assert set(both.support) == set(table_x.support)
    assert entropy(both) == 3.0


def test_marginal_rejects_empty_and_bad_coords(table_x):
    with pytest.raises(ValueError):
        marginal(table_x, [])
    with pytest.raises(ValueError):
        marginal(table_x, [2])


def test_subset_entropy_values(table_x):
    assert subset_entropy(table_x, [0, 1]) == 3.0
    assert subset_entropy(table_x, [0]) == 2.0
    bits = RandomVectorDistribution.from_support(
        [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")], (0.25,) * 4
    )
    assert subset_entropy(bits, [0, 1]) == 2.0


def test_conditional_subset_entropy(table_x):
    h = conditional_subset_entropy(table_x, [1], [0])
    assert h == pytest.approx(
        subset_entropy(table_x, [0, 1]) - subset_entropy(table_x, [0]), abs=0
    )
    assert conditional_subset_entropy(table_x, [0], []) == subset_entropy(table_x, [0])


def test_subset_entropy_monotone_and_submodular():
    rng = np.random.default_rng(23)
    for _ in range(25):
        d = random_product_joint(rng)
        m = d.num_coords
        subsets = [
            [j for j in range(m) if mask >> j & 1]
            for mask in range(1, 1 << m)
        ]
        values = {tuple(s): subset_entropy(d, s) for s in subsets}

        def h(mask):
            if mask == 0:
                return 0.0
            return values[tuple(j for j in range(m) if mask >> j & 1)]

        for a in range(1 << m):
            for b in range(1 << m):
                if a & ~b == 0:
                    assert h(a) <= h(b) + 1e-12
                assert h(a) + h(b) + 1e-9 >= h(a | b) + h(a & b)


def test_vector_validation():
    with pytest.raises(InvalidDistributionError):
        RandomVectorDistribution(
            2, (("a",), ("1", "2")),
            DiscreteDistribution((("a", "1"),), (1.0,)),
        )  # alphabet not tight
    with pytest.raises(InvalidDistributionError):
        RandomVectorDistribution(
            2, (("a",), ("1",)),
            DiscreteDistribution((("a",),), (1.0,)),
        )  # outcome arity mismatch


def test_json_scalar_with_fractions(tmp_path):
    doc = {"support": ["a", "b", "c"], "probs": ["1/2", "1/4", 0.25]}
    d = distribution_from_json(doc)
    assert isinstance(d, DiscreteDistribution)
    assert d.probs == (0.5, 0.25, 0.25)
    path = tmp_path / "d.json"
    path.write_text(json.dumps(doc))
    assert load_distribution(path).support == ("a", "b", "c")


def test_json_vector_form():
    doc = {
        "arity": 2,
        "support": [["a", "1"], ["a", "2"], ["b", "1"]],
        "probs": ["1/2", "1/4", "1/4"],
    }
    d = distribution_from_json(doc)
    assert isinstance(d, RandomVectorDistribution)
    assert d.coord_alphabets == (("a", "b"), ("1", "2"))


@pytest.mark.parametrize("doc", [
    {"probs": [1.0]},
    {"support": ["a"]},
    {"arity": 2, "support": ["a"], "probs": [1.0]},
    {"arity": 2, "support": [["a"]], "probs": [1.0]},
    {"support": ["a"], "probs": ["1/0"]},
])
def test_json_rejects_malformed(doc):
    with pytest.raises(InvalidDistributionError):
        distribution_from_json(doc)
