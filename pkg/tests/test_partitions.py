import math

import numpy as np
import pytest

from entchar import (
    DegenerateSupportError,
    DiscreteDistribution,
    RandomVectorDistribution,
    SupportTooLargeError,
    binary_entropy,
    canonical_mask,
    entropy,
    enumerate_partitions,
    format_partition,
    indicator_partitions,
    joint_entropy,
    masks_joint_entropy,
    oracle_from_distribution,
    partition_probability,
)
from conftest import random_vector_dist


@pytest.mark.parametrize("n,count", [(2, 1), (3, 3), (4, 7), (5, 15)])
def test_family_sizes(n, count):
    fam = enumerate_partitions(n)
    assert len(fam) == count
    # independent oracle: proper subsets of atoms modulo complement
    masks = set()
    for m in range(1, (1 << n) - 1):
        masks.add(canonical_mask(m, n))
    assert len(masks) == count
    assert {p.mask for p in fam} == masks


def test_family_masks_are_canonical_and_ordered():
    fam = enumerate_partitions(5)
    for p in fam:
        assert p.mask & 1 == 0 and p.mask != 0
    keys = [(p.size, p.atoms()) for p in fam]
    assert keys == sorted(keys)


def test_enumerate_rejects_degenerate_and_oversized():
    with pytest.raises(DegenerateSupportError):
        enumerate_partitions(1)
    with pytest.raises(SupportTooLargeError):
        enumerate_partitions(25)


def test_canonical_mask_identifies_complements():
    assert canonical_mask(0b001, 3) == 0b110
    assert canonical_mask(0b110, 3) == 0b110
    with pytest.raises(ValueError):
        canonical_mask(0b111, 3)


def test_partition_probability():
    d = DiscreteDistribution(("a", "b", "c"), (0.5, 0.25, 0.25))
    fam = enumerate_partitions(3)
    both = fam[fam.index_of(0b110)]
    assert partition_probability(d, both) == 0.5
    single = fam[fam.index_of(0b010)]
    assert partition_probability(d, single) == 0.25


def test_indicator_probability_on_uniform_eight():
    d = DiscreteDistribution(tuple("abcdefgh"), (0.125,) * 8)
    fam = enumerate_partitions(8)
    p = fam[fam.index_of(1 << 3)]
    assert partition_probability(d, p) == 0.125
    assert joint_entropy(d, fam, [fam.index_of(1 << 3)]) == pytest.approx(
        binary_entropy(0.125), abs=1e-12
    )


def test_joint_entropy_empty_and_full():
    d = DiscreteDistribution(("a", "b", "c"), (0.5, 0.3, 0.2))
    fam = enumerate_partitions(3)
    assert joint_entropy(d, fam, []) == 0.0
    indicators = indicator_partitions(fam)
    assert joint_entropy(d, fam, indicators) == pytest.approx(entropy(d), abs=0)
    assert joint_entropy(d, fam, range(len(fam))) == pytest.approx(entropy(d), abs=0)


def test_joint_entropy_rejects_tau_on_scalar():
    d = DiscreteDistribution(("a", "b"), (0.5, 0.5))
    fam = enumerate_partitions(2)
    with pytest.raises(ValueError):
        joint_entropy(d, fam, [0], tau=[0])


def test_masks_joint_entropy_validates():
    d = DiscreteDistribution(("a", "b", "c"), (0.5, 0.3, 0.2))
    with pytest.raises(ValueError):
        masks_joint_entropy(d, [0b111])
    with pytest.raises(ValueError):
        masks_joint_entropy(d, [0])


@pytest.mark.parametrize("n", [3, 4, 5])
def test_indicator_partitions_counts(n):
    fam = enumerate_partitions(n)
    idx = indicator_partitions(fam)
    assert len(idx) == n
    assert len(set(idx)) == n
    for i, k in enumerate(idx):
        assert fam[k].is_indicator
        assert fam[k].detected_atom == i


def test_indicator_partitions_degenerate():
    with pytest.raises(DegenerateSupportError):
        indicator_partitions(enumerate_partitions(2))


def test_oracle_trivial_and_full_queries():
    d = DiscreteDistribution(("a", "b", "c"), (0.5, 0.3, 0.2))
    oracle = oracle_from_distribution(d)
    assert oracle.query((), ()) == 0.0
    # distinct probabilities: the full family separates every atom
    assert oracle.query(range(len(oracle.family))) == pytest.approx(
        entropy(d), abs=0
    )


def test_oracle_memoizes():
    d = DiscreteDistribution(("a", "b", "c"), (0.5, 0.3, 0.2))
    oracle = oracle_from_distribution(d)
    v1 = oracle.query((0, 1))
    computed = oracle.computed_queries
    v2 = oracle.query((1, 0))
    assert v1 == v2
    assert oracle.computed_queries == computed


def test_partition_determined_by_x_exactly(table_x):
    # grouping by (partition, full outcome) equals grouping by the outcome
    oracle = oracle_from_distribution(table_x)
    all_coords = (0, 1)
    h_x = oracle.query((), all_coords)
    for k in range(len(oracle.family)):
        assert oracle.query((k,), all_coords) == h_x


def test_oracle_monotone_and_submodular():
    rng = np.random.default_rng(5)
    for _ in range(10):
        d = random_vector_dist(rng, max_alpha=3, max_support=6)
        oracle = oracle_from_distribution(d)
        size = len(oracle.family)
        m = d.num_coords
        for _ in range(40):
            da = {int(k) for k in rng.integers(0, size, 2)}
            db = da | {int(k) for k in rng.integers(0, size, 2)}
            ta = {int(c) for c in rng.integers(0, m, 1)} if rng.random() < 0.5 else set()
            tb = ta | ({int(c) for c in rng.integers(0, m, 1)} if rng.random() < 0.5 else set())
            small = oracle.query(da, ta)
            large = oracle.query(db, tb)
            assert small <= large + 1e-9
            # submodularity over the partition-set component
            u = oracle.query(da | db, ta | tb)
            i = oracle.query(da & db, ta & tb)
            assert oracle.query(da, ta) + oracle.query(db, tb) + 1e-9 >= u + i


def test_format_partition():
    fam = enumerate_partitions(3)
    p = fam[fam.index_of(0b110)]
    assert format_partition(p, ("1", "2", "3")) == "{2,3}"
