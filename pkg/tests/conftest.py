import itertools

import numpy as np
import pytest

from entchar import DiscreteDistribution, RandomVectorDistribution, example_network


EIGHTH = (0.125,) * 8

TABLE_X_SUPPORT = (
    ("a", "1"), ("a", "2"), ("b", "1"), ("b", "2"),
    ("c", "3"), ("c", "4"), ("d", "3"), ("d", "4"),
)
TABLE_XSTAR_SUPPORT = (
    ("a", "1"), ("a", "2"), ("b", "2"), ("b", "3"),
    ("c", "3"), ("c", "4"), ("d", "1"), ("d", "4"),
)


@pytest.fixture(scope="session")
def table_x():
    """Block-structured uniform pair: rows a,b share columns 1,2; c,d share 3,4."""
    return RandomVectorDistribution.from_support(TABLE_X_SUPPORT, EIGHTH)


@pytest.fixture(scope="session")
def table_xstar():
    """Cycle-structured uniform pair with the same scalar distribution."""
    return RandomVectorDistribution.from_support(TABLE_XSTAR_SUPPORT, EIGHTH)


@pytest.fixture(scope="session")
def fig_net():
    return example_network()


def random_sorted_dist(rng, n, floor):
    """Full-support scalar distribution, sorted descending, min prob >= floor."""
    weights = rng.dirichlet(np.ones(n))
    probs = floor + (1.0 - n * floor) * weights
    probs = np.sort(probs)[::-1]
    probs = probs / probs.sum()
    return DiscreteDistribution(tuple(f"a{i}" for i in range(n)), tuple(probs))


def random_vector_dist(rng, max_alpha=4, max_support=None, floor=0.01):
    """Random 2-coordinate vector distribution with tight alphabets."""
    rows = int(rng.integers(2, max_alpha + 1))
    cols = int(rng.integers(2, max_alpha + 1))
    cells = list(itertools.product(range(rows), range(cols)))
    for _ in range(200):
        keep = [c for c in cells if rng.random() < 0.6]
        if max_support is not None and len(keep) > max_support:
            continue
        if len(keep) < 2:
            continue
        if {r for r, _ in keep} == set(range(rows)) and \
                {c for _, c in keep} == set(range(cols)):
            break
    else:
        raise RuntimeError("could not sample a tight support")
    size = len(keep)
    weights = rng.dirichlet(np.ones(size))
    probs = floor + (1.0 - size * floor) * weights
    probs = probs / probs.sum()
    outcomes = [(f"r{r}", f"c{c}") for r, c in keep]
    return RandomVectorDistribution.from_support(outcomes, tuple(probs))


def random_product_joint(rng, max_vars=4, max_alpha=3):
    """Random full-support joint over up to max_vars coordinates."""
    m = int(rng.integers(2, max_vars + 1))
    sizes = [int(rng.integers(2, max_alpha + 1)) for _ in range(m)]
    outcomes = [
        tuple(f"v{j}_{t[j]}" for j in range(m))
        for t in itertools.product(*(range(s) for s in sizes))
    ]
    weights = rng.dirichlet(np.ones(len(outcomes)))
    floor = 1e-3
    probs = floor + (1.0 - len(outcomes) * floor) * weights
    probs = probs / probs.sum()
    return RandomVectorDistribution.from_support(outcomes, tuple(probs))
