"""Binary partition random variables of a finite support.

A partition variable splits the support into a set alpha and its complement
and reports which side the outcome fell on. Partitions are stored as bitmasks
over support indices; the canonical side is the one that excludes atom 0, so
the unordered pair {alpha, alpha^c} has a unique representative and the full
family over an n-atom support has exactly 2^(n-1) - 1 members.

Joint entropies of any subfamily, optionally together with coordinate
projections of a vector distribution, are computed by grouping support atoms
by their (membership bits, projected coordinates) signature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .distributions import DiscreteDistribution, RandomVectorDistribution

# Bitmask width cap; larger alphabets are out of scope.
MAX_SUPPORT = 24


class DegenerateSupportError(ValueError):
    """Support too small for the requested partition structure."""


class SupportTooLargeError(ValueError):
    """Support exceeds the documented bitmask cap."""


def canonical_mask(mask: int, n: int) -> int:
    """Representative of {alpha, alpha^c} that excludes atom 0."""
    full = (1 << n) - 1
    if mask <= 0 or mask >= full:
        raise ValueError(f"mask {mask:#x} is not a proper nonempty subset of {n} atoms")
    return (mask ^ full) if (mask & 1) else mask


@dataclass(frozen=True)
class BinaryPartition:
    """Canonical binary partition of an n-atom support."""

    mask: int
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise DegenerateSupportError(f"no proper partition of {self.n} atom(s)")
        if self.n > MAX_SUPPORT:
            raise SupportTooLargeError(f"support size {self.n} exceeds cap {MAX_SUPPORT}")
        full = (1 << self.n) - 1
        if self.mask <= 0 or self.mask >= full or (self.mask & 1):
            raise ValueError(
                f"mask {self.mask:#x} is not canonical for n={self.n} "
                "(must be a nonempty proper subset excluding atom 0)"
            )

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    @property
    def complement_mask(self) -> int:
        return self.mask ^ ((1 << self.n) - 1)

    def atoms(self) -> tuple:
        """Indices on the canonical side, ascending."""
        return tuple(i for i in range(self.n) if self.mask >> i & 1)

    @property
    def is_indicator(self) -> bool:
        return self.size in (1, self.n - 1)

    @property
    def detected_atom(self) -> int:
        """For an indicator, the atom whose presence it reports."""
        if not self.is_indicator:
            raise ValueError("not an indicator partition")
        if self.size == 1:
            return self.mask.bit_length() - 1
        return 0  # the complement of {1..n-1} is atom 0


@dataclass(frozen=True)
class PartitionFamily:
    """All canonical partitions of an n-atom support, deterministically ordered."""

    n: int
    partitions: tuple

    def __post_init__(self):
        object.__setattr__(self, "partitions", tuple(self.partitions))
        expected = (1 << (self.n - 1)) - 1
        if len(self.partitions) != expected:
            raise ValueError(
                f"family over {self.n} atoms must have {expected} partitions, "
                f"got {len(self.partitions)}"
            )
        masks = [p.mask for p in self.partitions]
        if len(set(masks)) != len(masks):
            raise ValueError("duplicate partitions in family")
        object.__setattr__(self, "_by_mask", {m: i for i, m in enumerate(masks)})

    def __len__(self) -> int:
        return len(self.partitions)

    def __getitem__(self, idx: int) -> BinaryPartition:
        return self.partitions[idx]

    def __iter__(self):
        return iter(self.partitions)

    def index_of(self, mask: int) -> int:
        """Family index of the partition containing the given side."""
        return self._by_mask[canonical_mask(mask, self.n)]


def enumerate_partitions(n: int) -> PartitionFamily:
    """The full family over n atoms, ordered by size then lexicographic atoms."""
    if n < 2:
        raise DegenerateSupportError(f"support size {n} admits no proper partition")
    if n > MAX_SUPPORT:
        raise SupportTooLargeError(f"support size {n} exceeds cap {MAX_SUPPORT}")
    masks = [m << 1 for m in range(1, 1 << (n - 1))]
    masks.sort(key=lambda m: (m.bit_count(), tuple(i for i in range(n) if m >> i & 1)))
    return PartitionFamily(n, tuple(BinaryPartition(m, n) for m in masks))


def indicator_partitions(family: PartitionFamily) -> list:
    """Family indices of the n indicator partitions, in detected-atom order.

    Atom 0 is detected by the complement partition {1, ..., n-1}; every other
    atom by its singleton. Requires n >= 3: for n = 2 the unique partition
    detects both atoms at once and the count breaks down.
    """
    if family.n < 3:
        raise DegenerateSupportError(
            "indicator census needs n >= 3; for n = 2 the single partition "
            "is simultaneously both atoms' indicator"
        )
    full = (1 << family.n) - 2  # all atoms except 0
    out = [family.index_of(full)]
    out.extend(family.index_of(1 << i) for i in range(1, family.n))
    return out


def partition_probability(d, p: BinaryPartition) -> float:
    """P(X in alpha) for the canonical side of the partition."""
    base = d.joint if isinstance(d, RandomVectorDistribution) else d
    if p.n != base.n:
        raise ValueError(f"partition over {p.n} atoms vs support of size {base.n}")
    return math.fsum(base.probs[i] for i in range(base.n) if p.mask >> i & 1)


def _group_entropy(probs, masks, outcomes=None, tau=()):
    """Entropy of the signature grouping via block refinement.

    Atoms start in one block (or pre-split by their tau projection) and each
    mask splits the blocks it cuts; refinement stops early once every block
    is a singleton. Block order is deterministic, so repeated computations
    sum the same floats in the same order.
    """
    n = len(probs)
    if tau:
        seed: dict = {}
        for i in range(n):
            key = tuple(outcomes[i][c] for c in tau)
            seed.setdefault(key, []).append(i)
        groups = list(seed.values())
    else:
        groups = [list(range(n))]
    for m in masks:
        if len(groups) == n:
            break
        refined = []
        for g in groups:
            if len(g) == 1:
                refined.append(g)
                continue
            ins = [i for i in g if m >> i & 1]
            if not ins or len(ins) == len(g):
                refined.append(g)
                continue
            outs = [i for i in g if not m >> i & 1]
            refined.append(ins)
            refined.append(outs)
        groups = refined
    if len(groups) <= 1:
        return 0.0
    masses = [
        probs[g[0]] if len(g) == 1 else math.fsum(probs[i] for i in g)
        for g in groups
    ]
    value = -math.fsum(q * math.log2(q) for q in masses)
    return 0.0 if value <= 0.0 else value


def masks_joint_entropy(d, masks: Sequence[int], tau=()) -> float:
    """Joint entropy of partition variables given by raw masks, plus X_tau.

    Masks need not be canonical; any proper nonempty side works. ``tau`` is a
    set of coordinate indices and requires a vector distribution. Both empty
    means the entropy of the empty collection, which is 0.
    """
    tau = tuple(sorted(set(tau)))
    if isinstance(d, RandomVectorDistribution):
        base = d.joint
        if tau and (tau[0] < 0 or tau[-1] >= d.num_coords):
            raise ValueError(f"coordinates {tau} out of range")
        outcomes = base.support
    else:
        base = d
        if tau:
            raise ValueError("coordinate projections need a vector distribution")
        outcomes = None
    full = (1 << base.n) - 1
    for m in masks:
        if m <= 0 or m >= full:
            raise ValueError(f"mask {m:#x} is not a proper nonempty subset")
    if not masks and not tau:
        return 0.0
    return _group_entropy(base.probs, list(masks), outcomes, tau)


def joint_entropy(d, family: PartitionFamily, delta, tau=()) -> float:
    """H(A_<alpha>, alpha in delta, X_j, j in tau) for family indices delta."""
    base = d.joint if isinstance(d, RandomVectorDistribution) else d
    if family.n != base.n:
        raise ValueError("family does not match distribution support size")
    delta = sorted(set(delta))
    if delta and (delta[0] < 0 or delta[-1] >= len(family)):
        raise ValueError(f"partition indices {delta} out of family range")
    return masks_joint_entropy(d, [family[k].mask for k in delta], tau)


class EntropyOracle:
    """Memoized joint-entropy queries over a distribution's partition family.

    Queries are pure and idempotent, so concurrent use returns the same
    values as sequential execution (at worst a value is computed twice).
    ``computed_queries`` counts actual computations, memo hits excluded.
    """

    def __init__(self, dist, family: PartitionFamily):
        base = dist.joint if isinstance(dist, RandomVectorDistribution) else dist
        if family.n != base.n:
            raise ValueError("family does not match distribution support size")
        self._dist = dist
        self._base = base
        self.family = family
        self._memo: dict = {}
        self.computed_queries = 0

    @property
    def n(self) -> int:
        return self.family.n

    def query(self, delta=(), tau=()) -> float:
        """H(A_<alpha>, alpha in delta, X_j, j in tau) in bits."""
        key = (frozenset(delta), frozenset(tau))
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        value = joint_entropy(self._dist, self.family, delta, tau)
        self._memo[key] = value
        self.computed_queries += 1
        return value

    def conditional(self, target, given=()) -> float:
        """H(A_target | A_given) over family indices."""
        target = frozenset(target)
        given = frozenset(given)
        if not target:
            raise ValueError("empty conditional target")
        joint = self.query(target | given)
        if not given:
            return joint
        return joint - self.query(given)


def oracle_from_distribution(d) -> EntropyOracle:
    """Oracle over the full partition family of the distribution's support."""
    base = d.joint if isinstance(d, RandomVectorDistribution) else d
    return EntropyOracle(d, enumerate_partitions(base.n))


def format_partition(p: BinaryPartition, support) -> str:
    """CLI text form: sorted labels of the canonical side, e.g. ``{2,3}``."""
    labels = sorted(str(support[i]) for i in p.atoms())
    return "{" + ",".join(labels) + "}"
