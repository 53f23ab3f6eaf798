"""Finite discrete distributions with exact supports, entropies in bits.

Scalar distributions carry opaque outcome labels; vector distributions wrap a
joint distribution over fixed-length tuples and expose per-coordinate
alphabets. Supports are exact: probabilities below ``PROB_TOL`` are rejected
on construction rather than silently dropped, because downstream partition
logic relies on every listed atom having strictly positive mass.

All entropies are in bits (log base 2). Coordinates of vector distributions
are 0-based throughout the API.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Outcome = Union[str, tuple]

# Masses below this are rejected on ingestion (support must be exact).
PROB_TOL = 1e-12
# Total mass must match 1 this closely.
SUM_TOL = 1e-12


class InvalidDistributionError(ValueError):
    """Input does not describe a valid finite distribution."""


def _label_key(outcome):
    # Total order over mixed label types, used only for deterministic
    # tie-breaking in the canonical sorted view.
    if isinstance(outcome, str):
        return (0, outcome)
    if isinstance(outcome, tuple):
        return (1, tuple(str(c) for c in outcome))
    return (2, repr(outcome))


@dataclass(frozen=True)
class DiscreteDistribution:
    """Finite distribution given by an ordered support and positive masses."""

    support: tuple
    probs: tuple

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(self.support))
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if len(self.support) != len(self.probs):
            raise InvalidDistributionError(
                "support and probs have different lengths: "
                f"{len(self.support)} vs {len(self.probs)}"
            )
        if not self.support:
            raise InvalidDistributionError("empty support")
        for p in self.probs:
            if not math.isfinite(p) or p < PROB_TOL:
                raise InvalidDistributionError(
                    f"probability {p!r} is below the exact-support floor {PROB_TOL}"
                )
        total = math.fsum(self.probs)
        if abs(total - 1.0) > SUM_TOL:
            raise InvalidDistributionError(f"probabilities sum to {total!r}, not 1")
        if len(set(self.support)) != len(self.support):
            raise InvalidDistributionError("outcomes are not pairwise distinct")
        object.__setattr__(
            self, "_index", {o: i for i, o in enumerate(self.support)}
        )

    @property
    def n(self) -> int:
        return len(self.support)

    def index_of(self, outcome) -> int:
        try:
            return self._index[outcome]
        except KeyError:
            raise KeyError(f"outcome {outcome!r} not in support") from None

    def prob_of(self, outcome) -> float:
        return self.probs[self.index_of(outcome)]

    @property
    def is_sorted(self) -> bool:
        """True when probabilities are non-increasing in support order."""
        return all(a >= b for a, b in zip(self.probs, self.probs[1:]))

    def canonical(self) -> "DiscreteDistribution":
        """Sorted view with p_1 >= ... >= p_n, ties broken by label."""
        order = sorted(
            range(self.n), key=lambda i: (-self.probs[i], _label_key(self.support[i]))
        )
        return DiscreteDistribution(
            tuple(self.support[i] for i in order),
            tuple(self.probs[i] for i in order),
        )


@dataclass(frozen=True)
class RandomVectorDistribution:
    """Joint distribution of an M-coordinate random vector.

    Outcomes are M-tuples of string labels. ``coord_alphabets`` must be tight:
    every declared symbol appears in at least one support tuple.
    """

    num_coords: int
    coord_alphabets: tuple
    joint: DiscreteDistribution

    def __post_init__(self):
        object.__setattr__(
            self,
            "coord_alphabets",
            tuple(tuple(a) for a in self.coord_alphabets),
        )
        m = self.num_coords
        if m < 1:
            raise InvalidDistributionError("num_coords must be positive")
        if len(self.coord_alphabets) != m:
            raise InvalidDistributionError(
                f"{len(self.coord_alphabets)} alphabets declared for {m} coordinates"
            )
        alph_sets = [set(a) for a in self.coord_alphabets]
        seen = [set() for _ in range(m)]
        for outcome in self.joint.support:
            if not isinstance(outcome, tuple) or len(outcome) != m:
                raise InvalidDistributionError(
                    f"outcome {outcome!r} is not a {m}-tuple"
                )
            for j, component in enumerate(outcome):
                if component not in alph_sets[j]:
                    raise InvalidDistributionError(
                        f"component {component!r} not in alphabet of coordinate {j}"
                    )
                seen[j].add(component)
        for j in range(m):
            unused = alph_sets[j] - seen[j]
            if unused:
                raise InvalidDistributionError(
                    f"alphabet of coordinate {j} is not tight, unused: {sorted(unused)}"
                )

    @classmethod
    def from_support(cls, outcomes, probs) -> "RandomVectorDistribution":
        """Build a vector distribution, deriving tight sorted alphabets."""
        outcomes = [tuple(str(c) for c in o) for o in outcomes]
        if not outcomes:
            raise InvalidDistributionError("empty support")
        m = len(outcomes[0])
        alphabets = tuple(
            tuple(sorted({o[j] for o in outcomes})) for j in range(m)
        )
        return cls(m, alphabets, DiscreteDistribution(tuple(outcomes), probs))

    @property
    def support(self) -> tuple:
        return self.joint.support

    @property
    def probs(self) -> tuple:
        return self.joint.probs

    @property
    def n(self) -> int:
        return self.joint.n

    def as_scalar(self) -> DiscreteDistribution:
        """The joint viewed as a scalar distribution over tuple labels."""
        return self.joint


def entropy(d: DiscreteDistribution) -> float:
    """Shannon entropy -sum p log2 p in bits."""
    value = -math.fsum(p * math.log2(p) for p in d.probs)
    return 0.0 if value <= 0.0 else value


def binary_entropy(q: float) -> float:
    """h_b(q) = -q log2 q - (1-q) log2 (1-q), with h_b(0) = h_b(1) = 0."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q={q!r} outside [0, 1]")
    if q == 0.0 or q == 1.0:
        return 0.0
    return -q * math.log2(q) - (1.0 - q) * math.log2(1.0 - q)


def invert_binary_entropy(v: float, tol: float = 1e-12) -> float:
    """The unique q in [0, 1/2] with h_b(q) = v, by bisection.

    h_b is strictly increasing on [0, 1/2], so bisection converges; at most
    200 iterations, stopping early once |h_b(q) - v| <= tol.
    """
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"entropy value {v!r} outside [0, 1]")
    if v == 0.0:
        return 0.0
    if v == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    q = 0.25
    for _ in range(200):
        q = 0.5 * (lo + hi)
        h = binary_entropy(q)
        if abs(h - v) <= tol:
            return q
        if h < v:
            lo = q
        else:
            hi = q
    return q


def marginal(d: RandomVectorDistribution, coords) -> DiscreteDistribution:
    """Projection of the joint onto the given coordinate subset.

    ``coords`` is a nonempty set of 0-based coordinate indices. A single
    coordinate yields bare labels, several yield tuples in index order.
    """
    idx = sorted(set(coords))
    if not idx:
        raise ValueError("empty coordinate subset")
    if idx[0] < 0 or idx[-1] >= d.num_coords:
        raise ValueError(f"coordinates {idx} out of range for M={d.num_coords}")
    groups: dict = {}
    for outcome, p in zip(d.support, d.probs):
        key = outcome[idx[0]] if len(idx) == 1 else tuple(outcome[j] for j in idx)
        groups.setdefault(key, []).append(p)
    labels = tuple(groups.keys())
    masses = tuple(math.fsum(ps) for ps in groups.values())
    return DiscreteDistribution(labels, masses)


def subset_entropy(d: RandomVectorDistribution, coords) -> float:
    """Entropy in bits of the marginal on a nonempty coordinate subset."""
    return entropy(marginal(d, coords))


def conditional_subset_entropy(d: RandomVectorDistribution, target, given) -> float:
    """H(target | given) = H(target u given) - H(given); empty given allowed."""
    target = set(target)
    given = set(given)
    if not target:
        raise ValueError("empty target coordinate subset")
    h_joint = subset_entropy(d, target | given)
    if not given:
        return h_joint
    return h_joint - subset_entropy(d, given)


def _parse_prob(value) -> float:
    if isinstance(value, str):
        try:
            return float(Fraction(value))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidDistributionError(f"bad probability literal {value!r}") from exc
    if isinstance(value, (int, float)):
        return float(value)
    raise InvalidDistributionError(f"bad probability entry {value!r}")


def distribution_from_json(doc: Mapping):
    """Build a distribution from its JSON document form.

    Scalar form: ``{"support": [...labels...], "probs": [...]}``.
    Vector form adds ``"arity": M`` and lists M-element arrays as outcomes.
    Probabilities may be numbers or exact fraction strings like ``"1/8"``.
    """
    if not isinstance(doc, Mapping):
        raise InvalidDistributionError("distribution document must be an object")
    try:
        raw_support = doc["support"]
        raw_probs = doc["probs"]
    except KeyError as exc:
        raise InvalidDistributionError(f"missing key {exc}") from None
    probs = [_parse_prob(p) for p in raw_probs]
    if "arity" in doc:
        m = int(doc["arity"])
        outcomes = []
        for entry in raw_support:
            if not isinstance(entry, Sequence) or isinstance(entry, str):
                raise InvalidDistributionError(
                    f"vector outcome {entry!r} is not an array"
                )
            if len(entry) != m:
                raise InvalidDistributionError(
                    f"outcome {entry!r} does not have arity {m}"
                )
            outcomes.append(tuple(str(c) for c in entry))
        return RandomVectorDistribution.from_support(outcomes, probs)
    labels = tuple(
        tuple(str(c) for c in o) if isinstance(o, list) else str(o)
        for o in raw_support
    )
    return DiscreteDistribution(labels, probs)


def load_distribution(path):
    """Read a distribution JSON file; see ``distribution_from_json``."""
    with open(path, "r", encoding="utf-8") as fh:
        return distribution_from_json(json.load(fh))
