"""Identification of distributions from partition-variable entropies.

Given only an entropy oracle over the full partition family of an unknown
full-support scalar distribution, the indicator variables can be recognised
and the sorted probability vector recovered. For pairs of distributions the
module decides equivalence up to relabeling: as scalars (sorted probability
vectors agree), via an explicit partition-family match searched and verified
against joint-entropy equalities, and for random vectors via coordinate-wise
bijections. Property checkers validate the structural facts the
identification logic rests on (distinctness, completeness, basis chains,
indicator minimality, and the vector-case uniqueness conditions).

Entropy equalities are compared at ``ENTROPY_TOL``; probabilities at
``PROB_TOL``.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .distributions import (
    DiscreteDistribution,
    RandomVectorDistribution,
    binary_entropy,
    invert_binary_entropy,
)
from .partitions import (
    BinaryPartition,
    DegenerateSupportError,
    EntropyOracle,
    PartitionFamily,
    _group_entropy,
    canonical_mask,
    enumerate_partitions,
    masks_joint_entropy,
    oracle_from_distribution,
)

ENTROPY_TOL = 1e-9
PROB_TOL = 1e-12

# verify_partition_match / check_appendix_b_props combinatorial bounds
MATCH_SUPPORT_BOUND = 8
APPENDIX_SUPPORT_BOUND = 10
VECTOR_ALPHABET_BOUND = 8
MATCH_SAMPLED_CHECKS = 10_000
# full-family oracle consistency check is skipped above this family size
_FULL_FAMILY_CHECK_CAP = 4095


class NonEntropicOracleError(ValueError):
    """Oracle answers are inconsistent with every distribution."""


class AmbiguousReconstructionError(ValueError):
    """Several inconsistent probability assignments fit the oracle."""


class SearchBoundExceededError(ValueError):
    """Input exceeds a documented combinatorial search bound."""


@dataclass(frozen=True)
class Relabeling:
    """Bijective renaming witnessing distribution equivalence.

    Exactly one of the two fields is set: ``mapping`` for scalar outcomes,
    ``coordinate_maps`` (one bijection per coordinate) for random vectors.
    """

    mapping: Optional[dict] = None
    coordinate_maps: Optional[tuple] = None

    def __post_init__(self):
        if (self.mapping is None) == (self.coordinate_maps is None):
            raise ValueError("exactly one of mapping / coordinate_maps must be set")
        if self.mapping is not None:
            values = list(self.mapping.values())
            if len(set(values)) != len(values):
                raise ValueError("scalar relabeling is not injective")
        else:
            object.__setattr__(
                self, "coordinate_maps", tuple(dict(m) for m in self.coordinate_maps)
            )
            for j, m in enumerate(self.coordinate_maps):
                if len(set(m.values())) != len(m):
                    raise ValueError(f"coordinate map {j} is not injective")

    def apply(self, outcome):
        """Image of an outcome (tuple outcomes mapped coordinate-wise)."""
        if self.mapping is not None:
            return self.mapping[outcome]
        if len(outcome) != len(self.coordinate_maps):
            raise ValueError("outcome arity does not match coordinate maps")
        return tuple(m[c] for m, c in zip(self.coordinate_maps, outcome))


@dataclass(frozen=True)
class MatchWitness:
    """A partition-family assignment passing the queried entropy equalities.

    ``assignment`` maps each family index on the first support to the family
    index it is matched with on the second. ``verified_depth`` is the largest
    subfamily size checked exhaustively; ``sampled_checks`` counts additional
    random larger subfamilies that were verified.
    """

    assignment: dict
    verified_depth: int
    sampled_checks: int = 0


@dataclass
class PropertyReport:
    """Outcome of a structural property sweep; empty violations means pass."""

    ok: bool
    violations: list = field(default_factory=list)
    checked: int = 0


def identify_indicators(oracle: EntropyOracle, n: Optional[int] = None,
                        tol: float = ENTROPY_TOL) -> list:
    """Recognise the n indicator variables from entropy queries alone.

    Returns family indices in atom order: entry i is the indicator of the
    i-th most likely atom (the oracle must come from a canonically sorted
    full-support distribution). Atoms are peeled from the least likely
    upward: at each step the minimum-entropy variable among those not
    determined by the already identified ones is an indicator of the next
    atom. The most likely atom's indicator is then isolated as the unique
    remaining variable not determined by any proper subfamily of the
    identified indicators.
    """
    fam = oracle.family
    if n is None:
        n = fam.n
    elif n != fam.n:
        raise ValueError(f"n={n} does not match oracle family size {fam.n}")
    if n < 3:
        raise DegenerateSupportError(
            "indicator identification needs n >= 3; use invert_binary_entropy "
            "directly for the binary case"
        )
    size = len(fam)
    used: list = []
    used_set: set = set()
    # peel atoms n-1 down to 1 (0-based)
    by_atom = {}
    for atom in range(n - 1, 0, -1):
        best_h = None
        candidates = []
        for k in range(size):
            if k in used_set:
                continue
            if oracle.conditional((k,), used) <= tol:
                continue
            h = oracle.query((k,))
            if best_h is None or h < best_h - tol:
                best_h = h
                candidates = [k]
            elif h <= best_h + tol:
                candidates.append(k)
        if best_h is None or best_h <= tol:
            raise NonEntropicOracleError(
                f"no positive-entropy variable left while peeling atom {atom}"
            )
        pick = min(candidates)
        by_atom[atom] = pick
        used.append(pick)
        used_set.add(pick)
    # the remaining indicator: not determined by any proper subfamily of `used`
    survivors = []
    for k in range(size):
        if k in used_set:
            continue  # determined by itself, trivially fails the condition
        ok = True
        for depth in range(0, n - 1):
            for beta in itertools.combinations(used, depth):
                if oracle.conditional((k,), beta) <= tol:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            survivors.append(k)
    if len(survivors) != 1:
        raise NonEntropicOracleError(
            f"expected a unique anchor indicator, found {len(survivors)} candidates"
        )
    by_atom[0] = survivors[0]
    result = [by_atom[a] for a in range(n)]
    if size <= _FULL_FAMILY_CHECK_CAP:
        # the n indicators jointly determine X, as does the whole family
        h_ids = oracle.query(result)
        h_all = oracle.query(range(size))
        if abs(h_ids - h_all) > tol:
            raise NonEntropicOracleError(
                "identified indicators do not jointly carry the full entropy"
            )
    return result


def _shannon(probs) -> float:
    value = -math.fsum(p * math.log2(p) for p in probs if p > 0.0)
    return 0.0 if value <= 0.0 else value


def reconstruct_scalar(oracle: EntropyOracle, n: Optional[int] = None,
                       tol_sum: float = 1e-8, tol_pair: float = 1e-8,
                       tol: float = ENTROPY_TOL) -> tuple:
    """Recover the sorted probability vector behind an entropy oracle.

    Indicator entropies give h_b(p_i); each inverts to q_i in [0, 1/2],
    leaving a q vs 1-q branch per atom. All branch assignments are searched,
    filtered by total mass 1 and by consistency with every pairwise joint
    indicator entropy. Genuine oracles leave exactly one probability
    multiset.
    """
    fam = oracle.family
    if n is None:
        n = fam.n
    elif n != fam.n:
        raise ValueError(f"n={n} does not match oracle family size {fam.n}")
    if n == 2:
        q = invert_binary_entropy(_clamp_unit(oracle.query((0,))))
        return (1.0 - q, q)
    ids = identify_indicators(oracle, n, tol=tol)
    qs = [invert_binary_entropy(_clamp_unit(oracle.query((k,)))) for k in ids]
    pair_h = {
        (a, b): oracle.query((ids[a], ids[b]))
        for a in range(n) for b in range(a + 1, n)
    }

    solutions: dict = {}

    def pair_consistent(p) -> bool:
        for (a, b), h in pair_h.items():
            rest = 1.0 - p[a] - p[b]
            if rest < -tol_pair:
                return False
            expected = _shannon((p[a], p[b], max(rest, 0.0)))
            if abs(expected - h) > tol_pair:
                return False
        return True

    def search(a, current, total):
        if total > 1.0 + tol_sum:
            return
        if a == n:
            if abs(total - 1.0) <= tol_sum and pair_consistent(current):
                key = tuple(round(v, 9) for v in sorted(current, reverse=True))
                solutions.setdefault(key, tuple(sorted(current, reverse=True)))
            return
        branches = (qs[a], 1.0 - qs[a])
        if abs(branches[0] - branches[1]) <= PROB_TOL:
            branches = (qs[a],)
        for value in branches:
            current.append(value)
            search(a + 1, current, total + value)
            current.pop()

    search(0, [], 0.0)
    if not solutions:
        raise NonEntropicOracleError(
            "no branch assignment is consistent with the pairwise entropies"
        )
    if len(solutions) > 1:
        raise AmbiguousReconstructionError(
            f"{len(solutions)} inconsistent probability assignments fit the oracle"
        )
    return next(iter(solutions.values()))


def _clamp_unit(v: float) -> float:
    if v < 0.0:
        if v < -ENTROPY_TOL:
            raise NonEntropicOracleError(f"negative entropy {v!r}")
        return 0.0
    if v > 1.0:
        if v > 1.0 + ENTROPY_TOL:
            raise NonEntropicOracleError(f"indicator entropy {v!r} above 1 bit")
        return 1.0
    return v


def scalar_equivalent(p: DiscreteDistribution, q: DiscreteDistribution,
                      tol: float = ENTROPY_TOL) -> Optional[Relabeling]:
    """Bijection equating the pmfs, or None when the sorted vectors differ.

    With ties the witness is the deterministic one pairing canonical
    positions, which is lexicographically smallest under canonical ordering.
    """
    if p.n != q.n:
        return None
    cp, cq = p.canonical(), q.canonical()
    if any(abs(a - b) > tol for a, b in zip(cp.probs, cq.probs)):
        return None
    return Relabeling(mapping=dict(zip(cp.support, cq.support)))


def _match_depth_plan(n: int, family_size: int):
    """(exhaustive sizes, sampled count, verified_depth) per support size."""
    if n <= 4:
        return range(1, family_size + 1), 0, family_size
    return range(1, 4), MATCH_SAMPLED_CHECKS, 3


def _entropy_rows(signatures, probs, n_buckets):
    """Row-wise grouping entropies for a matrix of atom signatures."""
    out = np.zeros(signatures.shape[0])
    for bucket in range(n_buckets):
        mass = ((signatures == bucket) * probs).sum(axis=1)
        hit = mass > 0.0
        out[hit] -= mass[hit] * np.log2(mass[hit])
    return out


def _verify_sizes_vectorized(bits_p, bits_q, p_arr, q_arr, sizes, tol,
                             chunk=40_000) -> bool:
    """Compare joint entropies of all subfamilies of the given sizes.

    ``bits_p[k]`` / ``bits_q[k]`` are the 0/1 membership rows of partition k
    on the two supports (the q rows already permuted by the assignment).
    """
    count = bits_p.shape[0]
    for s in sizes:
        combos = itertools.combinations(range(count), s)
        while True:
            block = list(itertools.islice(combos, chunk))
            if not block:
                break
            idx = np.asarray(block, dtype=np.intp)
            sig_p = np.zeros((len(block), bits_p.shape[1]), dtype=np.int32)
            sig_q = np.zeros_like(sig_p)
            for t in range(s):
                sig_p |= bits_p[idx[:, t]] << t
                sig_q |= bits_q[idx[:, t]] << t
            h_left = _entropy_rows(sig_p, p_arr, 1 << s)
            h_right = _entropy_rows(sig_q, q_arr, 1 << s)
            if np.any(np.abs(h_left - h_right) > tol):
                return False
    return True


def verify_partition_match(p: DiscreteDistribution, q: DiscreteDistribution,
                           seed: int = 0,
                           tol: float = ENTROPY_TOL) -> Optional[MatchWitness]:
    """Search for a partition-family assignment matching joint entropies.

    Candidate images for each partition are pruned by singleton entropy, the
    assignment is built injectively with incremental pairwise checks, and a
    complete assignment is verified on subfamilies per the depth plan: every
    subfamily for n <= 4, all sizes up to 3 plus ``MATCH_SAMPLED_CHECKS``
    seeded random larger subfamilies for n in 5..8. Returns None when the
    search exhausts.
    """
    if p.n > MATCH_SUPPORT_BOUND or q.n > MATCH_SUPPORT_BOUND:
        raise SearchBoundExceededError(
            f"partition match is bounded to supports of size {MATCH_SUPPORT_BOUND}"
        )
    if p.n != q.n or p.n < 2:
        return None
    n = p.n
    cp, cq = p.canonical(), q.canonical()
    fam = enumerate_partitions(n)
    size = len(fam)
    p_probs, q_probs = cp.probs, cq.probs
    masks = [part.mask for part in fam.partitions]

    # bypass per-call validation in the hot verification loop
    def h_p(idxs):
        return _group_entropy(p_probs, [masks[k] for k in idxs])

    def h_q(idxs):
        return _group_entropy(q_probs, [masks[k] for k in idxs])

    hp1 = [h_p((k,)) for k in range(size)]
    hq1 = [h_q((k,)) for k in range(size)]

    exhaustive_sizes, sampled, verified_depth = _match_depth_plan(n, size)
    rng = random.Random(seed)
    bits_p = np.array(
        [[(m >> i) & 1 for i in range(n)] for m in masks], dtype=np.int32
    )
    p_arr, q_arr = np.asarray(p_probs), np.asarray(q_probs)

    def verify(assignment) -> Optional[MatchWitness]:
        if n <= 4:
            for depth in exhaustive_sizes:
                for delta in itertools.combinations(range(size), depth):
                    image = [assignment[k] for k in delta]
                    if abs(h_p(delta) - h_q(image)) > tol:
                        return None
        else:
            bits_q = bits_p[np.asarray(assignment, dtype=np.intp)]
            if not _verify_sizes_vectorized(
                bits_p, bits_q, p_arr, q_arr, exhaustive_sizes, tol
            ):
                return None
        done = 0
        while done < sampled:
            delta = [k for k in range(size) if rng.random() < 0.5]
            if len(delta) <= verified_depth:
                continue
            image = [assignment[k] for k in delta]
            if abs(h_p(delta) - h_q(image)) > tol:
                return None
            done += 1
        return MatchWitness(
            assignment={k: assignment[k] for k in range(size)},
            verified_depth=verified_depth,
            sampled_checks=sampled,
        )

    # transported assignment: equal sorted vectors make the identity family
    # map a genuine witness, so try it before searching
    if all(abs(a - b) <= tol for a, b in zip(p_probs, q_probs)):
        witness = verify(list(range(size)))
        if witness is not None:
            return witness

    candidates = [
        [m for m in range(size) if abs(hp1[k] - hq1[m]) <= tol]
        for k in range(size)
    ]
    if any(not c for c in candidates):
        return None
    order = sorted(range(size), key=lambda k: (len(candidates[k]), k))
    assignment = [-1] * size
    used = set()
    pair_memo: dict = {}
    assigned: list = []

    def backtrack(pos: int) -> Optional[MatchWitness]:
        if pos == size:
            return verify(assignment)
        k = order[pos]
        for m in candidates[k]:
            if m in used:
                continue
            ok = True
            for k2 in assigned:
                key = (min(k, k2), max(k, k2))
                left = pair_memo.get(key)
                if left is None:
                    left = h_p(key)
                    pair_memo[key] = left
                if abs(left - h_q((assignment[k2], m))) > tol:
                    ok = False
                    break
            if not ok:
                continue
            assignment[k] = m
            used.add(m)
            assigned.append(k)
            witness = backtrack(pos + 1)
            if witness is not None:
                return witness
            assigned.pop()
            used.discard(m)
            assignment[k] = -1
        return None

    return backtrack(0)


def vector_equivalent(p: RandomVectorDistribution, q: RandomVectorDistribution,
                      prob_tol: float = PROB_TOL) -> Optional[Relabeling]:
    """Coordinate-wise bijections equating the joint pmfs, or None.

    Exhausts per-coordinate bijections in lexicographic order with pruning by
    per-symbol marginal mass and by partial projections, so the returned
    witness is the lexicographically smallest valid one.
    """
    if p.num_coords != q.num_coords:
        raise ValueError(
            f"arity mismatch: {p.num_coords} vs {q.num_coords} coordinates"
        )
    m_coords = p.num_coords
    for j in range(m_coords):
        if len(p.coord_alphabets[j]) > VECTOR_ALPHABET_BOUND:
            raise SearchBoundExceededError(
                f"coordinate {j} alphabet exceeds bound {VECTOR_ALPHABET_BOUND}"
            )
        if len(p.coord_alphabets[j]) != len(q.coord_alphabets[j]):
            return None
    if p.n != q.n:
        return None
    pmf_q = dict(zip(q.support, q.probs))

    def symbol_mass(dist, j):
        out: dict = {}
        for outcome, mass in zip(dist.support, dist.probs):
            out[outcome[j]] = out.get(outcome[j], 0.0) + mass
        return out

    # candidate images per symbol, pruned by marginal mass (loose tolerance:
    # pruning must never reject a true match, the joint check is authoritative)
    prune_tol = 1e-9
    sym_candidates = []
    for j in range(m_coords):
        mp, mq = symbol_mass(p, j), symbol_mass(q, j)
        sym_candidates.append({
            x: {y for y, v in mq.items() if abs(v - mp[x]) <= prune_tol}
            for x in p.coord_alphabets[j]
        })

    def projections(dist, upto):
        out: dict = {}
        for outcome, mass in zip(dist.support, dist.probs):
            key = outcome[: upto + 1]
            out[key] = out.get(key, 0.0) + mass
        return out

    q_proj = [projections(q, j) for j in range(m_coords)]

    def coordinate_bijections(j):
        src = p.coord_alphabets[j]
        for perm in itertools.permutations(q.coord_alphabets[j]):
            if all(y in sym_candidates[j][x] for x, y in zip(src, perm)):
                yield dict(zip(src, perm))

    chosen: list = []

    def partial_ok(j) -> bool:
        target = q_proj[j]
        seen: dict = {}
        for outcome, mass in zip(p.support, p.probs):
            key = tuple(chosen[i][outcome[i]] for i in range(j + 1))
            seen[key] = seen.get(key, 0.0) + mass
        if len(seen) != len(target):
            return False
        return all(
            abs(mass - target.get(key, 0.0)) <= prune_tol
            for key, mass in seen.items()
        )

    def full_match() -> bool:
        for outcome, mass in zip(p.support, p.probs):
            image = tuple(chosen[j][outcome[j]] for j in range(m_coords))
            if abs(pmf_q.get(image, 0.0) - mass) > prob_tol:
                return False
        return True

    def descend(j) -> Optional[Relabeling]:
        if j == m_coords:
            if full_match():
                return Relabeling(coordinate_maps=tuple(dict(c) for c in chosen))
            return None
        for sigma in coordinate_bijections(j):
            chosen.append(sigma)
            if partial_ok(j):
                found = descend(j + 1)
                if found is not None:
                    return found
            chosen.pop()
        return None

    return descend(0)


def factorize_relabeling(p: RandomVectorDistribution, q: RandomVectorDistribution,
                         sigma: Mapping,
                         prob_tol: float = PROB_TOL) -> Optional[list]:
    """Split a pmf-preserving joint bijection into per-coordinate maps.

    Succeeds exactly when the bijection preserves coordinate agreement
    patterns: reading it coordinate-wise must give well-defined injective
    maps. A sigma that is not a pmf-preserving bijection between the two
    supports is a contract violation and raises.
    """
    if p.num_coords != q.num_coords:
        raise ValueError("arity mismatch between the two vector distributions")
    if set(sigma.keys()) != set(p.support):
        raise ValueError("sigma is not defined exactly on the first support")
    images = list(sigma.values())
    if len(set(images)) != len(images) or set(images) != set(q.support):
        raise ValueError("sigma is not a bijection onto the second support")
    pmf_q = dict(zip(q.support, q.probs))
    for outcome, mass in zip(p.support, p.probs):
        if abs(pmf_q[sigma[outcome]] - mass) > prob_tol:
            raise ValueError(
                f"sigma does not preserve the pmf at outcome {outcome!r}"
            )
    maps = []
    for j in range(p.num_coords):
        cmap: dict = {}
        for outcome in p.support:
            x, y = outcome[j], sigma[outcome][j]
            if cmap.setdefault(x, y) != y:
                return None  # same source symbol, two images
        if len(set(cmap.values())) != len(cmap):
            return None  # two source symbols collapse
        maps.append(cmap)
    return maps


@dataclass
class AppendixReport:
    """Result of the partition-uniqueness sweep over a vector support."""

    ok: bool
    uniqueness_violations: list = field(default_factory=list)
    identity_violations: list = field(default_factory=list)
    partitions_checked: int = 0


def check_appendix_b_props(d: RandomVectorDistribution,
                           tol: float = ENTROPY_TOL) -> AppendixReport:
    """Verify the uniqueness conditions behind the vector-case factorisation.

    For every partition <alpha> of the joint support, conditioning on atom
    indicators of a subset gamma of one side determines the variable exactly
    when gamma is that whole side, and no other partition satisfies the same
    two conditions. With the identity renaming, the atom-wise image of alpha
    must reproduce <alpha> itself. All conditions are decided by entropy
    computations; combinatorics only picks which gamma to test first.
    """
    n = d.n
    if n > APPENDIX_SUPPORT_BOUND:
        raise SearchBoundExceededError(
            f"appendix sweep is bounded to supports of size {APPENDIX_SUPPORT_BOUND}"
        )
    fam = enumerate_partitions(n)
    base = d.joint
    probs = base.probs
    joint_memo: dict = {}

    def h_masks(mask_tuple) -> float:
        value = joint_memo.get(mask_tuple)
        if value is None:
            value = masks_joint_entropy(base, list(mask_tuple))
            joint_memo[mask_tuple] = value
        return value

    def cond_on_indicators(target_mask: int, gamma: tuple) -> float:
        ind = tuple(canonical_mask(1 << x, n) for x in gamma)
        if not ind:
            return h_masks((target_mask,))
        return h_masks(tuple(sorted(set(ind + (target_mask,))))) - h_masks(
            tuple(sorted(set(ind)))
        )

    def satisfies_side(target_mask: int, side: tuple) -> bool:
        """Condition: H(target | indicators of gamma) = 0 iff gamma = side."""
        for r in range(len(side) + 1):
            for gamma in itertools.combinations(side, r):
                vanished = cond_on_indicators(target_mask, gamma) <= tol
                if vanished != (len(gamma) == len(side)):
                    return False
        return True

    def violation_exists(target_mask: int, side: tuple) -> bool:
        """Quick check that the target fails the side condition somewhere."""
        target_atoms = frozenset(
            i for i in range(n) if target_mask >> i & 1
        )
        complement_atoms = frozenset(range(n)) - target_atoms
        side_set = frozenset(side)
        for guess in (target_atoms, complement_atoms, side_set):
            if guess <= side_set:
                gamma = tuple(sorted(guess))
                vanished = cond_on_indicators(target_mask, gamma) <= tol
                if vanished != (len(gamma) == len(side)):
                    return True
        # fall back to the exhaustive scan (not expected for genuine data)
        return not satisfies_side(target_mask, side)

    report = AppendixReport(ok=True)
    for part in fam:
        alpha = part.atoms()
        alpha_c = tuple(i for i in range(n) if not part.mask >> i & 1)
        if not (satisfies_side(part.mask, alpha)
                and satisfies_side(part.mask, alpha_c)):
            report.uniqueness_violations.append(
                f"partition {alpha} fails its own side conditions"
            )
        for other in fam:
            if other.mask == part.mask:
                continue
            if not (violation_exists(other.mask, alpha)
                    or violation_exists(other.mask, alpha_c)):
                report.uniqueness_violations.append(
                    f"partition {other.atoms()} also satisfies the conditions "
                    f"of {alpha}"
                )
        # identity renaming: the atom-wise image of alpha is alpha itself
        image = canonical_mask(sum(1 << x for x in alpha), n)
        if image != part.mask:
            report.identity_violations.append(
                f"identity image of {alpha} is not <alpha>"
            )
        report.partitions_checked += 1
    report.ok = not (report.uniqueness_violations or report.identity_violations)
    return report


def check_distinctness(d, tol: float = 1e-6) -> PropertyReport:
    """Both conditional entropies positive for every pair of partitions."""
    oracle = oracle_from_distribution(d)
    size = len(oracle.family)
    report = PropertyReport(ok=True)
    for a in range(size):
        for b in range(size):
            if a == b:
                continue
            value = oracle.conditional((a,), (b,))
            report.checked += 1
            if value <= tol:
                report.violations.append(
                    f"H(A_{a}|A_{b}) = {value:.3e} not above {tol}"
                )
    report.ok = not report.violations
    return report


def check_completeness(d, tol: float = ENTROPY_TOL) -> PropertyReport:
    """Every nonconstant binary function of X matches exactly one partition.

    Exhausts the 2^n - 2 nonconstant binary functions of the support and, for
    each, counts family members with both conditional entropies vanishing.
    """
    base = d.joint if isinstance(d, RandomVectorDistribution) else d
    n = base.n
    fam = enumerate_partitions(n)
    report = PropertyReport(ok=True)
    for func_mask in range(1, (1 << n) - 1):
        matches = []
        for idx, part in enumerate(fam):
            h_pair = masks_joint_entropy(base, [func_mask, part.mask])
            h_func = masks_joint_entropy(base, [func_mask])
            h_part = masks_joint_entropy(base, [part.mask])
            if h_pair - h_func <= tol and h_pair - h_part <= tol:
                matches.append(idx)
        report.checked += 1
        expected = fam.index_of(func_mask)
        if matches != [expected]:
            report.violations.append(
                f"binary function {func_mask:#x} matched partitions {matches}, "
                f"expected [{expected}]"
            )
    report.ok = not report.violations
    return report


def check_basis(d, tol: float = 1e-6) -> PropertyReport:
    """A chain of n-2 strictly informative extensions exists for each partition.

    Greedy construction: any variable that still adds conditional entropy
    splits a block of the accumulated partition, and blocks can always be
    split until all atoms are separated.
    """
    oracle = oracle_from_distribution(d)
    fam = oracle.family
    n = fam.n
    size = len(fam)
    report = PropertyReport(ok=True)
    for start in range(size):
        chain = [start]
        for _ in range(n - 2):
            step = None
            for k in range(size):
                if k in chain:
                    continue
                if oracle.conditional((k,), chain) > tol:
                    step = k
                    break
            if step is None:
                break
            chain.append(step)
        report.checked += 1
        if len(chain) != n - 1:
            report.violations.append(
                f"no full chain from partition {start}: stopped at {len(chain) - 1}"
            )
    report.ok = not report.violations
    return report


def check_indicator_minimality(d: DiscreteDistribution,
                               tol: float = ENTROPY_TOL) -> PropertyReport:
    """Entropy-minimality of indicators among undetermined variables.

    On the canonically sorted distribution, for each atom i >= 1 (0-based):
    the atom's indicator is not determined by the indicators of less likely
    atoms; every partition variable not so determined has entropy at least
    the indicator's; and equality happens only for indicators detecting an
    atom of the same probability.
    """
    cd = d.canonical()
    oracle = oracle_from_distribution(cd)
    fam = oracle.family
    n = fam.n
    if n < 3:
        raise DegenerateSupportError("minimality sweep needs n >= 3")
    full = (1 << n) - 2
    ind_of_atom = {0: fam.index_of(full)}
    for atom in range(1, n):
        ind_of_atom[atom] = fam.index_of(1 << atom)
    report = PropertyReport(ok=True)
    for atom in range(1, n):
        later = [ind_of_atom[a] for a in range(atom + 1, n)]
        own = ind_of_atom[atom]
        gap = oracle.conditional((own,), later)
        report.checked += 1
        if gap <= tol:
            report.violations.append(
                f"indicator of atom {atom} determined by later ones ({gap:.3e})"
            )
        h_own = oracle.query((own,))
        for k in range(len(fam)):
            if oracle.conditional((k,), later) <= tol:
                continue
            h_k = oracle.query((k,))
            report.checked += 1
            if h_own > h_k + tol:
                report.violations.append(
                    f"partition {k} undercuts the indicator of atom {atom}: "
                    f"{h_k:.12f} < {h_own:.12f}"
                )
            elif abs(h_own - h_k) <= tol:
                part = fam[k]
                if not part.is_indicator:
                    report.violations.append(
                        f"non-indicator partition {k} ties the indicator "
                        f"of atom {atom}"
                    )
                elif abs(cd.probs[part.detected_atom] - cd.probs[atom]) > tol:
                    report.violations.append(
                        f"indicator tie without probability tie at atom {atom} "
                        f"vs {part.detected_atom}"
                    )
    report.ok = not report.violations
    return report
