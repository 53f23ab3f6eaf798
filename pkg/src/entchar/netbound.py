"""LP outer bounds for network coding with correlated sources.

Networks are DAGs whose edges carry coded functions of whatever is visible at
their tail. The outer-bound LP asks for a point in the Shannon cone that
matches the true joint entropies of the sources and any auxiliary variables
(deterministic functions of the sources), respects functional encoding and
decoding equalities, and fits each edge variable under its capacity. A
capacity tuple is in the bound when that LP is feasible.

Unconstrained edges default to the economical model: they carry whatever is
visible at their tail and contribute no ground variable or capacity row. Set
``unconstrained_as_ground=True`` to give them explicit variables instead.

Figure-of-merit helpers: ``membership`` for a single capacity tuple and
``scale_query`` for the threshold along a capacity ray (the least multiple of
a direction that enters the bound).
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from .distributions import (
    DiscreteDistribution,
    InvalidDistributionError,
    RandomVectorDistribution,
    subset_entropy,
)
from .entropy_space import (
    EntropySpacePoint,
    GroundSet,
    LinearConstraint,
    elemental_inequalities,
    feasibility,
    maximize,
)


class NetworkStructureError(ValueError):
    """The network or demand structure is malformed or unsatisfiable."""


@dataclass(frozen=True)
class Edge:
    """Directed link; ``capacity`` in bits per use, None means unconstrained."""

    id: str
    tail: str
    head: str
    capacity: Optional[float] = None

    def __post_init__(self):
        if self.capacity is not None:
            object.__setattr__(self, "capacity", float(self.capacity))
            if not self.capacity > 0:
                raise NetworkStructureError(
                    f"edge {self.id!r} capacity must be positive or None"
                )

    @property
    def constrained(self) -> bool:
        return self.capacity is not None


@dataclass(frozen=True)
class SourceSpec:
    """A multicast session: where the source is available and demanded."""

    id: str
    placed: frozenset
    demanded: frozenset

    def __post_init__(self):
        object.__setattr__(self, "placed", frozenset(self.placed))
        object.__setattr__(self, "demanded", frozenset(self.demanded))
        if not self.placed:
            raise NetworkStructureError(f"source {self.id!r} placed nowhere")
        if self.placed & self.demanded:
            raise NetworkStructureError(
                f"source {self.id!r} demanded where it is placed"
            )


@dataclass(frozen=True)
class NetworkSpec:
    """DAG with capacities, source placement and demands."""

    nodes: frozenset
    edges: tuple
    sources: tuple

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "sources", tuple(self.sources))
        edge_ids = [e.id for e in self.edges]
        if len(set(edge_ids)) != len(edge_ids):
            raise NetworkStructureError("duplicate edge ids")
        src_ids = [s.id for s in self.sources]
        if len(set(src_ids)) != len(src_ids):
            raise NetworkStructureError("duplicate source ids")
        for e in self.edges:
            if e.tail not in self.nodes or e.head not in self.nodes:
                raise NetworkStructureError(f"edge {e.id!r} endpoint unknown")
        for s in self.sources:
            if not (s.placed <= self.nodes and s.demanded <= self.nodes):
                raise NetworkStructureError(f"source {s.id!r} references unknown nodes")
        self._check_acyclic()

    def _check_acyclic(self):
        indeg = {v: 0 for v in self.nodes}
        for e in self.edges:
            indeg[e.head] += 1
        queue = [v for v, d in indeg.items() if d == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for e in self.edges:
                if e.tail == v:
                    indeg[e.head] -= 1
                    if indeg[e.head] == 0:
                        queue.append(e.head)
        if seen != len(self.nodes):
            raise NetworkStructureError("network graph has a cycle")

    def in_edges(self, node: str) -> list:
        return [e for e in self.edges if e.head == node]

    def constrained_edges(self) -> list:
        return [e for e in self.edges if e.constrained]


@dataclass(frozen=True)
class AuxVariable:
    """Deterministic function of the joint source outcome."""

    id: str
    mapping: Mapping

    def __post_init__(self):
        object.__setattr__(self, "mapping", dict(self.mapping))


@dataclass
class BoundProblem:
    """Assembled LP: ground set, constraint rows and the capacity tuple."""

    ground: GroundSet
    constraints: list
    capacities: dict
    source_vars: dict
    aux_vars: dict
    edge_vars: dict
    joint: RandomVectorDistribution


def push_aux(srcdist: RandomVectorDistribution,
             aux: Sequence[AuxVariable]) -> RandomVectorDistribution:
    """Joint distribution of (sources, auxiliaries) as one random vector."""
    support_set = set(srcdist.support)
    for a in aux:
        missing = [o for o in srcdist.support if o not in a.mapping]
        if missing:
            raise ValueError(
                f"aux {a.id!r} map is not total; missing {missing[0]!r}"
            )
        extra = [k for k in a.mapping if k not in support_set]
        if extra:
            raise ValueError(
                f"aux {a.id!r} map defined outside the source support: {extra[0]!r}"
            )
    outcomes = [
        tuple(o) + tuple(str(a.mapping[o]) for a in aux) for o in srcdist.support
    ]
    return RandomVectorDistribution.from_support(outcomes, srcdist.probs)


def _carried_vars(net: NetworkSpec, edge_bit: Mapping, placed_bits: Mapping):
    """Ground-variable mask visible on each edge (economical model)."""
    edge_by_id = {e.id: e for e in net.edges}
    memo: dict = {}

    def visible(node: str) -> int:
        mask = placed_bits.get(node, 0)
        for e in net.in_edges(node):
            mask |= carried(e.id)
        return mask

    def carried(eid: str) -> int:
        cached = memo.get(eid)
        if cached is not None:
            return cached
        e = edge_by_id[eid]
        mask = edge_bit[eid] if eid in edge_bit else visible(e.tail)
        memo[eid] = mask
        return mask

    return visible, carried


def _check_reachability(net: NetworkSpec):
    """Each demand node must be reachable from some placement of its source."""
    succ: dict = {v: [] for v in net.nodes}
    for e in net.edges:
        succ[e.tail].append(e.head)
    for s in net.sources:
        reach = set(s.placed)
        frontier = list(s.placed)
        while frontier:
            v = frontier.pop()
            for w in succ[v]:
                if w not in reach:
                    reach.add(w)
                    frontier.append(w)
        for u in s.demanded:
            if u not in reach:
                raise NetworkStructureError(
                    f"demand of source {s.id!r} at node {u!r} is unreachable "
                    "from every placement; structurally infeasible"
                )


def _resolve_capacities(net: NetworkSpec, capacities) -> dict:
    constrained = net.constrained_edges()
    if capacities is None:
        return {e.id: e.capacity for e in constrained}
    if isinstance(capacities, Mapping):
        caps = {str(k): float(v) for k, v in capacities.items()}
    else:
        values = list(capacities)
        if len(values) != len(constrained):
            raise ValueError(
                f"capacity tuple has {len(values)} entries for "
                f"{len(constrained)} constrained edges"
            )
        caps = {e.id: float(v) for e, v in zip(constrained, values)}
    wanted = {e.id for e in constrained}
    if set(caps) != wanted:
        raise ValueError(
            f"capacities must cover exactly the constrained edges {sorted(wanted)}"
        )
    return caps


def _assemble(net: NetworkSpec, srcdist: RandomVectorDistribution,
              aux: Sequence[AuxVariable], unconstrained_as_ground: bool):
    """Ground set and all constraint rows except the capacity rows."""
    if srcdist.num_coords != len(net.sources):
        raise ValueError(
            f"source distribution has {srcdist.num_coords} coordinates for "
            f"{len(net.sources)} sources"
        )
    _check_reachability(net)
    joint = push_aux(srcdist, aux)

    if unconstrained_as_ground:
        var_edges = list(net.edges)
    else:
        var_edges = net.constrained_edges()
    source_vars = {s.id: s.id for s in net.sources}
    aux_vars = {a.id: a.id for a in aux}
    edge_vars = {e.id: f"U_{e.id}" for e in var_edges}
    names = (
        [source_vars[s.id] for s in net.sources]
        + [aux_vars[a.id] for a in aux]
        + [edge_vars[e.id] for e in var_edges]
    )
    ground = GroundSet(tuple(names))

    src_bit = {s.id: 1 << i for i, s in enumerate(net.sources)}
    aux_bit = {a.id: 1 << (len(net.sources) + i) for i, a in enumerate(aux)}
    edge_bit = {
        e.id: 1 << ground.index(edge_vars[e.id]) for e in var_edges
    }
    placed_bits: dict = {}
    for s in net.sources:
        for v in s.placed:
            placed_bits[v] = placed_bits.get(v, 0) | src_bit[s.id]
    visible, carried = _carried_vars(net, edge_bit, placed_bits)

    constraints = []
    # entropy pinning: h over every nonempty subset of sources and auxiliaries
    n_src, n_aux = len(net.sources), len(aux)
    for w_mask in range(1 << n_src):
        for z_mask in range(1 << n_aux):
            if w_mask == 0 and z_mask == 0:
                continue
            coords = [i for i in range(n_src) if w_mask >> i & 1]
            coords += [n_src + i for i in range(n_aux) if z_mask >> i & 1]
            lp_mask = w_mask | (z_mask << n_src)
            constraints.append(
                LinearConstraint(
                    ((lp_mask, 1.0),), "=", subset_entropy(joint, coords)
                )
            )
    # encoding: each edge variable is a function of what its tail sees
    for e in var_edges:
        cond = visible(e.tail)
        bit = edge_bit[e.id]
        if cond:
            terms = ((cond | bit, 1.0), (cond, -1.0))
        else:
            terms = ((bit, 1.0),)
        constraints.append(LinearConstraint(terms, "=", 0.0))
    # decoding: each demanded source is a function of what the sink sees
    for s in net.sources:
        for u in sorted(s.demanded):
            cond = visible(u)
            bit = src_bit[s.id]
            if cond:
                terms = ((cond | bit, 1.0), (cond, -1.0))
            else:
                terms = ((bit, 1.0),)
            constraints.append(LinearConstraint(terms, "=", 0.0))
    constraints.extend(elemental_inequalities(ground))
    return ground, constraints, source_vars, aux_vars, edge_vars, edge_bit, joint


def build_constraints(net: NetworkSpec, srcdist: RandomVectorDistribution,
                      aux: Sequence[AuxVariable] = (), capacities=None, *,
                      unconstrained_as_ground: bool = False) -> BoundProblem:
    """Assemble the full outer-bound LP for a capacity tuple.

    ``capacities`` may be None (use the network's), a mapping from edge id,
    or a sequence aligned with the constrained edges in declaration order.
    """
    caps = _resolve_capacities(net, capacities)
    ground, constraints, source_vars, aux_vars, edge_vars, edge_bit, joint = (
        _assemble(net, srcdist, aux, unconstrained_as_ground)
    )
    for e in net.constrained_edges():
        constraints.append(
            LinearConstraint(((edge_bit[e.id], -1.0),), ">=", -caps[e.id])
        )
    return BoundProblem(
        ground=ground,
        constraints=constraints,
        capacities=caps,
        source_vars=source_vars,
        aux_vars=aux_vars,
        edge_vars=edge_vars,
        joint=joint,
    )


@dataclass
class MembershipVerdict:
    """Whether a capacity tuple lies in the computable outer bound."""

    in_bound: bool
    witness: Optional[EntropySpacePoint]
    gap: float
    problem: BoundProblem


def membership(net: NetworkSpec, srcdist: RandomVectorDistribution,
               aux: Sequence[AuxVariable] = (), capacities=None, *,
               unconstrained_as_ground: bool = False,
               tol: float = 1e-7) -> MembershipVerdict:
    """Decide membership of the capacity tuple in the outer bound."""
    problem = build_constraints(
        net, srcdist, aux, capacities,
        unconstrained_as_ground=unconstrained_as_ground,
    )
    result = feasibility(problem.constraints, problem.ground, tol=tol)
    return MembershipVerdict(
        in_bound=result.feasible,
        witness=result.point,
        gap=result.gap,
        problem=problem,
    )


@dataclass
class ScaleResult:
    """Threshold along a capacity ray: least t with t*direction in the bound."""

    status: str  # "bounded" | "infeasible"
    t: Optional[float]
    problem: BoundProblem


def scale_query(net: NetworkSpec, srcdist: RandomVectorDistribution,
                aux: Sequence[AuxVariable] = (), direction=None, *,
                unconstrained_as_ground: bool = False) -> ScaleResult:
    """Least multiple of a capacity direction inside the outer bound.

    The bound region is upward closed in capacities, so the informative ray
    statistic is the entry threshold: minimise t >= 0 subject to the bound
    constraints with capacities t * direction. ``infeasible`` means the ray
    never enters the region (some needed edge has direction 0).
    """
    constrained = net.constrained_edges()
    if direction is None:
        raise ValueError("a capacity direction is required")
    if isinstance(direction, Mapping):
        dirs = {str(k): float(v) for k, v in direction.items()}
    else:
        values = list(direction)
        if len(values) != len(constrained):
            raise ValueError(
                f"direction has {len(values)} entries for "
                f"{len(constrained)} constrained edges"
            )
        dirs = {e.id: float(v) for e, v in zip(constrained, values)}
    if set(dirs) != {e.id for e in constrained}:
        raise ValueError("direction must cover exactly the constrained edges")
    if any(v < 0 for v in dirs.values()) or all(v == 0 for v in dirs.values()):
        raise ValueError("direction must be nonnegative and nonzero")

    ground, constraints, source_vars, aux_vars, edge_vars, edge_bit, joint = (
        _assemble(net, srcdist, aux, unconstrained_as_ground)
    )
    for e in constrained:
        constraints.append(
            LinearConstraint(
                ((edge_bit[e.id], -1.0),), ">=", 0.0,
                extra_terms=(("t", dirs[e.id]),),
            )
        )
    constraints.append(LinearConstraint((), ">=", 0.0, extra_terms=(("t", 1.0),)))
    problem = BoundProblem(
        ground=ground,
        constraints=constraints,
        capacities=dirs,
        source_vars=source_vars,
        aux_vars=aux_vars,
        edge_vars=edge_vars,
        joint=joint,
    )
    result = maximize({}, constraints, ground, extra_objective={"t": -1.0})
    if result.status == "infeasible":
        return ScaleResult("infeasible", None, problem)
    if result.status != "optimal":
        raise RuntimeError(f"unexpected scale solve status {result.status!r}")
    return ScaleResult("bounded", -result.value, problem)


@dataclass(frozen=True)
class PartitionAuxPolicy:
    """Generate auxiliaries as binary partition variables of source outcomes.

    ``scope`` selects source coordinates (None means all); ``kind`` is
    ``"singletons"`` for the indicator family of the projected support or
    ``"all"`` for every binary partition of it. ``max_support`` caps the
    projected support size, since the full family is exponential.
    """

    scope: Optional[tuple] = None
    kind: str = "singletons"
    max_support: int = 12
    id_prefix: str = "A"

    def __post_init__(self):
        if self.kind not in ("singletons", "all"):
            raise ValueError(f"unknown partition policy kind {self.kind!r}")
        if self.scope is not None:
            object.__setattr__(self, "scope", tuple(self.scope))


def corollary_aux(srcdist: RandomVectorDistribution, policy) -> list:
    """Auxiliary variables realising partition variables of the sources.

    ``policy`` is either an explicit sequence of ``AuxVariable`` (validated
    and deduplicated) or a ``PartitionAuxPolicy``. Generated variables are
    deterministic functions of the joint source outcome with values "0"/"1",
    deduplicated by the grouping they induce on the support.
    """
    if isinstance(policy, PartitionAuxPolicy):
        scope = policy.scope
        if scope is None:
            scope = tuple(range(srcdist.num_coords))
        if not scope or any(
            j < 0 or j >= srcdist.num_coords for j in scope
        ):
            raise ValueError(f"policy scope {scope} out of range")
        projected = [tuple(o[j] for j in scope) for o in srcdist.support]
        values = sorted(set(projected))
        k = len(values)
        if k > policy.max_support:
            raise ValueError(
                f"projected support size {k} exceeds the policy cap "
                f"{policy.max_support}; the full partition family is "
                "exponential and must be bounded"
            )
        if policy.kind == "singletons":
            sides = [{v} for v in values]
        else:
            if k < 2:
                raise ValueError("projected support too small to partition")
            sides = [
                {values[i] for i in range(k) if m >> i & 1}
                for m in range(1, 1 << (k - 1))
            ]
        raw = []
        for side in sides:
            mapping = {
                o: ("1" if proj in side else "0")
                for o, proj in zip(srcdist.support, projected)
            }
            raw.append(mapping)
        return _dedup_aux(srcdist, raw, policy.id_prefix)
    aux = list(policy)
    for a in aux:
        if not isinstance(a, AuxVariable):
            raise TypeError(f"expected AuxVariable, got {type(a).__name__}")
    push_aux(srcdist, aux)  # totality validation
    kept, seen = [], set()
    for a in aux:
        sig = _grouping_signature(srcdist, a.mapping)
        if sig in seen:
            continue
        seen.add(sig)
        kept.append(a)
    return kept


def _grouping_signature(srcdist, mapping) -> frozenset:
    blocks: dict = {}
    for i, o in enumerate(srcdist.support):
        blocks.setdefault(mapping[o], []).append(i)
    return frozenset(frozenset(b) for b in blocks.values())


def _dedup_aux(srcdist, mappings, prefix) -> list:
    kept, seen = [], set()
    for mapping in mappings:
        sig = _grouping_signature(srcdist, mapping)
        if len(sig) < 2 or sig in seen:
            continue
        seen.add(sig)
        kept.append(mapping)
    return [
        AuxVariable(f"{prefix}{i + 1}", mapping) for i, mapping in enumerate(kept)
    ]


def example_network():
    """The three-source example instance used throughout the tests.

    Node 1 holds three pairwise-correlated sources built from independent
    uniform bits b0, b1, b2: Y1 = (b0, b1), Y2 = (b0, b2), Y3 = (b1, b2),
    demanded at nodes 3, 4 and 5 respectively. Unit-capacity edges run from
    node 1 to node 2 and directly to each sink; the edges from node 2 to the
    sinks are unconstrained relays of what node 2 received. The edge
    numbering of the direct links is a documented modelling assumption; the
    symmetric capacities make membership verdicts insensitive to it.

    Returns (network, source distribution, bit auxiliaries).
    """
    nodes = {"1", "2", "3", "4", "5"}
    edges = (
        Edge("e1", "1", "2", 1.0),
        Edge("e2", "1", "3", 1.0),
        Edge("e3", "1", "4", 1.0),
        Edge("e4", "1", "5", 1.0),
        Edge("f3", "2", "3", None),
        Edge("f4", "2", "4", None),
        Edge("f5", "2", "5", None),
    )
    sources = (
        SourceSpec("Y1", {"1"}, {"3"}),
        SourceSpec("Y2", {"1"}, {"4"}),
        SourceSpec("Y3", {"1"}, {"5"}),
    )
    net = NetworkSpec(frozenset(nodes), edges, sources)
    outcomes, probs = [], []
    for b0, b1, b2 in itertools.product("01", repeat=3):
        outcomes.append((b0 + b1, b0 + b2, b1 + b2))
        probs.append(0.125)
    srcdist = RandomVectorDistribution.from_support(outcomes, probs)
    aux = [
        AuxVariable("K0", {o: o[0][0] for o in srcdist.support}),
        AuxVariable("K1", {o: o[0][1] for o in srcdist.support}),
        AuxVariable("K2", {o: o[1][1] for o in srcdist.support}),
    ]
    return net, srcdist, aux


def network_from_json(doc: Mapping) -> NetworkSpec:
    """Build a network from its JSON document form."""
    try:
        nodes = frozenset(str(v) for v in doc["nodes"])
        edges = tuple(
            Edge(
                str(e["id"]), str(e["tail"]), str(e["head"]),
                None if e.get("capacity") in (None, "inf") else float(e["capacity"]),
            )
            for e in doc["edges"]
        )
        sources = tuple(
            SourceSpec(
                str(s["id"]),
                frozenset(str(v) for v in s["placed"]),
                frozenset(str(v) for v in s["demanded"]),
            )
            for s in doc["sources"]
        )
    except (KeyError, TypeError) as exc:
        raise NetworkStructureError(f"bad network document: {exc}") from exc
    return NetworkSpec(nodes, edges, sources)


def aux_from_json(doc: Mapping, srcdist: RandomVectorDistribution) -> list:
    """Parse auxiliaries; outcome keys are source labels joined by commas."""
    for outcome in srcdist.support:
        for component in outcome:
            if "," in component:
                raise ValueError(
                    "source labels must not contain commas when auxiliaries "
                    "are given as JSON"
                )
    out = []
    for entry in doc.get("aux", []):
        mapping = {}
        for key, value in entry["map"].items():
            parts = tuple(key.split(","))
            if len(parts) != srcdist.num_coords:
                raise ValueError(
                    f"aux outcome key {key!r} does not have "
                    f"{srcdist.num_coords} components"
                )
            mapping[parts] = str(value)
        out.append(AuxVariable(str(entry["id"]), mapping))
    return out


def load_network(path) -> NetworkSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return network_from_json(json.load(fh))


def load_aux(path, srcdist) -> list:
    with open(path, "r", encoding="utf-8") as fh:
        return aux_from_json(json.load(fh), srcdist)
