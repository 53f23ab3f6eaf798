"""Entropy space over a ground set and LP feasibility against the Shannon cone.

A point assigns a real value in bits to every nonempty subset of ground
variables (indexed by bitmask). The Shannon outer bound is realised by the
elemental inequalities, H(X_i | rest) >= 0 and I(X_i; X_j | X_K) >= 0, which
generate the same cone as the polymatroid axioms with far fewer rows.

Feasibility is decided by an explicit phase-1 LP (artificial slack per row,
minimise their sum) so an infeasible system reports its gap and a feasible
one returns a witness point that is replayed against every constraint before
being accepted. Solving is delegated to scipy's HiGHS backend; the contract
is the tolerance, not the solver.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .distributions import RandomVectorDistribution, subset_entropy

LP_TOL = 1e-7
MAX_GROUND = 16

_NAME_FORBIDDEN = set(" \t,:{}$")


class LPNumericalError(RuntimeError):
    """The solver failed for numerical reasons, distinct from infeasibility."""


@dataclass(frozen=True)
class GroundSet:
    """Ordered named ground variables; subsets are bitmasks over positions."""

    names: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if not 1 <= len(self.names) <= MAX_GROUND:
            raise ValueError(
                f"ground set size {len(self.names)} outside 1..{MAX_GROUND}"
            )
        if len(set(self.names)) != len(self.names):
            raise ValueError("ground variable names must be unique")
        for name in self.names:
            if not name or any(ch in _NAME_FORBIDDEN for ch in name):
                raise ValueError(f"bad ground variable name {name!r}")
        object.__setattr__(self, "_pos", {n: i for i, n in enumerate(self.names)})

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self._pos[name]

    def mask(self, names: Iterable[str]) -> int:
        out = 0
        for name in names:
            out |= 1 << self._pos[name]
        return out

    def names_of(self, mask: int) -> tuple:
        return tuple(n for i, n in enumerate(self.names) if mask >> i & 1)


@dataclass(frozen=True)
class LinearConstraint:
    """Sparse affine constraint over subset coordinates plus scalar extras.

    ``terms`` pairs nonempty subset masks with coefficients; ``extra_terms``
    pairs named scalar LP variables (used for capacity scaling) with
    coefficients. Relation is ``"="`` or ``">="`` against ``rhs``.
    """

    terms: tuple
    relation: str
    rhs: float
    extra_terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, "terms", tuple((int(m), float(c)) for m, c in self.terms)
        )
        object.__setattr__(
            self, "extra_terms",
            tuple((str(n), float(c)) for n, c in self.extra_terms),
        )
        object.__setattr__(self, "rhs", float(self.rhs))
        if self.relation not in ("=", ">="):
            raise ValueError(f"relation {self.relation!r} must be '=' or '>='")
        if not self.terms and not self.extra_terms:
            raise ValueError("constraint has no terms")
        for mask, coeff in self.terms:
            if mask <= 0:
                raise ValueError("subset masks must be nonempty")
            if not math.isfinite(coeff):
                raise ValueError("non-finite coefficient")


@dataclass(frozen=True)
class EntropySpacePoint:
    """Vector indexed by nonempty subsets of the ground set, in bits."""

    ground: GroundSet
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(v) for v in self.coords))
        expected = (1 << self.ground.n) - 1
        if len(self.coords) != expected:
            raise ValueError(
                f"need {expected} coordinates for N={self.ground.n}, "
                f"got {len(self.coords)}"
            )
        if any(not math.isfinite(v) for v in self.coords):
            raise ValueError("non-finite coordinate")

    def value(self, subset) -> float:
        """Coordinate of a subset given as a mask or an iterable of names."""
        mask = subset if isinstance(subset, int) else self.ground.mask(subset)
        if mask == 0:
            return 0.0
        return self.coords[mask - 1]


def elemental_inequalities(g: GroundSet) -> list:
    """All constraints H(X_i|rest) >= 0 and I(X_i;X_j|X_K) >= 0.

    Count is N + C(N,2) * 2^(N-2) for N >= 2, and 1 for N = 1.
    """
    n = g.n
    full = (1 << n) - 1
    out = []
    for i in range(n):
        bit = 1 << i
        if n == 1:
            out.append(LinearConstraint(((bit, 1.0),), ">=", 0.0))
        else:
            out.append(
                LinearConstraint(((full, 1.0), (full ^ bit, -1.0)), ">=", 0.0)
            )
    for i in range(n):
        for j in range(i + 1, n):
            bi, bj = 1 << i, 1 << j
            others = [b for b in range(n) if b != i and b != j]
            for pick in range(1 << len(others)):
                k_mask = 0
                for t, b in enumerate(others):
                    if pick >> t & 1:
                        k_mask |= 1 << b
                terms = [(bi | k_mask, 1.0), (bj | k_mask, 1.0),
                         (bi | bj | k_mask, -1.0)]
                if k_mask:
                    terms.append((k_mask, -1.0))
                out.append(LinearConstraint(tuple(terms), ">=", 0.0))
    return out


def entropic_point(d: RandomVectorDistribution, g: GroundSet) -> EntropySpacePoint:
    """Point whose subset coordinates are the distribution's joint entropies.

    Coordinate j of the vector distribution is identified with ground
    variable j, in order.
    """
    if d.num_coords != g.n:
        raise ValueError(
            f"distribution has {d.num_coords} coordinates, ground set {g.n}"
        )
    coords = []
    for mask in range(1, 1 << g.n):
        coords.append(subset_entropy(d, [i for i in range(g.n) if mask >> i & 1]))
    return EntropySpacePoint(g, tuple(coords))


def constraint_value(c: LinearConstraint, point: EntropySpacePoint,
                     extras: Optional[Mapping] = None) -> float:
    """Left-hand side of the constraint at a point (and extra values)."""
    total = math.fsum(coeff * point.coords[mask - 1] for mask, coeff in c.terms)
    if c.extra_terms:
        if extras is None:
            raise ValueError("constraint references extras but none given")
        total += math.fsum(coeff * extras[name] for name, coeff in c.extra_terms)
    return total


def _extra_names(constraints, extra_objective=None) -> list:
    names = set()
    for c in constraints:
        for name, _ in c.extra_terms:
            names.add(name)
    if extra_objective:
        names.update(extra_objective.keys())
    return sorted(names)


def _build_rows(constraints, g: GroundSet, extras: Sequence[str]):
    """Split into (A_eq, b_eq, A_ub, b_ub) over subset + extra columns."""
    n_sub = (1 << g.n) - 1
    col_of_extra = {name: n_sub + i for i, name in enumerate(extras)}
    n_cols = n_sub + len(extras)
    eq_rows, eq_rhs, ub_rows, ub_rhs = [], [], [], []
    full = 1 << g.n
    for c in constraints:
        cols, vals = [], []
        for mask, coeff in c.terms:
            if mask >= full:
                raise ValueError(f"mask {mask:#x} outside ground set of {g.n}")
            cols.append(mask - 1)
            vals.append(coeff)
        for name, coeff in c.extra_terms:
            cols.append(col_of_extra[name])
            vals.append(coeff)
        if c.relation == "=":
            eq_rows.append((cols, vals))
            eq_rhs.append(c.rhs)
        else:
            # ">= rhs" becomes "-lhs <= -rhs"
            ub_rows.append((cols, [-v for v in vals]))
            ub_rhs.append(-c.rhs)
    return n_cols, eq_rows, eq_rhs, ub_rows, ub_rhs


def _to_sparse(rows, n_cols):
    data, ri, ci = [], [], []
    for r, (cols, vals) in enumerate(rows):
        for c, v in zip(cols, vals):
            ri.append(r)
            ci.append(c)
            data.append(v)
    return sparse.csr_matrix((data, (ri, ci)), shape=(len(rows), n_cols))


@dataclass
class FeasibilityResult:
    """Verdict of a feasibility solve; feasible results carry a witness."""

    feasible: bool
    point: Optional[EntropySpacePoint]
    gap: float
    extras: dict


def feasibility(constraints: Sequence[LinearConstraint], g: GroundSet,
                tol: float = LP_TOL) -> FeasibilityResult:
    """Phase-1 feasibility of the constraint system.

    Feasible when the minimal total artificial slack is at most ``tol``; the
    witness is replayed against every constraint before being returned.
    Solver breakdowns raise ``LPNumericalError`` instead of masquerading as
    infeasibility.
    """
    extras = _extra_names(constraints)
    n_cols, eq_rows, eq_rhs, ub_rows, ub_rhs = _build_rows(constraints, g, extras)
    # artificial columns: one signed pair per equality, one per inequality
    n_art = 2 * len(eq_rows) + len(ub_rows)
    total_cols = n_cols + n_art
    art = n_cols
    for row in eq_rows:
        row[0].extend([art, art + 1])
        row[1].extend([1.0, -1.0])
        art += 2
    for row in ub_rows:
        # -lhs - a <= -rhs, a >= 0 relaxes the original ">="
        row[0].append(art)
        row[1].append(-1.0)
        art += 1
    cost = np.zeros(total_cols)
    cost[n_cols:] = 1.0
    bounds = [(None, None)] * n_cols + [(0.0, None)] * n_art
    res = linprog(
        cost,
        A_ub=_to_sparse(ub_rows, total_cols) if ub_rows else None,
        b_ub=np.array(ub_rhs) if ub_rows else None,
        A_eq=_to_sparse(eq_rows, total_cols) if eq_rows else None,
        b_eq=np.array(eq_rhs) if eq_rows else None,
        bounds=bounds,
        method="highs",
    )
    if res.status != 0:
        raise LPNumericalError(f"phase-1 solve failed: {res.message}")
    gap = float(res.fun)
    if gap > tol:
        return FeasibilityResult(False, None, gap, {})
    coords = tuple(float(v) for v in res.x[: (1 << g.n) - 1])
    point = EntropySpacePoint(g, coords)
    extra_values = {
        name: float(res.x[(1 << g.n) - 1 + i]) for i, name in enumerate(extras)
    }
    _replay(constraints, point, extra_values, tol)
    return FeasibilityResult(True, point, gap, extra_values)


def _replay(constraints, point, extras, tol):
    for c in constraints:
        lhs = constraint_value(c, point, extras)
        if c.relation == "=" and abs(lhs - c.rhs) > tol:
            raise LPNumericalError(
                f"witness violates equality by {abs(lhs - c.rhs):.3e}"
            )
        if c.relation == ">=" and lhs < c.rhs - tol:
            raise LPNumericalError(
                f"witness violates inequality by {c.rhs - lhs:.3e}"
            )


@dataclass
class OptimizeResult:
    """Outcome of a linear maximisation over the constraint polyhedron."""

    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Optional[float]
    point: Optional[EntropySpacePoint]
    extras: dict


def maximize(objective: Mapping, constraints: Sequence[LinearConstraint],
             g: GroundSet,
             extra_objective: Optional[Mapping] = None) -> OptimizeResult:
    """Maximise a sparse subset/extras objective subject to the constraints."""
    extras = _extra_names(constraints, extra_objective)
    n_cols, eq_rows, eq_rhs, ub_rows, ub_rhs = _build_rows(constraints, g, extras)
    cost = np.zeros(n_cols)
    n_sub = (1 << g.n) - 1
    for mask, coeff in objective.items():
        if not 0 < mask <= n_sub:
            raise ValueError(f"objective mask {mask:#x} outside ground set")
        cost[mask - 1] -= coeff  # linprog minimises
    if extra_objective:
        for name, coeff in extra_objective.items():
            cost[n_sub + extras.index(name)] -= coeff
    res = linprog(
        cost,
        A_ub=_to_sparse(ub_rows, n_cols) if ub_rows else None,
        b_ub=np.array(ub_rhs) if ub_rows else None,
        A_eq=_to_sparse(eq_rows, n_cols) if eq_rows else None,
        b_eq=np.array(eq_rhs) if eq_rows else None,
        bounds=[(None, None)] * n_cols,
        method="highs",
    )
    if res.status == 2:
        return OptimizeResult("infeasible", None, None, {})
    if res.status == 3:
        return OptimizeResult("unbounded", None, None, {})
    if res.status != 0:
        raise LPNumericalError(f"optimisation failed: {res.message}")
    point = EntropySpacePoint(g, tuple(float(v) for v in res.x[:n_sub]))
    extra_values = {
        name: float(res.x[n_sub + i]) for i, name in enumerate(extras)
    }
    return OptimizeResult("optimal", float(-res.fun), point, extra_values)


def dump_constraints(constraints: Sequence[LinearConstraint], g: GroundSet) -> str:
    """Replayable text form; floats use repr so parsing is bit-exact.

    First line lists the ground variable names; each following line is
    ``<rel> <rhs> <subset>:<coeff> ...`` with subsets as comma-joined names
    in ground order and scalar extras prefixed by ``$``.
    """
    lines = ["vars " + " ".join(g.names)]
    for c in constraints:
        parts = [c.relation, repr(c.rhs)]
        for mask, coeff in c.terms:
            parts.append(",".join(g.names_of(mask)) + ":" + repr(coeff))
        for name, coeff in c.extra_terms:
            parts.append("$" + name + ":" + repr(coeff))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_dump(text: str):
    """Inverse of ``dump_constraints``; returns (ground set, constraints)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("vars "):
        raise ValueError("dump must start with a 'vars' line")
    g = GroundSet(tuple(lines[0].split()[1:]))
    constraints = []
    for line in lines[1:]:
        fields = line.split()
        relation, rhs = fields[0], float(fields[1])
        terms, extra_terms = [], []
        for item in fields[2:]:
            subset, _, coeff = item.rpartition(":")
            if subset.startswith("$"):
                extra_terms.append((subset[1:], float(coeff)))
            else:
                terms.append((g.mask(subset.split(",")), float(coeff)))
        constraints.append(
            LinearConstraint(tuple(terms), relation, rhs, tuple(extra_terms))
        )
    return g, constraints
