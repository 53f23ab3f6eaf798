"""Command-line front end with JSON output for scripted use.

Analysis verdicts (a capacity tuple outside the bound, a pair of
distributions that are not equivalent) are ordinary outcomes: they exit 0
with a machine-readable status. Nonzero exit codes mean malformed input (2)
or an internal failure (1). Schemas are documented in docs/formats.md.
"""
from __future__ import annotations

import argparse
import json
import sys

from .distributions import (
    DiscreteDistribution,
    InvalidDistributionError,
    RandomVectorDistribution,
    entropy,
    load_distribution,
    subset_entropy,
)
from .characterise import (
    SearchBoundExceededError,
    reconstruct_scalar,
    scalar_equivalent,
    vector_equivalent,
    verify_partition_match,
)
from .entropy_space import LPNumericalError, dump_constraints
from .netbound import (
    NetworkStructureError,
    example_network,
    load_aux,
    load_network,
    membership,
    scale_query,
)
from .partitions import oracle_from_distribution

_PARSE_ERRORS = (
    InvalidDistributionError,
    NetworkStructureError,
    SearchBoundExceededError,
    ValueError,
    KeyError,
    OSError,
    json.JSONDecodeError,
)


def _flatten_label(outcome) -> str:
    return ",".join(outcome) if isinstance(outcome, tuple) else str(outcome)


def _as_scalar(dist) -> DiscreteDistribution:
    return dist.joint if isinstance(dist, RandomVectorDistribution) else dist


def cmd_entropy(args) -> tuple:
    dist = load_distribution(args.dist)
    rows = []
    if isinstance(dist, RandomVectorDistribution):
        m = dist.num_coords
        for mask in range(1, 1 << m):
            coords = [j for j in range(m) if mask >> j & 1]
            rows.append({"coords": coords, "bits": subset_entropy(dist, coords)})
    else:
        rows.append({"coords": [0], "bits": entropy(dist)})
    return "ok", {"subsets": rows}


def cmd_reconstruct(args) -> tuple:
    dist = _as_scalar(load_distribution(args.dist)).canonical()
    oracle = oracle_from_distribution(dist)
    probs = reconstruct_scalar(oracle, tol=args.tol_entropy)
    return "ok", {
        "n": dist.n,
        "probs": list(probs),
        "tolerances": {
            "entropy": args.tol_entropy,
            "mass": 1e-8,
            "pairwise": 1e-8,
        },
    }


def cmd_equiv(args) -> tuple:
    p = load_distribution(args.p)
    q = load_distribution(args.q)
    if args.mode == "vector":
        if not isinstance(p, RandomVectorDistribution) or not isinstance(
            q, RandomVectorDistribution
        ):
            raise InvalidDistributionError(
                "vector mode needs vector distribution files (with arity)"
            )
        witness = vector_equivalent(p, q)
        payload = {
            "equivalent": witness is not None,
            "witness": None if witness is None else {
                "sigma": [dict(m) for m in witness.coordinate_maps]
            },
            "verified_depth": None,
        }
        return ("ok" if witness is not None else "not-equivalent"), payload
    ps, qs = _as_scalar(p), _as_scalar(q)
    witness = scalar_equivalent(ps, qs, tol=args.tol_entropy)
    depth = None
    sampled = None
    if witness is not None and ps.n <= 8 and qs.n <= 8:
        match = verify_partition_match(ps, qs, seed=args.seed, tol=args.tol_entropy)
        if match is not None:
            depth = match.verified_depth
            sampled = match.sampled_checks
    payload = {
        "equivalent": witness is not None,
        "witness": None if witness is None else {
            "map": {
                _flatten_label(a): _flatten_label(b)
                for a, b in witness.mapping.items()
            }
        },
        "verified_depth": depth,
        "sampled_checks": sampled,
    }
    return ("ok" if witness is not None else "not-equivalent"), payload


def _witness_payload(verdict):
    if verdict.witness is None:
        return None
    g = verdict.problem.ground
    return {
        ",".join(g.names_of(mask)): verdict.witness.coords[mask - 1]
        for mask in range(1, 1 << g.n)
    }


def _netbound_inputs(args):
    if args.subcommand == "example":
        net, srcdist, bit_aux = example_network()
        aux = bit_aux if args.aux == "bits" else []
        return net, srcdist, aux
    if not args.net or not args.dist:
        raise ValueError("check/scale need --net and --dist files")
    net = load_network(args.net)
    dist = load_distribution(args.dist)
    if not isinstance(dist, RandomVectorDistribution):
        raise InvalidDistributionError(
            "source distribution must be a vector file (with arity)"
        )
    aux = load_aux(args.aux, dist) if args.aux else []
    return net, dist, aux


def _parse_tuple(text) -> list:
    return [float(v) for v in str(text).split(",")]


def cmd_netbound(args) -> tuple:
    net, srcdist, aux = _netbound_inputs(args)
    if args.subcommand == "scale" or (
        args.subcommand == "example" and args.scale is not None
    ):
        direction = _parse_tuple(args.scale if args.subcommand == "example"
                                 else args.direction)
        result = scale_query(net, srcdist, aux, direction)
        payload = {
            "direction": direction,
            "t": result.t,
            "ray_enters": result.status == "bounded",
            "ground": list(result.problem.ground.names),
        }
        return ("ok" if result.status == "bounded" else "infeasible"), payload
    capacities = _parse_tuple(args.C) if args.C else None
    verdict = membership(net, srcdist, aux, capacities, tol=args.tol_lp)
    payload = {
        "in_bound": verdict.in_bound,
        "gap": verdict.gap,
        "capacities": verdict.problem.capacities,
        "ground": list(verdict.problem.ground.names),
        "witness": _witness_payload(verdict),
        "lp_dump": dump_constraints(
            verdict.problem.constraints, verdict.problem.ground
        ),
    }
    return ("ok" if verdict.in_bound else "infeasible"), payload


def _print_table(status, payload, out):
    print(f"status: {status}", file=out)
    if "subsets" in payload:
        for row in payload["subsets"]:
            label = ",".join(str(c) for c in row["coords"])
            print(f"  H({label}) = {row['bits']:.12g}", file=out)
        return
    if "probs" in payload:
        print("  probs: " + " ".join(f"{p:.12g}" for p in payload["probs"]),
              file=out)
        return
    if "equivalent" in payload:
        print(f"  equivalent: {payload['equivalent']}", file=out)
        if payload.get("verified_depth") is not None:
            print(f"  verified_depth: {payload['verified_depth']}", file=out)
        return
    if "in_bound" in payload:
        print(f"  in_bound: {payload['in_bound']}", file=out)
        print(f"  gap: {payload['gap']:.3e}", file=out)
        return
    if "t" in payload:
        value = payload["t"]
        print(f"  threshold t: {value if value is not None else 'none'}",
              file=out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized subfamily sampling")
    common.add_argument("--tol-entropy", type=float, default=1e-9)
    common.add_argument("--tol-lp", type=float, default=1e-7)

    parser = argparse.ArgumentParser(
        prog="entchar",
        description="entropy characterisation and network-coding outer bounds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_entropy = sub.add_parser("entropy", parents=[common],
                               help="entropies of coordinate subsets")
    p_entropy.add_argument("dist")

    p_rec = sub.add_parser("reconstruct", parents=[common],
                           help="sorted probabilities from the entropy oracle")
    p_rec.add_argument("dist")

    p_eq = sub.add_parser("equiv", parents=[common],
                          help="equivalence up to relabeling")
    p_eq.add_argument("p")
    p_eq.add_argument("q")
    p_eq.add_argument("--mode", choices=("scalar", "vector"), default="scalar")

    p_net = sub.add_parser("netbound", parents=[common],
                           help="outer-bound queries")
    p_net.add_argument("subcommand", choices=("check", "scale", "example"))
    p_net.add_argument("--net", help="network JSON file")
    p_net.add_argument("--dist", help="source distribution JSON file")
    p_net.add_argument("--aux",
                       help="aux JSON file; for example: 'none' or 'bits'")
    p_net.add_argument("--C", help="capacity tuple, comma separated")
    p_net.add_argument("--direction", help="capacity direction for scale")
    p_net.add_argument("--scale",
                       help="direction for a threshold query on the example")
    return parser


_HANDLERS = {
    "entropy": cmd_entropy,
    "reconstruct": cmd_reconstruct,
    "equiv": cmd_equiv,
    "netbound": cmd_netbound,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "netbound":
        if args.subcommand == "example":
            args.aux = args.aux or "none"
            if args.aux not in ("none", "bits"):
                parser.error("example mode takes --aux none|bits")
        elif args.subcommand == "scale" and not args.direction:
            parser.error("scale needs --direction")
        elif args.subcommand == "check" and not args.C and not args.net:
            pass  # capacities may come from the network file
    try:
        status, payload = _HANDLERS[args.command](args)
    except LPNumericalError as exc:
        print(json.dumps({"status": "error", "error": str(exc)}))
        return 1
    except _PARSE_ERRORS as exc:
        print(json.dumps({"status": "error", "error": str(exc)}))
        return 2
    if args.format == "json":
        print(json.dumps({"status": status, **payload}))
    else:
        _print_table(status, payload, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
