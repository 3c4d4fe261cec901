"""cayminor: Cayley-graph balls, minor search, ends and clique construction.

Every subcommand prints one JSON object on stdout (unless --format asks
for DOT or text); progress and logs go to stderr. Exit status is 0 when a
verdict was produced, found or absent alike, and 2 on errors, which are
reported as {"error": ..., "message": ...}.

Examples:
  cayminor ball --group z^2 --gens e1,e2 --radius 2
  cayminor minor --group cyclic:5 --gens all --radius 1 --pattern k:5
  cayminor construct --group z^2 --m 4 --radius 24 --out cert.json
  cayminor verify --certificate cert.json
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time

from .cayley import Ball, ball_to_dot, ball_to_json, build_ball
from .construction import AVOID_FIRST, SHORTEST, build_clique_minor, rays_for_construction
from .ends import Insufficient, end_report, extract_rays
from .errors import CayminorError, ParseError
from .graph import Graph, load_graph, parse_pattern
from .groups import parse_genset, parse_group, power_union
from .minors import (
    MinorEmbedding,
    Status,
    brute_force_minor,
    default_budget,
    find_minor,
    hadwiger_lower_bound,
    is_planar,
    verify_embedding,
)

log = logging.getLogger("cayminor")


class _JsonErrorParser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(f"{self.prog}: {message}")


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _host_args(p: argparse.ArgumentParser, radius_required: bool = True) -> None:
    p.add_argument("--group", required=True, help="cyclic:n, table:FILE, z^n, free:k, freeprod:...")
    p.add_argument("--gens", default=None, help="comma-separated generators, 'default' or 'all'")
    p.add_argument("--radius", type=_nonneg, required=radius_required)


def _budget_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget", type=_positive, default=None,
                   help="search-node budget (default: $CAYMINOR_BUDGET or 2000000)")


def _budget(args) -> int | None:
    return args.budget if args.budget is not None else default_budget()


def _ball(args, radius: int | None = None, boost: int = 1) -> Ball:
    model = parse_group(args.group)
    gens = parse_genset(model, args.gens)
    if boost > 1:
        gens = power_union(model, gens, boost)
    r = args.radius if radius is None else radius
    t0 = time.perf_counter()
    ball = build_ball(model, gens, r)
    log.info("built ball: %d vertices, radius %d, %.2fs", ball.n, r, time.perf_counter() - t0)
    return ball


def _host_json(args) -> dict:
    return {"group": args.group, "gens": args.gens or "default", "radius": args.radius}


def _write(path: str, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)
    log.info("wrote %s", path)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_ball(args) -> dict | str:
    ball = _ball(args)
    export = ball_to_json(ball)
    if args.out:
        _write(args.out, ball_to_dot(ball) if args.format == "dot" else json.dumps(export))
    if args.format == "dot" and not args.out:
        return ball_to_dot(ball)
    spheres = [0] * (ball.radius + 1)
    for d in ball.dist:
        spheres[d] += 1
    summary = {
        "command": "ball",
        **_host_json(args),
        "vertices": ball.n,
        "edges": len(export["edges"]),
        "sphere_sizes": spheres,
    }
    if args.format == "text":
        return f"{ball.n} vertices, {summary['edges']} edges, spheres {spheres}"
    if args.full:
        summary["ball"] = export
    return summary


def cmd_minor(args) -> dict:
    ball = _ball(args)
    pattern = parse_pattern(args.pattern)
    res = find_minor(ball.graph(), pattern, _budget(args))
    out = {"command": "minor", **_host_json(args), "pattern": args.pattern, **res.to_json()}
    if res.embedding is not None and args.out:
        _write(args.out, json.dumps({**res.embedding.to_json(), "host": _host_json(args)}))
    return out


def cmd_planar(args) -> dict:
    ball = _ball(args)
    res = is_planar(ball.graph(), _budget(args))
    return {"command": "planar", **_host_json(args), "vertices": ball.n, **res.to_json()}


def cmd_hadwiger(args) -> dict:
    ball = _ball(args)
    m, emb = hadwiger_lower_bound(ball.graph(), _budget(args))
    return {"command": "hadwiger", **_host_json(args), "lower_bound": m, "certificate": emb.to_json()}


def cmd_ends(args) -> dict:
    ball = _ball(args)
    return {"command": "ends", **_host_json(args), **end_report(ball, args.inner)}


def cmd_rays(args) -> dict:
    ball = _ball(args)
    found = extract_rays(ball, args.m, args.start, args.component)
    out = {"command": "rays", **_host_json(args), "m": args.m}
    if isinstance(found, Insufficient):
        return {**out, **found.to_json()}
    return {**out, "status": "found", **found.to_json()}


def cmd_construct(args) -> dict:
    ball = _ball(args)
    rays = rays_for_construction(ball, args.m, args.start)
    if isinstance(rays, Insufficient):
        return {"command": "construct", **_host_json(args), "m": args.m, **rays.to_json()}
    log.info("rays start at radius %d", rays.start_radius)
    t0 = time.perf_counter()
    res = build_clique_minor(ball.model, ball.gens, rays, args.m, args.strategy)
    log.info("construction finished in %.2fs", time.perf_counter() - t0)
    host = {
        "group": args.group,
        "gens": args.gens or "default",
        "boost": 3,
        "radius": res.boosted_ball.radius,
    }
    cert = {**res.embedding.to_json(), "host": host}
    if args.out:
        _write(args.out, json.dumps(cert))
    return {
        "command": "construct",
        **_host_json(args),
        "status": "found",
        "start_radius": rays.start_radius,
        **res.to_json(),
        "host": host,
    }


def cmd_verify(args) -> dict:
    with open(args.certificate) as fh:
        data = json.load(fh)
    emb = MinorEmbedding.from_json(data)
    if args.graph:
        host = load_graph(args.graph)
        source = {"graph": args.graph}
    else:
        spec = dict(data.get("host") or {})
        for key in ("group", "gens", "radius"):
            if getattr(args, key, None) is not None:
                spec[key] = getattr(args, key)
        if args.boost is not None:
            spec["boost"] = args.boost
        if "group" not in spec or "radius" not in spec:
            raise ParseError("no host: give --graph, or --group/--radius, or a certificate with a host entry")
        ns = argparse.Namespace(group=spec["group"], gens=spec.get("gens"), radius=int(spec["radius"]))
        host = _ball(ns, boost=int(spec.get("boost", 1))).graph()
        source = {"host": spec}
    ok = verify_embedding(host, emb)
    return {
        "command": "verify",
        **source,
        "pattern_vertices": emb.pattern.n,
        "verdict": "accepted" if ok else "rejected",
    }


def _random_graph(rng: random.Random, max_n: int) -> Graph:
    n = rng.randint(1, max_n)
    p = rng.uniform(0.15, 0.85)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def cmd_crosscheck(args) -> dict:
    """Compare the exact search with the brute-force oracle on random graphs."""
    rng = random.Random(args.seed)
    pattern = parse_pattern(args.pattern)
    disagreements = []
    for trial in range(args.trials):
        g = _random_graph(rng, args.max_n)
        res = find_minor(g, pattern, None)
        expected = brute_force_minor(g, pattern)
        if res.found != expected:
            disagreements.append({"trial": trial, "graph": g.to_json(), "oracle": expected})
    return {
        "command": "crosscheck",
        "pattern": args.pattern,
        "seed": args.seed,
        "trials": args.trials,
        "disagreements": disagreements,
    }


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _JsonErrorParser(prog="cayminor", description=__doc__,
                          formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_JsonErrorParser)

    p = sub.add_parser("ball", help="build and export a Cayley ball")
    _host_args(p)
    p.add_argument("--format", choices=("json", "dot", "text"), default="json")
    p.add_argument("--out", help="write the full export (JSON or DOT) here")
    p.add_argument("--full", action="store_true", help="include the full export in the JSON output")
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("minor", help="decide whether a pattern is a minor of a ball")
    _host_args(p)
    p.add_argument("--pattern", required=True, help="k:5, k:3,3, c:5, p:4 or petersen")
    p.add_argument("--out", help="write the certificate here when found")
    _budget_arg(p)
    p.set_defaults(func=cmd_minor)

    p = sub.add_parser("planar", help="planarity by K5 / K3,3 minor exclusion")
    _host_args(p)
    _budget_arg(p)
    p.set_defaults(func=cmd_planar)

    p = sub.add_parser("hadwiger", help="certified lower bound on the largest clique minor")
    _host_args(p)
    _budget_arg(p)
    p.set_defaults(func=cmd_hadwiger)

    p = sub.add_parser("ends", help="live components outside an inner ball")
    _host_args(p)
    p.add_argument("--inner", type=_nonneg, required=True)
    p.set_defaults(func=cmd_ends)

    p = sub.add_parser("rays", help="disjoint outward rays to the outer sphere")
    _host_args(p)
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--start", type=_nonneg, default=1)
    p.add_argument("--component", type=_nonneg, default=None)
    p.set_defaults(func=cmd_rays)

    p = sub.add_parser("construct", help="K_m minor in the S∪S²∪S³ ball from m rays")
    _host_args(p)
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--start", type=_nonneg, default=None, help="ray start radius (default: smallest that works)")
    p.add_argument("--strategy", choices=(AVOID_FIRST, SHORTEST), default=AVOID_FIRST)
    p.add_argument("--out", help="write the certificate here")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="re-check a certificate against a graph")
    p.add_argument("--certificate", required=True)
    p.add_argument("--graph", help="graph JSON ({n, edges} or a ball export)")
    p.add_argument("--group")
    p.add_argument("--gens")
    p.add_argument("--radius", type=_nonneg)
    p.add_argument("--boost", type=_positive, help="use S ∪ ... ∪ S^k as generators")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("crosscheck", help="exact search vs brute force on seeded random graphs")
    p.add_argument("--pattern", default="k:4")
    p.add_argument("--trials", type=_positive, default=50)
    p.add_argument("--max-n", type=_positive, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_crosscheck)
    return ap


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args = build_parser().parse_args(argv)
        if args.verbose:
            log.setLevel(logging.INFO)
        result = args.func(args)
    except CayminorError as exc:
        print(json.dumps(exc.to_json()))
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": "io_error", "message": str(exc)}))
        return 2
    if isinstance(result, str):
        print(result)
    else:
        print(json.dumps(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
