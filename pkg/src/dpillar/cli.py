"""Command-line entry point: ``dpillar <subcommand> ...``.

Exit status is 0 on success, 1 when a verification subcommand finds a
failure, and 2 for usage or domain errors (reported as a JSON object on
stderr).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import metrics, oracle, symmetry, tables
from .errors import DPillarError
from .marked_cycle import canonicalize, compress_moves
from .routing import diameter, route
from .topology import Server, TopologyParams, summary

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(args, payload, csv_text: str | None = None) -> None:
    if args.format == "csv" and csv_text is not None:
        text = csv_text
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _params(args) -> TopologyParams:
    if args.n is None or args.k is None:
        raise UsageError("--n and --k are required")
    return TopologyParams(args.n, args.k)


def cmd_topo(args) -> int:
    params = _params(args)
    info = summary(params)
    _emit(args, info, tables.to_csv(list(info), [list(info.values())]))
    return EXIT_OK


def cmd_route(args) -> int:
    params = _params(args)
    src = Server.parse(args.src, params)
    dst = Server.parse(args.dst, params)
    r = route(src, dst, params, args.alg)
    payload = r.to_dict()
    payload.update(alg=args.alg, compressed_moves=compress_moves(r.moves))
    if src != dst:
        cycle = canonicalize(src, dst, params)
        payload["cycle"] = {"k": cycle.k, "x": cycle.x, "marked": sorted(cycle.marked)}
    rows = [[i, s, (r.switches[i] if i < r.length else "")] for i, s in enumerate(r.servers)]
    _emit(args, payload, tables.to_csv(["hop", "server", "switch"], ([i, str(s), str(w)] for i, s, w in rows)))
    return EXIT_OK


def cmd_survey(args) -> int:
    params = _params(args)
    rep = metrics.path_length_survey(params, args.alg, args.method)
    cum = rep.cumulative()
    header = ["n", "k", "servers", "alg", "avg_path_len", "non_min_paths_pct"] + [str(i) for i in range(len(cum))]
    row = [params.n, params.k, params.num_servers, args.alg, f"{rep.mean:.2f}", f"{100 * rep.nonminimal_fraction:.1f}"]
    row += [f"{c:.1f}" for c in cum]
    _emit(args, rep.to_dict(), tables.to_csv(header, [row]))
    return EXIT_OK


def cmd_abt(args) -> int:
    params = _params(args)
    rep = metrics.abt(params, args.alg, args.method, args.workers, args.flow_budget)
    header = ["n", "k", "servers", "alg", "flows", "max_load", "abt", "method"]
    row = [params.n, params.k, params.num_servers, args.alg, rep.flows, rep.max_load, f"{rep.abt:.2f}", rep.method]
    _emit(args, rep.to_dict(), tables.to_csv(header, [row]))
    return EXIT_OK


def cmd_latency(args) -> int:
    lp = metrics.preset(args.preset, args.lr)
    rep = metrics.latency(lp, args.dbar)
    payload = rep.to_dict()
    payload["preset"] = args.preset
    header = ["preset", "L_r", "dbar", "L_d", "L_hop", "L_total"]
    row = [args.preset, args.lr, args.dbar, f"{rep.transfer_us:.2f}", f"{rep.per_hop_us:.2f}", f"{rep.total_us:.1f}"]
    _emit(args, payload, tables.to_csv(header, [row]))
    return EXIT_OK


def cmd_verify(args) -> int:
    params = _params(args)
    rep = oracle.verify_instance(params, args.all_sources)
    payload = rep.to_dict()
    header = ["n", "k", "sources", "pairs", "eccentricity", "diameter", "passed"]
    row = [params.n, params.k, rep.sources, rep.pairs, rep.eccentricity, diameter(params), rep.passed]
    _emit(args, payload, tables.to_csv(header, [row]))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_cayley(args) -> int:
    params = _params(args)
    rep = symmetry.check_cayley(params)
    payload = rep.to_dict()
    passed = rep.passed
    if args.samples:
        rng = random.Random(args.seed)
        laws = symmetry.check_group_laws(params, args.samples, rng)
        dist = symmetry.check_distance_preservation(params, args.samples, rng)
        payload.update(group_law_failures=laws[:20], distance_failures=dist[:20], samples=args.samples, seed=args.seed)
        passed = passed and not laws and not dist
    payload["passed"] = passed
    header = ["n", "k", "generators", "distinct_generators", "checked_edges", "passed"]
    row = [params.n, params.k, rep.generator_count, rep.distinct_generators, rep.checked_edges, passed]
    _emit(args, payload, tables.to_csv(header, [row]))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_repro(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = {}
    for stem, text in tables.repro_tables(args.workers, args.flow_budget, args.include_orbit).items():
        path = out_dir / f"{stem}.csv"
        path.write_text(text)
        written[stem] = str(path)
    sys.stdout.write(json.dumps({"written": written}, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file supplying defaults for any option")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", help="write output here instead of stdout")

    nk = _Parser(add_help=False)
    nk.add_argument("--n", type=int, help="switch port count (even, >= 2)")
    nk.add_argument("--k", type=int, help="dimension (>= 2)")

    work = _Parser(add_help=False)
    work.add_argument("--workers", type=int, default=metrics.default_workers())
    work.add_argument("--flow-budget", type=int, default=metrics.DEFAULT_FLOW_BUDGET)

    parser = _Parser(prog="dpillar", description="DPillar topology, routing and evaluation toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("topo", parents=[common, nk], help="topology summary")
    p.set_defaults(func=cmd_topo)

    p = sub.add_parser("route", parents=[common, nk], help="route one pair")
    p.add_argument("--src", required=True, help='source server, e.g. "0:0.0.0"')
    p.add_argument("--dst", required=True)
    p.add_argument("--alg", choices=metrics.ALGORITHMS, default="min")
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("survey", parents=[common, nk], help="path lengths from a fixed source")
    p.add_argument("--alg", choices=metrics.ALGORITHMS, default="min")
    p.add_argument("--method", choices=["classes", "enumerate"], default="classes")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("abt", parents=[common, nk, work], help="aggregate bottleneck throughput")
    p.add_argument("--alg", choices=metrics.ALGORITHMS, default="min")
    p.add_argument("--method", choices=["translate", "direct", "orbit"], default="translate")
    p.set_defaults(func=cmd_abt)

    p = sub.add_parser("latency", parents=[common], help="per-hop and end-to-end latency")
    p.add_argument("--preset", choices=sorted(metrics.PRESETS), default="1g-std")
    p.add_argument("--lr", type=float, required=True, help="average routing latency (us)")
    p.add_argument("--dbar", type=float, required=True, help="average path length (hops)")
    p.set_defaults(func=cmd_latency)

    p = sub.add_parser("verify", parents=[common, nk], help="check routing against BFS")
    p.add_argument("--all-sources", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cayley", parents=[common, nk], help="check the Cayley-graph structure")
    p.add_argument("--samples", type=int, default=0, help="also run sampled group-law/distance checks")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_cayley)

    p = sub.add_parser("repro", parents=[common, work], help="regenerate every table as CSV")
    p.add_argument("--out-dir", default="repro_out")
    p.add_argument("--include-orbit", action="store_true", help="fill over-budget ABT rows with the orbit shortcut")
    p.set_defaults(func=cmd_repro)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Load ``--config`` JSON and turn its keys into defaults."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv
    try:
        cfg = json.loads(Path(known.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    cfg = {key.replace("-", "_"): value for key, value in cfg.items()}
    for action in parser._subparsers._group_actions:  # noqa: SLF001
        for subparser in action.choices.values():
            subparser.set_defaults(**cfg)
    return argv


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except (UsageError, DPillarError, ValueError) as exc:
        code = getattr(exc, "code", "usage_error")
        sys.stderr.write(json.dumps({"error": code, "message": str(exc)}) + "\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
