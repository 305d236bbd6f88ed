"""Command-line interface: ``netcompare <command> [options]``.

Commands write UTF-8 CSV and JSON.  Options may also come from a JSON file
given with ``--config``; its keys are option names (``walk_length`` or
``walk-length``) and explicit flags override them.

Exit status is 0 on success, 2 for bad input (unreadable files, malformed
edge lists, invalid parameters) and 3 when a computation fails
numerically.
"""

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import replace

from .dissimilarity import MEASURES, MeasureParams, dissimilarity
from .embedding import SkipGramConfig, WalkConfig
from .errors import InputError, NumericError
from .experiments import (
    ba_grid,
    correlation_report,
    dump_json,
    four_models,
    graph_record,
    nullmodel_curves,
    pairwise_records,
    perturb_curve,
    sweep,
    ws_grid,
)
from .generators import GeneratorSpec, generate
from .graph import load_graph, save_graph

log = logging.getLogger("netcompare")

EXIT_INPUT = 2
EXIT_NUMERIC = 3

EDGE_LIST_EXTENSIONS = (".txt", ".edges", ".edgelist", ".tsv", ".csv")


def _split(values, kind):
    """Flatten ``['0.1,0.2', '0.3']`` style grids into numbers."""
    out = []
    for v in values:
        out.extend(kind(x) for x in v.replace(",", " ").split())
    return out


def _common_parser():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    g.add_argument("--realizations", type=int, default=10,
                   help="embedding realizations / graph draws to average (default 10)")
    g.add_argument("--deterministic", action=argparse.BooleanOptionalAction, default=True,
                   help="single-threaded reproducible SkipGram training (default on)")
    g.add_argument("--out-dir", default=".", help="directory for output files")
    g.add_argument("--config", help="JSON file of option defaults")
    g.add_argument("-v", "--verbose", action="store_true")

    m = p.add_argument_group("measure options")
    m.add_argument("--measure", choices=MEASURES, default="dne")
    m.add_argument("--omega", type=float, default=1.0)
    m.add_argument("--lambda", dest="lam", type=float, default=0.5)
    m.add_argument("--bins", type=int, default=10)
    m.add_argument("--dim", type=int, default=128)
    m.add_argument("--walks", type=int, default=10, help="walks per node")
    m.add_argument("--walk-length", type=int, default=60)
    m.add_argument("--window", type=int, default=8)
    m.add_argument("--negatives", type=int, default=5)
    m.add_argument("--epochs", type=int, default=5)
    m.add_argument("--alpha-frac", type=float, default=0.95)
    m.add_argument("--w1", type=float, default=0.45)
    m.add_argument("--w2", type=float, default=0.45)
    m.add_argument("--w3", type=float, default=0.1)
    return p


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="netcompare", description=__doc__.splitlines()[0],
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="write a synthetic graph")
    p.add_argument("--model", type=str.upper, choices=("KREGULAR", "WS", "BA"), required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--m", type=int, default=5)
    p.add_argument("--out", required=True, help="edge-list path; generator settings go to <out>.json")

    p = sub.add_parser("compare", parents=[common], help="dissimilarity of two graphs")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--out", help="also write the JSON result here")

    p = sub.add_parser("sweep", parents=[common], help="pairwise heatmap over a model grid")
    p.add_argument("--model", type=str.upper, choices=("WS", "BA", "FOUR"), required=True,
                   help="WS p-grid, BA m-grid, or FOUR (K-regular, WSL, WSH, BA)")
    p.add_argument("--grid", nargs="+", help="grid values, e.g. 0.1 0.2 0.3 (p) or 1,2,3 (m)")
    p.add_argument("--N", type=int, default=500)
    p.add_argument("--k", type=int, default=10)

    p = sub.add_parser("nullmodels", parents=[common], help="D_M against dk null models")
    p.add_argument("file")
    p.add_argument("--dk", type=float, action="append", choices=(1.0, 2.0, 2.5),
                   help="order to include; repeat for several (default all)")
    p.add_argument("--lambdas", nargs="+", default=["0,0.25,0.5,0.75,1"])
    p.add_argument("--swaps", type=int, help="swap budget (default 10 x edges)")
    p.add_argument("--anneal-steps", type=int, help="dk2.5 annealing steps (default 50 x edges)")
    p.add_argument("--save-graphs", action=argparse.BooleanOptionalAction, default=True,
                   help="write each randomized graph as an edge list")

    p = sub.add_parser("perturb", parents=[common], help="dissimilarity under edge perturbation")
    p.add_argument("file")
    p.add_argument("--fs", nargs="+", default=["-0.5,-0.4,-0.3,-0.2,-0.1,0.1,0.2,0.3,0.4,0.5"],
                   help="perturbation fractions; negative deletes edges, positive adds")

    p = sub.add_parser("stats", parents=[common], help="structural statistics of a graph")
    p.add_argument("file")
    p.add_argument("--out", help="also write the JSON here")

    p = sub.add_parser("correlate", parents=[common],
                       help="correlate D_NE with D_SP and statistic differences")
    p.add_argument("source", nargs="?",
                   help="directory of edge lists (pairs and stats are computed)")
    p.add_argument("--pairs", help="CSV with columns a,b,dne,dsp")
    p.add_argument("--stats", help="JSON mapping graph name to statistics")
    p.add_argument("--out", help="also write the JSON report here")
    parser.commands = sub.choices
    return parser


def _config_defaults(path):
    """Read ``--config`` and return defaults keyed by argparse destinations."""
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise InputError("config must be a JSON object")
    out = {}
    for key, value in cfg.items():
        dest = key.lstrip("-").replace("-", "_")
        if dest == "lambda":
            dest = "lam"
        out[dest] = value
    return out


def _measure_params(args):
    walk = WalkConfig(walks_per_node=args.walks, walk_length=args.walk_length)
    sg = SkipGramConfig(dimension=args.dim, window=args.window, negatives=args.negatives,
                        epochs=args.epochs, deterministic=args.deterministic)
    return MeasureParams(args.measure, omega=args.omega, lam=args.lam, bins=args.bins,
                         w1=args.w1, w2=args.w2, w3=args.w3, alpha_frac=args.alpha_frac,
                         walk=walk, skipgram=sg)


def _write(path, text):
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    log.info("wrote %s", path)


def _out(args, name):
    return os.path.join(args.out_dir, name)


def cmd_generate(args):
    spec = GeneratorSpec(args.model, args.N, k=args.k, p=args.p, m=args.m, seed=args.seed)
    g = generate(spec)
    parent = os.path.dirname(args.out)
    if parent:
        os.makedirs(parent, exist_ok=True)
    save_graph(g, args.out)
    _write(args.out + ".json", spec.to_json() + "\n")
    print(f"{args.out}: N={g.n} edges={g.m}")


def cmd_compare(args):
    g1, g2 = load_graph(args.first), load_graph(args.second)
    result = dissimilarity(g1, g2, _measure_params(args), args.realizations, args.seed)
    text = result.to_json(indent=2)
    print(text)
    if args.out:
        _write(args.out, text + "\n")


def cmd_sweep(args):
    params = _measure_params(args)
    if args.model == "WS":
        grid = _split(args.grid, float) if args.grid else [round(0.1 * i, 1) for i in range(1, 11)]
        factories = ws_grid(grid, args.N, args.k)
    elif args.model == "BA":
        grid = _split(args.grid, int) if args.grid else list(range(1, 11))
        factories = ba_grid(grid, args.N)
    else:
        factories = four_models(args.N, args.k)
    res = sweep(factories, params, args.realizations, args.seed)
    stem = f"sweep_{args.model.lower()}_{params.measure}"
    _write(_out(args, stem + "_mean.csv"), res.matrix_csv("mean"))
    _write(_out(args, stem + "_std.csv"), res.matrix_csv("std"))
    _write(_out(args, stem + ".json"), dump_json(res.to_dict()) + "\n")
    print(res.matrix_csv("mean"), end="")


def cmd_nullmodels(args):
    g = load_graph(args.file)
    orders = args.dk or [1.0, 2.0, 2.5]
    params = replace(_measure_params(args), measure="dm")

    def save(order, r, h, report):
        os.makedirs(args.out_dir, exist_ok=True)
        save_graph(h, _out(args, f"dk{order:.1f}_r{r}.txt"))

    curves, _ = nullmodel_curves(g, params, _split(args.lambdas, float), orders, args.realizations, args.seed,
                                 args.swaps, args.anneal_steps,
                                 sink=save if args.save_graphs else None)
    _write(_out(args, "nullmodels.csv"), curves.to_csv())
    reports = {}
    for order, reps in curves.meta["reports"].items():
        reports[f"{order:.1f}"] = [
            {"order": rep["order"], "swaps_accepted": rep["swaps_accepted"],
             "spectrum_distance": rep["spectrum_distance"]} for rep in reps]
    meta = dict(curves.to_dict())
    meta["meta"] = {k: v for k, v in curves.meta.items() if k != "reports"}
    meta["reports"] = reports
    _write(_out(args, "nullmodels.json"), dump_json(meta) + "\n")
    print(curves.to_csv(), end="")


def cmd_perturb(args):
    g = load_graph(args.file)
    curve, _ = perturb_curve(g, _split(args.fs, float), _measure_params(args), args.realizations, args.seed)
    _write(_out(args, "perturb.csv"), curve.to_csv())
    _write(_out(args, "perturb.json"), dump_json(curve.to_dict()) + "\n")
    print(curve.to_csv(), end="")


def cmd_stats(args):
    rec = graph_record(load_graph(args.file), seed=args.seed)
    text = dump_json(rec)
    print(text)
    if args.out:
        _write(args.out, text + "\n")


def _edge_list_files(directory):
    names = sorted(f for f in os.listdir(directory)
                   if f.lower().endswith(EDGE_LIST_EXTENSIONS)
                   and os.path.isfile(os.path.join(directory, f)))
    return {os.path.splitext(f)[0]: os.path.join(directory, f) for f in names}


def _read_pairs(path):
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    try:
        return [{"a": r["a"], "b": r["b"], "dne": float(r["dne"]), "dsp": float(r["dsp"])}
                for r in rows]
    except (KeyError, ValueError) as exc:
        raise InputError(f"{path}: expected columns a,b,dne,dsp ({exc})") from None


def _pairs_csv(pairs):
    lines = ["a,b,dne,dsp"]
    for p in pairs:
        lines.append(f"{p['a']},{p['b']},{p['dne']!r},{p['dsp']!r}")
    return "\n".join(lines) + "\n"


def cmd_correlate(args):
    if args.source:
        if not os.path.isdir(args.source):
            raise InputError(f"{args.source} is not a directory")
        files = _edge_list_files(args.source)
        graphs = {name: load_graph(path) for name, path in files.items()}
        params = replace(_measure_params(args), measure="dne")
        pairs = pairwise_records(graphs, args.realizations, args.seed, params)
        stats = {name: graph_record(g, seed=args.seed) for name, g in graphs.items()}
        _write(_out(args, "pairs.csv"), _pairs_csv(pairs))
        _write(_out(args, "stats.json"), dump_json(stats) + "\n")
    elif args.pairs and args.stats:
        pairs = _read_pairs(args.pairs)
        try:
            with open(args.stats, encoding="utf-8") as fh:
                stats = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.stats}: {exc}") from None
        missing = {p[k] for p in pairs for k in ("a", "b")} - set(stats)
        if missing:
            raise InputError(f"no statistics for {sorted(missing)}")
    else:
        raise InputError("give a directory of edge lists, or both --pairs and --stats")
    text = dump_json(correlation_report(pairs, stats))
    print(text)
    if args.out:
        _write(args.out, text + "\n")


COMMANDS = {
    "generate": cmd_generate,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "nullmodels": cmd_nullmodels,
    "perturb": cmd_perturb,
    "stats": cmd_stats,
    "correlate": cmd_correlate,
}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            defaults = _config_defaults(args.config)
            sub = parser.commands[args.command]
            known = {a.dest for a in sub._actions}
            unknown = set(defaults) - known
            if unknown:
                raise InputError(f"unknown config keys: {sorted(unknown)}")
            sub.set_defaults(**defaults)
            args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        COMMANDS[args.command](args)
    except (InputError, OSError) as exc:
        print(f"netcompare: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"netcompare: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
