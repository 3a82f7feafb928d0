"""Command-line interface.

Exit status: 0 success, 1 usage error, 2 data error, 3 clique cap exceeded.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from threadpoolctl import threadpool_limits

from . import io as hio
from .classifier import ModelFormatError, load_model, save_model
from .core import (DEFAULT_CLIQUE_CAP, CliqueLimitError, Graph, Hypergraph,
                   enumerate_maximal_cliques, partition_reconstruction_errors, project,
                   projection_error_profile)
from .multiplicity import (multiplicity_reconstruct, ndp_project, project_with_multiplicity)
from .pipeline import (ReconstructionConfig, Reconstructor, jaccard_score,
                       maximal_clique_baseline)
from .rho import estimate_rho, load_rho, rho_distance, rho_to_csv
from .sampler import SamplerPlan, trace_to_csv, tune_beta

log = logging.getLogger("hyperec")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _load_query(path: str, as_graph: bool) -> tuple[Graph, Hypergraph | None]:
    if as_graph:
        return hio.parse_graph(path), None
    h = hio.parse_hypergraph(path)
    return project(h), h


def _config(args) -> ReconstructionConfig:
    return ReconstructionConfig(beta=args.beta, features=args.features, ndp_features=args.ndp_features,
                                threshold=args.threshold, epochs=args.epochs, learning_rate=args.lr,
                                seed=args.seed, clique_cap=args.clique_cap)


def cmd_project(args):
    _emit(hio.format_graph(project(hio.parse_hypergraph(args.input))), args.out)


def cmd_cliques(args):
    g = hio.parse_graph(args.input) if args.graph else project(hio.parse_hypergraph(args.input))
    m = enumerate_maximal_cliques(g, args.clique_cap)
    _emit(hio.format_hypergraph(Hypergraph(g.nodes, m.cliques)), args.out)


def cmd_analyze(args):
    h = hio.parse_hypergraph(args.input)
    p = projection_error_profile(h, cap=args.clique_cap)
    text = (f"|V| {len(h.nodes)}\n|E| {h.m}\n|E'| {p.n_non_nested}\n|M| {p.n_max_cliques}\n"
            f"Error I {100 * p.error_i:.1f}%\nError II {100 * p.error_ii:.1f}%\n")
    _emit(text, args.out)


def cmd_rho(args):
    if args.action in ("estimate", "export"):
        if len(args.inputs) != 1:
            raise UsageError(f"rho {args.action} takes one hypergraph file")
        if args.action == "export" and not args.out:
            raise UsageError("rho export needs --out")
        h = hio.parse_hypergraph(args.inputs[0])
        t = estimate_rho(h, enumerate_maximal_cliques(project(h), args.clique_cap))
        _emit(rho_to_csv(t), args.out)
    else:
        if len(args.inputs) != 2:
            raise UsageError("rho distance takes two inputs")
        tables = []
        for p in args.inputs:
            if p.endswith(".csv"):
                tables.append(load_rho(p))
            else:
                h = hio.parse_hypergraph(p)
                tables.append(estimate_rho(h, enumerate_maximal_cliques(project(h), args.clique_cap)))
        _emit(f"{rho_distance(*tables):.10f}\n", args.out)


def cmd_split(args):
    h = hio.parse_hypergraph(args.input)
    cutoff = hio.parse_cutoff(args.cutoff) if args.cutoff is not None else None
    spec = hio.SplitSpec(args.mode, args.seed, cutoff, not args.no_reindex)
    train, query = hio.split_dataset(h, spec)
    prefix = args.out or Path(args.input).with_suffix("").as_posix()
    hio.write_hypergraph(train, f"{prefix}.train.txt")
    hio.write_hypergraph(query, f"{prefix}.query.txt")
    print(f"train {train.m} hyperedges -> {prefix}.train.txt")
    print(f"query {query.m} hyperedges -> {prefix}.query.txt")


def cmd_tune_beta(args):
    h = hio.parse_hypergraph(args.input)
    t = estimate_rho(h, enumerate_maximal_cliques(project(h), args.clique_cap))
    lines = ["beta,recall,precision,in_range"]
    for p in tune_beta(t, (args.recall_min, args.recall_max)):
        lines.append(f"{p.beta},{p.recall:.6f},{p.precision:.6f},{int(p.in_range)}")
    _emit("\n".join(lines) + "\n", args.out)


def cmd_train(args):
    h = hio.parse_hypergraph(args.input)
    rec = Reconstructor(_config(args)).fit(h)
    out = Path(args.out or "model.txt")
    save_model(rec.model_, out)
    rec.plan_.save(out.with_suffix(".plan.csv"))
    if args.trace:
        Path(args.trace).write_text(trace_to_csv(rec.trace_), encoding="utf-8")
    print(f"model -> {out}\nplan -> {out.with_suffix('.plan.csv')}")


def cmd_reconstruct(args):
    t0 = time.perf_counter()
    g, truth = _load_query(args.query, args.graph)
    if args.truth:
        truth = hio.parse_hypergraph(args.truth)
    if args.model:
        if args.train:
            raise UsageError("give either a training hypergraph or --model, not both")
        plan = SamplerPlan.load(args.plan or Path(args.model).with_suffix(".plan.csv"))
        rec = Reconstructor.from_model(load_model(args.model), plan, _config(args))
    elif args.train:
        rec = Reconstructor(_config(args)).fit(hio.parse_hypergraph(args.train))
    else:
        raise UsageError("reconstruct needs a training hypergraph or --model")
    degrees = None
    if args.ndp_features:
        if args.degrees:
            degrees = {int(a): float(b) for a, b in
                       (ln.split() for ln in Path(args.degrees).read_text().splitlines() if ln.strip())}
        elif truth is not None:
            wg, _ = ndp_project(truth)
            degrees = {v: float(d) for v, d in wg.weighted_degree().items()}
        else:
            raise UsageError("--ndp-features needs --degrees or a hypergraph query")
    result = rec.reconstruct(g, truth, degrees)
    if args.out:
        hio.write_hypergraph(result.hyperedges, args.out)
    else:
        sys.stdout.write(hio.format_hypergraph(result.hyperedges))
    if result.jaccard is not None:
        print(f"jaccard {result.jaccard:.6f}", file=sys.stderr)
    if args.manifest:
        man = result.manifest()
        man["time_total"] = f"{time.perf_counter() - t0:.3f}"
        if args.no_timings:
            man = {k: v for k, v in man.items() if not k.startswith("time_")}
        hio.write_manifest(man, args.manifest)


def cmd_evaluate(args):
    truth = hio.parse_hypergraph(args.truth)
    recon = hio.parse_hypergraph(args.recon)
    m = enumerate_maximal_cliques(project(truth), args.clique_cap)
    e1, e2, other = partition_reconstruction_errors(recon, truth, m)
    _emit(f"jaccard {jaccard_score(truth, recon):.6f}\nerrorI {e1}\nerrorII {e2}\nother {other}\n",
          args.out)


def cmd_baseline(args):
    if args.method == "maxclique":
        g, truth = _load_query(args.input, args.graph)
        recon = maximal_clique_baseline(g, args.clique_cap)
    else:
        if args.graph:
            wg, truth = hio.parse_weighted_graph(args.input), None
        else:
            truth = hio.parse_hypergraph(args.input)
            wg = project_with_multiplicity(truth)
        recon = multiplicity_reconstruct(wg, (args.size_coef, args.mult_coef), cap=args.clique_cap)
    if args.truth:
        truth = hio.parse_hypergraph(args.truth)
    if args.out:
        hio.write_hypergraph(recon, args.out)
    if truth is not None:
        print(f"jaccard {jaccard_score(truth, recon):.6f}")
    if not args.out:
        sys.stdout.write(hio.format_hypergraph(recon))


def cmd_ndp_project(args):
    h = hio.parse_hypergraph(args.input)
    wg, deg = ndp_project(h)
    _emit(hio.format_weighted_graph(wg), args.out)
    if args.degrees_out:
        Path(args.degrees_out).write_text("".join(f"{v} {deg[v]}\n" for v in sorted(deg)), encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--clique-cap", type=int, default=DEFAULT_CLIQUE_CAP)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--beta", type=int, default=1000)
    model.add_argument("--features", choices=("count", "motif"), default="count")
    model.add_argument("--ndp-features", action="store_true")
    model.add_argument("--threshold", type=float, default=0.5)
    model.add_argument("--epochs", type=int, default=2000)
    model.add_argument("--lr", type=float, default=1e-4)

    p = _Parser(prog="hyperec", description="Reconstruct hypergraphs from their clique-expansion projections.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("project", parents=[common], help="clique-expand a hypergraph")
    s.add_argument("input")
    s.set_defaults(func=cmd_project)

    s = sub.add_parser("cliques", parents=[common], help="maximal cliques of a projection")
    s.add_argument("input")
    s.add_argument("--graph", action="store_true", help="input is a graph edge list")
    s.set_defaults(func=cmd_cliques)

    s = sub.add_parser("analyze", parents=[common], help="Error I / II profile of a hypergraph")
    s.add_argument("input")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("rho", parents=[common], help="estimate or compare rho(n,k) tables")
    s.add_argument("action", choices=("estimate", "export", "distance"))
    s.add_argument("inputs", nargs="+")
    s.set_defaults(func=cmd_rho)

    s = sub.add_parser("split", parents=[common], help="train/query split")
    s.add_argument("input")
    s.add_argument("--mode", choices=("random", "timestamp"), default="random")
    s.add_argument("--cutoff", help="epoch seconds or ISO datetime (UTC)")
    s.add_argument("--no-reindex", action="store_true")
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("tune-beta", parents=[common], help="expected recall/precision over beta")
    s.add_argument("input")
    s.add_argument("--recall-min", type=float, default=0.6)
    s.add_argument("--recall-max", type=float, default=0.95)
    s.set_defaults(func=cmd_tune_beta)

    s = sub.add_parser("train", parents=[common, model], help="fit sampler and classifier")
    s.add_argument("input")
    s.add_argument("--trace", help="write the greedy trace CSV here")
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("reconstruct", parents=[common, model], help="reconstruct a query projection")
    s.add_argument("train", nargs="?", help="training hypergraph")
    s.add_argument("query", help="query hypergraph (projected) or graph with --graph")
    s.add_argument("--graph", action="store_true")
    s.add_argument("--truth")
    s.add_argument("--model")
    s.add_argument("--plan")
    s.add_argument("--degrees", help="'node degree' lines for --ndp-features")
    s.add_argument("--manifest")
    s.add_argument("--no-timings", action="store_true", help="omit timings from the manifest")
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("evaluate", parents=[common], help="Jaccard and partitioned errors")
    s.add_argument("truth")
    s.add_argument("recon")
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("baseline", parents=[common], help="unsupervised baselines")
    s.add_argument("method", choices=("maxclique", "multiplicity"))
    s.add_argument("input")
    s.add_argument("--graph", action="store_true", help="input is a (weighted) graph file")
    s.add_argument("--truth")
    s.add_argument("--size-coef", type=float, default=1.0)
    s.add_argument("--mult-coef", type=float, default=1.0)
    s.set_defaults(func=cmd_baseline)

    s = sub.add_parser("ndp-project", parents=[common], help="node-degree-preserving projection")
    s.add_argument("input")
    s.add_argument("--degrees-out")
    s.set_defaults(func=cmd_ndp_project)
    return p


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    threads = os.environ.get("HYPEREC_THREADS")
    try:
        limit = int(threads) if threads else None
    except ValueError:
        print(f"hyperec: HYPEREC_THREADS must be an integer, got {threads!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        with threadpool_limits(limits=limit):
            args.func(args)
    except UsageError as exc:
        print(f"hyperec: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CliqueLimitError as exc:
        print(f"hyperec: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (hio.DataFormatError, ModelFormatError, ValueError, KeyError, OSError) as exc:
        print(f"hyperec: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
