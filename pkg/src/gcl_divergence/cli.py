"""Command-line interface: ``gcl-divergence <command> ...``.

Exit codes: 0 success, 2 input error, 3 infeasible degree sequence,
4 weight fit did not converge.

Every random choice is derived from the single ``--seed`` through
``numpy.random.SeedSequence([seed, stream])``; the stream numbers are the
``STREAM_*`` constants below, so changing one subsystem never shifts the
random numbers of another.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import clustering, divergence, embedding, gcl, graph, synth
from .errors import ConvergenceError, InfeasibleDegreeError, InputError

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_NOCONVERGE = 0, 2, 3, 4

STREAM_CLUSTERING = 1
STREAM_SAMPLING = 2
STREAM_SYNTH_GRAPH = 3
STREAM_SYNTH_EMBEDDING = 4

logger = logging.getLogger("gcl_divergence")


def derive_seed(seed: int, stream: int) -> int:
    return int(np.random.SeedSequence([seed, stream]).generate_state(1, dtype=np.uint32)[0])


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------------------
# argument handling


def _add_inputs(p, embeddings="many"):
    p.add_argument("--graph", required=True, help="edge-list file")
    if embeddings == "many":
        p.add_argument("--embedding", action="append", required=True,
                       help="embedding file (repeatable)")
    elif embeddings == "one":
        p.add_argument("--embedding", required=True, help="embedding file")
    p.add_argument("--directed", action="store_true", help="input edges are directed arcs")
    p.add_argument("--lcc", action="store_true", help="keep only the largest connected component")


def _add_clustering(p):
    p.add_argument("--clustering", choices=["ecg", "louvain", "file"], default="ecg")
    p.add_argument("--partition", help="partition file (label cluster_id), for --clustering file")
    p.add_argument("--ensemble-size", type=int, default=clustering.ENSEMBLE_SIZE)


def _add_fit(p, grid=True):
    if grid:
        p.add_argument("--alpha-min", type=float, default=0.0)
        p.add_argument("--alpha-max", type=float, default=10.0)
        p.add_argument("--alpha-step", type=float, default=0.25)
        p.add_argument("--internal-weight", type=float, default=0.5)
    p.add_argument("--eps", type=float, default=gcl.EPS)
    p.add_argument("--delta", type=float, default=gcl.DELTA)
    p.add_argument("--max-iter", type=int, default=gcl.MAX_ITER)


def _add_common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gcl-divergence",
                                     description="Score graph embeddings with the Geometric Chung-Lu model.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="divergence score of each embedding")
    _add_inputs(p)
    _add_clustering(p)
    _add_fit(p)
    _add_common(p)

    p = sub.add_parser("rank", help="rank embeddings by divergence score")
    _add_inputs(p)
    _add_clustering(p)
    _add_fit(p)
    _add_common(p)
    p.add_argument("--compare", choices=["ecg", "louvain", "file"],
                   help="also rank under this clustering and print Kendall tau")
    p.add_argument("--compare-partition", help="partition file for --compare file")

    p = sub.add_parser("cluster", help="write a partition file")
    _add_inputs(p, embeddings=None)
    p.add_argument("--clustering", choices=["ecg", "louvain"], default="ecg")
    p.add_argument("--ensemble-size", type=int, default=clustering.ENSEMBLE_SIZE)
    _add_common(p)

    p = sub.add_parser("fit", help="fit GCL weights at one alpha and write the model")
    _add_inputs(p, embeddings="one")
    p.add_argument("--alpha", type=float, required=True)
    _add_fit(p, grid=False)
    _add_common(p)

    p = sub.add_parser("generate", help="sample a graph from the fitted GCL model")
    _add_inputs(p, embeddings="one")
    _add_clustering(p)
    p.add_argument("--alpha", default="best", help="a number, or 'best' to search the grid first")
    _add_fit(p)
    _add_common(p)

    p = sub.add_parser("synth", help="write a planted-partition instance")
    p.add_argument("--n", type=int, default=60)
    p.add_argument("--l", dest="clusters", type=int, default=3)
    p.add_argument("--p-in", type=float, default=0.3)
    p.add_argument("--p-out", type=float, default=0.03)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--separation", type=float, default=10.0)
    p.add_argument("--spread", type=float, default=1.0)
    p.add_argument("--random-embedding", action="store_true",
                   help="write a uniform random embedding instead of a structured one")
    _add_common(p)
    return parser


def _load_graph(args) -> graph.Graph:
    try:
        g = graph.read_edge_list(args.graph, directed_hint=args.directed)
    except OSError as exc:
        raise InputError(f"cannot read graph {args.graph}: {exc.strerror}") from None
    if args.lcc:
        g = graph.largest_connected_component(g)
    return g


def _load_embeddings(paths, g):
    out = []
    seen: dict[str, int] = {}
    for path in paths:
        stem = Path(path).stem
        seen[stem] = seen.get(stem, 0) + 1
        name = stem if seen[stem] == 1 else f"{stem}-{seen[stem]}"
        try:
            out.append(embedding.read_embedding(path, g, name=name))
        except OSError as exc:
            raise InputError(f"cannot read embedding {path}: {exc.strerror}") from None
    return out


def _partition(args, g, method=None, path=None):
    method = method or args.clustering
    if method == "file":
        path = path or args.partition
        if not path:
            raise InputError("--clustering file needs a partition file")
        try:
            return clustering.read_partition(path, g)
        except OSError as exc:
            raise InputError(f"cannot read partition {path}: {exc.strerror}") from None
    seed = derive_seed(args.seed, STREAM_CLUSTERING)
    if method == "louvain":
        return clustering.louvain(g, seed)
    return clustering.ecg(g, args.ensemble_size, seed)


def _grid(args):
    try:
        return divergence.alpha_grid(args.alpha_min, args.alpha_max, args.alpha_step)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _params(args):
    try:
        return divergence.ScoreParams(eps=args.eps, delta=args.delta, max_iter=args.max_iter,
                                      internal_weight=getattr(args, "internal_weight", 0.5))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _curve_csv(report) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["alpha", "delta", "jsd_internal", "jsd_external", "fit_iters"])
    for pt in report.curve:
        out.writerow([pt.alpha, repr(pt.delta), repr(pt.jsd_internal), repr(pt.jsd_external),
                      pt.fit_iters])
    return buf.getvalue()


def _write_report(out_dir: Path, report) -> None:
    _write_atomic(out_dir / f"{report.embedding}.score.json", _json(report.to_json()))
    _write_atomic(out_dir / f"{report.embedding}.curve.csv", _curve_csv(report))


# ---------------------------------------------------------------------------
# commands


def cmd_score(args) -> int:
    g = _load_graph(args)
    es = _load_embeddings(args.embedding, g)
    p = _partition(args, g)
    grid, params = _grid(args), _params(args)
    out_dir = Path(args.out_dir)
    observed = divergence.observed_block_proportions(g, p)
    for e in es:
        report = divergence.divergence_score(g, p, e, grid, params, observed=observed)
        _write_report(out_dir, report)
        print(f"{report.embedding}\tbest_alpha={report.best_alpha:g}\tdivergence={report.best_divergence:.6f}")
    return EXIT_OK


def _rank(args, g, es, p, grid, params):
    failures: dict = {}
    ranking = divergence.rank_embeddings(g, p, es, grid, params, workers=args.workers,
                                         failures=failures)
    for name, exc in failures.items():
        print(f"warning: {name} not ranked: {exc}", file=sys.stderr)
    return ranking


def cmd_rank(args) -> int:
    g = _load_graph(args)
    es = _load_embeddings(args.embedding, g)
    grid, params = _grid(args), _params(args)
    out_dir = Path(args.out_dir)

    ranking = _rank(args, g, es, _partition(args, g), grid, params)
    for _, report in ranking:
        _write_report(out_dir, report)
    _write_atomic(out_dir / "ranking.csv", divergence.ranking_csv(ranking))
    sys.stdout.write(divergence.ranking_csv(ranking))

    if args.compare:
        p2 = _partition(args, g, args.compare, args.compare_partition)
        other = _rank(args, g, es, p2, grid, params)
        _write_atomic(out_dir / f"ranking-{args.compare}.csv", divergence.ranking_csv(other))
        a = [name for name, _ in ranking]
        b = [name for name, _ in other]
        common = [x for x in a if x in set(b)]
        if len(common) >= 2:
            tau = divergence.kendall_tau(common, [x for x in b if x in set(common)])
            print(f"kendall_tau({args.clustering},{args.compare})={tau:.4f}")
    return EXIT_OK


def cmd_cluster(args) -> int:
    g = _load_graph(args)
    p = _partition(args, g)
    out = Path(args.out_dir) / "partition.txt"
    _write_atomic(out, clustering.format_partition(p, g))
    print(f"{p.cluster_count} clusters, modularity {clustering.modularity(g, p):.4f} -> {out}")
    return EXIT_OK


def cmd_fit(args) -> int:
    g = _load_graph(args)
    (e,) = _load_embeddings([args.embedding], g)
    model, report = gcl.fit_weights(graph.degree_sequence(g), e, args.alpha, eps=args.eps,
                                    delta=args.delta, max_iter=args.max_iter)
    data = model.to_json()
    data["labels"] = list(g.labels)
    data["iterations"] = report.iterations
    out = Path(args.out_dir) / f"{e.name}.model.json"
    _write_atomic(out, _json(data))
    print(f"converged in {report.iterations} iterations, residual {report.final_residual:.2e} -> {out}")
    return EXIT_OK


def cmd_generate(args) -> int:
    g = _load_graph(args)
    (e,) = _load_embeddings([args.embedding], g)
    params = _params(args)
    if args.alpha == "best":
        p = _partition(args, g)
        alpha = divergence.divergence_score(g, p, e, _grid(args), params).best_alpha
    else:
        try:
            alpha = float(args.alpha)
        except ValueError:
            raise InputError(f"--alpha must be a number or 'best', got {args.alpha!r}") from None
    model, _ = gcl.fit_weights(graph.degree_sequence(g), e, alpha, eps=params.eps,
                               delta=params.delta, max_iter=params.max_iter)
    sample_seed = derive_seed(args.seed, STREAM_SAMPLING)
    h = gcl.sample_graph(model, sample_seed, labels=g.labels)
    out_dir = Path(args.out_dir)
    stem = f"{e.name}.alpha{alpha:g}.seed{args.seed}"
    _write_atomic(out_dir / f"{stem}.edges", h.to_edge_list())
    _write_atomic(out_dir / f"{stem}.json", _json({
        "graph": args.graph, "embedding": args.embedding, "alpha": alpha,
        "seed": args.seed, "sample_seed": sample_seed, "edges": h.edge_count,
    }))
    print(f"alpha={alpha:g}: sampled {h.edge_count} edges -> {out_dir / (stem + '.edges')}")
    return EXIT_OK


def cmd_synth(args) -> int:
    spec = synth.PlantedSpec(args.n, args.clusters, args.p_in, args.p_out,
                             derive_seed(args.seed, STREAM_SYNTH_GRAPH))
    g, truth = synth.planted_partition(spec)
    emb_seed = derive_seed(args.seed, STREAM_SYNTH_EMBEDDING)
    if args.random_embedding:
        e = synth.random_embedding(g.n, args.dim, emb_seed)
    else:
        e = synth.structured_embedding(truth, args.dim, args.separation, args.spread, emb_seed)
    out_dir = Path(args.out_dir)
    _write_atomic(out_dir / "graph.edges", g.to_edge_list())
    _write_atomic(out_dir / "partition.txt", clustering.format_partition(truth, g))
    _write_atomic(out_dir / "embedding.emb", embedding.format_embedding(e, g))
    print(f"n={g.n} m={g.edge_count} clusters={truth.cluster_count} -> {out_dir}")
    return EXIT_OK


COMMANDS = {
    "score": cmd_score, "rank": cmd_rank, "cluster": cmd_cluster,
    "fit": cmd_fit, "generate": cmd_generate, "synth": cmd_synth,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except InfeasibleDegreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOCONVERGE
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
