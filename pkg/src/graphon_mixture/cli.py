"""Command-line entry point: ``graphon-mixture <subcommand> ...``.

Exit status is 0 on success, 2 on usage errors and 1 on runtime errors.
Stochastic subcommands require ``--seed``; identical flags give identical
output files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import augment, bounds, contrastive, experiments, mixture
from .graphon import StepGraphon
from .graphs import LabeledDataset, parse_tu_dataset, read_edge_list, write_edge_list
from .motifs import format_float, moment_matrix, moments_to_csv, motif_family


def _family(size: int):
    if size == 9:
        return motif_family(4)
    if size == 30:
        return motif_family(5)
    raise ValueError("--family must be 9 or 30")


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _add_input(p: argparse.ArgumentParser, labeled: bool = False) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    if not labeled:
        src.add_argument("--in", dest="edges", nargs="+", metavar="EDGES",
                         help="edge-list file(s), one graph each")
    src.add_argument("--tu", nargs=2, metavar=("DIR", "NAME"),
                     help="TU raw-format dataset directory and name")


def _load(args) -> LabeledDataset:
    if getattr(args, "tu", None):
        return parse_tu_dataset(args.tu[0], args.tu[1])
    graphs = [read_edge_list(p) for p in args.edges]
    return LabeledDataset(tuple(graphs))


def cmd_moments(args) -> None:
    data = _load(args)
    family = _family(args.family)
    _write(args.out, moments_to_csv(moment_matrix(data.graphs, family), family))


def cmd_cluster(args) -> None:
    data = _load(args)
    V = moment_matrix(data.graphs, motif_family(4))
    k = args.K or mixture.default_cluster_count(len(data))
    res = mixture.kmeans(V, k, seed=args.seed, n_init=args.n_init)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["graph_index", "cluster"])
    w.writerows(enumerate(res.assignment.tolist()))
    _write(args.out, buf.getvalue())


def cmd_estimate(args) -> None:
    data = _load(args)
    model = mixture.phi(data.graphs, n_clusters=args.K, refinement_size=args.L,
                        resolution=args.resolution, seed=args.seed)
    model.save(args.out)


def cmd_mixup(args) -> None:
    data = _load(args)
    samples = augment.gmam(
        data, ratio=args.ratio, target_n=args.target_n, refinement_size=args.L,
        resolution=args.resolution, seed=args.seed,
        weight_range=(args.lambda_min, args.lambda_max), fixed_weight=args.fixed_lambda,
    )
    augment.write_augmented(samples, args.out)


def cmd_augment(args) -> None:
    g = read_edge_list(args.edges)
    if args.model:
        model = mixture.MixtureModel.load(args.model)
        w = model.graphon_for(args.graph_index)
        latents = model.latents[args.graph_index]
    else:
        w = StepGraphon.load(args.graphon)
        latents = mixture.degree_latents(g)
    out = augment.graphon_augment(g, w, latents, args.rate, seed=args.seed)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_edge_list(out, args.out)


def cmd_infonce(args) -> None:
    batch = contrastive.read_embedding_csv(args.edges, tau=args.tau)
    loss = contrastive.model_aware_infonce(batch)
    lb = contrastive.infonce_lower_bound(batch)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["anchor", "cluster", "skipped", "loss", "lower_bound", "centroid_form"])
    for t in range(len(batch)):
        w.writerow([t, int(batch.clusters[t]), int(loss.skipped[t]),
                    format_float(loss.per_anchor[t]), format_float(lb.bound[t]),
                    format_float(lb.centroid_form[t])])
    _write(args.out, buf.getvalue())
    if args.summary:
        _write(args.summary, _json({"mean_loss": loss.mean, "skipped": loss.skip_count,
                                    "anchors": len(batch), "tau": args.tau}))


def _read_tfr_batches(path):
    batches: dict[int, tuple[list, list]] = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            labels, clusters = batches.setdefault(int(row["batch"]), ([], []))
            labels.append(int(row["class"]))
            clusters.append(int(row["cluster"]))
    return [(np.array(l), np.array(c)) for _, (l, c) in sorted(batches.items())]


def cmd_tfr(args) -> None:
    batches = _read_tfr_batches(args.edges)
    _write(args.out, _json({
        "batches": len(batches),
        "baseline": contrastive.tfr(batches, "baseline"),
        "model_aware": contrastive.tfr(batches, "model_aware"),
    }))


def cmd_bounds(args) -> None:
    if args.n_min < 2 or args.n_max < args.n_min or args.n_step < 1:
        raise ValueError("need 2 <= n-min <= n-max and n-step >= 1")
    rows = bounds.bound_comparison(range(args.n_min, args.n_max + 1, args.n_step),
                                   _family(args.family), args.eta)
    _write(args.out, bounds.comparison_csv(rows))
    if args.ratios_out:
        _write(args.ratios_out, bounds.min_ratio_csv(rows))


def cmd_synth(args) -> None:
    cfg = experiments.SynthConfig(graphs_per_class=args.per_class, size_mode=args.mode,
                                  seed=args.seed, n_clusters=args.K, max_k=args.max_k)
    report = experiments.run_synthetic(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(_json(report.summary()))
    family = motif_family(args.max_k)
    text = moments_to_csv(report.moments, family)
    lines = text.splitlines()
    lines[0] = "label,n," + lines[0]
    for i in range(1, len(lines)):
        lines[i] = f"{report.labels[i - 1]},{report.sizes[i - 1]}," + lines[i]
    (out / "moments.csv").write_text("\n".join(lines) + "\n")


def cmd_ablate(args) -> None:
    cfg = experiments.SynthConfig(graphs_per_class=args.per_class, size_mode=args.mode,
                                  seed=args.seed, n_clusters=args.K,
                                  mc_samples=args.mc_samples)
    rows = experiments.run_motif_ablation(cfg, args.max_motifs)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["motifs_used", "accuracy_mbc", "accuracy_theory"])
    for used, a, b in rows:
        w.writerow([used, format_float(a), format_float(b)])
    _write(args.out, buf.getvalue())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphon-mixture", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="motif moment vectors as CSV")
    _add_input(p)
    p.add_argument("--family", type=int, default=9, choices=(9, 30))
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("cluster", help="k-means on moment vectors")
    _add_input(p)
    p.add_argument("--K", type=int, default=None, help="clusters (default ceil(ln T))")
    p.add_argument("--n-init", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("estimate", help="estimate a graphon mixture (directory output)")
    _add_input(p)
    p.add_argument("--K", type=int, default=None)
    p.add_argument("--L", type=int, default=10, help="graphs per cluster used for estimation")
    p.add_argument("--resolution", type=int, default=30)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("mixup", help="mixture-aware mixup on a labeled TU dataset")
    _add_input(p, labeled=True)
    p.add_argument("--ratio", type=float, default=0.2)
    p.add_argument("--target-n", type=int, default=None)
    p.add_argument("--L", type=int, default=10)
    p.add_argument("--resolution", type=int, default=30)
    p.add_argument("--lambda-min", type=float, default=0.0)
    p.add_argument("--lambda-max", type=float, default=0.2)
    p.add_argument("--fixed-lambda", type=float, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mixup)

    p = sub.add_parser("augment", help="graphon-aware edge resampling of one graph")
    p.add_argument("--in", dest="edges", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--model", help="mixture directory written by 'estimate'")
    src.add_argument("--graphon", help="step graphon text file (degree-rank latents)")
    p.add_argument("--graph-index", type=int, default=0)
    p.add_argument("--rate", type=float, default=20.0, help="percent of node pairs")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("infonce", help="cluster-aware InfoNCE and its lower bound")
    p.add_argument("--in", dest="edges", required=True, help="embedding batch CSV")
    p.add_argument("--tau", type=float, default=0.5)
    p.add_argument("--out", default="-")
    p.add_argument("--summary", default=None)
    p.set_defaults(func=cmd_infonce)

    p = sub.add_parser("tfr", help="true/false negative ratio, baseline vs cluster-aware")
    p.add_argument("--in", dest="edges", required=True, help="CSV with batch,class,cluster")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_tfr)

    p = sub.add_parser("bounds", help="novel vs classical sampling bounds (CSV)")
    p.add_argument("--eta", type=float, default=0.05)
    p.add_argument("--n-min", type=int, default=50)
    p.add_argument("--n-max", type=int, default=1000)
    p.add_argument("--n-step", type=int, default=50)
    p.add_argument("--family", type=int, default=9, choices=(9, 30))
    p.add_argument("--out", default="-")
    p.add_argument("--ratios-out", default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("synth", help="synthetic seven-graphon clustering experiment")
    p.add_argument("--mode", choices=experiments.SIZE_MODES, default="varying")
    p.add_argument("--per-class", type=int, default=50)
    p.add_argument("--K", type=int, default=7)
    p.add_argument("--max-k", type=int, default=4, choices=(4, 5))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ablate", help="accuracy vs number of motifs")
    p.add_argument("--mode", choices=experiments.SIZE_MODES, default="varying")
    p.add_argument("--per-class", type=int, default=50)
    p.add_argument("--K", type=int, default=7)
    p.add_argument("--max-motifs", type=int, default=15)
    p.add_argument("--mc-samples", type=int, default=400_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_ablate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ValueError, OSError, contrastive.DegenerateBatchError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
