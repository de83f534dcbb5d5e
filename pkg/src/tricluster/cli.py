"""Command-line surface.

Subcommands: gen, cluster, eval, bench, ablate, demo, sweep. stdout
carries machine-readable JSON only; human-oriented notes go to stderr.
Exit codes: 0 success, 1 usage error, 2 data error. All subcommands are
deterministic under fixed seeds.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import bench as bench_mod
from . import io
from . import metrics
from .errors import TriclusterError
from .pipeline import ClusterParams, fit_predict
from .projection import import_embedding
from .svg import scatter_svg
from .synthgen import SynthConfig, generate


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _emit(obj):
    print(json.dumps(obj, sort_keys=True))


def _add_param_flags(p):
    p.add_argument("--prune", type=float, default=0.3,
                   help="pruning factor sigma_f (default 0.3)")
    p.add_argument("--merge", type=float, default=-0.8,
                   help="merge factor lambda (default -0.8)")
    p.add_argument("--sensitivity", type=float, default=0.99,
                   help="anomaly sensitivity in [0,1] (default 0.99)")
    p.add_argument("--tau", type=int, default=3,
                   help="max cluster size treated as an anomaly group")
    p.add_argument("--size-mode", default="max_edge",
                   choices=("max_edge", "sum_edges", "min_edge"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-merge", action="store_true",
                   help="disable the cluster-merge stage")
    p.add_argument("--proj-off", action="store_true",
                   help="disable back-projection (embedding-only sizes)")
    p.add_argument("--standardize", action="store_true",
                   help="standardize columns before the PCA projection")
    p.add_argument("--jitter-collinear", action="store_true",
                   help="deterministically jitter exactly collinear input")
    p.add_argument("--embedding", default=None,
                   help="import a 2-column embedding instead of PCA")
    p.add_argument("--embedding-format", default="csv",
                   choices=("csv", "binary"))


def _params_from_args(args) -> ClusterParams:
    return ClusterParams(
        prune_param=args.prune,
        merge_param=args.merge,
        tau=args.tau,
        anomaly_sensitivity=args.sensitivity,
        dim_reduction="imported" if args.embedding else "pca",
        back_projection=not args.proj_off,
        merging_enabled=not args.no_merge,
        size_mode=args.size_mode,
        seed=args.seed,
        standardize=args.standardize,
        jitter_on_collinear=args.jitter_collinear,
    )


def _load_input(args):
    data = io.load_matrix(args.input, fmt=args.format, header=args.header)
    emb = None
    if args.embedding:
        emb = import_embedding(args.embedding, data, fmt=args.embedding_format)
    else:
        print("note: projecting with native PCA; pass --embedding to import "
              "an externally computed 2-D embedding (e.g. UMAP)",
              file=sys.stderr)
    return data, emb


def _write_diag(diag_dir, result):
    os.makedirs(diag_dir, exist_ok=True)
    tri = result.diagnostics["triangulation"]
    sizes = result.diagnostics["sizes"]
    pres = result.diagnostics["prune_result"]
    with open(os.path.join(diag_dir, "triangles.csv"), "w",
              encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "k"])
        for row in tri.triangles:
            w.writerow([int(v) for v in row])
    with open(os.path.join(diag_dir, "pruning.csv"), "w",
              encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "k", "s", "s_proj", "z", "z_proj", "kept"])
        for t in range(len(tri.triangles)):
            i, j, k = (int(v) for v in tri.triangles[t])
            w.writerow([
                i, j, k,
                f"{sizes.sizes[t]:.17g}", f"{sizes.sizes_proj[t]:.17g}",
                f"{pres.z[t]:.17g}", f"{pres.z_proj[t]:.17g}",
                int(pres.keep_mask[t]),
            ])
    with open(os.path.join(diag_dir, "anomaly.csv"), "w",
              encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["group_id", "points", "best_cluster", "best_score",
                    "delta", "merged"])
        for d in result.diagnostics["anomaly_groups"]:
            w.writerow([
                d.group_id, ";".join(str(p) for p in d.point_indices),
                d.best_cluster, f"{d.best_score:.17g}",
                f"{d.delta:.17g}", int(d.merged),
            ])


def _cmd_gen(args):
    cfg = SynthConfig(
        n_points=args.n, n_clusters=args.clusters, n_dim=args.dim,
        overlap=args.overlap, anomaly_fraction=args.anomaly_frac,
        snake_fraction=args.snake_frac, random_state=args.seed,
    )
    data, truth = generate(cfg)
    io.save_matrix(data, args.out, fmt=args.format)
    truth_path = args.truth or args.out + ".labels"
    io.save_labels(truth, truth_path)
    _emit({"out": args.out, "truth": truth_path,
           "n_points": int(len(data)), "n_dims": int(data.shape[1]),
           "n_anomalies": int((truth == -1).sum())})
    return 0


def _cmd_cluster(args):
    data, emb = _load_input(args)
    params = _params_from_args(args)
    result = fit_predict(data, params, external_embedding=emb)
    io.save_labels(result.labels, args.out)
    if args.svg:
        coords = result.diagnostics["embedding"].coords
        scatter_svg(coords, result.labels, args.svg)
    if args.diag:
        _write_diag(args.diag, result)
    _emit({"out": args.out, "n_clusters": result.n_clusters,
           "n_anomalies": result.n_anomalies})
    return 0


def _cmd_eval(args):
    true_labels = io.load_labels(args.true)
    pred_labels = io.load_labels(args.pred)
    precision, recall, f1 = metrics.anomaly_prf(true_labels, pred_labels)
    pred_clusters = np.unique(pred_labels[pred_labels >= 0])
    n_anomalies = int((pred_labels == -1).sum())
    if args.exclude_true_anomalies:
        mask = true_labels != -1
        true_labels = true_labels[mask]
        pred_labels = pred_labels[mask]
    _emit({
        "ari": metrics.ari(true_labels, pred_labels),
        "nmi": metrics.nmi(true_labels, pred_labels),
        "precision": precision,
        "recall": recall,
        "f1": f1,
        "n_clusters": int(len(pred_clusters)),
        "n_anomalies": n_anomalies,
    })
    return 0


def _cmd_bench(args):
    if args.scaling:
        n_list = [int(v) for v in args.n_list.split(",")]
        d_list = [int(v) for v in args.d_list.split(",")]
        report = bench_mod.runtime_scaling(n_list, d_list)
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, sort_keys=True, indent=2)
        _emit({"out": args.out, "rows": len(report["rows"])})
        return 0
    with open(args.suite, "r", encoding="utf-8") as fh:
        spec_dicts = json.load(fh)
    specs = []
    for sd in spec_dicts:
        params = ClusterParams(**sd.get("params", {}))
        specs.append(bench_mod.BenchSpec(
            name=sd["name"], generator=sd.get("generator", {}),
            params=params, repeats=sd.get("repeats", 1),
        ))
    if args.svg_dir:
        os.makedirs(args.svg_dir, exist_ok=True)
    report = bench_mod.run_suite(specs, svg_dir=args.svg_dir)
    report.write_csv(args.out, include_timings=args.measure_timings)
    for name, seed, msg in report.errors:
        print(f"bench error: {name} seed={seed}: {msg}", file=sys.stderr)
    _emit({"out": args.out, "rows": len(report.rows),
           "errors": len(report.errors)})
    return 0


def _cmd_ablate(args):
    data, emb = _load_input(args)
    params = _params_from_args(args)
    truth = io.load_labels(args.truth) if args.truth else None
    variants = tuple(v for v in args.variants.split(",") if v)
    runs = bench_mod.run_ablations(data, params, truth=truth,
                                   variants=variants, embedding=emb)
    summary = {}
    for name, entry in runs.items():
        io.save_labels(entry["labels"], f"{args.out_prefix}.{name}.labels")
        summary[name] = {k: v for k, v in entry.items() if k != "labels"}
    _emit(summary)
    return 0


def _cmd_demo(args):
    if args.which == "backprojection":
        rows = bench_mod.backprojection_demo(n_seeds=args.seeds)
    else:
        rows = bench_mod.degradation_sweep(n_seeds=args.seeds)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, sort_keys=True, indent=2)
    _emit({"which": args.which, "rows": rows})
    return 0


def _cmd_sweep(args):
    data = io.load_matrix(args.input, fmt=args.format, header=args.header)
    truth = io.load_labels(args.truth)
    emb = None
    if args.embedding:
        emb = import_embedding(args.embedding, data, fmt=args.embedding_format)
    base = _params_from_args(args)
    prune_grid = ([float(v) for v in args.prune_grid.split(",")]
                  if args.prune_grid else None)
    merge_grid = ([float(v) for v in args.merge_grid.split(",")]
                  if args.merge_grid else None)
    best, trace = bench_mod.grid_sweep(
        data, truth, prune_values=prune_grid, merge_values=merge_grid,
        n_probes=args.probes, seed=args.seed, params=base, embedding=emb,
    )
    if args.trace:
        with open(args.trace, "w", encoding="utf-8", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(trace[0].keys()))
            w.writeheader()
            w.writerows(trace)
    best_row = max(trace, key=lambda r: r["ari"])
    _emit({"prune_param": best.prune_param, "merge_param": best.merge_param,
           "ari": best_row["ari"], "probes": len(trace)})
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="tricluster",
                     description="triangulation-based clustering toolkit")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a synthetic benchmark dataset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--clusters", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--overlap", type=float, default=0.1)
    p.add_argument("--anomaly-frac", type=float, default=0.05)
    p.add_argument("--snake-frac", type=float, default=0.20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--truth", default=None,
                   help="ground-truth label path (default <out>.labels)")
    p.add_argument("--format", default="csv", choices=("csv", "binary"))
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("cluster", help="cluster a point matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--format", default="csv", choices=("csv", "binary"))
    p.add_argument("--header", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--svg", default=None)
    p.add_argument("--diag", default=None,
                   help="directory for diagnostic CSV dumps")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("eval", help="score predicted against true labels")
    p.add_argument("--true", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--exclude-true-anomalies", action="store_true",
                   help="drop true -1 rows from ARI/NMI "
                        "(anomaly P/R/F1 always use all rows)")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("bench", help="run a benchmark suite or scaling probe")
    p.add_argument("--suite", default=None, help="suite JSON file")
    p.add_argument("--out", required=True)
    p.add_argument("--svg-dir", default=None)
    p.add_argument("--measure-timings", action="store_true",
                   help="include wall-clock columns in the report "
                        "(makes the file run-dependent)")
    p.add_argument("--scaling", action="store_true")
    p.add_argument("--n-list", default="1000,2000")
    p.add_argument("--d-list", default="5,20")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("ablate", help="run ablation variants")
    p.add_argument("--input", required=True)
    p.add_argument("--format", default="csv", choices=("csv", "binary"))
    p.add_argument("--header", action="store_true")
    p.add_argument("--truth", default=None)
    p.add_argument("--variants", default="merge_off,proj_off,anom_merged")
    p.add_argument("--out-prefix", default="ablation")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_ablate)

    p = sub.add_parser("demo", help="run a built-in experiment")
    p.add_argument("--which", required=True,
                   choices=("backprojection", "degradation"))
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_demo)

    p = sub.add_parser("sweep", help="hyperparameter sweep against truth")
    p.add_argument("--input", required=True)
    p.add_argument("--format", default="csv", choices=("csv", "binary"))
    p.add_argument("--header", action="store_true")
    p.add_argument("--truth", required=True)
    p.add_argument("--probes", type=int, default=0,
                   help="random probes; 0 means exhaustive grid")
    p.add_argument("--prune-grid", default=None)
    p.add_argument("--merge-grid", default=None)
    p.add_argument("--trace", default=None, help="trace CSV path")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TriclusterError as exc:
        print(f"tricluster: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
