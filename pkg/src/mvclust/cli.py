"""Command-line surface.

Commands:
    cluster   run the full pipeline on a dataset manifest
    sweep-k   rerun the pipeline across a list of neighbor counts
    synth     generate a synthetic multi-view blob dataset
    eval      metrics only, from two label files
    baseline  spectral clustering on concatenated views

Every failure maps to a documented exit code: 0 success, 2 validation,
3 configuration, 4 solver, 5 file I/O, 1 unexpected. Config precedence is
CLI flags over --config file over built-in defaults; the resolved snapshot
is written next to the other artifacts.
"""

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import __version__
from .baseline import spectral_concat
from .clusters import assign_clusters
from .data import (infer_cluster_count, load_dataset, make_synthetic,
                   read_labels_csv, write_json, write_labels_csv,
                   write_matrix_csv, atomic_write_text, FLOAT_FORMAT)
from .errors import (ConfigurationError, MvclustError, SolverError,
                     ValidationError)
from .metrics import accuracy, nmi, purity
from .solver import SolverConfig, fit

DEFAULT_SWEEP_KS = list(range(10, 131, 10))

CONFIG_KEYS = {
    "k": int,
    "clusters": int,
    "lambda": None,  # "auto" or float, resolved separately
    "r": float,
    "beta": float,
    "beta_adaptive": bool,
    "max_iters": int,
    "tol": float,
    "seed": int,
    "standardize": bool,
}


def _parse_lambda(text):
    if isinstance(text, (int, float)):
        return float(text)
    if text == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError:
        raise ConfigurationError(
            f"--lambda must be 'auto' or a number, got {text!r}") from None


def _load_config_file(path):
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"{path}: config file not found")
    try:
        values = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(values, dict):
        raise ConfigurationError(f"{path}: config must be a JSON object")
    for key in values:
        if key not in CONFIG_KEYS:
            raise ConfigurationError(f"{path}: unknown config key {key!r}")
    return values


def resolve_config(args, n_labels_classes=None):
    """Merge defaults, config file, and CLI flags into a SolverConfig.

    Returns (config, resolved_dict). n_labels_classes feeds the cluster-count
    default when the dataset ships labels.
    """
    resolved = {
        "k": 10,
        "clusters": None,
        "lambda": "auto",
        "r": 2.0,
        "beta": 1.0,
        "beta_adaptive": True,
        "max_iters": 50,
        "tol": 1e-6,
        "seed": 0,
        "standardize": True,
    }
    if getattr(args, "config", None):
        resolved.update(_load_config_file(args.config))
    overrides = {
        "k": args.k,
        "clusters": args.clusters,
        "lambda": _parse_lambda(args.lam) if args.lam is not None else None,
        "r": args.r,
        "beta": args.beta,
        "beta_adaptive": False if args.no_beta_adapt else None,
        "max_iters": args.max_iters,
        "tol": args.tol,
        "seed": args.seed,
        "standardize": args.standardize,
    }
    for key, value in overrides.items():
        if value is not None:
            resolved[key] = value
    if resolved["clusters"] is None:
        if n_labels_classes is None:
            raise ConfigurationError(
                "--clusters is required when the dataset has no labels")
        resolved["clusters"] = n_labels_classes
    resolved["lambda"] = _parse_lambda(resolved["lambda"])
    config = SolverConfig(
        k_neighbors=int(resolved["k"]),
        n_clusters=int(resolved["clusters"]),
        lam=resolved["lambda"],
        r=float(resolved["r"]),
        beta_init=float(resolved["beta"]),
        beta_adaptive=bool(resolved["beta_adaptive"]),
        max_iters=int(resolved["max_iters"]),
        tol=float(resolved["tol"]),
        seed=int(resolved["seed"]),
        standardize=bool(resolved["standardize"]),
    )
    return config, resolved


def _metrics_dict(y_true, labels, method, iterations, converged):
    return {
        "acc": accuracy(y_true, labels),
        "nmi": nmi(y_true, labels),
        "pur": purity(y_true, labels),
        "method": method,
        "iterations": iterations,
        "converged": converged,
    }


def _write_trace_csv(path, trace):
    lines = ["iter,objective,fusion_residual,eig_sum,components,beta"]
    for i in range(trace.iterations_run):
        lines.append(",".join([
            str(i + 1),
            FLOAT_FORMAT % trace.objective[i],
            FLOAT_FORMAT % trace.fusion_residual[i],
            FLOAT_FORMAT % trace.eig_sum[i],
            str(trace.components[i]),
            FLOAT_FORMAT % trace.beta[i],
        ]))
    atomic_write_text(path, "\n".join(lines) + "\n")


def cmd_cluster(args):
    dataset = load_dataset(args.manifest)
    hint = (infer_cluster_count(dataset.labels)
            if dataset.labels is not None else None)
    config, resolved = resolve_config(args, n_labels_classes=hint)
    graph, w, _views, trace = fit(dataset, config)
    result = assign_clusters(graph, config.n_clusters, seed=config.seed)

    out = Path(args.out)
    write_labels_csv(out / "labels.csv", result.labels)
    write_matrix_csv(out / "consensus.csv", graph.s_star)
    write_matrix_csv(out / "weights.csv", w.w[None, :])
    _write_trace_csv(out / "trace.csv", trace)
    write_json(out / "config.json", resolved)
    summary = (f"method={result.method} components={result.component_count} "
               f"iterations={trace.iterations_run} converged={trace.converged}")
    if dataset.labels is not None:
        report = _metrics_dict(dataset.labels, result.labels, result.method,
                               trace.iterations_run, trace.converged)
        write_json(out / "metrics.json", report)
        summary = (f"acc={report['acc']:.4f} nmi={report['nmi']:.4f} "
                   f"pur={report['pur']:.4f} " + summary)
    print(f"{dataset.name}: {summary}")
    print(f"artifacts written to {out}")
    return 0


def cmd_sweep_k(args):
    dataset = load_dataset(args.manifest)
    hint = (infer_cluster_count(dataset.labels)
            if dataset.labels is not None else None)
    config, resolved = resolve_config(args, n_labels_classes=hint)
    ks = (DEFAULT_SWEEP_KS if args.k_list is None
          else [int(tok) for tok in args.k_list.split(",") if tok.strip()])
    if not ks:
        raise ConfigurationError("empty --k-list")

    rows = ["k,status,acc,nmi,pur,iterations,converged,error"]
    failures = 0
    for k in ks:
        try:
            cfg = dataclasses.replace(config, k_neighbors=k)
            graph, _w, _views, trace = fit(dataset, cfg)
            result = assign_clusters(graph, cfg.n_clusters, seed=cfg.seed)
            if dataset.labels is not None:
                a = accuracy(dataset.labels, result.labels)
                m = nmi(dataset.labels, result.labels)
                p = purity(dataset.labels, result.labels)
                metric_cells = [FLOAT_FORMAT % a, FLOAT_FORMAT % m,
                                FLOAT_FORMAT % p]
            else:
                metric_cells = ["", "", ""]
            rows.append(",".join([str(k), "ok"] + metric_cells +
                                 [str(trace.iterations_run),
                                  str(trace.converged), ""]))
        except MvclustError as exc:
            failures += 1
            message = str(exc).replace(",", ";").replace("\n", " ")
            rows.append(",".join([str(k), "failed", "", "", "", "", "",
                                  message]))
    out = Path(args.out)
    atomic_write_text(out / "sweep.csv", "\n".join(rows) + "\n")
    write_json(out / "config.json", {**resolved, "k_list": ks})
    print(f"sweep over {len(ks)} values of k written to {out / 'sweep.csv'}")
    if failures:
        print(f"warning: {failures} of {len(ks)} sweep rows failed; "
              "see the error column", file=sys.stderr)
    return 0


def cmd_synth(args):
    manifest = make_synthetic(args.n_per_cluster, args.clusters, args.views,
                              args.noise, args.seed, args.out)
    print(manifest)
    return 0


def cmd_eval(args):
    y_true = read_labels_csv(args.true_labels)
    y_pred = read_labels_csv(args.pred_labels)
    report = _metrics_dict(y_true, y_pred, "eval", None, None)
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if args.out:
        write_json(Path(args.out) / "metrics.json", report)
    return 0


def cmd_baseline(args):
    dataset = load_dataset(args.manifest)
    hint = (infer_cluster_count(dataset.labels)
            if dataset.labels is not None else None)
    config, resolved = resolve_config(args, n_labels_classes=hint)
    result = spectral_concat(dataset, config.n_clusters, config.k_neighbors,
                             config.seed)
    out = Path(args.out)
    write_labels_csv(out / "labels.csv", result.labels)
    write_json(out / "config.json", resolved)
    line = f"{dataset.name}: method={result.method_name}"
    if dataset.labels is not None:
        report = _metrics_dict(dataset.labels, result.labels,
                               result.method_name, None, None)
        write_json(out / "metrics.json", report)
        line += (f" acc={report['acc']:.4f} nmi={report['nmi']:.4f} "
                 f"pur={report['pur']:.4f}")
    print(line)
    return 0


def _add_config_flags(sub):
    sub.add_argument("--k", type=int, default=None,
                     help="neighbor count (default 10)")
    sub.add_argument("--clusters", type=int, default=None,
                     help="cluster count (default: inferred from labels)")
    sub.add_argument("--lambda", dest="lam", default=None, metavar="auto|FLOAT",
                     help="locality regularizer, 'auto' or a positive float")
    sub.add_argument("--r", type=float, default=None,
                     help="view-weight exponent, > 1 (default 2)")
    sub.add_argument("--beta", type=float, default=None,
                     help="initial spectral penalty (default 1)")
    sub.add_argument("--no-beta-adapt", action="store_true",
                     help="keep beta fixed instead of adapting it")
    sub.add_argument("--max-iters", type=int, default=None,
                     help="outer iteration cap (default 50)")
    sub.add_argument("--tol", type=float, default=None,
                     help="relative objective-change threshold (default 1e-6)")
    sub.add_argument("--seed", type=int, default=None,
                     help="seed for randomized fallbacks (default 0)")
    sub.add_argument("--standardize", action=argparse.BooleanOptionalAction,
                     default=None,
                     help="per-feature standardization before distances")
    sub.add_argument("--config", default=None,
                     help="JSON file with config values (flags win)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mvclust",
        description="Multi-view clustering via locality-constrained graph "
                    "fusion with a rank-constrained consensus graph.")
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("cluster", help="run the full pipeline")
    sub.add_argument("manifest", help="dataset manifest JSON")
    _add_config_flags(sub)
    sub.add_argument("--out", default="mvclust-run", help="artifact directory")
    sub.set_defaults(func=cmd_cluster)

    sub = commands.add_parser("sweep-k", help="rerun across neighbor counts")
    sub.add_argument("manifest", help="dataset manifest JSON")
    _add_config_flags(sub)
    sub.add_argument("--k-list", default=None,
                     help="comma-separated neighbor counts "
                          "(default 10,20,...,130)")
    sub.add_argument("--out", default="mvclust-sweep",
                     help="artifact directory")
    sub.set_defaults(func=cmd_sweep_k)

    sub = commands.add_parser("synth", help="generate synthetic blobs")
    sub.add_argument("--n-per-cluster", type=int, default=100)
    sub.add_argument("--clusters", type=int, default=3)
    sub.add_argument("--views", type=int, default=3)
    sub.add_argument("--noise", type=float, default=0.2)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default="mvclust-synth",
                     help="dataset directory")
    sub.set_defaults(func=cmd_synth)

    sub = commands.add_parser("eval", help="metrics from two label files")
    sub.add_argument("true_labels")
    sub.add_argument("pred_labels")
    sub.add_argument("--out", default=None,
                     help="also write metrics.json under this directory")
    sub.set_defaults(func=cmd_eval)

    sub = commands.add_parser("baseline",
                              help="spectral clustering on concatenated views")
    sub.add_argument("manifest", help="dataset manifest JSON")
    _add_config_flags(sub)
    sub.add_argument("--out", default="mvclust-baseline",
                     help="artifact directory")
    sub.set_defaults(func=cmd_baseline)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"error[configuration]: {exc}", file=sys.stderr)
        return 3
    except ValidationError as exc:
        print(f"error[validation]: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"error[solver]: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 5
    except MvclustError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
