"""Command-line surface.

Subcommands: `compare` (external metrics after alignment), `align` (cost
matrix and mapping), `internal` (graph or point-set indices) and `sweep`
(seeded bias experiments).  Exit codes: 0 success, 2 input/parse error,
3 semantic mismatch between otherwise valid inputs.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .alignment import build_cost_matrix, solve_assignment
from .errors import MismatchError, ParseError, ValidationError
from .experiments import (
    SWEEP_METRICS,
    SweepSpec,
    random_partition,
    run_flip_sweep,
    run_independent_sweep,
    run_self_sweep,
    run_varying_b_sweep,
)
from .external import (
    NullEnsembleConfig,
    align_partitions,
    class_report,
    cnmi,
    confusion_matrix,
    kappa,
    nmi,
    purity,
    rand_index,
    rnmi,
)
from .fileio import (
    LabelData,
    MetricReport,
    class_report_rows,
    parse_edge_file,
    parse_label_file,
    parse_points_file,
    sweep_json,
    sweep_tsv,
)
from .internal import (
    PointSet,
    calinski_harabasz,
    graph_from_edges,
    modularity,
    partition_density,
    silhouette,
    within_ss,
)

COMPARE_METRICS = ("purity", "rand", "nmi", "rnmi", "cnmi", "kappa", "fscore")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_MISMATCH = 3


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commeval",
        description="Evaluate community-detection results against ground truth.",
    )
    parser.add_argument("--version", action="version", version=f"commeval {__version__}")
    sub = parser.add_subparsers(required=True)

    p = sub.add_parser("compare", help="align computed labels and score them")
    p.add_argument("truth", help="ground-truth label file")
    p.add_argument("computed", help="computed label file")
    p.add_argument(
        "--metrics",
        default=",".join(COMPARE_METRICS),
        help=f"comma-separated subset of {','.join(COMPARE_METRICS)}",
    )
    p.add_argument("--beta", type=float, default=1.0, help="F-score weight (default 1)")
    p.add_argument("--seed", type=int, default=None, help="seed for rNMI/cNMI nulls")
    p.add_argument("--samples", type=int, default=100, help="null samples (default 100)")
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("align", help="print the mapping cost matrix and solution")
    p.add_argument("truth", help="ground-truth label file (multi-labels allowed)")
    p.add_argument("computed", help="computed label file (multi-labels allowed)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("internal", help="ground-truth-free quality indices")
    p.add_argument("--labels", required=True, help="label file defining the node universe")
    p.add_argument("--edges", default=None, help="edge list file (graph indices)")
    p.add_argument("--points", default=None, help="coordinate file (vector indices)")
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_internal)

    p = sub.add_parser("sweep", help="seeded synthetic bias experiments")
    p.add_argument("--spec", default=None, help="JSON sweep spec file (overrides flags)")
    p.add_argument(
        "--kind",
        choices=("independent", "self", "flip", "varying-b"),
        default="independent",
    )
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--c-values", default="", help="comma-separated community counts")
    p.add_argument("--fractions", default="", help="comma-separated flip fractions")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument(
        "--metrics",
        default=",".join(SWEEP_METRICS),
        help=f"comma-separated subset of {','.join(SWEEP_METRICS)}",
    )
    p.add_argument("--c-a", type=int, default=None, help="fixed community count (varying-b)")
    p.add_argument("--truth", default=None, help="label file as flip-sweep ground truth")
    p.add_argument(
        "--c-truth", type=int, default=None, help="random flip-sweep truth with this many communities"
    )
    p.add_argument("--out", default=None, help="prefix: writes PREFIX.tsv and PREFIX.json")
    p.set_defaults(func=cmd_sweep)
    return parser


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def _load_pair(truth_path: str, computed_path: str) -> tuple[LabelData, LabelData]:
    truth = parse_label_file(truth_path)
    computed = parse_label_file(computed_path).reordered(truth.nodes)
    return truth, computed


def _resolve_seed(seed: int | None) -> tuple[int, str]:
    if seed is not None:
        return seed, "explicit"
    return secrets.randbits(63), "auto"


def cmd_compare(args) -> int:
    requested = [m for m in args.metrics.split(",") if m]
    unknown = set(requested) - set(COMPARE_METRICS)
    if unknown:
        raise ValidationError(f"unknown metrics: {sorted(unknown)}")
    truth_data, computed_data = _load_pair(args.truth, args.computed)
    truth = truth_data.partition()
    computed = computed_data.partition()

    seed, seed_source = _resolve_seed(args.seed)
    cfg = NullEnsembleConfig(sample_count=args.samples, seed=seed)

    al = align_partitions(computed, truth)
    cm = confusion_matrix(computed, truth, al)

    report = MetricReport()
    values: dict[str, float | None] = {}
    if "purity" in requested:
        values["purity"] = purity(computed, truth)
    if "rand" in requested:
        values["rand"] = rand_index(computed, truth)
    if "nmi" in requested:
        values["nmi"] = nmi(truth, computed)
    if "rnmi" in requested:
        values["rnmi"] = rnmi(truth, computed, cfg)
    if "cnmi" in requested:
        values["cnmi"] = cnmi(truth, computed, cfg)
    if "kappa" in requested:
        values["kappa"] = kappa(cm)
    report.metrics = values

    if "fscore" in requested:
        rep = class_report(cm, beta=args.beta)
        report.per_class = class_report_rows(rep, truth_data.community_tokens())

    comp_tokens = computed_data.community_tokens()
    truth_tokens = truth_data.community_tokens()
    report.alignment = {
        "mapping": {
            comp_tokens[i - 1]: truth_tokens[j - 1] for i, j in sorted(al.mapping.items())
        },
        "unmatched": [comp_tokens[i - 1] for i in sorted(al.unmatched)],
        "total_cost": al.total_cost,
    }
    report.provenance = {
        "tool": "commeval",
        "version": __version__,
        "command": "compare",
        "truth": args.truth,
        "computed": args.computed,
        "beta": args.beta,
        "seed": seed,
        "seed_source": seed_source,
        "null_samples": args.samples,
        "prng": "pcg64",
    }
    _emit(report.to_json() if args.format == "json" else report.to_tsv(), args.out)
    return EXIT_OK


def cmd_align(args) -> int:
    truth_data = parse_label_file(args.truth)
    computed_data = parse_label_file(args.computed).reordered(truth_data.nodes)
    truth = truth_data.multipartition()
    computed = computed_data.multipartition()
    cm = build_cost_matrix(computed, truth)
    al = solve_assignment(cm)

    comp_tokens = computed_data.community_tokens()
    truth_tokens = truth_data.community_tokens()
    if args.format == "json":
        payload = {
            "schema_version": 1,
            "cost_matrix": cm.entries.tolist(),
            "computed_ids": list(comp_tokens),
            "truth_ids": list(truth_tokens),
            "mapping": {
                comp_tokens[i - 1]: truth_tokens[j - 1]
                for i, j in sorted(al.mapping.items())
            },
            "unmatched": [comp_tokens[i - 1] for i in sorted(al.unmatched)],
            "total_cost": al.total_cost,
        }
        _emit(json.dumps(payload, indent=2), args.out)
        return EXIT_OK

    lines = ["cost matrix (rows = computed, cols = ground truth):"]
    header = "\t" + "\t".join(truth_tokens)
    lines.append(header)
    for i, row in enumerate(cm.entries):
        lines.append(comp_tokens[i] + "\t" + "\t".join(str(x) for x in row))
    lines.append("mapping:")
    for i, j in sorted(al.mapping.items()):
        lines.append(f"  {comp_tokens[i - 1]} -> {truth_tokens[j - 1]}")
    for i in sorted(al.unmatched):
        lines.append(f"  {comp_tokens[i - 1]} -> (unmatched)")
    lines.append(f"total cost: {al.total_cost}")
    _emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_internal(args) -> int:
    if (args.edges is None) == (args.points is None):
        raise ParseError("provide exactly one of --edges or --points")
    labels = parse_label_file(args.labels)
    partition = labels.partition()
    index = {node: i for i, node in enumerate(labels.nodes)}

    report = MetricReport()
    if args.edges is not None:
        raw_edges = parse_edge_file(args.edges)
        pairs = []
        for u, v in raw_edges:
            if u not in index or v not in index:
                missing = u if u not in index else v
                raise MismatchError(
                    f"{args.edges}: node {missing!r} has no label in {args.labels}"
                )
            pairs.append((index[u], index[v]))
        graph = graph_from_edges(len(labels.nodes), pairs)
        report.metrics = {
            "modularity": modularity(graph, partition),
            "partition_density": partition_density(graph, partition),
        }
        report.provenance = {"edges": args.edges, "n": graph.n, "m": graph.m}
    else:
        nodes, rows = parse_points_file(args.points)
        if set(nodes) != set(index) or len(nodes) != len(index):
            raise MismatchError(
                f"{args.points}: node universe differs from {args.labels}"
            )
        row_of = {node: row for node, row in zip(nodes, rows)}
        points = PointSet(np.asarray([row_of[node] for node in labels.nodes]))
        report.metrics = {
            "within_ss": within_ss(points, partition),
            "calinski_harabasz": calinski_harabasz(points, partition),
            "silhouette": silhouette(points, partition),
        }
        report.provenance = {"points": args.points, "n": points.n, "dim": points.dim}
    report.provenance.update(
        {"tool": "commeval", "version": __version__, "command": "internal", "labels": args.labels}
    )
    _emit(report.to_json() if args.format == "json" else report.to_tsv(), args.out)
    return EXIT_OK


def _spec_from_args(args) -> tuple[SweepSpec, str, dict]:
    if args.spec is not None:
        try:
            raw = json.loads(Path(args.spec).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ParseError(f"cannot read {args.spec}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"{args.spec}: invalid JSON: {exc}") from exc
        kind = raw.get("kind", "independent")
        seed = raw.get("seed")
        seed, seed_source = _resolve_seed(seed)
        try:
            spec = SweepSpec(
                n=int(raw["n"]),
                c_values=tuple(int(c) for c in raw.get("c_values", ())),
                flip_fractions=tuple(float(f) for f in raw.get("fractions", ())),
                trials=int(raw.get("trials", 10)),
                seed=seed,
                metrics=tuple(raw.get("metrics", SWEEP_METRICS)),
                null_cfg=NullEnsembleConfig(
                    sample_count=int(raw.get("samples", 100)), seed=seed
                ),
            )
        except KeyError as exc:
            raise ParseError(f"{args.spec}: missing required field {exc}") from exc
        extras = {
            "c_a": raw.get("c_a"),
            "truth": raw.get("truth"),
            "c_truth": raw.get("c_truth"),
            "seed_source": seed_source,
        }
        return spec, kind, extras

    seed, seed_source = _resolve_seed(args.seed)
    metrics = tuple(m for m in args.metrics.split(",") if m)
    spec = SweepSpec(
        n=args.n,
        c_values=tuple(int(c) for c in args.c_values.split(",") if c),
        flip_fractions=tuple(float(f) for f in args.fractions.split(",") if f),
        trials=args.trials,
        seed=seed,
        metrics=metrics,
        null_cfg=NullEnsembleConfig(sample_count=args.samples, seed=seed),
    )
    extras = {
        "c_a": args.c_a,
        "truth": args.truth,
        "c_truth": args.c_truth,
        "seed_source": seed_source,
    }
    return spec, args.kind, extras


def cmd_sweep(args) -> int:
    spec, kind, extras = _spec_from_args(args)
    if kind in ("independent", "self", "varying-b") and not spec.c_values:
        raise ValidationError(f"{kind} sweep needs --c-values")

    if kind == "independent":
        result = run_independent_sweep(spec)
    elif kind == "self":
        result = run_self_sweep(spec)
    elif kind == "varying-b":
        if extras["c_a"] is None:
            raise ValidationError("varying-b sweep needs --c-a")
        result = run_varying_b_sweep(spec, int(extras["c_a"]))
    else:
        if not spec.flip_fractions:
            raise ValidationError("flip sweep needs --fractions")
        if extras["truth"] is not None:
            truth = parse_label_file(extras["truth"]).partition()
        elif extras["c_truth"] is not None:
            truth = random_partition(spec.n, int(extras["c_truth"]), spec.seed)
        else:
            raise ValidationError("flip sweep needs --truth FILE or --c-truth C")
        result = run_flip_sweep(truth, spec)

    provenance = {
        "tool": "commeval",
        "version": __version__,
        "command": "sweep",
        "kind": kind,
        "seed": spec.seed,
        "seed_source": extras["seed_source"],
        "prng": "pcg64",
    }
    if args.out is not None:
        Path(args.out + ".tsv").write_text(sweep_tsv(result), encoding="utf-8")
        Path(args.out + ".json").write_text(sweep_json(result, provenance), encoding="utf-8")
    else:
        sys.stdout.write(sweep_tsv(result))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
