"""File ingestion and report serialization.

Label files carry one `node-id <TAB> label[,label...]` line per node; edge
files carry `u <TAB> v` lines.  Both are UTF-8 with `#` comment lines.  Node
ids are arbitrary strings; a dense internal index is built in file order.
Reports serialize to JSON (schema_version 1) and to tab-separated text with
numbers printed to 12 significant digits.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import MismatchError, ParseError
from .experiments import SweepResult
from .external import ClassReport
from .partition import (
    MultiPartition,
    Partition,
    multipartition_from_labels,
    partition_from_labels,
)

SCHEMA_VERSION = 1


@dataclass
class LabelData:
    """Parsed label file: node ids plus one label token tuple per node."""

    nodes: list[str]
    token_sets: list[tuple[str, ...]]
    source: str = "<memory>"

    @property
    def is_multi(self) -> bool:
        return any(len(t) > 1 for t in self.token_sets)

    def community_tokens(self) -> list[str]:
        """Original label tokens in first-appearance order; index i holds the
        token behind normalized community id i+1."""
        seen: dict[str, None] = {}
        for tokens in self.token_sets:
            for tok in tokens:
                seen.setdefault(tok)
        return list(seen)

    def partition(self) -> Partition:
        if self.is_multi:
            raise ParseError(
                f"{self.source}: multi-label lines are not allowed here"
            )
        return partition_from_labels([t[0] for t in self.token_sets])

    def multipartition(self) -> MultiPartition:
        return multipartition_from_labels(self.token_sets)

    def reordered(self, node_order: list[str]) -> "LabelData":
        """Reindex to another file's node order; node sets must coincide."""
        index = {node: i for i, node in enumerate(self.nodes)}
        if len(node_order) != len(self.nodes) or set(node_order) != set(index):
            raise MismatchError(
                f"{self.source}: node universe differs from the reference file "
                f"({len(self.nodes)} vs {len(node_order)} nodes)"
            )
        return LabelData(
            nodes=list(node_order),
            token_sets=[self.token_sets[index[n]] for n in node_order],
            source=self.source,
        )


def _data_lines(text: str, source: str) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_label_text(text: str, source: str = "<memory>") -> LabelData:
    nodes: list[str] = []
    token_sets: list[tuple[str, ...]] = []
    seen: set[str] = set()
    for lineno, line in _data_lines(text, source):
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(
                f"{source}:{lineno}: expected 'node-id<TAB>label[,label...]', got {line!r}"
            )
        node, label_field = fields
        if node in seen:
            raise ParseError(f"{source}:{lineno}: duplicate node id {node!r}")
        seen.add(node)
        tokens = tuple(t for t in label_field.split(",") if t)
        if not tokens:
            raise ParseError(f"{source}:{lineno}: node {node!r} has no labels")
        nodes.append(node)
        token_sets.append(tokens)
    if not nodes:
        raise ParseError(f"{source}: no label lines found")
    return LabelData(nodes, token_sets, source)


def parse_label_file(path: str | Path) -> LabelData:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_label_text(text, str(path))


def parse_edge_text(
    text: str, source: str = "<memory>", warn_stream=None
) -> list[tuple[str, str]]:
    """Undirected edge list as string pairs, deduplicated.

    Reversed duplicates are folded into one undirected edge; when any are
    found a single symmetrization warning goes to `warn_stream` (stderr by
    default).  Self-loops are rejected.
    """
    if warn_stream is None:
        warn_stream = sys.stderr
    seen: dict[tuple[str, str], tuple[str, str]] = {}
    directed = False
    for lineno, line in _data_lines(text, source):
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(f"{source}:{lineno}: expected 'u<TAB>v', got {line!r}")
        u, v = fields
        if u == v:
            raise ParseError(f"{source}:{lineno}: self-loop on node {u!r}")
        key = (v, u) if v < u else (u, v)
        first = seen.setdefault(key, (u, v))
        if first != (u, v):
            directed = True
    if not seen:
        raise ParseError(f"{source}: no edge lines found")
    if directed:
        print(
            f"warning: {source}: reversed duplicate edges found; "
            "treating the edge list as directed and symmetrizing",
            file=warn_stream,
        )
    return list(seen)


def parse_edge_file(path: str | Path, warn_stream=None) -> list[tuple[str, str]]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_edge_text(text, str(path), warn_stream)


def parse_points_text(text: str, source: str = "<memory>") -> tuple[list[str], list[list[float]]]:
    """Point file: `node-id <TAB> x,y,...` with a shared dimension."""
    nodes: list[str] = []
    rows: list[list[float]] = []
    seen: set[str] = set()
    for lineno, line in _data_lines(text, source):
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(
                f"{source}:{lineno}: expected 'node-id<TAB>x,y,...', got {line!r}"
            )
        node, coord_field = fields
        if node in seen:
            raise ParseError(f"{source}:{lineno}: duplicate node id {node!r}")
        seen.add(node)
        try:
            coords = [float(x) for x in coord_field.split(",") if x]
        except ValueError as exc:
            raise ParseError(f"{source}:{lineno}: bad coordinate in {line!r}") from exc
        if not coords:
            raise ParseError(f"{source}:{lineno}: node {node!r} has no coordinates")
        if rows and len(coords) != len(rows[0]):
            raise ParseError(
                f"{source}:{lineno}: dimension {len(coords)} differs from {len(rows[0])}"
            )
        nodes.append(node)
        rows.append(coords)
    if not nodes:
        raise ParseError(f"{source}: no point lines found")
    return nodes, rows


def parse_points_file(path: str | Path) -> tuple[list[str], list[list[float]]]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_points_text(text, str(path))


def label_lines(p: Partition, nodes: list[str] | None = None) -> list[str]:
    """Serialize a partition back to label-file lines."""
    if nodes is None:
        nodes = [str(i) for i in range(p.n)]
    return [f"{node}\t{label}" for node, label in zip(nodes, p.labels)]


@dataclass
class MetricReport:
    """Structured evaluation output; serializes to JSON and TSV."""

    metrics: dict[str, float | None] = field(default_factory=dict)
    per_class: list[dict] = field(default_factory=list)
    alignment: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "metrics": self.metrics,
            "per_class": self.per_class,
            "alignment": self.alignment,
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=False)

    def to_tsv(self) -> str:
        lines = ["# metrics", "metric\tvalue"]
        for name, value in self.metrics.items():
            lines.append(f"{name}\t{_fmt(value)}")
        if self.per_class:
            lines.append("# per_class")
            cols = list(self.per_class[0])
            lines.append("\t".join(cols))
            for row in self.per_class:
                lines.append("\t".join(_fmt(row[c]) for c in cols))
        if self.alignment:
            lines.append("# alignment")
            lines.append("computed\ttruth")
            for comp, tru in self.alignment.get("mapping", {}).items():
                lines.append(f"{comp}\t{tru}")
            for comp in self.alignment.get("unmatched", []):
                lines.append(f"{comp}\t<unmatched>")
            lines.append(f"total_cost\t{_fmt(self.alignment.get('total_cost'))}")
        lines.append("# provenance")
        for key, value in self.provenance.items():
            lines.append(f"{key}\t{_fmt(value)}")
        return "\n".join(lines) + "\n"


def class_report_rows(report: ClassReport, class_tokens: list[str] | None = None) -> list[dict]:
    rows = []
    for stats in report.per_class:
        name = (
            class_tokens[stats.class_id - 1]
            if class_tokens is not None
            else str(stats.class_id)
        )
        rows.append(
            {
                "class": name,
                "tp": stats.tp,
                "fp": stats.fp,
                "fn": stats.fn,
                "tn": stats.tn,
                "precision": stats.precision,
                "recall": stats.recall,
                "specificity": stats.specificity,
                "f_beta": stats.f_beta,
            }
        )
    return rows


def sweep_tsv(result: SweepResult) -> str:
    lines = ["c\tfraction\tmetric\tmean\tstd\ttrials\ttheory"]
    for row in result.rows:
        lines.append(
            "\t".join(
                [
                    str(row.c),
                    _fmt(row.fraction),
                    row.metric,
                    _fmt(row.mean),
                    _fmt(row.std),
                    str(row.trials),
                    _fmt(row.theory),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def sweep_json(result: SweepResult, provenance: dict | None = None) -> str:
    spec = result.spec
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": result.kind,
        "spec": {
            "n": spec.n,
            "c_values": list(spec.c_values),
            "flip_fractions": list(spec.flip_fractions),
            "trials": spec.trials,
            "seed": spec.seed,
            "metrics": list(spec.metrics),
            "null_samples": spec.null_cfg.sample_count,
            "null_seed": spec.null_cfg.seed,
        },
        "rows": [
            {
                "c": row.c,
                "fraction": row.fraction,
                "metric": row.metric,
                "mean": row.mean,
                "std": row.std,
                "trials": row.trials,
                "theory": row.theory,
            }
            for row in result.rows
        ],
        "provenance": provenance or {},
    }
    return json.dumps(payload, indent=2)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.12g}"
    return str(value)
