"""Canonical partition representations and pairwise count tables.

A partition assigns every node (indexed 0..n-1) to exactly one community;
community ids are positive integers 1..c with every id occupied.  Overlapping
assignments are carried by :class:`MultiPartition`, which stores a non-empty
id set per node.  The :class:`ContingencyTable` holds the c x c* overlap
counts between two partitions and is the backbone of most external metrics.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True, eq=False)
class Partition:
    """Immutable node -> community assignment.

    `labels` holds one id per node, ids are 1..c and every id has at least
    one member.  Use :func:`partition_from_labels` to build one from raw
    tokens; direct construction requires already-valid labels.
    """

    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "labels", labels)
        if labels.ndim != 1 or labels.size == 0:
            raise ValidationError("partition needs a non-empty 1-d label vector")
        if labels.min() < 1:
            raise ValidationError("community ids must be >= 1")
        sizes = np.bincount(labels)[1:]
        if (sizes == 0).any():
            raise ValidationError("community ids must be contiguous 1..c")

    @property
    def n(self) -> int:
        return int(self.labels.size)

    @property
    def c(self) -> int:
        return int(self.labels.max())

    def sizes(self) -> np.ndarray:
        """Community sizes indexed by id-1; sums to n."""
        return np.bincount(self.labels, minlength=self.c + 1)[1:]

    def communities(self) -> dict[int, np.ndarray]:
        """Map community id -> sorted array of member node indices."""
        order = np.argsort(self.labels, kind="stable")
        bounds = np.searchsorted(self.labels[order], np.arange(1, self.c + 2))
        return {
            cid: np.sort(order[bounds[cid - 1]:bounds[cid]])
            for cid in range(1, self.c + 1)
        }

    def to_multi(self) -> "MultiPartition":
        """Lossless embedding as a multi-label partition with singleton sets."""
        return MultiPartition(tuple(frozenset((int(l),)) for l in self.labels))

    def same_grouping(self, other: "Partition") -> bool:
        """True when both assign the same node groups, ignoring id names."""
        if self.n != other.n:
            return False
        a = partition_from_labels(self.labels).labels
        b = partition_from_labels(other.labels).labels
        return bool(np.array_equal(a, b))


@dataclass(frozen=True, eq=False)
class MultiPartition:
    """Overlapping partition: each node carries a non-empty set of ids."""

    label_sets: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.label_sets) == 0:
            raise ValidationError("multi-partition needs at least one node")
        present: set[int] = set()
        for s in self.label_sets:
            if not s:
                raise ValidationError("every node needs at least one label")
            present.update(s)
        if not present or min(present) < 1 or present != set(range(1, len(present) + 1)):
            raise ValidationError("community ids must be contiguous 1..c")
        object.__setattr__(self, "_ids", tuple(sorted(present)))

    @property
    def n(self) -> int:
        return len(self.label_sets)

    @property
    def c(self) -> int:
        return len(self._ids)  # type: ignore[attr-defined]

    def communities(self) -> dict[int, frozenset[int]]:
        members: dict[int, set[int]] = {cid: set() for cid in self._ids}  # type: ignore[attr-defined]
        for node, s in enumerate(self.label_sets):
            for cid in s:
                members[cid].add(node)
        return {cid: frozenset(m) for cid, m in members.items()}


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """c x c* overlap counts N_ij = |B_i n A_j| with marginals."""

    counts: np.ndarray    # rows = computed communities B_i, cols = truth A_j
    row_sizes: np.ndarray
    col_sizes: np.ndarray
    n: int

    def transposed(self) -> "ContingencyTable":
        return ContingencyTable(
            self.counts.T.copy(), self.col_sizes.copy(), self.row_sizes.copy(), self.n
        )


def partition_from_labels(raw: Sequence[Hashable] | np.ndarray) -> Partition:
    """Build a Partition from arbitrary label tokens.

    Tokens are renumbered to contiguous ids 1..c in first-appearance order,
    so any two label vectors describing the same grouping normalize to the
    same Partition.  Raises ValidationError on empty input.
    """
    if isinstance(raw, np.ndarray):
        raw = raw.tolist()
    if len(raw) == 0:
        raise ValidationError("cannot build a partition from an empty sequence")
    seen: dict[Hashable, int] = {}
    labels = np.empty(len(raw), dtype=np.int64)
    for i, tok in enumerate(raw):
        if tok not in seen:
            seen[tok] = len(seen) + 1
        labels[i] = seen[tok]
    return Partition(labels)


def multipartition_from_labels(
    raw: Sequence[Iterable[Hashable] | Hashable],
) -> MultiPartition:
    """Build a MultiPartition from per-node label tokens.

    Each entry may be a single token or an iterable of tokens (sets, tuples,
    lists); strings count as single tokens.  Ids are assigned in
    first-appearance order scanning nodes left to right.
    """
    if len(raw) == 0:
        raise ValidationError("cannot build a partition from an empty sequence")
    seen: dict[Hashable, int] = {}
    sets: list[frozenset[int]] = []
    for entry in raw:
        if isinstance(entry, (str, bytes)) or not isinstance(entry, Iterable):
            tokens: list[Hashable] = [entry]
        else:
            tokens = list(entry)
        if not tokens:
            raise ValidationError("every node needs at least one label")
        ids = []
        for tok in tokens:
            if tok not in seen:
                seen[tok] = len(seen) + 1
            ids.append(seen[tok])
        sets.append(frozenset(ids))
    return MultiPartition(tuple(sets))


def contingency(computed: Partition, truth: Partition) -> ContingencyTable:
    """Exact overlap counts between two partitions over the same nodes."""
    if computed.n != truth.n:
        raise ValidationError(
            f"partitions cover different node counts: {computed.n} vs {truth.n}"
        )
    c, cs = computed.c, truth.c
    flat = (computed.labels - 1) * cs + (truth.labels - 1)
    counts = np.bincount(flat, minlength=c * cs).reshape(c, cs)
    return ContingencyTable(counts, computed.sizes(), truth.sizes(), computed.n)
