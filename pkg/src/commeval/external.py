"""Partition-comparison metrics.

Set-overlap and information-theoretic scores (purity, Rand, entropy family,
NMI) work directly on the contingency table of two partitions.  The
chance-corrected family (rNMI, cNMI) subtracts or normalizes out the mean
NMI against a Monte-Carlo null of size-preserving label shuffles.  The
classification-style scores (confusion matrix, kappa, per-class
precision/recall/F) apply after the computed communities have been aligned
one-to-one to the ground-truth ones.

All entropies and mutual informations are in bits (log base 2), with the
0 * log 0 = 0 convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alignment import Alignment, build_cost_matrix, solve_assignment
from .errors import ValidationError
from .partition import ContingencyTable, Partition, contingency


@dataclass(frozen=True)
class NullEnsembleConfig:
    """Monte-Carlo null ensemble: shuffle count and base seed."""

    sample_count: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValidationError("null ensemble needs at least one sample")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must fit in 64 bits")


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Post-alignment counts: rows = aligned computed labels 1..c* plus a
    final "unmatched" row, columns = ground-truth labels 1..c*."""

    counts: np.ndarray
    n: int

    @property
    def num_classes(self) -> int:
        return self.counts.shape[1]

    @property
    def accuracy(self) -> float:
        return float(np.trace(self.counts[: self.num_classes])) / self.n

    def row_marginals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def col_marginals(self) -> np.ndarray:
        return self.counts.sum(axis=0)


@dataclass(frozen=True)
class ClassStats:
    """One-vs-rest counts and ratios for a single ground-truth class.

    Ratios that would be 0/0 are None (absent), never coerced to 0.
    """

    class_id: int
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float | None
    recall: float | None
    sensitivity: float | None
    specificity: float | None
    f_beta: float | None


@dataclass(frozen=True)
class ClassReport:
    per_class: tuple[ClassStats, ...]
    accuracy: float
    expected_accuracy: float
    kappa: float | None
    beta: float


def purity(computed: Partition, truth: Partition) -> float:
    """Fraction of nodes captured by each computed cluster's best-overlap
    ground-truth community (a many-to-one match, hence its split bias)."""
    table = contingency(computed, truth)
    return float(table.counts.max(axis=1).sum()) / table.n


def rand_index(computed: Partition, truth: Partition) -> float:
    """Pair-counting agreement: 2(a + d) / (n(n-1))."""
    table = contingency(computed, truth)
    n = table.n
    if n < 2:
        raise ValidationError("rand index needs at least two nodes")
    both = _pairs(table.counts).sum()
    same_comp = _pairs(table.row_sizes).sum()
    same_truth = _pairs(table.col_sizes).sum()
    total = n * (n - 1) // 2
    diff_both = total - same_comp - same_truth + both
    return float(both + diff_both) / total


def _pairs(counts: np.ndarray) -> np.ndarray:
    counts = counts.astype(np.int64)
    return counts * (counts - 1) // 2


def entropy(p: Partition) -> float:
    """Shannon entropy of the community-size distribution, in bits."""
    return _entropy_from_counts(p.sizes(), p.n)


def _entropy_from_counts(counts: np.ndarray, n: int) -> float:
    probs = counts[counts > 0] / n
    return float(-(probs * np.log2(probs)).sum())


def mutual_information(a: Partition, b: Partition) -> float:
    """I(A;B) in bits from the joint frequency table."""
    table = contingency(a, b)
    return _mi_from_table(table)


def _mi_from_table(table: ContingencyTable) -> float:
    ha = _entropy_from_counts(table.row_sizes, table.n)
    hb = _entropy_from_counts(table.col_sizes, table.n)
    hab = _entropy_from_counts(table.counts.ravel(), table.n)
    return max(0.0, ha + hb - hab)


def nmi(a: Partition, b: Partition) -> float:
    """Normalized mutual information 2I/(H(a)+H(b)) in [0, 1].

    Defined as 1 when both partitions are single communities (zero entropy
    on both sides).
    """
    table = contingency(a, b)
    ha = _entropy_from_counts(table.row_sizes, table.n)
    hb = _entropy_from_counts(table.col_sizes, table.n)
    if ha + hb == 0.0:
        return 1.0
    hab = _entropy_from_counts(table.counts.ravel(), table.n)
    return 2.0 * max(0.0, ha + hb - hab) / (ha + hb)


def _null_permutation(n: int, seed: int, index: int) -> np.ndarray:
    # Each sample derives its own PCG64 stream from (seed, index), so the
    # ensemble mean is independent of evaluation order.
    rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
    return rng.permutation(n)


def _null_mean_nmi(fixed: Partition, shuffled: Partition, cfg: NullEnsembleConfig) -> float:
    total = 0.0
    labels = shuffled.labels
    for k in range(cfg.sample_count):
        perm = _null_permutation(len(labels), cfg.seed, k)
        total += nmi(fixed, Partition(labels[perm]))
    return total / cfg.sample_count


def rnmi(a: Partition, b: Partition, cfg: NullEnsembleConfig) -> float:
    """NMI(a, b) minus the mean NMI of a against size-preserving shuffles
    of b.  Deterministic given cfg.seed; at most 1, may be negative."""
    if a.n != b.n:
        raise ValidationError(f"partitions cover different node counts: {a.n} vs {b.n}")
    return nmi(a, b) - _null_mean_nmi(a, b, cfg)


def cnmi(a: Partition, b: Partition, cfg: NullEnsembleConfig) -> float:
    """Two-sided shuffle-null correction of NMI.

    With s = <NMI(a, shuffle(b))> + <NMI(b, shuffle(a))>, returns
    (2 NMI(a,b) - s) / (2 - s).  The same permutation streams are applied on
    both sides, so the score is exactly symmetric in its arguments and
    cnmi(x, x) is exactly 1.  A denominator <= 0 signals degenerate inputs
    whose null is already perfect (e.g. two single-community partitions).
    """
    if a.n != b.n:
        raise ValidationError(f"partitions cover different node counts: {a.n} vs {b.n}")
    # Canonical argument order keeps the float evaluation order, and hence
    # the result, bitwise identical under argument swap.
    if (b.c, b.labels.tobytes()) < (a.c, a.labels.tobytes()):
        a, b = b, a
    null_b = _null_mean_nmi(a, b, cfg)
    null_a = _null_mean_nmi(b, a, cfg)
    denom = 2.0 - null_a - null_b
    if denom <= 0.0:
        raise ValidationError(
            "cNMI undefined: the shuffle null already matches perfectly"
        )
    return (2.0 * nmi(a, b) - null_a - null_b) / denom


def align_partitions(computed: Partition, truth: Partition) -> Alignment:
    """Convenience pipeline: build costs and solve the assignment."""
    return solve_assignment(build_cost_matrix(computed, truth))


def confusion_matrix(
    computed: Partition, truth: Partition, al: Alignment
) -> ConfusionMatrix:
    """Count matrix after applying the alignment to computed labels.

    Row j collects the nodes of the computed community mapped to
    ground-truth id j; the extra last row collects nodes of unmatched
    computed communities.  Columns are ground-truth labels.
    """
    table = contingency(computed, truth)
    c, cs = table.counts.shape
    ids = set(range(1, c + 1))
    if set(al.mapping) | set(al.unmatched) != ids or not set(al.mapping.values()) <= set(
        range(1, cs + 1)
    ):
        raise ValidationError("alignment does not correspond to these partitions")
    counts = np.zeros((cs + 1, cs), dtype=np.int64)
    for i in range(1, c + 1):
        row = al.mapping[i] - 1 if i in al.mapping else cs
        counts[row] += table.counts[i - 1]
    return ConfusionMatrix(counts, table.n)


def kappa(cm: ConfusionMatrix) -> float:
    """Chance-corrected accuracy (accuracy - expected) / (1 - expected).

    Expected accuracy pairs the marginals of the ground-truth classes only;
    unmatched mass inflates the column marginals but never the diagonal.
    """
    cs = cm.num_classes
    rows = cm.row_marginals()[:cs].astype(np.float64)
    cols = cm.col_marginals().astype(np.float64)
    expected = float((rows * cols).sum()) / (cm.n * cm.n)
    if expected >= 1.0:
        raise ValidationError("kappa undefined: expected accuracy is 1 (single class)")
    return (cm.accuracy - expected) / (1.0 - expected)


def kappa_score(computed: Partition, truth: Partition) -> float:
    """Kappa of the optimally aligned confusion matrix."""
    al = align_partitions(computed, truth)
    return kappa(confusion_matrix(computed, truth, al))


def class_report(cm: ConfusionMatrix, beta: float = 1.0) -> ClassReport:
    """One-vs-rest statistics per ground-truth class plus global kappa.

    beta weights recall against precision in the F-score; beta = 1 is the
    harmonic mean.
    """
    if beta <= 0:
        raise ValidationError("beta must be positive")
    cs = cm.num_classes
    rows = cm.row_marginals()
    cols = cm.col_marginals()
    stats = []
    for j in range(cs):
        tp = int(cm.counts[j, j])
        fp = int(rows[j]) - tp
        fn = int(cols[j]) - tp
        tn = cm.n - tp - fp - fn
        precision = _ratio(tp, tp + fp)
        recall = _ratio(tp, tp + fn)
        specificity = _ratio(tn, tn + fp)
        f_beta = None
        if precision is not None and recall is not None:
            denom = beta * beta * precision + recall
            if denom > 0:
                f_beta = (1 + beta * beta) * precision * recall / denom
        stats.append(
            ClassStats(
                class_id=j + 1,
                tp=tp,
                fp=fp,
                fn=fn,
                tn=tn,
                precision=precision,
                recall=recall,
                sensitivity=recall,
                specificity=specificity,
                f_beta=f_beta,
            )
        )
    rows_f = rows[:cs].astype(np.float64)
    expected = float((rows_f * cols.astype(np.float64)).sum()) / (cm.n * cm.n)
    kap = None if expected >= 1.0 else (cm.accuracy - expected) / (1.0 - expected)
    return ClassReport(tuple(stats), cm.accuracy, expected, kap, beta)


def _ratio(num: int, den: int) -> float | None:
    if den == 0:
        return None
    return num / den
