"""Seeded generators and sweep runners for metric bias studies.

Sweeps score partition pairs over grids of community counts or label-flip
fractions, averaging each metric over a fixed number of trials.  Every
random draw flows through PCG64 streams derived from the sweep seed and the
point coordinates (community count, flip fraction, trial index), so results
are bit-reproducible and independent of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .external import NullEnsembleConfig, cnmi, kappa_score, nmi, rnmi
from .partition import Partition, partition_from_labels

SWEEP_METRICS = ("nmi", "rnmi", "cnmi", "kappa")

# Stream tags keep the independent draws of one trial point decorrelated.
_STREAM_A = 1
_STREAM_B = 2
_STREAM_FLIP = 3
_STREAM_NULL = 4


@dataclass(frozen=True)
class SweepSpec:
    """Grid and budget for one sweep run."""

    n: int
    c_values: tuple[int, ...] = ()
    flip_fractions: tuple[float, ...] = ()
    trials: int = 10
    seed: int = 0
    metrics: tuple[str, ...] = SWEEP_METRICS
    null_cfg: NullEnsembleConfig = field(default_factory=NullEnsembleConfig)

    def __post_init__(self):
        if self.trials < 1:
            raise ValidationError("trials must be >= 1")
        if any(f < 0.0 or f > 1.0 for f in self.flip_fractions):
            raise ValidationError("flip fractions must lie in [0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must fit in 64 bits")
        unknown = set(self.metrics) - set(SWEEP_METRICS)
        if unknown:
            raise ValidationError(f"unknown sweep metrics: {sorted(unknown)}")


@dataclass(frozen=True)
class SweepRow:
    c: int
    fraction: float
    metric: str
    mean: float
    std: float
    trials: int
    theory: float | None = None


@dataclass(frozen=True)
class SweepResult:
    kind: str
    rows: tuple[SweepRow, ...]
    spec: SweepSpec


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, *key]))


def _derived_seed(seed: int, *key: int) -> int:
    return int(np.random.SeedSequence([seed, *key]).generate_state(1, np.uint64)[0])


def random_partition(n: int, c: int, seed: int) -> Partition:
    """Partition with each label drawn i.i.d. uniformly from 1..c.

    Expected community size is n/c; labels that happen to draw no node are
    dropped by normalization, so the result may have fewer than c
    communities.
    """
    if c < 1 or c > n:
        raise ValidationError("community count must satisfy 1 <= c <= n")
    rng = _rng(seed)
    return partition_from_labels(rng.integers(1, c + 1, size=n))


def flip_labels(p: Partition, fraction: float, seed: int) -> Partition:
    """Reassign exactly floor(fraction * n) distinct nodes to other labels.

    Each chosen node's new label is uniform over the other existing c - 1
    ids, so every flip is a real change.  Untouched nodes keep their label
    verbatim; only in the rare event that a community loses all members are
    ids compacted (preserving their relative order).
    """
    if fraction < 0.0 or fraction > 1.0:
        raise ValidationError("fraction must lie in [0, 1]")
    if fraction > 0.0 and p.c == 1:
        raise ValidationError("cannot flip labels of a single-community partition")
    count = int(np.floor(fraction * p.n))
    labels = p.labels.copy()
    if count:
        rng = _rng(seed)
        nodes = rng.choice(p.n, size=count, replace=False)
        draws = rng.integers(1, p.c, size=count)
        old = labels[nodes]
        labels[nodes] = np.where(draws < old, draws, draws + 1)
    sizes = np.bincount(labels, minlength=p.c + 1)[1:]
    if (sizes == 0).any():
        remap = np.zeros(p.c + 1, dtype=np.int64)
        remap[1:][sizes > 0] = np.arange(1, int((sizes > 0).sum()) + 1)
        labels = remap[labels]
    return Partition(labels)


def theoretical_kappa(fraction: float, c: int) -> float:
    """Expected kappa of a flip sweep on balanced c-class labels:
    accuracy 1 - fraction against chance level 1/c."""
    if c < 2:
        raise ValidationError("theoretical kappa needs at least two communities")
    chance = 1.0 / c
    return ((1.0 - fraction) - chance) / (1.0 - chance)


def _evaluate(name: str, truth: Partition, other: Partition, cfg: NullEnsembleConfig) -> float:
    if name == "nmi":
        return nmi(truth, other)
    if name == "rnmi":
        return rnmi(truth, other, cfg)
    if name == "cnmi":
        return cnmi(truth, other, cfg)
    if name == "kappa":
        return kappa_score(other, truth)
    raise ValidationError(f"unknown metric {name!r}")


def _point_cfg(spec: SweepSpec, *key: int) -> NullEnsembleConfig:
    return NullEnsembleConfig(
        sample_count=spec.null_cfg.sample_count,
        seed=_derived_seed(spec.null_cfg.seed, _STREAM_NULL, *key),
    )


def _aggregate(values: dict[str, list[float]], c: int, fraction: float, trials: int,
               theory: dict[str, float] | None = None) -> list[SweepRow]:
    rows = []
    for name, vals in values.items():
        arr = np.asarray(vals)
        rows.append(
            SweepRow(
                c=c,
                fraction=fraction,
                metric=name,
                mean=float(arr.mean()),
                std=float(arr.std()),
                trials=trials,
                theory=None if theory is None else theory.get(name),
            )
        )
    return rows


def run_independent_sweep(spec: SweepSpec) -> SweepResult:
    """Score pairs of independent random partitions at each community count."""
    rows: list[SweepRow] = []
    for c in spec.c_values:
        values: dict[str, list[float]] = {m: [] for m in spec.metrics}
        for t in range(spec.trials):
            a = random_partition(spec.n, c, _derived_seed(spec.seed, _STREAM_A, c, t))
            b = random_partition(spec.n, c, _derived_seed(spec.seed, _STREAM_B, c, t))
            cfg = _point_cfg(spec, c, t)
            for m in spec.metrics:
                values[m].append(_evaluate(m, a, b, cfg))
        rows.extend(_aggregate(values, c, 0.0, spec.trials))
    return SweepResult("independent", tuple(rows), spec)


def run_self_sweep(spec: SweepSpec) -> SweepResult:
    """Score random partitions against themselves at each community count."""
    rows: list[SweepRow] = []
    for c in spec.c_values:
        values: dict[str, list[float]] = {m: [] for m in spec.metrics}
        for t in range(spec.trials):
            a = random_partition(spec.n, c, _derived_seed(spec.seed, _STREAM_A, c, t))
            cfg = _point_cfg(spec, c, t)
            for m in spec.metrics:
                values[m].append(_evaluate(m, a, a, cfg))
        rows.extend(_aggregate(values, c, 0.0, spec.trials))
    return SweepResult("self", tuple(rows), spec)


def run_flip_sweep(truth: Partition, spec: SweepSpec) -> SweepResult:
    """Score the given partition against flipped copies of itself.

    Kappa rows carry the matching theoretical value for the partition's
    community count.
    """
    if truth.c < 2:
        raise ValidationError("flip sweep needs a partition with at least two communities")
    rows: list[SweepRow] = []
    for fraction in spec.flip_fractions:
        fkey = _fraction_key(fraction)
        values: dict[str, list[float]] = {m: [] for m in spec.metrics}
        for t in range(spec.trials):
            flipped = flip_labels(
                truth, fraction, _derived_seed(spec.seed, _STREAM_FLIP, fkey, t)
            )
            cfg = _point_cfg(spec, fkey, t)
            for m in spec.metrics:
                values[m].append(_evaluate(m, truth, flipped, cfg))
        theory = {"kappa": theoretical_kappa(fraction, truth.c)}
        rows.extend(_aggregate(values, truth.c, fraction, spec.trials, theory))
    return SweepResult("flip", tuple(rows), spec)


def run_varying_b_sweep(spec: SweepSpec, c_a: int) -> SweepResult:
    """Fix one random partition at c_a communities per trial and sweep the
    community count of its independent partner."""
    if not spec.c_values:
        raise ValidationError("varying-b sweep needs c_values")
    if not min(spec.c_values) <= c_a <= max(spec.c_values):
        raise ValidationError("c_a must lie within the swept range")
    rows: list[SweepRow] = []
    fixed = [
        random_partition(spec.n, c_a, _derived_seed(spec.seed, _STREAM_A, c_a, t))
        for t in range(spec.trials)
    ]
    for c in spec.c_values:
        values: dict[str, list[float]] = {m: [] for m in spec.metrics}
        for t in range(spec.trials):
            b = random_partition(spec.n, c, _derived_seed(spec.seed, _STREAM_B, c, t))
            cfg = _point_cfg(spec, c, t)
            for m in spec.metrics:
                values[m].append(_evaluate(m, fixed[t], b, cfg))
        rows.extend(_aggregate(values, c, 0.0, spec.trials))
    return SweepResult("varying-b", tuple(rows), spec)


def _fraction_key(fraction: float) -> int:
    return int(round(fraction * 10**9))
