"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; the heavier sweep reproductions take a couple of minutes in total.
"""

import time
from contextlib import contextmanager

import numpy as np
import pytest

from commeval import (
    MultiPartition,
    NullEnsembleConfig,
    Partition,
    SweepSpec,
    brute_force_assignment,
    build_cost_matrix,
    calinski_harabasz,
    cost_matrix_from_entries,
    entropy,
    graph_from_edges,
    kappa_score,
    modularity,
    nmi,
    pad_square,
    partition_density,
    partition_from_labels,
    purity,
    rand_index,
    random_partition,
    rnmi,
    run_flip_sweep,
    run_independent_sweep,
    run_self_sweep,
    run_varying_b_sweep,
    solve_assignment,
    theoretical_kappa,
)
from commeval.external import cnmi, mutual_information
from commeval.internal import PointSet

TRUTH = partition_from_labels([1, 1, 1, 1, 1, 1, 2, 2, 3, 3])


@contextmanager
def criterion(num, description, budget_s):
    start = time.perf_counter()
    try:
        yield
    except Exception:
        print(f"\ncriterion {num:2d} ({description}): FAIL")
        raise
    elapsed = time.perf_counter() - start
    assert elapsed < budget_s, f"criterion {num} exceeded {budget_s}s ({elapsed:.1f}s)"
    print(f"\ncriterion {num:2d} ({description}): PASS [{elapsed:.1f}s]")


def test_criterion_1_golden_values():
    with criterion(1, "golden values, tol 0.005", budget_s=1.0):
        assert purity(partition_from_labels([2, 2, 2, 2, 1, 1, 1, 1, 3, 3]), TRUTH) == pytest.approx(0.80, abs=0.005)
        assert purity(partition_from_labels([1, 1, 1, 4, 4, 4, 2, 2, 3, 3]), TRUTH) == pytest.approx(1.0, abs=0.005)

        assert rand_index(partition_from_labels([1, 1, 1, 4, 4, 4, 2, 2, 3, 3]), TRUTH) == pytest.approx(0.8, abs=0.005)
        assert rand_index(partition_from_labels([1, 1, 1, 1, 1, 1, 1, 2, 3, 3]), TRUTH) == pytest.approx(0.84, abs=0.005)
        assert rand_index(partition_from_labels([1, 1, 1, 1, 1, 2, 2, 2, 3, 3]), TRUTH) == pytest.approx(0.84, abs=0.005)

        assert entropy(TRUTH) == pytest.approx(1.37, abs=0.005)

        assert nmi(TRUTH, partition_from_labels([1, 1, 1, 1, 1, 1, 1, 2, 3, 3])) == pytest.approx(0.76, abs=0.005)
        assert nmi(TRUTH, partition_from_labels([1, 1, 1, 1, 1, 2, 2, 2, 3, 3])) == pytest.approx(0.77, abs=0.005)
        assert nmi(TRUTH, partition_from_labels([1, 1, 1, 1, 1, 1, 2, 2, 2, 3])) == pytest.approx(0.82, abs=0.005)

        assert kappa_score(partition_from_labels([1, 1, 1, 1, 1, 1, 2, 2, 2, 3]), TRUTH) == pytest.approx(0.82, abs=0.005)
        assert kappa_score(partition_from_labels([1, 1, 1, 1, 1, 2, 2, 2, 3, 3]), TRUTH) == pytest.approx(0.83, abs=0.005)


def test_criterion_2_monte_carlo_values():
    with criterion(2, "rNMI/cNMI Monte-Carlo, tol 0.05", budget_s=10.0):
        cfg = NullEnsembleConfig(sample_count=1000, seed=20240501)
        small_third = partition_from_labels([1, 1, 1, 1, 1, 1, 2, 2, 2, 3])
        even = partition_from_labels([1, 1, 1, 1, 1, 2, 2, 2, 3, 3])
        assert rnmi(TRUTH, small_third, cfg) == pytest.approx(0.57, abs=0.05)
        assert rnmi(TRUTH, even, cfg) == pytest.approx(0.47, abs=0.05)
        assert cnmi(TRUTH, small_third, cfg) == pytest.approx(0.76, abs=0.05)
        assert cnmi(TRUTH, even, cfg) == pytest.approx(0.64, abs=0.05)


def test_criterion_3_alignment_golden():
    with criterion(3, "alignment worked examples, exact", budget_s=1.0):
        truth = Partition(np.array([1, 1, 1, 1, 4, 4, 2, 2, 3, 3]))
        computed = Partition(np.array([3, 3, 3, 3, 3, 3, 3, 1, 1, 2]))
        cm = build_cost_matrix(computed, truth)
        # l_33 = 9: the third computed community {0..6} and ground-truth
        # community 3 = {8, 9} are disjoint, so the cost is 7 + 2
        expected = np.array([[6, 2, 2, 4], [5, 3, 1, 3], [3, 7, 9, 5]])
        assert np.array_equal(cm.entries, expected)
        al = solve_assignment(cm)
        assert al.mapping == {1: 2, 2: 3, 3: 1}
        assert al.total_cost == 6

        truth_o = MultiPartition(
            tuple(frozenset(s) for s in [{1}, {1}, {1}, {1}, {1, 2}, {1, 2}, {2}, {2}, {3}, {3}])
        )
        comp_o = MultiPartition(
            tuple(frozenset(s) for s in [{3}, {3}, {3}, {3}, {1}, {1, 3}, {1}, {1}, {2}, {2}])
        )
        cm_o = build_cost_matrix(comp_o, truth_o)
        expected_o = np.array([[6, 0, 6], [8, 6, 0], [1, 7, 7]])
        assert np.array_equal(cm_o.entries, expected_o)
        assert solve_assignment(cm_o).mapping == {1: 2, 2: 3, 3: 1}


def test_criterion_4_oracle_equivalence():
    with criterion(4, "assignment oracle, 200 instances", budget_s=30.0):
        rng = np.random.default_rng(20240502)
        for _ in range(200):
            rows = int(rng.integers(1, 8))
            cols = int(rng.integers(rows, 8))
            entries = rng.integers(0, int(rng.integers(2, 40)), size=(rows, cols))
            cm = cost_matrix_from_entries(entries)
            oracle = brute_force_assignment(cm)
            direct = solve_assignment(cm)
            assert direct.total_cost == oracle.total_cost
            assert direct.mapping == oracle.mapping
            via_padding = solve_assignment(pad_square(cm))
            assert via_padding.total_cost == oracle.total_cost
            assert via_padding.mapping == oracle.mapping


def test_criterion_5_independent_and_self_trends():
    with criterion(5, "independent/self sweeps, n=2000", budget_s=120.0):
        cfg = NullEnsembleConfig(sample_count=40, seed=5)
        spec = SweepSpec(
            n=2000,
            c_values=(10, 50, 100, 200),
            trials=10,
            seed=20240503,
            metrics=("nmi", "rnmi", "cnmi"),
            null_cfg=cfg,
        )
        indep = run_independent_sweep(spec)
        means = {(r.metric, r.c): r.mean for r in indep.rows}
        nmi_curve = [means[("nmi", c)] for c in spec.c_values]
        assert nmi_curve[-1] >= 0.3
        assert all(a < b for a, b in zip(nmi_curve, nmi_curve[1:]))
        for c in spec.c_values:
            assert abs(means[("rnmi", c)]) <= 0.02
            assert abs(means[("cnmi", c)]) <= 0.02

        self_spec = SweepSpec(
            n=2000,
            c_values=(10, 50, 100, 200),
            trials=10,
            seed=20240504,
            metrics=("kappa", "rnmi"),
            null_cfg=cfg,
        )
        self_sweep = run_self_sweep(self_spec)
        smeans = {(r.metric, r.c): r.mean for r in self_sweep.rows}
        for c in self_spec.c_values:
            assert smeans[("kappa", c)] == 1.0
        rnmi_curve = [smeans[("rnmi", c)] for c in self_spec.c_values]
        assert all(v < 1.0 for v in rnmi_curve)
        assert all(a > b for a, b in zip(rnmi_curve, rnmi_curve[1:]))


def test_criterion_6_varying_b_kappa_peak():
    with criterion(6, "varying-B sweep, kappa peaks at c_a", budget_s=120.0):
        spec = SweepSpec(
            n=2000,
            c_values=(10, 50, 100, 200),
            trials=10,
            seed=20240505,
            metrics=("kappa",),
            null_cfg=NullEnsembleConfig(sample_count=1, seed=1),
        )
        result = run_varying_b_sweep(spec, c_a=200)
        means = {r.c: r.mean for r in result.rows if r.metric == "kappa"}
        assert max(means, key=means.get) == 200


def test_criterion_7_flip_sweep_matches_theory():
    with criterion(7, "flip sweep vs theoretical kappa", budget_s=120.0):
        truth = random_partition(2000, 200, seed=20240506)
        fractions = tuple(round(0.1 * k, 1) for k in range(8))  # 0.0 .. 0.7
        spec = SweepSpec(
            n=2000,
            flip_fractions=fractions,
            trials=10,
            seed=20240507,
            metrics=("kappa",),
            null_cfg=NullEnsembleConfig(sample_count=1, seed=1),
        )
        result = run_flip_sweep(truth, spec)
        for row in result.rows:
            assert row.theory == pytest.approx(theoretical_kappa(row.fraction, truth.c))
            assert row.mean == pytest.approx(row.theory, abs=0.03)


def _block_truth(n=10000, low=200, high=400, step=37):
    sizes = []
    size, total = low, 0
    while total < n:
        take = min(size, n - total)
        sizes.append(take)
        total += take
        size = low + (size - low + step) % (high - low + 1)
    return partition_from_labels(np.repeat(np.arange(len(sizes)), sizes))


def _r_squared(x, y):
    x, y = np.asarray(x), np.asarray(y)
    design = np.vstack([x, np.ones_like(x)]).T
    _, residual, *_ = np.linalg.lstsq(design, y, rcond=None)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    return 1.0 - float(residual[0]) / ss_tot


def test_criterion_8_proportionality_on_blocks():
    with criterion(8, "kappa linear vs cNMI curved, n=10000", budget_s=300.0):
        truth = _block_truth()
        fractions = tuple(round(0.1 * k, 1) for k in range(10))  # 0.0 .. 0.9
        spec = SweepSpec(
            n=truth.n,
            flip_fractions=fractions,
            trials=5,
            seed=20240508,
            metrics=("kappa", "cnmi"),
            null_cfg=NullEnsembleConfig(sample_count=30, seed=9),
        )
        result = run_flip_sweep(truth, spec)
        kappa_means = [r.mean for r in result.rows if r.metric == "kappa"]
        cnmi_means = [r.mean for r in result.rows if r.metric == "cnmi"]
        r2_kappa = _r_squared(fractions, kappa_means)
        r2_cnmi = _r_squared(fractions, cnmi_means)
        assert r2_kappa >= 0.99
        assert r2_cnmi < 0.99
        assert r2_cnmi < r2_kappa
        # cNMI flattens out: the drop over the last half is smaller than
        # over the first half, kappa's stays essentially equal
        cnmi_first = cnmi_means[0] - cnmi_means[4]
        cnmi_last = cnmi_means[5] - cnmi_means[9]
        assert cnmi_first > cnmi_last


def test_criterion_9_internal_metric_values():
    with criterion(9, "internal metric golden values", budget_s=5.0):
        triangles = graph_from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        assert modularity(triangles, partition_from_labels([1] * 6)) == 0.0
        two = partition_from_labels([1, 1, 1, 2, 2, 2])
        assert modularity(triangles, two) == 0.5
        assert partition_density(triangles, two) == 1.0
        points = PointSet(np.array([[0.0], [1.0], [10.0], [11.0]]))
        ch = calinski_harabasz(points, partition_from_labels([1, 1, 2, 2]))
        assert abs(ch - 200.0) <= 1e-9


def test_criterion_10_property_suites():
    with criterion(10, "randomized property suites, 100+ cases", budget_s=120.0):
        rng = np.random.default_rng(20240509)

        def random_pair():
            n = int(rng.integers(2, 60))
            a = partition_from_labels(rng.integers(0, 6, size=n))
            b = partition_from_labels(rng.integers(0, 6, size=n))
            return a, b

        # metric ranges and symmetry
        for _ in range(100):
            a, b = random_pair()
            val = nmi(a, b)
            assert -1e-12 <= val <= 1 + 1e-12
            assert nmi(b, a) == pytest.approx(val, abs=1e-12)
            assert mutual_information(a, b) >= 0.0
            r = rand_index(a, b)
            assert 0.0 <= r <= 1.0
            assert rand_index(b, a) == pytest.approx(r, abs=1e-12)
            q = purity(a, b)
            assert 0.0 < q <= 1.0

        # relabeling invariance
        for _ in range(100):
            a, b = random_pair()
            perm = rng.permutation(a.c) + 1
            relabeled = Partition(perm[a.labels - 1])
            assert nmi(relabeled, b) == pytest.approx(nmi(a, b), abs=1e-12)
            assert rand_index(relabeled, b) == pytest.approx(rand_index(a, b), abs=1e-12)
            assert purity(relabeled, b) == pytest.approx(purity(a, b), abs=1e-12)

        # kappa(A, A) = 1
        for _ in range(100):
            n = int(rng.integers(3, 50))
            labels = rng.integers(0, 5, size=n)
            if len(set(labels.tolist())) < 2:
                labels[0] = labels.max() + 1
            p = partition_from_labels(labels)
            assert kappa_score(p, p) == pytest.approx(1.0, abs=1e-12)

        # purity split monotonicity
        for _ in range(100):
            n = int(rng.integers(4, 60))
            computed = partition_from_labels(rng.integers(0, 4, size=n))
            truth = partition_from_labels(rng.integers(0, 4, size=n))
            before = purity(computed, truth)
            sizes = computed.sizes()
            cid = int(rng.choice(np.flatnonzero(sizes >= 2))) + 1
            members = np.flatnonzero(computed.labels == cid)
            moved = rng.choice(members, size=len(members) // 2 + 1, replace=False)
            labels = computed.labels.copy()
            labels[moved] = computed.c + 1
            assert purity(partition_from_labels(labels), truth) >= before - 1e-12

        # idempotent normalization
        for _ in range(100):
            n = int(rng.integers(1, 60))
            raw = rng.integers(0, 9, size=n)
            once = partition_from_labels(raw)
            assert np.array_equal(partition_from_labels(once.labels).labels, once.labels)
