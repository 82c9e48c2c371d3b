"""Optimal matching of computed communities to ground-truth communities.

The matching cost between computed community B_i and ground-truth community
A_j is the symmetric difference |B_i u A_j| - |B_i n A_j|.  Minimizing the
total cost of a one-to-one mapping is an integer program that reduces to the
linear assignment problem after padding the cost matrix square with zero
rows, so an optimal solution of the padded square problem restricted to the
real rows solves the rectangular one.

All costs are exact integers; no floating point enters the solve.  Among
equal-cost optima the solver returns the lexicographically smallest mapping
(ordered by computed id, comparing assigned ground-truth ids), which keeps
downstream confusion matrices reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ValidationError
from .partition import MultiPartition, Partition

BRUTE_FORCE_LIMIT = 9

# Row/column id 0 marks padding rows and "unmatched" dummy columns; real
# community ids are always >= 1.
PAD_ID = 0


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """Integer mapping costs, rows = computed communities, cols = truth.

    `row_sizes` carries |B_i| for rows built from partitions; it is required
    to price the dummy "unmatched" columns when there are more computed
    communities than ground-truth ones.
    """

    entries: np.ndarray
    row_ids: tuple[int, ...]
    col_ids: tuple[int, ...]
    row_sizes: tuple[int, ...] | None = None

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.int64)
        object.__setattr__(self, "entries", entries)
        if entries.ndim != 2 or entries.size == 0:
            raise ValidationError("cost matrix must be a non-empty 2-d array")
        if entries.min() < 0:
            raise ValidationError("mapping costs must be non-negative integers")
        if len(self.row_ids) != entries.shape[0] or len(self.col_ids) != entries.shape[1]:
            raise ValidationError("row/col ids must match the matrix shape")

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape  # type: ignore[return-value]


@dataclass(frozen=True)
class Alignment:
    """One-to-one map computed id -> ground-truth id plus total cost.

    `unmatched` lists computed communities assigned to dummy columns, which
    only happens when there are more computed communities than ground-truth
    ones; their per-community cost (all member nodes unmatched) is included
    in `total_cost`.
    """

    mapping: dict[int, int]
    unmatched: frozenset[int]
    total_cost: int


def cost_matrix_from_entries(entries: np.ndarray | list) -> CostMatrix:
    """Wrap a raw integer matrix with default ids 1..c / 1..c*."""
    entries = np.asarray(entries, dtype=np.int64)
    if entries.ndim != 2:
        raise ValidationError("cost matrix must be 2-d")
    rows, cols = entries.shape
    return CostMatrix(entries, tuple(range(1, rows + 1)), tuple(range(1, cols + 1)))


def build_cost_matrix(
    computed: Partition | MultiPartition, truth: Partition | MultiPartition
) -> CostMatrix:
    """Symmetric-difference costs |B_i u A_j| - |B_i n A_j| for all pairs.

    Accepts plain or overlapping partitions; a plain partition is treated as
    its singleton-set embedding.
    """
    comp = computed.to_multi() if isinstance(computed, Partition) else computed
    tru = truth.to_multi() if isinstance(truth, Partition) else truth
    if comp.n != tru.n:
        raise ValidationError(
            f"partitions cover different node counts: {comp.n} vs {tru.n}"
        )
    mb = _membership(comp)
    ma = _membership(tru)
    inter = mb @ ma.T
    sb = mb.sum(axis=1).astype(np.int64)
    sa = ma.sum(axis=1).astype(np.int64)
    entries = sb[:, None] + sa[None, :] - 2 * inter
    return CostMatrix(
        entries,
        tuple(range(1, comp.c + 1)),
        tuple(range(1, tru.c + 1)),
        row_sizes=tuple(int(s) for s in sb),
    )


def _membership(mp: MultiPartition) -> np.ndarray:
    m = np.zeros((mp.c, mp.n), dtype=np.int64)
    for node, s in enumerate(mp.label_sets):
        for cid in s:
            m[cid - 1, node] = 1
    return m


def pad_square(cm: CostMatrix) -> CostMatrix:
    """Append zero rows until the matrix is square.

    Requires rows <= cols.  Padding rows get id 0 and size 0; the solver
    skips them when reading off the mapping.
    """
    rows, cols = cm.shape
    if rows > cols:
        raise ValidationError("padding requires no more rows than columns")
    if rows == cols:
        return cm
    entries = np.vstack([cm.entries, np.zeros((cols - rows, cols), dtype=np.int64)])
    row_ids = cm.row_ids + (PAD_ID,) * (cols - rows)
    row_sizes = None if cm.row_sizes is None else cm.row_sizes + (0,) * (cols - rows)
    return CostMatrix(entries, row_ids, cm.col_ids, row_sizes)


def solve_assignment(cm: CostMatrix) -> Alignment:
    """Minimum-cost one-to-one mapping of computed to ground-truth ids.

    Rectangular matrices with more columns are padded square internally;
    matrices with more real rows than columns get one dummy column per
    surplus row priced at the row's community size (requires `row_sizes`).
    Ties are broken toward the lexicographically smallest mapping, with
    "unmatched" ordering after every real ground-truth id.
    """
    entries = cm.entries
    row_ids = list(cm.row_ids)
    col_ids = list(cm.col_ids)
    real_rows = [i for i, rid in enumerate(row_ids) if rid != PAD_ID]

    if len(real_rows) > len(col_ids):
        if cm.row_sizes is None:
            raise ValidationError(
                "more computed communities than ground-truth ones: "
                "community sizes are required to price unmatched mappings"
            )
        extra = len(real_rows) - len(col_ids)
        sizes = np.asarray(cm.row_sizes, dtype=np.int64)
        dummy = np.repeat(sizes[:, None], extra, axis=1)
        entries = np.hstack([entries, dummy])
        col_ids = col_ids + [PAD_ID] * extra

    rows, cols = entries.shape
    if rows < cols:
        pad = np.zeros((cols - rows, cols), dtype=np.int64)
        entries = np.vstack([entries, pad])
        row_ids = row_ids + [PAD_ID] * (cols - rows)

    row_match = _lex_smallest_matching(entries, row_ids, col_ids)

    mapping: dict[int, int] = {}
    unmatched: set[int] = set()
    total = 0
    for i in real_rows:
        j = row_match[i]
        total += int(entries[i, j])
        if col_ids[j] == PAD_ID:
            unmatched.add(row_ids[i])
        else:
            mapping[row_ids[i]] = col_ids[j]
    return Alignment(mapping, frozenset(unmatched), total)


def brute_force_assignment(cm: CostMatrix) -> Alignment:
    """Exhaustive-minimum oracle over all injective row -> column mappings.

    Refuses matrices with more than 9 columns (factorial enumeration).
    Enumeration order makes the returned mapping the lexicographically
    smallest optimum, matching the solver's tie-break.
    """
    entries = cm.entries
    col_ids = list(cm.col_ids)
    real_rows = sorted(
        (i for i, rid in enumerate(cm.row_ids) if rid != PAD_ID),
        key=lambda i: cm.row_ids[i],
    )

    if len(real_rows) > len(col_ids):
        if cm.row_sizes is None:
            raise ValidationError(
                "more computed communities than ground-truth ones: "
                "community sizes are required to price unmatched mappings"
            )
        extra = len(real_rows) - len(col_ids)
        sizes = np.asarray(cm.row_sizes, dtype=np.int64)
        entries = np.hstack([entries, np.repeat(sizes[:, None], extra, axis=1)])
        col_ids = col_ids + [PAD_ID] * extra

    cols = len(col_ids)
    if cols > BRUTE_FORCE_LIMIT:
        raise ValidationError(
            f"brute-force enumeration refused for {cols} > {BRUTE_FORCE_LIMIT} columns"
        )

    # Column candidates sorted real-ids-first so that earlier permutation
    # tuples are lexicographically smaller mappings.
    order = sorted(range(cols), key=lambda j: (col_ids[j] == PAD_ID, col_ids[j]))
    best_cost: int | None = None
    best_choice: tuple[int, ...] | None = None
    for perm in itertools.permutations(order, len(real_rows)):
        cost = 0
        for i, j in zip(real_rows, perm):
            cost += int(entries[i, j])
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best_choice = perm

    assert best_cost is not None and best_choice is not None
    mapping: dict[int, int] = {}
    unmatched: set[int] = set()
    for i, j in zip(real_rows, best_choice):
        if col_ids[j] == PAD_ID:
            unmatched.add(cm.row_ids[i])
        else:
            mapping[cm.row_ids[i]] = col_ids[j]
    return Alignment(mapping, frozenset(unmatched), best_cost)


def _lex_smallest_matching(
    entries: np.ndarray, row_ids: list[int], col_ids: list[int]
) -> np.ndarray:
    """Optimal square assignment, lexicographically smallest over real rows.

    Solves once for the optimal value, derives an optimal dual pair, then
    greedily re-matches each real row (in id order) to its smallest
    admissible column among the reduced-cost-zero edges, which exactly
    characterize the edges usable by some optimum.
    """
    k = entries.shape[0]
    ri, ci = linear_sum_assignment(entries)
    row_match = np.empty(k, dtype=np.int64)
    row_match[ri] = ci

    u, v = _optimal_duals(entries, row_match)
    tight = (entries - u[:, None] - v[None, :]) == 0

    col_match = np.empty(k, dtype=np.int64)
    col_match[row_match] = np.arange(k)

    # Candidate columns per row: ascending real ids first, dummies last.
    col_order = sorted(range(k), key=lambda j: (col_ids[j] == PAD_ID, col_ids[j]))
    col_rank = np.empty(k, dtype=np.int64)
    col_rank[col_order] = np.arange(k)

    fixed_rows = np.zeros(k, dtype=bool)
    for i in sorted(
        (i for i in range(k) if row_ids[i] != PAD_ID), key=lambda i: row_ids[i]
    ):
        candidates = np.flatnonzero(tight[i])
        candidates = candidates[np.argsort(col_rank[candidates], kind="stable")]
        for j in candidates:
            if col_rank[j] >= col_rank[row_match[i]]:
                break
            if _reroute(int(i), int(j), tight, row_match, col_match, fixed_rows):
                break
        fixed_rows[i] = True
    return row_match


def _optimal_duals(entries: np.ndarray, row_match: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Dual potentials (u, v) with u_i + v_j <= c_ij, tight on the matching.

    Bellman-Ford over column potentials: relax v_j against
    v_{match(i)} + c_ij - c_{i,match(i)} until stable.  Convergence within k
    rounds is guaranteed because the matching is optimal (no negative
    alternating cycles).
    """
    k = entries.shape[0]
    base = entries[np.arange(k), row_match]
    v = np.zeros(k, dtype=np.int64)
    for _ in range(k + 1):
        cand = (v[row_match][:, None] + entries - base[:, None]).min(axis=0)
        new = np.minimum(v, cand)
        if np.array_equal(new, v):
            break
        v = new
    else:
        raise AssertionError("dual potentials failed to converge on an optimal matching")
    u = base - v[row_match]
    return u, v


def _reroute(
    i: int,
    j: int,
    tight: np.ndarray,
    row_match: np.ndarray,
    col_match: np.ndarray,
    fixed_rows: np.ndarray,
) -> bool:
    """Try to give column j to row i, re-matching the displaced row.

    Searches an alternating path through tight edges from the displaced row
    to the column row i released, moving only non-fixed rows; on failure the
    matching is left unchanged.
    """
    displaced = int(col_match[j])
    if fixed_rows[displaced]:
        return False
    freed = int(row_match[i])
    row_match[i] = j
    col_match[j] = i

    visited = np.zeros(tight.shape[1], dtype=bool)
    visited[j] = True
    path: list[tuple[int, int]] = []
    stack = [(displaced, iter(np.flatnonzero(tight[displaced])))]
    while stack:
        row, cols_iter = stack[-1]
        advanced = False
        for cand in cols_iter:
            cand = int(cand)
            if visited[cand]:
                continue
            visited[cand] = True
            if cand == freed:
                path.append((row, cand))
                for r, c in path:
                    row_match[r] = c
                    col_match[c] = r
                return True
            owner = int(col_match[cand])
            if not fixed_rows[owner]:
                path.append((row, cand))
                stack.append((owner, iter(np.flatnonzero(tight[owner]))))
                advanced = True
                break
        if not advanced:
            stack.pop()
            if path:
                path.pop()

    row_match[i] = freed
    col_match[freed] = i
    col_match[j] = displaced
    return False
