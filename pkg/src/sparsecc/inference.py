"""Two-group comparison of filtration curves.

The statistic is the sup over all thresholds of the absolute difference
between two integer step curves, normalized by sqrt(2(p-1)); its asymptotic
null distribution is the two-sided Kolmogorov-Smirnov law, whose survival
function is the alternating series 2 * sum_i (-1)^(i-1) exp(-2 i^2 d^2).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .crosscorr import cross_correlate
from .dataset import PairedDataset, normalize_arrays
from .errors import CurveMismatch, NodeSetMismatch
from .filtration import (
    KIND_COMPONENTS,
    KINDS,
    FiltrationCurve,
    WeightedGraph,
    filtration_curves,
)
from ._parallel import ordered_map


@dataclass(eq=False)
class KSResult:
    """Outcome of a two-group curve comparison."""

    kind: str
    d_raw: int
    d_normalized: float
    p_asymptotic: float
    n_nodes: int
    p_permutation: float | None = None
    n_perm: int | None = None
    seed: int | None = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": self.kind,
                "d_raw": self.d_raw,
                "d_normalized": self.d_normalized,
                "p_asymptotic": self.p_asymptotic,
                "p_permutation": self.p_permutation,
                "n_nodes": self.n_nodes,
                "n_perm": self.n_perm,
                "seed": self.seed,
            }
        )


def sup_distance(c1: FiltrationCurve, c2: FiltrationCurve) -> int:
    """Max absolute difference between two step curves over all thresholds.

    Both one-sided limits are evaluated at every breakpoint of either curve;
    step functions cannot differ anywhere else.
    """
    if c1.kind != c2.kind:
        raise CurveMismatch(f"curve kinds differ: {c1.kind} vs {c2.kind}")
    if c1.n_nodes != c2.n_nodes:
        raise CurveMismatch(f"node counts differ: {c1.n_nodes} vs {c2.n_nodes}")
    grid = np.union1d(c1.breakpoints, c2.breakpoints)
    if grid.size == 0:
        return int(abs(int(c1.values[0]) - int(c2.values[0])))
    d_right = np.abs(c1.value_at(grid) - c2.value_at(grid)).max()
    d_left = np.abs(c1.left_limit(grid) - c2.left_limit(grid)).max()
    return int(max(d_right, d_left))


def ks_pvalue(d_normalized: float, tol: float = 1e-16) -> float:
    """Asymptotic two-sided survival probability at normalized distance d.

    Truncates the alternating series when the next term drops below ``tol``;
    the result is clipped into [0, 1].
    """
    if d_normalized < 0:
        raise ValueError("d_normalized must be >= 0")
    if tol <= 0:
        raise ValueError("tol must be > 0")
    if d_normalized == 0:
        return 1.0
    e = -2.0 * d_normalized * d_normalized
    total = 0.0
    for i in range(1, 100_000):
        term = math.exp(e * i * i)
        if term < tol:
            break
        total += term if i % 2 == 1 else -term
    return min(1.0, max(0.0, 2.0 * total))


def _group_curves(ds: PairedDataset, symmetrize: bool, block_size: int):
    cc = cross_correlate(ds, block_size=block_size, symmetrize=symmetrize)
    g = WeightedGraph.from_crosscorr(cc)
    count_curve, largest_curve, _ = filtration_curves(g, weight_transform="absolute")
    return {count_curve.kind: count_curve, largest_curve.kind: largest_curve}


def compare_groups(
    ds1: PairedDataset,
    ds2: PairedDataset,
    kind: str = KIND_COMPONENTS,
    symmetrize: bool = True,
    block_size: int = 1024,
) -> KSResult:
    """Full pipeline: cross-correlate, filtrate, sup-compare, p-value."""
    if kind not in KINDS:
        raise ValueError(f"unknown curve kind {kind!r}")
    if ds1.node_ids != ds2.node_ids:
        raise NodeSetMismatch("datasets cover different node sets")
    c1 = _group_curves(ds1, symmetrize, block_size)[kind]
    c2 = _group_curves(ds2, symmetrize, block_size)[kind]
    p = ds1.n_nodes
    d_raw = sup_distance(c1, c2)
    d_norm = d_raw / math.sqrt(2.0 * (p - 1))
    return KSResult(
        kind=kind,
        d_raw=d_raw,
        d_normalized=d_norm,
        p_asymptotic=ks_pvalue(d_norm),
        n_nodes=p,
    )


def _sup_for_rows(x, y, idx1, idx2, kind, symmetrize, block_size, node_ids):
    d1 = normalize_arrays(x[idx1], y[idx1], node_ids)
    d2 = normalize_arrays(x[idx2], y[idx2], node_ids)
    c1 = _group_curves(d1, symmetrize, block_size)[kind]
    c2 = _group_curves(d2, symmetrize, block_size)[kind]
    return sup_distance(c1, c2)


def permutation_test(
    ds1: PairedDataset,
    ds2: PairedDataset,
    kind: str = KIND_COMPONENTS,
    n_perm: int = 1000,
    seed: int = 0,
    symmetrize: bool = True,
    block_size: int = 1024,
    threads: int | None = None,
) -> float:
    """Group-label permutation p-value for the sup distance.

    Paired observations (rows) are pooled and reassigned to two groups of the
    original sizes; each permuted group is re-normalized before the pipeline
    runs. Replicate r draws from a stream seeded by (seed, r), so results do
    not depend on scheduling.
    """
    if n_perm < 1:
        raise ValueError("n_perm must be >= 1")
    if ds1.n_obs < 2 or ds2.n_obs < 2:
        raise ValueError("each group needs at least 2 paired observations")
    if ds1.node_ids != ds2.node_ids:
        raise NodeSetMismatch("datasets cover different node sets")
    x = np.vstack([ds1.x, ds2.x])
    y = np.vstack([ds1.y, ds2.y])
    n1, n_total = ds1.n_obs, ds1.n_obs + ds2.n_obs
    ids = ds1.node_ids

    d_obs = _sup_for_rows(
        x, y, np.arange(n1), np.arange(n1, n_total), kind, symmetrize, block_size, ids
    )

    def one_rep(rep: int) -> int:
        rng = np.random.default_rng(np.random.SeedSequence([seed, rep]))
        perm = rng.permutation(n_total)
        return _sup_for_rows(
            x, y, perm[:n1], perm[n1:], kind, symmetrize, block_size, ids
        )

    exceed = sum(d >= d_obs for d in ordered_map(one_rep, range(n_perm), threads))
    return (1 + exceed) / (1 + n_perm)


def random_pairing_null(ds: PairedDataset, seed: int = 0) -> PairedDataset:
    """Break the observation pairing with a random derangement of the y rows.

    No y row keeps its original partner. Column means and norms are
    permutation-invariant, so the result is still a valid normalized dataset.
    """
    n = ds.n_obs
    if n < 2:
        raise ValueError("need at least 2 observations to derange")
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    while True:
        perm = rng.permutation(n)
        if not (perm == np.arange(n)).any():
            break
    return PairedDataset(ds.x, ds.y[perm], ds.node_ids, ds.dropped_nodes)


def exact_sup_tail(p: int, c: int) -> float:
    """Exact P(sup |difference| >= c) for two aligned merge ladders of p-1 steps.

    Counts monotone lattice paths from (0,0) to (p-1,p-1) whose coordinate gap
    stays below c, via the two-term recursion on the grid. Exact but
    exponential in memory for large p; intended as a small-p cross-check of
    the asymptotic series, not a production path.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    if c < 0:
        raise ValueError("c must be >= 0")
    if c == 0:
        return 1.0
    m = p - 1
    # A[i][j] = number of monotone paths (0,0)->(i,j) with |i-j| < c throughout
    A = [[0] * (m + 1) for _ in range(m + 1)]
    A[0][0] = 1
    for i in range(m + 1):
        for j in range(m + 1):
            if i == 0 and j == 0:
                continue
            if abs(i - j) >= c:
                A[i][j] = 0
                continue
            A[i][j] = (A[i - 1][j] if i > 0 else 0) + (A[i][j - 1] if j > 0 else 0)
    return 1.0 - A[m][m] / math.comb(2 * m, m)
