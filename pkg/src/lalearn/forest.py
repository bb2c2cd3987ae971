"""Bagged CART decision trees, built in-repo.

One implementation serves as both the probabilistic classifier (leaf
values are class-0 frequencies, Gini splits) and the error-reduction
regressor (leaf values are target means, variance-reduction splits).  The
model exposes the internals the learning-state featurization needs:
out-of-bag accuracy, feature importances, per-tree predictions, and tree
depths.

Training is vectorized level-by-level across *all* trees of the forest at
once: every open node of every tree is split in the same pass using
segmented prefix sums, which keeps the many small forests an active
learning experiment needs cheap.  Per-tree seeds are derived from the
master seed and the tree index, so results are reproducible and
independent of any scheduling.

Split semantics, shared by every code path:

* candidate thresholds are midpoints of consecutive distinct sorted values;
* the best split maximizes the impurity decrease
  ``imp(node) - (n_l * imp(left) + n_r * imp(right)) / n``;
* ties break toward the smallest threshold, then the smallest feature
  index;
* a node becomes a leaf when it is pure, cannot satisfy
  ``min_leaf_size`` on both sides, sits at ``max_depth``, or when no
  split has a strictly positive decrease.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .seeding import derive_seed

FOREST_FORMAT = 1


@dataclass(frozen=True)
class ForestConfig:
    """Training configuration.

    ``features_per_split=None`` resolves to ``ceil(sqrt(D))`` at fit time.
    ``max_depth=None`` means unbounded.
    """

    n_trees: int = 50
    max_depth: int | None = None
    min_leaf_size: int = 1
    features_per_split: int | None = None
    mode: str = "classification"

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be at least 1")
        if self.min_leaf_size < 1:
            raise ValueError("min_leaf_size must be at least 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be non-negative")
        if self.features_per_split is not None and self.features_per_split < 1:
            raise ValueError("features_per_split must be at least 1")
        if self.mode not in ("classification", "regression"):
            raise ValueError(f"unknown mode {self.mode!r}")


def regressor_config(n_trees: int = 100, min_leaf_size: int = 80, **kwargs) -> ForestConfig:
    """Default configuration for the error-reduction regressor.

    The wide leaves matter: per-episode loss reductions are individually
    noisy, and a regressor that chases them point by point ranks
    candidates by noise instead of signal.
    """
    return ForestConfig(n_trees=n_trees, min_leaf_size=min_leaf_size,
                        mode="regression", **kwargs)


class ForestModel:
    """A trained forest.

    Nodes of all trees live in shared flat arrays; ``roots[i]`` is the node
    index of tree ``i``.  ``feature[j] == -1`` marks a leaf.  Sibling nodes
    occupy adjacent slots (``right == left + 1``), which the prediction walk
    relies on.  Models are immutable after training and safe to share
    between processes.
    """

    def __init__(self, *, mode, config, seed, n_features, roots, feature,
                 threshold, left, right, value, count, tree_depths,
                 importances_raw, bootstrap=None, n_train=None):
        self.mode = mode
        self.config = config
        self.seed = seed
        self.n_features = n_features
        self.roots = np.asarray(roots, dtype=np.int64)
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)
        self.count = np.asarray(count, dtype=np.int64)
        self.tree_depths = np.asarray(tree_depths, dtype=np.int64)
        self.importances_raw = np.asarray(importances_raw, dtype=np.float64)
        self.bootstrap = bootstrap
        self.n_train = n_train
        internal = self.feature >= 0
        if not np.array_equal(self.right[internal], self.left[internal] + 1):
            raise ValueError("sibling nodes must occupy adjacent slots")

    @property
    def n_trees(self) -> int:
        return len(self.roots)

    # ---- prediction -------------------------------------------------

    def _leaf_values(self, X: np.ndarray) -> np.ndarray:
        """Leaf value reached in every tree for every row: shape (n_trees, N)."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        n, d = X.shape
        if n == 0:
            return np.empty((self.n_trees, 0))
        # walk all (tree, sample) pairs level by level, compacting away the
        # pairs that already reached a leaf; x > threshold steps to the
        # right sibling, which sits one slot after the left child
        flat = np.ascontiguousarray(X).reshape(-1)
        node = np.repeat(self.roots, n)
        alive = np.flatnonzero(self.feature[node] >= 0)
        current = node[alive]
        rows = (alive % n) * d
        feat = self.feature[current]
        while len(alive):
            xv = flat[rows + feat]
            nxt = self.left[current] + (xv > self.threshold[current])
            feat = self.feature[nxt]
            done = feat < 0
            if done.any():
                finished = alive[done]
                node[finished] = nxt[done]
                keep = ~done
                alive = alive[keep]
                current = nxt[keep]
                rows = rows[keep]
                feat = feat[keep]
            else:
                current = nxt
        return self.value[node].reshape(self.n_trees, n)

    def tree_predictions_batch(self, X) -> np.ndarray:
        """Per-tree predictions for a batch of rows, shape (n_trees, N)."""
        return self._leaf_values(X)

    def tree_predictions(self, x) -> np.ndarray:
        """Per-tree predictions for a single point, shape (n_trees,)."""
        return self._leaf_values(np.asarray(x, dtype=np.float64)[None, :])[:, 0]

    def predict_proba_batch(self, X) -> np.ndarray:
        """Class-0 probability (mean of leaf class-0 frequencies) per row."""
        if self.mode != "classification":
            raise ValueError("predict_proba requires a classification forest")
        return self._leaf_values(X).mean(axis=0)

    def predict_proba(self, x) -> float:
        return float(self.predict_proba_batch(np.asarray(x, dtype=np.float64)[None, :])[0])

    def predict_regression_batch(self, X) -> np.ndarray:
        """Mean of leaf target means per row."""
        if self.mode != "regression":
            raise ValueError("predict_regression requires a regression forest")
        return self._leaf_values(X).mean(axis=0)

    def predict_regression(self, x) -> float:
        return float(self.predict_regression_batch(np.asarray(x, dtype=np.float64)[None, :])[0])

    # ---- introspection ----------------------------------------------

    def oob_accuracy(self, features, targets, fallback: float = 1.0) -> float:
        """Out-of-bag accuracy on the training set.

        Each sample is voted on by the trees whose bootstrap excludes it
        (one hard vote per tree, ties toward class 0).  Samples in every
        bootstrap are skipped; when no sample has an excluding tree the
        declared ``fallback`` is returned so the learning-state feature
        stays finite on tiny labeled sets.
        """
        if self.mode != "classification":
            raise ValueError("oob_accuracy requires a classification forest")
        if self.bootstrap is None:
            raise ValueError("bootstrap records were not kept (model was deserialized)")
        features = np.atleast_2d(np.asarray(features, dtype=np.float64))
        targets = np.asarray(targets)
        n = features.shape[0]
        if n != self.n_train or n != len(targets):
            raise ValueError("oob_accuracy expects the exact training set")
        leaf = self._leaf_values(features)
        included = np.zeros((self.n_trees, n), dtype=bool)
        included[np.arange(self.n_trees)[:, None], self.bootstrap] = True
        excluding = ~included
        n_votes = excluding.sum(axis=0)
        votes_class1 = ((leaf < 0.5) & excluding).sum(axis=0)
        covered = n_votes > 0
        if not covered.any():
            return float(fallback)
        predicted = np.where(votes_class1 * 2 > n_votes, 1, 0)
        return float(np.mean(predicted[covered] == targets[covered]))

    def feature_importances(self) -> np.ndarray:
        """Mean impurity decrease per feature, normalized to sum to 1.

        All-zero when the forest contains no split at all.
        """
        total = self.importances_raw.sum()
        if total <= 0.0:
            return np.zeros(self.n_features)
        return self.importances_raw / total

    def avg_tree_depth(self) -> float:
        """Mean over trees of the maximum leaf depth."""
        return float(self.tree_depths.mean())


# ---- impurity helpers ------------------------------------------------


def gini_impurity(labels) -> float:
    """Gini impurity of a 0/1 label multiset."""
    y = np.asarray(labels, dtype=np.float64)
    n = float(len(y))
    if n == 0:
        raise ValueError("empty label multiset")
    n1 = float(y.sum())
    n0 = n - n1
    return 1.0 - (n0 * n0 + n1 * n1) / (n * n)


def variance_impurity(targets) -> float:
    """Population variance of a target multiset."""
    y = np.asarray(targets, dtype=np.float64)
    n = float(len(y))
    if n == 0:
        raise ValueError("empty target multiset")
    s = float(np.cumsum(y)[-1])
    s2 = float(np.cumsum(y * y)[-1])
    m = s / n
    return s2 / n - m * m


def best_split(feature_column, targets, criterion: str = "gini",
               min_leaf_size: int = 1):
    """Best threshold for one feature, or ``None`` when no split exists.

    Scans midpoints of consecutive distinct sorted values and returns
    ``(threshold, impurity_decrease)`` maximizing the decrease; ties break
    toward the smallest threshold.  A constant column (or one whose every
    boundary violates ``min_leaf_size``) yields ``None``.
    """
    x = np.asarray(feature_column, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError("feature_column and targets must be equally long vectors")
    n = len(x)
    if n < 2:
        raise ValueError("best_split needs at least 2 samples")
    if criterion not in ("gini", "variance"):
        raise ValueError(f"unknown criterion {criterion!r}")
    if criterion == "gini" and not np.isin(y, (0.0, 1.0)).all():
        raise ValueError("gini criterion expects 0/1 targets")
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ys = y[order]
    if xs[0] == xs[-1]:
        return None
    nf = float(n)
    nl = np.arange(1, n, dtype=np.float64)
    nr = nf - nl
    c1 = np.cumsum(ys)[:-1]
    if criterion == "gini":
        tot1 = float(np.cumsum(ys)[-1])
        parent = 1.0 - ((nf - tot1) ** 2 + tot1 ** 2) / (nf * nf)
        l1 = c1
        l0 = nl - l1
        r1 = tot1 - l1
        r0 = nr - r1
        gl = 1.0 - (l0 * l0 + l1 * l1) / (nl * nl)
        gr = 1.0 - (r0 * r0 + r1 * r1) / (nr * nr)
    else:
        c2 = np.cumsum(ys * ys)[:-1]
        tot1 = float(np.cumsum(ys)[-1])
        tot2 = float(np.cumsum(ys * ys)[-1])
        parent = tot2 / nf - (tot1 / nf) ** 2
        ml = c1 / nl
        mr = (tot1 - c1) / nr
        gl = c2 / nl - ml * ml
        gr = (tot2 - c2) / nr - mr * mr
    gain = parent - (nl * gl + nr * gr) / nf
    valid = (xs[1:] > xs[:-1]) & (nl >= min_leaf_size) & (nr >= min_leaf_size)
    if not valid.any():
        return None
    gain = np.where(valid, gain, -np.inf)
    best = int(np.argmax(gain))
    threshold = (xs[best] + xs[best + 1]) * 0.5
    return float(threshold), float(gain[best])


# ---- training --------------------------------------------------------


def _grow(arr, need, fill):
    if len(arr) >= need:
        return arr
    new = np.full(max(need, 2 * len(arr)), fill, dtype=arr.dtype)
    new[:len(arr)] = arr
    return new


_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_WEYL = np.uint64(0xB5297A4D3F84D5B9)


def _finalize(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def bootstrap_matrix(seed: int, n_trees: int, n: int) -> np.ndarray:
    """Per-tree bootstrap index multisets, shape (n_trees, n).

    Draw ``j`` of tree ``t`` is a counted splitmix64 hash of the tree's
    derived seed, reduced mod ``n``: reproducible for any scheduling and
    cheap to generate in bulk.
    """
    tree_seeds = np.array([derive_seed(seed, "tree", t) for t in range(n_trees)],
                          dtype=np.uint64)
    counters = np.arange(1, n + 1, dtype=np.uint64) * _GOLDEN
    z = _finalize(tree_seeds[:, None] + counters[None, :])
    return (z % np.uint64(n)).astype(np.int64)


def feature_subsets(tree_seeds: np.ndarray, node_ids: np.ndarray, d: int,
                    k: int) -> np.ndarray:
    """Size-k feature subsets for nodes identified by (tree seed, node id).

    Each of the ``d`` features gets a counted hash of the node's identity;
    the ``k`` smallest win.  Stateless, so the draw depends only on the
    tree seed and the node's within-tree creation index.
    """
    z = (np.asarray(tree_seeds, dtype=np.uint64)[:, None]
         + np.asarray(node_ids, dtype=np.uint64)[:, None] * _WEYL
         + np.arange(1, d + 1, dtype=np.uint64)[None, :] * _GOLDEN)
    u = _finalize(z)
    picked = np.argpartition(u, k - 1, axis=1)[:, :k]
    return np.sort(picked, axis=1)


def train_forest(features, targets, config: ForestConfig | None = None,
                 seed: int = 0) -> ForestModel:
    """Train a bagged forest on ``features``/``targets``.

    Every tree is fit on an N-sample bootstrap generated by a counted hash
    of ``(seed, tree_index)``; per-split feature subsets come from a
    generator seeded the same way.  Classification targets must be 0/1.
    """
    config = config or ForestConfig()
    X = np.ascontiguousarray(np.atleast_2d(features), dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64).ravel()
    n, d = X.shape
    if n == 0:
        raise ValueError("empty training set")
    if len(y) != n:
        raise ValueError("targets must match features row count")
    if not np.all(np.isfinite(X)) or not np.all(np.isfinite(y)):
        raise ValueError("training data contains non-finite values")
    classification = config.mode == "classification"
    if classification and not np.isin(y, (0.0, 1.0)).all():
        raise ValueError("classification targets must be 0 or 1")

    k = config.features_per_split or math.ceil(math.sqrt(d))
    k = min(k, d)
    config = replace(config, features_per_split=k)
    T = config.n_trees
    min_leaf = config.min_leaf_size
    max_depth = math.inf if config.max_depth is None else config.max_depth

    bootstrap = bootstrap_matrix(seed, T, n)
    gx = X[bootstrap.reshape(-1)]
    gy = y[bootstrap.reshape(-1)]
    tree_seeds = np.array([derive_seed(seed, "tree", t) for t in range(T)],
                          dtype=np.uint64)

    cap = max(64, 4 * T)
    g_feat = np.full(cap, -1, dtype=np.int64)
    g_thr = np.full(cap, np.nan)
    g_left = np.full(cap, -1, dtype=np.int64)
    g_right = np.full(cap, -1, dtype=np.int64)
    g_val = np.full(cap, np.nan)
    g_cnt = np.zeros(cap, dtype=np.int64)
    n_nodes = T
    tree_depths = np.zeros(T, dtype=np.int64)
    imp_raw = np.zeros(d)

    open_gid = np.arange(T)
    open_tree = np.arange(T)
    open_pt = np.zeros(T, dtype=np.int64)   # within-tree creation index
    tree_next_pt = np.ones(T, dtype=np.int64)
    row_ord = np.repeat(np.arange(T), n)
    depth = 0

    while len(open_gid):
        P = len(open_gid)
        rows = np.flatnonzero(row_ord >= 0)
        o = row_ord[rows]
        rows_g = rows[np.argsort(o, kind="stable")]
        sizes = np.bincount(o, minlength=P)
        starts = np.cumsum(sizes) - sizes
        ends = starts + sizes - 1
        y_g = gy[rows_g]
        szf = sizes.astype(np.float64)
        cs1 = np.cumsum(y_g)
        tot1 = cs1[ends] - np.where(starts > 0, cs1[np.maximum(starts - 1, 0)], 0.0)
        if classification:
            value = (szf - tot1) / szf
            parent_imp = 1.0 - ((szf - tot1) ** 2 + tot1 ** 2) / (szf * szf)
            pure = (tot1 == 0.0) | (tot1 == szf)
        else:
            cs2 = np.cumsum(y_g * y_g)
            tot2 = cs2[ends] - np.where(starts > 0, cs2[np.maximum(starts - 1, 0)], 0.0)
            value = tot1 / szf
            parent_imp = tot2 / szf - value * value
            mn = np.minimum.reduceat(y_g, starts)
            pure = mn == np.maximum.reduceat(y_g, starts)
            value = np.where(pure, mn, value)  # exact constant, no float dust
        g_val[open_gid] = value
        g_cnt[open_gid] = sizes

        eligible = ~pure & (sizes >= 2 * min_leaf) & (depth < max_depth)
        split_mask = np.zeros(P, dtype=bool)
        pick_data = None
        elig = np.flatnonzero(eligible)
        if len(elig):
            es = sizes[elig]
            eb = np.cumsum(es) - es
            total_e = int(es.sum())
            pos_in_node = np.arange(total_e) - np.repeat(eb, es)
            erows = rows_g[np.repeat(starts[elig], es) + pos_in_node]

            if k < d:
                subs = feature_subsets(tree_seeds[open_tree[elig]],
                                       open_pt[elig], d, k)
            else:
                subs = np.broadcast_to(np.arange(d), (len(elig), d))
            kk = subs.shape[1]

            seg_sizes = np.repeat(es, kk)
            seg_starts = np.cumsum(seg_sizes) - seg_sizes
            total_occ = int(seg_sizes.sum())
            occ_seg = np.repeat(np.arange(len(elig) * kk), seg_sizes)
            occ_off = np.repeat(seg_starts, seg_sizes)
            occ_pos = np.arange(total_occ) - occ_off
            occ_node = occ_seg // kk
            occ_rows = erows[eb[occ_node] + occ_pos]
            occ_feat = subs.reshape(-1)[occ_seg]
            vals = gx[occ_rows, occ_feat]
            tars = gy[occ_rows]

            sorder = np.lexsort((vals, occ_seg))
            sv = vals[sorder]
            st = tars[sorder]
            c1 = np.cumsum(st)
            l1 = c1 - np.where(occ_off > 0, c1[np.maximum(occ_off - 1, 0)], 0.0)
            nn_i = es[occ_node]
            nn = nn_i.astype(np.float64)
            nl = (occ_pos + 1).astype(np.float64)
            nr = nn - nl
            etot1 = tot1[elig]
            # last positions in each segment have nr == 0; they are masked
            # below, so the nan they produce here is harmless
            with np.errstate(divide="ignore", invalid="ignore"):
                if classification:
                    tl1 = l1
                    tl0 = nl - tl1
                    tr1 = etot1[occ_node] - tl1
                    tr0 = nr - tr1
                    gl = 1.0 - (tl0 * tl0 + tl1 * tl1) / (nl * nl)
                    gr = 1.0 - (tr0 * tr0 + tr1 * tr1) / (nr * nr)
                else:
                    c2 = np.cumsum(st * st)
                    l2 = c2 - np.where(occ_off > 0, c2[np.maximum(occ_off - 1, 0)], 0.0)
                    etot2 = tot2[elig]
                    mean_l = l1 / nl
                    mean_r = (etot1[occ_node] - l1) / nr
                    gl = l2 / nl - mean_l * mean_l
                    gr = (etot2[occ_node] - l2) / nr - mean_r * mean_r
                gain = parent_imp[elig][occ_node] - (nl * gl + nr * gr) / nn

            next_differs = np.empty(total_occ, dtype=bool)
            next_differs[:-1] = sv[1:] > sv[:-1]
            next_differs[-1] = False
            valid = ((occ_pos < nn_i - 1) & next_differs
                     & (nl >= min_leaf) & (nr >= min_leaf))
            gain = np.where(valid, gain, -np.inf)
            node_max = np.maximum.reduceat(gain, seg_starts[np.arange(len(elig)) * kk])
            has = node_max > 0.0
            if has.any():
                cand = valid & has[occ_node] & (gain == node_max[occ_node])
                ci = np.flatnonzero(cand)
                cn = occ_node[ci]
                cthr = (sv[ci] + sv[ci + 1]) * 0.5
                cft = occ_feat[ci]
                psel = np.lexsort((cft, cthr, cn))
                first = np.ones(len(psel), dtype=bool)
                first[1:] = cn[psel][1:] != cn[psel][:-1]
                pick = psel[first]
                pn = cn[pick]
                pocc = ci[pick]
                pthr = cthr[pick]
                pfeat = cft[pick]
                np.add.at(imp_raw, pfeat,
                          nn[pocc] * parent_imp[elig][pn]
                          - (nl[pocc] * gl[pocc] + nr[pocc] * gr[pocc]))
                split_ord = elig[pn]
                split_mask[split_ord] = True
                pick_data = (split_ord, pfeat, pthr)

        if pick_data is not None:
            split_ord, pfeat, pthr = pick_data
            S = len(split_ord)
            need = n_nodes + 2 * S
            g_feat = _grow(g_feat, need, -1)
            g_thr = _grow(g_thr, need, np.nan)
            g_left = _grow(g_left, need, -1)
            g_right = _grow(g_right, need, -1)
            g_val = _grow(g_val, need, np.nan)
            g_cnt = _grow(g_cnt, need, 0)
            child_gid = np.arange(n_nodes, need)
            n_nodes = need
            split_gid = open_gid[split_ord]
            g_feat[split_gid] = pfeat
            g_thr[split_gid] = pthr
            g_left[split_gid] = child_gid[0::2]
            g_right[split_gid] = child_gid[1::2]

            # within-tree creation indices for the children: sequential per
            # tree, in split processing order
            split_tree = open_tree[split_ord]
            tree_counts = np.bincount(split_tree, minlength=T)
            by_tree = np.argsort(split_tree, kind="stable")
            sorted_tree = split_tree[by_tree]
            group_start = np.concatenate(
                [[0], np.flatnonzero(sorted_tree[1:] != sorted_tree[:-1]) + 1])
            group_sizes = np.diff(np.append(group_start, S))
            within = np.arange(S) - np.repeat(group_start, group_sizes)
            rank = np.empty(S, dtype=np.int64)
            rank[by_tree] = within
            left_pt = tree_next_pt[split_tree] + 2 * rank
            child_pt = np.empty(2 * S, dtype=np.int64)
            child_pt[0::2] = left_pt
            child_pt[1::2] = left_pt + 1
            tree_next_pt += 2 * tree_counts

            route_thr = np.full(P, np.nan)
            route_feat = np.zeros(P, dtype=np.int64)
            route_left = np.full(P, -1, dtype=np.int64)
            route_right = np.full(P, -1, dtype=np.int64)
            route_thr[split_ord] = pthr
            route_feat[split_ord] = pfeat
            route_left[split_ord] = 2 * np.arange(S)
            route_right[split_ord] = 2 * np.arange(S) + 1

            in_split = split_mask[o]
            srows = rows[in_split]
            so = o[in_split]
            xv = gx[srows, route_feat[so]]
            row_ord[srows] = np.where(xv <= route_thr[so], route_left[so], route_right[so])
            row_ord[rows[~in_split]] = -1
            leaf_trees = open_tree[~split_mask]
            if len(leaf_trees):
                np.maximum.at(tree_depths, leaf_trees, depth)
            open_gid = child_gid
            open_tree = np.repeat(open_tree[split_ord], 2)
            open_pt = child_pt
        else:
            row_ord[rows] = -1
            np.maximum.at(tree_depths, open_tree, depth)
            open_gid = np.empty(0, dtype=np.int64)
            open_tree = np.empty(0, dtype=np.int64)
            open_pt = np.empty(0, dtype=np.int64)
        depth += 1

    return ForestModel(
        mode=config.mode, config=config, seed=int(seed), n_features=d,
        roots=np.arange(T, dtype=np.int64),
        feature=g_feat[:n_nodes].copy(), threshold=g_thr[:n_nodes].copy(),
        left=g_left[:n_nodes].copy(), right=g_right[:n_nodes].copy(),
        value=g_val[:n_nodes].copy(), count=g_cnt[:n_nodes].copy(),
        tree_depths=tree_depths, importances_raw=imp_raw,
        bootstrap=bootstrap, n_train=n)


# ---- serialization ---------------------------------------------------


def _node_doc(model: ForestModel, gid: int) -> dict:
    if model.feature[gid] < 0:
        return {"value": float(model.value[gid]), "count": int(model.count[gid])}
    return {
        "feature": int(model.feature[gid]),
        "threshold": float(model.threshold[gid]),
        "count": int(model.count[gid]),
        "left": _node_doc(model, int(model.left[gid])),
        "right": _node_doc(model, int(model.right[gid])),
    }


def forest_to_doc(model: ForestModel) -> dict:
    """JSON-serializable document for a trained forest.

    Bootstrap bookkeeping is not persisted, so out-of-bag accuracy is
    unavailable on a reloaded model; predictions round-trip exactly.
    """
    cfg = model.config
    return {
        "format": FOREST_FORMAT,
        "mode": model.mode,
        "config": {
            "n_trees": cfg.n_trees,
            "max_depth": cfg.max_depth,
            "min_leaf_size": cfg.min_leaf_size,
            "features_per_split": cfg.features_per_split,
            "mode": cfg.mode,
        },
        "seed": int(model.seed),
        "n_features": int(model.n_features),
        "importances": [float(v) for v in model.importances_raw],
        "trees": [_node_doc(model, int(r)) for r in model.roots],
    }


def forest_from_doc(doc: dict) -> ForestModel:
    if doc.get("format") != FOREST_FORMAT:
        raise ValueError(f"unsupported forest format: {doc.get('format')!r}")
    cfg = ForestConfig(**doc["config"])
    feature, threshold, left, right, value, count = [], [], [], [], [], []
    depths = []

    def add_placeholder() -> int:
        feature.append(-1)
        threshold.append(np.nan)
        left.append(-1)
        right.append(-1)
        value.append(np.nan)
        count.append(0)
        return len(feature) - 1

    roots = []
    for tree in doc["trees"]:
        depths.append(0)
        root = add_placeholder()
        roots.append(root)
        # breadth-first allocation keeps siblings in adjacent slots
        queue = [(tree, root, 0)]
        while queue:
            node, gid, depth = queue.pop(0)
            count[gid] = int(node.get("count", 0))
            if "value" in node:
                value[gid] = float(node["value"])
                depths[-1] = max(depths[-1], depth)
                continue
            feature[gid] = int(node["feature"])
            threshold[gid] = float(node["threshold"])
            left[gid] = add_placeholder()
            right[gid] = add_placeholder()
            queue.append((node["left"], left[gid], depth + 1))
            queue.append((node["right"], right[gid], depth + 1))
    return ForestModel(
        mode=doc["mode"], config=cfg, seed=int(doc.get("seed", 0)),
        n_features=int(doc["n_features"]),
        roots=np.asarray(roots, dtype=np.int64),
        feature=np.asarray(feature, dtype=np.int64),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        value=np.asarray(value, dtype=np.float64),
        count=np.asarray(count, dtype=np.int64),
        tree_depths=np.asarray(depths, dtype=np.int64),
        importances_raw=np.asarray(doc["importances"], dtype=np.float64),
        bootstrap=None, n_train=None)


def save_forest(model: ForestModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(forest_to_doc(model), fh, sort_keys=True)


def load_forest(path) -> ForestModel:
    with open(path, "r", encoding="utf-8") as fh:
        return forest_from_doc(json.load(fh))
