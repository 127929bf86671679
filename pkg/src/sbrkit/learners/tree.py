"""CART trees: the base learner behind the tree-ensemble kinds.

Trees are grown greedily, splitting on the (feature, threshold) pair that
minimizes weighted Gini impurity (classification) or squared error
(regression). Split candidates are midpoints between consecutive distinct
feature values; ties break toward the lowest feature index, then the
lowest threshold. Nodes are stored in flat arrays, so growth and
prediction are iterative and unlimited depth is safe.

A node is split whenever any candidate feature varies across its rows,
even at zero impurity gain; this guarantees perfect training fit on
datasets without conflicting duplicate rows.

Split search runs feature-major (one contiguous row per feature) and only
sorts features that vary at the node, which keeps deep trees cheap.
"""

from __future__ import annotations

import numpy as np

LEAF = -1


def gini_impurity(labels) -> float:
    """1 - sum of squared class probabilities."""
    labels = np.asarray(labels)
    if labels.size == 0:
        raise ValueError("gini impurity of an empty label list is undefined")
    _, counts = np.unique(labels, return_counts=True)
    p = counts / labels.size
    return float(1.0 - (p * p).sum())


class Tree:
    """Flat-array binary tree with per-leaf real values."""

    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, feature, threshold, left, right, value):
        self.feature = np.asarray(feature, dtype=np.intp)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.intp)
        self.right = np.asarray(right, dtype=np.intp)
        self.value = np.asarray(value, dtype=np.float64)

    @property
    def node_count(self) -> int:
        return len(self.feature)

    def leaf_indices(self, X: np.ndarray) -> np.ndarray:
        """Node index of the leaf each row lands in."""
        nodes = np.zeros(len(X), dtype=np.intp)
        rows = np.arange(len(X))
        while True:
            active = self.feature[nodes] != LEAF
            if not active.any():
                return nodes
            idx = rows[active]
            at = nodes[idx]
            go_left = X[idx, self.feature[at]] <= self.threshold[at]
            nodes[idx[go_left]] = self.left[at[go_left]]
            nodes[idx[~go_left]] = self.right[at[~go_left]]

    def predict_values(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.leaf_indices(X)]

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Tree":
        return cls(data["feature"], data["threshold"], data["left"], data["right"], data["value"])


def _boundary_positions(xs: np.ndarray, min_leaf: int):
    """(feature row, position) pairs of candidate splits, in tie-rule order.

    A position i splits between sorted values i and i+1. Row-major
    `nonzero` ordering means the first minimal cost downstream realizes
    the lowest-feature-then-lowest-threshold tie rule.
    """
    n = xs.shape[1]
    valid = xs[:, :-1] < xs[:, 1:]
    if min_leaf > 1:
        valid[:, : min_leaf - 1] = False
        valid[:, n - min_leaf:] = False
    return np.nonzero(valid)


def _split_at(xs: np.ndarray, rows, cols, cost: np.ndarray):
    """Best (cost, row, threshold) among sorted-path candidates."""
    if len(cost) == 0:
        return None
    at = int(np.argmin(cost))
    row = int(rows[at])
    pos = int(cols[at])
    threshold = (xs[row, pos] + xs[row, pos + 1]) / 2.0
    if threshold >= xs[row, pos + 1]:
        # Midpoint rounded up to the right-hand value; fall back to the
        # left one so both children stay non-empty.
        threshold = xs[row, pos]
    return float(cost[at]), row, float(threshold)


def _midpoints(low: np.ndarray, high: np.ndarray) -> np.ndarray:
    mid = (low + high) / 2.0
    return np.where(mid >= high, low, mid)


def _merge_candidates(first, second):
    """Lower cost wins; on equal cost, the lower feature row wins."""
    if first is None:
        return second
    if second is None:
        return first
    if second[0] < first[0] or (second[0] == first[0] and second[1] < first[1]):
        return second
    return first


def _sorted_split_gini(Xf, y, w, min_leaf, rows_map):
    """Weighted-Gini search over sorted columns; Xf holds one row per feature.

    The cost (halved weighted child impurity, a monotone equivalent) is
    evaluated only at boundary positions between distinct sorted values.
    `rows_map` translates Xf rows back to the caller's feature rows.
    """
    n = Xf.shape[1]
    order = np.argsort(Xf, axis=1)
    xs = np.take_along_axis(Xf, order, axis=1)
    rows, cols = _boundary_positions(xs, min_leaf)
    if len(rows) == 0:
        return None
    if w is None:
        ones = np.cumsum(y.astype(np.int8)[order], axis=1, dtype=np.int64)
        a = ones[rows, cols].astype(np.float64)
        c = (cols + 1).astype(np.float64)
        b = float(y.sum()) - a
        m = float(n) - c
        cost = a * (c - a) / c + b * (m - b) / m
    else:
        ws = w[order]
        wt = np.cumsum(ws, axis=1)[rows, cols]
        w1 = np.cumsum(ws * y[order], axis=1)[rows, cols]
        wt_right = float(w.sum()) - wt
        w1_right = float((w * y).sum()) - w1
        with np.errstate(divide="ignore", invalid="ignore"):
            cost = w1 * (wt - w1) / wt + w1_right * (wt_right - w1_right) / wt_right
        cost[~np.isfinite(cost)] = np.inf
    found = _split_at(xs, rows, cols, cost)
    if found is None:
        return None
    return found[0], int(rows_map[found[1]]), found[2]


def _two_valued_split_gini(Xf, y, tv_rows, low, high, min_leaf):
    """Single-boundary Gini costs for columns taking exactly two values."""
    if len(tv_rows) == 0:
        return None
    n = Xf.shape[1]
    left_mask = Xf[tv_rows] == low[:, None]
    c = left_mask.sum(axis=1).astype(np.float64)
    a = left_mask[:, y == 1].sum(axis=1).astype(np.float64)
    b = float(y.sum()) - a
    m = float(n) - c
    cost = a * (c - a) / c + b * (m - b) / m
    if min_leaf > 1:
        cost[(c < min_leaf) | (m < min_leaf)] = np.inf
    at = int(np.argmin(cost))
    if not np.isfinite(cost[at]):
        return None
    return float(cost[at]), int(tv_rows[at]), float(_midpoints(low, high)[at])


def _best_split_gini(Xf, y, w, min_leaf, low, high):
    """Weighted-Gini search; two-valued columns skip the sort entirely."""
    if w is not None:
        found = _sorted_split_gini(Xf, y, w, min_leaf, np.arange(Xf.shape[0]))
        return None if found is None else (found[1], found[2])
    two_valued = ((Xf == low[:, None]) | (Xf == high[:, None])).all(axis=1)
    tv_rows = np.nonzero(two_valued)[0]
    best = _two_valued_split_gini(Xf, y, tv_rows, low[tv_rows], high[tv_rows], min_leaf)
    multi_rows = np.nonzero(~two_valued)[0]
    if len(multi_rows):
        other = _sorted_split_gini(Xf[multi_rows], y, None, min_leaf, multi_rows)
        best = _merge_candidates(best, other)
    if best is None:
        return None
    return best[1], best[2]


def _best_split_mse(Xf, targets, min_leaf, low, high):
    """Squared-error search; two-valued columns skip the sort entirely."""
    total1 = float(targets.sum())
    total2 = float((targets * targets).sum())
    n = Xf.shape[1]
    two_valued = ((Xf == low[:, None]) | (Xf == high[:, None])).all(axis=1)
    tv_rows = np.nonzero(two_valued)[0]
    best = None
    if len(tv_rows):
        left_mask = (Xf[tv_rows] == low[tv_rows, None]).astype(np.float64)
        c = left_mask.sum(axis=1)
        s1 = left_mask @ targets
        s2 = left_mask @ (targets * targets)
        m = float(n) - c
        cost = (s2 - s1 * s1 / c) + ((total2 - s2) - (total1 - s1) ** 2 / m)
        if min_leaf > 1:
            cost[(c < min_leaf) | (m < min_leaf)] = np.inf
        at = int(np.argmin(cost))
        if np.isfinite(cost[at]):
            best = (float(cost[at]), int(tv_rows[at]),
                    float(_midpoints(low[tv_rows], high[tv_rows])[at]))
    multi_rows = np.nonzero(~two_valued)[0]
    if len(multi_rows):
        Xm = Xf[multi_rows]
        order = np.argsort(Xm, axis=1)
        xs = np.take_along_axis(Xm, order, axis=1)
        rows, cols = _boundary_positions(xs, min_leaf)
        if len(rows):
            ts = targets[order]
            s1 = np.cumsum(ts, axis=1)[rows, cols]
            s2 = np.cumsum(ts * ts, axis=1)[rows, cols]
            c = (cols + 1).astype(np.float64)
            m = float(n) - c
            cost = (s2 - s1 * s1 / c) + ((total2 - s2) - (total1 - s1) ** 2 / m)
            found = _split_at(xs, rows, cols, cost)
            if found is not None:
                best = _merge_candidates(
                    best, (found[0], int(multi_rows[found[1]]), found[2])
                )
    if best is None:
        return None
    return best[1], best[2]


def _random_split_gini(Xf, y, w, rows, rng, min_leaf):
    """One uniform-random threshold per varying candidate feature.

    `rows` maps Xf rows to positions in the caller's candidate list, so
    ties still break toward the lowest feature index.
    """
    n = Xf.shape[1]
    total_w = float(w.sum()) if w is not None else float(n)
    total_w1 = float((w * y).sum()) if w is not None else float(y.sum())
    best = None
    for row in rows:
        column = Xf[row]
        low = float(column.min())
        high = float(column.max())
        if low == high:
            continue
        threshold = float(rng.uniform(low, high))
        left = column <= threshold
        n_left = int(left.sum())
        if n_left < min_leaf or n - n_left < min_leaf:
            continue
        if w is None:
            left_w = float(n_left)
            left_w1 = float(y[left].sum())
        else:
            left_w = float(w[left].sum())
            left_w1 = float((w[left] * y[left]).sum())
        right_w = total_w - left_w
        right_w1 = total_w1 - left_w1
        if left_w <= 0.0 or right_w <= 0.0:
            continue
        cost = (
            2.0 * left_w1 * (left_w - left_w1) / left_w
            + 2.0 * right_w1 * (right_w - right_w1) / right_w
        )
        if best is None or cost < best[0]:
            best = (cost, row, threshold)
    if best is None:
        return None
    return best[1], best[2]


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    *,
    criterion: str = "gini",
    sample_weight: np.ndarray | None = None,
    max_depth: int | None = None,
    min_leaf: int = 1,
    feature_subsample: int | None = None,
    splitter: str = "best",
    rng: np.random.Generator | None = None,
) -> Tree:
    """Grow a CART tree.

    `feature_subsample` draws that many candidate columns per node
    (all columns when None); if every sampled candidate is constant at the
    node, the search falls back to all columns that vary there, so a
    separable node always splits. `splitter="random"` draws one uniform
    threshold per candidate instead of searching; both options need `rng`.
    """
    Xf_all = np.ascontiguousarray(np.asarray(X, dtype=np.float64).T)
    y = np.asarray(y, dtype=np.float64)
    w = None if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)
    n_features = Xf_all.shape[0]

    features: list[int] = []
    thresholds: list[float] = []
    lefts: list[int] = []
    rights: list[int] = []
    values: list[float] = []

    def new_node() -> int:
        features.append(LEAF)
        thresholds.append(0.0)
        lefts.append(LEAF)
        rights.append(LEAF)
        values.append(0.0)
        return len(features) - 1

    def search(Xf, yi, wi):
        xmin = Xf.min(axis=1)
        xmax = Xf.max(axis=1)
        varying = np.nonzero(xmax > xmin)[0]
        if len(varying) == 0:
            return None
        if splitter == "random":
            found = _random_split_gini(Xf, yi, wi, varying, rng, min_leaf)
        elif criterion == "gini":
            found = _best_split_gini(
                Xf[varying], yi, wi, min_leaf, xmin[varying], xmax[varying]
            )
        else:
            found = _best_split_mse(
                Xf[varying], yi, min_leaf, xmin[varying], xmax[varying]
            )
        if found is None:
            return None
        local, threshold = found
        return (local if splitter == "random" else int(varying[local])), threshold

    root = new_node()
    stack = [(np.arange(len(y), dtype=np.intp), 0, root)]
    while stack:
        idx, depth, node = stack.pop()
        yi = y[idx]
        wi = None if w is None else w[idx]
        if wi is not None and wi.sum() > 0.0:
            values[node] = float((wi * yi).sum() / wi.sum())
        else:
            # Unweighted, or a node whose weights all underflowed to zero.
            values[node] = float(yi.mean())
        if yi.min() == yi.max():
            continue
        if max_depth is not None and depth >= max_depth:
            continue
        if len(idx) < 2 * min_leaf:
            continue

        if feature_subsample is None:
            Xf = Xf_all[:, idx]
            found = search(Xf, yi, wi)
            if found is None:
                continue
            local, threshold = found
            feature = local
            column = Xf[local]
        else:
            candidates = np.sort(rng.choice(n_features, size=min(feature_subsample, n_features), replace=False))
            Xf = Xf_all[candidates][:, idx]
            found = search(Xf, yi, wi)
            if found is None:
                # Every sampled candidate was constant here; retry over all
                # varying features so separable nodes still split.
                Xf = Xf_all[:, idx]
                found = search(Xf, yi, wi)
                if found is None:
                    continue
                local, threshold = found
                feature = local
                column = Xf[local]
            else:
                local, threshold = found
                feature = int(candidates[local])
                column = Xf[local]

        go_left = column <= threshold
        left_idx = idx[go_left]
        right_idx = idx[~go_left]
        if len(left_idx) == 0 or len(right_idx) == 0:
            continue
        features[node] = feature
        thresholds[node] = threshold
        left_node = new_node()
        right_node = new_node()
        lefts[node] = left_node
        rights[node] = right_node
        stack.append((right_idx, depth + 1, right_node))
        stack.append((left_idx, depth + 1, left_node))

    return Tree(features, thresholds, lefts, rights, values)
