"""Weighted binary decision tree shared by the forest and the booster.

Numeric columns split on thresholds (midpoints between observed values);
nominal columns split on value subsets found by ordering categories by their
weighted positive rate and scanning prefixes, which is optimal for Gini with
binary targets. Ties break toward the lowest feature index, then the lowest
threshold / smallest left prefix, so training is fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_EPS_GAIN = 1e-12


class TreeData:
    """Per-training-set encoding reused by every tree grown on it.

    Each column is rank-encoded against its sorted unique values so split
    search reduces to weighted bincounts over ranks.
    """

    def __init__(self, X: np.ndarray, is_nominal: np.ndarray):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2:
            raise ValueError("X must be 2-dimensional")
        self.X = X
        self.is_nominal = np.asarray(is_nominal, dtype=bool)
        self.n, self.p = X.shape
        self.values: list[np.ndarray] = []
        self.codes = np.empty((self.n, self.p), dtype=np.int32)
        for j in range(self.p):
            uniq, codes = np.unique(X[:, j], return_inverse=True)
            self.values.append(uniq)
            self.codes[:, j] = codes


@dataclass
class _Node:
    # internal node when feature >= 0, else leaf
    feature: int = -1
    threshold: float = 0.0
    left_values: np.ndarray | None = None  # nominal splits: raw values going left
    left: int = -1
    right: int = -1
    prob: float = 0.0  # leaf: weighted positive fraction
    vote: int = 0      # leaf: majority vote (prob >= 0.5)


class DecisionTree:
    """Grown tree; prediction works on raw feature values."""

    def __init__(self, nodes: list[_Node]):
        self.nodes = nodes

    def predict(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return (votes, leaf probabilities) for each row."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        votes = np.empty(len(X), dtype=np.int8)
        probs = np.empty(len(X), dtype=np.float64)
        stack = [(0, np.arange(len(X)))]
        while stack:
            node_id, idx = stack.pop()
            node = self.nodes[node_id]
            if node.feature < 0:
                votes[idx] = node.vote
                probs[idx] = node.prob
                continue
            col = X[idx, node.feature]
            if node.left_values is not None:
                go_left = np.isin(col, node.left_values)
            else:
                go_left = col < node.threshold
            stack.append((node.left, idx[go_left]))
            stack.append((node.right, idx[~go_left]))
        return votes, probs

    def to_jsonable(self) -> list[dict]:
        out = []
        for n in self.nodes:
            if n.feature < 0:
                out.append({"prob": n.prob, "vote": n.vote})
            else:
                out.append({
                    "feature": n.feature,
                    "threshold": n.threshold if n.left_values is None else None,
                    "left_values": None if n.left_values is None else list(n.left_values),
                    "left": n.left, "right": n.right,
                })
        return out

    @classmethod
    def from_jsonable(cls, data: list[dict]) -> "DecisionTree":
        nodes = []
        for d in data:
            if "prob" in d:
                nodes.append(_Node(prob=d["prob"], vote=d["vote"]))
            else:
                lv = d["left_values"]
                nodes.append(_Node(
                    feature=d["feature"],
                    threshold=d["threshold"] if d["threshold"] is not None else 0.0,
                    left_values=None if lv is None else np.asarray(lv, dtype=np.float64),
                    left=d["left"], right=d["right"],
                ))
        return cls(nodes)


def _gini_cost(wpos: np.ndarray, wtot: np.ndarray) -> np.ndarray:
    # weighted Gini mass: wtot * 2p(1-p) = 2 * wpos * (wtot - wpos) / wtot
    return 2.0 * wpos * (wtot - wpos) / wtot


def _best_split(td: TreeData, idx: np.ndarray, y: np.ndarray, w: np.ndarray,
                features: np.ndarray):
    """Best (cost, feature, order, k) over the tried features, or None."""
    w_node = w[idx]
    wy_node = w_node * y[idx]
    best = None
    for j in features:
        codes = td.codes[idx, j]
        nv = len(td.values[j])
        cnt_w = np.bincount(codes, weights=w_node, minlength=nv)
        cnt_wp = np.bincount(codes, weights=wy_node, minlength=nv)
        observed = np.flatnonzero(cnt_w > 0)
        if len(observed) < 2:
            continue
        if td.is_nominal[j]:
            rate = cnt_wp[observed] / cnt_w[observed]
            order = observed[np.lexsort((observed, rate))]
        else:
            order = observed
        cw = np.cumsum(cnt_w[order])
        cwp = np.cumsum(cnt_wp[order])
        wl, wpl = cw[:-1], cwp[:-1]
        wr, wpr = cw[-1] - wl, cwp[-1] - wpl
        cost = _gini_cost(wpl, wl) + _gini_cost(wpr, wr)
        k = int(np.argmin(cost))
        if best is None or cost[k] < best[0]:
            best = (float(cost[k]), int(j), order, k)
    return best


def fit_tree(td: TreeData, y: np.ndarray, w: np.ndarray, max_depth: int,
             features_per_split: int | None = None,
             rng: np.random.Generator | None = None,
             row_indices: np.ndarray | None = None) -> DecisionTree:
    """Grow a weighted Gini tree of depth at most max_depth.

    features_per_split limits each node to a random feature subset drawn from
    rng (used by the forest); None tries every feature deterministically.
    row_indices restricts training to a subset of td's rows.
    """
    y = np.asarray(y, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    nodes: list[_Node] = []

    def grow(idx: np.ndarray, depth: int) -> int:
        node_id = len(nodes)
        nodes.append(_Node())
        wtot = float(np.sum(w[idx]))
        wpos = float(np.sum(w[idx] * y[idx]))
        prob = wpos / wtot
        node = nodes[node_id]
        node.prob = prob
        node.vote = int(prob >= 0.5)
        if depth >= max_depth or len(idx) < 2 or prob <= 0.0 or prob >= 1.0:
            return node_id
        if features_per_split is not None and features_per_split < td.p:
            tried = np.sort(rng.choice(td.p, size=features_per_split, replace=False))
        else:
            tried = np.arange(td.p)
        found = _best_split(td, idx, y, w, tried)
        if found is None:
            return node_id
        cost, j, order, k = found
        parent_cost = _gini_cost(np.array([wpos]), np.array([wtot]))[0]
        if parent_cost - cost <= _EPS_GAIN:
            return node_id
        col = td.codes[idx, j]
        if td.is_nominal[j]:
            left_ranks = order[:k + 1]
            go_left = np.isin(col, left_ranks)
            node.left_values = np.sort(td.values[j][left_ranks])
        else:
            lo = td.values[j][order[k]]
            hi = td.values[j][order[k + 1]]
            node.threshold = float((lo + hi) / 2.0)
            go_left = td.X[idx, j] < node.threshold
        node.feature = int(j)
        node.left = grow(idx[go_left], depth + 1)
        node.right = grow(idx[~go_left], depth + 1)
        return node_id

    if row_indices is None:
        row_indices = np.arange(td.n)
    grow(np.asarray(row_indices), 0)
    return DecisionTree(nodes)
