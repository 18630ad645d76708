"""Tree-structured Bayes network: Chow-Liu augmentation of Naive Bayes.

Features are joined by a maximum spanning tree over conditional mutual
information given the class; each feature's likelihood then conditions on its
tree parent as well as the class. Numeric features are discretized into
equal-frequency bins for this learner only. Edges with vanishing conditional
mutual information are pruned, so exactly independent features reduce to
plain Naive Bayes.
"""

from __future__ import annotations

import numpy as np

from ..preprocess import Dataset, Task
from .base import Scorer, nominal_cardinalities, nominal_mask, require_both_classes

CMI_EPSILON = 1e-12
DEFAULT_BINS = 5


def equal_frequency_edges(column: np.ndarray, n_bins: int) -> np.ndarray:
    """Interior cut points for equal-frequency binning (may collapse on ties)."""
    qs = np.arange(1, n_bins) / n_bins
    return np.unique(np.quantile(column, qs))


def conditional_mutual_information(zi: np.ndarray, zj: np.ndarray, y: np.ndarray,
                                   vi: int, vj: int) -> float:
    """I(Xi; Xj | Y) in nats from empirical counts."""
    n = len(y)
    total = 0.0
    for c in (0, 1):
        mask = y == c
        nc = int(mask.sum())
        if nc == 0:
            continue
        joint = np.bincount(zi[mask] * vj + zj[mask], minlength=vi * vj).reshape(vi, vj)
        mi = joint.sum(axis=1)
        mj = joint.sum(axis=0)
        nz = joint > 0
        jn = joint[nz].astype(np.float64)
        outer = np.outer(mi, mj)[nz].astype(np.float64)
        total += np.sum(jn / n * np.log(jn * nc / outer))
    return float(total)


def _max_spanning_forest(weights: dict[tuple[int, int], float], p: int) -> list[tuple[int, int]]:
    """Kruskal over -weight; edges below CMI_EPSILON are dropped entirely."""
    parent = list(range(p))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    edges = sorted(weights.items(), key=lambda kv: (-kv[1], kv[0]))
    chosen = []
    for (i, j), w in edges:
        if w <= CMI_EPSILON:
            break
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            chosen.append((i, j))
    return chosen


class ChowLiuBayesNet:
    """Class-conditional tree network over all-categorical columns."""

    def __init__(self, smoothing: float = 1.0, n_bins: int = DEFAULT_BINS):
        self.smoothing = smoothing
        self.n_bins = n_bins

    def _discretize(self, X: np.ndarray) -> np.ndarray:
        Z = np.empty(X.shape, dtype=np.int64)
        for j in range(X.shape[1]):
            if self.is_nominal[j]:
                Z[:, j] = X[:, j].astype(np.int64)
            else:
                Z[:, j] = np.searchsorted(self.bin_edges[j], X[:, j], side="right")
        return Z

    def fit(self, X: np.ndarray, y: np.ndarray, is_nominal: np.ndarray,
            cardinalities: np.ndarray) -> "ChowLiuBayesNet":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y)
        require_both_classes(y, "bayes net")
        self.is_nominal = np.asarray(is_nominal, dtype=bool)
        p = X.shape[1]
        self.bin_edges: list[np.ndarray | None] = [
            None if self.is_nominal[j] else equal_frequency_edges(X[:, j], self.n_bins)
            for j in range(p)
        ]
        self.n_values = np.array([
            int(cardinalities[j]) if self.is_nominal[j] else len(self.bin_edges[j]) + 1
            for j in range(p)
        ])
        Z = self._discretize(X)
        self.log_prior = np.log(np.array([np.mean(y == 0), np.mean(y == 1)]))

        weights = {}
        for i in range(p):
            for j in range(i + 1, p):
                weights[(i, j)] = conditional_mutual_information(
                    Z[:, i], Z[:, j], y, self.n_values[i], self.n_values[j])
        self.edges = _max_spanning_forest(weights, p)

        # orient each tree component away from its lowest-index node
        adjacency: dict[int, list[int]] = {i: [] for i in range(p)}
        for i, j in self.edges:
            adjacency[i].append(j)
            adjacency[j].append(i)
        self.parents = np.full(p, -1, dtype=np.int64)
        visited = np.zeros(p, dtype=bool)
        for root in range(p):
            if visited[root]:
                continue
            frontier = [root]
            visited[root] = True
            while frontier:
                u = frontier.pop()
                for v in sorted(adjacency[u]):
                    if not visited[v]:
                        visited[v] = True
                        self.parents[v] = u
                        frontier.append(v)

        # conditional probability tables with additive smoothing
        self.cpts: list[np.ndarray] = []
        for j in range(p):
            vj = self.n_values[j]
            parent = self.parents[j]
            if parent < 0:
                table = np.empty((2, 1, vj))
                for c in (0, 1):
                    counts = np.bincount(Z[y == c, j], minlength=vj).astype(np.float64)
                    table[c, 0] = (counts + self.smoothing) / (
                        counts.sum() + self.smoothing * vj)
            else:
                vp = self.n_values[parent]
                table = np.empty((2, vp, vj))
                for c in (0, 1):
                    mask = y == c
                    joint = np.bincount(
                        Z[mask, parent] * vj + Z[mask, j], minlength=vp * vj
                    ).reshape(vp, vj).astype(np.float64)
                    table[c] = (joint + self.smoothing) / (
                        joint.sum(axis=1, keepdims=True) + self.smoothing * vj)
            self.cpts.append(np.log(table))
        return self

    def log_joint(self, X: np.ndarray) -> np.ndarray:
        Z = self._discretize(np.atleast_2d(np.asarray(X, dtype=np.float64)))
        out = np.tile(self.log_prior, (len(Z), 1))
        for j in range(Z.shape[1]):
            parent = self.parents[j]
            zp = np.zeros(len(Z), dtype=np.int64) if parent < 0 else Z[:, parent]
            out += self.cpts[j][:, zp, Z[:, j]].T
        return out

    def posteriors(self, X: np.ndarray) -> np.ndarray:
        lj = self.log_joint(X)
        lj -= lj.max(axis=1, keepdims=True)
        p = np.exp(lj)
        return p / p.sum(axis=1, keepdims=True)

    def score(self, X: np.ndarray) -> np.ndarray:
        return self.posteriors(X)[:, 1]


class BayesNetScorer(Scorer):
    kind = "bayes_net"

    def __init__(self, fingerprint: str, model: ChowLiuBayesNet):
        super().__init__(fingerprint)
        self.model = model

    def _score_values(self, values: np.ndarray) -> np.ndarray:
        return self.model.score(values)

    def posteriors(self, dataset: Dataset) -> np.ndarray:
        self.check_schema(dataset)
        return self.model.posteriors(dataset.values)

    def to_jsonable(self) -> dict:
        m = self.model
        return {
            "smoothing": m.smoothing,
            "n_bins": m.n_bins,
            "is_nominal": m.is_nominal.tolist(),
            "bin_edges": [e.tolist() if e is not None else None for e in m.bin_edges],
            "n_values": m.n_values.tolist(),
            "log_prior": m.log_prior.tolist(),
            "parents": m.parents.tolist(),
            "edges": [list(e) for e in m.edges],
            "cpts": [c.tolist() for c in m.cpts],
        }

    @classmethod
    def from_jsonable(cls, fingerprint: str, data: dict) -> "BayesNetScorer":
        m = ChowLiuBayesNet(data["smoothing"], data["n_bins"])
        m.is_nominal = np.asarray(data["is_nominal"], dtype=bool)
        m.bin_edges = [np.asarray(e) if e is not None else None for e in data["bin_edges"]]
        m.n_values = np.asarray(data["n_values"])
        m.log_prior = np.asarray(data["log_prior"])
        m.parents = np.asarray(data["parents"])
        m.edges = [tuple(e) for e in data["edges"]]
        m.cpts = [np.asarray(c) for c in data["cpts"]]
        return cls(fingerprint, m)


def train_bayes_net(dataset: Dataset, task: Task, smoothing: float = 1.0,
                    n_bins: int = DEFAULT_BINS) -> BayesNetScorer:
    """Chow-Liu augmented NB; numerics discretized to equal-frequency bins."""
    model = ChowLiuBayesNet(smoothing, n_bins).fit(
        dataset.values, dataset.labels(task),
        nominal_mask(dataset.schema), nominal_cardinalities(dataset.schema),
    )
    return BayesNetScorer(dataset.schema.fingerprint(), model)
