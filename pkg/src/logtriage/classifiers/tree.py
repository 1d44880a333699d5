"""Decision trees over dense matrices, shared by the forest and boosting.

The split search is delegated to the kernel backend (compiled extension or
numpy fallback; bit-identical either way). Trees here stay deliberately
small in surface: grow, predict over a batch, serialize to plain dicts.

Classification trees grow until pure or under two samples, with a random
feature subset drawn per node. Regression trees are depth-limited
least-squares trees with mean leaf values; the boosting stage draws no
randomness, so they consider every feature.
"""

from dataclasses import dataclass

import numpy as np

from .. import _kernels


@dataclass
class TreeNode:
    feature: int = -1  # -1 marks a leaf
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    value: float = 0.0  # class id (classification) or mean target (regression)

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"v": self.value}
        return {
            "f": self.feature,
            "t": self.threshold,
            "l": self.left.to_dict(),
            "r": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TreeNode":
        if "v" in data:
            return cls(value=data["v"])
        return cls(
            feature=data["f"],
            threshold=data["t"],
            left=cls.from_dict(data["l"]),
            right=cls.from_dict(data["r"]),
        )


def _route(root: TreeNode, X: np.ndarray) -> np.ndarray:
    """Leaf values for every row of X."""
    out = np.empty(X.shape[0], dtype=np.float64)
    stack = [(root, np.arange(X.shape[0]))]
    while stack:
        node, rows = stack.pop()
        if len(rows) == 0:
            continue
        if node.is_leaf:
            out[rows] = node.value
            continue
        go_left = X[rows, node.feature] <= node.threshold
        stack.append((node.left, rows[go_left]))
        stack.append((node.right, rows[~go_left]))
    return out


def grow_classification_tree(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    rng: np.random.Generator,
    max_features: int | None = None,
    sample_indices: np.ndarray | None = None,
) -> TreeNode:
    """Gini tree grown until pure or fewer than two samples; no depth cap."""
    n, d = X.shape
    if sample_indices is None:
        sample_indices = np.arange(n)
    Xt = np.ascontiguousarray(X.T)

    def build(indices: np.ndarray) -> TreeNode:
        labels = np.ascontiguousarray(y[indices])
        counts = np.bincount(labels, minlength=n_classes)
        majority = float(np.argmax(counts))
        if len(indices) < 2 or np.count_nonzero(counts) == 1:
            return TreeNode(value=majority)
        if max_features is not None and max_features < d:
            feats = rng.choice(d, size=max_features, replace=False)
        else:
            feats = np.arange(d)
        sub = Xt[np.ix_(feats, indices)]
        f_local, thr, _ = _kernels.best_classification_split(sub, labels, n_classes)
        if f_local < 0:
            return TreeNode(value=majority)
        feature = int(feats[f_local])
        go_left = X[indices, feature] <= thr
        node = TreeNode(feature=feature, threshold=thr)
        node.left = build(indices[go_left])
        node.right = build(indices[~go_left])
        return node

    return build(np.asarray(sample_indices))


def grow_regression_tree(
    X: np.ndarray,
    targets: np.ndarray,
    max_depth: int,
    min_samples_split: int = 2,
) -> TreeNode:
    """Depth-limited least-squares tree over all features, mean leaf values."""
    Xt = np.ascontiguousarray(X.T)
    targets = np.ascontiguousarray(targets, dtype=np.float64)

    def build(indices: np.ndarray, depth: int) -> TreeNode:
        node_targets = targets[indices]
        mean = float(np.mean(node_targets))
        if depth >= max_depth or len(indices) < min_samples_split:
            return TreeNode(value=mean)
        sub = Xt[:, indices]
        if not sub.flags["C_CONTIGUOUS"]:
            sub = np.ascontiguousarray(sub)
        f, thr, _ = _kernels.best_regression_split(sub, np.ascontiguousarray(node_targets))
        if f < 0:
            return TreeNode(value=mean)
        go_left = X[indices, f] <= thr
        node = TreeNode(feature=int(f), threshold=thr)
        node.left = build(indices[go_left], depth + 1)
        node.right = build(indices[~go_left], depth + 1)
        return node

    return build(np.arange(X.shape[0]), 0)


def predict_tree(root: TreeNode, X: np.ndarray) -> np.ndarray:
    return _route(root, X)
