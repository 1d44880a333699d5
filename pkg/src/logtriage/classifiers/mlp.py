"""Three-dense-layer perceptron with dropout, trained by Adam.

Architecture: dense(h1, ReLU) -> dropout -> dense(h2, ReLU) -> dropout ->
dense(n_classes, softmax), minimizing categorical cross-entropy on one-hot
labels. Dropout uses inverted masks and is active only while fitting.
All randomness (weight init, batch order, dropout masks) flows from the
spec seed, so a fit is reproducible. A non-finite batch loss aborts with
the epoch index rather than silently producing NaN weights.

MlpNetwork.loss_and_grads exposes the exact forward/backward pass with
dropout off, which is what the finite-difference gradient check exercises.
"""

import numpy as np

from ..errors import DegenerateTrainingError, TrainingDivergedError
from ..features import Dataset
from .base import ClassifierSpec, TrainedModel, check_training_data

_ADAM_BETA1 = 0.9
_ADAM_BETA2 = 0.999
_ADAM_EPS = 1e-8

PARAM_NAMES = ("W1", "b1", "W2", "b2", "W3", "b3")


class MlpNetwork:
    """Parameter container plus forward/backward passes."""

    def __init__(self, params: dict[str, np.ndarray]):
        self.params = params

    @classmethod
    def initialize(cls, dim: int, hidden: tuple[int, int], n_classes: int,
                   rng: np.random.Generator) -> "MlpNetwork":
        h1, h2 = hidden
        return cls({
            "W1": rng.normal(0.0, np.sqrt(2.0 / dim), (dim, h1)),
            "b1": np.zeros(h1),
            "W2": rng.normal(0.0, np.sqrt(2.0 / h1), (h1, h2)),
            "b2": np.zeros(h2),
            "W3": rng.normal(0.0, np.sqrt(2.0 / h2), (h2, n_classes)),
            "b3": np.zeros(n_classes),
        })

    def forward(self, X: np.ndarray, masks: tuple[np.ndarray, np.ndarray] | None = None):
        p = self.params
        z1 = X @ p["W1"] + p["b1"]
        a1 = np.maximum(z1, 0.0)
        if masks is not None:
            a1 = a1 * masks[0]
        z2 = a1 @ p["W2"] + p["b2"]
        a2 = np.maximum(z2, 0.0)
        if masks is not None:
            a2 = a2 * masks[1]
        z3 = a2 @ p["W3"] + p["b3"]
        return z1, a1, z2, a2, z3

    def probabilities(self, X: np.ndarray) -> np.ndarray:
        z3 = self.forward(X)[-1]
        shifted = z3 - z3.max(axis=1, keepdims=True)
        e = np.exp(shifted)
        return e / e.sum(axis=1, keepdims=True)

    def loss_and_grads(self, X: np.ndarray, onehot: np.ndarray,
                       masks: tuple[np.ndarray, np.ndarray] | None = None):
        """Mean cross-entropy and its gradients for one batch."""
        p = self.params
        batch = X.shape[0]
        z1, a1, z2, a2, z3 = self.forward(X, masks)

        shifted = z3 - z3.max(axis=1, keepdims=True)
        log_norm = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
        log_probs = shifted - log_norm
        loss = float(-np.sum(onehot * log_probs) / batch)

        d_z3 = (np.exp(log_probs) - onehot) / batch
        grads = {
            "W3": a2.T @ d_z3,
            "b3": d_z3.sum(axis=0),
        }
        d_a2 = d_z3 @ p["W3"].T
        if masks is not None:
            d_a2 = d_a2 * masks[1]
        d_z2 = d_a2 * (z2 > 0.0)
        grads["W2"] = a1.T @ d_z2
        grads["b2"] = d_z2.sum(axis=0)
        d_a1 = d_z2 @ p["W2"].T
        if masks is not None:
            d_a1 = d_a1 * masks[0]
        d_z1 = d_a1 * (z1 > 0.0)
        grads["W1"] = X.T @ d_z1
        grads["b1"] = d_z1.sum(axis=0)
        return loss, grads


class MlpModel(TrainedModel):
    def __init__(self, spec, classes, dimension, network, vocab_checksum=None):
        super().__init__(spec, classes, dimension, vocab_checksum)
        self.network = network

    def _predict_dense(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.network.probabilities(X), axis=1)

    def params_payload(self) -> dict:
        return dict(self.network.params)


def fit_mlp(data: Dataset, spec: ClassifierSpec) -> MlpModel:
    X, y, classes = check_training_data(data)
    if len(classes) < 2:
        raise DegenerateTrainingError(
            f"the MLP needs at least two classes, got only {classes[0]}"
        )
    n, dim = X.shape
    n_classes = len(classes)
    hidden = tuple(spec.params["hidden"])
    dropout = float(spec.params["dropout"])
    lr = float(spec.params["learning_rate"])
    epochs = int(spec.params["epochs"])
    batch_size = int(spec.params["batch_size"])

    onehot = np.zeros((n, n_classes), dtype=np.float64)
    onehot[np.arange(n), y] = 1.0

    rng = np.random.default_rng(spec.seed)
    net = MlpNetwork.initialize(dim, hidden, n_classes, rng)
    moment1 = {k: np.zeros_like(v) for k, v in net.params.items()}
    moment2 = {k: np.zeros_like(v) for k, v in net.params.items()}
    step = 0

    for epoch in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            batch = order[start:start + batch_size]
            Xb, Yb = X[batch], onehot[batch]
            if dropout > 0.0:
                keep = 1.0 - dropout
                masks = (
                    (rng.random((len(batch), hidden[0])) < keep) / keep,
                    (rng.random((len(batch), hidden[1])) < keep) / keep,
                )
            else:
                masks = None
            loss, grads = net.loss_and_grads(Xb, Yb, masks)
            if not np.isfinite(loss):
                raise TrainingDivergedError(epoch)
            step += 1
            bias1 = 1.0 - _ADAM_BETA1**step
            bias2 = 1.0 - _ADAM_BETA2**step
            for name in PARAM_NAMES:
                g = grads[name]
                moment1[name] = _ADAM_BETA1 * moment1[name] + (1.0 - _ADAM_BETA1) * g
                moment2[name] = _ADAM_BETA2 * moment2[name] + (1.0 - _ADAM_BETA2) * g * g
                m_hat = moment1[name] / bias1
                v_hat = moment2[name] / bias2
                net.params[name] -= lr * m_hat / (np.sqrt(v_hat) + _ADAM_EPS)

    return MlpModel(spec, classes, dim, net, data.vocab_checksum)
