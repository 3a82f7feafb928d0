"""One-hidden-layer feed-forward binary classifier trained with Adam.

Pure numpy: ReLU hidden layer, logistic output, mean binary cross-entropy.
Inputs are z-scored with statistics frozen at training time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MODEL_FORMAT = "hyperec-model"
MODEL_VERSION = 1


class ModelFormatError(ValueError):
    pass


@dataclass
class TrainConfig:
    epochs: int = 2000
    learning_rate: float = 1e-4
    seed: int | None = 0
    batch_size: int | None = None
    hidden: int = 100
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")


@dataclass
class ClassifierModel:
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: float
    mean: np.ndarray
    scale: np.ndarray
    threshold: float = 0.5
    schema: tuple = field(default_factory=tuple)

    @property
    def input_dim(self) -> int:
        return self.W1.shape[0]

    def params(self) -> list[np.ndarray]:
        return [self.W1, self.b1, self.W2, np.atleast_1d(np.asarray(self.b2, dtype=float))]


def _check_matrix(X, name="features") -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contain NaN or infinite values")
    return X


def _sigmoid(z):
    return np.where(z >= 0, 1.0 / (1.0 + np.exp(-np.abs(z))), np.exp(-np.abs(z)) / (1.0 + np.exp(-np.abs(z))))


def forward(params, X):
    W1, b1, W2, b2 = params
    a = X @ W1 + b1
    h = np.maximum(a, 0.0)
    z = h @ W2 + b2[0]
    return a, h, z


def loss_and_grad(params, X, y):
    """Mean binary cross-entropy and its gradient w.r.t. (W1, b1, W2, b2)."""
    W1, b1, W2, b2 = params
    a, h, z = forward(params, X)
    # log(1 + e^z) - y z, computed stably
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    dz = (_sigmoid(z) - y) / len(y)
    dW2 = h.T @ dz
    db2 = np.array([dz.sum()])
    dh = np.outer(dz, W2)
    da = dh * (a > 0)
    dW1 = X.T @ da
    db1 = da.sum(axis=0)
    return loss, [dW1, db1, dW2, db2]


def init_params(d: int, hidden: int, rng: np.random.Generator) -> list[np.ndarray]:
    lim1 = 1.0 / np.sqrt(d)
    lim2 = 1.0 / np.sqrt(hidden)
    return [
        rng.uniform(-lim1, lim1, size=(d, hidden)),
        rng.uniform(-lim1, lim1, size=hidden),
        rng.uniform(-lim2, lim2, size=hidden),
        rng.uniform(-lim2, lim2, size=1),
    ]


def fit_normalizer(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-column mean and std; zero-variance columns pass through unchanged."""
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    const = std == 0
    return np.where(const, 0.0, mean), np.where(const, 1.0, std)


def train_classifier(X, y, cfg: TrainConfig | None = None, schema=()) -> tuple[ClassifierModel, list[float]]:
    """Train on features ``X`` and 0/1 labels ``y``; returns the model and per-epoch loss."""
    cfg = cfg or TrainConfig()
    X = _check_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    if len(y) != X.shape[0]:
        raise ValueError("features and labels differ in length")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0/1")
    if y.min() == y.max():
        raise ValueError("training labels contain a single class")
    rng = np.random.default_rng(cfg.seed)
    mean, scale = fit_normalizer(X)
    Xn = (X - mean) / scale
    params = init_params(X.shape[1], cfg.hidden, rng)
    m = [np.zeros_like(p) for p in params]
    v = [np.zeros_like(p) for p in params]
    n = len(y)
    bs = cfg.batch_size or n
    losses = []
    step = 0
    for _ in range(cfg.epochs):
        order = rng.permutation(n) if bs < n else np.arange(n)
        epoch_loss = 0.0
        for start in range(0, n, bs):
            batch = order[start:start + bs]
            loss, grads = loss_and_grad(params, Xn[batch], y[batch])
            epoch_loss += loss * len(batch)
            step += 1
            for i, g in enumerate(grads):
                m[i] = cfg.beta1 * m[i] + (1 - cfg.beta1) * g
                v[i] = cfg.beta2 * v[i] + (1 - cfg.beta2) * g * g
                mhat = m[i] / (1 - cfg.beta1 ** step)
                vhat = v[i] / (1 - cfg.beta2 ** step)
                params[i] = params[i] - cfg.learning_rate * mhat / (np.sqrt(vhat) + cfg.eps)
        losses.append(epoch_loss / n)
    W1, b1, W2, b2 = params
    model = ClassifierModel(W1, b1, W2, float(b2[0]), mean, scale, 0.5, tuple(schema))
    return model, losses


def constant_model(d: int, label: int, schema=()) -> ClassifierModel:
    """A model that predicts ``label`` for every input (single-class training data)."""
    b2 = 40.0 if label else -40.0
    return ClassifierModel(np.zeros((d, 1)), np.zeros(1), np.zeros(1), b2,
                           np.zeros(d), np.ones(d), 0.5, tuple(schema))


def predict_proba(model: ClassifierModel, X) -> np.ndarray:
    X = _check_matrix(X)
    if X.shape[1] != model.input_dim:
        raise ValueError(f"expected {model.input_dim} feature columns, got {X.shape[1]}")
    Xn = (X - model.mean) / model.scale
    _, _, z = forward(model.params(), Xn)
    return _sigmoid(z)


def predict(model: ClassifierModel, X) -> np.ndarray:
    return (predict_proba(model, X) >= model.threshold).astype(np.int64)


def _fmt(a) -> str:
    return " ".join(f"{x:.17g}" for x in np.ravel(a))


def save_model(model: ClassifierModel, path) -> None:
    d, hdim = model.W1.shape
    lines = [
        f"{MODEL_FORMAT} {MODEL_VERSION}",
        "[meta]",
        f"input_dim = {d}",
        f"hidden = {hdim}",
        f"threshold = {model.threshold:.17g}",
        f"schema = {','.join(model.schema)}",
        "[norm]",
        _fmt(model.mean),
        _fmt(model.scale),
        "[W1]",
        *(_fmt(row) for row in model.W1),
        "[b1]",
        _fmt(model.b1),
        "[W2]",
        _fmt(model.W2),
        "[b2]",
        f"{model.b2:.17g}",
        "[end]",
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def load_model(path) -> ClassifierModel:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ModelFormatError(f"{path}: empty model file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != MODEL_FORMAT:
        raise ModelFormatError(f"{path}: not a {MODEL_FORMAT} file")
    if head[1] != str(MODEL_VERSION):
        raise ModelFormatError(f"{path}: model version {head[1]} unsupported (expected {MODEL_VERSION})")
    if lines[-1] != "[end]":
        raise ModelFormatError(f"{path}: truncated model file")
    sections: dict[str, list[str]] = {}
    current = None
    for ln in lines[1:-1]:
        if ln.startswith("[") and ln.endswith("]"):
            current = ln[1:-1]
            sections[current] = []
        elif current is None:
            raise ModelFormatError(f"{path}: content before first section")
        else:
            sections[current].append(ln)
    try:
        meta = dict(ln.split("=", 1) for ln in sections["meta"])
        meta = {k.strip(): v.strip() for k, v in meta.items()}
        d, hdim = int(meta["input_dim"]), int(meta["hidden"])
        nums = lambda ln: np.array([float(x) for x in ln.split()])
        mean, scale = (nums(ln) for ln in sections["norm"])
        W1 = np.array([nums(ln) for ln in sections["W1"]])
        b1 = nums(sections["b1"][0])
        W2 = nums(sections["W2"][0])
        b2 = float(sections["b2"][0])
    except (KeyError, IndexError, ValueError) as exc:
        raise ModelFormatError(f"{path}: malformed model file ({exc})") from exc
    if W1.shape != (d, hdim) or b1.shape != (hdim,) or W2.shape != (hdim,) \
            or mean.shape != (d,) or scale.shape != (d,):
        raise ModelFormatError(f"{path}: parameter shapes inconsistent with meta")
    schema = tuple(s for s in meta.get("schema", "").split(",") if s)
    model = ClassifierModel(W1, b1, W2, b2, mean, scale, float(meta["threshold"]), schema)
    if not all(np.all(np.isfinite(p)) for p in model.params()):
        raise ModelFormatError(f"{path}: non-finite parameters")
    return model
