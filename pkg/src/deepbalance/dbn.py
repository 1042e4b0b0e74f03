"""Deep belief network base learner: stacked RBMs pretrained with
contrastive divergence, a logistic output unit, and backprop fine-tuning.

Conventions pinned here and relied on by the tests:
  - Visible inputs live in [0, 1] (standardize-then-sigmoid upstream).
  - CD negative phase uses sampled hidden states but visible *probabilities*
    (never sampled visibles), and update statistics use hidden probabilities.
  - The feedforward pass is deterministic: every layer propagates activation
    probabilities, no sampling. Visible biases only exist for pretraining;
    the feedforward pass never reads them.
  - Fine-tuning runs exactly max_it epochs of minibatch SGD on mean binary
    cross-entropy. No early stopping.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ContractViolationError
from .numerics import Matrix, RngStream, sigmoid


@dataclass(frozen=True)
class DbnHyperparams:
    """Training knobs for a single network.

    max_it is the exact number of fine-tuning epochs. pretrain_epochs may be
    zero (skip pretraining, keep the random initialization).
    """

    hidden_sizes: tuple = (10, 5)
    cd_k: int = 1
    pretrain_epochs: int = 10
    pretrain_lr: float = 0.1
    # Small-init sigmoid stacks need a hot learning rate to converge within
    # the 50-epoch budget the headline configuration allows.
    finetune_lr: float = 2.0
    batch_size: int = 16
    max_it: int = 50

    def __post_init__(self):
        object.__setattr__(self, "hidden_sizes", tuple(int(h) for h in self.hidden_sizes))
        if len(self.hidden_sizes) == 0 or any(h < 1 for h in self.hidden_sizes):
            raise ConfigError(f"hidden_sizes must be positive counts, got {self.hidden_sizes}")
        if self.cd_k < 1:
            raise ConfigError(f"cd_k must be >= 1, got {self.cd_k}")
        if self.pretrain_epochs < 0:
            raise ConfigError(f"pretrain_epochs must be >= 0, got {self.pretrain_epochs}")
        if self.pretrain_lr <= 0 or self.finetune_lr <= 0:
            raise ConfigError("learning rates must be positive")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.max_it < 1:
            raise ConfigError(f"max_it must be >= 1, got {self.max_it}")


def hyper_to_dict(hyper: DbnHyperparams) -> dict:
    return {
        "hidden_sizes": list(hyper.hidden_sizes),
        "cd_k": hyper.cd_k,
        "pretrain_epochs": hyper.pretrain_epochs,
        "pretrain_lr": hyper.pretrain_lr,
        "finetune_lr": hyper.finetune_lr,
        "batch_size": hyper.batch_size,
        "max_it": hyper.max_it,
    }


def hyper_from_dict(d: dict) -> DbnHyperparams:
    return DbnHyperparams(
        hidden_sizes=tuple(d["hidden_sizes"]),
        cd_k=int(d["cd_k"]),
        pretrain_epochs=int(d["pretrain_epochs"]),
        pretrain_lr=float(d["pretrain_lr"]),
        finetune_lr=float(d["finetune_lr"]),
        batch_size=int(d["batch_size"]),
        max_it=int(d["max_it"]),
    )


@dataclass
class RbmLayer:
    """One restricted Boltzmann machine: w is visible x hidden."""

    w: Matrix
    visible_bias: np.ndarray
    hidden_bias: np.ndarray

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=np.float64)
        self.visible_bias = np.asarray(self.visible_bias, dtype=np.float64)
        self.hidden_bias = np.asarray(self.hidden_bias, dtype=np.float64)
        if self.w.ndim != 2:
            raise ContractViolationError("RBM weight matrix must be 2-D")
        nv, nh = self.w.shape
        if self.visible_bias.shape != (nv,) or self.hidden_bias.shape != (nh,):
            raise ContractViolationError(
                f"RBM bias shapes {self.visible_bias.shape}, {self.hidden_bias.shape} "
                f"do not match weights {self.w.shape}"
            )
        if not (
            np.all(np.isfinite(self.w))
            and np.all(np.isfinite(self.visible_bias))
            and np.all(np.isfinite(self.hidden_bias))
        ):
            raise ContractViolationError("RBM parameters must be finite")

    @property
    def n_visible(self) -> int:
        return self.w.shape[0]

    @property
    def n_hidden(self) -> int:
        return self.w.shape[1]


@dataclass
class DbnModel:
    """Stacked RBM layers plus a logistic output unit."""

    layers: list
    output_weights: np.ndarray
    output_bias: float

    def __post_init__(self):
        self.output_weights = np.asarray(self.output_weights, dtype=np.float64)
        self.output_bias = float(self.output_bias)
        if not self.layers:
            raise ContractViolationError("DbnModel needs at least one hidden layer")
        for lower, upper in zip(self.layers, self.layers[1:]):
            if lower.n_hidden != upper.n_visible:
                raise ContractViolationError(
                    f"layer sizes disagree: {lower.n_hidden} hidden feeding "
                    f"{upper.n_visible} visible"
                )
        if self.output_weights.shape != (self.layers[-1].n_hidden,):
            raise ContractViolationError(
                f"output weights {self.output_weights.shape} do not match last "
                f"hidden size {self.layers[-1].n_hidden}"
            )

    @property
    def n_visible(self) -> int:
        return self.layers[0].n_visible

    @property
    def layer_sizes(self) -> tuple:
        return (self.n_visible,) + tuple(layer.n_hidden for layer in self.layers)


def _check_visible_batch(batch: np.ndarray, n_visible: int, op: str) -> Matrix:
    batch = np.asarray(batch, dtype=np.float64)
    if batch.ndim != 2:
        raise ContractViolationError(f"{op}: batch must be 2-D, got {batch.ndim}-D")
    if batch.shape[1] != n_visible:
        raise ContractViolationError(
            f"{op}: batch has {batch.shape[1]} columns, model expects {n_visible}"
        )
    if not np.all(np.isfinite(batch)):
        raise ContractViolationError(f"{op}: batch contains non-finite values")
    return batch


def rbm_cd_update(
    layer: RbmLayer, batch: Matrix, lr: float, cd_k: int, rng: RngStream
) -> RbmLayer:
    """One CD-k parameter update on a minibatch, in place.

    Positive phase uses the data and hidden activation probabilities;
    the Gibbs chain samples hidden states but propagates visible
    probabilities. Updates are averaged over the batch:
    delta_w = lr * (<v h>_data - <v h>_recon) / batch_size.
    """
    batch = _check_visible_batch(batch, layer.n_visible, "rbm_cd_update")
    if batch.shape[0] == 0:
        raise ContractViolationError("rbm_cd_update: empty batch")
    if np.any(batch < 0.0) or np.any(batch > 1.0):
        raise ContractViolationError("rbm_cd_update: batch values must lie in [0, 1]")
    if cd_k < 1:
        raise ContractViolationError(f"rbm_cd_update: cd_k must be >= 1, got {cd_k}")

    h0_prob = sigmoid(batch @ layer.w + layer.hidden_bias)
    pos_w = batch.T @ h0_prob
    pos_vb = batch.sum(axis=0)
    pos_hb = h0_prob.sum(axis=0)

    h_state = rng.bernoulli(h0_prob)
    for step in range(cd_k):
        v_prob = sigmoid(h_state @ layer.w.T + layer.visible_bias)
        h_prob = sigmoid(v_prob @ layer.w + layer.hidden_bias)
        if step < cd_k - 1:
            h_state = rng.bernoulli(h_prob)
    neg_w = v_prob.T @ h_prob
    neg_vb = v_prob.sum(axis=0)
    neg_hb = h_prob.sum(axis=0)

    scale = lr / batch.shape[0]
    layer.w += scale * (pos_w - neg_w)
    layer.visible_bias += scale * (pos_vb - neg_vb)
    layer.hidden_bias += scale * (pos_hb - neg_hb)
    return layer


def reconstruction_error(layer: RbmLayer, X: Matrix) -> float:
    """Deterministic one-pass reconstruction MSE (probabilities, no sampling)."""
    X = _check_visible_batch(X, layer.n_visible, "reconstruction_error")
    h_prob = sigmoid(X @ layer.w + layer.hidden_bias)
    v_prob = sigmoid(h_prob @ layer.w.T + layer.visible_bias)
    return float(np.mean((X - v_prob) ** 2))


def _batch_slices(n_rows: int, batch_size: int):
    for start in range(0, n_rows, batch_size):
        yield slice(start, min(start + batch_size, n_rows))


def pretrain(hyper: DbnHyperparams, X: Matrix, rng: RngStream) -> DbnModel:
    """Greedy layerwise CD pretraining; returns an untuned model.

    Layer k+1 trains on the hidden activation probabilities of the frozen
    layer k. The logistic output unit is initialized small-random and left
    untrained (finetune owns it).
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ContractViolationError("pretrain: X must be a nonempty 2-D matrix")
    if np.any(X < 0.0) or np.any(X > 1.0):
        raise ContractViolationError("pretrain: inputs must lie in [0, 1]")

    layers = []
    inputs = X
    for size in hyper.hidden_sizes:
        n_vis = inputs.shape[1]
        layer = RbmLayer(
            w=rng.normal(0.0, 0.01, size=(n_vis, size)),
            visible_bias=np.zeros(n_vis),
            hidden_bias=np.zeros(size),
        )
        for _ in range(hyper.pretrain_epochs):
            order = rng.permutation(inputs.shape[0])
            for sl in _batch_slices(inputs.shape[0], hyper.batch_size):
                rbm_cd_update(layer, inputs[order[sl]], hyper.pretrain_lr, hyper.cd_k, rng)
        layers.append(layer)
        inputs = sigmoid(inputs @ layer.w + layer.hidden_bias)

    output_weights = rng.normal(0.0, 0.01, size=hyper.hidden_sizes[-1])
    return DbnModel(layers=layers, output_weights=output_weights, output_bias=0.0)


def _forward(model: DbnModel, X: Matrix) -> list:
    """Activations [X, h1, ..., hL]; deterministic probabilities throughout."""
    acts = [X]
    for layer in model.layers:
        acts.append(sigmoid(acts[-1] @ layer.w + layer.hidden_bias))
    return acts


def predict_proba(model: DbnModel, X: Matrix) -> np.ndarray:
    """P(label 1) per row; deterministic forward pass, values in (0, 1)."""
    X = _check_visible_batch(X, model.n_visible, "predict_proba")
    hidden = _forward(model, X)[-1]
    return sigmoid(hidden @ model.output_weights + model.output_bias)


def bce_loss(model: DbnModel, X: Matrix, y: np.ndarray) -> float:
    """Mean binary cross-entropy of predict_proba against labels in {0,1}."""
    p = predict_proba(model, X)
    y = np.asarray(y, dtype=np.float64)
    if y.shape != p.shape:
        raise ContractViolationError(f"bce_loss: {len(y)} labels for {len(p)} rows")
    # Guard against log(0) from saturated outputs; inactive for small weights.
    p = np.clip(p, 1e-12, 1.0 - 1e-12)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


@dataclass
class DbnGradients:
    """Gradients of mean BCE for the feedforward parameters.

    Visible biases never enter the feedforward pass, so they carry no
    gradient and are not represented here.
    """

    weight_grads: list = field(default_factory=list)
    hidden_bias_grads: list = field(default_factory=list)
    output_weight_grad: np.ndarray = None
    output_bias_grad: float = 0.0


def bce_gradients(model: DbnModel, X: Matrix, y: np.ndarray) -> DbnGradients:
    """Backprop gradients of mean BCE over the batch."""
    X = _check_visible_batch(X, model.n_visible, "bce_gradients")
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (X.shape[0],):
        raise ContractViolationError(f"bce_gradients: {y.shape} labels for {X.shape[0]} rows")

    acts = _forward(model, X)
    p = sigmoid(acts[-1] @ model.output_weights + model.output_bias)
    # d(mean BCE)/d(logit) for a sigmoid output is (p - y)/n.
    delta_out = (p - y) / X.shape[0]

    grads = DbnGradients()
    grads.output_weight_grad = acts[-1].T @ delta_out
    grads.output_bias_grad = float(delta_out.sum())

    delta = np.outer(delta_out, model.output_weights) * acts[-1] * (1.0 - acts[-1])
    for idx in range(len(model.layers) - 1, -1, -1):
        grads.weight_grads.insert(0, acts[idx].T @ delta)
        grads.hidden_bias_grads.insert(0, delta.sum(axis=0))
        if idx > 0:
            delta = (delta @ model.layers[idx].w.T) * acts[idx] * (1.0 - acts[idx])
    return grads


def apply_gradients(model: DbnModel, grads: DbnGradients, lr: float) -> None:
    for layer, dw, dhb in zip(model.layers, grads.weight_grads, grads.hidden_bias_grads):
        layer.w -= lr * dw
        layer.hidden_bias -= lr * dhb
    model.output_weights -= lr * grads.output_weight_grad
    model.output_bias -= lr * grads.output_bias_grad


def finetune(
    model: DbnModel, X: Matrix, y: np.ndarray, hyper: DbnHyperparams, rng: RngStream
) -> DbnModel:
    """Minibatch SGD on mean BCE for exactly hyper.max_it epochs, in place."""
    X = _check_visible_batch(X, model.n_visible, "finetune")
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (X.shape[0],):
        raise ContractViolationError(f"finetune: {y.shape} labels for {X.shape[0]} rows")
    for _ in range(hyper.max_it):
        order = rng.permutation(X.shape[0])
        for sl in _batch_slices(X.shape[0], hyper.batch_size):
            idx = order[sl]
            apply_gradients(model, bce_gradients(model, X[idx], y[idx]), hyper.finetune_lr)
    return model


MODEL_FORMAT_VERSION = "dbn/1"


def model_to_dict(model: DbnModel) -> dict:
    return {
        "format": MODEL_FORMAT_VERSION,
        "layer_sizes": list(model.layer_sizes),
        "layers": [
            {
                "w": layer.w.tolist(),
                "visible_bias": layer.visible_bias.tolist(),
                "hidden_bias": layer.hidden_bias.tolist(),
            }
            for layer in model.layers
        ],
        "output_weights": model.output_weights.tolist(),
        "output_bias": model.output_bias,
    }


def model_from_dict(d: dict) -> DbnModel:
    if d.get("format") != MODEL_FORMAT_VERSION:
        raise ConfigError(f"unsupported model format {d.get('format')!r}")
    layers = [
        RbmLayer(
            w=np.asarray(entry["w"], dtype=np.float64),
            visible_bias=np.asarray(entry["visible_bias"], dtype=np.float64),
            hidden_bias=np.asarray(entry["hidden_bias"], dtype=np.float64),
        )
        for entry in d["layers"]
    ]
    return DbnModel(
        layers=layers,
        output_weights=np.asarray(d["output_weights"], dtype=np.float64),
        output_bias=float(d["output_bias"]),
    )
