"""Shared test oracles: brute-force reimplementations kept deliberately
independent of the library code they check."""

import numpy as np

from deepbalance.dbn import bce_loss


def pairwise_auc(scores, labels):
    """O(n^2) Mann-Whitney oracle: wins + half-credit ties over all
    positive/negative pairs."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    total = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                total += 1.0
            elif p == q:
                total += 0.5
    return total / (len(pos) * len(neg))


def flatten_params(model):
    """Feedforward parameters as one vector: per layer (w, hidden_bias),
    then output weights and bias."""
    chunks = []
    for layer in model.layers:
        chunks.append(layer.w.ravel().copy())
        chunks.append(layer.hidden_bias.copy())
    chunks.append(model.output_weights.copy())
    chunks.append(np.array([model.output_bias]))
    return np.concatenate(chunks)


def set_flat_params(model, vec):
    i = 0
    for layer in model.layers:
        n = layer.w.size
        layer.w[...] = vec[i : i + n].reshape(layer.w.shape)
        i += n
        n = layer.hidden_bias.size
        layer.hidden_bias[...] = vec[i : i + n]
        i += n
    n = model.output_weights.size
    model.output_weights[...] = vec[i : i + n]
    i += n
    model.output_bias = float(vec[i])


def flatten_grads(grads):
    chunks = []
    for dw, dhb in zip(grads.weight_grads, grads.hidden_bias_grads):
        chunks.append(dw.ravel())
        chunks.append(dhb)
    chunks.append(grads.output_weight_grad)
    chunks.append(np.array([grads.output_bias_grad]))
    return np.concatenate(chunks)


def numeric_gradient(model, X, y, h=1e-5):
    """Central finite differences of the mean BCE over every feedforward
    parameter."""
    base = flatten_params(model)
    out = np.empty_like(base)
    for i in range(len(base)):
        v = base.copy()
        v[i] = base[i] + h
        set_flat_params(model, v)
        up = bce_loss(model, X, y)
        v[i] = base[i] - h
        set_flat_params(model, v)
        down = bce_loss(model, X, y)
        out[i] = (up - down) / (2.0 * h)
    set_flat_params(model, base)
    return out


def gradient_relative_error(model, X, y):
    """Relative error between backprop and central differences, as the norm
    ratio ||a - n|| / max(||a||, ||n||). Per-coordinate ratios are useless on
    parameters whose true gradient is ~1e-7: there the difference quotient's
    own roundoff dominates."""
    from deepbalance.dbn import bce_gradients

    analytic = flatten_grads(bce_gradients(model, X, y))
    numeric = numeric_gradient(model, X, y)
    denom = max(np.linalg.norm(analytic), np.linalg.norm(numeric), 1e-12)
    return float(np.linalg.norm(analytic - numeric) / denom)


def brute_force_knn(points, k):
    """All-pairs k nearest neighbors by Euclidean distance, excluding self;
    distance ties break by row index (stable sort)."""
    points = np.asarray(points, dtype=float)
    n = len(points)
    out = []
    for i in range(n):
        d = np.sqrt(((points - points[i]) ** 2).sum(axis=1))
        d[i] = np.inf
        order = np.argsort(d, kind="stable")
        out.append(list(order[:k]))
    return out
