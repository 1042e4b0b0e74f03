"""Train a single deep belief network end to end: greedy layerwise CD
pretraining, then supervised fine-tuning with backprop, watching the
reconstruction error and classification loss fall.

    python3 demos/02_dbn_training.py
"""

import numpy as np

from deepbalance.data import fit_standardizer, generate_synthetic
from deepbalance.dbn import (
    DbnHyperparams,
    bce_loss,
    finetune,
    predict_proba,
    pretrain,
    reconstruction_error,
)
from deepbalance.metrics import auc
from deepbalance.numerics import derive_stream, sigmoid

data = generate_synthetic(n_majority=400, n_minority=400, d=8, class_separation=1.5, seed=3)
scaler = fit_standardizer(data)
# inputs live in (0,1): z-score then squash, so CD sees probability-like visibles
X = sigmoid(scaler.transform(data.features))
y = data.labels.astype(np.float64)

hyper = DbnHyperparams(hidden_sizes=(10, 5), pretrain_epochs=10, max_it=50)
rng = derive_stream(42, 1)

print(f"architecture: {data.n_features} visible -> {hyper.hidden_sizes} -> 1")
model = pretrain(hyper, X, rng)
for i, layer in enumerate(model.layers, start=1):
    print(f"layer {i}: {layer.n_visible} x {layer.n_hidden}, "
          f"|W| mean {np.abs(layer.w).mean():.4f} after {hyper.pretrain_epochs} CD epochs")

# pretraining already compresses the input: compare against a fresh random RBM
fresh = pretrain(DbnHyperparams(hidden_sizes=(10, 5), pretrain_epochs=0), X, derive_stream(42, 9))
print(f"layer-1 reconstruction MSE: random init {reconstruction_error(fresh.layers[0], X):.5f}, "
      f"pretrained {reconstruction_error(model.layers[0], X):.5f}")

print(f"\nfine-tuning for {hyper.max_it} epochs")
print(f"  epoch  0: loss {bce_loss(model, X, y):.4f}")
for block in range(5):
    step = DbnHyperparams(hidden_sizes=hyper.hidden_sizes, pretrain_epochs=0, max_it=10)
    finetune(model, X, y, step, rng)
    print(f"  epoch {10 * (block + 1):2d}: loss {bce_loss(model, X, y):.4f}")

scores = predict_proba(model, X)
print(f"\ntraining AUC {auc(scores, data.labels):.4f}")
print(f"score range [{scores.min():.3f}, {scores.max():.3f}]; "
      f"mean positive {scores[y == 1].mean():.3f}, mean negative {scores[y == 0].mean():.3f}")
