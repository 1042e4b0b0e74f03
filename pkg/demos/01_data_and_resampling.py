"""Walk through the data layer: synthetic imbalanced data, the class split,
standardization, and what each resampler does to class prevalence.

Run from the repository root after installing the package:

    python3 demos/01_data_and_resampling.py
"""

import numpy as np

from deepbalance.data import fit_standardizer, generate_synthetic, split_by_class, stratified_split
from deepbalance.numerics import derive_stream
from deepbalance.resampling import (
    balanced_bootstrap,
    random_oversample,
    random_undersample,
    smote,
)


def prevalence(ds):
    return ds.n_positive / ds.n_rows


# Two spherical Gaussians, heavily imbalanced: 2000 majority rows at the
# origin, 40 minority rows shifted by 2 standard deviations per feature.
data = generate_synthetic(n_majority=2000, n_minority=40, d=5, class_separation=2.0, seed=7)
print(f"dataset: {data.n_rows} rows, {data.n_features} features, "
      f"prevalence {prevalence(data):.4f}")

# A stratified 70/30 split keeps that prevalence on both sides.
split = stratified_split(data, 0.7, seed=1)
print(f"train: {split.train.n_rows} rows (prevalence {prevalence(split.train):.4f})")
print(f"test:  {split.test.n_rows} rows (prevalence {prevalence(split.test):.4f})")

# Standardization parameters are always fit on training data only.
scaler = fit_standardizer(split.train)
z = scaler.transform(split.train.features)
print(f"standardized train features: per-column mean ~0 "
      f"(max |mean| {np.abs(z.mean(axis=0)).max():.2e}), std ~1")

minority, majority = split_by_class(split.train)
print(f"\nclass split: {minority.n_rows} minority vs {majority.n_rows} majority rows")

# Each resampler gets its own seeded stream so reruns print the same numbers.
boot = balanced_bootstrap(minority, majority, derive_stream(7, 1))
print(f"\nbalanced bootstrap: {boot.n_rows} rows, prevalence {prevalence(boot):.2f}")
print("  all minority rows kept once; equally many majority rows drawn with replacement")

under = random_undersample(split.train, derive_stream(7, 2))
print(f"undersample: {under.n_rows} rows, prevalence {prevalence(under):.2f}")
print("  majority thinned without replacement; no duplicate majority rows")

over = random_oversample(split.train, 500, derive_stream(7, 3))
print(f"oversample to 500/class: {over.n_rows} rows, prevalence {prevalence(over):.2f}")

sm = smote(split.train, k=5, amount_multiplier=2, rng=derive_stream(7, 4))
print(f"smote (k=5, x2): {sm.n_rows} rows, prevalence {prevalence(sm):.2f}")
n_synth = sm.n_positive - minority.n_rows
print(f"  {n_synth} synthetic minority rows, each on a segment toward a near neighbor")
