import math
import os

import numpy as np
import pytest

import deepbalance as db
from deepbalance.data import Dataset, concat_rows, split_by_class, subsample_dataset
from deepbalance.errors import ContractViolationError, DataLoadError, SplitError


def _rows_sorted(ds):
    """Rows as a lexicographically sorted array, for multiset comparison."""
    combined = np.column_stack([ds.features, ds.labels])
    order = np.lexsort(combined.T[::-1])
    return combined[order]


def test_dataset_validation():
    with pytest.raises(ContractViolationError):
        Dataset(np.ones((2, 2)), np.array([0, 2]), ("a", "b"))
    with pytest.raises(ContractViolationError):
        Dataset(np.ones((2, 2)), np.array([0]), ("a", "b"))
    with pytest.raises(ContractViolationError):
        Dataset(np.ones((2, 2)), np.array([0, 1]), ("a",))
    with pytest.raises(ContractViolationError):
        Dataset(np.array([[1.0, np.inf]]), np.array([1]), ("a", "b"))


def test_dataset_snapshots_and_freezes():
    src = np.ones((2, 2))
    ds = Dataset(src, np.array([0, 1]), ("a", "b"))
    src[0, 0] = 99.0
    assert ds.features[0, 0] == 1.0
    with pytest.raises(ValueError):
        ds.features[0, 0] = 5.0


def test_concat_rows_requires_same_features():
    a = Dataset(np.ones((1, 2)), np.array([0]), ("a", "b"))
    b = Dataset(np.ones((1, 2)), np.array([1]), ("a", "c"))
    with pytest.raises(ContractViolationError):
        concat_rows(a, b)


def test_split_by_class():
    ds = Dataset(np.arange(8.0).reshape(4, 2), np.array([0, 1, 0, 1]), ("a", "b"))
    minority, majority = split_by_class(ds)
    assert minority.n_rows == 2 and np.all(minority.labels == 1)
    assert majority.n_rows == 2 and np.all(majority.labels == 0)


def test_stratified_split_floor_counts():
    # 492 positives at 0.7 -> floor gives 344 train / 148 test
    n_pos, n_neg = 492, 1200
    ds = db.generate_synthetic(n_neg, n_pos, 3, 1.0, seed=0)
    split = db.stratified_split(ds, 0.7, seed=5)
    assert split.train.n_positive == math.floor(0.7 * n_pos) == 344
    assert split.test.n_positive == n_pos - 344 == 148
    assert split.train.n_negative == math.floor(0.7 * n_neg)
    assert split.test.n_negative == n_neg - math.floor(0.7 * n_neg)


def test_stratified_split_preserves_row_multiset():
    ds = db.generate_synthetic(50, 10, 4, 2.0, seed=1)
    split = db.stratified_split(ds, 0.7, seed=9)
    merged = np.vstack([_rows_sorted(split.train), _rows_sorted(split.test)])
    order = np.lexsort(merged.T[::-1])
    assert np.array_equal(merged[order], _rows_sorted(ds))


def test_stratified_split_full_fraction():
    ds = db.generate_synthetic(20, 5, 2, 2.0, seed=2)
    split = db.stratified_split(ds, 1.0, seed=3)
    assert split.test.n_rows == 0
    assert np.array_equal(_rows_sorted(split.train), _rows_sorted(ds))


def test_stratified_split_seed_changes_membership_not_counts():
    ds = db.generate_synthetic(100, 20, 3, 2.0, seed=4)
    a = db.stratified_split(ds, 0.7, seed=1)
    b = db.stratified_split(ds, 0.7, seed=2)
    assert a.train.n_positive == b.train.n_positive
    assert a.train.n_negative == b.train.n_negative
    assert not np.array_equal(
        np.sort(a.train.features[:, 0]), np.sort(b.train.features[:, 0])
    )


def test_stratified_split_errors():
    ds = db.generate_synthetic(10, 1, 2, 1.0, seed=0)
    with pytest.raises(SplitError):
        db.stratified_split(ds, 0.0, seed=1)
    with pytest.raises(SplitError):
        db.stratified_split(ds, 1.5, seed=1)
    one_class = Dataset(np.ones((3, 2)), np.zeros(3, dtype=int), ("a", "b"))
    with pytest.raises(SplitError):
        db.stratified_split(one_class, 0.7, seed=1)


def test_standardizer_hand_arithmetic():
    ds = Dataset(np.array([[1.0], [2.0], [3.0]]), np.array([0, 0, 1]), ("x",))
    params = db.fit_standardizer(ds)
    assert params.mean[0] == 2.0
    # population stddev of [1,2,3] = sqrt(2/3)
    assert abs(params.stddev[0] - math.sqrt(2.0 / 3.0)) < 1e-15
    out = db.apply_standardizer(ds, params)
    expected = np.array([-1.224744871391589, 0.0, 1.224744871391589])
    assert np.allclose(out.features[:, 0], expected, atol=1e-12)


def test_standardizer_constant_column_maps_to_zero():
    ds = Dataset(np.full((4, 2), 7.5), np.array([0, 0, 1, 1]), ("a", "b"))
    params = db.fit_standardizer(ds)
    assert np.all(params.stddev == 1.0)
    assert np.all(db.apply_standardizer(ds, params).features == 0.0)


def test_standardizer_no_leakage():
    train = Dataset(np.array([[0.0], [1.0]]), np.array([0, 1]), ("x",))
    test = Dataset(np.array([[10.0], [12.0]]), np.array([0, 1]), ("x",))
    params = db.fit_standardizer(train)
    transformed = db.apply_standardizer(test, params)
    assert abs(transformed.features.mean()) > 1.0


def test_standardizer_round_trip():
    ds = db.generate_synthetic(30, 10, 5, 1.5, seed=6)
    params = db.fit_standardizer(ds)
    back = db.invert_standardizer(db.apply_standardizer(ds, params), params)
    assert np.allclose(back.features, ds.features, atol=1e-9)


def test_generate_synthetic_counts():
    ds = db.generate_synthetic(1000, 10, 2, 4.0, seed=3)
    assert ds.n_rows == 1010
    assert ds.n_positive == 10
    assert ds.feature_names == ("f1", "f2")


def test_generate_synthetic_zero_separation_unlearnable():
    ds = db.generate_synthetic(300, 60, 3, 0.0, seed=8)
    split = db.stratified_split(ds, 0.7, seed=1)
    cfg = db.TrainConfig(mtry=2, total_nets=3, max_it=10, seed=1)
    model = db.train_deepbalance(split.train, cfg)
    scores = db.predict(model, split.test.features)
    assert 0.3 <= db.auc(scores, split.test.labels) <= 0.7


def test_generate_synthetic_wide_separation_bayes_auc():
    ds = db.generate_synthetic(2000, 200, 2, 6.0, seed=9)
    # Bayes rule for equal spherical covariances scores by the projection
    # onto the mean-difference direction (all-ones here).
    scores = ds.features.sum(axis=1)
    pos = scores[ds.labels == 1]
    neg = scores[ds.labels == 0]
    wins = (pos[:, None] > neg[None, :]).mean()
    assert wins >= 0.99


def test_subsample_dataset():
    ds = db.generate_synthetic(100, 20, 2, 1.0, seed=10)
    sub = subsample_dataset(ds, 30, 5, seed=2)
    assert sub.n_negative == 30 and sub.n_positive == 5
    with pytest.raises(SplitError):
        subsample_dataset(ds, 101, None, seed=2)


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return str(path)


def test_load_csv_numeric_and_label(tmp_path):
    p = _write(
        tmp_path / "t.csv",
        "a,b,cls\n1,2.5,yes\n3,4.5,no\n5,6.5,yes\n",
    )
    ds = db.load_csv(p, label_column="cls", positive_label="yes")
    assert ds.feature_names == ("a", "b")
    assert np.array_equal(ds.labels, [1, 0, 1])
    assert np.array_equal(ds.features[:, 0], [1.0, 3.0, 5.0])


def test_load_csv_one_hot_two_levels(tmp_path):
    p = _write(
        tmp_path / "t.csv",
        "amt,kind,cls\n1,CASH,0\n2,WIRE,1\n3,CASH,0\n",
    )
    ds = db.load_csv(p, label_column="cls", positive_label="1", categorical_columns=("kind",))
    assert ds.feature_names == ("amt", "kind=CASH", "kind=WIRE")
    onehot = ds.features[:, 1:]
    assert set(np.unique(onehot)) <= {0.0, 1.0}
    assert np.all(onehot.sum(axis=1) == 1.0)
    assert np.array_equal(onehot[:, 0], [1.0, 0.0, 1.0])


def test_load_csv_unparseable_cell_names_row_and_column(tmp_path):
    p = _write(tmp_path / "t.csv", "a,cls\n1,0\nbogus,1\n")
    with pytest.raises(DataLoadError) as err:
        db.load_csv(p, label_column="cls", positive_label="1")
    assert "row 2" in str(err.value)
    assert "'a'" in str(err.value)


def test_load_csv_missing_value_rejected(tmp_path):
    p = _write(tmp_path / "t.csv", "a,b,cls\n1,,0\n")
    with pytest.raises(DataLoadError) as err:
        db.load_csv(p, label_column="cls", positive_label="1")
    assert "row 1" in str(err.value) and "missing" in str(err.value)


def test_load_csv_ragged_row_rejected(tmp_path):
    p = _write(tmp_path / "t.csv", "a,b,cls\n1,2,0\n1,2\n")
    with pytest.raises(DataLoadError) as err:
        db.load_csv(p, label_column="cls", positive_label="1")
    assert "row 2" in str(err.value)


def test_load_csv_missing_column(tmp_path):
    p = _write(tmp_path / "t.csv", "a,b\n1,2\n")
    with pytest.raises(DataLoadError) as err:
        db.load_csv(p, label_column="cls", positive_label="1")
    assert "cls" in str(err.value)


def test_load_csv_missing_file_names_path(tmp_path):
    missing = str(tmp_path / "nope.csv")
    with pytest.raises(DataLoadError) as err:
        db.load_csv(missing, label_column="cls", positive_label="1")
    assert "nope.csv" in str(err.value)


def test_load_csv_drop_columns(tmp_path):
    p = _write(tmp_path / "t.csv", "t,a,cls\n9,1,0\n8,2,1\n")
    ds = db.load_csv(p, label_column="cls", positive_label="1", drop_columns=("t",))
    assert ds.feature_names == ("a",)


def _creditcard_path():
    candidate = os.environ.get("DEEPBALANCE_CREDITCARD_CSV", "data/creditcard.csv")
    return candidate if os.path.exists(candidate) else None


@pytest.mark.skipif(_creditcard_path() is None, reason="credit-card CSV not present")
def test_load_csv_creditcard_counts():
    ds = db.load_csv(
        _creditcard_path(), label_column="Class", positive_label="1", drop_columns=("Time",)
    )
    assert ds.n_rows == 284807
    assert ds.n_positive == 492
