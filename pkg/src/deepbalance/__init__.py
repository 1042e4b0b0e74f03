"""Balanced-bootstrap ensembles of deep belief networks for highly
imbalanced binary classification, with baseline resamplers and ROC/AUC
evaluation."""

from .data import (
    Dataset,
    SplitResult,
    StandardizationParams,
    apply_standardizer,
    concat_rows,
    fit_standardizer,
    generate_synthetic,
    invert_standardizer,
    load_csv,
    split_by_class,
    stratified_split,
    subsample_dataset,
)
from .dbn import (
    DbnHyperparams,
    DbnModel,
    RbmLayer,
    bce_gradients,
    bce_loss,
    finetune,
    predict_proba,
    pretrain,
    rbm_cd_update,
    reconstruction_error,
)
from .ensemble import (
    EnsembleMember,
    EnsembleModel,
    TrainConfig,
    classify,
    load_ensemble,
    predict,
    sample_features,
    save_ensemble,
    serialize_ensemble,
    train_baseline,
    train_deepbalance,
)
from .errors import (
    ConfigError,
    ContractViolationError,
    DataLoadError,
    DeepBalanceError,
    ResampleError,
    SplitError,
    TrainingError,
    UndefinedMetricError,
)
from .experiment import (
    BaselineMethod,
    DeepBalanceMethod,
    ExperimentSpec,
    MetricsRow,
    load_experiment_spec,
    run_benchmark,
    run_sweep,
)
from .metrics import (
    ConfusionCounts,
    RocCurve,
    acc_minus,
    acc_plus,
    auc,
    confusion,
    misclassification_error,
    roc_curve,
    trapezoid_area,
    weighted_accuracy,
)
from .numerics import RngStream, derive_stream, matmul, sigmoid
from .resampling import (
    BalancedBootstrap,
    NoResample,
    Oversample,
    Smote,
    Undersample,
    balanced_bootstrap,
    random_oversample,
    random_undersample,
    smote,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
