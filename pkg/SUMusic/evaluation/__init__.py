"""
Genre classification of song feature vectors: training, stratified
cross-validation, confusion matrices and accuracies.
"""
import logging
from typing import (Callable, Dict, Iterable, Optional, Tuple, Union)

from joblib import (Parallel, delayed)
import numpy as np
from sklearn.metrics import confusion_matrix
from sklearn.model_selection import StratifiedKFold
from sklearn.pipeline import Pipeline
from sklearn.preprocessing import StandardScaler
from sklearn.svm import SVC

from SUMusic.errors import ValidationError
from SUMusic.evaluation.significance import (
    compare_confusion_matrices,
    error_matrix,
    wilcoxon_signed_rank,
)
from SUMusic.models import (ConfusionMatrix, LabeledDataset)

logger = logging.getLogger("SUMusic")

__all__ = [
    "accuracy",
    "compare_confusion_matrices",
    "confusion_difference",
    "cross_validate",
    "error_matrix",
    "fold_assignments",
    "subset_dataset",
    "train_classifier",
    "wilcoxon_signed_rank",
]


def train_classifier(
    train: LabeledDataset,
    C: float = 1.0,
    gamma: Union[str, float] = "auto",
) -> Pipeline:
    """
    Fits a radial-basis support vector classifier on standardized features;
    multiclass decisions are one-vs-one votes.

    :param C: Regularization parameter.
    :param gamma: Kernel width; "auto" is one over the feature count.

    :raises SUMusic.errors.ValidationError: Fewer than 2 classes present.
    """
    y = train.y
    if len(np.unique(y)) < 2:
        raise ValidationError(
            "Training a classifier requires items of at least 2 classes."
        )
    model = Pipeline([
        ("scaler", StandardScaler()),
        ("svm", SVC(kernel="rbf", C=C, gamma=gamma)),
    ])
    model.fit(train.X, y)
    return model


def fold_assignments(
    data: LabeledDataset,
    folds: int,
    seed: int,
) -> np.ndarray:
    """
    Stratified, seeded fold index of every item.

    :raises SUMusic.errors.ValidationError: Fewer than 2 folds or a class
            smaller than the number of folds.
    """
    if folds < 2:
        raise ValidationError(
            f"Cross-validation needs >= 2 folds, got {folds}."
        )
    for label, count in data.class_counts().items():
        if count < folds:
            raise ValidationError(
                f"Class '{label}' has {count} items, fewer than {folds} "
                "folds."
            )
    assignment = np.empty(len(data), dtype=np.int64)
    splitter = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
    for fold, (_, test) in enumerate(splitter.split(data.X, data.y)):
        assignment[test] = fold
    return assignment


def _predict_fold(
    data: LabeledDataset,
    assignment: np.ndarray,
    fold: int,
    trainer: Callable,
) -> Tuple[np.ndarray, np.ndarray]:
    train_idx = np.flatnonzero(assignment != fold)
    test_idx = np.flatnonzero(assignment == fold)
    model = trainer(data.subset(train_idx))
    return test_idx, np.asarray(model.predict(data.subset(test_idx).X))


def cross_validate(
    data: LabeledDataset,
    folds: int = 10,
    seed: int = 1,
    C: float = 1.0,
    gamma: Union[str, float] = "auto",
    trainer: Optional[Callable[[LabeledDataset], object]] = None,
    workers: int = 1,
) -> ConfusionMatrix:
    """
    Out-of-fold predictions of every item aggregated into one confusion
    matrix.

    :param trainer: Callable that fits a model with a `predict()` method on a
            training dataset; defaults to `train_classifier()` with `C` and
            `gamma`.
    :param workers: Number of folds trained in parallel.
    """
    if trainer is None:
        def trainer(train):
            return train_classifier(train, C=C, gamma=gamma)
    assignment = fold_assignments(data, folds, seed)
    results = Parallel(n_jobs=workers)(
        delayed(_predict_fold)(data, assignment, fold, trainer)
        for fold in range(folds)
    )
    predictions = np.empty(len(data), dtype=np.int64)
    for test_idx, predicted in results:
        predictions[test_idx] = predicted
    counts = confusion_matrix(
        data.y,
        predictions,
        labels=list(range(len(data.classes))),
    )
    return ConfusionMatrix(counts, data.classes)


def accuracy(
    matrix: ConfusionMatrix,
) -> Tuple[float, Dict[str, Optional[float]]]:
    """
    Overall accuracy and accuracy of every class (true rows); classes without
    items have no accuracy (`None`).
    """
    if matrix.total == 0:
        raise ValidationError("Cannot compute accuracy of an empty matrix.")
    counts = matrix.counts
    overall = float(np.trace(counts)) / matrix.total
    per_class = {}
    for i, label in enumerate(matrix.classes):
        row_sum = counts[i].sum()
        per_class[label] = (
            float(counts[i, i]) / row_sum if row_sum > 0 else None
        )
    return overall, per_class


def confusion_difference(
    a: ConfusionMatrix,
    b: ConfusionMatrix,
) -> Dict:
    """Cell-wise count difference `a - b` and per-class accuracy deltas."""
    if a.classes != b.classes:
        raise ValidationError(
            f"Class orders differ: {a.classes} vs. {b.classes}."
        )
    _, per_class_a = accuracy(a)
    _, per_class_b = accuracy(b)
    deltas = {}
    for label in a.classes:
        if per_class_a[label] is None or per_class_b[label] is None:
            deltas[label] = None
        else:
            deltas[label] = per_class_a[label] - per_class_b[label]
    return {
        "classes": a.classes,
        "counts": (a.counts - b.counts).tolist(),
        "per_class": deltas,
    }


def subset_dataset(
    data: LabeledDataset,
    classes: Iterable[str],
) -> LabeledDataset:
    """Items of the given classes only, e.g. for two-genre tasks."""
    classes = list(classes)
    unknown = set(classes) - set(data.classes)
    if unknown:
        raise ValidationError(
            f"Unknown classes: {', '.join(sorted(unknown))}."
        )
    return LabeledDataset(
        items=[item for item in data.items if item.label in classes],
        classes=classes,
    )
