"""scikit-learn wrappers around the functional training API."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .data import Dataset, FprInterval, zscore_stats
from .metrics import empirical_pauc
from .trainers import TrainConfig, train

__all__ = ["PartialAUCSVM", "ZScoreScaler"]


def _binary_labels(y) -> tuple[np.ndarray, np.ndarray]:
    classes = np.unique(y)
    if classes.shape[0] != 2:
        raise ValueError(f"need exactly two classes, got {classes.shape[0]}")
    # the larger label is the positive class ({-1, +1} and {0, 1} both work)
    return classes, np.where(y == classes[1], 1, -1)


class PartialAUCSVM(ClassifierMixin, BaseEstimator):
    """Linear scorer trained to maximise partial AUC over an FPR range.

    Parameters
    ----------
    alpha, beta : float
        FPR range ``[alpha, beta]``.
    C : float
        Regularization trade-off.
    algo : {"pauc_struct", "pauc_dc", "auc"}
        Structural surrogate, DC hinge surrogate (needs ``alpha > 0``), or full AUC.
    epsilon, tau : float
        Cutting-plane and CCCP tolerances.
    max_outer_iters : int or None
        Iteration cap; ``None`` picks the trainer default.

    Attributes
    ----------
    coef_ : ndarray of shape (n_features,)
    classes_ : ndarray of shape (2,)
    report_ : TrainReport
    """

    def __init__(self, alpha: float = 0.0, beta: float = 1.0, C: float = 1.0,
                 algo: str = "pauc_struct", epsilon: float = 1e-4, tau: float = 1e-3,
                 max_outer_iters: int | None = None):
        self.alpha = alpha
        self.beta = beta
        self.C = C
        self.algo = algo
        self.epsilon = epsilon
        self.tau = tau
        self.max_outer_iters = max_outer_iters

    def _config(self) -> TrainConfig:
        return TrainConfig(C=self.C, epsilon=self.epsilon, tau=self.tau,
                           interval=FprInterval(self.alpha, self.beta), algo=self.algo,
                           max_outer_iters=self.max_outer_iters)

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64)
        self.classes_, signs = _binary_labels(y)
        self.report_ = train(Dataset.from_xy(X, signs), self._config())
        self.coef_ = np.array(self.report_.model.weights)
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return X @ self.coef_

    def predict(self, X) -> np.ndarray:
        # no intercept is learned; the sign of the score is the natural cut
        return np.where(self.decision_function(X) > 0, self.classes_[1], self.classes_[0])

    def score(self, X, y, sample_weight=None) -> float:
        """Empirical partial AUC on ``[alpha, beta]`` (not accuracy)."""
        if sample_weight is not None:
            raise ValueError("sample weights are not supported")
        s = self.decision_function(X)
        pos = np.asarray(y) == self.classes_[1]
        return empirical_pauc(s[pos], s[~pos], FprInterval(self.alpha, self.beta))


class ZScoreScaler(TransformerMixin, BaseEstimator):
    """Per-feature z-scoring with population variance; constant columns are only centred."""

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        stats = zscore_stats(X)
        self.mean_, self.scale_ = stats.means, stats.stds
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "mean_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return (X - self.mean_) / self.scale_

    def inverse_transform(self, X):
        check_is_fitted(self, "mean_")
        return check_array(X, dtype=np.float64) * self.scale_ + self.mean_
