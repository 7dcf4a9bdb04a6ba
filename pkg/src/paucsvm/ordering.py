"""Compact ordering representation, joint feature map and ordering losses.

An ordering of ``m`` positives against ``k`` tracked negatives is encoded by a
0/1 matrix ``pi`` (``pi[i, j] = 1`` iff positive ``i`` is ranked below negative
``j``). It is stored as two count vectors:

* ``a_plus[i]``  -- negatives ranked below positive ``i`` (``sum_j 1 - pi[i, j]``)
* ``a_minus[j]`` -- positives ranked above negative ``j`` (``sum_i 1 - pi[i, j]``)

Negatives are always held in descending order of the current model score, so
the j-th column is the j-th ranked negative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Constraint",
    "OrderingCounts",
    "build_constraint",
    "counts_from_matrix",
    "delta_auc",
    "delta_pauc_tr",
    "feature_scale",
    "joint_feature_map",
]


@dataclass(frozen=True, eq=False)
class OrderingCounts:
    a_plus: np.ndarray
    a_minus: np.ndarray

    def __post_init__(self):
        ap = np.asarray(self.a_plus, dtype=np.int64).ravel()
        am = np.asarray(self.a_minus, dtype=np.int64).ravel()
        object.__setattr__(self, "a_plus", ap)
        object.__setattr__(self, "a_minus", am)

    @property
    def m(self) -> int:
        return self.a_plus.shape[0]

    @property
    def k(self) -> int:
        return self.a_minus.shape[0]

    def is_consistent(self) -> bool:
        m, k = self.m, self.k
        return bool(
            (self.a_plus >= 0).all() and (self.a_plus <= k).all()
            and (self.a_minus >= 0).all() and (self.a_minus <= m).all()
            and self.a_plus.sum() == self.a_minus.sum()
        )

    @classmethod
    def perfect(cls, m: int, k: int) -> "OrderingCounts":
        return cls(np.full(m, k), np.full(k, m))

    @classmethod
    def reversed(cls, m: int, k: int) -> "OrderingCounts":
        return cls(np.zeros(m), np.zeros(k))


@dataclass(frozen=True, eq=False)
class Constraint:
    """Cutting plane ``xi >= loss - w . dphi``."""

    loss: float
    dphi: np.ndarray

    def violation(self, w) -> float:
        return self.loss - float(np.dot(w, self.dphi))

    def scaled(self, factor: float) -> "Constraint":
        return Constraint(self.loss * factor, self.dphi * factor)


def counts_from_matrix(pi) -> OrderingCounts:
    pi = np.asarray(pi)
    if pi.ndim != 2:
        raise ValueError("ordering matrix must be 2-D")
    correct = 1 - pi.astype(np.int64)
    return OrderingCounts(correct.sum(axis=1), correct.sum(axis=0))


def feature_scale(m: int, k: int, j_alpha: int = 0) -> float:
    """Normaliser shared by the loss and the feature map: ``1 / (m (k - j_alpha))``.

    With ``j_alpha = 0`` this is the usual ``1 / (m k)``.
    """
    return 1.0 / (m * (k - j_alpha))


def joint_feature_map(positives, Z, counts: OrderingCounts, scale: float | None = None):
    """``scale * (sum_i a_plus[i] x_i - sum_j a_minus[j] z_j)``.

    Equal to ``scale * sum_ij (1 - pi_ij)(x_i - z_j)``; ``scale`` defaults to
    ``1 / (m k)``.
    """
    positives = np.asarray(positives, dtype=np.float64)
    Z = np.asarray(Z, dtype=np.float64)
    m, k = positives.shape[0], Z.shape[0]
    if counts.m != m or counts.k != k:
        raise ValueError(
            f"counts are {counts.m}x{counts.k} but data is {m} positives x {k} negatives"
        )
    if scale is None:
        scale = feature_scale(m, k)
    return scale * (counts.a_plus @ positives - counts.a_minus @ Z)


def delta_auc(counts: OrderingCounts) -> float:
    m, k = counts.m, counts.k
    return float((m - counts.a_minus).sum()) / (m * k)


def delta_pauc_tr(counts: OrderingCounts, j_alpha: int, j_beta: int) -> float:
    """Misranked fraction over tracked negatives in positions ``j_alpha+1 .. j_beta``."""
    if not 0 <= j_alpha < j_beta <= counts.k:
        raise ValueError(f"need 0 <= j_alpha < j_beta <= {counts.k}, got {j_alpha}, {j_beta}")
    m = counts.m
    return float((m - counts.a_minus[j_alpha:j_beta]).sum()) / (m * (j_beta - j_alpha))


def build_constraint(positives, Z, counts: OrderingCounts, loss_kind: str = "auc",
                     j_alpha: int = 0) -> Constraint:
    """Constraint for ordering ``counts`` of ``positives`` against sorted negatives ``Z``.

    ``loss_kind="auc"`` uses the AUC loss over all of ``Z``; ``"pauc_tr"`` uses
    the truncated partial-AUC loss over positions ``j_alpha+1 .. len(Z)``.
    Both the loss and the feature difference share the ``feature_scale``
    normaliser, so ``loss - w . dphi`` is the structural objective at ``w``.
    """
    positives = np.asarray(positives, dtype=np.float64)
    Z = np.asarray(Z, dtype=np.float64)
    m, k = positives.shape[0], Z.shape[0]
    if loss_kind == "auc":
        loss = delta_auc(counts)
        scale = feature_scale(m, k)
    elif loss_kind == "pauc_tr":
        loss = delta_pauc_tr(counts, j_alpha, k)
        scale = feature_scale(m, k, j_alpha)
    else:
        raise ValueError(f"unknown loss_kind {loss_kind!r}")
    # phi(pi*) - phi(pi) = scale * sum_ij pi_ij (x_i - z_j)
    wrong = OrderingCounts(k - counts.a_plus, m - counts.a_minus)
    dphi = joint_feature_map(positives, Z, wrong, scale)
    return Constraint(loss, dphi)
