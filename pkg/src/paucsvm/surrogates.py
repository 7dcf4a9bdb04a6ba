"""Closed-form evaluation of the partial-AUC risk and its surrogates at a fixed ``w``."""

from __future__ import annotations

import numpy as np

from .data import Dataset, FprInterval
from .metrics import pauc_risk, rank_negatives
from .mvc import most_violated

__all__ = [
    "auc_hinge",
    "characterization_bounds",
    "eta",
    "eta_plus",
    "hinge_plus",
    "pauc_hinge",
    "risk",
    "tight_surrogate",
]


def _ranked_gaps(w, data: Dataset, j_beta: int) -> np.ndarray:
    """``s_i - s_(j)`` for every positive and the top ``j_beta`` negatives."""
    w = np.asarray(w, dtype=np.float64)
    sp = data.positives @ w
    sn = data.negatives @ w
    top = sn[rank_negatives(sn)[:j_beta]]
    return sp[:, None] - top[None, :]


def risk(w, data: Dataset, interval: FprInterval) -> float:
    """Partial-AUC risk (one minus empirical pAUC) of the scorer ``w``."""
    w = np.asarray(w, dtype=np.float64)
    return pauc_risk(data.positives @ w, data.negatives @ w, interval)


def auc_hinge(w, data: Dataset) -> float:
    w = np.asarray(w, dtype=np.float64)
    gaps = (data.positives @ w)[:, None] - (data.negatives @ w)[None, :]
    return float(np.maximum(0.0, 1.0 - gaps).mean())


def pauc_hinge(w, data: Dataset, interval: FprInterval) -> float:
    """Pairwise hinge over negatives ranked ``j_alpha+1 .. j_beta`` by ``w``.

    Convex when ``j_alpha = 0``, non-convex in general otherwise.
    """
    ja, jb = interval.positions(data.n)
    gaps = _ranked_gaps(w, data, jb)[:, ja:]
    return float(np.maximum(0.0, 1.0 - gaps).sum() / (data.m * (jb - ja)))


def tight_surrogate(w, data: Dataset, interval: FprInterval) -> float:
    """Structural surrogate maximised over subsets of ``j_beta`` negatives."""
    ja, jb = interval.positions(data.n)
    return most_violated(w, data, ja, jb).H


def _below_top(w, data: Dataset, ja: int) -> np.ndarray:
    # positives scored strictly below the j_alpha-th ranked negative
    w = np.asarray(w, dtype=np.float64)
    sn = data.negatives @ w
    kth = sn[rank_negatives(sn)[ja - 1]]
    return (data.positives @ w) < kth


def eta(w, data: Dataset, interval: FprInterval) -> float:
    """Zero-margin hinge against the top ``j_alpha`` negatives, all positives."""
    ja, jb = interval.positions(data.n)
    gaps = _ranked_gaps(w, data, ja)
    return float(np.maximum(0.0, -gaps).sum() / (data.m * (jb - ja)))


def eta_plus(w, data: Dataset, interval: FprInterval) -> float:
    """As :func:`eta`, restricted to positives below the ``j_alpha``-th negative."""
    ja, jb = interval.positions(data.n)
    if ja == 0:
        return 0.0
    gaps = _ranked_gaps(w, data, ja)[_below_top(w, data, ja)]
    return float(np.maximum(0.0, -gaps).sum() / (data.m * (jb - ja)))


def hinge_plus(w, data: Dataset, interval: FprInterval) -> float:
    """Unit-margin hinge on the ``j_alpha+1 .. j_beta`` band, restricted to
    positives below the ``j_alpha``-th negative."""
    ja, jb = interval.positions(data.n)
    if ja == 0:
        return pauc_hinge(w, data, interval)
    gaps = _ranked_gaps(w, data, jb)[_below_top(w, data, ja), ja:]
    return float(np.maximum(0.0, 1.0 - gaps).sum() / (data.m * (jb - ja)))


def characterization_bounds(w, data: Dataset, interval: FprInterval) -> tuple[float, float]:
    """``(lower, upper)`` sandwiching :func:`tight_surrogate` for ``alpha > 0``."""
    lower = hinge_plus(w, data, interval) + eta_plus(w, data, interval)
    upper = pauc_hinge(w, data, interval) + eta(w, data, interval)
    return lower, upper
