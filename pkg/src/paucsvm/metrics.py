"""Empirical AUC, partial AUC, ROC curves and TPR at a fixed FPR budget.

Ties between a positive and a negative score count as misrankings throughout
(``s_pos <= s_neg``). Negatives are ranked by descending score with a stable
tie-break on their original index.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .data import FprInterval

__all__ = [
    "RocCurve",
    "empirical_auc",
    "empirical_pauc",
    "pauc_risk",
    "partial_area",
    "rank_negatives",
    "roc_curve",
    "tpr_at_fpr",
]


def _scores(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64).ravel()
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    return arr


def rank_negatives(scores_neg) -> np.ndarray:
    """Indices of negatives sorted by descending score, index tie-break."""
    return np.argsort(-np.asarray(scores_neg, dtype=np.float64), kind="stable")


def _misranked_counts(sp: np.ndarray, sn_sorted: np.ndarray) -> np.ndarray:
    # for each negative, number of positives with s_pos <= s_neg
    sp_sorted = np.sort(sp)
    return np.searchsorted(sp_sorted, sn_sorted, side="right")


def empirical_auc(scores_pos, scores_neg) -> float:
    sp = _scores(scores_pos, "scores_pos")
    sn = _scores(scores_neg, "scores_neg")
    bad = _misranked_counts(sp, sn).sum()
    return 1.0 - bad / (sp.size * sn.size)


def pauc_risk(scores_pos, scores_neg, interval: FprInterval) -> float:
    sp = _scores(scores_pos, "scores_pos")
    sn = _scores(scores_neg, "scores_neg")
    ja, jb = interval.positions(sn.size)
    band = sn[rank_negatives(sn)][ja:jb]
    return _misranked_counts(sp, band).sum() / (sp.size * (jb - ja))


def empirical_pauc(scores_pos, scores_neg, interval: FprInterval) -> float:
    """Normalised partial AUC over negatives ranked ``j_alpha+1 .. j_beta``."""
    return 1.0 - pauc_risk(scores_pos, scores_neg, interval)


@dataclass(frozen=True)
class RocCurve:
    fpr: np.ndarray
    tpr: np.ndarray

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))

    def area(self) -> float:
        return float(np.trapezoid(self.tpr, self.fpr))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("fpr,tpr\n")
        for f, t in self.points:
            buf.write(f"{float(f)!r},{float(t)!r}\n")
        return buf.getvalue()


def roc_curve(scores_pos, scores_neg) -> RocCurve:
    """Empirical ROC curve with one vertex per distinct score threshold."""
    sp = _scores(scores_pos, "scores_pos")
    sn = _scores(scores_neg, "scores_neg")
    thresholds = np.unique(np.concatenate([sp, sn]))[::-1]
    sp_sorted, sn_sorted = np.sort(sp), np.sort(sn)
    # instances with score >= t are classified positive
    tp = sp.size - np.searchsorted(sp_sorted, thresholds, side="left")
    fp = sn.size - np.searchsorted(sn_sorted, thresholds, side="left")
    fpr = np.concatenate([[0.0], fp / sn.size])
    tpr = np.concatenate([[0.0], tp / sp.size])
    return RocCurve(fpr, tpr)


def partial_area(curve: RocCurve, lo: float, hi: float) -> float:
    """Trapezoidal area under ``curve`` restricted to ``lo <= fpr <= hi``."""
    if not 0.0 <= lo <= hi <= 1.0:
        raise ValueError("need 0 <= lo <= hi <= 1")
    fpr, tpr = curve.fpr, curve.tpr
    total = 0.0
    for k in range(fpr.size - 1):
        x0, x1 = fpr[k], fpr[k + 1]
        a, b = max(x0, lo), min(x1, hi)
        if b <= a:
            continue
        slope = (tpr[k + 1] - tpr[k]) / (x1 - x0)
        ya = tpr[k] + slope * (a - x0)
        yb = tpr[k] + slope * (b - x0)
        total += 0.5 * (ya + yb) * (b - a)
    return total


def tpr_at_fpr(scores_pos, scores_neg, fpr_limit: float) -> float:
    """TPR of ``score > t`` for the smallest ``t`` whose empirical FPR is within budget."""
    if not 0.0 <= fpr_limit <= 1.0:
        raise ValueError("fpr_limit must lie in [0, 1]")
    sp = _scores(scores_pos, "scores_pos")
    sn = _scores(scores_neg, "scores_neg")
    allowed = int(math.floor(fpr_limit * sn.size + 1e-9))
    if allowed >= sn.size:
        return 1.0
    threshold = np.sort(sn)[::-1][allowed]
    return float(np.count_nonzero(sp > threshold) / sp.size)
