"""Most-violated-constraint search for the AUC and partial-AUC structural surrogates.

Every search fixes the tracked negatives to the top ``j_beta`` negatives under
``w`` and returns the maximising ordering in compact form, together with the
objective value ``H = loss - w . dphi`` (which is the structural surrogate at
``w``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, FprInterval
from .metrics import rank_negatives
from .ordering import Constraint, OrderingCounts, build_constraint

__all__ = [
    "MostViolated",
    "most_violated",
    "mvc_auc",
    "mvc_pauc_0beta",
    "mvc_pauc_general",
    "top_k_negatives",
]


@dataclass(frozen=True, eq=False)
class MostViolated:
    Z: np.ndarray
    """Indices into ``data.negatives`` in descending score order."""
    counts: OrderingCounts
    H: float
    constraint: Constraint
    rows: np.ndarray | None = None
    """Per positive, number of leading tracked negatives ranked above it (general case only)."""

    def matrix(self) -> np.ndarray:
        """Dense ordering matrix with columns in ``Z`` order.

        Only available when the ordering is row-wise a step vector, which is
        the case for every result this module produces.
        """
        k = self.counts.k
        r = self.rows if self.rows is not None else k - self.counts.a_plus
        return (np.arange(k)[None, :] < r[:, None]).astype(np.int8)


def top_k_negatives(w, negatives, k: int) -> np.ndarray:
    negatives = np.asarray(negatives, dtype=np.float64)
    n = negatives.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    return rank_negatives(negatives @ np.asarray(w, dtype=np.float64))[:k]


def _weights(w, data: Dataset) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64).ravel()
    if w.shape[0] != data.dim:
        raise ValueError(f"weight vector has length {w.shape[0]}, data has {data.dim} features")
    return w


def _mvc_top(w: np.ndarray, data: Dataset, k: int) -> MostViolated:
    """Pairwise-decomposable search: pi_ij = 1(s_i - z_j <= 1) on the top ``k`` negatives."""
    Z = top_k_negatives(w, data.negatives, k)
    sp = data.positives @ w
    sz = data.negatives[Z] @ w
    m = sp.shape[0]
    # sorting the positives by s and the negatives by s + 1 yields the counts directly
    shifted = sp - 1.0
    a_plus = np.searchsorted(np.sort(sz), shifted, side="left")
    a_minus = m - np.searchsorted(np.sort(shifted), sz, side="right")
    counts = OrderingCounts(a_plus, a_minus)
    con = build_constraint(data.positives, data.negatives[Z], counts, "auc")
    return MostViolated(Z, counts, con.violation(w), con)


def mvc_auc(w, data: Dataset) -> MostViolated:
    w = _weights(w, data)
    return _mvc_top(w, data, data.n)


def mvc_pauc_0beta(w, data: Dataset, interval: FprInterval) -> MostViolated:
    w = _weights(w, data)
    ja, jb = interval.positions(data.n)
    if ja != 0:
        raise ValueError(f"interval has j_alpha={ja}; use mvc_pauc_general")
    return _mvc_top(w, data, jb)


def mvc_pauc_general(w, data: Dataset, interval: FprInterval) -> MostViolated:
    w = _weights(w, data)
    ja, jb = interval.positions(data.n)
    if ja < 1:
        raise ValueError("mvc_pauc_general needs j_alpha >= 1; use mvc_pauc_0beta")
    return _mvc_rows(w, data, ja, jb)


def _mvc_rows(w: np.ndarray, data: Dataset, ja: int, jb: int) -> MostViolated:
    Z = top_k_negatives(w, data.negatives, jb)
    sp = data.positives @ w
    sz = data.negatives[Z] @ w
    # gap[i, j] is non-decreasing in j because Z is sorted by descending score
    gap = sp[:, None] - sz[None, :]
    head, tail = gap[:, :ja], gap[:, ja:]

    # candidate 1: r_i <= j_alpha, only zero-margin terms
    r1 = np.count_nonzero(head <= 0.0, axis=1)
    csum_head = np.cumsum(head, axis=1)
    idx = np.arange(sp.shape[0])
    h1 = np.where(r1 > 0, -csum_head[idx, np.maximum(r1 - 1, 0)], 0.0)

    # candidate 2: r_i > j_alpha, whole head plus unit-margin terms in the band
    extra = np.count_nonzero(tail <= 1.0, axis=1)
    r2 = ja + extra
    csum_tail = np.cumsum(1.0 - tail, axis=1)
    h2 = -csum_head[:, -1] + np.where(extra > 0, csum_tail[idx, np.maximum(extra - 1, 0)], 0.0)

    # ties keep the first candidate
    rows = np.where(h1 >= h2, r1, r2)
    a_plus = jb - rows
    a_minus = np.count_nonzero(rows[:, None] <= np.arange(jb)[None, :], axis=0)
    counts = OrderingCounts(a_plus, a_minus)
    con = build_constraint(data.positives, data.negatives[Z], counts, "pauc_tr", ja)
    return MostViolated(Z, counts, con.violation(w), con, rows)


def most_violated(w, data: Dataset, j_alpha: int, j_beta: int) -> MostViolated:
    """Dispatch on integer positions: pairwise search if ``j_alpha == 0``, row search otherwise."""
    w = _weights(w, data)
    if not 0 <= j_alpha < j_beta <= data.n:
        raise ValueError(f"need 0 <= j_alpha < j_beta <= {data.n}, got {j_alpha}, {j_beta}")
    if j_alpha == 0:
        return _mvc_top(w, data, j_beta)
    return _mvc_rows(w, data, j_alpha, j_beta)
