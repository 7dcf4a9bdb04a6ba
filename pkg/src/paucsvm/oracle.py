"""Exhaustive reference implementations for certifying the fast paths on tiny data.

Nothing here exploits the row or entry decompositions used by :mod:`paucsvm.mvc`;
orderings are enumerated as whole matrices and subsets of negatives as whole
subsets. Sizes are guarded so that a stray call cannot run for hours.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Callable

import numpy as np

from .data import Dataset, FprInterval

__all__ = [
    "OracleSizeError",
    "brute_mvc",
    "convexity_probe",
    "enumerate_valid_orderings",
    "naive_struct_surrogate",
    "ordering_objective",
    "random_instance",
    "separated_instance",
]

MAX_ORDERINGS = 2_000_000
MAX_SUBSETS = 5_000


class OracleSizeError(ValueError):
    """Instance too large for exhaustive search."""


def _guard(m: int, k: int) -> None:
    raw = math.factorial(k) * (k + 1) ** m
    if raw > MAX_ORDERINGS:
        raise OracleSizeError(f"{m} positives x {k} negatives needs {raw} witnesses")


@lru_cache(maxsize=64)
def _orderings(m: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Distinct realisable matrices and, for each, the depth ``r_i`` vector of one witness.

    A strict total order of ``m + k`` items is fixed, as far as ``pi`` is
    concerned, by the order of the negatives and by how many negatives sit
    above each positive.
    """
    _guard(m, k)
    mats = {}
    for perm in itertools.permutations(range(k)):
        perm = np.array(perm, dtype=np.int64)
        for depth in itertools.product(range(k + 1), repeat=m):
            pi = np.zeros((m, k), dtype=np.int8)
            for i, r in enumerate(depth):
                pi[i, perm[:r]] = 1
            key = pi.tobytes()
            if key not in mats:
                mats[key] = (pi, depth)
    pis = np.stack([p for p, _ in mats.values()])
    depths = np.array([d for _, d in mats.values()], dtype=np.int64).reshape(len(mats), m)
    pis.setflags(write=False)
    depths.setflags(write=False)
    return pis, depths


def enumerate_valid_orderings(m: int, k: int) -> np.ndarray:
    """All distinct ``m x k`` ordering matrices realisable by a strict total order."""
    if m < 1 or k < 1:
        raise ValueError("need m >= 1 and k >= 1")
    return _orderings(m, k)[0]


def _band_loss(depths: np.ndarray, ja: int, jb: int, m: int) -> np.ndarray:
    # positive i lies below the negatives ranked 1..r_i; count those in ja+1..jb
    return np.clip(np.minimum(depths, jb) - ja, 0, None).sum(axis=1) / (m * (jb - ja))


def ordering_objective(w, data: Dataset, Z, pi, j_alpha: int, j_beta: int | None = None) -> float:
    """Structural objective ``loss - w . (phi(pi*) - phi(pi))`` of one (subset, ordering) pair.

    ``pi`` has one column per entry of ``Z`` (in the same order); the loss counts
    misrankings against the negatives ``pi`` itself ranks in positions
    ``j_alpha+1 .. j_beta`` (default ``len(Z)``). Both loss and feature map are
    normalised by ``1 / (m (j_beta - j_alpha))``.
    """
    pi = np.asarray(pi, dtype=np.float64)
    Z = np.asarray(Z, dtype=np.int64)
    m = data.m
    jb = Z.shape[0] if j_beta is None else j_beta
    c = 1.0 / (m * (jb - j_alpha))
    w = np.asarray(w, dtype=np.float64)
    gaps = (data.positives @ w)[:, None] - (data.negatives[Z] @ w)[None, :]
    # in a valid ordering, higher-ranked negatives sit above more positives
    colsum = np.sort(pi.sum(axis=0))[::-1]
    loss = colsum[j_alpha:jb].sum() * c
    return float(loss - c * (pi * gaps).sum())


def brute_mvc(w, data: Dataset, interval: FprInterval):
    """Exhaustive maximiser over subsets of ``j_beta`` negatives and all valid orderings.

    Returns ``(Z, pi, H)`` with ``Z`` a tuple of negative indices, ``pi`` the
    ordering over ``Z`` (columns in ``Z`` order) and ``H`` the maximum.
    """
    ja, jb = interval.positions(data.n)
    m = data.m
    if math.comb(data.n, jb) > MAX_SUBSETS:
        raise OracleSizeError(f"C({data.n}, {jb}) subsets is too many")
    pis, depths = _orderings(m, jb)
    c = 1.0 / (m * (jb - ja))
    loss = _band_loss(depths, ja, jb, m)
    w = np.asarray(w, dtype=np.float64)
    sp = data.positives @ w
    sn = data.negatives @ w
    pis_f = pis.astype(np.float64)
    best = (None, None, -np.inf)
    for Z in itertools.combinations(range(data.n), jb):
        gaps = sp[:, None] - sn[list(Z)][None, :]
        H = loss - c * np.einsum("tij,ij->t", pis_f, gaps)
        t = int(np.argmax(H))
        if H[t] > best[2]:
            best = (Z, pis[t].copy(), float(H[t]))
    return best


def naive_struct_surrogate(w, data: Dataset, interval: FprInterval) -> float:
    """Structural surrogate with the ordering taken over *all* ``n`` negatives."""
    ja, jb = interval.positions(data.n)
    m, n = data.m, data.n
    pis, depths = _orderings(m, n)
    c = 1.0 / (m * (jb - ja))
    w = np.asarray(w, dtype=np.float64)
    gaps = (data.positives @ w)[:, None] - (data.negatives @ w)[None, :]
    H = _band_loss(depths, ja, jb, m) - c * np.einsum("tij,ij->t", pis.astype(np.float64), gaps)
    return float(H.max())


def convexity_probe(f: Callable[[np.ndarray], float], w1, w2, lambdas=None) -> float:
    """Largest ``f(l w1 + (1-l) w2) - l f(w1) - (1-l) f(w2)`` over ``lambdas``.

    A positive value certifies that ``f`` is not convex along the segment.
    """
    w1 = np.asarray(w1, dtype=np.float64)
    w2 = np.asarray(w2, dtype=np.float64)
    if lambdas is None:
        lambdas = np.linspace(0.0, 1.0, 101)
    f1, f2 = f(w1), f(w2)
    return max(f(l * w1 + (1 - l) * w2) - l * f1 - (1 - l) * f2 for l in np.atleast_1d(lambdas))


def random_instance(rng: np.random.Generator, m: int, n: int, d: int = 3):
    """Standard-normal features and weights; returns ``(w, data)``."""
    if not 1 <= d <= 4:
        raise ValueError("oracle instances use 1 <= d <= 4")
    data = Dataset(rng.standard_normal((m, d)), rng.standard_normal((n, d)))
    return rng.standard_normal(d), data


def separated_instance(rng: np.random.Generator, m: int, n: int, d: int = 3, margin: float = 1.0):
    """Like :func:`random_instance` but ``w`` is rescaled so every positive-negative
    score gap has magnitude at least ``margin``."""
    w, data = random_instance(rng, m, n, d)
    gaps = np.abs((data.positives @ w)[:, None] - (data.negatives @ w)[None, :])
    return w * (1.5 * margin / gaps.min()), data
