"""Datasets, FPR intervals, linear models and svmlight ingestion."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

__all__ = [
    "ALGOS",
    "DataError",
    "Dataset",
    "FprInterval",
    "Model",
    "ZScoreStats",
    "apply_zscore",
    "dump_svmlight",
    "normalize_zscore",
    "parse_svmlight",
    "score",
]

ALGOS = ("auc", "pauc_struct", "pauc_dc")

# n*alpha / n*beta that land within this distance of an integer are snapped to it,
# otherwise 10 * 0.7 would give ceil(7.000000000000001) == 8.
_POSITION_SNAP = 1e-9


class DataError(ValueError):
    """Malformed or unusable input data."""


@dataclass(frozen=True)
class FprInterval:
    """False-positive-rate range ``[alpha, beta]``.

    The empirical positions delimiting the range among ``n`` ranked negatives
    are ``j_alpha(n) = floor(n * alpha)`` and ``j_beta(n) = ceil(n * beta)``.
    """

    alpha: float = 0.0
    beta: float = 1.0

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError("interval bounds must be finite")
        if not 0.0 <= a < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {a}")
        if not 0.0 < b <= 1.0:
            raise ValueError(f"beta must lie in (0, 1], got {b}")
        if a >= b:
            raise ValueError(f"alpha must be smaller than beta, got [{a}, {b}]")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    def j_alpha(self, n: int) -> int:
        return int(math.floor(n * self.alpha + _POSITION_SNAP))

    def j_beta(self, n: int) -> int:
        return min(n, int(math.ceil(n * self.beta - _POSITION_SNAP)))

    def positions(self, n: int) -> tuple[int, int]:
        """Return ``(j_alpha, j_beta)`` for ``n`` negatives, rejecting empty ranges."""
        if n < 1:
            raise ValueError("need at least one negative")
        ja, jb = self.j_alpha(n), self.j_beta(n)
        if ja >= jb:
            raise ValueError(
                f"interval [{self.alpha}, {self.beta}] is degenerate for n={n} "
                f"(j_alpha={ja}, j_beta={jb})"
            )
        return ja, jb

    def scaled(self, factor: float) -> "FprInterval":
        """FROC-style rescaling of both bounds by a caller-supplied factor."""
        return FprInterval(self.alpha * factor, min(1.0, self.beta * factor))


@dataclass(frozen=True, eq=False)
class Dataset:
    """Positive and negative instances as dense ``float64`` row matrices."""

    positives: np.ndarray
    negatives: np.ndarray

    def __post_init__(self):
        pos = np.array(self.positives, dtype=np.float64, ndmin=2)
        neg = np.array(self.negatives, dtype=np.float64, ndmin=2)
        if pos.shape[0] < 1 or pos.size == 0:
            raise DataError("dataset has no positive instances")
        if neg.shape[0] < 1 or neg.size == 0:
            raise DataError("dataset has no negative instances")
        if pos.shape[1] != neg.shape[1]:
            raise DataError(
                f"positives have {pos.shape[1]} features, negatives {neg.shape[1]}"
            )
        if not (np.isfinite(pos).all() and np.isfinite(neg).all()):
            raise DataError("feature values must be finite")
        pos.setflags(write=False)
        neg.setflags(write=False)
        object.__setattr__(self, "positives", pos)
        object.__setattr__(self, "negatives", neg)

    @property
    def m(self) -> int:
        return self.positives.shape[0]

    @property
    def n(self) -> int:
        return self.negatives.shape[0]

    @property
    def dim(self) -> int:
        return self.positives.shape[1]

    @classmethod
    def from_xy(cls, X, y) -> "Dataset":
        """Split a labelled design matrix; labels > 0 are positives."""
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y)
        if X.ndim != 2 or y.shape != (X.shape[0],):
            raise DataError("X must be 2-D with one label per row")
        mask = y > 0
        return cls(X[mask], X[~mask])

    def to_xy(self) -> tuple[np.ndarray, np.ndarray]:
        X = np.vstack([self.positives, self.negatives])
        y = np.concatenate([np.ones(self.m), -np.ones(self.n)])
        return X, y

    def with_dim(self, dim: int) -> "Dataset":
        """Zero-pad (never truncate) the feature dimension to ``dim``."""
        if dim < self.dim:
            raise DataError(f"cannot shrink dimension {self.dim} to {dim}")
        pad = ((0, 0), (0, dim - self.dim))
        return Dataset(np.pad(self.positives, pad), np.pad(self.negatives, pad))


@dataclass(frozen=True, eq=False)
class Model:
    """Linear scorer ``x -> w . x`` (no intercept)."""

    weights: np.ndarray
    interval: FprInterval | None = None
    algo: str | None = None
    C: float | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64).ravel()
        if not np.isfinite(w).all():
            raise ValueError("model weights must be finite")
        if self.algo is not None and self.algo not in ALGOS:
            raise ValueError(f"unknown algo {self.algo!r}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return self.weights.shape[0]

    def decision_function(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] > self.dim:
            raise ValueError(f"inputs have {X.shape[1]} features, model has {self.dim}")
        return X @ self.weights[: X.shape[1]]

    def to_json(self) -> dict:
        return {
            "format": 1,
            "dim": self.dim,
            "weights": self.weights.tolist(),
            "alpha": None if self.interval is None else self.interval.alpha,
            "beta": None if self.interval is None else self.interval.beta,
            "algo": self.algo,
            "C": self.C,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Model":
        if doc.get("format") != 1:
            raise DataError(f"unsupported model format {doc.get('format')!r}")
        weights = doc["weights"]
        if len(weights) != doc["dim"]:
            raise DataError("model 'dim' does not match number of weights")
        interval = None
        if doc.get("alpha") is not None and doc.get("beta") is not None:
            interval = FprInterval(doc["alpha"], doc["beta"])
        return cls(weights, interval=interval, algo=doc.get("algo"), C=doc.get("C"))


def score(model: Model | np.ndarray, x) -> float:
    """Score one instance.

    ``x`` is either a dense vector or a sparse sequence of ``(index, value)``
    pairs with 0-based indices.
    """
    w = model.weights if isinstance(model, Model) else np.asarray(model, dtype=np.float64)
    if isinstance(x, np.ndarray) or (len(x) and np.isscalar(x[0])):
        x = np.asarray(x, dtype=np.float64).ravel()
        if x.shape[0] > w.shape[0]:
            raise ValueError(f"vector of length {x.shape[0]} exceeds model dim {w.shape[0]}")
        return float(x @ w[: x.shape[0]])
    total = 0.0
    for idx, val in x:
        if idx < 0 or idx >= w.shape[0]:
            raise ValueError(f"feature index {idx} outside model dim {w.shape[0]}")
        total += w[idx] * val
    return float(total)


# --------------------------------------------------------------------------- svmlight

_LABELS = {"+1": 1, "1": 1, "-1": -1}


def _parse_rows(lines: Iterable[str]):
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        label = _LABELS.get(tokens[0])
        if label is None:
            raise DataError(f"line {lineno}: label must be +1, 1 or -1, got {tokens[0]!r}")
        entries = []
        last = 0
        for tok in tokens[1:]:
            idx_s, sep, val_s = tok.partition(":")
            try:
                if not sep:
                    raise ValueError
                idx, val = int(idx_s), float(val_s)
            except ValueError:
                raise DataError(f"line {lineno}: malformed feature {tok!r}") from None
            if idx < 1:
                raise DataError(f"line {lineno}: feature index must be >= 1, got {idx}")
            if idx <= last:
                raise DataError(f"line {lineno}: feature indices must be strictly increasing")
            if not math.isfinite(val):
                raise DataError(f"line {lineno}: non-finite value {val_s!r}")
            last = idx
            entries.append((idx - 1, val))
        yield label, entries


def parse_svmlight(stream: IO[str] | str, dim: int | None = None) -> Dataset:
    """Read a binary-labelled svmlight/libsvm file.

    Indices are 1-based on disk and 0-based in the result. Row order within
    each class is preserved. ``dim`` forces a minimum feature dimension
    (useful for test files that miss trailing features).
    """
    lines = stream.splitlines() if isinstance(stream, str) else stream
    rows = list(_parse_rows(lines))
    seen = max((e[-1][0] + 1 for _, e in rows if e), default=0)
    d = max(seen, dim or 0, 1)
    pos = [r for r in rows if r[0] > 0]
    neg = [r for r in rows if r[0] < 0]
    if not pos or not neg:
        raise DataError(
            f"need both classes, found {len(pos)} positive and {len(neg)} negative rows"
        )

    def dense(group):
        out = np.zeros((len(group), d))
        for r, (_, entries) in enumerate(group):
            for idx, val in entries:
                out[r, idx] = val
        return out

    return Dataset(dense(pos), dense(neg))


def dump_svmlight(data: Dataset, stream: IO[str]) -> None:
    """Write positives then negatives; zeros are omitted, floats at 17 digits."""
    for label, block in (("+1", data.positives), ("-1", data.negatives)):
        for row in block:
            feats = " ".join(f"{j + 1}:{v:.17g}" for j, v in enumerate(row) if v != 0.0)
            stream.write(f"{label} {feats}".rstrip() + "\n")


# --------------------------------------------------------------------------- z-score

@dataclass(frozen=True, eq=False)
class ZScoreStats:
    means: np.ndarray
    stds: np.ndarray

    def to_json(self) -> str:
        return json.dumps({"means": self.means.tolist(), "stds": self.stds.tolist()},
                          sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ZScoreStats":
        doc = json.loads(text)
        return cls(np.asarray(doc["means"], dtype=np.float64),
                   np.asarray(doc["stds"], dtype=np.float64))


def zscore_stats(X: np.ndarray) -> ZScoreStats:
    X = np.asarray(X, dtype=np.float64)
    means = X.mean(axis=0)
    stds = X.std(axis=0)
    # constant columns are centred only
    stds[stds == 0.0] = 1.0
    return ZScoreStats(means, stds)


def apply_zscore(data: Dataset, stats: ZScoreStats) -> Dataset:
    d = data.dim
    if stats.means.shape[0] < d:
        raise DataError(f"statistics cover {stats.means.shape[0]} features, data has {d}")
    mu, sd = stats.means[:d], stats.stds[:d]
    return Dataset((data.positives - mu) / sd, (data.negatives - mu) / sd)


def normalize_zscore(data: Dataset) -> tuple[Dataset, ZScoreStats]:
    """Standardise every feature over all ``m + n`` instances (population variance)."""
    stats = zscore_stats(np.vstack([data.positives, data.negatives]))
    return apply_zscore(data, stats), stats


def as_dataset(positives: Sequence, negatives: Sequence) -> Dataset:
    return Dataset(np.asarray(positives, dtype=np.float64), np.asarray(negatives, dtype=np.float64))
