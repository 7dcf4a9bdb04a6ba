"""Cutting-plane training for the AUC / partial-AUC structural SVMs and CCCP for the
non-convex partial-AUC hinge surrogate."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from sklearn.model_selection import StratifiedKFold, StratifiedShuffleSplit

from . import qp
from .data import ALGOS, DataError, Dataset, FprInterval, Model
from .metrics import empirical_pauc
from .mvc import most_violated
from .ordering import Constraint
from .surrogates import pauc_hinge

__all__ = [
    "ConvergenceError",
    "CVResult",
    "TrainConfig",
    "TrainReport",
    "cross_validate_C",
    "train",
    "train_cccp",
    "train_cutting_plane",
]

log = logging.getLogger(__name__)

DEFAULT_GRID = tuple(10.0 ** k for k in range(-5, 5))
DEFAULT_DC_GRID = tuple(10.0 ** k for k in range(-2, 5))


@dataclass(frozen=True)
class TrainConfig:
    C: float = 1.0
    epsilon: float = 1e-4
    tau: float = 1e-3
    interval: FprInterval = field(default_factory=FprInterval)
    algo: str = "pauc_struct"
    max_outer_iters: int | None = None
    max_inner_iters: int = 1000
    qp_tol: float = 1e-8
    cccp_init: str = "struct"

    def __post_init__(self):
        if self.algo not in ALGOS:
            raise ValueError(f"algo must be one of {ALGOS}, got {self.algo!r}")
        if self.cccp_init not in ("zero", "struct"):
            raise ValueError("cccp_init must be 'zero' or 'struct'")
        for name in ("C", "epsilon", "tau", "qp_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def outer_cap(self) -> int:
        if self.max_outer_iters is not None:
            return self.max_outer_iters
        return 50 if self.algo == "pauc_dc" else 1000


@dataclass
class TrainReport:
    model: Model
    outer_iterations: int
    surrogate_value: float
    objective_trace: list[float]
    j_alpha: int
    j_beta: int
    converged: bool = True
    certificate: dict = field(default_factory=dict)
    inner_iterations: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "format": 1,
            "algo": self.model.algo,
            "C": self.model.C,
            "alpha": self.model.interval.alpha if self.model.interval else None,
            "beta": self.model.interval.beta if self.model.interval else None,
            "j_alpha": self.j_alpha,
            "j_beta": self.j_beta,
            "outer_iterations": self.outer_iterations,
            "inner_iterations": list(self.inner_iterations),
            "surrogate_value": self.surrogate_value,
            "objective_trace": list(self.objective_trace),
            "converged": self.converged,
            "certificate": dict(self.certificate),
        }


class ConvergenceError(RuntimeError):
    """Iteration cap hit; ``report`` holds the last iterate."""

    def __init__(self, message: str, report: TrainReport):
        super().__init__(message)
        self.report = report


@dataclass
class _PlaneState:
    w: np.ndarray
    xi: float = 0.0
    constraints: list = field(default_factory=list)
    dual: np.ndarray | None = None
    iterations: int = 0
    H: float = np.inf
    converged: bool = False


def _cutting_plane(separate: Callable[[np.ndarray], Constraint], dim: int, C: float,
                   epsilon: float, max_iter: int, v: np.ndarray | None = None,
                   state: _PlaneState | None = None, qp_tol: float = 1e-8,
                   on_iterate: Callable[[np.ndarray, float], None] | None = None) -> _PlaneState:
    """Add most-violated constraints until none is violated by more than ``epsilon``."""
    v = np.zeros(dim) if v is None else v
    if state is None:
        state = _PlaneState(w=-v.copy())
    if state.constraints:
        sol = qp.solve(state.constraints, C, v, tol=qp_tol, dual0=state.dual)
        state.w, state.xi, state.dual = sol.w, sol.xi, sol.dual
    else:
        state.w, state.xi = -v.copy(), 0.0
    state.iterations = 0
    state.converged = False
    while state.iterations < max_iter:
        con = separate(state.w)
        state.iterations += 1
        state.H = con.violation(state.w)
        if on_iterate is not None:
            on_iterate(state.w, state.H)
        if state.H <= state.xi + epsilon:
            state.converged = True
            break
        state.constraints.append(con)
        sol = qp.solve(state.constraints, C, v, tol=qp_tol, dual0=state.dual)
        state.w, state.xi, state.dual = sol.w, sol.xi, sol.dual
    return state


def _positions(data: Dataset, config: TrainConfig) -> tuple[int, int]:
    if config.algo == "auc":
        return 0, data.n
    return config.interval.positions(data.n)


def train_cutting_plane(data: Dataset, config: TrainConfig) -> TrainReport:
    """Minimise ``1/2 ||w||^2 + C * R_tight(w)`` by constraint generation.

    ``algo="auc"`` ignores the interval and uses all negatives. For
    ``pauc_struct`` the search is the pairwise one when ``j_alpha = 0`` and the
    row-wise one otherwise.
    """
    if config.algo not in ("auc", "pauc_struct"):
        raise ValueError("train_cutting_plane handles algo 'auc' and 'pauc_struct'")
    ja, jb = _positions(data, config)
    trace: list[float] = []

    def separate(w):
        return most_violated(w, data, ja, jb).constraint

    def record(w, H):
        trace.append(0.5 * float(w @ w) + config.C * H)

    state = _cutting_plane(separate, data.dim, config.C, config.epsilon, config.outer_cap,
                           qp_tol=config.qp_tol, on_iterate=record)
    interval = FprInterval(0.0, 1.0) if config.algo == "auc" else config.interval
    report = TrainReport(
        model=Model(state.w, interval=interval, algo=config.algo, C=config.C),
        outer_iterations=state.iterations,
        surrogate_value=state.H,
        objective_trace=trace,
        j_alpha=ja,
        j_beta=jb,
        converged=state.converged,
        certificate={"H": state.H, "xi": state.xi, "epsilon": config.epsilon,
                     "n_constraints": len(state.constraints)},
    )
    if not state.converged:
        raise ConvergenceError(
            f"cutting plane did not converge in {config.outer_cap} iterations", report)
    log.info("cutting plane: %d iterations, surrogate %.6g", state.iterations, state.H)
    return report


def dc_objective(w, data: Dataset, interval: FprInterval, C: float) -> float:
    """``1/2 ||w||^2 + C * hinge_pAUC(alpha, beta)(w)``, the quantity CCCP decreases."""
    w = np.asarray(w, dtype=np.float64)
    return 0.5 * float(w @ w) + C * pauc_hinge(w, data, interval)


def train_cccp(data: Dataset, config: TrainConfig) -> TrainReport:
    """Concave-convex procedure for the ``[alpha, beta]`` pairwise hinge surrogate.

    The hinge surrogate is written as ``f - g`` with
    ``f = j_beta/(j_beta - j_alpha) * R_tight(0, beta)`` and
    ``g = j_alpha/(j_beta - j_alpha) * R_tight(0, alpha)``. Each outer step
    linearises ``-g`` at the current iterate and solves the convex remainder with
    the cutting-plane method, reusing the constraints on ``f`` gathered so far.
    """
    if config.algo != "pauc_dc":
        raise ValueError("train_cccp handles algo 'pauc_dc'")
    ja, jb = config.interval.positions(data.n)
    if ja < 1:
        raise ValueError("the DC formulation needs j_alpha >= 1; use pauc_struct for [0, beta]")
    C = config.C
    scale_f = jb / (jb - ja)
    scale_g = ja / (jb - ja)

    def separate(w):
        return most_violated(w, data, 0, jb).constraint.scaled(scale_f)

    if config.cccp_init == "struct":
        # start from the convex [alpha, beta] structural solution
        w = train_cutting_plane(data, replace(config, algo="pauc_struct",
                                              max_outer_iters=None)).model.weights.copy()
    else:
        w = np.zeros(data.dim)
    obj = dc_objective(w, data, config.interval, C)
    trace = [obj]
    inner: list[int] = []
    state: _PlaneState | None = None
    converged = False
    for _ in range(config.outer_cap):
        # gradient of the active piece of g is -scale_g * dphi
        v = C * scale_g * most_violated(w, data, 0, ja).constraint.dphi
        state = _cutting_plane(separate, data.dim, C, config.epsilon, config.max_inner_iters,
                               v=v, state=state, qp_tol=config.qp_tol)
        inner.append(state.iterations)
        if not state.converged:
            report = _dc_report(w, data, config, trace, inner, ja, jb, False)
            raise ConvergenceError("inner cutting plane did not converge", report)
        new_obj = dc_objective(state.w, data, config.interval, C)
        if new_obj >= obj:
            # the inexact inner solve bought nothing; keep the current iterate
            converged = True
            break
        w = state.w.copy()
        decrease = obj - new_obj
        obj = new_obj
        trace.append(obj)
        if decrease <= config.tau:
            converged = True
            break
    report = _dc_report(w, data, config, trace, inner, ja, jb, converged)
    if not converged:
        raise ConvergenceError(f"CCCP did not converge in {config.outer_cap} iterations", report)
    return report


def _dc_report(w, data, config, trace, inner, ja, jb, converged) -> TrainReport:
    return TrainReport(
        model=Model(w, interval=config.interval, algo="pauc_dc", C=config.C),
        outer_iterations=len(inner),
        surrogate_value=pauc_hinge(w, data, config.interval),
        objective_trace=list(trace),
        j_alpha=ja,
        j_beta=jb,
        converged=converged,
        certificate={"tau": config.tau, "epsilon": config.epsilon},
        inner_iterations=list(inner),
    )


def train(data: Dataset, config: TrainConfig) -> TrainReport:
    if config.algo == "pauc_dc":
        return train_cccp(data, config)
    return train_cutting_plane(data, config)


@dataclass
class CVResult:
    best_C: float
    table: list[tuple[float, float]]


def _splits(data: Dataset, folds: int | float, seed: int | None):
    X, y = data.to_xy()
    if isinstance(folds, float) and 0.0 < folds < 1.0:
        splitter = StratifiedShuffleSplit(n_splits=1, test_size=folds, random_state=seed)
    elif isinstance(folds, int) and folds >= 2:
        splitter = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
    else:
        raise ValueError("folds must be an int >= 2 or a holdout fraction in (0, 1)")
    try:
        for tr, te in splitter.split(X, y):
            yield Dataset.from_xy(X[tr], y[tr]), Dataset.from_xy(X[te], y[te])
    except DataError as exc:
        raise DataError(f"fold too small to contain both classes: {exc}") from None
    except ValueError as exc:
        raise DataError(f"cannot split data into folds: {exc}") from None


def cross_validate_C(data: Dataset, config: TrainConfig, grid: Sequence[float] | None = None,
                     folds: int | float = 3, seed: int | None = 0) -> CVResult:
    """Pick ``C`` maximising mean held-out empirical pAUC; ties go to the earlier grid value."""
    if grid is None:
        grid = DEFAULT_DC_GRID if config.algo == "pauc_dc" else DEFAULT_GRID
    grid = list(grid)
    if not grid:
        raise ValueError("grid must be non-empty")
    splits = list(_splits(data, folds, seed))
    for _, val in splits:
        config.interval.positions(val.n)
    table = []
    for C in grid:
        scores = []
        for tr, val in splits:
            try:
                report = train(tr, replace(config, C=float(C)))
            except ConvergenceError as exc:
                log.warning("C=%g did not converge; scoring the last iterate", C)
                report = exc.report
            model = report.model
            scores.append(empirical_pauc(val.positives @ model.weights,
                                         val.negatives @ model.weights, config.interval))
        table.append((float(C), float(np.mean(scores))))
    best = max(range(len(table)), key=lambda k: (table[k][1], -k))
    return CVResult(table[best][0], table)
