"""Working-set solver for the 1-slack cutting-plane QP.

Primal::

    min_{w, xi >= 0}  1/2 ||w||^2 + C xi + w . v
    s.t.              xi >= loss_t - w . dphi_t    for every constraint t

Dual::

    max_{lam >= 0, sum(lam) <= C}  sum_t lam_t loss_t - 1/2 ||sum_t lam_t dphi_t - v||^2

with ``w = sum_t lam_t dphi_t - v``. The inequality ``sum(lam) <= C`` is turned
into an equality by a slack multiplier (the ``xi >= 0`` constraint, with zero
loss and zero feature difference), after which the feasible set is a scaled
simplex and is optimised by pairwise (SMO-style) exact line searches.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ordering import Constraint

__all__ = ["QpSolution", "solve"]

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class QpSolution:
    w: np.ndarray
    xi: float
    dual: np.ndarray
    objective: float
    dual_objective: float
    kkt_residual: float
    iterations: int
    converged: bool
    dual_trace: list = field(default_factory=list, repr=False)


def _as_arrays(constraints, dim):
    if constraints:
        losses = np.array([c.loss for c in constraints], dtype=np.float64)
        D = np.vstack([np.asarray(c.dphi, dtype=np.float64) for c in constraints])
    else:
        losses = np.zeros(0)
        D = np.zeros((0, dim))
    return losses, D


def solve(constraints: Sequence[Constraint], C: float, v=None, tol: float = 1e-8,
          dual0=None, dim: int | None = None, max_iter: int | None = None,
          trace: bool = False) -> QpSolution:
    """Solve the restricted QP over ``constraints``.

    Parameters
    ----------
    constraints : sequence of Constraint
    C : float
        Weight of the shared slack, ``> 0``.
    v : array, optional
        Linear term added to the objective (zero if omitted).
    tol : float
        Stop once the largest KKT violation of the dual falls below ``tol``.
    dual0 : array, optional
        Warm-start multipliers; missing trailing entries are taken as zero.
    dim : int, optional
        Feature dimension, needed only when both ``constraints`` and ``v`` are empty.
    max_iter : int, optional
        Cap on pairwise updates (default ``100 * (T + 1)**2 + 1000``).
    trace : bool
        Record the dual objective after every update.
    """
    if not (np.isfinite(C) and C > 0):
        raise ValueError(f"C must be positive and finite, got {C}")
    if v is None:
        if dim is None:
            if not constraints:
                raise ValueError("cannot infer dimension: pass dim or v")
            dim = len(constraints[0].dphi)
        v = np.zeros(dim)
    v = np.asarray(v, dtype=np.float64).ravel()
    losses, D = _as_arrays(constraints, v.shape[0])
    if D.shape[1] != v.shape[0]:
        raise ValueError("constraint and linear-term dimensions differ")
    if not (np.isfinite(losses).all() and np.isfinite(D).all() and np.isfinite(v).all()):
        raise ValueError("QP inputs must be finite")

    T = losses.shape[0]
    # index 0 is the slack multiplier
    ell = np.concatenate([[0.0], losses])
    Dx = np.vstack([np.zeros((1, v.shape[0])), D])
    K = Dx @ Dx.T
    diagK = np.diag(K).copy()

    lam = np.zeros(T + 1)
    if dual0 is not None:
        d0 = np.clip(np.asarray(dual0, dtype=np.float64).ravel()[:T], 0.0, None)
        lam[1:1 + d0.shape[0]] = d0
        s = lam[1:].sum()
        if s > C:
            lam[1:] *= C / s
    lam[0] = max(0.0, C - lam[1:].sum())

    w = lam @ Dx - v
    g = ell - Dx @ w
    cap = max_iter if max_iter is not None else 100 * (T + 1) ** 2 + 1000
    dual_trace = []
    it = 0
    converged = False
    while it < cap:
        active = lam > 0.0
        i = int(np.argmax(g))
        viol = g[i] - g[active].min()
        if viol <= tol:
            converged = True
            break
        # second-order choice of the multiplier to shrink
        diff = g[i] - g
        q = np.maximum(diagK[i] + diagK - 2.0 * K[i], 1e-300)
        gain = np.where(active & (diff > 0), diff * diff / q, -np.inf)
        j = int(np.argmax(gain))
        step = min(lam[j], diff[j] / q[j])
        lam[i] += step
        lam[j] -= step
        if lam[j] < 1e-300:
            lam[j] = 0.0
        g -= step * (K[:, i] - K[:, j])
        it += 1
        if it % 50 == 0:
            w = lam @ Dx - v
            g = ell - Dx @ w
        if trace:
            wt = lam @ Dx - v
            dual_trace.append(float(lam @ ell) - 0.5 * float(wt @ wt))
    if not converged:
        log.warning("QP stopped after %d updates without reaching tol=%g", it, tol)

    w = lam @ Dx - v
    g = ell - Dx @ w
    active = lam > 0.0
    kkt = max(0.0, float(g.max() - g[active].min()))
    xi = max(0.0, float(g[1:].max())) if T else 0.0
    primal = 0.5 * float(w @ w) + C * xi + float(w @ v)
    dual_obj = float(lam @ ell) - 0.5 * float(w @ w)
    return QpSolution(w, xi, lam[1:].copy(), primal, dual_obj, kkt, it, converged, dual_trace)
