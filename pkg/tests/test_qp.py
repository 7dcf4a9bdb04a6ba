import numpy as np
import pytest
from scipy.optimize import LinearConstraint, minimize

from paucsvm import qp
from paucsvm.ordering import Constraint


def _random_problem(rng, T, d=4):
    cons = [Constraint(float(rng.uniform(0, 1)), rng.normal(0, 1, d)) for _ in range(T)]
    return cons, float(10 ** rng.uniform(-2, 2)), rng.normal(0, 0.3, d)


def test_empty():
    sol = qp.solve([], 1.0, dim=3)
    assert not sol.w.any() and sol.xi == 0.0
    v = np.array([1.0, -2.0])
    sol = qp.solve([], 1.0, v)
    np.testing.assert_array_equal(sol.w, -v)


def test_closed_forms():
    e1 = np.array([1.0, 0.0])
    sol = qp.solve([Constraint(1.0, e1)], C=10.0)
    np.testing.assert_allclose(sol.w, e1, atol=1e-10)
    assert sol.xi == pytest.approx(0.0, abs=1e-10) and sol.dual[0] == pytest.approx(1.0)
    sol = qp.solve([Constraint(1.0, e1)], C=0.5)
    np.testing.assert_allclose(sol.w, 0.5 * e1, atol=1e-10)
    assert sol.xi == pytest.approx(0.5) and sol.dual[0] == pytest.approx(0.5)


@pytest.mark.parametrize("seed", range(10))
def test_kkt_and_duality_gap(seed):
    rng = np.random.default_rng(seed)
    cons, C, v = _random_problem(rng, int(rng.integers(1, 21)))
    sol = qp.solve(cons, C, v, tol=1e-8)
    assert sol.converged and sol.kkt_residual <= 1e-8
    assert np.all(sol.dual >= 0) and sol.dual.sum() <= C + 1e-12
    D = np.vstack([c.dphi for c in cons])
    np.testing.assert_allclose(sol.w, sol.dual @ D - v, atol=1e-10)
    viol = max(c.violation(sol.w) for c in cons)
    assert sol.xi == pytest.approx(max(0.0, viol), abs=1e-12)
    assert sol.objective - sol.dual_objective <= 1e-7 * max(1.0, C)


@pytest.mark.parametrize("seed", range(10))
def test_against_scipy(seed):
    rng = np.random.default_rng(100 + seed)
    cons, C, v = _random_problem(rng, int(rng.integers(1, 4)), d=3)
    sol = qp.solve(cons, C, v, tol=1e-10)

    def primal(z):
        w, xi = z[:-1], z[-1]
        return 0.5 * w @ w + C * xi + w @ v

    # xi + w . dphi_t >= loss_t and xi >= 0
    A = np.vstack([np.append(c.dphi, 1.0) for c in cons] + [np.append(np.zeros(3), 1.0)])
    lb = np.array([c.loss for c in cons] + [0.0])
    ref = minimize(primal, np.append(np.zeros(3), 1.0), method="trust-constr",
                   jac=lambda z: np.append(z[:-1] + v, C), hess=lambda z: np.diag([1.0] * 3 + [0.0]),
                   constraints=[LinearConstraint(A, lb, np.inf)],
                   options={"gtol": 1e-12, "xtol": 1e-14, "maxiter": 5000})
    # scipy gives a feasible point, so its value bounds the optimum from above;
    # our dual objective bounds it from below
    assert sol.objective <= ref.fun + 1e-6
    assert sol.dual_objective >= ref.fun - 1e-4
    assert sol.objective - sol.dual_objective <= 1e-8


def test_dual_trace_monotone():
    rng = np.random.default_rng(7)
    cons, C, v = _random_problem(rng, 15)
    sol = qp.solve(cons, C, v, trace=True)
    trace = np.array(sol.dual_trace)
    assert trace.size > 0
    assert np.all(np.diff(trace) >= -1e-9)


def test_warm_start_is_cheaper():
    rng = np.random.default_rng(8)
    cons, C, v = _random_problem(rng, 12)
    cold = qp.solve(cons[:-1], C, v)
    warm = qp.solve(cons, C, v, dual0=cold.dual)
    fresh = qp.solve(cons, C, v)
    np.testing.assert_allclose(warm.w, fresh.w, atol=1e-6)
    assert warm.iterations <= fresh.iterations


def test_rejects_bad_input():
    e1 = np.array([1.0, 0.0])
    with pytest.raises(ValueError):
        qp.solve([Constraint(1.0, e1)], C=0.0)
    with pytest.raises(ValueError):
        qp.solve([Constraint(np.nan, e1)], C=1.0)
    with pytest.raises(ValueError):
        qp.solve([], 1.0)
