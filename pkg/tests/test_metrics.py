import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paucsvm.data import FprInterval
from paucsvm.metrics import (empirical_auc, empirical_pauc, partial_area, pauc_risk,
                             rank_negatives, roc_curve, tpr_at_fpr)

scores = st.lists(st.integers(-20, 20).map(float), min_size=1, max_size=12)


def test_two_scorers_auc(two_scorers):
    assert empirical_auc(*two_scorers["f1"]) == pytest.approx(0.70, abs=1e-12)
    assert empirical_auc(*two_scorers["f2"]) == pytest.approx(0.60, abs=1e-12)


def test_two_scorers_pauc(two_scorers):
    iv = FprInterval(0.1, 0.2)
    assert empirical_pauc(*two_scorers["f1"], iv) == pytest.approx(0.25, abs=1e-12)
    assert empirical_pauc(*two_scorers["f2"], iv) == pytest.approx(0.50, abs=1e-12)
    assert pauc_risk(*two_scorers["f1"], iv) == pytest.approx(0.75, abs=1e-12)


def test_perfect_and_reversed():
    pos, neg = [3.0, 4.0], [1.0, 2.0]
    iv = FprInterval(0.0, 0.5)
    assert empirical_auc(pos, neg) == 1.0
    assert pauc_risk(pos, neg, iv) == 0.0
    assert pauc_risk(neg, pos, iv) == 1.0


def test_ties_count_as_misranked():
    assert empirical_auc([1.0], [1.0]) == 0.0
    assert pauc_risk([1.0], [1.0], FprInterval()) == 1.0


def test_empty_and_degenerate():
    with pytest.raises(ValueError):
        empirical_auc([], [1.0])
    with pytest.raises(ValueError):
        empirical_pauc([1.0], [1.0, 2.0, 3.0, 4.0], FprInterval(0.5, 0.5 + 1e-12))


def test_rank_negatives_stable():
    np.testing.assert_array_equal(rank_negatives([1.0, 3.0, 3.0, 2.0]), [1, 2, 3, 0])


@given(scores, scores)
@settings(max_examples=100, deadline=None)
def test_full_interval_is_auc(pos, neg):
    assert empirical_pauc(pos, neg, FprInterval(0.0, 1.0)) == pytest.approx(empirical_auc(pos, neg))


@given(scores, scores, st.sampled_from([(0.0, 0.3), (0.2, 0.6), (0.5, 1.0)]))
@settings(max_examples=100, deadline=None)
def test_complement_and_monotone_invariance(pos, neg, ab):
    iv = FprInterval(*ab)
    p = empirical_pauc(pos, neg, iv)
    assert 0.0 <= p <= 1.0
    assert p + pauc_risk(pos, neg, iv) == pytest.approx(1.0, abs=1e-15)
    f = lambda s: np.exp(np.asarray(s) / 10.0) * 3 + 1  # strictly increasing
    assert empirical_pauc(f(pos), f(neg), iv) == pytest.approx(p, abs=1e-12)
    assert empirical_auc(f(pos), f(neg)) == pytest.approx(empirical_auc(pos, neg), abs=1e-12)


@given(scores, st.lists(st.integers(-20, 20).map(float), min_size=4, max_size=12), st.data())
@settings(max_examples=100, deadline=None)
def test_interval_nesting(pos, neg, data):
    n = len(neg)
    j = data.draw(st.integers(1, n - 1))
    whole = empirical_pauc(pos, neg, FprInterval(0.0, 1.0))
    left = empirical_pauc(pos, neg, FprInterval(0.0, j / n))
    right = empirical_pauc(pos, neg, FprInterval(j / n, 1.0))
    assert whole == pytest.approx((j * left + (n - j) * right) / n, abs=1e-12)


def test_roc_examples():
    assert roc_curve([2.0], [1.0]).points == [(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
    assert roc_curve([1.0], [2.0]).points == [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]


def test_roc_partial_area_matches_pauc(two_scorers):
    curve = roc_curve(*two_scorers["f1"])
    p = empirical_pauc(*two_scorers["f1"], FprInterval(0.1, 0.2))
    assert partial_area(curve, 0.1, 0.2) == pytest.approx(p * 0.1, abs=1e-12)
    assert partial_area(curve, 0.0, 0.2) == pytest.approx(p * 0.2, abs=1e-12)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=10, unique=True),
       st.lists(st.floats(-5, 5), min_size=1, max_size=10, unique=True))
@settings(max_examples=100, deadline=None)
def test_roc_area_equals_auc_without_ties(pos, neg):
    if set(pos) & set(neg):
        return
    curve = roc_curve(pos, neg)
    assert curve.points[0] == (0.0, 0.0) and curve.points[-1] == (1.0, 1.0)
    assert np.all(np.diff(curve.fpr) >= 0) and np.all(np.diff(curve.tpr) >= 0)
    assert curve.area() == pytest.approx(empirical_auc(pos, neg), abs=1e-12)


def test_roc_csv():
    text = roc_curve([2.0], [1.0]).to_csv()
    assert text.splitlines() == ["fpr,tpr", "0.0,0.0", "0.0,1.0", "1.0,1.0"]


def test_tpr_at_fpr(two_scorers):
    assert tpr_at_fpr([3.0, 4.0], [1.0, 2.0], 0.0) == 1.0
    assert tpr_at_fpr([1.0, 2.0], [3.0, 4.0], 0.0) == 0.0
    assert tpr_at_fpr(*two_scorers["f2"], 0.2) == 0.5
    assert tpr_at_fpr(*two_scorers["f2"], 1.0) == 1.0
    with pytest.raises(ValueError):
        tpr_at_fpr([1.0], [1.0], 1.5)
