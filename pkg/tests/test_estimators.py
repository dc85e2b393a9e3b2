import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from gausskuzmin import funcspace as fs
from gausskuzmin.estimators import KuzminRateEstimator, TransferOperator
from gausskuzmin.measure import norm_const
from gausskuzmin.transfer import iterate_transfer


def test_transfer_operator_params_and_clone():
    est = TransferOperator(p=3, n_iter=2)
    assert est.get_params()["p"] == 3
    twin = clone(est).set_params(n_iter=4)
    assert twin.n_iter == 4 and est.n_iter == 2


def test_transform_matches_function_api():
    x = TransferOperator.nodes(32)
    rows = np.vstack([np.exp(x), np.ones_like(x), norm_const(2) / (2 + x)])
    out = TransferOperator(p=2, n_iter=2).fit_transform(rows)
    for row, got in zip(rows, out):
        ref = iterate_transfer(2, fs.FuncRep(row), 2).values
        assert np.array_equal(got, ref)
    assert np.max(np.abs(out[2] - rows[2])) <= 1e-10


def test_transform_requires_fit():
    with pytest.raises(NotFittedError):
        TransferOperator().transform(np.ones((1, 5)))


def test_bad_params_raise_on_fit():
    with pytest.raises(ValueError):
        TransferOperator(p=0).fit()
    with pytest.raises(ValueError):
        KuzminRateEstimator(n_max=3).fit()


def test_rate_estimator():
    est = KuzminRateEstimator(p=2, n_max=16).fit()
    assert est.report_.within_bound
    assert est.fitted_rate_ == est.report_.fitted_rate
    lo, hi = est.report_.fit_window
    n = np.arange(lo, hi + 1)
    ratio = est.predict(n) / est.sup_delta_[n]
    assert np.all((ratio > 0.3) & (ratio < 3))
