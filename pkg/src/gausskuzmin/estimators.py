"""scikit-learn style wrappers around the transfer operator and the rate fit.

``TransferOperator`` is a transformer: each row of ``X`` holds the values of
one function at the Chebyshev nodes of degree ``X.shape[1] - 1``, and
``transform`` returns G_p^n applied row by row.  ``KuzminRateEstimator``
fits the exponential decay of sup |phi_{p,n} - Phi_p|.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import funcspace as fs
from ._validation import check_nonneg_int, check_p
from .funcspace import FuncRep
from .hurwitz import q_constant
from .kuzmin import RESIDUAL_FLOOR, default_grid, iterate_records, rate_report
from .transfer import TruncationPolicy, iterate_transfer


class TransferOperator(TransformerMixin, BaseEstimator):
    def __init__(self, p=1, n_iter=1, k_max=None, taylor_order=3, tail_tol=1e-12):
        self.p = p
        self.n_iter = n_iter
        self.k_max = k_max
        self.taylor_order = taylor_order
        self.tail_tol = tail_tol

    def fit(self, X=None, y=None):
        check_p(self.p)
        check_nonneg_int(self.n_iter, "n_iter")
        self.policy_ = TruncationPolicy(
            k_max=self.k_max, taylor_order=self.taylor_order, tail_tol=self.tail_tol
        )
        self.q_p_ = q_constant(self.p).value
        if X is not None:
            self.n_features_in_ = check_array(X).shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "policy_")
        X = check_array(X, ensure_min_features=3)
        out = np.empty_like(X, dtype=float)
        for i, row in enumerate(X):
            out[i] = iterate_transfer(self.p, FuncRep(row), self.n_iter, self.policy_).values
        return out

    @staticmethod
    def nodes(degree: int = fs.DEFAULT_DEGREE) -> np.ndarray:
        """Sample points matching the columns of ``X`` for a given degree."""
        return fs.chebyshev_nodes(degree)


class KuzminRateEstimator(BaseEstimator):
    def __init__(
        self,
        p=1,
        n_max=30,
        grid_size=33,
        degree=64,
        k_max=None,
        taylor_order=3,
        tail_tol=1e-14,
        residual_floor=RESIDUAL_FLOOR,
    ):
        self.p = p
        self.n_max = n_max
        self.grid_size = grid_size
        self.degree = degree
        self.k_max = k_max
        self.taylor_order = taylor_order
        self.tail_tol = tail_tol
        self.residual_floor = residual_floor

    def fit(self, X=None, y=None):
        p = check_p(self.p)
        if self.n_max < 5:
            raise ValueError("n_max must be >= 5")
        policy = TruncationPolicy(
            k_max=self.k_max, taylor_order=self.taylor_order, tail_tol=self.tail_tol
        )
        self.records_ = iterate_records(
            p, self.n_max, default_grid(self.grid_size), policy, self.degree
        )
        self.sup_delta_ = np.array([r.sup_delta for r in self.records_])
        self.report_ = rate_report(p, self.sup_delta_, self.residual_floor)
        self.fitted_rate_ = self.report_.fitted_rate
        return self

    def predict(self, n):
        """Fitted sup |Delta_n| = constant * rate**n."""
        check_is_fitted(self, "report_")
        n = np.asarray(n, dtype=float)
        return self.report_.fitted_constant * self.fitted_rate_**n
