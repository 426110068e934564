"""Scikit-learn style front end for the dimension-reduction search."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .dimsearch import PenaltyConfig, run_sdr
from .network import TrainConfig, split_train_val

__all__ = ["GoldenRatioSDR"]


class GoldenRatioSDR(BaseEstimator, TransformerMixin):
    """Sufficient dimension reduction via shallow networks and golden search.

    ``fit`` holds out a seeded validation fraction, trains best-of-restarts
    networks at the candidate widths visited by the golden-section search,
    and keeps the width selected by the penalized validation criterion.

    Parameters mirror :class:`goldensdr.network.TrainConfig` and
    :class:`goldensdr.dimsearch.PenaltyConfig`.

    Attributes set by ``fit``:

    dimension_ : selected structural dimension d_hat
    basis_ : (p, d_hat) first-layer weights in original coordinates
    model_ : the winning :class:`goldensdr.network.FittedModel`
    mse_table_ : dict mapping each trained width to its validation MSE
    trace_ : the :class:`goldensdr.dimsearch.SearchTrace` of the run
    outcome_ : the full :class:`goldensdr.dimsearch.SdrOutcome`
    """

    def __init__(self, hidden_nodes=20, restarts=3, l1=1e-3, learning_rate=0.01,
                 epochs=2000, activation="tanh", standardize=True, val_frac=0.2,
                 penalty_scale=0.07, penalty_override=None,
                 paper_literal_offset=False, random_state=0):
        self.hidden_nodes = hidden_nodes
        self.restarts = restarts
        self.l1 = l1
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.activation = activation
        self.standardize = standardize
        self.val_frac = val_frac
        self.penalty_scale = penalty_scale
        self.penalty_override = penalty_override
        self.paper_literal_offset = paper_literal_offset
        self.random_state = random_state

    def _train_config(self) -> TrainConfig:
        return TrainConfig(
            m=self.hidden_nodes,
            restarts=self.restarts,
            l1=self.l1,
            learning_rate=self.learning_rate,
            epochs=self.epochs,
            activation=self.activation,
            standardize=self.standardize,
            seed=self.random_state,
        )

    def _penalty_config(self) -> PenaltyConfig:
        return PenaltyConfig(scale=self.penalty_scale, override=self.penalty_override)

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        split = split_train_val(X, y, val_frac=self.val_frac, seed=self.random_state)
        outcome = run_sdr(
            split,
            self._train_config(),
            self._penalty_config(),
            paper_literal_offset=self.paper_literal_offset,
        )
        self.n_features_in_ = X.shape[1]
        self.outcome_ = outcome
        self.dimension_ = outcome.d_hat
        self.basis_ = outcome.beta_hat
        self.model_ = outcome.model
        self.mse_table_ = dict(outcome.mse_table)
        self.trace_ = outcome.trace
        return self

    def transform(self, X) -> np.ndarray:
        """Project rows onto the estimated reduced coordinates."""
        check_is_fitted(self, "basis_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, fitted with {self.n_features_in_}"
            )
        return X @ self.basis_

    def predict(self, X) -> np.ndarray:
        """Predict responses with the selected network."""
        check_is_fitted(self, "model_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, fitted with {self.n_features_in_}"
            )
        return self.model_.predict(X)
