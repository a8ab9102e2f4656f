"""Estimator-style wrappers: trees in, labellings or splits out."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_epsilon, check_positive_int, check_seed, check_trees
from .exact import MAX_EXACT_GRACESIZE_N, max_gracesize, solve_graceful
from .pipeline import PipelineConfig, near_graceful
from .split import split_structure
from .verify import gracesize_of

__all__ = ["NearGracefulLabeller", "ExactGracefulSolver", "TreeSplitter"]


class NearGracefulLabeller(TransformerMixin, BaseEstimator):
    """Label each tree with many distinct edge differences.

    ``fit`` labels the training trees and keeps ``labellings_`` and
    ``reports_``; ``transform`` labels any trees; ``predict`` returns the
    distinct-colour counts and ``score`` their mean fraction of ``n``.
    """

    def __init__(self, epsilon=0.2, seed=0, bijective=False, config=None):
        self.epsilon = epsilon
        self.seed = seed
        self.bijective = bijective
        self.config = config

    def _run(self, trees):
        eps = check_epsilon(self.epsilon)
        seed = check_seed(self.seed)
        cfg = self.config if self.config is not None else PipelineConfig()
        return [near_graceful(t, eps, seed, bijective=bool(self.bijective), config=cfg) for t in trees]

    def fit(self, X, y=None):
        out = self._run(check_trees(X))
        self.labellings_ = [lab for lab, _ in out]
        self.reports_ = [rep for _, rep in out]
        self.n_trees_ = len(out)
        return self

    def transform(self, X):
        check_is_fitted(self, "reports_")
        return [lab for lab, _ in self._run(check_trees(X))]

    def predict(self, X):
        check_is_fitted(self, "reports_")
        return np.array([rep.distinct_colours for _, rep in self._run(check_trees(X))])

    def score(self, X, y=None):
        check_is_fitted(self, "reports_")
        return float(np.mean([rep.fraction for _, rep in self._run(check_trees(X))]))


class ExactGracefulSolver(TransformerMixin, BaseEstimator):
    """Exhaustive graceful search; ``predict`` gives the exact gracesize."""

    def __init__(self, budget=10_000_000):
        self.budget = budget

    def fit(self, X, y=None):
        check_positive_int(self.budget, "budget")
        trees = check_trees(X)
        self.stats_ = []
        self.labellings_ = []
        for t in trees:
            lab, stats = solve_graceful(t, self.budget)
            self.labellings_.append(lab)
            self.stats_.append(stats)
        return self

    def transform(self, X):
        check_is_fitted(self, "stats_")
        return [solve_graceful(t, check_positive_int(self.budget, "budget"))[0] for t in check_trees(X)]

    def predict(self, X):
        """Gracesize per tree; trees above the exact limit report the
        graceful search result (``n - 1``) or -1 when it gives up."""
        check_is_fitted(self, "stats_")
        out = []
        for t in check_trees(X):
            if t.n <= MAX_EXACT_GRACESIZE_N:
                out.append(max_gracesize(t)[1])
            else:
                lab, _ = solve_graceful(t, self.budget)
                out.append(gracesize_of(t, lab) if lab is not None else -1)
        return np.array(out)


class TreeSplitter(TransformerMixin, BaseEstimator):
    """Split trees into a waste set and copies of one rooted forest."""

    def __init__(self, S=(), m=8, delta=0.1, multiplicity=None, zeta=None):
        self.S = S
        self.m = m
        self.delta = delta
        self.multiplicity = multiplicity
        self.zeta = zeta

    def _split(self, t):
        check_positive_int(self.m, "m")
        return split_structure(
            t, self.S, self.zeta, m=self.m, delta=self.delta, multiplicity=self.multiplicity
        )

    def fit(self, X, y=None):
        self.splits_ = [self._split(t) for t in check_trees(X)]
        return self

    def transform(self, X):
        check_is_fitted(self, "splits_")
        return [self._split(t) for t in check_trees(X)]
