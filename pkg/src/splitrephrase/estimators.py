"""scikit-learn compatible wrappers around the pipeline stages.

None of the stages learn anything; ``fit`` validates hyper-parameters and
records them, so the objects slot into :class:`sklearn.pipeline.Pipeline`,
``clone`` and ``get_params``/``set_params`` like any other estimator::

    pipe = make_pipeline(PairFilter(), SplitCategorizer(), EditLabeler())
    labelled = pipe.fit_transform(records)
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .corpus import SplitCategory
from .filters import FilterConfig
from .stages import categorize_record, filter_record, label_record
from .categorize import classify_with_rule
from .validation import check_records


class PairFilter(TransformerMixin, BaseEstimator):
    """Mark each record filtered or rejected.

    Parameters mirror :class:`~splitrephrase.filters.FilterConfig`.
    """

    def __init__(
        self,
        min_overlap=0.25,
        min_similarity=0.4,
        require_verb=True,
        require_parse=True,
        missing_upos="fail",
        similarity_fallback=False,
        punct_exempt="",
    ):
        self.min_overlap = min_overlap
        self.min_similarity = min_similarity
        self.require_verb = require_verb
        self.require_parse = require_parse
        self.missing_upos = missing_upos
        self.similarity_fallback = similarity_fallback
        self.punct_exempt = punct_exempt

    def fit(self, X=None, y=None):
        self.config_ = FilterConfig(**self.get_params())
        return self

    def transform(self, X):
        check_is_fitted(self, "config_")
        return [filter_record(r, self.config_) for r in check_records(X)]


class SplitCategorizer(ClassifierMixin, BaseEstimator):
    """Rule-based category assignment.

    ``predict`` returns category names; ``transform`` returns the records
    with ``category`` filled in (rejected records pass through untouched).
    """

    def __init__(self, split_radius=3, edge_words=5):
        self.split_radius = split_radius
        self.edge_words = edge_words

    def fit(self, X=None, y=None):
        if self.split_radius < 0 or self.edge_words < 0:
            raise ValueError("split_radius and edge_words must be non-negative")
        self.classes_ = np.array([c.value for c in SplitCategory])
        return self

    def predict(self, X):
        check_is_fitted(self, "classes_")
        return np.array(
            [
                classify_with_rule(
                    r, split_radius=self.split_radius, edge_words=self.edge_words
                )[0].value
                for r in check_records(X)
            ]
        )

    def transform(self, X):
        check_is_fitted(self, "classes_")
        return [
            categorize_record(r, self.split_radius, self.edge_words) for r in check_records(X)
        ]

    def fit_transform(self, X, y=None):
        return self.fit(X, y).transform(X)


class EditLabeler(TransformerMixin, BaseEstimator):
    """Attach padded sequences and edit labels to categorised records."""

    def __init__(self, run_length=3, on_violation="escalate"):
        self.run_length = run_length
        self.on_violation = on_violation

    def fit(self, X=None, y=None):
        if self.run_length < 1:
            raise ValueError("run_length must be >= 1")
        if self.on_violation not in ("escalate", "keep"):
            raise ValueError("on_violation must be 'escalate' or 'keep'")
        self.fitted_ = True
        return self

    def transform(self, X):
        check_is_fitted(self, "fitted_")
        return [label_record(r, self.run_length, self.on_violation) for r in check_records(X)]
