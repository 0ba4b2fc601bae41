"""Value-added share K_GVA = GVA / OBP per record and across industries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array

from .accounts import AccountsPanel, IndustryId, IndustryRecord


@dataclass(frozen=True)
class ShareEntry:
    id: IndustryId
    year: int
    k_gva: float


@dataclass(frozen=True)
class SpectrumSummary:
    min_entry: ShareEntry
    max_entry: ShareEntry
    mean: float
    count: int


def gva_share(record: IndustryRecord) -> ShareEntry:
    return ShareEntry(record.id, record.year, record.gva / record.obp)


def share_spectrum(panel: AccountsPanel, year: int) -> list:
    """K_GVA of every industry in ``year``, in ordinal order."""
    return [gva_share(r) for r in panel.for_year(year)]


def summarize_spectrum(entries: Sequence[ShareEntry]) -> SpectrumSummary:
    """Min, max and arithmetic mean of K_GVA; ties go to the lowest ordinal."""
    if not entries:
        raise ValueError("cannot summarize an empty spectrum")
    ordered = sorted(entries, key=lambda e: e.id.ordinal)
    lo = min(ordered, key=lambda e: e.k_gva)
    hi = max(ordered, key=lambda e: e.k_gva)
    mean = float(np.mean([e.k_gva for e in ordered]))
    # mean of identical floats can drift by an ulp
    mean = min(max(mean, lo.k_gva), hi.k_gva)
    return SpectrumSummary(lo, hi, mean, len(ordered))


class GVAShareTransformer(TransformerMixin, BaseEstimator):
    """Map rows of ``[gva, obp]`` to a single ``k_gva`` column.

    Stateless; ``fit`` only checks the input shape.
    """

    def fit(self, X, y=None):
        X = self._validate(X)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        X = self._validate(X)
        return (X[:, 0] / X[:, 1]).reshape(-1, 1)

    def get_feature_names_out(self, input_features=None):
        return np.asarray(["k_gva"], dtype=object)

    @staticmethod
    def _validate(X):
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != 2:
            raise ValueError(f"expected 2 columns [gva, obp], got {X.shape[1]}")
        if np.any(X <= 0):
            raise ValueError("gva and obp must be strictly positive")
        return X
