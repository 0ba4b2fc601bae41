"""Irregularity coefficient and "investment bubble" flagging.

``k_irr = log_b(gva_exp / gva_reg)`` measures how far an industry's observed
GVA sits above (positive) or below (negative) its equilibrium baseline.
Industries with ``k_irr > tau`` are flagged.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .accounts import AccountsPanel, IndustryId
from .baseline import (
    SPACES,
    EquilibriumBaseline,
    RegressionModel,
    ScreeOrdering,
    fit_equilibrium_baseline,
    predict,
    scree_order,
    scree_ranks,
)
from .exceptions import DetectionError


@dataclass(frozen=True)
class IrregularityEntry:
    id: IndustryId
    year: int
    gva_exp: float
    gva_reg: float
    k_irr: float
    flagged: bool


@dataclass(frozen=True)
class DetectionConfig:
    log_base: float = 10.0
    tau: float = 0.1
    baseline_space: str = "log"
    symmetric: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.log_base) and self.log_base > 1):
            raise ValueError(f"log_base must be a finite number > 1, got {self.log_base}")
        if not self.tau >= 0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")
        if self.baseline_space not in SPACES:
            raise ValueError(f"baseline_space must be one of {SPACES}, got {self.baseline_space!r}")

    def is_flagged(self, k_irr: float) -> bool:
        return (abs(k_irr) if self.symmetric else k_irr) > self.tau

    def to_dict(self) -> dict:
        return {
            "log_base": self.log_base,
            "tau": self.tau,
            "baseline_space": self.baseline_space,
            "symmetric": self.symmetric,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DetectionConfig":
        return cls(float(d["log_base"]), float(d["tau"]), d["baseline_space"], bool(d["symmetric"]))


def irregularity(gva_exp: float, gva_reg: float, log_base: float = 10.0) -> float:
    if not (gva_exp > 0 and gva_reg > 0):
        raise ValueError(f"gva_exp and gva_reg must be positive, got {gva_exp} and {gva_reg}")
    if not log_base > 1:
        raise ValueError(f"log_base must be > 1, got {log_base}")
    return math.log(gva_exp / gva_reg) / math.log(log_base)


def score_ordering(
    ordering: ScreeOrdering, model: RegressionModel, year: int, config: DetectionConfig
) -> list:
    """Irregularity entries for an already fitted baseline, in scree order."""
    out = []
    for r in ordering.ranked:
        reg = predict(model, r.rank)
        if not reg > 0:
            raise DetectionError(
                f"baseline predicts non-positive GVA {reg:.6g} at rank {r.rank} ({r.id.slug}); "
                "use a log-space baseline"
            )
        k = irregularity(r.value, reg, config.log_base)
        out.append(IrregularityEntry(r.id, year, r.value, reg, k, config.is_flagged(k)))
    return out


def detect_bubbles(panel: AccountsPanel, year: int, config: DetectionConfig = DetectionConfig()) -> list:
    """Fit the scree baseline for ``year`` and score every industry.

    Entries come back GVA-descending, ties by ordinal.
    """
    ordering = scree_order(panel, year)
    model = fit_equilibrium_baseline(ordering, config.baseline_space)
    return score_ordering(ordering, model, year, config)


def growth_extremes(entries: Iterable[IrregularityEntry]) -> tuple:
    """Industries with the smallest and largest change in k_irr.

    The change is last-year minus first-year k_irr; industries missing from
    either endpoint year are ignored. Ties go to the lowest ordinal.
    Returns ``(min_id, max_id)``.
    """
    by_year = defaultdict(dict)
    for e in entries:
        by_year[e.year][e.id] = e.k_irr
    if len(by_year) < 2:
        raise ValueError(f"need at least 2 years, got {len(by_year)}")
    first, last = by_year[min(by_year)], by_year[max(by_year)]
    common = sorted(set(first) & set(last))
    if len(common) < 2:
        raise ValueError(f"need at least 2 industries present in both endpoint years, got {len(common)}")
    delta = {i: last[i] - first[i] for i in common}
    lo = min(common, key=lambda i: delta[i])
    hi = max(common, key=lambda i: delta[i])
    return lo, hi


class BubbleDetector(TransformerMixin, BaseEstimator):
    """Estimator form of the bubble detection over a 1-d GVA cross-section.

    ``fit`` learns the scree baseline from the values' own ranking;
    ``transform``/``score_samples`` return k_irr of each value against the
    baseline at its rank within the given sample, and ``predict`` returns 1
    for flagged values and 0 otherwise. Input order is preserved.
    """

    def __init__(self, log_base=10.0, tau=0.1, baseline_space="log", symmetric=False):
        self.log_base = log_base
        self.tau = tau
        self.baseline_space = baseline_space
        self.symmetric = symmetric

    def fit(self, X, y=None):
        config = DetectionConfig(float(self.log_base), float(self.tau), self.baseline_space, bool(self.symmetric))
        gva = self._check_gva(X)
        self.baseline_ = EquilibriumBaseline(space=config.baseline_space).fit(scree_ranks(gva).reshape(-1, 1), gva)
        self.config_ = config
        self.n_features_in_ = 1
        return self

    def score_samples(self, X):
        check_is_fitted(self, "baseline_")
        gva = self._check_gva(X)
        reg = self.baseline_.predict(scree_ranks(gva).reshape(-1, 1))
        if np.any(reg <= 0):
            raise DetectionError("baseline predicts non-positive GVA; use a log-space baseline")
        return np.array([irregularity(a, b, self.config_.log_base) for a, b in zip(gva, reg)])

    def transform(self, X):
        return self.score_samples(X).reshape(-1, 1)

    def predict(self, X):
        k = self.score_samples(X)
        return np.array([int(self.config_.is_flagged(v)) for v in k], dtype=np.int64)

    def fit_predict(self, X, y=None):
        return self.fit(X).predict(X)

    @staticmethod
    def _check_gva(X):
        X = check_array(X, dtype=np.float64, ensure_2d=False)
        if X.ndim == 2:
            if X.shape[1] != 1:
                raise ValueError(f"expected one GVA column, got {X.shape[1]}")
            X = X[:, 0]
        if np.any(X <= 0):
            raise ValueError("GVA values must be positive")
        return X
