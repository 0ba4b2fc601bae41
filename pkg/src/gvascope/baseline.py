"""Equilibrium baselines: scree ordering and closed-form least-squares lines.

GVA baselines regress (optionally log-transformed) GVA on scree rank; share
baselines regress K_GVA on the industry ordinal. A model remembers the space
it was fitted in so that :func:`predict` can undo the transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_consistent_length, check_is_fitted, column_or_1d

from .accounts import AccountsPanel, IndustryId
from .exceptions import DegenerateFitError

SPACES = ("raw", "log")


@dataclass(frozen=True)
class RegressionModel:
    space: str
    slope: float
    intercept: float
    sse: float
    r_squared: float
    n: int

    def to_dict(self) -> dict:
        return {
            "space": self.space,
            "slope": self.slope,
            "intercept": self.intercept,
            "sse": self.sse,
            "r_squared": self.r_squared,
            "n": self.n,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RegressionModel":
        return cls(d["space"], float(d["slope"]), float(d["intercept"]), float(d["sse"]), float(d["r_squared"]), int(d["n"]))


@dataclass(frozen=True)
class ScreeRank:
    rank: int
    id: IndustryId
    value: float


@dataclass(frozen=True)
class ScreeOrdering:
    ranked: tuple

    def __len__(self):
        return len(self.ranked)

    @property
    def ranks(self) -> list:
        return [r.rank for r in self.ranked]

    @property
    def values(self) -> list:
        return [r.value for r in self.ranked]


def scree_order(panel: AccountsPanel, year: int) -> ScreeOrdering:
    """Industries of ``year`` by GVA descending; equal GVA keeps ordinal order."""
    records = sorted(panel.for_year(year), key=lambda r: (-r.gva, r.id.ordinal))
    return ScreeOrdering(tuple(ScreeRank(i, r.id, r.gva) for i, r in enumerate(records, start=1)))


def fit_ols(xs: Sequence[float], ys: Sequence[float], space: str = "raw") -> RegressionModel:
    """Least-squares line through ``(xs, ys)``.

    ``space`` is only recorded on the model; ``ys`` are taken as given.
    Raises :class:`DegenerateFitError` for fewer than two points or a
    constant regressor.
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"xs and ys must be 1-d of equal length, got {x.shape} and {y.shape}")
    n = x.size
    if n < 2:
        raise DegenerateFitError(f"need at least 2 points, got {n}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("xs and ys must be finite")
    if np.all(x == x[0]):
        raise DegenerateFitError("regressor is constant")

    x_mean = x.mean()
    y_mean = y.mean()
    dx = x - x_mean
    dy = y - y_mean
    sxx = float(dx @ dx)
    slope = float(dx @ dy) / sxx
    intercept = float(y_mean - slope * x_mean)

    resid = y - (slope * x + intercept)
    sse = float(resid @ resid)
    sst = float(dy @ dy)
    r_squared = 1.0 if sst == 0.0 else min(1.0, max(0.0, 1.0 - sse / sst))
    return RegressionModel(space, slope, intercept, sse, r_squared, int(n))


def fit_equilibrium_baseline(ordering: ScreeOrdering, space: str = "log") -> RegressionModel:
    """Fit GVA (or its natural log) against scree rank."""
    if space not in SPACES:
        raise ValueError(f"space must be one of {SPACES}, got {space!r}")
    if len(ordering) < 2:
        raise DegenerateFitError(f"need at least 2 industries, got {len(ordering)}")
    values = np.asarray(ordering.values, dtype=np.float64)
    if space == "log":
        if np.any(values <= 0):
            bad = next(r for r in ordering.ranked if r.value <= 0)
            raise ValueError(f"log-space baseline needs positive values; {bad.id.slug} has {bad.value}")
        values = np.log(values)
    return fit_ols(ordering.ranks, values, space=space)


def fit_share_baseline(entries) -> RegressionModel:
    """Raw-space line of K_GVA against industry ordinal."""
    return fit_ols([e.id.ordinal for e in entries], [e.k_gva for e in entries], space="raw")


def predict(model: RegressionModel, x):
    """Baseline value at ``x``; scalars give a float, arrays an array."""
    line = model.slope * np.asarray(x, dtype=np.float64) + model.intercept
    out = np.exp(line) if model.space == "log" else line
    return float(out) if np.ndim(out) == 0 else out


def baseline_predictions(ordering: ScreeOrdering, model: RegressionModel) -> list:
    return [predict(model, r.rank) for r in ordering.ranked]


def scree_ranks(values) -> np.ndarray:
    """1-based descending rank of each value; ties keep input order."""
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(-values, kind="stable")
    ranks = np.empty(values.size, dtype=np.int64)
    ranks[order] = np.arange(1, values.size + 1)
    return ranks


class EquilibriumBaseline(RegressorMixin, BaseEstimator):
    """Single-regressor least-squares baseline with an optional log target.

    Parameters
    ----------
    space : {"log", "raw"}
        With ``"log"`` the line is fitted to ``ln(y)`` and predictions are
        exponentiated back, so they are always positive.
    """

    def __init__(self, space="log"):
        self.space = space

    def fit(self, X, y):
        if self.space not in SPACES:
            raise ValueError(f"space must be one of {SPACES}, got {self.space!r}")
        x = self._check_x(X)
        y = check_array(column_or_1d(y, warn=True), dtype=np.float64, ensure_2d=False)
        check_consistent_length(x, y)
        if self.space == "log":
            if np.any(y <= 0):
                raise ValueError("log-space baseline needs positive targets")
            y = np.log(y)
        self.model_ = fit_ols(x, y, space=self.space)
        self.coef_ = np.array([self.model_.slope])
        self.intercept_ = self.model_.intercept
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "model_")
        return np.asarray(predict(self.model_, self._check_x(X)), dtype=np.float64).reshape(-1)

    @staticmethod
    def _check_x(X):
        X = check_array(X, dtype=np.float64, ensure_2d=False)
        if X.ndim == 2:
            if X.shape[1] != 1:
                raise ValueError(f"expected a single regressor column, got {X.shape[1]}")
            X = X[:, 0]
        return X
