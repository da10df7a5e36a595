"""Sensitivity curves, accuracy, decision-value summaries and grid evaluation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, format_float
from .model import TrainedModel, decision_function, predict

N_THRESHOLDS = 50


@dataclass
class SensitivityCurve:
    thresholds: np.ndarray
    percent: np.ndarray
    sensitivity: np.ndarray
    max_abs_decision: float
    degenerate: bool = False

    def at_percent(self, pct: float) -> float:
        """Sensitivity at the sampled threshold nearest to ``pct`` percent."""
        return float(self.sensitivity[np.abs(self.percent - pct).argmin()])

    def to_csv(self) -> str:
        rows = ["percent,threshold,sensitivity"]
        rows += [",".join(format_float(v) for v in row)
                 for row in zip(self.percent, self.thresholds, self.sensitivity)]
        return "\n".join(rows) + "\n"


def signed_decisions(model: TrainedModel, data: Dataset) -> np.ndarray:
    return data.y * decision_function(model, data.X)


def sensitivity_curve(model: TrainedModel, data: Dataset, n_thresholds: int = N_THRESHOLDS) -> SensitivityCurve:
    """Fraction of points with ``y g(x) >= t`` on an even grid of ``t`` in ``[0, max|g|]``.

    ``max|g|`` is taken over the points of ``data``. A model that is zero on
    every point yields a flat curve with ``degenerate=True``.
    """
    g = decision_function(model, data.X)
    v = data.y * g
    gmax = float(np.abs(g).max())
    if gmax == 0.0:
        t = np.zeros(n_thresholds)
        s = np.full(n_thresholds, np.mean(v >= 0.0))
        return SensitivityCurve(t, np.zeros(n_thresholds), s, 0.0, degenerate=True)
    t = np.linspace(0.0, gmax, n_thresholds)
    s = (v[None, :] >= t[:, None]).mean(axis=1)
    return SensitivityCurve(t, 100.0 * t / gmax, s, gmax)


def accuracy(model: TrainedModel, data: Dataset) -> float:
    return float(np.mean(predict(model, data.X) == data.y))


@dataclass
class Spread:
    mean: float
    std: float
    min: float
    max: float


def decision_spread(model: TrainedModel, data: Dataset, label: int) -> Spread:
    """Summary of ``y g(x)`` over the points of one class (population std)."""
    mask = data.y == label
    if not mask.any():
        raise ValueError(f"no points with label {label}")
    v = label * decision_function(model, data.X[mask])
    return Spread(float(v.mean()), float(v.std()), float(v.min()), float(v.max()))


def default_bounds(X, pad: float = 0.1):
    """Bounding box of ``X`` widened by ``pad`` of its extent on each side."""
    X = np.asarray(X, dtype=float)
    lo, hi = X.min(axis=0), X.max(axis=0)
    ext = np.where(hi > lo, hi - lo, 1.0)
    return (float(lo[0] - pad * ext[0]), float(hi[0] + pad * ext[0]),
            float(lo[1] - pad * ext[1]), float(hi[1] + pad * ext[1]))


def decision_grid(model: TrainedModel, xmin: float, xmax: float, ymin: float, ymax: float,
                  resolution: int = 100) -> np.ndarray:
    """``(x1, x2, g)`` rows over an inclusive ``resolution x resolution`` lattice.

    Row-major with ``x1`` varying fastest.
    """
    if model.dim != 2:
        raise ValueError(f"grid evaluation needs a 2-D model, got dimension {model.dim}")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    x1, x2 = np.meshgrid(np.linspace(xmin, xmax, resolution), np.linspace(ymin, ymax, resolution))
    pts = np.column_stack([x1.ravel(), x2.ravel()])
    return np.column_stack([pts, decision_function(model, pts)])


def grid_to_csv(grid: np.ndarray) -> str:
    rows = ["x1,x2,g"] + [",".join(format_float(v) for v in row) for row in grid]
    return "\n".join(rows) + "\n"
