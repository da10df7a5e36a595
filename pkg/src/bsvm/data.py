"""Datasets, the nine-cluster toy generator and CSV I/O.

CSV layout: one point per line, label (-1 or 1) first, then the features.
Lines starting with ``#`` and blank lines are skipped. Numbers are written
with 17 significant digits so a write/read round trip is exact.
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass

import numpy as np

_R = 1.0 / math.sqrt(2.0)

#: cluster centres of the toy problem, class +1 then class -1
POSITIVE_CENTERS = np.array([[0.0, 0.0], [_R, _R], [-_R, _R], [-_R, -_R], [_R, -_R]])
NEGATIVE_CENTERS = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])


class DataFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Dataset:
    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        y = np.array(self.y, dtype=float).ravel()
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError(f"X must be a nonempty (n, m) array, got shape {X.shape}")
        if y.size != X.shape[0]:
            raise ValueError(f"{X.shape[0]} points but {y.size} labels")
        if not np.isin(y, (-1.0, 1.0)).all():
            raise ValueError("labels must be -1 or 1")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.y.size

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    @property
    def n_pos(self) -> int:
        return int((self.y > 0).sum())

    @property
    def n_neg(self) -> int:
        return int((self.y < 0).sum())

    def flipped(self) -> "Dataset":
        return Dataset(self.X, -self.y)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return np.array_equal(self.X, other.X) and np.array_equal(self.y, other.y)


@dataclass(frozen=True)
class ToyConfig:
    seed: int = 0
    points_per_cluster: int = 50
    sigma1: float = 0.2
    sigma2: float = 0.2

    def __post_init__(self):
        if self.points_per_cluster < 1:
            raise ValueError("points_per_cluster must be >= 1")
        if self.sigma1 < 0 or self.sigma2 < 0:
            raise ValueError("cluster standard deviations must be nonnegative")


def standard_normal_pairs(rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` pairs of independent N(0, 1) draws via the Box-Muller transform."""
    u1 = 1.0 - rng.random(count)         # (0, 1], keeps the log finite
    u2 = rng.random(count)
    r = np.sqrt(-2.0 * np.log(u1))
    return np.column_stack([r * np.cos(2.0 * np.pi * u2), r * np.sin(2.0 * np.pi * u2)])


def generate_toy(cfg: ToyConfig | None = None) -> Dataset:
    """Five Gaussian clusters for class +1 and four for class -1.

    Points are emitted cluster by cluster in the order of
    ``POSITIVE_CENTERS`` then ``NEGATIVE_CENTERS``. The generator is PCG64
    seeded with ``cfg.seed``; each point consumes one Box-Muller pair.
    """
    cfg = cfg or ToyConfig()
    k = cfg.points_per_cluster
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    centers = np.vstack([POSITIVE_CENTERS, NEGATIVE_CENTERS])
    sigmas = np.array([cfg.sigma1] * len(POSITIVE_CENTERS) + [cfg.sigma2] * len(NEGATIVE_CENTERS))
    z = standard_normal_pairs(rng, k * len(centers))
    X = np.repeat(centers, k, axis=0) + np.repeat(sigmas, k)[:, None] * z
    y = np.repeat([1.0] * len(POSITIVE_CENTERS) + [-1.0] * len(NEGATIVE_CENTERS), k)
    return Dataset(X, y)


def format_float(v: float) -> str:
    return f"{float(v):.17g}"


def dumps_csv(data: Dataset) -> str:
    lines = []
    for x, label in zip(data.X, data.y):
        lines.append(",".join(["1" if label > 0 else "-1"] + [format_float(v) for v in x]))
    return "\n".join(lines) + "\n"


def write_csv(data: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_csv(data))


def parse_csv(text: str) -> Dataset:
    labels, rows = [], []
    width = None
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        try:
            values = [float(f) for f in fields]
        except ValueError:
            raise DataFormatError(f"malformed number (line {lineno})") from None
        if len(values) < 2:
            raise DataFormatError(f"expected a label and at least one feature (line {lineno})")
        if values[0] not in (-1.0, 1.0):
            raise DataFormatError(f"label must be -1 or 1 (line {lineno})")
        if not all(math.isfinite(v) for v in values[1:]):
            raise DataFormatError(f"non-finite feature value (line {lineno})")
        if width is None:
            width = len(values) - 1
        elif len(values) - 1 != width:
            raise DataFormatError(f"expected {width} features, got {len(values) - 1} (line {lineno})")
        labels.append(values[0])
        rows.append(values[1:])
    if not rows:
        raise DataFormatError("no data rows")
    return Dataset(np.array(rows), np.array(labels))


def read_csv(path: str | os.PathLike) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        return parse_csv(fh.read())
