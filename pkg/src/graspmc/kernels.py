"""Gaussian kernel and the median-distance bandwidth heuristic."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BANDWIDTH_FLOOR = 1e-6


@dataclass(frozen=True)
class GaussianKernel:
    """k(x, y) = exp(-||x - y||^2 / (2 sigma^2)); k(x, x) = 1."""

    bandwidth_sigma: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.bandwidth_sigma) or self.bandwidth_sigma <= 0.0:
            raise ValueError("bandwidth must be a positive real")

    def value(self, x: np.ndarray, y: np.ndarray) -> float:
        diff = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
        return float(np.exp(-float(diff @ diff) / (2.0 * self.bandwidth_sigma**2)))


def median_bandwidth(points: list[np.ndarray], floor: float = BANDWIDTH_FLOOR) -> float:
    """Median of pairwise distances among points, floored away from zero."""
    if len(points) < 2:
        return max(1.0, floor)
    stacked = np.asarray(points, dtype=float)
    sq_norms = np.sum(stacked * stacked, axis=1)
    sq_dists = sq_norms[:, None] + sq_norms[None, :] - 2.0 * (stacked @ stacked.T)
    upper = sq_dists[np.triu_indices(len(points), k=1)]
    median = float(np.median(np.sqrt(np.maximum(upper, 0.0))))
    return max(median, floor)
