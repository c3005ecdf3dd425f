"""von Mises-Fisher sampling on S^2 and S^3.

Rejection sampling after Wood (1994), "Simulation of the von Mises Fisher
distribution": draw the radial component w along the mean direction from
the marginal ~ exp(kappa*w) (1-w^2)^((p-3)/2) via a beta envelope, pair it
with a uniform tangent direction, and rotate the canonical frame onto the
mean. The normalization constant C_p(kappa) never appears.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SUPPORTED_DIMS = (3, 4)


@dataclass(frozen=True)
class VonMisesFisher:
    """Direction distribution on the unit sphere in R^p, p in {3, 4}.

    mean_direction must be unit length (tol 1e-9); kappa >= 0 is the
    concentration, with kappa = 0 meaning uniform on the sphere.
    """

    mean_direction: np.ndarray
    kappa: float

    def __post_init__(self) -> None:
        mu = np.asarray(self.mean_direction, dtype=float)
        if mu.ndim != 1 or mu.size not in _SUPPORTED_DIMS:
            raise ValueError(f"mean direction must live in R^3 or R^4, got shape {mu.shape}")
        if abs(float(np.linalg.norm(mu)) - 1.0) > 1e-9:
            raise ValueError("mean direction must be unit length")
        if not np.isfinite(self.kappa) or self.kappa < 0.0:
            raise ValueError("kappa must be a finite nonnegative real")
        object.__setattr__(self, "mean_direction", mu)

    @property
    def dim(self) -> int:
        return self.mean_direction.size


def _radial_component(kappa: float, p: int, rng: np.random.Generator) -> float:
    # Wood's VM* algorithm; the b expression is the numerically stable form.
    m = p - 1
    b = m / (2.0 * kappa + np.sqrt(4.0 * kappa * kappa + m * m))
    x0 = (1.0 - b) / (1.0 + b)
    c = kappa * x0 + m * np.log(1.0 - x0 * x0)
    while True:
        z = rng.beta(0.5 * m, 0.5 * m)
        w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z)
        u = rng.uniform()
        if kappa * w + m * np.log(1.0 - x0 * w) - c >= np.log(u):
            return float(w)


def sample_vmf(dist: VonMisesFisher, rng: np.random.Generator) -> np.ndarray:
    """One unit vector with density proportional to exp(kappa mu^T x)."""
    p = dist.dim
    if dist.kappa == 0.0:
        while True:
            raw = rng.standard_normal(p)
            norm = np.linalg.norm(raw)
            if norm > 1e-12:
                return raw / norm
    w = _radial_component(dist.kappa, p, rng)
    while True:
        tangent = rng.standard_normal(p - 1)
        norm = np.linalg.norm(tangent)
        if norm > 1e-12:
            tangent /= norm
            break
    canonical = np.concatenate(([w], np.sqrt(max(0.0, 1.0 - w * w)) * tangent))
    sample = _rotate_from_e1(dist.mean_direction, canonical)
    return sample / np.linalg.norm(sample)


def _rotate_from_e1(mu: np.ndarray, x: np.ndarray) -> np.ndarray:
    # Householder reflection mapping e1 -> mu; an isometry of the sphere, so
    # the uniform tangent part stays uniform.
    e1 = np.zeros_like(mu)
    e1[0] = 1.0
    v = e1 - mu
    norm = np.linalg.norm(v)
    if norm < 1e-12:
        return x.copy()
    v /= norm
    return x - 2.0 * v * float(v @ x)
