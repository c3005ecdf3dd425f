"""Mode-hopping jumps between ellipsoidal regions around known modes.

Each region is an ellipsoid centered on a mode, oriented and scaled by the
eigendecomposition U diag(lambda) U^T of a single chain covariance shared
by all regions, and inflated by epsilon. Membership uses semi-axes
epsilon * lambda_i (so the closed-form volume
pi^(d/2) eps^d prod(lambda_i) / Gamma(1 + d/2) is the literal volume of the
membership set); `sqrt_scales` switches both membership and volume to the
epsilon * sqrt(lambda_i) convention consistently.

A jump whitens the offset from the source mode and re-colors it at the
target mode, with a reflection sign:

    x' = mu_to - U_to S_to^(1/2) S_from^(-1/2) U_from^T (x - mu_from)

which is an exact involution: jumping back with the regions swapped
returns the original point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import NoRegions
from .linalg import svd_symmetric
from .targets import TargetFn

SCALE_FLOOR = 1e-6


@dataclass(frozen=True)
class DartingConfig:
    p_check: float
    epsilon: float
    scale_floor: float = SCALE_FLOOR
    paper_literal_acceptance: bool = False
    sqrt_scales: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_check <= 1.0:
            raise ValueError("p_check must lie in [0, 1]")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")
        if self.scale_floor <= 0.0:
            raise ValueError("scale floor must be positive")


@dataclass(frozen=True)
class JumpRegion:
    center: np.ndarray
    rotation: np.ndarray  # orthogonal, columns are ellipsoid axes
    scales: np.ndarray  # floored eigenvalues, sorted descending
    epsilon: float
    volume: float
    sqrt_scales: bool = False

    @property
    def dim(self) -> int:
        return self.center.size

    def semi_axes(self) -> np.ndarray:
        radial = np.sqrt(self.scales) if self.sqrt_scales else self.scales
        return self.epsilon * radial


def ellipsoid_volume(dim: int, epsilon: float, scales: np.ndarray, sqrt_scales: bool = False) -> float:
    """Closed-form ellipsoid volume for semi-axes epsilon * scales[i]."""
    radial = np.sqrt(scales) if sqrt_scales else np.asarray(scales, dtype=float)
    log_vol = (
        0.5 * dim * math.log(math.pi)
        + dim * math.log(epsilon)
        + float(np.sum(np.log(radial)))
        - math.lgamma(1.0 + 0.5 * dim)
    )
    return math.exp(log_vol)


def build_jump_region(
    mode: np.ndarray,
    chain_covariance: np.ndarray,
    epsilon: float,
    *,
    scale_floor: float = SCALE_FLOOR,
    sqrt_scales: bool = False,
) -> JumpRegion:
    """Region around a mode from the chain covariance's eigendecomposition.

    Eigenvalues are floored at scale_floor so the whitening in a jump stays
    invertible even for rank-deficient covariances.
    """
    mode = np.asarray(mode, dtype=float)
    rotation, eigenvalues = svd_symmetric(chain_covariance)
    scales = np.maximum(eigenvalues, scale_floor)
    volume = ellipsoid_volume(mode.size, epsilon, scales, sqrt_scales)
    return JumpRegion(mode, rotation, scales, float(epsilon), volume, sqrt_scales)


def contains_state(region: JumpRegion, x: np.ndarray) -> bool:
    """True iff x lies inside the ellipsoid (boundary inclusive)."""
    offset = np.asarray(x, dtype=float) - region.center
    local = region.rotation.T @ offset
    radial = np.sqrt(region.scales) if region.sqrt_scales else region.scales
    return bool(np.linalg.norm(local / radial) <= region.epsilon)


def containing_count(regions: list[JumpRegion], x: np.ndarray) -> int:
    return sum(1 for region in regions if contains_state(region, x))


def select_jump_target(regions: list[JumpRegion], rng: np.random.Generator) -> int:
    """Index i with probability V_i / sum_j V_j (self-selection allowed)."""
    if not regions:
        raise NoRegions("no jump regions to select from")
    volumes = np.array([r.volume for r in regions], dtype=float)
    cumulative = np.cumsum(volumes)
    u = rng.uniform() * cumulative[-1]
    return int(np.searchsorted(cumulative, u, side="right").clip(0, len(regions) - 1))


def jump_transform(x: np.ndarray, from_region: JumpRegion, to_region: JumpRegion) -> np.ndarray:
    """Whitened, reflected jump of x from one region into another."""
    offset = np.asarray(x, dtype=float) - from_region.center
    sqrt_from = np.sqrt(from_region.scales)
    sqrt_to = np.sqrt(to_region.scales)
    whitened = (from_region.rotation.T @ offset) / sqrt_from
    return to_region.center - to_region.rotation @ (sqrt_to * whitened)


class DartingStep(NamedTuple):
    state: np.ndarray
    density: float
    outcome: str | None
    jumped: bool
    proposal: np.ndarray | None
    proposal_density: float | None
    proposal_outcome: str | None


def darting_step(
    current: np.ndarray,
    current_density: float,
    regions: list[JumpRegion],
    target: TargetFn,
    config: DartingConfig,
    rng: np.random.Generator,
    *,
    postprocess: Callable[[np.ndarray], np.ndarray] | None = None,
) -> DartingStep:
    """Attempt one jump move; called after the iteration gate has fired.

    Outside every region the state is counted again (no proposal, no
    evaluation). Otherwise the source region is uniform among containing
    regions, the destination is volume-weighted over all regions, and the
    jump is accepted with probability
    min[1, n(x) pi(x') / (n(x') pi(x))] with n(.) the containing-region
    count. `paper_literal_acceptance` reproduces the inverted ratio and
    comparison exactly as published, for comparison runs only.
    """
    current = np.asarray(current, dtype=float)
    containing = [i for i, r in enumerate(regions) if contains_state(r, current)]
    if not containing:
        return DartingStep(current, float(current_density), None, False, None, None, None)

    from_index = containing[0] if len(containing) == 1 else containing[int(rng.integers(len(containing)))]
    to_index = select_jump_target(regions, rng)
    raw = jump_transform(current, regions[from_index], regions[to_index])
    proposal = postprocess(raw) if postprocess is not None else raw
    value = target(proposal)
    proposal_density = float(value.density)

    n_current = len(containing)
    n_proposal = containing_count(regions, proposal)

    if config.paper_literal_acceptance:
        if proposal_density <= 0.0:
            p_accept = 1.0  # infinite (or 0/0) literal ratio clamps to 1: never accept
        elif current_density <= 0.0:
            p_accept = 0.0  # zero literal ratio: always accept
        else:
            p_accept = min(
                1.0,
                (n_current * float(current_density)) / (max(n_proposal, 1) * proposal_density),
            )
        accepted = bool(rng.uniform() > p_accept)
    else:
        if proposal_density <= 0.0 or n_proposal == 0:
            alpha = 0.0
        elif current_density <= 0.0:
            alpha = 1.0
        else:
            alpha = min(
                1.0,
                (n_current * proposal_density) / (n_proposal * float(current_density)),
            )
        accepted = bool(rng.uniform() < alpha)

    if accepted:
        return DartingStep(
            proposal, proposal_density, value.outcome, True, proposal, proposal_density, value.outcome
        )
    return DartingStep(
        current, float(current_density), None, False, proposal, proposal_density, value.outcome
    )
