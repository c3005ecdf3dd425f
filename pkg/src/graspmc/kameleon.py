"""Kernel-adaptive Metropolis-Hastings with a history-shaped proposal.

The proposal at state x is N(x, gamma^2 I + nu^2 M H M^T), where M stacks
scaled Gaussian-kernel gradients evaluated at x against a subsample z of
the chain history and H is the n x n centering matrix. Because M depends
on the conditioning point, the proposal is not symmetric and the MH ratio
carries both q directions, each with the covariance rebuilt at its own
conditioning point.

States may carry a quaternion block (7D grasp vectors): a postprocess hook
renormalizes and canonicalizes it after each raw draw, and the proposal
density is then evaluated at the postprocessed point under the plain
d-dimensional Gaussian, with no manifold/Jacobian correction. That is a
documented bias, worst near the w = 0 double-cover boundary; it is the
price of keeping position/orientation dependence inside one kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import EmptyHistory
from .history import ChainHistory, ProposalRecord
from .kernels import GaussianKernel, median_bandwidth
from .linalg import gaussian_logpdf, sample_gaussian
from .targets import TargetFn


@dataclass(frozen=True)
class KameleonConfig:
    gamma: float
    nu: float
    subsample_size: int
    burn_in: int = 0
    kernel: GaussianKernel | None = None  # None -> median heuristic per adaptation

    def __post_init__(self) -> None:
        if self.gamma <= 0.0:
            raise ValueError("gamma must be positive")
        if self.nu < 0.0:
            raise ValueError("nu must be nonnegative")
        if self.subsample_size < 1:
            raise ValueError("subsample size must be a positive integer")
        if self.burn_in < 0:
            raise ValueError("burn-in must be nonnegative")


class KameleonStep(NamedTuple):
    state: np.ndarray
    density: float
    outcome: str | None
    accepted: bool
    proposal: np.ndarray
    proposal_density: float


def subsample_history(
    history: ChainHistory, n: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """min(n, |source|) states drawn uniformly without replacement.

    The source list is the accepted states, or the recorded proposals when
    the history is flagged as a rough sketch.
    """
    source = history.subsample_source()
    if not source:
        raise EmptyHistory("no states to subsample")
    if n >= len(source):
        return [np.asarray(s, dtype=float) for s in source]
    indices = rng.choice(len(source), size=n, replace=False)
    return [np.asarray(source[i], dtype=float) for i in indices]


def kernel_gradient_matrix(
    z: list[np.ndarray], y: np.ndarray, kernel: GaussianKernel
) -> np.ndarray:
    """d x n matrix whose column i is 2 * grad_x k(x, z_i) at x = y.

    For the Gaussian kernel the gradient is -(y - z_i) / sigma^2 * k(y, z_i).
    """
    y = np.asarray(y, dtype=float)
    z_arr = np.asarray(z, dtype=float)
    diffs = z_arr - y[None, :]
    sq = np.sum(diffs * diffs, axis=1)
    k_vals = np.exp(-sq / (2.0 * kernel.bandwidth_sigma**2))
    return (2.0 * diffs * k_vals[:, None] / kernel.bandwidth_sigma**2).T


def proposal_covariance(m: np.ndarray, config: KameleonConfig) -> np.ndarray:
    """gamma^2 I + nu^2 M H M^T, symmetrized; H is the centering matrix.

    M H M^T equals Mc Mc^T with Mc the column-centered M (H is idempotent),
    which is what gets computed.
    """
    m = np.asarray(m, dtype=float)
    d = m.shape[0]
    centered = m - m.mean(axis=1, keepdims=True)
    cov = config.gamma**2 * np.eye(d) + config.nu**2 * (centered @ centered.T)
    return 0.5 * (cov + cov.T)


def adaptation_schedule(iteration: int, config: KameleonConfig) -> bool:
    """True while the subsample (and bandwidth) should be refreshed."""
    return iteration < config.burn_in


def covariance_at(
    point: np.ndarray, subsample: list[np.ndarray], kernel: GaussianKernel, config: KameleonConfig
) -> np.ndarray:
    m = kernel_gradient_matrix(subsample, point, kernel)
    return proposal_covariance(m, config)


def kameleon_step(
    current: np.ndarray,
    current_density: float,
    target: TargetFn,
    history: ChainHistory,
    config: KameleonConfig,
    rng: np.random.Generator,
    *,
    subsample: list[np.ndarray] | None = None,
    kernel: GaussianKernel | None = None,
    postprocess: Callable[[np.ndarray], np.ndarray] | None = None,
    record: bool = True,
    move: str = "kameleon",
) -> KameleonStep:
    """One adaptive MH step; the proposal is always recorded in the history.

    With nu = 0 (or nothing to subsample) this reduces exactly to
    random-walk Metropolis with proposal N(x, gamma^2 I): same draws from
    the generator, symmetric q-ratio of one.

    Zero-density handling: a zero-density proposal is always rejected; a
    zero-density current state (legal only at initialization) accepts any
    positive-density proposal, letting a chain recover into the support.
    """
    current = np.asarray(current, dtype=float)
    d = current.size

    if subsample is None and config.nu > 0.0 and history.subsample_source():
        subsample = subsample_history(history, config.subsample_size, rng)
    adaptive = bool(subsample) and config.nu > 0.0

    if adaptive:
        if kernel is None:
            kernel = config.kernel or GaussianKernel(median_bandwidth(subsample))
        cov_current = covariance_at(current, subsample, kernel, config)
        raw = sample_gaussian(current, cov_current, rng)
    else:
        raw = current + config.gamma * rng.standard_normal(d)

    proposal = postprocess(raw) if postprocess is not None else raw
    value = target(proposal)
    proposal_density = float(value.density)

    if proposal_density <= 0.0:
        alpha = 0.0
    elif current_density <= 0.0:
        alpha = 1.0
    elif adaptive:
        cov_proposal = covariance_at(proposal, subsample, kernel, config)
        log_q_forward = gaussian_logpdf(proposal, current, cov_current)
        log_q_backward = gaussian_logpdf(current, proposal, cov_proposal)
        log_ratio = (
            np.log(proposal_density) - np.log(current_density) + log_q_backward - log_q_forward
        )
        alpha = 1.0 if log_ratio >= 0.0 else float(np.exp(log_ratio))
    else:
        alpha = min(1.0, proposal_density / current_density)

    accepted = bool(rng.uniform() < alpha)
    next_state = proposal if accepted else current
    next_density = proposal_density if accepted else float(current_density)
    step_record = ProposalRecord(proposal, proposal_density, accepted, value.outcome)
    if record:
        history.record_step(next_state, next_density, accepted, step_record, move)
    return KameleonStep(next_state, next_density, value.outcome, accepted, proposal, proposal_density)


def run_kameleon_chain(
    target: TargetFn,
    initial_state: np.ndarray,
    iterations: int,
    config: KameleonConfig,
    rng: np.random.Generator,
    *,
    history: ChainHistory | None = None,
    postprocess: Callable[[np.ndarray], np.ndarray] | None = None,
) -> ChainHistory:
    """Pure Kameleon chain: adapt during burn-in, then freeze the subsample.

    The returned history contains one record per iteration (burn-in
    included) and the initial state as seed material.
    """
    if history is None:
        history = ChainHistory()
    current = np.asarray(initial_state, dtype=float)
    current_density = float(target(current).density)
    history.seed_state(current, current_density)

    subsample: list[np.ndarray] = []
    kernel = config.kernel
    for t in range(iterations):
        if config.nu > 0.0 and adaptation_schedule(t, config):
            pool = history.subsample_source()
            if pool:
                subsample = subsample_history(history, config.subsample_size, rng)
                kernel = config.kernel or GaussianKernel(median_bandwidth(subsample))
        step = kameleon_step(
            current,
            current_density,
            target,
            history,
            config,
            rng,
            subsample=subsample,
            kernel=kernel,
            postprocess=postprocess,
        )
        current, current_density = step.state, step.density
    return history
