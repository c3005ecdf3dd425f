"""Active and transfer learning loops combining the two samplers.

Active learning: a random-walk sketch of the target shapes the adaptive
proposal, demonstrated grasps become jump-region centers, and each
iteration either takes a local kernel-adaptive step or attempts a darting
jump. Transfer learning reruns the same loop on a novel object, reusing a
previously learned chain as adaptation history and either the source
object's modes or fresh demonstrations as region centers; no new sketch is
built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import quaternions as quat
from .darting import DartingConfig, JumpRegion, build_jump_region, darting_step
from .errors import InvalidDemonstration
from .grasping import (
    DEFAULT_EVALUATION,
    EvaluationConfig,
    Grasp,
    canonicalize_grasp_vector,
    make_target,
    workspace_bounds,
)
from .gripper import GripperModel
from .history import ChainHistory, ProposalRecord
from .kameleon import (
    KameleonConfig,
    adaptation_schedule,
    kameleon_step,
    subsample_history,
)
from .kernels import GaussianKernel, median_bandwidth
from .objects import ObjectModel
from .targets import TargetFn
from .vmf import VonMisesFisher, sample_vmf

SIMILAR_OBJECT_MODES = "similar_object_modes"
ACTUAL_OBJECT_MODES = "actual_object_modes"


class Tally(NamedTuple):
    success: int
    slipped: int
    collision: int
    miss: int

    @property
    def total(self) -> int:
        return sum(self)


@dataclass
class RoughSketch:
    proposals: list[ProposalRecord]
    source_object: str
    position_sigma: float
    kappa: float

    def __post_init__(self) -> None:
        if not self.proposals:
            raise ValueError("a rough sketch must contain at least one proposal")

    def states(self) -> list[np.ndarray]:
        return [p.state for p in self.proposals]

    def covariance(self) -> np.ndarray:
        stacked = np.asarray(self.states())
        cov = np.cov(stacked.T) if len(stacked) > 1 else np.zeros((stacked.shape[1],) * 2)
        return 0.5 * (cov + cov.T)


@dataclass
class LearnedModel:
    object_name: str
    chain: ChainHistory
    modes: list[Grasp]
    regions: list[JumpRegion]
    config: dict = field(default_factory=dict)
    mode_densities: list[float] | None = None

    def tally(self) -> Tally:
        return tally_outcomes(self)

    def mode_qualities(self) -> list[float]:
        """Mode target densities on this model's object (0.0 if unknown)."""
        if self.mode_densities is None:
            return [0.0] * len(self.modes)
        return list(self.mode_densities)


def tally_outcomes(model: "LearnedModel | ChainHistory") -> Tally:
    """Outcome counts over every evaluated proposal, burn-in included."""
    history = model.chain if isinstance(model, LearnedModel) else model
    counts = {"success": 0, "slipped": 0, "collision": 0, "miss": 0}
    for record in history.proposals:
        if record.outcome is not None:
            counts[record.outcome] += 1
    return Tally(**counts)


def build_rough_sketch(
    obj: ObjectModel,
    gripper: GripperModel,
    iterations: int,
    start: Grasp,
    position_sigma: float,
    kappa: float,
    rng: np.random.Generator,
    eval_config: EvaluationConfig = DEFAULT_EVALUATION,
    *,
    history: ChainHistory | None = None,
) -> RoughSketch:
    """Random-walk MH trace: Gaussian position step, vMF orientation step.

    Every proposal is recorded regardless of acceptance; the proposals, not
    the chain, are the sketch. An optional history collects the walk as a
    tallied run (the random-walk baseline experiment).
    """
    target = make_target(obj, gripper, eval_config)
    current = start.to_vector()
    current_value = target(current)
    if current_value.density <= 0.0:
        raise InvalidDemonstration("sketch start state has zero density")
    record_history = history if history is not None else ChainHistory(proposal_sourced=True)
    current_density = current_value.density
    proposals: list[ProposalRecord] = []
    for _ in range(iterations):
        position = current[:3] + position_sigma * rng.standard_normal(3)
        orientation = sample_vmf(VonMisesFisher(current[3:], kappa), rng)
        proposal = canonicalize_grasp_vector(np.concatenate([position, orientation]))
        value = target(proposal)
        alpha = 0.0 if value.density <= 0.0 else min(1.0, value.density / current_density)
        accepted = bool(rng.uniform() < alpha)
        record = ProposalRecord(proposal, float(value.density), accepted, value.outcome)
        proposals.append(record)
        if accepted:
            current, current_density = proposal, float(value.density)
        record_history.record_step(current, current_density, accepted, record, "random-walk")
    return RoughSketch(proposals, obj.name, position_sigma, kappa)


def random_sketch(
    obj: ObjectModel,
    gripper: GripperModel,
    size: int,
    rng: np.random.Generator,
    eval_config: EvaluationConfig = DEFAULT_EVALUATION,
) -> RoughSketch:
    """Uniform poses over the workspace box: a sketch with no target signal.

    Densities are stored as zero without evaluating the target; nothing in
    the pipeline reads sketch densities, and evaluating them would silently
    double the experiment's evaluation budget.
    """
    lo, hi = workspace_bounds(obj, gripper, eval_config)
    proposals = []
    for _ in range(size):
        position = rng.uniform(lo, hi)
        orientation = quat.random_uniform(rng)
        state = np.concatenate([position, orientation])
        proposals.append(ProposalRecord(state, 0.0, False, None))
    return RoughSketch(proposals, obj.name, float("nan"), float("nan"))


def run_combined_chain(
    target: TargetFn,
    initial_state: np.ndarray,
    iterations: int,
    kameleon_config: KameleonConfig,
    darting_config: DartingConfig,
    regions: list[JumpRegion],
    history: ChainHistory,
    rng: np.random.Generator,
    *,
    postprocess: Callable[[np.ndarray], np.ndarray] | None = None,
    invert_p_check: bool = False,
) -> ChainHistory:
    """The per-iteration gate: local Kameleon step or darting jump attempt.

    u1 < p_check takes the local step (so p_check = 0.6 means a 40% jump
    attempt rate); invert_p_check flips the comparison, reproducing the
    paper's other stated reading. Darting iterations whose state is outside
    every region re-count the current state's outcome. The initial state's
    evaluation is not tallied, so the recorded proposals number exactly
    `iterations`.
    """
    current = np.asarray(initial_state, dtype=float)
    value = target(current)
    current_density, current_outcome = float(value.density), value.outcome
    history.seed_state(current, current_density)

    subsample: list[np.ndarray] = []
    kernel = kameleon_config.kernel
    for t in range(iterations):
        if kameleon_config.nu > 0.0 and adaptation_schedule(t, kameleon_config):
            pool = history.subsample_source()
            if pool:
                subsample = subsample_history(history, kameleon_config.subsample_size, rng)
                kernel = kameleon_config.kernel or GaussianKernel(median_bandwidth(subsample))
        u1 = rng.uniform()
        local = (u1 < darting_config.p_check) != invert_p_check
        if local or not regions:
            step = kameleon_step(
                current,
                current_density,
                target,
                history,
                kameleon_config,
                rng,
                subsample=subsample,
                kernel=kernel,
                postprocess=postprocess,
            )
            current, current_density = step.state, step.density
            if step.accepted:
                current_outcome = step.outcome
        else:
            step = darting_step(
                current,
                current_density,
                regions,
                target,
                darting_config,
                rng,
                postprocess=postprocess,
            )
            if step.proposal is None:
                record = ProposalRecord(current, current_density, False, current_outcome)
                history.record_step(current, current_density, False, record, "recount")
            else:
                record = ProposalRecord(
                    step.proposal, step.proposal_density, step.jumped, step.proposal_outcome
                )
                history.record_step(step.state, step.density, step.jumped, record, "jump")
                if step.jumped:
                    current, current_density, current_outcome = (
                        step.state,
                        step.density,
                        step.outcome,
                    )
    return history


def _shared_regions(
    modes: list[Grasp], covariance: np.ndarray, darting_config: DartingConfig
) -> list[JumpRegion]:
    return [
        build_jump_region(
            mode.to_vector(),
            covariance,
            darting_config.epsilon,
            scale_floor=darting_config.scale_floor,
            sqrt_scales=darting_config.sqrt_scales,
        )
        for mode in modes
    ]


def active_learn(
    obj: ObjectModel,
    gripper: GripperModel,
    sketch: RoughSketch,
    demonstrations: list[Grasp],
    kameleon_config: KameleonConfig,
    darting_config: DartingConfig,
    iterations: int,
    rng: np.random.Generator,
    eval_config: EvaluationConfig = DEFAULT_EVALUATION,
    *,
    invert_p_check: bool = False,
) -> LearnedModel:
    """Sketch-initialized combined run with demonstrations as jump modes.

    Runs burn_in + iterations total steps. Demonstrations must have
    positive density on the object; they seed the chain history as
    accepted states, and one of them (uniformly chosen) starts the chain.
    """
    if not demonstrations:
        raise InvalidDemonstration("at least one demonstrated grasp is required")
    target = make_target(obj, gripper, eval_config)
    mode_densities = [float(target(demo.to_vector()).density) for demo in demonstrations]
    if min(mode_densities) <= 0.0:
        raise InvalidDemonstration(f"demonstration has zero density on {obj.name}")

    regions = _shared_regions(demonstrations, sketch.covariance(), darting_config)
    history = ChainHistory(proposal_sourced=True)
    for record in sketch.proposals:
        history.seed_proposal(record)
    for demo, density in zip(demonstrations, mode_densities):
        history.seed_state(demo.to_vector(), density)

    initial = demonstrations[int(rng.integers(len(demonstrations)))].to_vector()
    total = kameleon_config.burn_in + iterations
    run_combined_chain(
        target,
        initial,
        total,
        kameleon_config,
        darting_config,
        regions,
        history,
        rng,
        postprocess=canonicalize_grasp_vector,
        invert_p_check=invert_p_check,
    )
    return LearnedModel(obj.name, history, list(demonstrations), regions, mode_densities=mode_densities)


def transfer_learn(
    novel_obj: ObjectModel,
    gripper: GripperModel,
    source: LearnedModel,
    mode_source: str,
    actual_modes: list[Grasp] | None,
    kameleon_config: KameleonConfig,
    darting_config: DartingConfig,
    iterations: int,
    rng: np.random.Generator,
    eval_config: EvaluationConfig = DEFAULT_EVALUATION,
    *,
    invert_p_check: bool = False,
) -> LearnedModel:
    """Rerun the combined loop on a novel object, reusing the source chain.

    The reused chain states are the adaptation history (no sketch is
    built); jump regions are centered on the chosen mode set using the
    source chain covariance. Modes with zero density on the novel object
    are retained as region centers, and the chain may start on one: the
    zero-density acceptance rule lets it recover, or the run completes
    with no successes, both valid outcomes.
    """
    if mode_source not in (SIMILAR_OBJECT_MODES, ACTUAL_OBJECT_MODES):
        raise ValueError(f"unknown mode source {mode_source!r}")
    if mode_source == ACTUAL_OBJECT_MODES:
        if not actual_modes:
            raise InvalidDemonstration("actual-object modes requested but none provided")
        modes = list(actual_modes)
    else:
        modes = list(source.modes)

    source_states = source.chain.state_pool()
    if not source_states:
        raise ValueError("source model has an empty chain")
    stacked = np.asarray(source_states)
    covariance = np.cov(stacked.T) if len(stacked) > 1 else np.zeros((stacked.shape[1],) * 2)
    covariance = 0.5 * (covariance + covariance.T)

    regions = _shared_regions(modes, covariance, darting_config)
    history = ChainHistory(proposal_sourced=False)
    for state, density in zip(source.chain.state_pool(), source.chain.seed_densities + source.chain.densities):
        history.seed_state(state, density)

    target = make_target(novel_obj, gripper, eval_config)
    mode_densities = [float(target(mode.to_vector()).density) for mode in modes]
    initial = modes[int(rng.integers(len(modes)))].to_vector()
    total = kameleon_config.burn_in + iterations
    run_combined_chain(
        target,
        initial,
        total,
        kameleon_config,
        darting_config,
        regions,
        history,
        rng,
        postprocess=canonicalize_grasp_vector,
        invert_p_check=invert_p_check,
    )
    return LearnedModel(novel_obj.name, history, modes, regions, mode_densities=mode_densities)
