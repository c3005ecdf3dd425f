"""Chain history: the reusable record of states, proposals, and outcomes.

A history distinguishes seed material (states or proposals present before
iteration 0: demonstrations, a reused chain, a rough sketch) from stepped
material recorded once per iteration. The four per-step lists stay index
aligned. `proposal_sourced` flags rough-sketch histories, whose adaptation
subsamples come from the proposal pool instead of the accepted states.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ProposalRecord:
    state: np.ndarray
    density: float
    accepted: bool
    outcome: str | None = None


@dataclass
class ChainHistory:
    proposal_sourced: bool = False
    seed_states: list[np.ndarray] = field(default_factory=list)
    seed_densities: list[float] = field(default_factory=list)
    seed_proposals: list[ProposalRecord] = field(default_factory=list)
    states: list[np.ndarray] = field(default_factory=list)
    densities: list[float] = field(default_factory=list)
    accepted: list[bool] = field(default_factory=list)
    proposals: list[ProposalRecord] = field(default_factory=list)
    moves: list[str] = field(default_factory=list)

    def seed_state(self, state: np.ndarray, density: float) -> None:
        if density < 0.0:
            raise ValueError("densities must be nonnegative")
        self.seed_states.append(np.asarray(state, dtype=float))
        self.seed_densities.append(float(density))

    def seed_proposal(self, record: ProposalRecord) -> None:
        self.seed_proposals.append(record)

    def record_step(
        self,
        state: np.ndarray,
        density: float,
        accepted: bool,
        proposal: ProposalRecord,
        move: str,
    ) -> None:
        if density < 0.0 or proposal.density < 0.0:
            raise ValueError("densities must be nonnegative")
        self.states.append(np.asarray(state, dtype=float))
        self.densities.append(float(density))
        self.accepted.append(bool(accepted))
        self.proposals.append(proposal)
        self.moves.append(move)

    def state_pool(self) -> list[np.ndarray]:
        return self.seed_states + self.states

    def proposal_pool(self) -> list[np.ndarray]:
        return [r.state for r in self.seed_proposals] + [r.state for r in self.proposals]

    def subsample_source(self) -> list[np.ndarray]:
        return self.proposal_pool() if self.proposal_sourced else self.state_pool()

    def __len__(self) -> int:
        return len(self.states)
