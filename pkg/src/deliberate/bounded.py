"""Bounded conditioning: anytime inference with sound probability bounds.

A session enumerates the loop-cutset instantiations of a network, solves them
one at a time (most probable first), and maintains three accumulators:

    A = sum of p(query, c_i, evidence) over processed instantiations
    B = sum of p(c_i, evidence)        over processed instantiations
    R = total prior mass of the instantiations not yet processed

Every unprocessed instantiation contributes between 0 and its full prior mass
to both the numerator and denominator of the posterior, which gives the
interval

    lb = A / (B + R)        ub = (A + R) / (B + R)

The interval always contains the exact posterior, narrows monotonically, has
width R / (B + R), and collapses to A / B when the schedule is exhausted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import elimination
from .cutset import find_loop_cutset
from .errors import StateSpaceError, ZeroEvidenceError
from .network import BeliefNetwork, Evidence

DEFAULT_INSTANTIATION_CAP = 1_000_000
DEFAULT_SETUP_FACTOR = 0.01


@dataclass(frozen=True)
class ProbabilityBounds:
    lb: float
    ub: float

    @property
    def width(self) -> float:
        return self.ub - self.lb

    @property
    def mean(self) -> float:
        return (self.lb + self.ub) / 2.0


@dataclass(frozen=True)
class CutsetInstantiation:
    assignment: dict[int, int]  # cutset variable index -> state index
    prior_mass: float


@dataclass
class VirtualClock:
    """Deterministic simulated time; the only time source in emitted artifacts."""

    cost_per_instantiation: float | tuple[float, ...] = 1.0
    meta_cost: float = 0.05
    now: float = 0.0

    def __post_init__(self):
        costs = (
            self.cost_per_instantiation
            if isinstance(self.cost_per_instantiation, tuple)
            else (self.cost_per_instantiation,)
        )
        if any(c < 0 for c in costs) or self.meta_cost < 0 or self.now < 0:
            raise ValueError("clock costs must be nonnegative")

    def step_cost(self, index: int) -> float:
        if isinstance(self.cost_per_instantiation, tuple):
            return self.cost_per_instantiation[index]
        return self.cost_per_instantiation

    def charge_step(self, index: int) -> float:
        self.now += self.step_cost(index)
        return self.now

    def charge_meta(self) -> float:
        self.now += self.meta_cost
        return self.now

    def charge_setup(self, count: int, setup_factor: float) -> float:
        if isinstance(self.cost_per_instantiation, tuple):
            total = sum(self.cost_per_instantiation[:count])
        else:
            total = count * self.cost_per_instantiation
        self.now += total * setup_factor
        return self.now


@dataclass
class InferenceSession:
    net: BeliefNetwork
    evidence: Evidence
    query: tuple[int, int]
    cutset: tuple[int, ...]
    schedule: list[CutsetInstantiation]
    clock: VirtualClock
    cursor: int = 0
    query_mass: float = 0.0  # A
    evidence_mass: float = 0.0  # B
    processed_prior: float = 0.0  # P, prior mass already consumed
    _suffix: list[float] = field(default_factory=list)  # _suffix[i] = mass of schedule[i:]

    @property
    def remaining_prior(self) -> float:
        """R: prior mass of the unprocessed tail (exactly 0 at exhaustion)."""
        return self._suffix[self.cursor]

    @property
    def exhausted(self) -> bool:
        return self.cursor >= len(self.schedule)

    @property
    def remaining_steps(self) -> int:
        return len(self.schedule) - self.cursor

    def bounds(self) -> ProbabilityBounds:
        a, b, r = self.query_mass, self.evidence_mass, self.remaining_prior
        denom = b + r
        if denom <= 0.0:
            raise ZeroEvidenceError("zero evidence probability")
        return ProbabilityBounds(a / denom, (a + r) / denom)


def solve_conditioned(
    net: BeliefNetwork,
    evidence: Evidence,
    clamped: dict[int, int],
    query: tuple[int, int],
) -> tuple[float, float]:
    """Exact (p(clamp, evidence), p(query, clamp, evidence)) for one instantiation."""
    merged = dict(evidence)
    for var, state in clamped.items():
        if merged.get(var, state) != state:
            return 0.0, 0.0  # clamp contradicts evidence outright
        merged[var] = state
    return elimination.query_masses(net, query, merged)


def init_session(
    net: BeliefNetwork,
    evidence: Evidence,
    query: tuple[int, int],
    clock: VirtualClock | None = None,
    cutset: tuple[int, ...] | None = None,
    max_instantiations: int = DEFAULT_INSTANTIATION_CAP,
    setup_factor: float = DEFAULT_SETUP_FACTOR,
) -> InferenceSession:
    """Prepare a bounded-conditioning run.

    Prior masses p(c) are computed exactly (a joint marginal over the cutset),
    not approximated by products of priors; the schedule is sorted by
    descending mass with lexicographic tie-breaks, so runs are deterministic.
    Setup work is charged to the clock as count * step cost * setup_factor.
    """
    clock = clock or VirtualClock()
    if cutset is None:
        cutset = find_loop_cutset(net)
    cutset = tuple(sorted(cutset))

    if cutset:
        count = int(np.prod([net.variables[i].cardinality for i in cutset]))
        if count > max_instantiations:
            raise StateSpaceError(
                f"cutset yields {count} instantiations, cap is {max_instantiations}"
            )
        marginal = elimination.joint_marginal(net, cutset)
        entries = []
        for idx in np.ndindex(marginal.table.shape):
            assignment = dict(zip(marginal.vars, idx))
            entries.append((float(marginal.table[idx]), tuple(idx)))
        entries.sort(key=lambda e: (-e[0], e[1]))
        schedule = [
            CutsetInstantiation(dict(zip(marginal.vars, states)), mass)
            for mass, states in entries
        ]
    else:
        schedule = [CutsetInstantiation({}, 1.0)]

    suffix = [0.0] * (len(schedule) + 1)
    for i in range(len(schedule) - 1, -1, -1):
        suffix[i] = schedule[i].prior_mass + suffix[i + 1]

    clock.charge_setup(len(schedule), setup_factor)
    return InferenceSession(
        net=net,
        evidence=dict(evidence),
        query=query,
        cutset=cutset,
        schedule=schedule,
        clock=clock,
        _suffix=suffix,
    )


def refine_step(session: InferenceSession) -> ProbabilityBounds:
    """Process the next instantiation and return the tightened bounds."""
    if session.exhausted:
        raise ValueError("session exhausted")
    inst = session.schedule[session.cursor]
    ev_mass, q_mass = solve_conditioned(
        session.net, session.evidence, inst.assignment, session.query
    )
    session.query_mass += q_mass
    session.evidence_mass += ev_mass
    session.processed_prior += inst.prior_mass
    session.clock.charge_step(session.cursor)
    session.cursor += 1
    return session.bounds()


def run_to_convergence(session: InferenceSession) -> float:
    """Exhaust the schedule and return the collapsed point posterior."""
    while not session.exhausted:
        refine_step(session)
    if session.evidence_mass <= 0.0:
        raise ZeroEvidenceError("zero evidence probability")
    return session.query_mass / session.evidence_mass
