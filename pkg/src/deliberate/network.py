"""Discrete belief networks: representation, validation, and a brute-force oracle.

A network is a DAG of discrete variables, each carrying a conditional
probability table over its own states given its parents' states.  CPT rows are
indexed by the parent-state combination in lexicographic order (first parent
most significant), columns by the variable's own state.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import StateSpaceError, ZeroEvidenceError

ROW_SUM_TOL = 1e-9
DEFAULT_ENUMERATION_CAP = 2**20

# Evidence maps variable index -> observed state index.
Evidence = dict[int, int]


@dataclass(frozen=True)
class Variable:
    name: str
    states: tuple[str, ...]
    parents: tuple[int, ...]
    cpt: np.ndarray  # shape (prod(parent cards), own card)

    @property
    def cardinality(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class BeliefNetwork:
    """Immutable after construction; all operations on it are pure functions."""

    variables: tuple[Variable, ...]
    name: str = "network"
    provenance: str = ""  # free-text background/source note, never reasoned over

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {v.name: i for i, v in enumerate(self.variables)}
        )

    def index_of(self, name: str) -> int:
        return self._index[name]

    def state_index(self, var: int, state_name: str) -> int:
        return self.variables[var].states.index(state_name)

    def parent_cards(self, var: int) -> tuple[int, ...]:
        return tuple(self.variables[p].cardinality for p in self.variables[var].parents)

    def cpt_row(self, var: int, parent_states: tuple[int, ...]) -> int:
        """Row index for a parent-state combination (lexicographic layout)."""
        cards = self.parent_cards(var)
        row = 0
        for s, c in zip(parent_states, cards):
            row = row * c + s
        return row

    def __len__(self) -> int:
        return len(self.variables)


@dataclass(frozen=True)
class Issue:
    severity: str  # "error" | "warning"
    message: str
    location: str


@dataclass
class ValidationReport:
    issues: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(i.severity == "error" for i in self.issues)

    def errors(self) -> list[Issue]:
        return [i for i in self.issues if i.severity == "error"]


def validate_network(net: BeliefNetwork) -> ValidationReport:
    """Report every invariant violation; nothing is raised.

    ok is true iff the network is a DAG, every parent/state reference is in
    range, and every CPT has the right shape with rows summing to 1.
    """
    report = ValidationReport()
    n = len(net.variables)
    seen: dict[str, int] = {}
    for i, v in enumerate(net.variables):
        loc = f"variable {v.name}"
        if v.name in seen:
            report.issues.append(Issue("error", f"duplicate variable name {v.name!r}", loc))
        seen[v.name] = i
        if len(v.states) < 2:
            report.issues.append(Issue("error", f"needs >=2 states, has {len(v.states)}", loc))
        if len(set(v.states)) != len(v.states):
            report.issues.append(Issue("error", "duplicate state names", loc))
        for p in v.parents:
            if not (0 <= p < n):
                report.issues.append(Issue("error", f"parent index {p} out of range", loc))
            elif p == i:
                report.issues.append(Issue("error", "variable is its own parent", loc))
        if len(set(v.parents)) != len(v.parents):
            report.issues.append(Issue("error", "repeated parent", loc))

        in_range = [p for p in v.parents if 0 <= p < n]
        expected_rows = 1
        for p in in_range:
            expected_rows *= net.variables[p].cardinality
        if len(in_range) == len(v.parents):
            if v.cpt.shape != (expected_rows, len(v.states)):
                report.issues.append(
                    Issue(
                        "error",
                        f"cpt shape {v.cpt.shape} != ({expected_rows}, {len(v.states)})",
                        loc,
                    )
                )
            else:
                for r in range(expected_rows):
                    row = v.cpt[r]
                    if np.any(row < 0) or np.any(row > 1):
                        report.issues.append(
                            Issue("error", f"cpt row {r} has entries outside [0,1]", loc)
                        )
                    s = float(row.sum())
                    if abs(s - 1.0) > ROW_SUM_TOL:
                        report.issues.append(
                            Issue("error", f"cpt row {r} sum {s:.12g} != 1", loc)
                        )

    cycle = _find_directed_cycle(net)
    if cycle is not None:
        names = " -> ".join(net.variables[i].name for i in cycle)
        report.issues.append(Issue("error", f"directed cycle: {names}", "graph"))
    return report


def _find_directed_cycle(net: BeliefNetwork) -> list[int] | None:
    """Return one directed cycle as a closed index path, or None."""
    n = len(net.variables)
    indegree = [0] * n
    children: list[list[int]] = [[] for _ in range(n)]
    for i, v in enumerate(net.variables):
        for p in v.parents:
            if 0 <= p < n:
                indegree[i] += 1
                children[p].append(i)
    ready = [i for i in range(n) if indegree[i] == 0]
    removed = 0
    while ready:
        ready.sort()
        i = ready.pop(0)
        removed += 1
        for c in children[i]:
            indegree[c] -= 1
            if indegree[c] == 0:
                ready.append(c)
    if removed == n:
        return None
    leftover = [i for i in range(n) if indegree[i] > 0]
    # Walk parent links inside the leftover set until a node repeats.
    start = leftover[0]
    path, seen_at = [start], {start: 0}
    cur = start
    while True:
        nxt = next(p for p in net.variables[cur].parents if indegree[p] > 0)
        if nxt in seen_at:
            cycle = path[seen_at[nxt]:] + [nxt]
            return list(reversed(cycle))  # parent walk runs against edge direction
        seen_at[nxt] = len(path)
        path.append(nxt)
        cur = nxt


def topological_order(net: BeliefNetwork) -> list[int]:
    """Parents-before-children order; ties broken by ascending variable index."""
    n = len(net.variables)
    indegree = [len(v.parents) for v in net.variables]
    children: list[list[int]] = [[] for _ in range(n)]
    for i, v in enumerate(net.variables):
        for p in v.parents:
            children[p].append(i)
    import heapq

    heap = [i for i in range(n) if indegree[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        i = heapq.heappop(heap)
        order.append(i)
        for c in children[i]:
            indegree[c] -= 1
            if indegree[c] == 0:
                heapq.heappush(heap, c)
    if len(order) != n:
        raise ValueError("not a DAG: directed cycle present")
    return order


def joint_probability(net: BeliefNetwork, assignment) -> float:
    """Chain-rule probability of one full state assignment.

    assignment: sequence of state indices, one per variable, in variable order.
    """
    if len(assignment) != len(net.variables):
        raise ValueError(
            f"assignment covers {len(assignment)} of {len(net.variables)} variables"
        )
    p = 1.0
    for i, v in enumerate(net.variables):
        row = net.cpt_row(i, tuple(assignment[q] for q in v.parents))
        p *= float(v.cpt[row, assignment[i]])
    return p


def state_space_size(net: BeliefNetwork) -> int:
    return math.prod(v.cardinality for v in net.variables)


def exact_posterior_enumeration(
    net: BeliefNetwork,
    query: tuple[int, int],
    evidence: Evidence | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> float:
    """Ground-truth posterior by full enumeration of the joint distribution.

    Deliberately naive: iterates every assignment consistent with evidence and
    sums chain-rule products.  Serves as the oracle the fast paths are checked
    against, so it shares no machinery with them.
    """
    if state_space_size(net) > cap:
        raise StateSpaceError(
            f"state space {state_space_size(net)} exceeds cap {cap}"
        )
    evidence = evidence or {}
    qvar, qstate = query
    ranges = [
        (evidence[i],) if i in evidence else tuple(range(v.cardinality))
        for i, v in enumerate(net.variables)
    ]
    num = 0.0
    den = 0.0
    for assignment in itertools.product(*ranges):
        p = joint_probability(net, assignment)
        den += p
        if assignment[qvar] == qstate:
            num += p
    if den == 0.0:
        raise ZeroEvidenceError("zero evidence probability")
    return num / den
