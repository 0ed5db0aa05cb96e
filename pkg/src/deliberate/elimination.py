"""Exact inference by variable elimination.

This is the engine's fast exact path: per-instantiation solves during bounded
conditioning, cutset prior masses, and whole-network posteriors all come
through here.  It works on any network, singly connected or not; the
enumeration oracle in network.py stays independent of it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroEvidenceError
from .network import BeliefNetwork, Evidence


@dataclass(frozen=True)
class Factor:
    vars: tuple[int, ...]  # ascending variable indices, one table axis each
    table: np.ndarray


def factor_from_cpt(net: BeliefNetwork, var: int) -> Factor:
    v = net.variables[var]
    axes_vars = list(v.parents) + [var]
    shape = [net.variables[p].cardinality for p in v.parents] + [v.cardinality]
    table = np.asarray(v.cpt, dtype=float).reshape(shape)
    order = sorted(range(len(axes_vars)), key=lambda a: axes_vars[a])
    return Factor(tuple(axes_vars[a] for a in order), np.transpose(table, order))


def _align(f: Factor, vars: tuple[int, ...]) -> np.ndarray:
    present = set(f.vars)
    slicer = tuple(slice(None) if v in present else None for v in vars)
    return f.table[slicer]


def multiply(a: Factor, b: Factor) -> Factor:
    vars = tuple(sorted(set(a.vars) | set(b.vars)))
    return Factor(vars, _align(a, vars) * _align(b, vars))


def marginalize(f: Factor, var: int) -> Factor:
    axis = f.vars.index(var)
    return Factor(f.vars[:axis] + f.vars[axis + 1:], f.table.sum(axis=axis))


def reduce_factor(f: Factor, var: int, state: int) -> Factor:
    if var not in f.vars:
        return f
    axis = f.vars.index(var)
    return Factor(f.vars[:axis] + f.vars[axis + 1:], np.take(f.table, state, axis=axis))


def _elimination_order(factors: list[Factor], to_eliminate: set[int]) -> list[int]:
    """Min-degree ordering on the interaction graph, lowest index on ties."""
    neighbors: dict[int, set[int]] = {}
    for f in factors:
        for v in f.vars:
            neighbors.setdefault(v, set()).update(set(f.vars) - {v})
    order: list[int] = []
    remaining = set(to_eliminate)
    eliminated: set[int] = set()
    while remaining:
        v = min(remaining, key=lambda x: (len(neighbors.get(x, set()) - eliminated), x))
        order.append(v)
        remaining.discard(v)
        eliminated.add(v)
        alive = neighbors.get(v, set()) - eliminated
        for u in alive:
            neighbors[u] |= alive - {u}
    return order


def eliminate_all(factors: list[Factor], to_eliminate: set[int]) -> Factor:
    """Sum out every variable in to_eliminate; returns the single product factor."""
    factors = list(factors)
    for var in _elimination_order(factors, to_eliminate):
        bucket = [f for f in factors if var in f.vars]
        rest = [f for f in factors if var not in f.vars]
        if not bucket:
            continue
        prod = bucket[0]
        for f in bucket[1:]:
            prod = multiply(prod, f)
        factors = rest + [marginalize(prod, var)]
    result = Factor((), np.asarray(1.0))
    for f in factors:
        result = multiply(result, f)
    return result


def _reduced_factors(net: BeliefNetwork, assignment: Evidence) -> list[Factor]:
    out = []
    for i in range(len(net.variables)):
        f = factor_from_cpt(net, i)
        for var, state in assignment.items():
            f = reduce_factor(f, var, state)
        out.append(f)
    return out


def query_masses(
    net: BeliefNetwork, query: tuple[int, int], assignment: Evidence
) -> tuple[float, float]:
    """Unnormalized (p(assignment), p(query, assignment)) in one elimination pass."""
    qvar, qstate = query
    factors = _reduced_factors(net, assignment)
    if qvar in assignment:
        total = float(eliminate_all(factors, set(range(len(net))) - set(assignment)).table)
        qmass = total if assignment[qvar] == qstate else 0.0
        return total, qmass
    to_eliminate = set(range(len(net))) - {qvar} - set(assignment)
    result = eliminate_all(factors, to_eliminate)
    if result.vars != (qvar,):
        raise AssertionError(f"elimination left factor over {result.vars}")
    vec = result.table
    return float(vec.sum()), float(vec[qstate])


def posterior(
    net: BeliefNetwork, query: tuple[int, int], evidence: Evidence | None = None
) -> float:
    """Exact p(query | evidence) for any network."""
    total, qmass = query_masses(net, query, dict(evidence or {}))
    if total == 0.0:
        raise ZeroEvidenceError("zero evidence probability")
    return qmass / total


def joint_marginal(net: BeliefNetwork, keep: tuple[int, ...]) -> Factor:
    """Prior joint marginal over the kept variables (ascending axis order)."""
    keep_set = set(keep)
    factors = [factor_from_cpt(net, i) for i in range(len(net.variables))]
    return eliminate_all(factors, set(range(len(net))) - keep_set)
