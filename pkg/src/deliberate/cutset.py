"""Loop-cutset selection on the undirected skeleton of a network.

Clamping every cutset variable must leave the remaining skeleton acyclic, so
that conditioning decomposes inference into singly connected subproblems.
"""

from __future__ import annotations

import math

from .network import BeliefNetwork


def skeleton(net: BeliefNetwork) -> list[set[int]]:
    """Undirected adjacency sets of the parent/child graph."""
    adj: list[set[int]] = [set() for _ in net.variables]
    for i, v in enumerate(net.variables):
        for p in v.parents:
            adj[i].add(p)
            adj[p].add(i)
    return adj


def has_undirected_cycle(adj: list[set[int]], removed: set[int] | None = None) -> bool:
    """DFS cycle check on the subgraph induced by non-removed nodes."""
    removed = removed or set()
    n = len(adj)
    color = [0] * n  # 0 unseen, 1 done
    for start in range(n):
        if start in removed or color[start]:
            continue
        stack = [(start, -1)]
        seen_in_tree = {start}
        while stack:
            node, parent = stack.pop()
            color[node] = 1
            for nb in adj[node]:
                if nb in removed or nb == parent:
                    continue
                if nb in seen_in_tree:
                    return True
                seen_in_tree.add(nb)
                stack.append((nb, node))
    return False


def is_singly_connected(net: BeliefNetwork, clamped: set[int] | None = None) -> bool:
    """True when the skeleton minus the clamped nodes has no cycle."""
    return not has_undirected_cycle(skeleton(net), clamped or set())


def _two_core(adj: list[set[int]], removed: set[int]) -> set[int]:
    """Nodes left after iteratively stripping degree<=1 vertices.

    Every surviving node lies on some undirected cycle of the remaining graph.
    """
    alive = {i for i in range(len(adj)) if i not in removed}
    degree = {i: len(adj[i] - removed) for i in alive}
    queue = [i for i in alive if degree[i] <= 1]
    while queue:
        i = queue.pop()
        if i not in alive:
            continue
        alive.discard(i)
        for nb in adj[i]:
            if nb in alive:
                degree[nb] -= 1
                if degree[nb] <= 1:
                    queue.append(nb)
    return alive


def find_loop_cutset(net: BeliefNetwork) -> tuple[int, ...]:
    """Greedy loop cutset over the skeleton.

    Repeatedly removes, from the nodes still on some cycle, the one scoring
    highest on (degree - 1) / log(cardinality): high degree breaks many loops
    at once, low cardinality keeps the instantiation count small.  Ties go to
    the lowest variable index, which makes the result deterministic.
    """
    adj = skeleton(net)
    removed: set[int] = set()
    while True:
        core = _two_core(adj, removed)
        if not core:
            break
        best = None
        best_score = -math.inf
        for i in sorted(core):
            degree = len(adj[i] - removed)
            score = (degree - 1) / math.log(net.variables[i].cardinality)
            if score > best_score:
                best, best_score = i, score
        removed.add(best)
    return tuple(sorted(removed))


def cutset_state_space(net: BeliefNetwork, cutset: tuple[int, ...]) -> int:
    return math.prod(net.variables[i].cardinality for i in cutset)
