"""Deterministic maximum-weight assignment with exact arithmetic.

Weights are ints or Fractions; no floats enter the optimization.  Among all
maximum-weight assignments the solver returns the one whose per-agent good
vector (good index matched to agent 1, agent 2, ...) is lexicographically
smallest, with unmatched agents sorting last.  Small problems are solved by
exhaustive permutation search; larger ones by an exact Hungarian method plus
a fix-one-agent-at-a-time lexicographic refinement.
"""
from __future__ import annotations

from itertools import permutations

EXHAUSTIVE_LIMIT = 7


def max_weight_assignment(weights, n_goods=None):
    """Assign every good (column) to a distinct agent (row), maximizing total
    weight.  Requires n_goods <= n_agents.  Returns a per-agent list of good
    columns (0-based) with None for unmatched agents."""
    n_agents = len(weights)
    if n_goods is None:
        n_goods = len(weights[0]) if weights else 0
    if n_goods > n_agents:
        raise ValueError("more goods than agents in one round")
    if n_goods == 0:
        return [None] * n_agents
    if n_agents <= EXHAUSTIVE_LIMIT:
        return _exhaustive(weights, n_agents, n_goods)
    return _lexicographic_hungarian(weights, n_agents, n_goods)


def _vector_key(assignment, n_goods):
    return tuple(n_goods if g is None else g for g in assignment)


def _exhaustive(weights, n_agents, n_goods):
    best_val = None
    best_assign = None
    best_key = None
    for agents in permutations(range(n_agents), n_goods):
        val = 0
        for g, a in enumerate(agents):
            val += weights[a][g]
        if best_val is not None and val < best_val:
            continue
        assign = [None] * n_agents
        for g, a in enumerate(agents):
            assign[a] = g
        key = _vector_key(assign, n_goods)
        if best_val is None or val > best_val or (val == best_val and key < best_key):
            best_val, best_assign, best_key = val, assign, key
    return best_assign


def _hungarian_value(weights, rows, cols):
    """Max total weight matching all of `cols` into distinct `rows` (exact)."""
    if not cols:
        return 0
    n = len(rows)
    # square min-cost matrix: real columns negated, dummy columns cost 0
    cost = []
    for r in rows:
        row = [-weights[r][c] for c in cols] + [0] * (n - len(cols))
        cost.append(row)
    return -_hungarian_min_cost(cost)


def _hungarian_min_cost(cost):
    """Exact min-cost square assignment (potentials method); returns the cost."""
    n = len(cost)
    big = sum(abs(c) for row in cost for c in row) + 1
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [big] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = big
            j1 = -1
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    total = 0
    for j in range(1, n + 1):
        if p[j]:
            total += cost[p[j] - 1][j - 1]
    return total


def _lexicographic_hungarian(weights, n_agents, n_goods):
    rows = list(range(n_agents))
    cols = list(range(n_goods))
    target = _hungarian_value(weights, rows, cols)
    assign = [None] * n_agents
    for a in range(n_agents):
        rest_rows = [r for r in rows if r != a]
        fixed = None
        for g in sorted(cols) + [None]:
            if g is None:
                if len(cols) > len(rest_rows):
                    continue  # every good still needs a distinct agent
                sub = _hungarian_value(weights, rest_rows, cols)
                gain = 0
            else:
                rest_cols = [c for c in cols if c != g]
                if len(rest_cols) > len(rest_rows):
                    continue
                sub = _hungarian_value(weights, rest_rows, rest_cols)
                gain = weights[a][g]
            if gain + sub == target:
                fixed = g
                target -= gain
                break
        if fixed is not None:
            assign[a] = fixed
            cols.remove(fixed)
        rows.remove(a)
    return assign
