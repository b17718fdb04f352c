"""Exact fairness metrics: EF/EF1/EF2 ratios, proportionality, maximin shares.

Ratios are clamped to [0, 1] and computed exactly (as `Fraction`) whenever the
underlying values are integers; float-valued instances fall back to float
arithmetic with a 1e-9 relative tolerance on comparisons.

Two independent maximin-share oracles are provided:

* `mms_exhaustive` enumerates assignments of up to 12 goods to n bundles with
  pruning, for arbitrary additive values;
* `mms_two_value` solves the two-distinct-values case exactly at any scale by
  enumerating high-good distributions and water-filling the identical low
  goods (with a fast closed feasibility test when the low value divides the
  high value).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .model import AllocationState, Instance, value

REL_TOL = 1e-9

_ONE = Fraction(1)


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def _ratio(num, den):
    """min(1, num/den), exact when both operands are exact."""
    if den <= 0:
        return _ONE if _is_exact(num) and _is_exact(den) else 1.0
    if _is_exact(num) and _is_exact(den):
        r = Fraction(num) / Fraction(den)
        return r if r < 1 else _ONE
    return min(1.0, num / den)


def _gt(a, b) -> bool:
    """a > b, beyond relative tolerance when floats are involved."""
    if _is_exact(a) and _is_exact(b):
        return a > b
    return a - b > REL_TOL * max(1.0, abs(a), abs(b))


def removable_value(state: AllocationState, viewer: int, owner: int, k: int):
    """Value of owner's bundle to `viewer` after removing its k best goods."""
    vals = sorted(
        (value(state.profile(viewer), state.goods_seen[idx - 1], viewer)
         for idx in state.bundles[owner - 1]),
        reverse=True,
    )
    return sum(vals[k:]) if k < len(vals) else 0


def efk_ratio(state: AllocationState, instance: Instance, i: int, j: int, k: int):
    """Largest rho <= 1 such that agent i is rho-EFk towards agent j.

    The removed set minimizing the denominator is the k goods of A_j that i
    values most (valid because valuations are additive and nonnegative).
    Vacuous cases (empty or fully removable bundle) give ratio 1.
    """
    if k not in (0, 1, 2):
        raise ValueError("only k in {0, 1, 2} supported")
    den = removable_value(state, i, j, k)
    return _ratio(state.own_value(i), den)


def efk_ratio_all(state: AllocationState, instance: Instance, i: int, k: int):
    """Worst-case rho-EFk of agent i towards every other agent."""
    ratios = [efk_ratio(state, instance, i, j, k) for j in range(1, state.n + 1) if j != i]
    return min(ratios, default=_ONE)


def prop_ratio(state: AllocationState, instance: Instance, i: int):
    """Largest rho <= 1 with v_i(A_i) >= rho * v_i(allocated goods)/n."""
    total = state.seen_value(i)
    return _ratio(state.n * state.own_value(i), total)


# ---------------------------------------------------------------------------
# maximin-share oracles
# ---------------------------------------------------------------------------

MMS_EXHAUSTIVE_MAX_GOODS = 12


def mms_exhaustive(values, n: int):
    """Exact maximin share by enumerating bundle assignments (<= 12 goods).

    Bundles may be empty, so the result is 0 whenever len(values) < n and all
    values are positive.  Prunes branches that cannot beat the incumbent and
    skips assignments into bundles with identical current sums.
    """
    vals = sorted(values, reverse=True)
    m = len(vals)
    if n < 1:
        raise ValueError("need n >= 1")
    if m > MMS_EXHAUSTIVE_MAX_GOODS:
        raise ValueError(f"exhaustive oracle capped at {MMS_EXHAUSTIVE_MAX_GOODS} goods")
    if any(v < 0 for v in vals):
        raise ValueError("values must be nonnegative")
    if m < n or not vals:
        return 0 if all(_is_exact(v) for v in vals) else 0.0
    exact = all(_is_exact(v) for v in vals)

    suffix = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] + vals[i]
    sums = [0] * n
    best = 0

    def rec(idx):
        nonlocal best
        if idx == m:
            cur = min(sums)
            if cur > best:
                best = cur
            return
        rem = suffix[idx]
        if min(sums) + rem <= best:
            return
        if exact:
            # lows needed to push every bundle strictly above the incumbent
            need = sum(best + 1 - s for s in sums if s <= best)
            if need > rem:
                return
        v = vals[idx]
        seen = set()
        for b in range(n):
            s = sums[b]
            if s in seen:
                continue
            seen.add(s)
            sums[b] = s + v
            rec(idx + 1)
            sums[b] = s

    rec(0)
    return best if exact else float(best)


def _water_fill_min(bases, increment, count):
    """Add `count` goods of value `increment` one at a time onto a current
    minimum bundle (lowest index on ties); return the resulting minimum."""
    sums = list(bases)
    for _ in range(count):
        j = sums.index(min(sums))
        sums[j] += increment
    return min(sums)


def _capped_partitions(total, parts, cap):
    """Weakly decreasing distributions of `total` over `parts` slots, each <= cap."""
    if parts == 1:
        if total <= cap:
            yield (total,)
        return
    lo = -(-total // parts)  # ceil: first part at least the average
    for first in range(min(cap, total), lo - 1, -1):
        for rest in _capped_partitions(total - first, parts - 1, first):
            yield (first,) + rest


def _mms_two_value_enumerate(h, l, alpha, beta, n):
    ub = (h * alpha + l * beta) / n
    cap = max(int(ub // alpha) + 1, -(-h // n)) if alpha > 0 else 1
    best = None
    for dist in _capped_partitions(h, n, cap):
        bases = [k * alpha for k in dist]
        cur = _water_fill_min(bases, beta, l) if beta > 0 and l else min(bases)
        if best is None or cur > best:
            best = cur
    return best


def _ceil_div(a, b):
    return -(-a // b)


def _mms_two_value_fast(h, l, alpha, beta, n):
    """Binary search on the answer for integer values with beta | alpha.

    With beta dividing alpha the per-bundle low-good requirement is a convex
    function of its high count, so spreading highs as evenly as possible
    (after capping useless surplus) minimizes total lows needed.
    """
    unit = alpha // beta

    def feasible(lam):
        if lam <= 0:
            return True
        k_cap = _ceil_div(lam, alpha)
        hh = min(h, n * k_cap)
        q, r = divmod(hh, n)
        m0 = _ceil_div(lam, beta)

        def lows(k):
            return max(0, m0 - k * unit)

        return (n - r) * lows(q) + r * lows(q + 1) <= l

    lo, hi = 0, (h * alpha + l * beta) // n
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if feasible(mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


@lru_cache(maxsize=None)
def _mms_two_value_cached(h, l, alpha, beta, n):
    if alpha == 0:
        return 0
    if beta == 0:
        return alpha * (h // n)
    if isinstance(alpha, int) and isinstance(beta, int) and alpha % beta == 0:
        return _mms_two_value_fast(h, l, alpha, beta, n)
    return _mms_two_value_enumerate(h, l, alpha, beta, n)


def mms_two_value(h: int, l: int, alpha, beta, n: int):
    """Exact maximin share of h goods worth `alpha` plus l goods worth `beta`
    split into n bundles.  Requires alpha >= beta >= 0."""
    if h < 0 or l < 0:
        raise ValueError("counts must be nonnegative")
    if n < 1:
        raise ValueError("need n >= 1")
    if beta < 0 or alpha < beta:
        raise ValueError("need alpha >= beta >= 0")
    return _mms_two_value_cached(h, l, alpha, beta, n)


def mms_report(state: AllocationState, instance: Instance, i: int):
    """(maximin share, clamped ratio) of agent i over the goods seen so far.

    2-value instances use the exact two-value solver on (highs seen, lows
    seen).  Interval instances use the exhaustive oracle while t <= 12 and
    return None beyond that: the oracle is unavailable rather than
    approximated.
    """
    if instance.flavor.value == "two_value":
        h = state.high_seen[i - 1]
        mu = mms_two_value(h, state.t - h, instance.agents[i - 1].alpha,
                           instance.agents[i - 1].beta, state.n)
    else:
        if state.t > MMS_EXHAUSTIVE_MAX_GOODS:
            return None
        prof = state.profile(i)
        mu = mms_exhaustive([value(prof, g, i) for g in state.goods_seen], state.n)
    return mu, _ratio(state.own_value(i), mu)


# ---------------------------------------------------------------------------
# envy graphs
# ---------------------------------------------------------------------------


class CycleError(Exception):
    """Raised when a topological sort is requested on a cyclic envy graph."""

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__(f"envy graph contains cycle {self.cycle}")


@dataclass
class EnvyGraph:
    """Directed edges (i, j) present iff i strictly envies j, with magnitudes."""

    n: int
    edges: dict = field(default_factory=dict)  # (i, j) -> v_i(A_j) - v_i(A_i)

    def out_degree(self, i: int) -> int:
        return sum(1 for (a, _) in self.edges if a == i)

    def successors(self, i: int):
        return [b for (a, b) in self.edges if a == i]


def build_envy_graph(state: AllocationState, instance: Instance) -> EnvyGraph:
    g = EnvyGraph(state.n)
    for i in range(1, state.n + 1):
        mine = state.own_value(i)
        for j in range(1, state.n + 1):
            if i == j:
                continue
            theirs = state.bundle_value(i, j)
            if _gt(theirs, mine):
                g.edges[(i, j)] = theirs - mine
    return g


def topo_sort(g: EnvyGraph):
    """Permutation pi (agent -> 1-based rank) with pi(i) < pi(j) on every edge.

    Deterministic: repeatedly emits the smallest-index vertex of in-degree
    zero.  Raises CycleError with one witness cycle if the graph is cyclic.
    """
    indeg = {v: 0 for v in range(1, g.n + 1)}
    succ = {v: [] for v in range(1, g.n + 1)}
    for (a, b) in g.edges:
        indeg[b] += 1
        succ[a].append(b)
    order = []
    ready = sorted(v for v, d in indeg.items() if d == 0)
    while ready:
        v = ready.pop(0)
        order.append(v)
        changed = False
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
                changed = True
        if changed:
            ready.sort()
    if len(order) < g.n:
        rem = [v for v in range(1, g.n + 1) if indeg[v] > 0]
        raise CycleError(_find_cycle(succ, rem))
    pi = [0] * g.n
    for pos, v in enumerate(order, 1):
        pi[v - 1] = pos
    return pi


def _find_cycle(succ, remaining):
    rem = set(remaining)
    start = min(rem)
    path, seen = [start], {start}
    while True:
        nxt = min(w for w in succ[path[-1]] if w in rem)
        if nxt in seen:
            return path[path.index(nxt):]
        path.append(nxt)
        seen.add(nxt)


# ---------------------------------------------------------------------------
# incremental pairwise tracking and per-step reports
# ---------------------------------------------------------------------------


class PairwiseTracker:
    """Incremental view of every bundle from every agent's perspective.

    Keeps, per (viewer, owner) pair, the bundle value and enough structure to
    answer "value after removing the k best goods" in O(1): high/low counts
    for 2-value instances, the two largest goods otherwise.
    """

    def __init__(self, instance: Instance):
        self.instance = instance
        n = instance.n
        self.n = n
        self.two_value = instance.flavor.value == "two_value"
        self.val = [[0] * (n + 1) for _ in range(n + 1)]      # val[i][j] = v_i(A_j)
        self.seen_total = [0] * (n + 1)                        # v_i(first t goods)
        if self.two_value:
            self.high_cnt = [[0] * (n + 1) for _ in range(n + 1)]
            self.low_cnt = [[0] * (n + 1) for _ in range(n + 1)]
        else:
            self.top2 = [[(0, 0)] * (n + 1) for _ in range(n + 1)]
        self.t = 0

    def observe(self, good, agent: int):
        self.t += 1
        ag = self.instance.agents
        j = agent
        for i in range(1, self.n + 1):
            v = value(ag[i - 1], good, i)
            self.seen_total[i] += v
            self.val[i][j] += v
            if self.two_value:
                if v == ag[i - 1].alpha and ag[i - 1].alpha > 0:
                    self.high_cnt[i][j] += 1
                else:
                    self.low_cnt[i][j] += 1
            else:
                a, b = self.top2[i][j]
                if v >= a:
                    self.top2[i][j] = (v, a)
                elif v > b:
                    self.top2[i][j] = (a, v)

    def removable_value(self, i: int, j: int, k: int):
        full = self.val[i][j]
        if k == 0:
            return full
        if self.two_value:
            prof = self.instance.agents[i - 1]
            hc, lc = self.high_cnt[i][j], self.low_cnt[i][j]
            drop_h = min(k, hc)
            drop_l = min(k - drop_h, lc)
            return full - drop_h * prof.alpha - drop_l * prof.beta
        a, b = self.top2[i][j]
        return full - a - (b if k == 2 else 0)

    def is_efk(self, i: int, j: int, k: int, num=1, den=1) -> bool:
        """Exact check: v_i(A_i) >= (num/den) * (A_j minus its k best)."""
        lhs = den * self.val[i][i]
        rhs = num * self.removable_value(i, j, k)
        if _is_exact(lhs) and _is_exact(rhs):
            return lhs >= rhs
        return lhs >= rhs - REL_TOL * max(1.0, abs(lhs), abs(rhs))

    def envy_graph(self) -> EnvyGraph:
        g = EnvyGraph(self.n)
        for i in range(1, self.n + 1):
            mine = self.val[i][i]
            for j in range(1, self.n + 1):
                if i != j and _gt(self.val[i][j], mine):
                    g.edges[(i, j)] = self.val[i][j] - mine
        return g


REPORT_COLUMNS = ("t", "agent", "ef", "ef1", "ef2", "prop", "mms_value", "mms_ratio",
                  "envy_out_degree")


@dataclass
class FairnessReport:
    """Per-step, per-agent fairness ratios for one time step."""

    t: int
    ef: list
    ef1: list
    ef2: list
    prop: list
    mms_value: list
    mms_ratio: list
    envy_out: list

    def rows(self):
        for i in range(len(self.ef)):
            yield (self.t, i + 1, self.ef[i], self.ef1[i], self.ef2[i], self.prop[i],
                   self.mms_value[i], self.mms_ratio[i], self.envy_out[i])


class ReportBuilder:
    """Streams allocation decisions and emits FairnessReport rows on demand."""

    def __init__(self, instance: Instance):
        self.instance = instance
        self.tracker = PairwiseTracker(instance)
        self._state = AllocationState(instance.agents)

    def observe(self, good, agent: int):
        self.tracker.observe(good, agent)
        self._state.assign(good, agent)

    def report(self) -> FairnessReport:
        n = self.instance.n
        tr = self.tracker
        ef, ef1, ef2, prop, mmsv, mmsr, deg = [], [], [], [], [], [], []
        graph = tr.envy_graph()
        for i in range(1, n + 1):
            mine = tr.val[i][i]
            ratios = {0: [], 1: [], 2: []}
            for j in range(1, n + 1):
                if i == j:
                    continue
                for k in (0, 1, 2):
                    ratios[k].append(_ratio(mine, tr.removable_value(i, j, k)))
            ef.append(min(ratios[0], default=_ONE))
            ef1.append(min(ratios[1], default=_ONE))
            ef2.append(min(ratios[2], default=_ONE))
            prop.append(_ratio(n * mine, tr.seen_total[i]))
            rep = mms_report(self._state, self.instance, i)
            if rep is None:
                mmsv.append(None)
                mmsr.append(None)
            else:
                mmsv.append(rep[0])
                mmsr.append(rep[1])
            deg.append(graph.out_degree(i))
        return FairnessReport(tr.t, ef, ef1, ef2, prop, mmsv, mmsr, deg)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        x = float(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def report_csv_rows(reports) :
    """Serialize FairnessReports to CSV rows (header included)."""
    out = [",".join(REPORT_COLUMNS)]
    for rep in reports:
        for row in rep.rows():
            out.append(",".join(_fmt(v) for v in row))
    return out
