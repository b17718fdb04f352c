"""Lookahead matching rules for personalized 2-value streams.

Two rules live here:

* `NaiveMatching` (two agents, one-step lookahead): pairs of consecutive
  goods are assigned from a literal 16-entry pattern table; the two
  *contested* patterns (one universally high good, one universally low) are
  resolved by an alternating counter so the disadvantaged side flips.
  The allocation is exactly envy-free-up-to-1 at every even step and
  envy-free-up-to-2 always.

* `PriorityMatching` (n agents, (n-1)-step lookahead): every n steps the
  current envy graph is topologically sorted and the next n goods are matched
  to agents by a maximum-weight matching under rank-weighted auxiliary
  weights (doubled on high-valued goods).  Bundle sizes stay balanced, the
  envy graph stays acyclic at round boundaries with per-edge envy at most
  alpha_i - beta_i, and the allocation is envy-free-up-to-1 at every multiple
  of n and envy-free-up-to-2 always.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .assignment import max_weight_assignment
from .metrics import (CycleError, PairwiseTracker, build_envy_graph, mms_two_value,
                      topo_sort, _is_exact, REL_TOL)
from .model import AllocationState, Flavor, GoodEvent, Instance, OnlineAlgorithm, sees_high

# ---------------------------------------------------------------------------
# the two-agent pattern table
# ---------------------------------------------------------------------------

CONTESTED_I = "contested-I"    # current good low for both, next high for both
CONTESTED_II = "contested-II"  # current good high for both, next low for both

# key: (v1(g) high?, v1(g') high?, v2(g) high?, v2(g') high?)
# value: the good agent 1 receives ("g" or "g'"), or a contested marker.
PATTERN_TABLE = {
    (False, False, False, False): "g",
    (False, True, False, False): "g'",
    (True, False, False, False): "g",
    (True, True, False, False): "g",
    (False, False, False, True): "g",
    (False, True, False, True): CONTESTED_I,
    (True, False, False, True): "g",
    (True, True, False, True): "g",
    (False, False, True, False): "g'",
    (False, True, True, False): "g'",
    (True, False, True, False): CONTESTED_II,
    (True, True, True, False): "g'",
    (False, False, True, True): "g'",
    (False, True, True, True): "g'",
    (True, False, True, True): "g",
    (True, True, True, True): "g",
}


def pattern_table_json() -> list:
    """The pattern table as audit-friendly JSON rows (one per 2x2 pattern)."""
    rows = []
    for key in sorted(PATTERN_TABLE, key=lambda k: tuple(int(b) for b in k)):
        entry = PATTERN_TABLE[key]
        rows.append({
            "agent1": ["high" if key[0] else "low", "high" if key[1] else "low"],
            "agent2": ["high" if key[2] else "low", "high" if key[3] else "low"],
            "assignment": entry if entry in (CONTESTED_I, CONTESTED_II)
            else {"agent1": entry, "agent2": "g'" if entry == "g" else "g"},
        })
    return rows


@dataclass(frozen=True)
class Commitment:
    """A previewed good pinned to a recipient; honored exactly as committed."""

    good: int
    agent: int


def naive_step(ctr: int, commitment, t: int, g: GoodEvent, window):
    """Functional core of the two-agent rule.

    Returns (recipient, new ctr, new outstanding commitment).  On odd steps
    the pattern of (g, next good) decides both goods at once; on even steps
    the outstanding commitment is followed.  An unpaired final good goes to
    the currently disadvantaged agent (agent 1 when ctr is 0).
    """
    if t % 2 == 0:
        if commitment is None or commitment.good != g.index:
            raise RuntimeError(f"no commitment for good {g.index} at even step {t}")
        return commitment.agent, ctr, None
    if not window:
        return (1 if ctr == 0 else 2), ctr, None
    gp = window[0]
    key = (g.high[0], gp.high[0], g.high[1], gp.high[1])
    entry = PATTERN_TABLE[key]
    if entry in (CONTESTED_I, CONTESTED_II):
        ctr = (ctr + 1) % 2
        j = 2 - ctr
        other = 3 - j
        if entry == CONTESTED_I:  # the high good is the previewed one
            return other, ctr, Commitment(gp.index, j)
        return j, ctr, Commitment(gp.index, other)
    if entry == "g":
        return 1, ctr, Commitment(gp.index, 2)
    return 2, ctr, Commitment(gp.index, 1)


class NaiveMatching(OnlineAlgorithm):
    """Two agents, lookahead one: envy-free-up-to-1 at every even step."""

    name = "naive-matching"
    trace_columns = ("round", "pi", "committed")

    def min_foresight(self, n):
        return 1

    def check_config(self, n, foresight):
        if n != 2:
            raise ValueError("naive-matching requires exactly 2 agents")
        super().check_config(n, foresight)

    def start(self, n, agents, foresight):
        self.ctr = 0
        self.pending = None
        self._t = 0

    def choose(self, state, good, window):
        self._t = state.t + 1
        agent, self.ctr, self.pending = naive_step(
            self.ctr, self.pending, self._t, good, window)
        return agent

    def snapshot(self):
        committed = f"{self.pending.good}:{self.pending.agent}" if self.pending else ""
        return {"round": (self._t + 1) // 2, "pi": "", "committed": committed,
                "ctr": self.ctr}


# ---------------------------------------------------------------------------
# priority matching with lookahead n-1
# ---------------------------------------------------------------------------


@dataclass
class RoundPlan:
    """One round's matching: each of the <= n goods pinned to an agent."""

    round_index: int
    pi: tuple
    assignment: dict  # good index -> agent

    def agent_for(self, good_index: int) -> int:
        if good_index not in self.assignment:
            raise RuntimeError(f"good {good_index} missing from round plan")
        return self.assignment[good_index]


def aux_weight_matrix(pi, agents, goods):
    """Exact rational auxiliary weights: the rank-i agent weighs a good at
    2*((2n+1)/(2n))^(n-i) when high-valued for it, half that otherwise."""
    n = len(agents)
    base = Fraction(2 * n + 1, 2 * n)
    rows = []
    for a in range(1, n + 1):
        factor = base ** (n - pi[a - 1])
        rows.append([2 * factor if sees_high(agents[a - 1], g, a) else factor
                     for g in goods])
    return rows


def _scaled_weight_rows(pi, agents, goods):
    """Integer-scaled equivalents of the rational weights (same optima)."""
    n = len(agents)
    rows = []
    for a in range(1, n + 1):
        i = pi[a - 1]
        factor = (2 * n + 1) ** (n - i) * (2 * n) ** (i - 1)
        rows.append([2 * factor if sees_high(agents[a - 1], g, a) else factor
                     for g in goods])
    return rows


def plan_round(graph, agents, goods, round_index: int) -> RoundPlan:
    """Topologically sort the envy graph, weight, and match one round of goods."""
    try:
        pi = topo_sort(graph)
    except CycleError as e:
        raise RuntimeError(f"cyclic envy graph at a round boundary: {e.cycle}") from e
    weights = _scaled_weight_rows(pi, agents, goods)
    cols = max_weight_assignment(weights, len(goods))
    assignment = {}
    for a, col in enumerate(cols, 1):
        if col is not None:
            assignment[goods[col].index] = a
    return RoundPlan(round_index, tuple(pi), assignment)


def priority_round_plan(state: AllocationState, instance: Instance, goods) -> RoundPlan:
    """Round plan from an explicit allocation state (current + window goods)."""
    if state.t % instance.n != 0:
        raise ValueError("round plans are built when t = 1 mod n")
    graph = build_envy_graph(state, instance)
    return plan_round(graph, instance.agents, list(goods), state.t // instance.n + 1)


class PriorityMatching(OnlineAlgorithm):
    """n agents, lookahead n-1: envy-free-up-to-1 at every multiple of n."""

    name = "priority-matching"
    trace_columns = ("round", "pi", "committed")

    def min_foresight(self, n):
        return n - 1

    def start(self, n, agents, foresight):
        self.n = n
        self.agents = list(agents)
        self.plan = None
        self.tracker = PairwiseTracker(Instance(agents=list(agents), goods=[],
                                                flavor=Flavor.TWO_VALUE))

    def choose(self, state, good, window):
        t = state.t + 1
        if (t - 1) % self.n == 0:
            goods = [good] + list(window[: self.n - 1])
            self.plan = plan_round(self.tracker.envy_graph(), self.agents, goods,
                                   (t - 1) // self.n + 1)
        return self.plan.agent_for(good.index)

    def observe(self, state, good, agent):
        self.tracker.observe(good, agent)

    def snapshot(self):
        plan = self.plan
        committed = ";".join(f"{g}:{a}" for g, a in sorted(plan.assignment.items()))
        return {"round": plan.round_index, "pi": plan.pi, "committed": committed}


def priority_step(state: AllocationState, good: GoodEvent, window, plan: RoundPlan,
                  instance: Instance):
    """One step of priority matching from explicit state: returns (agent, plan),
    recomputing the plan at round boundaries."""
    if state.t % instance.n == 0:
        plan = priority_round_plan(state, instance, [good] + list(window[: instance.n - 1]))
    if plan is None:
        raise RuntimeError("mid-round step without a plan")
    return plan.agent_for(good.index), plan


# ---------------------------------------------------------------------------
# runtime verification
# ---------------------------------------------------------------------------


@dataclass
class Violation:
    check: str
    t: int
    detail: str


class NaiveMatchingAuditor:
    """Exact streaming checks for the two-agent rule: envy-free-up-to-2 at
    every step, envy-free-up-to-1 plus the directional envy invariant at even
    steps (when ctr is 0 only agent 1 may envy, by at most alpha_1 - beta_1)."""

    def __init__(self, instance: Instance):
        self.instance = instance
        self.tracker = PairwiseTracker(instance)
        self.violations = []

    def observe(self, state, good, agent, extras):
        tr = self.tracker
        tr.observe(good, agent)
        t = tr.t
        for i, j in ((1, 2), (2, 1)):
            if not tr.is_efk(i, j, 2):
                self.violations.append(Violation("ef2", t, f"agent {i} vs {j}"))
        if t % 2 == 0:
            if state.goods_received[0] != t // 2 or state.goods_received[1] != t // 2:
                self.violations.append(Violation("balance", t, "unequal bundle sizes"))
            for i, j in ((1, 2), (2, 1)):
                if not tr.is_efk(i, j, 1):
                    self.violations.append(Violation("ef1-even", t, f"agent {i} vs {j}"))
            ctr = extras.get("ctr")
            if ctr is not None:
                favored = 2 if ctr == 0 else 1  # the agent that must not envy
                other = 3 - favored
                if tr.val[favored][favored] < tr.val[favored][other]:
                    self.violations.append(
                        Violation("ctr-direction", t, f"agent {favored} envies"))
                prof = self.instance.agents[other - 1]
                gap = tr.val[other][favored] - tr.val[other][other]
                if gap > prof.alpha - prof.beta:
                    self.violations.append(
                        Violation("ctr-envy-bound", t, f"envy {gap} exceeds alpha-beta"))

    def finish(self):
        return self.violations


def check_alternation_guarantees(trace):
    """Audit a naive-matching trace; returns violations."""
    from .driver import replay_states

    aud = NaiveMatchingAuditor(trace.instance)
    for state, step in replay_states(trace):
        aud.observe(state, trace.instance.goods[step.t - 1], step.agent, step.extras)
    return aud.finish()


class PriorityMatchingAuditor:
    """Exact streaming checks for priority matching.

    Per step: envy-free-up-to-2.  At every full round boundary t = kn:
    envy-free-up-to-1, balanced bundles, acyclic envy graph with every edge's
    envy at most alpha_i - beta_i, and an n*v >= maximin-share check.  Tracks
    the half-envy-free-up-to-1 recovery clause: once it fails at some t0, it
    must hold at every step from the end of that round on.  With
    `exchange=True` also verifies that swapping the two round goods across any
    residual envy edge cannot increase the matched auxiliary weight.
    """

    def __init__(self, instance: Instance, exchange=False):
        self.instance = instance
        self.n = instance.n
        self.tracker = PairwiseTracker(instance)
        self.violations = []
        self.half_ef1_failures = []
        self.recovery_deadline = None
        self.exchange = exchange
        self._round_pi = None
        self._round_recipient = {}  # agent -> good received this round

    def observe(self, state, good, agent, extras):
        tr = self.tracker
        n = self.n
        tr.observe(good, agent)
        t = tr.t
        if (t - 1) % n == 0:
            self._round_pi = extras.get("pi")
            self._round_recipient = {}
        self._round_recipient[agent] = good

        half_ok = True
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                if not tr.is_efk(i, j, 2):
                    self.violations.append(Violation("ef2", t, f"agent {i} vs {j}"))
                if not tr.is_efk(i, j, 1, 1, 2):
                    half_ok = False
        if not half_ok:
            self.half_ef1_failures.append(t)
            if self.recovery_deadline is None:
                self.recovery_deadline = -(-t // n) * n
            elif t >= self.recovery_deadline:
                self.violations.append(
                    Violation("half-ef1-recovery", t, "failed after recovery deadline"))

        if t % n == 0:
            self._boundary_checks(state, t)

    def _boundary_checks(self, state, t):
        tr = self.tracker
        n = self.n
        sizes = set(state.goods_received)
        if len(sizes) != 1:
            self.violations.append(Violation("balance", t, f"sizes {state.goods_received}"))
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i != j and not tr.is_efk(i, j, 1):
                    self.violations.append(Violation("ef1-round", t, f"agent {i} vs {j}"))
        graph = tr.envy_graph()
        try:
            topo_sort(graph)
        except CycleError as e:
            self.violations.append(Violation("acyclic", t, f"cycle {e.cycle}"))
        for (i, j), gap in graph.edges.items():
            prof = self.instance.agents[i - 1]
            bound = prof.alpha - prof.beta
            ok = gap <= bound if _is_exact(gap) and _is_exact(bound) else \
                gap <= bound + REL_TOL * max(1.0, abs(bound))
            if not ok:
                self.violations.append(
                    Violation("edge-envy", t, f"({i},{j}) envy {gap} > {bound}"))
        for i in range(1, n + 1):
            prof = self.instance.agents[i - 1]
            hs = state.high_seen[i - 1]
            mu = mms_two_value(hs, t - hs, prof.alpha, prof.beta, n)
            if n * tr.val[i][i] < mu:
                self.violations.append(Violation("mms-round", t, f"agent {i}: mu={mu}"))
        if self.exchange and self._round_pi:
            self._exchange_checks(graph, t)

    def _exchange_checks(self, graph, t):
        agents = self.instance.agents
        pi = self._round_pi
        n = self.n
        for (i, j) in graph.edges:
            gi = self._round_recipient.get(i)
            gj = self._round_recipient.get(j)
            if gi is None or gj is None:
                continue
            def w(a, g):
                rank = pi[a - 1]
                base = (2 * n + 1) ** (n - rank) * (2 * n) ** (rank - 1)
                return 2 * base if sees_high(agents[a - 1], g, a) else base
            if w(i, gj) + w(j, gi) > w(i, gi) + w(j, gj):
                self.violations.append(
                    Violation("exchange", t, f"swapping goods of {i},{j} gains weight"))

    def finish(self):
        return self.violations


def check_round_guarantees(trace, exchange=False):
    """Audit a priority-matching trace; returns violations."""
    from .driver import replay_states

    aud = PriorityMatchingAuditor(trace.instance, exchange=exchange)
    for state, step in replay_states(trace):
        aud.observe(state, trace.instance.goods[step.t - 1], step.agent, step.extras)
    return aud.finish()


# ---------------------------------------------------------------------------
# long-run floors after value accumulates
# ---------------------------------------------------------------------------


@dataclass
class AsymptoticsResult:
    lam: int
    t_star: int | None
    violations: list


def check_asymptotics(trace, lam: int, naive=False) -> AsymptoticsResult:
    """Once every agent i holds value at least lam * alpha_i (step t*), the
    allocation must stay lam/(lam+2)-envy-free, lam/(lam+1)-envy-free-up-to-1,
    and lam/(lam+2)-proportional from t* on (lam/(lam+1)-proportional for the
    two-agent rule)."""
    inst = trace.instance
    n = inst.n
    tr = PairwiseTracker(inst)
    t_star = None
    prop_den = lam + 1 if naive else lam + 2
    violations = []
    for step in trace.steps:
        good = inst.goods[step.t - 1]
        tr.observe(good, step.agent)
        if t_star is None:
            if all(tr.val[i][i] >= lam * inst.agents[i - 1].alpha
                   for i in range(1, n + 1)):
                t_star = tr.t
        if t_star is None:
            continue
        t = tr.t
        for i in range(1, n + 1):
            own = tr.val[i][i]
            if prop_den * n * own < lam * tr.seen_total[i]:
                violations.append(Violation("prop-floor", t, f"agent {i}"))
            for j in range(1, n + 1):
                if i == j:
                    continue
                if (lam + 2) * own < lam * tr.val[i][j]:
                    violations.append(Violation("ef-floor", t, f"agent {i} vs {j}"))
                if not tr.is_efk(i, j, 1, lam, lam + 1):
                    violations.append(Violation("ef1-floor", t, f"agent {i} vs {j}"))
    return AsymptoticsResult(lam, t_star, violations)
