"""Adaptive adversary streams realizing the worst-case lower bounds.

The adversaries play against any deterministic no-lookahead rule and emit
goods one at a time as a function of the rule's past choices ("renaming the
agents" is operationalized as adaptivity: agents are indexed by the order the
rule serves them).  Every branch terminates in a certified witness step where
some agent's fairness ratio drops to the claimed bound, verified with exact
rational arithmetic:

* `ef1_adversary`: two agents, a witness with envy-free-up-to-1 ratio at most
  1/2 within 5 steps;
* `mms_adversary`: n agents with high value 2n^2 + 2n, a witness with maximin
  share ratio at most 1/(2n-1) within 3n-1 steps.

`lows_then_highs` (re-exported from the generators) is the fixed instance
showing that even complete lookahead cannot beat a 1/n maximin floor at every
step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .generators import lows_then_highs
from .metrics import mms_two_value, removable_value
from .model import (AgentProfile, AllocationState, Flavor, GoodEvent, Instance,
                    OnlineAlgorithm)


@dataclass
class Witness:
    step: int
    agent: int
    metric: str
    ratio: Fraction
    bound: Fraction


@dataclass
class AdversaryTrace:
    kind: str
    instance: Instance
    choices: list
    reports: list  # per step: tuple of per-agent ratios (exact Fractions)
    witness: Witness
    notes: dict = field(default_factory=dict)


class _AdaptiveRun:
    """Owns one algorithm run; emits goods and scans for a witness."""

    def __init__(self, kind, alg: OnlineAlgorithm, agents, bound: Fraction, metric: str):
        if alg.min_foresight(len(agents)) != 0:
            raise ValueError(
                f"{alg.name} requires lookahead; the adversarial bounds do not apply")
        self.kind = kind
        self.alg = alg
        self.bound = bound
        self.metric = metric
        self.instance = Instance(agents=list(agents), goods=[], flavor=Flavor.TWO_VALUE,
                                 foresight=0)
        self.n = self.instance.n
        alg.check_config(self.n, 0)
        alg.start(self.n, self.instance.agents, 0)
        self.state = AllocationState.fresh(self.instance)
        self.choices = []
        self.reports = []
        self.witness = None

    def emit(self, mask) -> int:
        good = GoodEvent(self.state.t + 1, high=mask)
        self.instance.goods.append(good)
        agent = self.alg.choose(self.state, good, [])
        if not 1 <= agent <= self.n:
            raise RuntimeError(f"{self.alg.name} returned invalid agent {agent!r}")
        self.state.assign(good, agent)
        self.alg.observe(self.state, good, agent)
        self.choices.append(agent)
        ratios = self._ratios()
        self.reports.append(ratios)
        if self.witness is None:
            for i, r in enumerate(ratios, 1):
                if r <= self.bound:
                    self.witness = Witness(self.state.t, i, self.metric, r, self.bound)
                    break
        return agent

    def _ratios(self):
        st = self.state
        out = []
        for i in range(1, self.n + 1):
            if self.metric == "mms":
                prof = st.profile(i)
                h = st.high_seen[i - 1]
                mu = mms_two_value(h, st.t - h, prof.alpha, prof.beta, self.n)
                out.append(Fraction(1) if mu == 0 else min(Fraction(1),
                                                           Fraction(st.own_value(i), mu)))
            else:
                worst = Fraction(1)
                for j in range(1, self.n + 1):
                    if j == i:
                        continue
                    den = removable_value(st, i, j, 1)
                    if den > 0:
                        worst = min(worst, min(Fraction(1), Fraction(st.own_value(i), den)))
                out.append(worst)
        return tuple(out)

    def finish(self, **notes) -> AdversaryTrace:
        if self.witness is None:
            raise RuntimeError(f"{self.kind}: no witness found -- adversary logic is broken")
        assert self.witness.ratio <= self.bound
        return AdversaryTrace(self.kind, self.instance, self.choices, self.reports,
                              self.witness, notes)


def ef1_adversary(alg: OnlineAlgorithm) -> AdversaryTrace:
    """Defeat any deterministic no-lookahead rule on two (5, 1)-agents: some
    agent's envy-free-up-to-1 ratio falls to 1/2 or below within 5 steps."""
    agents = [AgentProfile(5, 1), AgentProfile(5, 1)]
    run = _AdaptiveRun("ef1-2", alg, agents, Fraction(1, 2), "ef1")

    first = run.emit((False, False))                       # equally low opener
    if run.witness:
        return run.finish()
    a, b = first, 3 - first

    def only(agent):
        return tuple(i + 1 == agent for i in range(2))

    run.emit(only(a))                                      # high only for the opener's owner
    if run.witness:
        return run.finish()
    third = run.emit((False, False))
    if run.witness:
        return run.finish()
    if third == a:
        run.emit((True, True))                             # contested universal high
    else:
        run.emit(only(b))
        if run.witness:
            return run.finish()
        run.emit((True, True))
    trace = run.finish(roles={"first": a})
    assert trace.witness.step <= 5
    return trace


def mms_adversary(alg: OnlineAlgorithm, n: int) -> AdversaryTrace:
    """Defeat any deterministic no-lookahead rule on n agents with values
    (2n^2 + 2n, 1): some agent's maximin ratio falls to 1/(2n-1) or below
    within 3n-1 steps.

    Stream structure: a staircase whose goods are low for everyone not yet
    served (forcing one good per agent), n-1 universal lows, then either
    universal highs (when the last-served agent missed the lows) or per-agent
    highs, switching to universal highs the moment the rule deviates.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    alpha = 2 * n * n + 2 * n
    agents = [AgentProfile(alpha, 1) for _ in range(n)]
    run = _AdaptiveRun("mms", alg, agents, Fraction(1, 2 * n - 1), "mms")
    all_low = (False,) * n
    all_high = (True,) * n

    served = []
    served_set = set()
    for _ in range(n):                                    # staircase phase
        mask = tuple(i + 1 in served_set for i in range(n))
        a = run.emit(mask)
        if run.witness:
            return run.finish(case="early")
        if a in served_set:
            while run.state.t < n:                        # double serve: starve someone
                run.emit(all_low)
                if run.witness:
                    return run.finish(case="double-serve")
            return run.finish(case="double-serve")
        served.append(a)
        served_set.add(a)

    got_filler = set()
    for _ in range(n - 1):                                # universal lows
        got_filler.add(run.emit(all_low))
        if run.witness:
            return run.finish(case="early")
    skipped_ranks = [r for r in range(1, n + 1) if served[r - 1] not in got_filler]
    k = max(skipped_ranks)

    if k == n:                                            # starve the last-served agent
        for _ in range(n - 1):
            run.emit(all_high)
            if run.witness:
                return run.finish(case="last-rank", k=k)
        raise RuntimeError("universal highs exhausted without a witness")

    for l in range(1, n - k + 1):                         # per-agent highs, high ranks first
        target = served[n - l]
        a = run.emit(tuple(i + 1 == target for i in range(n)))
        if run.witness:
            return run.finish(case="middle-rank", k=k)
        if a != target:                                   # deviation: punish with universals
            for _ in range(n - l):
                run.emit(all_high)
                if run.witness:
                    return run.finish(case="deviation", k=k, deviated_at=l)
            raise RuntimeError("punish branch exhausted without a witness")
    for _ in range(k - 1):                                # finish starving rank k
        run.emit(all_high)
        if run.witness:
            return run.finish(case="middle-rank", k=k)
    raise RuntimeError("middle-rank branch exhausted without a witness")


def worst_step_share_ratio(alg: OnlineAlgorithm, instance: Instance) -> Fraction:
    """Run `alg` over a 2-value instance and return the minimum over steps and
    agents of the exact maximin-share ratio."""
    from .driver import run_online

    trace = run_online(alg, instance)
    state = AllocationState.fresh(instance)
    worst = Fraction(1)
    for step in trace.steps:
        state.assign(instance.goods[step.t - 1], step.agent)
        for i in range(1, instance.n + 1):
            prof = instance.agents[i - 1]
            h = state.high_seen[i - 1]
            mu = mms_two_value(h, state.t - h, prof.alpha, prof.beta, instance.n)
            if mu > 0:
                worst = min(worst, min(Fraction(1), Fraction(state.own_value(i), mu)))
    return worst


def sqrt_gap(n: int):
    """Compare the 1/(2n-1) floor with 1/sqrt(2*alpha) for alpha = 2n^2+2n.

    Returns (1/(2n-1), 1/sqrt(2*alpha), gap).  The first always dominates and
    the gap vanishes as n grows, which rephrases the maximin impossibility in
    terms of the largest high-to-low value ratio."""
    alpha = 2 * n * n + 2 * n
    exact = Fraction(1, 2 * n - 1)
    loose = 1.0 / math.sqrt(2 * alpha)
    return exact, loose, float(exact) - loose


def check_sqrt_gap(ns=(10, 100, 1000), tail=1e-3) -> bool:
    """Assert the inequality chain 1/(2n-1) >= 1/sqrt(2*alpha) with a gap that
    shrinks monotonically below `tail` along `ns`."""
    gaps = []
    for n in ns:
        exact, loose, gap = sqrt_gap(n)
        if float(exact) < loose:
            return False
        gaps.append(gap)
    if any(g2 >= g1 for g1, g2 in zip(gaps, gaps[1:])):
        return False
    return gaps[-1] < tail


__all__ = ["AdversaryTrace", "Witness", "ef1_adversary", "mms_adversary",
           "lows_then_highs", "worst_step_share_ratio", "sqrt_gap", "check_sqrt_gap"]
