"""Deferred-priority allocation for personalized 2-value streams.

The rule keeps two per-agent priority counters: H[i] counts how many more
high-valued goods agent i can afford to lose before the high-frequency
guarantee breaks, L[i] orders agents for goods nobody active values highly.
Goods go to the active agent with the smallest relevant counter, the winner's
counter is pushed far back, and the process runs in phases so that everyone
receives something regularly.

Guarantees maintained (and audited here at runtime):

* each agent gets exactly one of the first n goods;
* at every step end, agent i holds at least floor(h_i / (3n-2)) goods it
  values highly, where h_i counts high-valued goods i has seen, and at least
  one by the time h_i reaches n;
* from step n on, agent i holds at least floor((t-n)/(2n-1)) + 1 goods;
* the sorted H vector never has more than k entries at or below k;
* per-type share floors: 1/2 for flat-value agents, 1/3 for agents with zero
  low value, 1/(2n-1) otherwise, plus a 1/4 proportionality floor once a
  two-distinct-value agent holds a high good.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .metrics import mms_two_value
from .model import AgentType, AllocationState, GoodEvent, Instance, OnlineAlgorithm


@dataclass
class PriorityState:
    """Counters of the deferred-priority rule; one owner per stream."""

    n: int
    H: list = field(default_factory=list)
    L: list = field(default_factory=list)
    chi: list = field(default_factory=list)
    phase: int = 0
    low: int = 0
    high: int = 0
    t: int = 0

    @classmethod
    def fresh(cls, n: int) -> "PriorityState":
        return cls(n=n, H=[n] * n, L=[2 * n - 1] * n, chi=[0] * n)


def level_sets(H, n: int):
    """Map level -> agents whose H entry sits at that level (levels 0..n)."""
    out = {k: [] for k in range(n + 1)}
    for i, h in enumerate(H, 1):
        if 0 <= h <= n:
            out[h].append(i)
    return out


def check_level_sets(ps: PriorityState) -> bool:
    """True iff at most k agents have H at or below k, for every 0 <= k <= n."""
    ordered = sorted(ps.H)
    return all(h >= pos for pos, h in enumerate(ordered, 1))


def dp_step(ps: PriorityState, g: GoodEvent, agents) -> int:
    """Allocate one arriving good, mutating `ps`.  Returns the recipient.

    An agent is *active* while chi is 0; inactive agents receive nothing for
    the rest of the phase.  Ties in both argmins break lexicographically.
    A flat-value agent (alpha == beta) sees every good as high-valued.
    """
    n = ps.n
    H, L, chi = ps.H, ps.L, ps.chi
    ps.t += 1
    mask = g.high
    hi_members = []
    lo_members = []
    for i in range(n):
        prof = agents[i]
        flat = prof.alpha == prof.beta
        is_high = mask[i] or flat
        if is_high and prof.alpha > 0:
            H[i] -= 1
        else:
            L[i] -= 1
        if not chi[i]:
            if is_high:
                hi_members.append(i)
            if flat or not mask[i]:
                lo_members.append(i)

    if hi_members:
        ps.high += 1
        j = min(hi_members, key=lambda i: (H[i], i))
        H[j] += 3 * n - 2
        chi[j] = 1
    else:
        if not lo_members:
            raise RuntimeError("no eligible recipient: phase accounting is broken")
        ps.low += 1
        j = min(lo_members, key=lambda i: (L[i], i))
        L[j] = 2 * n + ps.t
        if ps.phase == 0:
            chi[j] = 1

    if (ps.phase == 0 and ps.low + ps.high == n) or \
       (ps.phase > 0 and max(ps.low, ps.high) == n):
        ps.phase += 1
        ps.low = 0
        ps.high = 0
        for i in range(n):
            L[i] = 2 * n - 1
            chi[i] = 0  # activity is per-phase

    return j + 1


class DeferredPriority(OnlineAlgorithm):
    """Online rule with a 1/(2n-1) maximin-share floor at every step."""

    name = "deferred-priority"
    trace_columns = ("phase", "H", "L", "chi")

    def start(self, n, agents, foresight):
        self.agents = list(agents)
        self.ps = PriorityState.fresh(n)

    def choose(self, state, good, window):
        return dp_step(self.ps, good, self.agents)

    def snapshot(self):
        ps = self.ps
        return {"phase": ps.phase, "H": tuple(ps.H), "L": tuple(ps.L),
                "chi": tuple(ps.chi)}


@dataclass
class Violation:
    check: str
    t: int
    agent: int | None
    detail: str


def _is_high_for(prof, good, i0: int) -> bool:
    return good.high[i0] or prof.alpha == prof.beta


class DeferredPriorityAuditor:
    """Streaming verifier for the structural and share guarantees above.

    Feed it every completed step; violations accumulate in `.violations`.
    `share_bounds=True` additionally checks the per-type maximin and
    proportionality floors (exact integer arithmetic on integer instances);
    `strict=True` adds the inactivity and low-good rotation invariants.
    """

    def __init__(self, instance: Instance, share_bounds=False, strict=False):
        self.instance = instance
        n = instance.n
        self.n = n
        self.share_bounds = share_bounds
        self.strict = strict
        self.violations = []
        self._t0_passed = [False] * n
        self._prev_chi = (0,) * n
        self._prev_phase = 0
        self._phase_steps = 0
        self._last_low = [None] * n  # step of the last low receipt this phase
        self._last_state = None
        if share_bounds:
            self._kinds = [p.kind for p in instance.agents]
            self._seen_val = [0] * n
        self._m = instance.m

    def _fail(self, check, t, agent, detail):
        self.violations.append(Violation(check, t, agent, detail))

    def observe(self, state: AllocationState, good: GoodEvent, agent: int, extras: dict):
        n = self.n
        t = state.t
        H = extras["H"]
        phase = extras["phase"]
        self._last_state = state
        transitioned = phase != self._prev_phase

        if transitioned:
            length = self._phase_steps + 1
            if self._prev_phase == 0:
                if length != min(n, self._m):
                    self._fail("phase-length", t, None, f"phase 0 lasted {length} steps")
            elif length > 2 * n - 1:
                self._fail("phase-length", t, None,
                           f"phase {self._prev_phase} lasted {length} steps")
            self._phase_steps = 0
        else:
            self._phase_steps += 1

        # parts 1-3 of the structural guarantee
        if t == n:
            for i in range(n):
                if state.goods_received[i] != 1:
                    self._fail("one-of-first-n", t, i + 1,
                               f"holds {state.goods_received[i]} goods at t=n")
        k_high = 3 * n - 2
        k_all = 2 * n - 1
        for i in range(n):
            hs = state.high_seen[i]
            hr = state.high_received[i]
            if hr < hs // k_high:
                self._fail("high-frequency", t, i + 1, f"{hr} high goods held, {hs} seen")
            if hs >= n and not self._t0_passed[i]:
                self._t0_passed[i] = True
                if hr < 1:
                    self._fail("first-high-by-n-seen", t, i + 1,
                               f"no high good despite {hs} seen")
            if t >= n and state.goods_received[i] < (t - n) // k_all + 1:
                self._fail("overall-frequency", t, i + 1,
                           f"holds {state.goods_received[i]} goods at t={t}")

        # H-positivity and the level-set condition on the end-of-step H vector
        ordered = sorted(H)
        if ordered[0] < 1:
            self._fail("H-positive", t, None, f"H = {list(H)}")
        for pos, h in enumerate(ordered, 1):
            if h < pos:
                self._fail("level-sets", t, None, f"sorted H = {ordered}")
                break

        if self.strict:
            self._check_rotation(state, good, agent, t, transitioned)
        if self.share_bounds:
            self._check_shares(state, good, t)

        self._prev_chi = extras["chi"]
        self._prev_phase = phase

    def _check_rotation(self, state, good, agent, t, transitioned):
        if self._prev_chi[agent - 1]:
            self._fail("inactive-receipt", t, agent, "recipient was inactive")
        prof = self.instance.agents[agent - 1]
        if not _is_high_for(prof, good, agent - 1):
            prev = self._last_low[agent - 1]
            if prev is not None:
                for j in range(self.n):
                    if j == agent - 1:
                        continue
                    ok = self._prev_chi[j] or (
                        self._last_low[j] is not None and self._last_low[j] > prev)
                    if not ok:
                        self._fail("low-rotation", t, agent,
                                   f"agent {j + 1} neither inactive nor served in between")
            self._last_low[agent - 1] = t
        if transitioned:
            self._last_low = [None] * self.n

    def _check_shares(self, state, good, t):
        n = self.n
        for i in range(n):
            prof = self.instance.agents[i]
            self._seen_val[i] += prof.alpha if _is_high_for(prof, good, i) else prof.beta
            kind = self._kinds[i]
            hr = state.high_received[i]
            gr = state.goods_received[i]
            own = hr * prof.alpha + (gr - hr) * prof.beta
            if kind == AgentType.TYPE2:
                mu = prof.alpha * (t // n)
                if 2 * own < mu:
                    self._fail("mms-type2", t, i + 1, f"v={own}, mu={mu}")
            elif kind == AgentType.TYPE3:
                mu = prof.alpha * (state.high_seen[i] // n)
                if 3 * own < mu:
                    self._fail("mms-type3", t, i + 1, f"v={own}, mu={mu}")
            elif kind == AgentType.TYPE1:
                hs = state.high_seen[i]
                mu = mms_two_value(hs, t - hs, prof.alpha, prof.beta, n)
                if (2 * n - 1) * own < mu:
                    self._fail("mms-type1", t, i + 1, f"v={own}, mu={mu}")
                if hr >= 1 and 4 * n * own < self._seen_val[i]:
                    self._fail("prop-quarter", t, i + 1,
                               f"v={own}, seen={self._seen_val[i]}")

    def finish(self):
        if self._m < self.n and self._last_state is not None:
            for i in range(self.n):
                if self._last_state.goods_received[i] > 1:
                    self._fail("one-of-first-n", self._last_state.t, i + 1,
                               "holds more than one good on a short stream")
        return self.violations


def _audit_trace(trace, **kwargs):
    from .driver import replay_states

    aud = DeferredPriorityAuditor(trace.instance, **kwargs)
    for state, step in replay_states(trace):
        aud.observe(state, trace.instance.goods[step.t - 1], step.agent, step.extras)
    return aud.finish()


def check_structural_guarantees(trace):
    """Audit the one-of-first-n, high-frequency and overall-frequency parts
    plus the phase-length bounds over a full or prefix trace."""
    return [v for v in _audit_trace(trace)
            if v.check in ("one-of-first-n", "high-frequency", "first-high-by-n-seen",
                           "overall-frequency", "phase-length", "H-positive")]


def check_level_set_condition(trace):
    """Audit the sorted-H level-set condition at every step end."""
    return [v for v in _audit_trace(trace) if v.check == "level-sets"]


def check_share_bounds(trace):
    """Audit the per-type maximin floors (1/2, 1/3, 1/(2n-1)) and the 1/4
    proportionality floor for high-holding two-value agents, exactly."""
    return [v for v in _audit_trace(trace, share_bounds=True)
            if v.check.startswith(("mms-", "prop-"))]
