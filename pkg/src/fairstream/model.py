"""Core data model: agent profiles, streamed goods, instances, allocation state.

Every other module consumes these types.  Agents and goods are 1-indexed in
all public interfaces; the arrival index of a good doubles as its time step.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace


class AgentType(enum.IntEnum):
    TYPE0 = 0  # alpha == beta == 0, trivially satisfied
    TYPE1 = 1  # alpha > beta > 0
    TYPE2 = 2  # alpha == beta > 0
    TYPE3 = 3  # alpha > beta == 0


def classify_agent(alpha, beta) -> AgentType:
    """Classify an agent by its (high, low) value pair.

    >>> classify_agent(5, 1)
    <AgentType.TYPE1: 1>
    >>> classify_agent(1, 0)
    <AgentType.TYPE3: 3>
    """
    if beta < 0 or alpha < beta:
        raise ValueError(f"need alpha >= beta >= 0, got alpha={alpha}, beta={beta}")
    if alpha == 0:
        return AgentType.TYPE0
    if beta == 0:
        return AgentType.TYPE3
    if alpha == beta:
        return AgentType.TYPE2
    return AgentType.TYPE1


@dataclass(frozen=True)
class AgentProfile:
    """Per-agent valuation parameters: every good is worth alpha or beta."""

    alpha: float
    beta: float

    def __post_init__(self):
        classify_agent(self.alpha, self.beta)  # validates alpha >= beta >= 0

    @property
    def kind(self) -> AgentType:
        return classify_agent(self.alpha, self.beta)


@dataclass(frozen=True)
class GoodEvent:
    """One arriving good.

    Exactly one of `high` (per-agent high/low flags, 2-value instances) and
    `values` (per-agent reals, interval-restricted instances) is set.
    """

    index: int
    high: tuple | None = None
    values: tuple | None = None

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("good index is 1-based")
        if (self.high is None) == (self.values is None):
            raise ValueError("exactly one of high / values must be given")
        if self.high is not None:
            object.__setattr__(self, "high", tuple(bool(b) for b in self.high))
        else:
            object.__setattr__(self, "values", tuple(self.values))

    @property
    def n(self) -> int:
        return len(self.high if self.high is not None else self.values)


class Flavor(str, enum.Enum):
    TWO_VALUE = "two_value"
    INTERVAL = "interval"


_INTERVAL_SLACK = 1e-9


@dataclass
class Instance:
    """A stream of goods over a fixed agent set, plus the foresight length.

    Foresight ``ell`` means: when good t is being allocated, goods
    t+1 .. t+ell (clipped at the stream end) are readable.
    """

    agents: list
    goods: list
    flavor: Flavor = Flavor.TWO_VALUE
    foresight: int = 0

    def __post_init__(self):
        self.flavor = Flavor(self.flavor)
        self.agents = list(self.agents)
        self.goods = list(self.goods)
        if self.foresight < 0:
            raise ValueError("foresight must be nonnegative")
        if not self.agents:
            raise ValueError("need at least one agent")
        for g in self.goods:
            self.validate_good(g)

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def m(self) -> int:
        return len(self.goods)

    def validate_good(self, g: GoodEvent):
        if g.n != self.n:
            raise ValueError(f"good {g.index}: expected {self.n} entries, got {g.n}")
        if self.flavor is Flavor.TWO_VALUE:
            if g.high is None:
                raise ValueError(f"good {g.index}: 2-value instances carry high/low flags")
        else:
            if g.values is None:
                raise ValueError(f"good {g.index}: interval instances carry real values")
            for i, v in enumerate(g.values, 1):
                a = self.agents[i - 1].alpha
                if v < 1 - _INTERVAL_SLACK or v > a * (1 + _INTERVAL_SLACK):
                    raise ValueError(f"good {g.index}: value {v} for agent {i} outside [1, {a}]")

    def with_foresight(self, ell: int) -> "Instance":
        return replace(self, foresight=ell, agents=list(self.agents), goods=list(self.goods))


def value(profile: AgentProfile, event: GoodEvent, agent: int):
    """Value of one good for `agent` (1-based index into the event's entries)."""
    if not 1 <= agent <= event.n:
        raise IndexError(f"agent {agent} out of range 1..{event.n}")
    if event.high is not None:
        return profile.alpha if event.high[agent - 1] else profile.beta
    return event.values[agent - 1]


def sees_high(profile: AgentProfile, event: GoodEvent, agent: int) -> bool:
    """True iff the good is worth alpha to `agent` (always true when alpha == beta)."""
    if event.high is not None:
        return event.high[agent - 1] or profile.alpha == profile.beta
    return event.values[agent - 1] == profile.alpha


def bundle_value(instance: Instance, agent: int, bundle) :
    """Additive value of a set of good indices from `agent`'s perspective."""
    prof = instance.agents[agent - 1]
    total = 0
    for idx in bundle:
        total += value(prof, instance.goods[idx - 1], agent)
    return total


class AllocationState:
    """Mutable per-run allocation record: bundles plus running tallies.

    `high_seen[i-1]` counts goods worth alpha_i among those seen so far,
    matching the stream prefix regardless of who received them.
    """

    __slots__ = ("n", "t", "bundles", "goods_seen", "goods_received",
                 "high_received", "high_seen", "_agents")

    def __init__(self, agents):
        self._agents = list(agents)
        self.n = len(self._agents)
        self.t = 0
        self.bundles = [[] for _ in range(self.n)]
        self.goods_seen = []
        self.goods_received = [0] * self.n
        self.high_received = [0] * self.n
        self.high_seen = [0] * self.n

    @classmethod
    def fresh(cls, instance: Instance) -> "AllocationState":
        return cls(instance.agents)

    def profile(self, agent: int) -> AgentProfile:
        return self._agents[agent - 1]

    def assign(self, event: GoodEvent, agent: int):
        """Irrevocably add the next arriving good to `agent`'s bundle."""
        if not 1 <= agent <= self.n:
            raise ValueError(f"agent index {agent} out of range 1..{self.n}")
        if event.index != self.t + 1:
            raise ValueError(f"good {event.index} arrived out of order at t={self.t}")
        self.t += 1
        self.goods_seen.append(event)
        self.bundles[agent - 1].append(event.index)
        self.goods_received[agent - 1] += 1
        for i in range(1, self.n + 1):
            if sees_high(self._agents[i - 1], event, i):
                self.high_seen[i - 1] += 1
        if sees_high(self._agents[agent - 1], event, agent):
            self.high_received[agent - 1] += 1

    def bundle_value(self, viewer: int, owner: int):
        prof = self._agents[viewer - 1]
        total = 0
        for idx in self.bundles[owner - 1]:
            total += value(prof, self.goods_seen[idx - 1], viewer)
        return total

    def own_value(self, agent: int):
        return self.bundle_value(agent, agent)

    def seen_value(self, agent: int):
        prof = self._agents[agent - 1]
        return sum(value(prof, g, agent) for g in self.goods_seen)


class OnlineAlgorithm:
    """Behavioral contract for an online allocation rule.

    A fresh run begins with `start`; then `choose` is called once per arriving
    good with the state *before* the assignment and a foresight window of the
    next goods.  Decisions are irrevocable and must be deterministic in the
    (history, window) pair.  `observe` is invoked after every completed
    assignment so stateful rules can keep incremental bookkeeping.
    """

    name = "abstract"
    trace_columns: tuple = ()
    requires_flags = True  # False for rules that never read high/low masks

    def min_foresight(self, n: int) -> int:
        return 0

    def check_config(self, n: int, foresight: int):
        need = self.min_foresight(n)
        if foresight < need:
            raise ValueError(f"{self.name} needs foresight >= {need} for n={n}, got {foresight}")

    def start(self, n: int, agents, foresight: int):
        raise NotImplementedError

    def choose(self, state: AllocationState, good: GoodEvent, window) -> int:
        raise NotImplementedError

    def observe(self, state: AllocationState, good: GoodEvent, agent: int):
        pass

    def snapshot(self) -> dict:
        return {}
