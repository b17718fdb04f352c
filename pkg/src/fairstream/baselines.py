"""Baseline allocation rules: round-robin and a greedy high-value rule.

Neither carries a worst-case guarantee; they serve as comparison points and
as fodder for the adversaries.  Both read only high/low flags, so scaling any
agent's value pair leaves their traces unchanged.
"""
from __future__ import annotations

from .model import OnlineAlgorithm, sees_high


def round_robin_agent(t: int, n: int) -> int:
    """Recipient of the t-th good (1-based) under round-robin."""
    return (t - 1) % n + 1


class RoundRobin(OnlineAlgorithm):
    name = "round-robin"
    requires_flags = False

    def start(self, n, agents, foresight):
        self.n = n

    def choose(self, state, good, window):
        return round_robin_agent(state.t + 1, self.n)


class GreedyWelfare(OnlineAlgorithm):
    """Give each good to an agent that values it highly, lowest index first;
    if nobody does, to agent 1.  Heavily biased, deliberately naive."""

    name = "greedy-welfare"
    requires_flags = False

    def start(self, n, agents, foresight):
        self.n = n
        self.agents = list(agents)

    def choose(self, state, good, window):
        for i in range(1, self.n + 1):
            prof = self.agents[i - 1]
            if prof.alpha > 0 and sees_high(prof, good, i):
                return i
        return 1
