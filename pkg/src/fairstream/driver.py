"""Single-threaded run loop: feed a stream through an algorithm, record a trace.

One run owns one algorithm instance and one allocation state; independent runs
never share mutable state and may execute concurrently.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .model import AllocationState, GoodEvent, Instance, OnlineAlgorithm

TRACE_CORE_COLUMNS = ("t", "good", "allocated_to", "as_high")


@dataclass
class StepRecord:
    t: int
    good: int
    agent: int
    as_high: bool
    extras: dict = field(default_factory=dict)


@dataclass
class Trace:
    instance: Instance
    steps: list

    @property
    def choices(self):
        return [s.agent for s in self.steps]


def run_online(alg: OnlineAlgorithm, instance: Instance, auditors=()) -> Trace:
    """Run `alg` over the instance honoring its foresight contract.

    Auditors receive every completed step via `observe(state, good, agent,
    extras)` and may accumulate violations; they never influence decisions.
    """
    alg.check_config(instance.n, instance.foresight)
    if alg.requires_flags and instance.flavor.value != "two_value":
        raise ValueError(f"{alg.name} reads high/low flags; reduce the instance first")
    alg.start(instance.n, instance.agents, instance.foresight)
    state = AllocationState.fresh(instance)
    steps = []
    goods = instance.goods
    ell = instance.foresight
    for pos, good in enumerate(goods):
        window = goods[pos + 1: pos + 1 + ell] if ell else []
        agent = alg.choose(state, good, window)
        if not isinstance(agent, int) or not 1 <= agent <= instance.n:
            raise RuntimeError(f"{alg.name} returned invalid agent {agent!r}")
        before = state.high_received[agent - 1]
        state.assign(good, agent)
        as_high = state.high_received[agent - 1] > before
        alg.observe(state, good, agent)
        extras = alg.snapshot()
        rec = StepRecord(state.t, good.index, agent, as_high, extras)
        steps.append(rec)
        for aud in auditors:
            aud.observe(state, good, agent, extras)
    return Trace(instance, steps)


def replay_states(trace: Trace):
    """Yield (state, step) pairs with the state as of the *end* of each step."""
    state = AllocationState.fresh(trace.instance)
    for step in trace.steps:
        state.assign(trace.instance.goods[step.t - 1], step.agent)
        yield state, step


def _join(vec) -> str:
    return ";".join(str(int(v) if isinstance(v, bool) else v) for v in vec)


def trace_csv_rows(trace: Trace, columns=None):
    """Trace as CSV rows: core columns plus the algorithm's extra columns,
    vector-valued extras semicolon-joined.  Deterministic for replay diffing."""
    if columns is None:
        keys = trace.steps[0].extras.keys() if trace.steps else ()
        columns = tuple(keys)
    out = [",".join(TRACE_CORE_COLUMNS + tuple(columns))]
    for s in trace.steps:
        row = [str(s.t), str(s.good), str(s.agent), str(int(s.as_high))]
        for col in columns:
            v = s.extras.get(col, "")
            row.append(_join(v) if isinstance(v, (list, tuple)) else str(v))
        out.append(",".join(row))
    return out
