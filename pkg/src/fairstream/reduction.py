"""Threshold rounding: interval-restricted values to 2-value proxies.

Agent i's values lie in [1, alpha_i].  Rounding every value up to alpha_i
when it exceeds sqrt(alpha_i) and up to sqrt(alpha_i) otherwise yields a
personalized 2-value proxy whose additive values sandwich the originals:

    proxy(S) / sqrt(alpha_i) <= original(S) <= proxy(S)

so any fairness ratio achieved on the proxy transfers to the original at the
cost of a sqrt(alpha_i) factor, and the proxy maximin share dominates the
original one.  `a_star = max_i sqrt(alpha_i)` is the instance-wide transfer
factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .metrics import (MMS_EXHAUSTIVE_MAX_GOODS, PairwiseTracker, _ratio,
                      mms_exhaustive, mms_two_value)
from .model import AgentProfile, Flavor, GoodEvent, Instance, value

_EQ_RTOL = 1e-9


def _above_threshold(v: float, thr: float) -> bool:
    # the boundary value itself rounds down to sqrt(alpha)
    if math.isclose(v, thr, rel_tol=_EQ_RTOL, abs_tol=1e-12):
        return False
    return v > thr


@dataclass
class ThresholdProxy:
    original: Instance
    proxy: Instance
    thresholds: list  # per-agent sqrt(alpha_i)

    @property
    def a_star(self) -> float:
        return max(self.thresholds)

    @property
    def alpha_max(self) -> float:
        return max(a.alpha for a in self.original.agents)


def threshold_round(instance: Instance) -> ThresholdProxy:
    """Build the 2-value proxy of an interval-restricted instance.

    The proxy keeps the good order and foresight; agent i's proxy profile is
    (alpha_i, sqrt(alpha_i)) and a good is proxy-high exactly when its
    original value strictly exceeds sqrt(alpha_i)."""
    if instance.flavor is not Flavor.INTERVAL:
        raise ValueError("threshold rounding applies to interval-restricted instances")
    for a in instance.agents:
        if a.alpha <= 1:
            raise ValueError(f"interval agents need alpha > 1, got {a.alpha}")
    thresholds = [math.sqrt(a.alpha) for a in instance.agents]
    agents = [AgentProfile(a.alpha, thr) for a, thr in zip(instance.agents, thresholds)]
    goods = [GoodEvent(g.index,
                       high=[_above_threshold(v, thresholds[i]) for i, v in enumerate(g.values)])
             for g in instance.goods]
    proxy = Instance(agents=agents, goods=goods, flavor=Flavor.TWO_VALUE,
                     foresight=instance.foresight)
    return ThresholdProxy(instance, proxy, thresholds)


def proxy_value(pair: ThresholdProxy, agent: int, good_index: int) -> float:
    g = pair.proxy.goods[good_index - 1]
    return value(pair.proxy.agents[agent - 1], g, agent)


@dataclass
class LiftedStep:
    """Fairness ratios of one step under proxy and original values."""

    t: int
    agent: int
    proxy: dict
    original: dict


def lift_guarantee(pair: ThresholdProxy, trace) -> list:
    """Replay a trace produced on the proxy and verify the guarantee transfer.

    For every step, agent and metric (ef, ef1, ef2, prop, mms) asserts
    original_ratio >= proxy_ratio / sqrt(alpha_i) up to 1e-9, and that the
    original maximin share never exceeds the proxy one (both sides checked by
    the exhaustive oracle on prefixes of at most 12 goods).  Returns the
    per-step lifted report rows."""
    if trace.instance != pair.proxy:
        raise ValueError("trace was not produced on this proxy instance")
    orig, prox = pair.original, pair.proxy
    n = orig.n
    tr_orig = PairwiseTracker(orig)
    tr_prox = PairwiseTracker(prox)
    out = []
    mms_possible = True
    for step in trace.steps:
        t = step.t
        tr_orig.observe(orig.goods[t - 1], step.agent)
        tr_prox.observe(prox.goods[t - 1], step.agent)
        mms_possible = mms_possible and t <= MMS_EXHAUSTIVE_MAX_GOODS
        for i in range(1, n + 1):
            scale = pair.thresholds[i - 1]
            po, oo = {}, {}
            for k, name in ((0, "ef"), (1, "ef1"), (2, "ef2")):
                po[name] = min((_ratio(tr_prox.val[i][i], tr_prox.removable_value(i, j, k))
                                for j in range(1, n + 1) if j != i), default=1.0)
                oo[name] = min((_ratio(tr_orig.val[i][i], tr_orig.removable_value(i, j, k))
                                for j in range(1, n + 1) if j != i), default=1.0)
            po["prop"] = _ratio(n * tr_prox.val[i][i], tr_prox.seen_total[i])
            oo["prop"] = _ratio(n * tr_orig.val[i][i], tr_orig.seen_total[i])
            if mms_possible:
                prof_p = prox.agents[i - 1]
                vals_orig = [orig.goods[s].values[i - 1] for s in range(t)]
                vals_prox = [value(prof_p, prox.goods[s], i) for s in range(t)]
                mu_o = mms_exhaustive(vals_orig, n)
                mu_p = mms_exhaustive(vals_prox, n)
                h = sum(1 for s in range(t) if prox.goods[s].high[i - 1])
                mu_p2 = mms_two_value(h, t - h, prof_p.alpha, prof_p.beta, n)
                if abs(mu_p - mu_p2) > _EQ_RTOL * max(1.0, mu_p):
                    raise AssertionError(
                        f"proxy maximin oracles disagree at t={t}: {mu_p} vs {mu_p2}")
                if mu_o > mu_p * (1 + _EQ_RTOL) + _EQ_RTOL:
                    raise AssertionError(
                        f"original maximin share exceeds proxy at t={t}, agent {i}")
                po["mms"] = _ratio(tr_prox.val[i][i], mu_p)
                oo["mms"] = _ratio(tr_orig.val[i][i], mu_o)
            for name, pr in po.items():
                if float(oo[name]) < float(pr) / scale - _EQ_RTOL:
                    raise AssertionError(
                        f"transfer violated at t={t}, agent {i}, {name}: "
                        f"original {oo[name]} < proxy {pr} / sqrt(alpha)")
            out.append(LiftedStep(t, i, po, oo))
    return out


def sandwich_holds(pair: ThresholdProxy, agent: int, subset) -> bool:
    """Check proxy(S)/sqrt(alpha) <= original(S) <= proxy(S) on a good subset."""
    thr = pair.thresholds[agent - 1]
    orig = sum(pair.original.goods[idx - 1].values[agent - 1] for idx in subset)
    prox = sum(proxy_value(pair, agent, idx) for idx in subset)
    tol = _EQ_RTOL * max(1.0, orig, prox)
    return prox / thr <= orig + tol and orig <= prox + tol


def sidecar(pair: ThresholdProxy) -> dict:
    """Audit metadata written next to a reduced instance."""
    return {
        "alpha_max": pair.alpha_max,
        "a_star": pair.a_star,
        "thresholds": list(pair.thresholds),
        "per_agent_alpha": [a.alpha for a in pair.original.agents],
    }
