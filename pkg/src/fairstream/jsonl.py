"""Instance files as JSON Lines.

Line 1 is the header::

    {"n": 2, "agents": [{"alpha": 5, "beta": 1}, ...],
     "flavor": "two_value" | "interval", "foresight": 0}

Each following line is one good, ``{"high": [bool, ...]}`` for 2-value
instances or ``{"values": [real, ...]}`` for interval-restricted ones.
"""
from __future__ import annotations

import json

from .model import AgentProfile, Flavor, GoodEvent, Instance


class InstanceFormatError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def _number(x, line, what):
    if not isinstance(x, (int, float)) or isinstance(x, bool):
        raise InstanceFormatError(line, f"{what} must be a number, got {x!r}")
    return x


def loads_instance(text: str) -> Instance:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InstanceFormatError(1, "empty instance file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as e:
        raise InstanceFormatError(1, f"bad JSON header: {e}") from e
    if not isinstance(header, dict) or "agents" not in header:
        raise InstanceFormatError(1, "header must be an object with an 'agents' field")
    try:
        agents = [AgentProfile(_number(a["alpha"], 1, "alpha"), _number(a["beta"], 1, "beta"))
                  for a in header["agents"]]
    except (KeyError, TypeError, ValueError) as e:
        raise InstanceFormatError(1, f"bad agent list: {e}") from e
    n = header.get("n", len(agents))
    if n != len(agents):
        raise InstanceFormatError(1, f"header n={n} but {len(agents)} agents listed")
    try:
        flavor = Flavor(header.get("flavor", "two_value"))
    except ValueError as e:
        raise InstanceFormatError(1, str(e)) from e
    foresight = header.get("foresight", 0)
    if not isinstance(foresight, int) or foresight < 0:
        raise InstanceFormatError(1, f"bad foresight {foresight!r}")

    goods = []
    for lineno, ln in enumerate(lines[1:], 2):
        try:
            obj = json.loads(ln)
        except json.JSONDecodeError as e:
            raise InstanceFormatError(lineno, f"bad JSON: {e}") from e
        idx = len(goods) + 1
        try:
            if flavor is Flavor.TWO_VALUE:
                good = GoodEvent(idx, high=obj["high"])
            else:
                good = GoodEvent(idx, values=obj["values"])
            if good.n != n:
                raise ValueError(f"good {idx}: expected {n} entries, got {good.n}")
        except (KeyError, TypeError, ValueError) as e:
            raise InstanceFormatError(lineno, str(e)) from e
        goods.append(good)
    try:
        return Instance(agents=agents, goods=goods, flavor=flavor, foresight=foresight)
    except ValueError as e:
        raise InstanceFormatError(1, str(e)) from e


def dumps_instance(instance: Instance) -> str:
    header = {
        "n": instance.n,
        "agents": [{"alpha": a.alpha, "beta": a.beta} for a in instance.agents],
        "flavor": instance.flavor.value,
        "foresight": instance.foresight,
    }
    lines = [json.dumps(header, separators=(",", ":"))]
    for g in instance.goods:
        if g.high is not None:
            lines.append(json.dumps({"high": list(g.high)}, separators=(",", ":")))
        else:
            lines.append(json.dumps({"values": list(g.values)}, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def read_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_instance(fh.read())


def write_instance(instance: Instance, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_instance(instance))
