"""Kripke structures with per-agent, per-state depths.

Relations are stored as explicit pair sets without reflexive loops; loops are
implicit.  Equivalence-mode models are expected to carry symmetrically and
transitively closed pair sets (``validate`` reports the first violation),
reflexive-mode models may carry arbitrary directed pairs.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping

EQUIVALENCE = "equivalence"
REFLEXIVE = "reflexive"


class ModelError(ValueError):
    pass


Pair = tuple[str, str]


class Model:
    """Immutable pointed-model substrate: states, valuation, relations, depths."""

    __slots__ = ("agents", "states", "mode", "_val", "_rel", "_depth",
                 "_index", "_succ", "_classes")

    def __init__(self,
                 agents: int,
                 states: Iterable[str],
                 val: Mapping[str, Iterable[str]],
                 rel: Mapping[int, Iterable[Pair]],
                 depth: Mapping[int, Mapping[str, int]],
                 mode: str = EQUIVALENCE):
        states = tuple(states)
        if len(set(states)) != len(states):
            raise ModelError("duplicate state names")
        if not all(isinstance(s, str) and s for s in states):
            raise ModelError("state names must be non-empty strings")
        if agents < 1:
            raise ModelError("need at least one agent")
        if mode not in (EQUIVALENCE, REFLEXIVE):
            raise ModelError(f"unknown mode {mode!r}")
        index = {s: i for i, s in enumerate(states)}
        vmap = {}
        for s in states:
            vmap[s] = frozenset(val.get(s, ()))
        for s in val:
            if s not in index:
                raise ModelError(f"valuation for unknown state {s!r}")
        rmap = {}
        for a in range(agents):
            pairs = set()
            for s, t in rel.get(a, ()):
                if s not in index or t not in index:
                    raise ModelError(f"relation pair ({s!r}, {t!r}) uses unknown state")
                if s != t:
                    pairs.add((s, t))
            rmap[a] = frozenset(pairs)
        for a in rel:
            if not 0 <= a < agents:
                raise ModelError(f"relation for unknown agent {a}")
        dmap = {}
        for a in range(agents):
            da = depth.get(a, {})
            dmap[a] = {s: int(da.get(s, 0)) for s in states}
        self.agents = agents
        self.states = states
        self.mode = mode
        self._val = vmap
        self._rel = rmap
        self._depth = dmap
        self._index = index
        self._succ: dict[int, dict[str, frozenset[str]]] = {}
        self._classes: dict[int, tuple[frozenset[str], ...]] = {}

    # -- accessors --

    def atoms(self, state: str) -> frozenset[str]:
        return self._val[state]

    def depth(self, agent: int, state: str) -> int:
        return self._depth[agent][state]

    def pairs(self, agent: int) -> frozenset[Pair]:
        return self._rel[agent]

    def has_state(self, state: str) -> bool:
        return state in self._index

    def state_index(self, state: str) -> int:
        return self._index[state]

    def successors(self, agent: int, state: str) -> frozenset[str]:
        """States the agent considers possible at ``state`` (includes itself)."""
        cache = self._succ.get(agent)
        if cache is None:
            cache = {s: set((s,)) for s in self.states}
            for s, t in self._rel[agent]:
                cache[s].add(t)
            cache = {s: frozenset(ts) for s, ts in cache.items()}
            self._succ[agent] = cache
        return cache[state]

    def classes(self, agent: int) -> tuple[frozenset[str], ...]:
        """Connected components of the symmetrized relation, in state order."""
        cached = self._classes.get(agent)
        if cached is not None:
            return cached
        neigh: dict[str, set[str]] = {s: set() for s in self.states}
        for s, t in self._rel[agent]:
            neigh[s].add(t)
            neigh[t].add(s)
        seen: set[str] = set()
        out = []
        for s in self.states:
            if s in seen:
                continue
            comp = {s}
            frontier = [s]
            while frontier:
                u = frontier.pop()
                for v in neigh[u]:
                    if v not in comp:
                        comp.add(v)
                        frontier.append(v)
            seen |= comp
            out.append(frozenset(comp))
        result = tuple(out)
        self._classes[agent] = result
        return result

    def __repr__(self) -> str:
        return (f"Model(agents={self.agents}, states={len(self.states)}, "
                f"mode={self.mode!r})")


@dataclass(frozen=True)
class PointedModel:
    model: Model
    state: str

    def __post_init__(self) -> None:
        if not self.model.has_state(self.state):
            raise ModelError(f"unknown state {self.state!r}")


@dataclass(frozen=True)
class ViolationReport:
    property: str   # "symmetry" | "transitivity"
    agent: int
    witness: Pair


def validate(m: Model, mode: str | None = None) -> ViolationReport | None:
    """Check closure properties of the stored relations for the given mode.

    Returns None when fine, otherwise the first violation in deterministic
    order.  Reflexivity is implicit and can never be violated.
    """
    mode = mode or m.mode
    if mode == REFLEXIVE:
        return None
    for a in range(m.agents):
        pairs = m.pairs(a)
        key = lambda p: (m.state_index(p[0]), m.state_index(p[1]))
        for s, t in sorted(pairs, key=key):
            if (t, s) not in pairs:
                return ViolationReport("symmetry", a, (s, t))
        succ = {}
        for s, t in pairs:
            succ.setdefault(s, set()).add(t)
        for s, t in sorted(pairs, key=key):
            for u in sorted(succ.get(t, ()), key=m.state_index):
                if u != s and (s, u) not in pairs:
                    return ViolationReport("transitivity", a, (s, u))
    return None


def is_unambiguous(m: Model) -> bool:
    """True iff each agent's depth is constant on each of its own classes."""
    for a in range(m.agents):
        for cls in m.classes(a):
            depths = {m.depth(a, s) for s in cls}
            if len(depths) > 1:
                return False
    return True


def connected_component(m: Model, state: str, agent: int) -> frozenset[str]:
    """The agent's class of ``state`` (equivalence mode) or forward-reachable
    set (reflexive mode)."""
    if not m.has_state(state):
        raise ModelError(f"unknown state {state!r}")
    if m.mode == EQUIVALENCE:
        for cls in m.classes(agent):
            if state in cls:
                return cls
        raise AssertionError("state not covered by classes")
    reached = {state}
    frontier = [state]
    while frontier:
        u = frontier.pop()
        for v in m.successors(agent, u):
            if v not in reached:
                reached.add(v)
                frontier.append(v)
    return frozenset(reached)


def closed_pairs(classes: Iterable[Iterable[str]]) -> frozenset[Pair]:
    """All ordered non-loop pairs within each class."""
    out = set()
    for cls in classes:
        cls = tuple(cls)
        for s in cls:
            for t in cls:
                if s != t:
                    out.add((s, t))
    return frozenset(out)


def model_size(m: Model) -> int:
    """States plus relation pairs, counting k*k pairs per size-k class in
    equivalence mode and explicit pairs plus reflexive loops otherwise."""
    total = len(m.states)
    for a in range(m.agents):
        if m.mode == EQUIVALENCE:
            total += sum(len(cls) ** 2 for cls in m.classes(a))
        else:
            total += len(m.pairs(a)) + len(m.states)
    return total


# -- serialization --

def to_dict(m: Model) -> dict:
    def pair_key(p: Pair) -> tuple[int, int]:
        return (m.state_index(p[0]), m.state_index(p[1]))

    return {
        "agents": m.agents,
        "mode": m.mode,
        "states": list(m.states),
        "val": {s: sorted(m.atoms(s)) for s in m.states},
        "rel": {str(a): [list(p) for p in sorted(m.pairs(a), key=pair_key)]
                for a in range(m.agents)},
        "depth": {str(a): {s: m.depth(a, s) for s in m.states}
                  for a in range(m.agents)},
    }


def canonical_json(m: Model) -> str:
    return json.dumps(to_dict(m), sort_keys=True, indent=2) + "\n"


def save_model(m: Model, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(m))


def _closure(states: Iterable[str], pairs: Iterable[Pair]) -> frozenset[Pair]:
    neigh: dict[str, set[str]] = {s: set() for s in states}
    for s, t in pairs:
        neigh[s].add(t)
        neigh[t].add(s)
    classes = []
    seen: set[str] = set()
    for s in neigh:
        if s in seen:
            continue
        comp = {s}
        frontier = [s]
        while frontier:
            u = frontier.pop()
            for v in neigh[u]:
                if v not in comp:
                    comp.add(v)
                    frontier.append(v)
        seen |= comp
        classes.append(comp)
    return closed_pairs(classes)


def model_from_dict(data: Mapping) -> Model:
    try:
        agents = int(data["agents"])
        states = list(data["states"])
        mode = data.get("mode", EQUIVALENCE)
        val = {s: list(atoms) for s, atoms in data.get("val", {}).items()}
        rel = {int(a): [tuple(p) for p in pairs]
               for a, pairs in data.get("rel", {}).items()}
        depth = {int(a): {s: int(d) for s, d in per.items()}
                 for a, per in data.get("depth", {}).items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed model document: {exc}") from exc
    if mode == EQUIVALENCE:
        for a, pairs in rel.items():
            given = frozenset((s, t) for s, t in pairs if s != t)
            closed = _closure(states, given)
            if closed != given:
                warnings.warn(
                    f"agent {a} relation was not closed; applying symmetric "
                    f"transitive closure", stacklevel=2)
                rel[a] = list(closed)
    return Model(agents=agents, states=states, val=val, rel=rel,
                 depth=depth, mode=mode)


def load_model(path: str) -> Model:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return model_from_dict(data)


def loads_model(text: str) -> Model:
    return model_from_dict(json.loads(text))
