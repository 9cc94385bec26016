"""Finite multi-agent S5 models and the machinery behind quantified
announcements.

States are indexed and state sets are bitmasks (bit i = state i), which
keeps announcement updates and the choice-set enumeration cheap.  A
choice set is one union of equivalence classes per group member; on a
bisimulation-contracted model these are exactly the truth sets of the
joint announcements the group operators quantify over, and
definable_formula() turns one back into a concrete announcement.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Iterable, Mapping, Sequence

from .formula import (
    And,
    Atom,
    Formula,
    GroupKnowledgeFormula,
    Know,
    Not,
    Or,
    TOP,
)

StateSet = int

DEFAULT_ENUMERATION_CAP = 10**6


class EnumerationCapExceeded(Exception):
    """Raised instead of silently truncating a choice-set enumeration."""

    def __init__(self, requested: int, cap: int):
        self.requested = requested
        self.cap = cap
        super().__init__(f"{requested} choice-set decompositions exceed the cap of {cap}")


class EpistemicModel:
    """Finite state set, one partition per agent, propositional valuation.

    Immutable after construction; the partition representation makes each
    agent's indistinguishability relation an equivalence relation by
    construction.
    """

    def __init__(
        self,
        states: Sequence[str],
        agents: Sequence[str],
        atoms: Sequence[str],
        partitions: Mapping[str, Sequence[Iterable[str]]],
        valuation: Mapping[str, Iterable[str]],
    ):
        self.states = tuple(states)
        self.agents = tuple(agents)
        self.atoms = tuple(atoms)
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate state")
        if len(set(self.agents)) != len(self.agents):
            raise ValueError("duplicate agent")
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError("duplicate atom")
        if not self.states:
            raise ValueError("model has no states")
        self.n = len(self.states)
        self.full: StateSet = (1 << self.n) - 1
        self._index = {name: i for i, name in enumerate(self.states)}

        if set(partitions) != set(self.agents):
            raise ValueError("partitions must be given for exactly the declared agents")
        self._blocks: dict[str, tuple[StateSet, ...]] = {}
        self._block_of: dict[str, tuple[StateSet, ...]] = {}
        for agent in self.agents:
            blocks = tuple(self.state_mask(block) for block in partitions[agent])
            covered = 0
            for b in blocks:
                if b == 0:
                    raise ValueError(f"agent {agent!r}: empty partition block")
                if covered & b:
                    raise ValueError(f"agent {agent!r}: partition blocks overlap")
                covered |= b
            if covered != self.full:
                raise ValueError(f"agent {agent!r}: partition does not cover the states")
            self._blocks[agent] = blocks
            per_state = [0] * self.n
            for b in blocks:
                for i in _bits(b):
                    per_state[i] = b
            self._block_of[agent] = tuple(per_state)

        if set(valuation) != set(self.atoms):
            raise ValueError("valuation must be given for exactly the declared atoms")
        self._val = {atom: self.state_mask(valuation[atom]) for atom in self.atoms}

    def state_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown state {name!r}") from None

    def state_mask(self, names: Iterable[str]) -> StateSet:
        mask = 0
        for name in names:
            mask |= 1 << self.state_index(name)
        return mask

    def states_in(self, mask: StateSet) -> tuple[str, ...]:
        return tuple(self.states[i] for i in _bits(mask & self.full))

    def blocks(self, agent: str) -> tuple[StateSet, ...]:
        return self._blocks[agent]

    def block_of(self, agent: str, state_index: int) -> StateSet:
        return self._block_of[agent][state_index]

    def valuation_mask(self, atom: str) -> StateSet:
        try:
            return self._val[atom]
        except KeyError:
            raise KeyError(f"unknown atom {atom!r}") from None

    def __repr__(self) -> str:
        return f"EpistemicModel(states={list(self.states)}, agents={list(self.agents)})"


def _bits(mask: int) -> Iterable[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def models_equal(a: EpistemicModel, b: EpistemicModel) -> bool:
    """Equality under state-name identity (block order ignored)."""
    if a.states != b.states or a.agents != b.agents or a.atoms != b.atoms:
        return False
    if any(a.valuation_mask(p) != b.valuation_mask(p) for p in a.atoms):
        return False
    return all(set(a.blocks(ag)) == set(b.blocks(ag)) for ag in a.agents)


def update(model: EpistemicModel, announcement: StateSet) -> EpistemicModel:
    """Restrict the model to the states in `announcement`.

    Callers guarantee the actual state is inside, so an empty extension is
    an error here; vacuously true announcements are handled by the caller.
    """
    announcement &= model.full
    if announcement == 0:
        raise ValueError("announcement extension is empty")
    names = model.states_in(announcement)
    partitions = {
        agent: [model.states_in(b & announcement) for b in model.blocks(agent) if b & announcement]
        for agent in model.agents
    }
    valuation = {atom: model.states_in(model.valuation_mask(atom) & announcement) for atom in model.atoms}
    return EpistemicModel(names, model.agents, model.atoms, partitions, valuation)


def _initial_labels(model: EpistemicModel) -> list[int]:
    labels: list[int] = []
    seen: dict[tuple[int, ...], int] = {}
    for i in range(model.n):
        sig = tuple(model.valuation_mask(p) >> i & 1 for p in model.atoms)
        labels.append(seen.setdefault(sig, len(seen)))
    return labels


def _refine_step(model: EpistemicModel, labels: list[int]) -> list[int]:
    new: list[int] = []
    seen: dict[tuple, int] = {}
    for i in range(model.n):
        sig = (
            labels[i],
            tuple(
                tuple(sorted({labels[j] for j in _bits(model.block_of(agent, i))}))
                for agent in model.agents
            ),
        )
        new.append(seen.setdefault(sig, len(seen)))
    return new


def _refinement_history(model: EpistemicModel) -> list[list[int]]:
    history = [_initial_labels(model)]
    while True:
        nxt = _refine_step(model, history[-1])
        if nxt == history[-1]:
            return history
        history.append(nxt)


def contract(model: EpistemicModel) -> tuple[EpistemicModel, dict[str, str]]:
    """Quotient by the largest bisimulation, via partition refinement.

    Returns the quotient model and the surjection old state -> quotient
    state.  Quotient states are named after the first member of each class.
    """
    labels = _refinement_history(model)[-1]
    n_classes = max(labels) + 1
    reps = [0] * n_classes
    for i in range(model.n - 1, -1, -1):
        reps[labels[i]] = i
    names = [model.states[r] for r in reps]
    mapping = {model.states[i]: names[labels[i]] for i in range(model.n)}

    partitions: dict[str, list[list[str]]] = {}
    for agent in model.agents:
        # classes touched by one original block are all pairwise related
        parent = list(range(n_classes))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for block in model.blocks(agent):
            touched = sorted({labels[i] for i in _bits(block)})
            for other in touched[1:]:
                parent[find(other)] = find(touched[0])
        groups: dict[int, list[str]] = {}
        for c in range(n_classes):
            groups.setdefault(find(c), []).append(names[c])
        partitions[agent] = [groups[root] for root in sorted(groups)]

    valuation = {
        atom: [names[c] for c in range(n_classes) if model.valuation_mask(atom) >> reps[c] & 1]
        for atom in model.atoms
    }
    quotient = EpistemicModel(names, model.agents, model.atoms, partitions, valuation)
    return quotient, mapping


def characteristic_formulas(model: EpistemicModel) -> dict[str, Formula]:
    """One epistemic formula per state, true there and nowhere else.

    Requires a contracted model.  Round 0 describes the valuation; each
    later round records, per agent, which round-k descriptions are
    considered possible and that nothing else is.  The number of rounds
    equals the number of refinement steps the model needs, so the formulas
    are as shallow as the model allows.
    """
    history = _refinement_history(model)
    final = history[-1]
    if max(final) + 1 != model.n:
        pair = next(
            (model.states[i], model.states[j])
            for i in range(model.n)
            for j in range(i + 1, model.n)
            if final[i] == final[j]
        )
        raise ValueError(
            f"model is not bisimulation-contracted: states {pair[0]!r} and {pair[1]!r} are bisimilar"
        )
    rounds = len(history) - 1

    def describe(i: int) -> Formula:
        lits = [
            Atom(p) if model.valuation_mask(p) >> i & 1 else Not(Atom(p))
            for p in model.atoms
        ]
        return reduce(And, lits) if lits else TOP

    current: list[Formula] = [describe(i) for i in range(model.n)]
    for _ in range(rounds):
        previous = current
        current = []
        for i in range(model.n):
            parts: list[Formula] = [describe(i)]
            for agent in model.agents:
                neighbours = list(_bits(model.block_of(agent, i)))
                for j in neighbours:
                    parts.append(Not(Know(agent, Not(previous[j]))))
                parts.append(Know(agent, reduce(Or, [previous[j] for j in neighbours])))
            current.append(reduce(And, parts))
    return {model.states[i]: current[i] for i in range(model.n)}


def agent_unions(model: EpistemicModel, agent: str) -> list[StateSet]:
    """All non-empty unions of the agent's partition blocks.

    Enumerated largest-first (the full state set, the silent announcement,
    comes first) so that witness search is deterministic and prefers
    silence.
    """
    blocks = model.blocks(agent)
    k = len(blocks)
    out = []
    for subset in range((1 << k) - 1, 0, -1):
        mask = 0
        for i in _bits(subset):
            mask |= blocks[i]
        out.append(mask)
    return out


@dataclass(frozen=True)
class ChoiceSet:
    """One announcement option for a group: per agent a union of that
    agent's classes, with the intersection as joint extension."""

    group: tuple[str, ...]
    per_agent_union: tuple[tuple[str, StateSet], ...]
    extension: StateSet

    def union_for(self, agent: str) -> StateSet:
        for a, mask in self.per_agent_union:
            if a == agent:
                return mask
        raise KeyError(agent)


def choice_sets(
    model: EpistemicModel,
    group: Iterable[str],
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> list[ChoiceSet]:
    """Every decomposition of a group announcement over `group`.

    Entries with empty extension are kept; callers skip them through their
    membership guards.  The empty group yields the single trivial choice.
    """
    members = tuple(a for a in model.agents if a in frozenset(group))
    if len(members) != len(frozenset(group)):
        unknown = sorted(frozenset(group) - set(model.agents))[0]
        raise ValueError(f"unknown agent {unknown!r} in group")
    if not members:
        return [ChoiceSet((), (), model.full)]
    per_agent = [agent_unions(model, a) for a in members]
    total = 1
    for options in per_agent:
        total *= len(options)
    if total > cap:
        raise EnumerationCapExceeded(total, cap)
    out = []
    for combo in product(*per_agent):
        extension = model.full
        for mask in combo:
            extension &= mask
        out.append(ChoiceSet(members, tuple(zip(members, combo)), extension))
    return out


def definable_formula(
    model: EpistemicModel,
    choice: ChoiceSet,
    chars: dict[str, Formula] | None = None,
) -> GroupKnowledgeFormula:
    """Concrete joint announcement realising a choice set.

    On a contracted model the returned announcement's truth set is exactly
    the choice's extension, and each agent's knowledge part has exactly
    that agent's union as truth set.
    """
    if chars is None:
        chars = characteristic_formulas(model)
    bindings = []
    for agent, mask in choice.per_agent_union:
        parts = [chars[name] for name in model.states_in(mask)]
        bindings.append((agent, reduce(Or, parts)))
    return GroupKnowledgeFormula(tuple(bindings))


def random_model(seed: int, n_states: int, n_agents: int, n_atoms: int) -> EpistemicModel:
    """Deterministic random model: uniform set partition per agent,
    uniform truth set per atom."""
    if min(n_states, n_agents, n_atoms) < 1:
        raise ValueError("all counts must be at least 1")
    rng = random.Random(seed)
    states = [f"s{i}" for i in range(n_states)]
    agents = [f"a{i}" for i in range(n_agents)]
    atoms = [f"p{i}" for i in range(n_atoms)]
    partitions = {a: _uniform_set_partition(rng, states) for a in agents}
    valuation = {p: [s for s in states if rng.random() < 0.5] for p in atoms}
    return EpistemicModel(states, agents, atoms, partitions, valuation)


def _uniform_set_partition(rng: random.Random, items: Sequence[str]) -> list[list[str]]:
    """Uniform over all set partitions, by counting restricted growth
    strings: d(n, m) extensions remain for n items after m blocks exist."""
    n = len(items)
    d: dict[tuple[int, int], int] = {}

    def count(remaining: int, m: int) -> int:
        if remaining == 0:
            return 1
        key = (remaining, m)
        if key not in d:
            d[key] = m * count(remaining - 1, m) + count(remaining - 1, m + 1)
        return d[key]

    blocks: list[list[str]] = []
    for idx, item in enumerate(items):
        remaining = n - idx - 1
        m = len(blocks)
        r = rng.randrange(count(remaining + 1, m))
        placed = False
        for block in blocks:
            if r < count(remaining, m):
                block.append(item)
                placed = True
                break
            r -= count(remaining, m)
        if not placed:
            blocks.append([item])
    return blocks
