"""Syntax of the epistemic announcement language.

Formulas are immutable trees over knowledge, public announcement,
relativised group announcement and coalition announcement operators.
The diamond duals and the Or/Imp/Iff connectives are sugar; desugar()
expands them into the core (Atom/Top/Bot/Not/And/Know/Ann/RelGroup/Coal),
and the size and depth measures plus the well-founded order driving the
harness are defined on that core.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce


class Stratum(enum.IntEnum):
    """Nested sublanguages, smallest first."""

    EL = 0       # propositional + knowledge
    PAL = 1      # adds public announcements
    RGAL = 2     # adds relativised group announcements
    CORGAL = 3   # adds coalition announcements


@dataclass(frozen=True)
class Formula:
    """Base class for all formula nodes.

    Supports ~f, f & g, f | g and f >> g (implication) as construction
    shorthand.
    """

    def __invert__(self) -> "Formula":
        return Not(self)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Imp(self, other)

    def __str__(self) -> str:
        from .parser import render_formula

        return render_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Know(Formula):
    agent: str
    sub: Formula


@dataclass(frozen=True)
class KnowDual(Formula):
    """Possibility dual of Know; no concrete syntax of its own."""

    agent: str
    sub: Formula


@dataclass(frozen=True)
class Ann(Formula):
    """Public announcement box: after truthfully announcing `ann`, `sub`."""

    ann: Formula
    sub: Formula


@dataclass(frozen=True)
class AnnDual(Formula):
    ann: Formula
    sub: Formula


@dataclass(frozen=True)
class RelGroup(Formula):
    """Relativised group announcement box over the agents in `group`."""

    group: frozenset[str]
    cond: Formula
    sub: Formula

    def __post_init__(self) -> None:
        object.__setattr__(self, "group", frozenset(self.group))


@dataclass(frozen=True)
class RelGroupDual(Formula):
    group: frozenset[str]
    cond: Formula
    sub: Formula

    def __post_init__(self) -> None:
        object.__setattr__(self, "group", frozenset(self.group))


@dataclass(frozen=True)
class Coal(Formula):
    """Coalition announcement box: every announcement by `group` can be
    countered by the remaining agents so that `sub` holds."""

    group: frozenset[str]
    sub: Formula

    def __post_init__(self) -> None:
        object.__setattr__(self, "group", frozenset(self.group))


@dataclass(frozen=True)
class CoalDual(Formula):
    group: frozenset[str]
    sub: Formula

    def __post_init__(self) -> None:
        object.__setattr__(self, "group", frozenset(self.group))


TOP = Top()
BOT = Bot()


def stratum(f: Formula) -> Stratum:
    """Least sublanguage containing f; duals classify with their primitive."""
    if isinstance(f, (Atom, Top, Bot)):
        return Stratum.EL
    if isinstance(f, Not):
        return stratum(f.sub)
    if isinstance(f, (And, Or, Imp, Iff)):
        return max(stratum(f.left), stratum(f.right))
    if isinstance(f, (Know, KnowDual)):
        return stratum(f.sub)
    if isinstance(f, (Ann, AnnDual)):
        return max(Stratum.PAL, stratum(f.ann), stratum(f.sub))
    if isinstance(f, (RelGroup, RelGroupDual)):
        return max(Stratum.RGAL, stratum(f.cond), stratum(f.sub))
    if isinstance(f, (Coal, CoalDual)):
        return max(Stratum.CORGAL, stratum(f.sub))
    raise TypeError(f"not a formula: {f!r}")


def desugar(f: Formula) -> Formula:
    """Expand duals and Or/Imp/Iff into the core constructors.

    Top and Bot are kept as atomic constants.  Idempotent.
    """
    if isinstance(f, (Atom, Top, Bot)):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.sub))
    if isinstance(f, And):
        return And(desugar(f.left), desugar(f.right))
    if isinstance(f, Or):
        return Not(And(Not(desugar(f.left)), Not(desugar(f.right))))
    if isinstance(f, Imp):
        return Not(And(desugar(f.left), Not(desugar(f.right))))
    if isinstance(f, Iff):
        a, b = desugar(f.left), desugar(f.right)
        return And(Not(And(a, Not(b))), Not(And(b, Not(a))))
    if isinstance(f, Know):
        return Know(f.agent, desugar(f.sub))
    if isinstance(f, KnowDual):
        return Not(Know(f.agent, Not(desugar(f.sub))))
    if isinstance(f, Ann):
        return Ann(desugar(f.ann), desugar(f.sub))
    if isinstance(f, AnnDual):
        return Not(Ann(desugar(f.ann), Not(desugar(f.sub))))
    if isinstance(f, RelGroup):
        return RelGroup(f.group, desugar(f.cond), desugar(f.sub))
    if isinstance(f, RelGroupDual):
        return Not(RelGroup(f.group, desugar(f.cond), Not(desugar(f.sub))))
    if isinstance(f, Coal):
        return Coal(f.group, desugar(f.sub))
    if isinstance(f, CoalDual):
        return Not(Coal(f.group, Not(desugar(f.sub))))
    raise TypeError(f"not a formula: {f!r}")


def size(f: Formula) -> int:
    """Weighted size of the desugared formula.

    Announcements weigh their body threefold; the group operators do not
    count their condition.
    """
    return _size(desugar(f))


def _size(f: Formula) -> int:
    if isinstance(f, (Atom, Top, Bot)):
        return 1
    if isinstance(f, Not):
        return _size(f.sub) + 1
    if isinstance(f, And):
        return _size(f.left) + _size(f.right) + 1
    if isinstance(f, Know):
        return _size(f.sub) + 1
    if isinstance(f, Ann):
        return _size(f.ann) + 3 * _size(f.sub)
    if isinstance(f, RelGroup):
        return _size(f.sub) + 1
    if isinstance(f, Coal):
        return _size(f.sub) + 1
    raise TypeError(f"not in the desugared core: {f!r}")


def depth_box(f: Formula) -> int:
    """Nesting depth of relativised group boxes; coalition boxes are
    transparent."""
    return _depth_box(desugar(f))


def _depth_box(f: Formula) -> int:
    if isinstance(f, (Atom, Top, Bot)):
        return 0
    if isinstance(f, Not):
        return _depth_box(f.sub)
    if isinstance(f, And):
        return max(_depth_box(f.left), _depth_box(f.right))
    if isinstance(f, Know):
        return _depth_box(f.sub)
    if isinstance(f, Ann):
        return _depth_box(f.ann) + _depth_box(f.sub)
    if isinstance(f, RelGroup):
        return _depth_box(f.cond) + _depth_box(f.sub) + 1
    if isinstance(f, Coal):
        return _depth_box(f.sub)
    raise TypeError(f"not in the desugared core: {f!r}")


def depth_coal(f: Formula) -> int:
    """Nesting depth of coalition boxes; group boxes are transparent."""
    return _depth_coal(desugar(f))


def _depth_coal(f: Formula) -> int:
    if isinstance(f, (Atom, Top, Bot)):
        return 0
    if isinstance(f, Not):
        return _depth_coal(f.sub)
    if isinstance(f, And):
        return max(_depth_coal(f.left), _depth_coal(f.right))
    if isinstance(f, Know):
        return _depth_coal(f.sub)
    if isinstance(f, Ann):
        return _depth_coal(f.ann) + _depth_coal(f.sub)
    if isinstance(f, RelGroup):
        return _depth_coal(f.cond) + _depth_coal(f.sub)
    if isinstance(f, Coal):
        return _depth_coal(f.sub) + 1
    raise TypeError(f"not in the desugared core: {f!r}")


def order_lt(f: Formula, g: Formula) -> bool:
    """Well-founded strict order: coalition depth, then box depth, then size."""
    fd = desugar(f)
    gd = desugar(g)
    return (_depth_coal(fd), _depth_box(fd), _size(fd)) < (
        _depth_coal(gd),
        _depth_box(gd),
        _size(gd),
    )


@dataclass(frozen=True)
class GroupKnowledgeFormula:
    """A joint announcement: one purely epistemic formula per member agent.

    Denotes the conjunction of "agent i knows its bound formula" over the
    group, Top for the empty group.
    """

    bindings: tuple[tuple[str, Formula], ...]

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.bindings, key=lambda item: item[0]))
        agents = [a for a, _ in ordered]
        if len(set(agents)) != len(agents):
            raise ValueError("duplicate agent in group knowledge bindings")
        for agent, body in ordered:
            if stratum(body) != Stratum.EL:
                raise ValueError(
                    f"binding for agent {agent!r} must be purely epistemic"
                )
        object.__setattr__(self, "bindings", ordered)

    @classmethod
    def from_dict(cls, mapping: dict[str, Formula]) -> "GroupKnowledgeFormula":
        return cls(tuple(mapping.items()))

    @property
    def group(self) -> frozenset[str]:
        return frozenset(a for a, _ in self.bindings)

    def body(self, agent: str) -> Formula:
        for a, f in self.bindings:
            if a == agent:
                return f
        raise KeyError(agent)

    def denotation(self) -> Formula:
        if not self.bindings:
            return TOP
        parts = [Know(a, f) for a, f in self.bindings]
        return reduce(And, parts)

    def __str__(self) -> str:
        return str(self.denotation())


@dataclass(frozen=True)
class NecessityForm:
    """Context with a unique hole, built from implications, knowledge and
    announcement boxes."""


@dataclass(frozen=True)
class Hole(NecessityForm):
    pass


@dataclass(frozen=True)
class NfImp(NecessityForm):
    ante: Formula
    body: NecessityForm


@dataclass(frozen=True)
class NfKnow(NecessityForm):
    agent: str
    body: NecessityForm


@dataclass(frozen=True)
class NfAnn(NecessityForm):
    ann: Formula
    body: NecessityForm


HOLE = Hole()


def nf_instantiate(nf: NecessityForm, f: Formula) -> Formula:
    """Replace the hole with f, keeping the surrounding context."""
    if isinstance(nf, Hole):
        return f
    if isinstance(nf, NfImp):
        return Imp(nf.ante, nf_instantiate(nf.body, f))
    if isinstance(nf, NfKnow):
        return Know(nf.agent, nf_instantiate(nf.body, f))
    if isinstance(nf, NfAnn):
        return Ann(nf.ann, nf_instantiate(nf.body, f))
    raise TypeError(f"not a necessity form: {nf!r}")


def hole_count(nf: NecessityForm) -> int:
    if isinstance(nf, Hole):
        return 1
    if isinstance(nf, (NfImp, NfKnow, NfAnn)):
        return hole_count(nf.body)
    raise TypeError(f"not a necessity form: {nf!r}")


def agents_in(f: Formula) -> frozenset[str]:
    """All agent names occurring in f, group members included."""
    out: set[str] = set()
    _collect(f, out, set())
    return frozenset(out)


def atoms_in(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    _collect(f, set(), out)
    return frozenset(out)


def _collect(f: Formula, agents: set[str], atoms: set[str]) -> None:
    if isinstance(f, Atom):
        atoms.add(f.name)
    elif isinstance(f, (Top, Bot)):
        pass
    elif isinstance(f, Not):
        _collect(f.sub, agents, atoms)
    elif isinstance(f, (And, Or, Imp, Iff)):
        _collect(f.left, agents, atoms)
        _collect(f.right, agents, atoms)
    elif isinstance(f, (Know, KnowDual)):
        agents.add(f.agent)
        _collect(f.sub, agents, atoms)
    elif isinstance(f, (Ann, AnnDual)):
        _collect(f.ann, agents, atoms)
        _collect(f.sub, agents, atoms)
    elif isinstance(f, (RelGroup, RelGroupDual)):
        agents.update(f.group)
        _collect(f.cond, agents, atoms)
        _collect(f.sub, agents, atoms)
    elif isinstance(f, (Coal, CoalDual)):
        agents.update(f.group)
        _collect(f.sub, agents, atoms)
    else:
        raise TypeError(f"not a formula: {f!r}")
