"""Semantic evaluation: truth sets, pointed checks, witness synthesis.

Truth sets are computed bottom-up with memoisation keyed on (model
identity, subformula identity); updated models get fresh identities and
are cached per (parent, extension), so repeated announcements of the same
set are evaluated once.  Every quantified operator is evaluated on the
bisimulation contraction of the current model, where each union of
equivalence classes is the knowledge set of some epistemic formula, and
the verdict is pulled back through the contraction map.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import (
    And,
    Ann,
    AnnDual,
    Atom,
    Bot,
    Coal,
    CoalDual,
    Formula,
    GroupKnowledgeFormula,
    Iff,
    Imp,
    Know,
    KnowDual,
    Not,
    Or,
    RelGroup,
    RelGroupDual,
    Top,
    agents_in,
    atoms_in,
)
from .model import (
    DEFAULT_ENUMERATION_CAP,
    ChoiceSet,
    EpistemicModel,
    StateSet,
    characteristic_formulas,
    choice_sets,
    contract,
    definable_formula,
    update,
)


class UndeclaredSymbol(Exception):
    """The formula mentions an agent or atom the model does not declare."""


class NotQuantified(Exception):
    """The operation needs a quantified announcement operator on top."""


_QUANTIFIED = (RelGroup, RelGroupDual, Coal, CoalDual)


def check_symbols(model: EpistemicModel, f: Formula) -> None:
    unknown_agents = agents_in(f) - set(model.agents)
    if unknown_agents:
        raise UndeclaredSymbol(f"unknown agent {sorted(unknown_agents)[0]!r}")
    unknown_atoms = atoms_in(f) - set(model.atoms)
    if unknown_atoms:
        raise UndeclaredSymbol(f"unknown atom {sorted(unknown_atoms)[0]!r}")


@dataclass
class TraceEntry:
    operator: str
    decomposition: str
    verdict: bool


@dataclass
class WitnessReport:
    """Outcome of a quantified check, with the responsible announcement
    when the verdict direction admits one.

    `recheck` is the formula with the witness substituted for the
    quantifier; evaluating it must yield `recheck_expected`.
    """

    verdict: bool
    witness: GroupKnowledgeFormula | None
    trace: list[TraceEntry] = field(default_factory=list)
    recheck: Formula | None = None
    recheck_expected: bool | None = None


class Evaluator:
    """Shared caches for a batch of queries against related models.

    Pure from the outside; results never depend on query order.  All cache
    keys use object identity, and every keyed object is pinned so that
    identities stay unique for the evaluator's lifetime.
    """

    def __init__(self, cap: int = DEFAULT_ENUMERATION_CAP):
        self.cap = cap
        self._truth: dict[tuple[int, int], StateSet] = {}
        self._subs: dict[tuple[int, int], tuple[EpistemicModel, tuple[int, ...]]] = {}
        self._contr: dict[int, tuple[EpistemicModel, tuple[int, ...]]] = {}
        self._choices: dict[tuple[int, frozenset[str]], list[ChoiceSet]] = {}
        self._chars: dict[int, dict[str, Formula]] = {}
        self._pin: list[object] = []

    def holds(self, model: EpistemicModel, state: str, f: Formula) -> bool:
        return bool(self.truth_set(model, f) >> model.state_index(state) & 1)

    def truth_set(self, model: EpistemicModel, f: Formula) -> StateSet:
        key = (id(model), id(f))
        hit = self._truth.get(key)
        if hit is not None:
            return hit
        mask = self._compute(model, f)
        self._truth[key] = mask
        self._pin.append(f)
        self._pin.append(model)
        return mask

    def _compute(self, model: EpistemicModel, f: Formula) -> StateSet:
        full = model.full
        if isinstance(f, Atom):
            try:
                return model.valuation_mask(f.name)
            except KeyError:
                raise UndeclaredSymbol(f"unknown atom {f.name!r}") from None
        if isinstance(f, Top):
            return full
        if isinstance(f, Bot):
            return 0
        if isinstance(f, Not):
            return full & ~self.truth_set(model, f.sub)
        if isinstance(f, And):
            return self.truth_set(model, f.left) & self.truth_set(model, f.right)
        if isinstance(f, Or):
            return self.truth_set(model, f.left) | self.truth_set(model, f.right)
        if isinstance(f, Imp):
            return (full & ~self.truth_set(model, f.left)) | self.truth_set(model, f.right)
        if isinstance(f, Iff):
            return full & ~(self.truth_set(model, f.left) ^ self.truth_set(model, f.right))
        if isinstance(f, Know):
            t = self.truth_set(model, f.sub)
            mask = 0
            for block in model.blocks(f.agent):
                if block & ~t == 0:
                    mask |= block
            return mask
        if isinstance(f, KnowDual):
            t = self.truth_set(model, f.sub)
            mask = 0
            for block in model.blocks(f.agent):
                if block & t:
                    mask |= block
            return mask
        if isinstance(f, Ann):
            s = self.truth_set(model, f.ann)
            if s == 0:
                return full
            return (full & ~s) | self._after(model, s, f.sub)
        if isinstance(f, AnnDual):
            s = self.truth_set(model, f.ann)
            if s == 0:
                return 0
            return self._after(model, s, f.sub)
        if isinstance(f, _QUANTIFIED):
            return self._quantified(model, f)
        raise TypeError(f"not a formula: {f!r}")

    def _after(self, model: EpistemicModel, extension: StateSet, sub: Formula) -> StateSet:
        """States of `extension` satisfying `sub` once the model is
        restricted to `extension` (as a mask over the parent model)."""
        submodel, embed = self.submodel(model, extension)
        t = self.truth_set(submodel, sub)
        mask = 0
        j = 0
        while t:
            if t & 1:
                mask |= embed[j]
            t >>= 1
            j += 1
        return mask

    def submodel(
        self, model: EpistemicModel, extension: StateSet
    ) -> tuple[EpistemicModel, tuple[int, ...]]:
        key = (id(model), extension)
        hit = self._subs.get(key)
        if hit is not None:
            return hit
        sub = update(model, extension)
        embed = tuple(1 << model.state_index(name) for name in sub.states)
        self._subs[key] = (sub, embed)
        self._pin.append(model)
        return sub, embed

    def contraction(self, model: EpistemicModel) -> tuple[EpistemicModel, tuple[int, ...]]:
        """Contracted model plus the index map old state -> quotient state."""
        hit = self._contr.get(id(model))
        if hit is not None:
            return hit
        quotient, mapping = contract(model)
        harr = tuple(quotient.state_index(mapping[name]) for name in model.states)
        self._contr[id(model)] = (quotient, harr)
        self._pin.append(model)
        return quotient, harr

    def choices(self, model: EpistemicModel, group: frozenset[str]) -> list[ChoiceSet]:
        key = (id(model), group)
        hit = self._choices.get(key)
        if hit is None:
            hit = choice_sets(model, group, cap=self.cap)
            self._choices[key] = hit
            self._pin.append(model)
        return hit

    def characteristics(self, model: EpistemicModel) -> dict[str, Formula]:
        hit = self._chars.get(id(model))
        if hit is None:
            hit = characteristic_formulas(model)
            self._chars[id(model)] = hit
            self._pin.append(model)
        return hit

    def _quantified(self, model: EpistemicModel, f: Formula) -> StateSet:
        quotient, harr = self.contraction(model)
        full = quotient.full
        if isinstance(f, (RelGroup, RelGroupDual)):
            chi = self.truth_set(quotient, f.cond)
            options = self.choices(quotient, f.group)
            if isinstance(f, RelGroup):
                res = chi
                for c in options:
                    if res == 0:
                        break
                    x = c.extension & chi
                    if x == 0:
                        continue
                    res &= ~x | self._after(quotient, x, f.sub)
            else:
                some = 0
                for c in options:
                    x = c.extension & chi
                    if x:
                        some |= self._after(quotient, x, f.sub)
                res = (full & ~chi) | some
        else:
            options = self.choices(quotient, f.group)
            responses = self.choices(quotient, frozenset(quotient.agents) - f.group)
            if isinstance(f, Coal):
                res = full
                for c in options:
                    if res == 0:
                        break
                    if c.extension == 0:
                        continue
                    good = 0
                    for d in responses:
                        x = c.extension & d.extension
                        if x:
                            good |= self._after(quotient, x, f.sub)
                    res &= ~c.extension | good
            else:
                res = 0
                for c in options:
                    if res == full:
                        break
                    if c.extension == 0:
                        continue
                    acc = c.extension
                    for d in responses:
                        if acc == 0:
                            break
                        x = c.extension & d.extension
                        part = ~d.extension
                        if x:
                            part |= self._after(quotient, x, f.sub)
                        acc &= part
                    res |= acc
        # pull the quotient-level verdict back through the contraction map
        lifted = 0
        for i, h in enumerate(harr):
            if res >> h & 1:
                lifted |= 1 << i
        return lifted


def truth_set(model: EpistemicModel, f: Formula, cap: int = DEFAULT_ENUMERATION_CAP) -> StateSet:
    """Bitmask of the states where f holds."""
    check_symbols(model, f)
    return Evaluator(cap=cap).truth_set(model, f)


def evaluate(
    model: EpistemicModel, state: str, f: Formula, cap: int = DEFAULT_ENUMERATION_CAP
) -> bool:
    """Does f hold at the given state?"""
    check_symbols(model, f)
    return Evaluator(cap=cap).holds(model, state, f)


def _decomposition_text(quotient: EpistemicModel, c: ChoiceSet) -> str:
    if not c.per_agent_union:
        return "{} -> " + "{" + ",".join(quotient.states_in(c.extension)) + "}"
    parts = [
        f"{agent}:{{{','.join(quotient.states_in(mask))}}}" for agent, mask in c.per_agent_union
    ]
    return " ".join(parts) + " -> {" + ",".join(quotient.states_in(c.extension)) + "}"


def evaluate_witness(
    model: EpistemicModel, state: str, f: Formula, cap: int = DEFAULT_ENUMERATION_CAP
) -> WitnessReport:
    """Evaluate a quantified operator and surface the responsible
    announcement.

    A witness exists when the verdict hinges on one choice: an existential
    that succeeds, or a universal refuted by a specific announcement.
    Vacuous verdicts (condition false at the point) carry none.
    """
    if not isinstance(f, _QUANTIFIED):
        raise NotQuantified("the outermost operator is not a quantified announcement")
    check_symbols(model, f)
    ev = Evaluator(cap=cap)
    quotient, harr = ev.contraction(model)
    v = harr[model.state_index(state)]
    vbit = 1 << v
    trace: list[TraceEntry] = []
    chosen: ChoiceSet | None = None

    if isinstance(f, (RelGroup, RelGroupDual)):
        op = "[G,chi]" if isinstance(f, RelGroup) else "<G,chi>"
        chi = ev.truth_set(quotient, f.cond)
        chi_here = bool(chi & vbit)
        first_fail: ChoiceSet | None = None
        first_ok: ChoiceSet | None = None
        if chi_here:
            for c in ev.choices(quotient, f.group):
                x = c.extension & chi
                if not (x & vbit):
                    continue
                sub_ok = bool(ev._after(quotient, x, f.sub) & vbit)
                trace.append(TraceEntry(op, _decomposition_text(quotient, c), sub_ok))
                if sub_ok and first_ok is None:
                    first_ok = c
                if not sub_ok and first_fail is None:
                    first_fail = c
        if isinstance(f, RelGroup):
            verdict = chi_here and first_fail is None
            if not verdict and chi_here:
                chosen = first_fail
        else:
            verdict = (not chi_here) or first_ok is not None
            if verdict and chi_here:
                chosen = first_ok
    else:
        op = "[<G>]" if isinstance(f, Coal) else "<[G]>"
        responses = [
            d for d in ev.choices(quotient, frozenset(quotient.agents) - f.group)
            if d.extension & vbit
        ]
        verdict = isinstance(f, Coal)
        for c in ev.choices(quotient, f.group):
            if not (c.extension & vbit):
                continue
            if isinstance(f, Coal):
                # does some simultaneous response rescue f.sub?
                entry_ok = any(
                    ev._after(quotient, c.extension & d.extension, f.sub) & vbit
                    for d in responses
                )
            else:
                # does f.sub survive every simultaneous response?
                entry_ok = all(
                    ev._after(quotient, c.extension & d.extension, f.sub) & vbit
                    for d in responses
                )
            trace.append(TraceEntry(op, _decomposition_text(quotient, c), entry_ok))
            if isinstance(f, Coal) and not entry_ok and chosen is None:
                verdict = False
                chosen = c
            if isinstance(f, CoalDual) and entry_ok and chosen is None:
                verdict = True
                chosen = c

    witness = None
    recheck: Formula | None = None
    expected: bool | None = None
    if chosen is not None:
        witness = definable_formula(quotient, chosen, ev.characteristics(quotient))
        den = witness.denotation()
        if isinstance(f, RelGroup):
            recheck, expected = Ann(And(den, f.cond), f.sub), False
        elif isinstance(f, RelGroupDual):
            recheck, expected = AnnDual(And(den, f.cond), f.sub), True
        else:
            others = frozenset(model.agents) - f.group
            if isinstance(f, Coal):
                recheck, expected = RelGroupDual(others, den, f.sub), False
            else:
                recheck, expected = RelGroup(others, den, f.sub), True
    return WitnessReport(verdict, witness, trace, recheck, expected)


def evaluate_coalition_alt(
    model: EpistemicModel, state: str, f: Formula, cap: int = DEFAULT_ENUMERATION_CAP
) -> bool:
    """Coalition operators through their group-announcement reformulation.

    Each of the coalition's options is turned into a concrete announcement
    and handed to the relativised group operator of the remaining agents;
    an independent route that must agree with evaluate().
    """
    if not isinstance(f, (Coal, CoalDual)):
        raise NotQuantified("the outermost operator is not a coalition announcement")
    check_symbols(model, f)
    ev = Evaluator(cap=cap)
    quotient, harr = ev.contraction(model)
    v = quotient.states[harr[model.state_index(state)]]
    others = frozenset(quotient.agents) - f.group
    chars = ev.characteristics(quotient)
    options = ev.choices(quotient, f.group)
    if isinstance(f, Coal):
        return all(
            ev.holds(
                quotient, v,
                RelGroupDual(others, definable_formula(quotient, c, chars).denotation(), f.sub),
            )
            for c in options
        )
    return any(
        ev.holds(
            quotient, v,
            RelGroup(others, definable_formula(quotient, c, chars).denotation(), f.sub),
        )
        for c in options
    )
