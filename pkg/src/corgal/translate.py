"""Reduction of public announcements to the purely epistemic language."""

from __future__ import annotations

from .formula import (
    And,
    Ann,
    Atom,
    Bot,
    Formula,
    Imp,
    Know,
    Not,
    Stratum,
    Top,
    desugar,
    stratum,
)


class StratumError(Exception):
    """The formula contains group or coalition operators, which have no
    announcement-free equivalent."""


def pal_to_el(f: Formula) -> Formula:
    """Rewrite announcements away, clause by clause, without simplifying.

    Announcement-free connectives translate homomorphically; an
    announcement is pushed through the shape of its body.  Each step
    strictly shrinks the weighted size measure, so the recursion
    terminates.  Diamond duals are desugared first.
    """
    g = desugar(f)
    if stratum(g) > Stratum.PAL:
        raise StratumError("group and coalition operators cannot be translated")
    return _translate(g)


def _translate(f: Formula) -> Formula:
    if isinstance(f, (Atom, Top, Bot)):
        return f
    if isinstance(f, Not):
        return Not(_translate(f.sub))
    if isinstance(f, And):
        return And(_translate(f.left), _translate(f.right))
    if isinstance(f, Imp):
        # arises only from this function's own right-hand sides
        return Imp(_translate(f.left), _translate(f.right))
    if isinstance(f, Know):
        return Know(f.agent, _translate(f.sub))
    if isinstance(f, Ann):
        ann, body = f.ann, f.sub
        if isinstance(body, (Atom, Top, Bot)):
            return _translate(Imp(ann, body))
        if isinstance(body, Not):
            return _translate(Imp(ann, Not(Ann(ann, body.sub))))
        if isinstance(body, And):
            return _translate(And(Ann(ann, body.left), Ann(ann, body.right)))
        if isinstance(body, Know):
            return _translate(Imp(ann, Know(body.agent, Ann(ann, body.sub))))
        if isinstance(body, Ann):
            return _translate(Ann(And(ann, Ann(ann, body.ann)), body.sub))
    raise TypeError(f"unexpected node in desugared input: {f!r}")
