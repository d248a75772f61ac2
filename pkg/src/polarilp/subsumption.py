"""Theta-subsumption between rules and theories, and polar subsumption."""

from __future__ import annotations

from dataclasses import dataclass

from .logic import Program, Rule, Substitution, Var
from .polarity import partition


@dataclass(frozen=True)
class SubsumptionWitness:
    substitution: Substitution


def _bind(args1, args2, theta: dict, trail: list) -> bool:
    for t1, t2 in zip(args1, args2):
        if type(t1) is Var:
            cur = theta.get(t1)
            if cur is None:
                theta[t1] = t2
                trail.append(t1)
            elif cur != t2:
                return False
        elif t1 != t2:
            return False
    return True


def _undo(theta, trail, mark):
    while len(trail) > mark:
        del theta[trail.pop()]


def clause_subsumes(c1: Rule, c2: Rule) -> SubsumptionWitness | None:
    """A witness theta with c1.theta a subset of c2, or None.

    The head must map onto the head; body literals map onto body literals of
    the same sign.
    """
    h1, h2 = c1.head, c2.head
    if h1.pred != h2.pred or h1.arity != h2.arity:
        return None
    theta, trail = {}, []
    if not _bind(h1.args, h2.args, theta, trail):
        return None
    index = {}
    for lit in c2.body:
        index.setdefault((lit.atom.pred, lit.atom.arity, lit.negated), []).append(lit.atom.args)
    todo = []
    for lit in c1.body:
        cands = index.get((lit.atom.pred, lit.atom.arity, lit.negated))
        if not cands:
            return None
        todo.append((lit.atom.args, cands))
    # most constrained literal first
    todo.sort(key=lambda x: len(x[1]))
    if _search(todo, 0, theta, trail):
        return SubsumptionWitness(Substitution(theta))
    return None


def _search(todo, i, theta, trail) -> bool:
    if i == len(todo):
        return True
    args, cands = todo[i]
    for cand in cands:
        mark = len(trail)
        if _bind(args, cand, theta, trail) and _search(todo, i + 1, theta, trail):
            return True
        _undo(theta, trail, mark)
    return False


def subsumes(c1: Rule, c2: Rule) -> bool:
    return clause_subsumes(c1, c2) is not None


def theory_subsumes(p: Program, q: Program) -> bool:
    """Every rule of ``q`` is subsumed by some rule of ``p``."""
    return all(any(subsumes(r1, r2) for r1 in p) for r2 in q)


def polar_subsumes(p: Program, q: Program, background=frozenset()) -> bool:
    """``p`` polar subsumes ``q``: positive parts compare directly, negative parts flipped."""
    pp = partition(p, background)
    qq = partition(q, background)
    return theory_subsumes(pp.pos, qq.pos) and theory_subsumes(qq.neg, pp.neg)
