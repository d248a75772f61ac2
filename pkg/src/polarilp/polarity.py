"""Top symbols, polarities and the positive/negative split of a program.

Polarities are computed as a fixpoint over (symbol, parity) pairs along the
call relation: a symbol reached from a top symbol through an even number of
negated calls is positive, through an odd number negative.  Background
predicates (symbols without rules in the analysed program, or explicitly
passed as ``background``) take no part.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .logic import LogicError, Program

POS = 'pos'
NEG = 'neg'


class NotPolarError(LogicError):
    pass


@dataclass(frozen=True)
class PolarityMap:
    top: frozenset
    defs: frozenset
    polarity: dict

    def __getitem__(self, pred):
        return self.polarity[pred]

    def is_pos(self, pred) -> bool:
        return self.polarity.get(pred) == {POS}

    def is_neg(self, pred) -> bool:
        return self.polarity.get(pred) == {NEG}

    @property
    def polar(self) -> bool:
        return all(len(v) == 1 for v in self.polarity.values())


@dataclass(frozen=True)
class PolarPartition:
    pos: Program
    neg: Program


def _heads(program: Program, background) -> frozenset:
    return frozenset(p for p in program.head_preds if p not in background)


def compute_top(program: Program, declared_heads=(), background=frozenset()) -> tuple:
    """Return ``(top, defs)``.

    ``top`` is the largest set of head symbols that never occur negated and
    are only called from rules whose head is itself in the set.
    ``declared_heads`` names the learning targets; they get no special
    treatment beyond being head symbols, since a declared target that is
    called negatively cannot be top by definition.
    """
    background = frozenset(background)
    heads = _heads(program, background)
    negated = {p for r in program for p in r.body_neg}
    top = {p for p in heads if p not in negated}
    changed = True
    while changed:
        changed = False
        for r in program:
            if r.head.pred in top:
                continue
            hit = top & r.body_preds
            if hit:
                top -= hit
                changed = True
    top = frozenset(top)
    return top, heads - top


def assign_polarities(program: Program, top=None, background=frozenset()) -> PolarityMap:
    background = frozenset(background)
    if top is None:
        top, defs = compute_top(program, background=background)
    else:
        top = frozenset(top)
        defs = _heads(program, background) - top
    heads = top | defs
    pol = {p: set() for p in heads}
    work = []
    for p in top:
        pol[p].add(POS)
        work.append((p, POS))
    by_head = {}
    for r in program:
        by_head.setdefault(r.head.pred, []).append(r)
    while work:
        p, parity = work.pop()
        for r in by_head.get(p, ()):
            for lit in r.body:
                q = lit.atom.pred
                if q not in defs:
                    continue
                x = parity if not lit.negated else (NEG if parity == POS else POS)
                if x not in pol[q]:
                    pol[q].add(x)
                    work.append((q, x))
    empty = sorted(p for p, v in pol.items() if not v)
    if empty:
        warnings.warn(f'symbols unreachable from any top symbol: {", ".join(empty)}', stacklevel=2)
    return PolarityMap(top, defs, {p: frozenset(v) for p, v in pol.items()})


def polarity_map(program: Program, background=frozenset()) -> PolarityMap:
    with warnings.catch_warnings():
        warnings.simplefilter('ignore')
        return assign_polarities(program, background=background)


def is_polar(program: Program, background=frozenset()) -> bool:
    return polarity_map(program, background).polar


def partition(program: Program, background=frozenset()) -> PolarPartition:
    pm = polarity_map(program, background)
    if not pm.polar:
        bad = sorted(p for p, v in pm.polarity.items() if len(v) != 1)
        raise NotPolarError(f'program is not polar: {", ".join(bad)}')
    pos, neg = [], []
    for r in program:
        if r.head.pred in background:
            continue
        (pos if pm.is_pos(r.head.pred) else neg).append(r)
    return PolarPartition(Program(pos), Program(neg))
