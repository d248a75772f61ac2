"""Testing hypotheses against examples.

The background model is computed once.  Extensions of invented predicates
are cached by the exact rules they depend on, so hypotheses that only differ
in their target rules reuse earlier work.  A non-recursive target that no
other rule calls is never materialised: each example is checked by a direct
query against its rules.
"""

from __future__ import annotations

from .evaluator import (DEFAULT_MAX_ATOMS, Evaluator, Outcome, _Budget, _evaluate_component,
                        compile_query, outcome_from_counts, query, stratify,
                        UnstratifiedError)
from .logic import Atom, Const, Program

CACHE_LIMIT = 200_000


def _args(a: Atom) -> tuple:
    return tuple(t.name for t in a.args)


class Tester:
    def __init__(self, background: Program, pos, neg, max_atoms: int = DEFAULT_MAX_ATOMS):
        pos, neg = list(pos), list(neg)
        consts = {t.name for a in pos + neg for t in a.args if type(t) is Const}
        self.evaluator = Evaluator(background, consts, max_atoms)
        self.base = self.evaluator.base_relations()
        self.domain = self.evaluator.domain
        self.max_atoms = max_atoms
        self.pos = pos
        self.neg = neg
        self._cache = {}
        self._plans = {}

    def _plan(self, rule):
        plan = self._plans.get(rule.key)
        if plan is None:
            plan = compile_query(rule, {p: len(r.tuples) for p, r in self.base.items()})
            self._plans[rule.key] = plan
        return plan

    def test(self, program: Program, target: str | None = None) -> Outcome:
        """Classify ``program`` on the examples.  ``target`` defaults to the example predicate."""
        examples = self.pos + self.neg
        if target is None:
            target = examples[0].pred if examples else None
        budget = _Budget(self.max_atoms)
        rels = dict(self.base)
        strat = stratify(program)
        if strat is None:
            raise UnstratifiedError('hypothesis is not stratified')
        by_head = {}
        for r in program:
            by_head.setdefault(r.head.pred, []).append(r)
        called = {p for r in program for p in r.body_preds}
        direct = target in by_head and target not in called
        closure = {}
        for comp in strat.components:
            comp = [p for p in comp if p in by_head]
            if not comp or (direct and comp == [target]):
                continue
            key = frozenset(r.key for p in comp for r in by_head[p])
            deps = {q for p in comp for r in by_head[p] for q in r.body_preds if q in closure}
            for q in deps:
                key |= closure[q]
            for p in comp:
                closure[p] = key
            hit = self._cache.get(key)
            if hit is None:
                _evaluate_component(comp, by_head, rels, self.domain, budget, False)
                hit = {p: rels[p] for p in comp}
                if len(self._cache) > CACHE_LIMIT:
                    self._cache.clear()
                self._cache[key] = hit
            else:
                rels.update(hit)
        if direct:
            plans = [self._plan(r) for r in by_head[target]]

            def covered(e):
                args = _args(e)
                return any(query(pl, rels, args, self.domain, budget) for pl in plans)
        else:
            def covered(e):
                rel = rels.get(e.pred)
                return rel is not None and _args(e) in rel.tuples
        tp = sum(1 for e in self.pos if covered(e))
        fp = sum(1 for e in self.neg if covered(e))
        return outcome_from_counts(tp, fp, len(self.pos), len(self.neg))
