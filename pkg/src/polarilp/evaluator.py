"""Stratified bottom-up evaluation.

Programs are evaluated component by component (strongly connected components
of the predicate dependency graph, in topological order) with semi-naive
iteration inside recursive components.  Negated literals only ever refer to
components that are already complete.

Variables that do not occur in a positive body literal range over the active
domain: all constants of the background, the hypothesis and the examples.
This is the Herbrand reading of rules such as ``f(A) :- not inv1(A)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .logic import Atom, Const, LogicError, Program, Rule, Var


class UnstratifiedError(LogicError):
    pass


class ResourceError(RuntimeError):
    pass


DEFAULT_MAX_ATOMS = 10 ** 7


# ---------------------------------------------------------------------------
# stratification

def dependency_edges(program: Program) -> dict:
    """head -> {body predicate: negated?}; an edge is negative if any occurrence is."""
    heads = program.head_preds
    edges = {p: {} for p in heads}
    for r in program:
        out = edges[r.head.pred]
        for lit in r.body:
            q = lit.atom.pred
            if q in heads:
                out[q] = out.get(q, False) or lit.negated
    return edges


def strongly_connected(nodes, succ) -> list:
    """Tarjan's algorithm; components come out callees first."""
    index, low, on_stack = {}, {}, set()
    stack, comps = [], []
    counter = itertools.count()
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = next(counter)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(sorted(comp))
    return comps


@dataclass(frozen=True)
class Stratification:
    mu: dict
    strata: tuple
    components: tuple

    def level(self, pred) -> int:
        return self.mu[pred]


def stratify(program: Program) -> Stratification | None:
    edges = dependency_edges(program)
    comps = strongly_connected(sorted(edges), lambda p: sorted(edges[p]))
    comp_of = {p: i for i, c in enumerate(comps) for p in c}
    mu = {}
    for i, comp in enumerate(comps):
        level = 0
        for p in comp:
            for q, neg in edges[p].items():
                if comp_of[q] == i:
                    if neg:
                        return None
                    continue
                level = max(level, mu[q] + (1 if neg else 0))
        for p in comp:
            mu[p] = level
    top = max(mu.values(), default=-1)
    strata = tuple(tuple(r for r in program if mu[r.head.pred] == k) for k in range(top + 1))
    return Stratification(mu, strata, tuple(tuple(c) for c in comps))


def is_stratified(program: Program) -> bool:
    return stratify(program) is not None


# ---------------------------------------------------------------------------
# models

class Model:
    """The canonical model, stored as one set of argument tuples per predicate."""

    def __init__(self, relations: dict):
        self.relations = relations

    def __contains__(self, a: Atom) -> bool:
        return self.holds(a.pred, tuple(t.name for t in a.args))

    def holds(self, pred: str, args: tuple) -> bool:
        rel = self.relations.get(pred)
        return rel is not None and args in rel

    def extension(self, pred: str) -> frozenset:
        return frozenset(self.relations.get(pred, ()))

    def atoms(self) -> set:
        return {Atom(p, tuple(Const(c) for c in args))
                for p, rel in self.relations.items() for args in rel}

    def __len__(self):
        return sum(len(r) for r in self.relations.values())

    def __eq__(self, other):
        if isinstance(other, Model):
            return self.atoms() == other.atoms()
        return NotImplemented

    def __repr__(self):
        return f'Model({sorted(map(str, self.atoms()))})'


class _Relation:
    __slots__ = ('tuples', 'indexes')

    def __init__(self, tuples=()):
        self.tuples = set(tuples)
        self.indexes = {}

    def index(self, positions: tuple) -> dict:
        idx = self.indexes.get(positions)
        if idx is None:
            idx = {}
            for t in self.tuples:
                idx.setdefault(tuple(t[i] for i in positions), []).append(t)
            self.indexes[positions] = idx
        return idx

    def add_all(self, new: Iterable) -> None:
        for t in new:
            self.tuples.add(t)
            for positions, idx in self.indexes.items():
                idx.setdefault(tuple(t[i] for i in positions), []).append(t)


_EMPTY = _Relation()


# ---------------------------------------------------------------------------
# rule compilation

class _Step:
    """One body literal in evaluation order."""

    __slots__ = ('kind', 'pred', 'key', 'positions', 'binds', 'checks', 'slot', 'delta')

    def __init__(self, kind, pred=None, key=(), positions=(), binds=(), checks=(), slot=None):
        self.kind = kind            # 'pos', 'neg' or 'dom'
        self.pred = pred
        self.key = key              # ((is_slot, value), ...) for the bound positions
        self.positions = positions  # bound argument positions (index key)
        self.binds = binds          # ((arg position, slot), ...) newly bound
        self.checks = checks        # ((arg position, slot), ...) repeated new vars
        self.slot = slot            # for 'dom' steps
        self.delta = False


class _Plan:
    __slots__ = ('head_pred', 'head', 'steps', 'nslots')


def _compile(rule: Rule, sizes: dict, delta_at: int | None = None, head_bound: bool = False) -> _Plan:
    slots = {}

    def slot(v):
        if v not in slots:
            slots[v] = len(slots)
        return slots[v]

    bound = set()
    if head_bound:
        for t in rule.head.args:
            if type(t) is Var:
                bound.add(slot(t))
    positives = [(i, l) for i, l in enumerate(rule.body) if not l.negated]
    negatives = [l for l in rule.body if l.negated]
    steps = []

    def make(lit, kind):
        key, positions, binds, checks = [], [], [], []
        fresh = {}
        for pos, t in enumerate(lit.atom.args):
            if type(t) is Const:
                key.append((False, t.name))
                positions.append(pos)
            else:
                s = slot(t)
                if s in bound:
                    key.append((True, s))
                    positions.append(pos)
                elif s in fresh:
                    checks.append((pos, s))
                else:
                    fresh[s] = pos
                    binds.append((pos, s))
        return _Step(kind, lit.atom.pred, tuple(key), tuple(positions), tuple(binds), tuple(checks))

    def ready_negatives():
        nonlocal negatives
        keep = []
        for lit in negatives:
            if all(slot(v) in bound for v in lit.atom.variables()):
                steps.append(make(lit, 'neg'))
            else:
                keep.append(lit)
        negatives = keep

    ready_negatives()
    remaining = list(positives)
    if delta_at is not None:
        first = next(x for x in remaining if x[0] == delta_at)
        remaining.remove(first)
        order = [first]
    else:
        order = []
    while order or remaining:
        if order:
            i, lit = order.pop()
        else:
            def score(x):
                lit = x[1]
                nbound = sum(1 for t in lit.atom.args
                             if type(t) is Const or slot(t) in bound)
                return (-(nbound == lit.atom.arity), -nbound, sizes.get(lit.atom.pred, 0), x[0])
            i, lit = min(remaining, key=score)
            remaining.remove((i, lit))
        st = make(lit, 'pos')
        st.delta = (i == delta_at)
        steps.append(st)
        for _, s in st.binds:
            bound.add(s)
        ready_negatives()
    # variables left unbound range over the domain
    pending = [v for v in itertools.chain(rule.head.variables(),
                                          (v for l in negatives for v in l.atom.variables()))
               if slot(v) not in bound]
    for v in dict.fromkeys(pending):
        s = slot(v)
        steps.append(_Step('dom', slot=s))
        bound.add(s)
        ready_negatives()
    plan = _Plan()
    plan.head_pred = rule.head.pred
    plan.head = tuple((True, slot(t)) if type(t) is Var else (False, t.name) for t in rule.head.args)
    plan.steps = tuple(steps)
    plan.nslots = len(slots)
    return plan


# ---------------------------------------------------------------------------
# evaluation

class _Budget:
    __slots__ = ('left',)

    def __init__(self, n):
        self.left = n

    def spend(self, n):
        self.left -= n
        if self.left < 0:
            raise ResourceError('ground atom budget exceeded')


def _run(plan: _Plan, rels: dict, delta: dict, domain: tuple, env: list, out: set, budget: _Budget):
    steps = plan.steps
    n = len(steps)
    head = plan.head

    def go(i):
        if i == n:
            out.add(tuple(env[v] if s else v for s, v in head))
            return
        st = steps[i]
        kind = st.kind
        if kind == 'pos':
            rel = (delta if st.delta else rels).get(st.pred, _EMPTY)
            key = tuple(env[v] if s else v for s, v in st.key)
            if st.positions:
                cands = rel.index(st.positions).get(key, ())
            else:
                cands = rel.tuples
            binds, checks = st.binds, st.checks
            for t in cands:
                for pos, s in binds:
                    env[s] = t[pos]
                if checks and any(t[pos] != env[s] for pos, s in checks):
                    continue
                go(i + 1)
        elif kind == 'neg':
            rel = rels.get(st.pred, _EMPTY)
            key = tuple(env[v] if s else v for s, v in st.key)
            if key not in rel.tuples:
                go(i + 1)
        else:
            budget.spend(len(domain))
            s = st.slot
            for c in domain:
                env[s] = c
                go(i + 1)

    go(0)


def _holds(plan: _Plan, rels: dict, domain: tuple, env: list, budget: _Budget) -> bool:
    """Does the body of ``plan`` have a match extending ``env``?  Stops at the first."""
    steps = plan.steps
    n = len(steps)

    def go(i):
        if i == n:
            return True
        st = steps[i]
        kind = st.kind
        if kind == 'pos':
            rel = rels.get(st.pred, _EMPTY)
            key = tuple(env[v] if s else v for s, v in st.key)
            cands = rel.index(st.positions).get(key, ()) if st.positions else rel.tuples
            binds, checks = st.binds, st.checks
            for t in cands:
                for pos, s in binds:
                    env[s] = t[pos]
                if checks and any(t[pos] != env[s] for pos, s in checks):
                    continue
                if go(i + 1):
                    return True
            return False
        if kind == 'neg':
            key = tuple(env[v] if s else v for s, v in st.key)
            return key not in rels.get(st.pred, _EMPTY).tuples and go(i + 1)
        budget.spend(len(domain))
        s = st.slot
        for c in domain:
            env[s] = c
            if go(i + 1):
                return True
        return False

    return go(0)


def compile_query(rule: Rule, sizes: dict | None = None) -> _Plan:
    """Plan for checking single ground instances of ``rule``'s head."""
    return _compile(rule, sizes or {}, head_bound=True)


def query(plan: _Plan, rels: dict, args: tuple, domain: tuple = (),
          budget: _Budget | None = None) -> bool:
    """Is the head of ``plan`` instantiated to ``args`` derivable in one step from ``rels``?"""
    env = [None] * plan.nslots
    for (is_slot, v), a in zip(plan.head, args):
        if not is_slot:
            if v != a:
                return False
        elif env[v] is None:
            env[v] = a
        elif env[v] != a:
            return False
    return _holds(plan, rels, domain, env, budget or _Budget(DEFAULT_MAX_ATOMS))


class Evaluator:
    """Evaluates hypotheses on top of a fixed background program.

    The background is evaluated once per domain and its model shared by
    every later call.  Instances are not thread-safe; use one per worker.
    """

    def __init__(self, background: Program, constants: Iterable[str] = (),
                 max_atoms: int = DEFAULT_MAX_ATOMS):
        self.background = background
        self.max_atoms = max_atoms
        self.domain = tuple(sorted(set(constants) | background.constants()))
        self._base = None

    def _budget(self):
        return _Budget(self.max_atoms)

    def base_relations(self) -> dict:
        if self._base is None:
            rels = {}
            _evaluate_into(self.background, rels, self.domain, self._budget())
            self._base = rels
        return self._base

    def evaluate(self, hypothesis: Program) -> Model:
        rels = dict(self.base_relations())
        domain = self.domain
        extra = hypothesis.constants() - set(domain)
        if extra:
            domain = tuple(sorted(set(domain) | extra))
        clash = hypothesis.head_preds & self.background.head_preds
        if clash:
            # hypothesis adds rules to background predicates: evaluate jointly
            rels = {}
            _evaluate_into(self.background | hypothesis, rels, domain, self._budget())
        else:
            _evaluate_into(hypothesis, rels, domain, self._budget())
        return Model({p: r.tuples for p, r in rels.items()})

    def entails(self, hypothesis: Program, e: Atom) -> bool:
        return e in self.evaluate(hypothesis)


def _evaluate_into(program: Program, rels: dict, domain: tuple, budget: _Budget,
                   naive: bool = False) -> None:
    strat = stratify(program)
    if strat is None:
        raise UnstratifiedError('program is not stratified')
    by_head = {}
    for r in program:
        by_head.setdefault(r.head.pred, []).append(r)
    for comp in strat.components:
        _evaluate_component(comp, by_head, rels, domain, budget, naive)


def _evaluate_component(comp, by_head, rels, domain, budget, naive):
    comp_set = set(comp)
    rules = [r for p in comp for r in by_head.get(p, ())]
    for p in comp:
        if p not in rels:
            rels[p] = _Relation()
        else:
            rels[p] = _Relation(rels[p].tuples)
    sizes = {p: len(r.tuples) for p, r in rels.items()}
    recursive = [r for r in rules if any(not l.negated and l.atom.pred in comp_set for l in r.body)]
    base = [r for r in rules if r not in recursive] if recursive else rules

    def derive(plan, delta):
        out = set()
        _run(plan, rels, delta, domain, [None] * plan.nslots, out, budget)
        return out

    new = {p: set() for p in comp}
    for r in base:
        plan = _compile(r, sizes)
        new[plan.head_pred] |= derive(plan, {})
    for p in comp:
        fresh = new[p] - rels[p].tuples
        budget.spend(len(fresh))
        rels[p].add_all(fresh)
        new[p] = fresh
    if not recursive:
        return
    if naive:
        plans = [_compile(r, sizes) for r in rules]
        while True:
            changed = False
            for plan in plans:
                fresh = derive(plan, {}) - rels[plan.head_pred].tuples
                if fresh:
                    budget.spend(len(fresh))
                    rels[plan.head_pred].add_all(fresh)
                    changed = True
            if not changed:
                return
    plans = []
    for r in recursive:
        for i, lit in enumerate(r.body):
            if not lit.negated and lit.atom.pred in comp_set:
                plans.append(_compile(r, sizes, delta_at=i))
    # first round: everything derived so far counts as new
    delta = {p: _Relation(rels[p].tuples) for p in comp}
    while any(delta[p].tuples for p in comp):
        found = {p: set() for p in comp}
        for plan in plans:
            found[plan.head_pred] |= derive(plan, delta)
        delta = {}
        for p in comp:
            fresh = found[p] - rels[p].tuples
            budget.spend(len(fresh))
            rels[p].add_all(fresh)
            delta[p] = _Relation(fresh)


def _constants_of(atoms: Iterable[Atom]) -> set:
    return {t.name for a in atoms for t in a.args if type(t) is Const}


def evaluate(b: Program, h: Program, constants: Iterable[str] = (),
             max_atoms: int = DEFAULT_MAX_ATOMS, naive: bool = False) -> Model:
    """Canonical model of ``b`` together with ``h``."""
    program = b | h
    domain = tuple(sorted(set(constants) | program.constants()))
    rels = {}
    _evaluate_into(program, rels, domain, _Budget(max_atoms), naive=naive)
    return Model({p: r.tuples for p, r in rels.items()})


def entails(b: Program, h: Program, e: Atom, constants: Iterable[str] = ()) -> bool:
    return e in evaluate(b, h, set(constants) | _constants_of([e]))


# ---------------------------------------------------------------------------
# outcomes

@dataclass(frozen=True)
class Outcome:
    complete: bool
    consistent: bool
    partially_complete: bool
    totally_incomplete: bool
    pos_covered: int
    neg_covered: int
    num_pos: int
    num_neg: int

    @property
    def solution(self) -> bool:
        return self.complete and self.consistent

    @property
    def incomplete(self) -> bool:
        return not self.complete

    @property
    def inconsistent(self) -> bool:
        return not self.consistent


def outcome_from_counts(tp: int, fp: int, num_pos: int, num_neg: int) -> Outcome:
    return Outcome(
        complete=tp == num_pos,
        consistent=fp == 0,
        partially_complete=tp > 0,
        totally_incomplete=tp == 0,
        pos_covered=tp,
        neg_covered=fp,
        num_pos=num_pos,
        num_neg=num_neg,
    )


def classify(h: Program, b: Program, epos: Iterable[Atom], eneg: Iterable[Atom]) -> Outcome:
    epos, eneg = list(epos), list(eneg)
    model = evaluate(b, h, _constants_of(epos) | _constants_of(eneg))
    tp = sum(1 for e in epos if e in model)
    fp = sum(1 for e in eneg if e in model)
    return outcome_from_counts(tp, fp, len(epos), len(eneg))
