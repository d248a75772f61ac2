"""Rewriting a stratified program into an equivalent polar program.

Two rewrites are applied to fixpoint, both of which rename a single body
occurrence of a pivot symbol ``p`` to a fresh copy ``p'`` and duplicate the
definition of ``p`` under the new name:

* flattening renames a positive occurrence of a symbol that is also used
  negatively, so no symbol is used both ways;
* stretching renames an occurrence whose trace (the parity of negations on
  the calling path) differs from the trace of another occurrence.

The unit that is copied is the strongly connected component of the pivot in
the call graph.  For a non-recursive or self-recursive pivot this is its own
definition; for mutually recursive pivots the whole component is copied so
that the copy never calls back into the original.  Occurrences inside the
pivot's own component are never renamed, and both rewrites look at calls
into a component as a whole: entering ``{q, s}`` positively through ``q``
and negatively through ``s`` is as much a conflict as using ``q`` both ways.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .evaluator import UnstratifiedError, evaluate, strongly_connected, stratify
from .logic import Atom, Literal, LogicError, Program, Rule
from .polarity import compute_top

PLUS = '+'
MINUS = '-'

MAX_STEPS = 10_000


class RewriteError(LogicError):
    pass


def bowtie(x: str, y: str) -> str:
    """Parity combination: equal signs give ``+``, different signs ``-``."""
    return PLUS if x == y else MINUS


def _sign(lit: Literal) -> str:
    return MINUS if lit.negated else PLUS


@dataclass(frozen=True)
class RewriteStep:
    kind: str           # 'flatten' or 'stretch'
    pivot: str
    fresh: dict         # original symbol -> fresh symbol
    rule_index: int     # position of the rule whose occurrence was renamed
    rule: Rule          # that rule after renaming
    copied: tuple       # the duplicated definitions

    def __str__(self):
        names = ', '.join(f'{a}->{b}' for a, b in sorted(self.fresh.items()))
        return f'{self.kind} {self.pivot}: {names} in rule {self.rule_index + 1} ({len(self.copied)} rules copied)'


@dataclass
class RewriteLog:
    steps: list = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def format(self) -> str:
        return ''.join(f'% {i}: {step}\n' for i, step in enumerate(self.steps, 1))


@dataclass(frozen=True)
class TraceMap:
    """Trace sets per (rule index, symbol), plus per-occurrence traces."""
    traces: dict
    occurrences: dict   # (rule index, literal index) -> frozenset
    heads: dict         # head symbol -> frozenset

    def __getitem__(self, key):
        return self.traces[key]

    def get(self, key, default=None):
        return self.traces.get(key, default)


def _component_list(program: Program) -> list:
    """Components of the call graph over head symbols, callees first."""
    heads = program.head_preds
    calls = {p: set() for p in heads}
    for r in program:
        calls[r.head.pred].update(q for q in r.body_preds if q in heads)
    return [frozenset(c) for c in strongly_connected(sorted(heads), lambda p: sorted(calls[p]))]


def _components(program: Program) -> dict:
    return {p: c for c in _component_list(program) for p in c}


def _external_occurrences(program: Program, comp_of: dict, p: str):
    """(rule index, literal index) of body occurrences of p outside its component."""
    comp = comp_of[p]
    for i, r in enumerate(program.rules):
        if r.head.pred in comp:
            continue
        for j, lit in enumerate(r.body):
            if lit.atom.pred == p:
                yield i, j


def flat(program: Program) -> set:
    """Symbols with an outside positive occurrence whose component is also called negatively."""
    comp_of = _components(program)
    negated = set()
    for p in program.head_preds:
        for i, j in _external_occurrences(program, comp_of, p):
            if program.rules[i].body[j].negated:
                negated.add(comp_of[p])
    out = set()
    for p in program.head_preds:
        if comp_of[p] not in negated:
            continue
        for i, j in _external_occurrences(program, comp_of, p):
            if not program.rules[i].body[j].negated:
                out.add(p)
                break
    return out


def _fresh_names(program: Program, comp: frozenset, counter: int) -> tuple:
    used = program.preds
    k = counter
    while True:
        names = {q: f'{q}_{k}' for q in sorted(comp)}
        if not (set(names.values()) & used):
            return names, k
        k += 1


def _rename_atom(a: Atom, names: dict) -> Atom:
    return Atom(names.get(a.pred, a.pred), a.args)


def _rename_rule(r: Rule, names: dict) -> Rule:
    return Rule(_rename_atom(r.head, names),
                tuple(Literal(_rename_atom(l.atom, names), l.negated) for l in r.body))


def _rewrite(program: Program, comp_of: dict, p: str, i: int, j: int,
             counter: int, kind: str) -> tuple:
    comp = comp_of[p]
    names, k = _fresh_names(program, comp, counter)
    rules = list(program.rules)
    target = rules[i]
    lit = target.body[j]
    body = list(target.body)
    body[j] = Literal(_rename_atom(lit.atom, {p: names[p]}), lit.negated)
    rules[i] = Rule(target.head, tuple(body))
    copies = tuple(_rename_rule(r, names) for r in program.rules if r.head.pred in comp)
    last = max(n for n, r in enumerate(program.rules) if r.head.pred in comp)
    rules[last + 1:last + 1] = copies
    step = RewriteStep(kind, p, names, i, rules[i], copies)
    return Program(rules), step, k


def flatten_step(program: Program, p: str, counter: int = 1) -> Program:
    return _flatten_step(program, p, counter)[0]


def _flatten_step(program: Program, p: str, counter: int):
    if p not in flat(program):
        raise RewriteError(f'{p} cannot be flattened')
    comp_of = _components(program)
    for i, j in _external_occurrences(program, comp_of, p):
        if not program.rules[i].body[j].negated:
            return _rewrite(program, comp_of, p, i, j, counter, 'flatten')
    raise AssertionError('unreachable')


def flatten(program: Program, log: RewriteLog | None = None, counter: int = 1) -> Program:
    if stratify(program) is None:
        raise UnstratifiedError('program is not stratified')
    return _flatten(program, log if log is not None else RewriteLog(), counter)[0]


def _flatten(program, log, counter):
    for _ in range(MAX_STEPS):
        pivots = flat(program)
        if not pivots:
            return program, counter
        program, step, k = _flatten_step(program, min(pivots), counter)
        log.steps.append(step)
        counter = k + 1
    raise RewriteError('flattening did not terminate')


def compute_traces(program: Program) -> TraceMap:
    """Trace sets of every symbol occurrence.

    A component that nothing outside it calls has trace ``+``; otherwise its
    trace collects ``sign ⋈ trace(caller)`` over all outside calling
    occurrences.  Components are visited callers first.
    """
    comps = _component_list(program)
    comp_of = {p: c for c in comps for p in c}
    heads = program.head_preds
    head_trace = {}
    for comp in reversed(comps):    # callers before callees
        acc = set()
        for q in comp:
            for i, j in _external_occurrences(program, comp_of, q):
                r = program.rules[i]
                for h in head_trace[r.head.pred]:
                    acc.add(bowtie(_sign(r.body[j]), h))
        value = frozenset(acc) if acc else frozenset({PLUS})
        for q in comp:
            head_trace[q] = value
    occ, traces = {}, {}
    for i, r in enumerate(program.rules):
        h = head_trace[r.head.pred]
        traces[(i, r.head.pred)] = h
        for j, lit in enumerate(r.body):
            if lit.atom.pred not in heads:
                continue
            t = frozenset(bowtie(_sign(lit), x) for x in h)
            occ[(i, j)] = t
            key = (i, lit.atom.pred)
            traces[key] = traces.get(key, frozenset()) | t
    return TraceMap(traces, occ, head_trace)


def _stretch_candidate(program: Program, p: str, comp_of: dict, tm: TraceMap):
    """An outside occurrence of a member of p's component whose trace differs from another."""
    comp = comp_of[p]
    settled = [(i, j) for q in sorted(comp) for i, j in _external_occurrences(program, comp_of, q)
               if len(tm.occurrences[(i, j)]) == 1]
    if not settled:
        return None
    settled.sort()
    ref = settled[0]
    ref_head = program.rules[ref[0]].head.pred
    for i, j in settled[1:]:
        if tm.occurrences[(i, j)] != tm.occurrences[ref] and program.rules[i].head.pred != ref_head:
            return i, j
    return None


def stret(program: Program) -> set:
    comp_of = _components(program)
    tm = compute_traces(program)
    return {p for p in program.head_preds if _stretch_candidate(program, p, comp_of, tm)}


def stretch_step(program: Program, p: str, counter: int = 1) -> Program:
    return _stretch_step(program, p, counter)[0]


def _stretch_step(program, p, counter):
    comp_of = _components(program)
    cand = _stretch_candidate(program, p, comp_of, compute_traces(program)) \
        if p in program.head_preds else None
    if cand is None:
        raise RewriteError(f'{p} cannot be stretched')
    i, j = cand
    return _rewrite(program, comp_of, program.rules[i].body[j].atom.pred, i, j, counter, 'stretch')


def _stretch(program, log, counter):
    for _ in range(MAX_STEPS):
        pivots = stret(program)
        if not pivots:
            return program, counter
        program, step, k = _stretch_step(program, min(pivots), counter)
        log.steps.append(step)
        counter = k + 1
    raise RewriteError('stretching did not terminate')


def polarise(program: Program) -> tuple:
    """Return ``(polar_program, log)``."""
    if stratify(program) is None:
        raise UnstratifiedError('program is not stratified')
    log = RewriteLog()
    program, counter = _flatten(program, log, 1)
    program, _ = _stretch(program, log, counter)
    return program, log


def check_equivalence(s: Program, p: Program, b: Program, symbols=None) -> bool:
    """Do ``s`` and ``p`` entail the same ground atoms (with background ``b``)?

    Compared on ``top(s)`` unless ``symbols`` is given.
    """
    if symbols is None:
        symbols = compute_top(s)[0]
    constants = s.constants() | p.constants() | b.constants()
    m1 = evaluate(b, s, constants)
    m2 = evaluate(b, p, constants)
    return all(m1.extension(q) == m2.extension(q) for q in symbols)
