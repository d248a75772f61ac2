"""Generate, test and constrain over polar programs with predicate invention.

Hypotheses are enumerated natively in order of cost (number of literals).
For each cost the enumerator walks over the number of invented symbols, their
arities, and the split of rules and literals between the target and the
invented symbols.  Invented symbol ``inv<i>`` may only call ``inv<j>`` for
``j > i`` (and itself when recursion is enabled), so every hypothesis is
stratified by construction; of the namings that respect this order only the
one with the smallest printed form is emitted.

Failed hypotheses are stored by kind.  A candidate ``H`` is pruned when

* some inconsistent ``H1`` has ``H`` polar subsuming it (``H`` is at least as
  general, so it is inconsistent too), or
* some incomplete ``H1`` polar subsumes ``H`` (``H`` is at least as specific,
  so it is incomplete too), or
* it was banished exactly.

Polar subsumption compares positive parts directly and negative parts the
other way round; symbol names are compared as given.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import asdict, dataclass, field

from .evaluator import DEFAULT_MAX_ATOMS, Outcome, ResourceError
from .logic import Atom, Literal, LogicError, Program, Rule, Var
from .polarity import polarity_map
from .subsumption import subsumes
from .tester import Tester

MODES = ('polar', 'banish', 'noprune')
_VARS = 'ABCDEFGHIJKLMNOPQRSTUVWXYZ'


@dataclass(frozen=True)
class Bias:
    head: tuple                         # (name, arity)
    body: tuple = ()                    # ((name, arity), ...)
    max_vars: int = 4
    max_rules: int = 4
    max_body: int = 4
    allow_neg: frozenset = frozenset()  # body (name, arity) pairs that may be negated
    max_invented: int | None = None     # defaults to max_rules - 1
    inv_arity: tuple = ()               # defaults to the head arity
    recursion: bool = False
    neg_invented: bool = True

    @property
    def invented_limit(self) -> int:
        return self.max_rules - 1 if self.max_invented is None else self.max_invented

    @property
    def invented_arities(self) -> tuple:
        return tuple(self.inv_arity) or (self.head[1],)


@dataclass
class LFFNInput:
    pos: tuple
    neg: tuple
    background: Program
    bias: Bias
    store: 'ConstraintStore | None' = None

    def __post_init__(self):
        self.pos = tuple(self.pos)
        self.neg = tuple(self.neg)
        both = set(self.pos) & set(self.neg)
        if both:
            raise LogicError(f'example both positive and negative: {min(map(str, both))}')
        name, arity = self.bias.head
        for e in self.pos + self.neg:
            if e.pred != name or e.arity != arity:
                raise LogicError(f'example {e} does not match head {name}/{arity}')
            if not e.is_ground():
                raise LogicError(f'example {e} is not ground')


# ---------------------------------------------------------------------------
# rules and hypotheses

class RuleTable:
    """Interns rules and caches subsumption between them."""

    def __init__(self):
        self.rules = []
        self.group = []         # rule id -> signature id
        self._ids = {}
        self._sigs = []
        self._sig_ids = {}
        self._may = {}
        self._sub = {}

    def intern(self, rule: Rule) -> int:
        i = self._ids.get(rule.key)
        if i is None:
            i = len(self.rules)
            self._ids[rule.key] = i
            self.rules.append(rule)
            sig = _signature(rule)
            g = self._sig_ids.get(sig)
            if g is None:
                g = self._sig_ids[sig] = len(self._sigs)
                self._sigs.append(sig)
            self.group.append(g)
        return i

    def may(self, gi: int, gj: int) -> bool:
        """Can a rule with signature ``gi`` subsume one with signature ``gj``?"""
        k = (gi, gj)
        v = self._may.get(k)
        if v is None:
            v = self._may[k] = _may_subsume(self._sigs[gi], self._sigs[gj])
        return v

    def sub(self, i: int, j: int) -> bool:
        """Does rule ``i`` subsume rule ``j``?"""
        if i == j:
            return True
        k = (i, j)
        v = self._sub.get(k)
        if v is None:
            g = self.group
            v = self.may(g[i], g[j]) and subsumes(self.rules[i], self.rules[j])
            self._sub[k] = v
        return v


def _signature(rule: Rule) -> tuple:
    """Cheap necessary conditions for subsumption, as a hashable value.

    When the head arguments are distinct variables, a substitution mapping
    one head onto another fixes every head variable, so each body literal
    must meet a literal of the same symbol and sign that agrees on the
    positions holding head variables.
    """
    args = rule.head.args
    preds = frozenset((l.atom.pred, l.negated) for l in rule.body)
    if not all(type(t) is Var for t in args) or len(set(args)) != len(args):
        return rule.head.pred, len(args), preds, None
    pos = {v: n for n, v in enumerate(args)}
    masks = {}
    for l in rule.body:
        m = tuple(pos.get(t, -1) for t in l.atom.args)
        masks.setdefault((l.atom.pred, l.negated), set()).add(m)
    return rule.head.pred, len(args), preds, frozenset((k, frozenset(v)) for k, v in masks.items())


def _may_subsume(si, sj) -> bool:
    if si[0] != sj[0] or si[1] != sj[1] or not si[2] <= sj[2]:
        return False
    if si[3] is None or sj[3] is None:
        return True
    mj = dict(sj[3])
    for k, masks in si[3]:
        targets = mj[k]
        for m in masks:
            if m in targets:
                continue
            if not any(all(a < 0 or a == b for a, b in zip(m, t)) for t in targets):
                return False
    return True


@dataclass(eq=False)
class Hypothesis:
    """A candidate program with its rule ids split by head polarity."""
    ids: tuple
    pos: frozenset
    neg: frozenset
    cost: int
    table: RuleTable = field(repr=False)
    invented: tuple = ()

    @property
    def rules(self) -> tuple:
        return tuple(self.table.rules[i] for i in self.ids)

    @property
    def program(self) -> Program:
        return Program(self.rules)

    @property
    def has_negated_invented(self) -> bool:
        inv = set(self.invented)
        return any(l.negated and l.atom.pred in inv for r in self.rules for l in r.body)

    @classmethod
    def from_program(cls, program: Program, table: RuleTable, invented=None) -> 'Hypothesis':
        pm = polarity_map(program)
        if not pm.polar:
            raise LogicError('hypothesis is not polar')
        ids = tuple(table.intern(r) for r in program)
        pos = frozenset(i for i in ids if pm.is_pos(table.rules[i].head.pred))
        if invented is None:
            invented = tuple(sorted(pm.defs))
        return cls(ids, pos, frozenset(ids) - pos, program.cost(), table, tuple(invented))

    def __str__(self):
        return str(self.program)


# ---------------------------------------------------------------------------
# constraint store

class _Index:
    """Failures filed under rule ids, looked up through a rule relation.

    Keys are grouped by rule signature so that a query skips whole groups
    that cannot stand in the relation; matches are cached per query and
    brought up to date incrementally.
    """

    def __init__(self, table: RuleTable, forward: bool):
        self.table = table
        self.forward = forward      # True: keys k with sub(query, k); False: sub(k, query)
        self.buckets = {}           # key -> failure numbers
        self.groups = {}            # signature id -> keys
        self.order = []             # signature ids in insertion order
        self._seen = {}             # query -> [groups checked, {group: keys checked}, hits]

    def add(self, key: int, n: int):
        b = self.buckets.get(key)
        if b is None:
            self.buckets[key] = b = []
            g = self.table.group[key]
            keys = self.groups.get(g)
            if keys is None:
                self.groups[g] = keys = []
                self.order.append(g)
            keys.append(key)
        b.append(n)

    def matching(self, q: int) -> list:
        table = self.table
        state = self._seen.get(q)
        if state is None:
            state = self._seen[q] = [0, {}, []]
        gq = table.group[q]
        done = state[1]
        for g in self.order[state[0]:]:
            if (table.may(gq, g) if self.forward else table.may(g, gq)):
                done[g] = 0
        state[0] = len(self.order)
        hits = state[2]
        sub = table.sub
        for g, n in done.items():
            keys = self.groups[g]
            if n == len(keys):
                continue
            for k in keys[n:]:
                if (sub(q, k) if self.forward else sub(k, q)):
                    hits.append(k)
            done[g] = len(keys)
        return hits

    def candidates(self, queries) -> set:
        out = set()
        for q in queries:
            for k in self.matching(q):
                out.update(self.buckets[k])
        return out


class ConstraintStore:
    """Failed hypotheses by kind: inconsistent (gen), incomplete (spec), banished."""

    def __init__(self, table: RuleTable | None = None):
        self.table = table or RuleTable()
        self.gen_failures = []
        self.spec_failures = []
        self.banished = set()
        self._gen_pos = _Index(self.table, forward=True)
        self._gen_neg = _Index(self.table, forward=False)
        self._spec_pos = _Index(self.table, forward=False)
        self._spec_neg = _Index(self.table, forward=True)

    def __len__(self):
        return len(self.gen_failures) + len(self.spec_failures) + len(self.banished)

    def add_gen(self, h: Hypothesis):
        n = len(self.gen_failures)
        self.gen_failures.append((h.pos, h.neg))
        if h.pos:
            self._gen_pos.add(min(h.pos), n)
        for i in h.neg:
            self._gen_neg.add(i, n)

    def add_spec(self, h: Hypothesis):
        n = len(self.spec_failures)
        self.spec_failures.append((h.pos, h.neg))
        if h.neg:
            self._spec_neg.add(min(h.neg), n)
        else:
            for i in h.pos:
                self._spec_pos.add(i, n)

    def add_banish(self, h: Hypothesis):
        self.banished.add(frozenset(h.ids))

    def _gen_hit(self, h: Hypothesis) -> bool:
        sub = self.table.sub
        if h.neg:
            # every negative rule of h must be subsumed by a negative rule of the failure
            cands = self._gen_neg.candidates((min(h.neg),))
        else:
            cands = self._gen_pos.candidates(h.pos)
        for n in cands:
            fpos, fneg = self.gen_failures[n]
            if all(any(sub(r, r1) for r in h.pos) for r1 in fpos) and \
                    all(any(sub(r1, r) for r1 in fneg) for r in h.neg):
                return True
        return False

    def _spec_hit(self, h: Hypothesis) -> bool:
        sub = self.table.sub
        if not h.pos:
            return False
        cands = self._spec_pos.candidates((min(h.pos),))
        if h.neg:
            cands |= self._spec_neg.candidates(h.neg)
        for n in cands:
            fpos, fneg = self.spec_failures[n]
            if all(any(sub(r1, r) for r1 in fpos) for r in h.pos) and \
                    all(any(sub(r, r1) for r in h.neg) for r1 in fneg):
                return True
        return False

    def check(self, h: Hypothesis) -> str | None:
        """Which constraint prunes ``h``: 'banish', 'spec', 'gen' or None."""
        if self.banished and frozenset(h.ids) in self.banished:
            return 'banish'
        if self.spec_failures and self._spec_hit(h):
            return 'spec'
        if self.gen_failures and self._gen_hit(h):
            return 'gen'
        return None


def prune(h: Hypothesis, store: ConstraintStore) -> bool:
    return store.check(h) is not None


# ---------------------------------------------------------------------------
# enumeration

def _body_literals(specs, max_vars):
    out = []
    for pred, arity, negated in specs:
        for args in itertools.product(range(max_vars), repeat=arity):
            out.append((pred, args, negated))
    return out


def build_rules(head: str, arity: int, specs, max_vars: int, max_body: int) -> list:
    """All rules for ``head`` over ``specs`` ((pred, arity, negated) triples), cheapest first.

    A rule must mention every head variable in its body and every other
    variable in a positive body literal.  Rules with a literal and its
    complement, or with the head atom in the body, are left out.
    """
    lits = _body_literals(specs, max_vars)
    head_args = tuple(range(arity))
    seen, out = set(), []
    for n in range(1, max_body + 1):
        for combo in itertools.combinations(lits, n):
            used = {v for _, args, _ in combo for v in args}
            if not used.issuperset(head_args):
                continue
            extra = used.difference(head_args)
            if extra and max(extra) != arity + len(extra) - 1:
                continue    # a variant with lower variable names exists
            pos_vars = {v for _, args, neg in combo if not neg for v in args}
            if not extra <= pos_vars:
                continue
            atoms = {(p, args) for p, args, neg in combo if not neg}
            if any((p, args) in atoms for p, args, neg in combo if neg):
                continue
            if (head, head_args) in atoms:
                continue
            rule = Rule(Atom(head, tuple(Var(_VARS[i]) for i in head_args)),
                        tuple(Literal(Atom(p, tuple(Var(_VARS[i]) for i in args)), neg)
                              for p, args, neg in combo))
            if rule.key in seen:
                continue
            seen.add(rule.key)
            out.append(rule)
    out.sort(key=lambda r: (len(r.body), str(r)))
    return out


def _parts(m, t, lo, costs):
    """Non-decreasing sequences of ``m`` rule costs from ``costs`` summing to ``t``."""
    if m == 0:
        if t == 0:
            yield ()
        return
    for c in costs:
        if c < lo:
            continue
        if c * m > t:
            break
        for rest in _parts(m - 1, t - c, c, costs):
            yield (c,) + rest


def _spread(heads, rules_left, cost, mins):
    """Assign (number of rules, total cost) to each head."""
    if not heads:
        if cost == 0:
            yield ()
        return
    lo = mins[0]
    rest_min = sum(mins[1:])
    for m in range(1, rules_left - len(heads) + 2):
        for t in range(m * lo, cost - rest_min + 1):
            for tail in _spread(heads[1:], rules_left - m, cost - t, mins[1:]):
                yield ((m, t),) + tail


class _Signature:
    """Pools of candidate rules for a fixed set of invented symbols."""

    def __init__(self, bias: Bias, table: RuleTable, arities: tuple):
        self.bias = bias
        self.table = table
        self.arities = arities
        name, arity = bias.head
        self.invented = tuple(f'inv{i + 1}' for i in range(len(arities)))
        self.heads = (name,) + self.invented
        bk = []
        for p, a in bias.body:
            bk.append((p, a, False))
            if (p, a) in bias.allow_neg:
                bk.append((p, a, True))
        self.pools = []
        self.calls = {}
        for hi, h in enumerate(self.heads):
            ha = arity if hi == 0 else arities[hi - 1]
            specs = list(bk)
            for j in range(hi, len(arities)):    # only later invented symbols
                specs.append((self.invented[j], arities[j], False))
                if bias.neg_invented:
                    specs.append((self.invented[j], arities[j], True))
            if bias.recursion:
                specs.append((h, ha, False))
            rules = build_rules(h, ha, specs, bias.max_vars, bias.max_body)
            by_cost = {}
            for r in rules:
                i = table.intern(r)
                by_cost.setdefault(1 + len(r.body), []).append(i)
                self.calls[i] = tuple((l.atom.pred, l.negated) for l in r.body
                                      if l.atom.pred in self.heads and l.atom.pred != h)
            self.pools.append(by_cost)

    def rule_sets(self, hi: int, m: int, t: int):
        pool = self.pools[hi]
        costs = sorted(pool)
        sub = self.table.sub
        for seq in _parts(m, t, 0, costs):
            groups = [(c, len(list(g))) for c, g in itertools.groupby(seq)]
            for ids in _choose(pool, groups, 0):
                # a rule subsumed by another rule of the same definition is redundant
                if any(sub(a, b) or sub(b, a) for a, b in itertools.combinations(ids, 2)):
                    continue
                yield ids


def _choose(pool, groups, gi):
    if gi == len(groups):
        yield ()
        return
    c, n = groups[gi]
    for combo in itertools.combinations(pool[c], n):
        for rest in _choose(pool, groups, gi + 1):
            yield combo + rest


class Enumerator:
    """Cost-ordered stream of polar hypotheses within a bias."""

    def __init__(self, bias: Bias, table: RuleTable | None = None):
        self.bias = bias
        self.table = table or RuleTable()
        self._sigs = {}
        self.enumerated = 0

    def signature(self, arities: tuple) -> _Signature:
        s = self._sigs.get(arities)
        if s is None:
            s = self._sigs[arities] = _Signature(self.bias, self.table, arities)
        return s

    def max_cost(self) -> int:
        return self.bias.max_rules * (1 + self.bias.max_body)

    def __iter__(self):
        return self.hypotheses()

    def hypotheses(self, max_cost: int | None = None):
        bias = self.bias
        if max_cost is None:
            max_cost = self.max_cost()
        yield Hypothesis((), frozenset(), frozenset(), 0, self.table)
        for cost in range(2, max_cost + 1):
            for k in range(0, min(bias.invented_limit, bias.max_rules - 1) + 1):
                if 2 * (k + 1) > cost:
                    break
                for arities in itertools.product(bias.invented_arities, repeat=k):
                    yield from self._at(cost, arities)

    def _at(self, cost, arities):
        sig = self.signature(arities)
        heads = sig.heads
        if any(not pool for pool in sig.pools):
            return
        mins = [min(pool) for pool in sig.pools]
        for spread in _spread(heads, self.bias.max_rules, cost, mins):
            yield from self._combine(sig, spread, 0, ())

    def _combine(self, sig, spread, hi, acc):
        if hi == len(spread):
            self.enumerated += 1
            h = self._finish(sig, acc)
            if h is not None:
                yield h
            return
        m, t = spread[hi]
        for ids in sig.rule_sets(hi, m, t):
            yield from self._combine(sig, spread, hi + 1, acc + (ids,))

    def _finish(self, sig, per_head):
        heads = sig.heads
        index = {h: i for i, h in enumerate(heads)}
        # polarity by one pass: calls only go to later heads
        pol = [set() for _ in heads]
        pol[0].add(True)
        for hi, ids in enumerate(per_head):
            if not pol[hi]:
                return None     # not reachable from the target
            for i in ids:
                for q, neg in sig.calls[i]:
                    qi = index[q]
                    pol[qi].update((not x) if neg else x for x in pol[hi])
            if len(pol[hi]) > 1:
                return None
        if any(len(p) != 1 for p in pol):
            return None
        if len(heads) > 2 and not self._canonical(sig, per_head):
            return None
        all_ids = tuple(i for ids in per_head for i in ids)
        pos = frozenset(i for hi, ids in enumerate(per_head) if True in pol[hi] for i in ids)
        cost = sum(1 + len(self.table.rules[i].body) for i in all_ids)
        return Hypothesis(all_ids, pos, frozenset(all_ids) - pos, cost, self.table, sig.invented)

    def _canonical(self, sig, per_head) -> bool:
        """Is this naming of invented symbols the least one respecting call order?"""
        rules = [self.table.rules[i] for ids in per_head for i in ids]
        inv = sig.invented
        current = sorted(str(r.key) for r in rules)
        for perm in itertools.permutations(inv):
            mapping = dict(zip(inv, perm))
            if all(a == b for a, b in mapping.items()):
                continue
            order = {b: inv.index(b) for b in inv}
            ok = True
            for r in rules:
                h = mapping.get(r.head.pred)
                for l in r.body:
                    q = mapping.get(l.atom.pred)
                    if q is None or q == h:
                        continue
                    if h is not None and order[q] <= order[h]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            renamed = sorted(str(_rename(r, mapping).key) for r in rules)
            if renamed < current:
                return False
        return True


def _rename(r: Rule, mapping: dict) -> Rule:
    def ren(a):
        return Atom(mapping.get(a.pred, a.pred), a.args)
    return Rule(ren(r.head), tuple(Literal(ren(l.atom), l.negated) for l in r.body))


def enumerate_hypotheses(bias: Bias, max_cost: int | None = None):
    """Stream of hypotheses in non-decreasing cost order."""
    return Enumerator(bias).hypotheses(max_cost)


# ---------------------------------------------------------------------------
# the loop

@dataclass
class RunStats:
    generated: int = 0
    pruned_gen: int = 0
    pruned_spec: int = 0
    pruned_banish: int = 0
    tested: int = 0
    solution_cost: int | None = None
    time_generate_ms: float = 0.0
    time_test_ms: float = 0.0
    time_constrain_ms: float = 0.0

    @property
    def pruned(self) -> int:
        return self.pruned_gen + self.pruned_spec + self.pruned_banish

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ('time_generate_ms', 'time_test_ms', 'time_constrain_ms'):
            d[k] = round(d[k], 3)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


@dataclass
class LearnResult:
    hypothesis: Hypothesis | None
    stats: RunStats
    status: str             # 'solved', 'exhausted', 'timeout' or 'budget'
    enumerated: int = 0
    skipped: int = 0        # hypotheses whose evaluation ran out of budget

    @property
    def program(self) -> Program | None:
        return None if self.hypothesis is None else self.hypothesis.program

    @property
    def solved(self) -> bool:
        return self.hypothesis is not None


def stats(run: LearnResult) -> RunStats:
    return run.stats


def learn(inp: LFFNInput, mode: str = 'polar', timeout: float | None = 300.0,
          max_generated: int | None = None, max_atoms: int = DEFAULT_MAX_ATOMS,
          max_cost: int | None = None) -> LearnResult:
    """Find an optimal solution, or report why none was found.

    ``generated`` counts hypotheses that survive the constraints and are
    tested; candidates rejected by a constraint are counted under
    ``pruned_*`` instead.
    """
    if mode not in MODES:
        raise ValueError(f'unknown mode {mode!r}')
    store = inp.store or ConstraintStore()
    enum = Enumerator(inp.bias, store.table)
    tester = Tester(inp.background, inp.pos, inp.neg, max_atoms)
    target = inp.bias.head[0]
    st = RunStats()
    clock = time.perf_counter
    start = clock()
    deadline = None if timeout is None else start + timeout
    skipped = 0
    status = 'exhausted'
    found = None
    stream = enum.hypotheses(max_cost)
    t_test = t_con = 0.0
    steps = 0
    while True:
        if deadline is not None and (steps & 63) == 0 and clock() > deadline:
            status = 'timeout'
            break
        steps += 1
        try:
            h = next(stream)
        except StopIteration:
            break
        if mode != 'noprune' and len(store):
            t0 = clock()
            kind = store.check(h)
            t_con += clock() - t0
            if kind is not None:
                setattr(st, f'pruned_{kind}', getattr(st, f'pruned_{kind}') + 1)
                continue
        if max_generated is not None and st.generated >= max_generated:
            status = 'budget'
            break
        st.generated += 1
        t0 = clock()
        try:
            out = tester.test(Program(h.rules), target)
        except ResourceError:
            skipped += 1
            t_test += clock() - t0
            continue
        t_test += clock() - t0
        st.tested += 1
        if out.solution:
            found = h
            status = 'solved'
            break
        if mode == 'noprune':
            continue
        t0 = clock()
        if mode == 'banish' and h.has_negated_invented:
            store.add_banish(h)
        else:
            if out.inconsistent:
                store.add_gen(h)
            if out.incomplete and h.ids:
                store.add_spec(h)
        t_con += clock() - t0
    total = clock() - start
    st.time_test_ms = t_test * 1000
    st.time_constrain_ms = t_con * 1000
    st.time_generate_ms = max(0.0, total - t_test - t_con) * 1000
    if found is not None:
        st.solution_cost = found.cost
    return LearnResult(found, st, status, enum.enumerated, skipped)


def outcome(inp: LFFNInput, program: Program) -> Outcome:
    """Classify a program on a task's examples."""
    return Tester(inp.background, inp.pos, inp.neg).test(program, inp.bias.head[0])


def same_up_to_invention(p: Program, q: Program, invented=None, permute_args: bool = True) -> bool:
    """Are ``p`` and ``q`` equal after renaming invented symbols?

    ``invented`` defaults to the ``inv<k>`` head symbols of ``p``.  With
    ``permute_args`` an invented symbol may also have its arguments
    reordered, since its interface is as much an invention as its name.
    """
    if invented is None:
        invented = sorted(s for s in p.head_preds if s.startswith('inv') and s[3:].isdigit())
    others = sorted(s for s in q.head_preds if s.startswith('inv') and s[3:].isdigit())
    if len(invented) != len(others) or len(p) != len(q):
        return False
    ar_p, ar_q = p.arities, q.arities
    for perm in itertools.permutations(others):
        if any(ar_p[a] != ar_q[b] for a, b in zip(invented, perm)):
            continue
        choices = [itertools.permutations(range(ar_p[a])) if permute_args else [tuple(range(ar_p[a]))]
                   for a in invented]
        for orders in itertools.product(*choices):
            plan = {a: (b, o) for a, b, o in zip(invented, perm, orders)}
            if _rename_args(p, plan) == q:
                return True
    return False


def _rename_args(p: Program, plan: dict) -> Program:
    def ren(a):
        if a.pred not in plan:
            return a
        name, order = plan[a.pred]
        return Atom(name, tuple(a.args[i] for i in order))
    return Program(Rule(ren(r.head), tuple(Literal(ren(l.atom), l.negated) for l in r.body)) for r in p)
