"""Terms, atoms, rules and normal logic programs, plus the concrete text syntax.

The syntax is Prolog-like::

    % comment
    edge(a,b).
    f(S) :- scene(S), not inv1(S).

Variables start with an uppercase letter or ``_``; constants start with a
lowercase letter or a digit.  A bare ``_`` is an anonymous variable.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping


class LogicError(ValueError):
    pass


class ParseError(LogicError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f'{msg} (line {line}, column {col})')
        self.line = line
        self.col = col


class ArityError(LogicError):
    pass


class UnsafeRuleError(LogicError):
    pass


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Const:
    name: str

    def __str__(self):
        return self.name


Term = Var | Const


def make_term(name: str) -> Term:
    if name[0].isupper() or name[0] == '_':
        return Var(name)
    return Const(name)


@dataclass(frozen=True, slots=True)
class Atom:
    pred: str
    args: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def is_ground(self) -> bool:
        return all(type(t) is Const for t in self.args)

    def variables(self) -> Iterator[Var]:
        return (t for t in self.args if type(t) is Var)

    def __str__(self):
        if not self.args:
            return self.pred
        return f'{self.pred}({",".join(str(t) for t in self.args)})'


@dataclass(frozen=True, slots=True)
class Literal:
    atom: Atom
    negated: bool = False

    @property
    def pred(self) -> str:
        return self.atom.pred

    def __str__(self):
        return f'not {self.atom}' if self.negated else str(self.atom)


def atom(pred: str, *args: str) -> Atom:
    """Shorthand: ``atom('p', 'X', 'a')`` is ``p(X,a)``."""
    return Atom(pred, tuple(make_term(a) for a in args))


def _term_key(t, names):
    if type(t) is Var:
        return (0, names[t])
    return (1, t.name)


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: tuple = ()

    def __post_init__(self):
        if not isinstance(self.body, tuple):
            object.__setattr__(self, 'body', tuple(self.body))

    @property
    def head_pred(self) -> str:
        return self.head.pred

    @property
    def is_fact(self) -> bool:
        return not self.body

    @cached_property
    def body_pos(self) -> frozenset:
        """Predicate symbols of the non-negated body literals."""
        return frozenset(l.atom.pred for l in self.body if not l.negated)

    @cached_property
    def body_neg(self) -> frozenset:
        """Predicate symbols of the negated body literals."""
        return frozenset(l.atom.pred for l in self.body if l.negated)

    @cached_property
    def body_preds(self) -> frozenset:
        return self.body_pos | self.body_neg

    @cached_property
    def variables(self) -> tuple:
        seen = {}
        for a in itertools.chain((self.head,), (l.atom for l in self.body)):
            for v in a.variables():
                seen.setdefault(v, None)
        return tuple(seen)

    def is_safe(self) -> bool:
        """Range restriction: head and negated-literal variables occur positively."""
        pos = {v for l in self.body if not l.negated for v in l.atom.variables()}
        if any(v not in pos for v in self.head.variables()):
            return False
        return all(v in pos for l in self.body if l.negated for v in l.atom.variables())

    @cached_property
    def key(self) -> tuple:
        """Canonical key: equal for two rules iff they are variants."""
        return _canonical_key(self)

    def __str__(self):
        if not self.body:
            return f'{self.head}.'
        return f'{self.head} :- {", ".join(str(l) for l in self.body)}.'


def _canonical_key(rule: Rule) -> tuple:
    names = {}
    for v in rule.head.variables():
        if v not in names:
            names[v] = len(names)
    head = (rule.head.pred, tuple(_term_key(t, names) for t in rule.head.args))
    free = [v for v in rule.variables if v not in names]
    best = None
    for order in _candidate_orders(rule, free, names):
        local = dict(names)
        for v in order:
            local[v] = len(local)
        # duplicate literals collapse: a clause is a set
        body = tuple(sorted({
            (l.atom.pred, l.negated, tuple(_term_key(t, local) for t in l.atom.args))
            for l in rule.body}))
        if best is None or body < best:
            best = body
    return head, best


def _candidate_orders(rule, free, fixed):
    if len(free) <= 6:
        yield from itertools.permutations(free)
        return
    # colour refinement, then permute only inside colour classes
    colour = {v: 0 for v in free}
    for _ in range(len(free)):
        sig = {}
        for v in free:
            occ = []
            for l in rule.body:
                for i, t in enumerate(l.atom.args):
                    if t == v:
                        others = tuple(
                            ('f', fixed[u]) if u in fixed else
                            ('c', colour[u]) if type(u) is Var else ('k', u.name)
                            for u in l.atom.args)
                        occ.append((l.atom.pred, l.negated, i, others))
            sig[v] = (colour[v], tuple(sorted(occ)))
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {v: ranks[sig[v]] for v in free}
        if len(set(new.values())) == len(set(colour.values())):
            colour = new
            break
        colour = new
    classes = [sorted((v for v in free if colour[v] == c), key=lambda v: v.name)
               for c in sorted(set(colour.values()))]
    total = 1
    for c in classes:
        for i in range(2, len(c) + 1):
            total *= i
    if total > 5040:
        yield tuple(v for c in classes for v in c)
        return
    for combo in itertools.product(*(itertools.permutations(c) for c in classes)):
        yield tuple(v for c in combo for v in c)


def is_variant(r1: Rule, r2: Rule) -> bool:
    return r1.key == r2.key


class Substitution(Mapping):
    """An immutable map from variables to terms, applied simultaneously."""

    __slots__ = ('_map',)

    def __init__(self, bindings: Mapping | Iterable = ()):
        items = dict(bindings)
        for v, t in items.items():
            if type(v) is not Var:
                raise TypeError(f'cannot bind non-variable {v!r}')
        self._map = {v: t for v, t in items.items() if v != t}

    def __getitem__(self, v):
        return self._map[v]

    def __iter__(self):
        return iter(self._map)

    def __len__(self):
        return len(self._map)

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __eq__(self, other):
        if isinstance(other, Substitution):
            return self._map == other._map
        return NotImplemented

    def __repr__(self):
        inner = ', '.join(f'{v}/{t}' for v, t in sorted(self._map.items(), key=lambda x: x[0].name))
        return '{' + inner + '}'

    def term(self, t):
        return self._map.get(t, t) if type(t) is Var else t

    def atom(self, a: Atom) -> Atom:
        return Atom(a.pred, tuple(self.term(t) for t in a.args))

    def literal(self, l: Literal) -> Literal:
        return Literal(self.atom(l.atom), l.negated)

    def rule(self, r: Rule) -> Rule:
        return Rule(self.atom(r.head), tuple(self.literal(l) for l in r.body))


def apply_substitution(rule: Rule, sub: Mapping) -> Rule:
    if not isinstance(sub, Substitution):
        sub = Substitution(sub)
    return sub.rule(rule)


class Program:
    """A set of rules modulo variable renaming.

    Rules keep their insertion order (the rewriting code relies on it) but
    equality and hashing ignore order.
    """

    __slots__ = ('rules', '_keys', '__dict__')

    def __init__(self, rules: Iterable[Rule] = ()):
        kept, keys = [], set()
        for r in rules:
            k = r.key
            if k not in keys:
                keys.add(k)
                kept.append(r)
        self.rules = tuple(kept)
        self._keys = frozenset(keys)

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __contains__(self, rule):
        return rule.key in self._keys

    def __eq__(self, other):
        if isinstance(other, Program):
            return self._keys == other._keys
        return NotImplemented

    def __hash__(self):
        return hash(self._keys)

    def __repr__(self):
        return f'Program({[str(r) for r in self.rules]})'

    def __str__(self):
        return print_program(self)

    def __or__(self, other):
        return Program(itertools.chain(self.rules, other.rules))

    @property
    def keys(self) -> frozenset:
        return self._keys

    @cached_property
    def head_preds(self) -> frozenset:
        return frozenset(r.head.pred for r in self.rules)

    @cached_property
    def body_preds(self) -> frozenset:
        return frozenset(p for r in self.rules for p in r.body_preds)

    @cached_property
    def preds(self) -> frozenset:
        return self.head_preds | self.body_preds

    @cached_property
    def arities(self) -> dict:
        out = {}
        for r in self.rules:
            for a in itertools.chain((r.head,), (l.atom for l in r.body)):
                out.setdefault(a.pred, a.arity)
        return out

    @property
    def facts(self) -> tuple:
        return tuple(r for r in self.rules if r.is_fact)

    def rules_for(self, pred: str) -> tuple:
        return tuple(r for r in self.rules if r.head.pred == pred)

    def constants(self) -> set:
        out = set()
        for r in self.rules:
            for a in itertools.chain((r.head,), (l.atom for l in r.body)):
                out.update(t.name for t in a.args if type(t) is Const)
        return out

    def cost(self) -> int:
        """Number of literals, heads included."""
        return sum(1 + len(r.body) for r in self.rules)


def check_arities(rules: Iterable[Rule], known: dict | None = None) -> dict:
    arities = dict(known or {})
    for r in rules:
        for a in itertools.chain((r.head,), (l.atom for l in r.body)):
            prev = arities.setdefault(a.pred, a.arity)
            if prev != a.arity:
                raise ArityError(f'predicate {a.pred} used with arities {prev} and {a.arity}')
    return arities


# ---------------------------------------------------------------------------
# printing

def _canonical_names(rule: Rule) -> dict:
    names = {}
    for v in rule.variables:
        names[v] = _var_name(len(names))
    return names


def _var_name(i: int) -> str:
    letters = 'ABCDEFGHIJKLMNOPQRSTUVWXYZ'
    if i < 26:
        return letters[i]
    return letters[i % 26] + str(i // 26)


def rename_canonically(rule: Rule) -> Rule:
    names = {v: Var(n) for v, n in _canonical_names(rule).items()}
    return Substitution(names).rule(rule)


def format_rule(rule: Rule) -> str:
    return str(rename_canonically(rule))


def _sort_key(rule: Rule):
    text = format_rule(rule)
    return (rule.head.pred, rule.head.arity, len(rule.body), text)


def print_program(program: Program) -> str:
    ordered = sorted(program.rules, key=_sort_key)
    lines = [format_rule(r) for r in ordered]
    return ''.join(line + '\n' for line in lines)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>%[^\n]*)
  | (?P<neck>:-)
  | (?P<name>[A-Za-z0-9_][A-Za-z0-9_']*)
  | (?P<punct>[(),.])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f'unexpected character {text[pos]!r}', line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == 'nl':
            line += 1
            line_start = m.end()
        elif kind not in ('ws', 'comment'):
            toks.append(_Tok(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    toks.append(_Tok('eof', '', line, pos - line_start + 1))
    return toks


@dataclass
class _Parser:
    toks: list
    i: int = 0
    anon: itertools.count = field(default_factory=lambda: itertools.count(1))

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.next()
        if t.text != text:
            raise ParseError(f'expected {text!r}, found {t.text or "end of input"!r}', t.line, t.col)
        return t

    def term(self):
        t = self.next()
        if t.kind != 'name':
            raise ParseError(f'expected a term, found {t.text or "end of input"!r}', t.line, t.col)
        if t.text == '_':
            return Var(f'_{next(self.anon)}')
        return make_term(t.text)

    def atom(self):
        t = self.next()
        if t.kind != 'name' or not (t.text[0].islower()):
            raise ParseError(f'expected a predicate symbol, found {t.text or "end of input"!r}', t.line, t.col)
        args = []
        if self.peek().text == '(':
            self.next()
            args.append(self.term())
            while self.peek().text == ',':
                self.next()
                args.append(self.term())
            self.expect(')')
        return Atom(t.text, tuple(args)), t

    def literal(self):
        t = self.peek()
        nxt = self.toks[self.i + 1]
        if t.text == 'not' and nxt.kind == 'name':
            self.next()
            a, _ = self.atom()
            return Literal(a, True)
        a, _ = self.atom()
        return Literal(a, False)

    def rule(self):
        head, tok = self.atom()
        body = []
        if self.peek().text == ':-':
            self.next()
            body.append(self.literal())
            while self.peek().text == ',':
                self.next()
                body.append(self.literal())
        self.expect('.')
        return Rule(head, tuple(body)), tok


def parse_rules(text: str, allow_unsafe: bool = False) -> list:
    p = _Parser(_tokenize(text))
    rules = []
    arities = {}
    while p.peek().kind != 'eof':
        r, tok = p.rule()
        try:
            arities = check_arities([r], arities)
        except ArityError as e:
            raise ArityError(f'{e} (line {tok.line}, column {tok.col})') from None
        if not allow_unsafe and not r.is_safe():
            raise UnsafeRuleError(f'unsafe rule {r} (line {tok.line}, column {tok.col})')
        rules.append(r)
    return rules


def parse_program(text: str, allow_unsafe: bool = False) -> Program:
    """Parse program text.

    By default every rule must be range restricted.  ``allow_unsafe`` admits
    rules whose head or negated-literal variables only range over the active
    domain (the learner's hypotheses, e.g. ``f(A) :- not inv1(A)``).
    """
    return Program(parse_rules(text, allow_unsafe))


def parse_rule(text: str, allow_unsafe: bool = True) -> Rule:
    rules = parse_rules(text if text.rstrip().endswith('.') else text + '.', allow_unsafe)
    if len(rules) != 1:
        raise LogicError(f'expected one rule, got {len(rules)}')
    return rules[0]


def parse_atom(text: str) -> Atom:
    rule = parse_rule(text)
    if rule.body:
        raise LogicError(f'expected an atom, got a rule: {text}')
    return rule.head
