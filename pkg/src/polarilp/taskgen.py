"""Seed-pinned generators for the bundled desk-scale tasks.

Each generator draws small random structures, labels candidate examples with
the intended concept, and keeps only examples on which the reference program
agrees with that concept, so the reference program is always a solution.
Run ``python -m polarilp.taskgen <dir>`` to regenerate the bundled suite.
"""

from __future__ import annotations

import random
import sys
from dataclasses import dataclass
from pathlib import Path

from .evaluator import evaluate
from .learner import Bias
from .logic import atom, parse_program
from .tasks import write_task

MAX_EXAMPLES = 20

REFERENCE = {
    's1': '''
subset(A,B) :- not inv1(A,B).
inv1(A,B) :- member(C,B), not member(C,A).
''',
    's2': '''
distinct(A,B) :- not inv1(A,B).
inv1(A,B) :- member(C,A), member(C,B).
''',
    's3': '''
setdiff(A,B,C) :- not inv1(C,A), not inv1(B,C).
inv1(A,B) :- member(C,B), member(D,A), not member(D,B), member(C,A).
''',
    's4': '''
symmetricdiff(A,B,C) :- my_union(A,C,B), not inv1(B,C,A).
inv1(A,B,C) :- member(D,A), member(D,B), member(D,C).
''',
    's5': '''
subsetdecom(A,B) :- not inv1(A,B).
inv1(A,B) :- member(C,A), missing_from_bucket(B,C).
inv1(A,B) :- member_2(C,B), member(D,C), not member(D,A).
''',
    's6': '''
mutualdistinct(A) :- not inv1(A).
inv1(A) :- member(B,A), member(C,A), not inv2(B,C).
inv2(A,B) :- eq(A,B).
inv2(A,B) :- distinct(A,B).
''',
    'g3': '''
unconnected(A,B) :- not inv1(B,A).
inv1(A,B) :- edge(B,A).
inv1(A,B) :- edge(B,C), inv1(C,A).
''',
    'z2': '''
zendo(A) :- not inv1(A).
inv1(A) :- piece(A,B), not red(B).
''',
    'b3': '''
leapyear(A) :- divisible4(A), not inv1(A).
inv1(A) :- divisible100(A), not inv2(A).
inv2(A) :- divisible400(A).
''',
}


def reference(name: str):
    return parse_program(REFERENCE[name], allow_unsafe=True)


@dataclass
class Task:
    name: str
    bk: str
    pos: list
    neg: list
    bias: Bias


def _facts(atoms) -> str:
    return ''.join(f'{a}.\n' for a in sorted(atoms, key=str))


def _select(name, bk_atoms, candidates, rng, max_pos=MAX_EXAMPLES // 2, max_neg=MAX_EXAMPLES // 2):
    """Keep candidates (atom, label) where the reference program agrees with the label."""
    bk = parse_program(_facts(bk_atoms))
    consts = {t.name for a, _ in candidates for t in a.args}
    model = evaluate(bk, reference(name), consts)
    pos, neg, seen = [], [], set()
    for a, label in candidates:
        if a in seen or (a in model) != label:
            continue
        seen.add(a)
        if label and len(pos) < max_pos:
            pos.append(a)
        elif not label and len(neg) < max_neg:
            neg.append(a)
    rng.shuffle(pos)
    rng.shuffle(neg)
    return _facts(bk_atoms), pos, neg


def _random_sets(rng, n, elements, min_size=0, max_size=None):
    max_size = len(elements) if max_size is None else max_size
    out = []
    for _ in range(n):
        k = rng.randint(min_size, max_size)
        out.append(frozenset(rng.sample(elements, k)))
    return out


def _set_bk(sets: dict) -> set:
    return {atom('member', e, s) for s, members in sets.items() for e in members}


ELEMENTS = ['a', 'b', 'c', 'd', 'e']


def _named(sets) -> dict:
    out = {}
    for s in sets:
        if s not in out.values():
            out[f'l{len(out)}'] = s
    return out


def gen_s1(seed=1) -> Task:
    rng = random.Random(seed)
    sets = _named(_random_sets(rng, 12, ELEMENTS, 0, 4))
    names = sorted(sets)
    cands = []
    for _ in range(400):
        x, y = rng.choice(names), rng.choice(names)
        cands.append((atom('subset', x, y), sets[y] <= sets[x]))
    bk, pos, neg = _select('s1', _set_bk(sets), cands, rng)
    bias = Bias(head=('subset', 2), body=(('member', 2),), allow_neg=frozenset({('member', 2)}),
                max_vars=3, max_rules=2, max_body=2, max_invented=1, inv_arity=(2,))
    return Task('s1', bk, pos, neg, bias)


def gen_s2(seed=2) -> Task:
    rng = random.Random(seed)
    sets = _named(_random_sets(rng, 12, ELEMENTS, 1, 3))
    names = sorted(sets)
    cands = []
    for _ in range(400):
        x, y = rng.choice(names), rng.choice(names)
        cands.append((atom('distinct', x, y), not (sets[x] & sets[y])))
    bk, pos, neg = _select('s2', _set_bk(sets), cands, rng)
    bias = Bias(head=('distinct', 2), body=(('member', 2),), allow_neg=frozenset({('member', 2)}),
                max_vars=3, max_rules=2, max_body=2, max_invented=1, inv_arity=(2,))
    return Task('s2', bk, pos, neg, bias)


def gen_s3(seed=3) -> Task:
    rng = random.Random(seed)
    base = _random_sets(rng, 8, ELEMENTS, 1, 4)
    diffs = [a - b for a in base for b in base]
    sets = _named(base + diffs)
    names = sorted(sets)
    cands = []
    for _ in range(2000):
        x, y, z = rng.choice(names), rng.choice(names), rng.choice(names)
        cands.append((atom('setdiff', x, y, z), sets[z] == sets[x] - sets[y]))
    bk, pos, neg = _select('s3', _set_bk(sets), cands, rng)
    bias = Bias(head=('setdiff', 3), body=(('member', 2),), allow_neg=frozenset({('member', 2)}),
                max_vars=4, max_rules=2, max_body=4, max_invented=1, inv_arity=(2,))
    return Task('s3', bk, pos, neg, bias)


def gen_s4(seed=4) -> Task:
    rng = random.Random(seed)
    base = _random_sets(rng, 5, ELEMENTS[:4], 1, 3)
    sets = _named(base + [a ^ b for a in base for b in base])
    names = sorted(sets)
    bk = _set_bk(sets)
    # my_union(X,Y,Z): the three sets have the same pairwise unions
    for x in names:
        for y in names:
            for z in names:
                a, b, c = sets[x], sets[y], sets[z]
                if a | b == a | c == b | c:
                    bk.add(atom('my_union', x, y, z))
    cands = []
    for _ in range(3000):
        x, y, z = rng.choice(names), rng.choice(names), rng.choice(names)
        cands.append((atom('symmetricdiff', x, y, z), sets[z] == sets[x] ^ sets[y]))
    bk, pos, neg = _select('s4', bk, cands, rng)
    bias = Bias(head=('symmetricdiff', 3), body=(('member', 2), ('my_union', 3)),
                max_vars=4, max_rules=2, max_body=3, max_invented=1, inv_arity=(3,))
    return Task('s4', bk, pos, neg, bias)


def gen_s5(seed=5) -> Task:
    rng = random.Random(seed)
    sets = _named(_random_sets(rng, 10, ELEMENTS[:4], 1, 3))
    set_names = sorted(sets)
    buckets = {}
    for _ in range(14):
        k = rng.randint(1, 3)
        group = frozenset(rng.sample(set_names, k))
        if group not in buckets.values():
            buckets[f'd{len(buckets)}'] = group
    bk = _set_bk(sets)
    for d, group in buckets.items():
        for s in group:
            bk.add(atom('member_2', s, d))
        covered = frozenset().union(*(sets[s] for s in group))
        for e in ELEMENTS[:4]:
            if e not in covered:
                bk.add(atom('missing_from_bucket', d, e))
    cands = []
    for _ in range(600):
        x, d = rng.choice(set_names), rng.choice(sorted(buckets))
        union = frozenset().union(*(sets[s] for s in buckets[d]))
        cands.append((atom('subsetdecom', x, d), union == sets[x]))
    bk, pos, neg = _select('s5', bk, cands, rng)
    bias = Bias(head=('subsetdecom', 2), body=(('member', 2), ('member_2', 2), ('missing_from_bucket', 2)),
                allow_neg=frozenset({('member', 2)}), max_vars=4, max_rules=3, max_body=3,
                max_invented=1, inv_arity=(2,))
    return Task('s5', bk, pos, neg, bias)


def gen_s6(seed=6) -> Task:
    rng = random.Random(seed)
    sets = _named(_random_sets(rng, 8, ELEMENTS, 1, 2))
    set_names = sorted(sets)
    colls = {}
    for _ in range(30):
        group = frozenset(rng.sample(set_names, rng.randint(1, 3)))
        if group not in colls.values():
            colls[f'c{len(colls)}'] = group
    bk = set()
    for c, group in colls.items():
        for s in group:
            bk.add(atom('member', s, c))
    for x in set_names:
        bk.add(atom('eq', x, x))
        for y in set_names:
            if not sets[x] & sets[y]:
                bk.add(atom('distinct', x, y))
    cands = []
    for c in sorted(colls):
        group = sorted(colls[c])
        ok = all(x == y or not sets[x] & sets[y] for x in group for y in group)
        cands.append((atom('mutualdistinct', c), ok))
    rng.shuffle(cands)
    bk, pos, neg = _select('s6', bk, cands, rng)
    bias = Bias(head=('mutualdistinct', 1), body=(('member', 2), ('eq', 2), ('distinct', 2)),
                max_vars=3, max_rules=4, max_body=3, max_invented=2, inv_arity=(1, 2))
    return Task('s6', bk, pos, neg, bias)


def _reach(edges, nodes):
    succ = {n: set() for n in nodes}
    for a, b in edges:
        succ[a].add(b)
    out = {}
    for n in nodes:
        seen, todo = set(), [n]
        while todo:
            x = todo.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        out[n] = seen
    return out


def gen_g3(seed=7) -> Task:
    """Directed graphs.  The concept is the reference program itself."""
    rng = random.Random(seed)
    nodes = [f'n{i}' for i in range(9)]
    edges = set()
    while len(edges) < 10:
        a, b = rng.sample(nodes, 2)
        edges.add((a, b))
    bk_atoms = {atom('edge', a, b) for a, b in edges}
    bk = parse_program(_facts(bk_atoms))
    model = evaluate(bk, reference('g3'), nodes)
    cands = []
    for _ in range(800):
        a, b = rng.choice(nodes), rng.choice(nodes)
        e = atom('unconnected', a, b)
        cands.append((e, e in model))
    text, pos, neg = _select('g3', bk_atoms, cands, rng)
    bias = Bias(head=('unconnected', 2), body=(('edge', 2),), max_vars=3, max_rules=3,
                max_body=2, max_invented=1, inv_arity=(2,), recursion=True)
    return Task('g3', text, pos, neg, bias)


COLOURS = ['red', 'blue', 'green']


def gen_z2(seed=8) -> Task:
    rng = random.Random(seed)
    bk = set()
    cands = []
    pid = 0
    for s in range(24):
        scene = f's{s}'
        n = rng.randint(1, 3)
        colours = []
        for _ in range(n):
            piece = f'p{pid}'
            pid += 1
            c = rng.choice(COLOURS) if rng.random() < 0.6 else 'red'
            colours.append(c)
            bk.add(atom('piece', scene, piece))
            bk.add(atom(c, piece))
        cands.append((atom('zendo', scene), all(c == 'red' for c in colours)))
    text, pos, neg = _select('z2', bk, cands, rng)
    bias = Bias(head=('zendo', 1), body=(('piece', 2), ('red', 1), ('blue', 1), ('green', 1)),
                allow_neg=frozenset({('red', 1), ('blue', 1), ('green', 1)}),
                max_vars=2, max_rules=2, max_body=2, max_invented=1, inv_arity=(1,))
    return Task('z2', text, pos, neg, bias)


def gen_b3(seed=9) -> Task:
    rng = random.Random(seed)
    years = sorted(rng.sample(range(1600, 2500, 4), 30) + [1700, 1800, 1900, 2000, 2100, 2400]
                   + rng.sample(range(1601, 2500, 2), 6))
    bk = set()
    for y in years:
        for d in (4, 100, 400):
            if y % d == 0:
                bk.add(atom(f'divisible{d}', f'y{y}'))
    cands = [(atom('leapyear', f'y{y}'), y % 4 == 0 and (y % 100 != 0 or y % 400 == 0)) for y in years]
    rng.shuffle(cands)
    # keep the century years, they are the informative ones
    cands.sort(key=lambda c: int(c[0].args[0].name[1:]) % 100 != 0)
    text, pos, neg = _select('b3', bk, cands, rng)
    bias = Bias(head=('leapyear', 1), body=(('divisible4', 1), ('divisible100', 1), ('divisible400', 1)),
                max_vars=1, max_rules=3, max_body=2, max_invented=2, inv_arity=(1,))
    return Task('b3', text, pos, neg, bias)


GENERATORS = {
    's1': gen_s1, 's2': gen_s2, 's3': gen_s3, 's4': gen_s4, 's5': gen_s5, 's6': gen_s6,
    'g3': gen_g3, 'z2': gen_z2, 'b3': gen_b3,
}


def generate_suite(root) -> list:
    root = Path(root)
    out = []
    for name, gen in GENERATORS.items():
        t = gen()
        out.append(write_task(root / name, t.bk, t.pos, t.neg, t.bias))
    return out


def bundled_dir() -> Path:
    return Path(__file__).parent / 'data'


if __name__ == '__main__':
    generate_suite(sys.argv[1] if len(sys.argv) > 1 else bundled_dir())
