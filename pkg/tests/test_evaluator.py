import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from polarilp.evaluator import (Evaluator, ResourceError, UnstratifiedError, classify, entails, evaluate,
                                is_stratified, stratify)
from polarilp.logic import Atom, Const, Literal, Program, Rule, atom, parse_atom, parse_program
from polarilp.polarity import is_polar

from oracles import all_answer_sets, answer_set, random_facts, random_polar, random_stratified


def prog(text):
    return parse_program(text, allow_unsafe=True)


def atoms(model):
    return {str(a) for a in model.atoms()}


def test_stratify_odd():
    assert stratify(prog('odd(X) :- succ(Y,X), not odd(Y).')) is None


def test_stratify_definite():
    s = stratify(prog('p(X) :- q(X). q(X) :- r(X).'))
    assert s is not None
    assert set(s.mu.values()) == {0}


def test_stratify_negation_levels():
    s = stratify(prog('f :- not inv1. inv1 :- b.'))
    assert s.mu['inv1'] == 0 and s.mu['f'] == 1


def _brute_mu(program):
    """Some level function into {0..n} satisfying both stratification conditions."""
    heads = sorted(program.head_preds)
    for levels in itertools.product(range(len(heads)), repeat=len(heads)):
        mu = dict(zip(heads, levels))
        ok = all(
            (mu[r.head.pred] > mu[l.atom.pred]) if l.negated else (mu[r.head.pred] >= mu[l.atom.pred])
            for r in program for l in r.body if l.atom.pred in mu)
        if ok:
            return mu
    return None


def _flip(p, rng):
    """Flip the sign of every call to a defined symbol in one rule.

    This may close a cycle through negation.
    """
    rules = list(p.rules)
    i = rng.randrange(len(rules))
    body = [Literal(l.atom, not l.negated) if l.atom.pred in p.head_preds else l for l in rules[i].body]
    rules[i] = Rule(rules[i].head, tuple(body))
    return Program(rules)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 9), st.booleans())
def test_stratify_matches_level_search(seed, flip):
    p = random_stratified(random.Random(seed), max_rules=4)
    if flip:
        p = _flip(p, random.Random(seed + 1))
    s = stratify(p)
    assert (s is not None) == (_brute_mu(p) is not None)
    if s is not None:
        for r in p:
            for l in r.body:
                if l.atom.pred in s.mu:
                    if l.negated:
                        assert s.mu[r.head.pred] > s.mu[l.atom.pred]
                    else:
                        assert s.mu[r.head.pred] >= s.mu[l.atom.pred]


def test_negated_invented_conjunction():
    m = evaluate(prog('a.'), prog('f :- not inv1. inv1 :- a, b.'))
    assert atoms(m) == {'a', 'f'}


def test_negated_invented_single():
    m = evaluate(prog('a.'), prog('f :- not inv1. inv1 :- a.'))
    assert atoms(m) == {'a', 'inv1'}


def test_empty_model():
    assert len(evaluate(Program(), Program())) == 0


def test_entails():
    b = prog('a.')
    f = atom('f')
    assert entails(b, prog('f :- not inv1. inv1 :- a, b.'), f)
    assert not entails(b, prog('f :- not inv1. inv1 :- a.'), f)
    assert not entails(Program(), Program(), f)


def test_unstratified_raises():
    with pytest.raises(UnstratifiedError):
        evaluate(prog('succ(a,b).'), prog('odd(X) :- succ(Y,X), not odd(Y).'))


def test_resource_guard():
    b = prog('n(a). n(b). n(c). n(d). n(e).')
    h = prog('t(A,B,C,D) :- n(A), n(B), n(C), n(D).')
    with pytest.raises(ResourceError):
        evaluate(b, h, max_atoms=100)
    assert len(evaluate(b, h)) == 5 + 5 ** 4


def test_recursion():
    m = evaluate(prog('edge(a,b). edge(b,c). edge(c,d).'),
                 prog('path(A,B) :- edge(A,B). path(A,B) :- edge(A,C), path(C,B).'))
    assert len(m.extension('path')) == 6


def test_unconnected():
    b = prog('node(a). node(b). node(c). edge(a,b). edge(b,c).')
    h = prog('''unconnected(A,B) :- node(A), node(B), not inv1(A,B).
                inv1(A,B) :- edge(A,B).
                inv1(A,B) :- edge(A,C), inv1(C,B).''')
    m = evaluate(b, h)
    assert ('a', 'c') not in m.extension('unconnected')
    assert ('c', 'a') in m.extension('unconnected')


def test_active_domain_for_unsafe_head():
    m = evaluate(prog('e(a). e(b). r(a,b).'), prog('f(A) :- not inv1(A). inv1(A) :- r(A,B).'))
    assert m.extension('f') == {('b',)}


def test_evaluator_reuses_background():
    ev = Evaluator(prog('e(a). e(b).'), ['c'])
    m = ev.evaluate(prog('f(X) :- e(X).'))
    assert m.extension('f') == {('a',), ('b',)}
    assert ev.entails(prog('f(X) :- e(X), not g(X).'), atom('f', 'a'))


def test_classify_flags():
    b = prog('q(a). q(b).')
    pos, neg = [parse_atom('f(a)'), parse_atom('f(b)')], [parse_atom('f(c)')]
    o = classify(prog('f(X) :- q(X).'), b, pos, neg)
    assert o.complete and o.consistent and o.solution
    o = classify(prog('f(X) :- q(X), r(X).'), b, pos, neg)
    assert o.totally_incomplete and not o.partially_complete and o.consistent


def test_all_cones_scene_incomplete():
    # every positive scene has a cone, so "no cone" covers none of them
    b = prog('''scene(s1). scene(s2). scene(s3).
                cone(s1,p1). red(p1). cone(s2,p2). red(p2). cone(s2,p3). red(p3).
                cone(s3,p4). blue(p4).''')
    h1 = prog('f(S) :- scene(S), not inv1(S). inv1(S) :- cone(S,A).')
    o = classify(h1, b, [parse_atom('f(s1)'), parse_atom('f(s2)')], [parse_atom('f(s3)')])
    assert o.incomplete and o.totally_incomplete and o.consistent


CONSTS = ['a', 'b', 'c', 'd']


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_matches_answer_set(seed):
    rng = random.Random(seed)
    consts = CONSTS[:rng.randint(1, 4)]
    h = random_stratified(rng)
    b = random_facts(rng, consts)
    assert set(evaluate(b, h, consts).atoms()) == set(answer_set(b | h, consts))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_unique_answer_set_by_enumeration(seed):
    rng = random.Random(seed)
    consts = ['a']
    h = random_stratified(rng, max_rules=4)
    b = random_facts(rng, consts)
    sets = all_answer_sets(b | h, consts)
    assert len(sets) == 1
    assert set(evaluate(b, h, consts).atoms()) == set(sets[0])


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_naive_equals_semi_naive(seed):
    rng = random.Random(seed)
    consts = CONSTS[:rng.randint(1, 4)]
    h = random_stratified(rng)
    b = random_facts(rng, consts)
    assert evaluate(b, h, consts, naive=True) == evaluate(b, h, consts)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_adding_a_fact_is_monotone_for_definite(seed):
    rng = random.Random(seed)
    h = Program(r for r in random_stratified(rng) if not r.body_neg)
    if not len(h):
        return
    b = random_facts(rng, ['a', 'b'])
    fact = Rule(Atom('e', (Const(rng.choice('ab')),)))
    before = set(evaluate(b, h, ['a', 'b']).atoms())
    after = set(evaluate(b | Program([fact]), h, ['a', 'b']).atoms())
    assert before <= after


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_polar_programs_are_stratified(seed):
    rng = random.Random(seed)
    for p in (random_polar(rng), _flip(random_stratified(rng), rng)):
        if is_polar(p):
            assert is_stratified(p)
