import random

import pytest
from hypothesis import given, settings, strategies as st

from polarilp.evaluator import entails
from polarilp.logic import Const, Program, Var, apply_substitution, atom, parse_program, parse_rule
from polarilp.polarity import NotPolarError, is_polar
from polarilp.subsumption import clause_subsumes, polar_subsumes, subsumes, theory_subsumes

from oracles import (brute_subsumes, polar_generalise, random_polar, random_polar_pair, random_rule,
                     specialise)


def prog(text):
    return parse_program(text, allow_unsafe=True)


def rule(text):
    return parse_rule(text)


PREDS = [('p', 1), ('q', 2), ('r', 2)]


def test_witness_binds_to_constant():
    c1, c2 = rule('p(X) :- q(X).'), rule('p(a) :- q(a), r(a).')
    w = clause_subsumes(c1, c2)
    assert w is not None
    assert dict(w.substitution) == {Var('X'): Const('a')}
    assert apply_substitution(c1, w.substitution).body[0] in c2.body


def test_self_subsumption_identity():
    r = rule('p(X,Y) :- q(X,Z), not r(Z,Y).')
    w = clause_subsumes(r, r)
    assert w is not None
    assert apply_substitution(r, w.substitution) == r


def test_shorter_body_subsumes_longer():
    assert subsumes(rule('inv1(A,B) :- a(A).'), rule('inv1(A,B) :- a(A), b(B).'))
    assert not subsumes(rule('inv1(A,B) :- a(A), b(B).'), rule('inv1(A,B) :- a(A).'))


def test_sign_must_match():
    assert not subsumes(rule('p(X) :- q(X).'), rule('p(X) :- r(X), not q(X).'))
    assert subsumes(rule('p(X) :- not q(X).'), rule('p(X) :- r(X), not q(X).'))


def test_heads_must_match():
    assert not subsumes(rule('p(X) :- q(X).'), rule('s(X) :- q(X).'))
    assert not subsumes(rule('p(X,X) :- q(X).'), rule('p(X,Y) :- q(X).'))
    assert subsumes(rule('p(X,Y) :- q(X).'), rule('p(X,X) :- q(X).'))


def test_theory_subsumes():
    p = prog('p(X) :- q(X).')
    assert theory_subsumes(p, Program())
    assert theory_subsumes(p, p)
    assert theory_subsumes(p, prog('p(a) :- q(a), r(a). p(b) :- q(b).'))
    assert not theory_subsumes(prog('p(a) :- q(a), r(a).'), p)


def test_polar_subsumes_specialised_negative_rule():
    p = prog('f :- not inv1. inv1 :- a, b.')
    q = prog('f :- not inv1. inv1 :- a.')
    assert polar_subsumes(p, q)
    assert not polar_subsumes(q, p)


def test_polar_subsumes_dropped_negative_rule():
    p = prog('f :- not inv1. inv1 :- b. inv1 :- a.')
    q = prog('f :- not inv1. inv1 :- b.')
    assert polar_subsumes(q, p)
    assert not polar_subsumes(p, q)


def test_polar_subsumes_reflexive():
    p = prog('f(A) :- s(A), not inv1(A). inv1(A) :- c(A,B).')
    assert polar_subsumes(p, p)


def test_polar_subsumes_not_polar():
    with pytest.raises(NotPolarError):
        polar_subsumes(prog('f :- inv1, not inv1. inv1 :- a.'), prog('f :- a.'))


def test_plain_subsumption_not_sound_for_normal_programs():
    b = prog('a.')
    p = prog('f :- not inv1. inv1 :- b. inv1 :- a.')
    q = prog('f :- not inv1. inv1 :- b.')
    assert theory_subsumes(p, q)
    assert entails(b, q, atom('f'))
    assert not entails(b, p, atom('f'))
    p2 = prog('f :- not inv1. inv1 :- a, b.')
    q2 = prog('f :- not inv1. inv1 :- a.')
    assert theory_subsumes(q2, p2)
    assert entails(b, p2, atom('f'))
    assert not entails(b, q2, atom('f'))


@settings(max_examples=500, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_matches_brute_force(seed):
    rng = random.Random(seed)
    c1 = random_rule(rng, PREDS, max_body=4)
    c2 = specialise(rng, c1, PREDS) if rng.random() < 0.5 else random_rule(rng, PREDS, max_body=4)
    assert subsumes(c1, c2) == brute_subsumes(c1, c2)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_theory_subsumes_reflexive_transitive(seed):
    rng = random.Random(seed)
    a = Program(random_rule(rng, PREDS, max_body=2) for _ in range(rng.randint(1, 3)))
    b = Program(specialise(rng, r, PREDS) for r in a if rng.random() < 0.8)
    c = Program(specialise(rng, r, PREDS) for r in b)
    assert theory_subsumes(a, a)
    assert theory_subsumes(a, b) and theory_subsumes(b, c)
    assert theory_subsumes(a, c)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_polar_subsumes_reflexive_transitive(seed):
    rng = random.Random(seed)
    q = random_polar(rng)
    p = polar_generalise(rng, q)
    o = polar_generalise(rng, p)
    if not all(is_polar(x) for x in (o, p, q)):
        return
    assert polar_subsumes(q, q)
    if polar_subsumes(o, p) and polar_subsumes(p, q):
        assert polar_subsumes(o, q)


def test_generalising_mostly_polar_subsumes():
    # guards the generator: most constructed pairs are in the relation
    rng = random.Random(0)
    pairs = [random_polar_pair(rng) for _ in range(300)]
    pairs = [(p, q) for p, q in pairs if is_polar(p) and is_polar(q)]
    assert sum(polar_subsumes(p, q) for p, q in pairs) > len(pairs) * 0.8
