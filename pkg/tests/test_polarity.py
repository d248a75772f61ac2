import random
import warnings

import pytest
from hypothesis import given, settings, strategies as st

from polarilp.logic import Literal, Program, Rule, atom, parse_program
from polarilp.polarity import (NEG, POS, NotPolarError, assign_polarities, compute_top, is_polar,
                               partition, polarity_map)

from oracles import brute_polarities, brute_top, random_stratified


def prog(text):
    return parse_program(text, allow_unsafe=True)


EX1 = 'p :- g, q. p :- w, not s. g :- q, p. s :- l.'
ODD = 'odd(X) :- succ(Y,X), not odd(Y).'
AMBIGUOUS = 'f :- inv1, not inv1. inv1 :- inv2. inv2 :- w.'
UNCONNECTED = '''
unconnected(A,B) :- node(A), node(B), not inv1(A,B).
inv1(A,B) :- edge(A,B).
inv1(A,B) :- edge(A,C), inv1(C,B).
'''


def test_top_example():
    top, defs = compute_top(prog(EX1))
    assert top == {'p', 'g'}
    assert defs == {'s'}


def test_top_single_fact():
    assert compute_top(prog('p.')) == ({'p'}, set())


def test_top_negated_invented():
    assert compute_top(prog('f :- not inv1. inv1 :- a.')) == ({'f'}, {'inv1'})


def test_top_excludes_background():
    top, defs = compute_top(prog('f(X) :- b(X). b(a).'), background={'b'})
    assert top == {'f'} and defs == set()


def test_polarities_example():
    pm = polarity_map(prog(EX1))
    assert pm['p'] == {POS}
    assert pm['g'] == {POS}
    assert pm['s'] == {NEG}
    assert pm.polar


def test_odd_is_neither():
    pm = polarity_map(prog(ODD))
    assert pm.top == set()
    assert pm['odd'] == set()
    assert not is_polar(prog(ODD))


def test_odd_under_a_top_symbol_is_both():
    pm = polarity_map(prog('even(X) :- num(X), not odd(X). ' + ODD))
    assert pm['odd'] == {POS, NEG}
    assert not pm.polar


def test_ambiguous_invented():
    pm = polarity_map(prog(AMBIGUOUS))
    assert pm['inv1'] == {POS, NEG}
    assert pm['inv2'] == {POS, NEG}
    assert not pm.polar


def test_unconnected_is_polar():
    pm = polarity_map(prog(UNCONNECTED))
    assert pm.polar
    assert pm['unconnected'] == {POS}
    assert pm['inv1'] == {NEG}


def test_partition_unconnected():
    p = prog(UNCONNECTED)
    r1, r2, r3 = p.rules
    part = partition(p)
    assert part.pos == Program([r1])
    assert part.neg == Program([r2, r3])


def test_partition_definite():
    part = partition(prog('p(X) :- q(X). q(X) :- r(X).'))
    assert len(part.neg) == 0 and len(part.pos) == 2


def test_partition_negated_invented():
    part = partition(prog('f :- not inv1. inv1 :- a.'))
    assert [r.head.pred for r in part.pos] == ['f']
    assert [r.head.pred for r in part.neg] == ['inv1']


def test_partition_not_polar():
    with pytest.raises(NotPolarError):
        partition(prog(ODD))


def test_empty_program_is_polar():
    assert is_polar(Program())


def test_unreachable_warns():
    # g and h only call each other negatively, so no top symbol reaches them
    p = prog('f :- a. g :- not h. h :- not g.')
    with pytest.warns(UserWarning):
        pm = assign_polarities(p)
    assert not pm.polar


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_invariants(seed):
    p = random_stratified(random.Random(seed), max_rules=6)
    pm = polarity_map(p)
    assert pm.top & pm.defs == set()
    assert pm.top | pm.defs == p.head_preds
    assert all(pm[q] == {POS} for q in pm.top)
    if pm.polar:
        part = partition(p)
        assert set(part.pos.keys) & set(part.neg.keys) == set()
        assert part.pos | part.neg == p


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_matches_path_oracle(seed):
    p = random_stratified(random.Random(seed), max_rules=6)
    expected, top = brute_polarities(p)
    pm = polarity_map(p)
    assert pm.top == top
    assert {q: set(v) for q, v in pm.polarity.items()} == {q: set(v) for q, v in expected.items()}


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(0, 10 ** 9))
def test_adding_a_rule_never_grows_top(seed, seed2):
    p = random_stratified(random.Random(seed), max_rules=5)
    extra = random_stratified(random.Random(seed2), max_rules=1).rules[0]
    q = p | Program([extra])
    old, _ = compute_top(p)
    new, _ = compute_top(q)
    assert new <= old | {extra.head.pred}
    assert compute_top(q)[0] == brute_top(q)
