"""Micro-tasks small enough to enumerate their whole hypothesis space."""

from __future__ import annotations

from polarilp.learner import Bias, LFFNInput
from polarilp.logic import parse_atom, parse_program


def _input(bk, pos, neg, bias):
    return LFFNInput([parse_atom(a) for a in pos], [parse_atom(a) for a in neg],
                     parse_program(bk), bias)


def all_red():
    """Scenes whose pieces are all red; needs a negated invented symbol."""
    bk = '''
    piece(s1,p1). piece(s1,p2). red(p1). red(p2).
    piece(s2,p3). red(p3).
    piece(s3,p4). piece(s3,p5). red(p4). blue(p5).
    piece(s4,p6). blue(p6).
    piece(s5,p7). piece(s5,p8). blue(p7). blue(p8).
    '''
    bias = Bias(head=('f', 1), body=(('piece', 2), ('red', 1)),
                allow_neg=frozenset({('red', 1)}), max_vars=2, max_rules=2, max_body=2,
                max_invented=1)
    return _input(bk, ['f(s1)', 'f(s2)'], ['f(s3)', 'f(s4)', 'f(s5)'], bias)


def childless():
    """People with no children: invention lifts the unbound child variable."""
    bk = '''
    person(ann). person(bob). person(cat). person(dan). person(eve).
    parent(ann,bob). parent(bob,cat). parent(ann,dan).
    '''
    bias = Bias(head=('f', 1), body=(('person', 1), ('parent', 2)),
                max_vars=2, max_rules=2, max_body=2, max_invented=1)
    return _input(bk, ['f(cat)', 'f(dan)', 'f(eve)'], ['f(ann)', 'f(bob)'], bias)


def grandparent():
    """A definite conjunction; no negation needed."""
    bk = '''
    parent(a,b). parent(b,c). parent(c,d). parent(e,f). parent(f,g). parent(a,h).
    '''
    bias = Bias(head=('f', 2), body=(('parent', 2),), max_vars=3, max_rules=2,
                max_body=2, max_invented=0)
    return _input(bk, ['f(a,c)', 'f(b,d)', 'f(e,g)'], ['f(a,b)', 'f(c,d)', 'f(a,d)', 'f(h,a)'], bias)


def not_subset():
    """Pairs of sets where the first is not a subset of the second."""
    bk = '''
    set(x). set(y). set(z). set(w).
    member(a,x). member(b,x). member(a,y). member(a,z). member(b,z). member(c,z). member(c,w).
    '''
    bias = Bias(head=('f', 2), body=(('member', 2),),
                allow_neg=frozenset({('member', 2)}), max_vars=3, max_rules=2, max_body=2,
                max_invented=0)
    return _input(bk, ['f(x,y)', 'f(z,x)', 'f(w,x)', 'f(z,w)'], ['f(x,z)', 'f(y,x)', 'f(y,z)', 'f(x,x)'], bias)


TASKS = {'all_red': all_red, 'childless': childless, 'grandparent': grandparent, 'not_subset': not_subset}
