import pytest
from hypothesis import given, settings, strategies as st

from polarilp import taskgen
from polarilp.evaluator import classify
from polarilp.learner import Bias
from polarilp.logic import parse_atom
from polarilp.polarity import is_polar
from polarilp.tasks import (BIAS_FILE, BK_FILE, EXS_FILE, TaskError, format_bias, format_examples,
                            load_task, parse_bias, parse_examples, write_task)

NAMES = sorted(taskgen.GENERATORS)


# ---------------------------------------------------------------------------
# bias files

def test_parse_bias():
    b = parse_bias('''% a comment
head_pred=f/2
body_pred=member/2, edge/2
allow_neg=member/2
max_vars=3
inv_arity=2,1
recursion=true
''')
    assert b.head == ('f', 2)
    assert b.body == (('member', 2), ('edge', 2))
    assert b.allow_neg == {('member', 2)}
    assert b.max_vars == 3 and b.recursion
    assert b.inv_arity == (2, 1)


@pytest.mark.parametrize('text, fragment', [
    ('body_pred=q/1\n', 'missing head_pred'),
    ('head_pred=f/1\nhead_pred=g/1\n', 'given twice'),
    ('head_pred=f/1\ncolour=red\n', 'unknown key'),
    ('head_pred=f\n', 'name/arity'),
    ('head_pred=f/1\nmax_vars=three\n', 'integer'),
    ('head_pred=f/1\nmax_vars=-1\n', 'non-negative'),
    ('head_pred=f/1\nrecursion=maybe\n', 'true or false'),
    ('head_pred=f/1\nallow_neg=q/1\n', 'undeclared'),
    ('head_pred=f/1\nmax_body=0\n', 'at least 1'),
    ('head_pred f/1\n', 'key=value'),
])
def test_bias_errors(text, fragment):
    with pytest.raises(TaskError) as e:
        parse_bias(text)
    assert fragment in str(e.value)


def test_bias_error_names_line():
    with pytest.raises(TaskError) as e:
        parse_bias('head_pred=f/1\n\nmax_rules=x\n', 'b.txt')
    assert str(e.value).startswith('b.txt:3:')


PRED = st.tuples(st.sampled_from(['p', 'q', 'edge', 'member']), st.integers(0, 3))


@settings(max_examples=100, deadline=None)
@given(head=PRED, body=st.lists(PRED, max_size=4, unique_by=lambda x: x[0]),
       vars_=st.integers(1, 5), rules=st.integers(1, 4), body_len=st.integers(1, 4),
       inv=st.lists(st.integers(0, 3), max_size=2, unique=True), rec=st.booleans(), neg=st.booleans())
def test_bias_round_trip(head, body, vars_, rules, body_len, inv, rec, neg):
    b = Bias(head=('f', head[1]), body=tuple(body), allow_neg=frozenset(body[:1]), max_vars=vars_,
             max_rules=rules, max_body=body_len, inv_arity=tuple(inv), recursion=rec, neg_invented=neg)
    assert parse_bias(format_bias(b)) == b


# ---------------------------------------------------------------------------
# example files

def test_parse_examples():
    pos, neg = parse_examples('pos(f(a)). neg(f(b)).\n% skip\npos(g(a,b)). % trailing\n')
    assert pos == [parse_atom('f(a)'), parse_atom('g(a,b)')]
    assert neg == [parse_atom('f(b)')]


def test_examples_round_trip():
    pos, neg = [parse_atom('f(a,b)')], [parse_atom('f(b,a)'), parse_atom('f(a,a)')]
    assert parse_examples(format_examples(pos, neg)) == (pos, neg)


@pytest.mark.parametrize('text, fragment', [
    ('pos(f(X)).\n', 'not ground'),
    ('maybe(f(a)).\n', 'expected pos'),
    ('pos(f(a).\n', "expected ')'"),
    ('pos(f(a,)).\n', ''),
])
def test_example_errors(text, fragment):
    with pytest.raises(TaskError) as e:
        parse_examples(text, 'e.pl')
    assert str(e.value).startswith('e.pl:1')
    assert fragment in str(e.value)


# ---------------------------------------------------------------------------
# task directories

BIAS = Bias(head=('f', 1), body=(('q', 1),), max_vars=1, max_rules=1, max_body=1)


def _task(tmp_path, bk='q(a).\n', exs='pos(f(a)).\nneg(f(b)).\n', bias=None):
    d = write_task(tmp_path / 't', bk, [], [], bias or BIAS)
    (d / EXS_FILE).write_text(exs)
    return d


def test_load_task(tmp_path):
    spec, inp = load_task(_task(tmp_path), mode='banish', timeout=5.0)
    assert spec.name == 't' and spec.mode == 'banish' and spec.timeout == 5.0
    assert list(inp.pos) == [parse_atom('f(a)')] and list(inp.neg) == [parse_atom('f(b)')]
    assert len(inp.background) == 1


def test_load_task_not_a_directory(tmp_path):
    with pytest.raises(TaskError, match='not a task directory'):
        load_task(tmp_path / 'missing')


def test_load_task_missing_file(tmp_path):
    d = _task(tmp_path)
    (d / BK_FILE).unlink()
    with pytest.raises(TaskError, match=BK_FILE):
        load_task(d)


@pytest.mark.parametrize('kwargs, fragment', [
    ({'bk': 'q(a,b).\n'}, 'background uses q/2'),
    ({'bk': 'q(a). f(b).\n'}, 'clashes'),
    ({'bk': 'q(a). inv1(a).\n'}, 'reserved symbol inv1'),
    ({'bk': 'q(a) :- .\n'}, BK_FILE),
    ({'exs': 'pos(f(a)).\nneg(f(a)).\n'}, EXS_FILE),
    ({'exs': 'pos(g(a)).\n'}, EXS_FILE),
    ({'exs': 'pos(f(A)).\n'}, 'not ground'),
])
def test_load_task_errors(tmp_path, kwargs, fragment):
    with pytest.raises(TaskError) as e:
        load_task(_task(tmp_path, **kwargs))
    assert fragment in str(e.value)


def test_head_named_like_invented(tmp_path):
    with pytest.raises(TaskError, match='clashes'):
        load_task(_task(tmp_path, exs='pos(inv1(a)).\n',
                        bias=Bias(head=('inv1', 1), body=(('q', 1),))))


# ---------------------------------------------------------------------------
# bundled suite

@pytest.mark.parametrize('name', NAMES)
def test_bundled_matches_generator(tmp_path, name):
    t = taskgen.GENERATORS[name]()
    d = write_task(tmp_path / name, t.bk, t.pos, t.neg, t.bias)
    for f in (BK_FILE, EXS_FILE, BIAS_FILE):
        assert (d / f).read_text() == (taskgen.bundled_dir() / name / f).read_text(), f


@pytest.mark.parametrize('name', NAMES)
def test_reference_solves_bundled_task(name):
    _, inp = load_task(taskgen.bundled_dir() / name)
    ref = taskgen.reference(name)
    assert 0 < len(inp.pos) and 0 < len(inp.neg) and len(inp.pos) + len(inp.neg) <= taskgen.MAX_EXAMPLES
    assert classify(ref, inp.background, inp.pos, inp.neg).solution
    assert is_polar(ref)


@pytest.mark.parametrize('name', NAMES)
def test_reference_fits_bias(name):
    _, inp = load_task(taskgen.bundled_dir() / name)
    b, ref = inp.bias, taskgen.reference(name)
    body = dict(b.body)
    invented = ref.head_preds - {b.head[0]}
    assert len(ref) <= b.max_rules
    assert len(invented) <= b.invented_limit
    for r in ref:
        assert len(r.body) <= b.max_body
        assert len(r.variables) <= b.max_vars
        if r.head.pred in invented:
            assert r.head.arity in b.invented_arities
        else:
            assert r.head.pred == b.head[0] and r.head.arity == b.head[1]
        for l in r.body:
            p = l.atom.pred
            if p in invented:
                assert b.neg_invented or not l.negated
            else:
                assert body[p] == l.atom.arity
                assert not l.negated or (p, l.atom.arity) in b.allow_neg
