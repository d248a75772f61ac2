"""Task directories: ``bk.pl``, ``exs.pl`` and ``bias.txt``.

``exs.pl`` holds statements ``pos(<atom>).`` and ``neg(<atom>).``.
``bias.txt`` holds ``key=value`` lines::

    head_pred=f/1
    body_pred=cone/2,red/1
    allow_neg=red/1
    max_vars=3
    max_rules=2
    max_body=2
    inv_arity=1
    max_invented=1
    recursion=false
    neg_invented=true

``body_pred`` and ``allow_neg`` may repeat and take comma-separated lists.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .learner import Bias, LFFNInput
from .logic import LogicError, ParseError, Program, check_arities, parse_atom, parse_program

BK_FILE = 'bk.pl'
EXS_FILE = 'exs.pl'
BIAS_FILE = 'bias.txt'


class TaskError(LogicError):
    pass


@dataclass(frozen=True)
class TaskSpec:
    bk: Path
    exs: Path
    bias: Path
    mode: str = 'polar'
    timeout: float | None = 300.0
    max_generated: int | None = None

    @classmethod
    def from_dir(cls, path, **overrides) -> 'TaskSpec':
        path = Path(path)
        if not path.is_dir():
            raise TaskError(f'{path}: not a task directory')
        return cls(path / BK_FILE, path / EXS_FILE, path / BIAS_FILE, **overrides)

    @property
    def name(self) -> str:
        return self.bk.parent.name


def _pred(text: str, where: str) -> tuple:
    m = re.fullmatch(r'\s*([a-z][A-Za-z0-9_]*)\s*/\s*(\d+)\s*', text)
    if not m:
        raise TaskError(f'{where}: expected name/arity, got {text.strip()!r}')
    return m.group(1), int(m.group(2))


def _bool(text: str, where: str) -> bool:
    t = text.strip().lower()
    if t in ('true', 'yes', '1'):
        return True
    if t in ('false', 'no', '0'):
        return False
    raise TaskError(f'{where}: expected true or false, got {text.strip()!r}')


def _int(text: str, where: str) -> int:
    try:
        v = int(text.strip())
    except ValueError:
        raise TaskError(f'{where}: expected an integer, got {text.strip()!r}') from None
    if v < 0:
        raise TaskError(f'{where}: expected a non-negative integer')
    return v


_INT_KEYS = {'max_vars', 'max_rules', 'max_body', 'max_invented'}
_BOOL_KEYS = {'recursion', 'neg_invented'}


def parse_bias(text: str, source: str = BIAS_FILE) -> Bias:
    head = None
    body, neg, inv = [], [], []
    opts = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = re.split(r'[%#]', raw, maxsplit=1)[0].strip()
        if not line:
            continue
        where = f'{source}:{n}'
        if '=' not in line:
            raise TaskError(f'{where}: expected key=value')
        key, value = (s.strip() for s in line.split('=', 1))
        if key == 'head_pred':
            if head is not None:
                raise TaskError(f'{where}: head_pred given twice')
            head = _pred(value, where)
        elif key == 'body_pred':
            body += [_pred(v, where) for v in value.split(',') if v.strip()]
        elif key == 'allow_neg':
            neg += [_pred(v, where) for v in value.split(',') if v.strip()]
        elif key == 'inv_arity':
            inv += [_int(v, where) for v in value.split(',') if v.strip()]
        elif key in _INT_KEYS:
            opts[key] = _int(value, where)
        elif key in _BOOL_KEYS:
            opts[key] = _bool(value, where)
        else:
            raise TaskError(f'{where}: unknown key {key!r}')
    if head is None:
        raise TaskError(f'{source}: missing head_pred')
    body = list(dict.fromkeys(body))
    undeclared = [f'{p}/{a}' for p, a in neg if (p, a) not in body]
    if undeclared:
        raise TaskError(f'{source}: allow_neg names undeclared body predicates: {", ".join(undeclared)}')
    if 'max_body' in opts and opts['max_body'] < 1 or 'max_rules' in opts and opts['max_rules'] < 1:
        raise TaskError(f'{source}: max_body and max_rules must be at least 1')
    return Bias(head=head, body=tuple(body), allow_neg=frozenset(neg),
                inv_arity=tuple(dict.fromkeys(inv)), **opts)


def format_bias(bias: Bias) -> str:
    lines = [f'head_pred={bias.head[0]}/{bias.head[1]}']
    if bias.body:
        lines.append('body_pred=' + ','.join(f'{p}/{a}' for p, a in bias.body))
    if bias.allow_neg:
        lines.append('allow_neg=' + ','.join(f'{p}/{a}' for p, a in sorted(bias.allow_neg)))
    lines += [f'max_vars={bias.max_vars}', f'max_rules={bias.max_rules}', f'max_body={bias.max_body}']
    if bias.inv_arity:
        lines.append('inv_arity=' + ','.join(map(str, bias.inv_arity)))
    if bias.max_invented is not None:
        lines.append(f'max_invented={bias.max_invented}')
    lines.append(f'recursion={str(bias.recursion).lower()}')
    lines.append(f'neg_invented={str(bias.neg_invented).lower()}')
    return '\n'.join(lines) + '\n'


_EX = re.compile(r'(pos|neg)\s*\(\s*(.*?)\s*\)\s*\.')


def parse_examples(text: str, source: str = EXS_FILE) -> tuple:
    """Return ``(pos, neg)`` lists of ground atoms."""
    pos, neg = [], []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split('%', 1)[0]
        i = 0
        while True:
            while i < len(line) and line[i].isspace():
                i += 1
            if i >= len(line):
                break
            m = _EX.match(line, i)
            if not m:
                raise TaskError(f'{source}:{n}:{i + 1}: expected pos(<atom>). or neg(<atom>).')
            try:
                a = parse_atom(m.group(2))
            except ParseError as e:
                raise TaskError(f'{source}:{n}: {e}') from None
            if not a.is_ground():
                raise TaskError(f'{source}:{n}: example {a} is not ground')
            (pos if m.group(1) == 'pos' else neg).append(a)
            i = m.end()
    return pos, neg


def format_examples(pos, neg) -> str:
    return ''.join(f'pos({a}).\n' for a in pos) + ''.join(f'neg({a}).\n' for a in neg)


def _read(path: Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise TaskError(f'{path}: {e.strerror}') from None


def load_input(spec: TaskSpec) -> LFFNInput:
    """Parse and cross-check the three task files."""
    try:
        bk = parse_program(_read(spec.bk))
    except ParseError as e:
        raise TaskError(f'{spec.bk}: {e}') from None
    except LogicError as e:
        raise TaskError(f'{spec.bk}: {e}') from None
    bias = parse_bias(_read(spec.bias), str(spec.bias))
    pos, neg = parse_examples(_read(spec.exs), str(spec.exs))
    arities = check_arities(bk)
    for p, a in bias.body:
        if arities.get(p, a) != a:
            raise TaskError(f'{spec.bias}: body_pred {p}/{a} but background uses {p}/{arities[p]}')
    name, arity = bias.head
    if name in arities or name.startswith('inv') and name[3:].isdigit():
        raise TaskError(f'{spec.bias}: head predicate {name} clashes with a background or invented symbol')
    clash = [p for p in arities if p.startswith('inv') and p[3:].isdigit()]
    if clash:
        raise TaskError(f'{spec.bk}: background uses reserved symbol {clash[0]}')
    try:
        return LFFNInput(pos, neg, bk, bias)
    except LogicError as e:
        raise TaskError(f'{spec.exs}: {e}') from None


def load_task(path, **overrides) -> tuple:
    """Return ``(TaskSpec, LFFNInput)`` for a task directory."""
    spec = TaskSpec.from_dir(path, **overrides)
    return spec, load_input(spec)


def write_task(path, bk: Program | str, pos, neg, bias: Bias) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    (path / BK_FILE).write_text(bk if isinstance(bk, str) else str(bk))
    (path / EXS_FILE).write_text(format_examples(pos, neg))
    (path / BIAS_FILE).write_text(format_bias(bias))
    return path
