"""Command line: ``learn``, ``polarise`` and ``bench``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .evaluator import UnstratifiedError
from .learner import MODES, learn
from .logic import LogicError, parse_program, print_program
from .polarise import polarise
from .tasks import BIAS_FILE, TaskError, load_task

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNSOLVED = 2


def _budget(args) -> dict:
    return {'timeout': args.timeout if args.timeout > 0 else None,
            'max_generated': args.max_generated}


def cmd_learn(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    try:
        spec, inp = load_task(args.task, mode=args.mode, **_budget(args))
    except (TaskError, LogicError) as e:
        print(f'error: {e}', file=err)
        return EXIT_INPUT
    result = learn(inp, mode=spec.mode, timeout=spec.timeout, max_generated=spec.max_generated)
    if result.hypothesis is not None:
        out.write(print_program(result.program))
    else:
        out.write(f'% no solution ({result.status})\n')
    record = result.stats.to_json()
    out.write(record + '\n')
    if args.stats_json:
        Path(args.stats_json).write_text(record + '\n')
    return EXIT_OK if result.solved else EXIT_UNSOLVED


def cmd_polarise(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    try:
        program = parse_program(Path(args.file).read_text(), allow_unsafe=True)
        result, log = polarise(program)
    except OSError as e:
        print(f'error: {args.file}: {e.strerror}', file=err)
        return EXIT_INPUT
    except UnstratifiedError as e:
        print(f'error: {e}', file=err)
        return EXIT_INPUT
    except LogicError as e:
        print(f'error: {args.file}: {e}', file=err)
        return EXIT_INPUT
    out.write(print_program(result))
    out.write(log.format())
    return EXIT_OK


BENCH_COLUMNS = ('task', 'mode', 'status', 'cost', 'generated', 'pruned', 'time_ms')


def _task_dirs(root: Path) -> list:
    return sorted(p for p in root.iterdir() if p.is_dir() and (p / BIAS_FILE).exists()) \
        if root.is_dir() else []


def cmd_bench(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    root = Path(args.suite)
    if not root.is_dir():
        print(f'error: {root}: not a directory', file=err)
        return EXIT_INPUT
    modes = [m.strip() for m in args.modes.split(',') if m.strip()]
    bad = [m for m in modes if m not in MODES]
    if bad:
        print(f'error: unknown mode {bad[0]}', file=err)
        return EXIT_INPUT
    failed = False
    out.write('\t'.join(BENCH_COLUMNS) + '\n')
    for task in _task_dirs(root):
        for mode in modes:
            try:
                spec, inp = load_task(task, mode=mode, **_budget(args))
                r = learn(inp, mode=mode, timeout=spec.timeout, max_generated=spec.max_generated)
            except Exception as e:         # report and carry on with the other tasks
                print(f'error: {task.name}: {e}', file=err)
                out.write(f'{task.name}\t{mode}\terror\t-\t-\t-\t-\n')
                failed = True
                continue
            s = r.stats
            cost = '-' if s.solution_cost is None else str(s.solution_cost)
            elapsed = s.time_generate_ms + s.time_test_ms + s.time_constrain_ms
            out.write(f'{task.name}\t{mode}\t{r.status}\t{cost}\t{s.generated}\t{s.pruned}\t{elapsed:.0f}\n')
            out.flush()
    return EXIT_INPUT if failed else EXIT_OK


def _add_budget(p):
    p.add_argument('--timeout', type=float, default=300.0, help='seconds per run, 0 for none (default 300)')
    p.add_argument('--max-generated', type=int, default=None, help='stop after testing this many hypotheses')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='polarilp', description='Learn polar normal logic programs from examples.')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('learn', help='learn a program for a task directory')
    p.add_argument('task', help='directory with bk.pl, exs.pl and bias.txt')
    p.add_argument('--mode', choices=MODES, default='polar')
    _add_budget(p)
    p.add_argument('--stats-json', metavar='PATH', help='also write the stats record here')
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser('polarise', help='rewrite a stratified program into a polar one')
    p.add_argument('file')
    p.set_defaults(func=cmd_polarise)

    p = sub.add_parser('bench', help='run every task of a suite in several modes')
    p.add_argument('suite', help='directory of task directories')
    p.add_argument('--modes', default='polar,banish', help='comma-separated (default polar,banish)')
    _add_budget(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == '__main__':
    sys.exit(main())
