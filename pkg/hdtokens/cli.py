"""
Command-line interface for hdtokens
"""

import argparse
import os
import sys

from . import __version__
from .checks import SUITES, run_all
from .deciders import decide_hd
from .errors import (
    AutomatonError, EvaluationError, GenConfigError, HdqSyntaxError, OutOfScopeError, UnsupportedRouteError, WordError,
)
from .monitor import monitor_action, monitor_phase, setup_runtime_monitor
from .oracle import GenConfig, generate_random
from .parser import HDQParser, parse_word
from .reporter import SuiteReporter, arena_dot, arena_json, verdict_json, verdict_line
from .settings import load_settings, solver_limits
from .solvers import solve
from .tokengames import build_gk_limsup, g1_builder, g2_builder
from .values import automaton_value

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_OUT_OF_SCOPE = 3


def create_parser() -> argparse.ArgumentParser:
    """Create argument parser"""
    parser = argparse.ArgumentParser(
        prog='hdtokens',
        description='hdtokens - decide history-determinism of quantitative automata with token games',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog='''
Examples:
  %(prog)s decide data/automata/fig_limsup.hdq
  %(prog)s decide data/automata/fig_reach_a.hdq --json --resolver
  %(prog)s value data/automata/fig_limsup.hdq "(a)"
  %(prog)s game data/automata/fig_sup.hdq --g1 --dot -o sup_g1.dot
  %(prog)s gen --states 5 --valuefn LimSup --mode infinite --seed 7 -o random.hdq
  %(prog)s check --suite figures --report-output report.csv
        '''
    )

    parser.add_argument(
        '--settings-file',
        type=str,
        help='Path to settings JSON file'
    )
    parser.add_argument(
        '--log-dir',
        type=str,
        help='Directory for runtime logs (default: data/logs)'
    )
    parser.add_argument(
        '--quiet', '-q',
        action='store_true',
        help='Suppress progress output'
    )
    parser.add_argument(
        '--version', '-v',
        action='version',
        version=f'%(prog)s {__version__}'
    )

    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    p = sub.add_parser('decide', help='Decide whether an automaton is history-deterministic')
    p.add_argument('file', help='Automaton file (.hdq)')
    p.add_argument('--json', action='store_true', help='Print the verdict as JSON')
    p.add_argument('--resolver', action='store_true', help='Include the resolver table (JSON only)')

    p = sub.add_parser('value', help='Exact value of a lasso word u(v)')
    p.add_argument('file', help='Automaton file (.hdq)')
    p.add_argument('word', help='Word literal, e.g. ab(ba); u or u() on finite words')

    p = sub.add_parser('game', help='Build a token game and export it')
    p.add_argument('file', help='Automaton file (.hdq)')
    tokens = p.add_mutually_exclusive_group(required=True)
    tokens.add_argument('--g1', action='store_true', help='1-token game')
    tokens.add_argument('--g2', action='store_true', help='2-token game')
    tokens.add_argument('--gk', type=int, metavar='N', help='LimSup game with N Adam tokens (1-3)')
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument('--dot', action='store_true', help='Graphviz DOT output (default)')
    fmt.add_argument('--json', action='store_true', help='JSON output with position decodings')
    p.add_argument('--solved', action='store_true', help='Fill winning regions (DOT only)')
    p.add_argument('--output', '-o', type=str, help='Output file (default: stdout)')

    p = sub.add_parser('gen', help='Write a seeded random automaton')
    p.add_argument('--states', type=int, help='Number of states')
    p.add_argument('--alphabet', type=int, help='Alphabet size')
    p.add_argument('--weights', type=int, help='Weights drawn from 0..K-1')
    p.add_argument('--min-out', dest='min_out', type=int, help='Minimum out-degree per state and letter')
    p.add_argument('--max-out', dest='max_out', type=int, help='Maximum out-degree per state and letter')
    p.add_argument('--valuefn', type=str, help='Value function, e.g. Sup, LimSup, DSum, Reachability')
    p.add_argument('--mode', type=str, choices=['finite', 'infinite'], help='Word mode')
    p.add_argument('--discount', type=str, help='Discount factor for DSum, e.g. 1/2')
    p.add_argument('--seed', type=int, help='Random seed (default: $HDQ_SEED or settings)')
    p.add_argument('--output', '-o', type=str, help='Output file (default: stdout)')

    p = sub.add_parser('check', help='Run the self-check suites')
    p.add_argument('--suite', type=str, choices=list(SUITES), help='Run a single suite (default: all)')
    p.add_argument('--report-output', type=str, help='Output file for report (.txt, .csv, or .json)')

    return parser


def _write(text: str, path):
    if path:
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text if text.endswith('\n') else text + '\n')
    else:
        print(text)


def run_cli(args=None):
    """Run the CLI"""
    parser = create_parser()
    args = parser.parse_args(args)

    settings = load_settings(args.settings_file) if args.settings_file else load_settings()
    log_settings = settings.get("logging", {})
    logger = setup_runtime_monitor(
        log_dir=args.log_dir,
        level=log_settings.get("level", "INFO"),
        to_file=bool(log_settings.get("to_file", True)),
    )
    monitor_action(f"command: {args.command}", logger=logger)

    quiet = args.quiet

    def log(msg):
        if not quiet:
            print(msg, file=sys.stderr)

    handlers = {
        'decide': _cmd_decide,
        'value': _cmd_value,
        'game': _cmd_game,
        'gen': _cmd_gen,
        'check': _cmd_check,
    }
    try:
        with monitor_phase(args.command, logger=logger):
            return handlers[args.command](args, settings, log)
    except (OSError, HdqSyntaxError, AutomatonError, WordError, EvaluationError, GenConfigError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (OutOfScopeError, UnsupportedRouteError) as e:
        print(f"Out of scope: {e}", file=sys.stderr)
        return EXIT_OUT_OF_SCOPE


def _load(path: str):
    if not os.path.exists(path):
        raise FileNotFoundError(f"automaton file not found: {path}")
    return HDQParser.parse_file(path)


def _cmd_decide(args, settings, log):
    a = _load(args.file)
    log(f"Deciding {args.file} ({a.value_fn.label}, {a.mode.value} words, "
        f"{len(a.states)} states, {len(a.transitions)} transitions)")
    verdict = decide_hd(a, solver_limits(settings))
    if args.json:
        print(verdict_json(verdict, include_resolver=args.resolver))
    else:
        print(verdict_line(verdict))
    return EXIT_OK


def _cmd_value(args, settings, log):
    a = _load(args.file)
    word = parse_word(args.word, a.alphabet)
    word.check_mode(a.mode)
    print(automaton_value(a, word, solver_limits(settings)))
    return EXIT_OK


def _cmd_game(args, settings, log):
    a = _load(args.file)
    if args.gk is not None:
        if not 1 <= args.gk <= 3:
            print(f"Error: --gk takes 1, 2 or 3 tokens, got {args.gk}", file=sys.stderr)
            return EXIT_INPUT_ERROR
        game = build_gk_limsup(a, args.gk)
    elif args.g2:
        game = g2_builder(a)(a)
    else:
        game = g1_builder(a)(a)
    log(f"Built {game.builder}: {game.size} positions, {len(game.arena.moves)} moves")

    if args.json:
        text = arena_json(game)
    else:
        result = solve(game.arena, solver_limits(settings)) if args.solved else None
        text = arena_dot(game, result)
    _write(text, args.output)
    if args.output:
        log(f"Arena saved to: {args.output}")
    return EXIT_OK


def _cmd_gen(args, settings, log):
    cfg = GenConfig.from_settings(
        settings,
        states=args.states,
        alphabet=args.alphabet,
        weights=args.weights,
        min_out=args.min_out,
        max_out=args.max_out,
        valuefn=args.valuefn,
        mode=args.mode,
        discount=args.discount,
        seed=args.seed,
    )
    a = generate_random(cfg)
    _write(HDQParser.serialize(a), args.output)
    if args.output:
        log(f"Automaton saved to: {args.output} (seed {cfg.seed})")
    return EXIT_OK


def _cmd_check(args, settings, log):
    names = [args.suite] if args.suite else list(SUITES)
    results = []
    for name in names:
        log(f"Running suite: {name}")
        results.extend(run_all(settings, [name]))

    reporter = SuiteReporter()
    report = reporter.generate_report([r.to_dict() for r in results])
    print(reporter.format_table(report))

    if args.report_output:
        ext = os.path.splitext(args.report_output)[1].lower()
        if ext == '.csv':
            reporter.export_csv(report, args.report_output)
        elif ext == '.json':
            reporter.export_json(report, args.report_output)
        else:
            reporter.export_txt(report, args.report_output)
        log(f"\nReport saved to: {args.report_output}")

    return EXIT_OK if report['ok'] else EXIT_CHECK_FAILED
