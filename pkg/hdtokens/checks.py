"""
Property suites behind the `check` command.

Each suite draws seeded random instances (or loads the bundled figures), compares two
independent computations and reports the instances on which they disagree.
"""

import itertools
import logging
import math
import random
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .arena import Arena, Player, SolveResult
from .deciders import decide_components, decide_hd
from .figures import FIGURES, load_figure
from .models import Automaton, LassoWord
from .oracle import GenConfig, finite_letter_game_oracle, generate_random, resolver_check_on_lassos
from .settings import DEFAULT_SETTINGS, SolverLimits, default_seed, solver_limits
from .solvers import discounted_values, solve, solve_multidiscount, spot_check
from .tokengames import build_g1_sup_finite, build_g1_sup_infinite, build_g1_dsum, build_gk_limsup, dsum_factors
from .values import automaton_value

log = logging.getLogger("hdtokens.checks")


@dataclass
class SuiteResult:
    name: str
    passed: bool
    total: int
    failures: List[str] = field(default_factory=list)
    seconds: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'passed': self.passed,
            'total': self.total,
            'failures': list(self.failures),
            'seconds': self.seconds,
        }


@dataclass
class _Context:
    settings: Dict[str, Any]
    limits: SolverLimits
    rng: random.Random
    seed: int = 0

    def stream(self, name: str) -> random.Random:
        """Generator shared by every suite that draws the `name` instances."""
        return random.Random(f"{name}:{self.seed}")

    def count(self, key: str) -> int:
        return int(self.settings.get("checks", {}).get(key, DEFAULT_SETTINGS["checks"][key]))


def _random_instances(rng: random.Random, count: int, valuefns: Sequence[str], mode: str, max_states: int,
                      max_alphabet: int, max_weights: int, max_out: int = 2
                      ) -> Iterator[Tuple[GenConfig, Automaton]]:
    for i in range(count):
        cfg = GenConfig(
            states=rng.randint(1, max_states),
            alphabet=rng.randint(1, max_alphabet),
            weights=rng.randint(1, max_weights),
            min_out=1,
            max_out=max_out,
            valuefn=valuefns[i % len(valuefns)],
            mode=mode,
            discount=str(_random_discount(rng)),
            seed=rng.randrange(2 ** 31),
        )
        yield cfg, generate_random(cfg)


def _random_discount(rng: random.Random) -> Fraction:
    q = rng.randint(2, 9)
    return Fraction(rng.randint(1, q - 1), q)


def _describe(cfg: GenConfig) -> str:
    return f"{cfg.valuefn}/{cfg.mode} n={cfg.states} seed={cfg.seed}"


def _oracle_instances(ctx: _Context) -> Iterator[Tuple[GenConfig, Automaton]]:
    classes = ("Sup", "Inf", "Reachability", "Safety")
    return _random_instances(ctx.stream("oracle"), ctx.count("oracle_instances"), classes, "finite", 5, 3, 3)


def _boolean_instances(ctx: _Context) -> Iterator[Tuple[GenConfig, Automaton]]:
    return _random_instances(ctx.stream("boolean"), ctx.count("boolean_instances"), ("Reachability", "Safety"),
                             "infinite", 5, 2, 2)


# -- suites ---------------------------------------------------------------------------

def _suite_figures(ctx: _Context) -> Tuple[int, List[str]]:
    failures = []
    total = 0
    for name, fig in FIGURES.items():
        verdict = decide_hd(load_figure(name), ctx.limits)
        total += 1
        if verdict.is_hd != fig.is_hd or verdict.route != fig.route:
            failures.append(f"{name}: got {verdict.is_hd} via {verdict.route}, expected {fig.is_hd} via {fig.route}")

    limsup = load_figure('limsup')
    for x, verdict in decide_components(limsup, ctx.limits).items():
        total += 1
        if not verdict.is_hd:
            failures.append(f"limsup component A_{x} is not HD")
    for word, expected in ((LassoWord((), ('a',)), 3), (LassoWord(('a',), ('b',)), 2)):
        total += 1
        got = automaton_value(limsup, word, ctx.limits)
        if got != expected:
            failures.append(f"limsup value on {word}: {got} != {expected}")

    sup = load_figure('sup')
    total += 2
    if automaton_value(sup, LassoWord((), ('a',)), ctx.limits) != 1:
        failures.append("sup value on (a) is not 1")
    g1 = build_g1_sup_infinite(sup)
    if solve(g1.arena, ctx.limits).winner(g1.initial) != Player.EVE:
        failures.append("Eve does not win the 1-token game on the sup figure")
    return total, failures


def _suite_oracle(ctx: _Context) -> Tuple[int, List[str]]:
    failures = []
    count = 0
    for cfg, a in _oracle_instances(ctx):
        count += 1
        decided = decide_hd(a, ctx.limits).is_hd
        truth = finite_letter_game_oracle(a, ctx.limits.oracle_max_positions)
        if decided != truth:
            failures.append(f"{_describe(cfg)}: decide={decided} oracle={truth}")
    return count, failures


def _suite_boolean(ctx: _Context) -> Tuple[int, List[str]]:
    failures = []
    count = 0
    for cfg, a in _boolean_instances(ctx):
        count += 1
        boolean = decide_hd(a, ctx.limits)
        plain = decide_hd(replace(a, value_fn=a.value_fn.plain()), ctx.limits)
        if boolean.is_hd != plain.is_hd:
            failures.append(
                f"{_describe(cfg)}: {boolean.route}={boolean.is_hd} {plain.route}={plain.is_hd}"
            )
    return count, failures


def _suite_tokens(ctx: _Context) -> Tuple[int, List[str]]:
    failures = []
    count = ctx.count("token_instances")
    for cfg, a in _random_instances(ctx.rng, count, ("LimSup",), "infinite", 4, 2, 3):
        winners = []
        for tokens in (2, 3):
            game = build_gk_limsup(a, tokens)
            winners.append(solve(game.arena, ctx.limits).winner(game.initial))
        if winners[0] != winners[1]:
            failures.append(f"{_describe(cfg)}: G2 won by {winners[0]}, G3 by {winners[1]}")
    return count, failures


def _bellman_problems(arena: Arena, result: SolveResult) -> List[int]:
    """Positions where the solver's values break the optimality equations or its strategies miss them.

    The equations have a single solution, so an empty list certifies the values.
    """
    values = result.values
    problems = []
    for p, out in enumerate(arena.out):
        options = [arena.moves[i].weight + arena.moves[i].discount * values[arena.moves[i].target] for i in out]
        best = max(options) if arena.owners[p] == Player.EVE else min(options)
        chosen = result.strategy(arena.owners[p]).move_at(p)
        if best != values[p] or chosen is None or options[out.index(chosen)] != best:
            problems.append(p)
    return problems


def _enumerated_winner(arena: Arena, limits: SolverLimits, cap: int) -> Optional[Player]:
    """Winner at the initial position by trying every positional strategy of Eve.

    Adam's best reply to each of them is the optimum of the one-player arena left behind. Returns
    None when Eve has more than `cap` strategies.
    """
    choices = [p for p, out in enumerate(arena.out) if arena.owners[p] == Player.EVE and len(out) > 1]
    if math.prod(len(arena.out[p]) for p in choices) > cap:
        return None
    open_moves = {i for p in choices for i in arena.out[p]}
    fixed = [i for i in range(len(arena.moves)) if i not in open_moves]
    for picked in itertools.product(*(arena.out[p] for p in choices)):
        kept = sorted(fixed + list(picked))
        rest = Arena(arena.owners, tuple(arena.moves[i] for i in kept), arena.initial, arena.objective)
        values, _, _ = discounted_values(rest, limits)
        if values[arena.initial] >= arena.objective.threshold:
            return Player.EVE
    return Player.ADAM


def _suite_dsum(ctx: _Context) -> Tuple[int, List[str]]:
    failures = []
    samples = ctx.count("dsum_factor_samples")
    for _ in range(samples):
        lam = _random_discount(ctx.rng)
        first, second, third = dsum_factors(lam)
        if first * second * third != lam:
            failures.append(f"discount factors of {lam} multiply to {first * second * third}")
    count = ctx.count("dsum_instances")
    cap = ctx.count("dsum_enumeration_cap")
    enumerated = 0
    for i in range(count):
        mode = ("finite", "infinite")[i % 2]
        (cfg, a), = _random_instances(ctx.rng, 1, ("DSum",), mode, 4, 2, 3)
        game = build_g1_dsum(a)
        result = solve_multidiscount(game.arena, ctx.limits)
        where = f"{_describe(cfg)} discount={cfg.discount}"
        problems = _bellman_problems(game.arena, result)
        if problems:
            failures.append(f"{where}: optimality equations fail at {len(problems)} positions")
        expected = _enumerated_winner(game.arena, ctx.limits, cap)
        if expected is None:
            continue
        enumerated += 1
        got = result.winner(game.initial)
        if got != expected:
            failures.append(f"{where}: solver {got}, enumeration {expected}")
    log.debug("dsum: %d of %d arenas enumerated", enumerated, count)
    return samples + count, failures


def _suite_resolver(ctx: _Context) -> Tuple[int, List[str]]:
    """Resolvers of every HD verdict in the figures, oracle and boolean suites, plus extra DSum/Inf instances."""
    failures = []
    samples = int(ctx.settings.get("resolver", {}).get("samples", DEFAULT_SETTINGS["resolver"]["samples"]))
    cases: List[Tuple[str, Automaton]] = [(name, load_figure(name)) for name in FIGURES]
    cases.extend((_describe(cfg), a) for cfg, a in _oracle_instances(ctx))
    cases.extend((_describe(cfg), a) for cfg, a in _boolean_instances(ctx))
    extra = ctx.count("resolver_instances")
    for mode in ("finite", "infinite"):
        for cfg, a in _random_instances(ctx.rng, extra, ("Inf", "DSum"), mode, 4, 2, 3):
            cases.append((_describe(cfg), a))
    checked = 0
    for name, a in cases:
        verdict = decide_hd(a, ctx.limits)
        if verdict.resolver is None:
            continue
        checked += 1
        report = resolver_check_on_lassos(a, verdict.resolver, samples, ctx.rng.randrange(2 ** 31))
        if not report.ok:
            bad = report.counterexamples[0]
            failures.append(f"{name}: on {bad.word} the resolver gets {bad.run_value}, the word is worth {bad.word_value}")
    return checked, failures


_STRATEGY_CLASSES = (
    ("finite", ("Sup", "Inf", "Reachability", "Safety", "DSum")),
    ("infinite", ("Sup", "Inf", "LimSup", "LimInf", "Reachability", "Safety", "DSum")),
)


def _suite_strategies(ctx: _Context) -> Tuple[int, List[str]]:
    """Both players' solver strategies win every simulated play from their regions."""
    failures = []
    count = ctx.count("strategy_instances")
    plays = ctx.count("spot_check_plays")
    checked = 0
    for mode, classes in _STRATEGY_CLASSES:
        for cfg, a in _random_instances(ctx.rng, count, classes, mode, 3, 2, 3):
            verdict = decide_hd(a, ctx.limits)
            if verdict.game is None:
                continue
            checked += 1
            for player in (Player.EVE, Player.ADAM):
                lost = spot_check(verdict.game.arena, verdict.result, player, plays, ctx.rng.randrange(2 ** 31))
                if lost:
                    failures.append(f"{_describe(cfg)} via {verdict.route}: {player} loses from {sorted(set(lost))[:5]}")
    return checked, failures


def _suite_size(ctx: _Context) -> Tuple[int, List[str]]:
    failures = []
    count = ctx.count("size_instances")
    for cfg, a in _random_instances(ctx.rng, count, ("Sup",), "finite", 5, 3, 3, max_out=3):
        game = build_g1_sup_finite(a)
        bound = 3 * len(a.alphabet) * len(a.states) ** 2 * a.k
        if game.size > bound:
            failures.append(f"{_describe(cfg)}: {game.size} positions exceed {bound}")
    timed = (
        ("safety_seconds", GenConfig(states=100, alphabet=2, weights=2, valuefn="Safety", mode="infinite")),
        ("limsup_seconds", GenConfig(states=20, alphabet=2, weights=3, valuefn="LimSup", mode="infinite")),
    )
    for key, cfg in timed:
        cfg.seed = ctx.rng.randrange(2 ** 31)
        a = generate_random(cfg)
        started = time.time()
        decide_hd(a, ctx.limits)
        elapsed = time.time() - started
        limit = float(ctx.settings.get("checks", {}).get(key, DEFAULT_SETTINGS["checks"][key]))
        if elapsed > limit:
            failures.append(f"{_describe(cfg)}: decided in {elapsed:.2f}s, limit {limit}s")
    return count + len(timed), failures


SUITES: Dict[str, Callable[[_Context], Tuple[int, List[str]]]] = {
    'figures': _suite_figures,
    'oracle': _suite_oracle,
    'boolean': _suite_boolean,
    'tokens': _suite_tokens,
    'dsum': _suite_dsum,
    'resolver': _suite_resolver,
    'strategies': _suite_strategies,
    'size': _suite_size,
}


def run_suite(name: str, settings: Optional[Dict[str, Any]] = None, seed: Optional[int] = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    settings = settings if settings is not None else DEFAULT_SETTINGS
    base = seed if seed is not None else default_seed(settings)
    ctx = _Context(settings, solver_limits(settings), random.Random(f"{name}:{base}"), base)
    started = time.time()
    total, failures = SUITES[name](ctx)
    elapsed = time.time() - started
    log.info("suite %s: %d checked, %d failures (%.2fs)", name, total, len(failures), elapsed)
    return SuiteResult(name, not failures, total, failures, elapsed)


def run_all(settings: Optional[Dict[str, Any]] = None, names: Optional[Sequence[str]] = None,
            seed: Optional[int] = None) -> List[SuiteResult]:
    return [run_suite(name, settings, seed) for name in (names or SUITES)]
