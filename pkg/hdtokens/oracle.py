"""
Ground truth independent of the token games: the finite-word letter game solved by brute force,
seeded random automata, and resolver checks on sampled lasso words.
"""

import logging
import random
import string
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

from .errors import AutomatonError, GenConfigError, HdqSyntaxError, OracleLimitError, OutOfScopeError
from .models import Acceptance, Automaton, LassoWord, Mode, Run, Transition, ValueFunction, ValueKind
from .parser import parse_value_function
from .settings import DEFAULT_LIMITS, DEFAULT_SETTINGS, default_seed
from .values import automaton_value, evaluate_run

log = logging.getLogger("hdtokens.oracle")


# -- finite letter game ---------------------------------------------------------

class SubsetPosition(NamedTuple):
    """Letter-game position: Eve's state and aggregate, and the best aggregate per reachable state."""
    eve: str
    aggregate: int
    frontier: Tuple[Tuple[str, int], ...]

    @property
    def best(self) -> int:
        return max(v for _, v in self.frontier)


def _fold(a: Automaton) -> Tuple[Callable[[int, int], int], int]:
    """Rank aggregation and its neutral start value."""
    kind = a.value_fn.kind
    if kind == ValueKind.SUP:
        return max, 0
    if kind == ValueKind.INF:
        return min, a.k + 1
    raise OutOfScopeError(f"the letter-game oracle handles Sup/Inf/Reachability/Safety, got {a.value_fn.label}")


def _advance(a: Automaton, frontier: Dict[str, int], letter: str, fold) -> Dict[str, int]:
    nxt: Dict[str, int] = {}
    for q, v in frontier.items():
        for i in a.successors(q, letter):
            target = a.transitions[i].target
            value = fold(v, a.rank(i))
            if target not in nxt or value > nxt[target]:
                nxt[target] = value
    return nxt


def frontier_values(a: Automaton, letters: Sequence[str]) -> Dict[str, int]:
    """Best rank aggregate of the runs on `letters`, per end state."""
    fold, start = _fold(a)
    frontier = {a.initial: start}
    for letter in letters:
        frontier = _advance(a, frontier, letter, fold)
    return frontier


def finite_letter_game_oracle(a: Automaton, max_positions: int = DEFAULT_LIMITS.oracle_max_positions) -> bool:
    """True when Eve wins the letter game on finite words, i.e. `a` is HD.

    Eve loses as soon as her aggregate falls below the best aggregate of the frontier.
    """
    if a.mode != Mode.FINITE:
        raise OutOfScopeError("the letter-game oracle only handles finite words")
    fold, start = _fold(a)
    initial = SubsetPosition(a.initial, start, ((a.initial, start),))
    options: Dict[SubsetPosition, List[List[SubsetPosition]]] = {}
    seen = {initial}
    stack = [initial]
    while stack:
        pos = stack.pop()
        frontier = dict(pos.frontier)
        per_letter = []
        for letter in a.alphabet:
            after = tuple(sorted(_advance(a, frontier, letter, fold).items()))
            children = []
            for i in a.successors(pos.eve, letter):
                child = SubsetPosition(a.transitions[i].target, fold(pos.aggregate, a.rank(i)), after)
                children.append(child)
                if child in seen:
                    continue
                seen.add(child)
                if len(seen) > max_positions:
                    raise OracleLimitError(f"letter game exceeds {max_positions} positions")
                if child.aggregate >= child.best:
                    stack.append(child)
            per_letter.append(children)
        options[pos] = per_letter
    # positions never expanded are the ones where Eve already lost
    winning = set(options)
    changed = True
    while changed:
        changed = False
        for pos in list(winning):
            if any(not any(c in winning for c in children) for children in options[pos]):
                winning.discard(pos)
                changed = True
    log.debug("letter game: %d positions, Eve wins %d", len(seen), len(winning))
    return initial in winning


# -- random automata ----------------------------------------------------------------

@dataclass
class GenConfig:
    states: int = 4
    alphabet: int = 2
    weights: int = 3
    min_out: int = 1
    max_out: int = 2
    valuefn: str = "Sup"
    mode: str = "finite"
    discount: str = "1/2"
    seed: int = 0

    @classmethod
    def from_settings(cls, settings: Dict[str, Any], **overrides) -> 'GenConfig':
        section = dict(settings.get("generator", {}))
        section["seed"] = default_seed(settings)
        section.update({k: v for k, v in overrides.items() if v is not None})
        known = {k: section[k] for k in cls.__dataclass_fields__ if k in section}
        return cls(**known)

    def value_function(self) -> ValueFunction:
        text = self.valuefn
        if text == ValueKind.DSUM.value:
            text = f"DSum {self.discount}"
        try:
            return parse_value_function(text)
        except (HdqSyntaxError, AutomatonError) as exc:
            raise GenConfigError(f"bad value function {self.valuefn!r}: {exc}") from None

    def validate(self) -> None:
        if self.states < 1 or self.weights < 1:
            raise GenConfigError("states and weights must be positive")
        if not 1 <= self.alphabet <= len(string.ascii_lowercase):
            raise GenConfigError(f"alphabet size must be between 1 and {len(string.ascii_lowercase)}")
        if self.min_out < 1:
            raise GenConfigError("out-degree 0 leaves the automaton non-total")
        if self.max_out < self.min_out:
            raise GenConfigError("max_out is below min_out")
        try:
            mode = Mode(self.mode)
        except ValueError:
            raise GenConfigError(f"unknown mode {self.mode!r}") from None
        kind = self.value_function().kind
        if kind in (ValueKind.SUM, ValueKind.AVG) and mode != Mode.FINITE:
            raise GenConfigError(f"{kind.value} needs mode finite")
        if kind in (ValueKind.LIMSUP, ValueKind.LIMINF) and mode != Mode.INFINITE:
            raise GenConfigError(f"{kind.value} needs mode infinite")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def generate_random(cfg: GenConfig) -> Automaton:
    """Seeded random total automaton; states s0..s(n-1), letters a, b, ...

    Reachability and Safety automata use the last state as their sink.
    """
    cfg.validate()
    vf = cfg.value_function()
    rng = random.Random(cfg.seed)
    states = [f"s{i}" for i in range(cfg.states)]
    letters = list(string.ascii_lowercase[:cfg.alphabet])
    transitions: List[Transition] = []
    if vf.is_boolean:
        sink = states[-1]
        final = Fraction(1 if vf.acceptance == Acceptance.REACHABILITY else 0)
        for q in states:
            for letter in letters:
                if q == sink:
                    transitions.append(Transition(q, letter, final, q))
                    continue
                degree = rng.randint(cfg.min_out, cfg.max_out)
                for target in rng.sample(states, min(degree, len(states))):
                    weight = final if target == sink else 1 - final
                    transitions.append(Transition(q, letter, weight, target))
    else:
        pairs = [(target, w) for target in states for w in range(cfg.weights)]
        for q in states:
            for letter in letters:
                degree = rng.randint(cfg.min_out, cfg.max_out)
                for target, w in rng.sample(pairs, min(degree, len(pairs))):
                    transitions.append(Transition(q, letter, Fraction(w), target))
    return Automaton(tuple(letters), tuple(states), states[0], tuple(transitions), vf, Mode(cfg.mode))


def random_lasso(rng: random.Random, a: Automaton, max_length: Optional[int] = None) -> LassoWord:
    """Lasso over `a`'s alphabet with prefix and cycle lengths at most 2n (cycle empty on finite words)."""
    bound = max_length if max_length is not None else 2 * len(a.states)
    if a.mode == Mode.FINITE:
        prefix = [rng.choice(a.alphabet) for _ in range(rng.randint(1, bound))]
        return LassoWord(tuple(prefix))
    prefix = [rng.choice(a.alphabet) for _ in range(rng.randint(0, bound))]
    cycle = [rng.choice(a.alphabet) for _ in range(rng.randint(1, bound))]
    return LassoWord(tuple(prefix), tuple(cycle))


# -- resolver checks ----------------------------------------------------------------

@dataclass
class Counterexample:
    word: LassoWord
    run_value: Fraction
    word_value: Fraction

    def to_dict(self) -> Dict[str, str]:
        return {
            'word': str(self.word),
            'run_value': str(self.run_value),
            'word_value': str(self.word_value),
        }


@dataclass
class ResolverReport:
    samples: int
    counterexamples: List[Counterexample] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> Dict[str, Any]:
        return {
            'samples': self.samples,
            'ok': self.ok,
            'counterexamples': [c.to_dict() for c in self.counterexamples],
        }


def resolver_run(a: Automaton, resolver, w: LassoWord) -> Run:
    """The run the resolver builds on `w`, closed into a lasso once (position, memory, state) repeats."""
    memory = resolver.start()
    state = a.initial
    pos = 0
    path: List[Transition] = []
    seen: Dict[Tuple[int, Any, str], int] = {}
    while True:
        if w.is_finite and pos == len(w.prefix):
            return Run(tuple(path))
        config = (pos, memory, state)
        if config in seen:
            cut = seen[config]
            return Run(tuple(path[:cut]), tuple(path[cut:]))
        seen[config] = len(path)
        index, memory = resolver.step(memory, state, w.letter(pos))
        t = a.transitions[index]
        path.append(t)
        state = t.target
        pos = w.next_position(pos)


def resolver_check_on_lassos(a: Automaton, resolver, samples: Optional[int] = None, seed: int = 0) -> ResolverReport:
    """Compare resolver-built run values with word values on sampled lassos.

    On finite words every prefix of a sampled word is checked. `samples` defaults to the
    `resolver.samples` setting.
    """
    if samples is None:
        samples = int(DEFAULT_SETTINGS["resolver"]["samples"])
    rng = random.Random(seed)
    report = ResolverReport(samples)
    for _ in range(samples):
        w = random_lasso(rng, a)
        run = resolver_run(a, resolver, w)
        if w.is_finite:
            for n in range(1, len(w.prefix) + 1):
                prefix_word = LassoWord(w.prefix[:n])
                got = evaluate_run(Run(run.prefix[:n]), a.value_fn)
                best = automaton_value(a, prefix_word)
                if got != best:
                    report.counterexamples.append(Counterexample(prefix_word, got, best))
                    break
            continue
        got = evaluate_run(run, a.value_fn)
        best = automaton_value(a, w)
        if got != best:
            report.counterexamples.append(Counterexample(w, got, best))
    log.debug("resolver check: %d samples, %d counterexamples", samples, len(report.counterexamples))
    return report
