"""
HDness decision per automaton class, resolver extraction and the auxiliary constructions.
"""

import logging
from collections import deque
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, FrozenSet, Hashable, List, Mapping, Optional, Tuple

from .arena import ArenaBuilder, Objective, Player, SolveResult, Strategy
from .errors import (
    AutomatonError, OutOfScopeError, ResolverError, SolverError, UnsupportedRouteError,
)
from .models import Acceptance, Automaton, Mode, Transition, ValueFunction, ValueKind
from .settings import DEFAULT_LIMITS, SolverLimits
from .shared_config import ROUTES
from .solvers import solve, solve_attractor
from .tokengames import (
    TURN_LETTER, TokenGameArena, build_g1_dsum, build_g1_inf, build_g1_reach_safety,
    build_g1_sup_finite, build_g2_liminf, build_g2_limsup, build_g2_sup,
)

log = logging.getLogger("hdtokens.deciders")

WITNESS = 'witness'


def _require_reachability(a: Automaton, what: str) -> None:
    if a.value_fn.acceptance != Acceptance.REACHABILITY:
        raise OutOfScopeError(f"{what} needs a Reachability automaton, got {a.value_fn.label}")


def almost_accepting_states(a: Automaton) -> Tuple[FrozenSet[str], Dict[Tuple[str, str], int]]:
    """States from which Eve can force acceptance on every infinite word.

    Solved as a reachability game: Adam picks letters at (q) positions, Eve picks transitions at
    (q, letter) positions, and weight-1 transitions reach the accepting position. Returns the
    states and a positional witness (state, letter) -> transition index over them.
    """
    _require_reachability(a, "almost_accepting_states")
    builder = ArenaBuilder()
    accept, _ = builder.position('ACC', Player.EVE)
    builder.add_move(accept, accept)
    for q in a.states:
        builder.position(('q', q), Player.ADAM)
        for letter in a.alphabet:
            builder.position(('qs', q, letter), Player.EVE)
    for q in a.states:
        source = builder.lookup(('q', q))
        for letter in a.alphabet:
            choice = builder.lookup(('qs', q, letter))
            builder.add_move(source, choice)
            for i in a.successors(q, letter):
                t = a.transitions[i]
                target = accept if t.weight == 1 else builder.lookup(('q', t.target))
                builder.add_move(choice, target, info=i)
    arena = builder.build(builder.lookup(('q', a.initial)), Objective.reachability({accept}))
    result = solve_attractor(arena)
    almost = frozenset(q for q in a.states if builder.lookup(('q', q)) in result.eve_region)
    witness = {}
    for q in almost:
        for letter in a.alphabet:
            move = result.eve_strategy.move_at(builder.lookup(('qs', q, letter)))
            witness[(q, letter)] = builder.infos[move]
    log.debug("almost accepting: %d of %d states", len(almost), len(a.states))
    return almost, witness


def _target_sink(a: Automaton) -> Optional[str]:
    sinks = a.sink_states
    return next((q for q in a.states if q in sinks), None)


def polish(a: Automaton) -> Automaton:
    """Make every almost-accepting state accepting.

    Transitions into or out of an almost-accepting state become weight-1 transitions into the
    first target sink, so the sink shape is kept.
    """
    almost, _ = almost_accepting_states(a)
    sink = _target_sink(a)
    if sink is None:
        return a
    one = Fraction(1)
    redirected = (
        Transition(t.source, t.letter, one, sink) if t.source in almost or t.target in almost else t
        for t in a.transitions
    )
    return replace(a, transitions=tuple(dict.fromkeys(redirected)))


@dataclass(frozen=True)
class ComponentFamily:
    """Two-weight components A_2..A_k of a LimSup/LimInf automaton.

    In A_x a transition has weight 2 when its rank is at least x, and 1 otherwise.
    """
    source: Automaton
    components: Tuple[Automaton, ...]

    @property
    def thresholds(self) -> Tuple[int, ...]:
        return tuple(range(2, len(self.components) + 2))

    def component(self, x: int) -> Automaton:
        if not 2 <= x <= len(self.components) + 1:
            raise KeyError(x)
        return self.components[x - 2]


def decompose(a: Automaton) -> ComponentFamily:
    if a.value_fn.kind not in (ValueKind.LIMSUP, ValueKind.LIMINF):
        raise OutOfScopeError(f"decompose needs a LimSup or LimInf automaton, got {a.value_fn.label}")
    if a.k < 2:
        raise AutomatonError("decompose needs at least two weights")
    components = []
    for x in range(2, a.k + 1):
        mapping = {w: Fraction(2 if r >= x else 1) for w, r in a.ranks.items()}
        components.append(a.with_weights(mapping))
    return ComponentFamily(a, tuple(components))


def sup_to_limsup(a: Automaton) -> Automaton:
    """LimSup automaton whose weights are the largest rank seen so far.

    Copy i of a state remembers that the run's maximal rank is i; the initial state is the
    initial state's first copy.
    """
    if a.value_fn.kind != ValueKind.SUP or a.mode != Mode.INFINITE:
        raise OutOfScopeError(f"sup_to_limsup needs a Sup automaton on infinite words, got {a.value_fn.label} ({a.mode.value})")
    copies = range(1, a.k + 1)
    states = tuple(f"{q}@{i}" for i in copies for q in a.states)
    transitions = []
    for i in copies:
        for index, t in enumerate(a.transitions):
            r = a.rank(index)
            level = i if r <= i else r
            transitions.append(Transition(f"{t.source}@{i}", t.letter, Fraction(level), f"{t.target}@{level}"))
    return Automaton(
        alphabet=a.alphabet,
        states=states,
        initial=f"{a.initial}@1",
        transitions=tuple(dict.fromkeys(transitions)),
        value_fn=ValueFunction(ValueKind.LIMSUP),
        mode=Mode.INFINITE,
    )


class Resolver:
    """HD strategy extracted from Eve's winning 1-token strategy against a copycat Adam.

    Memory is the letter position of the game reached so far. A Reachability resolver on infinite
    words switches to the almost-acceptance witness (memory WITNESS) once its run enters an
    almost-accepting state.
    """

    def __init__(self, automaton: Automaton, game: TokenGameArena, strategy: Strategy,
                 transition_map: Optional[Mapping[int, int]] = None,
                 witness: Optional[Mapping[Tuple[str, str], int]] = None,
                 almost: FrozenSet[str] = frozenset()):
        self.automaton = automaton
        self.game = game
        self.strategy = strategy
        self.transition_map = dict(transition_map) if transition_map is not None else None
        self.witness = dict(witness) if witness is not None else None
        self.almost = almost

    def start(self) -> Hashable:
        if self.witness is not None and self.automaton.initial in self.almost:
            return WITNESS
        return self.game.initial

    def step(self, memory: Hashable, state: str, letter: str) -> Tuple[int, Hashable]:
        """Transition index to take from `state` on `letter`, and the next memory."""
        if memory == WITNESS:
            index = self.witness.get((state, letter)) if self.witness else None
            if index is None:
                raise ResolverError(f"witness undefined at ({state},{letter})", memory)
            return index, WITNESS
        game = self.game
        label = game.decode(memory)
        if label.turn != TURN_LETTER or label.eve != state:
            raise ResolverError(f"memory {memory} does not track state {state}", memory)
        choice = game.arena.moves[game.letter_move(memory, letter)].target
        move = self.strategy.move_at(choice)
        if move is None:
            raise ResolverError(f"no move at ({state},{letter}) for memory {memory}", memory)
        played = game.infos[move].transition
        index = self.transition_map[played] if self.transition_map is not None else played
        nxt = game.copy_adam(game.arena.moves[move].target, played)
        if self.witness is not None and self.automaton.transitions[index].target in self.almost:
            nxt = WITNESS
        return index, nxt

    def table(self) -> List[Dict]:
        """Every (memory, state, letter) -> transition entry reachable from the start."""
        a = self.automaton
        rows = []
        start = (self.start(), a.initial)
        seen = {start}
        queue = deque([start])
        while queue:
            memory, state = queue.popleft()
            for letter in a.alphabet:
                index, nxt = self.step(memory, state, letter)
                rows.append({
                    'memory': memory,
                    'state': state,
                    'letter': letter,
                    'transition': str(a.transitions[index]),
                    'next_memory': nxt,
                })
                key = (nxt, a.transitions[index].target)
                if key not in seen:
                    seen.add(key)
                    queue.append(key)
        return rows


@dataclass(frozen=True)
class Verdict:
    """Outcome of decide_hd; `is_hd` holds exactly when Eve wins the game from its initial position."""
    automaton: Automaton
    route: str
    is_hd: bool
    winner: Player
    game: Optional[TokenGameArena] = None
    result: Optional[SolveResult] = None
    resolver: Optional[Resolver] = None

    @property
    def game_size(self) -> int:
        return self.game.size if self.game is not None else 0

    def to_dict(self, include_resolver: bool = False) -> Dict:
        d = {
            'is_hd': self.is_hd,
            'route': self.route,
            'game_size': self.game_size,
            'winner': str(self.winner),
        }
        if include_resolver and self.resolver is not None:
            d['resolver'] = self.resolver.table()
        return d


def _original_index(a: Automaton, t: Transition, almost: FrozenSet[str]) -> int:
    """Transition of `a` behind a transition of polish(a)."""
    candidates = a.successors(t.source, t.letter)
    for i in candidates:
        if a.transitions[i] == t:
            return i
    for i in candidates:
        if a.transitions[i].target in almost:
            return i
    return candidates[0]


def _reachability_resolver(a: Automaton, limits: SolverLimits) -> Resolver:
    almost, witness = almost_accepting_states(a)
    polished = replace(polish(a), mode=Mode.FINITE)
    game = build_g1_reach_safety(polished)
    result = solve(game.arena, limits)
    if game.initial not in result.eve_region:
        raise SolverError("Eve wins the 1-token game but not the polished finite-word one")
    mapping = {j: _original_index(a, t, almost) for j, t in enumerate(polished.transitions)}
    return Resolver(a, game, result.eve_strategy, mapping, witness, almost)


def _route(a: Automaton):
    """(route name, builder, resolver extractable) for the automaton's class."""
    kind = a.value_fn.kind
    finite = a.mode == Mode.FINITE
    if a.value_fn.is_boolean:
        key = 'reach_safety_finite' if finite else 'reach_safety_infinite'
        return ROUTES[key].format(cls=a.value_fn.acceptance.value), build_g1_reach_safety, True
    if kind == ValueKind.SUP:
        if finite:
            return ROUTES['sup_finite'], build_g1_sup_finite, True
        return ROUTES['sup_infinite'], build_g2_sup, False
    if kind == ValueKind.INF:
        return ROUTES['inf_finite' if finite else 'inf_infinite'], build_g1_inf, True
    if kind == ValueKind.DSUM:
        return ROUTES['dsum'], build_g1_dsum, True
    if kind == ValueKind.LIMSUP:
        return ROUTES['limsup'], build_g2_limsup, False
    return ROUTES['liminf'], build_g2_liminf, False


def decide_hd(a: Automaton, limits: SolverLimits = DEFAULT_LIMITS) -> Verdict:
    """Decide whether `a` is history-deterministic by solving the token game of its class."""
    kind = a.value_fn.kind
    if kind in (ValueKind.SUM, ValueKind.AVG):
        raise OutOfScopeError(
            f"HDness of {kind.value} automata is out of scope: no token-game reduction for unbounded aggregates"
        )
    if kind in (ValueKind.LIMSUP, ValueKind.LIMINF) and a.k < 2:
        route = ROUTES['single_weight'].format(cls=kind.value)
        log.info("%s: every run has the same value", route)
        return Verdict(a, route, True, Player.EVE)
    route, builder, extractable = _route(a)
    game = builder(a)
    result = solve(game.arena, limits)
    winner = result.winner(game.initial)
    resolver = None
    if winner == Player.EVE and extractable:
        if a.value_fn.acceptance == Acceptance.REACHABILITY and a.mode == Mode.INFINITE:
            resolver = _reachability_resolver(a, limits)
        else:
            resolver = Resolver(a, game, result.eve_strategy)
    log.info("%s: %d positions, %s wins", route, game.size, winner)
    return Verdict(a, route, winner == Player.EVE, winner, game, result, resolver)


def extract_resolver(v: Verdict) -> Resolver:
    if not v.is_hd:
        raise UnsupportedRouteError("automaton is not HD; there is no resolver")
    if v.resolver is None:
        raise UnsupportedRouteError(f"resolver extraction is unsupported on route {v.route}")
    return v.resolver


def decide_components(a: Automaton, limits: SolverLimits = DEFAULT_LIMITS) -> Dict[int, Verdict]:
    """Verdict of every two-weight component A_x, keyed by x."""
    family = decompose(a)
    return {x: decide_hd(family.component(x), limits) for x in family.thresholds}
