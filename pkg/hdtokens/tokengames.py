"""
Token games of a quantitative automaton.

Every builder produces a TokenGameArena: an Arena plus the decoding of each position and the
provenance of each move. A round is: Adam picks a letter (turn L), Eve moves her token (turn E),
then Adam moves each of his tokens in order (turn A, one arena move per token).
Letter positions carry no letter; E and A positions carry the letter being read.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .arena import Arena, ArenaBuilder, Edge, Objective, Player
from .errors import AutomatonError, OutOfScopeError
from .models import Acceptance, Automaton, Mode, Transition, ValueKind
from .shared_config import BUILDERS

log = logging.getLogger("hdtokens.tokengames")

TURN_LETTER = 'L'
TURN_EVE = 'E'
TURN_ADAM = 'A'
TURN_ZERO = 'Z'


class PositionLabel(NamedTuple):
    """Decoded token-game position."""
    turn: str
    letter: Optional[str]
    eve: str
    adam: Tuple[str, ...]
    token: int = 0
    x_e: Optional[int] = None
    x_a: Optional[int] = None
    pending: Optional[Fraction] = None
    memory: Optional[Tuple[int, ...]] = None

    def describe(self) -> str:
        if self.turn == TURN_ZERO:
            return 'Z'
        parts = [self.turn, self.letter or 'eps', self.eve, ','.join(self.adam)]
        if self.turn == TURN_ADAM and len(self.adam) > 1:
            parts.append(f'tok{self.token + 1}')
        if self.x_e is not None:
            parts.append(f'xE={self.x_e}')
        if self.x_a is not None:
            parts.append(f'xA={self.x_a}')
        if self.pending is not None:
            parts.append(f'w={self.pending}')
        if self.memory is not None:
            parts.append('x=' + ''.join(str(v) for v in self.memory))
        return ' | '.join(parts)

    def to_dict(self) -> Dict:
        d = self._asdict()
        d['adam'] = list(self.adam)
        d['pending'] = str(self.pending) if self.pending is not None else None
        d['memory'] = list(self.memory) if self.memory is not None else None
        return d


class MoveInfo(NamedTuple):
    """Provenance of an arena move: `kind` is letter, eve, adam, escape or stay."""
    kind: str
    letter: Optional[str] = None
    transition: Optional[int] = None
    token: Optional[int] = None


@dataclass(frozen=True)
class TokenGameArena:
    arena: Arena
    builder: str
    automaton: Automaton
    labels: Tuple[PositionLabel, ...]
    infos: Tuple[MoveInfo, ...]
    tokens: int = 1

    @property
    def size(self) -> int:
        return self.arena.size

    @property
    def initial(self) -> int:
        return self.arena.initial

    def decode(self, position: int) -> PositionLabel:
        return self.labels[position]

    @cached_property
    def _index(self) -> Dict[PositionLabel, int]:
        return {label: p for p, label in enumerate(self.labels)}

    def lookup(self, label: PositionLabel) -> Optional[int]:
        return self._index.get(label)

    def letter_move(self, position: int, letter: str) -> int:
        for m in self.arena.out[position]:
            info = self.infos[m]
            if info.kind == 'letter' and info.letter == letter:
                return m
        raise ValueError(f"no letter move for {letter!r} at position {position}")

    def copy_adam(self, position: int, transition: int) -> int:
        """Move every Adam token along `transition`; returns the next letter position."""
        p = position
        while self.labels[p].turn == TURN_ADAM:
            for m in self.arena.out[p]:
                if self.infos[m].transition == transition:
                    p = self.arena.moves[m].target
                    break
            else:
                raise ValueError(f"Adam cannot copy transition {transition} at position {p}")
        return p

    def to_dict(self) -> Dict:
        objective = self.arena.objective
        return {
            'builder': self.builder,
            'tokens': self.tokens,
            'size': self.size,
            'initial': self.initial,
            'objective': {
                'kind': objective.kind.value,
                'positions': sorted(objective.positions),
                'threshold': str(objective.threshold),
            },
            'positions': [
                {'id': p, 'owner': str(owner), **label.to_dict()}
                for p, (owner, label) in enumerate(zip(self.arena.owners, self.labels))
            ],
            'moves': [
                {
                    'source': m.source,
                    'target': m.target,
                    'priority': m.priority,
                    'weight': str(m.weight) if m.weight is not None else None,
                    'discount': str(m.discount) if m.discount is not None else None,
                    **info._asdict(),
                }
                for m, info in zip(self.arena.moves, self.infos)
            ],
        }


# -- shared round structure ------------------------------------------------------

def _owner(label: PositionLabel) -> Player:
    return Player.EVE if label.turn == TURN_EVE else Player.ADAM


def _initial(a: Automaton, tokens: int, **extra) -> PositionLabel:
    return PositionLabel(TURN_LETTER, None, a.initial, (a.initial,) * tokens, **extra)


def _moves(a: Automaton, label: PositionLabel, tokens: int
           ) -> Iterator[Tuple[MoveInfo, PositionLabel, Optional[Transition]]]:
    """Plain successors of a round position, before any builder annotates them."""
    if label.turn == TURN_LETTER:
        for letter in a.alphabet:
            yield MoveInfo('letter', letter), label._replace(turn=TURN_EVE, letter=letter), None
    elif label.turn == TURN_EVE:
        for i in a.successors(label.eve, label.letter):
            t = a.transitions[i]
            yield MoveInfo('eve', label.letter, i), label._replace(turn=TURN_ADAM, eve=t.target, token=0), t
    else:
        j = label.token
        for i in a.successors(label.adam[j], label.letter):
            t = a.transitions[i]
            adam = label.adam[:j] + (t.target,) + label.adam[j + 1:]
            if j + 1 < tokens:
                nxt = label._replace(adam=adam, token=j + 1)
            else:
                nxt = label._replace(turn=TURN_LETTER, letter=None, adam=adam, token=0)
            yield MoveInfo('adam', label.letter, i, j), nxt, t


def _assemble(a: Automaton, name: str, tokens: int, initial: PositionLabel,
              expand: Callable[[PositionLabel], Iterator[Edge]],
              objective_of: Callable[[Sequence[PositionLabel]], Objective]) -> TokenGameArena:
    builder = ArenaBuilder()
    start = builder.explore(initial, _owner, expand)
    labels = tuple(builder.keys)
    arena = builder.build(start, objective_of(labels))
    log.debug("%s: %d positions, %d moves", name, arena.size, len(arena.moves))
    return TokenGameArena(arena, name, a, labels, tuple(builder.infos), tokens)


def _require(a: Automaton, builder: str, kinds, mode: Optional[Mode] = None) -> None:
    if a.value_fn.kind not in kinds or (mode is not None and a.mode != mode):
        wanted = '/'.join(k.value for k in kinds)
        where = f" on {mode.value} words" if mode is not None else ""
        raise OutOfScopeError(f"{builder} needs a {wanted} automaton{where}, got {a.value_fn.label} ({a.mode.value})")


def _aggregate_game(a: Automaton, name: str, tokens: int, start: int,
                    fold: Callable[[int, int], int], value: Callable[[int], int]) -> TokenGameArena:
    """Game tracking Eve's aggregate x_E and Adam's aggregate x_A over all his tokens.

    Finite words: Safety, unsafe letter positions with x_E < x_A.
    Infinite words: coBuchi, priority 1 on moves into positions with x_E < x_A.
    """
    finite = a.mode == Mode.FINITE

    def expand(label: PositionLabel) -> Iterator[Edge]:
        for info, nxt, _ in _moves(a, label, tokens):
            if info.kind == 'eve':
                nxt = nxt._replace(x_e=fold(label.x_e, value(info.transition)))
            elif info.kind == 'adam':
                nxt = nxt._replace(x_a=fold(label.x_a, value(info.transition)))
            priority = 0 if finite or nxt.x_e >= nxt.x_a else 1
            yield Edge(nxt, priority=priority, info=info)

    def objective_of(labels: Sequence[PositionLabel]) -> Objective:
        if finite:
            return Objective.safety(
                p for p, label in enumerate(labels) if label.turn == TURN_LETTER and label.x_e < label.x_a
            )
        return Objective.cobuchi()

    return _assemble(a, name, tokens, _initial(a, tokens, x_e=start, x_a=start), expand, objective_of)


# -- G1 builders -----------------------------------------------------------------

def build_g1_reach_safety(a: Automaton) -> TokenGameArena:
    """1-token game of a Reachability or Safety automaton.

    x_E and x_A are the Boolean run values so far: whether the run took a weight-1 transition
    (Reachability) or has only taken weight-1 transitions (Safety).
    """
    if not a.value_fn.is_boolean:
        raise OutOfScopeError(f"build_g1_reach_safety needs a Reachability or Safety automaton, got {a.value_fn.label}")
    problems = a.sink_shape_problems()
    if problems:
        raise AutomatonError(problems[0])
    def flag(i: int) -> int:
        return int(a.transitions[i].weight)

    if a.value_fn.acceptance == Acceptance.REACHABILITY:
        return _aggregate_game(a, BUILDERS['g1_reach_safety'], 1, 0, max, flag)
    return _aggregate_game(a, BUILDERS['g1_reach_safety'], 1, 1, min, flag)


def build_g1_sup_finite(a: Automaton) -> TokenGameArena:
    """1-token Sup game on finite words; positions carry only Eve's max rank x_E.

    Adam's transition moves are where he wins: an A position is unsafe when his token has a
    transition of rank above x_E.
    """
    name = BUILDERS['g1_sup_finite']
    _require(a, name, (ValueKind.SUP,), Mode.FINITE)

    def expand(label: PositionLabel) -> Iterator[Edge]:
        for info, nxt, _ in _moves(a, label, 1):
            if info.kind == 'eve':
                nxt = nxt._replace(x_e=max(label.x_e, a.rank(info.transition)))
            yield Edge(nxt, info=info)

    def objective_of(labels: Sequence[PositionLabel]) -> Objective:
        return Objective.safety(
            p for p, label in enumerate(labels)
            if label.turn == TURN_ADAM
            and any(a.rank(i) > label.x_e for i in a.successors(label.adam[0], label.letter))
        )

    return _assemble(a, name, 1, _initial(a, 1, x_e=1), expand, objective_of)


def build_g1_sup_infinite(a: Automaton) -> TokenGameArena:
    """1-token Sup game on infinite words: coBuchi on eventually x_E >= x_A."""
    name = BUILDERS['g1_sup_infinite']
    _require(a, name, (ValueKind.SUP,), Mode.INFINITE)
    return _aggregate_game(a, name, 1, 0, max, a.rank)


def build_g1_inf(a: Automaton) -> TokenGameArena:
    """1-token Inf game; x_E and x_A are the least ranks seen by each token."""
    name = BUILDERS['g1_inf']
    _require(a, name, (ValueKind.INF,))
    return _aggregate_game(a, name, 1, a.k, min, a.rank)


def dsum_factors(discount: Fraction) -> Tuple[Fraction, Fraction, Fraction]:
    """Per-move discounts for letter, Eve and Adam moves; their product is `discount`."""
    discount = Fraction(discount)
    if not 0 < discount < 1:
        raise AutomatonError(f"bad discount {discount}: DSum needs 0 < lambda < 1")
    p, q = discount.numerator, discount.denominator
    return (
        Fraction(4 * p, 4 * p + 1),
        Fraction(4 * p + 1, 4 * p + 2),
        Fraction(2 * p + 1, 2 * q),
    )


ZERO_LABEL = PositionLabel(TURN_ZERO, None, '', ())


def build_g1_dsum(a: Automaton) -> TokenGameArena:
    """1-token DSum game as a multi-discount game with threshold 0.

    Adam's move pays Eve's pending weight minus his own. On finite words Adam may leave every
    letter position for the forever-zero position Z, ending the word.
    """
    name = BUILDERS['g1_dsum']
    _require(a, name, (ValueKind.DSUM,))
    letter_lam, eve_lam, adam_lam = dsum_factors(a.value_fn.discount)
    finite = a.mode == Mode.FINITE
    zero = Fraction(0)

    def expand(label: PositionLabel) -> Iterator[Edge]:
        if label.turn == TURN_ZERO:
            yield Edge(label, weight=zero, discount=letter_lam, info=MoveInfo('stay'))
            return
        if finite and label.turn == TURN_LETTER:
            yield Edge(ZERO_LABEL, weight=zero, discount=letter_lam, info=MoveInfo('escape'))
        for info, nxt, t in _moves(a, label, 1):
            if info.kind == 'letter':
                yield Edge(nxt, weight=zero, discount=letter_lam, info=info)
            elif info.kind == 'eve':
                yield Edge(nxt._replace(pending=t.weight), weight=zero, discount=eve_lam, info=info)
            else:
                yield Edge(nxt._replace(pending=None), weight=label.pending - t.weight, discount=adam_lam, info=info)

    return _assemble(a, name, 1, _initial(a, 1), expand, lambda labels: Objective.multi_discount(0))


# -- G2 and Gk builders ------------------------------------------------------------

def build_g2_sup(a: Automaton) -> TokenGameArena:
    """2-token Sup game: coBuchi on eventually x_E >= x_A, x_A the max over both Adam runs."""
    name = BUILDERS['g2_sup']
    _require(a, name, (ValueKind.SUP,), Mode.INFINITE)
    return _aggregate_game(a, name, 2, 0, max, a.rank)


def _limsup_game(a: Automaton, name: str, tokens: int) -> TokenGameArena:
    _require(a, name, (ValueKind.LIMSUP,), Mode.INFINITE)

    def expand(label: PositionLabel) -> Iterator[Edge]:
        for info, nxt, _ in _moves(a, label, tokens):
            if info.kind == 'letter':
                priority = 0
            elif info.kind == 'eve':
                priority = 2 * a.rank(info.transition)
            else:
                priority = 2 * a.rank(info.transition) - 1
            yield Edge(nxt, priority=priority, info=info)

    return _assemble(a, name, tokens, _initial(a, tokens), expand, lambda labels: Objective.parity())


def build_gk_limsup(a: Automaton, tokens: int) -> TokenGameArena:
    """k-token LimSup game for 1 to 3 Adam tokens; Eve's rank x scores 2x, Adam's 2x-1."""
    if tokens not in (1, 2, 3):
        raise ValueError(f"token count must be 1, 2 or 3, got {tokens}")
    return _limsup_game(a, BUILDERS['gk_limsup'], tokens)


def build_g1_limsup(a: Automaton) -> TokenGameArena:
    return build_gk_limsup(a, 1)


def build_g2_limsup(a: Automaton) -> TokenGameArena:
    return _limsup_game(a, BUILDERS['g2_limsup'], 2)


def liminf_memory_update(memory: Tuple[int, ...], token: int, rank: int) -> Tuple[Tuple[int, ...], Optional[int]]:
    """Update the LimInf memory after Adam's `token` (1 or 2) takes a transition of `rank`.

    Every x_i with i >= rank is claimed by the token when free, and reset when the other token
    holds it. Returns the new memory and the least reset index, or None.
    """
    x = list(memory)
    reset = None
    for i in range(rank, len(x) + 1):
        held = x[i - 1]
        if held == 0:
            x[i - 1] = token
        elif held != token:
            x[i - 1] = 0
            if reset is None:
                reset = i
    return tuple(x), reset


def build_g2_liminf(a: Automaton) -> TokenGameArena:
    """2-token LimInf game with memory x in {0,1,2}^k.

    Eve's rank i scores 2(k-i+1)-1; an Adam move resetting some x_i scores 2(k-i+1) for the
    least such i; every other move scores 1.
    """
    name = BUILDERS['g2_liminf']
    _require(a, name, (ValueKind.LIMINF,), Mode.INFINITE)
    k = a.k

    def expand(label: PositionLabel) -> Iterator[Edge]:
        for info, nxt, _ in _moves(a, label, 2):
            priority = 1
            if info.kind == 'eve':
                priority = 2 * (k - a.rank(info.transition) + 1) - 1
            elif info.kind == 'adam':
                memory, reset = liminf_memory_update(label.memory, info.token + 1, a.rank(info.transition))
                nxt = nxt._replace(memory=memory)
                if reset is not None:
                    priority = 2 * (k - reset + 1)
            yield Edge(nxt, priority=priority, info=info)

    return _assemble(a, name, 2, _initial(a, 2, memory=(0,) * k), expand, lambda labels: Objective.parity())


# -- selection and play -------------------------------------------------------------

def g1_builder(a: Automaton) -> Callable[[Automaton], TokenGameArena]:
    """The 1-token builder for the automaton's class."""
    kind = a.value_fn.kind
    if a.value_fn.is_boolean:
        return build_g1_reach_safety
    if kind == ValueKind.SUP:
        return build_g1_sup_finite if a.mode == Mode.FINITE else build_g1_sup_infinite
    if kind == ValueKind.INF:
        return build_g1_inf
    if kind == ValueKind.DSUM:
        return build_g1_dsum
    if kind == ValueKind.LIMSUP:
        return build_g1_limsup
    raise OutOfScopeError(f"no 1-token game for {a.value_fn.label}")


def g2_builder(a: Automaton) -> Callable[[Automaton], TokenGameArena]:
    """The 2-token builder for the automaton's class."""
    kind = a.value_fn.kind
    if kind == ValueKind.SUP and a.mode == Mode.INFINITE:
        return build_g2_sup
    if kind == ValueKind.LIMSUP:
        return build_g2_limsup
    if kind == ValueKind.LIMINF:
        return build_g2_liminf
    raise OutOfScopeError(f"no 2-token game for {a.value_fn.label} on {a.mode.value} words")


def copycat_play(game: TokenGameArena, letters: Sequence[str],
                 eve_choice: Optional[Callable[[int], int]] = None) -> List[int]:
    """Play `letters` with every Adam token copying Eve's transition.

    `eve_choice` maps an Eve position to a move (default: her first move). Returns the letter
    positions visited, starting with the initial one.
    """
    p = game.initial
    visited = [p]
    for letter in letters:
        p = game.arena.moves[game.letter_move(p, letter)].target
        move = eve_choice(p) if eve_choice is not None else game.arena.out[p][0]
        transition = game.infos[move].transition
        p = game.copy_adam(game.arena.moves[move].target, transition)
        visited.append(p)
    return visited
