"""
Finite two-player game arenas, strategies and solve results.

Priorities, weights and discount factors live on moves. Positions are dense integers; builders
map their own structured keys to these integers through ArenaBuilder.
"""

from collections import deque
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from fractions import Fraction
from functools import cached_property
from typing import (
    Any, Callable, Dict, FrozenSet, Hashable, Iterable, List, Mapping, NamedTuple,
    Optional, Sequence, Tuple,
)

import networkx as nx


class Player(IntEnum):
    """Eve wins on even priorities, Adam on odd ones."""
    EVE = 0
    ADAM = 1

    @property
    def opponent(self) -> 'Player':
        return Player(1 - self)

    def __str__(self) -> str:
        return 'Eve' if self == Player.EVE else 'Adam'


class ObjectiveKind(str, Enum):
    SAFETY = 'Safety'
    REACHABILITY = 'Reachability'
    COBUCHI = 'CoBuchi'
    PARITY = 'Parity'
    MULTI_DISCOUNT = 'MultiDiscount'


@dataclass(frozen=True)
class Objective:
    """Eve's winning condition.

    `positions` is the unsafe set for Safety and the target set for Reachability; Eve wins a
    MultiDiscount play when its discounted sum is at least `threshold`.
    """
    kind: ObjectiveKind
    positions: FrozenSet[int] = frozenset()
    threshold: Fraction = Fraction(0)

    @classmethod
    def safety(cls, unsafe: Iterable[int]) -> 'Objective':
        return cls(ObjectiveKind.SAFETY, frozenset(unsafe))

    @classmethod
    def reachability(cls, target: Iterable[int]) -> 'Objective':
        return cls(ObjectiveKind.REACHABILITY, frozenset(target))

    @classmethod
    def cobuchi(cls) -> 'Objective':
        return cls(ObjectiveKind.COBUCHI)

    @classmethod
    def parity(cls) -> 'Objective':
        return cls(ObjectiveKind.PARITY)

    @classmethod
    def multi_discount(cls, threshold=0) -> 'Objective':
        return cls(ObjectiveKind.MULTI_DISCOUNT, threshold=Fraction(threshold))


class Move(NamedTuple):
    source: int
    target: int
    priority: int = 0
    weight: Optional[Fraction] = None
    discount: Optional[Fraction] = None


@dataclass(frozen=True)
class Arena:
    """Immutable game graph; every position has at least one outgoing move."""
    owners: Tuple[Player, ...]
    moves: Tuple[Move, ...]
    initial: int
    objective: Objective

    def __post_init__(self):
        object.__setattr__(self, 'owners', tuple(Player(o) for o in self.owners))
        object.__setattr__(self, 'moves', tuple(self.moves))
        n = len(self.owners)
        if not 0 <= self.initial < n:
            raise ValueError(f"initial position {self.initial} out of range")
        kind = self.objective.kind
        for i, m in enumerate(self.moves):
            if not (0 <= m.source < n and 0 <= m.target < n):
                raise ValueError(f"move {i} leaves the arena")
            if m.priority < 0:
                raise ValueError(f"move {i} has negative priority")
            if kind == ObjectiveKind.COBUCHI and m.priority > 1:
                raise ValueError(f"move {i} has priority {m.priority} in a coBuchi arena")
            if kind == ObjectiveKind.MULTI_DISCOUNT:
                if m.weight is None or m.discount is None or not (0 < m.discount < 1):
                    raise ValueError(f"move {i} needs a weight and a discount in (0,1)")
        for p, out in enumerate(self.out):
            if not out:
                raise ValueError(f"position {p} has no outgoing move")
        if any(not 0 <= p < n for p in self.objective.positions):
            raise ValueError("objective set mentions unknown positions")

    @property
    def size(self) -> int:
        return len(self.owners)

    @cached_property
    def out(self) -> Tuple[Tuple[int, ...], ...]:
        """Move indices leaving each position."""
        out: List[List[int]] = [[] for _ in self.owners]
        for i, m in enumerate(self.moves):
            out[m.source].append(i)
        return tuple(tuple(v) for v in out)

    @cached_property
    def incoming(self) -> Tuple[Tuple[int, ...], ...]:
        inc: List[List[int]] = [[] for _ in self.owners]
        for i, m in enumerate(self.moves):
            inc[m.target].append(i)
        return tuple(tuple(v) for v in inc)

    @property
    def max_priority(self) -> int:
        return max((m.priority for m in self.moves), default=0)

    def to_networkx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        for p, owner in enumerate(self.owners):
            g.add_node(p, owner=owner)
        for i, m in enumerate(self.moves):
            g.add_edge(m.source, m.target, key=i, priority=m.priority, weight=m.weight, discount=m.discount)
        return g


def is_weak(arena: Arena) -> bool:
    """True when no strongly connected component mixes move priorities."""
    g = arena.to_networkx()
    component = {}
    for i, scc in enumerate(nx.strongly_connected_components(g)):
        for p in scc:
            component[p] = i
    seen: Dict[int, int] = {}
    for m in arena.moves:
        c = component[m.source]
        if c != component[m.target]:
            continue
        if seen.setdefault(c, m.priority) != m.priority:
            return False
    return True


@dataclass(frozen=True)
class Strategy:
    """Move choice per (position, memory state), with an optional finite memory.

    A missing update leaves the memory unchanged; a strategy without updates is positional.
    """
    player: Player
    choices: Mapping[Tuple[int, int], int] = field(default_factory=dict)
    memory_initial: int = 0
    updates: Mapping[Tuple[int, int], int] = field(default_factory=dict)

    @classmethod
    def positional(cls, player: Player, mapping: Mapping[int, int]) -> 'Strategy':
        return cls(player, {(p, 0): m for p, m in mapping.items()})

    @property
    def is_positional(self) -> bool:
        return not self.updates

    @property
    def domain(self) -> FrozenSet[int]:
        return frozenset(p for p, _ in self.choices)

    def move_at(self, position: int, memory: int = 0) -> Optional[int]:
        return self.choices.get((position, memory))

    def next_memory(self, memory: int, move: int) -> int:
        return self.updates.get((memory, move), memory)

    def as_dict(self) -> Dict[int, int]:
        """Positional view: position -> move."""
        return {p: m for (p, mem), m in self.choices.items() if mem == self.memory_initial}


@dataclass(frozen=True)
class SolveResult:
    """Winning regions and strategies; Adam's region is the complement of Eve's."""
    size: int
    eve_region: FrozenSet[int]
    eve_strategy: Strategy
    adam_strategy: Strategy
    values: Optional[Tuple[Fraction, ...]] = None

    @property
    def adam_region(self) -> FrozenSet[int]:
        return frozenset(range(self.size)) - self.eve_region

    def winner(self, position: int) -> Player:
        return Player.EVE if position in self.eve_region else Player.ADAM

    def region(self, player: Player) -> FrozenSet[int]:
        return self.eve_region if player == Player.EVE else self.adam_region

    def strategy(self, player: Player) -> Strategy:
        return self.eve_strategy if player == Player.EVE else self.adam_strategy


class Edge(NamedTuple):
    """A move proposed by a builder's expansion function, addressed by position key."""
    target: Hashable
    priority: int = 0
    weight: Optional[Fraction] = None
    discount: Optional[Fraction] = None
    info: Any = None


class ArenaBuilder:
    """Builds an arena from structured position keys, keeping only reachable positions."""

    def __init__(self):
        self._index: Dict[Hashable, int] = {}
        self.keys: List[Hashable] = []
        self.owners: List[Player] = []
        self.moves: List[Move] = []
        self.infos: List[Any] = []

    def __len__(self) -> int:
        return len(self.keys)

    def position(self, key: Hashable, owner: Player) -> Tuple[int, bool]:
        """Id of `key`, creating the position if needed; returns (id, created)."""
        idx = self._index.get(key)
        if idx is not None:
            return idx, False
        idx = len(self.keys)
        self._index[key] = idx
        self.keys.append(key)
        self.owners.append(owner)
        return idx, True

    def lookup(self, key: Hashable) -> Optional[int]:
        return self._index.get(key)

    def add_move(self, source: int, target: int, priority: int = 0, weight=None, discount=None,
                 info: Any = None) -> int:
        self.moves.append(Move(source, target, priority, weight, discount))
        self.infos.append(info)
        return len(self.moves) - 1

    def explore(self, initial: Hashable, owner_of: Callable[[Hashable], Player],
                expand: Callable[[Hashable], Iterable[Edge]], limit: Optional[int] = None) -> int:
        """Breadth-first construction from `initial`; returns the initial position id."""
        start, _ = self.position(initial, owner_of(initial))
        queue = deque([initial])
        while queue:
            key = queue.popleft()
            source = self._index[key]
            for edge in expand(key):
                target, created = self.position(edge.target, owner_of(edge.target))
                if created:
                    queue.append(edge.target)
                    if limit is not None and len(self.keys) > limit:
                        raise OverflowError(f"arena exceeds {limit} positions")
                self.add_move(source, target, edge.priority, edge.weight, edge.discount, edge.info)
        return start

    def build(self, initial: int, objective: Objective) -> Arena:
        return Arena(tuple(self.owners), tuple(self.moves), initial, objective)


def discounted_lasso_value(prefix: Sequence[Tuple[Fraction, Fraction]],
                           cycle: Sequence[Tuple[Fraction, Fraction]]) -> Fraction:
    """Exact discounted sum of a lasso of (weight, discount) steps.

    Each weight is scaled by the product of the discounts of the steps before it.
    """
    total = Fraction(0)
    scale = Fraction(1)
    for w, lam in prefix:
        total += scale * w
        scale *= lam
    if cycle:
        inner = Fraction(0)
        factor = Fraction(1)
        for w, lam in cycle:
            inner += factor * w
            factor *= lam
        total += scale * inner / (1 - factor)
    return total


def lasso_outcome(arena: Arena, prefix: Sequence[int], cycle: Sequence[int]) -> Player:
    """Winner of the play that follows the `prefix` moves and then repeats the `cycle` moves."""
    objective = arena.objective
    kind = objective.kind
    moves = [arena.moves[i] for i in list(prefix) + list(cycle)]
    if kind in (ObjectiveKind.SAFETY, ObjectiveKind.REACHABILITY):
        visited = {m.source for m in moves} | {m.target for m in moves}
        hit = bool(visited & objective.positions)
        if kind == ObjectiveKind.SAFETY:
            return Player.ADAM if hit else Player.EVE
        return Player.EVE if hit else Player.ADAM
    if kind in (ObjectiveKind.COBUCHI, ObjectiveKind.PARITY):
        top = max(arena.moves[i].priority for i in cycle)
        return Player.EVE if top % 2 == 0 else Player.ADAM
    value = discounted_lasso_value(
        [(arena.moves[i].weight, arena.moves[i].discount) for i in prefix],
        [(arena.moves[i].weight, arena.moves[i].discount) for i in cycle],
    )
    return Player.EVE if value >= objective.threshold else Player.ADAM


def positional_lasso(arena: Arena, start: int, choice: Callable[[int], int]) -> Tuple[List[int], List[int]]:
    """Follow a positional choice function from `start` until a position repeats.

    Returns the (prefix, cycle) move lists of the resulting lasso.
    """
    order: Dict[int, int] = {}
    path: List[int] = []
    p = start
    while p not in order:
        order[p] = len(path)
        m = choice(p)
        path.append(m)
        p = arena.moves[m].target
    cut = order[p]
    return path[:cut], path[cut:]
