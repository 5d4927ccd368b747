"""
Solvers for every objective the token-game builders produce.

- Safety / Reachability: attractor fixpoint, linear in moves.
- CoBuchi: Buchi-for-Adam iteration of attractors.
- Parity: Zielonka's recursive algorithm (McNaughton loop form), max-even convention.
- MultiDiscount: rounded value iteration, then exact Hoffman-Karp strategy iteration.

Move priorities are turned into node priorities: a position whose incoming moves all carry the
same priority takes that priority, and the remaining moves are routed through fresh
single-successor positions that carry the move's priority.
"""

import logging
import random
from collections import deque
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .arena import (
    Arena, ObjectiveKind, Player, SolveResult, Strategy, lasso_outcome, positional_lasso,
)
from .errors import SolverError
from .settings import DEFAULT_LIMITS, SolverLimits

log = logging.getLogger("hdtokens.solvers")


class _Game:
    """Node-priority view of an arena used by the fixpoint algorithms."""

    def __init__(self, arena: Arena, split: bool):
        n = arena.size
        self.n = n
        self.owner: List[int] = [int(o) for o in arena.owners]
        self.prio: List[int] = [0] * n
        self.succ: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
        if split:
            incoming: List[Set[int]] = [set() for _ in range(n)]
            for m in arena.moves:
                incoming[m.target].add(m.priority)
            mids: Dict[Tuple[int, int], int] = {}
            for i, m in enumerate(arena.moves):
                if len(incoming[m.target]) == 1:
                    self.succ[m.source].append((m.target, i))
                    continue
                mid = mids.get((m.target, m.priority))
                if mid is None:
                    mid = len(self.owner)
                    mids[(m.target, m.priority)] = mid
                    self.owner.append(int(Player.EVE))
                    self.prio.append(m.priority)
                    self.succ.append([(m.target, -1)])
                self.succ[m.source].append((mid, i))
            for v in range(n):
                if len(incoming[v]) == 1:
                    self.prio[v] = next(iter(incoming[v]))
        else:
            for i, m in enumerate(arena.moves):
                self.succ[m.source].append((m.target, i))
        self.pred: List[List[Tuple[int, int]]] = [[] for _ in self.owner]
        for u, edges in enumerate(self.succ):
            for v, i in edges:
                self.pred[v].append((u, i))

    @property
    def nodes(self) -> Set[int]:
        return set(range(len(self.owner)))

    def attractor(self, nodes: Set[int], target: Set[int], player: int) -> Tuple[Set[int], Dict[int, int]]:
        """Positions of `nodes` from which `player` forces a visit to `target` inside `nodes`."""
        attr = {v for v in target if v in nodes}
        queue = deque(attr)
        remaining: Dict[int, int] = {}
        strategy: Dict[int, int] = {}
        while queue:
            v = queue.popleft()
            for u, move in self.pred[v]:
                if u in attr or u not in nodes:
                    continue
                if self.owner[u] == player:
                    attr.add(u)
                    queue.append(u)
                    if move >= 0:
                        strategy[u] = move
                    continue
                left = remaining.get(u)
                if left is None:
                    left = sum(1 for x, _ in self.succ[u] if x in nodes)
                left -= 1
                remaining[u] = left
                if left == 0:
                    attr.add(u)
                    queue.append(u)
        return attr, strategy

    def stay_move(self, v: int, inside: Set[int]) -> Optional[int]:
        """Some move from v whose successor is in `inside` (None for fresh positions)."""
        for x, move in self.succ[v]:
            if x in inside:
                return move if move >= 0 else None
        raise SolverError(f"position {v} has no move inside its region")

    def zielonka(self, nodes: Set[int]) -> Tuple[List[Set[int]], List[Dict[int, int]]]:
        won: List[Set[int]] = [set(), set()]
        strategies: List[Dict[int, int]] = [{}, {}]
        game = set(nodes)
        while game:
            top = max(self.prio[v] for v in game)
            p = top % 2
            tops = {v for v in game if self.prio[v] == top}
            attr, attr_strategy = self.attractor(game, tops, p)
            rest = game - attr
            if rest:
                sub_won, sub_strategies = self.zielonka(rest)
            else:
                sub_won, sub_strategies = [set(), set()], [{}, {}]
            if not sub_won[1 - p]:
                won[p] |= game
                strategies[p].update(sub_strategies[p])
                strategies[p].update(attr_strategy)
                for v in tops:
                    if self.owner[v] == p and v < self.n:
                        move = self.stay_move(v, game)
                        if move is not None:
                            strategies[p][v] = move
                return won, strategies
            lost, lost_strategy = self.attractor(game, sub_won[1 - p], 1 - p)
            won[1 - p] |= lost
            strategies[1 - p].update(sub_strategies[1 - p])
            strategies[1 - p].update(lost_strategy)
            game -= lost
        return won, strategies


def _positional(player: Player, mapping: Dict[int, int], arena: Arena) -> Strategy:
    """Positional strategy defined at every position `player` owns.

    Positions the solver left open take their first move; a play that follows the strategy from
    its winning region never depends on those choices.
    """
    moves = {p: m for p, m in mapping.items() if p < arena.size}
    for p, owner in enumerate(arena.owners):
        if owner == player and p not in moves:
            moves[p] = arena.out[p][0]
    return Strategy.positional(player, moves)



def solve_attractor(arena: Arena) -> SolveResult:
    """Solve a Safety or Reachability arena by a single attractor computation."""
    kind = arena.objective.kind
    if kind not in (ObjectiveKind.SAFETY, ObjectiveKind.REACHABILITY):
        raise ValueError(f"solve_attractor needs a Safety or Reachability arena, got {kind.value}")
    game = _Game(arena, split=False)
    everything = game.nodes
    target = set(arena.objective.positions)
    if kind == ObjectiveKind.SAFETY:
        adam_region, adam_moves = game.attractor(everything, target, Player.ADAM)
        eve_region = everything - adam_region
        eve_moves = {v: game.stay_move(v, eve_region) for v in eve_region if game.owner[v] == Player.EVE}
    else:
        eve_region, eve_moves = game.attractor(everything, target, Player.EVE)
        adam_region = everything - eve_region
        adam_moves = {v: game.stay_move(v, adam_region) for v in adam_region if game.owner[v] == Player.ADAM}
    log.debug("attractor: %d positions, Eve wins %d", arena.size, len(eve_region))
    return SolveResult(
        size=arena.size,
        eve_region=frozenset(eve_region),
        eve_strategy=_positional(Player.EVE, eve_moves, arena),
        adam_strategy=_positional(Player.ADAM, adam_moves, arena),
    )


def solve_cobuchi(arena: Arena) -> SolveResult:
    """Eve wins when priority 1 is seen finitely often."""
    if arena.objective.kind != ObjectiveKind.COBUCHI:
        raise ValueError(f"solve_cobuchi needs a CoBuchi arena, got {arena.objective.kind.value}")
    game = _Game(arena, split=True)
    remaining = game.nodes
    eve_region: Set[int] = set()
    eve_moves: Dict[int, int] = {}
    while True:
        visits = {v for v in remaining if game.prio[v] == 1}
        forced, _ = game.attractor(remaining, visits, Player.ADAM)
        avoid = remaining - forced
        if not avoid:
            break
        for v in avoid:
            if game.owner[v] == Player.EVE and v < game.n:
                move = game.stay_move(v, avoid)
                if move is not None:
                    eve_moves[v] = move
        won, attr_moves = game.attractor(remaining, avoid, Player.EVE)
        eve_moves.update(attr_moves)
        eve_region |= won
        remaining -= won
    visits = {v for v in remaining if game.prio[v] == 1}
    _, adam_moves = game.attractor(remaining, visits, Player.ADAM)
    for v in visits | remaining:
        if game.owner[v] == Player.ADAM and v < game.n and v not in adam_moves:
            move = game.stay_move(v, remaining)
            if move is not None:
                adam_moves[v] = move
    eve_positions = {v for v in eve_region if v < game.n}
    log.debug("coBuchi: %d positions (%d split), Eve wins %d", arena.size, len(game.owner), len(eve_positions))
    return SolveResult(
        size=arena.size,
        eve_region=frozenset(eve_positions),
        eve_strategy=_positional(Player.EVE, eve_moves, arena),
        adam_strategy=_positional(Player.ADAM, adam_moves, arena),
    )


def solve_parity(arena: Arena) -> SolveResult:
    """Max-even parity over move priorities; accepts CoBuchi arenas as the {0,1} case."""
    if arena.objective.kind not in (ObjectiveKind.PARITY, ObjectiveKind.COBUCHI):
        raise ValueError(f"solve_parity needs a Parity arena, got {arena.objective.kind.value}")
    game = _Game(arena, split=True)
    won, strategies = game.zielonka(game.nodes)
    eve_positions = {v for v in won[Player.EVE] if v < game.n}
    log.debug("parity: %d positions (%d split), max priority %d, Eve wins %d",
              arena.size, len(game.owner), arena.max_priority, len(eve_positions))
    return SolveResult(
        size=arena.size,
        eve_region=frozenset(eve_positions),
        eve_strategy=_positional(Player.EVE, strategies[Player.EVE], arena),
        adam_strategy=_positional(Player.ADAM, strategies[Player.ADAM], arena),
    )


# -- discounted games ---------------------------------------------------------

def _policy_values(arena: Arena, choice: Sequence[int]) -> List[Fraction]:
    """Exact values of the one-move-per-position graph given by `choice`."""
    moves = arena.moves
    n = arena.size
    values: List[Optional[Fraction]] = [None] * n
    state = [0] * n  # 0 new, 1 on the current path, 2 done
    for start in range(n):
        if state[start]:
            continue
        path: List[int] = []
        v = start
        while state[v] == 0:
            state[v] = 1
            path.append(v)
            v = moves[choice[v]].target
        if state[v] == 1:
            cut = path.index(v)
            cycle = path[cut:]
            total = Fraction(0)
            factor = Fraction(1)
            for u in cycle:
                m = moves[choice[u]]
                total += factor * m.weight
                factor *= m.discount
            values[v] = total / (1 - factor)
            state[v] = 2
            for u in reversed(cycle[1:]):
                m = moves[choice[u]]
                values[u] = m.weight + m.discount * values[m.target]
                state[u] = 2
            path = path[:cut]
        for u in reversed(path):
            m = moves[choice[u]]
            values[u] = m.weight + m.discount * values[m.target]
            state[u] = 2
    return values


def _value_iteration(arena: Arena, limits: SolverLimits) -> List[int]:
    """Approximate values on the grid 2**-grid_bits using integer arithmetic."""
    scale = 1 << limits.grid_bits
    moves = arena.moves
    scaled = [(round(m.weight * scale), m.discount.numerator, m.discount.denominator, m.target) for m in moves]
    eve = [o == Player.EVE for o in arena.owners]
    values = [0] * arena.size
    for rounds in range(1, limits.value_iteration_cap + 1):
        updated = []
        residual = 0
        for p, out in enumerate(arena.out):
            options = []
            for i in out:
                w, num, den, t = scaled[i]
                options.append(w + (num * values[t]) // den)
            best = max(options) if eve[p] else min(options)
            residual = max(residual, abs(best - values[p]))
            updated.append(best)
        values = updated
        if residual <= 1:
            log.debug("value iteration converged after %d rounds", rounds)
            break
    return values


def _greedy(arena: Arena, approx: List[int], player: Player) -> Dict[int, int]:
    choice = {}
    for p, out in enumerate(arena.out):
        if arena.owners[p] != player:
            continue
        def score(i):
            m = arena.moves[i]
            return m.weight + m.discount * approx[m.target]
        choice[p] = max(out, key=score) if player == Player.EVE else min(out, key=score)
    return choice


def _switch(arena: Arena, values: List[Fraction], choice: List[int], player: Player) -> bool:
    """Move every `player` position to a strictly better move; True if anything changed."""
    changed = False
    for p, out in enumerate(arena.out):
        if arena.owners[p] != player:
            continue
        best_move, best = None, values[p]
        for i in out:
            m = arena.moves[i]
            v = m.weight + m.discount * values[m.target]
            if (player == Player.EVE and v > best) or (player == Player.ADAM and v < best):
                best_move, best = i, v
        if best_move is not None:
            choice[p] = best_move
            changed = True
    return changed


def discounted_values(arena: Arena, limits: SolverLimits = DEFAULT_LIMITS
                      ) -> Tuple[List[Fraction], Dict[int, int], Dict[int, int]]:
    """Exact game values with optimal positional strategies for both players."""
    approx = _value_iteration(arena, limits)
    scale = 1 << limits.grid_bits
    approx_values = [Fraction(v, scale) for v in approx]
    choice = [0] * arena.size
    for player in (Player.EVE, Player.ADAM):
        for p, m in _greedy(arena, approx_values, player).items():
            choice[p] = m
    for outer in range(limits.policy_iteration_cap):
        for inner in range(limits.policy_iteration_cap):
            values = _policy_values(arena, choice)
            if not _switch(arena, values, choice, Player.ADAM):
                break
        else:
            raise SolverError("Adam's best response did not stabilise within the iteration cap")
        if not _switch(arena, values, choice, Player.EVE):
            log.debug("strategy iteration certified after %d rounds", outer + 1)
            eve = {p: choice[p] for p in range(arena.size) if arena.owners[p] == Player.EVE}
            adam = {p: choice[p] for p in range(arena.size) if arena.owners[p] == Player.ADAM}
            return values, eve, adam
    raise SolverError("strategy iteration did not stabilise within the iteration cap")


def solve_multidiscount(arena: Arena, limits: SolverLimits = DEFAULT_LIMITS) -> SolveResult:
    """Eve wins where the exact game value is at least the objective's threshold.

    Both returned strategies are optimal at every position of their owner, not only on the
    owner's winning region.
    """
    if arena.objective.kind != ObjectiveKind.MULTI_DISCOUNT:
        raise ValueError(f"solve_multidiscount needs a MultiDiscount arena, got {arena.objective.kind.value}")
    values, eve, adam = discounted_values(arena, limits)
    threshold = arena.objective.threshold
    region = frozenset(p for p, v in enumerate(values) if v >= threshold)
    log.debug("multidiscount: %d positions, Eve wins %d", arena.size, len(region))
    return SolveResult(
        size=arena.size,
        eve_region=region,
        eve_strategy=Strategy.positional(Player.EVE, eve),
        adam_strategy=Strategy.positional(Player.ADAM, adam),
        values=tuple(values),
    )


def solve(arena: Arena, limits: SolverLimits = DEFAULT_LIMITS) -> SolveResult:
    kind = arena.objective.kind
    if kind in (ObjectiveKind.SAFETY, ObjectiveKind.REACHABILITY):
        return solve_attractor(arena)
    if kind == ObjectiveKind.COBUCHI:
        return solve_cobuchi(arena)
    if kind == ObjectiveKind.PARITY:
        return solve_parity(arena)
    return solve_multidiscount(arena, limits)


class _Undefined(Exception):
    pass


def spot_check(arena: Arena, result: SolveResult, player: Player, plays: int = 1000,
               seed: int = 0) -> List[int]:
    """Simulate plays from `player`'s region against random positional opponents.

    `player` follows its strategy from the result. Returns the start positions of plays it did not win.
    """
    rng = random.Random(seed)
    region = sorted(result.region(player))
    if not region:
        return []
    strategy = result.strategy(player)
    failures = []
    for _ in range(plays):
        start = rng.choice(region)
        opponent: Dict[int, int] = {}

        def choose(p: int) -> int:
            if arena.owners[p] == player:
                move = strategy.move_at(p)
                if move is None:
                    raise _Undefined(p)
                return move
            if p not in opponent:
                opponent[p] = rng.choice(arena.out[p])
            return opponent[p]

        try:
            prefix, cycle = positional_lasso(arena, start, choose)
        except _Undefined:
            failures.append(start)
            continue
        if lasso_outcome(arena, prefix, cycle) != player:
            failures.append(start)
    return failures
