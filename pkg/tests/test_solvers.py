"""Solvers against brute-force enumeration of positional strategies"""

import itertools
import random
from dataclasses import replace
from fractions import Fraction

import pytest

from hdtokens.arena import Arena, Move, Objective, ObjectiveKind, Player, discounted_lasso_value, positional_lasso, lasso_outcome
from hdtokens.errors import SolverError
from hdtokens.settings import SolverLimits
from hdtokens.solvers import (
    discounted_values, solve, solve_attractor, solve_cobuchi, solve_multidiscount, solve_parity, spot_check,
)

DISCOUNTS = (Fraction(1, 2), Fraction(2, 3), Fraction(1, 3))


def random_arena(rng: random.Random, kind: ObjectiveKind, n: int = 5) -> Arena:
    owners = [rng.choice((Player.EVE, Player.ADAM)) for _ in range(n)]
    moves = []
    for p in range(n):
        for target in rng.sample(range(n), rng.randint(1, 2)):
            if kind == ObjectiveKind.PARITY:
                moves.append(Move(p, target, rng.randint(0, 3)))
            elif kind == ObjectiveKind.COBUCHI:
                moves.append(Move(p, target, rng.randint(0, 1)))
            elif kind == ObjectiveKind.MULTI_DISCOUNT:
                moves.append(Move(p, target, 0, Fraction(rng.randint(-2, 2)), rng.choice(DISCOUNTS)))
            else:
                moves.append(Move(p, target))
    if kind == ObjectiveKind.SAFETY:
        objective = Objective.safety(p for p in range(n) if rng.random() < 0.25)
    elif kind == ObjectiveKind.REACHABILITY:
        objective = Objective.reachability(p for p in range(n) if rng.random() < 0.25)
    elif kind == ObjectiveKind.COBUCHI:
        objective = Objective.cobuchi()
    elif kind == ObjectiveKind.PARITY:
        objective = Objective.parity()
    else:
        objective = Objective.multi_discount(0)
    return Arena(tuple(owners), tuple(moves), 0, objective)


def _strategies(arena, player):
    positions = [p for p in range(arena.size) if arena.owners[p] == player]
    for choice in itertools.product(*(arena.out[p] for p in positions)):
        yield dict(zip(positions, choice))


def naive_eve_region(arena: Arena) -> frozenset:
    won = set()
    for start in range(arena.size):
        for sigma in _strategies(arena, Player.EVE):
            beaten = False
            for tau in _strategies(arena, Player.ADAM):
                choice = {**sigma, **tau}
                prefix, cycle = positional_lasso(arena, start, choice.__getitem__)
                if lasso_outcome(arena, prefix, cycle) != Player.EVE:
                    beaten = True
                    break
            if not beaten:
                won.add(start)
                break
    return frozenset(won)


def naive_values(arena: Arena):
    def step(i):
        return arena.moves[i].weight, arena.moves[i].discount

    def value(start, choice):
        prefix, cycle = positional_lasso(arena, start, choice.__getitem__)
        return discounted_lasso_value([step(i) for i in prefix], [step(i) for i in cycle])

    values = []
    for start in range(arena.size):
        values.append(max(
            min(value(start, {**sigma, **tau}) for tau in _strategies(arena, Player.ADAM))
            for sigma in _strategies(arena, Player.EVE)
        ))
    return values


@pytest.mark.parametrize("kind", [
    ObjectiveKind.SAFETY, ObjectiveKind.REACHABILITY, ObjectiveKind.COBUCHI, ObjectiveKind.PARITY,
])
def test_regions_match_enumeration(kind):
    rng = random.Random(f"regions:{kind.value}")
    for _ in range(25):
        arena = random_arena(rng, kind)
        result = solve(arena)
        assert result.eve_region == naive_eve_region(arena)
        assert spot_check(arena, result, Player.EVE, plays=30, seed=1) == []
        assert spot_check(arena, result, Player.ADAM, plays=30, seed=2) == []


def test_cobuchi_and_parity_solvers_agree():
    rng = random.Random("cobuchi-vs-parity")
    for _ in range(40):
        arena = random_arena(rng, ObjectiveKind.COBUCHI, n=7)
        assert solve_cobuchi(arena).eve_region == solve_parity(arena).eve_region


def test_discounted_values_match_enumeration():
    rng = random.Random("discounted")
    for _ in range(15):
        arena = random_arena(rng, ObjectiveKind.MULTI_DISCOUNT, n=4)
        values, eve, adam = discounted_values(arena)
        assert values == naive_values(arena)
        assert set(eve) | set(adam) == set(range(arena.size))
        result = solve_multidiscount(arena)
        assert result.eve_region == frozenset(p for p, v in enumerate(values) if v >= 0)
        assert spot_check(arena, result, Player.EVE, plays=20, seed=3) == []


def test_one_player_discounted_game():
    half = Fraction(1, 2)
    moves = (Move(0, 1, 0, Fraction(0), half), Move(0, 0, 0, Fraction(1), half), Move(1, 1, 0, Fraction(3), half))
    arena = Arena((Player.EVE, Player.EVE), moves, 0, Objective.multi_discount(0))
    values, eve, _ = discounted_values(arena)
    assert values == [3, 6]
    assert eve[0] == 0
    adam = Arena((Player.ADAM, Player.EVE), moves, 0, Objective.multi_discount(3))
    values, _, choice = discounted_values(adam)
    assert values[0] == 2
    assert choice[0] == 1
    assert solve(adam).winner(0) == Player.ADAM


def test_attractor_on_small_safety_game():
    # 0 (Eve) -> 1 or 2; 1 (Adam) -> 0 or 3; 2 (Adam) -> 2; 3 unsafe
    moves = (Move(0, 1), Move(0, 2), Move(1, 0), Move(1, 3), Move(2, 2), Move(3, 3))
    owners = (Player.EVE, Player.ADAM, Player.ADAM, Player.EVE)
    result = solve_attractor(Arena(owners, moves, 0, Objective.safety({3})))
    assert result.eve_region == frozenset({0, 2})
    assert result.eve_strategy.move_at(0) == 1
    assert result.adam_strategy.move_at(1) == 3
    assert result.adam_region == frozenset({1, 3})


def test_solver_kind_guards():
    arena = Arena((Player.EVE,), (Move(0, 0),), 0, Objective.cobuchi())
    with pytest.raises(ValueError):
        solve_attractor(arena)
    with pytest.raises(ValueError):
        solve_multidiscount(arena)
    safety = Arena((Player.EVE,), (Move(0, 0),), 0, Objective.safety(()))
    with pytest.raises(ValueError):
        solve_cobuchi(safety)
    with pytest.raises(ValueError):
        solve_parity(safety)


def test_iteration_cap_is_reported():
    rng = random.Random("cap")
    arena = random_arena(rng, ObjectiveKind.MULTI_DISCOUNT, n=4)
    limits = SolverLimits(value_iteration_cap=0, policy_iteration_cap=0)
    with pytest.raises(SolverError):
        discounted_values(arena, limits)


@pytest.mark.parametrize("kind", [ObjectiveKind.SAFETY, ObjectiveKind.REACHABILITY])
def test_attractor_strategies_are_total(kind):
    # the play leaves Adam's region through the unsafe position 1 into the Adam self-loop 2
    owners = (Player.EVE, Player.EVE, Player.ADAM, Player.EVE, Player.EVE)
    moves = (Move(0, 2), Move(1, 2), Move(2, 2), Move(3, 4), Move(3, 0), Move(4, 3))
    objective = Objective.safety({1}) if kind == ObjectiveKind.SAFETY else Objective.reachability({1})
    arena = Arena(owners, moves, 0, objective)
    result = solve_attractor(arena)
    assert result.eve_region == naive_eve_region(arena)
    for player in (Player.EVE, Player.ADAM):
        owned = {p for p in range(arena.size) if arena.owners[p] == player}
        assert result.strategy(player).domain == frozenset(owned)
        assert spot_check(arena, result, player, plays=50, seed=4) == []


def naive_upper_values(arena: Arena):
    """min over Adam of max over Eve, the order swapped against naive_values."""
    def step(i):
        return arena.moves[i].weight, arena.moves[i].discount

    def value(start, choice):
        prefix, cycle = positional_lasso(arena, start, choice.__getitem__)
        return discounted_lasso_value([step(i) for i in prefix], [step(i) for i in cycle])

    return [
        min(
            max(value(start, {**sigma, **tau}) for sigma in _strategies(arena, Player.EVE))
            for tau in _strategies(arena, Player.ADAM)
        )
        for start in range(arena.size)
    ]


def test_multidiscount_regions_partition_and_shrink_with_threshold():
    rng = random.Random("thresholds")
    thresholds = [Fraction(t, 2) for t in range(-8, 9)]
    for _ in range(8):
        arena = random_arena(rng, ObjectiveKind.MULTI_DISCOUNT, n=4)
        lower = naive_values(arena)
        upper = naive_upper_values(arena)
        previous = frozenset(range(arena.size))
        for t in thresholds:
            result = solve_multidiscount(replace(arena, objective=Objective.multi_discount(t)))
            eve = frozenset(p for p, v in enumerate(lower) if v >= t)
            adam = frozenset(p for p, v in enumerate(upper) if v < t)
            assert eve | adam == frozenset(range(arena.size)) and not eve & adam
            assert result.eve_region == eve
            assert result.adam_region == adam
            assert result.eve_region <= previous
            previous = result.eve_region
