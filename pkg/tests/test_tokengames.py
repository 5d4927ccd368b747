"""Token-game construction"""

from dataclasses import replace
from fractions import Fraction

import pytest

from hdtokens.arena import ObjectiveKind, Player
from hdtokens.errors import OutOfScopeError
from hdtokens.models import Mode
from hdtokens.oracle import GenConfig, generate_random
from hdtokens.solvers import solve
from hdtokens.tokengames import (
    TURN_ADAM, TURN_EVE, TURN_LETTER, ZERO_LABEL, PositionLabel, build_g1_dsum, build_g1_inf,
    build_g1_limsup, build_g1_reach_safety, build_g1_sup_finite, build_g1_sup_infinite, build_g2_liminf,
    build_g2_limsup, build_g2_sup, build_gk_limsup, copycat_play, dsum_factors, g1_builder, g2_builder,
    liminf_memory_update,
)


def _winner(game):
    return solve(game.arena).winner(game.initial)


def test_round_structure(sup_fig):
    game = build_g1_sup_infinite(sup_fig)
    initial = game.decode(game.initial)
    assert initial == PositionLabel(TURN_LETTER, None, 's0', ('s0',), 0, 0, 0)
    assert initial.describe() == 'L | eps | s0 | s0 | xE=0 | xA=0'
    assert game.arena.owners[game.initial] == Player.ADAM
    for p, label in enumerate(game.labels):
        owner = Player.EVE if label.turn == TURN_EVE else Player.ADAM
        assert game.arena.owners[p] == owner
        for m in game.arena.out[p]:
            nxt = game.decode(game.arena.moves[m].target)
            expected = {TURN_LETTER: TURN_EVE, TURN_EVE: TURN_ADAM, TURN_ADAM: TURN_LETTER}[label.turn]
            assert nxt.turn == expected
    assert game.lookup(initial) == game.initial


def test_sup_figure_games(sup_fig):
    assert _winner(build_g1_sup_infinite(sup_fig)) == Player.EVE
    assert _winner(build_g2_sup(sup_fig)) == Player.ADAM
    assert build_g2_sup(sup_fig).arena.objective.kind == ObjectiveKind.COBUCHI


def test_limsup_figure_games(limsup_fig):
    for tokens in (1, 2, 3):
        game = build_gk_limsup(limsup_fig, tokens)
        assert game.tokens == tokens
        assert _winner(game) == Player.ADAM
    assert _winner(build_g2_limsup(limsup_fig)) == Player.ADAM
    assert build_g1_limsup(limsup_fig).tokens == 1


def test_limsup_priorities(limsup_fig):
    game = build_g2_limsup(limsup_fig)
    for move, info in zip(game.arena.moves, game.infos):
        if info.kind == 'letter':
            assert move.priority == 0
        elif info.kind == 'eve':
            assert move.priority == 2 * limsup_fig.rank(info.transition)
        else:
            assert move.priority == 2 * limsup_fig.rank(info.transition) - 1


def test_reachability_games(reach_b, reach_b_finite):
    finite = build_g1_reach_safety(reach_b_finite)
    assert finite.arena.objective.kind == ObjectiveKind.SAFETY
    assert _winner(finite) == Player.ADAM
    infinite = build_g1_reach_safety(reach_b)
    assert infinite.arena.objective.kind == ObjectiveKind.COBUCHI
    assert _winner(infinite) == Player.EVE


def test_unsafe_letter_positions(reach_b_finite):
    game = build_g1_reach_safety(reach_b_finite)
    unsafe = game.arena.objective.positions
    assert unsafe
    for p in unsafe:
        label = game.decode(p)
        assert label.turn == TURN_LETTER and label.x_e < label.x_a


def test_sup_finite_size_bound():
    for seed in range(20):
        a = generate_random(GenConfig(states=4, alphabet=2, weights=3, max_out=3, seed=seed))
        game = build_g1_sup_finite(a)
        assert game.size <= 3 * len(a.alphabet) * len(a.states) ** 2 * a.k
        assert game.arena.objective.kind == ObjectiveKind.SAFETY
        for p in game.arena.objective.positions:
            assert game.decode(p).turn == TURN_ADAM


def test_inf_game_starts_at_top_rank():
    a = generate_random(GenConfig(states=3, weights=3, valuefn="Inf", mode="infinite", seed=4))
    game = build_g1_inf(a)
    label = game.decode(game.initial)
    assert label.x_e == label.x_a == a.k


def test_dsum_factors_multiply_to_discount():
    assert dsum_factors(Fraction(1, 2)) == (Fraction(4, 5), Fraction(5, 6), Fraction(3, 4))
    for lam in (Fraction(1, 3), Fraction(2, 3), Fraction(5, 7), Fraction(1, 100)):
        first, second, third = dsum_factors(lam)
        assert first * second * third == lam
        assert all(0 < f < 1 for f in (first, second, third))


def test_dsum_game_shape(dsum_automaton):
    infinite = build_g1_dsum(dsum_automaton)
    assert ZERO_LABEL not in infinite.labels
    assert infinite.arena.objective.kind == ObjectiveKind.MULTI_DISCOUNT
    finite = build_g1_dsum(replace(dsum_automaton, mode=Mode.FINITE))
    zero = finite.lookup(ZERO_LABEL)
    assert zero is not None
    (stay,) = finite.arena.out[zero]
    assert finite.arena.moves[stay].target == zero
    assert finite.infos[stay].kind == 'stay'
    escapes = [i for i, info in enumerate(finite.infos) if info.kind == 'escape']
    letters = [p for p, label in enumerate(finite.labels) if label.turn == TURN_LETTER]
    assert len(escapes) == len(letters)


def test_dsum_adam_moves_pay_the_difference(dsum_automaton):
    game = build_g1_dsum(dsum_automaton)
    for move, info in zip(game.arena.moves, game.infos):
        if info.kind == 'adam':
            pending = game.decode(move.source).pending
            assert move.weight == pending - dsum_automaton.transitions[info.transition].weight


def test_dsum_game_is_won_by_eve_on_a_guessable_automaton(dsum_automaton):
    # both runs are fixed after the first letter, so Eve can copy the better one
    assert _winner(build_g1_dsum(dsum_automaton)) == Player.EVE


@pytest.mark.parametrize("memory, token, rank, expected", [
    ((0, 0, 0), 1, 2, ((0, 1, 1), None)),
    ((0, 1, 1), 2, 3, ((0, 1, 0), 3)),
    ((0, 2, 0), 1, 1, ((1, 0, 1), 2)),
    ((1, 1, 1), 1, 1, ((1, 1, 1), None)),
    ((0, 0, 0), 1, 1, ((1, 1, 1), None)),
    ((1, 1, 1), 2, 3, ((1, 1, 0), 3)),
])
def test_liminf_memory_update(memory, token, rank, expected):
    assert liminf_memory_update(memory, token, rank) == expected


def test_liminf_game_carries_memory():
    a = generate_random(GenConfig(states=2, alphabet=2, weights=3, valuefn="LimInf", mode="infinite", seed=2))
    game = build_g2_liminf(a)
    assert game.decode(game.initial).memory == (0,) * a.k
    assert all(len(label.memory) == a.k for label in game.labels)
    assert game.arena.objective.kind == ObjectiveKind.PARITY


def test_builders_reject_other_classes(sup_fig, limsup_fig, reach_b):
    with pytest.raises(OutOfScopeError):
        build_g1_sup_finite(sup_fig)
    with pytest.raises(OutOfScopeError):
        build_g1_reach_safety(sup_fig)
    with pytest.raises(OutOfScopeError):
        build_g2_liminf(limsup_fig)
    with pytest.raises(OutOfScopeError):
        build_g1_dsum(reach_b)
    with pytest.raises(ValueError):
        build_gk_limsup(limsup_fig, 4)


def test_builder_selection(sup_fig, limsup_fig, reach_b, reach_b_finite):
    assert g1_builder(reach_b) is build_g1_reach_safety
    assert g1_builder(sup_fig) is build_g1_sup_infinite
    assert g1_builder(limsup_fig) is build_g1_limsup
    assert g2_builder(sup_fig) is build_g2_sup
    with pytest.raises(OutOfScopeError):
        g2_builder(reach_b_finite)


def test_copycat_keeps_tokens_together(sup_fig):
    game = build_g2_sup(sup_fig)
    visited = copycat_play(game, 'abba')
    assert len(visited) == 5
    for p in visited:
        label = game.decode(p)
        assert label.turn == TURN_LETTER
        assert label.adam == (label.eve, label.eve)
        assert label.x_e == label.x_a


def test_letter_move_lookup(sup_fig):
    game = build_g1_sup_infinite(sup_fig)
    with pytest.raises(ValueError):
        game.letter_move(game.initial, 'z')


def test_arena_json_view(limsup_fig):
    game = build_g2_limsup(limsup_fig)
    d = game.to_dict()
    assert d['builder'] == 'build_g2_limsup'
    assert d['tokens'] == 2
    assert len(d['positions']) == game.size
    assert len(d['moves']) == len(game.arena.moves)
    assert d['positions'][0]['turn'] == TURN_LETTER
    assert d['objective']['kind'] == 'Parity'
