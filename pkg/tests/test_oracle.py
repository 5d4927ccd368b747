"""Letter-game oracle, random automata and lasso sampling"""

import random
from fractions import Fraction

import pytest

from hdtokens.deciders import decide_hd
from hdtokens.errors import GenConfigError, OracleLimitError, OutOfScopeError
from hdtokens.models import Mode, ValueKind
from hdtokens.oracle import (
    GenConfig, finite_letter_game_oracle, frontier_values, generate_random, random_lasso,
    resolver_check_on_lassos,
)
from hdtokens.parser import HDQParser
from hdtokens.settings import DEFAULT_SETTINGS

from conftest import hdq


def test_frontier_values(reach_b_finite):
    # ranks, not weights: weight 0 has rank 1
    assert frontier_values(reach_b_finite, '') == {'s0': 0}
    assert frontier_values(reach_b_finite, 'a') == {'s1': 1, 's2': 1}
    assert frontier_values(reach_b_finite, 'ab') == {'s3': 2}
    with pytest.raises(OutOfScopeError):
        frontier_values(load_sum(), 'a')


def load_sum():
    return hdq("""
        valuefn: Sum
        mode: finite
        alphabet: a
        initial: s0
        s0 a 1 s0
    """)


def test_oracle_on_figures(reach_b_finite):
    assert finite_letter_game_oracle(reach_b_finite) is False
    with pytest.raises(OutOfScopeError):
        finite_letter_game_oracle(load_sum())


def test_oracle_on_a_deterministic_automaton():
    a = hdq("""
        valuefn: Inf
        mode: finite
        alphabet: a b
        initial: s0
        s0 a 2 s0
        s0 b 0 s1
        s1 a 1 s1
        s1 b 2 s0
    """)
    assert a.is_deterministic()
    assert finite_letter_game_oracle(a) is True


def test_oracle_position_cap():
    a = generate_random(GenConfig(states=5, alphabet=3, weights=3, max_out=3, seed=11))
    with pytest.raises(OracleLimitError):
        finite_letter_game_oracle(a, max_positions=1)


@pytest.mark.parametrize("valuefn", ["Sup", "Inf", "Reachability", "Safety"])
def test_oracle_agrees_with_token_games(valuefn):
    for seed in range(25):
        a = generate_random(GenConfig(states=4, alphabet=2, weights=3, max_out=2, valuefn=valuefn, seed=seed))
        assert decide_hd(a).is_hd == finite_letter_game_oracle(a), f"{valuefn} seed={seed}"


def test_generator_is_deterministic():
    cfg = GenConfig(states=5, alphabet=3, weights=4, max_out=3, valuefn="LimSup", mode="infinite", seed=42)
    first = HDQParser.serialize(generate_random(cfg))
    assert HDQParser.serialize(generate_random(cfg)) == first
    other = HDQParser.serialize(generate_random(GenConfig(**{**cfg.to_dict(), 'seed': 43})))
    assert other != first


def test_generated_automata_are_total():
    for valuefn, mode in (("Sup", "finite"), ("Safety", "infinite"), ("DSum", "infinite"), ("LimInf", "infinite")):
        a = generate_random(GenConfig(states=6, valuefn=valuefn, mode=mode, min_out=1, max_out=3, seed=5))
        assert a.states == tuple(f"s{i}" for i in range(6))
        assert a.alphabet == ('a', 'b')
        for q in a.states:
            for letter in a.alphabet:
                assert 1 <= len(a.successors(q, letter)) <= 3
        if a.value_fn.is_boolean:
            assert a.sink_shape_problems() == []


def test_generated_discount():
    a = generate_random(GenConfig(valuefn="DSum", mode="finite", discount="2/3"))
    assert a.value_fn.kind == ValueKind.DSUM
    assert a.value_fn.discount == Fraction(2, 3)
    assert a.mode == Mode.FINITE


@pytest.mark.parametrize("overrides", [
    {'states': 0},
    {'alphabet': 27},
    {'min_out': 0},
    {'min_out': 3, 'max_out': 2},
    {'mode': 'forever'},
    {'valuefn': 'Median'},
    {'valuefn': 'Sum', 'mode': 'infinite'},
    {'valuefn': 'LimSup', 'mode': 'finite'},
    {'valuefn': 'DSum', 'discount': '3/2'},
])
def test_gen_config_validation(overrides):
    with pytest.raises(GenConfigError):
        generate_random(GenConfig(**overrides))


def test_gen_config_from_settings(monkeypatch):
    monkeypatch.delenv('HDQ_SEED', raising=False)
    settings = {**DEFAULT_SETTINGS, 'generator': {'seed': 9, 'states': 7}}
    cfg = GenConfig.from_settings(settings, states=None, alphabet=4)
    assert (cfg.states, cfg.alphabet, cfg.seed) == (7, 4, 9)
    monkeypatch.setenv('HDQ_SEED', '21')
    assert GenConfig.from_settings(settings).seed == 21


def test_random_lasso_shapes(limsup_fig, reach_b_finite):
    rng = random.Random(0)
    for _ in range(50):
        w = random_lasso(rng, limsup_fig)
        assert len(w.prefix) <= 2 * len(limsup_fig.states)
        assert 1 <= len(w.cycle) <= 2 * len(limsup_fig.states)
        f = random_lasso(rng, reach_b_finite, max_length=3)
        assert f.is_finite and 1 <= len(f.prefix) <= 3
        assert set(f.prefix) <= set(reach_b_finite.alphabet)


def test_resolver_check_reports_counterexamples(reach_b_finite):
    class Cautious:
        """Always takes the first transition, which is wrong on the word 'ab'."""

        def start(self):
            return None

        def step(self, memory, state, letter):
            return reach_b_finite.successors(state, letter)[0], None

    report = resolver_check_on_lassos(reach_b_finite, Cautious(), samples=100, seed=0)
    assert not report.ok
    bad = report.counterexamples[0]
    assert bad.run_value < bad.word_value
    d = report.to_dict()
    assert d['samples'] == 100 and d['ok'] is False
    assert d['counterexamples'][0]['word'] == str(bad.word)


def test_resolver_check_default_sample_count(reach_a):
    resolver = decide_hd(reach_a).resolver
    report = resolver_check_on_lassos(reach_a, resolver, seed=4)
    assert report.ok
    assert report.samples == DEFAULT_SETTINGS['resolver']['samples']
