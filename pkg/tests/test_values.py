"""Run values, exact word values and witness runs"""

import random
from dataclasses import replace
from fractions import Fraction

import pytest

from hdtokens.errors import EvaluationError, WordError
from hdtokens.models import LassoWord, Mode, Run, Transition, ValueFunction, ValueKind
from hdtokens.oracle import GenConfig, generate_random, random_lasso
from hdtokens.parser import parse_word
from hdtokens.values import automaton_value, evaluate_run, normalize_weights, optimal_run, product_graph

from conftest import hdq


def _run(prefix, cycle=()):
    def step(w):
        return Transition('s', 'a', Fraction(w), 's')

    return Run(tuple(step(w) for w in prefix), tuple(step(w) for w in cycle))


@pytest.mark.parametrize("vf, run, expected", [
    (ValueFunction(ValueKind.SUP), _run((1, 3, 2)), 3),
    (ValueFunction(ValueKind.INF), _run((1, 3, 2)), 1),
    (ValueFunction(ValueKind.INF), _run((4,), (2, 5)), 2),
    (ValueFunction(ValueKind.LIMSUP), _run((5,), (1, 2)), 2),
    (ValueFunction(ValueKind.LIMINF), _run((0,), (1, 2)), 1),
    (ValueFunction(ValueKind.SUM), _run((1, 2, 3)), 6),
    (ValueFunction(ValueKind.AVG), _run((1, 2, 3)), 2),
    (ValueFunction.dsum(Fraction(1, 2)), _run((1,), (2,)), 3),
    (ValueFunction.dsum(Fraction(1, 2)), _run((1, 1)), Fraction(3, 2)),
])
def test_evaluate_run(vf, run, expected):
    assert evaluate_run(run, vf) == expected


@pytest.mark.parametrize("vf, run", [
    (ValueFunction(ValueKind.LIMSUP), _run((1, 2))),
    (ValueFunction(ValueKind.SUM), _run((1,), (2,))),
    (ValueFunction(ValueKind.AVG), _run(())),
    (ValueFunction(ValueKind.SUP), _run(())),
])
def test_undefined_run_values(vf, run):
    with pytest.raises(EvaluationError):
        evaluate_run(run, vf)


@pytest.mark.parametrize("word, expected", [("(a)", 3), ("a(b)", 2), ("(b)", 2), ("b(a)", 3)])
def test_limsup_figure_values(limsup_fig, word, expected):
    assert automaton_value(limsup_fig, parse_word(word)) == expected


@pytest.mark.parametrize("word, expected", [("(a)", 1), ("(b)", 3), ("a(b)", 3)])
def test_sup_figure_values(sup_fig, word, expected):
    assert automaton_value(sup_fig, parse_word(word)) == expected


def test_infinite_word_aggregates_differ():
    a = hdq("""
        valuefn: Inf
        alphabet: a
        initial: s0
        s0 a 1 s0
        s0 a 2 s1
        s1 a 3 s1
    """)
    w = parse_word("(a)")
    expected = {ValueKind.INF: 2, ValueKind.SUP: 3, ValueKind.LIMINF: 3, ValueKind.LIMSUP: 3}
    for kind, value in expected.items():
        assert automaton_value(replace(a, value_fn=ValueFunction(kind)), w) == value


def test_finite_word_aggregates(sum_automaton):
    w = parse_word("aa")
    assert automaton_value(sum_automaton, w) == 3
    assert automaton_value(replace(sum_automaton, value_fn=ValueFunction(ValueKind.AVG)), w) == Fraction(3, 2)
    assert automaton_value(replace(sum_automaton, value_fn=ValueFunction(ValueKind.INF)), w) == 1
    assert automaton_value(replace(sum_automaton, value_fn=ValueFunction(ValueKind.SUP)), w) == 2


def test_empty_word(sum_automaton):
    assert automaton_value(sum_automaton, LassoWord(())) == 0
    with pytest.raises(EvaluationError):
        automaton_value(replace(sum_automaton, value_fn=ValueFunction(ValueKind.AVG)), LassoWord(()))


def test_discounted_values(dsum_automaton):
    assert automaton_value(dsum_automaton, parse_word("(a)")) == 3
    finite = replace(dsum_automaton, mode=Mode.FINITE)
    assert automaton_value(finite, parse_word("aa")) == Fraction(3, 2)
    assert automaton_value(finite, parse_word("a")) == 1


def test_word_mode_is_enforced(limsup_fig):
    with pytest.raises(WordError):
        automaton_value(limsup_fig, parse_word("a()"))


def test_product_graph_shape(limsup_fig):
    g = product_graph(limsup_fig, parse_word("a(b)"))
    assert g.graph['start'] == ('s0', 0)
    assert g.has_edge(('s0', 0), ('s2', 1))
    assert g.has_edge(('s2', 1), ('s4', 1))
    assert g.graph['terminal'] == set()


def test_optimal_run_on_figures(limsup_fig, dsum_automaton):
    run = optimal_run(limsup_fig, parse_word("a(b)"))
    assert run.problems(limsup_fig) == []
    assert evaluate_run(run, limsup_fig.value_fn) == 2
    run = optimal_run(dsum_automaton, parse_word("(a)"))
    assert [t.target for t in run.prefix + run.cycle] == ['s1', 's1']
    assert evaluate_run(run, dsum_automaton.value_fn) == 3


@pytest.mark.parametrize("valuefn, mode", [
    ("Sup", "finite"), ("Sup", "infinite"),
    ("Inf", "finite"), ("Inf", "infinite"),
    ("LimSup", "infinite"), ("LimInf", "infinite"),
    ("Sum", "finite"), ("Avg", "finite"),
    ("DSum", "finite"), ("DSum", "infinite"),
])
def test_optimal_run_attains_the_word_value(valuefn, mode):
    rng = random.Random(f"optimal:{valuefn}:{mode}")
    for seed in range(15):
        a = generate_random(GenConfig(states=3, alphabet=2, weights=3, max_out=2,
                                      valuefn=valuefn, mode=mode, discount="2/3", seed=seed))
        w = random_lasso(rng, a, max_length=4)
        run = optimal_run(a, w)
        assert run.problems(a) == []
        assert evaluate_run(run, a.value_fn) == automaton_value(a, w)


def test_normalize_weights(sup_fig, reach_a):
    ranked, ranks = normalize_weights(sup_fig)
    assert ranks == {0: 1, 1: 2, 2: 3, 3: 4}
    assert ranked.weight_set == (1, 2, 3, 4)
    assert automaton_value(ranked, parse_word("(a)")) == ranks[automaton_value(sup_fig, parse_word("(a)"))]
    ranked, _ = normalize_weights(reach_a)
    assert ranked.value_fn == ValueFunction(ValueKind.SUP)
    assert ranked.weight_set == (1, 2)
