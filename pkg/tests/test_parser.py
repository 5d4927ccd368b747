"""`.hdq` parsing, serialisation and word literals"""

from fractions import Fraction

import pytest

from hdtokens.errors import AutomatonError, HdqSyntaxError, WordError
from hdtokens.figures import FIGURES, load_figure
from hdtokens.models import Acceptance, LassoWord, Mode, ValueKind
from hdtokens.parser import HDQParser, parse_automaton, parse_value_function, parse_weight, parse_word


def test_parse_limsup_figure(limsup_fig):
    assert limsup_fig.value_fn.kind == ValueKind.LIMSUP
    assert limsup_fig.mode == Mode.INFINITE
    assert limsup_fig.alphabet == ('a', 'b')
    assert limsup_fig.states == ('s0', 's1', 's2', 's3', 's4')
    assert len(limsup_fig.transitions) == 12


def test_states_default_to_first_appearance_order():
    a = parse_automaton("valuefn: Sup\nalphabet: a\ninitial: q\nq a 1 p\np a 2 q\n")
    assert a.states == ('q', 'p')


@pytest.mark.parametrize("name", list(FIGURES))
def test_serialize_round_trip(name):
    a = load_figure(name)
    assert parse_automaton(HDQParser.serialize(a)) == a


def test_bom_crlf_and_comments():
    text = "\ufeffvaluefn: DSum 2/3 # discount\r\nalphabet: a\r\ninitial: s\r\ns a -1/2 s\r\n"
    a = HDQParser.parse(text.encode('utf-8'))
    assert a.value_fn.discount == Fraction(2, 3)
    assert a.transitions[0].weight == Fraction(-1, 2)


def test_boolean_headers_round_trip(reach_b_finite):
    assert reach_b_finite.value_fn.acceptance == Acceptance.REACHABILITY
    assert reach_b_finite.mode == Mode.FINITE
    assert "valuefn: Reachability" in HDQParser.serialize(reach_b_finite)


def test_sum_defaults_to_finite_words():
    a = parse_automaton("valuefn: Sum\nalphabet: a\ninitial: s\ns a 1 s\n")
    assert a.mode == Mode.FINITE


def test_wrong_field_count_reports_line():
    with pytest.raises(HdqSyntaxError) as info:
        parse_automaton("valuefn: Sup\nalphabet: a\ninitial: s\ns a 1\n")
    assert info.value.line == 4


def test_bad_weight_reports_column():
    with pytest.raises(HdqSyntaxError) as info:
        parse_automaton("valuefn: Sup\nalphabet: a\ninitial: s\ns a 1/0 s\n")
    assert (info.value.line, info.value.col) == (4, 5)


@pytest.mark.parametrize("text, error", [
    ("alphabet: a\ninitial: s\ns a 1 s\n", HdqSyntaxError),
    ("valuefn: Max\nalphabet: a\ninitial: s\ns a 1 s\n", HdqSyntaxError),
    ("valuefn: Sup\nmode: forever\nalphabet: a\ninitial: s\ns a 1 s\n", HdqSyntaxError),
    ("valuefn: Sup\ncolour: red\nalphabet: a\ninitial: s\ns a 1 s\n", HdqSyntaxError),
    ("valuefn: DSum\nalphabet: a\ninitial: s\ns a 1 s\n", AutomatonError),
    ("valuefn: Sup\nalphabet: a\ninitial: s\ns b 1 s\n", AutomatonError),
    ("valuefn: Sup\nalphabet: a\nstates: s\ninitial: s\ns a 1 t\n", AutomatonError),
])
def test_malformed_files(text, error):
    with pytest.raises(error):
        parse_automaton(text)


def test_not_utf8():
    with pytest.raises(HdqSyntaxError):
        HDQParser.parse(b"valuefn: Sup\n\xff\xfe\n")


def test_parse_weight():
    assert parse_weight("3") == 3
    assert parse_weight("-4/6") == Fraction(-2, 3)
    with pytest.raises(ValueError):
        parse_weight("1.5")


def test_parse_value_function():
    assert parse_value_function("DSum 1/2").discount == Fraction(1, 2)
    assert parse_value_function("Safety").acceptance == Acceptance.SAFETY
    assert parse_value_function("LimInf").kind == ValueKind.LIMINF


@pytest.mark.parametrize("text, prefix, cycle", [
    ("ab(ba)", ('a', 'b'), ('b', 'a')),
    ("(a)", (), ('a',)),
    ("ab", ('a', 'b'), ()),
    ("a()", ('a',), ()),
    ("foo.bar(baz)", ('foo', 'bar'), ('baz',)),
])
def test_parse_word(text, prefix, cycle):
    assert parse_word(text) == LassoWord(prefix, cycle)


@pytest.mark.parametrize("text", ["a(b", "a)b", "(a)(b)", "a(b)c"])
def test_malformed_words(text):
    with pytest.raises(WordError):
        parse_word(text)


def test_word_letters_checked_against_alphabet():
    with pytest.raises(WordError, match="unknown letter"):
        parse_word("ac", ('a', 'b'))


def test_state_names_may_contain_colons():
    a = parse_automaton("valuefn: Sup\nalphabet: a\ninitial: q:1\nq:1 a 1 q:2\nq:2 a 2 q:1\n")
    assert a.states == ('q:1', 'q:2')
    assert parse_automaton(HDQParser.serialize(a)) == a
    with pytest.raises(HdqSyntaxError, match="unknown header 'valufn'"):
        parse_automaton("valufn: DSum 1/2\nalphabet: a\ninitial: q\nq a 1 q\n")
