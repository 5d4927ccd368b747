import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from hdtokens.figures import load_figure
from hdtokens.parser import parse_automaton


def hdq(text: str):
    """Parse an indented `.hdq` literal."""
    return parse_automaton('\n'.join(line.strip() for line in text.strip().splitlines()))


@pytest.fixture
def limsup_fig():
    return load_figure('limsup')


@pytest.fixture
def sup_fig():
    return load_figure('sup')


@pytest.fixture
def reach_a():
    return load_figure('reach_a')


@pytest.fixture
def reach_b():
    return load_figure('reach_b')


@pytest.fixture
def reach_b_finite():
    return load_figure('reach_b_finite')


@pytest.fixture
def sum_automaton():
    """s0 -a:1-> s0, s0 -a:2-> s1, s1 -a:0-> s1 on finite words."""
    return hdq("""
        valuefn: Sum
        mode: finite
        alphabet: a
        initial: s0
        s0 a 1 s0
        s0 a 2 s1
        s1 a 0 s1
    """)


@pytest.fixture
def dsum_automaton():
    """Guess s1 (pays 0 then 3 forever) or s2 (pays 1 then 0 forever), discount 1/2."""
    return hdq("""
        valuefn: DSum 1/2
        mode: infinite
        alphabet: a
        initial: s0
        s0 a 0 s1
        s0 a 1 s2
        s1 a 3 s1
        s2 a 0 s2
    """)
