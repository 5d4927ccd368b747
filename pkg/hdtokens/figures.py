"""
Bundled example automata under data/automata, with the verdicts they are known to have.
"""

import os
from typing import Dict, NamedTuple, Optional

from .models import Automaton
from .parser import HDQParser
from .shared_config import AUTOMATA_DIR


class Figure(NamedTuple):
    filename: str
    is_hd: bool
    route: str
    note: str


FIGURES: Dict[str, Figure] = {
    'limsup': Figure('fig_limsup.hdq', False, 'G2-LimSup-parity',
                     'not HD, Adam wins G2; both components A_2 and A_3 are HD'),
    'sup': Figure('fig_sup.hdq', False, 'G2-Sup-cobuchi',
                  'not HD, although Eve wins the 1-token game'),
    'reach_a': Figure('fig_reach_a.hdq', True, 'G1-Reachability-weak',
                      'HD; staying in s0 forever is cautious but loses'),
    'reach_b': Figure('fig_reach_b.hdq', True, 'G1-Reachability-weak',
                      'HD on infinite words'),
    'reach_b_finite': Figure('fig_reach_b_finite.hdq', False, 'G1-Reachability-safety',
                             'same automaton, not HD on finite words'),
}


def figure_path(name: str, directory: Optional[str] = None) -> str:
    if name not in FIGURES:
        raise KeyError(f"unknown figure {name!r}; known: {', '.join(FIGURES)}")
    return os.path.join(directory or AUTOMATA_DIR, FIGURES[name].filename)


def load_figure(name: str, directory: Optional[str] = None) -> Automaton:
    return HDQParser.parse_file(figure_path(name, directory))
