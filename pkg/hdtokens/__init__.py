"""
hdtokens - deciding history-determinism of quantitative automata with token games

Supports Inf, Sup, LimInf, LimSup and discounted-sum automata on finite and infinite words,
with Reachability and Safety as their Boolean special cases.
"""

__version__ = '0.1.0'
__author__ = 'hdtokens'

from .models import (
    ValueKind, Mode, Acceptance, ValueFunction, Transition, Automaton, LassoWord, Run,
)
from .errors import (
    HdqError, HdqSyntaxError, AutomatonError, WordError, EvaluationError, OutOfScopeError,
    UnsupportedRouteError, SolverError, ResolverError, OracleLimitError, GenConfigError,
)
from .parser import HDQParser, parse_automaton, serialize_automaton, parse_word
from .values import evaluate_run, automaton_value, optimal_run, normalize_weights
from .arena import Arena, Player, Objective, Strategy, SolveResult
from .solvers import solve
from .tokengames import TokenGameArena, g1_builder, g2_builder
from .deciders import (
    Verdict, Resolver, decide_hd, extract_resolver, almost_accepting_states, polish, decompose,
    sup_to_limsup,
)
from .oracle import GenConfig, generate_random, finite_letter_game_oracle, resolver_check_on_lassos


__all__ = [
    'ValueKind',
    'Mode',
    'Acceptance',
    'ValueFunction',
    'Transition',
    'Automaton',
    'LassoWord',
    'Run',
    'HdqError',
    'HdqSyntaxError',
    'AutomatonError',
    'WordError',
    'EvaluationError',
    'OutOfScopeError',
    'UnsupportedRouteError',
    'SolverError',
    'ResolverError',
    'OracleLimitError',
    'GenConfigError',
    'HDQParser',
    'parse_automaton',
    'serialize_automaton',
    'parse_word',
    'evaluate_run',
    'automaton_value',
    'optimal_run',
    'normalize_weights',
    'Arena',
    'Player',
    'Objective',
    'Strategy',
    'SolveResult',
    'solve',
    'TokenGameArena',
    'g1_builder',
    'g2_builder',
    'Verdict',
    'Resolver',
    'decide_hd',
    'extract_resolver',
    'almost_accepting_states',
    'polish',
    'decompose',
    'sup_to_limsup',
    'GenConfig',
    'generate_random',
    'finite_letter_game_oracle',
    'resolver_check_on_lassos',
]
