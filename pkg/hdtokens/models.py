"""
Data models for hdtokens
"""

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .errors import AutomatonError, WordError

Weight = Fraction


class ValueKind(str, Enum):
    INF = 'Inf'
    SUP = 'Sup'
    LIMINF = 'LimInf'
    LIMSUP = 'LimSup'
    DSUM = 'DSum'
    SUM = 'Sum'
    AVG = 'Avg'


class Mode(str, Enum):
    FINITE = 'finite'
    INFINITE = 'infinite'


class Acceptance(str, Enum):
    """Boolean classes encoded as {0,1}-weight Sup/Inf automata."""
    REACHABILITY = 'Reachability'
    SAFETY = 'Safety'


FINITE_ONLY = frozenset({ValueKind.SUM, ValueKind.AVG})
INFINITE_ONLY = frozenset({ValueKind.LIMINF, ValueKind.LIMSUP})


@dataclass(frozen=True)
class ValueFunction:
    """Value function Val, with the discount for DSum and the Boolean class marker"""
    kind: ValueKind
    discount: Optional[Fraction] = None
    acceptance: Optional[Acceptance] = None

    def __post_init__(self):
        if self.kind == ValueKind.DSUM:
            if self.discount is None or not (0 < self.discount < 1):
                raise AutomatonError(f"bad discount {self.discount}: DSum needs 0 < lambda < 1")
        elif self.discount is not None:
            raise AutomatonError(f"discount given for {self.kind.value}")
        if self.acceptance == Acceptance.REACHABILITY and self.kind != ValueKind.SUP:
            raise AutomatonError("Reachability is a Sup class")
        if self.acceptance == Acceptance.SAFETY and self.kind != ValueKind.INF:
            raise AutomatonError("Safety is an Inf class")

    @classmethod
    def reachability(cls) -> 'ValueFunction':
        return cls(ValueKind.SUP, acceptance=Acceptance.REACHABILITY)

    @classmethod
    def safety(cls) -> 'ValueFunction':
        return cls(ValueKind.INF, acceptance=Acceptance.SAFETY)

    @classmethod
    def dsum(cls, discount) -> 'ValueFunction':
        return cls(ValueKind.DSUM, discount=Fraction(discount))

    @property
    def label(self) -> str:
        """Header text as written after `valuefn:`."""
        if self.acceptance is not None:
            return self.acceptance.value
        if self.kind == ValueKind.DSUM:
            return f'DSum {self.discount}'
        return self.kind.value

    @property
    def is_boolean(self) -> bool:
        return self.acceptance is not None

    def plain(self) -> 'ValueFunction':
        """Same function without the Reachability/Safety marker."""
        return replace(self, acceptance=None)

    def to_dict(self) -> Dict:
        return {
            'kind': self.kind.value,
            'discount': str(self.discount) if self.discount is not None else None,
            'acceptance': self.acceptance.value if self.acceptance else None,
        }

    @classmethod
    def from_dict(cls, d: Dict) -> 'ValueFunction':
        return cls(
            kind=ValueKind(d['kind']),
            discount=Fraction(d['discount']) if d.get('discount') is not None else None,
            acceptance=Acceptance(d['acceptance']) if d.get('acceptance') else None,
        )


@dataclass(frozen=True)
class Transition:
    """A transition (q, sigma, x, q')"""
    source: str
    letter: str
    weight: Fraction
    target: str

    def __str__(self) -> str:
        return f'{self.source} {self.letter} {self.weight} {self.target}'

    def to_dict(self) -> Dict:
        return {
            'source': self.source,
            'letter': self.letter,
            'weight': str(self.weight),
            'target': self.target,
        }

    @classmethod
    def from_dict(cls, d: Dict) -> 'Transition':
        return cls(
            source=d['source'],
            letter=d['letter'],
            weight=Fraction(d.get('weight', 0)),
            target=d['target'],
        )


@dataclass(frozen=True)
class Automaton:
    """A total quantitative automaton A = (alphabet, states, initial, transitions) with Val and word mode.

    Construction validates the automaton; an instance that exists is total and well formed.
    """
    alphabet: Tuple[str, ...]
    states: Tuple[str, ...]
    initial: str
    transitions: Tuple[Transition, ...]
    value_fn: ValueFunction
    mode: Mode = Mode.INFINITE

    def __post_init__(self):
        object.__setattr__(self, 'alphabet', tuple(self.alphabet))
        object.__setattr__(self, 'states', tuple(self.states))
        object.__setattr__(self, 'transitions', tuple(self.transitions))
        self._validate()

    def _validate(self) -> None:
        if not self.alphabet:
            raise AutomatonError("empty alphabet")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise AutomatonError("duplicate letter in alphabet")
        if len(set(self.states)) != len(self.states):
            raise AutomatonError("duplicate state")
        if self.initial not in self.states:
            raise AutomatonError(f"unknown initial state {self.initial!r}")
        letters = set(self.alphabet)
        states = set(self.states)
        seen = set()
        for t in self.transitions:
            if t.source not in states:
                raise AutomatonError(f"unknown state {t.source!r} in transition '{t}'")
            if t.target not in states:
                raise AutomatonError(f"unknown state {t.target!r} in transition '{t}'")
            if t.letter not in letters:
                raise AutomatonError(f"unknown letter {t.letter!r} in transition '{t}'")
            if t in seen:
                raise AutomatonError(f"duplicate transition '{t}'")
            seen.add(t)
        for q in self.states:
            for a in self.alphabet:
                if not self._out.get((q, a)):
                    raise AutomatonError(f"non-total at ({q},{a})")
        kind = self.value_fn.kind
        if kind in FINITE_ONLY and self.mode != Mode.FINITE:
            raise AutomatonError(f"{kind.value} requires mode finite")
        if kind in INFINITE_ONLY and self.mode != Mode.INFINITE:
            raise AutomatonError(f"{kind.value} requires mode infinite")
        if self.value_fn.is_boolean:
            problems = self.sink_shape_problems()
            if problems:
                raise AutomatonError(problems[0])

    @cached_property
    def _out(self) -> Dict[Tuple[str, str], Tuple[int, ...]]:
        out: Dict[Tuple[str, str], List[int]] = {}
        for i, t in enumerate(self.transitions):
            out.setdefault((t.source, t.letter), []).append(i)
        return {key: tuple(v) for key, v in out.items()}

    def successors(self, state: str, letter: str) -> Tuple[int, ...]:
        """Indices of the transitions leaving `state` on `letter`."""
        return self._out.get((state, letter), ())

    @cached_property
    def weight_set(self) -> Tuple[Fraction, ...]:
        return tuple(sorted({t.weight for t in self.transitions}))

    @cached_property
    def ranks(self) -> Dict[Fraction, int]:
        """Dense order-preserving ranks 1..k of the weights."""
        return {w: i + 1 for i, w in enumerate(self.weight_set)}

    @property
    def k(self) -> int:
        return len(self.weight_set)

    def rank(self, index: int) -> int:
        return self.ranks[self.transitions[index].weight]

    def is_deterministic(self) -> bool:
        return all(len(v) == 1 for v in self._out.values())

    def with_weights(self, mapping: Mapping[Fraction, Fraction], **changes) -> 'Automaton':
        """Copy with every weight replaced through `mapping`."""
        transitions = _unique(
            Transition(t.source, t.letter, Fraction(mapping[t.weight]), t.target) for t in self.transitions
        )
        return replace(self, transitions=transitions, **changes)

    # -- Boolean classes -------------------------------------------------

    def _is_sink(self, state: str, weight: Fraction) -> bool:
        for a in self.alphabet:
            for i in self.successors(state, a):
                t = self.transitions[i]
                if t.target != state or t.weight != weight:
                    return False
        return True

    def sink_shape_problems(self) -> List[str]:
        """Violations of the Reachability/Safety sink shape (empty when valid)."""
        acceptance = self.value_fn.acceptance
        if acceptance is None:
            return ["not a Reachability or Safety automaton"]
        problems = []
        bad_weights = [w for w in self.weight_set if w not in (0, 1)]
        if bad_weights:
            problems.append(f"{acceptance.value} automaton has weights outside {{0,1}}: {bad_weights[0]}")
        final = Fraction(1) if acceptance == Acceptance.REACHABILITY else Fraction(0)
        for t in self.transitions:
            if t.weight == final and not self._is_sink(t.target, final):
                problems.append(
                    f"transition '{t}' must lead to a sink whose self-loops all have weight {final}"
                )
        return problems

    @cached_property
    def sink_states(self) -> frozenset:
        """Target sinks (Reachability) or rejecting sinks (Safety)."""
        acceptance = self.value_fn.acceptance
        final = Fraction(1) if acceptance == Acceptance.REACHABILITY else Fraction(0)
        return frozenset(q for q in self.states if self._is_sink(q, final))

    def to_dict(self) -> Dict:
        return {
            'alphabet': list(self.alphabet),
            'states': list(self.states),
            'initial': self.initial,
            'transitions': [t.to_dict() for t in self.transitions],
            'value_fn': self.value_fn.to_dict(),
            'mode': self.mode.value,
        }

    @classmethod
    def from_dict(cls, d: Dict) -> 'Automaton':
        return cls(
            alphabet=tuple(d['alphabet']),
            states=tuple(d['states']),
            initial=d['initial'],
            transitions=tuple(Transition.from_dict(t) for t in d.get('transitions', [])),
            value_fn=ValueFunction.from_dict(d['value_fn']),
            mode=Mode(d.get('mode', Mode.INFINITE.value)),
        )


def _unique(transitions: Iterable[Transition]) -> Tuple[Transition, ...]:
    seen = {}
    for t in transitions:
        seen.setdefault(t, None)
    return tuple(seen)


@dataclass(frozen=True)
class LassoWord:
    """Ultimately periodic word u(v)^omega, or the finite word u when the cycle is empty"""
    prefix: Tuple[str, ...]
    cycle: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'prefix', tuple(self.prefix))
        object.__setattr__(self, 'cycle', tuple(self.cycle))

    @property
    def is_finite(self) -> bool:
        return not self.cycle

    @property
    def length(self) -> int:
        """Number of lasso positions, |u| + |v|."""
        return len(self.prefix) + len(self.cycle)

    def letter(self, position: int) -> str:
        if position < len(self.prefix):
            return self.prefix[position]
        return self.cycle[position - len(self.prefix)]

    def next_position(self, position: int) -> int:
        """Lasso position after reading the letter at `position`."""
        nxt = position + 1
        if self.cycle and nxt == self.length:
            return len(self.prefix)
        return nxt

    def take(self, n: int) -> Tuple[str, ...]:
        """First n letters of the word."""
        out = []
        pos = 0
        while len(out) < n:
            if pos >= self.length:
                break
            out.append(self.letter(pos))
            pos = self.next_position(pos)
        return tuple(out)

    def check_mode(self, mode: Mode) -> None:
        if mode == Mode.INFINITE and self.is_finite:
            raise WordError("empty cycle on infinite-mode automaton")
        if mode == Mode.FINITE and not self.is_finite:
            raise WordError("lasso word given to a finite-mode automaton")

    def __str__(self) -> str:
        sep = '' if all(len(s) == 1 for s in self.prefix + self.cycle) else '.'
        text = sep.join(self.prefix)
        if self.cycle:
            text += '(' + sep.join(self.cycle) + ')'
        return text

    def to_dict(self) -> Dict:
        return {'prefix': list(self.prefix), 'cycle': list(self.cycle)}

    @classmethod
    def from_dict(cls, d: Dict) -> 'LassoWord':
        return cls(prefix=tuple(d.get('prefix', [])), cycle=tuple(d.get('cycle', [])))


@dataclass(frozen=True)
class Run:
    """A run as a transition sequence: finite, or prefix followed by a repeated cycle"""
    prefix: Tuple[Transition, ...]
    cycle: Tuple[Transition, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'prefix', tuple(self.prefix))
        object.__setattr__(self, 'cycle', tuple(self.cycle))

    def weights(self) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
        return tuple(t.weight for t in self.prefix), tuple(t.weight for t in self.cycle)

    def problems(self, automaton: Automaton) -> List[str]:
        """Compatibility violations against `automaton` (empty when the run is valid)."""
        problems = []
        seq = self.prefix + self.cycle
        if seq and seq[0].source != automaton.initial:
            problems.append(f"run starts at {seq[0].source}, not {automaton.initial}")
        known = set(automaton.transitions)
        for t in seq:
            if t not in known:
                problems.append(f"'{t}' is not a transition")
        for a, b in zip(seq, seq[1:]):
            if a.target != b.source:
                problems.append(f"'{a}' does not continue with '{b}'")
        if self.cycle and self.cycle[-1].target != self.cycle[0].source:
            problems.append("cycle does not close")
        return problems

    def to_dict(self) -> Dict:
        return {
            'prefix': [t.to_dict() for t in self.prefix],
            'cycle': [t.to_dict() for t in self.cycle],
        }
