"""
Parser and serializer for the `.hdq` automaton format and `u(v)` word literals
"""

import re
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import AutomatonError, HdqSyntaxError, WordError
from .models import (
    Acceptance, Automaton, LassoWord, Mode, Transition, ValueFunction, ValueKind,
)

_RATIONAL_RE = re.compile(r'^-?\d+(/\d+)?$')
_HEADER_RE = re.compile(r'^([A-Za-z_]+)\s*:(.*)$')
_HEADER_KEYS = ('valuefn', 'mode', 'alphabet', 'states', 'initial')


def parse_weight(text: str) -> Fraction:
    """Parse an integer or `p/q` rational.

    Raises:
        ValueError: if the text is not an integer or a fraction with nonzero denominator.
    """
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"bad weight {text!r}")
    if text.endswith('/0'):
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(text)


class HDQParser:
    """Parser for `.hdq` automaton files.

    Supports:
    - header lines `valuefn:`, `mode:`, `alphabet:`, `initial:` and the optional `states:`
    - transition lines `<src> <letter> <weight> <dst>`
    - `#` comments and blank lines
    """

    @staticmethod
    def parse(text: Union[bytes, str]) -> Automaton:
        """Parse `.hdq` text (bytes are decoded as UTF-8) into a validated Automaton."""
        content = HDQParser._clean_content(text)
        headers: Dict[str, Tuple[str, int]] = {}
        rows: List[Tuple[List[Tuple[str, int]], int]] = []

        for lineno, raw in enumerate(content.split('\n'), start=1):
            line = raw.split('#', 1)[0].rstrip()
            if not line.strip():
                continue
            match = _HEADER_RE.match(line.strip())
            # four-field lines are transitions unless they open with a known header
            if match and (match.group(1).lower() in _HEADER_KEYS or len(line.split()) != 4):
                key = match.group(1).lower()
                if key not in _HEADER_KEYS:
                    raise HdqSyntaxError(f"unknown header {key!r}", lineno, line.find(match.group(1)) + 1)
                if key in headers:
                    raise HdqSyntaxError(f"duplicate header {key!r}", lineno, 1)
                headers[key] = (match.group(2).strip(), lineno)
                continue
            rows.append((HDQParser._tokens(line), lineno))

        for key in ('valuefn', 'alphabet', 'initial'):
            if key not in headers:
                raise HdqSyntaxError(f"missing header '{key}:'")

        value_fn = HDQParser._parse_value_fn(*headers['valuefn'])
        mode = HDQParser._parse_mode(headers.get('mode'), value_fn)
        alphabet = tuple(headers['alphabet'][0].split())
        initial = headers['initial'][0]
        if not initial or len(initial.split()) != 1:
            raise HdqSyntaxError("initial state must be a single name", headers['initial'][1], 1)

        declared: Optional[List[str]] = None
        if 'states' in headers:
            declared = headers['states'][0].split()

        letters = set(alphabet)
        states: List[str] = list(declared) if declared is not None else [initial]
        known = set(states)
        transitions = []
        for tokens, lineno in rows:
            if len(tokens) != 4:
                col = tokens[min(len(tokens), 4) - 1][1] if tokens else 1
                raise HdqSyntaxError(
                    f"expected '<src> <letter> <weight> <dst>', got {len(tokens)} fields", lineno, col
                )
            (src, _), (letter, _), (weight_text, weight_col), (dst, _) = tokens
            if letter not in letters:
                raise AutomatonError(f"line {lineno}: unknown letter {letter!r}")
            try:
                weight = parse_weight(weight_text)
            except ValueError as exc:
                raise HdqSyntaxError(str(exc), lineno, weight_col) from None
            for state in (src, dst):
                if state not in known:
                    if declared is not None:
                        raise AutomatonError(f"line {lineno}: unknown state {state!r}")
                    known.add(state)
                    states.append(state)
            transitions.append(Transition(src, letter, weight, dst))

        return Automaton(
            alphabet=alphabet,
            states=tuple(states),
            initial=initial,
            transitions=tuple(transitions),
            value_fn=value_fn,
            mode=mode,
        )

    @staticmethod
    def parse_file(filepath: str) -> Automaton:
        with open(filepath, 'rb') as f:
            return HDQParser.parse(f.read())

    @staticmethod
    def serialize(automaton: Automaton) -> str:
        """Render an automaton back to `.hdq` text; parsing the result gives an equal Automaton."""
        lines = [
            f'valuefn: {automaton.value_fn.label}',
            f'mode: {automaton.mode.value}',
            f'alphabet: {" ".join(automaton.alphabet)}',
            f'states: {" ".join(automaton.states)}',
            f'initial: {automaton.initial}',
        ]
        lines.extend(str(t) for t in automaton.transitions)
        return '\n'.join(lines) + '\n'

    @staticmethod
    def _clean_content(text: Union[bytes, str]) -> str:
        if isinstance(text, bytes):
            try:
                text = text.decode('utf-8')
            except UnicodeDecodeError as exc:
                raise HdqSyntaxError(f"not UTF-8: {exc.reason}") from None
        return text.lstrip('\ufeff').replace('\r\n', '\n').replace('\r', '\n')

    @staticmethod
    def _tokens(line: str) -> List[Tuple[str, int]]:
        return [(m.group(0), m.start() + 1) for m in re.finditer(r'\S+', line)]

    @staticmethod
    def _parse_value_fn(text: str, lineno: int) -> ValueFunction:
        parts = text.split()
        if not parts:
            raise HdqSyntaxError("empty value function", lineno, 1)
        name = parts[0]
        if name == Acceptance.REACHABILITY.value:
            vf = ValueFunction.reachability()
        elif name == Acceptance.SAFETY.value:
            vf = ValueFunction.safety()
        else:
            try:
                kind = ValueKind(name)
            except ValueError:
                raise HdqSyntaxError(f"unknown value function {name!r}", lineno, 1) from None
            if kind == ValueKind.DSUM:
                if len(parts) != 2:
                    raise AutomatonError(f"line {lineno}: DSum needs a discount 'DSum p/q'")
                try:
                    discount = parse_weight(parts[1])
                except ValueError:
                    raise AutomatonError(f"line {lineno}: bad discount {parts[1]!r}") from None
                return ValueFunction.dsum(discount)
            vf = ValueFunction(kind)
        if len(parts) != 1:
            raise HdqSyntaxError(f"unexpected text after {name!r}", lineno, len(name) + 2)
        return vf

    @staticmethod
    def _parse_mode(entry: Optional[Tuple[str, int]], value_fn: ValueFunction) -> Mode:
        if entry is None:
            return Mode.FINITE if value_fn.kind in (ValueKind.SUM, ValueKind.AVG) else Mode.INFINITE
        text, lineno = entry
        try:
            return Mode(text)
        except ValueError:
            raise HdqSyntaxError(f"unknown mode {text!r}", lineno, 1) from None


def parse_automaton(text: Union[bytes, str]) -> Automaton:
    return HDQParser.parse(text)


def serialize_automaton(automaton: Automaton) -> str:
    return HDQParser.serialize(automaton)


def parse_word(text: str, alphabet: Optional[Sequence[str]] = None) -> LassoWord:
    """Parse a word literal `u(v)`, `u()` or `u`.

    Symbols are single characters unless the literal contains `.`, in which case `.` separates
    multi-character symbols (`foo.bar(baz)`).
    """
    text = ''.join(text.split())
    if text.count('(') > 1 or text.count(')') > 1:
        raise WordError(f"malformed word literal {text!r}")
    if '(' in text:
        if not text.endswith(')'):
            raise WordError(f"malformed word literal {text!r}: cycle must close the word")
        head, cycle_text = text[:-1].split('(', 1)
    elif ')' in text:
        raise WordError(f"malformed word literal {text!r}")
    else:
        head, cycle_text = text, ''
    dotted = '.' in text
    prefix = _symbols(head, dotted)
    cycle = _symbols(cycle_text, dotted)
    if alphabet is not None:
        letters = set(alphabet)
        for symbol in prefix + cycle:
            if symbol not in letters:
                raise WordError(f"unknown letter {symbol!r} in word {text!r}")
    return LassoWord(prefix, cycle)


def _symbols(text: str, dotted: bool) -> Tuple[str, ...]:
    if dotted:
        return tuple(s for s in text.split('.') if s)
    return tuple(text)


def parse_value_function(text: str) -> ValueFunction:
    """Parse a `valuefn:` header value such as `Sup`, `Safety` or `DSum 1/2`."""
    return HDQParser._parse_value_fn(text, 0)
