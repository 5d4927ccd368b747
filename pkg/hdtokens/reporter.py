"""
Verdict, arena and check-suite output.
"""

import csv
import json
from typing import Dict, List, Optional

from graphviz import Digraph

from .arena import ObjectiveKind, SolveResult
from .shared_config import INITIAL_PENWIDTH, OWNER_STYLE, WINNING_FILL
from .tokengames import TokenGameArena
from .utils import format_seconds, truncate_string


def verdict_line(verdict) -> str:
    """One-line verdict as printed by `decide`."""
    status = 'HD' if verdict.is_hd else 'NOT-HD'
    return f"{status} route={verdict.route} size={verdict.game_size}"


def verdict_json(verdict, include_resolver: bool = False) -> str:
    return json.dumps(verdict.to_dict(include_resolver), indent=2)


def arena_json(game: TokenGameArena) -> str:
    return json.dumps(game.to_dict(), indent=2)


def _move_label(game: TokenGameArena, index: int) -> str:
    move = game.arena.moves[index]
    info = game.infos[index]
    if info.kind == 'letter':
        parts = [info.letter]
    elif info.kind in ('eve', 'adam'):
        parts = [str(game.automaton.transitions[info.transition])]
    else:
        parts = [info.kind]
    if game.arena.objective.kind in (ObjectiveKind.COBUCHI, ObjectiveKind.PARITY):
        parts.append(f"p={move.priority}")
    if move.weight is not None:
        parts.append(f"w={move.weight} d={move.discount}")
    return ' '.join(parts)


def arena_dot(game: TokenGameArena, result: Optional[SolveResult] = None) -> str:
    """DOT text of a token game; winning regions are filled when `result` is given."""
    dot = Digraph(name=game.builder, graph_attr={'rankdir': 'LR'})
    unsafe = game.arena.objective.positions
    for p, owner in enumerate(game.arena.owners):
        style = OWNER_STYLE[str(owner)]
        attributes = {'shape': style['shape'], 'color': style['color']}
        if p == game.initial:
            attributes['penwidth'] = INITIAL_PENWIDTH
        if result is not None:
            attributes['style'] = 'filled'
            attributes['fillcolor'] = WINNING_FILL[str(result.winner(p))]
        if p in unsafe:
            attributes['peripheries'] = '2'
        dot.node(str(p), label=game.decode(p).describe(), _attributes=attributes)
    for i, move in enumerate(game.arena.moves):
        dot.edge(str(move.source), str(move.target), label=_move_label(game, i))
    return dot.source


class SuiteReporter:
    """Summarises check-suite results and exports them."""

    def generate_report(self, results: List[Dict]) -> Dict:
        passed = [r for r in results if r['passed']]
        return {
            'suites': len(results),
            'passed': len(passed),
            'failed': len(results) - len(passed),
            'ok': len(passed) == len(results),
            'seconds': sum(r['seconds'] for r in results),
            'results': results,
        }

    def format_table(self, report: Dict) -> str:
        lines = [f"{'suite':<10} {'status':<6} {'checked':>9} {'time':>9}  first failure"]
        lines.append('-' * 70)
        for r in report['results']:
            status = 'PASS' if r['passed'] else 'FAIL'
            first = truncate_string(r['failures'][0], 32) if r['failures'] else ''
            lines.append(
                f"{r['name']:<10} {status:<6} {r['total']:>9} {format_seconds(r['seconds']):>9}  {first}"
            )
        lines.append('-' * 70)
        lines.append(f"{report['passed']}/{report['suites']} suites passed in {format_seconds(report['seconds'])}")
        return '\n'.join(lines)

    def export_txt(self, report: Dict, filepath: str):
        with open(filepath, 'w', encoding='utf-8') as f:
            f.write("hdtokens check report\n")
            f.write("=" * 60 + "\n\n")
            f.write(self.format_table(report) + "\n")
            for r in report['results']:
                if r['failures']:
                    f.write(f"\n--- {r['name']} failures ---\n")
                    for failure in r['failures']:
                        f.write(f"  {failure}\n")

    def export_csv(self, report: Dict, filepath: str):
        with open(filepath, 'w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f)
            writer.writerow(['suite', 'passed', 'total', 'failures', 'seconds'])
            for r in report['results']:
                writer.writerow([r['name'], r['passed'], r['total'], len(r['failures']), f"{r['seconds']:.3f}"])

    def export_json(self, report: Dict, filepath: str):
        with open(filepath, 'w', encoding='utf-8') as f:
            json.dump(report, f, indent=2)
