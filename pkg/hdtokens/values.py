"""
Run and word values.

Word values are computed on the product of the automaton with the lasso: nodes are
(state, lasso position), edges are transitions reading the letter at that position.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import networkx as nx

from .arena import ArenaBuilder, Edge, Objective, Player, discounted_lasso_value
from .errors import EvaluationError
from .models import Automaton, LassoWord, Run, Transition, ValueFunction, ValueKind
from .settings import DEFAULT_LIMITS, SolverLimits
from .solvers import discounted_values

log = logging.getLogger("hdtokens.values")

Node = Tuple[str, int]


def evaluate_run(run: Run, vf: ValueFunction) -> Fraction:
    """Exact value of a finite or lasso-shaped run under `vf`."""
    head, loop = run.weights()
    kind = vf.kind
    if kind in (ValueKind.LIMSUP, ValueKind.LIMINF):
        if not loop:
            raise EvaluationError(f"{kind.value} needs a lasso-shaped run")
        return max(loop) if kind == ValueKind.LIMSUP else min(loop)
    if kind in (ValueKind.SUM, ValueKind.AVG):
        if loop:
            raise EvaluationError(f"{kind.value} is defined on finite runs only")
        if kind == ValueKind.SUM:
            return sum(head, Fraction(0))
        if not head:
            raise EvaluationError("Avg of an empty run")
        return Fraction(sum(head, Fraction(0)), len(head))
    if kind == ValueKind.DSUM:
        lam = vf.discount
        return discounted_lasso_value([(w, lam) for w in head], [(w, lam) for w in loop])
    weights = head + loop
    if not weights:
        raise EvaluationError(f"{kind.value} of an empty run")
    return max(weights) if kind == ValueKind.SUP else min(weights)


def product_graph(a: Automaton, w: LassoWord) -> nx.MultiDiGraph:
    """Reachable product of `a` with `w`; edge keys are transition indices.

    graph['start'] is the initial node, graph['terminal'] the end-of-word nodes (finite words).
    """
    w.check_mode(a.mode)
    start = (a.initial, 0)
    g = nx.MultiDiGraph(start=start, terminal=set())
    g.add_node(start)
    stack = [start]
    end = len(w.prefix)
    while stack:
        node = stack.pop()
        state, pos = node
        if w.is_finite and pos == end:
            g.graph['terminal'].add(node)
            continue
        letter = w.letter(pos)
        nxt = w.next_position(pos)
        for i in a.successors(state, letter):
            t = a.transitions[i]
            succ = (t.target, nxt)
            if succ not in g:
                g.add_node(succ)
                stack.append(succ)
            g.add_edge(node, succ, key=i, weight=t.weight)
    return g


def _threshold_graph(g: nx.MultiDiGraph, x: Fraction) -> nx.DiGraph:
    sub = nx.DiGraph()
    sub.add_nodes_from(g.nodes)
    sub.add_edges_from((u, v) for u, v, d in g.edges(data=True) if d['weight'] >= x)
    return sub


def _cyclic_nodes(g) -> set:
    nodes = set()
    for scc in nx.strongly_connected_components(g):
        if len(scc) > 1:
            nodes |= scc
        else:
            (v,) = scc
            if g.has_edge(v, v):
                nodes.add(v)
    return nodes


def _inf_threshold(g: nx.MultiDiGraph, finite: bool) -> Tuple[Fraction, nx.DiGraph]:
    """Largest weight x such that the edges of weight >= x still carry a whole run."""
    start = g.graph['start']
    for x in sorted({d['weight'] for _, _, d in g.edges(data=True)}, reverse=True):
        sub = _threshold_graph(g, x)
        reach = nx.descendants(sub, start) | {start}
        if finite:
            if reach & g.graph['terminal']:
                return x, sub
        elif reach & _cyclic_nodes(sub):
            return x, sub
    raise EvaluationError("word has no run")


def _liminf_threshold(g: nx.MultiDiGraph) -> Tuple[Fraction, nx.DiGraph]:
    for x in sorted({d['weight'] for _, _, d in g.edges(data=True)}, reverse=True):
        sub = _threshold_graph(g, x)
        if _cyclic_nodes(sub):
            return x, sub
    raise EvaluationError("word has no run")


def _limsup_edge(g: nx.MultiDiGraph) -> Tuple[Node, Node, int]:
    component = {}
    for i, scc in enumerate(nx.strongly_connected_components(g)):
        for v in scc:
            component[v] = i
    best = None
    for u, v, key, d in g.edges(keys=True, data=True):
        if component[u] == component[v] and (best is None or d['weight'] > best[3]):
            best = (u, v, key, d['weight'])
    return best[:3]


def _sum_table(a: Automaton, g: nx.MultiDiGraph) -> Dict[Node, Tuple[Fraction, Optional[Tuple[Node, int]]]]:
    """Best weight sum reaching each node, with the parent edge realising it."""
    best: Dict[Node, Tuple[Fraction, Optional[Tuple[Node, int]]]] = {g.graph['start']: (Fraction(0), None)}
    for node in sorted(g.nodes, key=lambda n: n[1]):
        if node not in best:
            continue
        total = best[node][0]
        for _, succ, key, d in g.out_edges(node, keys=True, data=True):
            candidate = total + d['weight']
            if succ not in best or candidate > best[succ][0]:
                best[succ] = (candidate, (node, key))
    return best


def _discounted_product(a: Automaton, g: nx.MultiDiGraph):
    lam = a.value_fn.discount
    builder = ArenaBuilder()
    terminal = g.graph['terminal']

    def expand(node):
        if node in terminal:
            yield Edge(node, weight=Fraction(0), discount=lam, info=None)
            return
        for _, succ, key, d in g.out_edges(node, keys=True, data=True):
            yield Edge(succ, weight=d['weight'], discount=lam, info=key)

    start = builder.explore(g.graph['start'], lambda node: Player.EVE, expand)
    arena = builder.build(start, Objective.multi_discount())
    return builder, arena


def automaton_value(a: Automaton, w: LassoWord, limits: SolverLimits = DEFAULT_LIMITS) -> Fraction:
    """A(w): the supremum over runs of `a` on `w` of the run value."""
    g = product_graph(a, w)
    kind = a.value_fn.kind
    finite = w.is_finite
    if g.number_of_edges() == 0 and kind not in (ValueKind.SUM, ValueKind.DSUM):
        raise EvaluationError(f"{kind.value} of the empty word")
    if kind == ValueKind.SUP:
        return max(d['weight'] for _, _, d in g.edges(data=True))
    if kind == ValueKind.INF:
        return _inf_threshold(g, finite)[0]
    if kind == ValueKind.LIMSUP:
        u, v, key = _limsup_edge(g)
        return g.edges[u, v, key]['weight']
    if kind == ValueKind.LIMINF:
        return _liminf_threshold(g)[0]
    if kind == ValueKind.DSUM:
        builder, arena = _discounted_product(a, g)
        values, _, _ = discounted_values(arena, limits)
        return values[arena.initial]
    table = _sum_table(a, g)
    total = max(table[n][0] for n in g.graph['terminal'])
    if kind == ValueKind.SUM:
        return total
    return Fraction(total, len(w.prefix))


# -- witnesses ---------------------------------------------------------------

def _best_key(g: nx.MultiDiGraph, u: Node, v: Node) -> int:
    return max(g[u][v], key=lambda k: g[u][v][k]['weight'])


def _along(a: Automaton, g: nx.MultiDiGraph, nodes: List[Node]) -> List[Transition]:
    return [a.transitions[_best_key(g, u, v)] for u, v in zip(nodes, nodes[1:])]


def _close(a: Automaton, g: nx.MultiDiGraph, trail: List[Transition], node: Node) -> Run:
    """Extend `trail` from `node` by always taking the first edge, until a node repeats."""
    seen: Dict[Node, int] = {}
    path: List[Transition] = []
    while node not in seen and node not in g.graph['terminal']:
        seen[node] = len(path)
        _, succ, key = next(iter(g.out_edges(node, keys=True)))
        path.append(a.transitions[key])
        node = succ
    if node in g.graph['terminal']:
        return Run(tuple(trail + path))
    cut = seen[node]
    return Run(tuple(trail + path[:cut]), tuple(path[cut:]))


def optimal_run(a: Automaton, w: LassoWord, limits: SolverLimits = DEFAULT_LIMITS) -> Run:
    """A run of `a` on `w` whose value equals automaton_value(a, w)."""
    g = product_graph(a, w)
    start = g.graph['start']
    kind = a.value_fn.kind
    if kind == ValueKind.SUP or (kind == ValueKind.LIMSUP):
        if kind == ValueKind.SUP:
            u, v, key, _ = max(g.edges(keys=True, data='weight'), key=lambda e: e[3])
        else:
            u, v, key = _limsup_edge(g)
        lead = _along(a, g, nx.shortest_path(g, start, u))
        if kind == ValueKind.SUP:
            return _close(a, g, lead + [a.transitions[key]], v)
        back = _along(a, g, nx.shortest_path(g, v, u)) if v != u else []
        return Run(tuple(lead), tuple([a.transitions[key]] + back))
    if kind in (ValueKind.INF, ValueKind.LIMINF):
        if kind == ValueKind.INF:
            x, sub = _inf_threshold(g, w.is_finite)
        else:
            x, sub = _liminf_threshold(g)
        if w.is_finite:
            end = next(n for n in g.graph['terminal'] if nx.has_path(sub, start, n))
            return Run(tuple(_along(a, g, nx.shortest_path(sub, start, end))))
        cyclic = _cyclic_nodes(sub)
        if kind == ValueKind.INF:
            cyclic &= nx.descendants(sub, start) | {start}
            anchor = min(cyclic, key=lambda n: nx.shortest_path_length(sub, start, n))
            lead = _along(a, g, nx.shortest_path(sub, start, anchor))
        else:
            anchor = min(cyclic, key=lambda n: nx.shortest_path_length(g, start, n))
            lead = _along(a, g, nx.shortest_path(g, start, anchor))
        cycle_edges = nx.find_cycle(sub, anchor)
        nodes = [cycle_edges[0][0]] + [e[1] for e in cycle_edges]
        if nodes[0] != anchor:
            lead += _along(a, g, nx.shortest_path(sub, anchor, nodes[0]))
        return Run(tuple(lead), tuple(_along(a, g, nodes)))
    if kind == ValueKind.DSUM:
        builder, arena = _discounted_product(a, g)
        _, eve, _ = discounted_values(arena, limits)
        order: Dict[int, int] = {}
        path: List[Transition] = []
        p = arena.initial
        while p not in order:
            move = eve[p]
            key = builder.infos[move]
            if key is None:
                return Run(tuple(path))
            order[p] = len(path)
            path.append(a.transitions[key])
            p = arena.moves[move].target
        cut = order[p]
        return Run(tuple(path[:cut]), tuple(path[cut:]))
    table = _sum_table(a, g)
    node = max(g.graph['terminal'], key=lambda n: table[n][0])
    trail: List[Transition] = []
    while table[node][1] is not None:
        parent, key = table[node][1]
        trail.append(a.transitions[key])
        node = parent
    return Run(tuple(reversed(trail)))


def normalize_weights(a: Automaton) -> Tuple[Automaton, Dict[Fraction, int]]:
    """Replace weights by dense ranks 1..k.

    The Reachability/Safety marker is dropped since ranks leave {0,1}.
    """
    ranks = dict(a.ranks)
    mapping = {w: Fraction(r) for w, r in ranks.items()}
    ranked = a.with_weights(mapping, value_fn=a.value_fn.plain())
    return ranked, ranks
