"""Weighted automata over a commutative alphabet of counter variables.

An automaton holds nonnegative rational weights on edges (each optionally
labeled with one alphabet variable), on initial states, and on final states.
Its behavior is the formal power series mapping each valuation (one natural
number per variable) to the total weight of accepting runs whose per-variable
label counts equal that valuation. The automaton is a probability generating
automaton (PGA) when the total mass of that series is at most one.

Structures are immutable after construction; all operations are pure
functions returning fresh automata.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import InvalidAutomaton, InvalidWeight

Symbol = Optional[str]  # None marks an unlabeled (epsilon) edge


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    weight: Fraction
    symbol: Symbol = None


@dataclass(frozen=True)
class Pga:
    """States are 0..num_states-1; only nonzero weights are stored.

    Invariants (enforced by :func:`make_pga`): every stored edge weight is
    strictly positive, initial/final weights are strictly positive, and there
    is at most one edge per (src, dst, symbol) triple.
    """

    alphabet: tuple[str, ...]
    num_states: int
    edges: tuple[Edge, ...]
    initial: dict[int, Fraction] = field(default_factory=dict)
    final: dict[int, Fraction] = field(default_factory=dict)

    @property
    def size(self) -> int:
        """Number of stored (nonzero-weight) transitions."""
        return len(self.edges)

    def symbol_count(self, var: str) -> int:
        """Number of stored transitions labeled with `var`."""
        return sum(1 for e in self.edges if e.symbol == var)

    def edges_from(self, state: int) -> list[Edge]:
        return [e for e in self.edges if e.src == state]


def _as_fraction(value: Union[int, Fraction], what: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise InvalidWeight(f"{what} must be a rational, got {type(value).__name__}")
    f = Fraction(value)
    if f < 0:
        raise InvalidWeight(f"{what} must be nonnegative, got {f}")
    return f


def make_pga(
    alphabet: Sequence[str],
    num_states: int,
    edges: Iterable[Union[Edge, tuple]],
    initial: Mapping[int, Union[int, Fraction]],
    final: Mapping[int, Union[int, Fraction]],
) -> Pga:
    """Canonicalizing constructor.

    Edges may be Edge instances or (src, dst, weight, symbol) tuples; symbol
    may be omitted for unlabeled edges. Duplicate (src, dst, symbol) triples
    are merged by summing their weights, and zero weights are dropped.
    """
    alpha = tuple(alphabet)
    if len(set(alpha)) != len(alpha):
        raise InvalidAutomaton(f"duplicate variable in alphabet {alpha}")
    for v in alpha:
        if not v or not isinstance(v, str):
            raise InvalidAutomaton(f"bad alphabet variable {v!r}")
    if num_states < 1:
        raise InvalidAutomaton("an automaton needs at least one state")

    merged: dict[tuple[int, int, Symbol], Fraction] = {}
    for item in edges:
        if isinstance(item, Edge):
            src, dst, weight, symbol = item.src, item.dst, item.weight, item.symbol
        else:
            if len(item) == 3:
                src, dst, weight = item
                symbol = None
            else:
                src, dst, weight, symbol = item
        if not (0 <= src < num_states and 0 <= dst < num_states):
            raise InvalidAutomaton(f"edge ({src},{dst}) out of range for {num_states} states")
        if symbol is not None and symbol not in alpha:
            raise InvalidAutomaton(f"edge symbol {symbol!r} not in alphabet {alpha}")
        w = _as_fraction(weight, "edge weight")
        key = (src, dst, symbol)
        merged[key] = merged.get(key, Fraction(0)) + w

    cleaned = tuple(
        Edge(src, dst, w, sym)
        for (src, dst, sym), w in sorted(
            merged.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2] or "")
        )
        if w != 0
    )

    def clean_weights(m: Mapping[int, Union[int, Fraction]], what: str) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for q in sorted(m):
            if not (0 <= q < num_states):
                raise InvalidAutomaton(f"{what} state {q} out of range")
            w = _as_fraction(m[q], f"{what} weight")
            if w != 0:
                out[q] = w
        return out

    return Pga(
        alphabet=alpha,
        num_states=num_states,
        edges=cleaned,
        initial=clean_weights(initial, "initial"),
        final=clean_weights(final, "final"),
    )


def unit_pga(alphabet: Sequence[str]) -> Pga:
    """One state, initial and final weight 1: the point mass at the all-zero
    valuation. This is the default prior."""
    return make_pga(alphabet, 1, [], {0: 1}, {0: 1})


def rename_variable(a: Pga, old: str, new: str) -> Pga:
    """Rename one alphabet variable (used to re-letter custom distributions)."""
    if old not in a.alphabet:
        raise InvalidAutomaton(f"{old!r} not in alphabet {a.alphabet}")
    if new in a.alphabet and new != old:
        raise InvalidAutomaton(f"{new!r} already in alphabet {a.alphabet}")
    alpha = tuple(new if v == old else v for v in a.alphabet)
    edges = [
        Edge(e.src, e.dst, e.weight, new if e.symbol == old else e.symbol) for e in a.edges
    ]
    return make_pga(alpha, a.num_states, edges, a.initial, a.final)


def extend_alphabet(a: Pga, alphabet: Sequence[str]) -> Pga:
    """Re-host the automaton on a larger alphabet (no edges are touched)."""
    missing = [v for v in a.alphabet if v not in alphabet]
    if missing:
        raise InvalidAutomaton(f"target alphabet drops variables {missing}")
    return make_pga(alphabet, a.num_states, a.edges, a.initial, a.final)


def trim(a: Pga) -> Pga:
    """Restrict to useful states: reachable from a positive-initial state and
    co-reachable to a positive-final state. A behaviorally-zero automaton
    trims to a single initial state with final weight zero."""
    fwd: dict[int, list[int]] = {}
    bwd: dict[int, list[int]] = {}
    for e in a.edges:
        fwd.setdefault(e.src, []).append(e.dst)
        bwd.setdefault(e.dst, []).append(e.src)

    def closure(seed: Iterable[int], adj: dict[int, list[int]]) -> set[int]:
        seen = set(seed)
        stack = list(seen)
        while stack:
            q = stack.pop()
            for t in adj.get(q, ()):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return seen

    reach = closure(a.initial, fwd)
    coreach = closure(a.final, bwd)
    useful = sorted(reach & coreach)
    if not useful:
        return make_pga(a.alphabet, 1, [], {0: 1}, {})
    index = {q: i for i, q in enumerate(useful)}
    edges = [
        Edge(index[e.src], index[e.dst], e.weight, e.symbol)
        for e in a.edges
        if e.src in index and e.dst in index
    ]
    initial = {index[q]: w for q, w in a.initial.items() if q in index}
    final = {index[q]: w for q, w in a.final.items() if q in index}
    return make_pga(a.alphabet, len(useful), edges, initial, final)


@dataclass(frozen=True)
class WeightedPath:
    """An accepting run: initial weight * edge weights * final weight."""

    states: tuple[int, ...]
    symbols: tuple[Symbol, ...]
    weight: Fraction
    counts: tuple[int, ...]  # aligned with the automaton's alphabet


def enumerate_paths(a: Pga, max_len: int) -> list[WeightedPath]:
    """All accepting paths with at most `max_len` transitions.

    Exponential in general; meant for desk-scale checking and for exact
    support extraction from acyclic automata (where max_len = num_states - 1
    covers everything).
    """
    idx = {v: i for i, v in enumerate(a.alphabet)}
    out: list[WeightedPath] = []
    by_src: dict[int, list[Edge]] = {}
    for e in a.edges:
        by_src.setdefault(e.src, []).append(e)

    def walk(state: int, weight: Fraction, states: tuple, symbols: tuple, counts: tuple) -> None:
        fw = a.final.get(state)
        if fw:
            out.append(WeightedPath(states, symbols, weight * fw, counts))
        if len(symbols) >= max_len:
            return
        for e in by_src.get(state, ()):
            nc = counts
            if e.symbol is not None:
                i = idx[e.symbol]
                nc = counts[:i] + (counts[i] + 1,) + counts[i + 1 :]
            walk(e.dst, weight * e.weight, states + (e.dst,), symbols + (e.symbol,), nc)

    zero = (0,) * len(a.alphabet)
    for q in sorted(a.initial):
        walk(q, a.initial[q], (q,), (), zero)
    return out


def is_acyclic(a: Pga) -> bool:
    """True when the edge graph has no directed cycle."""
    adj: dict[int, list[int]] = {}
    for e in a.edges:
        adj.setdefault(e.src, []).append(e.dst)
    color = [0] * a.num_states  # 0 new, 1 active, 2 done
    for root in range(a.num_states):
        if color[root]:
            continue
        stack: list[tuple[int, int]] = [(root, 0)]
        color[root] = 1
        while stack:
            node, i = stack[-1]
            succ = adj.get(node, ())
            if i < len(succ):
                stack[-1] = (node, i + 1)
                t = succ[i]
                if color[t] == 1:
                    return False
                if color[t] == 0:
                    color[t] = 1
                    stack.append((t, 0))
            else:
                color[node] = 2
                stack.pop()
    return True
