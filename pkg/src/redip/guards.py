"""Guards over counter valuations, and the complete DFAs that recognize them.

A guard constrains a valuation. Core connectives are threshold atoms
(var < bound), congruence atoms (var % modulus == residue, modulus > residue),
conjunction, and negation; every surface comparison desugars to these. Each
guard compiles to a complete DFA over the alphabet whose language contains
exactly the words whose per-variable letter counts satisfy the guard, so the
language is closed under permutation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .errors import GuardConstraintError, InvalidAutomaton, UnknownVariable


@dataclass(frozen=True)
class LessThan:
    var: str
    bound: int  # satisfied iff valuation(var) < bound

    def __post_init__(self) -> None:
        if not self.var:
            raise GuardConstraintError("empty variable name")
        if self.bound < 0:
            raise GuardConstraintError(f"negative bound {self.bound}")


@dataclass(frozen=True)
class ModEq:
    var: str
    modulus: int
    residue: int  # satisfied iff valuation(var) % modulus == residue

    def __post_init__(self) -> None:
        if not self.var:
            raise GuardConstraintError("empty variable name")
        if self.modulus <= self.residue or self.residue < 0:
            raise GuardConstraintError(
                f"need modulus > residue >= 0, got {self.modulus}, {self.residue}"
            )


@dataclass(frozen=True)
class And:
    left: "Guard"
    right: "Guard"


@dataclass(frozen=True)
class Not:
    inner: "Guard"


Guard = Union[LessThan, ModEq, And, Not]


def guard_size(g: Guard) -> int:
    """Atoms count 1; conjunction adds; negation is free."""
    if isinstance(g, And):
        return guard_size(g.left) + guard_size(g.right)
    if isinstance(g, Not):
        return guard_size(g.inner)
    return 1


def guard_vars(g: Guard) -> set[str]:
    if isinstance(g, And):
        return guard_vars(g.left) | guard_vars(g.right)
    if isinstance(g, Not):
        return guard_vars(g.inner)
    return {g.var}


def guard_satisfies(valuation: Mapping[str, int], g: Guard) -> bool:
    """Direct semantic check; variables absent from the valuation count 0."""
    if isinstance(g, LessThan):
        return valuation.get(g.var, 0) < g.bound
    if isinstance(g, ModEq):
        return valuation.get(g.var, 0) % g.modulus == g.residue
    if isinstance(g, And):
        return guard_satisfies(valuation, g.left) and guard_satisfies(valuation, g.right)
    if isinstance(g, Not):
        return not guard_satisfies(valuation, g.inner)
    raise TypeError(f"not a guard: {g!r}")


def guard_negate(g: Guard) -> Guard:
    """Complement, with double negations collapsed."""
    if isinstance(g, Not):
        return g.inner
    return Not(g)


def equality_guard(valuation: Mapping[str, int], alphabet: Sequence[str]) -> Guard:
    """var == n for every alphabet variable, as a conjunction of core atoms."""
    atoms: list[Guard] = []
    for var in alphabet:
        n = valuation.get(var, 0)
        if n < 0:
            raise GuardConstraintError(f"negative target {n} for {var}")
        eq: Guard = LessThan(var, n + 1)
        if n > 0:
            eq = And(eq, Not(LessThan(var, n)))
        atoms.append(eq)
    out = atoms[0]
    for g in atoms[1:]:
        out = And(out, g)
    return out


@dataclass(frozen=True)
class GuardDfa:
    """A complete deterministic automaton over the alphabet.

    `delta` is total: one successor per (state, variable) pair.
    """

    alphabet: tuple[str, ...]
    num_states: int
    initial: int
    accepting: frozenset[int]
    delta: dict[tuple[int, str], int]


def make_dfa(
    alphabet: Sequence[str],
    num_states: int,
    initial: int,
    accepting: Iterable[int],
    delta: Mapping[tuple[int, str], int],
) -> GuardDfa:
    alpha = tuple(alphabet)
    if num_states < 1:
        raise InvalidAutomaton("a DFA needs at least one state")
    if not (0 <= initial < num_states):
        raise InvalidAutomaton(f"initial state {initial} out of range")
    acc = frozenset(accepting)
    if any(not (0 <= q < num_states) for q in acc):
        raise InvalidAutomaton("accepting state out of range")
    d: dict[tuple[int, str], int] = {}
    for q in range(num_states):
        for v in alpha:
            t = delta.get((q, v))
            if t is None or not (0 <= t < num_states):
                raise InvalidAutomaton(f"transition ({q},{v}) missing or out of range")
            d[(q, v)] = t
    return GuardDfa(alpha, num_states, initial, acc, d)


def dfa_less_than(var: str, bound: int, alphabet: Sequence[str]) -> GuardDfa:
    """Counter chain for var < bound.

    States 0..bound count occurrences of var (saturating at bound, a rejecting
    sink); other variables self-loop. bound = 0 is the single-state rejecting
    automaton for an unsatisfiable threshold.
    """
    if var not in alphabet:
        raise UnknownVariable(f"{var!r} not in alphabet {tuple(alphabet)}")
    if bound < 0:
        raise GuardConstraintError(f"negative bound {bound}")
    if bound == 0:
        delta = {(0, v): 0 for v in alphabet}
        return make_dfa(alphabet, 1, 0, [], delta)
    n = bound
    delta = {}
    for q in range(n + 1):
        for v in alphabet:
            if v == var:
                delta[(q, v)] = min(q + 1, n)
            else:
                delta[(q, v)] = q
    return make_dfa(alphabet, n + 1, 0, range(n), delta)


def dfa_mod(var: str, modulus: int, residue: int, alphabet: Sequence[str]) -> GuardDfa:
    """Cyclic counter for var % modulus == residue."""
    if var not in alphabet:
        raise UnknownVariable(f"{var!r} not in alphabet {tuple(alphabet)}")
    if modulus <= residue or residue < 0:
        raise GuardConstraintError(f"need modulus > residue >= 0, got {modulus}, {residue}")
    delta = {}
    for q in range(modulus):
        for v in alphabet:
            delta[(q, v)] = (q + 1) % modulus if v == var else q
    return make_dfa(alphabet, modulus, 0, [residue], delta)


def dfa_complement(d: GuardDfa) -> GuardDfa:
    flipped = frozenset(range(d.num_states)) - d.accepting
    return GuardDfa(d.alphabet, d.num_states, d.initial, flipped, dict(d.delta))


def dfa_product(d1: GuardDfa, d2: GuardDfa) -> GuardDfa:
    """Synchronous product restricted to reachable pairs; accepts the
    intersection. Completeness is preserved because the reachable set of a
    complete product is transition-closed."""
    if d1.alphabet != d2.alphabet:
        raise InvalidAutomaton(f"alphabet mismatch {d1.alphabet} vs {d2.alphabet}")
    start = (d1.initial, d2.initial)
    index = {start: 0}
    order = [start]
    delta: dict[tuple[int, str], int] = {}
    i = 0
    while i < len(order):
        pair = order[i]
        for v in d1.alphabet:
            succ = (d1.delta[(pair[0], v)], d2.delta[(pair[1], v)])
            j = index.get(succ)
            if j is None:
                j = len(order)
                index[succ] = j
                order.append(succ)
            delta[(i, v)] = j
        i += 1
    accepting = [
        i for i, (a, b) in enumerate(order) if a in d1.accepting and b in d2.accepting
    ]
    return make_dfa(d1.alphabet, len(order), 0, accepting, delta)


def build_guard_dfa(g: Guard, alphabet: Sequence[str]) -> GuardDfa:
    """Compile a guard to a complete DFA over the given alphabet."""
    missing = guard_vars(g) - set(alphabet)
    if missing:
        raise UnknownVariable(f"guard mentions {sorted(missing)} outside {tuple(alphabet)}")
    if isinstance(g, LessThan):
        return dfa_less_than(g.var, g.bound, alphabet)
    if isinstance(g, ModEq):
        return dfa_mod(g.var, g.modulus, g.residue, alphabet)
    if isinstance(g, And):
        return dfa_product(build_guard_dfa(g.left, alphabet), build_guard_dfa(g.right, alphabet))
    if isinstance(g, Not):
        return dfa_complement(build_guard_dfa(g.inner, alphabet))
    raise TypeError(f"not a guard: {g!r}")


def dfa_accepts(d: GuardDfa, word: Iterable[str]) -> bool:
    q = d.initial
    for sym in word:
        if sym not in d.alphabet:
            raise UnknownVariable(f"{sym!r} not in alphabet {d.alphabet}")
        q = d.delta[(q, sym)]
    return q in d.accepting


def parikh(word: Iterable[str]) -> dict[str, int]:
    """Letter counts of a word, as a valuation."""
    out: dict[str, int] = {}
    for sym in word:
        out[sym] = out.get(sym, 0) + 1
    return out
