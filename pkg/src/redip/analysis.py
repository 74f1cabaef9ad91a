"""Total mass, normalization, and exact coefficient extraction.

The mass of an automaton is the sum of all accepting-path weights. Stripping
labels leaves a monotone linear system B = M B + F whose least nonnegative
solution gives, per state, the total weight of runs from that state to
acceptance; the mass is the initial-weight combination of that vector.

Two solvers back this up: exact Gaussian elimination on (I - M) B = F (on the
trimmed system, a unique nonnegative solution is necessarily the least one,
and a singular system or a negative component certifies divergence), and an
exact simplex on `min I.B s.t. B = M B + F, B >= 0`, whose infeasibility also
certifies divergence. Both must agree; `mass` uses elimination first and falls
back to the LP when elimination is inconclusive.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import linsolve
from .constructions import product
from .errors import InfiniteMass, InvalidAutomaton, UnknownVariable, ZeroMass
from .guards import build_guard_dfa, equality_guard
from .linsolve import FactoredSystem, SingularSystem
from .pga import Pga, make_pga, trim
from .rational import INF, ExtRational, is_finite

ZERO = Fraction(0)


def _stripped_system(a: Pga) -> tuple[list[dict[int, Fraction]], list[Fraction]]:
    """Rows of M (labels dropped, parallel edges summed) and the vector F."""
    rows: list[dict[int, Fraction]] = [dict() for _ in range(a.num_states)]
    for e in a.edges:
        rows[e.src][e.dst] = rows[e.src].get(e.dst, ZERO) + e.weight
    f = [a.final.get(q, ZERO) for q in range(a.num_states)]
    return rows, f


def mass(a: Pga, method: str = "auto") -> ExtRational:
    """Total weight of all accepting runs, or INF when it diverges.

    method: "auto" (elimination, LP fallback), "elimination", or "lp".
    """
    t = trim(a)
    if not t.final:
        return ZERO
    rows, f = _stripped_system(t)
    n = t.num_states

    def by_elimination() -> Optional[Fraction]:
        sol = linsolve.least_solution_elimination(n, rows, f)
        if sol is None:
            return None
        return sum((w * sol[q] for q, w in t.initial.items()), ZERO)

    def by_lp() -> Optional[Fraction]:
        a_rows = []
        for i in range(n):
            row = [ZERO] * n
            for j, v in rows[i].items():
                row[j] -= v
            row[i] += 1
            a_rows.append(row)
        costs = [t.initial.get(q, ZERO) for q in range(n)]
        return linsolve.simplex_min(costs, a_rows, f)

    if method == "elimination":
        got = by_elimination()
        # on a trimmed system an inconclusive elimination certifies divergence
        return INF if got is None else got
    if method == "lp":
        got = by_lp()
        return INF if got is None else got
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    got = by_elimination()
    if got is not None:
        return got
    got = by_lp()
    return INF if got is None else got


@dataclass(frozen=True)
class PgaReport:
    mass: ExtRational
    is_pga: bool
    issues: tuple[str, ...]


def validate_pga(a: Pga) -> PgaReport:
    """Mass check (a PGA has mass <= 1) plus structural warnings."""
    issues = []
    t = trim(a)
    if t.num_states != a.num_states:
        fwd = {q for q in range(a.num_states)}
        # recompute the two closures for a readable report
        reach = _closure(a, forward=True)
        coreach = _closure(a, forward=False)
        for q in sorted(fwd - reach):
            issues.append(f"state {q} unreachable from any initial state")
        for q in sorted(fwd - coreach):
            if q in reach:
                issues.append(f"state {q} cannot reach any final state")
    m = mass(a)
    is_pga = is_finite(m) and m <= 1
    return PgaReport(mass=m, is_pga=is_pga, issues=tuple(issues))


def _closure(a: Pga, forward: bool) -> set[int]:
    adj: dict[int, list[int]] = {}
    for e in a.edges:
        if forward:
            adj.setdefault(e.src, []).append(e.dst)
        else:
            adj.setdefault(e.dst, []).append(e.src)
    seen = set(a.initial if forward else a.final)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for s in adj.get(q, ()):
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return seen


def normalize(a: Pga) -> Pga:
    """Scale initial weights by 1/mass so the behavior sums to one."""
    m = mass(a)
    if not is_finite(m):
        raise InfiniteMass("cannot normalize an automaton of infinite mass")
    if m == 0:
        raise ZeroMass("cannot normalize an automaton of mass zero")
    initial = {q: w / m for q, w in a.initial.items()}
    return make_pga(a.alphabet, a.num_states, a.edges, initial, a.final)


def coefficient(a: Pga, valuation: Mapping[str, int]) -> Fraction:
    """Exact coefficient of the behavior at one valuation.

    Realized as the mass of the automaton filtered by the conjunction of
    per-variable equality guards.
    """
    for var, count in valuation.items():
        if var not in a.alphabet:
            if count != 0:
                raise UnknownVariable(f"{var!r} not in alphabet {a.alphabet}")
        elif count < 0:
            raise InvalidAutomaton(f"negative count {count} for {var}")
    guard = equality_guard(valuation, a.alphabet)
    filtered = trim(product(a, build_guard_dfa(guard, a.alphabet)))
    m = mass(filtered)
    if not is_finite(m):
        raise InfiniteMass(f"coefficient at {dict(valuation)} diverges")
    return m


def coefficient_table(
    a: Pga, bounds: Mapping[str, int]
) -> dict[tuple[int, ...], Fraction]:
    """All coefficients with per-variable counts inside the given box.

    Keys are count tuples aligned with a.alphabet; variables missing from
    `bounds` get bound 0. Works level by level: within a level only unlabeled
    edges act, so each level is one solve against a factorization of
    (I - M_eps), valid whenever the total mass is finite.
    """
    for var in bounds:
        if var not in a.alphabet:
            raise UnknownVariable(f"{var!r} not in alphabet {a.alphabet}")
    t = trim(a)
    box = [range(bounds.get(var, 0) + 1) for var in t.alphabet]
    if not t.final:
        return {key: ZERO for key in itertools.product(*box)}
    if not is_finite(mass(t)):
        raise InfiniteMass("coefficient table of a diverging automaton")
    n = t.num_states
    eps_rows: list[dict[int, Fraction]] = [dict() for _ in range(n)]
    sym_rows: dict[str, list[dict[int, Fraction]]] = {
        var: [dict() for _ in range(n)] for var in t.alphabet
    }
    for e in t.edges:
        rows = eps_rows if e.symbol is None else sym_rows[e.symbol]
        rows[e.src][e.dst] = rows[e.src].get(e.dst, ZERO) + e.weight
    a_rows = []
    for i in range(n):
        row = {j: -v for j, v in eps_rows[i].items()}
        row[i] = row.get(i, ZERO) + 1
        a_rows.append(row)
    try:
        system = FactoredSystem(n, a_rows)
    except SingularSystem as exc:  # impossible for finite mass, checked above
        raise InfiniteMass(f"unlabeled-edge structure diverges: {exc}") from exc
    f = [t.final.get(q, ZERO) for q in range(n)]
    vectors: dict[tuple[int, ...], list[Fraction]] = {}
    pending_uses: dict[tuple[int, ...], int] = {}
    table: dict[tuple[int, ...], Fraction] = {}
    for key in itertools.product(*box):
        rhs = list(f) if not any(key) else [ZERO] * n
        for i, var in enumerate(t.alphabet):
            if key[i] == 0:
                continue
            prev_key = key[:i] + (key[i] - 1,) + key[i + 1 :]
            prev = vectors[prev_key]
            rows = sym_rows[var]
            for q in range(n):
                acc = rhs[q]
                for j, w in rows[q].items():
                    pv = prev[j]
                    if pv != 0:
                        acc += w * pv
                rhs[q] = acc
            pending_uses[prev_key] -= 1
            if pending_uses[prev_key] == 0:
                del vectors[prev_key], pending_uses[prev_key]
        vec = system.solve(rhs)
        # a vector is consumed once per in-range successor; drop it after
        # the last use so a big box never holds the whole grid in memory
        uses = sum(1 for i in range(len(key)) if key[i] < box[i].stop - 1)
        if uses:
            vectors[key] = vec
            pending_uses[key] = uses
        table[key] = sum((w * vec[q] for q, w in t.initial.items()), ZERO)
    return table


def valuation_key(valuation: Mapping[str, int], alphabet: Sequence[str]) -> tuple[int, ...]:
    """Align a valuation mapping with an alphabet ordering."""
    return tuple(valuation.get(var, 0) for var in alphabet)
