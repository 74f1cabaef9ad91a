"""Compile core programs into probability generating automata.

Each statement becomes one automaton construction applied to the automaton
accumulated so far (starting from the prior):

* `x := 0`            relabel x-edges to plain weights
* `x += n`            concatenate an n-step point-mass chain
* `x += D`            concatenate the distribution automaton for D
* `x += y`            splice a two-edge gadget (one y, one x) into every
                      y-labeled transition
* `x += iid(D, y)`    splice (single y-edge followed by the automaton of D)
                      into every y-labeled transition
* `x--`               monus: guarded shift on the positive part, unchanged
                      zero part
* `observe(g)`        product with the guard's counting automaton
* `{p} [w] {q}`       weighted union of the two translated branches
* `if (g) ...`        union of the guard-filtered branch translations

The automaton is trimmed after every construction; the raw size before
trimming is recorded so growth bounds can be checked against theory.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .analysis import mass, normalize
from .constructions import (
    concat,
    decrement,
    label_subst_one,
    product,
    transition_subst,
    weighted_union,
)
from .dists import Dirac, build_dist_pga
from .errors import InfeasibleObservation, InvalidAutomaton
from .guards import Guard, build_guard_dfa, guard_negate
from .lang import (
    Choice,
    Decrement,
    IfElse,
    IncrConst,
    IncrDist,
    IncrIid,
    IncrVar,
    Observe,
    Program,
    Seq,
    SetZero,
    dist_to_text,
    guard_to_text,
    program_vars,
)
from .pga import Edge, Pga, extend_alphabet, make_pga, trim, unit_pga
from .rational import is_finite


@dataclass(frozen=True)
class StepRecord:
    construction: str
    detail: str
    pre_trim_size: int
    post_trim_size: int


@dataclass(frozen=True)
class TranslationResult:
    automaton: Pga
    alphabet: tuple[str, ...]
    prior: Pga
    prior_mass: Fraction
    steps: tuple[StepRecord, ...]


class _Translator:
    def __init__(self, alphabet: tuple[str, ...]):
        self.alphabet = alphabet
        self.steps: list[StepRecord] = []

    def record(self, construction: str, detail: str, raw: Pga) -> Pga:
        trimmed = trim(raw)
        self.steps.append(StepRecord(construction, detail, raw.size, trimmed.size))
        return trimmed

    def apply(self, a: Pga, p: Program) -> Pga:
        alpha = self.alphabet
        if isinstance(p, Seq):
            return self.apply(self.apply(a, p.first), p.second)
        if isinstance(p, SetZero):
            return self.record("subst-one", f"{p.var} := 0", label_subst_one(a, p.var))
        if isinstance(p, IncrConst):
            chain = build_dist_pga(Dirac(p.amount), p.var, alpha)
            return self.record("concat", f"{p.var} += {p.amount}", concat(a, chain))
        if isinstance(p, IncrDist):
            d = build_dist_pga(p.dist, p.var, alpha)
            return self.record(
                "concat", f"{p.var} += {dist_to_text(p.dist)}", concat(a, d)
            )
        if isinstance(p, IncrVar):
            gadget = make_pga(
                alpha,
                3,
                [Edge(0, 1, 1, p.source), Edge(1, 2, 1, p.var)],
                {0: 1},
                {2: 1},
            )
            return self.record(
                "transition-subst",
                f"{p.var} += {p.source}",
                transition_subst(a, p.source, gadget),
            )
        if isinstance(p, IncrIid):
            one_count = make_pga(alpha, 2, [Edge(0, 1, 1, p.count_var)], {0: 1}, {1: 1})
            gadget = concat(one_count, build_dist_pga(p.dist, p.var, alpha))
            return self.record(
                "transition-subst",
                f"{p.var} += iid({dist_to_text(p.dist)}, {p.count_var})",
                transition_subst(a, p.count_var, gadget),
            )
        if isinstance(p, Decrement):
            return self.record("decrement", f"{p.var}--", decrement(a, p.var))
        if isinstance(p, Observe):
            dfa = build_guard_dfa(p.guard, alpha)
            return self.record(
                "product", f"observe({guard_to_text(p.guard)})", product(a, dfa)
            )
        if isinstance(p, Choice):
            left = self.apply(a, p.left)
            right = self.apply(a, p.right)
            raw = weighted_union(left, right, p.prob, 1 - p.prob)
            return self.record("union", f"choice [{p.prob}]", raw)
        if isinstance(p, IfElse):
            g = p.guard
            then_in = self.record(
                "product",
                f"if-filter ({guard_to_text(g)})",
                product(a, build_guard_dfa(g, alpha)),
            )
            else_in = self.record(
                "product",
                f"else-filter ({guard_to_text(guard_negate(g))})",
                product(a, build_guard_dfa(guard_negate(g), alpha)),
            )
            then_out = self.apply(then_in, p.then_branch)
            else_out = self.apply(else_in, p.else_branch)
            raw = weighted_union(then_out, else_out, Fraction(1), Fraction(1))
            return self.record("union", "if-join", raw)
        raise TypeError(f"not a program: {p!r}")


def working_alphabet(p: Program, prior: Optional[Pga]) -> tuple[str, ...]:
    """Program variables in appearance order, then any extra prior variables."""
    pvars = program_vars(p)
    if prior is None:
        return pvars or ("x",)
    extra = tuple(v for v in prior.alphabet if v not in pvars)
    return (pvars + extra) or prior.alphabet


def translate(p: Program, prior: Optional[Pga] = None) -> TranslationResult:
    """Run the program through the automaton constructions, starting from the
    prior (default: point mass at the all-zero valuation)."""
    alphabet = working_alphabet(p, prior)
    start = unit_pga(alphabet) if prior is None else extend_alphabet(prior, alphabet)
    prior_mass = mass(start)
    if not is_finite(prior_mass) or prior_mass > 1:
        raise InvalidAutomaton(f"prior mass {prior_mass} exceeds 1")
    tr = _Translator(alphabet)
    final = tr.apply(trim(start), p)
    return TranslationResult(final, alphabet, start, prior_mass, tuple(tr.steps))


@dataclass(frozen=True)
class InferenceResult:
    alphabet: tuple[str, ...]
    unnormalized: Pga
    posterior: Pga
    normalizing_constant: Fraction
    prior_mass: Fraction
    violation_mass: Fraction
    steps: tuple[StepRecord, ...]


def infer(p: Program, prior: Optional[Pga] = None) -> InferenceResult:
    """Exact posterior inference: translate, compute the normalizing constant,
    and rescale. Raises InfeasibleObservation when every run violates an
    observation."""
    tr = translate(p, prior)
    z = mass(tr.automaton)
    # increments preserve mass and filtering only removes it, so z is a
    # probability; a diverging z would mean the translation itself is broken
    assert is_finite(z) and z <= tr.prior_mass
    if z == 0:
        raise InfeasibleObservation("all program runs violate an observation")
    posterior = normalize(tr.automaton)
    return InferenceResult(
        alphabet=tr.alphabet,
        unnormalized=tr.automaton,
        posterior=posterior,
        normalizing_constant=z,
        prior_mass=tr.prior_mass,
        violation_mass=tr.prior_mass - z,
        steps=tr.steps,
    )


def guard_mass(a: Pga, g: Guard) -> Fraction:
    """Mass of the runs of `a` whose final valuation satisfies the guard."""
    filtered = trim(product(a, build_guard_dfa(g, a.alphabet)))
    value = mass(filtered)
    if not is_finite(value):
        raise InvalidAutomaton("guard query diverges; automaton has unbounded mass")
    return value


def marginal(a: Pga, var: str, upto: int) -> tuple[list[Fraction], Fraction]:
    """Pointwise marginal of one variable: ([P(var=0..upto)], tail mass)."""
    from .analysis import coefficient_table

    if var not in a.alphabet:
        raise InvalidAutomaton(f"{var!r} not in alphabet {a.alphabet}")
    b = a
    for other in a.alphabet:
        if other != var:
            b = trim(label_subst_one(b, other))
    table = coefficient_table(b, {var: upto})
    idx = a.alphabet.index(var)
    probs = []
    for k in range(upto + 1):
        key = tuple(k if i == idx else 0 for i in range(len(a.alphabet)))
        probs.append(table.get(key, Fraction(0)))
    total = mass(b)
    if not is_finite(total):
        raise InvalidAutomaton("marginal diverges; automaton has unbounded mass")
    return probs, total - sum(probs)
