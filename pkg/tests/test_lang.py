"""Surface language: tokens, parsing, desugaring, and rendering."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from redip import (
    And,
    Bernoulli,
    Choice,
    Decrement,
    Dirac,
    Geometric,
    IfElse,
    IncrConst,
    IncrDist,
    IncrIid,
    IncrVar,
    LessThan,
    ModEq,
    NegBinomial,
    Not,
    Observe,
    ProbabilityRangeError,
    RedipSyntaxError,
    Seq,
    SetZero,
    Uniform,
    UnknownVariable,
    dist_to_text,
    guard_to_text,
    parse_guard,
    parse_program,
    parse_valuation,
    program_size,
    program_to_text,
    program_vars,
    seq_all,
)
from redip.lang import tokenize

H = Fraction(1, 2)


# ----- tokens


def test_token_positions_and_kinds():
    toks = tokenize("x := 0 // noise\ny += 1")
    assert [(t.kind, t.text) for t in toks] == [
        ("IDENT", "x"),
        ("OP", ":="),
        ("NUMBER", "0"),
        ("IDENT", "y"),
        ("OP", "+="),
        ("NUMBER", "1"),
        ("EOF", ""),
    ]
    assert (toks[0].line, toks[0].col) == (1, 1)
    assert (toks[3].line, toks[3].col) == (2, 1)


def test_two_char_operators_tokenize_whole():
    toks = tokenize("x--; x <= 1; x != 2; x >= 3")
    ops = [t.text for t in toks if t.kind == "OP"]
    assert "--" in ops and "<=" in ops and "!=" in ops and ">=" in ops


def test_unknown_character_is_a_syntax_error():
    with pytest.raises(RedipSyntaxError):
        tokenize("x += $")


# ----- statements


def test_set_zero_and_increments():
    assert parse_program("x := 0") == SetZero("x")
    assert parse_program("x += 3") == IncrConst("x", 3)
    assert parse_program("x += y") == IncrVar("x", "y")
    assert parse_program("x--") == Decrement("x")
    assert parse_program("x += geometric(1/2)") == IncrDist("x", Geometric(H))
    assert parse_program("x += iid(bernoulli(2/5), y)") == IncrIid(
        "x", Bernoulli(Fraction(2, 5)), "y"
    )


def test_skip_is_a_zero_increment_on_the_first_variable():
    assert parse_program("skip") == IncrConst("x", 0)
    assert parse_program("y += 1; skip") == Seq(IncrConst("y", 1), IncrConst("y", 0))


def test_sequencing_left_associates():
    p = parse_program("x := 0; x += 1; x--")
    assert p == Seq(Seq(SetZero("x"), IncrConst("x", 1)), Decrement("x"))
    assert p == seq_all([SetZero("x"), IncrConst("x", 1), Decrement("x")])


def test_trailing_semicolon_tolerated():
    assert parse_program("x += 1;") == IncrConst("x", 1)
    assert parse_program("{x += 1;} [1/2] {skip}").left == IncrConst("x", 1)


# ----- assignment expansion


def test_linear_assignment_expands():
    p = parse_program("y := x + 2")
    assert p == Seq(Seq(SetZero("y"), IncrConst("y", 2)), IncrVar("y", "x"))


def test_self_assignment_with_unit_coefficient_keeps_the_value():
    assert parse_program("x := x + 1") == IncrConst("x", 1)
    assert parse_program("x := x") == IncrConst("x", 0)


def test_assignment_with_repeated_variable_is_rejected():
    with pytest.raises(RedipSyntaxError, match="coefficient 2"):
        parse_program("x := 2*x")
    with pytest.raises(RedipSyntaxError, match="coefficient 2"):
        parse_program("x := x + x")


# ----- choice and probabilities


def test_choice_parses_both_probability_forms():
    assert parse_program("{x += 1} [1/4] {skip}").prob == Fraction(1, 4)
    assert parse_program("{x += 1} [0.25] {skip}").prob == Fraction(1, 4)


def test_probability_out_of_range():
    with pytest.raises(ProbabilityRangeError):
        parse_program("{skip} [7/4] {skip}")


# ----- guard desugaring


def test_comparisons_desugar_to_the_two_atoms():
    assert parse_program("observe(x < 2)").guard == LessThan("x", 2)
    assert parse_program("observe(x <= 2)").guard == LessThan("x", 3)
    assert parse_program("observe(x >= 2)").guard == Not(LessThan("x", 2))
    assert parse_program("observe(x > 2)").guard == Not(LessThan("x", 3))
    assert parse_program("observe(x == 1)").guard == And(
        LessThan("x", 2), Not(LessThan("x", 1))
    )
    assert parse_program("observe(x != 1)").guard == Not(
        And(LessThan("x", 2), Not(LessThan("x", 1)))
    )
    assert parse_program("observe(x % 3 == 1)").guard == ModEq("x", 3, 1)


def test_or_desugars_through_de_morgan():
    g = parse_program("observe(x < 1 or y < 1)").guard
    assert g == Not(And(Not(LessThan("x", 1)), Not(LessThan("y", 1))))


def test_true_false_use_the_first_variable():
    assert parse_program("observe(true)").guard == Not(LessThan("x", 0))
    assert parse_program("y += 1; observe(false)").second.guard == LessThan("y", 0)


def test_modulus_must_exceed_residue():
    with pytest.raises(RedipSyntaxError):
        parse_program("observe(x % 2 == 2)")


def test_if_else():
    p = parse_program("if (x < 1) {x += 1} else {skip}")
    assert p == IfElse(LessThan("x", 1), IncrConst("x", 1), IncrConst("x", 0))


# ----- reserved words


def test_distribution_names_are_reserved():
    with pytest.raises(RedipSyntaxError):
        parse_program("geometric := 0")
    with pytest.raises(RedipSyntaxError):
        parse_program("x += uniform")  # needs arguments, not a variable


# ----- program measures


INSURANCE = (
    "{r := 0} [9/10] {r := 1}; "
    "if (r == 0) {x += negbinomial(1, 1/2)} else {x += negbinomial(2, 1/2)}; "
    "observe(x >= 2)"
)


def test_insurance_program_measures():
    p = parse_program(INSURANCE)
    # choice counts 1 + |r:=0| + |r:=1 as SetZero;IncrConst| = 4,
    # the if adds 3, the observe 1
    assert program_size(p) == 8
    assert program_vars(p) == ("r", "x")


def test_program_vars_in_first_appearance_order():
    p = parse_program("observe(b < 1); a += c")
    assert program_vars(p) == ("b", "a", "c")


# ----- standalone guard and valuation parsing


def test_parse_guard_respects_alphabet():
    g = parse_guard("x < 3 and y % 2 == 0", ("x", "y"))
    assert g == And(LessThan("x", 3), ModEq("y", 2, 0))
    with pytest.raises(UnknownVariable):
        parse_guard("z < 1", ("x", "y"))


def test_parse_valuation():
    assert parse_valuation("x=2, r=0") == {"x": 2, "r": 0}
    assert parse_valuation("x = 5") == {"x": 5}
    with pytest.raises(ValueError):
        parse_valuation("x=")


# ----- rendering round trip

VARS = ("x", "y")

dists = st.one_of(
    st.builds(Geometric, st.sampled_from([H, Fraction(1, 3)])),
    st.builds(Bernoulli, st.sampled_from([Fraction(2, 5), Fraction(1)])),
    st.builds(Dirac, st.integers(0, 3)),
    st.builds(Uniform, st.integers(1, 4)),
    st.builds(NegBinomial, st.integers(0, 2), st.just(H)),
)

# the parser collapses double negation, so renderable guards never nest Not
guards = st.recursive(
    st.one_of(
        st.builds(LessThan, st.sampled_from(VARS), st.integers(0, 4)),
        st.builds(lambda v, m, r: ModEq(v, m, r % m), st.sampled_from(VARS), st.integers(1, 4), st.integers(0, 3)),
    ),
    lambda inner: st.one_of(
        st.builds(And, inner, inner),
        st.builds(Not, inner.filter(lambda h: not isinstance(h, Not))),
    ),
    max_leaves=4,
)

statements = st.recursive(
    st.one_of(
        st.builds(SetZero, st.sampled_from(VARS)),
        st.builds(IncrConst, st.sampled_from(VARS), st.integers(0, 4)),
        st.builds(IncrDist, st.sampled_from(VARS), dists),
        st.builds(IncrVar, st.just("x"), st.just("y")),
        st.builds(IncrIid, st.just("x"), dists, st.just("y")),
        st.builds(Decrement, st.sampled_from(VARS)),
        st.builds(Observe, guards),
    ),
    lambda inner: st.one_of(
        st.builds(Seq, inner, inner),
        st.builds(Choice, inner, st.sampled_from([H, Fraction(9, 10)]), inner),
        st.builds(IfElse, guards, inner, inner),
    ),
    max_leaves=6,
)


def left_assoc(p):
    """Rebuild every Seq tree left-associated; rendering flattens `;` chains,
    so association is the one shape a round trip cannot preserve."""
    if isinstance(p, Seq):
        flat = []
        stack = [p]
        while stack:
            node = stack.pop()
            if isinstance(node, Seq):
                stack.append(node.second)
                stack.append(node.first)
            else:
                flat.append(left_assoc(node))
        return seq_all(flat)
    if isinstance(p, Choice):
        return Choice(left_assoc(p.left), p.prob, left_assoc(p.right))
    if isinstance(p, IfElse):
        return IfElse(p.guard, left_assoc(p.then_branch), left_assoc(p.else_branch))
    return p


@settings(max_examples=200, deadline=None)
@given(statements)
def test_render_parse_round_trip(p):
    assert parse_program(program_to_text(p)) == left_assoc(p)


@settings(max_examples=100, deadline=None)
@given(guards)
def test_guard_render_round_trip(g):
    assert parse_guard(guard_to_text(g), VARS) == g


def test_dist_rendering():
    assert dist_to_text(Uniform(4)) == "uniform(4)"
    assert dist_to_text(Geometric(H)) == "geometric(1/2)"
    assert dist_to_text(NegBinomial(2, H)) == "negbinomial(2, 1/2)"
