"""Independent execution oracles: exact enumeration and Monte Carlo.

The enumeration oracle runs programs by their small-step rules with no
automaton machinery, truncating unbounded draws and carrying the lost mass
as an explicit residual. Everything it reports therefore brackets the exact
value from below.
"""

from fractions import Fraction

import pytest

from redip import (
    Binomial,
    Edge,
    Geometric,
    UnsupportedIid,
    compare,
    dist_pmf,
    enumerate_program,
    make_pga,
    mc_sample,
    parse_program,
    prior_support,
)
from redip.oracle import Running, Terminated, Violation, _PmfTable, step

H = Fraction(1, 2)
ONE = Fraction(1)

INSURANCE = (
    "{r := 0} [9/10] {r := 1}; "
    "if (r == 0) {x += negbinomial(1, 1/2)} else {x += negbinomial(2, 1/2)}; "
    "observe(x >= 2)"
)


def two_point_prior():
    return make_pga(
        ("x", "y"),
        3,
        [Edge(0, 1, H, "y"), Edge(1, 2, ONE, "y")],
        {0: ONE},
        {0: H, 2: ONE},
    )


# ----- single steps


def test_step_constant_increment_terminates():
    out, residual = step(Running(parse_program("x += 2"), (1,)), ("x",), 10)
    assert out == [(ONE, Terminated((3,)))]
    assert residual == 0


def test_step_observe_branches_on_the_guard():
    sat, _ = step(Running(parse_program("observe(x >= 1)"), (2,)), ("x",), 10)
    assert sat == [(ONE, Terminated((2,)))]
    vio, _ = step(Running(parse_program("observe(x >= 1)"), (0,)), ("x",), 10)
    assert vio == [(ONE, Violation())]


def test_step_seq_carries_the_continuation():
    out, _ = step(Running(parse_program("x += 1; x += 2"), (0,)), ("x",), 10)
    assert out == [(ONE, Running(parse_program("x += 2"), (1,)))]


def test_step_nested_seq_keeps_remaining_program():
    p = parse_program("{x += 1; x += 2} [1/2] {skip}; x += 4")
    out, _ = step(Running(p, (0,)), ("x",), 10)
    # both branches still have the trailing statement to run
    assert {w for w, _ in out} == {H}
    for _, cfg in out:
        assert isinstance(cfg, Running)


def test_step_truncates_unbounded_draws():
    out, residual = step(Running(parse_program("x += geometric(1/2)"), (0,)), ("x",), 3)
    assert [(w, c.valuation) for w, c in out] == [
        (H, (0,)),
        (Fraction(1, 4), (1,)),
        (Fraction(1, 8), (2,)),
        (Fraction(1, 16), (3,)),
    ]
    assert residual == Fraction(1, 16)


def test_step_decrement_saturates_at_zero():
    out, _ = step(Running(parse_program("x--"), (0,)), ("x",), 10)
    assert out == [(ONE, Terminated((0,)))]


def test_step_refuses_iid():
    with pytest.raises(UnsupportedIid):
        step(Running(parse_program("x += iid(bernoulli(1/2), y)"), (0, 2)), ("x", "y"), 10)


# ----- full enumeration


def test_enumerate_geometric_with_residual():
    rep = enumerate_program(parse_program("x += geometric(1/2)"), truncation=3)
    assert rep.terminal == {(k,): H ** (k + 1) for k in range(4)}
    assert rep.residual == Fraction(1, 16)
    assert rep.violation == 0
    assert rep.terminal_mass == Fraction(15, 16)


def test_enumerate_finite_program_is_exact():
    rep = enumerate_program(parse_program("{x += 1} [1/3] {x += uniform(2)}"))
    assert rep.residual == 0
    assert rep.terminal == {(0,): Fraction(1, 3), (1,): Fraction(2, 3)}


def test_enumerate_insurance_brackets_the_inference_values():
    rep = enumerate_program(parse_program(INSURANCE), truncation=40)
    z = Fraction(11, 40)
    assert rep.terminal_mass <= z <= rep.terminal_mass + rep.residual
    # violating runs happen at small claim counts only, so that side is exact
    assert rep.violation == Fraction(29, 40)
    assert rep.residual < Fraction(1, 2 ** 38)


def test_enumerate_with_weighted_start():
    p = parse_program("x += y")
    rep = enumerate_program(
        p, alphabet=("x", "y"), start=[((0, 0), H), ((0, 2), H)]
    )
    assert rep.terminal == {(0, 0): H, (2, 2): H}


def test_enumerate_observe_false_is_all_violation():
    rep = enumerate_program(parse_program("x := 0; observe(x >= 1)"))
    assert rep.terminal == {}
    assert rep.violation == 1


# ----- pmf helpers


def test_pmf_table_caches_rows():
    t = _PmfTable(5)
    row = t.row(Geometric(H))
    assert row == [H ** (k + 1) for k in range(6)]
    assert t.row(Geometric(H)) is row


def test_dist_pmf_binomial_row_sums_to_one():
    spec = Binomial(10, Fraction(2, 5))
    assert sum(dist_pmf(spec, k) for k in range(11)) == 1


# ----- prior support


def test_prior_support_of_two_point_prior():
    assert prior_support(two_point_prior()) == [
        ((0, 0), H),
        ((0, 2), H),
    ]


def test_prior_support_refuses_loops():
    from redip import InvalidAutomaton

    loop = make_pga(("x",), 1, [Edge(0, 0, H, "x")], {0: ONE}, {0: H})
    with pytest.raises(InvalidAutomaton):
        prior_support(loop)


# ----- differential comparison


def test_compare_insurance_program():
    res = compare(parse_program(INSURANCE), truncation=40)
    assert res.ok
    assert res.mismatches == []


def test_compare_finite_program_is_exact():
    res = compare(
        parse_program("{ x += y } [1/2] { skip }; observe(x == 0)"),
        prior=two_point_prior(),
        truncation=30,
    )
    assert res.ok
    assert res.residual == 0
    assert res.worst_discrepancy == 0


def test_compare_catches_a_broken_translation(monkeypatch):
    """Sanity check that the comparison has teeth: skew the translated
    automaton and the report must flag it."""
    import importlib

    translate_mod = importlib.import_module("redip.translate")
    from redip import compare as run_compare

    real_translate = translate_mod.translate

    def skewed(p, prior=None):
        t = real_translate(p, prior)
        a = t.automaton
        initial = {q: w * Fraction(9, 10) for q, w in a.initial.items()}
        broken = make_pga(a.alphabet, a.num_states, a.edges, initial, a.final)
        return type(t)(
            automaton=broken,
            alphabet=t.alphabet,
            prior=t.prior,
            prior_mass=t.prior_mass,
            steps=t.steps,
        )

    monkeypatch.setattr(translate_mod, "translate", skewed)
    res = run_compare(parse_program("x += uniform(3)"), truncation=10)
    assert not res.ok
    assert res.mismatches


# ----- Monte Carlo


def test_mc_is_seed_deterministic():
    p = parse_program("y += 4; x += iid(bernoulli(1/2), y)")
    a = mc_sample(p, 3000, seed=11)
    b = mc_sample(p, 3000, seed=11)
    assert a == b
    assert a.accepted == 3000


def test_mc_rejection_rate_tracks_violation_mass():
    # observe(x == 0) on a fair coin rejects about half the runs
    p = parse_program("{x += 1} [1/2] {skip}; observe(x == 0)")
    rep = mc_sample(p, 20000, seed=3)
    assert rep.violations + rep.accepted == rep.samples
    assert abs(rep.violations / rep.samples - 0.5) < 0.02
    assert rep.estimate((0,)) == 1.0


def test_mc_iid_matches_binomial_roughly():
    p = parse_program("y += 6; x += iid(bernoulli(1/2), y)")
    rep = mc_sample(p, 30000, seed=5)
    assert rep.alphabet == ("y", "x")  # first-appearance order
    spec = Binomial(6, H)
    for k in range(7):
        want = float(dist_pmf(spec, k))
        got = rep.estimate((6, k))
        assert abs(got - want) < 0.02, k
