from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from conftest import brute_force_crossing, record
from targetop import (
    EmptyOperation,
    ImpulseTrain,
    NonEffectiveOperation,
    NotReducedOperation,
    cumulate,
    determine_taco,
    first_crossing,
    integrate,
    linearize,
    physical_completion,
    start_time,
    taco_analytic,
    taco_numeric,
    taco_reduced,
)
from targetop.completion import integral_functions
from targetop.threads import add, default_start, split_signs


def numeric(re, pe, t_f):
    return taco_numeric(*integral_functions(re, pe), t_f)


def test_start_time(paper_record):
    assert start_time(paper_record) == 2
    assert start_time(record([(0, "in", 1)])) == 0
    assert start_time(record([(4, "in", 1), (0, "in", 1), (6, "out", 1)])) == 0
    with pytest.raises(EmptyOperation):
        start_time(record([]))


def test_physical_completion_buffering(buffering_record):
    b = physical_completion(buffering_record)
    assert (b.t_s, b.t_f, b.reserve_closed) == (2, 8, True)


def test_physical_completion_input_only():
    b = physical_completion(record([(3, "in", 1)]))
    assert (b.t_f, b.reserve_closed) == (3, False)


def test_physical_completion_staged_inputs():
    b = physical_completion(record([(0, "in", 1), (4, "in", 1), (6, "out", 2)]))
    assert (b.t_f, b.reserve_closed) == (6, True)


def test_physical_completion_conversion(paper_record):
    # 2 units in, 3 out: quantity not conserved, falls back to the last event
    b = physical_completion(paper_record)
    assert (b.t_f, b.reserve_closed) == (8, False)


def test_physical_completion_empty():
    with pytest.raises(EmptyOperation):
        physical_completion(record([]))


PAPER = (ImpulseTrain([(2, -2)]), ImpulseTrain([(8, 3)]))
STAGED = (ImpulseTrain([(0, -1), (4, -1)]), ImpulseTrain([(6, 4)]))


def test_numeric_paper():
    assert numeric(*PAPER, 8) == 20


def test_numeric_instantaneous():
    assert numeric(ImpulseTrain([(5, -1)]), ImpulseTrain([(5, 2)]), 5) == 5


def test_numeric_staged_against_brute_force():
    expected = brute_force_crossing(*STAGED, 6.0)
    assert expected == pytest.approx(10, abs=1e-3)
    assert numeric(*STAGED, 6) == 10


def test_numeric_route_equivalence_paper():
    re, pe = PAPER
    ibe, ide = split_signs(add(cumulate(re), cumulate(pe)))
    assert taco_numeric(integrate(ibe, absolute=True), integrate(ide), 8) == 20


def test_numeric_noneffective():
    with pytest.raises(NonEffectiveOperation):
        numeric(ImpulseTrain([(0, -3)]), ImpulseTrain([(1, 3)]), 1)


def test_numeric_compensated_before_completion_returns_t_f():
    re = ImpulseTrain([(0, -1)])
    pe = ImpulseTrain([(1, 10), (50, 0.5)])
    vre, vpe = integral_functions(re, pe)
    assert first_crossing(vre, vpe, 50) is None
    assert taco_numeric(vre, vpe, 50) == 50
    # the crossing exists, shortly after the first output
    assert first_crossing(vre, vpe, 1) == Fraction(10, 9)


def test_analytic_examples():
    assert taco_analytic(*PAPER) == 20
    assert taco_analytic(ImpulseTrain(), ImpulseTrain([(7, 5)])) == 7
    assert taco_analytic(*STAGED) == 10
    with pytest.raises(NonEffectiveOperation):
        taco_analytic(ImpulseTrain([(0, -2)]), ImpulseTrain([(1, 2)]))


def test_reduced_examples():
    assert taco_reduced(2, 2, 3, 8) == 20
    assert taco_reduced(0, 123, 5, 7) == 7
    for tau in (0, 3.5, -2, 1e6):
        assert taco_reduced(2, tau, 4, tau) == tau
    with pytest.raises(NonEffectiveOperation):
        taco_reduced(3, 0, 3, 1)


def test_linearize_paper():
    lp = linearize(*PAPER, 20)
    assert (lp.C, lp.C_r, lp.C_p, lp.t_r, lp.t_p) == (36, 40, 60, 2, 8)
    assert lp.round_trip() == 20
    assert lp.vre_star(20) == lp.vpe_star(20) == 36
    assert lp.vre_star(2) == 0 and lp.vpe_star(8) == 0


def test_linearize_symmetric():
    re, pe = ImpulseTrain([(0, -1)]), ImpulseTrain([(0, 2)])
    t_a = taco_reduced(1, 0, 2, 0)
    lp = linearize(re, pe, t_a)
    assert (t_a, lp.C, lp.t_r, lp.t_p) == (0, 0, 0, 0)


def test_linearize_hand_example():
    re, pe = ImpulseTrain([(1, -1)]), ImpulseTrain([(5, 3)])
    t_a = taco_reduced(1, 1, 3, 5)
    assert t_a == 7
    lp = linearize(re, pe, t_a)
    assert (lp.C, lp.t_r, lp.t_p) == (6, 1, 5)


def test_linearize_errors():
    with pytest.raises(NotReducedOperation):
        linearize(*STAGED, 10)
    with pytest.raises(NonEffectiveOperation):
        linearize(ImpulseTrain([(0, -2)]), ImpulseTrain([(1, 1)]), 3)


def test_determine_taco_flags():
    r = determine_taco(*PAPER, 8)
    assert (r.t_a_numeric, r.t_a_analytic, r.effective, r.agreement) == (20, 20, True, True)
    r = determine_taco(ImpulseTrain([(0, -2)]), ImpulseTrain([(1, 1)]), 1)
    assert r == type(r)(None, None, False, False)


# properties ---------------------------------------------------------------

times = st.integers(0, 400).map(lambda k: k / 4)
amounts = st.integers(1, 80).map(lambda k: k / 8)
impulses = st.lists(st.tuples(times, amounts), min_size=1, max_size=8)


@st.composite
def effective_ops(draw):
    ins = draw(impulses)
    outs = draw(impulses)
    re = ImpulseTrain((t, -a) for t, a in ins)
    pe = ImpulseTrain(outs)
    # rescale outputs so that PE exceeds |RE| by a drawn margin
    margin = draw(st.integers(1, 32).map(lambda k: 1 + Fraction(k, 8)))
    pe = pe.scaled(re.magnitude / pe.total * margin)
    t_f = max(re.times[-1], pe.times[-1])
    return re, pe, t_f


@settings(suppress_health_check=[HealthCheck.filter_too_much])
@given(effective_ops())
def test_agreement_when_crossing_after_t_f(op):
    re, pe, t_f = op
    vre, vpe = integral_functions(re, pe)
    assume(first_crossing(vre, vpe, t_f) is not None)
    assert taco_numeric(vre, vpe, t_f) == taco_analytic(re, pe)


@given(effective_ops())
def test_route_equivalence(op):
    re, pe, t_f = op
    ire, ipe = cumulate(re), cumulate(pe)
    ibe, ide = split_signs(add(ire, ipe))
    s = default_start(ire, ipe)
    a = taco_numeric(integrate(ire, True, s), integrate(ipe, start=s), t_f)
    b = taco_numeric(integrate(ibe, True, s), integrate(ide, start=s), t_f)
    assert a == b


@given(effective_ops(), st.integers(-400, 400).map(lambda k: Fraction(k, 3)))
def test_shift_equivariance(op, delta):
    re, pe, t_f = op
    assert numeric(re.shifted(delta), pe.shifted(delta), t_f + delta) == numeric(re, pe, t_f) + delta
    assert taco_analytic(re.shifted(delta), pe.shifted(delta)) == taco_analytic(re, pe) + delta


@given(effective_ops(), st.sampled_from([Fraction(1, 2), 3, 10**6, Fraction(2, 7)]))
def test_cost_scale_invariance(op, lam):
    re, pe, t_f = op
    assert numeric(re.scaled(lam), pe.scaled(lam), t_f) == numeric(re, pe, t_f)
    assert taco_analytic(re.scaled(lam), pe.scaled(lam)) == taco_analytic(re, pe)


@given(amounts, times, amounts, times)
def test_reduced_is_analytic_special_case(a, t1, b, t2):
    assume(b > a)
    assert taco_reduced(a, t1, b, t2) == taco_analytic(ImpulseTrain([(t1, -a)]), ImpulseTrain([(t2, b)]))


@given(amounts, times, amounts, times)
def test_reduced_ordering(a, t_r, b, gap):
    assume(b > a)
    t_p = t_r + gap
    t_a = taco_reduced(a, t_r, b, t_p)
    assert t_a >= t_p >= t_r
    assert (t_a == t_p) == (gap == 0)


@given(amounts, times, amounts, times)
def test_linearize_round_trip(a, t_r, b, gap):
    assume(b > a)
    t_p = t_r + gap
    re, pe = ImpulseTrain([(t_r, -a)]), ImpulseTrain([(t_p, b)])
    t_a = taco_reduced(a, t_r, b, t_p)
    lp = linearize(re, pe, t_a)
    assert lp.round_trip() == t_a
    assert (lp.t_r, lp.t_p) == (t_r, t_p)
    assert lp.C == integral_functions(re, pe)[1](t_a)
