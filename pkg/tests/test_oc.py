import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import enumerated_cdf, exact_cdf, exact_chain_oc, exact_pmf, mp_cdf
from samplan.oc import (
    DomainError,
    PlanParams,
    binom_cdf,
    binom_cdf_prefix,
    binom_pmf,
    oc_mchgsp,
    oc_mchsp,
    oc_single,
)

PROBS = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


# -- binom_pmf ---------------------------------------------------------------

def test_pmf_single_bernoulli():
    assert binom_pmf(1, 0, 0.3) == pytest.approx(0.7, abs=1e-15)


def test_pmf_certain_event():
    assert binom_pmf(5, 5, 1.0) == 1.0


def test_pmf_all_good_lot_of_65():
    # exact value of 0.95**65 from rational arithmetic
    assert binom_pmf(65, 0, 0.05) == pytest.approx(0.03564793225056032, rel=1e-13)
    assert binom_pmf(65, 0, 0.05) == pytest.approx(0.95**65, rel=1e-13)


@pytest.mark.parametrize("n,k,p", [(3, 4, 0.5), (3, -1, 0.5), (0, 0, 0.5), (4, 1, -0.1), (4, 1, 1.5), (4, 1, math.nan)])
def test_pmf_domain_errors(n, k, p):
    with pytest.raises(DomainError):
        binom_pmf(n, k, p)


@pytest.mark.parametrize("n,k,p", [
    (10_000, 500, 0.05),
    (10_000, 5000, 0.5),
    (10_000, 9990, 0.999),
    (10_000, 30, 0.001),
    (600, 10, 0.01),
    (2000, 1500, 0.73),
])
def test_pmf_large_n_ten_significant_digits(n, k, p):
    expected = float(exact_pmf(n, k, p))
    assert binom_pmf(n, k, p) == pytest.approx(expected, rel=1e-10)


# -- binom_cdf ---------------------------------------------------------------

def test_cdf_full_support():
    assert binom_cdf(10, 10, 0.37) == 1.0


def test_cdf_zero_defect_rate():
    assert binom_cdf(10, 0, 0.0) == 1.0


def test_cdf_p_one():
    assert binom_cdf(10, 9, 1.0) == 0.0
    assert binom_cdf(10, 10, 1.0) == 1.0


def test_cdf_lot_of_65():
    # rational-arithmetic oracle; see decisions log for the published approximation
    assert binom_cdf(65, 6, 0.05) == pytest.approx(0.9567131088587938, rel=1e-12)


@pytest.mark.parametrize("n,c,p", [(600, 10, 0.01), (600, 10, 0.02), (65, 6, 0.14), (10, 3, 1e-9)])
def test_cdf_against_rational_oracle(n, c, p):
    assert binom_cdf(n, c, p) == pytest.approx(float(exact_cdf(n, c, p)), rel=1e-11, abs=1e-300)


@pytest.mark.parametrize("n,c,p", [(5000, 250, 0.05), (10_000, 40, 0.01), (10_000, 9000, 0.9)])
def test_cdf_large_n_against_mpmath(n, c, p):
    assert binom_cdf(n, c, p) == pytest.approx(float(mp_cdf(n, c, p)), rel=1e-10)


@pytest.mark.parametrize("n", [1, 4, 9, 12])
@pytest.mark.parametrize("p", [0.1, 0.37, 0.5, 0.9])
def test_cdf_matches_enumeration(n, p):
    for c in range(n + 1):
        assert abs(binom_cdf(n, c, p) - float(enumerated_cdf(n, c, p))) <= 1e-10


def test_prefix_bit_identical_to_cdf():
    prefix = binom_cdf_prefix(95, 10, 0.137)
    assert prefix == [binom_cdf(95, c, 0.137) for c in range(11)]


@settings(max_examples=200, deadline=None)
@given(n=st.integers(1, 300), p=PROBS, data=st.data())
def test_cdf_nondecreasing_in_c(n, p, data):
    c = data.draw(st.integers(0, n - 1))
    assert binom_cdf(n, c, p) <= binom_cdf(n, c + 1, p)


@settings(max_examples=200, deadline=None)
@given(n=st.integers(1, 300), a=PROBS, b=PROBS, data=st.data())
def test_cdf_nonincreasing_in_p(n, a, b, data):
    c = data.draw(st.integers(0, n))
    lo, hi = min(a, b), max(a, b)
    assert binom_cdf(n, c, hi) <= binom_cdf(n, c, lo) + 1e-15


@pytest.mark.parametrize("n", [1, 7, 65, 600, 1000])
@pytest.mark.parametrize("p", [0.001, 0.01, 0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999])
def test_pmf_normalization(n, p):
    total = math.fsum(binom_pmf(n, k, p) for k in range(n + 1))
    assert abs(total - 1.0) <= 1e-12


# -- single and chained OC ---------------------------------------------------

@pytest.mark.parametrize("n,c,p,published", [(160, 4, 0.01, 0.9769802), (40, 4, 0.05, 0.9519717)])
def test_oc_single_published_values(n, c, p, published):
    assert oc_single(n, c, p) == pytest.approx(published, abs=1e-4)


def test_oc_single_accepts_always_when_c_is_n():
    assert oc_single(7, 7, 0.99) == 1.0


def test_oc_mchsp_examples():
    assert oc_mchsp(1.0, 3) == 1.0
    assert oc_mchsp(0.5, 1) == 0.5
    # 2P^2 - P^3 evaluated directly
    P = 0.95689
    assert oc_mchsp(P, 2) == pytest.approx(2 * P**2 - P**3, rel=1e-14)
    assert oc_mchsp(P, 2) == pytest.approx(0.955104, abs=2e-4)


@pytest.mark.parametrize("i", [0, -1, 1.5, True])
def test_oc_mchsp_rejects_bad_chain_length(i):
    with pytest.raises(DomainError):
        oc_mchsp(0.5, i)


def test_oc_mchgsp_worked_example():
    plan = PlanParams(r=5, g=13, c=6, i=2)
    assert oc_mchgsp(plan, 0.05) == pytest.approx(0.9549205, abs=1e-3)
    assert oc_mchgsp(plan, 0.14) == pytest.approx(0.0574218, abs=1e-3)
    assert oc_mchgsp(plan, 0.0) == 1.0
    assert oc_mchgsp(plan, 1.0) == 0.0


@pytest.mark.parametrize("plan,p", [
    (PlanParams(5, 13, 6, 2), 0.05),
    (PlanParams(5, 120, 10, 3), 0.02),
    (PlanParams(5, 2, 3, 1), 0.55),
    (PlanParams(3, 7, 0, 9), 0.01),
])
def test_oc_mchgsp_against_rational_oracle(plan, p):
    expected = float(exact_chain_oc(plan.r, plan.g, plan.c, plan.i, p))
    assert oc_mchgsp(plan, p) == pytest.approx(expected, rel=1e-11)


@settings(max_examples=300, deadline=None)
@given(r=st.integers(1, 10), g=st.integers(1, 50), i=st.integers(1, 12), p=PROBS, data=st.data())
def test_chain_penalty(r, g, i, p, data):
    c = data.draw(st.integers(0, r * g))
    plan = PlanParams(r, g, c, i)
    assert oc_mchgsp(plan, p) <= oc_single(plan.n, c, p)


@settings(max_examples=300, deadline=None)
@given(r=st.integers(1, 10), g=st.integers(1, 50), p=PROBS, data=st.data())
def test_chain_length_one_is_single_plan(r, g, p, data):
    c = data.draw(st.integers(0, r * g))
    assert oc_mchgsp(PlanParams(r, g, c, 1), p) == oc_single(r * g, c, p)


@settings(max_examples=200, deadline=None)
@given(P=PROBS, a=st.integers(1, 20))
def test_chain_oc_nonincreasing_in_chain_length(P, a):
    assert oc_mchsp(P, a + 1) <= oc_mchsp(P, a) + 1e-15


@settings(max_examples=200, deadline=None)
@given(r=st.integers(1, 10), g=st.integers(1, 40), i=st.integers(1, 10), data=st.data())
def test_boundaries(r, g, i, data):
    c = data.draw(st.integers(0, r * g - 1))
    plan = PlanParams(r, g, c, i)
    assert oc_mchgsp(plan, 0.0) == 1.0
    assert oc_mchgsp(plan, 1.0) == 0.0


@pytest.mark.parametrize("kwargs", [
    dict(r=0, g=1, c=0, i=1),
    dict(r=1, g=0, c=0, i=1),
    dict(r=1, g=1, c=0, i=0),
    dict(r=2, g=2, c=5, i=1),
    dict(r=2, g=2, c=-1, i=1),
    dict(r=2.0, g=2, c=1, i=1),
])
def test_plan_invariants(kwargs):
    with pytest.raises(DomainError):
        PlanParams(**kwargs)


def test_plan_round_trip():
    plan = PlanParams(5, 13, 6, 2)
    assert plan.n == 65
    assert PlanParams.from_dict(plan.to_dict()) == plan
