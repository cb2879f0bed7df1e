import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powmod1.bounds import (
    asymmetric_bounds,
    comparison_bounds,
    epsilon_bounds,
    gap_thresholds,
    hundertt_run_bound,
    pollington_theta,
    product_T,
    tau,
    theta_crossing,
)
from powmod1.errors import PreconditionError
from powmod1.exact import AlgebraicReal, e_enclosure, lift
from powmod1.intpoly import parse_poly

from oracles import (
    CBRT6,
    ETA,
    HALF_CENTERED_3_2,
    LINE_2E_110,
    T_1_10,
    T_1_1024,
    T_2_3,
    TAU,
    inside,
    tau_oracle,
)

coprime = st.tuples(st.integers(2, 60), st.integers(1, 59)).filter(
    lambda t: t[0] > t[1] and math.gcd(*t) == 1)


def _val(v):
    return v.mid if hasattr(v, "mid") else v


# ------------------------------------------------------------ T and tau


def test_product_T_values():
    assert inside(product_T(F(2, 3), 80), T_2_3)
    assert inside(product_T(F(1, 10), 80), T_1_10)
    t = product_T(F(1, 1024), 60)
    assert inside(t, T_1_1024) and t.certainly_gt(F(9985, 10000)) and t.certainly_lt(1)


def test_product_T_rejects_outside_unit_interval():
    for z in (0, 1, F(3, 2)):
        with pytest.raises(PreconditionError):
            product_T(z)


@pytest.mark.parametrize("pq", sorted(TAU))
def test_tau_matches_oracle(pq):
    t = tau(*pq, bits=100)
    assert inside(t.value, TAU[pq])
    assert t.value.width <= F(1, 2**100)


def test_tau_ten():
    t = tau(10, 1, 80).value
    assert t.certainly_gt(F(99090099, 10**9))
    assert t.certainly_le(F(1, 10) - F(1, 1100))


@settings(max_examples=60, deadline=None)
@given(coprime)
def test_tau_invariants(pq):
    p, q = pq
    v = tau(p, q).value
    assert v.certainly_gt(F(1, p + q)) and v.certainly_lt(F(1, 2))
    assert v.certainly_gt(F(1, p) - F(q * q, p**3))
    assert inside(v, tau_oracle(p, q), 1e-15)
    if q >= 2:
        assert v.certainly_lt(F(q, 2 * (p - q)))
    elif p >= 3:
        # for q = 1 the upper bound q/(2(p-q)) cannot hold
        assert v.certainly_gt(F(1, 2 * (p - 1)))


def test_tau_preconditions():
    for p, q in [(4, 2), (2, 3), (3, 3)]:
        with pytest.raises(PreconditionError):
            tau(p, q)


# ------------------------------------------------------------ brackets


def test_bounds_ten():
    r = epsilon_bounds(10)
    assert r.kind == "integer"
    assert r.eps1_upper.value == 0
    assert inside(r.eps2_lower.value, TAU[(10, 1)])
    assert r.eps2_upper.value == F(1, 10) - F(1, 1100)


def test_bounds_three_halves():
    r = epsilon_bounds(F(3, 2))
    assert inside(r.eps1_lower.value, TAU[(3, 2)])
    # the q = 2 refinement 1/p is sharper than the 1/2 cap
    assert r.eps1_upper.value == F(1, 3)
    assert inside(r.eps2_lower.value, TAU[(3, 2)])
    assert r.eps2_upper.value == F(1, 2)


def test_bounds_seven_thirds():
    r = epsilon_bounds(F(7, 3))
    assert r.eps1_upper.value == F(1, 4)
    assert r.eps2_lower.value == F(1, 5)
    assert "odd-q" in r.eps1_upper.provenance


def test_bounds_pisot_and_algebraic():
    r = epsilon_bounds(AlgebraicReal.largest_root(parse_poly("x^2-4x-1")), with_theta=False)
    assert r.kind == "pisot" and r.eps1_upper.value == 0
    r = epsilon_bounds(AlgebraicReal.largest_root(parse_poly("2x^2-6x-1")), with_theta=False)
    assert r.kind == "algebraic"
    assert r.eps1_lower.value == F(1, 9)


@settings(max_examples=40, deadline=None)
@given(coprime)
def test_brackets_consistent(pq):
    r = epsilon_bounds(F(*pq), with_theta=False, with_comparisons=False)
    assert r.eps1_consistent and r.eps2_consistent
    for b in (r.eps1_lower, r.eps1_upper, r.eps2_lower, r.eps2_upper):
        assert b.provenance
        assert 0 <= _val(b.value) <= F(1, 2)


def test_bounds_rejects_small_zeta():
    with pytest.raises(PreconditionError):
        epsilon_bounds(1)


# ------------------------------------------------------------ theta


def test_theta_two():
    t = pollington_theta(2)
    assert t.r == 3
    assert t.deviation.lo == t.deviation.hi == F(1, 32768)


@pytest.mark.parametrize("z", [F(11, 10), F(3, 2), 2, 3, 10, 100, 10**6])
def test_theta_range(z):
    t = pollington_theta(z)
    assert t.theta.certainly_gt(F(1, 2) - F(1, 1024)) and t.theta.certainly_lt(F(1, 2))


def test_theta_above_cube_root_six():
    z = lift(AlgebraicReal(parse_poly("x^3-6"), 1, 2))
    t = pollington_theta(z)
    # at the cube root itself z^3 = 6 is not > 6, so r jumps to 4
    assert t.r == 4
    t = pollington_theta(F(1817121, 1000000))
    assert t.r == 3
    assert abs(float(t.deviation.mid) - 1 / 10368) < 1e-7


def test_theta_below_eta_threshold():
    for z in (F(3, 2), F(19, 10), 2, 2 + F(6, 10**5)):
        t = pollington_theta(z)
        assert t.theta.certainly_gt(F(1, 2) - F(1, 10368))


def test_eta_crossing():
    lo, hi = theta_crossing(40)
    assert hi - lo <= F(1, 2**40)
    assert float(lo) <= ETA <= float(hi)
    assert F(6, 10**5) < lo and hi < F(7, 10**5)


# ------------------------------------------------------------ misc bounds


@pytest.mark.parametrize("eps,expected", [
    (F(1, 4), (1, 5)), (F(1, 10), (4, 11)), (F(1, 2), (1, 3)), (F(3, 4), (1, F(7, 3))),
])
def test_gap_thresholds(eps, expected):
    zs, al = gap_thresholds(eps)
    assert zs == al == expected


def test_comparison_lines():
    lines = dict(comparison_bounds(10))
    assert lines["Bertin et al. countable below 1/(2(1+zeta)^2)"] == F(1, 242)
    lines = dict(comparison_bounds(4))
    assert lines["Boyd 1/((zeta-1)(zeta-3))"] == F(1, 3)
    assert "Boyd 1/((zeta-1)(zeta-3))" not in dict(comparison_bounds(3))
    lines = dict(comparison_bounds(10, 1))
    v = lines["Pisot/Salem forcing 1/(2e zeta(zeta+1)(log alpha+1))"]
    assert inside(v, LINE_2E_110, 1e-15)
    with pytest.raises(PreconditionError):
        comparison_bounds(10, F(1, 2))


def test_e_enclosure_tight():
    e = e_enclosure(128)
    assert e.width <= F(1, 2**128)


def test_asymmetric_examples():
    a = asymmetric_bounds(3, 2)
    assert a.tijdeman == 1 and a.e_value == 1 and a.gap_three_halves == F(1, 3)
    assert inside(a.half_centered, HALF_CENTERED_3_2)
    assert abs(0.5 - float(a.half_centered.mid) - 0.2856) < 5e-5
    for p in (5, 7, 9):
        assert asymmetric_bounds(p, 2).tijdeman == F(1, p - 2)
    assert asymmetric_bounds(5, 3).e_value == F(2, 5)


@pytest.mark.parametrize("p,q,alpha,n,expected", [
    (3, 2, 1, 4, 2), (10, 3, 1, 3, 3), (3, 2, 1, 1, 0), (5, 2, F(1, 3), 3, 2),
])
def test_run_bound(p, q, alpha, n, expected):
    assert hundertt_run_bound(p, q, alpha, n) == expected


def test_run_bound_rejects_small_n():
    with pytest.raises(PreconditionError):
        hundertt_run_bound(3, 2, F(1, 100), 2)


def test_cube_root_six_oracle_consistent():
    assert abs(float(CBRT6) ** 3 - 6) < 1e-12
