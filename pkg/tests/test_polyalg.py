from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from powmod1.errors import PreconditionError, ReducibleError
from powmod1.intpoly import (
    IntPolynomial,
    count_real_roots,
    isolate_real_roots,
    parse_poly,
)
from powmod1.polyalg import (
    cauchy_root_bound,
    check_irreducible,
    classify_pisot_salem,
    count_roots_unit_disk,
    family,
    height,
    hot_criterion,
    l2norm_sq,
    l_over_zeta_minus_one,
    length,
    mahler_upper_bound,
)

from oracles import L_OVER_ZETA_MINUS_ONE, ZETA24, inside

coeff_lists = st.lists(st.integers(-6, 6), min_size=2, max_size=8).filter(lambda c: c[-1] != 0)


def numpy_disk_counts(coeffs):
    roots = np.roots(list(reversed(coeffs)))
    mods = np.abs(roots)
    return sum(mods < 1 - 1e-7), sum(abs(mods - 1) <= 1e-7), sum(mods > 1 + 1e-7)


# ------------------------------------------------------------ parsing


@pytest.mark.parametrize("text,coeffs", [
    ("x^2-4x-1", (-1, -4, 1)),
    ("2*x**3 - 5x - 1", (-1, -5, 0, 2)),
    ("[-1, -4, 1]", (-1, -4, 1)),
    ("-x^4 + 3", (3, 0, 0, 0, -1)),
])
def test_parse_poly(text, coeffs):
    assert parse_poly(text).coeffs == coeffs


def test_parse_poly_names_bad_token():
    with pytest.raises(PreconditionError, match="y"):
        parse_poly("x^2 + y")


def test_poly_str_roundtrip():
    for t in ["x^2 - 4x - 1", "2x^3 - 5x - 1", "x^4 - x^3 - x^2 - x + 1"]:
        P = parse_poly(t)
        assert parse_poly(str(P)) == P


# ------------------------------------------------------------ invariants


def test_length_height_norm():
    P = parse_poly("x^2-4x-1")
    assert (length(P), height(P), l2norm_sq(P)) == (6, 4, 18)
    one = IntPolynomial((1,))
    assert (length(one), height(one), l2norm_sq(one)) == (1, 1, 1)
    for b in range(1, 20):
        assert length(family("P", 3, b).polynomial) == b + 2
        assert length(family("Q", 3, b).polynomial) == b + 3


@given(coeff_lists)
def test_norm_chain(c):
    P = IntPolynomial(tuple(c))
    H, S, L = height(P), l2norm_sq(P), length(P)
    assert H * H <= S <= L * L


def test_cauchy_bound():
    assert cauchy_root_bound(parse_poly("x^2-4x-1")) == 5
    assert cauchy_root_bound(parse_poly("x^3")) == 1
    assert cauchy_root_bound(parse_poly("2x^3-5x-1")) == F(7, 2)


def test_mahler_upper():
    m = mahler_upper_bound(parse_poly("x^2-4x-1"), 80)
    assert m.certainly_ge(F(4236, 1000)) and inside(m, np.sqrt(18), 1e-12)
    assert ZETA24 <= float(m.hi)
    assert mahler_upper_bound(parse_poly("x-1")).certainly_ge(1)
    assert mahler_upper_bound(parse_poly("x^2-x-1")).certainly_ge(F(1618, 1000))


# ------------------------------------------------------------ root counting


@pytest.mark.parametrize("poly,counts", [
    ("x^2-4x-1", (1, 0, 1)),
    ("x^2-1", (0, 2, 0)),
    ("x^4-x^3-x^2-x+1", (1, 2, 1)),
    ("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1", (1, 8, 1)),
    ("x^3", (1, 0, 0)),
    ("x^2+1", (0, 2, 0)),
    ("x-2", (0, 0, 1)),
])
def test_unit_disk_examples(poly, counts):
    assert count_roots_unit_disk(parse_poly(poly)) == counts


@settings(max_examples=300, deadline=None)
@given(coeff_lists)
def test_unit_disk_matches_numpy(c):
    P = IntPolynomial(tuple(c)).squarefree()
    assume(P.degree >= 1)
    got = count_roots_unit_disk(P)
    assert sum(got) == P.degree
    roots = np.roots(list(reversed(P.coeffs)))
    mods = np.abs(roots)
    # skip inputs numpy itself cannot resolve
    assume(all(abs(m - 1) > 1e-6 or abs(m - 1) < 1e-12 for m in mods))
    assert got == numpy_disk_counts(list(P.coeffs))


@settings(max_examples=100, deadline=None)
@given(coeff_lists)
def test_real_root_isolation_matches_numpy(c):
    P = IntPolynomial(tuple(c)).squarefree()
    assume(P.degree >= 1)
    iv = isolate_real_roots(P)
    assert len(iv) == count_real_roots(P.coeffs)
    for lo, hi in iv:
        assert count_real_roots(P.coeffs, lo, hi) == 1
    roots = np.roots(list(reversed(P.coeffs)))
    real = sorted(r.real for r in roots if abs(r.imag) < 1e-9)
    assume(len(real) == len(iv))
    for r, (lo, hi) in zip(real, iv):
        assert float(lo) - 1e-6 <= r <= float(hi) + 1e-6


# ------------------------------------------------------------ classification


def test_irreducibility_rejects_with_factor():
    with pytest.raises(ReducibleError) as exc:
        check_irreducible(parse_poly("x^2-1"))
    assert exc.value.factor is not None


@pytest.mark.parametrize("poly,cls,crit", [
    ("x^2-4x-1", "pisot", True),
    ("x^2-3x+1", "pisot", False),
    ("x^2-x-1", "pisot", False),
    ("2x^2-6x-1", "neither", False),
    ("x^4-x^3-x^2-x+1", "salem", False),
    ("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1", "salem", False),
    ("x^2+1", "not_applicable", False),
])
def test_classify(poly, cls, crit):
    rep = classify_pisot_salem(parse_poly(poly))
    assert rep.classification == cls
    assert rep.criterion_2_1 == crit
    if cls == "pisot":
        assert rep.monic and rep.root_counts[1] == 0 and rep.root_counts[2] == 1
    if cls == "salem":
        assert rep.dobrowolski["holds"]


def test_hot_criterion_examples():
    h = hot_criterion(parse_poly("x^2-4x-1"))
    assert h.holds and h.certified_pisot
    h = hot_criterion(parse_poly("x^2-x-1"))
    assert not h.holds and h.certified_pisot
    h = hot_criterion(family("P", 3, 10).polynomial)
    assert h.holds and h.certified_pisot


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=2, max_size=5), st.integers(1, 30))
def test_criterion_implies_pisot(low, top):
    # monic x^m + ... with a dominant coefficient often has a large real root
    c = list(low) + [-top, 1]
    P = IntPolynomial(tuple(c))
    try:
        rep = classify_pisot_salem(P)
    except ReducibleError:
        return
    if rep.criterion_2_1:
        assert rep.classification == "pisot"


@pytest.mark.parametrize("m", [2, 3, 4, 5])
@pytest.mark.parametrize("b", [1, 4, 9])
def test_family_root_in_unit_interval(m, b):
    fm = family("P", m, b)
    assert fm.zeta.compare(b) > 0 and fm.zeta.compare(b + 1) < 0
    q = family("Q", m, b)
    assert q.zeta.compare(F(b, 2)) > 0
    if b >= 4:
        assert hot_criterion(fm.polynomial).holds


def test_family_q_example():
    q = family("Q", 2, 6)
    assert q.zeta.compare(3) > 0 and length(q.polynomial) == 9
    assert classify_pisot_salem(q.polynomial).classification == "neither"


def test_l_over_zeta_minus_one_tends_to_one():
    prev = None
    for b, ref in L_OVER_ZETA_MINUS_ONE.items():
        v = l_over_zeta_minus_one(family("P", 2, b), 80)
        assert inside(v, ref)
        if prev is not None:
            assert v.certainly_lt(prev)
        prev = v


def test_family_rejects_bad_params():
    with pytest.raises(PreconditionError):
        family("P", 1, 3)
    with pytest.raises(PreconditionError):
        family("R", 2, 3)
