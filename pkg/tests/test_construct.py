import random
from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from powmod1.construct import (
    build_alpha,
    build_zeta,
    certify_alpha_countable,
    certify_zeta_countable,
    check_bernardo,
    gaps_to_insertions,
    membership_check,
    z_set_alpha,
    z_set_digits,
)
from powmod1.errors import BranchingUnavailable, PreconditionError
from powmod1.exact import dist_exact, parse_real
from powmod1.verify import verify_membership


def _disjoint(a, b):
    x, y = a.entries[-1], b.entries[-1]
    exact = x.hi < y.lo or y.hi < x.lo
    # the dyadic enclosures must agree with the exact verdict
    assert exact == (a.final.hi < b.final.lo or b.final.hi < a.final.lo)
    return exact


# ------------------------------------------------------------ Bernardo lemma


def test_bernardo_examples():
    assert check_bernardo(1, 2, F(1, 4))
    assert check_bernardo(3, 10, F(1, 10))


def test_bernardo_preconditions():
    for args in [(0, 2, F(1, 4)), (1, 1, F(1, 4)), (1, 2, 0), (1, 2, F(1, 2))]:
        with pytest.raises(PreconditionError):
            check_bernardo(*args)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 40), st.fractions(F(3, 2), 10**4, max_denominator=1000),
       st.fractions(F(1, 1000), F(499, 1000), max_denominator=1000))
def test_bernardo_property(n, x, eps):
    assume(x > F(3, 2) and 0 < eps < F(1, 2))
    assert check_bernardo(n, x, eps)


def test_bernardo_ten_thousand_random():
    rng = random.Random(31415)
    for _ in range(10**4):
        n = rng.randint(1, 60)
        x = F(3, 2) + F(rng.randint(1, 10**6), rng.randint(1, 10**4))
        eps = F(rng.randint(1, 999), 2000)
        assert check_bernardo(n, x, eps), (n, x, eps)


def test_bernardo_n_one_is_exact_identity():
    # (x+e)^2 - (x-e)^2 = 4ex >= 2ex
    assert check_bernardo(1, F(7, 4), F(1, 3))


# ------------------------------------------------------------ zeta side


def test_build_zeta_examples():
    c = build_zeta(1, F(3, 5), (F(21, 10), 5), 10)
    assert c.is_nested() and membership_check(c)
    r = c.sample_point()
    assert all(dist_exact(r ** (c.n0 + j)) <= F(3, 5) for j in range(11))
    c = build_zeta(2, F(51, 100), (2, 3), 10)
    assert c.is_nested() and membership_check(c)


def test_build_zeta_start_condition():
    c = build_zeta(3, F(1, 5), (F(7, 2), 9), 6)
    alpha, eps, n = F(3), F(1, 5), c.n0
    N0 = c.entries[0].N
    assert N0 - eps > alpha * (1 + 1 / (2 * eps)) ** n
    # I_0 lies inside the window
    assert (N0 - eps) / alpha > F(7, 2) ** n and (N0 + eps) / alpha < 9**n


def test_build_zeta_branching_disjoint():
    base = "0" * 8
    chains = [build_zeta(1, F(1, 4), (5, 8), 8, bits=base[:k] + "1" + base[k + 1:], mode="branching")
              for k in range(8)]
    ref = build_zeta(1, F(1, 4), (5, 8), 8, bits=base, mode="branching")
    for c in chains:
        assert _disjoint(ref, c)
        assert membership_check(c)


def test_build_zeta_dense_branch_unavailable():
    # window close to the threshold: only one admissible integer somewhere along the chain
    with pytest.raises(BranchingUnavailable):
        build_zeta(1, F(2, 5), (F(9, 4), F(23, 10)), 12, bits="1" * 12)


def test_build_zeta_preconditions():
    with pytest.raises(PreconditionError):
        build_zeta(1, F(1, 4), (2, 3), 5)  # window below 1 + 1/(2 eps) = 3
    with pytest.raises(PreconditionError):
        build_zeta(0, F(1, 4), (4, 5), 5)
    with pytest.raises(PreconditionError):
        build_zeta(1, F(1, 4), (4, 5), 5, mode="branching")


def test_build_zeta_targets():
    c = build_zeta(1, F(1, 5), (4, 6), 8, targets=[F(1, 2)])
    r = c.sample_point()
    for j in range(9):
        x = r ** (c.n0 + j)
        d = abs(x - (c.entries[j].N + F(1, 2)))
        assert d <= F(1, 5)


# ------------------------------------------------------------ zeta-side certificate


def test_certify_zeta_interior_forced():
    cert = certify_zeta_countable(1, F(1, 10), (1, F(7, 2)))
    assert cert.verdict == "forced_unique"
    assert cert.n0 is not None
    assert all(c["ok"] for c in cert.checks if c["n"] >= cert.n0)


def test_certify_zeta_boundary_not_uniform():
    # at bound = 1/(2 eps) - 1 the mean-value bound is off by a factor (n+1)/n for every n
    assert certify_zeta_countable(1, F(1, 10), (1, 4)).verdict == "not_forced"
    assert certify_zeta_countable(1, F(1, 6), (1, 2)).verdict == "not_forced"
    assert certify_zeta_countable(1, F(1, 6), (1, F(19, 10))).verdict == "forced_unique"


def test_certify_zeta_preconditions():
    with pytest.raises(PreconditionError):
        certify_zeta_countable(1, F(1, 2), (1, 2))
    with pytest.raises(PreconditionError):
        certify_zeta_countable(1, F(1, 10), (1, 5))


# ------------------------------------------------------------ alpha side


def test_build_alpha_ten():
    c = build_alpha(10, F(1, 6), (0, 1), 20)
    assert c.depth == 20 and c.is_nested()
    alpha = c.sample_point()
    assert verify_membership(alpha, 10, F(1, 6), c.horizon).ok
    last = c.entries[-1]
    assert last.hi - last.lo == F(1, 3) / F(10) ** (c.n0 + 20)


def test_build_alpha_boundary_four():
    c = build_alpha(4, F(1, 6), (0, 1), 20)
    assert all(e.options == 1 for e in c.entries)
    assert membership_check(c)


def test_build_alpha_pisot_seed_two():
    z = parse_real("x^2-4x-1")
    a = build_alpha(z, F(1, 6), (0, 1), 1, seed=2, bits="0")
    b = build_alpha(z, F(1, 6), (0, 1), 1, seed=2, bits="1")
    assert (a.entries[1].N, b.entries[1].N) == (8, 9)
    assert a.entries[1].options == 2
    with pytest.raises(BranchingUnavailable):
        build_alpha(z, F(1, 6), (0, 1), 3, seed=1, bits="1")


def test_build_alpha_n0_minimal():
    c = build_alpha(F(7, 2), F(1, 5), (F(1, 3), F(1, 2)), 4)
    width = F(1, 2) - F(1, 3)
    assert width * F(7, 2) ** c.n0 > F(7, 5)
    assert c.n0 == 0 or width * F(7, 2) ** (c.n0 - 1) <= F(7, 5)
    assert membership_check(c)


def test_build_alpha_preconditions():
    with pytest.raises(PreconditionError):
        build_alpha(3, F(1, 6), (0, 1), 5)  # 3 < 1 + 1/(2 eps) = 4
    with pytest.raises(PreconditionError):
        build_alpha(5, F(1, 6), (0, 1), 5, mode="branching")  # 5 < 7
    with pytest.raises(PreconditionError):
        build_alpha(10, F(1, 6), (1, 0), 5)


@settings(max_examples=25, deadline=None)
@given(st.integers(7, 20), st.text("01", min_size=6, max_size=6))
def test_build_alpha_branching_bitflip(z, bits):
    eps = F(1, 6)
    c = build_alpha(z, eps, (0, 1), 6, bits=bits, mode="branching")
    assert membership_check(c)
    for k in range(6):
        flipped = bits[:k] + ("1" if bits[k] == "0" else "0") + bits[k + 1:]
        d = build_alpha(z, eps, (0, 1), 6, bits=flipped, mode="branching")
        assert _disjoint(c, d)


# ------------------------------------------------------------ alpha-side certificate


@pytest.mark.parametrize("zeta,eps,verdict", [
    (10, F(1, 23), "forced_unique"),
    (F(7, 3), F(3, 20), "forced_unique"),
    (F(5, 2), F(1, 7), "not_forced"),
    (10, F(1, 20), "not_forced"),
])
def test_certify_alpha(zeta, eps, verdict):
    assert certify_alpha_countable(zeta, eps).verdict == verdict


def test_certify_alpha_irrational_equality_impossible():
    z = parse_real("x^2-4x-1")
    assert certify_alpha_countable(z, F(1, 11)).verdict == "forced_unique"
    assert certify_alpha_countable(z, F(1, 10)).verdict == "not_forced"


@given(st.fractions(F(1, 500), F(1, 2), max_denominator=500),
       st.fractions(F(501, 500), 1000, max_denominator=500))
def test_regimes_exclusive(eps, zeta):
    forced = (zeta + 1) * eps < F(1, 2)
    dense = zeta >= 1 + 1 / (2 * eps)
    assert not (forced and dense)


# ------------------------------------------------------------ Z set


def test_zset_no_insertions():
    alpha, rep = z_set_alpha(10, [], 200)
    assert alpha == F(1, 11)
    assert rep.max_dist == F(1, 11)
    x = alpha
    for n in range(1, 200):
        x *= 10
        assert dist_exact(x) == F(1, 11)


def test_zset_single_insertion_hits_bound():
    _, rep = z_set_alpha(10, [3], 200)
    assert rep.max_dist == F(109, 1100) and rep.within_sharp


def test_zset_digits_and_value():
    d = z_set_digits(10, [1], 9)
    assert d == [0, 9, 0, 9, 9, 0, 9, 0, 9]
    alpha, _ = z_set_alpha(10, [1], 10)
    expected = F(9099, 10**5) + F(1, 11) / 10**5
    assert alpha == expected


def test_zset_rejects_bad_schedules():
    with pytest.raises(PreconditionError):
        z_set_alpha(10, [5, 5], 100)
    with pytest.raises(PreconditionError):
        z_set_alpha(10, [5, 15, 20], 100)  # gaps 10 then 5
    with pytest.raises(PreconditionError):
        z_set_alpha(1, [], 100)


def test_zset_binary():
    alpha, rep = z_set_alpha(2, [], 100)
    assert alpha == F(1, 3) and rep.max_dist == F(1, 3)


def test_gaps_to_insertions():
    assert gaps_to_insertions([5, 10, 20, 40], 1000) == [5, 15, 35, 75]
    assert gaps_to_insertions([5, 10, 20, 40], 40) == [5, 15]
