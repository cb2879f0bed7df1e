from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from powmod1.construct import build_alpha
from powmod1.errors import InvalidPath, PreconditionError
from powmod1.exact import frac, lift, nearest_integer, parse_real
from powmod1.polyalg import family
from powmod1.tree import (
    avoided_interval,
    detect_recurrence,
    enumerate_paths,
    expand,
    path_to_alpha,
    path_to_alpha_exact,
    w_set_test,
)
from powmod1.verify import verify_membership

from oracles import I_ZETA24, PATH_ALPHA_1_4_17_72, inside

Z24 = "x^2-4x-1"


def z24():
    return parse_real(Z24)


# ------------------------------------------------------------ expand


@pytest.mark.parametrize("node,kids", [(2, [8, 9]), (1, [4]), (3, [13])])
def test_expand_zeta24(node, kids):
    assert expand(z24(), F(1, 6), node) == kids


def test_expand_integer_zeta():
    assert expand(2, F(1, 4), 5) == [10]
    assert expand(10, F(1, 2), 1) == list(range(6, 15))  # 10 +- 9/2


def test_expand_boundary_included():
    # zeta = 3, eps = 1/2: window 3 +- 1 has integer ends
    assert expand(3, F(1, 2), 1) == [2, 3, 4]
    assert expand(3, F(1, 4), 1) == [3]
    assert expand(F(3, 2), F(1, 2), 1) == []


def _admissible(M, N, z, eps):
    return M - eps >= z * (N - eps) and M + eps <= z * (N + eps)


@settings(max_examples=300, deadline=None)
@given(st.fractions(F(11, 10), 50, max_denominator=60), st.fractions(F(1, 50), F(1, 2), max_denominator=50),
       st.integers(-200, 200))
def test_expand_brute_force(z, eps, N):
    assume(z > 1 and 0 < eps <= F(1, 2))
    kids = expand(z, eps, N)
    for M in kids:
        assert _admissible(M, N, z, eps)
    lo = kids[0] - 1 if kids else nearest_integer(z * N)
    hi = kids[-1] + 1 if kids else nearest_integer(z * N)
    for M in range(lo - 2, hi + 3):
        assert _admissible(M, N, z, eps) == (M in kids)


@settings(max_examples=200, deadline=None)
@given(st.fractions(F(1, 50), F(1, 2), max_denominator=50), st.integers(0, 10), st.integers(-100, 100))
def test_expand_nonempty_and_branching(eps, extra, N):
    z = 1 + 1 / (2 * eps) + F(extra, 3)
    assert len(expand(z, eps, N)) >= 1
    z = 1 + 1 / eps + F(extra, 3)
    f = frac(z * N)
    if 1 - eps * z + eps <= f <= eps * z - eps:
        assert len(expand(z, eps, N)) >= 2


# ------------------------------------------------------------ paths


@pytest.mark.parametrize("seed", [1, 3])
def test_single_path_seeds(seed):
    e = enumerate_paths(z24(), F(1, 6), seed, 20)
    assert len(e.paths) == 1 and not e.truncated
    rep = e.paths[0]
    assert rep.deterministic_at == 0
    assert rep.recurrence.order == 2 and rep.recurrence.coeffs == (4, 1) and rep.recurrence.constant == 0


def test_seed_two_branches():
    e = enumerate_paths(z24(), F(1, 6), 2, 20)
    assert len(e.paths) == 2
    assert sorted(p.path[1] for p in e.paths) == [8, 9]
    for p in e.paths:
        assert p.deterministic_at == 1


def test_seed_three_prefix():
    e = enumerate_paths(z24(), F(1, 6), 3, 12)
    assert e.paths[0].path[:4] == [3, 13, 55, 233]


def test_wider_eps_seed_three():
    e = enumerate_paths(z24(), F(2627, 10000), 3, 12)
    assert len(e.paths) > 1
    recs = {(p.recurrence.coeffs, p.recurrence.constant) for p in e.paths if p.recurrence}
    assert ((4, 1), 0) in recs
    assert ((4, 1), -1) in recs


def test_deterministic_paths_follow_rounding():
    z = z24()
    g = lift(z)
    for seed in (1, 2, 3, 5):
        for rep in enumerate_paths(z, F(1, 6), seed, 15).paths:
            j = rep.deterministic_at
            assert j is not None
            for i in range(j, len(rep.path) - 1):
                assert rep.path[i + 1] == nearest_integer(g * rep.path[i])


def test_budget_flag():
    e = enumerate_paths(10, F(1, 2), 1, 6, max_paths=50)
    assert e.truncated and len(e.paths) == 50
    assert e.to_json()["budget_exhausted"]


def test_dot_output():
    e = enumerate_paths(z24(), F(1, 6), 2, 3)
    dot = e.to_dot()
    assert dot.startswith("digraph") and '"0:2" -> "1:8"' in dot


# ------------------------------------------------------------ recurrences


@pytest.mark.parametrize("path,order,coeffs,const", [
    ([1, 4, 17, 72, 305], 2, (4, 1), 0),
    ([3, 13, 55, 233], 2, (4, 1), 0),
    ([2, 4, 6, 8], 1, (1,), 2),
    ([1, 2, 4, 8, 16], 1, (2,), 0),
])
def test_detect_recurrence(path, order, coeffs, const):
    r = detect_recurrence(path)
    assert (r.order, r.coeffs, r.constant) == (order, coeffs, const)


def test_detect_recurrence_none():
    assert detect_recurrence([1, 5, 2, 9, 3, 7, 4, 100, 6]) is None


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-3, 3), st.integers(-9, 9), st.integers(-9, 9))
def test_detect_recurrence_recovers_sequence(a, b, c, x0, x1):
    seq = [x0, x1]
    for _ in range(10):
        seq.append(a * seq[-1] + b * seq[-2] + c)
    r = detect_recurrence(seq)
    assert r is not None and r.order <= 2
    # whatever rule is found must regenerate the sequence
    for j in range(r.order, len(seq)):
        assert seq[j] == sum(k * seq[j - 1 - i] for i, k in enumerate(r.coeffs)) + r.constant


# ------------------------------------------------------------ W set


def test_wtest_odd_q_never_hits():
    for z, q in [(F(5, 3), 3), (F(7, 3), 3), (F(8, 5), 5)]:
        r = w_set_test(z, 1, 300, F(1, 2 * q) - F(1, 1000))
        assert not r.hit


def test_wtest_pisot_and_integer():
    r = w_set_test(z24(), 1, 30, F(1, 25))
    assert not r.hit
    assert not w_set_test(7, 3, 50, F(49, 100)).hit


def test_wtest_even_q_hits():
    r = w_set_test(F(5, 2), 1, 10, F(1, 100))
    assert r.hit and r.first_hit == 0


def test_wtest_precondition():
    with pytest.raises(PreconditionError):
        w_set_test(F(3, 2), 1, 10, F(1, 10))


# ------------------------------------------------------------ induced alpha


def test_path_to_alpha_example():
    iv = path_to_alpha(z24(), F(1, 6), [1, 4, 17, 72])
    assert inside(iv, PATH_ALPHA_1_4_17_72[0]) and inside(iv, PATH_ALPHA_1_4_17_72[1])


def test_path_to_alpha_width():
    z = z24()
    lo, hi = path_to_alpha_exact(z, F(1, 6), [1, 4, 17, 72])
    assert hi - lo == F(1, 3) / lift(z) ** 3


def test_path_to_alpha_shift_invariant():
    # prepend a parent: 1 -> 4, so [1,4,...] at n0 equals [4,...] at n0+1
    z = z24()
    a = path_to_alpha_exact(z, F(1, 6), [1, 4, 17, 72], 0)
    b = path_to_alpha_exact(z, F(1, 6), [4, 17, 72], 1)
    assert a == b


def test_path_to_alpha_invalid():
    with pytest.raises(InvalidPath):
        path_to_alpha(z24(), F(1, 6), [1, 5])


def test_path_to_alpha_matches_build_alpha():
    c = build_alpha(10, F(1, 6), (0, 1), 8)
    path = [e.N for e in c.entries]
    lo, hi = path_to_alpha_exact(10, F(1, 6), path, c.n0)
    assert c.final.lo <= lo and hi <= c.final.hi


def test_path_to_alpha_midpoint_member():
    # the final interval is nested in every earlier one, so no widening is needed
    z = z24()
    eps = F(1, 6)
    for rep in enumerate_paths(z, eps, 2, 10).paths:
        lo, hi = path_to_alpha_exact(z, eps, rep.path)
        res = verify_membership((lo + hi) / 2, z, eps, range(0, len(rep.path)))
        assert res.ok


# ------------------------------------------------------------ I(zeta)


def test_avoided_interval_zeta24():
    a = avoided_interval(Z24)
    assert a.nonempty and a.length == 6
    assert inside(a.lo, I_ZETA24[0]) and inside(a.hi, I_ZETA24[1])
    assert round(float(a.lo.mid), 4) == 0.4607 and round(float(a.hi.mid), 4) == 0.5393


def test_avoided_interval_golden_empty():
    assert not avoided_interval("x^2-x-1").nonempty


def test_avoided_interval_family():
    a = avoided_interval(family("P", 3, 10).polynomial)
    assert a.nonempty and a.lo.certainly_lt(a.hi.lo)
