"""Polynomial invariants, exact unit-disk root counts and Pisot/Salem classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import PreconditionError, ReducibleError
from .exact import DEFAULT_BITS, AlgebraicReal, DyadicInterval
from .intpoly import (
    IntPolynomial,
    cauchy_index,
    count_real_roots,
    isolate_real_roots,
    parse_poly,
    q_divmod,
    q_gcd,
)


def _poly(P) -> IntPolynomial:
    return P if isinstance(P, IntPolynomial) else parse_poly(P)


def length(P) -> int:
    return sum(abs(c) for c in _poly(P).coeffs)


def height(P) -> int:
    return max(abs(c) for c in _poly(P).coeffs)


def l2norm_sq(P) -> int:
    P = _poly(P)
    s = sum(c * c for c in P.coeffs)
    h, L = height(P), length(P)
    assert h * h <= s <= L * L, "H <= ||P||_2 <= L violated"
    return s


def cauchy_root_bound(P) -> Fraction:
    """``1 + H/|a_m|`` with H taken over the lower coefficients (so ``X^m`` gives 1)."""
    P = _poly(P)
    if P.degree < 1:
        raise PreconditionError("root bound of a constant polynomial")
    lower = max((abs(c) for c in P.coeffs[:-1]), default=0)
    return 1 + Fraction(lower, abs(P.leading))


def mahler_upper_bound(P, bits: int = DEFAULT_BITS) -> DyadicInterval:
    """Enclosure of ``||P||_2``, which is an upper bound for ``M(P)``."""
    P = _poly(P)
    if P.degree < 1:
        raise PreconditionError("Mahler bound of a constant polynomial")
    return DyadicInterval.point(l2norm_sq(P)).sqrt(bits)


# ------------------------------------------------------------ root counting


def _chebyshev_fold(C: list) -> list:
    """For palindromic ``C`` of degree 2h return ``S`` with ``C(z) = z^h S(z + 1/z)``."""
    h = (len(C) - 1) // 2
    V = [[Fraction(2)], [Fraction(0), Fraction(1)]]
    for _ in range(2, h + 1):
        a, b = V[-1], V[-2]
        nxt = [Fraction(0)] + list(a)
        for i, c in enumerate(b):
            nxt[i] -= c
        V.append(nxt)
    S = [Fraction(0)] * (h + 1)
    S[0] += C[h]
    for j in range(1, h + 1):
        for i, c in enumerate(V[j]):
            S[i] += C[h + j] * c
    while S and S[-1] == 0:
        S.pop()
    return S


def _binom_poly(sign: int, k: int) -> list:
    """Ascending coefficients of ``(w + sign)^k``."""
    out = [1]
    for _ in range(k):
        nxt = [0] * (len(out) + 1)
        for i, c in enumerate(out):
            nxt[i + 1] += c
            nxt[i] += sign * c
        out = nxt
    return out


def _inside_count_no_pairs(D: list) -> int:
    """Roots of ``D`` in the open unit disk, assuming no root on the circle
    and no pair ``z, 1/z`` (so the Moebius image has no imaginary-axis symmetry)."""
    n = len(D) - 1
    if n == 0:
        return 0
    R = [0] * (n + 1)
    for k, d in enumerate(D):
        if d == 0:
            continue
        prod = _mul_int(_binom_poly(1, k), _binom_poly(-1, n - k))
        for i, c in enumerate(prod):
            R[i] += d * c
    assert R[n] != 0
    r = list(reversed(R))  # descending: r[0] is the leading coefficient
    den = [0] * (n + 1)
    num = [0] * (n + 1)
    for k in range(n + 1):
        e = n - k
        if k % 2 == 0:
            den[e] = (-1) ** (k // 2) * r[k]
        else:
            num[e] = (-1) ** ((k - 1) // 2) * r[k]
    index = cauchy_index(num, den)
    right = (n - index) // 2
    return n - right  # left half plane <-> open unit disk


def _mul_int(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def count_roots_unit_disk(P) -> tuple[int, int, int]:
    """Distinct roots of ``P`` strictly inside, on, and outside the unit circle.

    Exact: zero and +-1 roots are split off, reciprocal pairs are isolated by
    ``gcd(P, P*)`` and folded to a real polynomial in ``z + 1/z``, and the rest
    is counted by a Routh-Hurwitz Cauchy index after a Moebius transform.
    """
    P = _poly(P)
    sq = P.squarefree()
    if sq.degree == 0:
        return (0, 0, 0)
    inside = on = 0
    cur = list(sq.coeffs)
    if cur[0] == 0:
        inside += 1
        cur = cur[1:]
    for root in (1, -1):
        if sum(c * root**i for i, c in enumerate(cur)) == 0:
            on += 1
            cur, _ = q_divmod(cur, [-root, 1])
            cur = IntPolynomial.from_q(cur).coeffs if len(cur) > 1 else [1]
    cur = list(IntPolynomial.from_q(cur).coeffs) if len(cur) > 1 else [1]
    outside = 0
    if len(cur) > 1:
        C = q_gcd(cur, list(reversed(cur)))
        if len(C) > 1:
            Ci = list(IntPolynomial.from_q(C).coeffs)
            S = _chebyshev_fold(Ci)
            on_c = 0
            if len(S) > 1:
                on_c = 2 * count_real_roots(S, Fraction(-2), Fraction(2))
            pairs = (len(Ci) - 1 - on_c) // 2
            inside += pairs
            outside += pairs
            on += on_c
            D, _ = q_divmod(cur, C)
            D = list(IntPolynomial.from_q(D).coeffs) if len(D) > 1 else [1]
        else:
            D = cur
        ins = _inside_count_no_pairs(D)
        inside += ins
        outside += len(D) - 1 - ins
    assert inside + on + outside == sq.degree
    return (inside, on, outside)


# ------------------------------------------------------------ classification


def irreducible_factors(P) -> list:
    """Nonconstant irreducible factors over Q with multiplicity (sympy)."""
    import sympy

    P = _poly(P)
    x = sympy.Symbol("x")
    expr = sympy.Poly(list(reversed(P.coeffs)), x, domain="ZZ")
    _, facs = expr.factor_list()
    out = []
    for f, mult in facs:
        cs = [int(c) for c in reversed(f.all_coeffs())]
        out.append((IntPolynomial(tuple(cs)).primitive(), mult))
    return out


def check_irreducible(P) -> IntPolynomial:
    P = _poly(P)
    if P.degree < 1:
        raise PreconditionError("constant polynomial")
    facs = irreducible_factors(P)
    if len(facs) != 1 or facs[0][1] != 1:
        witness = facs[0][0]
        raise ReducibleError(f"{P} is reducible over Q; factor {witness}", factor=witness)
    return P.primitive()


def minimal_polynomial(x: AlgebraicReal) -> AlgebraicReal:
    """Replace the defining polynomial of ``x`` by its irreducible factor."""
    if x.degree == 1:
        return x
    iso = x.isolator
    for f, _ in irreducible_factors(x.minpoly):
        if count_real_roots(f, iso.lo, iso.hi) == 1:
            return AlgebraicReal(f, iso.lo, iso.hi)
    raise AssertionError("no irreducible factor vanishes at the isolated root")


@dataclass
class PisotReport:
    polynomial: IntPolynomial
    classification: str
    largest_real_root: Optional[AlgebraicReal]
    criterion_2_1: bool
    root_counts: tuple
    monic: bool
    length: int
    mahler: tuple  # (lower, DyadicInterval upper)
    dobrowolski: Optional[dict] = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        lo, hi = self.mahler
        return {
            "polynomial": self.polynomial.to_json(),
            "poly": str(self.polynomial),
            "classification": self.classification,
            "largest_real_root": self.largest_real_root.to_json() if self.largest_real_root else None,
            "criterion_2_1": self.criterion_2_1,
            "root_counts": {"inside": self.root_counts[0], "on_circle": self.root_counts[1],
                            "outside": self.root_counts[2]},
            "monic": self.monic,
            "length": self.length,
            "mahler_interval": {"lower": lo.to_json(), "upper": hi.to_json()},
            "dobrowolski": self.dobrowolski,
            "provenance": "exact unit-disk root count; criterion zeta > L/2 + 1",
            "notes": self.notes,
        }


def _mahler_lower(P: IntPolynomial, bits: int) -> DyadicInterval:
    """``|a_m|`` times the certified real roots of modulus > 1 (a lower bound for M)."""
    acc = DyadicInterval.point(abs(P.leading))
    for lo, hi in isolate_real_roots(P):
        root = AlgebraicReal(P, lo, hi)
        if root.compare(1) > 0 or root.compare(-1) < 0:
            acc = (acc * abs(root.refine(bits))).round_rel(bits)
    return acc


def classify_pisot_salem(P, bits: int = DEFAULT_BITS) -> PisotReport:
    P = check_irreducible(P)
    counts = count_roots_unit_disk(P)
    inside, on, outside = counts
    roots = isolate_real_roots(P)
    zeta = AlgebraicReal(P, *roots[-1]) if roots else None
    L = length(P)
    m_lo = _mahler_lower(P, bits)
    m_hi = mahler_upper_bound(P, bits)
    report = PisotReport(P, "not_applicable", None, False, counts, P.leading == 1, L, (m_lo, m_hi))
    if zeta is None or zeta.compare(1) <= 0:
        report.notes.append("no real root > 1")
        return report
    report.largest_real_root = zeta
    report.criterion_2_1 = zeta.compare(Fraction(L, 2) + 1) > 0
    if report.monic and outside == 1 and on == 0:
        report.classification = "pisot"
    elif report.monic and outside == 1 and on >= 1:
        # the on-circle count is exact (gcd with the reciprocal), so the candidate is upgraded
        report.classification = "salem"
    else:
        report.classification = "neither"
        if not report.monic:
            report.notes.append("not monic, hence not an algebraic integer")
    if on > 0:
        ok = m_lo.certainly_le(Fraction(L, 2))
        report.dobrowolski = {"L": L, "two_M_lower": (2 * m_lo).to_json(), "holds": ok}
        assert ok, f"L(P) >= 2 M(P) failed for {P}"
    if report.criterion_2_1:
        assert report.classification == "pisot", f"criterion holds but {P} classified {report.classification}"
    return report


@dataclass
class HotResult:
    holds: bool
    certified_pisot: bool
    zeta: AlgebraicReal
    length: int
    classification: str

    def to_json(self) -> dict:
        return {"holds": self.holds, "certified_pisot": self.certified_pisot,
                "zeta": self.zeta.to_json(), "length": self.length,
                "classification": self.classification}


def hot_criterion(P) -> HotResult:
    """Decide ``2(zeta - 1) > L(P)`` exactly and cross-check against root counting."""
    rep = classify_pisot_salem(P)
    if rep.largest_real_root is None:
        raise PreconditionError(f"{rep.polynomial} has no real root > 1")
    holds = rep.criterion_2_1
    pisot = rep.classification == "pisot"
    if holds:
        assert pisot, "criterion holds for a non-Pisot polynomial"
    return HotResult(holds, pisot, rep.largest_real_root, rep.length, rep.classification)


@dataclass
class FamilyMember:
    kind: str
    m: int
    b: int
    polynomial: IntPolynomial
    zeta: AlgebraicReal

    @property
    def length(self) -> int:
        return length(self.polynomial)

    def to_json(self) -> dict:
        return {"kind": self.kind, "m": self.m, "b": self.b, "polynomial": self.polynomial.to_json(),
                "poly": str(self.polynomial), "zeta": self.zeta.to_json(), "length": self.length}


def family(kind: str, m: int, b: int) -> FamilyMember:
    """``X^m - bX^(m-1) - 1`` (kind P) or ``2X^m - bX^(m-1) - 1`` (kind Q)."""
    kind = kind.upper()
    if m < 2 or b < 1:
        raise PreconditionError("need m >= 2 and b >= 1")
    lead = {"P": 1, "Q": 2}.get(kind)
    if lead is None:
        raise PreconditionError(f"unknown family kind {kind!r}")
    coeffs = [-1] + [0] * (m - 2) + [-b, lead]
    poly = IntPolynomial(tuple(coeffs))
    lo = Fraction(b, lead)
    zeta = AlgebraicReal(poly, lo, lo + 1)
    return FamilyMember(kind, m, b, poly, zeta)


def l_over_zeta_minus_one(member: FamilyMember, bits: int = DEFAULT_BITS) -> DyadicInterval:
    z = member.zeta.refine(bits + 8)
    return DyadicInterval.point(member.length).div(z - 1, bits)


__all__ = [
    "length", "height", "l2norm_sq", "cauchy_root_bound", "mahler_upper_bound",
    "count_roots_unit_disk", "classify_pisot_salem", "hot_criterion", "family",
    "minimal_polynomial", "check_irreducible", "PisotReport", "HotResult", "FamilyMember",
]
