"""Certified calculators for the epsilon-tilde brackets, tau, theta and related lines."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import PreconditionError
from .exact import (
    DEFAULT_BITS,
    AlgebraicReal,
    DyadicInterval,
    FieldElement,
    e_enclosure,
    enclose,
    fmt_rational,
    lift,
    log_enclosure,
    nearest_integer,
    sign,
    sqrt_enclosure,
)

Value = Union[Fraction, DyadicInterval]


def _as_interval(v: Value, bits: int = DEFAULT_BITS) -> DyadicInterval:
    return v if isinstance(v, DyadicInterval) else DyadicInterval.from_rational(v, bits)


def value_json(v: Value):
    if isinstance(v, DyadicInterval):
        return v.to_json()
    return {"exact": fmt_rational(v), "approx": float(v)}


# ------------------------------------------------------------------- T and tau


def product_T(z, k: int = DEFAULT_BITS) -> DyadicInterval:
    """Enclosure of ``prod_{m>=0} (1 - z^(2^m))`` of width at most ``2^-k``."""
    z = Fraction(z)
    if not 0 < z < 1:
        raise PreconditionError(f"T(z) needs 0 < z < 1, got {z}")
    target = Fraction(1, 1 << k)
    cut = Fraction(1, 1 << (k + 2))
    guard = 16
    while True:
        w = k + guard
        zp = DyadicInterval.from_rational(z, w)
        prod = DyadicInterval.point(1)
        while True:
            prod = (prod * (1 - zp)).round(w)
            if zp.hi < cut:
                break
            zp = (zp * zp).round(w)
        # tail: prod_{m>m*} (1 - x_m) >= 1 - sum x_m >= 1 - 2u, u = z^(2^(m*+1))
        u = (zp * zp).round(w)
        tail = DyadicInterval(1 - 2 * u.hi, Fraction(1))
        out = (prod * tail).round(w)
        if out.width <= target:
            return out
        guard += 16


@dataclass(frozen=True)
class TauValue:
    p: int
    q: int
    value: DyadicInterval

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "value": self.value.to_json(),
                "provenance": "Dubickas tau(p/q) = E(q/p)/p"}


def tau(p: int, q: int, bits: int = DEFAULT_BITS) -> TauValue:
    """``tau(p/q) = (1 - (1 - q/p) T(q/p)) / (2q)`` with its three sanity inequalities certified."""
    if not (p > q >= 1) or math.gcd(p, q) != 1:
        raise PreconditionError(f"tau needs coprime p > q >= 1, got {p}/{q}")
    z = Fraction(q, p)
    w = bits + 4
    while True:
        T = product_T(z, w)
        val = DyadicInterval.hull((1 - (1 - z) * T.hi) / (2 * q), (1 - (1 - z) * T.lo) / (2 * q), w)
        checks = (val.certainly_gt(Fraction(1, p + q)), val.certainly_lt(Fraction(1, 2)),
                  val.certainly_gt(Fraction(1, p) - Fraction(q * q, p**3)))
        if all(checks) and val.width <= Fraction(1, 1 << bits):
            return TauValue(p, q, val)
        if w > bits + 512:
            raise AssertionError(f"tau({p}/{q}) invariants not certified: {checks}")
        w += 32


# ---------------------------------------------------------- epsilon brackets


@dataclass
class Bound:
    value: Value
    provenance: str
    candidates: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"value": value_json(self.value), "provenance": self.provenance,
                "candidates": [{"provenance": p, "value": value_json(v)} for p, v in self.candidates]}


def _mid(v: Value) -> Fraction:
    return v.mid if isinstance(v, DyadicInterval) else v


def _pick(cands: list, largest: bool) -> Bound:
    best = max(cands, key=lambda c: _mid(c[1])) if largest else min(cands, key=lambda c: _mid(c[1]))
    return Bound(best[1], best[0], list(cands))


def _le(a: Value, b: Value) -> bool:
    """Certified ``a <= b``."""
    ahi = a.hi if isinstance(a, DyadicInterval) else a
    blo = b.lo if isinstance(b, DyadicInterval) else b
    return ahi <= blo


@dataclass
class BoundsReport:
    zeta: object
    kind: str
    eps1_lower: Bound
    eps1_upper: Bound
    eps2_lower: Bound
    eps2_upper: Bound
    theta: Optional["ThetaResult"] = None
    comparison_lines: list = field(default_factory=list)
    gap_thresholds: Optional[tuple] = None
    asymmetric: Optional[dict] = None

    @property
    def eps1_consistent(self) -> bool:
        return _le(self.eps1_lower.value, self.eps1_upper.value)

    @property
    def eps2_consistent(self) -> bool:
        return _le(self.eps2_lower.value, self.eps2_upper.value)

    def to_json(self) -> dict:
        z = self.zeta
        out = {
            "zeta": z.to_json() if hasattr(z, "to_json") else value_json(z),
            "kind": self.kind,
            "eps1_lower": self.eps1_lower.to_json(),
            "eps1_upper": self.eps1_upper.to_json(),
            "eps2_lower": self.eps2_lower.to_json(),
            "eps2_upper": self.eps2_upper.to_json(),
            "eps1_consistent": self.eps1_consistent,
            "eps2_consistent": self.eps2_consistent,
            "theta": self.theta.to_json() if self.theta else None,
            "comparison_lines": [{"name": n, "value": value_json(v)} for n, v in self.comparison_lines],
        }
        if self.gap_thresholds is not None:
            zs, als = self.gap_thresholds
            out["gap_thresholds"] = {"zeta_side": [fmt_rational(zs[0]), fmt_rational(zs[1])],
                                     "alpha_side": [fmt_rational(als[0]), fmt_rational(als[1])],
                                     "provenance": "cardinality-gap corollaries"}
        if self.asymmetric is not None:
            out["asymmetric"] = self.asymmetric
        return out


def _enc(x, bits) -> Value:
    """Exact Fraction if possible, else an enclosure."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    r = x.rational_value() if hasattr(x, "rational_value") else None
    return r if r is not None else x.enclose(bits)


def _classify_algebraic(zeta: AlgebraicReal):
    from .polyalg import classify_pisot_salem, length, minimal_polynomial

    mz = minimal_polynomial(zeta)
    rep = classify_pisot_salem(mz.minpoly)
    root = rep.largest_real_root
    is_largest = root is not None and root == mz
    kind = rep.classification if is_largest and rep.classification in ("pisot", "salem") else "algebraic"
    return mz, kind, length(mz.minpoly)


def epsilon_bounds(zeta, L: Optional[int] = None, eps=None, bits: int = DEFAULT_BITS,
                   with_theta: bool = True, with_comparisons: bool = True) -> BoundsReport:
    """Two-sided brackets for eps1-tilde and eps2-tilde, each labelled with its source."""
    if isinstance(zeta, AlgebraicReal) and zeta.rational_value() is not None:
        zeta = zeta.rational_value()
    if isinstance(zeta, int):
        zeta = Fraction(zeta)
    z = lift(zeta)
    if sign(z - 1) <= 0:
        raise PreconditionError("epsilon bounds need zeta > 1")
    half = Fraction(1, 2)
    e1_lo = [("trivial", Fraction(0))]
    e1_hi = [("trivial", half)]
    e2_lo = [("generic zeta>1: 1/(2(zeta+1))", _enc(1 / (2 * (z + 1)), bits))]
    e2_hi = [("trivial", half)]
    if sign(z - 2) > 0:
        e1_hi.append(("generic zeta>1: 1/(2(zeta-1))", _enc(1 / (2 * (z - 1)), bits)))
    if sign(z - 3) > 0:
        e2_hi.append(("generic zeta>1: 1/(zeta-1)", _enc(1 / (z - 1), bits)))
    asym = None
    if isinstance(z, Fraction):
        p, q = z.numerator, z.denominator
        Lz = p + q if L is None else L
        t = tau(p, q, bits).value
        if q == 1:
            kind = "integer"
            e1_hi.append(("integer zeta: eps1 = 0", Fraction(0)))
            e2_lo.append(("Dubickas tau(p/1)", t))
            e2_hi.append(("integer zeta: 1/p - 1/(p^3+p^2)", Fraction(1, p) - Fraction(1, p**3 + p**2)))
        else:
            kind = "rational"
            e1_lo.append(("Dubickas tau(p/q)", t))
            e1_lo.append(("rational zeta: 1/(p+q)", Fraction(1, p + q)))
            e1_hi.append(("rational p/q table: q/(2(p-q))", Fraction(q, 2 * (p - q))))
            e2_lo.append(("Dubickas tau(p/q)", t))
            e2_lo.append(("rational p/q table: q/(2(p+q))", Fraction(q, 2 * (p + q))))
            e2_hi.append(("rational p/q table: (q-1)/(p-q)", Fraction(q - 1, p - q)))
            if q % 2 == 1:
                e1_hi.append(("rational odd-q refinement: (q-1)/(2(p-q))", Fraction(q - 1, 2 * (p - q))))
                e2_lo.append(("rational odd-q refinement: (q+1)/(2(p+q))", Fraction(q + 1, 2 * (p + q))))
            if q == 2:
                e1_hi.append(("rational q=2 refinement: 1/p", Fraction(1, p)))
            asym = asymmetric_bounds(p, q, bits).to_json()
        e2_lo.append(("Dubickas algebraic: 1/L", Fraction(1, Lz)))
    else:
        mz, kind, Lmin = _classify_algebraic(zeta)
        Lz = Lmin if L is None else L
        if kind == "pisot":
            e1_hi.append(("Pisot: eps1 = 0", Fraction(0)))
        elif kind == "algebraic":
            e1_lo.append(("Dubickas algebraic non-Pisot/Salem: 1/L", Fraction(1, Lz)))
        e2_lo.append(("Dubickas algebraic: 1/L", Fraction(1, Lz)))
    report = BoundsReport(
        zeta=zeta, kind=kind,
        eps1_lower=_pick(e1_lo, True), eps1_upper=_pick(e1_hi, False),
        eps2_lower=_pick(e2_lo, True), eps2_upper=_pick(e2_hi, False),
        asymmetric=asym,
    )
    if with_theta:
        report.theta = pollington_theta(zeta, bits)
    if with_comparisons:
        report.comparison_lines = comparison_bounds(zeta, None, bits)
    if eps is not None:
        report.gap_thresholds = gap_thresholds(eps)
    assert report.eps1_consistent and report.eps2_consistent, "bracket with lower > upper"
    return report


# ----------------------------------------------------------------- theta


def _pow_sign(z, r: int, c, bits: int = DEFAULT_BITS) -> int:
    """Exact sign of ``z^r - c``, enclosures first."""
    zi = enclose(z, bits + 16)
    for b in (bits, 2 * bits, 4 * bits):
        s = (zi.pow_rel(r, b) - c).sign()
        if s is not None and s != 0:
            return s
        zi = enclose(z, 2 * b + 16)
    return sign(lift(z) ** r - c)


@dataclass
class ThetaResult:
    r: int
    theta: DyadicInterval
    deviation: DyadicInterval  # 1/2 - theta
    vs_half_over_zeta_minus_one: Optional[bool]
    vs_generic_upper: Optional[bool]

    def to_json(self) -> dict:
        return {"r": self.r, "theta": self.theta.to_json(), "deviation": self.deviation.to_json(),
                "improves_1_over_2(zeta-1)": self.vs_half_over_zeta_minus_one,
                "improves_min(1/2,1/(zeta-1))": self.vs_generic_upper,
                "provenance": "Pollington-derived bound (conditional)"}


def _theta_r(z) -> int:
    zf = float(enclose(z, 60).mid)
    if zf > 4:
        r = 1
    else:
        lz = math.log(zf) if zf < 1e300 else 700.0
        r = 1
        while r * lz <= math.log(r + 3):
            r *= 2
        lo, hi = r // 2, r
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if mid * lz > math.log(mid + 3):
                hi = mid
            else:
                lo = mid
        r = max(1, hi)
    # certify: z^r > r + 3 and (r == 1 or z^(r-1) <= r + 2); z^t - t - 3 is convex in t
    while _pow_sign(z, r, r + 3) <= 0:
        r += 1
    while r > 1 and _pow_sign(z, r - 1, r + 2) > 0:
        r -= 1
    return r


def pollington_theta(zeta, bits: int = DEFAULT_BITS) -> ThetaResult:
    """``r = min{r >= 1: zeta^r > r+3}`` and ``theta = 1/2 - zeta^(-4r)/(2(r+1))``."""
    z = zeta if isinstance(zeta, (FieldElement, Fraction)) else lift(zeta)
    if sign(z - 1) <= 0:
        raise PreconditionError("theta needs zeta > 1")
    r = _theta_r(z)
    if isinstance(z, Fraction) and r <= 64:
        dev = _rel_from_rational(z ** (-4 * r) / (2 * (r + 1)), bits + 16)
    else:
        zi = enclose(z, bits + 32 + r.bit_length())
        inv = zi.reciprocal(bits + 48 + r.bit_length())
        dev = _div_rel(inv.pow_rel(4 * r, bits + 32), 2 * (r + 1), bits + 16)
    theta = DyadicInterval.point(Fraction(1, 2)) - dev
    vs1 = _certified_lt(theta, _enc(1 / (2 * (z - 1)), bits + 64))
    generic = Fraction(1, 2) if sign(z - 3) <= 0 else _enc(1 / (z - 1), bits + 64)
    vs2 = _certified_lt(theta, generic)
    return ThetaResult(r, theta, dev, vs1, vs2)


def _certified_lt(a: Value, b: Value):
    """True / False when ``a < b`` is decided by the enclosures, else None."""
    ahi = a.hi if isinstance(a, DyadicInterval) else a
    alo = a.lo if isinstance(a, DyadicInterval) else a
    bhi = b.hi if isinstance(b, DyadicInterval) else b
    blo = b.lo if isinstance(b, DyadicInterval) else b
    if ahi < blo:
        return True
    if alo >= bhi:
        return False
    return None


def _rel_from_rational(x: Fraction, bits: int) -> DyadicInterval:
    mag = abs(x)
    e = mag.numerator.bit_length() - mag.denominator.bit_length() if mag else 0
    return DyadicInterval.from_rational(x, bits - e)


def _div_rel(x: DyadicInterval, n: int, bits: int) -> DyadicInterval:
    lo, hi = x.lo / n, x.hi / n
    mag = max(abs(lo), abs(hi))
    e = mag.numerator.bit_length() - mag.denominator.bit_length() if mag else 0
    return DyadicInterval.hull(lo, hi, bits - e)


def theta_crossing(tol_bits: int = 40) -> tuple[Fraction, Fraction]:
    """Bracket of the eta with ``theta(2+eta) = 1/(2(1+eta))``, width ``2^-tol_bits``."""

    def g(eta: Fraction) -> int:
        z = 2 + eta
        r = _theta_r(z)
        th = Fraction(1, 2) - z ** (-4 * r) / (2 * (r + 1))
        v = th - 1 / (2 * (z - 1))
        return (v > 0) - (v < 0)

    lo, hi = Fraction(0), Fraction(1, 1000)
    assert g(lo) < 0 < g(hi)
    while hi - lo > Fraction(1, 1 << tol_bits):
        mid = (lo + hi) / 2
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


# ------------------------------------------------------------ gap thresholds


def gap_thresholds(eps) -> tuple:
    """Bracket ``[max{1, 1/(2eps) - 1}, 1 + 1/eps]`` for both threshold families."""
    eps = Fraction(eps)
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    side = (max(Fraction(1), 1 / (2 * eps) - 1), 1 + 1 / eps)
    return side, side


# --------------------------------------------------------- comparison lines


def comparison_bounds(zeta, alpha=None, bits: int = DEFAULT_BITS) -> list:
    """Classical lines from the literature as ``(name, value)`` pairs."""
    z = lift(zeta)
    if sign(z - 1) <= 0:
        raise PreconditionError("comparison bounds need zeta > 1")
    out = [("Bertin et al. countable below 1/(2(1+zeta)^2)", _enc(1 / (2 * (1 + z) ** 2), bits))]
    if sign(z - 3) > 0:
        out.append(("Boyd 1/((zeta-1)(zeta-3))", _enc(1 / ((z - 1) * (z - 3)), bits)))
    out.append(("Lerma 1/(2(zeta-1))", _enc(1 / (2 * (z - 1)), bits)))
    if alpha is not None:
        a = Fraction(alpha)
        if a < 1:
            raise PreconditionError("log lines need alpha >= 1")
        w = bits + 16
        e = e_enclosure(w)
        zi = enclose(z, w)
        la = log_enclosure(a, w)
        one = DyadicInterval.point(1)
        zz1 = (zi * (zi + 1)).round(w)
        d1 = (2 * e * zz1 * (la + one)).round(w)
        out.append(("Pisot/Salem forcing 1/(2e zeta(zeta+1)(log alpha+1))", one.div(d1, bits)))
        sq = sqrt_enclosure(la, w) if la.hi > 0 else DyadicInterval.point(0)
        d2 = (e * (zi + 1) ** 2 * (sq + 2)).round(w)
        out.append(("Pisot/Salem forcing 1/(e(zeta+1)^2(sqrt(log alpha)+2))", one.div(d2, bits)))
        d3 = (e * zz1 * (la + one)).round(w)
        out.append(("Boyd 5/(e zeta(zeta+1)(log alpha+1))", DyadicInterval.point(5).div(d3, bits)))
    return out


# ------------------------------------------------------------- asymmetric


@dataclass
class AsymmetricBounds:
    p: int
    q: int
    tijdeman: Fraction
    gap_lower: Fraction
    gap_three_halves: Optional[Fraction]
    e_value: Fraction
    half_centered: DyadicInterval

    def to_json(self) -> dict:
        return {
            "p": self.p, "q": self.q,
            "tijdeman_upper": value_json(self.tijdeman),
            "gap_lower": value_json(self.gap_lower),
            "gap_lower_three_halves": value_json(self.gap_three_halves) if self.gap_three_halves else None,
            "e": value_json(self.e_value),
            "half_centered": self.half_centered.to_json(),
            "one_half_minus_half_centered": (DyadicInterval.point(Fraction(1, 2)) - self.half_centered).to_json(),
            "provenance": "Tijdeman; Dubickas gap 1/p; Dubickas half-centered",
        }


def asymmetric_bounds(p: int, q: int, bits: int = DEFAULT_BITS) -> AsymmetricBounds:
    if not (p > q >= 1) or math.gcd(p, q) != 1:
        raise PreconditionError(f"need coprime p > q >= 1, got {p}/{q}")
    z = Fraction(q, p)
    e = 1 - z if (p + q) % 2 == 0 else Fraction(1)
    T = product_T(z, bits + 8)
    hc = DyadicInterval.hull((1 - e * T.hi) / (2 * q), (1 - e * T.lo) / (2 * q), bits)
    three = Fraction(1, 3) if (p, q) == (3, 2) else None
    return AsymmetricBounds(p, q, Fraction(q - 1, p - q), Fraction(1, p), three, e, hc)


# --------------------------------------------------------- run-length bound


def hundertt_run_bound(p: int, q: int, alpha, n: int) -> int:
    """Largest admissible run length ``floor(log_q |A_n|)`` with ``A_n = <alpha (p/q)^n>``."""
    if not (p > q >= 2) or math.gcd(p, q) != 1:
        raise PreconditionError(f"need coprime p > q >= 2, got {p}/{q}")
    alpha = Fraction(alpha)
    if alpha == 0:
        raise PreconditionError("alpha must be nonzero")
    if abs(alpha) * Fraction(p, q) ** n < 1:
        raise PreconditionError(f"n = {n} is below n0 = max(0, -log|alpha|/log(p/q))")
    A = abs(nearest_integer(alpha * Fraction(p, q) ** n))
    if A == 0:
        raise PreconditionError("A_n = 0")
    k = 0
    while q ** (k + 1) <= A:
        k += 1
    return k


def run_bound_asymptotic(p: int, q: int, alpha, n: int) -> float:
    """The asymptotic display ``n(log p/log q - 1) + log|alpha|`` (informational)."""
    return n * (math.log(p) / math.log(q) - 1) + math.log(abs(float(Fraction(alpha))))
