"""Exact rationals, dyadic enclosures, algebraic reals and arithmetic in Q(zeta).

Rationals are :class:`fractions.Fraction`.  Every non-rational quantity is
either carried symbolically (an :class:`AlgebraicReal` or a
:class:`FieldElement`) or as a :class:`DyadicInterval` that is guaranteed to
contain it.  Rounding helpers (``floor``, ``nearest_integer`` ...) accept any
of these and always answer exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import PreconditionError, UndecidableError
from .intpoly import (
    IntPolynomial,
    count_real_roots,
    isolate_real_roots,
    parse_poly,
    q_divmod,
    q_gcd,
    q_mul,
    q_trim,
    q_xgcd,
)

Rational = Fraction
DEFAULT_BITS = 64

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"a/b"`` or ``"a"``; decimals are refused so nothing is approximated."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    m = _RATIONAL_RE.match(str(text))
    if not m:
        raise PreconditionError(f"expected an exact rational like '3/2', got {text!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise PreconditionError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def fmt_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


def _floor_grid(x: Fraction, k: int) -> Fraction:
    return Fraction(math.floor(x * (1 << k)), 1 << k) if k >= 0 else Fraction(math.floor(x / (1 << -k)) << -k)


def _ceil_grid(x: Fraction, k: int) -> Fraction:
    return Fraction(math.ceil(x * (1 << k)), 1 << k) if k >= 0 else Fraction(math.ceil(x / (1 << -k)) << -k)


@dataclass(frozen=True)
class DyadicInterval:
    """Closed interval ``[lo, hi]`` with dyadic endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if not (_is_dyadic(lo) and _is_dyadic(hi)):
            raise PreconditionError(f"endpoints must be dyadic: {lo}, {hi}")
        if lo > hi:
            raise PreconditionError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    # construction -------------------------------------------------------
    @classmethod
    def point(cls, x) -> "DyadicInterval":
        return cls(x, x)

    @classmethod
    def from_rational(cls, x, bits: int = DEFAULT_BITS) -> "DyadicInterval":
        """Outward rounding of ``x`` to the grid ``2^-bits``."""
        x = Fraction(x)
        if _is_dyadic(x):
            return cls(x, x)
        return cls(_floor_grid(x, bits), _ceil_grid(x, bits))

    @classmethod
    def hull(cls, lo, hi, bits: int = DEFAULT_BITS) -> "DyadicInterval":
        """Smallest grid interval containing the rational interval ``[lo, hi]``."""
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise PreconditionError(f"empty interval [{lo}, {hi}]")
        return cls(_floor_grid(lo, bits) if not _is_dyadic(lo) else lo,
                   _ceil_grid(hi, bits) if not _is_dyadic(hi) else hi)

    # rounding -----------------------------------------------------------
    def round(self, bits: int) -> "DyadicInterval":
        return DyadicInterval(_floor_grid(self.lo, bits), _ceil_grid(self.hi, bits))

    def round_rel(self, bits: int) -> "DyadicInterval":
        """Outward rounding keeping about ``bits`` significant bits."""
        mag = max(abs(self.lo), abs(self.hi))
        if mag == 0:
            return self
        e = mag.numerator.bit_length() - mag.denominator.bit_length()
        return self.round(bits - e)

    # queries ------------------------------------------------------------
    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "DyadicInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "DyadicInterval") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def certainly_lt(self, other) -> bool:
        return self.hi < (other.lo if isinstance(other, DyadicInterval) else other)

    def certainly_gt(self, other) -> bool:
        return self.lo > (other.hi if isinstance(other, DyadicInterval) else other)

    def certainly_le(self, other) -> bool:
        return self.hi <= (other.lo if isinstance(other, DyadicInterval) else other)

    def certainly_ge(self, other) -> bool:
        return self.lo >= (other.hi if isinstance(other, DyadicInterval) else other)

    def sign(self):
        """+1 / -1 when certain, ``None`` when the interval straddles 0."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    # arithmetic (exact on dyadics) ---------------------------------------
    def _coerce(self, other) -> "DyadicInterval":
        if isinstance(other, DyadicInterval):
            return other
        if isinstance(other, (int, Fraction)):
            x = Fraction(other)
            if _is_dyadic(x):
                return DyadicInterval(x, x)
            # a non-dyadic scalar gets a tight enclosure relative to our own size
            scale = max(abs(self.lo), abs(self.hi), abs(x), Fraction(1))
            bits = DEFAULT_BITS * 2 + scale.numerator.bit_length()
            return DyadicInterval.from_rational(x, bits)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return DyadicInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return DyadicInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return DyadicInterval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return DyadicInterval(min(ps), max(ps))

    __rmul__ = __mul__

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return DyadicInterval(Fraction(0), max(-self.lo, self.hi))

    def reciprocal(self, bits: int = DEFAULT_BITS) -> "DyadicInterval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains 0")
        return DyadicInterval.hull(1 / self.hi, 1 / self.lo, bits)

    def div(self, other, bits: int = DEFAULT_BITS) -> "DyadicInterval":
        o = self._coerce(other)
        return (self * o.reciprocal(bits + 8)).round(bits)

    def __pow__(self, n: int) -> "DyadicInterval":
        if n < 0:
            raise PreconditionError("use reciprocal() for negative powers")
        if n % 2 == 1 or self.lo >= 0:
            return DyadicInterval(self.lo**n, self.hi**n)
        if self.hi <= 0:
            return DyadicInterval(self.hi**n, self.lo**n)
        return DyadicInterval(Fraction(0), max(self.lo**n, self.hi**n))

    def pow_rel(self, n: int, bits: int = DEFAULT_BITS) -> "DyadicInterval":
        """``self**n`` by squaring, rounded to ``bits`` significant bits at each step."""
        if n < 0:
            raise PreconditionError("negative exponent")
        result = DyadicInterval.point(1)
        base = self
        while n:
            if n & 1:
                result = (result * base).round_rel(bits)
            n >>= 1
            if n:
                base = (base * base).round_rel(bits)
        return result

    def sqrt(self, bits: int = DEFAULT_BITS) -> "DyadicInterval":
        if self.lo < 0:
            raise PreconditionError("sqrt of an interval reaching below 0")
        scale = 1 << (2 * bits)
        lo = math.isqrt(math.floor(self.lo * scale))
        hi_n = math.ceil(self.hi * scale)
        hi = math.isqrt(hi_n)
        if hi * hi < hi_n:
            hi += 1
        return DyadicInterval(Fraction(lo, 1 << bits), Fraction(hi, 1 << bits))

    def to_json(self) -> dict:
        return {"lo": fmt_rational(self.lo), "hi": fmt_rational(self.hi),
                "approx": [float(self.lo), float(self.hi)]}

    def __repr__(self) -> str:
        return f"DyadicInterval[{float(self.lo)!r}, {float(self.hi)!r}]"


# -------------------------------------------------------------- algebraic reals


class AlgebraicReal:
    """A real root of a primitive squarefree integer polynomial, pinned by an isolator.

    The isolator is refined in place as a cache; the represented value never
    changes, so instances behave as immutable values.
    """

    __slots__ = ("minpoly", "_lo", "_hi")

    def __init__(self, minpoly, lo, hi=None):
        if isinstance(lo, DyadicInterval):
            lo, hi = lo.lo, lo.hi
        p = minpoly if isinstance(minpoly, IntPolynomial) else parse_poly(minpoly)
        if p.degree < 1:
            raise PreconditionError("minimal polynomial must be nonconstant")
        p = p.squarefree()
        lo, hi = Fraction(lo), Fraction(hi)
        if not (_is_dyadic(lo) and _is_dyadic(hi)) or lo > hi:
            raise PreconditionError(f"isolator must be a dyadic interval, got [{lo}, {hi}]")
        n = count_real_roots(p, lo, hi)
        if n != 1:
            raise PreconditionError(f"{p} has {n} real roots in [{lo}, {hi}], expected exactly 1")
        self.minpoly = p
        self._lo, self._hi = lo, hi

    @classmethod
    def from_rational(cls, x) -> "AlgebraicReal":
        x = Fraction(x)
        iso = DyadicInterval.from_rational(x, 8)
        return cls(IntPolynomial((-x.numerator, x.denominator)), iso.lo, iso.hi)

    @classmethod
    def largest_root(cls, poly) -> "AlgebraicReal":
        p = poly if isinstance(poly, IntPolynomial) else parse_poly(poly)
        roots = isolate_real_roots(p)
        if not roots:
            raise PreconditionError(f"{p} has no real root")
        lo, hi = roots[-1]
        return cls(p, lo, hi)

    @classmethod
    def real_roots(cls, poly) -> list:
        p = poly if isinstance(poly, IntPolynomial) else parse_poly(poly)
        return [cls(p, lo, hi) for lo, hi in isolate_real_roots(p)]

    @property
    def isolator(self) -> DyadicInterval:
        return DyadicInterval(self._lo, self._hi)

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    def rational_value(self):
        """The value as a Fraction when the root is rational, else ``None``."""
        if self._lo == self._hi:
            return self._lo
        if self.minpoly.degree == 1:
            a0, a1 = self.minpoly.coeffs
            return Fraction(-a0, a1)
        return None

    def refine(self, k: int) -> DyadicInterval:
        """Bisect until the isolator has width at most ``2^-k``."""
        target = Fraction(1, 1 << k) if k >= 0 else Fraction(1 << -k)
        p = self.minpoly
        lo, hi = self._lo, self._hi
        if hi - lo > target:
            s_lo = p.sign_at(lo)
            if s_lo == 0:
                hi = lo
            while hi - lo > target:
                m = (lo + hi) / 2
                s = p.sign_at(m)
                if s == 0:
                    lo = hi = m
                    break
                if s == s_lo:
                    lo = m
                else:
                    hi = m
            self._lo, self._hi = lo, hi
        return DyadicInterval(lo, hi)

    def enclose(self, bits: int = DEFAULT_BITS) -> DyadicInterval:
        return self.refine(bits)

    def compare(self, q) -> int:
        """Exact sign of ``self - q`` for a rational ``q``."""
        q = Fraction(q)
        if q < self._lo:
            return 1
        if q > self._hi:
            return -1
        if self.minpoly.sign_at(q) == 0:
            return 0
        k = 8
        while True:
            iso = self.refine(k)
            if q < iso.lo:
                return 1
            if q > iso.hi:
                return -1
            k *= 2

    def __floor__(self) -> int:
        iso = self.refine(1)
        m = math.floor(iso.lo)
        return m + 1 if self.compare(m + 1) >= 0 else m

    def __ceil__(self) -> int:
        f = self.__floor__()
        return f if self.compare(f) == 0 else f + 1

    def field(self) -> "FieldElement":
        return FieldElement.generator(self)

    def __lt__(self, q):
        return self.compare(q) < 0 if not isinstance(q, AlgebraicReal) else self.field() < q.field()

    def __le__(self, q):
        return self.compare(q) <= 0

    def __gt__(self, q):
        return self.compare(q) > 0

    def __ge__(self, q):
        return self.compare(q) >= 0

    def __eq__(self, other):
        if isinstance(other, AlgebraicReal):
            if other.minpoly != self.minpoly:
                return False
            lo, hi = max(self._lo, other._lo), min(self._hi, other._hi)
            return lo <= hi and count_real_roots(self.minpoly, lo, hi) == 1
        if isinstance(other, (int, Fraction)):
            return self.compare(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash(self.minpoly)

    def __float__(self) -> float:
        return float(self.refine(60).mid)

    def to_json(self) -> dict:
        return {"minpoly": self.minpoly.to_json(), "poly": str(self.minpoly),
                "isolator": [fmt_rational(self._lo), fmt_rational(self._hi)],
                "approx": float(self)}

    def __repr__(self) -> str:
        return f"AlgebraicReal({self.minpoly}, ~{float(self):.12g})"


# ------------------------------------------------------------- number field


def _ihorner(coeffs, lo: Fraction, hi: Fraction):
    """Interval Horner evaluation with exact rational endpoints."""
    a = b = Fraction(0)
    for c in reversed(coeffs):
        ps = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(ps) + c, max(ps) + c
    return a, b


class FieldElement:
    """Element of Q(zeta) stored as a polynomial in zeta of degree < deg(minpoly)."""

    __slots__ = ("zeta", "coeffs")

    def __init__(self, zeta: AlgebraicReal, coeffs):
        self.zeta = zeta
        cs = [Fraction(c) for c in coeffs]
        p = zeta.minpoly.coeffs
        if len(cs) >= len(p):
            _, cs = q_divmod(cs, p)
        self.coeffs = tuple(q_trim(cs))

    @classmethod
    def rational(cls, zeta: AlgebraicReal, q) -> "FieldElement":
        return cls(zeta, [Fraction(q)])

    @classmethod
    def generator(cls, zeta: AlgebraicReal) -> "FieldElement":
        if zeta.degree == 1:
            return cls(zeta, [zeta.rational_value()])
        return cls(zeta, [0, 1])

    def _lift(self, other):
        if isinstance(other, FieldElement):
            if other.zeta is not self.zeta and other.zeta.minpoly != self.zeta.minpoly:
                raise PreconditionError("elements of different number fields")
            return other.coeffs
        if isinstance(other, (int, Fraction)):
            return (Fraction(other),) if other else ()
        if isinstance(other, AlgebraicReal) and other == self.zeta:
            return FieldElement.generator(self.zeta).coeffs
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(o), len(self.coeffs))
        return FieldElement(self.zeta, [(self.coeffs[i] if i < len(self.coeffs) else 0)
                                        + (o[i] if i < len(o) else 0) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.zeta, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + FieldElement(self.zeta, [-c for c in o])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.zeta, q_mul(self.coeffs, o))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self.coeffs:
            raise ZeroDivisionError("inverse of 0 in Q(zeta)")
        g, s, _ = q_xgcd(self.coeffs, self.zeta.minpoly.coeffs)
        if len(g) != 1:
            raise PreconditionError("element is a zero divisor modulo the given polynomial; "
                                    "use the irreducible minimal polynomial of zeta")
        return FieldElement(self.zeta, s)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.zeta, [c / Fraction(other) for c in self.coeffs])
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * FieldElement(self.zeta, o).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = FieldElement(self.zeta, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # certified evaluation ------------------------------------------------
    def rational_value(self):
        if len(self.coeffs) <= 1:
            return self.coeffs[0] if self.coeffs else Fraction(0)
        return None

    def enclose(self, bits: int = DEFAULT_BITS) -> DyadicInterval:
        """Dyadic enclosure of width at most ``2^-bits``."""
        r = self.rational_value()
        if r is not None:
            return DyadicInterval.from_rational(r, bits)
        target = Fraction(1, 1 << bits) if bits >= 0 else Fraction(1 << -bits)
        k = bits + 8
        while True:
            iso = self.zeta.refine(k)
            lo, hi = _ihorner(self.coeffs, iso.lo, iso.hi)
            out = DyadicInterval.hull(lo, hi, bits + 2)
            if out.width <= target:
                return out
            w = hi - lo
            excess = max(1, w.numerator.bit_length() - w.denominator.bit_length() + bits + 2)
            k += excess

    def is_zero(self) -> bool:
        if not self.coeffs:
            return True
        if len(self.coeffs) == 1:
            return False
        g = q_gcd(self.zeta.minpoly.coeffs, self.coeffs)
        if len(g) <= 1:
            return False
        iso = self.zeta.isolator
        return count_real_roots(IntPolynomial.from_q(g), iso.lo, iso.hi) >= 1

    def sign(self) -> int:
        r = self.rational_value()
        if r is not None:
            return (r > 0) - (r < 0)
        enc = self.enclose(32)
        s = enc.sign()
        if s is not None:
            return s
        if self.is_zero():
            return 0
        bits = 64
        while True:
            s = self.enclose(bits).sign()
            if s is not None:
                return s
            bits *= 2
            if bits > 1 << 20:
                raise UndecidableError("sign refinement did not terminate")

    def compare(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        r = self.rational_value()
        return hash(r) if r is not None else hash(self.coeffs)

    def __floor__(self) -> int:
        r = self.rational_value()
        if r is not None:
            return math.floor(r)
        enc = self.enclose(4)
        m = math.floor(enc.lo)
        return m + 1 if self.compare(m + 1) >= 0 else m

    def __ceil__(self) -> int:
        return -math.floor(-self)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        return float(self.enclose(60).mid)

    def to_json(self) -> dict:
        return {"basis_coeffs": [fmt_rational(c) for c in self.coeffs],
                "zeta_minpoly": self.zeta.minpoly.to_json(), "approx": float(self)}

    def __repr__(self) -> str:
        return f"FieldElement({[str(c) for c in self.coeffs]}, ~{float(self):.12g})"


RealValue = Union[Fraction, AlgebraicReal]
Exact = Union[Fraction, FieldElement]


def parse_real(text) -> RealValue:
    """``"3/2"`` becomes a Fraction, a polynomial string its largest real root."""
    if isinstance(text, (Fraction, int)):
        return Fraction(text)
    if isinstance(text, (AlgebraicReal, FieldElement)):
        return text
    s = str(text).strip()
    if _RATIONAL_RE.match(s):
        return parse_rational(s)
    root = AlgebraicReal.largest_root(parse_poly(s))
    r = root.rational_value()
    return r if r is not None else root


def lift(zeta) -> Exact:
    """The value of ``zeta`` as something supporting exact field arithmetic."""
    if isinstance(zeta, AlgebraicReal):
        r = zeta.rational_value()
        return r if r is not None else FieldElement.generator(zeta)
    if isinstance(zeta, FieldElement):
        return zeta
    return Fraction(zeta)


def enclose(x, bits: int = DEFAULT_BITS) -> DyadicInterval:
    if isinstance(x, (int, Fraction)):
        return DyadicInterval.from_rational(x, bits)
    return x.enclose(bits)


def sign(x) -> int:
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    if isinstance(x, AlgebraicReal):
        return x.compare(0)
    return x.sign()


# ---------------------------------------------------------- rounding functions


def floor(x) -> int:
    return math.floor(x)


def ceil(x) -> int:
    return math.ceil(x)


def frac(x):
    """``{x} = x - floor(x)``; exact (a Fraction or FieldElement)."""
    if isinstance(x, AlgebraicReal):
        x = lift(x)
    return x - math.floor(x)


def nearest_integer(x) -> int:
    """``<x>``, with the tie ``{x} = 1/2`` resolved to ``floor(x)``."""
    if isinstance(x, AlgebraicReal):
        x = lift(x)
    return -math.floor(Fraction(1, 2) - x)


def dist_exact(x):
    """``||x||`` as an exact value (Fraction or FieldElement)."""
    if isinstance(x, AlgebraicReal):
        x = lift(x)
    d = x - nearest_integer(x)
    return -d if sign(d) < 0 else d


def dist_to_nearest(x, bits: int = DEFAULT_BITS):
    """``||x||``: a Fraction for rational input, a DyadicInterval otherwise."""
    d = dist_exact(x)
    if isinstance(d, FieldElement):
        r = d.rational_value()
        return r if r is not None else d.enclose(bits)
    return d


def field_pow_frac(alpha, zeta, n: int, bits: int = DEFAULT_BITS):
    """``(<alpha zeta^n>, enclosure of ||alpha zeta^n||)`` by exact field arithmetic.

    ``alpha`` may be a rational, a FieldElement over ``zeta``, or a list of
    power-basis coordinates.
    """
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    z = lift(zeta)
    if isinstance(alpha, (list, tuple)):
        if not isinstance(z, FieldElement):
            raise PreconditionError("power-basis coordinates need an irrational zeta")
        alpha = FieldElement(z.zeta, alpha)
    x = alpha * z**n
    k = nearest_integer(x)
    d = dist_exact(x)
    return k, enclose(d, bits)


# ------------------------------------------------------------------ constants


def e_enclosure(bits: int = 128) -> DyadicInterval:
    """Euler's number from the factorial series with an explicit tail bound."""
    s = Fraction(0)
    term = Fraction(1)
    k = 0
    while True:
        s += term
        k += 1
        term /= k
        # tail sum_{j>=k} 1/j! <= 2/k!
        if 2 * term < Fraction(1, 1 << (bits + 2)):
            break
    return DyadicInterval.hull(s, s + 2 * term, bits + 1)


def _atanh_series(t: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Enclosure of atanh(t) for 0 <= t <= 1/3."""
    s = Fraction(0)
    power = t
    t2 = t * t
    j = 0
    eps = Fraction(1, 1 << (bits + 4))
    while True:
        s += power / (2 * j + 1)
        j += 1
        power *= t2
        tail = power / ((2 * j + 1) * (1 - t2))
        if tail < eps:
            return s, s + tail


def log_enclosure(x, bits: int = DEFAULT_BITS) -> DyadicInterval:
    """Natural logarithm of a positive rational (or dyadic interval)."""
    if isinstance(x, DyadicInterval):
        lo, hi = log_enclosure(x.lo, bits), log_enclosure(x.hi, bits)
        return DyadicInterval(lo.lo, hi.hi)
    x = Fraction(x)
    if x <= 0:
        raise PreconditionError("log of a nonpositive number")
    if x == 1:
        return DyadicInterval.point(0)
    k = x.numerator.bit_length() - x.denominator.bit_length()
    y = x / Fraction(2) ** k
    while y >= 2:
        y /= 2
        k += 1
    while y < 1:
        y *= 2
        k -= 1
    extra = bits + abs(k).bit_length() + 4
    l2lo, l2hi = _atanh_series(Fraction(1, 3), extra)
    tlo, thi = _atanh_series((y - 1) / (y + 1), extra)
    lo = 2 * tlo + (2 * l2lo if k >= 0 else 2 * l2hi) * k
    hi = 2 * thi + (2 * l2hi if k >= 0 else 2 * l2lo) * k
    return DyadicInterval.hull(lo, hi, bits + 2)


def sqrt_enclosure(x, bits: int = DEFAULT_BITS) -> DyadicInterval:
    if not isinstance(x, DyadicInterval):
        x = DyadicInterval.from_rational(x, 2 * bits + 4)
    return x.sqrt(bits)


def iroot_floor(n: int, k: int) -> int:
    """``floor(n^(1/k))`` for ``n >= 0`` by integer Newton iteration."""
    if n < 0:
        raise PreconditionError("negative radicand")
    if n < 2 or k == 1:
        return n
    x = 1 << (-(-n.bit_length() // k))
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def root_enclosure(x, k: int, bits: int = DEFAULT_BITS) -> DyadicInterval:
    """Enclosure of the positive real ``x^(1/k)`` for a rational ``x >= 0``."""
    x = Fraction(x)
    if x < 0:
        raise PreconditionError("negative radicand")
    scale = 1 << (bits * k)
    lo_n = math.floor(x * scale)
    hi_n = math.ceil(x * scale)
    lo = iroot_floor(lo_n, k)
    hi = iroot_floor(hi_n, k)
    if hi**k < hi_n:
        hi += 1
    return DyadicInterval(Fraction(lo, 1 << bits), Fraction(hi, 1 << bits))
