"""Integer polynomials, exact rational polynomial helpers and Sturm root counting.

Coefficients are stored in ascending order ``a0, a1, ..., am`` everywhere.
The helpers prefixed ``q_`` work on plain lists of :class:`fractions.Fraction`
and are used for the Euclidean algorithm over the rationals; they accept the
zero polynomial (the empty list), which :class:`IntPolynomial` does not.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import PreconditionError

QPoly = list  # list[Fraction], ascending, no trailing zeros


def q_trim(p: Sequence) -> QPoly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def q_eval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def q_divmod(a: Sequence, b: Sequence) -> tuple[QPoly, QPoly]:
    a = [Fraction(c) for c in q_trim(a)]
    b = q_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead = Fraction(b[-1])
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    quot = [Fraction(0)] * (len(a) - db)
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        c = a[-1] / lead
        quot[k] = c
        for i, bc in enumerate(b):
            a[i + k] -= c * bc
        a = q_trim(a)
    return q_trim(quot), a


def q_rem(a: Sequence, b: Sequence) -> QPoly:
    return q_divmod(a, b)[1]


def q_monic(p: Sequence) -> QPoly:
    p = q_trim(p)
    if not p:
        return p
    lead = Fraction(p[-1])
    return [Fraction(c) / lead for c in p]


def q_gcd(a: Sequence, b: Sequence) -> QPoly:
    """Monic gcd over the rationals (empty list when both inputs are zero)."""
    a, b = q_trim(a), q_trim(b)
    while b:
        a, b = b, q_rem(a, b)
    return q_monic(a)


def q_mul(a: Sequence, b: Sequence) -> QPoly:
    a, b = q_trim(a), q_trim(b)
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return q_trim(out)


def q_sub(a: Sequence, b: Sequence) -> QPoly:
    n = max(len(a), len(b))
    return q_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def q_derivative(p: Sequence) -> QPoly:
    return q_trim([i * p[i] for i in range(1, len(p))])


def q_positive_scale(p: Sequence) -> list[int]:
    """Scale ``p`` by a positive rational to a primitive integer polynomial.

    Signs are preserved, so sign-variation counts are unaffected.
    """
    p = q_trim(p)
    if not p:
        return []
    den = 1
    for c in p:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in p]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    return [c // g for c in ints]


def q_xgcd(a: Sequence, b: Sequence) -> tuple[QPoly, QPoly, QPoly]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    r0, r1 = q_trim([Fraction(c) for c in a]), q_trim([Fraction(c) for c in b])
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = q_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, q_sub(s0, q_mul(q, s1))
        t0, t1 = t1, q_sub(t0, q_mul(q, t1))
    if not r0:
        return [], [], []
    lead = r0[-1]
    return [c / lead for c in r0], [c / lead for c in s0], [c / lead for c in t0]


@dataclass(frozen=True)
class IntPolynomial:
    """Nonzero polynomial with integer coefficients, ascending order."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coeffs)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        if not cs:
            raise PreconditionError("the zero polynomial is not an IntPolynomial")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_q(cls, p: Sequence, *, normalize_sign: bool = True) -> "IntPolynomial":
        ints = q_positive_scale(p)
        if normalize_sign and ints and ints[-1] < 0:
            ints = [-c for c in ints]
        return cls(tuple(ints))

    @classmethod
    def monomial(cls, m: int, c: int = 1) -> "IntPolynomial":
        return cls((0,) * m + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return self.leading == 1

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive(self) -> "IntPolynomial":
        g = self.content()
        sign = -1 if self.leading < 0 else 1
        return IntPolynomial(tuple(sign * c // g for c in self.coeffs))

    def to_q(self) -> QPoly:
        return [Fraction(c) for c in self.coeffs]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at(self, x: Fraction) -> int:
        x = Fraction(x)
        # homogenised integer evaluation: den^m * P(num/den)
        num, den = x.numerator, x.denominator
        acc = 0
        dpow = 1
        for c in reversed(self.coeffs):
            acc = acc * num + c * dpow
            dpow *= den
        return (acc > 0) - (acc < 0)

    def derivative(self) -> "IntPolynomial":
        if self.degree == 0:
            raise PreconditionError("derivative of a constant is the zero polynomial")
        return IntPolynomial(tuple(i * self.coeffs[i] for i in range(1, len(self.coeffs))))

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        return IntPolynomial(tuple(q_mul(self.coeffs, other.coeffs)))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def exact_div(self, other: "IntPolynomial") -> "IntPolynomial":
        q, r = q_divmod(self.coeffs, other.coeffs)
        if r:
            raise PreconditionError(f"{other} does not divide {self}")
        if any(Fraction(c).denominator != 1 for c in q):
            # divisible over Q but not over Z; keep the primitive cofactor
            return IntPolynomial.from_q(q)
        return IntPolynomial(tuple(int(c) for c in q))

    def gcd(self, other: "IntPolynomial") -> "IntPolynomial":
        return IntPolynomial.from_q(q_gcd(self.coeffs, other.coeffs))

    def squarefree(self) -> "IntPolynomial":
        """Primitive squarefree part ``P / gcd(P, P')``."""
        if self.degree == 0:
            return IntPolynomial((1,))
        g = q_gcd(self.coeffs, q_derivative(self.coeffs))
        q, _ = q_divmod(self.coeffs, g)
        return IntPolynomial.from_q(q)

    def reciprocal(self) -> "IntPolynomial":
        """``X^m P(1/X)``: coefficients reversed (requires ``P(0) != 0`` to keep degree)."""
        return IntPolynomial(tuple(reversed(self.coeffs)))

    def valuation(self) -> int:
        """Multiplicity of the root 0."""
        k = 0
        while self.coeffs[k] == 0:
            k += 1
        return k

    def to_json(self) -> list:
        return list(self.coeffs)

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                body = mono if a == 1 else f"{a}{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"


_TERM = re.compile(r"^(\d*)\*?(?:(x)(?:\^(\d+))?)?$")


def parse_poly(text: str | Iterable[int]) -> IntPolynomial:
    """Parse ``"x^2-4x-1"``, ``"2*x**3 - 5x - 1"`` or an ascending coefficient list.

    A JSON list such as ``"[-1, -4, 1]"`` is read as ascending coefficients.
    """
    if not isinstance(text, str):
        return IntPolynomial(tuple(int(c) for c in text))
    s = text.strip()
    if s.startswith("["):
        try:
            return IntPolynomial(tuple(int(c) for c in json.loads(s)))
        except (ValueError, TypeError) as exc:
            raise PreconditionError(f"bad coefficient list {text!r}") from exc
    s = s.replace(" ", "").replace("**", "^").lower()
    if not s:
        raise PreconditionError("empty polynomial string")
    if s[0] not in "+-":
        s = "+" + s
    coeffs: dict[int, int] = {}
    for sign, body in re.findall(r"([+-])([^+-]*)", s):
        m = _TERM.match(body)
        if not body or not m or (not m.group(1) and not m.group(2)):
            raise PreconditionError(f"cannot parse polynomial term {sign + body!r} in {text!r}")
        digits, var, exp = m.groups()
        c = int(digits) if digits else 1
        e = 0 if not var else (int(exp) if exp else 1)
        coeffs[e] = coeffs.get(e, 0) + (c if sign == "+" else -c)
    deg = max(coeffs)
    return IntPolynomial(tuple(coeffs.get(i, 0) for i in range(deg + 1)))


# ---------------------------------------------------------------- Sturm machinery


def sturm_sequence(p: Sequence) -> list[list[int]]:
    """Canonical Sturm sequence of ``p``; every member scaled by a positive factor."""
    seq = [q_positive_scale(p), q_positive_scale(q_derivative(p))]
    while seq[-1] and len(seq[-1]) > 1:
        r = q_rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(q_positive_scale([-c for c in r]))
    return [s for s in seq if s]


def _sign_at_inf(p: Sequence, positive: bool) -> int:
    lead = p[-1]
    s = 1 if lead > 0 else -1
    if not positive and (len(p) - 1) % 2 == 1:
        s = -s
    return s


def sign_variations(seq: Sequence[Sequence], x) -> int:
    """Sign changes of ``seq`` at ``x`` (a rational, ``+inf`` or ``-inf`` as floats)."""
    signs = []
    for p in seq:
        if x == math.inf or x == -math.inf:
            s = _sign_at_inf(p, x > 0)
        else:
            v = q_eval(p, x)
            s = (v > 0) - (v < 0)
        if s:
            signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p, a=None, b=None) -> int:
    """Number of distinct real roots of ``p`` in the closed interval ``[a, b]``.

    ``None`` stands for an infinite endpoint.
    """
    coeffs = p.coeffs if isinstance(p, IntPolynomial) else q_trim(p)
    if len(coeffs) <= 1:
        return 0
    seq = sturm_sequence(coeffs)
    lo = -math.inf if a is None else Fraction(a)
    hi = math.inf if b is None else Fraction(b)
    n = sign_variations(seq, lo) - sign_variations(seq, hi)
    if a is not None and q_eval(coeffs, lo) == 0:
        n += 1
    return n


def cauchy_index(num: Sequence, den: Sequence) -> int:
    """Cauchy index of ``num/den`` over the whole real line.

    Jumps from -inf to +inf count +1.  Requires ``deg num < deg den`` and
    that ``gcd(num, den)`` has no real roots.
    """
    f0, f1 = q_positive_scale(den), q_positive_scale(num)
    if not f1:
        return 0
    seq = [f0, f1]
    while len(seq[-1]) > 1:
        r = q_rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(q_positive_scale([-c for c in r]))
    return sign_variations(seq, -math.inf) - sign_variations(seq, math.inf)


def root_bound(p: IntPolynomial) -> int:
    """Integer strictly larger than the modulus of every root."""
    if p.degree == 0:
        return 1
    h = max(abs(c) for c in p.coeffs[:-1])
    return 2 + -(-h // abs(p.leading))


def isolate_real_roots(p: IntPolynomial) -> list[tuple[Fraction, Fraction]]:
    """Closed isolating intervals for the distinct real roots, in increasing order.

    A rational root may come back as a degenerate interval ``[r, r]``; a proper
    interval never has a root at an endpoint.
    """
    sq = p.squarefree()
    if sq.degree == 0:
        return []
    coeffs = sq.coeffs
    seq = sturm_sequence(coeffs)
    bound = Fraction(root_bound(sq))

    def var(x):
        return sign_variations(seq, x)

    out = []
    stack = [(-bound, bound, var(-bound), var(bound))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb  # roots in (a, b]
        if n == 0:
            continue
        if n == 1:
            if q_eval(coeffs, b) == 0:
                out.append((b, b))
            elif q_eval(coeffs, a) != 0:
                out.append((a, b))
            else:
                m = (a + b) / 2
                stack.append((a, m, va, var(m)))
                stack.append((m, b, var(m), vb))
            continue
        m = (a + b) / 2
        vm = var(m)
        stack.append((a, m, va, vm))
        stack.append((m, b, vm, vb))
    out.sort()
    return out
