"""Exact checkers: membership on a horizon, run lengths, R(p) membership and
windowed gap statistics of fractional parts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .bounds import asymmetric_bounds, hundertt_run_bound
from .errors import PreconditionError
from .exact import (
    DEFAULT_BITS,
    DyadicInterval,
    FieldElement,
    dist_exact,
    enclose,
    fmt_rational,
    frac,
    lift,
    sign,
)


def _show(x, bits=DEFAULT_BITS):
    if isinstance(x, Fraction):
        return {"exact": fmt_rational(x), "approx": float(x)}
    if isinstance(x, FieldElement):
        r = x.rational_value()
        if r is not None:
            return {"exact": fmt_rational(r), "approx": float(r)}
    return enclose(x, bits).to_json()


def _alpha(alpha, z):
    if isinstance(alpha, (list, tuple)):
        if not isinstance(z, FieldElement):
            return Fraction(alpha[0]) if len(alpha) == 1 else sum(
                Fraction(c) * z**i for i, c in enumerate(alpha))
        return FieldElement(z.zeta, [Fraction(c) for c in alpha])
    if isinstance(alpha, FieldElement):
        return alpha
    return lift(alpha)


# ------------------------------------------------------------- membership


@dataclass
class MembershipResult:
    ok: bool
    witness: Optional[int]
    max_dist: object
    argmax: Optional[int]
    checked: int

    def to_json(self) -> dict:
        return {"ok": self.ok, "witness": self.witness, "checked": self.checked,
                "max_dist": _show(self.max_dist) if self.max_dist is not None else None,
                "argmax": self.argmax}


def verify_membership(alpha, zeta, eps, n_range) -> MembershipResult:
    """Exact check of ``||alpha zeta^n|| <= eps`` for every n in ``n_range``.

    ``witness`` is the first failing n; ``max_dist`` is the exact maximum.
    """
    z = lift(zeta)
    a = _alpha(alpha, z)
    eps = Fraction(eps)
    ns = sorted(set(int(n) for n in n_range))
    if not ns:
        return MembershipResult(True, None, None, None, 0)
    if ns[0] < 0:
        raise PreconditionError("exponents must be nonnegative")
    x = a * z ** ns[0]
    cur = ns[0]
    best, arg, witness = None, None, None
    for n in ns:
        while cur < n:
            x = x * z
            cur += 1
        d = dist_exact(x)
        if best is None or sign(d - best) > 0:
            best, arg = d, n
        if witness is None and sign(d - eps) > 0:
            witness = n
    return MembershipResult(witness is None, witness, best, arg, len(ns))


# ------------------------------------------------------------- run length


@dataclass
class RunReport:
    p: int
    q: int
    alpha: Fraction
    eps: Fraction
    n_max: int
    n0: int
    runs: dict  # start n -> run length l (terms n..n+l inside)
    bounds: dict
    violations: list
    equality_ns: list
    truncated_runs: list = field(default_factory=list)

    @property
    def max_run(self) -> int:
        return max(self.runs.values(), default=-1)

    def to_json(self) -> dict:
        return {
            "p": self.p, "q": self.q, "alpha": fmt_rational(self.alpha), "eps": fmt_rational(self.eps),
            "n_max": self.n_max, "n0": self.n0, "max_run": self.max_run,
            "runs": [{"n": n, "run": l, "bound": self.bounds.get(n)} for n, l in sorted(self.runs.items())
                     if l >= 0],
            "violations": self.violations, "equality_hits": self.equality_ns,
            "truncated_at_horizon": self.truncated_runs,
        }


def run_length(alpha, p: int, q: int, eps, n_max: int) -> RunReport:
    """Runs of consecutive ``n`` with ``||alpha (p/q)^n|| <= eps``, compared with
    ``floor(log_q |<alpha (p/q)^n>|)`` for every start ``n >= n0``."""
    if not (p > q >= 2) or math.gcd(p, q) != 1:
        raise PreconditionError(f"need coprime p > q >= 2, got {p}/{q}")
    alpha, eps = Fraction(alpha), Fraction(eps)
    if alpha == 0:
        raise PreconditionError("alpha must be nonzero")
    if not 0 < eps <= Fraction(1, p + q):
        raise PreconditionError(f"eps must lie in (0, 1/(p+q)] = (0, 1/{p + q}]")
    r = Fraction(p, q)
    inside, eq = [], []
    x = alpha
    n0 = None
    for n in range(n_max + 1):
        d = dist_exact(x)
        inside.append(d <= eps)
        if d == eps:
            eq.append(n)
        if n0 is None and abs(x) >= 1:
            n0 = n
        x *= r
    if n0 is None:
        n0 = n_max + 1
    runs, bounds, viol, trunc = {}, {}, [], []
    length = -1
    for n in range(n_max, -1, -1):
        length = length + 1 if inside[n] else -1
        if n >= n0:
            runs[n] = length
            if length >= 0:
                b = hundertt_run_bound(p, q, alpha, n)
                bounds[n] = b
                if length > b:
                    viol.append({"n": n, "run": length, "bound": b})
                if n + length == n_max:
                    trunc.append(n)
    return RunReport(p, q, alpha, eps, n_max, n0, runs, bounds, viol, eq, trunc)


# ------------------------------------------------------------- R(p)


def nu(r: int, m) -> int:
    """Multiplicity of ``r`` in ``m``: the largest e with ``r^e | m`` (negative for denominators)."""
    if r < 2:
        raise PreconditionError("base must be at least 2")
    m = Fraction(m)
    if m == 0:
        raise PreconditionError("multiplicity in 0 is undefined")
    k = 0
    num, den = abs(m.numerator), m.denominator
    while num % r == 0:
        num //= r
        k += 1
    while den % r == 0:
        den //= r
        k -= 1
    return k


def decompose(alpha, p: int) -> Optional[tuple[int, int]]:
    """``(M, b)`` with ``alpha = M p^b`` and ``p`` not dividing ``M``, or None if alpha is not in R(p)."""
    alpha = Fraction(alpha)
    if p < 2:
        raise PreconditionError("p must be at least 2")
    if alpha == 0:
        return (0, 0)
    den = alpha.denominator
    k = 0
    while den != 1:
        g = math.gcd(den, p)
        if g == 1:
            return None
        den //= g
        k += 1
    M = alpha * Fraction(p) ** k
    assert M.denominator == 1
    M = M.numerator
    b = -k
    while M % p == 0:
        M //= p
        b += 1
    return (M, b)


def r_set_member(alpha, p: int) -> bool:
    """Whether ``alpha = M p^b`` for integers M and b (denominator divides a power of p)."""
    return decompose(alpha, p) is not None


# ------------------------------------------------------------- gap stats


@dataclass
class GapReport:
    alpha: object
    zeta: object
    horizon: int
    window: int
    min_gap: object
    max_gap: object
    last_max: object
    last_min: object
    windows: int
    reference: dict
    below_reference: list
    monotone: bool = False
    half_centered_stat: Optional[Fraction] = None
    half_centered_bound: Optional[DyadicInterval] = None

    def to_json(self) -> dict:
        return {
            "horizon": self.horizon, "window": self.window, "windows": self.windows,
            "min_window_gap": _show(self.min_gap), "max_window_gap": _show(self.max_gap),
            "last_window_max": _show(self.last_max), "last_window_min": _show(self.last_min),
            "reference": {k: _show(v) for k, v in self.reference.items()},
            "half_centered": None if self.half_centered_bound is None else {
                "min_window_max_dist_to_half": _show(self.half_centered_stat),
                "bound": self.half_centered_bound.to_json()},
            "windows_below_reference": self.below_reference[:50],
            "window_gap_monotone_nonincreasing": self.monotone,
            "scope": "finite-horizon evidence for limsup - liminf",
        }


def gap_stats(alpha, zeta, horizon: int, window: int = 50) -> GapReport:
    """Max minus min of ``{alpha zeta^n}`` over trailing windows ``[s, s+window)``."""
    if window < 2 or horizon + 1 < window:
        raise PreconditionError("need window >= 2 and horizon + 1 >= window")
    z = lift(zeta)
    if sign(z - 1) <= 0:
        raise PreconditionError("zeta must exceed 1")
    a = _alpha(alpha, z)
    fr = []
    x = a
    for n in range(horizon + 1):
        fr.append(frac(x))
        x = x * z
    rational = all(isinstance(f, Fraction) for f in fr)
    key = (lambda f: f) if rational else (lambda f: enclose(f, 80).mid)
    approx = [key(f) for f in fr]
    gaps = []
    for s in range(horizon + 2 - window):
        seg = range(s, s + window)
        i_max = max(seg, key=lambda i: approx[i])
        i_min = min(seg, key=lambda i: approx[i])
        gaps.append(fr[i_max] - fr[i_min])
    gkey = [key(g) for g in gaps]
    i_lo = min(range(len(gaps)), key=lambda i: gkey[i])
    i_hi = max(range(len(gaps)), key=lambda i: gkey[i])
    ref = {}
    half_stat, half_bound = None, None
    if isinstance(z, Fraction):
        p, q = z.numerator, z.denominator
        # for integer zeta the 1/p gap needs alpha outside R(p)
        ref["1/p"] = Fraction(1, p)
        if (p, q) == (3, 2):
            ref["1/3"] = Fraction(1, 3)
        half_bound = asymmetric_bounds(p, q).half_centered
        # trailing-window max of ||alpha zeta^n - 1/2||, minimized over windows
        hd = [abs(f - Fraction(1, 2)) for f in fr]
        hd = [min(h, 1 - h) for h in hd]
        half_stat = min(max(hd[s:s + window]) for s in range(horizon + 2 - window))
    best = max(ref.values(), default=None)
    below = [s for s, g in enumerate(gaps) if best is not None and sign(g - best) < 0]
    mono = all(sign(b - a) <= 0 for a, b in zip(gaps, gaps[1:]))
    last = range(len(fr) - window, len(fr))
    lmax = max(last, key=lambda i: approx[i])
    lmin = min(last, key=lambda i: approx[i])
    return GapReport(alpha, zeta, horizon, window, gaps[i_lo], gaps[i_hi], fr[lmax], fr[lmin],
                     len(gaps), ref, below, mono, half_stat, half_bound)


__all__ = [
    "verify_membership", "MembershipResult", "run_length", "RunReport", "nu", "decompose",
    "r_set_member", "gap_stats", "GapReport",
]
