"""Nested-interval builders for zeta (alpha fixed) and alpha (zeta fixed),
countability certificates, and the base-p digit construction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import BranchingUnavailable, PreconditionError, UndecidableError, WindowTooSmall
from .exact import (
    DEFAULT_BITS,
    DyadicInterval,
    dist_exact,
    enclose,
    fmt_rational,
    iroot_floor,
    lift,
    root_enclosure,
    sign,
)


def _bits_list(bits) -> list[int]:
    if bits is None:
        return []
    if isinstance(bits, str):
        if any(b not in "01" for b in bits):
            raise PreconditionError(f"bit string must contain only 0/1, got {bits!r}")
        return [int(b) for b in bits]
    return [int(b) for b in bits]


def _choose(options: list, bit: int, step: int):
    if bit >= len(options):
        raise BranchingUnavailable(f"step {step}: choice {bit} requested but only "
                                   f"{len(options)} admissible integer(s)")
    return options[bit]


# ------------------------------------------------------------ Bernardo lemma


def check_bernardo(n: int, x, eps, max_bits: int = 4096) -> bool:
    """Certify ``(x+eps)^((n+1)/n) - (x-eps)^((n+1)/n) >= 2 eps x^(1/n)``."""
    x, eps = Fraction(x), Fraction(eps)
    if n < 1 or x <= Fraction(3, 2) or not 0 < eps < Fraction(1, 2):
        raise PreconditionError("need n >= 1, x > 3/2 and 0 < eps < 1/2")
    a, b = (x + eps) ** (n + 1), (x - eps) ** (n + 1)
    bits = 64
    while bits <= max_bits:
        A, B, C = root_enclosure(a, n, bits), root_enclosure(b, n, bits), root_enclosure(x, n, bits)
        lhs_lo, lhs_hi = A.lo - B.hi, A.hi - B.lo
        rhs_lo, rhs_hi = 2 * eps * C.lo, 2 * eps * C.hi
        if lhs_lo >= rhs_hi:
            return True
        if lhs_hi < rhs_lo:
            return False
        bits *= 2
    raise UndecidableError("Bernardo inequality not separated at maximum precision")


# -------------------------------------------------------------- chains


@dataclass
class ChainEntry:
    N: int
    exponent: int
    lo: object  # alpha side: exact value; zeta side: radicand with exponent 1/exponent
    hi: object
    options: int  # number of admissible integers at this step

    def to_json(self, side: str) -> dict:
        if side == "zeta_side":
            lo = {"radicand": fmt_rational(self.lo), "root": self.exponent}
            hi = {"radicand": fmt_rational(self.hi), "root": self.exponent}
        else:
            lo = enclose(self.lo, 64).to_json()
            hi = enclose(self.hi, 64).to_json()
        return {"N": self.N, "exponent": self.exponent, "lo": lo, "hi": hi, "admissible": self.options}


@dataclass
class IntervalChain:
    direction: str
    fixed: object
    eps: Fraction
    n0: int
    entries: list
    branch_bits: str
    mode: str
    window: tuple
    targets: Optional[list] = None
    final: Optional[DyadicInterval] = None

    @property
    def depth(self) -> int:
        return len(self.entries) - 1

    @property
    def horizon(self) -> range:
        return range(self.n0, self.n0 + self.depth + 1)

    def center(self, j: int) -> Fraction:
        if not self.targets:
            return Fraction(0)
        return Fraction(self.targets[j]) if j < len(self.targets) else Fraction(self.targets[-1])

    def sample_point(self):
        """An exact point of the last interval (rational, or in Q(zeta) on the alpha side)."""
        last = self.entries[-1]
        if self.direction == "alpha_side":
            return (last.lo + last.hi) / 2
        m = last.exponent
        alpha = Fraction(self.fixed)
        bits = 64
        while True:
            lo = root_enclosure(last.lo / alpha, m, bits)
            hi = root_enclosure(last.hi / alpha, m, bits)
            if lo.hi < hi.lo:
                r = (lo.hi + hi.lo) / 2
                v = alpha * r**m
                if last.lo <= v <= last.hi:
                    return r
            bits *= 2
            if bits > 1 << 16:
                raise UndecidableError("could not place a rational in the final zeta interval")

    def is_nested(self) -> bool:
        if self.direction == "alpha_side":
            return all(sign(b.lo - a.lo) >= 0 and sign(a.hi - b.hi) >= 0
                       for a, b in zip(self.entries, self.entries[1:]))
        alpha = Fraction(self.fixed)
        ok = True
        for a, b in zip(self.entries, self.entries[1:]):
            # ((b.lo/alpha)^(1/mb) >= (a.lo/alpha)^(1/ma)  <=>  (b.lo/alpha)^ma >= (a.lo/alpha)^mb
            ma, mb = a.exponent, b.exponent
            ok &= (b.lo / alpha) ** ma >= (a.lo / alpha) ** mb
            ok &= (b.hi / alpha) ** ma <= (a.hi / alpha) ** mb
        return ok

    def to_json(self) -> dict:
        fixed = self.fixed
        return {
            "direction": self.direction,
            "fixed": fixed.to_json() if hasattr(fixed, "to_json") else fmt_rational(fixed),
            "eps": fmt_rational(self.eps),
            "n0": self.n0,
            "mode": self.mode,
            "window": [fmt_rational(self.window[0]), fmt_rational(self.window[1])],
            "branch_bits": self.branch_bits,
            "targets": [fmt_rational(t) for t in self.targets] if self.targets else None,
            "N": [e.N for e in self.entries],
            "entries": [e.to_json(self.direction) for e in self.entries],
            "final_enclosure": self.final.to_json() if self.final else None,
            "nested": self.is_nested(),
        }


# ---------------------------------------------------------------- zeta side


def _least_int_with_pow_ge(A: Fraction, m: int, shift: Fraction) -> int:
    """Smallest integer N with ``(N + shift)^m >= A`` (N + shift > 0)."""
    g = iroot_floor(math.floor(A), m) - math.ceil(shift) - 1
    while (g + shift) <= 0 or (g + shift) ** m < A:
        g += 1
    while g - 1 + shift > 0 and (g - 1 + shift) ** m >= A:
        g -= 1
    return g


def _greatest_int_with_pow_le(B: Fraction, m: int, shift: Fraction) -> int:
    """Largest integer N with ``(N + shift)^m <= B``."""
    g = iroot_floor(math.floor(B), m) - math.floor(shift) + 1
    while (g + shift) > 0 and (g + shift) ** m > B:
        g -= 1
    while (g + 1 + shift) ** m <= B:
        g += 1
    return g


def _final_enclosure(endpoints, max_bits: int = 1 << 16) -> DyadicInterval:
    """Outer enclosure of the last interval, refined until the two endpoint
    enclosures no longer overlap."""
    bits = DEFAULT_BITS
    while True:
        lo, hi = endpoints(bits)
        if lo.hi < hi.lo or bits >= max_bits:
            return DyadicInterval(lo.lo, hi.hi)
        bits *= 2


def build_zeta(alpha, eps, window, depth: int, bits=None, mode: str = "dense",
               targets=None, max_n: int = 4096) -> IntervalChain:
    """Nested intervals ``I_j = (((N_j - eps)/alpha)^(1/(n+j)), ((N_j + eps)/alpha)^(1/(n+j)))``.

    Each ``N_{j+1}`` is chosen so that ``[N_{j+1} - eps, N_{j+1} + eps]`` lies in
    ``alpha^(-1/m) [N_j -+ eps]^((m+1)/m)``, checked by raising to integer powers.
    """
    alpha, eps = Fraction(alpha), Fraction(eps)
    c, d = (Fraction(w) for w in window)
    if alpha <= 0:
        raise PreconditionError("alpha must be positive")
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    if mode not in ("dense", "branching"):
        raise PreconditionError(f"unknown mode {mode!r}")
    threshold = 1 + 1 / (2 * eps) if mode == "dense" else 1 + 1 / eps
    if not d > max(c, threshold):
        raise PreconditionError(f"{mode} mode needs d > max(c, {'1 + 1/(2 eps)' if mode == 'dense' else '1 + 1/eps'})"
                                f" = {max(c, threshold)}")
    c = max(c, threshold)
    centers = [Fraction(t) for t in targets] if targets else None

    def center(j):
        if not centers:
            return Fraction(0)
        return centers[j] if j < len(centers) else centers[-1]

    bl = _bits_list(bits)
    # smallest n with an integer N0 in (alpha c^n + 1, alpha d^n - 1), then smallest N0
    n = None
    for k in range(1, max_n + 1):
        lo, hi = alpha * c**k + 1, alpha * d**k - 1
        cand = math.floor(lo) + 1
        if cand < hi:
            n, N0 = k, cand
            break
    if n is None:
        raise WindowTooSmall(f"no exponent n <= {max_n} gives an integer N0 for window ({c}, {d})")
    c0 = center(0)
    if not (N0 + c0 - eps) > alpha * threshold**n:
        raise WindowTooSmall("start condition (N0 - eps) > alpha (1 + 1/(2eps))^n fails")
    entries = [ChainEntry(N0, n, N0 + c0 - eps, N0 + c0 + eps, 1)]
    used = []
    for j in range(depth):
        m = n + j
        prev = entries[-1]
        cj = center(j + 1)
        # need (N' + cj - eps)^m >= prev.lo^(m+1)/alpha and (N' + cj + eps)^m <= prev.hi^(m+1)/alpha
        A = prev.lo ** (m + 1) / alpha
        B = prev.hi ** (m + 1) / alpha
        first = _least_int_with_pow_ge(A, m, cj - eps)
        last = _greatest_int_with_pow_le(B, m, cj + eps)
        options = list(range(first, last + 1)) if last >= first else []
        if not options:
            raise WindowTooSmall(f"step {j + 1}: no admissible integer")
        if mode == "branching":
            assert len(options) >= 2, "branching regime produced a single choice"
        bit = bl[j] if j < len(bl) else 0
        N = _choose(options, bit, j + 1)
        used.append(str(bit))
        entries.append(ChainEntry(N, m + 1, N + cj - eps, N + cj + eps, len(options)))
    last = entries[-1]
    m = last.exponent
    final = _final_enclosure(lambda b: (root_enclosure(last.lo / alpha, m, b),
                                        root_enclosure(last.hi / alpha, m, b)))
    return IntervalChain("zeta_side", alpha, eps, n, entries, "".join(used), mode, (c, d),
                         centers, final)


@dataclass
class CountabilityCertificate:
    side: str
    parameters: dict
    checks: list
    verdict: str
    n0: Optional[int] = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"side": self.side, "parameters": self.parameters, "checks": self.checks,
                "verdict": self.verdict, "n0": self.n0, "notes": self.notes}


def certify_zeta_countable(alpha, eps, zeta_window, samples: int = 20,
                           max_n: int = 400) -> CountabilityCertificate:
    """Check the forcing inequality on ``(1, bound)`` via the exact mean-value bound

    ``alpha^(-1/n) ((N+eps)^((n+1)/n) - (N-eps)^((n+1)/n)) <= ((n+1)/n) 2 eps ((N+eps)/alpha)^(1/n)``,
    which is ``< 1 - 2eps`` iff ``(N+eps)/alpha < ((1-2eps) n / (2 eps (n+1)))^n``.
    """
    alpha, eps = Fraction(alpha), Fraction(eps)
    lo_w, bound = (Fraction(w) for w in zeta_window)
    if alpha == 0 or eps <= 0:
        raise PreconditionError("alpha must be nonzero and eps positive")
    if eps >= Fraction(1, 2) or bound > 1 / (2 * eps) - 1:
        raise PreconditionError("window bound must satisfy bound <= 1/(2 eps) - 1")
    if lo_w < 1 or bound <= lo_w:
        raise PreconditionError("window must be (1, bound) with bound > 1")
    a = abs(alpha)
    checks = []
    run = 0
    n0 = None
    for n in range(1, max_n + 1):
        N_max = math.floor(a * bound**n + eps)
        lhs = (N_max + eps) / a
        rhs = ((1 - 2 * eps) * n / (2 * eps * (n + 1))) ** n
        ok = lhs < rhs
        checks.append({"n": n, "N_max": N_max, "ok": ok,
                       "log2_margin": round(math.log2(rhs) - math.log2(lhs), 6)})
        if ok:
            run += 1
            if run == 1:
                n0 = n
            if run >= samples:
                break
        else:
            run = 0
            n0 = None
    verdict = "forced_unique" if run >= samples else "not_forced"
    params = {"alpha": fmt_rational(alpha), "eps": fmt_rational(eps),
              "window": [fmt_rational(lo_w), fmt_rational(bound)]}
    cert = CountabilityCertificate("zeta_side", params, checks, verdict, n0 if verdict == "forced_unique" else None)
    cert.notes.append("mean-value bound checked at the largest N with N^(1/n) in the window; "
                      f"{samples} consecutive exponents required")
    return cert


# --------------------------------------------------------------- alpha side


def build_alpha(zeta, eps, window, depth: int, bits=None, mode: str = "dense",
                targets=None, seed: Optional[int] = None, n0: Optional[int] = None) -> IntervalChain:
    """Nested intervals ``[(N_j - eps)/zeta^(n0+j), (N_j + eps)/zeta^(n0+j)]`` for alpha."""
    z = lift(zeta)
    eps = Fraction(eps)
    c, d = (Fraction(w) for w in window)
    if sign(z - 1) <= 0 or eps <= 0:
        raise PreconditionError("need zeta > 1 and eps > 0")
    if not d > c:
        raise PreconditionError("window must satisfy d > c")
    if mode == "dense":
        if sign(2 * eps * z - (1 + 2 * eps)) < 0:
            raise PreconditionError("dense mode needs zeta >= 1 + 1/(2 eps)")
    elif mode == "branching":
        if sign(2 * eps * z - (2 + 2 * eps)) < 0:
            raise PreconditionError("branching mode needs zeta >= 1 + 1/eps")
    else:
        raise PreconditionError(f"unknown mode {mode!r}")
    centers = [Fraction(t) for t in targets] if targets else None

    def center(j):
        if not centers:
            return Fraction(0)
        return centers[j] if j < len(centers) else centers[-1]

    bl = _bits_list(bits)
    if seed is None:
        k = 0
        while sign((d - c) * z**k - (1 + 2 * eps)) <= 0:
            k += 1
            if k > 100000:
                raise WindowTooSmall("window never opens")
        n0 = k
        zp = z**n0
        c0 = center(0)
        N0 = math.floor(c * zp + eps - c0) + 1
        if sign(d * zp - (N0 + c0 + eps)) <= 0:
            raise WindowTooSmall("no integer N0 fits the window")
    else:
        n0 = 0 if n0 is None else n0
        N0 = int(seed)
    zp = z**n0
    c0 = center(0)
    entries = [ChainEntry(N0, n0, (N0 + c0 - eps) / zp, (N0 + c0 + eps) / zp, 1)]
    used = []
    r = eps * (z - 1)
    for j in range(depth):
        prev = entries[-1]
        cj, cn = center(j), center(j + 1)
        base = z * (prev.N + cj) - cn
        options = list(range(math.ceil(base - r), math.floor(base + r) + 1))
        if not options:
            raise WindowTooSmall(f"step {j + 1}: no admissible integer")
        if mode == "branching":
            assert len(options) >= 2, "branching regime produced a single choice"
        bit = bl[j] if j < len(bl) else 0
        N = _choose(options, bit, j + 1)
        used.append(str(bit))
        zp = zp * z
        entries.append(ChainEntry(N, n0 + j + 1, (N + cn - eps) / zp, (N + cn + eps) / zp, len(options)))
    last = entries[-1]
    final = _final_enclosure(lambda b: (enclose(last.lo, b), enclose(last.hi, b)))
    return IntervalChain("alpha_side", zeta, eps, n0, entries, "".join(used), mode, (c, d),
                         centers, final)


def certify_alpha_countable(zeta, eps) -> CountabilityCertificate:
    """Forced iff ``(zeta+1) eps < 1/2``, or equality with zeta irrational or of odd denominator."""
    z = lift(zeta)
    eps = Fraction(eps)
    s = sign((z + 1) * eps - Fraction(1, 2))
    if s < 0:
        verdict = "forced_unique"
        reason = "(zeta+1) eps < 1/2"
    elif s == 0:
        even = isinstance(z, Fraction) and z.denominator % 2 == 0
        verdict = "not_forced" if even else "forced_unique"
        reason = "(zeta+1) eps = 1/2 with " + ("even denominator" if even else "zeta irrational or odd denominator")
    else:
        verdict = "not_forced"
        reason = "(zeta+1) eps > 1/2"
    params = {"zeta": z.to_json() if hasattr(z, "to_json") else fmt_rational(z), "eps": fmt_rational(eps)}
    checks = [{"comparison": "(zeta+1) eps vs 1/2", "sign": s, "reason": reason,
               "forcing_rule": "M_{n+1} = <zeta M_n>, since |zeta M_n - M_{n+1}| <= (zeta+1) eps"}]
    return CountabilityCertificate("alpha_side", params, checks, verdict)


# -------------------------------------------------------------------- Z set


@dataclass
class ZSetReport:
    p: int
    insertions: list
    alpha: Fraction
    horizon: int
    n_start: int
    max_dist: Fraction
    argmax: int
    bound_sharp: Fraction
    bound_coarse: Fraction
    exceed_sharp: list

    @property
    def within_sharp(self) -> bool:
        return self.max_dist <= self.bound_sharp

    @property
    def within_coarse(self) -> bool:
        return self.max_dist <= self.bound_coarse

    def to_json(self) -> dict:
        return {
            "p": self.p, "insertions": self.insertions, "alpha": fmt_rational(self.alpha),
            "horizon": self.horizon, "n_start": self.n_start,
            "max_dist": {"exact": fmt_rational(self.max_dist), "approx": float(self.max_dist)},
            "argmax": self.argmax,
            "bound_(p^2+p-1)/(p^3+p^2)": fmt_rational(self.bound_sharp),
            "bound_1/(p+1)": fmt_rational(self.bound_coarse),
            "within_(p^2+p-1)/(p^3+p^2)": self.within_sharp,
            "within_1/(p+1)": self.within_coarse,
            "exceeding_(p^2+p-1)/(p^3+p^2)": self.exceed_sharp[:50],
            "exceeding_count": len(self.exceed_sharp),
        }


def z_set_digits(p: int, insertions, length: int) -> list[int]:
    """Base-p digits: blocks ``0,(p-1)`` with an extra ``p-1`` after each listed block index."""
    ins = set(insertions)
    out = []
    block = 0
    while len(out) < length:
        out += [0, p - 1]
        if block in ins:
            out.append(p - 1)
        block += 1
    return out[:length]


def _check_insertions(insertions) -> list[int]:
    ins = [int(i) for i in insertions]
    if any(i < 0 for i in ins):
        raise PreconditionError("insertion positions must be nonnegative block indices")
    gaps = [b - a for a, b in zip(ins, ins[1:])]
    if any(g <= 0 for g in gaps):
        raise PreconditionError("insertion positions must be strictly increasing")
    if any(b <= a for a, b in zip(gaps, gaps[1:])):
        raise PreconditionError(f"gaps between insertions must strictly increase, got {gaps}")
    return ins


def z_set_alpha(p: int, insertions, horizon: int, n_start: int = 1) -> tuple[Fraction, ZSetReport]:
    """The rational alpha with the digit pattern above and ``max ||alpha p^n||`` over the horizon."""
    if p < 2:
        raise PreconditionError("p must be at least 2")
    ins = _check_insertions(insertions)
    last_block = (ins[-1] + 1) if ins else 0
    prefix_len = 2 * last_block + len(ins)
    digits = z_set_digits(p, ins, prefix_len)
    prefix = 0
    for dgt in digits:
        prefix = prefix * p + dgt
    # the tail repeats the block 0,(p-1), worth 1/(p+1) in units of p^-prefix_len
    alpha = (prefix + Fraction(1, p + 1)) / Fraction(p) ** prefix_len
    x = alpha * Fraction(p) ** n_start
    best, arg = Fraction(-1), n_start
    sharp = Fraction(p * p + p - 1, p**3 + p * p)
    exceed = []
    for n in range(n_start, horizon + 1):
        fr = x - math.floor(x)
        dist = min(fr, 1 - fr)
        if dist > best:
            best, arg = dist, n
        if dist > sharp:
            exceed.append(n)
        x = fr * p
    rep = ZSetReport(p, ins, alpha, horizon, n_start, best, arg, sharp, Fraction(1, p + 1), exceed)
    return alpha, rep


def gaps_to_insertions(gaps, horizon_digits: int) -> list[int]:
    """Cumulative block indices from a gap schedule, truncated to the digit horizon."""
    out, pos = [], 0
    for g in gaps:
        pos += g
        if 2 * pos + len(out) > horizon_digits:
            break
        out.append(pos)
    return out


def membership_check(chain: IntervalChain) -> bool:
    """Self-verification of a chain's sample point on its horizon (exact)."""
    from .verify import verify_membership

    if chain.direction == "alpha_side":
        alpha = chain.sample_point()
        return verify_membership(alpha, chain.fixed, chain.eps, chain.horizon).ok
    zeta = chain.sample_point()
    return verify_membership(chain.fixed, zeta, chain.eps, chain.horizon).ok


__all__ = [
    "check_bernardo", "build_zeta", "build_alpha", "certify_zeta_countable",
    "certify_alpha_countable", "z_set_alpha", "IntervalChain", "CountabilityCertificate",
    "ZSetReport", "gaps_to_insertions", "membership_check", "dist_exact",
]
