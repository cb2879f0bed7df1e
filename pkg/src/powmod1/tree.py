"""The recursion tree of admissible integer sequences N_0, N_1, ... for fixed zeta and eps.

A child M of N satisfies ``[M - eps, M + eps] subset zeta [N - eps, N + eps]``,
i.e. ``|M - zeta N| <= eps (zeta - 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import InvalidPath, PreconditionError
from .exact import (
    DEFAULT_BITS,
    AlgebraicReal,
    DyadicInterval,
    enclose,
    fmt_rational,
    frac,
    lift,
    nearest_integer,
    sign,
)
from .intpoly import IntPolynomial, parse_poly


def _zeta(zeta):
    z = lift(zeta)
    if sign(z - 1) <= 0:
        raise PreconditionError("zeta must exceed 1")
    return z


def _eps(eps) -> Fraction:
    eps = Fraction(eps)
    if not 0 < eps <= Fraction(1, 2):
        raise PreconditionError(f"eps must lie in (0, 1/2], got {eps}")
    return eps


def expand(zeta, eps, node: int) -> list[int]:
    """All children ``M`` with ``zeta N - eps(zeta-1) <= M <= zeta N + eps(zeta-1)``."""
    z = _zeta(zeta)
    eps = _eps(eps)
    c = z * node
    r = eps * (z - 1)
    return list(range(math.ceil(c - r), math.floor(c + r) + 1))


def _expand_lifted(z, eps: Fraction, node: int) -> list[int]:
    c = z * node
    r = eps * (z - 1)
    return list(range(math.ceil(c - r), math.floor(c + r) + 1))


# --------------------------------------------------------------- recurrences


@dataclass(frozen=True)
class Recurrence:
    order: int
    coeffs: tuple  # N_{j+k} = c_1 N_{j+k-1} + ... + c_k N_j + constant
    constant: int
    checked: int  # number of terms the rule was verified on

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": list(self.coeffs), "constant": self.constant,
                "checked_terms": self.checked, "scope": "fitted on the computed horizon only"}

    def __str__(self) -> str:
        terms = [f"{c}*N[j+{self.order - 1 - i}]" for i, c in enumerate(self.coeffs)]
        s = f"N[j+{self.order}] = " + " + ".join(terms)
        if self.constant:
            s += f" {'+' if self.constant > 0 else '-'} {abs(self.constant)}"
        return s


def _solve(A: list, b: list) -> Optional[list]:
    """Gauss-Jordan over Q on an overdetermined system.

    Returns a particular solution (free unknowns set to 0) or ``None`` when
    the system is inconsistent.
    """
    rows, n = len(A), len(A[0]) if A else 0
    M = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, rows) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pv = M[r][col]
        M[r] = [x / pv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
    if any(M[i][n] != 0 for i in range(r, rows)):
        return None
    sol = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        sol[col] = M[i][n]
    return sol


def detect_recurrence(path, max_order: int = 3) -> Optional[Recurrence]:
    """Smallest-order integer linear recurrence (homogeneous before affine) that
    reproduces the whole path; ``None`` when no rule fits."""
    path = [int(x) for x in path]
    for order in range(1, max_order + 1):
        for with_const in (False, True):
            unknowns = order + (1 if with_const else 0)
            rows = len(path) - order
            if rows < unknowns:
                continue
            A, b = [], []
            for j in range(rows):
                row = [path[j + order - 1 - i] for i in range(order)]
                if with_const:
                    row.append(1)
                A.append(row)
                b.append(path[j + order])
            sol = _solve(A, b)
            if sol is None or any(x.denominator != 1 for x in sol):
                continue
            ints = [int(x) for x in sol]
            if all(sum(c * a for c, a in zip(ints, row)) == y for row, y in zip(A, b)):
                coeffs = tuple(ints[:order])
                const = ints[order] if with_const else 0
                return Recurrence(order, coeffs, const, len(path))
    return None


# ------------------------------------------------------------------- paths


@dataclass
class PathReport:
    seed: int
    path: list
    deterministic_at: Optional[int]
    frac_parts: list
    avoided_window_hit: bool
    recurrence: Optional[Recurrence]
    child_counts: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "path": self.path,
            "deterministic_at": self.deterministic_at,
            "deterministic_scope": "to horizon",
            "child_counts": self.child_counts,
            "frac_parts": [f.to_json() for f in self.frac_parts],
            "avoided_window_hit": self.avoided_window_hit,
            "recurrence": self.recurrence.to_json() if self.recurrence else None,
        }


@dataclass
class Enumeration:
    zeta: object
    eps: Fraction
    seed: int
    horizon: int
    paths: list
    truncated: bool
    dead_ends: int
    edges: dict  # (depth, N) -> children

    def to_json(self) -> dict:
        adjacency = [{"id": f"{d}:{n}", "depth": d, "value": n,
                      "children": [f"{d + 1}:{c}" for c in kids]}
                     for (d, n), kids in sorted(self.edges.items())]
        z = self.zeta
        return {
            "zeta": z.to_json() if hasattr(z, "to_json") else fmt_rational(z),
            "eps": fmt_rational(self.eps), "seed": self.seed, "horizon": self.horizon,
            "path_count": len(self.paths), "truncated": self.truncated,
            "budget_exhausted": self.truncated, "dead_ends": self.dead_ends,
            "paths": [p.to_json() for p in self.paths],
            "adjacency": adjacency,
        }

    def to_dot(self) -> str:
        lines = ["digraph T {"]
        for (d, n), kids in sorted(self.edges.items()):
            for c in kids:
                lines.append(f'  "{d}:{n}" -> "{d + 1}:{c}";')
        lines.append("}")
        return "\n".join(lines)


def _frac_enclosures(z, path, bits):
    out = []
    for n in path:
        out.append(enclose(frac(z * n), bits))
    return out


def enumerate_paths(zeta, eps, N0: int, horizon: int, max_paths: int = 1 << 16,
                    bits: int = 32) -> Enumeration:
    """Depth-first enumeration of all paths ``N0, ..., N_horizon`` (budgeted)."""
    z = _zeta(zeta)
    eps = _eps(eps)
    if horizon < 0:
        raise PreconditionError("horizon must be nonnegative")
    edges: dict = {}
    full: list = []
    dead = 0
    truncated = False

    def children(d, n):
        key = (d, n)
        if key not in edges:
            edges[key] = _expand_lifted(z, eps, n) if d < horizon else []
        return edges[key]

    stack = [[N0]]
    while stack:
        path = stack.pop()
        d = len(path) - 1
        if d == horizon:
            if len(full) >= max_paths:
                truncated = True
                break
            full.append(path)
            continue
        kids = children(d, path[-1])
        if not kids:
            dead += 1
            continue
        for c in reversed(kids):
            stack.append(path + [c])
    r = eps * (z - 1)
    win_lo, win_hi = 1 - r, r
    reports = []
    for path in full:
        counts = [len(edges.get((d, n), [])) for d, n in enumerate(path[:-1])]
        det = None
        for j in range(len(counts), -1, -1):
            if all(c == 1 for c in counts[j:]):
                det = j
            else:
                break
        fr = _frac_enclosures(z, path, bits)
        hit = False
        if sign(win_hi - win_lo) >= 0:
            for n in path:
                f = frac(z * n)
                if sign(f - win_lo) >= 0 and sign(win_hi - f) >= 0:
                    hit = True
                    break
        reports.append(PathReport(N0, path, det, fr, hit, detect_recurrence(path), counts))
    return Enumeration(zeta, eps, N0, horizon, reports, truncated, dead, edges)


# ------------------------------------------------------------------ W(zeta)


@dataclass
class WTestResult:
    hit: bool
    first_hit: Optional[int]
    orbit_length: int
    min_distance_to_half: object

    def to_json(self) -> dict:
        return {"hit": self.hit, "first_hit": self.first_hit, "orbit_length": self.orbit_length,
                "min_distance_to_half": self.min_distance_to_half.to_json()
                if hasattr(self.min_distance_to_half, "to_json")
                else {"exact": fmt_rational(self.min_distance_to_half)},
                "scope": "finite horizon"}


def w_set_test(zeta, N0: int, horizon: int, beta, bits: int = DEFAULT_BITS) -> WTestResult:
    """Follow ``N_{j+1} = <zeta N_j>`` and report whether ``{N_j zeta}`` enters
    the open window ``(1/2 - beta, 1/2 + beta)``."""
    z = _zeta(zeta)
    if sign(z - Fraction(3, 2)) <= 0:
        raise PreconditionError("w_set_test needs zeta > 3/2")
    beta = Fraction(beta)
    half = Fraction(1, 2)
    n = N0
    best = None
    best_exact = None
    for j in range(horizon + 1):
        x = z * n
        d = frac(x) - half
        d = -d if sign(d) < 0 else d
        if best_exact is None or sign(d - best_exact) < 0:
            best_exact = d
        if sign(d - beta) < 0:
            return WTestResult(True, j, j + 1, _present(d, bits))
        n = nearest_integer(x)
    best = _present(best_exact, bits)
    return WTestResult(False, None, horizon + 1, best)


def _present(x, bits):
    return x if isinstance(x, Fraction) else enclose(x, bits)


# ---------------------------------------------------------- induced alpha


def path_to_alpha(zeta, eps, path, n0: int = 0, bits: int = DEFAULT_BITS) -> DyadicInterval:
    """Enclosure of ``[(N_k - eps)/zeta^(n0+k), (N_k + eps)/zeta^(n0+k)]`` for the last entry."""
    lo, hi = path_to_alpha_exact(zeta, eps, path, n0)
    a, b = enclose(lo, bits), enclose(hi, bits)
    return DyadicInterval(a.lo, b.hi)


def path_to_alpha_exact(zeta, eps, path, n0: int = 0):
    z = _zeta(zeta)
    eps = _eps(eps)
    path = [int(x) for x in path]
    if not path:
        raise InvalidPath("empty path")
    for i in range(len(path) - 1):
        if path[i + 1] not in _expand_lifted(z, eps, path[i]):
            raise InvalidPath(f"step {i}: {path[i + 1]} is not a child of {path[i]}")
    k = len(path) - 1
    scale = z ** (n0 + k)
    return (path[-1] - eps) / scale, (path[-1] + eps) / scale


# -------------------------------------------------------------- avoided I


@dataclass
class AvoidedInterval:
    zeta: AlgebraicReal
    length: int
    lo: Optional[DyadicInterval]
    hi: Optional[DyadicInterval]
    nonempty: bool

    def to_json(self) -> dict:
        return {"zeta": self.zeta.to_json(), "L": self.length, "nonempty": self.nonempty,
                "lo": self.lo.to_json() if self.lo else None,
                "hi": self.hi.to_json() if self.hi else None}


def avoided_interval(P, bits: int = DEFAULT_BITS) -> AvoidedInterval:
    """``I(zeta) = [1 - (zeta-1)/L, (zeta-1)/L]`` for the largest real root of ``P``."""
    P = P if isinstance(P, IntPolynomial) else parse_poly(P)
    zeta = AlgebraicReal.largest_root(P)
    if zeta.compare(1) <= 0:
        raise PreconditionError(f"{P} has no real root > 1")
    L = sum(abs(c) for c in P.primitive().coeffs)
    z = lift(zeta)
    hi = (z - 1) / L
    lo = 1 - hi
    nonempty = sign(hi - lo) > 0
    if not nonempty:
        return AvoidedInterval(zeta, L, None, None, False)
    return AvoidedInterval(zeta, L, enclose(lo, bits), enclose(hi, bits), True)
