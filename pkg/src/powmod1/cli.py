"""Command-line front end.  Every subcommand prints one report in the
``powmod1-report/1`` envelope as JSON, CSV (key,value rows) or an aligned table."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import bounds, construct, polyalg, tree, verify
from .errors import PreconditionError, UndecidableError
from .exact import (
    DEFAULT_BITS,
    AlgebraicReal,
    fmt_rational,
    parse_rational,
    parse_real,
)
from .intpoly import parse_poly

SCHEMA = "powmod1-report/1"


class UsageError(PreconditionError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _parse(flag: str, fn, text):
    try:
        return fn(text)
    except (PreconditionError, ValueError, ZeroDivisionError) as exc:
        raise PreconditionError(f"{flag}: cannot parse {text!r}: {exc}") from None


def _rat(flag, text) -> Fraction:
    return _parse(flag, parse_rational, text)


def _real(flag, text):
    return _parse(flag, parse_real, text)


def _ints(flag, text) -> list[int]:
    def conv(s):
        s = s.strip()
        if s.startswith("["):
            return [int(x) for x in json.loads(s)]
        return [int(x) for x in s.split(",") if x.strip()]
    return _parse(flag, conv, text)


def _ratio(flag, text) -> tuple[int, int]:
    r = _rat(flag, text)
    return r.numerator, r.denominator


# ------------------------------------------------------------ subcommands


def cmd_tau(a):
    p, q = _ratio("ratio", a.ratio)
    t = bounds.tau(p, q, a.bits)
    out = t.to_json()
    v = t.value
    out["width"] = fmt_rational(v.width)
    out["certified"] = {"tau > 1/(p+q)": v.certainly_gt(Fraction(1, p + q)),
                        "tau < 1/2": v.certainly_lt(Fraction(1, 2)),
                        "tau > 1/p - q^2/p^3": v.certainly_gt(Fraction(1, p) - Fraction(q * q, p**3))}
    if q == 1:
        up = Fraction(1, p) - Fraction(1, p**3 + p**2)
        out["integer_upper"] = {"value": fmt_rational(up), "approx": float(up),
                                "tau <= upper": v.certainly_le(up),
                                "provenance": "integer zeta: 1/p - 1/(p^3+p^2)"}
    return {"ratio": fmt_rational(Fraction(p, q)), "bits": a.bits}, out


def cmd_bounds(a):
    z = _real("--zeta", a.zeta)
    eps = _rat("--eps", a.eps) if a.eps is not None else None
    rep = bounds.epsilon_bounds(z, L=a.L, eps=eps, bits=a.bits, with_theta=not a.no_theta)
    out = rep.to_json()
    if a.alpha is not None:
        lines = bounds.comparison_bounds(z, _rat("--alpha", a.alpha), a.bits)
        out["comparison_lines"] = [{"name": n, "value": bounds.value_json(v)} for n, v in lines]
    return {"zeta": a.zeta, "L": a.L, "eps": a.eps, "alpha": a.alpha, "bits": a.bits}, out


def cmd_theta(a):
    params = {"bits": a.bits}
    out = {}
    if a.zeta is not None:
        params["zeta"] = a.zeta
        out["theta"] = bounds.pollington_theta(_real("--zeta", a.zeta), a.bits).to_json()
    if a.crossing:
        lo, hi = bounds.theta_crossing(a.tol_bits)
        out["eta_crossing"] = {"lo": fmt_rational(lo), "hi": fmt_rational(hi),
                               "approx": [float(lo), float(hi)],
                               "equation": "theta(2+eta) = 1/(2(1+eta))"}
        params["tol_bits"] = a.tol_bits
    if not out:
        raise PreconditionError("theta: give --zeta and/or --crossing")
    return params, out


def cmd_pisot(a):
    P = _parse("--poly", parse_poly, a.poly)
    rep = polyalg.classify_pisot_salem(P, a.bits)
    return {"poly": a.poly}, rep.to_json()


def cmd_family(a):
    m = polyalg.family(a.kind, a.m, a.b)
    rep = polyalg.classify_pisot_salem(m.polynomial)
    out = m.to_json()
    out["classification"] = rep.classification
    out["criterion_2_1"] = rep.criterion_2_1
    out["root_counts"] = list(rep.root_counts)
    out["L_over_zeta_minus_one"] = polyalg.l_over_zeta_minus_one(m, a.bits).to_json()
    return {"kind": a.kind, "m": a.m, "b": a.b}, out


def _window(a):
    return _rat("--c", a.c), _rat("--d", a.d)


def cmd_build_alpha(a):
    z = _real("--zeta", a.zeta)
    eps = _rat("--eps", a.eps)
    targets = [_rat("--targets", t) for t in a.targets.split(",")] if a.targets else None
    chain = construct.build_alpha(z, eps, _window(a), a.depth, a.bits, a.mode, targets, seed=a.seed)
    out = chain.to_json()
    out["self_check"] = construct.membership_check(chain)
    return {"zeta": a.zeta, "eps": a.eps, "c": a.c, "d": a.d, "depth": a.depth, "bits": a.bits,
            "mode": a.mode, "seed": a.seed, "targets": a.targets}, out


def cmd_build_zeta(a):
    alpha = _rat("--alpha", a.alpha)
    eps = _rat("--eps", a.eps)
    targets = [_rat("--targets", t) for t in a.targets.split(",")] if a.targets else None
    chain = construct.build_zeta(alpha, eps, _window(a), a.depth, a.bits, a.mode, targets)
    out = chain.to_json()
    out["self_check"] = construct.membership_check(chain)
    return {"alpha": a.alpha, "eps": a.eps, "c": a.c, "d": a.d, "depth": a.depth, "bits": a.bits,
            "mode": a.mode, "targets": a.targets}, out


def cmd_certify(a):
    eps = _rat("--eps", a.eps)
    if a.side == "alpha":
        if a.zeta is None:
            raise PreconditionError("certify --side alpha needs --zeta")
        cert = construct.certify_alpha_countable(_real("--zeta", a.zeta), eps)
        params = {"side": "alpha", "zeta": a.zeta, "eps": a.eps}
    else:
        if a.alpha is None or a.bound is None:
            raise PreconditionError("certify --side zeta needs --alpha and --bound")
        cert = construct.certify_zeta_countable(_rat("--alpha", a.alpha), eps, (1, _rat("--bound", a.bound)),
                                                samples=a.samples)
        params = {"side": "zeta", "alpha": a.alpha, "eps": a.eps, "bound": a.bound}
    return params, cert.to_json()


def cmd_tree(a):
    z = _real("--zeta", a.zeta)
    en = tree.enumerate_paths(z, _rat("--eps", a.eps), a.seed, a.horizon, a.max_paths)
    out = en.to_json()
    if isinstance(z, AlgebraicReal):
        try:
            out["avoided_interval"] = tree.avoided_interval(z.minpoly).to_json()
        except PreconditionError:
            out["avoided_interval"] = None
    if a.dot:
        with open(a.dot, "w") as fh:
            fh.write(en.to_dot() + "\n")
    return {"zeta": a.zeta, "eps": a.eps, "seed": a.seed, "horizon": a.horizon}, out


def cmd_wtest(a):
    res = tree.w_set_test(_real("--zeta", a.zeta), a.seed, a.horizon, _rat("--beta", a.beta), a.bits)
    return {"zeta": a.zeta, "seed": a.seed, "horizon": a.horizon, "beta": a.beta}, res.to_json()


def cmd_run_length(a):
    p, q = _ratio("--ratio", a.ratio)
    rep = verify.run_length(_rat("--alpha", a.alpha), p, q, _rat("--eps", a.eps), a.nmax)
    return {"alpha": a.alpha, "ratio": a.ratio, "eps": a.eps, "nmax": a.nmax}, rep.to_json()


def cmd_zset(a):
    if a.insertions is not None:
        ins = _ints("--insertions", a.insertions)
    elif a.gaps is not None:
        ins = construct.gaps_to_insertions(_ints("--gaps", a.gaps), a.horizon)
    elif a.doubling is not None:
        ins = construct.gaps_to_insertions([a.doubling << k for k in range(64)], a.horizon)
    else:
        ins = []
    _, rep = construct.z_set_alpha(a.p, ins, a.horizon)
    return {"p": a.p, "insertions": ins, "horizon": a.horizon}, rep.to_json()


def cmd_gap(a):
    rep = verify.gap_stats(_rat("--alpha", a.alpha), _real("--zeta", a.zeta), a.horizon, a.window)
    return {"alpha": a.alpha, "zeta": a.zeta, "horizon": a.horizon, "window": a.window}, rep.to_json()


def cmd_verify(a):
    z = _real("--zeta", a.zeta)
    alpha = _ints("--alpha", a.alpha) if a.alpha.strip().startswith("[") else _rat("--alpha", a.alpha)
    res = verify.verify_membership(alpha, z, _rat("--eps", a.eps), range(a.nmin, a.nmax + 1))
    return {"alpha": a.alpha, "zeta": a.zeta, "eps": a.eps, "nmin": a.nmin, "nmax": a.nmax}, res.to_json()


# ---------------------------------------------------------------- output


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        if all(not isinstance(x, (dict, list)) for x in obj):
            yield prefix, json.dumps(obj)
        else:
            for i, x in enumerate(obj):
                yield from _flatten(x, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2)
    rows = list(_flatten(payload))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="powmod1", description="Exact experiments on ||alpha zeta^n||.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--format", choices=("json", "csv", "table"), default="json")
        sp.add_argument("--output", help="write the report to this path instead of stdout")
        return sp

    sp = add("tau", cmd_tau, "Dubickas tau(p/q) enclosure")
    sp.add_argument("ratio", help='p/q, e.g. "10/1" or "3/2"')
    sp.add_argument("--bits", type=int, default=DEFAULT_BITS)

    sp = add("bounds", cmd_bounds, "eps1/eps2 brackets for zeta")
    sp.add_argument("--zeta", required=True)
    sp.add_argument("--L", type=int)
    sp.add_argument("--eps")
    sp.add_argument("--alpha", help="adds the log(alpha) comparison lines")
    sp.add_argument("--bits", type=int, default=DEFAULT_BITS)
    sp.add_argument("--no-theta", action="store_true")

    sp = add("theta", cmd_theta, "Pollington-derived theta(zeta) and the eta crossing")
    sp.add_argument("--zeta")
    sp.add_argument("--crossing", action="store_true")
    sp.add_argument("--tol-bits", type=int, default=40)
    sp.add_argument("--bits", type=int, default=DEFAULT_BITS)

    sp = add("pisot", cmd_pisot, "Pisot/Salem classification of a polynomial")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--bits", type=int, default=DEFAULT_BITS)

    sp = add("family", cmd_family, "P_{m,b} / Q_{m,b} family member")
    sp.add_argument("--kind", choices=("P", "Q", "p", "q"), default="P")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--bits", type=int, default=DEFAULT_BITS)

    for name, fn in (("build-alpha", cmd_build_alpha), ("build-zeta", cmd_build_zeta)):
        sp = add(name, fn, f"nested intervals ({name[6:]} side)")
        if name == "build-alpha":
            sp.add_argument("--zeta", required=True)
            sp.add_argument("--seed", type=int)
        else:
            sp.add_argument("--alpha", required=True)
        sp.add_argument("--eps", required=True)
        # the alpha-side window defaults to the unit interval
        alpha_side = name == "build-alpha"
        sp.add_argument("--c", required=not alpha_side, default="0" if alpha_side else None)
        sp.add_argument("--d", required=not alpha_side, default="1" if alpha_side else None)
        sp.add_argument("--depth", type=int, default=10)
        sp.add_argument("--bits", default="", help="branch choices as a 0/1 string")
        sp.add_argument("--mode", choices=("dense", "branching"), default="dense")
        sp.add_argument("--targets", help="comma-separated centers in [0,1)")

    sp = add("certify", cmd_certify, "countability certificates")
    sp.add_argument("--side", choices=("alpha", "zeta"), required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--zeta")
    sp.add_argument("--alpha")
    sp.add_argument("--bound")
    sp.add_argument("--samples", type=int, default=20)

    sp = add("tree", cmd_tree, "enumerate the recursion tree")
    sp.add_argument("--zeta", required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--horizon", type=int, default=12)
    sp.add_argument("--max-paths", type=int, default=1 << 16)
    sp.add_argument("--dot", help="also write the tree in DOT format to this path")

    sp = add("wtest", cmd_wtest, "finite-horizon W(zeta) seed test")
    sp.add_argument("--zeta", required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--horizon", type=int, default=1000)
    sp.add_argument("--beta", required=True)
    sp.add_argument("--bits", type=int, default=DEFAULT_BITS)

    sp = add("run-length", cmd_run_length, "run lengths of ||alpha (p/q)^n|| <= eps")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--ratio", required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--nmax", type=int, default=200)

    sp = add("zset", cmd_zset, "base-p digit construction")
    sp.add_argument("--p", type=int, default=10)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--insertions", help="block indices, e.g. 5,15,35")
    g.add_argument("--gaps", help="gap schedule, e.g. 5,10,20")
    g.add_argument("--doubling", type=int, help="gaps START, 2*START, 4*START, ...")
    sp.add_argument("--horizon", type=int, default=1000)

    sp = add("gap", cmd_gap, "windowed max-min of fractional parts")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--zeta", required=True)
    sp.add_argument("--horizon", type=int, default=200)
    sp.add_argument("--window", type=int, default=50)

    sp = add("verify", cmd_verify, "exact membership check on a horizon")
    sp.add_argument("--alpha", required=True, help='rational, or "[a0,a1,...]" in the power basis of zeta')
    sp.add_argument("--zeta", required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--nmin", type=int, default=0)
    sp.add_argument("--nmax", type=int, default=100)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        params, result = args.func(args)
    except UndecidableError as exc:
        print(f"undecidable at precision: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    payload = {"schema": SCHEMA, "command": args.command, "parameters": params, "result": result}
    text = render(payload, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
