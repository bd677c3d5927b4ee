"""Command-line front end.

Exit codes: 0 success, 2 when a library precondition fails (the error's
name is printed on one line), 64 for usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import analytic, crypto, hybrid_cf, prng, unimaginable
from .core import (
    NadicContext,
    NadicInt,
    crt_split,
    deserialize,
    digits,
    from_digits,
    from_integer,
    from_rational,
    invert,
    make_context,
    parse_digit_string,
    serialize,
)
from .errors import InvalidArgument, NadicError

EX_USAGE = 64
PI_BAND = (2.94, 3.34)
PI_MAX_VARIANCE = 0.25


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ctx_args(p: argparse.ArgumentParser, base=10, precision=8) -> None:
    p.add_argument("--base", type=int, default=base)
    p.add_argument("--precision", type=int, default=precision)


def _build_parser() -> _Parser:
    parser = _Parser(prog="nadic", description="Truncated n-adic arithmetic toolkit.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("ctx", help="show a context")
    _ctx_args(p)

    p = sub.add_parser("arith", help="ring operations on integers or a/b rationals")
    p.add_argument("op", choices=["add", "sub", "mul", "neg", "inv", "div", "digits", "split"])
    p.add_argument("operands", nargs="+")
    p.add_argument("--digits", dest="as_digits", action="store_true", help="print digit strings")
    _ctx_args(p)

    p = sub.add_parser("sqrt", help="Hensel square root of a unit")
    p.add_argument("value")
    p.add_argument("--branch", action="append", default=[], metavar="P:R")
    _ctx_args(p, base=5)

    for name in ("exp", "log"):
        p = sub.add_parser(name, help=f"n-adic {name} by power series")
        p.add_argument("value")
        _ctx_args(p, base=5)

    p = sub.add_parser("cf", help="hybrid n-continued fractions")
    cfsub = p.add_subparsers(dest="cf_command", parser_class=_Parser)
    q = cfsub.add_parser("eval", help="convergents of [a0; a1, ...]_n")
    q.add_argument("cf")
    q.add_argument("--count", type=int)
    q.add_argument("--all", action="store_true")
    q = cfsub.add_parser("surd", help="quadratic limit of a periodic expansion")
    q.add_argument("cf")
    q = cfsub.add_parser("heron-check", help="Heron iterates vs 2^i-digit convergents")
    q.add_argument("a", type=int)
    q.add_argument("b", type=int)
    q.add_argument("n", type=int)
    q.add_argument("--depth", type=int, default=3)
    q = cfsub.add_parser("report", help="real and p-adic convergence report")
    q.add_argument("cf")
    q.add_argument("--depth", type=int, default=8)
    q.add_argument("--precision", type=int, default=8)

    for name in ("encrypt", "decrypt"):
        p = sub.add_parser(name, help=f"{name} with the toy multiplicative cipher (not secure)")
        p.add_argument("message", help="digit string, most significant first")
        p.add_argument("--key", required=True, help="key as a digit string")
        p.add_argument("--base", type=int, default=10)
        p.add_argument("--precision", type=int)

    p = sub.add_parser("encode37", help="text over 0-9A-Z_ to a 37-adic integer")
    p.add_argument("text")
    p.add_argument("--precision", type=int)
    p = sub.add_parser("decode37", help="37-adic integer back to text")
    p.add_argument("value", help='"<residue> mod 37^<k>" or a residue with --precision')
    p.add_argument("--precision", type=int)

    p = sub.add_parser("prng", help="square-root iteration digits (not cryptographic)")
    p.add_argument("action", nargs="?", choices=["blocks", "pi-test"], default="blocks")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--groups", type=int, default=100)
    p.add_argument("--per-group", type=int, default=40)
    _ctx_args(p, base=5, precision=32)

    p = sub.add_parser("idempotents", help="nontrivial idempotents of Z_n")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--digits", "--precision", dest="precision", type=int, default=20)

    p = sub.add_parser("lastdigits", help="last digits of huge towers")
    ldsub = p.add_subparsers(dest="ld_command", parser_class=_Parser)
    q = ldsub.add_parser("tower", help="base ↑^arrows height")
    q.add_argument("--base", type=int, required=True)
    q.add_argument("--arrows", type=int, default=2)
    q.add_argument("--height", type=int, required=True)
    q.add_argument("--digits", type=int, default=10)
    q.add_argument("--mod-base", type=int, default=10)
    q = ldsub.add_parser("expr", help='an arrow expression such as "3^^^^3"')
    q.add_argument("expr")
    q.add_argument("--digits", type=int, default=10)
    q.add_argument("--mod-base", type=int, default=10)
    q = ldsub.add_parser("graham", help="Graham's number")
    q.add_argument("--digits", type=int, default=10)
    q = ldsub.add_parser("infinite", help="infinite tower base^^oo")
    q.add_argument("--base", type=int, required=True)
    q.add_argument("--digits", type=int, default=10)
    q.add_argument("--mod-base", type=int, default=10)
    return parser


def _parse_value(c: NadicContext, text: str) -> NadicInt:
    text = text.strip()
    try:
        if "/" in text:
            a, b = text.split("/")
            return from_rational(c, int(a), int(b))
        return from_integer(c, int(text))
    except ValueError as exc:
        if isinstance(exc, NadicError):
            raise
        raise InvalidArgument(f"not an integer or a/b rational: {text!r}") from None


def _fmt(x: NadicInt, as_digits: bool) -> str:
    return digits(x).render(prefix=True) if as_digits else str(x.residue)


def _cmd_ctx(args) -> dict:
    c = make_context(args.base, args.precision)
    return {
        "base": str(c.base),
        "precision": str(c.precision),
        "factorization": " * ".join(f"{p}^{a}" for p, a in c.factorization),
        "modulus": str(c.modulus),
    }


def _cmd_arith(args) -> dict:
    c = make_context(args.base, args.precision)
    xs = [_parse_value(c, t) for t in args.operands]
    arity = {"neg": 1, "inv": 1, "digits": 1, "split": 1}.get(args.op, 2)
    if len(xs) != arity:
        raise UsageError(f"{args.op} takes {arity} operand(s)")
    op = args.op
    if op == "split":
        return {"components": [serialize(t) for t in crt_split(xs[0])]}
    if op == "digits":
        return {"digits": digits(xs[0]).render(prefix=True)}
    result = {
        "add": lambda: xs[0] + xs[1],
        "sub": lambda: xs[0] - xs[1],
        "mul": lambda: xs[0] * xs[1],
        "neg": lambda: -xs[0],
        "inv": lambda: invert(xs[0]),
        "div": lambda: xs[0] * invert(xs[1]),
    }[op]()
    return {"result": _fmt(result, args.as_digits)}


def _parse_branch(items: Sequence[str]) -> dict[int, int]:
    out = {}
    for item in items:
        try:
            p, r = item.split(":")
            out[int(p)] = int(r)
        except ValueError:
            raise UsageError(f"bad --branch {item!r}, expected P:R") from None
    return out


def _cmd_sqrt(args) -> dict:
    c = make_context(args.base, args.precision)
    root, steps = analytic.nadic_sqrt(_parse_value(c, args.value), _parse_branch(args.branch))
    return {"result": str(root.residue), "iterations": str(steps)}


def _cmd_exp(args) -> dict:
    c = make_context(args.base, args.precision)
    return {"result": str(analytic.nadic_exp(_parse_value(c, args.value)).residue)}


def _cmd_log(args) -> dict:
    c = make_context(args.base, args.precision)
    return {"result": str(analytic.nadic_log(_parse_value(c, args.value)).residue)}


def _cmd_cf(args) -> dict:
    cmd = args.cf_command
    if cmd is None:
        raise UsageError("cf needs one of: eval, surd, heron-check, report")
    if cmd == "heron-check":
        check = hybrid_cf.verify_heron_correspondence(args.a, args.b, args.n, args.depth)
        return {
            "holds": "true" if check.holds else "false",
            "x": str(check.x),
            "cf": str(check.cf),
            "table": [
                {"i": str(i), "heron": str(h), "convergent": str(c)} for i, h, c in check.table
            ],
        }
    cf = hybrid_cf.parse_cf(args.cf)
    if cmd == "eval":
        if cf.is_periodic and args.count is None:
            raise UsageError("periodic input needs --count")
        count = args.count if args.count is not None else len(cf)
        conv = hybrid_cf.convergents(cf, count)
        if args.all:
            return {"convergents": [str(x) for x in conv]}
        return {"value": str(conv[-1])}
    if cmd == "surd":
        sol = hybrid_cf.periodic_to_surd(cf)
        return {
            "real_root": "unverified" if sol.real_root is None else str(sol.real_root),
            "quadratic": " ".join(str(x) for x in sol.quadratic),
            "roots": [str(r) for r in sol.roots],
            "nadic_root_residues": {str(p): str(r) for p, r in sol.nadic_root_residues.items()},
        }
    rep = hybrid_cf.dual_convergence_report(cf, args.depth, args.precision)
    verdict = {True: "pass", False: "fail", None: "unverified"}
    return {
        "cf": str(cf),
        "ok": "true" if rep.ok else "false",
        "real": verdict[rep.real_verdict],
        "nadic": verdict[rep.nadic_verdict],
        "valuation_law": verdict[rep.valuation_law],
        "nadic_limit": "" if rep.nadic_limit is None else serialize(rep.nadic_limit),
        "limit_valuations": {str(p): " ".join(map(str, v)) for p, v in rep.limit_valuations.items()},
    }


def _cipher(args, forward: bool) -> dict:
    k = args.precision or len(parse_digit_string(args.message, args.base))
    c = make_context(args.base, k)
    msg = from_digits(c, parse_digit_string(args.message, args.base))
    key = crypto.make_key(c, from_digits(c, parse_digit_string(args.key, args.base)))
    out = crypto.encrypt(key, msg) if forward else crypto.decrypt(key, msg)
    return {"result": digits(out).render()}


def _cmd_encode37(args) -> dict:
    x = crypto.encode_base37(args.text, args.precision)
    return {"result": serialize(x)}


def _cmd_decode37(args) -> dict:
    if " mod " in args.value:
        x = deserialize(args.value)
    else:
        if args.precision is None:
            raise UsageError("a bare residue needs --precision")
        x = NadicInt(make_context(37, args.precision), int(args.value))
    return {"result": crypto.decode_base37(x)}


def _cmd_prng(args) -> dict:
    c = make_context(args.base, args.precision)
    state = prng.seed_state(c, args.seed)
    if args.action == "blocks":
        return {"blocks": [prng.next_block(state).render() for _ in range(args.count)]}
    est = prng.monte_carlo_pi(state, args.groups, args.per_group, N=args.base**prng.BLOCK_DIGITS)
    ok = PI_BAND[0] <= est.mean <= PI_BAND[1] and est.variance <= PI_MAX_VARIANCE
    return {
        "mean": f"{est.mean:.6f}",
        "variance": f"{est.variance:.6f}",
        "verdict": "pass" if ok else "fail",
    }


def _cmd_idempotents(args) -> dict:
    c = make_context(args.base, args.precision)
    return {"idempotents": [digits(e).render(prefix=True) for e in unimaginable.idempotents(c)]}


def _cmd_lastdigits(args) -> dict:
    cmd = args.ld_command
    if cmd is None:
        raise UsageError("lastdigits needs one of: tower, expr, graham, infinite")
    if cmd == "graham":
        d = unimaginable.graham_last_digits(args.digits)
    elif cmd == "infinite":
        c = make_context(args.mod_base, args.digits)
        d = digits(unimaginable.tetration_limit(c, args.base))
    else:
        if cmd == "tower":
            expr = unimaginable.TowerSpec(args.base, args.arrows, args.height)
        else:
            expr = unimaginable.parse_arrows(args.expr)
        d = unimaginable.knuth_last_digits(expr, args.digits, args.mod_base)
    return {"digits": d.render(prefix=True)}


_COMMANDS = {
    "ctx": _cmd_ctx,
    "arith": _cmd_arith,
    "sqrt": _cmd_sqrt,
    "exp": _cmd_exp,
    "log": _cmd_log,
    "cf": _cmd_cf,
    "encrypt": lambda a: _cipher(a, True),
    "decrypt": lambda a: _cipher(a, False),
    "encode37": _cmd_encode37,
    "decode37": _cmd_decode37,
    "prng": _cmd_prng,
    "idempotents": _cmd_idempotents,
    "lastdigits": _cmd_lastdigits,
}

# single-value results print bare; everything else prints key: value lines
_PRIMARY_KEYS = ("result", "value", "digits")


def _emit_text(out: dict, stream) -> None:
    for key in _PRIMARY_KEYS:
        if key in out and len(out) == 1:
            print(out[key], file=stream)
            return
    if "result" in out:
        print(out["result"], file=stream)
        for key, val in out.items():
            if key != "result":
                print(f"{key}: {val}", file=stream)
        return
    for key, val in out.items():
        if isinstance(val, list) and len(out) == 1:
            for item in val:
                print(item, file=stream)
        elif isinstance(val, list):
            print(f"{key}:", file=stream)
            for item in val:
                if isinstance(item, dict):
                    print("  " + " ".join(f"{k}={v}" for k, v in item.items()), file=stream)
                else:
                    print(f"  {item}", file=stream)
        elif isinstance(val, dict):
            print(f"{key}: " + ", ".join(f"{k}={v}" for k, v in val.items()), file=stream)
        else:
            print(f"{key}: {val}", file=stream)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv
    argv = [a for a in argv if a != "--json"]
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        out = _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        parser.print_usage(stderr)
        return EX_USAGE
    except NadicError as exc:
        print(f"error: {exc.name}: {exc}", file=stderr)
        return 2
    if as_json:
        print(json.dumps(out, ensure_ascii=False), file=stdout)
    else:
        _emit_text(out, stdout)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
