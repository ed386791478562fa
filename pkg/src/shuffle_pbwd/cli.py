"""Command-line front end.

Subcommands::

    eval        evaluate a free-algebra expression (optionally its shuffle image)
    psi         shuffle image of an expression
    specialize  phi_d of the shuffle image of an expression
    roots       positive roots in convex order
    kp          Kostant partitions of a grading
    verify      run a verification suite
    rtt         R-matrix checks (Yang-Baxter equation)

Expressions use ``e[i,r]`` (or ``x[i,r]`` in the rational flavor), ``comm(a,b;u)``
for ``ab - u ba``, ``*``, ``+``, ``-``, parentheses, rational literals such as
``3/2``, and the parameters ``v`` and ``hbar`` with integer powers ``v^-3``.

Exit status: 0 on success or a passing suite, 1 on a failing suite, 2 on a
usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import List, Optional, Sequence, Tuple, Union

from .mpoly import word_str
from .ring import ULaurent, VRatFunc, as_rational
from .rootsys import KostantPartition, RootSystem, c_beta, kappa, kostant_partitions
from .rootvec import FreeElement, vcomm
from .rtt import RMatrixContext, check_ybe
from .shuffle import ShuffleContext, psi
from .specmaps import phi
from .verify import SUITES, SuiteConfig, run_suite

__all__ = ["main", "run", "parse_expression", "ExpressionError"]


# expressions -------------------------------------------------------------------------

class ExpressionError(ValueError):
    def __init__(self, text: str, pos: int, expected: Sequence[str]):
        self.text, self.pos, self.expected = text, pos, list(expected)
        found = text[pos:pos + 10] or "end of input"
        super().__init__(f"parse error at position {pos} (near {found!r}): expected {' or '.join(self.expected)}")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(.))")

Value = Union[VRatFunc, FreeElement]


class _Parser:
    def __init__(self, ctx: ShuffleContext, text: str):
        self.ctx, self.text = ctx, text
        self.tokens: List[Tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m.group(0).strip() == "":
                break
            start = m.start(m.lastindex)
            if m.group(1):
                self.tokens.append(("int", m.group(1), start))
            elif m.group(2):
                self.tokens.append(("name", m.group(2), start))
            else:
                self.tokens.append(("sym", m.group(3), start))
            pos = m.end()
        self.i = 0

    # token helpers
    def peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        t = self.peek()
        return t[2] if t else len(self.text)

    def fail(self, *expected: str):
        raise ExpressionError(self.text, self.pos(), expected)

    def accept(self, sym: str) -> bool:
        t = self.peek()
        if t and t[0] == "sym" and t[1] == sym:
            self.i += 1
            return True
        return False

    def expect(self, sym: str) -> None:
        if not self.accept(sym):
            self.fail(repr(sym))

    def integer(self) -> int:
        neg = self.accept("-")
        paren = False
        if not neg and self.accept("("):
            paren = True
            neg = self.accept("-")
        t = self.peek()
        if not t or t[0] != "int":
            self.fail("an integer")
        self.i += 1
        val = -int(t[1]) if neg else int(t[1])
        if paren:
            self.expect(")")
        return val

    # grammar
    def parse(self) -> Value:
        val = self.expr()
        if self.peek() is not None:
            self.fail("'+'", "'-'", "'*'", "end of input")
        return val

    def expr(self) -> Value:
        val = self.term()
        while True:
            if self.accept("+"):
                val = _add(self.ctx, val, self.term())
            elif self.accept("-"):
                val = _add(self.ctx, val, _neg(self.term()))
            else:
                return val

    def term(self) -> Value:
        val = self.unary()
        while self.accept("*"):
            val = _mul(self.ctx, val, self.unary())
        return val

    def unary(self) -> Value:
        if self.accept("-"):
            return _neg(self.unary())
        return self.power()

    def power(self) -> Value:
        start = self.pos()
        val = self.atom()
        if self.accept("^"):
            k = self.integer()
            if isinstance(val, FreeElement):
                if k < 0:
                    raise ExpressionError(self.text, start, ["a nonnegative power of a free element"])
                out = FreeElement.one(self.ctx)
                for _ in range(k):
                    out = out * val
                return out
            if k < 0:
                if val.is_zero():
                    raise ExpressionError(self.text, start, ["a nonzero base for a negative power"])
                val, k = val.inverse(), -k
            out = VRatFunc(1)
            for _ in range(k):
                out = out * val
            return out
        return val

    def atom(self) -> Value:
        t = self.peek()
        if t is None:
            self.fail("a number", "'v'", "'hbar'", "a letter", "'comm('", "'('")
        kind, text, _ = t
        if kind == "int":
            self.i += 1
            num = int(text)
            if self.accept("/"):
                u = self.peek()
                if not u or u[0] != "int":
                    self.fail("an integer denominator")
                self.i += 1
                if int(u[1]) == 0:
                    raise ExpressionError(self.text, u[2], ["a nonzero denominator"])
                return VRatFunc(as_rational(f"{num}/{u[1]}"))
            return VRatFunc(num)
        if kind == "name":
            if text == "v":
                if self.ctx.rational:
                    self.fail("'hbar' (the rational flavor has no v)")
                self.i += 1
                return VRatFunc(ULaurent.monomial(1))
            if text == "hbar":
                if not self.ctx.rational:
                    self.fail("'v' (the trigonometric flavor has no hbar)")
                self.i += 1
                return VRatFunc(ULaurent.monomial(1))
            if text in ("e", "x"):
                want = "x" if self.ctx.rational else "e"
                if text != want:
                    self.fail(f"'{want}[' letters in the {self.ctx.flavor} flavor")
                self.i += 1
                self.expect("[")
                at = self.pos()
                i = self.integer()
                self.expect(",")
                r = self.integer()
                self.expect("]")
                if i not in self.ctx.rs.I:
                    raise ExpressionError(self.text, at, [f"a color in 1..{self.ctx.rs.n}"])
                if self.ctx.rational and r < 0:
                    raise ExpressionError(self.text, at, ["a nonnegative exponent for x letters"])
                return FreeElement.letter(self.ctx, i, r)
            if text == "comm":
                self.i += 1
                self.expect("(")
                a = self.expr()
                self.expect(",")
                b = self.expr()
                u: Value = VRatFunc(1)
                if self.accept(";"):
                    u = self.expr()
                    if isinstance(u, FreeElement):
                        self.fail("a scalar commutator parameter")
                self.expect(")")
                return vcomm(_lift(self.ctx, a), _lift(self.ctx, b), u)
            self.fail("'v'", "'hbar'", "'e'", "'x'", "'comm'")
        if self.accept("("):
            val = self.expr()
            self.expect(")")
            return val
        self.fail("a number", "'v'", "'hbar'", "a letter", "'comm('", "'('")


def _lift(ctx: ShuffleContext, a: Value) -> FreeElement:
    return a if isinstance(a, FreeElement) else FreeElement.one(ctx).scale(a)


def _neg(a: Value) -> Value:
    return -a


def _add(ctx, a: Value, b: Value) -> Value:
    if isinstance(a, VRatFunc) and isinstance(b, VRatFunc):
        return a + b
    return _lift(ctx, a) + _lift(ctx, b)


def _mul(ctx, a: Value, b: Value) -> Value:
    if isinstance(a, VRatFunc) and isinstance(b, VRatFunc):
        return a * b
    if isinstance(a, VRatFunc):
        return b.scale(a)
    if isinstance(b, VRatFunc):
        return a.scale(b)
    return a * b


def parse_expression(ctx: ShuffleContext, text: str) -> FreeElement:
    """Parse an expression into a free-algebra element (scalars become multiples of 1)."""
    return _lift(ctx, _Parser(ctx, text).parse())


# argument handling -----------------------------------------------------------------------

class _UsageError(Exception):
    pass


def _root_system(args) -> RootSystem:
    t = args.type.upper()
    if t in ("G", "G2"):
        return RootSystem("G")
    if args.n is None:
        raise _UsageError(f"--n is required for type {t}")
    return RootSystem(t, args.n)


def _window(text: str) -> Tuple[int, int]:
    try:
        lo, hi = (int(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("window must look like lo:hi")
    if hi < lo:
        raise argparse.ArgumentTypeError("window needs hi >= lo")
    return lo, hi


def _grading(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.replace("(", "").replace(")", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("grading must look like 1,2")


def _partition(rs: RootSystem, text: str) -> KostantPartition:
    """Accept JSON ``{"[1,2]": 1}`` or the short form ``[1,2]:1,[2]:1``."""
    t = text.strip()
    if t.startswith("{"):
        return KostantPartition.parse(rs, t)
    data = {}
    for part in re.findall(r"(\[[\d,\s]+\])\s*:\s*(\d+)", t):
        data[part[0].replace(" ", "")] = int(part[1])
    if not data:
        raise _UsageError("partition must look like [1,2]:1,[2]:1")
    return KostantPartition.parse(rs, data)


def _add_system(p: argparse.ArgumentParser, flavor: bool = True) -> None:
    p.add_argument("--type", required=True, choices=["A", "B", "G2", "G"], help="root system type")
    p.add_argument("--n", type=int, default=None, help="rank (types A and B)")
    if flavor:
        p.add_argument("--flavor", choices=["trig", "rational"], default="trig")
    p.add_argument("--json", action="store_true", help="emit JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shuffle-pbwd", description="Exact shuffle algebra engine for types A, B and G2.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate an expression in the free algebra")
    _add_system(p)
    p.add_argument("--expr", required=True)
    p.add_argument("--psi", action="store_true", help="output the shuffle image instead")

    p = sub.add_parser("psi", help="shuffle image of an expression")
    _add_system(p)
    p.add_argument("--expr", required=True)

    p = sub.add_parser("specialize", help="specialization map of the shuffle image")
    _add_system(p)
    p.add_argument("--expr", required=True)
    p.add_argument("--d", required=True, help='Kostant partition, e.g. "[1,2]:1,[2]:1"')

    p = sub.add_parser("roots", help="positive roots in convex order")
    _add_system(p, flavor=False)

    p = sub.add_parser("kp", help="Kostant partitions of a grading")
    _add_system(p, flavor=False)
    p.add_argument("--k", required=True, type=_grading, help="grading, e.g. 1,2")

    p = sub.add_parser("verify", help="run a verification suite")
    _add_system(p)
    p.add_argument("--suite", required=True, choices=["all", *SUITES])
    p.add_argument("--window", type=_window, default=(0, 1))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--max-vars", type=int, default=6)
    p.add_argument("--grading", type=_grading, action="append", default=None,
                   help="grading for the vanishing/triangularity suites (repeatable)")
    p.add_argument("--timing", action="store_true", help="include elapsed times in JSON")

    p = sub.add_parser("rtt", help="R-matrix checks")
    p.add_argument("action", choices=["ybe"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perturb", action="store_true", help="add 1 to one entry of R (control run)")
    p.add_argument("--json", action="store_true")
    return parser


def _emit(out, data, as_json: bool, text: str) -> None:
    if as_json:
        out.write(json.dumps(data, indent=2) + "\n")
    else:
        out.write(text + "\n")


def _dispatch(args, out) -> int:
    cmd = args.command
    if cmd in ("eval", "psi", "specialize"):
        rs = _root_system(args)
        ctx = ShuffleContext(rs, args.flavor)
        E = parse_expression(ctx, args.expr)
        if cmd == "eval" and not args.psi:
            data = {"type": rs.name, "flavor": ctx.flavor, "free": E.to_json()}
            _emit(out, data, args.json, E.render())
            return 0
        gs = E.gradings()
        if len(gs) > 1:
            raise _UsageError("the expression is not homogeneous; its shuffle image needs a single grading")
        F = psi(ctx, E)
        if cmd == "specialize":
            res = phi(_partition(rs, args.d), F)
            _emit(out, res.to_json(), args.json, res.poly.render(ctx.symbol))
            return 0
        # eval --psi prints JSON by default: the shuffle element is the natural output
        _emit(out, F.to_json(), args.json or cmd == "eval", F.pretty())
        return 0
    if cmd == "roots":
        rs = _root_system(args)
        rows = []
        for b in rs.positive_roots():
            rows.append({"root": word_str(b.word), "nu": list(b.nu), "kappa": kappa(rs, b),
                         "c_beta": c_beta(rs, b).render()})
        text = "\n".join(f"{r['root']}  nu={tuple(r['nu'])}  kappa={r['kappa']}  c={r['c_beta']}" for r in rows)
        _emit(out, {"type": rs.name, "roots": rows}, args.json, text)
        return 0
    if cmd == "kp":
        rs = _root_system(args)
        if len(args.k) != rs.n:
            raise _UsageError(f"grading must have {rs.n} entries")
        kps = kostant_partitions(rs, args.k)
        data = {"type": rs.name, "grading": list(args.k), "partitions": [d.to_dict() for d in kps]}
        text = "\n".join(json.dumps(d.to_dict()) for d in kps)
        _emit(out, data, args.json, text)
        return 0
    if cmd == "verify":
        rs = _root_system(args)
        kind = "G" if rs.kind == "G" else rs.kind
        cfg = SuiteConfig(kind, rs.n, args.flavor, args.window, args.max_vars, args.seed,
                          args.samples, args.trials, args.grading)
        rep = run_suite(args.suite, cfg)
        _emit(out, rep.to_json(args.timing), args.json, rep.render())
        return 0 if rep.passed else 1
    if cmd == "rtt":
        ctx = RMatrixContext(args.n)
        rep = check_ybe(ctx, args.trials, args.seed, perturb=((1, 1), (1, 1)) if args.perturb else None)
        data = rep.to_json()
        text = (f"Yang-Baxter n={args.n}: {'PASS' if rep.passed else 'FAIL'} "
                f"({len(rep.trials)} trials, {rep.resamples} resamples, {rep.elapsed:.2f}s)")
        _emit(out, data, args.json, text)
        return 0 if rep.passed else 1
    raise _UsageError(f"unknown command {cmd}")


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    """Run the command line; returns the exit status instead of exiting."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args, out)
    except (_UsageError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 2


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
