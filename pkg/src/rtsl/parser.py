"""Concrete syntax: tokenizer and recursive-descent parsers.

Two token modes share one machinery:

* program mode - the guarded-command language (`tick`, `:=`, `[e] := e`,
  probabilistic braces, `while`, ...).  `-` is the natural, truncated
  minus of the expression language.
* runtime mode - runtime expressions.  Here bare `-` is *signed*
  subtraction at the runtime level, `-.` is truncated monus, `o+`/`o-`
  are the separating connectives (they must be surrounded by spaces so
  that a variable named `o` stays usable), `/\\` is minimum, `<f>`
  evaluates f under an empty-heap gate, `[phi]` is an Iverson factor and
  `gate(phi)` the 0/inf gatekeeper.  Inside delimited spots (predicate
  arguments, points-to components, gate conditions, separating-sum
  bounds) full natural arithmetic including truncated `-` applies.

Numbers followed by `/` in runtime mode form exact rational quotients;
`inf` is the infinity literal unless followed by `x :`, which opens the
minimizing quantifier (`sup x :` maximizes).  Line comments start `//`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Optional, Tuple

from . import rsl, syntax
from .errors import ParseError
from .extreal import INF

_TOKEN_SPECS_COMMON = [
    ("num", r"\d+\.\d+|\d+"),
    ("op", r":=|:~|\|->|<=|>=|!=|&&|\|\||\.\.|-\.|/\\|[-+*/;,:(){}\[\]<>=!]"),
    ("ident", r"[A-Za-z_][A-Za-z0-9_']*"),
]

_SEP_OPS = re.compile(r"(o\+|o-)(?=[\s(<\[])")
_WS = re.compile(r"(?:\s|//[^\n]*)+")


class Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"{self.text!r}@{self.line}:{self.col}"


def tokenize(text: str, runtime_mode: bool) -> List[Token]:
    toks: List[Token] = []
    pos = 0
    line = 1
    col = 1

    def advance(n):
        nonlocal pos, line, col
        chunk = text[pos:pos + n]
        nl = chunk.count("\n")
        if nl:
            line_ = line + nl
            col_ = n - chunk.rfind("\n")
            pos_ = pos + n
            return pos_, line_, col_
        return pos + n, line, col + n

    while pos < len(text):
        m = _WS.match(text, pos)
        if m:
            pos, line, col = advance(m.end() - pos)
            continue
        if pos >= len(text):
            break
        if runtime_mode:
            m = _SEP_OPS.match(text, pos)
            if m:
                toks.append(Token("op", m.group(1), line, col))
                pos, line, col = advance(m.end() - pos)
                continue
        for kind, pat in _TOKEN_SPECS_COMMON:
            m = re.compile(pat).match(text, pos)
            if m:
                toks.append(Token(kind, m.group(), line, col))
                pos, line, col = advance(m.end() - pos)
                break
        else:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


class _P:
    """Token cursor with backtracking."""

    def __init__(self, toks: List[Token]):
        self.toks = toks
        self.i = 0

    def peek(self, ahead=0) -> Token:
        j = min(self.i + ahead, len(self.toks) - 1)
        return self.toks[j]

    def at(self, text: str, ahead=0) -> bool:
        return self.peek(ahead).text == text and self.peek(ahead).kind != "num"

    def at_kind(self, kind: str) -> bool:
        return self.peek().kind == kind

    def take(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.take()
            return True
        return False

    def expect(self, text: str) -> Token:
        t = self.peek()
        if not self.at(text):
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return self.take()

    def err(self, msg: str):
        t = self.peek()
        raise ParseError(f"{msg} (found {t.text!r})", t.line, t.col)

    def save(self) -> int:
        return self.i

    def restore(self, mark: int):
        self.i = mark


_PROGRAM_KEYWORDS = {"tick", "alloc", "free", "unif", "if", "else", "while",
                     "skip", "true", "false", "and", "or", "not", "ispow2",
                     "nextpow2"}
_RUNTIME_KEYWORDS = {"inf", "sup", "gate", "emp", "size", "bigoplus", "true",
                     "false", "ispow2", "nextpow2", "def"}


# ---------------------------------------------------------------------------
# Shared arithmetic / boolean sub-parsers (full natural arithmetic)

def _arith(p: _P, allow_div: bool = True) -> syntax.ArithExpr:
    e = _arith_term(p, allow_div)
    while True:
        if p.accept("+"):
            e = syntax.Add(e, _arith_term(p, allow_div))
        elif p.accept("-"):
            e = syntax.Monus(e, _arith_term(p, allow_div))
        else:
            return e


def _arith_term(p: _P, allow_div: bool = True) -> syntax.ArithExpr:
    e = _arith_atom(p)
    while True:
        if p.accept("*"):
            e = syntax.Mul(e, _arith_atom(p))
        elif allow_div and p.accept("/"):
            e = syntax.Div(e, _arith_atom(p))
        else:
            return e


def _arith_atom(p: _P) -> syntax.ArithExpr:
    t = p.peek()
    if t.kind == "num":
        if "." in t.text:
            p.err("decimal literals are only allowed as probabilities")
        p.take()
        return syntax.Num(int(t.text))
    if t.text == "nextpow2":
        p.take()
        p.expect("(")
        e = _arith(p)
        p.expect(")")
        return syntax.NextPow2(e)
    if t.kind == "ident":
        p.take()
        return syntax.Var(t.text)
    if p.accept("("):
        e = _arith(p)
        p.expect(")")
        return e
    p.err("expected an arithmetic expression")


def _bool(p: _P) -> syntax.BoolExpr:
    e = _bool_conj(p)
    while p.accept("||") or p.accept("or"):
        e = syntax.BOr(e, _bool_conj(p))
    return e


def _bool_conj(p: _P) -> syntax.BoolExpr:
    e = _bool_neg(p)
    while p.accept("&&") or p.accept("and"):
        e = syntax.BAnd(e, _bool_neg(p))
    return e


def _bool_neg(p: _P) -> syntax.BoolExpr:
    if p.accept("!") or p.accept("not"):
        return syntax.BNot(_bool_neg(p))
    return _bool_atom(p)


def _bool_atom(p: _P) -> syntax.BoolExpr:
    if p.accept("true"):
        return syntax.BLit(True)
    if p.accept("false"):
        return syntax.BLit(False)
    if p.at("ispow2"):
        p.take()
        p.expect("(")
        e = _arith(p)
        p.expect(")")
        return syntax.IsPow2(e)
    if p.at("("):
        # Either a parenthesized boolean or the left side of a comparison.
        mark = p.save()
        try:
            p.expect("(")
            inner = _bool(p)
            p.expect(")")
            if p.peek().text in ("=", "!=", "<", "<=", ">", ">="):
                raise ParseError("comparison", 0, 0)  # re-parse as arithmetic
            return inner
        except ParseError:
            p.restore(mark)
    a = _arith(p)
    t = p.peek()
    if t.text in ("=", "!=", "<", "<=", ">", ">="):
        p.take()
        b = _arith(p)
        return syntax.Cmp(t.text, a, b)
    p.err("expected a comparison operator")


def _prob(p: _P) -> syntax.ProbExpr:
    t = p.peek()
    if t.kind == "num" and "." in t.text:
        p.take()
        return syntax.ProbExpr.literal(Fraction(t.text))
    num = _arith(p, allow_div=False)
    if p.accept("/"):
        den = _arith(p, allow_div=False)
        return syntax.ProbExpr(num, den)
    return syntax.ProbExpr(num, syntax.Num(1))


# ---------------------------------------------------------------------------
# Program parser

def parse_program(text: str) -> syntax.Stmt:
    p = _P(tokenize(text, runtime_mode=False))
    stmt = _program(p)
    if not p.at_kind("eof"):
        p.err("trailing input after program")
    return stmt


def _program(p: _P) -> syntax.Stmt:
    stmts = [_stmt(p)]
    while p.accept(";"):
        if p.at_kind("eof") or p.at("}"):
            break  # tolerate a trailing semicolon
        stmts.append(_stmt(p))
    return syntax.seq_all(stmts)


def _stmt(p: _P) -> syntax.Stmt:
    t = p.peek()
    if p.accept("tick"):
        p.expect("(")
        e = _arith(p)
        p.expect(")")
        return syntax.Tick(e)
    if p.accept("skip"):
        return syntax.SKIP
    if p.accept("free"):
        p.expect("(")
        e = _arith(p)
        p.expect(")")
        return syntax.Free(e)
    if p.accept("if"):
        p.expect("(")
        guard = _bool(p)
        p.expect(")")
        p.expect("{")
        then = _program(p)
        p.expect("}")
        orelse: syntax.Stmt = syntax.SKIP
        if p.accept("else"):
            p.expect("{")
            orelse = _program(p)
            p.expect("}")
        return syntax.Ite(guard, then, orelse)
    if p.accept("while"):
        p.expect("(")
        guard = _bool(p)
        p.expect(")")
        p.expect("{")
        body = _program(p)
        p.expect("}")
        return syntax.While(guard, body)
    if p.accept("{"):
        left = _program(p)
        p.expect("}")
        p.expect("[")
        prob = _prob(p)
        p.expect("]")
        p.expect("{")
        right = _program(p)
        p.expect("}")
        return syntax.PChoice(left, prob, right)
    if p.accept("["):
        e = _arith(p)
        p.expect("]")
        p.expect(":=")
        e2 = _arith(p)
        return syntax.Mutate(e, e2)
    if t.kind == "ident" and t.text not in _PROGRAM_KEYWORDS:
        x = p.take().text
        if p.accept(":~"):
            p.expect("unif")
            p.expect("(")
            lo = _arith(p)
            p.expect(",")
            hi = _arith(p)
            p.expect(")")
            return syntax.UnifAssign(x, lo, hi)
        p.expect(":=")
        if p.accept("alloc"):
            p.expect("(")
            e = _arith(p)
            p.expect(")")
            return syntax.Alloc(x, e)
        if p.accept("["):
            e = _arith(p)
            p.expect("]")
            return syntax.Lookup(x, e)
        return syntax.Assign(x, _arith(p))
    p.err("expected a statement")


# ---------------------------------------------------------------------------
# Runtime-expression parser

def parse_runtime(text: str) -> rsl.RuntimeExpr:
    p = _P(tokenize(text, runtime_mode=True))
    f = _runtime(p)
    if not p.at_kind("eof"):
        p.err("trailing input after runtime expression")
    return f


def _runtime(p: _P) -> rsl.RuntimeExpr:
    # Quantifiers and separating sums are prefix and bind the entire rest.
    if p.at("inf") and p.peek(1).kind == "ident" and p.at(":", 2):
        p.take()
        var = p.take().text
        p.expect(":")
        return rsl.InfQ(var, _runtime(p))
    if p.at("sup") and p.peek(1).kind == "ident" and p.at(":", 2):
        p.take()
        var = p.take().text
        p.expect(":")
        return rsl.SupQ(var, _runtime(p))
    if p.accept("bigoplus"):
        var = p.take().text
        p.expect("=")
        lo = _arith(p)
        p.expect("..")
        hi = _arith(p)
        p.expect(":")
        return rsl.SepSum(var, lo, hi, _runtime(p))
    return _rt_signed(p)


def _rt_signed(p: _P) -> rsl.RuntimeExpr:
    e = _rt_sum(p)
    while p.accept("-"):
        e = rsl.SubSigned(e, _rt_sum(p))
    return e


def _rt_sum(p: _P) -> rsl.RuntimeExpr:
    e = _rt_min(p)
    while True:
        if p.accept("+"):
            e = rsl.RAdd(e, _rt_min(p))
        elif p.accept("-."):
            e = rsl.RMonus(e, _rt_min(p))
        else:
            return e


def _rt_min(p: _P) -> rsl.RuntimeExpr:
    e = _rt_sep(p)
    while p.accept("/\\"):
        e = rsl.RMin(e, _rt_sep(p))
    return e


def _rt_sep(p: _P) -> rsl.RuntimeExpr:
    e = _rt_mul(p)
    while True:
        if p.accept("o+"):
            e = rsl.SepAdd(e, _rt_mul(p))
        elif p.accept("o-"):
            e = rsl.SepMonus(e, _rt_mul(p))
        else:
            return e


def _rt_mul(p: _P) -> rsl.RuntimeExpr:
    e = _rt_primary(p)
    while p.accept("*"):
        e = rsl.RMul(e, _rt_primary(p))
    return e


def _rt_primary(p: _P) -> rsl.RuntimeExpr:
    t = p.peek()
    # A points-to atom whose address is a full arithmetic expression.
    mark = p.save()
    try:
        addr = _arith(p)
        if p.accept("|->"):
            return _points_to(p, addr)
        p.restore(mark)
    except ParseError:
        p.restore(mark)

    if t.kind == "num":
        p.take()
        if "." in t.text:
            q = Fraction(t.text)
            return rsl.Const(q)
        if p.accept("/"):
            den = _arith_atom(p)
            return rsl.Quot(syntax.Num(int(t.text)), den)
        return rsl.Const(Fraction(int(t.text)))
    if p.accept("inf"):
        return rsl.Const(INF)
    if p.accept("emp"):
        return rsl.Emp()
    if p.accept("gate"):
        p.expect("(")
        phi = _bool(p)
        p.expect(")")
        return rsl.Gate(phi)
    if p.accept("<"):
        f = _runtime(p)
        p.expect(">")
        return rsl.EmpRun(f)
    if p.accept("["):
        phi = _bool(p)
        p.expect("]")
        return rsl.Iverson(phi)
    if p.accept("("):
        f = _runtime(p)
        p.expect(")")
        return f
    if t.text == "nextpow2":
        return rsl.RArith(_arith(p))
    if t.kind == "ident" and t.text == "size" and not p.at("(", 1):
        p.take()
        return rsl.HeapSize()
    if t.kind == "ident" and (t.text not in _RUNTIME_KEYWORDS or t.text == "size"):
        p.take()
        if p.accept("("):
            args = [_arith(p)]
            while p.accept(","):
                args.append(_arith(p))
            p.expect(")")
            return rsl.Pred(t.text, tuple(args))
        if p.accept("/"):
            den = _arith_atom(p)
            return rsl.Quot(syntax.Var(t.text), den)
        return rsl.RArith(syntax.Var(t.text))
    p.err("expected a runtime expression")


def _points_to(p: _P, addr: syntax.ArithExpr) -> rsl.RuntimeExpr:
    comps: List[Optional[syntax.ArithExpr]] = []
    while True:
        if p.at("-") and (p.peek(1).text in (",", ")", "}", "]", ">") or
                          p.peek(1).kind in ("eof",) or _starts_operator(p.peek(1))):
            p.take()
            comps.append(None)
        else:
            comps.append(_arith(p))
        if not p.accept(","):
            break
    if all(c is None for c in comps):
        return rsl.PointsToAny(addr, len(comps))
    out: Optional[rsl.RuntimeExpr] = None
    for i, c in enumerate(comps):
        cell_addr = addr if i == 0 else syntax.Add(addr, syntax.Num(i))
        atom = rsl.PointsToAny(cell_addr, 1) if c is None else rsl.PointsTo(cell_addr, c)
        out = atom if out is None else rsl.SepAdd(out, atom)
    return out


def _starts_operator(t: Token) -> bool:
    return t.text in ("o+", "o-", "+", "-.", "-", "/\\", "*")


# ---------------------------------------------------------------------------
# Predicate definition files

def parse_pred_defs(text: str, env: Optional[rsl.PredEnv] = None) -> rsl.PredEnv:
    """Parse `def name(params) := body` declarations, one or more."""
    env = env if env is not None else rsl.PredEnv()
    p = _P(tokenize(text, runtime_mode=True))
    while not p.at_kind("eof"):
        p.expect("def")
        name = p.take().text
        p.expect("(")
        params = [p.take().text]
        while p.accept(","):
            params.append(p.take().text)
        p.expect(")")
        p.expect(":=")
        body = _runtime_until_def(p)
        env.define(name, params, body)
    return env


def _runtime_until_def(p: _P) -> rsl.RuntimeExpr:
    # Bodies run until the next `def` at bracket depth 0, or end of input.
    start = p.i
    depth = 0
    while True:
        t = p.peek()
        if t.kind == "eof":
            break
        if t.text in ("(", "[", "{"):
            depth += 1
        elif t.text in (")", "]", "}"):
            depth -= 1
        if t.text == "def" and depth == 0:
            break
        p.take()
    sub = _P(p.toks[start:p.i] + [p.toks[-1]])
    f = _runtime(sub)
    if not sub.at_kind("eof"):
        sub.err("trailing input in predicate body")
    return f


_BUILTIN_DEFS = """
// Singly-linked list segment from e to e2: 0 iff the heap is exactly
// such a segment.
def list(e, e2) :=
  <gate(e = e2)> /\\ (inf z : (e |-> z) o+ list(z, e2))

// Length of the list segment from e to e2 (inf if the heap is not one).
def size(e, e2) :=
  <gate(e = e2)> /\\ (<1> o+ (inf z : (e |-> z) o+ size(z, e2)))

// Doubly-linked list: cell x stores successor, x+1 predecessor, x+2
// content.  h = head, end = last element, pre = predecessor of h,
// n = length, succ = successor of the last element.
def dll(h, end, pre, n, succ) :=
  <gate(h = succ && pre = end && n = 0)>
  /\\ (<gate(n >= 1)> o+ (inf v : (h |-> v, pre, -) o+ dll(v, end, h, n - 1, succ)))
"""


def default_env() -> rsl.PredEnv:
    return parse_pred_defs(_BUILTIN_DEFS)
