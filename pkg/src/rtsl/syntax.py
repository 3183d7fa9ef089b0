"""Abstract syntax and static analyses for the guarded command language.

Arithmetic stays inside the naturals: subtraction truncates at zero and
division is integer division.  `skip` is represented as `tick(0)`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Tuple, Union

from .errors import DivByZero, ProbRangeError
from .state import Stack


def nextpow2(m: int) -> int:
    """Smallest power of two >= m, with nextpow2(0) = 1."""
    p = 1
    while p < m:
        p <<= 1
    return p


def ispow2(m: int) -> bool:
    return m >= 1 and (m & (m - 1)) == 0


# ---------------------------------------------------------------------------
# Arithmetic expressions (pure, natural-valued)

class ArithExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Num(ArithExpr):
    n: int


@dataclass(frozen=True)
class Var(ArithExpr):
    name: str


@dataclass(frozen=True)
class Add(ArithExpr):
    a: ArithExpr
    b: ArithExpr


@dataclass(frozen=True)
class Monus(ArithExpr):
    a: ArithExpr
    b: ArithExpr


@dataclass(frozen=True)
class Mul(ArithExpr):
    a: ArithExpr
    b: ArithExpr


@dataclass(frozen=True)
class Div(ArithExpr):
    a: ArithExpr
    b: ArithExpr


@dataclass(frozen=True)
class NextPow2(ArithExpr):
    a: ArithExpr


def eval_arith(e: ArithExpr, s: Stack) -> int:
    if isinstance(e, Num):
        return e.n
    if isinstance(e, Var):
        return s.read(e.name)
    if isinstance(e, Add):
        return eval_arith(e.a, s) + eval_arith(e.b, s)
    if isinstance(e, Monus):
        d = eval_arith(e.a, s) - eval_arith(e.b, s)
        return d if d > 0 else 0
    if isinstance(e, Mul):
        return eval_arith(e.a, s) * eval_arith(e.b, s)
    if isinstance(e, Div):
        den = eval_arith(e.b, s)
        if den == 0:
            raise DivByZero("division by zero")
        return eval_arith(e.a, s) // den
    if isinstance(e, NextPow2):
        return nextpow2(eval_arith(e.a, s))
    raise TypeError(f"not an arithmetic expression: {e!r}")


def arith_vars(e: ArithExpr) -> FrozenSet[str]:
    if isinstance(e, Num):
        return frozenset()
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, (Add, Monus, Mul, Div)):
        return arith_vars(e.a) | arith_vars(e.b)
    if isinstance(e, NextPow2):
        return arith_vars(e.a)
    raise TypeError(f"not an arithmetic expression: {e!r}")


def subst_arith(e: ArithExpr, x: str, r: ArithExpr) -> ArithExpr:
    if isinstance(e, Num):
        return e
    if isinstance(e, Var):
        return r if e.name == x else e
    if isinstance(e, Add):
        return Add(subst_arith(e.a, x, r), subst_arith(e.b, x, r))
    if isinstance(e, Monus):
        return Monus(subst_arith(e.a, x, r), subst_arith(e.b, x, r))
    if isinstance(e, Mul):
        return Mul(subst_arith(e.a, x, r), subst_arith(e.b, x, r))
    if isinstance(e, Div):
        return Div(subst_arith(e.a, x, r), subst_arith(e.b, x, r))
    if isinstance(e, NextPow2):
        return NextPow2(subst_arith(e.a, x, r))
    raise TypeError(f"not an arithmetic expression: {e!r}")


# ---------------------------------------------------------------------------
# Boolean expressions (pure)

class BoolExpr:
    __slots__ = ()


@dataclass(frozen=True)
class BLit(BoolExpr):
    value: bool


@dataclass(frozen=True)
class Cmp(BoolExpr):
    op: str  # one of = != < <= > >=
    a: ArithExpr
    b: ArithExpr


@dataclass(frozen=True)
class BAnd(BoolExpr):
    a: BoolExpr
    b: BoolExpr


@dataclass(frozen=True)
class BOr(BoolExpr):
    a: BoolExpr
    b: BoolExpr


@dataclass(frozen=True)
class BNot(BoolExpr):
    a: BoolExpr


@dataclass(frozen=True)
class IsPow2(BoolExpr):
    a: ArithExpr


_CMP = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def eval_bool(phi: BoolExpr, s: Stack) -> bool:
    if isinstance(phi, BLit):
        return phi.value
    if isinstance(phi, Cmp):
        return _CMP[phi.op](eval_arith(phi.a, s), eval_arith(phi.b, s))
    if isinstance(phi, BAnd):
        return eval_bool(phi.a, s) and eval_bool(phi.b, s)
    if isinstance(phi, BOr):
        return eval_bool(phi.a, s) or eval_bool(phi.b, s)
    if isinstance(phi, BNot):
        return not eval_bool(phi.a, s)
    if isinstance(phi, IsPow2):
        return ispow2(eval_arith(phi.a, s))
    raise TypeError(f"not a boolean expression: {phi!r}")


def bool_vars(phi: BoolExpr) -> FrozenSet[str]:
    if isinstance(phi, BLit):
        return frozenset()
    if isinstance(phi, Cmp):
        return arith_vars(phi.a) | arith_vars(phi.b)
    if isinstance(phi, (BAnd, BOr)):
        return bool_vars(phi.a) | bool_vars(phi.b)
    if isinstance(phi, BNot):
        return bool_vars(phi.a)
    if isinstance(phi, IsPow2):
        return arith_vars(phi.a)
    raise TypeError(f"not a boolean expression: {phi!r}")


def subst_bool(phi: BoolExpr, x: str, r: ArithExpr) -> BoolExpr:
    if isinstance(phi, BLit):
        return phi
    if isinstance(phi, Cmp):
        return Cmp(phi.op, subst_arith(phi.a, x, r), subst_arith(phi.b, x, r))
    if isinstance(phi, BAnd):
        return BAnd(subst_bool(phi.a, x, r), subst_bool(phi.b, x, r))
    if isinstance(phi, BOr):
        return BOr(subst_bool(phi.a, x, r), subst_bool(phi.b, x, r))
    if isinstance(phi, BNot):
        return BNot(subst_bool(phi.a, x, r))
    if isinstance(phi, IsPow2):
        return IsPow2(subst_arith(phi.a, x, r))
    raise TypeError(f"not a boolean expression: {phi!r}")


# ---------------------------------------------------------------------------
# Probability expressions

@dataclass(frozen=True)
class ProbExpr:
    """Quotient of two arithmetic expressions (den may be Num(1))."""

    num: ArithExpr
    den: ArithExpr

    @staticmethod
    def literal(q: Fraction) -> "ProbExpr":
        return ProbExpr(Num(q.numerator), Num(q.denominator))


def eval_prob(p: ProbExpr, s: Stack) -> Fraction:
    den = eval_arith(p.den, s)
    if den == 0:
        raise DivByZero("probability denominator is zero")
    q = Fraction(eval_arith(p.num, s), den)
    if q < 0 or q > 1:
        raise ProbRangeError(f"probability {q} outside [0,1]")
    return q


def prob_vars(p: ProbExpr) -> FrozenSet[str]:
    return arith_vars(p.num) | arith_vars(p.den)


# ---------------------------------------------------------------------------
# Statements

class Stmt:
    __slots__ = ()


@dataclass(frozen=True)
class Tick(Stmt):
    e: ArithExpr


@dataclass(frozen=True)
class Assign(Stmt):
    x: str
    e: ArithExpr


@dataclass(frozen=True)
class Alloc(Stmt):
    x: str
    e: ArithExpr


@dataclass(frozen=True)
class Mutate(Stmt):
    e: ArithExpr
    e2: ArithExpr


@dataclass(frozen=True)
class Lookup(Stmt):
    x: str
    e: ArithExpr


@dataclass(frozen=True)
class Free(Stmt):
    e: ArithExpr


@dataclass(frozen=True)
class UnifAssign(Stmt):
    x: str
    lo: ArithExpr
    hi: ArithExpr


@dataclass(frozen=True)
class Seq(Stmt):
    first: Stmt
    second: Stmt


@dataclass(frozen=True)
class Ite(Stmt):
    guard: BoolExpr
    then: Stmt
    orelse: Stmt


@dataclass(frozen=True)
class PChoice(Stmt):
    left: Stmt
    prob: ProbExpr
    right: Stmt


@dataclass(frozen=True)
class While(Stmt):
    guard: BoolExpr
    body: Stmt


SKIP = Tick(Num(0))


def seq_all(stmts) -> Stmt:
    stmts = list(stmts)
    if not stmts:
        return SKIP
    out = stmts[-1]
    for st in reversed(stmts[:-1]):
        out = Seq(st, out)
    return out


def mod_vars(c: Stmt) -> FrozenSet[str]:
    """Variables written on the left of any assignment form in c."""
    if isinstance(c, (Tick, Mutate, Free)):
        return frozenset()
    if isinstance(c, (Assign, Alloc, Lookup)):
        return frozenset((c.x,))
    if isinstance(c, UnifAssign):
        return frozenset((c.x,))
    if isinstance(c, Seq):
        return mod_vars(c.first) | mod_vars(c.second)
    if isinstance(c, Ite):
        return mod_vars(c.then) | mod_vars(c.orelse)
    if isinstance(c, PChoice):
        return mod_vars(c.left) | mod_vars(c.right)
    if isinstance(c, While):
        return mod_vars(c.body)
    raise TypeError(f"not a statement: {c!r}")


def stmt_vars(c: Stmt) -> FrozenSet[str]:
    """Every variable mentioned anywhere in c."""
    if isinstance(c, Tick):
        return arith_vars(c.e)
    if isinstance(c, (Assign, Alloc)):
        return frozenset((c.x,)) | arith_vars(c.e)
    if isinstance(c, Lookup):
        return frozenset((c.x,)) | arith_vars(c.e)
    if isinstance(c, Mutate):
        return arith_vars(c.e) | arith_vars(c.e2)
    if isinstance(c, Free):
        return arith_vars(c.e)
    if isinstance(c, UnifAssign):
        return frozenset((c.x,)) | arith_vars(c.lo) | arith_vars(c.hi)
    if isinstance(c, Seq):
        return stmt_vars(c.first) | stmt_vars(c.second)
    if isinstance(c, Ite):
        return bool_vars(c.guard) | stmt_vars(c.then) | stmt_vars(c.orelse)
    if isinstance(c, PChoice):
        return stmt_vars(c.left) | prob_vars(c.prob) | stmt_vars(c.right)
    if isinstance(c, While):
        return bool_vars(c.guard) | stmt_vars(c.body)
    raise TypeError(f"not a statement: {c!r}")


# ---------------------------------------------------------------------------
# Pretty printers (inverse of the parser; used for round-trip tests)

def show_arith(e: ArithExpr, prec: int = 0) -> str:
    if isinstance(e, Num):
        return str(e.n)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Add):
        s = f"{show_arith(e.a, 1)} + {show_arith(e.b, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(e, Monus):
        s = f"{show_arith(e.a, 1)} - {show_arith(e.b, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(e, Mul):
        s = f"{show_arith(e.a, 2)} * {show_arith(e.b, 3)}"
        return f"({s})" if prec > 2 else s
    if isinstance(e, Div):
        s = f"{show_arith(e.a, 2)} / {show_arith(e.b, 3)}"
        return f"({s})" if prec > 2 else s
    if isinstance(e, NextPow2):
        return f"nextpow2({show_arith(e.a)})"
    raise TypeError(f"not an arithmetic expression: {e!r}")


def show_bool(phi: BoolExpr, prec: int = 0) -> str:
    if isinstance(phi, BLit):
        return "true" if phi.value else "false"
    if isinstance(phi, Cmp):
        return f"{show_arith(phi.a)} {phi.op} {show_arith(phi.b)}"
    if isinstance(phi, BOr):
        s = f"{show_bool(phi.a, 1)} || {show_bool(phi.b, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(phi, BAnd):
        s = f"{show_bool(phi.a, 2)} && {show_bool(phi.b, 3)}"
        return f"({s})" if prec > 2 else s
    if isinstance(phi, BNot):
        return f"!({show_bool(phi.a)})"
    if isinstance(phi, IsPow2):
        return f"ispow2({show_arith(phi.a)})"
    raise TypeError(f"not a boolean expression: {phi!r}")


def show_prob(p: ProbExpr) -> str:
    return f"{show_arith(p.num, 3)} / {show_arith(p.den, 3)}"


def show_stmt(c: Stmt) -> str:
    if isinstance(c, Tick):
        return f"tick({show_arith(c.e)})"
    if isinstance(c, Assign):
        return f"{c.x} := {show_arith(c.e)}"
    if isinstance(c, Alloc):
        return f"{c.x} := alloc({show_arith(c.e)})"
    if isinstance(c, Mutate):
        return f"[{show_arith(c.e)}] := {show_arith(c.e2)}"
    if isinstance(c, Lookup):
        return f"{c.x} := [{show_arith(c.e)}]"
    if isinstance(c, Free):
        return f"free({show_arith(c.e)})"
    if isinstance(c, UnifAssign):
        return f"{c.x} :~ unif({show_arith(c.lo)}, {show_arith(c.hi)})"
    if isinstance(c, Seq):
        return f"{show_stmt(c.first)} ; {show_stmt(c.second)}"
    if isinstance(c, Ite):
        return (f"if ({show_bool(c.guard)}) {{ {show_stmt(c.then)} }}"
                f" else {{ {show_stmt(c.orelse)} }}")
    if isinstance(c, PChoice):
        return (f"{{ {show_stmt(c.left)} }} [{show_prob(c.prob)}]"
                f" {{ {show_stmt(c.right)} }}")
    if isinstance(c, While):
        return f"while ({show_bool(c.guard)}) {{ {show_stmt(c.body)} }}"
    raise TypeError(f"not a statement: {c!r}")
