"""Runtime expressions and their exact evaluation at concrete states.

A runtime expression denotes a function from program states to extended
rationals.  Evaluation is exact: Fractions everywhere, `INF` for infinity.

Separating addition enumerates heap partitions, with a fast path when one
operand pins a unique sub-heap (a points-to atom, an empty-heap bracket, a
finite separating sum of such).  Separating monus is evaluated only when
the left operand is in that "precise" fragment: the unique zero-cost heap
extension is constructed directly.  Quantifiers resolve either through an
explicit finite range or through the guided points-to pattern
``inf z : (e |-> z) o+ rest``, which reads z off the heap.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .errors import (DivByZero, ImpreciseMonus, LimitError, PotentialNotFinite,
                     SpecError, UnboundedQuantifier)
from .extreal import (INF, Ext, ZERO, ext_add, ext_max, ext_min, ext_monus,
                      ext_mul, ext_sub_signed, is_inf)
from .state import Heap, ProgState, Stack
from .syntax import (ArithExpr, BoolExpr, Num, arith_vars, bool_vars,
                     eval_arith, eval_bool, show_arith, show_bool, subst_arith,
                     subst_bool)

# ---------------------------------------------------------------------------
# Expression nodes


class RuntimeExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Const(RuntimeExpr):
    value: Ext  # nonnegative Fraction or INF


@dataclass(frozen=True)
class RArith(RuntimeExpr):
    """A pure natural-valued term read off the stack."""

    e: ArithExpr


@dataclass(frozen=True)
class Quot(RuntimeExpr):
    """Pure rational quotient of two natural-valued terms."""

    num: ArithExpr
    den: ArithExpr


@dataclass(frozen=True)
class Iverson(RuntimeExpr):
    phi: BoolExpr


@dataclass(frozen=True)
class Gate(RuntimeExpr):
    """0 where the (pure) predicate holds, infinity elsewhere."""

    phi: BoolExpr


@dataclass(frozen=True)
class Emp(RuntimeExpr):
    """Gatekeeper of the empty-heap predicate."""


@dataclass(frozen=True)
class PointsTo(RuntimeExpr):
    """0 iff the heap is exactly one cell e storing e2."""

    e: ArithExpr
    e2: ArithExpr


@dataclass(frozen=True)
class PointsToAny(RuntimeExpr):
    """0 iff the heap is exactly the k cells e..e+k-1, any contents."""

    e: ArithExpr
    k: int = 1


@dataclass(frozen=True)
class EmpRun(RuntimeExpr):
    """f plus the empty-heap gatekeeper: forces evaluation in h-empty."""

    f: RuntimeExpr


@dataclass(frozen=True)
class HeapSize(RuntimeExpr):
    """Number of allocated locations."""


@dataclass(frozen=True)
class RAdd(RuntimeExpr):
    f: RuntimeExpr
    g: RuntimeExpr


@dataclass(frozen=True)
class RMonus(RuntimeExpr):
    f: RuntimeExpr
    g: RuntimeExpr


@dataclass(frozen=True)
class RMin(RuntimeExpr):
    f: RuntimeExpr
    g: RuntimeExpr


@dataclass(frozen=True)
class RMul(RuntimeExpr):
    """Pointwise product with the 0 * inf = 0 convention.

    Covers both probability scaling and Iverson-guarded runtimes.
    """

    f: RuntimeExpr
    g: RuntimeExpr


@dataclass(frozen=True)
class SubSigned(RuntimeExpr):
    """True (signed) subtraction f - g; g must evaluate finite."""

    f: RuntimeExpr
    g: RuntimeExpr


@dataclass(frozen=True)
class SepAdd(RuntimeExpr):
    f: RuntimeExpr
    g: RuntimeExpr


@dataclass(frozen=True)
class SepMonus(RuntimeExpr):
    f: RuntimeExpr
    g: RuntimeExpr


@dataclass(frozen=True)
class InfQ(RuntimeExpr):
    var: str
    body: RuntimeExpr
    hint: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class SupQ(RuntimeExpr):
    var: str
    body: RuntimeExpr
    hint: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class SepSum(RuntimeExpr):
    var: str
    lo: ArithExpr
    hi: ArithExpr
    body: RuntimeExpr


@dataclass(frozen=True)
class Pred(RuntimeExpr):
    name: str
    args: Tuple[ArithExpr, ...]


def const(q) -> Const:
    return Const(q if q is INF else Fraction(q))


# ---------------------------------------------------------------------------
# Predicate environments

@dataclass(frozen=True)
class PredDef:
    name: str
    params: Tuple[str, ...]
    body: RuntimeExpr


class PredEnv:
    """Named recursive runtime definitions, greatest-fixed-point reading."""

    def __init__(self):
        self._defs: Dict[str, PredDef] = {}

    def define(self, name: str, params: Sequence[str], body: RuntimeExpr):
        d = PredDef(name, tuple(params), body)
        _check_guarded(d, self)
        self._defs[name] = d

    def lookup(self, name: str) -> PredDef:
        if name not in self._defs:
            raise SpecError(f"unknown predicate {name!r}")
        return self._defs[name]

    def __contains__(self, name: str) -> bool:
        return name in self._defs

    def names(self):
        return sorted(self._defs)


def _check_guarded(d: PredDef, env: "PredEnv"):
    """Every recursive reference must sit under a separating addition that
    also pins at least one heap cell, so each unfolding consumes heap."""

    def ok(expr: RuntimeExpr, guarded: bool) -> bool:
        if isinstance(expr, Pred):
            if expr.name == d.name or expr.name not in env:
                return guarded
            return True
        if isinstance(expr, SepAdd):
            g2 = guarded or _mentions_cell(expr.f) or _mentions_cell(expr.g)
            return ok(expr.f, g2) and ok(expr.g, g2)
        if isinstance(expr, (RAdd, RMonus, RMin, RMul, SubSigned, SepMonus)):
            return ok(expr.f, guarded) and ok(expr.g, guarded)
        if isinstance(expr, (InfQ, SupQ)):
            return ok(expr.body, guarded)
        if isinstance(expr, SepSum):
            return ok(expr.body, guarded)
        if isinstance(expr, EmpRun):
            return ok(expr.f, guarded)
        return True

    if not ok(d.body, False):
        raise SpecError(f"definition of {d.name!r} is not guarded by a points-to")


def _mentions_cell(expr: RuntimeExpr) -> bool:
    if isinstance(expr, (PointsTo, PointsToAny)):
        return True
    if isinstance(expr, (RAdd, RMonus, RMin, RMul, SubSigned, SepAdd, SepMonus)):
        return _mentions_cell(expr.f) or _mentions_cell(expr.g)
    if isinstance(expr, (InfQ, SupQ)):
        return _mentions_cell(expr.body)
    if isinstance(expr, SepSum):
        return _mentions_cell(expr.body)
    if isinstance(expr, EmpRun):
        return _mentions_cell(expr.f)
    return False


# ---------------------------------------------------------------------------
# Evaluation options and context

@dataclass
class EvalOptions:
    partition_limit: int = 20
    quantifier_range: Dict[str, Sequence[int]] = field(default_factory=dict)
    default_range: Optional[Sequence[int]] = None
    unfold_budget: Optional[int] = None


DEFAULT_OPTS = EvalOptions()


class _Ctx:
    __slots__ = ("env", "opts", "depth", "budget")

    def __init__(self, env: Optional[PredEnv], opts: EvalOptions, heap: Heap):
        self.env = env
        self.opts = opts
        self.depth = 0
        self.budget = opts.unfold_budget if opts.unfold_budget is not None \
            else heap.size() + 4


# ---------------------------------------------------------------------------
# Precision: pinning the unique finite-cost sub-heap

@dataclass
class Pin:
    exact: Dict[int, int]
    wild: Tuple[int, ...]
    value: Ext
    valid: bool = True

    def footprint(self):
        return set(self.exact) | set(self.wild)


_INVALID = Pin({}, (), INF, valid=False)


def is_precise(f: RuntimeExpr) -> bool:
    """Syntactic membership in the fragment that pins a unique heap."""
    if isinstance(f, (Emp, PointsTo, PointsToAny, EmpRun)):
        return True
    if isinstance(f, SepAdd):
        return is_precise(f.f) and is_precise(f.g)
    if isinstance(f, SepSum):
        return is_precise(f.body)
    return False


def _pin(f: RuntimeExpr, s: Stack, h_entry: Heap, ctx: _Ctx) -> Optional[Pin]:
    """Construct the pinned heap of f at stack s, or None if f is not
    in the pinnable fragment.  An invalid Pin means f is infinite on
    every heap (e.g. a null or self-overlapping footprint)."""
    if isinstance(f, Emp):
        return Pin({}, (), ZERO)
    if isinstance(f, PointsTo):
        loc = eval_arith(f.e, s)
        if loc <= 0:
            return _INVALID
        return Pin({loc: eval_arith(f.e2, s)}, (), ZERO)
    if isinstance(f, PointsToAny):
        loc = eval_arith(f.e, s)
        if loc <= 0:
            return _INVALID
        return Pin({}, tuple(range(loc, loc + f.k)), ZERO)
    if isinstance(f, EmpRun):
        return Pin({}, (), _ev(f.f, s, Heap.empty(), ctx))
    if isinstance(f, SepAdd):
        pa = _pin(f.f, s, h_entry, ctx)
        if pa is None:
            return None
        pb = _pin(f.g, s, h_entry, ctx)
        if pb is None:
            return None
        return _merge_pins(pa, pb)
    if isinstance(f, SepSum):
        lo = eval_arith(f.lo, s)
        hi = eval_arith(f.hi, s)
        acc = Pin({}, (), ZERO)
        for i in range(lo, hi + 1):
            p = _pin(f.body, s.bind(f.var, i), h_entry, ctx)
            if p is None:
                return None
            acc = _merge_pins(acc, p)
            if not acc.valid:
                return acc
        return acc
    if isinstance(f, RMul) and isinstance(f.f, Iverson):
        # [phi] * precise: pins only where the guard holds.
        if eval_bool(f.f.phi, s):
            return _pin(f.g, s, h_entry, ctx)
        return None
    return None


def _merge_pins(a: Pin, b: Pin) -> Pin:
    if not (a.valid and b.valid):
        return _INVALID
    if a.footprint() & b.footprint():
        return _INVALID  # same location claimed twice: infinite everywhere
    exact = dict(a.exact)
    exact.update(b.exact)
    return Pin(exact, a.wild + b.wild, ext_add(a.value, b.value))


def _pin_fits(p: Pin, h: Heap) -> bool:
    for loc, v in p.exact.items():
        if not h.contains(loc) or h.read(loc) != v:
            return False
    return all(h.contains(loc) for loc in p.wild)


# ---------------------------------------------------------------------------
# The evaluator

def eval_runtime(f: RuntimeExpr, st: ProgState, env: Optional[PredEnv] = None,
                 opts: EvalOptions = DEFAULT_OPTS) -> Ext:
    ctx = _Ctx(env, opts, st.heap)
    return _ev(f, st.stack, st.heap, ctx)


def _ev(f: RuntimeExpr, s: Stack, h: Heap, ctx: _Ctx) -> Ext:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, RArith):
        return Fraction(eval_arith(f.e, s))
    if isinstance(f, Quot):
        den = eval_arith(f.den, s)
        if den == 0:
            raise DivByZero("zero denominator in runtime quotient")
        return Fraction(eval_arith(f.num, s), den)
    if isinstance(f, Iverson):
        return Fraction(1) if eval_bool(f.phi, s) else ZERO
    if isinstance(f, Gate):
        return ZERO if eval_bool(f.phi, s) else INF
    if isinstance(f, Emp):
        return ZERO if h.size() == 0 else INF
    if isinstance(f, PointsTo):
        loc = eval_arith(f.e, s)
        if loc >= 1 and h.size() == 1 and h.contains(loc) \
                and h.read(loc) == eval_arith(f.e2, s):
            return ZERO
        return INF
    if isinstance(f, PointsToAny):
        loc = eval_arith(f.e, s)
        if loc >= 1 and h.size() == f.k \
                and all(h.contains(l) for l in range(loc, loc + f.k)):
            return ZERO
        return INF
    if isinstance(f, EmpRun):
        if h.size() != 0:
            return INF
        return _ev(f.f, s, h, ctx)
    if isinstance(f, HeapSize):
        return Fraction(h.size())
    if isinstance(f, RAdd):
        return ext_add(_ev(f.f, s, h, ctx), _ev(f.g, s, h, ctx))
    if isinstance(f, RMonus):
        return ext_monus(_ev(f.f, s, h, ctx), _ev(f.g, s, h, ctx))
    if isinstance(f, RMin):
        return ext_min(_ev(f.f, s, h, ctx), _ev(f.g, s, h, ctx))
    if isinstance(f, RMul):
        a = _ev(f.f, s, h, ctx)
        if a == 0:  # 0 * anything = 0, skipping possibly-failing right side
            return ZERO
        return ext_mul(a, _ev(f.g, s, h, ctx))
    if isinstance(f, SubSigned):
        b = _ev(f.g, s, h, ctx)
        if is_inf(b):
            raise PotentialNotFinite("signed subtrahend evaluated to inf")
        return ext_sub_signed(_ev(f.f, s, h, ctx), b)
    if isinstance(f, SepAdd):
        return _ev_sepadd(f.f, f.g, s, h, ctx)
    if isinstance(f, SepMonus):
        return _ev_sepmonus(f.f, f.g, s, h, ctx)
    if isinstance(f, InfQ):
        return _ev_quant(f, s, h, ctx, minimize=True)
    if isinstance(f, SupQ):
        return _ev_quant(f, s, h, ctx, minimize=False)
    if isinstance(f, SepSum):
        return _ev_sepsum(f, s, h, ctx)
    if isinstance(f, Pred):
        return _ev_pred(f, s, h, ctx)
    raise TypeError(f"not a runtime expression: {f!r}")


def _ev_sepadd(fl: RuntimeExpr, fr: RuntimeExpr, s: Stack, h: Heap,
               ctx: _Ctx) -> Ext:
    p = _pin(fl, s, h, ctx)
    if p is not None:
        return _apply_pin(p, fr, s, h, ctx)
    p = _pin(fr, s, h, ctx)
    if p is not None:
        return _apply_pin(p, fl, s, h, ctx)
    # Full enumeration over 2^n ordered splits.
    best: Ext = INF
    stop_at_zero = not (_may_be_negative(fl) or _may_be_negative(fr))
    for h1, h2 in h.partitions(ctx.opts.partition_limit):
        a = _ev(fl, s, h1, ctx)
        if is_inf(a):
            continue
        v = ext_add(a, _ev(fr, s, h2, ctx))
        best = ext_min(best, v)
        if stop_at_zero and best == 0:
            break
    return best


def _apply_pin(p: Pin, other: RuntimeExpr, s: Stack, h: Heap, ctx: _Ctx) -> Ext:
    if not p.valid or is_inf(p.value):
        return INF
    if not _pin_fits(p, h):
        return INF
    rest = h.without(p.footprint())
    return ext_add(p.value, _ev(other, s, rest, ctx))


def _ev_sepmonus(fl: RuntimeExpr, fr: RuntimeExpr, s: Stack, h: Heap,
                 ctx: _Ctx) -> Ext:
    if not is_precise(fl):
        raise ImpreciseMonus(
            f"left operand of o- is not in the precise fragment: {show_runtime(fl)}")
    p = _pin(fl, s, h, ctx)
    if p is None or not p.valid or is_inf(p.value):
        return ZERO  # no extension makes the left side finite
    if p.wild:
        raise ImpreciseMonus(
            "wildcard points-to on the left of o- has no unique extension")
    if any(h.contains(loc) for loc in p.exact):
        return ZERO  # the required extension collides with the heap
    extended = h.union(Heap(p.exact))
    return ext_monus(_ev(fr, s, extended, ctx), p.value)


def _ev_quant(f, s: Stack, h: Heap, ctx: _Ctx, minimize: bool) -> Ext:
    rng = f.hint
    if rng is None:
        rng = ctx.opts.quantifier_range.get(f.var)
    if rng is None and minimize:
        guided = _guided_binding(f.body, f.var, s, h)
        if guided is not None:
            found, value = guided
            if not found:
                return INF
            return _ev(f.body, s.bind(f.var, value), h, ctx)
    if rng is None:
        rng = ctx.opts.default_range
    if rng is None:
        kind = "inf" if minimize else "sup"
        raise UnboundedQuantifier(
            f"no finite range for {kind} {f.var} and no guided binding applies")
    best: Optional[Ext] = None
    for v in rng:
        val = _ev(f.body, s.bind(f.var, v), h, ctx)
        if best is None:
            best = val
        elif minimize:
            best = ext_min(best, val)
        else:
            best = ext_max(best, val)
        if not minimize and is_inf(best):
            break
    if best is None:
        raise UnboundedQuantifier(f"empty range for quantifier over {f.var}")
    return best


def _guided_binding(body: RuntimeExpr, var: str, s: Stack, h: Heap):
    """Find a conjunct (e |-> var) in the o+ spine; the heap then forces
    the binding.  Returns None if no such conjunct, else (found, value)."""
    for conj in _sepadd_spine(body):
        if isinstance(conj, PointsTo):
            target = conj.e2
            from .syntax import Var  # local import to avoid cycle at module load
            if isinstance(target, Var) and target.name == var \
                    and var not in arith_vars(conj.e):
                loc = eval_arith(conj.e, s)
                if loc >= 1 and h.contains(loc):
                    return True, h.read(loc)
                return False, 0
    return None


def _sepadd_spine(f: RuntimeExpr):
    if isinstance(f, SepAdd):
        yield from _sepadd_spine(f.f)
        yield from _sepadd_spine(f.g)
    else:
        yield f


def _ev_sepsum(f: SepSum, s: Stack, h: Heap, ctx: _Ctx) -> Ext:
    lo = eval_arith(f.lo, s)
    hi = eval_arith(f.hi, s)
    if lo > hi:
        return ZERO if h.size() == 0 else INF
    p = _pin(f, s, h, ctx)
    if p is not None:
        if not p.valid or is_inf(p.value):
            return INF
        if _pin_fits(p, h) and len(p.footprint()) == h.size():
            return p.value
        return INF
    # General case: unroll one index and reuse separating addition.
    head = subst_runtime(f.body, f.var, Num(lo))
    tail = SepSum(f.var, Num(lo + 1), Num(hi), f.body)
    return _ev_sepadd(head, tail, s, h, ctx)


def _ev_pred(f: Pred, s: Stack, h: Heap, ctx: _Ctx) -> Ext:
    if ctx.env is None:
        raise SpecError(f"predicate {f.name!r} used without an environment")
    d = ctx.env.lookup(f.name)
    if len(d.params) != len(f.args):
        raise SpecError(
            f"{f.name} expects {len(d.params)} arguments, got {len(f.args)}")
    ctx.depth += 1
    if ctx.depth > ctx.budget:
        raise LimitError(
            f"predicate unfolding exceeded budget {ctx.budget}; "
            f"is {f.name!r} consuming heap cells?")
    try:
        bound = s
        for par, arg in zip(d.params, f.args):
            bound = bound.bind(par, eval_arith(arg, s))
        return _ev(d.body, bound, h, ctx)
    finally:
        ctx.depth -= 1


def _may_be_negative(f: RuntimeExpr) -> bool:
    if isinstance(f, SubSigned):
        return True
    if isinstance(f, (RAdd, RMonus, RMin, RMul, SepAdd, SepMonus)):
        return _may_be_negative(f.f) or _may_be_negative(f.g)
    if isinstance(f, (InfQ, SupQ)):
        return _may_be_negative(f.body)
    if isinstance(f, SepSum):
        return _may_be_negative(f.body)
    if isinstance(f, EmpRun):
        return _may_be_negative(f.f)
    return False


# ---------------------------------------------------------------------------
# Static helpers: purity, free variables, substitution

def is_pure(f: RuntimeExpr) -> bool:
    """Conservative syntactic check: value never depends on the heap."""
    if isinstance(f, (Const, RArith, Quot, Iverson, Gate)):
        return True
    if isinstance(f, (Emp, PointsTo, PointsToAny, EmpRun, HeapSize, SepSum, Pred)):
        return False
    if isinstance(f, (RAdd, RMonus, RMin, RMul, SubSigned, SepAdd, SepMonus)):
        return is_pure(f.f) and is_pure(f.g)
    if isinstance(f, (InfQ, SupQ)):
        return is_pure(f.body)
    raise TypeError(f"not a runtime expression: {f!r}")


def runtime_vars(f: RuntimeExpr) -> frozenset:
    """Free (unbound) variables of f."""
    if isinstance(f, Const) or isinstance(f, (Emp, HeapSize)):
        return frozenset()
    if isinstance(f, RArith):
        return arith_vars(f.e)
    if isinstance(f, Quot):
        return arith_vars(f.num) | arith_vars(f.den)
    if isinstance(f, (Iverson, Gate)):
        return bool_vars(f.phi)
    if isinstance(f, PointsTo):
        return arith_vars(f.e) | arith_vars(f.e2)
    if isinstance(f, PointsToAny):
        return arith_vars(f.e)
    if isinstance(f, EmpRun):
        return runtime_vars(f.f)
    if isinstance(f, (RAdd, RMonus, RMin, RMul, SubSigned, SepAdd, SepMonus)):
        return runtime_vars(f.f) | runtime_vars(f.g)
    if isinstance(f, (InfQ, SupQ)):
        return runtime_vars(f.body) - {f.var}
    if isinstance(f, SepSum):
        return (runtime_vars(f.body) - {f.var}) | arith_vars(f.lo) | arith_vars(f.hi)
    if isinstance(f, Pred):
        out = frozenset()
        for a in f.args:
            out |= arith_vars(a)
        return out
    raise TypeError(f"not a runtime expression: {f!r}")


def _fresh(base: str, avoid) -> str:
    cand = base
    while cand in avoid:
        cand += "'"
    return cand


def subst_runtime(f: RuntimeExpr, x: str, e: ArithExpr) -> RuntimeExpr:
    """Capture-avoiding substitution of the pure term e for x."""
    if isinstance(f, (Const, Emp, HeapSize)):
        return f
    if isinstance(f, RArith):
        return RArith(subst_arith(f.e, x, e))
    if isinstance(f, Quot):
        return Quot(subst_arith(f.num, x, e), subst_arith(f.den, x, e))
    if isinstance(f, Iverson):
        return Iverson(subst_bool(f.phi, x, e))
    if isinstance(f, Gate):
        return Gate(subst_bool(f.phi, x, e))
    if isinstance(f, PointsTo):
        return PointsTo(subst_arith(f.e, x, e), subst_arith(f.e2, x, e))
    if isinstance(f, PointsToAny):
        return PointsToAny(subst_arith(f.e, x, e), f.k)
    if isinstance(f, EmpRun):
        return EmpRun(subst_runtime(f.f, x, e))
    if isinstance(f, (RAdd, RMonus, RMin, RMul, SubSigned, SepAdd, SepMonus)):
        return type(f)(subst_runtime(f.f, x, e), subst_runtime(f.g, x, e))
    if isinstance(f, (InfQ, SupQ)):
        if f.var == x:
            return f
        if f.var in arith_vars(e):
            nv = _fresh(f.var, arith_vars(e) | runtime_vars(f.body) | {x})
            body = subst_runtime(f.body, f.var, _var(nv))
            return type(f)(nv, subst_runtime(body, x, e), f.hint)
        return type(f)(f.var, subst_runtime(f.body, x, e), f.hint)
    if isinstance(f, SepSum):
        lo = subst_arith(f.lo, x, e)
        hi = subst_arith(f.hi, x, e)
        if f.var == x:
            return SepSum(f.var, lo, hi, f.body)
        if f.var in arith_vars(e):
            nv = _fresh(f.var, arith_vars(e) | runtime_vars(f.body) | {x})
            body = subst_runtime(f.body, f.var, _var(nv))
            return SepSum(nv, lo, hi, subst_runtime(body, x, e))
        return SepSum(f.var, lo, hi, subst_runtime(f.body, x, e))
    if isinstance(f, Pred):
        return Pred(f.name, tuple(subst_arith(a, x, e) for a in f.args))
    raise TypeError(f"not a runtime expression: {f!r}")


def _var(name: str):
    from .syntax import Var
    return Var(name)


# ---------------------------------------------------------------------------
# Pointwise comparison on a finite state sample

def compare_runtimes(f: RuntimeExpr, g: RuntimeExpr, states: Iterable[ProgState],
                     env: Optional[PredEnv] = None,
                     opts: EvalOptions = DEFAULT_OPTS):
    """Return (violations, errors): states where f > g, and states whose
    evaluation raised, with the exception message."""
    violations = []
    errors = []
    for st in states:
        try:
            fv = eval_runtime(f, st, env, opts)
            gv = eval_runtime(g, st, env, opts)
        except Exception as exc:  # recorded, not raised: per-state report
            errors.append((st, f"{type(exc).__name__}: {exc}"))
            continue
        if not _le(fv, gv):
            violations.append((st, fv, gv))
    return violations, errors


def _le(a: Ext, b: Ext) -> bool:
    if b is INF:
        return True
    if a is INF:
        return False
    return a <= b


# ---------------------------------------------------------------------------
# Pretty printer (levels mirror the parser)

def show_runtime(f: RuntimeExpr, prec: int = 0) -> str:
    if isinstance(f, (InfQ, SupQ)):
        kw = "inf" if isinstance(f, InfQ) else "sup"
        s = f"{kw} {f.var} : {show_runtime(f.body, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(f, SepSum):
        s = (f"bigoplus {f.var} = {show_arith(f.lo)} .. {show_arith(f.hi)}"
             f" : {show_runtime(f.body, 0)}")
        return f"({s})" if prec > 0 else s
    if isinstance(f, SubSigned):
        s = f"{show_runtime(f.f, 1)} - {show_runtime(f.g, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(f, RAdd):
        s = f"{show_runtime(f.f, 2)} + {show_runtime(f.g, 3)}"
        return f"({s})" if prec > 2 else s
    if isinstance(f, RMonus):
        s = f"{show_runtime(f.f, 2)} -. {show_runtime(f.g, 3)}"
        return f"({s})" if prec > 2 else s
    if isinstance(f, RMin):
        s = f"{show_runtime(f.f, 3)} /\\ {show_runtime(f.g, 4)}"
        return f"({s})" if prec > 3 else s
    if isinstance(f, SepAdd):
        s = f"{show_runtime(f.f, 4)} o+ {show_runtime(f.g, 5)}"
        return f"({s})" if prec > 4 else s
    if isinstance(f, SepMonus):
        s = f"{show_runtime(f.f, 4)} o- {show_runtime(f.g, 5)}"
        return f"({s})" if prec > 4 else s
    if isinstance(f, RMul):
        s = f"{show_runtime(f.f, 5)} * {show_runtime(f.g, 6)}"
        return f"({s})" if prec > 5 else s
    if isinstance(f, Const):
        from .extreal import fmt
        return fmt(f.value)
    if isinstance(f, RArith):
        return show_arith(f.e, 3)
    if isinstance(f, Quot):
        return f"{show_arith(f.num, 3)} / {show_arith(f.den, 3)}"
    if isinstance(f, Iverson):
        return f"[{show_bool(f.phi)}]"
    if isinstance(f, Gate):
        return f"gate({show_bool(f.phi)})"
    if isinstance(f, Emp):
        return "emp"
    if isinstance(f, PointsTo):
        return f"({show_arith(f.e)} |-> {show_arith(f.e2)})"
    if isinstance(f, PointsToAny):
        dashes = ",".join("-" for _ in range(f.k))
        return f"({show_arith(f.e)} |-> {dashes})"
    if isinstance(f, EmpRun):
        return f"<{show_runtime(f.f, 0)}>"
    if isinstance(f, HeapSize):
        return "size"
    if isinstance(f, Pred):
        args = ", ".join(show_arith(a) for a in f.args)
        return f"{f.name}({args})"
    raise TypeError(f"not a runtime expression: {f!r}")
