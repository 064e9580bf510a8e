"""Labeled transitions, bounded trace sets and the trace preorder.

Programs interact with their environment through constants, ``@e``,
``proj1``/``proj2``, ``(x)e`` and ``T``.  A trace set is computed up to a
depth bound, with internal reduction runs bounded by fuel and labels drawn
from an :class:`ArgumentPool`.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Tuple

from .actions import (TENSOR_VARS, Action, AppArg, ConstBool, ConstNat, ProjAct, TAct,
                      TensorAct, Trace, is_constant)
from .errors import NotIrreducible, StuckNonCanonical, TraceNotInSet, TypeMismatch
from .pool import ArgumentPool
from .reduction import _canonical_shape, explore, step
from .syntax import (BOOL, NAT, App, Arrow, BoolLit, Lam, LinArrow, NatLit, Pair,
                     TensorIntro, Term, TypeExpr, Val, alpha_key, omega,
                     substitute)
from .typecheck import TypingEnv, check, check_program


def _body_type(body: Term, a: TypeExpr, b: TypeExpr) -> TypeExpr:
    return check(TypingEnv({}, {TENSOR_VARS[0]: a, TENSOR_VARS[1]: b}), body).inferred


def _apply(e: Term, arg: Term) -> Term:
    if isinstance(e, Lam):
        return substitute(e.body, {e.binder: arg})
    return App(e, arg)


def external_transitions(e: Term, pool: ArgumentPool,
                         ty: Optional[TypeExpr] = None) -> List[Tuple[Action, Term, TypeExpr]]:
    """Labeled transitions of an irreducible program, with residual types."""
    if step(e):
        raise NotIrreducible("external transitions are only defined on irreducible terms")
    if ty is None:
        ty = check_program(e)
    out = []
    match e:
        case NatLit(n):
            out.append((ConstNat(n), omega(NAT), NAT))
        case BoolLit(b):
            out.append((ConstBool(b), omega(BOOL), BOOL))
        case Pair(a, b):
            out.append((ProjAct(1), a, ty.left))
            out.append((ProjAct(2), b, ty.right))
        case TensorIntro(a, b):
            for body in pool.tensor_bodies(ty.left, ty.right):
                res = substitute(body, {TENSOR_VARS[0]: a, TENSOR_VARS[1]: b})
                out.append((TensorAct(body), res, _body_type(body, ty.left, ty.right)))
        case Val(v):
            out.append((TAct(), v, ty.inner))
        case _ if isinstance(ty, (LinArrow, Arrow)):
            for arg in pool.args(ty.dom):
                out.append((AppArg(arg), _apply(e, arg), ty.cod))
    return out


def transition_for(e: Term, action: Action) -> Optional[Term]:
    """The residual of ``e`` after ``action``, or None if ``e`` cannot take it."""
    if step(e):
        return None
    match action, e:
        case ConstNat(n), NatLit(m) if n == m:
            return omega(NAT)
        case ConstBool(b), BoolLit(c) if b == c:
            return omega(BOOL)
        case ProjAct(i), Pair(a, b):
            return a if i == 1 else b
        case TensorAct(body), TensorIntro(a, b):
            return substitute(body, {TENSOR_VARS[0]: a, TENSOR_VARS[1]: b})
        case TAct(), Val(v):
            return v
        case AppArg(arg), _ if _is_function_value(e):
            return _apply(e, arg)
    return None


def _is_function_value(e: Term) -> bool:
    from .syntax import Eq, EqN, Fix, IsZero, Pred, Succ
    return isinstance(e, (Lam, Succ, Pred, IsZero, Eq, EqN, Fix))


# ---------------------------------------------------------------- trace sets

@dataclass(frozen=True)
class TraceSet:
    """Bounded traces of a program.

    ``truncated`` holds prefixes after which some internal run exhausted its
    fuel; traces extending such a prefix may be missing from ``traces``.
    """
    traces: FrozenSet[Trace]
    truncated: FrozenSet[Trace] = frozenset()

    @property
    def complete(self) -> bool:
        return not self.truncated

    def __contains__(self, s) -> bool:
        return tuple(s) in self.traces

    def __iter__(self):
        return iter(self.traces)

    def __len__(self):
        return len(self.traces)

    def may_miss(self, s: Trace) -> bool:
        """True if ``s`` could be absent only because of fuel truncation."""
        return any(s[:i] in self.truncated for i in range(len(s) + 1))


class TraceEngine:
    """Computes trace sets for a fixed pool and fuel, memoised per term."""

    def __init__(self, pool: Optional[ArgumentPool] = None, fuel: int = 1000):
        self.pool = pool or ArgumentPool()
        self.fuel = fuel
        self._memo: Dict = {}
        self._explore_memo: Dict = {}

    def normal_forms(self, e: Term):
        k = alpha_key(e)
        got = self._explore_memo.get(k)
        if got is None:
            ex = explore(e, self.fuel)
            for v in ex.normal_forms:
                if not _canonical_shape(v):
                    from .grammar import print_term
                    raise StuckNonCanonical(f"irreducible non-value reached: {print_term(v)}")
            got = (ex.normal_forms, ex.timed_out and not ex.cycle_detected)
            self._explore_memo[k] = got
        return got

    def traces(self, e: Term, depth: int, ty: Optional[TypeExpr] = None) -> TraceSet:
        if ty is None:
            ty = check_program(e)
        traces, truncated = self._traces(e, ty, depth)
        return TraceSet(traces, truncated)

    def _traces(self, e: Term, ty: TypeExpr, depth: int):
        key = (alpha_key(e), depth)
        got = self._memo.get(key)
        if got is not None:
            return got
        traces = {()}
        nfs, timed_out = self.normal_forms(e)
        truncated = {()} if timed_out else set()
        if depth > 0:
            for v in nfs:
                for act, e2, ty2 in external_transitions(v, self.pool, ty):
                    if is_constant(act):
                        traces.add((act,))
                        continue
                    sub, sub_trunc = self._traces(e2, ty2, depth - 1)
                    traces.update((act,) + s for s in sub)
                    truncated.update((act,) + s for s in sub_trunc)
        got = (frozenset(traces), frozenset(truncated))
        self._memo[key] = got
        return got

    def residuals(self, e: Term, s: Trace) -> Tuple[Term, ...]:
        """Irreducible terms ``e'`` with ``e --s--> e'`` (then internal steps)."""
        nfs, _ = self.normal_forms(e)
        if not s:
            return nfs
        out, keys = [], set()
        for v in nfs:
            nxt = transition_for(v, s[0])
            if nxt is None:
                continue
            for r in self.residuals(nxt, s[1:]):
                k = alpha_key(r)
                if k not in keys:
                    keys.add(k)
                    out.append(r)
        return tuple(out)

    def has_trace(self, e: Term, s: Trace) -> bool:
        """Whether ``e`` can take ``s`` (labels need not come from the pool)."""
        nfs, _ = self.normal_forms(e)
        if not s:
            return True
        for v in nfs:
            nxt = transition_for(v, s[0])
            if nxt is not None and (len(s) == 1 or self.has_trace(nxt, s[1:])):
                return True
        return False


def traces(e: Term, depth: int = 5, pool: Optional[ArgumentPool] = None,
           fuel: int = 1000) -> TraceSet:
    return TraceEngine(pool, fuel).traces(e, depth)


def has_trace(e: Term, s: Trace, fuel: int = 1000) -> bool:
    return TraceEngine(None, fuel).has_trace(e, tuple(s))


# ---------------------------------------------------------------- preorder

class VerdictKind(Enum):
    HoldsWithinBounds = "holds-within-bounds"
    Counterexample = "counterexample"
    Incomplete = "incomplete"


@dataclass(frozen=True)
class LeqVerdict:
    kind: VerdictKind
    trace: Optional[Trace] = None

    @property
    def holds(self) -> bool:
        return self.kind is VerdictKind.HoldsWithinBounds


def _trace_order(s: Trace):
    from .grammar import print_trace
    return (len(s), print_trace(s))


def compare_sets(t1: TraceSet, t2: TraceSet) -> LeqVerdict:
    missing = sorted(t1.traces - t2.traces, key=_trace_order)
    if not missing:
        return LeqVerdict(VerdictKind.HoldsWithinBounds)
    for s in missing:
        if not t2.may_miss(s):
            return LeqVerdict(VerdictKind.Counterexample, s)
    return LeqVerdict(VerdictKind.Incomplete, missing[0])


def _same_type(e1: Term, e2: Term) -> TypeExpr:
    t1, t2 = check_program(e1), check_program(e2)
    if t1 != t2:
        from .grammar import print_type
        raise TypeMismatch(f"programs have different types: {print_type(t1)} vs {print_type(t2)}")
    return t1


def trace_leq(e1: Term, e2: Term, depth: int = 5, pool: Optional[ArgumentPool] = None,
              fuel: int = 1000, engine: Optional[TraceEngine] = None) -> LeqVerdict:
    ty = _same_type(e1, e2)
    engine = engine or TraceEngine(pool, fuel)
    return compare_sets(engine.traces(e1, depth, ty), engine.traces(e2, depth, ty))


class EquivKind(Enum):
    Equivalent = "equivalent-within-bounds"
    Inequivalent = "inequivalent"
    Incomplete = "incomplete"


@dataclass(frozen=True)
class EquivVerdict:
    kind: EquivKind
    forward: LeqVerdict
    backward: LeqVerdict

    @property
    def counterexample(self) -> Optional[Tuple[int, Trace]]:
        """(direction, trace): direction 1 means a trace of e1 missing from e2."""
        for d, v in ((1, self.forward), (2, self.backward)):
            if v.kind is VerdictKind.Counterexample:
                return d, v.trace
        for d, v in ((1, self.forward), (2, self.backward)):
            if v.kind is VerdictKind.Incomplete:
                return d, v.trace
        return None


def trace_equiv(e1: Term, e2: Term, depth: int = 5, pool: Optional[ArgumentPool] = None,
                fuel: int = 1000, engine: Optional[TraceEngine] = None) -> EquivVerdict:
    ty = _same_type(e1, e2)
    engine = engine or TraceEngine(pool, fuel)
    t1, t2 = engine.traces(e1, depth, ty), engine.traces(e2, depth, ty)
    fwd, bwd = compare_sets(t1, t2), compare_sets(t2, t1)
    kinds = {fwd.kind, bwd.kind}
    if VerdictKind.Counterexample in kinds:
        kind = EquivKind.Inequivalent
    elif VerdictKind.Incomplete in kinds:
        kind = EquivKind.Incomplete
    else:
        kind = EquivKind.Equivalent
    return EquivVerdict(kind, fwd, bwd)


class TraceClass(Enum):
    Maximal = "maximal"
    Computational = "computational"
    Neither = "neither"


def classify_trace(s: Trace, traceset) -> TraceClass:
    s = tuple(s)
    ts = traceset.traces if isinstance(traceset, TraceSet) else frozenset(traceset)
    if s not in ts:
        raise TraceNotInSet("trace is not a member of the given set")
    n = len(s)
    if any(len(t) > n and t[:n] == s for t in ts):
        return TraceClass.Neither
    if s and is_constant(s[-1]):
        return TraceClass.Computational
    return TraceClass.Maximal
