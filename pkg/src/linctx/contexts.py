"""Linear contexts: plugging, context transitions, LCR classification,
context traces and s-context synthesis.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple, Union

from .actions import (TENSOR_VARS, Action, AppArg, ConstBool, ConstNat, ProjAct, TAct,
                      TensorAct, Trace, is_constant)
from .errors import (MalformedTrace, NotEvaluationContext, TraceNotTaken, TypeCheckError,
                     TypeMismatch, UnclassifiableReduction)
from .lts import TraceEngine, transition_for
from .reduction import NAT_PRIMITIVES, step
from .syntax import (BOOL, NAT, App, Arrow, Bind, BoolLit, Eq, EqN, If, IsZero, Lam, LinArrow,
                     Monad, NatLit, Pred, Proj, Succ, TensorLet, TensorType, Term, TypeExpr, Val,
                     Var, WithType, alpha_eq, alpha_key, all_names, children, free_var_set, omega,
                     replace_at, subterm_at, substitute)
from .typecheck import TypingEnv, check, check_linear_context, check_program


@dataclass(frozen=True)
class LinearContext:
    body: Term
    hole: str
    holetype: TypeExpr
    result: TypeExpr

    @classmethod
    def make(cls, body: Term, hole: str, holetype: TypeExpr) -> "LinearContext":
        return cls(body, hole, holetype, check_linear_context(body, hole, holetype))

    @property
    def is_bare(self) -> bool:
        return self.body == Var(self.hole)


def plug(c: LinearContext, e: Term) -> Term:
    if free_var_set(e):
        raise TypeCheckError("only closed programs can be plugged into a context")
    t = check_program(e)
    if t != c.holetype:
        raise TypeMismatch("program type differs from the hole type")
    return substitute(c.body, {c.hole: e})


def _plug_raw(c: LinearContext, e: Term) -> Term:
    return substitute(c.body, {c.hole: e})


def _fresh_hole(body: Term) -> str:
    names = all_names(body)
    i = 0
    while f"hole{i}" in names:
        i += 1
    return f"hole{i}"


# ---------------------------------------------------------------- evaluation positions

def hole_path(body: Term, hole: str) -> Optional[Tuple[int, ...]]:
    """Path to the hole along evaluation positions, or None if it is not in one."""
    path = []
    e = body
    while True:
        match e:
            case Var(x):
                return tuple(path) if x == hole else None
            case App(f, a):
                if isinstance(f, NAT_PRIMITIVES) and hole in free_var_set(a):
                    path.append(1)
                    e = a
                else:
                    path.append(0)
                    e = f
            case If() | Proj() | TensorLet() | Bind() | Val():
                path.append(0)
                e = children(e)[0]
            case _:
                return None


def is_evaluation_context(c: LinearContext) -> bool:
    return hole_path(c.body, c.hole) is not None


# ---------------------------------------------------------------- context transitions

@dataclass(frozen=True)
class ContextTransition:
    """One entry of the context transition table.

    ``label`` is the action, or None for the constant patterns of
    ``succ``/``pred``/``iszero``/``eq`` holes which accept any numeral.
    ``fire`` maps the concrete action to the successor: a LinearContext when
    the hole survives (under a new name) or a closed term when it is consumed.
    """
    label: Optional[Action]
    kind: str
    fire: Callable[[Action], Union[LinearContext, Term]]

    def accepts(self, a: Action) -> bool:
        if self.label is None:
            return isinstance(a, ConstNat)
        return self.label == a


def context_transitions(c: LinearContext) -> List[ContextTransition]:
    path = hole_path(c.body, c.hole)
    if path is None:
        raise NotEvaluationContext("the hole is not in an evaluation position")
    if not path:
        return []
    ppath, idx = path[:-1], path[-1]
    parent = subterm_at(c.body, ppath)
    x = c.hole
    y = _fresh_hole(c.body)
    ht = c.holetype

    def closed(term):
        return lambda act: replace_at(c.body, ppath, term(act))

    def reopen(term, new_type):
        return lambda act: LinearContext(replace_at(c.body, ppath, term(act)), y, new_type, c.result)

    out: List[ContextTransition] = []
    match parent:
        case App(Var(h), arg) if h == x and idx == 0:
            if isinstance(ht, (LinArrow, Arrow)):
                out.append(ContextTransition(AppArg(arg), "app", reopen(lambda a: Var(y), ht.cod)))
        case App(Succ(), _):
            out.append(ContextTransition(None, "succ", closed(lambda a: NatLit(a.n + 1))))
        case App(Pred(), _):
            out.append(ContextTransition(None, "pred", closed(lambda a: NatLit(max(a.n - 1, 0)))))
        case App(IsZero(), _):
            out.append(ContextTransition(None, "iszero", closed(lambda a: BoolLit(a.n == 0))))
        case App(Eq(), _):
            out.append(ContextTransition(None, "eq", closed(lambda a: EqN(a.n))))
        case App(EqN(k), _):
            out.append(ContextTransition(None, "eq", closed(lambda a, k=k: BoolLit(a.n == k))))
        case If(_, a, b):
            out.append(ContextTransition(ConstBool(True), "if", closed(lambda _: a)))
            out.append(ContextTransition(ConstBool(False), "if", closed(lambda _: b)))
        case Proj(i, _):
            if isinstance(ht, WithType):
                comp = ht.left if i == 1 else ht.right
                out.append(ContextTransition(ProjAct(i), "proj", reopen(lambda a: Var(y), comp)))
        case TensorLet(z1, z2, _, body):
            if isinstance(ht, TensorType):
                label_body = substitute(body, {z1: Var(TENSOR_VARS[0]), z2: Var(TENSOR_VARS[1])})
                env = TypingEnv({}, {TENSOR_VARS[0]: ht.left, TENSOR_VARS[1]: ht.right})
                rtype = check(env, label_body).inferred
                out.append(ContextTransition(TensorAct(label_body), "letpair",
                                             reopen(lambda a: Var(y), rtype)))
        case Bind(z, lin, _, body):
            if isinstance(ht, Monad):
                out.append(ContextTransition(TAct(), "bind",
                                             reopen(lambda a: App(Lam(z, None, lin, body), Var(y)),
                                                    ht.inner)))
    return out


# ---------------------------------------------------------------- LCR classification

@dataclass(frozen=True)
class ContextStep:
    next: LinearContext
    successor: Term
    tag: str = ""


@dataclass(frozen=True)
class ProgramStep:
    next_program: Term
    successor: Term
    tag: str = ""


@dataclass(frozen=True)
class Interaction:
    """The context and the irreducible program take the same action.

    ``absorbed`` marks the case where the plugged reduction also performs the
    program's first internal step after the action (a primitive function
    receiving its argument); ``next_program`` is then that reduct.
    """
    action: Action
    next_context: Union[LinearContext, Term]
    next_program: Term
    successor: Term
    tag: str = ""
    absorbed: bool = False


LCRForm = Union[ContextStep, ProgramStep, Interaction]


def _context_reducts(c: LinearContext):
    out = []
    for body2, tag in step(c.body):
        out.append((LinearContext(body2, c.hole, c.holetype, c.result), tag))
    return out


def _program_actions(e: Term, ct: ContextTransition) -> List[Tuple[Action, Term]]:
    if ct.label is None:
        if isinstance(e, NatLit):
            return [(ConstNat(e.n), omega(NAT))]
        return []
    nxt = transition_for(e, ct.label)
    return [] if nxt is None else [(ct.label, nxt)]


def _fill(next_context, e: Term) -> Term:
    if isinstance(next_context, LinearContext):
        return _plug_raw(next_context, e)
    return next_context


def classify_one(c: LinearContext, e: Term, successor: Term, tag: str = "") -> LCRForm:
    for c2, _ in _context_reducts(c):
        if alpha_eq(_plug_raw(c2, e), successor):
            return ContextStep(c2, successor, tag)
    if hole_path(c.body, c.hole) is None:
        raise UnclassifiableReduction("no context step explains the reduction "
                                      "and the context is not an evaluation context")
    program_steps = step(e)
    for e2, _ in program_steps:
        if alpha_eq(_plug_raw(c, e2), successor):
            return ProgramStep(e2, successor, tag)
    if not program_steps:
        for ct in context_transitions(c):
            for act, e2 in _program_actions(e, ct):
                if not ct.accepts(act):
                    continue
                c2 = ct.fire(act)
                if alpha_eq(_fill(c2, e2), successor):
                    return Interaction(act, c2, e2, successor, tag)
                for e3, _ in step(e2):
                    if alpha_eq(_fill(c2, e3), successor):
                        return Interaction(act, c2, e3, successor, tag, absorbed=True)
    from .grammar import print_term
    raise UnclassifiableReduction(
        f"reduction of {print_term(_plug_raw(c, e))} to {print_term(successor)} "
        "is not a linear context reduction")


def classify_lcr(c: LinearContext, e: Term) -> List[LCRForm]:
    """Classify every one-step successor of the plugged term."""
    return [classify_one(c, e, s, tag) for s, tag in step(_plug_raw(c, e))]


# ---------------------------------------------------------------- context traces

def _context_after(c: LinearContext, a: Action) -> Optional[LinearContext]:
    """A transition of an irreducible context whose hole is not bare."""
    nxt = transition_for(c.body, a)
    if nxt is None:
        return None
    try:
        return LinearContext.make(nxt, c.hole, c.holetype)
    except TypeCheckError:
        return None


def context_trace(c: LinearContext, e: Term, s: Trace, fuel: int = 1000,
                  engine: Optional[TraceEngine] = None) -> Trace:
    """The (C, s)-trace of ``e`` along the first witness found, depth first."""
    engine = engine or TraceEngine(None, fuel)
    t = _ctrace(c, e, tuple(s), fuel, engine)
    if t is None:
        raise TraceNotTaken("the plugged term does not take the trace within the fuel bound")
    return t


def context_traces(c: LinearContext, e: Term, s: Trace, fuel: int = 1000,
                   engine: Optional[TraceEngine] = None) -> List[Trace]:
    """Context traces over every witness (used to quantify over witnesses)."""
    engine = engine or TraceEngine(None, fuel)
    found, _ = _ctrace_all(c, e, tuple(s), fuel, engine, {}, set())
    from .lts import _trace_order
    return sorted(found, key=_trace_order)


def _state_key(c, e, s):
    ck = (c.hole, alpha_key(c.body)) if isinstance(c, LinearContext) else alpha_key(c)
    return ck, alpha_key(e), s


def _ctrace_all(c, e, s, fuel, engine, memo, active):
    """All context traces from a state, with a flag telling whether a cycle was cut.

    Results computed while a cycle was cut may be partial, so they are not
    memoised; a state revisited on the current path contributes nothing new.
    """
    if not s:
        return frozenset({()}), False
    if not isinstance(c, LinearContext):
        return (frozenset({()}) if engine.has_trace(c, s) else frozenset()), False
    if c.is_bare:
        return (frozenset({s}) if engine.has_trace(e, s) else frozenset()), False
    key = _state_key(c, e, s)
    if key in memo:
        return memo[key], False
    if key in active:
        return frozenset(), True
    plugged = _plug_raw(c, e)
    succs = step(plugged)
    out, cut = set(), False
    if succs:
        if fuel <= 0:
            return frozenset(), True
        active.add(key)
        for succ, tag in succs:
            form = classify_one(c, e, succ, tag)
            if isinstance(form, ContextStep):
                r, k = _ctrace_all(form.next, e, s, fuel - 1, engine, memo, active)
                out.update(r)
            elif isinstance(form, ProgramStep):
                r, k = _ctrace_all(c, form.next_program, s, fuel - 1, engine, memo, active)
                out.update(r)
            else:
                r, k = _ctrace_all(form.next_context, form.next_program, s, fuel - 1,
                                   engine, memo, active)
                out.update((form.action,) + t for t in r)
            cut = cut or k
        active.discard(key)
    else:
        nxt = _context_after(c, s[0])
        if nxt is not None:
            r, cut = _ctrace_all(nxt, e, s[1:], fuel, engine, memo, active)
            out.update(r)
    result = frozenset(out)
    if not cut:
        memo[key] = result
    return result, cut


def _ctrace(c, e, s, fuel, engine):
    """Depth-first replay returning the first context trace found."""
    if not s:
        return ()
    if not isinstance(c, LinearContext):
        return () if engine.has_trace(c, s) else None
    if c.is_bare:
        return s if engine.has_trace(e, s) else None
    plugged = _plug_raw(c, e)
    succs = step(plugged)
    if succs:
        if fuel <= 0:
            return None
        for succ, tag in succs:
            form = classify_one(c, e, succ, tag)
            if isinstance(form, ContextStep):
                r, prefix = _ctrace(form.next, e, s, fuel - 1, engine), ()
            elif isinstance(form, ProgramStep):
                r, prefix = _ctrace(c, form.next_program, s, fuel - 1, engine), ()
            else:
                r = _ctrace(form.next_context, form.next_program, s, fuel - 1, engine)
                prefix = (form.action,)
            if r is not None:
                return prefix + r
        return None
    nxt = _context_after(c, s[0])
    if nxt is None:
        return None
    return _ctrace(nxt, e, s[1:], fuel, engine)
# ---------------------------------------------------------------- s-contexts

_OMEGA_T_NAT = omega(Monad(NAT))


def synthesize_s_context(s: Trace, holetype: TypeExpr, hole: str = "x") -> LinearContext:
    """The linear context that recognises the trace ``s``."""
    s = tuple(s)
    for a in s[:-1]:
        if is_constant(a):
            raise MalformedTrace("a constant action can only end a trace")
    body = _sctx(s, holetype, hole, 1)
    return LinearContext.make(body, hole, holetype)


def _mismatch(a, t):
    from .grammar import print_action, print_type
    return MalformedTrace(f"action {print_action(a)} does not apply at type {print_type(t)}")


def _sctx(s: Trace, t: TypeExpr, x: str, n: int) -> Term:
    if not s:
        return Val(Var(x))
    a, rest = s[0], s[1:]
    y = f"y{n}"
    match a:
        case ConstNat(k):
            if t != NAT:
                raise _mismatch(a, t)
            return If(App(App(Eq(), Var(x)), NatLit(k)), Val(NatLit(0)), _OMEGA_T_NAT)
        case ConstBool(b):
            if t != BOOL:
                raise _mismatch(a, t)
            ok, bad = Val(NatLit(0)), _OMEGA_T_NAT
            return If(Var(x), ok, bad) if b else If(Var(x), bad, ok)
        case AppArg(arg):
            if not isinstance(t, (LinArrow, Arrow)):
                raise _mismatch(a, t)
            try:
                at = check_program(arg)
            except TypeCheckError:
                raise MalformedTrace("argument of @ action is not a closed well-typed term") from None
            if at != t.dom:
                raise _mismatch(a, t)
            return Bind(y, True, Val(App(Var(x), arg)), _sctx(rest, t.cod, y, n + 1))
        case ProjAct(i):
            if not isinstance(t, WithType):
                raise _mismatch(a, t)
            comp = t.left if i == 1 else t.right
            return Bind(y, True, Val(Proj(i, Var(x))), _sctx(rest, comp, y, n + 1))
        case TensorAct(body):
            if not isinstance(t, TensorType):
                raise _mismatch(a, t)
            env = TypingEnv({}, {TENSOR_VARS[0]: t.left, TENSOR_VARS[1]: t.right})
            try:
                res = check(env, body)
            except TypeCheckError:
                raise _mismatch(a, t) from None
            if res.consumed != frozenset(TENSOR_VARS):
                raise _mismatch(a, t)
            let = TensorLet(TENSOR_VARS[0], TENSOR_VARS[1], Var(x), body)
            return Bind(y, True, Val(let), _sctx(rest, res.inferred, y, n + 1))
        case TAct():
            if not isinstance(t, Monad):
                raise _mismatch(a, t)
            return Bind(y, True, Var(x), _sctx(rest, t.inner, y, n + 1))
    raise MalformedTrace(f"unknown action {a!r}")
