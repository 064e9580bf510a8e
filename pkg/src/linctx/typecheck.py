"""Dual-context type checking (Gamma for non-linear, Delta for linear variables).

Context splitting is done algorithmically: subterms are checked left to right,
each against the linear variables not yet consumed by its siblings.  Where the
rules share one linear environment (if branches, pair components and choice
arms) the parts must consume exactly the same set.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Mapping, Optional

from .errors import (BranchConsumptionMismatch, ExtraFreeVariable, HoleUnused, LinearityViolation,
                     TypeCheckError, TypeMismatch, UnboundVariable)
from .syntax import (BOOL, NAT, App, Arrow, Bind, BoolLit, Choice, Eq, EqN, Fix, If, IsZero, Lam,
                     LinArrow, Monad, NatLit, Pair, Pred, Proj, Succ, TensorIntro, TensorLet,
                     TensorType, Term, TypeExpr, Val, Var, WithType, free_var_set, fresh_name,
                     substitute)


@dataclass(frozen=True)
class TypingEnv:
    gamma: Mapping[str, TypeExpr] = field(default_factory=dict)
    delta: Mapping[str, TypeExpr] = field(default_factory=dict)

    def __post_init__(self):
        clash = set(self.gamma) & set(self.delta)
        if clash:
            raise TypeCheckError(f"variables in both environments: {sorted(clash)}")


@dataclass(frozen=True)
class CheckResult:
    inferred: TypeExpr
    consumed: FrozenSet[str]


_EMPTY = frozenset()

CONSTANT_TYPES = {
    Succ: LinArrow(NAT, NAT),
    Pred: LinArrow(NAT, NAT),
    IsZero: LinArrow(NAT, BOOL),
    Eq: LinArrow(NAT, LinArrow(NAT, BOOL)),
}


def constant_type(e: Term) -> Optional[TypeExpr]:
    match e:
        case NatLit():
            return NAT
        case BoolLit():
            return BOOL
        case EqN():
            return LinArrow(NAT, BOOL)
        case Fix(t):
            return Arrow(Arrow(t, t), t)
    return CONSTANT_TYPES.get(type(e))


def check(env: TypingEnv, e: Term) -> CheckResult:
    """Infer the type of ``e`` and the linear variables it consumes."""
    ty, used = _check(e, dict(env.gamma), dict(env.delta), frozenset(env.delta))
    return CheckResult(ty, used)


def check_program(e: Term) -> TypeExpr:
    return check(TypingEnv(), e).inferred


def check_linear_context(c: Term, hole: str, holetype: TypeExpr) -> TypeExpr:
    extra = free_var_set(c) - {hole}
    if extra:
        raise ExtraFreeVariable(f"context has free variables besides the hole: {sorted(extra)}")
    res = check(TypingEnv({}, {hole: holetype}), c)
    if hole not in res.consumed:
        raise HoleUnused(f"hole {hole!r} is never used")
    return res.inferred


def well_typed(e: Term) -> bool:
    try:
        check_program(e)
    except TypeCheckError:
        return False
    return True


# ---------------------------------------------------------------- algorithm

def _expect(actual: TypeExpr, expected: TypeExpr, what: str):
    if actual != expected:
        from .grammar import print_type
        raise TypeMismatch(f"{what}: expected {print_type(expected)}, got {print_type(actual)}")


def _same_consumption(a: FrozenSet[str], b: FrozenSet[str], what: str):
    if a != b:
        raise BranchConsumptionMismatch(
            f"{what} consume different linear variables: {sorted(a)} vs {sorted(b)}")


def _open_binders(names, body, gamma, delta):
    """Rename binders that would shadow a variable already in scope."""
    scope = set(gamma) | set(delta)
    if not any(x in scope for x in names):
        return names, body
    avoid = scope | free_var_set(body) | set(names)
    renamed, sub = [], {}
    for x in names:
        if x in scope:
            x2 = fresh_name(x, avoid)
            avoid.add(x2)
            sub[x] = Var(x2)
            renamed.append(x2)
        else:
            renamed.append(x)
    return tuple(renamed), substitute(body, sub)


def _linear_body(names, types, body, gamma, delta, avail, what):
    names, body = _open_binders(names, body, gamma, delta)
    inner = dict(delta)
    inner.update(zip(names, types))
    ty, used = _check(body, gamma, inner, avail | frozenset(names))
    for x in names:
        if x not in used:
            raise LinearityViolation(f"linear variable {x!r} bound by {what} is never used")
    return ty, used - frozenset(names)


def _nonlinear_body(x, t, body, gamma, delta, avail):
    (x,), body = _open_binders((x,), body, gamma, delta)
    return _check(body, {**gamma, x: t}, delta, avail)


def _check(e: Term, gamma: Dict, delta: Dict, avail: FrozenSet[str]):
    ct = constant_type(e)
    if ct is not None:
        return ct, _EMPTY
    match e:
        case Var(x):
            if x in delta:
                if x not in avail:
                    raise LinearityViolation(f"linear variable {x!r} used more than once "
                                             "or where no linear variables are allowed")
                return delta[x], frozenset((x,))
            if x in gamma:
                return gamma[x], _EMPTY
            raise UnboundVariable(f"unbound variable {x!r}")

        case Lam(x, t, lin, body):
            if t is None:
                raise TypeCheckError("unannotated lambda is only allowed applied to an argument")
            if lin:
                tb, used = _linear_body((x,), (t,), body, gamma, delta, avail, "fn")
                return LinArrow(t, tb), used
            tb, used = _nonlinear_body(x, t, body, gamma, delta, avail)
            return Arrow(t, tb), used

        case App(Lam(x, None, lin, body), arg):
            if lin:
                ta, ca = _check(arg, gamma, delta, avail)
                tb, cb = _linear_body((x,), (ta,), body, gamma, delta, avail - ca, "fn")
                return tb, ca | cb
            ta, _ = _check(arg, gamma, delta, _EMPTY)
            return _nonlinear_body(x, ta, body, gamma, delta, avail)

        case App(f, arg):
            tf, cf = _check(f, gamma, delta, avail)
            match tf:
                case LinArrow(dom, cod):
                    ta, ca = _check(arg, gamma, delta, avail - cf)
                    _expect(ta, dom, "argument of linear application")
                    return cod, cf | ca
                case Arrow(dom, cod):
                    ta, _ = _check(arg, gamma, delta, _EMPTY)
                    _expect(ta, dom, "argument of application")
                    return cod, cf
            from .grammar import print_type
            raise TypeMismatch(f"applying a term of non-function type {print_type(tf)}")

        case If(c, a, b):
            tc, cc = _check(c, gamma, delta, avail)
            _expect(tc, BOOL, "if condition")
            rest = avail - cc
            ta, ca = _check(a, gamma, delta, rest)
            tb, cb = _check(b, gamma, delta, rest)
            _same_consumption(ca, cb, "if branches")
            _expect(tb, ta, "else branch")
            return ta, cc | ca

        case Pair(a, b):
            ta, ca = _check(a, gamma, delta, avail)
            tb, cb = _check(b, gamma, delta, avail)
            _same_consumption(ca, cb, "pair components")
            return WithType(ta, tb), ca

        case Proj(i, inner):
            t, used = _check(inner, gamma, delta, avail)
            if not isinstance(t, WithType):
                raise TypeMismatch("projection from a term that is not an additive pair")
            return (t.left if i == 1 else t.right), used

        case TensorIntro(a, b):
            ta, ca = _check(a, gamma, delta, avail)
            tb, cb = _check(b, gamma, delta, avail - ca)
            return TensorType(ta, tb), ca | cb

        case TensorLet(x, y, s, body):
            if x == y:
                raise TypeCheckError(f"letpair binds {x!r} twice")
            ts, cs = _check(s, gamma, delta, avail)
            if not isinstance(ts, TensorType):
                raise TypeMismatch("letpair scrutinee is not a tensor")
            tb, cb = _linear_body((x, y), (ts.left, ts.right), body, gamma, delta,
                                  avail - cs, "letpair")
            return tb, cs | cb

        case Val(inner):
            t, used = _check(inner, gamma, delta, avail)
            return Monad(t), used

        case Bind(x, lin, c, body):
            if lin:
                tc, cc = _check(c, gamma, delta, avail)
            else:
                tc, cc = _check(c, gamma, delta, _EMPTY)
            if not isinstance(tc, Monad):
                raise TypeMismatch("bind of a term that is not a computation")
            if lin:
                tb, cb = _linear_body((x,), (tc.inner,), body, gamma, delta, avail - cc, "bind")
            else:
                tb, cb = _nonlinear_body(x, tc.inner, body, gamma, delta, avail)
            if not isinstance(tb, Monad):
                raise TypeMismatch("body of bind is not a computation")
            return tb, cc | cb

        case Choice(a, b):
            ta, ca = _check(a, gamma, delta, avail)
            tb, cb = _check(b, gamma, delta, avail)
            _same_consumption(ca, cb, "choice arms")
            if not isinstance(ta, Monad):
                raise TypeMismatch("choice between terms that are not computations")
            _expect(tb, ta, "right arm of choice")
            return ta, ca

    raise TypeCheckError(f"not a term: {e!r}")
