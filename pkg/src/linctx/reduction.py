"""Call-by-name small-step reduction with restricted evaluation contexts.

Evaluation positions are: the function of an application, the argument of an
application whose head is ``succ``/``pred``/``iszero``/``eq``/``eq[n]``, the
condition of ``if``, the operand of a projection, the scrutinee of
``letpair``, the computation of ``bind`` and the inside of ``val``.  Pair
components, branches, choice arms and binder bodies are never reduced.

``eq`` takes its arguments one at a time: ``eq n`` reduces to ``eq[n]`` and
``eq[k] m`` reduces to a boolean.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

from .errors import OpenTermError, StuckNonCanonical
from .syntax import (App, Bind, BoolLit, Choice, Eq, EqN, Fix, If, IsZero, Lam, NatLit, Pair,
                     Pred, Proj, Succ, TensorIntro, TensorLet, Term, Val, alpha_key,
                     free_var_set, substitute)

StepResult = List[Tuple[Term, str]]

NAT_PRIMITIVES = (Succ, Pred, IsZero, Eq, EqN)
CANONICAL_CONSTANTS = (NatLit, BoolLit, Succ, Pred, IsZero, Eq, EqN, Fix)


def _axiom(e: Term):
    """Successors of ``e`` by an axiom applied at the root."""
    match e:
        case App(Lam(x, _, _, body), arg):
            return [(substitute(body, {x: arg}), "beta")]
        case App(Fix() as fx, f):
            return [(App(f, App(fx, f)), "fix")]
        case App(Succ(), NatLit(n)):
            return [(NatLit(n + 1), "succ")]
        case App(Pred(), NatLit(n)):
            return [(NatLit(max(n - 1, 0)), "pred")]
        case App(IsZero(), NatLit(n)):
            return [(BoolLit(n == 0), "iszero")]
        case App(Eq(), NatLit(n)):
            return [(EqN(n), "eq")]
        case App(EqN(k), NatLit(n)):
            return [(BoolLit(k == n), "eq")]
        case If(BoolLit(b), then_, else_):
            return [(then_ if b else else_, "if-true" if b else "if-false")]
        case Proj(i, Pair(a, b)):
            return [(a if i == 1 else b, "proj")]
        case TensorLet(x, y, TensorIntro(a, b), body):
            return [(substitute(body, {x: a, y: b}), "letpair")]
        case Bind(x, lin, Val(v), body) if not step(v):
            return [(App(Lam(x, None, lin, body), v), "bind")]
        case Choice(a, b):
            return [(a, "choice-left"), (b, "choice-right")]
    return []


def _lift(succs, rebuild, label):
    return [(rebuild(t), f"{label}/{tag}") for t, tag in succs]


def step(e: Term) -> StepResult:
    """All one-step successors of ``e`` with a tag naming the position and rule."""
    cached = e.__dict__.get("_steps")
    if cached is not None:
        return cached
    out = list(_axiom(e))
    match e:
        case App(f, a):
            out += _lift(step(f), lambda t: App(t, a), "app.fun")
            if isinstance(f, NAT_PRIMITIVES):
                out += _lift(step(a), lambda t: App(f, t), "app.arg")
        case If(c, a, b):
            out += _lift(step(c), lambda t: If(t, a, b), "if.cond")
        case Proj(i, a):
            out += _lift(step(a), lambda t: Proj(i, t), "proj")
        case TensorLet(x, y, s, body):
            out += _lift(step(s), lambda t: TensorLet(x, y, t, body), "letpair.scrutinee")
        case Bind(x, lin, c, body):
            out += _lift(step(c), lambda t: Bind(x, lin, t, body), "bind.computation")
        case Val(a):
            out += _lift(step(a), Val, "val")
    object.__setattr__(e, "_steps", out)
    return out


def reducible(e: Term) -> bool:
    return bool(step(e))


def is_canonical(e: Term) -> bool:
    if free_var_set(e):
        raise OpenTermError("canonical-form test on an open term")
    return _canonical_shape(e)


def _canonical_shape(e: Term) -> bool:
    if isinstance(e, CANONICAL_CONSTANTS + (Pair, TensorIntro, Lam)):
        return True
    if isinstance(e, Val):
        return not step(e.inner)
    return False


# ---------------------------------------------------------------- exploration

@dataclass(frozen=True)
class Exploration:
    """Irreducible terms reachable by internal steps within the fuel bound."""
    normal_forms: tuple
    timed_out: bool
    steps_used: int
    cycle_detected: bool


def explore(e: Term, fuel: int, stop_at_first: bool = False) -> Exploration:
    """Breadth-first search of the reduction graph, one level per fuel unit.

    Terms are deduplicated up to alpha-equivalence within a level.  If a whole
    level repeats an earlier one, every later level is periodic and no new
    normal form can appear, so the search stops and reports a timeout.
    """
    found, found_keys = [], set()
    frontier = [e]
    seen_levels = set()
    level = 0
    while frontier:
        nxt, nxt_keys = [], set()
        for t in frontier:
            succs = step(t)
            if not succs:
                k = alpha_key(t)
                if k not in found_keys:
                    found_keys.add(k)
                    found.append(t)
                    if stop_at_first:
                        return Exploration(tuple(found), False, level, False)
                continue
            for t2, _ in succs:
                k = alpha_key(t2)
                if k not in nxt_keys:
                    nxt_keys.add(k)
                    nxt.append(t2)
        if not nxt:
            break
        if level >= fuel:
            return Exploration(tuple(found), True, level, False)
        level_key = frozenset(nxt_keys)
        if level_key in seen_levels:
            return Exploration(tuple(found), True, level, True)
        seen_levels.add(level_key)
        frontier = nxt
        level += 1
    return Exploration(tuple(found), False, level, False)


@dataclass(frozen=True)
class EvalOutcome:
    values: tuple
    timed_out: bool
    steps_used: int
    cycle_detected: bool = False

    def value_keys(self) -> frozenset:
        return frozenset(alpha_key(v) for v in self.values)


def evaluate(e: Term, fuel: int = 1000) -> EvalOutcome:
    """All values reachable from the closed term ``e`` within ``fuel`` steps per path."""
    if free_var_set(e):
        raise OpenTermError("evaluate expects a closed term")
    ex = explore(e, fuel)
    for v in ex.normal_forms:
        if not _canonical_shape(v):
            from .grammar import print_term
            raise StuckNonCanonical(f"irreducible non-value reached: {print_term(v)}")
    return EvalOutcome(ex.normal_forms, ex.timed_out, ex.steps_used, ex.cycle_detected)


class Convergence(Enum):
    Converges = "converges"
    NoValueWithinFuel = "no-value-within-fuel"


def may_converge(e: Term, fuel: int = 1000) -> Convergence:
    if free_var_set(e):
        raise OpenTermError("may_converge expects a closed term")
    ex = explore(e, fuel, stop_at_first=True)
    for v in ex.normal_forms:
        if not _canonical_shape(v):
            from .grammar import print_term
            raise StuckNonCanonical(f"irreducible non-value reached: {print_term(v)}")
    return Convergence.Converges if ex.normal_forms else Convergence.NoValueWithinFuel
