"""Abstract syntax for LPCF / NLPCF terms and types.

Terms are immutable dataclasses.  Binders carry an explicit linearity flag:
``Lam(..., linear=True)`` is written ``fn x:t. e`` and has type ``t -o u``;
``linear=False`` is ``fn! x:t. e`` with type ``t -> u``.  ``Bind`` follows the
same convention (``bind`` / ``bind!``).

A lambda may have ``binder_type=None``.  Such lambdas only arise as the head
of an application produced by the ``bind x = val(v) in e`` reduction, where
the argument fixes the binder type.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence, Union


# ---------------------------------------------------------------- types

@dataclass(frozen=True)
class NatType:
    pass


@dataclass(frozen=True)
class BoolType:
    pass


@dataclass(frozen=True)
class WithType:
    left: "TypeExpr"
    right: "TypeExpr"


@dataclass(frozen=True)
class TensorType:
    left: "TypeExpr"
    right: "TypeExpr"


@dataclass(frozen=True)
class LinArrow:
    dom: "TypeExpr"
    cod: "TypeExpr"


@dataclass(frozen=True)
class Arrow:
    dom: "TypeExpr"
    cod: "TypeExpr"


@dataclass(frozen=True)
class Monad:
    inner: "TypeExpr"


TypeExpr = Union[NatType, BoolType, WithType, TensorType, LinArrow, Arrow, Monad]

NAT = NatType()
BOOL = BoolType()


def is_function_type(t: TypeExpr) -> bool:
    return isinstance(t, (LinArrow, Arrow))


def mentions_monad(t: TypeExpr) -> bool:
    match t:
        case Monad():
            return True
        case WithType(a, b) | TensorType(a, b):
            return mentions_monad(a) or mentions_monad(b)
        case LinArrow(a, b) | Arrow(a, b):
            return mentions_monad(a) or mentions_monad(b)
    return False


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class NatLit:
    n: int


@dataclass(frozen=True)
class BoolLit:
    b: bool


@dataclass(frozen=True)
class Succ:
    pass


@dataclass(frozen=True)
class Pred:
    pass


@dataclass(frozen=True)
class IsZero:
    pass


@dataclass(frozen=True)
class Eq:
    pass


@dataclass(frozen=True)
class EqN:
    """``eq`` after absorbing its first argument ``n``; printed ``eq[n]``."""
    n: int


@dataclass(frozen=True)
class Fix:
    at: TypeExpr


@dataclass(frozen=True)
class Lam:
    binder: str
    binder_type: Optional[TypeExpr]
    linear: bool
    body: "Term"


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class If:
    cond: "Term"
    then_: "Term"
    else_: "Term"


@dataclass(frozen=True)
class Pair:
    fst: "Term"
    snd: "Term"


@dataclass(frozen=True)
class Proj:
    index: int
    of: "Term"


@dataclass(frozen=True)
class TensorIntro:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class TensorLet:
    x: str
    y: str
    scrutinee: "Term"
    body: "Term"


@dataclass(frozen=True)
class Val:
    inner: "Term"


@dataclass(frozen=True)
class Bind:
    binder: str
    linear: bool
    computation: "Term"
    body: "Term"


@dataclass(frozen=True)
class Choice:
    left: "Term"
    right: "Term"


Term = Union[Var, NatLit, BoolLit, Succ, Pred, IsZero, Eq, EqN, Fix, Lam, App, If,
             Pair, Proj, TensorIntro, TensorLet, Val, Bind, Choice]

CONSTANTS = (NatLit, BoolLit, Succ, Pred, IsZero, Eq, EqN, Fix)
MONADIC_FORMS = (Val, Bind, Choice)


def omega(t: TypeExpr, var: str = "x") -> Term:
    """The divergent program ``fix[t] (fn! x:t. x)``."""
    return App(Fix(t), Lam(var, t, False, Var(var)))


def app(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


# ---------------------------------------------------------------- traversal

def children(e: Term) -> tuple:
    match e:
        case Lam(_, _, _, body):
            return (body,)
        case App(f, a):
            return (f, a)
        case If(c, t, f):
            return (c, t, f)
        case Pair(a, b) | TensorIntro(a, b) | Choice(a, b):
            return (a, b)
        case Proj(_, inner) | Val(inner):
            return (inner,)
        case TensorLet(_, _, s, body):
            return (s, body)
        case Bind(_, _, c, body):
            return (c, body)
    return ()


def with_children(e: Term, kids: Sequence[Term]) -> Term:
    match e:
        case Lam(x, t, lin, _):
            return Lam(x, t, lin, kids[0])
        case App():
            return App(kids[0], kids[1])
        case If():
            return If(kids[0], kids[1], kids[2])
        case Pair():
            return Pair(kids[0], kids[1])
        case TensorIntro():
            return TensorIntro(kids[0], kids[1])
        case Choice():
            return Choice(kids[0], kids[1])
        case Proj(i, _):
            return Proj(i, kids[0])
        case Val():
            return Val(kids[0])
        case TensorLet(x, y, _, _):
            return TensorLet(x, y, kids[0], kids[1])
        case Bind(x, lin, _, _):
            return Bind(x, lin, kids[0], kids[1])
    return e


def binders_of_child(e: Term, index: int) -> tuple:
    """Names bound by ``e`` over its ``index``-th child."""
    match e:
        case Lam(x, _, _, _):
            return (x,)
        case TensorLet(x, y, _, _) if index == 1:
            return (x, y)
        case Bind(x, _, _, _) if index == 1:
            return (x,)
    return ()


def size(e: Term) -> int:
    """Number of syntax nodes; type annotations are not counted."""
    cached = e.__dict__.get("_size")
    if cached is not None:
        return cached
    n = 1 + sum(size(c) for c in children(e))
    object.__setattr__(e, "_size", n)
    return n


def subterms(e: Term) -> Iterator[Term]:
    yield e
    for c in children(e):
        yield from subterms(c)


def replace_at(e: Term, path: Sequence[int], new: Term) -> Term:
    if not path:
        return new
    kids = list(children(e))
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return with_children(e, kids)


def subterm_at(e: Term, path: Sequence[int]) -> Term:
    for i in path:
        e = children(e)[i]
    return e


def is_lpcf(e: Term) -> bool:
    """True when no monadic construct (val, bind, choice) occurs."""
    for s in subterms(e):
        if isinstance(s, MONADIC_FORMS):
            return False
        if isinstance(s, Fix) and mentions_monad(s.at):
            return False
        if isinstance(s, Lam) and s.binder_type is not None and mentions_monad(s.binder_type):
            return False
    return True


# ---------------------------------------------------------------- variables

def free_var_set(e: Term) -> frozenset:
    cached = e.__dict__.get("_fv")
    if cached is not None:
        return cached
    match e:
        case Var(x):
            fv = frozenset((x,))
        case Lam(x, _, _, body):
            fv = free_var_set(body) - {x}
        case TensorLet(x, y, s, body):
            fv = free_var_set(s) | (free_var_set(body) - {x, y})
        case Bind(x, _, c, body):
            fv = free_var_set(c) | (free_var_set(body) - {x})
        case _:
            fv = frozenset().union(*(free_var_set(c) for c in children(e))) if children(e) else frozenset()
    object.__setattr__(e, "_fv", fv)
    return fv


class FreeVars(NamedTuple):
    all: frozenset
    linear: Optional[frozenset]
    nonlinear: Optional[frozenset]


def free_vars(e: Term, env=None) -> FreeVars:
    """Free variables of ``e``.

    Without a typing environment only ``all`` is known.  With one (anything
    exposing ``gamma`` and ``delta`` mappings) the set is split into linear
    and non-linear variables.
    """
    fv = free_var_set(e)
    if env is None:
        return FreeVars(fv, None, None)
    return FreeVars(fv, frozenset(x for x in fv if x in env.delta),
                    frozenset(x for x in fv if x in env.gamma))


def is_closed(e: Term) -> bool:
    return not free_var_set(e)


def all_names(e: Term) -> set:
    names = set()
    for s in subterms(e):
        match s:
            case Var(x) | Lam(x, _, _, _) | Bind(x, _, _, _):
                names.add(x)
            case TensorLet(x, y, _, _):
                names.update((x, y))
    return names


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    stem = base.rstrip("0123456789'") or "v"
    if stem not in avoid:
        return stem
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


# ---------------------------------------------------------------- substitution

def substitute(e: Term, bindings) -> Term:
    """Simultaneous capture-avoiding substitution ``e[e1/x1, ..., en/xn]``."""
    if isinstance(bindings, Mapping):
        sub = dict(bindings)
    else:
        sub = {}
        for x, v in bindings:
            if x in sub:
                raise ValueError(f"variable {x!r} bound twice in substitution")
            sub[x] = v
    return _subst(e, sub)


def _subst(e: Term, sub: dict) -> Term:
    fv = free_var_set(e)
    sub = {x: v for x, v in sub.items() if x in fv}
    if not sub:
        return e
    match e:
        case Var(x):
            return sub[x]
        case Lam(x, t, lin, body):
            (x2,), body2 = _under(body, (x,), sub)
            return Lam(x2, t, lin, body2)
        case TensorLet(x, y, s, body):
            (x2, y2), body2 = _under(body, (x, y), sub)
            return TensorLet(x2, y2, _subst(s, sub), body2)
        case Bind(x, lin, c, body):
            (x2,), body2 = _under(body, (x,), sub)
            return Bind(x2, lin, _subst(c, sub), body2)
    return with_children(e, [_subst(c, sub) for c in children(e)])


def _under(body: Term, names: tuple, sub: dict):
    inner = {x: v for x, v in sub.items() if x not in names}
    body_fv = free_var_set(body)
    inner = {x: v for x, v in inner.items() if x in body_fv}
    if not inner:
        return names, body
    danger = set().union(*(free_var_set(v) for v in inner.values()))
    new_names = []
    avoid = danger | body_fv | set(inner) | set(names)
    for x in names:
        if x in danger:
            x2 = fresh_name(x, avoid)
            avoid.add(x2)
            inner[x] = Var(x2)
            new_names.append(x2)
        else:
            new_names.append(x)
    return tuple(new_names), _subst(body, inner)


# ---------------------------------------------------------------- alpha-equivalence

def alpha_key(e: Term):
    """Hashable representative of the alpha-equivalence class of ``e``.

    Bound variables become de Bruijn levels; free variables keep their names.
    """
    cached = e.__dict__.get("_akey")
    if cached is not None:
        return cached
    k = _key(e, {}, 0)
    object.__setattr__(e, "_akey", k)
    return k


def _key(e: Term, env: dict, depth: int):
    match e:
        case Var(x):
            return ("b", env[x]) if x in env else ("f", x)
        case Lam(x, t, lin, body):
            return ("lam", t, lin, _key(body, {**env, x: depth}, depth + 1))
        case TensorLet(x, y, s, body):
            return ("let", _key(s, env, depth),
                    _key(body, {**env, x: depth, y: depth + 1}, depth + 2))
        case Bind(x, lin, c, body):
            return ("bind", lin, _key(c, env, depth), _key(body, {**env, x: depth}, depth + 1))
        case NatLit(n):
            return ("nat", n)
        case BoolLit(b):
            return ("bool", b)
        case EqN(n):
            return ("eqn", n)
        case Fix(t):
            return ("fix", t)
        case Proj(i, inner):
            return ("proj", i, _key(inner, env, depth))
    return (type(e).__name__,) + tuple(_key(c, env, depth) for c in children(e))


def alpha_eq(e1: Term, e2: Term) -> bool:
    return e1 is e2 or alpha_key(e1) == alpha_key(e2)


_CANON = [c for c in "abcdefghijklmnopqrstuvw"]


def _canonical_names():
    for c in _CANON:
        yield c
    i = 1
    while True:
        for c in _CANON:
            yield f"{c}{i}"
        i += 1


def alpha_normalize(e: Term) -> Term:
    """Rename every binder to a canonical name determined by its depth.

    Alpha-equivalent terms normalise to structurally equal terms.
    """
    from .grammar import KEYWORDS

    free = free_var_set(e)
    names = []
    gen = _canonical_names()

    def name_at(depth):
        while len(names) <= depth:
            n = next(gen)
            while n in free or n in KEYWORDS:
                n = next(gen)
            names.append(n)
        return names[depth]

    def go(t, env, depth):
        match t:
            case Var(x):
                return Var(env.get(x, x))
            case Lam(x, ty, lin, body):
                n = name_at(depth)
                return Lam(n, ty, lin, go(body, {**env, x: n}, depth + 1))
            case TensorLet(x, y, s, body):
                n1, n2 = name_at(depth), name_at(depth + 1)
                return TensorLet(n1, n2, go(s, env, depth), go(body, {**env, x: n1, y: n2}, depth + 2))
            case Bind(x, lin, c, body):
                n = name_at(depth)
                return Bind(n, lin, go(c, env, depth), go(body, {**env, x: n}, depth + 1))
        kids = children(t)
        if not kids:
            return t
        return with_children(t, [go(c, env, depth) for c in kids])

    return go(e, {}, 0)
