"""Finite argument pools used to instantiate ``@e`` and ``(x)e`` labels.

The default pool for a type is built from the pools of its components:

* ``Nat``: 0, 1; ``Bool``: true, false
* ``A & B`` and ``A (x) B``: pairs of the first ``size_bound`` members of each
  component (the additive pair also gets one divergent component)
* ``T A``: ``val(a)``, ``val(omega)`` and a binary choice
* ``A -> B``: constant functions and, when ``A = B``, the identity
* ``A -o B``: the identity, primitives of that type and strict two-way
  functions ``fn x:A. if c(x) then b1 else b2`` where ``c`` consumes ``x``

Every pool also contains ``omega[A]``.
"""
from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Optional, Tuple

from .actions import TENSOR_VARS
from .errors import ParseError, TypeCheckError
from .syntax import (BOOL, NAT, App, Arrow, Bind, BoolLit, BoolType, Choice, Eq, If, IsZero, Lam,
                     LinArrow, Monad, NatLit, NatType, Pair, Pred, Proj, Succ, TensorIntro,
                     TensorLet, TensorType, Term, TypeExpr, Val, Var, WithType, alpha_key,
                     alpha_normalize, omega)
from .typecheck import TypingEnv, check, check_program

_PRIMITIVES = [(Succ(), LinArrow(NAT, NAT)), (Pred(), LinArrow(NAT, NAT)),
               (IsZero(), LinArrow(NAT, BOOL)), (Eq(), LinArrow(NAT, LinArrow(NAT, BOOL)))]


def _dedup(terms: Iterable[Term]) -> Tuple[Term, ...]:
    seen, out = set(), []
    for t in terms:
        t = alpha_normalize(t)
        k = alpha_key(t)
        if k not in seen:
            seen.add(k)
            out.append(t)
    return tuple(out)


class ArgumentPool:
    def __init__(self, size_bound: int = 2,
                 entries: Optional[Dict[TypeExpr, List[Term]]] = None,
                 tensor_entries: Optional[Dict[Tuple[TypeExpr, TypeExpr], List[Term]]] = None,
                 extra: Optional[Dict[TypeExpr, List[Term]]] = None):
        if size_bound < 1:
            raise ValueError("size_bound must be at least 1")
        self.size_bound = size_bound
        self.entries = {t: _dedup(ts) for t, ts in (entries or {}).items()}
        self.tensor_entries = {k: _dedup(ts) for k, ts in (tensor_entries or {}).items()}
        self.extra = {t: _dedup(ts) for t, ts in (extra or {}).items()}
        self._args: Dict[TypeExpr, Tuple[Term, ...]] = {}
        self._bodies: Dict[Tuple[TypeExpr, TypeExpr], Tuple[Term, ...]] = {}
        self.key = (size_bound,
                    tuple(sorted(((repr(t), tuple(alpha_key(x) for x in ts))
                                  for t, ts in self.entries.items()))),
                    tuple(sorted(((repr(t), tuple(alpha_key(x) for x in ts))
                                  for t, ts in self.tensor_entries.items()))),
                    tuple(sorted(((repr(t), tuple(alpha_key(x) for x in ts))
                                  for t, ts in self.extra.items()))))

    # -- public

    def args(self, t: TypeExpr) -> Tuple[Term, ...]:
        """Closed terms of type ``t`` used as ``@`` arguments."""
        got = self._args.get(t)
        if got is None:
            base = self.entries[t] if t in self.entries else self._default(t)
            got = _dedup(base + self.extra.get(t, ()))
            self._args[t] = got
        return got

    def tensor_bodies(self, left: TypeExpr, right: TypeExpr) -> Tuple[Term, ...]:
        """Bodies with linear free variables ``z1 : left`` and ``z2 : right``."""
        k = (left, right)
        got = self._bodies.get(k)
        if got is None:
            got = self.tensor_entries[k] if k in self.tensor_entries else self._default_bodies(left, right)
            self._bodies[k] = got
        return got

    def extended(self, terms: Iterable[Term]) -> "ArgumentPool":
        """A pool that additionally offers the given closed, well-typed terms."""
        extra = {t: list(ts) for t, ts in self.extra.items()}
        for e in terms:
            try:
                ty = check_program(e)
            except TypeCheckError:
                continue
            extra.setdefault(ty, []).append(e)
        return ArgumentPool(self.size_bound, dict(self.entries), dict(self.tensor_entries), extra)

    def validate(self):
        for t, ts in self.entries.items():
            for e in ts:
                if check_program(e) != t:
                    raise TypeCheckError("pool entry does not have its declared type")
        for (a, b), ts in self.tensor_entries.items():
            env = TypingEnv({}, {TENSOR_VARS[0]: a, TENSOR_VARS[1]: b})
            for e in ts:
                res = check(env, e)
                if res.consumed != frozenset(TENSOR_VARS):
                    raise TypeCheckError("tensor body must use z1 and z2 exactly once")

    # -- defaults

    def _firsts(self, t: TypeExpr) -> List[Term]:
        om = alpha_key(alpha_normalize(omega(t)))
        return [m for m in self.args(t) if alpha_key(m) != om][: self.size_bound]

    def _default(self, t: TypeExpr) -> Tuple[Term, ...]:
        k = self.size_bound
        out: List[Term] = []
        match t:
            case NatType():
                out = [NatLit(i) for i in range(k)]
            case BoolType():
                out = [BoolLit(True), BoolLit(False)][:max(k, 2)]
            case WithType(a, b):
                fa, fb = self._firsts(a), self._firsts(b)
                out = [Pair(x, y) for x in fa for y in fb]
                if fa and fb:
                    out += [Pair(omega(a), fb[0]), Pair(fa[0], omega(b))]
            case TensorType(a, b):
                out = [TensorIntro(x, y) for x in self._firsts(a) for y in self._firsts(b)]
            case Monad(a):
                fa = self._firsts(a)
                out = [Val(x) for x in fa] + [Val(omega(a))]
                if len(fa) >= 2:
                    out.append(Choice(Val(fa[0]), Val(fa[1])))
            case Arrow(a, b):
                if a == b:
                    out.append(Lam("x", a, False, Var("x")))
                out += [Lam("x", a, False, y) for y in self.args(b)]
            case LinArrow(a, b):
                if a == b:
                    out.append(Lam("x", a, True, Var("x")))
                out += [p for p, pt in _PRIMITIVES if pt == t]
                test = self._consumer(a, Var("x"), 0)
                if test is not None:
                    fb = self._firsts(b)
                    out += [Lam("x", a, True, If(test, b1, b2))
                            for b1, b2 in itertools.product(fb, fb)]
                if isinstance(a, Monad) and isinstance(b, Monad):
                    if a.inner == b.inner:
                        out.append(Lam("x", a, True, Bind("y", True, Var("x"), Val(Var("y")))))
                    inner = self._consumer(a.inner, Var("y"), 0)
                    if inner is not None:
                        fb = self._firsts(b)
                        out += [Lam("x", a, True, Bind("y", True, Var("x"), If(inner, m1, m2)))
                                for m1, m2 in itertools.product(fb, fb) if m1 != m2]
        out.append(omega(t))
        return _dedup(out)

    def _consumer(self, t: TypeExpr, x: Term, depth: int) -> Optional[Term]:
        """A Bool-valued term that uses ``x : t`` exactly once, if one exists."""
        match t:
            case NatType():
                return App(IsZero(), x)
            case BoolType():
                return x
            case WithType(a, b):
                inner = self._consumer(a, Proj(1, x), depth)
                if inner is None:
                    inner = self._consumer(b, Proj(2, x), depth)
                return inner
            case TensorType(a, b):
                l, r = f"p{depth}", f"q{depth}"
                ca = self._consumer(a, Var(l), depth + 1)
                cb = self._consumer(b, Var(r), depth + 1)
                if ca is None or cb is None:
                    return None
                return TensorLet(l, r, x, If(ca, cb, cb))
            case Arrow(a, b) | LinArrow(a, b):
                firsts = self._firsts(a)
                if not firsts:
                    return None
                return self._consumer(b, App(x, firsts[0]), depth)
        return None

    def _default_bodies(self, a: TypeExpr, b: TypeExpr) -> Tuple[Term, ...]:
        z1, z2 = Var(TENSOR_VARS[0]), Var(TENSOR_VARS[1])
        out = [TensorIntro(z1, z2), TensorIntro(z2, z1)]
        c2 = self._consumer(b, z2, 0)
        if c2 is not None:
            out.append(If(c2, z1, z1))
        c1 = self._consumer(a, z1, 0)
        if c1 is not None:
            out.append(If(c1, z2, z2))
        out.append(Val(TensorIntro(z1, z2)))
        return _dedup(out)


# ---------------------------------------------------------------- file format

def parse_pool(text: str, size_bound: int = 2) -> ArgumentPool:
    """Read ``type <type> : <term>`` and ``tensor <type> , <type> : <body>`` lines."""
    from .grammar import Parser

    entries: Dict[TypeExpr, List[Term]] = {}
    tensors: Dict[Tuple[TypeExpr, TypeExpr], List[Term]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        word, _, rest = stripped.partition(" ")
        try:
            p = Parser(rest)
            if word == "type":
                ty = p.type_()
                p.expect(":")
                e = p.term()
                p.finish()
                entries.setdefault(ty, []).append(e)
            elif word == "tensor":
                a = p.type_()
                p.expect(",")
                b = p.type_()
                p.expect(":")
                e = p.term()
                p.finish()
                tensors.setdefault((a, b), []).append(e)
            else:
                raise ParseError("pool lines start with 'type' or 'tensor'", 1, 1)
        except ParseError as err:
            raise ParseError(str(err).split(" at line")[0], lineno, err.column) from None
    pool = ArgumentPool(size_bound, entries, tensors)
    pool.validate()
    return pool
