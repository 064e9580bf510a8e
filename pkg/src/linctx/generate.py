"""Type-directed term generators: exhaustive enumeration and random sampling.

Both generators follow the typing rules backwards.  Linear variables are
carried as obligations that the generated term must discharge exactly once;
the rules that split the linear environment (application, tensor, letpair,
linear bind, the condition of ``if``) distribute obligations between premises
and the rules that share it (pairs, branches, choice arms) copy them.

Binder types and intermediate types are drawn from a finite whitelist.
"""
from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from .errors import Unconstructible
from .syntax import (BOOL, NAT, App, Arrow, Bind, BoolLit, Choice, Eq, Fix, If, IsZero, Lam,
                     LinArrow, Monad, NatLit, Pair, Pred, Proj, Succ, TensorIntro, TensorLet,
                     TensorType, Term, TypeExpr, Val, Var, WithType, mentions_monad)

LPCF = "LPCF"
NLPCF = "NLPCF"

LPCF_TYPES = (NAT, BOOL, LinArrow(NAT, NAT), Arrow(NAT, NAT))
NLPCF_TYPES = LPCF_TYPES + (Monad(NAT), Arrow(NAT, Monad(NAT)))


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_size: int = 12
    type_whitelist: Tuple[TypeExpr, ...] = NLPCF_TYPES
    fragment: str = NLPCF
    nat_literals: Tuple[int, ...] = (0, 1)
    redex_bias: float = 0.3
    count: int = 500
    max_type_size: int = 7

    def __post_init__(self):
        if self.max_size < 1:
            raise ValueError("max_size must be at least 1")
        if self.fragment not in (LPCF, NLPCF):
            raise ValueError(f"unknown fragment {self.fragment!r}")
        wl = tuple(self.type_whitelist)
        if self.fragment == LPCF:
            wl = tuple(t for t in wl if not mentions_monad(t))
        object.__setattr__(self, "type_whitelist", wl)

    @property
    def monadic(self) -> bool:
        return self.fragment == NLPCF


Lin = FrozenSet[Tuple[str, TypeExpr]]
Gamma = Tuple[Tuple[str, TypeExpr], ...]


def type_size(t: TypeExpr) -> int:
    match t:
        case LinArrow(a, b) | Arrow(a, b) | WithType(a, b) | TensorType(a, b):
            return 1 + type_size(a) + type_size(b)
        case Monad(a):
            return 1 + type_size(a)
    return 1


def _fresh_var(gamma: Gamma, lin: Lin, taken: Tuple[str, ...] = ()) -> str:
    used = {x for x, _ in gamma} | {x for x, _ in lin} | set(taken)
    i = 0
    while f"v{i}" in used:
        i += 1
    return f"v{i}"


def _splits(lin: Lin) -> Iterator[Tuple[Lin, Lin]]:
    items = sorted(lin, key=repr)
    for mask in range(1 << len(items)):
        left = frozenset(x for i, x in enumerate(items) if mask >> i & 1)
        yield left, lin - left


def _compositions(total: int, parts: int, minimum: int = 1) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        if total >= minimum:
            yield (total,)
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def _constants(ty: TypeExpr, cfg: GenConfig) -> List[Term]:
    out: List[Term] = []
    if ty == NAT:
        out += [NatLit(n) for n in cfg.nat_literals]
    if ty == BOOL:
        out += [BoolLit(True), BoolLit(False)]
    if ty == LinArrow(NAT, NAT):
        out += [Succ(), Pred()]
    if ty == LinArrow(NAT, BOOL):
        out.append(IsZero())
    if ty == LinArrow(NAT, LinArrow(NAT, BOOL)):
        out.append(Eq())
    if isinstance(ty, Arrow) and isinstance(ty.dom, Arrow) and ty.dom.dom == ty.dom.cod == ty.cod:
        out.append(Fix(ty.cod))
    return out


# ---------------------------------------------------------------- exhaustive

class Enumerator:
    """All well-typed terms of a given type and exact size, over the whitelist."""

    def __init__(self, cfg: GenConfig = GenConfig()):
        self.cfg = cfg
        self.types = tuple(cfg.type_whitelist)
        self._memo: Dict = {}

    def _doms(self, ty: TypeExpr) -> List[TypeExpr]:
        doms = list(self.types)
        fix_dom = Arrow(ty, ty)
        if fix_dom not in doms:
            doms.append(fix_dom)
        return doms

    def _ok(self, ty: TypeExpr) -> bool:
        return type_size(ty) <= self.cfg.max_type_size

    def _heads(self, head: Arrow, n: int, gamma: Gamma, lin: Lin) -> Tuple[Term, ...]:
        if self._ok(head):
            return self.terms(head, n, gamma, lin)
        # Past the type-size cap only the fixpoint constant itself is offered.
        if n == 1 and not lin and head.dom == Arrow(head.cod, head.cod):
            return (Fix(head.cod),)
        return ()

    def terms(self, ty: TypeExpr, n: int, gamma: Gamma = (), lin: Lin = frozenset()) -> Tuple[Term, ...]:
        if n < max(1, len(lin)):
            return ()
        key = (ty, n, gamma, lin)
        got = self._memo.get(key)
        if got is None:
            got = tuple(self._terms(ty, n, gamma, lin))
            self._memo[key] = got
        return got

    def _terms(self, ty, n, gamma, lin):
        cfg = self.cfg
        if n == 1:
            if not lin:
                yield from (Var(x) for x, t in gamma if t == ty)
                yield from _constants(ty, cfg)
            elif len(lin) == 1:
                (x, t), = lin
                if t == ty:
                    yield Var(x)
            return
        v = _fresh_var(gamma, lin)
        sub = n - 1
        # introduction forms
        if isinstance(ty, LinArrow):
            for body in self.terms(ty.cod, sub, gamma, lin | {(v, ty.dom)}):
                yield Lam(v, ty.dom, True, body)
        if isinstance(ty, Arrow):
            g2 = tuple(sorted(gamma + ((v, ty.dom),), key=repr))
            for body in self.terms(ty.cod, sub, g2, lin):
                yield Lam(v, ty.dom, False, body)
        if isinstance(ty, WithType):
            for i, j in _compositions(sub, 2):
                for a in self.terms(ty.left, i, gamma, lin):
                    for b in self.terms(ty.right, j, gamma, lin):
                        yield Pair(a, b)
        if isinstance(ty, TensorType):
            for i, j in _compositions(sub, 2):
                for l1, l2 in _splits(lin):
                    for a in self.terms(ty.left, i, gamma, l1):
                        for b in self.terms(ty.right, j, gamma, l2):
                            yield TensorIntro(a, b)
        if isinstance(ty, Monad) and cfg.monadic:
            for a in self.terms(ty.inner, sub, gamma, lin):
                yield Val(a)
            for i, j in _compositions(sub, 2):
                for a in self.terms(ty, i, gamma, lin):
                    for b in self.terms(ty, j, gamma, lin):
                        yield Choice(a, b)
        # elimination forms
        for i, j in _compositions(sub, 2):
            for dom in self._doms(ty):
                for head in (LinArrow(dom, ty), Arrow(dom, ty)):
                    if isinstance(head, LinArrow):
                        if not self._ok(head):
                            continue
                        for l1, l2 in _splits(lin):
                            fs = self.terms(head, i, gamma, l1)
                            if fs:
                                args = self.terms(dom, j, gamma, l2)
                                for f in fs:
                                    for a in args:
                                        yield App(f, a)
                    else:
                        fs = self._heads(head, i, gamma, lin)
                        if fs:
                            args = self.terms(dom, j, gamma, frozenset())
                            for f in fs:
                                for a in args:
                                    yield App(f, a)
        for i, j, k in _compositions(sub, 3):
            for l1, l2 in _splits(lin):
                conds = self.terms(BOOL, i, gamma, l1)
                if not conds:
                    continue
                thens = self.terms(ty, j, gamma, l2)
                if not thens:
                    continue
                elses = self.terms(ty, k, gamma, l2)
                for c in conds:
                    for a in thens:
                        for b in elses:
                            yield If(c, a, b)
        for other in self.types:
            for idx, pty in ((1, WithType(ty, other)), (2, WithType(other, ty))):
                if self._ok(pty):
                    for p in self.terms(pty, sub, gamma, lin):
                        yield Proj(idx, p)
        x = v
        y = _fresh_var(gamma, lin, (x,))
        for i, j in _compositions(sub, 2):
            for a, b in itertools.product(self.types, repeat=2):
                if not self._ok(TensorType(a, b)):
                    continue
                for l1, l2 in _splits(lin):
                    scr = self.terms(TensorType(a, b), i, gamma, l1)
                    if not scr:
                        continue
                    for body in self.terms(ty, j, gamma, l2 | {(x, a), (y, b)}):
                        for s in scr:
                            yield TensorLet(x, y, s, body)
        if isinstance(ty, Monad) and cfg.monadic:
            for i, j in _compositions(sub, 2):
                for a in self.types:
                    ma = Monad(a)
                    for l1, l2 in _splits(lin):
                        comps = self.terms(ma, i, gamma, l1)
                        if not comps:
                            continue
                        for body in self.terms(ty, j, gamma, l2 | {(v, a)}):
                            for c in comps:
                                yield Bind(v, True, c, body)
                    comps = self.terms(ma, i, gamma, frozenset())
                    if comps:
                        g2 = tuple(sorted(gamma + ((v, a),), key=repr))
                        for body in self.terms(ty, j, g2, lin):
                            for c in comps:
                                yield Bind(v, False, c, body)

    def programs(self, ty: TypeExpr, max_size: int, min_size: int = 1) -> Iterator[Term]:
        for n in range(min_size, max_size + 1):
            yield from self.terms(ty, n)

    def contexts(self, holetype: TypeExpr, result: TypeExpr, max_size: int,
                 hole: str = "x") -> Iterator[Term]:
        for n in range(1, max_size + 1):
            yield from self.terms(result, n, (), frozenset({(hole, holetype)}))


# ---------------------------------------------------------------- random

class RandomGenerator:
    """Random type-directed generation with retries, deterministic per seed."""

    def __init__(self, cfg: GenConfig = GenConfig(), rng: Optional[random.Random] = None):
        self.cfg = cfg
        self.rng = rng or random.Random(cfg.seed)
        self.types = tuple(cfg.type_whitelist)
        self._enum: Optional[Enumerator] = None

    def term(self, ty: TypeExpr, budget: Optional[int] = None, gamma: Gamma = (),
             lin: Lin = frozenset(), tries: int = 60) -> Term:
        budget = budget or self.cfg.max_size
        for _ in range(tries):
            self._work = 0
            t = self._gen(ty, budget, gamma, lin, 0)
            if t is not None:
                return t
        # Fall back to the smallest enumerated inhabitant, if any.
        if self._enum is None:
            self._enum = _shared_enumerator(self.cfg)
        for n in range(1, min(budget, _FALLBACK_SIZE) + 1):
            found = self._enum.terms(ty, n, gamma, lin)
            if found:
                return self.rng.choice(found)
        from .grammar import print_type
        raise Unconstructible(f"no term of type {print_type(ty)} within size {budget}")

    def _gen(self, ty, budget, gamma, lin, depth) -> Optional[Term]:
        self._work += 1
        if budget < max(1, len(lin)) or self._work > _WORK_LIMIT:
            return None
        options = self._leaves(ty, gamma, lin)
        if budget == 1 or (options and self.rng.random() < 0.25):
            return self.rng.choice(options) if options else None
        rules = self._rules(ty, lin)
        self.rng.shuffle(rules)
        if self.rng.random() < self.cfg.redex_bias:
            rules.sort(key=lambda r: r not in _REDEX_RULES)
        for rule in rules[:4]:
            t = getattr(self, "_r_" + rule)(ty, budget - 1, gamma, lin, depth)
            if t is not None:
                return t
        return self.rng.choice(options) if options else None

    def _leaves(self, ty, gamma, lin) -> List[Term]:
        if not lin:
            return [Var(x) for x, t in gamma if t == ty] + _constants(ty, self.cfg)
        if len(lin) == 1:
            (x, t), = lin
            if t == ty:
                return [Var(x)]
        return []

    def _rules(self, ty, lin) -> List[str]:
        rules = ["app", "if", "proj", "beta", "letpair", "prim"]
        if isinstance(ty, (LinArrow, Arrow)):
            rules += ["lam", "lam"]
        if isinstance(ty, WithType):
            rules += ["pair", "pair"]
        if isinstance(ty, TensorType):
            rules += ["tensor", "tensor"]
        if isinstance(ty, Monad) and self.cfg.monadic:
            rules += ["val", "val", "bind", "bindval", "choice"]
        if not lin:
            rules.append("fix")
        return rules

    def _split_budget(self, budget, parts) -> Optional[Tuple[int, ...]]:
        if budget < parts:
            return None
        cuts = sorted(self.rng.sample(range(1, budget), parts - 1)) if parts > 1 else []
        bounds = [0] + cuts + [budget]
        return tuple(bounds[i + 1] - bounds[i] for i in range(parts))

    def _split_lin(self, lin) -> Tuple[Lin, Lin]:
        left = frozenset(x for x in lin if self.rng.random() < 0.5)
        return left, lin - left

    def _fresh(self, depth):
        return f"v{depth}"

    # each rule receives the budget left after its own node

    def _r_lam(self, ty, b, gamma, lin, d):
        v = self._fresh(d)
        if isinstance(ty, LinArrow):
            body = self._gen(ty.cod, b, gamma, lin | {(v, ty.dom)}, d + 1)
            return None if body is None else Lam(v, ty.dom, True, body)
        if isinstance(ty, Arrow):
            body = self._gen(ty.cod, b, gamma + ((v, ty.dom),), lin, d + 1)
            return None if body is None else Lam(v, ty.dom, False, body)
        return None

    def _r_pair(self, ty, b, gamma, lin, d):
        sizes = self._split_budget(b, 2)
        if sizes is None:
            return None
        l = self._gen(ty.left, sizes[0], gamma, lin, d)
        if l is None:
            return None
        r = self._gen(ty.right, sizes[1], gamma, lin, d)
        return None if r is None else Pair(l, r)

    def _r_tensor(self, ty, b, gamma, lin, d):
        sizes = self._split_budget(b, 2)
        if sizes is None:
            return None
        l1, l2 = self._split_lin(lin)
        l = self._gen(ty.left, sizes[0], gamma, l1, d)
        if l is None:
            return None
        r = self._gen(ty.right, sizes[1], gamma, l2, d)
        return None if r is None else TensorIntro(l, r)

    def _r_val(self, ty, b, gamma, lin, d):
        a = self._gen(ty.inner, b, gamma, lin, d)
        return None if a is None else Val(a)

    def _r_choice(self, ty, b, gamma, lin, d):
        sizes = self._split_budget(b, 2)
        if sizes is None:
            return None
        l = self._gen(ty, sizes[0], gamma, lin, d)
        if l is None:
            return None
        r = self._gen(ty, sizes[1], gamma, lin, d)
        return None if r is None else Choice(l, r)

    def _r_app(self, ty, b, gamma, lin, d):
        sizes = self._split_budget(b, 2)
        if sizes is None:
            return None
        dom = self.rng.choice(self.types)
        if self.rng.random() < 0.6:
            l1, l2 = self._split_lin(lin)
            f = self._gen(LinArrow(dom, ty), sizes[0], gamma, l1, d)
            if f is None:
                return None
            a = self._gen(dom, sizes[1], gamma, l2, d)
        else:
            f = self._gen(Arrow(dom, ty), sizes[0], gamma, lin, d)
            if f is None:
                return None
            a = self._gen(dom, sizes[1], gamma, frozenset(), d)
        return None if a is None else App(f, a)

    def _r_prim(self, ty, b, gamma, lin, d):
        if ty == NAT:
            f = self.rng.choice([Succ(), Pred()])
            a = self._gen(NAT, b - 1, gamma, lin, d)
            return None if a is None else App(f, a)
        if ty == BOOL:
            if self.rng.random() < 0.5:
                a = self._gen(NAT, b - 1, gamma, lin, d)
                return None if a is None else App(IsZero(), a)
            sizes = self._split_budget(b - 2, 2)
            if sizes is None:
                return None
            l1, l2 = self._split_lin(lin)
            x = self._gen(NAT, sizes[0], gamma, l1, d)
            if x is None:
                return None
            y = self._gen(NAT, sizes[1], gamma, l2, d)
            return None if y is None else App(App(Eq(), x), y)
        return None

    def _r_fix(self, ty, b, gamma, lin, d):
        v = self._fresh(d)
        body = self._gen(ty, b - 2, gamma + ((v, ty),), frozenset(), d + 1)
        return None if body is None else App(Fix(ty), Lam(v, ty, False, body))

    def _r_if(self, ty, b, gamma, lin, d):
        sizes = self._split_budget(b, 3)
        if sizes is None:
            return None
        l1, l2 = self._split_lin(lin)
        c = self._gen(BOOL, sizes[0], gamma, l1, d)
        if c is None:
            return None
        x = self._gen(ty, sizes[1], gamma, l2, d)
        if x is None:
            return None
        y = self._gen(ty, sizes[2], gamma, l2, d)
        return None if y is None else If(c, x, y)

    def _r_proj(self, ty, b, gamma, lin, d):
        other = self.rng.choice(self.types)
        i = self.rng.choice((1, 2))
        pty = WithType(ty, other) if i == 1 else WithType(other, ty)
        p = self._gen(pty, b, gamma, lin, d)
        return None if p is None else Proj(i, p)

    def _r_letpair(self, ty, b, gamma, lin, d):
        sizes = self._split_budget(b, 2)
        if sizes is None:
            return None
        a, c = self.rng.choice(self.types), self.rng.choice(self.types)
        l1, l2 = self._split_lin(lin)
        s = self._gen(TensorType(a, c), sizes[0], gamma, l1, d)
        if s is None:
            return None
        x, y = f"v{d}", f"v{d + 1}"
        body = self._gen(ty, sizes[1], gamma, l2 | {(x, a), (y, c)}, d + 2)
        return None if body is None else TensorLet(x, y, s, body)

    def _r_bind(self, ty, b, gamma, lin, d, comp_rule=None):
        sizes = self._split_budget(b, 2)
        if sizes is None:
            return None
        a = self.rng.choice(self.types)
        v = self._fresh(d)
        if self.rng.random() < 0.6:
            l1, l2 = self._split_lin(lin)
            c = (comp_rule or self._gen)(Monad(a), sizes[0], gamma, l1, d)
            if c is None:
                return None
            body = self._gen(ty, sizes[1], gamma, l2 | {(v, a)}, d + 1)
            return None if body is None else Bind(v, True, c, body)
        c = (comp_rule or self._gen)(Monad(a), sizes[0], gamma, frozenset(), d)
        if c is None:
            return None
        body = self._gen(ty, sizes[1], gamma + ((v, a),), lin, d + 1)
        return None if body is None else Bind(v, False, c, body)

    # redex-shaped productions

    def _r_beta(self, ty, b, gamma, lin, d):
        sizes = self._split_budget(b - 1, 2)
        if sizes is None:
            return None
        dom = self.rng.choice(self.types)
        v = self._fresh(d)
        l1, l2 = self._split_lin(lin)
        if self.rng.random() < 0.6:
            body = self._gen(ty, sizes[0], gamma, l1 | {(v, dom)}, d + 1)
            if body is None:
                return None
            a = self._gen(dom, sizes[1], gamma, l2, d)
            return None if a is None else App(Lam(v, dom, True, body), a)
        body = self._gen(ty, sizes[0], gamma + ((v, dom),), lin, d + 1)
        if body is None:
            return None
        a = self._gen(dom, sizes[1], gamma, frozenset(), d)
        return None if a is None else App(Lam(v, dom, False, body), a)

    def _r_bindval(self, ty, b, gamma, lin, d):
        def valgen(mty, size, g, l, dd):
            a = self._gen(mty.inner, size - 1, g, l, dd)
            return None if a is None else Val(a)
        return self._r_bind(ty, b, gamma, lin, d, comp_rule=valgen)


_WORK_LIMIT = 400


@functools.lru_cache(maxsize=8)
def _shared_enumerator(cfg: GenConfig) -> Enumerator:
    # The enumerator ignores seed and count, so configurations differing only
    # in those share one memo table.  A tighter type cap keeps the fallback cheap.
    return Enumerator(replace(cfg, seed=0, count=0, max_size=1, redex_bias=0.0,
                              max_type_size=min(cfg.max_type_size, 5)))
_FALLBACK_SIZE = 5
_REDEX_RULES = {"beta", "prim", "bindval", "choice", "fix", "proj", "letpair"}


def gen_typed_term(cfg: GenConfig, target: TypeExpr, rng: Optional[random.Random] = None) -> Term:
    """A closed well-typed term of type ``target`` with at most ``cfg.max_size`` nodes."""
    return RandomGenerator(cfg, rng).term(target)


def gen_linear_context(cfg: GenConfig, holetype: TypeExpr, result: Optional[TypeExpr] = None,
                       hole: str = "x", rng: Optional[random.Random] = None):
    """A random linear context with the hole as its only free variable."""
    from .contexts import LinearContext
    g = RandomGenerator(cfg, rng)
    if result is None:
        result = g.rng.choice(g.types)
    body = g.term(result, lin=frozenset({(hole, holetype)}))
    return LinearContext.make(body, hole, holetype)
