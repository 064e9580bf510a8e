"""Executable versions of the metatheory, checked over generated instances.

Each registered check restates one lemma or theorem as a property and runs
it over an exhaustive sweep of small terms plus ``cfg.count`` random ones.
Checks that approximate an unbounded statement (anything quantifying over all
contexts or all traces) are reported as ``bounded``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from .actions import Trace, is_constant
from .contexts import (LinearContext, _plug_raw, classify_lcr, context_traces,
                       synthesize_s_context)
from .errors import (LinctxError, TypeCheckError, UnclassifiableReduction, Unconstructible,
                     UnknownCheck)
from .generate import NLPCF, Enumerator, GenConfig, RandomGenerator
from .grammar import print_term, print_trace, print_type
from .lts import (TraceEngine, VerdictKind, compare_sets, external_transitions,
                  transition_for)
from .pool import ArgumentPool
from .reduction import explore, is_canonical, step
from .syntax import (NAT, Term, TypeExpr, Val, alpha_eq, alpha_key, free_var_set, is_lpcf,
                     size, subterms)
from .typecheck import TypingEnv, check_linear_context, check_program


@dataclass(frozen=True)
class Bounds:
    fuel: int = 1000
    depth: int = 4
    pool_size: int = 2
    exhaustive_size: int = 5
    context_size: int = 4
    pair_size: int = 4
    pairs: int = 50
    reduction_steps: int = 30
    nontraces: int = 50


@dataclass(frozen=True)
class Failure:
    input: str
    expected: str
    observed: str


@dataclass
class CheckReport:
    name: str
    checked: int = 0
    instances: int = 0
    failures: List[Failure] = field(default_factory=list)
    incomplete: int = 0
    bounded: bool = False

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, input: str, expected: str, observed: str):
        self.failures.append(Failure(input, expected, observed))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


_REGISTRY: Dict[str, Callable[[GenConfig, Bounds], CheckReport]] = {}


def _check(name: str):
    def deco(fn):
        _REGISTRY[name] = fn
        return fn
    return deco


def check_names() -> Tuple[str, ...]:
    return tuple(_REGISTRY)


def run_check(name: str, cfg: Optional[GenConfig] = None,
              bounds: Optional[Bounds] = None) -> CheckReport:
    fn = _REGISTRY.get(name)
    if fn is None:
        raise UnknownCheck(f"unknown check {name!r}; known: {', '.join(_REGISTRY)}")
    return fn(cfg or GenConfig(), bounds or Bounds())


# ---------------------------------------------------------------- instance sources

def _types(cfg: GenConfig) -> Tuple[TypeExpr, ...]:
    return tuple(cfg.type_whitelist)


def exhaustive_programs(cfg: GenConfig, max_size: int) -> Iterator[Tuple[Term, TypeExpr]]:
    en = Enumerator(cfg)
    for ty in _types(cfg):
        for e in en.programs(ty, max_size):
            yield e, ty


def random_programs(cfg: GenConfig, count: int, salt: int = 0) -> Iterator[Tuple[Term, TypeExpr]]:
    rng = random.Random(cfg.seed * 1_000_003 + salt)
    gen = RandomGenerator(cfg, rng)
    types = _types(cfg)
    for _ in range(count):
        ty = rng.choice(types)
        yield gen.term(ty), ty


def exhaustive_pairs(cfg: GenConfig, max_total: int) -> Iterator[Tuple[LinearContext, Term]]:
    """Every (context, program) pair whose plugged term has at most ``max_total`` nodes."""
    en = Enumerator(cfg)
    types = _types(cfg)
    for ht in types:
        progs = [(e, size(e)) for e in en.programs(ht, max_total)]
        for rt in types:
            for body in en.contexts(ht, rt, max_total, hole="h"):
                c = LinearContext(body, "h", ht, rt)
                room = max_total - size(body) + 1
                for e, n in progs:
                    if n <= room:
                        yield c, e


def random_pairs(cfg: GenConfig, count: int, salt: int = 0) -> Iterator[Tuple[LinearContext, Term]]:
    rng = random.Random(cfg.seed * 1_000_003 + salt)
    gen = RandomGenerator(cfg, rng)
    types = _types(cfg)
    made = 0
    while made < count:
        ht, rt = rng.choice(types), rng.choice(types)
        try:
            body = gen.term(rt, lin=frozenset({("h", ht)}))
        except Unconstructible:
            continue
        made += 1
        yield LinearContext(body, "h", ht, rt), gen.term(ht, budget=max(2, cfg.max_size // 2))


def _reachable(e: Term, limit: int) -> Iterator[Tuple[Term, Term]]:
    """(term, successor) edges of the reduction graph, breadth first, up to ``limit`` terms."""
    seen = {alpha_key(e)}
    queue = [e]
    i = 0
    while i < len(queue) and i < limit:
        t = queue[i]
        i += 1
        for t2, _ in step(t):
            yield t, t2
            k = alpha_key(t2)
            if k not in seen:
                seen.add(k)
                queue.append(t2)


def _reachable_terms(e: Term, limit: int) -> List[Term]:
    out, keys = [e], {alpha_key(e)}
    for _, t2 in _reachable(e, limit):
        k = alpha_key(t2)
        if k not in keys:
            keys.add(k)
            out.append(t2)
    return out[:limit]


def _engine(bounds: Bounds, size_bound: Optional[int] = None) -> TraceEngine:
    return TraceEngine(ArgumentPool(size_bound or bounds.pool_size), bounds.fuel)


# ---------------------------------------------------------------- reduction properties

def _closed_instances(cfg, bounds, salt):
    yield from exhaustive_programs(cfg, bounds.exhaustive_size)
    yield from random_programs(cfg, cfg.count, salt)


@_check("subject_reduction")
def check_subject_reduction(cfg: GenConfig, bounds: Bounds) -> CheckReport:
    rep = CheckReport("subject_reduction")
    for e, ty in _closed_instances(cfg, bounds, 1):
        rep.instances += 1
        for t, t2 in _reachable(e, bounds.reduction_steps):
            rep.checked += 1
            try:
                got = check_program(t2)
            except TypeCheckError as err:
                rep.fail(f"{print_term(t)} ~> {print_term(t2)}", print_type(ty), f"ill-typed: {err}")
                continue
            if got != ty:
                rep.fail(f"{print_term(t)} ~> {print_term(t2)}", print_type(ty), print_type(got))
    # open terms: linear contexts keep their type under the hole's assumption
    for c, _ in random_pairs(cfg, cfg.count // 4 + 1, 2):
        rep.instances += 1
        for t, t2 in _reachable(c.body, bounds.reduction_steps):
            rep.checked += 1
            try:
                got = check_linear_context(t2, c.hole, c.holetype)
            except TypeCheckError as err:
                rep.fail(f"{print_term(t)} ~> {print_term(t2)}", print_type(c.result),
                         f"ill-typed: {err}")
                continue
            if got != c.result:
                rep.fail(f"{print_term(t)} ~> {print_term(t2)}", print_type(c.result), print_type(got))
    return rep


@_check("canonical_forms")
def check_canonical_forms(cfg: GenConfig, bounds: Bounds) -> CheckReport:
    rep = CheckReport("canonical_forms")
    for e, _ in _closed_instances(cfg, bounds, 3):
        rep.instances += 1
        for t in _reachable_terms(e, bounds.reduction_steps):
            if step(t):
                continue
            rep.checked += 1
            if not is_canonical(t):
                rep.fail(print_term(t), "canonical", "irreducible non-value")
    return rep


@_check("determinacy")
def check_determinacy(cfg: GenConfig, bounds: Bounds) -> CheckReport:
    """One successor per reducible term; only meaningful without choice."""
    rep = CheckReport("determinacy")
    for e, _ in _closed_instances(cfg, bounds, 4):
        if not is_lpcf(e):
            continue
        rep.instances += 1
        for t in _reachable_terms(e, bounds.reduction_steps):
            succs = step(t)
            if not succs:
                continue
            rep.checked += 1
            if len(succs) != 1:
                rep.fail(print_term(t), "1 successor", f"{len(succs)} successors")
    return rep


@_check("flv_preservation")
def check_flv_preservation(cfg: GenConfig, bounds: Bounds) -> CheckReport:
    rep = CheckReport("flv_preservation")
    rng = random.Random(cfg.seed * 1_000_003 + 5)
    gen = RandomGenerator(cfg, rng)
    types = _types(cfg)
    instances = []
    for _ in range(cfg.count):
        lin = {("l0", rng.choice(types))}
        if rng.random() < 0.3:
            lin.add(("l1", NAT))
        gamma = (("g0", rng.choice(types)),) if rng.random() < 0.5 else ()
        ty = rng.choice(types)
        try:
            instances.append((gen.term(ty, gamma=gamma, lin=frozenset(lin)),
                              TypingEnv(dict(gamma), dict(lin))))
        except LinctxError:
            continue
    for e, env in instances:
        rep.instances += 1
        before = free_var_set(e) & frozenset(env.delta)
        for t, t2 in _reachable(e, bounds.reduction_steps):
            rep.checked += 1
            after = free_var_set(t2) & frozenset(env.delta)
            if after != before:
                rep.fail(f"{print_term(t)} ~> {print_term(t2)}", str(sorted(before)), str(sorted(after)))
    return rep


# ---------------------------------------------------------------- contexts

def _context_pairs(cfg, bounds, salt):
    yield from exhaustive_pairs(cfg, bounds.exhaustive_size)
    yield from random_pairs(cfg, cfg.count, salt)


@_check("lcr_lemma")
def check_lcr_lemma(cfg: GenConfig, bounds: Bounds) -> CheckReport:
    rep = CheckReport("lcr_lemma")
    for c, e in _context_pairs(cfg, bounds, 6):
        rep.instances += 1
        p = _plug_raw(c, e)
        if not step(p):
            continue
        rep.checked += 1
        try:
            classify_lcr(c, e)
        except UnclassifiableReduction as err:
            rep.fail(f"context {print_term(c.body)} with {print_term(e)}", "LCR form", str(err))
    return rep


@_check("transition_lemma")
def check_transition_lemma(cfg: GenConfig, bounds: Bounds) -> CheckReport:
    """External moves of an irreducible plugged term come from the context, or the hole is bare."""
    rep = CheckReport("transition_lemma")
    pool = ArgumentPool(bounds.pool_size)
    for c, e in _context_pairs(cfg, bounds, 7):
        rep.instances += 1
        p = _plug_raw(c, e)
        if step(p):
            continue
        for act, res, _ in external_transitions(p, pool, c.result):
            rep.checked += 1
            if c.is_bare:
                ok = transition_for(e, act) is not None and alpha_eq(transition_for(e, act), res)
            else:
                nxt = transition_for(c.body, act)
                ok = (nxt is not None and c.hole in free_var_set(nxt)
                      and alpha_eq(_plug_raw(LinearContext(nxt, c.hole, c.holetype, c.result), e), res))
            if not ok:
                rep.fail(f"context {print_term(c.body)} with {print_term(e)} --{print_trace((act,))}-->",
                         "context transition with the program untouched", print_term(res))
    return rep


@_check("context_trace")
def check_context_trace(cfg: GenConfig, bounds: Bounds) -> CheckReport:
    """Every context trace extracted from a plugged trace is a trace of the program."""
    rep = CheckReport("context_trace", bounded=True)
    engine = _engine(bounds)
    small = Bounds(**{**asdict(bounds), "exhaustive_size": min(bounds.exhaustive_size, 5)})
    pairs = itertools.chain(exhaustive_pairs(cfg, small.exhaustive_size),
                            random_pairs(cfg, cfg.count // 4 + 1, 8))
    for c, e in pairs:
        rep.instances += 1
        p = _plug_raw(c, e)
        ts = engine.traces(p, bounds.depth, c.result)
        for s in sorted(ts.traces, key=len):
            rep.checked += 1
            found = context_traces(c, e, s, min(bounds.fuel, 200), engine)
            if not found:
                if ts.may_miss(s) or not ts.complete:
                    rep.incomplete += 1
                else:
                    rep.fail(f"context {print_term(c.body)} with {print_term(e)}, trace {print_trace(s)}",
                             "a witness", "none found")
                continue
            for t in found:
                if not engine.has_trace(e, t):
                    rep.fail(f"context {print_term(c.body)} with {print_term(e)}, trace {print_trace(s)}",
                             f"program takes {print_trace(t)}", "it does not")
    return rep


# ---------------------------------------------------------------- pairs of programs

@dataclass(frozen=True)
class _Classified:
    term: Term
    type: TypeExpr
    key: frozenset


def _classify_programs(cfg: GenConfig, bounds: Bounds, engine: TraceEngine) -> List[_Classified]:
    out = []
    for e, ty in exhaustive_programs(cfg, bounds.pair_size):
        ts = engine.traces(e, bounds.depth, ty)
        if ts.complete:
            out.append(_Classified(e, ty, ts.traces))
    return out


def _equivalent_pairs(items: List[_Classified], n: int, rng: random.Random):
    groups: Dict = {}
    for it in items:
        groups.setdefault((it.type, it.key), []).append(it)
    pairs = [(a, b) for g in groups.values() for a, b in itertools.combinations(g, 2)]
    rng.shuffle(pairs)
    return _spread(pairs, n)


def _inequivalent_pairs(items: List[_Classified], n: int, rng: random.Random):
    by_type: Dict = {}
    for it in items:
        by_type.setdefault(it.type, []).append(it)
    pairs = []
    types = sorted(by_type, key=repr)
    attempts = 0
    while len(pairs) < n and attempts < 50 * n:
        attempts += 1
        ty = rng.choice(types)
        a, b = rng.choice(by_type[ty]), rng.choice(by_type[ty])
        if a.key != b.key:
            pairs.append((a, b))
    return pairs


def _spread(pairs, n):
    """Take up to ``n`` pairs, round-robin over types so no type dominates."""
    by_type: Dict = {}
    for p in pairs:
        by_type.setdefault(p[0].type, []).append(p)
    out = []
    queues = [by_type[t] for t in sorted(by_type, key=repr)]
    while len(out) < n and any(queues):
        for q in queues:
            if q and len(out) < n:
                out.append(q.pop())
    return out


def _converges(e: Term, fuel: int) -> Optional[bool]:
    """True/False for convergence, None if the fuel ran out without a verdict."""
    ex = explore(e, fuel, stop_at_first=True)
    if ex.normal_forms:
        return True
    if ex.timed_out and not ex.cycle_detected:
        return None
    return False


def _closed_parts(c: LinearContext) -> List[Term]:
    return [t for t in subterms(c.body) if not free_var_set(t)]


def _still_equivalent(e1, e2, c, bounds, leq_only=False) -> bool:
    """Recheck a pair with the context's closed subterms in the pool and more depth."""
    pool = ArgumentPool(bounds.pool_size).extended(_closed_parts(c))
    engine = TraceEngine(pool, bounds.fuel)
    depth = bounds.depth + size(c.body)
    ty = check_program(e1)
    t1, t2 = engine.traces(e1, depth, ty), engine.traces(e2, depth, ty)
    fwd = compare_sets(t1, t2)
    if leq_only:
        return fwd.kind is not VerdictKind.Counterexample
    return VerdictKind.Counterexample not in (fwd.kind, compare_sets(t2, t1).kind)


@_check("precongruence")
def check_precongruence(cfg: GenConfig, bounds: Bounds) -> CheckReport:
    rep = CheckReport("precongruence", bounded=True)
    rng = random.Random(cfg.seed * 1_000_003 + 9)
    engine = _engine(bounds)
    items = _classify_programs(cfg, bounds, engine)
    by_type: Dict = {}
    for it in items:
        by_type.setdefault(it.type, []).append(it)
    leq = []
    for ty in sorted(by_type, key=repr):
        group = by_type[ty]
        for a, b in itertools.product(group, group):
            if a is not b and a.key <= b.key:
                leq.append((a, b))
    rng.shuffle(leq)
    leq = _spread(leq, bounds.pairs)
    gen = RandomGenerator(cfg, rng)
    types = _types(cfg)
    for a, b in leq:
        rt = rng.choice(types)
        try:
            body = gen.term(rt, budget=bounds.context_size, lin=frozenset({("h", a.type)}))
        except LinctxError:
            continue
        c = LinearContext(body, "h", a.type, rt)
        rep.instances += 1
        p1, p2 = _plug_raw(c, a.term), _plug_raw(c, b.term)
        t1, t2 = engine.traces(p1, bounds.depth, rt), engine.traces(p2, bounds.depth, rt)
        v = compare_sets(t1, t2)
        rep.checked += 1
        if v.kind is VerdictKind.Incomplete:
            rep.incomplete += 1
        elif v.kind is VerdictKind.Counterexample:
            if _still_equivalent(a.term, b.term, c, bounds, leq_only=True):
                rep.fail(f"{print_term(a.term)} <= {print_term(b.term)} under {print_term(body)}",
                         "plugged terms ordered", f"missing trace {print_trace(v.trace)}")
            else:
                rep.incomplete += 1
    return rep


@_check("soundness")
def check_soundness(cfg: GenConfig, bounds: Bounds) -> CheckReport:
    """Trace-equivalent pairs are not separated by any enumerated linear context."""
    rep = CheckReport("soundness", bounded=True)
    rng = random.Random(cfg.seed * 1_000_003 + 10)
    engine = _engine(bounds)
    pairs = _equivalent_pairs(_classify_programs(cfg, bounds, engine), bounds.pairs, rng)
    en = Enumerator(cfg)
    ctx_cache: Dict = {}
    conv: Dict = {}
    for a, b in pairs:
        rep.instances += 1
        ctxs = ctx_cache.get(a.type)
        if ctxs is None:
            ctxs = [LinearContext(body, "h", a.type, rt) for rt in _types(cfg)
                    for body in en.contexts(a.type, rt, bounds.context_size, hole="h")]
            ctx_cache[a.type] = ctxs
        for c in ctxs:
            rep.checked += 1
            r = []
            for e in (a.term, b.term):
                k = (alpha_key(c.body), alpha_key(e))
                if k not in conv:
                    conv[k] = _converges(_plug_raw(c, e), bounds.fuel)
                r.append(conv[k])
            if None in r:
                rep.incomplete += 1
            elif r[0] != r[1]:
                if _still_equivalent(a.term, b.term, c, bounds):
                    rep.fail(f"{print_term(a.term)} vs {print_term(b.term)} under {print_term(c.body)}",
                             "same convergence", f"{r[0]} vs {r[1]}")
                else:
                    rep.incomplete += 1
    return rep


def separating_context(s: Trace, holetype: TypeExpr) -> LinearContext:
    """The context used to separate a program with trace ``s`` from one without it.

    A computational ``s`` is recognised by its own s-context; otherwise the
    last action is dropped and the s-context of the prefix is used, which
    converges exactly when some residual after the prefix converges.
    """
    s = tuple(s)
    if s and is_constant(s[-1]):
        return synthesize_s_context(s, holetype)
    return synthesize_s_context(s[:-1], holetype)


@_check("completeness")
def check_completeness(cfg: GenConfig, bounds: Bounds) -> CheckReport:
    """Counterexample traces of inequivalent pairs yield separating s-contexts."""
    rep = CheckReport("completeness", bounded=True)
    rng = random.Random(cfg.seed * 1_000_003 + 11)
    engine = _engine(bounds)
    items = _classify_programs(cfg, bounds, engine)
    for a, b in _inequivalent_pairs(items, bounds.pairs, rng):
        rep.instances += 1
        ta = engine.traces(a.term, bounds.depth, a.type)
        tb = engine.traces(b.term, bounds.depth, b.type)
        v = compare_sets(ta, tb)
        first, second = a, b
        if v.kind is not VerdictKind.Counterexample:
            v = compare_sets(tb, ta)
            first, second = b, a
        if v.kind is not VerdictKind.Counterexample:
            rep.incomplete += 1
            continue
        rep.checked += 1
        c = separating_context(v.trace, a.type)
        r1 = _converges(_plug_raw(c, first.term), bounds.fuel)
        r2 = _converges(_plug_raw(c, second.term), bounds.fuel)
        if r1 is None or r2 is None:
            rep.incomplete += 1
        elif not (r1 and not r2):
            rep.fail(f"{print_term(first.term)} vs {print_term(second.term)}, trace {print_trace(v.trace)}",
                     "True vs False", f"{r1} vs {r2}")
    return rep


# ---------------------------------------------------------------- s-contexts

def _nlpcf(cfg: GenConfig) -> GenConfig:
    if cfg.fragment == NLPCF:
        return cfg
    return GenConfig(cfg.seed, cfg.max_size, cfg.type_whitelist, NLPCF, cfg.nat_literals,
                     cfg.redex_bias, cfg.count, cfg.max_type_size)


@_check("s_context_forward")
def check_s_context_forward(cfg: GenConfig, bounds: Bounds) -> CheckReport:
    """A computational trace of a program makes its s-context converge."""
    rep = CheckReport("s_context_forward", bounded=True)
    engine = _engine(bounds)
    for e, ty in exhaustive_programs(_nlpcf(cfg), bounds.exhaustive_size):
        rep.instances += 1
        ts = engine.traces(e, bounds.depth, ty)
        for s in sorted(ts.traces, key=len):
            if not s or not is_constant(s[-1]):
                continue
            rep.checked += 1
            r = _converges(_plug_raw(synthesize_s_context(s, ty), e), bounds.fuel)
            if r is None:
                rep.incomplete += 1
            elif not r:
                rep.fail(f"{print_term(e)} with {print_trace(s)}", "converges", "diverges")
    return rep


def _trace_universe(items, ty) -> List[Trace]:
    """Computational traces seen for programs of type ``ty``, plus perturbed copies."""
    from .actions import ConstBool, ConstNat
    out = set()
    for e, t, ts in items:
        if t != ty:
            continue
        for s in ts.traces:
            if s and is_constant(s[-1]):
                out.add(s)
                last = s[-1]
                if isinstance(last, ConstNat):
                    out.add(s[:-1] + (ConstNat(last.n + 1),))
                elif isinstance(last, ConstBool):
                    out.add(s[:-1] + (ConstBool(not last.b),))
    from .lts import _trace_order
    return sorted(out, key=_trace_order)


@_check("s_context_backward")
def check_s_context_backward(cfg: GenConfig, bounds: Bounds) -> CheckReport:
    """An s-context converges only on programs that take ``s``."""
    rep = CheckReport("s_context_backward", bounded=True)
    rng = random.Random(cfg.seed * 1_000_003 + 12)
    engine = _engine(bounds)
    items = [(e, ty, engine.traces(e, bounds.depth, ty))
             for e, ty in exhaustive_programs(_nlpcf(cfg), bounds.exhaustive_size)]
    rep.instances = len(items)
    universes = {ty: _trace_universe(items, ty) for ty in _types(_nlpcf(cfg))}
    candidates = []
    for e, ty, ts in items:
        for s in universes[ty]:
            if s not in ts.traces and not ts.may_miss(s):
                candidates.append((e, ty, s))
    rng.shuffle(candidates)
    for e, ty, s in candidates[: bounds.nontraces]:
        rep.checked += 1
        r = _converges(_plug_raw(synthesize_s_context(s, ty), e), bounds.fuel)
        if r is None:
            rep.incomplete += 1
        elif r:
            rep.fail(f"{print_term(e)} with non-trace {print_trace(s)}", "no value", "converges")
    # and the positive reading: convergence implies the trace is present
    for e, ty, ts in items[: cfg.count]:
        for s in universes[ty][:20]:
            if _converges(_plug_raw(synthesize_s_context(s, ty), e), bounds.fuel) and s not in ts.traces:
                rep.checked += 1
                if not ts.may_miss(s):
                    rep.fail(f"{print_term(e)} with {print_trace(s)}", "trace present", "absent")
                else:
                    rep.incomplete += 1
    return rep


@_check("s_context_noncomputational")
def check_s_context_noncomputational(cfg: GenConfig, bounds: Bounds) -> CheckReport:
    """For ``s`` followed by a non-constant action, the s-context yields exactly val of the residuals."""
    rep = CheckReport("s_context_noncomputational", bounded=True)
    engine = _engine(bounds)
    for e, ty in exhaustive_programs(_nlpcf(cfg), bounds.exhaustive_size):
        rep.instances += 1
        ts = engine.traces(e, bounds.depth, ty)
        prefixes = {s[:-1] for s in ts.traces if s and not is_constant(s[-1])}
        for s in sorted(prefixes, key=len):
            rep.checked += 1
            ex = explore(_plug_raw(synthesize_s_context(s, ty), e), bounds.fuel)
            got = {alpha_key(v.inner) for v in ex.normal_forms if isinstance(v, Val)}
            want = {alpha_key(r) for r in engine.residuals(e, s)}
            if got != want:
                if ex.timed_out and not ex.cycle_detected and got <= want:
                    rep.incomplete += 1
                else:
                    rep.fail(f"{print_term(e)} with {print_trace(s)}",
                             f"{len(want)} residuals", f"{len(got)} val outcomes")
    return rep
