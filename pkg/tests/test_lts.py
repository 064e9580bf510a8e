import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as O
from conftest import typed_terms
from linctx.actions import AppArg, ConstBool, ConstNat, ProjAct, TAct, TensorAct
from linctx.errors import NotIrreducible, TraceNotInSet, TypeMismatch
from linctx.generate import LPCF_TYPES
from linctx.grammar import parse_term, parse_trace
from linctx.lts import (EquivKind, TraceClass, TraceEngine, VerdictKind, classify_trace,
                        external_transitions, has_trace, trace_equiv, trace_leq, traces)
from linctx.pool import ArgumentPool, parse_pool
from linctx.reduction import step
from linctx.syntax import NAT, Monad, NatLit, alpha_key, omega
from linctx.typecheck import check_program

P = parse_term
F1 = P("val(fn! x:Nat. val(0) |~| val(1))")
F2 = P("val(fn! x:Nat. val(0)) |~| val(fn! x:Nat. val(1))")
ZERO_POOL = parse_pool("type Nat : 0\n")


def S(text):
    return parse_trace(text)


# ---------------------------------------------------------------- transitions

def test_constant_transition():
    (act, res, ty), = external_transitions(NatLit(7), ArgumentPool())
    assert act == ConstNat(7) and alpha_key(res) == alpha_key(omega(NAT)) and ty == NAT


def test_lambda_transitions():
    got = external_transitions(P("fn x:Nat. succ x"), ArgumentPool())
    assert [a for a, _, _ in got] == [AppArg(P("0")), AppArg(P("1")), AppArg(omega(NAT))]
    assert [alpha_key(r) for _, r, _ in got] == [alpha_key(P(t)) for t in
                                                  ("succ 0", "succ 1", "succ omega[Nat]")]


def test_val_transition():
    (act, res, ty), = external_transitions(F1, ArgumentPool())
    assert act == TAct() and res == F1.inner
    assert ty == check_program(F1.inner)


def test_primitive_functions_take_arguments():
    got = external_transitions(P("succ"), ZERO_POOL)
    assert [(a, r) for a, r, _ in got][0] == (AppArg(P("0")), P("succ 0"))


def test_pair_and_tensor_transitions():
    acts = [a for a, _, _ in external_transitions(P("<1, true>"), ArgumentPool())]
    assert acts == [ProjAct(1), ProjAct(2)]
    got = external_transitions(P("1 (x) 2"), ArgumentPool())
    assert TensorAct(P("z2 (x) z1")) in [a for a, _, _ in got]
    for act, res, ty in got:
        assert check_program(res) == ty


def test_transitions_need_irreducible_terms():
    with pytest.raises(NotIrreducible):
        external_transitions(P("pred 1"), ArgumentPool())


# ---------------------------------------------------------------- trace sets

def test_omega_has_only_the_empty_trace():
    for t in ["omega[Nat]", "omega[T Nat]", "omega[Nat -> Nat]"]:
        assert traces(P(t), depth=4).traces == {()}


def test_example_trace_set():
    """f1 at depth 4 with Nat = {0}: six traces, frozen from a hand unfolding.

    f1 -T-> fn! x. val(0) |~| val(1) -@0-> val(0) |~| val(1), which reduces to
    val(0) or val(1); each then takes T and emits its numeral.
    """
    want = {(), S("T"), S("T, @(0)"), S("T, @(0), T"), S("T, @(0), T, 0"),
            S("T, @(0), T, 1")}
    got = traces(F1, depth=4, pool=ZERO_POOL)
    assert set(got.traces) == want and got.complete
    assert set(traces(F2, depth=4, pool=ZERO_POOL).traces) == want


def test_constant_trace_set():
    assert set(traces(P("3"), depth=3).traces) == {(), (ConstNat(3),)}


def test_leq_examples():
    for e in ["3", "val(0)", "fn x:Nat. x"]:
        e = P(e)
        v = trace_leq(omega(check_program(e)), e)
        assert v.kind is VerdictKind.HoldsWithinBounds
    assert trace_leq(F1, F2, depth=5).holds and trace_leq(F2, F1, depth=5).holds
    v = trace_leq(P("val(0)"), P("val(1)"))
    assert v.kind is VerdictKind.Counterexample and v.trace == S("T, 0")


def test_equiv_examples():
    assert trace_equiv(F1, F2, depth=5).kind is EquivKind.Equivalent
    v = trace_equiv(P("val(0)"), P("val(1)"))
    assert v.kind is EquivKind.Inequivalent and v.counterexample == (1, S("T, 0"))
    with pytest.raises(TypeMismatch):
        trace_equiv(P("0"), P("true"))


def test_truncation_gives_incomplete():
    slow = P("fix[Nat] (fn! n:Nat. succ n)")
    v = trace_equiv(P("0"), P("if iszero (fix[Nat] (fn! n:Nat. succ n)) then 0 else 0"),
                    depth=2, fuel=15)
    assert v.kind is EquivKind.Incomplete
    assert not traces(slow, depth=2, fuel=15).complete


def test_classify_examples():
    ts = traces(F1, depth=4, pool=ZERO_POOL)
    assert classify_trace(S("T, @(0), T, 1"), ts) is TraceClass.Computational
    assert classify_trace(S("T"), ts) is TraceClass.Neither
    assert classify_trace((), {()}) is TraceClass.Maximal
    with pytest.raises(TraceNotInSet):
        classify_trace(S("T, 5"), ts)


def test_has_trace_ignores_the_pool():
    assert has_trace(F1, S("T, @(7), T, 1"))
    assert not has_trace(F1, S("T, @(7), T, 2"))


# ---------------------------------------------------------------- oracle agreement

@settings(max_examples=40)
@given(typed_terms(max_size=8))
def test_traces_match_oracle(pair):
    e, ty = pair
    pool = ArgumentPool(1)
    got = TraceEngine(pool, fuel=12).traces(e, 3, ty)
    want, cut = O.trace_set(e, ty, 3, pool, fuel=12)
    if got.complete and not cut:
        assert set(got.traces) == want
    else:
        assert want <= set(got.traces) | {s for s in want if got.may_miss(s)}


# ---------------------------------------------------------------- properties

def _engine():
    return TraceEngine(ArgumentPool(2), fuel=200)


@given(typed_terms(max_size=10))
def test_prefix_closed(pair):
    e, ty = pair
    ts = _engine().traces(e, 4, ty)
    assert () in ts
    for s in ts:
        for i in range(len(s)):
            assert s[:i] in ts
        assert not any(isinstance(a, (ConstNat, ConstBool)) for a in s[:-1])


@given(typed_terms(fragment="LPCF", max_size=10))
def test_labels_are_deterministic_in_lpcf(pair):
    e, ty = pair
    eng = _engine()
    nfs, _ = eng.normal_forms(e)
    assert len(nfs) <= 1
    for v in nfs:
        acts = [a for a, _, _ in external_transitions(v, eng.pool, ty)]
        assert len(acts) == len(set(acts))


@given(typed_terms(max_size=10), typed_terms(max_size=10))
def test_residual_types_agree(p1, p2):
    (e1, t1), (e2, t2) = p1, p2
    if t1 != t2:
        return
    eng = _engine()
    common = eng.traces(e1, 3, t1).traces & eng.traces(e2, 3, t2).traces
    for s in common:
        types = {check_program(r) for r in eng.residuals(e1, s) + eng.residuals(e2, s)}
        assert len(types) <= 1


@given(typed_terms(max_size=10))
def test_reduction_shrinks_traces(pair):
    e, ty = pair
    eng = _engine()
    ts = eng.traces(e, 3, ty)
    for e2, _ in step(e):
        t2 = eng.traces(e2, 3, ty)
        if ts.complete and t2.complete:
            assert t2.traces <= ts.traces


@given(typed_terms(max_size=10), st.sampled_from(["0", "succ 1", "eq 0 0"]))
def test_monotone_in_bounds(pair, extra):
    e, ty = pair
    small = TraceEngine(ArgumentPool(1), 200).traces(e, 2, ty)
    deeper = TraceEngine(ArgumentPool(1), 200).traces(e, 3, ty)
    bigger = TraceEngine(ArgumentPool(1).extended([P(extra)]), 200).traces(e, 2, ty)
    if small.complete:
        assert small.traces <= deeper.traces
        assert small.traces <= bigger.traces


@given(typed_terms(max_size=10, types=LPCF_TYPES + (Monad(NAT),)))
def test_trace_equiv_is_reflexive(pair):
    e, _ = pair
    assert trace_equiv(e, e, depth=3, pool=ArgumentPool(1), fuel=200).kind is not \
        EquivKind.Inequivalent
