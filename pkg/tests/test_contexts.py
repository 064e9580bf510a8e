import random
from pathlib import Path

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles as O
from conftest import typed_terms
from linctx.actions import AppArg, ConstBool, ConstNat, ProjAct, TAct, TensorAct
from linctx.contexts import (ContextStep, Interaction, LinearContext, ProgramStep, classify_lcr,
                             context_trace, context_traces, context_transitions, plug,
                             synthesize_s_context)
from linctx.errors import (MalformedTrace, Unconstructible, NotEvaluationContext, TraceNotTaken, TypeMismatch,
                           UnclassifiableReduction)
from linctx.generate import GenConfig, RandomGenerator
from linctx.grammar import parse_term, parse_trace, parse_type, print_term
from linctx.lts import TraceClass, TraceEngine, classify_trace
from linctx.pool import ArgumentPool
from linctx.reduction import Convergence, evaluate, may_converge, step
from linctx.syntax import NAT, Monad, NatLit, Val, Var, alpha_eq, alpha_key, omega, substitute
from linctx.typecheck import check_program

P = parse_term
T = parse_type
S = parse_trace
PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def ctx(body, holetype, hole="x"):
    return LinearContext.make(P(body), hole, T(holetype) if isinstance(holetype, str) else holetype)


# ---------------------------------------------------------------- plugging

def test_plug_examples():
    assert plug(ctx("x", "Nat"), P("5")) == NatLit(5)
    assert plug(ctx("pred x", "Nat"), P("3")) == P("pred 3")
    with pytest.raises(TypeMismatch):
        plug(ctx("pred x", "Nat"), P("true"))


def test_double_application_context():
    # The distinguishing context binds its hole non-linearly, so it is plugged
    # by plain substitution rather than as a LinearContext.
    body = P((PROGRAMS / "distinguisher.ctx").read_text())
    f1 = P((PROGRAMS / "f1.lpcf").read_text())
    want = P((PROGRAMS / "distinguisher_f1.lpcf").read_text())
    assert alpha_eq(substitute(body, {"HOLE": f1}), want)
    assert check_program(want) == T("T Bool")


def test_context_invariant():
    c = ctx("bind y = x in val(eq y 1)", "T Nat")
    assert c.result == T("T Bool")


# ---------------------------------------------------------------- context transitions

def test_if_transitions():
    ts = context_transitions(ctx("if x then val(0) else omega[T Nat]", "Bool"))
    got = {ct.label: print_term(ct.fire(ct.label)) for ct in ts}
    assert got == {ConstBool(True): "val(0)", ConstBool(False): "omega[T Nat]"}


def test_pred_pattern():
    (ct,) = context_transitions(ctx("pred x", "Nat"))
    assert ct.label is None and ct.accepts(ConstNat(9)) and not ct.accepts(ConstBool(True))
    assert ct.fire(ConstNat(3)) == NatLit(2)
    assert ct.fire(ConstNat(0)) == NatLit(0)


def test_bind_transition():
    (ct,) = context_transitions(ctx("bind z = x in val(z)", "T Nat"))
    c2 = ct.fire(TAct())
    assert ct.label == TAct()
    assert print_term(c2.body) == f"(fn z. val(z)) {c2.hole}" and c2.holetype == NAT
    assert c2.result == Monad(NAT)


@pytest.mark.parametrize("body, holetype, label", [
    ("x 0", "Nat -o Nat", AppArg(NatLit(0))),
    ("proj2 x", "Nat & Bool", ProjAct(2)),
    ("letpair a b = x in a (x) b", "Nat (x) Nat", TensorAct(P("z1 (x) z2"))),
    ("succ x", "Nat", None),
    ("iszero x", "Nat", None),
    ("eq x 1", "Nat", None),
])
def test_one_transition_per_position(body, holetype, label):
    (ct,) = context_transitions(ctx(body, holetype))
    assert ct.label == label


def test_bare_hole_and_non_evaluation_contexts():
    assert context_transitions(ctx("x", "Nat")) == []
    with pytest.raises(NotEvaluationContext):
        context_transitions(ctx("<x, x>", "Nat"))


# ---------------------------------------------------------------- LCR

def test_lcr_interaction():
    (form,) = classify_lcr(ctx("pred x", "Nat"), P("3"))
    assert isinstance(form, Interaction)
    assert form.action == ConstNat(3) and form.next_context == NatLit(2)
    assert alpha_eq(form.next_program, omega(NAT)) and not form.absorbed


def test_lcr_program_step():
    (form,) = classify_lcr(ctx("x", "Nat"), P("pred 3"))
    assert isinstance(form, ProgramStep) and form.next_program == NatLit(2)


def test_lcr_context_step():
    (form,) = classify_lcr(ctx("if true then x else x", "Nat"), P("3"))
    assert isinstance(form, ContextStep) and form.next.body == Var("x")


def test_lcr_absorbed_primitive():
    (form,) = classify_lcr(ctx("x 0", "Nat -o Nat"), P("succ"))
    assert isinstance(form, Interaction) and form.absorbed
    assert form.action == AppArg(NatLit(0)) and form.next_program == NatLit(1)


def test_lcr_choice_in_context():
    forms = classify_lcr(ctx("x |~| x", "T Nat"), P("val(0)"))
    assert [type(f) for f in forms] == [ContextStep, ContextStep]


def test_lcr_rejects_non_evaluation_hole():
    # Hand-built pair: the successor is explained by neither side.
    from linctx.contexts import classify_one
    with pytest.raises(UnclassifiableReduction):
        classify_one(ctx("<x, x>", "Nat"), P("pred 1"), P("<0, 0>"))


# ---------------------------------------------------------------- context traces

def test_context_trace_examples():
    e = P("val(1)")
    assert context_trace(ctx("x", "T Nat"), e, S("T, 1")) == S("T, 1")
    assert context_trace(ctx("pred x", "Nat"), P("3"), S("2")) == S("3")
    assert context_trace(ctx("if true then x else x", "Nat"), P("3"), ()) == ()


def test_context_trace_through_bind():
    c = ctx("bind y = x in val(succ y)", "T Nat")
    assert context_trace(c, P("val(4)"), S("T, 5")) == S("T, 4")


def test_context_trace_not_taken():
    with pytest.raises(TraceNotTaken):
        context_trace(ctx("pred x", "Nat"), P("3"), S("5"))


def test_context_traces_over_witnesses():
    c = ctx("bind y = x in val(y)", "T Nat")
    got = context_traces(c, P("val(0) |~| val(1)"), S("T"))
    assert got == [S("T")]
    got = context_traces(c, P("val(0) |~| val(1)"), S("T, 1"))
    assert got == [S("T, 1")]


# ---------------------------------------------------------------- s-contexts

def test_s_context_examples():
    assert print_term(synthesize_s_context((), NAT).body) == "val(x)"
    assert print_term(synthesize_s_context(S("5"), NAT).body) == \
        "if eq x 5 then val(0) else omega[T Nat]"
    c = synthesize_s_context(S("T, 1"), T("T Nat"))
    assert alpha_eq(c.body, P("bind y = x in if eq y 1 then val(0) else omega[T Nat]"))
    assert c.result == T("T Nat")


def test_s_context_for_example_trace():
    c = synthesize_s_context(S("T, @(0), T, 1"), T("T (Nat -> T Nat)"))
    assert alpha_eq(c.body, P("bind y1 = x in bind y2 = val(y1 0) in bind y3 = y2 in "
                              "if eq y3 1 then val(0) else omega[T Nat]"))
    for f in ("f1", "f2"):
        e = P((PROGRAMS / f"{f}.lpcf").read_text())
        assert may_converge(plug(c, e), 200) is Convergence.Converges


def test_boolean_and_structural_clauses():
    assert alpha_eq(synthesize_s_context(S("false"), T("Bool")).body,
                    P("if x then omega[T Nat] else val(0)"))
    c = synthesize_s_context(S("proj2, true"), T("Nat & Bool"))
    assert alpha_eq(c.body, P("bind y = val(proj2 x) in if y then val(0) else omega[T Nat]"))
    c = synthesize_s_context(S("(x)(z2 (x) z1)"), T("Nat (x) Bool"))
    assert alpha_eq(c.body, P("bind y = val(letpair z1 z2 = x in z2 (x) z1) in val(y)"))
    assert c.result == T("T (Bool (x) Nat)")


@pytest.mark.parametrize("trace, holetype", [
    ("3, T", "Nat"), ("T", "Nat"), ("true", "Nat"), ("@(true)", "Nat -o Nat"),
    ("proj1", "Nat (x) Nat"), ("(x)(z1)", "Nat (x) Nat"),
])
def test_s_context_rejects_malformed(trace, holetype):
    with pytest.raises(MalformedTrace):
        synthesize_s_context(S(trace), T(holetype))


# ---------------------------------------------------------------- properties

def _pair(seed, size, fragment="NLPCF"):
    rng = random.Random(seed)
    cfg = GenConfig(seed=seed, max_size=size, fragment=fragment)
    gen = RandomGenerator(cfg, rng)
    holetype = rng.choice(cfg.type_whitelist)
    result = rng.choice(cfg.type_whitelist)
    try:
        body = gen.term(result, lin=frozenset({("x", holetype)}), tries=10)
    except Unconstructible:
        assume(False)
    return LinearContext.make(body, "x", holetype), gen.term(holetype)


@given(st.integers(0, 2**32 - 1), st.integers(5, 10))
def test_lcr_is_total(seed, size):
    c, e = _pair(seed, size)
    assert len(classify_lcr(c, e)) == len(step(plug(c, e)))


@given(st.integers(0, 2**32 - 1), st.integers(5, 8))
def test_context_traces_are_program_traces(seed, size):
    c, e = _pair(seed, size)
    eng = TraceEngine(ArgumentPool(1), fuel=100)
    plugged = plug(c, e)
    for s in sorted(eng.traces(plugged, 3, c.result).traces, key=len)[:6]:
        try:
            ts = context_traces(c, e, s, 100, eng)
        except TraceNotTaken:
            continue
        for t in ts:
            assert eng.has_trace(e, t)


@given(typed_terms(max_size=8))
def test_s_context_recognises_computational_traces(pair):
    e, ty = pair
    eng = TraceEngine(ArgumentPool(2), fuel=200)
    ts = eng.traces(e, 4, ty)
    for s in ts:
        if classify_trace(s, ts) is TraceClass.Computational:
            c = synthesize_s_context(s, ty)
            assert c.result == Monad(NAT)
            assert may_converge(plug(c, e), 300) is Convergence.Converges
            assert O.converges(plug(c, e), 40) is not False


@given(typed_terms(max_size=8))
def test_s_context_of_prefix_returns_residuals(pair):
    e, ty = pair
    eng = TraceEngine(ArgumentPool(1), fuel=200)
    ts = eng.traces(e, 3, ty)
    if not ts.complete:
        return
    for s in ts:
        if s and isinstance(s[-1], (ConstNat, ConstBool)):
            continue
        out = evaluate(plug(synthesize_s_context(s, ty), e), 300)
        if out.timed_out and not out.cycle_detected:
            continue
        want = {alpha_key(Val(r)) for r in eng.residuals(e, s)}
        assert {alpha_key(v) for v in out.values} == want
