import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as O
from conftest import typed_terms
from linctx.errors import (BranchConsumptionMismatch, ExtraFreeVariable, HoleUnused,
                           LinearityViolation, TypeCheckError, TypeMismatch, UnboundVariable)
from linctx.generate import GenConfig
from linctx.grammar import parse_term, parse_type
from linctx.syntax import (BOOL, NAT, App, Arrow, Bind, Fix, Lam, LinArrow, Monad, Var, WithType,
                           children, subterms, with_children)
from linctx.typecheck import TypingEnv, check, check_linear_context, check_program

P = parse_term
T = parse_type


# ---------------------------------------------------------------- examples

def test_linear_variable():
    r = check(TypingEnv({}, {"x": NAT}), Var("x"))
    assert r.inferred == NAT and r.consumed == {"x"}


def test_fix_type():
    assert check(TypingEnv(), Fix(NAT)).inferred == Arrow(Arrow(NAT, NAT), NAT)


def test_f1_type():
    assert check_program(P("val(fn! x:Nat. val(0) |~| val(1))")) == T("T (Nat -> T Nat)")


def test_double_linear_use():
    with pytest.raises(LinearityViolation):
        check(TypingEnv({}, {"x": NAT}), P("x (x) x"))


def test_program_examples():
    assert check_program(P("succ")) == LinArrow(NAT, NAT)
    assert check_program(P("omega[Bool]")) == BOOL
    assert check_program(P("fn x:Nat. <x, x>")) == LinArrow(NAT, WithType(NAT, NAT))
    assert check_program(P("eq")) == T("Nat -o Nat -o Bool")


def test_linear_context_examples():
    assert check_linear_context(Var("x"), "x", NAT) == NAT
    assert check_linear_context(P("bind y = x in val(eq y 1)"), "x", T("T Nat")) == T("T Bool")
    assert check_linear_context(P("<x, x>"), "x", NAT) == WithType(NAT, NAT)


def test_linear_context_errors():
    with pytest.raises(HoleUnused):
        check_linear_context(P("0"), "x", NAT)
    with pytest.raises(ExtraFreeVariable):
        check_linear_context(P("y x"), "x", NAT)
    with pytest.raises(LinearityViolation):
        check_linear_context(P("x (x) x"), "x", NAT)


@pytest.mark.parametrize("text, error", [
    ("fn x:Nat. 3", LinearityViolation),
    ("y", UnboundVariable),
    ("1 2", TypeMismatch),
    ("fn x:Nat. (fn! y:Nat. y) x", LinearityViolation),
    ("fn x:Nat. bind! y = val(x) in val(y)", LinearityViolation),
    ("fn x:Nat. if true then x else 0", BranchConsumptionMismatch),
    ("fn x:Nat. val(x) |~| val(0)", BranchConsumptionMismatch),
    ("fn x:Nat. <x, 0>", BranchConsumptionMismatch),
    ("if 0 then 1 else 2", TypeMismatch),
    ("proj1 (1 (x) 2)", TypeMismatch),
    ("bind x = 3 in val(x)", TypeMismatch),
    ("bind x = val(3) in x", TypeMismatch),
])
def test_rejections(text, error):
    with pytest.raises(error):
        check_program(P(text))


def test_nonlinear_function_accepts_linear_one():
    assert check_program(P("(fn! f:Nat -o Nat. f 0) (fn x:Nat. x)")) == NAT


def test_shadowing_linear_binder():
    with pytest.raises(LinearityViolation):
        check_program(P("fn x:Nat. fn x:Nat. x"))
    assert check_program(P("fn! x:Nat. fn x:Nat. x")) == T("Nat -> Nat -o Nat")


def test_environments_must_be_disjoint():
    with pytest.raises(TypeCheckError):
        TypingEnv({"x": NAT}, {"x": NAT})


def test_unannotated_lambda_only_in_head_position():
    with pytest.raises(TypeCheckError):
        check_program(Lam("x", None, True, Var("x")))
    assert check_program(App(Lam("x", None, True, Var("x")), P("3"))) == NAT


# ---------------------------------------------------------------- declarative oracle

def _agree_closed(e):
    want = O.derive_program(e)
    try:
        got = check_program(e)
    except TypeCheckError:
        got = None
    return got == want


@pytest.mark.parametrize("fragment, max_size, stride", [("LPCF", 4, 1), ("NLPCF", 3, 1),
                                                         ("NLPCF", 4, 7)])
def test_closed_raw_terms_match_declarative_rules(fragment, max_size, stride):
    cfg = GenConfig(fragment=fragment)
    bad, typed = [], 0
    for n in range(1, max_size + 1):
        for i, e in enumerate(O.raw_terms(n, (), cfg)):
            if i % stride:
                continue
            if not _agree_closed(e):
                bad.append(e)
            typed += O.derive_program(e) is not None
    assert not bad, bad[:5]
    assert typed > 100


def _agree_open(gamma, delta, e):
    try:
        r = check(TypingEnv(gamma, delta), e)
    except TypeCheckError:
        r = None
    wants = {}
    for used, _ in O._subsets(frozenset(delta)):
        t = O.derive(gamma, {x: delta[x] for x in used}, e)
        if t is not None:
            wants[used] = t
    if r is None:
        return not wants
    return wants == {r.consumed: r.inferred}


def test_open_raw_terms_match_declarative_rules():
    cfg = GenConfig(fragment="NLPCF")
    gamma, delta = {"g": NAT}, {"x": NAT, "m": Monad(NAT)}
    bad = 0
    for n in range(1, 4):
        for e in O.raw_terms(n, ("g", "x", "m"), cfg):
            bad += not _agree_open(gamma, delta, e)
    assert bad == 0


# Mutations: rename one variable occurrence, flip a binder's linearity, or
# duplicate a subterm, which produces many near-miss ill-typed terms.
def _mutate(e, rng):
    nodes = list(subterms(e))
    target = rng.randrange(len(nodes))
    counter = [0]

    def go(t):
        i = counter[0]
        counter[0] += 1
        if i == target:
            if isinstance(t, Var):
                return Var(rng.choice(["v0", "v1", "v2", t.name]))
            if isinstance(t, Lam):
                return Lam(t.binder, t.binder_type, not t.linear, go(t.body))
            if isinstance(t, Bind):
                return Bind(t.binder, not t.linear, go(t.computation), go(t.body))
            ks = children(t)
            if len(ks) >= 2:
                return with_children(t, [ks[0], ks[0]] + list(ks[2:]))
        return with_children(t, [go(c) for c in children(t)])

    return go(e)


@given(typed_terms(max_size=10), st.integers(0, 2**32 - 1))
def test_mutants_match_declarative_rules(pair, seed):
    e, ty = pair
    assert O.derive_program(e) == ty
    rng = random.Random(seed)
    for _ in range(3):
        e = _mutate(e, rng)
        assert _agree_closed(e)


@given(typed_terms(max_size=12))
def test_generated_terms_have_their_type(pair):
    e, ty = pair
    assert check_program(e) == ty


@given(typed_terms(max_size=12))
def test_check_is_deterministic(pair):
    e, _ = pair
    assert check(TypingEnv(), e) == check(TypingEnv(), e)


@given(typed_terms(max_size=12), st.sampled_from([NAT, BOOL, T("Nat -o Nat"), T("T Nat")]))
def test_weakening_in_gamma(pair, extra):
    e, ty = pair
    r = check(TypingEnv({"zz_fresh": extra}, {}), e)
    assert r.inferred == ty and r.consumed == frozenset()
