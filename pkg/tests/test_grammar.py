import pytest
from hypothesis import given

from conftest import programs
from linctx.actions import AppArg, ConstNat, ProjAct, TAct, TensorAct
from linctx.errors import ParseError
from linctx.grammar import (parse_term, parse_trace, parse_traces, parse_type, print_term,
                            print_trace, print_type)
from linctx.syntax import (BOOL, NAT, App, Arrow, Choice, Fix, Lam, LinArrow, Monad, NatLit, Pair,
                           TensorIntro, TensorType, Val, Var, WithType, alpha_eq, omega)

F1 = "val(fn! x:Nat. val(0) |~| val(1))"


def test_parse_f1():
    body = Choice(Val(NatLit(0)), Val(NatLit(1)))
    assert parse_term(F1) == Val(Lam("x", NAT, False, body))


def test_omega_is_expanded():
    assert parse_term("omega[Nat]") == App(Fix(NAT), Lam("x", NAT, False, Var("x")))
    assert print_term(omega(Monad(NAT))) == "omega[T Nat]"


def test_unclosed_paren_is_a_syntax_error():
    with pytest.raises(ParseError) as info:
        parse_term("(fn")
    assert info.value.line == 1 and info.value.column is not None


def test_error_position_on_later_line():
    with pytest.raises(ParseError) as info:
        parse_term("fn x:Nat.\n  x )")
    assert info.value.line == 2


def test_unbound_identifier_is_not_a_parse_error():
    assert parse_term("foo bar") == App(Var("foo"), Var("bar"))


def test_types():
    assert parse_type("Nat -o Nat -> Bool") == LinArrow(NAT, Arrow(NAT, BOOL))
    assert parse_type("T Nat & Bool") == WithType(Monad(NAT), BOOL)
    assert parse_type("(Nat (x) Bool) -o T Nat") == LinArrow(TensorType(NAT, BOOL), Monad(NAT))
    for text in ["Nat -o Nat -> Bool", "T (Nat -> T Nat)", "(Nat -o Nat) -o Nat",
                 "Nat & Bool (x) Nat"]:
        assert print_type(parse_type(print_type(parse_type(text)))) == print_type(parse_type(text))


def test_precedence():
    assert parse_term("f a b") == App(App(Var("f"), Var("a")), Var("b"))
    assert parse_term("val(0) |~| val(1) |~| val(2)").__class__ is Choice
    assert parse_term("a (x) b c") == TensorIntro(Var("a"), App(Var("b"), Var("c")))
    assert parse_term("<1, 2>") == Pair(NatLit(1), NatLit(2))


def test_parenthesised_variable_is_not_tensor():
    assert parse_term("val(x)") == Val(Var("x"))
    assert parse_term("f (x)") == App(Var("f"), Var("x"))
    assert parse_term("a (x) b") == TensorIntro(Var("a"), Var("b"))


def test_print_parse_identity_up_to_whitespace():
    for text in [F1, "fn x:Nat. if iszero x then <1, 2> else <x, x>",
                 "letpair a b = 1 (x) 2 in a (x) b", "bind! y = val(3) in val(succ y)",
                 "proj2 <true, omega[Bool]>", "eq 1 2", "fix[Nat] (fn! f:Nat. succ f)"]:
        assert print_term(parse_term(text)) == " ".join(text.split())


def test_traces():
    s = parse_trace("T, @(0), T, 1")
    assert s == (TAct(), AppArg(NatLit(0)), TAct(), ConstNat(1))
    assert print_trace(s) == "T, @(0), T, 1"
    assert parse_trace("ε") == ()
    assert parse_trace("proj2, (x)(z2 (x) z1)") == (ProjAct(2), TensorAct(parse_term("z2 (x) z1")))
    assert parse_traces("T\n\n# comment\nT, 0\n") == [(TAct(),), (TAct(), ConstNat(0))]


def test_trace_error_reports_line():
    with pytest.raises(ParseError) as info:
        parse_traces("T\nT, @(\n")
    assert info.value.line == 2


@given(programs(max_size=12))
def test_round_trip(e):
    assert alpha_eq(parse_term(print_term(e)), e)


@given(programs(fragment="LPCF", max_size=12))
def test_round_trip_lpcf(e):
    text = print_term(e)
    assert alpha_eq(parse_term(text), e)
    assert print_term(parse_term(text)) == text
