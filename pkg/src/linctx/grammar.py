"""Concrete syntax: tokenizer, recursive-descent parser and printer.

Terms::

    fn x:Nat. e   fn! x:Nat. e   e e   if e then e else e   <e, e>
    proj1 e   e (x) e   letpair x y = e in e   val(e)
    bind x = e in e   bind! x = e in e   e |~| e   omega[T]   fix[T]

Types::

    Nat  Bool  t & t  t (x) t  t -o t  t -> t  T t

Binders extend as far right as possible, ``|~|`` binds loosest, then ``(x)``,
then application.  ``T`` binds tighter than the binary type operators.

The character sequence ``(x)`` is the tensor operator when it sits between two
operands and a parenthesised variable otherwise, so ``val(x)`` means what it
looks like.  The printer never emits a parenthesised variable.
"""
from __future__ import annotations

import re
from typing import List, NamedTuple, Optional

from .actions import AppArg, ConstBool, ConstNat, ProjAct, TAct, TensorAct, Trace
from .errors import ParseError
from .syntax import (BOOL, NAT, App, Arrow, Bind, BoolLit, BoolType, Choice, Eq, EqN, Fix, If,
                     IsZero, Lam, LinArrow, Monad, NatLit, NatType, Pair, Pred, Proj, Succ,
                     TensorIntro, TensorLet, TensorType, Term, TypeExpr, Val, Var, WithType, omega)

KEYWORDS = frozenset("""
Nat Bool T true false succ pred iszero eq fix fn if then else proj1 proj2
letpair in val bind omega
""".split())

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<sym>\(x\)|\|~\||-o|->|fn!|bind!|[()<>,.:\[\]=&@]|ε)
  | (?P<num>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)


class Token(NamedTuple):
    kind: str      # "num", "ident", "kw", "sym", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident":
            word = m.group()
            tokens.append(Token("kw" if word in KEYWORDS else "ident", word, line, col))
        elif kind == "sym":
            word = m.group()
            tokens.append(Token("kw" if word in ("fn!", "bind!") else "sym", word, line, col))
        elif kind == "num":
            tokens.append(Token("num", m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


_ATOM_KW = {"true", "false", "succ", "pred", "iszero", "eq", "fix", "omega", "val", "proj1", "proj2"}
_BINDER_KW = {"fn", "fn!", "if", "letpair", "bind", "bind!"}


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # -- helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"{msg}, found {found}", tok.line, tok.col)

    def is_(self, text: str) -> bool:
        return self.tok.kind in ("sym", "kw") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.is_(text):
            self.error(f"expected {text!r}")
        return self.advance()

    def ident(self) -> str:
        if self.tok.kind != "ident":
            self.error("expected identifier")
        return self.advance().text

    def number(self) -> int:
        if self.tok.kind != "num":
            self.error("expected number")
        return int(self.advance().text)

    def at_end(self) -> bool:
        return self.tok.kind == "eof"

    def finish(self):
        if not self.at_end():
            self.error("unexpected trailing input")

    @staticmethod
    def starts_operand(t: Token) -> bool:
        if t.kind in ("num", "ident"):
            return True
        if t.kind == "kw":
            return t.text in _ATOM_KW
        return t.kind == "sym" and t.text in ("(", "<", "(x)")

    @staticmethod
    def starts_binder(t: Token) -> bool:
        return t.kind == "kw" and t.text in _BINDER_KW

    def tensor_op_here(self) -> bool:
        nxt = self.peek()
        return self.is_("(x)") and (self.starts_operand(nxt) or self.starts_binder(nxt))

    # -- types

    def type_(self) -> TypeExpr:
        left = self.type_prod()
        if self.is_("->") or self.is_("-o"):
            op = self.advance().text
            right = self.type_()
            return Arrow(left, right) if op == "->" else LinArrow(left, right)
        return left

    def type_prod(self) -> TypeExpr:
        left = self.type_unary()
        while self.is_("&") or self.is_("(x)"):
            op = self.advance().text
            right = self.type_unary()
            left = WithType(left, right) if op == "&" else TensorType(left, right)
        return left

    def type_unary(self) -> TypeExpr:
        if self.is_("T"):
            self.advance()
            return Monad(self.type_unary())
        if self.is_("Nat"):
            self.advance()
            return NAT
        if self.is_("Bool"):
            self.advance()
            return BOOL
        if self.is_("("):
            self.advance()
            t = self.type_()
            self.expect(")")
            return t
        self.error("expected a type")

    # -- terms

    def term(self) -> Term:
        left = self.term_tensor()
        while self.is_("|~|"):
            self.advance()
            left = Choice(left, self.term_tensor())
        return left

    def term_tensor(self) -> Term:
        left = self.term_app()
        while self.tensor_op_here():
            self.advance()
            left = TensorIntro(left, self.term_app())
        return left

    def term_app(self) -> Term:
        if self.starts_binder(self.tok):
            return self.binder()
        head = self.operand()
        while True:
            if self.tensor_op_here():
                break
            if self.starts_binder(self.tok):
                return App(head, self.binder())
            if not self.starts_operand(self.tok):
                break
            head = App(head, self.operand())
        return head

    def operand(self) -> Term:
        if self.is_("proj1") or self.is_("proj2"):
            index = 1 if self.advance().text == "proj1" else 2
            return Proj(index, self.operand())
        return self.atom()

    def atom(self) -> Term:
        t = self.tok
        if t.kind == "num":
            return NatLit(self.number())
        if t.kind == "ident":
            return Var(self.advance().text)
        if t.kind == "sym":
            if t.text == "(x)":
                self.advance()
                return Var("x")
            if t.text == "(":
                self.advance()
                e = self.term()
                self.expect(")")
                return e
            if t.text == "<":
                self.advance()
                a = self.term()
                self.expect(",")
                b = self.term()
                self.expect(">")
                return Pair(a, b)
        if t.kind == "kw":
            word = t.text
            simple = {"true": BoolLit(True), "false": BoolLit(False), "succ": Succ(),
                      "pred": Pred(), "iszero": IsZero()}
            if word in simple:
                self.advance()
                return simple[word]
            if word == "eq":
                self.advance()
                if self.is_("["):
                    self.advance()
                    n = self.number()
                    self.expect("]")
                    return EqN(n)
                return Eq()
            if word in ("fix", "omega"):
                self.advance()
                self.expect("[")
                ty = self.type_()
                self.expect("]")
                return Fix(ty) if word == "fix" else omega(ty)
            if word == "val":
                self.advance()
                if self.is_("(x)"):
                    self.advance()
                    return Val(Var("x"))
                self.expect("(")
                e = self.term()
                self.expect(")")
                return Val(e)
        self.error("expected a term")

    def binder(self) -> Term:
        word = self.advance().text
        if word in ("fn", "fn!"):
            x = self.ident()
            ty = None
            if self.is_(":"):
                self.advance()
                ty = self.type_()
            self.expect(".")
            return Lam(x, ty, word == "fn", self.term())
        if word == "if":
            c = self.term()
            self.expect("then")
            a = self.term()
            self.expect("else")
            return If(c, a, self.term())
        if word == "letpair":
            x = self.ident()
            y = self.ident()
            self.expect("=")
            s = self.term()
            self.expect("in")
            return TensorLet(x, y, s, self.term())
        x = self.ident()
        self.expect("=")
        c = self.term()
        self.expect("in")
        return Bind(x, word == "bind", c, self.term())

    # -- traces

    def action(self):
        t = self.tok
        if t.kind == "num":
            return ConstNat(self.number())
        if self.is_("true") or self.is_("false"):
            return ConstBool(self.advance().text == "true")
        if self.is_("@"):
            self.advance()
            return AppArg(self.atom())
        if self.is_("proj1") or self.is_("proj2"):
            return ProjAct(1 if self.advance().text == "proj1" else 2)
        if self.is_("(x)"):
            self.advance()
            return TensorAct(self.atom())
        if self.is_("T"):
            self.advance()
            return TAct()
        self.error("expected an action")

    def trace(self) -> Trace:
        if self.is_("ε"):
            self.advance()
            return ()
        if self.at_end():
            return ()
        acts = [self.action()]
        while self.is_(","):
            self.advance()
            acts.append(self.action())
        return tuple(acts)


def parse_term(text: str) -> Term:
    p = Parser(text)
    e = p.term()
    p.finish()
    return e


parse = parse_term


def parse_type(text: str) -> TypeExpr:
    p = Parser(text)
    t = p.type_()
    p.finish()
    return t


def parse_trace(text: str) -> Trace:
    p = Parser(text)
    s = p.trace()
    p.finish()
    return s


def parse_traces(text: str) -> List[Trace]:
    """One trace per non-blank line."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.strip().startswith("#"):
            continue
        try:
            out.append(parse_trace(line))
        except ParseError as err:
            raise ParseError(str(err).split(" at line")[0], lineno, err.column) from None
    return out


# ---------------------------------------------------------------- printer

def print_type(t: TypeExpr, prec: int = 0) -> str:
    match t:
        case NatType():
            return "Nat"
        case BoolType():
            return "Bool"
        case Monad(inner):
            return f"T {print_type(inner, 2)}"
        case WithType(a, b) | TensorType(a, b):
            op = "&" if isinstance(t, WithType) else "(x)"
            s = f"{print_type(a, 1)} {op} {print_type(b, 2)}"
            return f"({s})" if prec > 1 else s
        case Arrow(a, b) | LinArrow(a, b):
            op = "->" if isinstance(t, Arrow) else "-o"
            s = f"{print_type(a, 1)} {op} {print_type(b, 0)}"
            return f"({s})" if prec > 0 else s
    raise TypeError(f"not a type: {t!r}")


BINDER, CHOICE, TENSOR, APP, ATOM = range(5)


def _omega_type(e: Term) -> Optional[TypeExpr]:
    match e:
        case App(Fix(t), Lam(x, t2, False, Var(y))) if x == y and t == t2:
            return t
    return None


def print_term(e: Term, prec: int = BINDER) -> str:
    s, own = _show(e)
    return f"({s})" if own < prec else s


def _show(e: Term):
    match e:
        case Var(x):
            return x, ATOM
        case NatLit(n):
            return str(n), ATOM
        case BoolLit(b):
            return ("true" if b else "false"), ATOM
        case Succ():
            return "succ", ATOM
        case Pred():
            return "pred", ATOM
        case IsZero():
            return "iszero", ATOM
        case Eq():
            return "eq", ATOM
        case EqN(n):
            return f"eq[{n}]", ATOM
        case Fix(t):
            return f"fix[{print_type(t)}]", ATOM
        case Lam(x, t, lin, body):
            kw = "fn" if lin else "fn!"
            ann = "" if t is None else f":{print_type(t)}"
            return f"{kw} {x}{ann}. {print_term(body)}", BINDER
        case App(f, a):
            t = _omega_type(e)
            if t is not None:
                return f"omega[{print_type(t)}]", ATOM
            return f"{print_term(f, APP)} {print_term(a, ATOM)}", APP
        case If(c, a, b):
            return f"if {print_term(c)} then {print_term(a)} else {print_term(b)}", BINDER
        case Pair(a, b):
            return f"<{print_term(a)}, {print_term(b)}>", ATOM
        case Proj(i, a):
            return f"proj{i} {print_term(a, ATOM)}", APP
        case TensorIntro(a, b):
            return f"{print_term(a, TENSOR)} (x) {print_term(b, APP)}", TENSOR
        case TensorLet(x, y, s, body):
            return f"letpair {x} {y} = {print_term(s)} in {print_term(body)}", BINDER
        case Val(a):
            return f"val({print_term(a)})", ATOM
        case Bind(x, lin, c, body):
            kw = "bind" if lin else "bind!"
            return f"{kw} {x} = {print_term(c)} in {print_term(body)}", BINDER
        case Choice(a, b):
            return f"{print_term(a, CHOICE)} |~| {print_term(b, TENSOR)}", CHOICE
    raise TypeError(f"not a term: {e!r}")


def print_action(a) -> str:
    match a:
        case ConstNat(n):
            return str(n)
        case ConstBool(b):
            return "true" if b else "false"
        case AppArg(arg):
            return f"@({print_term(arg)})"
        case ProjAct(i):
            return f"proj{i}"
        case TensorAct(body):
            return f"(x)({print_term(body)})"
        case TAct():
            return "T"
    raise TypeError(f"not an action: {a!r}")


def print_trace(s: Trace) -> str:
    return ", ".join(print_action(a) for a in s) if s else "ε"
