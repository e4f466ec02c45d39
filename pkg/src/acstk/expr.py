"""Scalar expressions in coordinates x1..xn: parse, print, differentiate, eval.

The grammar is closed and small: numeric literals, variables x<k>, binary
+ - * /, integer powers ^, unary minus, and the functions sin, cos, exp.
Parsing is recursive descent with 1-based source positions in every error
message.  Differentiation is exact on the AST with light constant folding;
numeric literals in folded results are kept non-negative (negation lives
in Neg nodes), which makes printing and re-parsing closed: for any AST the
printer emits, parsing the output reproduces the AST node for node.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import NumericalError, ValidationError

FUNCTIONS = ("sin", "cos", "exp")


class Expr:
    """Base class of expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    """Non-negative numeric literal (negative values print as Neg(Num))."""

    value: float


@dataclass(frozen=True)
class Var(Expr):
    """Coordinate x<index>, 1-based."""

    index: int


@dataclass(frozen=True)
class BinOp(Expr):
    """Binary node; op is one of '+', '-', '*', '/', '^'.

    For '^' the right operand is always a Num holding a non-negative
    integer.
    """

    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Call(Expr):
    """Function application; fn is one of sin, cos, exp."""

    fn: str
    arg: Expr


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """(kind, text, 1-based position) triples, terminated by ('end', '', len+1)."""
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.lastgroup is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_at = len(text) - len(stripped) + 1
            raise ValidationError(
                f"unexpected character {stripped[0]!r} at position {bad_at}"
            )
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind) + 1))
        pos = match.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, max_var: int | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.at = 0
        self.max_var = max_var

    def peek(self):
        return self.tokens[self.at]

    def advance(self):
        token = self.tokens[self.at]
        self.at += 1
        return token

    def fail(self, message: str, pos: int):
        raise ValidationError(f"{message} at position {pos}")

    def parse(self) -> Expr:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            self.fail(f"unexpected {text!r}", pos)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = BinOp(op=text, left=node, right=self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = BinOp(op=text, left=node, right=self.factor())
            else:
                return node

    def factor(self) -> Expr:
        kind, text, pos = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(operand=self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            kind, text, pos = self.advance()
            if kind != "num" or not text.isdigit():
                shown = text if text else "end of input"
                self.fail(f"exponent must be a non-negative integer literal, got {shown!r}", pos)
            return BinOp(op="^", left=base, right=Num(value=float(int(text))))
        return base

    def atom(self) -> Expr:
        kind, text, pos = self.advance()
        if kind == "num":
            return Num(value=float(text))
        if kind == "ident":
            if text in FUNCTIONS:
                kind2, text2, pos2 = self.advance()
                if kind2 != "op" or text2 != "(":
                    self.fail(f"expected '(' after {text}", pos2)
                arg = self.expr()
                kind3, text3, pos3 = self.advance()
                if kind3 != "op" or text3 != ")":
                    self.fail(f"expected ')' to close {text}(", pos3)
                return Call(fn=text, arg=arg)
            var_match = re.fullmatch(r"x([0-9]+)", text)
            if var_match is None:
                self.fail(f"unknown identifier {text!r}", pos)
            index = int(var_match.group(1))
            if index < 1:
                self.fail("variable index must be >= 1", pos)
            if self.max_var is not None and index > self.max_var:
                self.fail(f"variable x{index} out of range 1..{self.max_var}", pos)
            return Var(index=index)
        if kind == "op" and text == "(":
            node = self.expr()
            kind2, text2, pos2 = self.advance()
            if kind2 != "op" or text2 != ")":
                self.fail("expected ')'", pos2)
            return node
        shown = text if text else "end of input"
        self.fail(f"expected a value, got {shown!r}", pos)


def parse_expr(text: str, max_var: int | None = None) -> Expr:
    """Parse an expression; max_var bounds the allowed variable indices.

    Raises ValidationError with a 1-based position on any syntax error,
    unknown identifier, or out-of-range variable.
    """
    if not isinstance(text, str) or not text.strip():
        raise ValidationError("empty expression")
    return _Parser(text, max_var).parse()


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 2
    return 4


def format_expr(node: Expr) -> str:
    """Print with minimal parentheses; parsing the output rebuilds the AST."""
    if isinstance(node, Num):
        if node.value < 0:
            raise ValidationError("negative literal outside a Neg node")
        return repr(node.value)
    if isinstance(node, Var):
        return f"x{node.index}"
    if isinstance(node, Neg):
        inner = format_expr(node.operand)
        # unary minus parses at factor level, so "-a * b" re-parses as
        # (-a) * b; any operand at or below term precedence needs parens
        # for the Neg node to survive the round trip.
        if _prec(node.operand) <= 2:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Call):
        return f"{node.fn}({format_expr(node.arg)})"
    if isinstance(node, BinOp):
        if node.op == "^":
            base = format_expr(node.left)
            # '^' does not chain in the grammar, so a power base that is
            # itself a power (or anything below atom precedence) needs
            # explicit parentheses to survive re-parsing.
            if _prec(node.left) <= 3:
                base = f"({base})"
            return f"{base}^{int(node.right.value)}"
        left = format_expr(node.left)
        right = format_expr(node.right)
        own = _PREC[node.op]
        if _prec(node.left) < own:
            left = f"({left})"
        if _prec(node.right) <= own:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    raise ValidationError(f"unknown node {node!r}")


def _num(value: float) -> Expr:
    return Num(value=value) if value >= 0 else Neg(operand=Num(value=-value))


def _is_zero(node: Expr) -> bool:
    return isinstance(node, Num) and node.value == 0.0


def _is_one(node: Expr) -> bool:
    return isinstance(node, Num) and node.value == 1.0


def _const(node: Expr) -> float | None:
    """Value of a (possibly Neg-wrapped) literal, else None."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Neg):
        inner = _const(node.operand)
        return None if inner is None else -inner
    return None


def add(a: Expr, b: Expr) -> Expr:
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    ca, cb = _const(a), _const(b)
    if ca is not None and cb is not None:
        return _num(ca + cb)
    return BinOp(op="+", left=a, right=b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is_zero(b):
        return a
    ca, cb = _const(a), _const(b)
    if ca is not None and cb is not None:
        return _num(ca - cb)
    if _is_zero(a):
        return neg(b)
    return BinOp(op="-", left=a, right=b)


def mul(a: Expr, b: Expr) -> Expr:
    if _is_zero(a) or _is_zero(b):
        return Num(value=0.0)
    if _is_one(a):
        return b
    if _is_one(b):
        return a
    ca, cb = _const(a), _const(b)
    if ca is not None and cb is not None:
        return _num(ca * cb)
    return BinOp(op="*", left=a, right=b)


def div(a: Expr, b: Expr) -> Expr:
    if _is_one(b):
        return a
    ca, cb = _const(a), _const(b)
    if ca is not None and cb is not None and cb != 0.0:
        return _num(ca / cb)
    return BinOp(op="/", left=a, right=b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Neg):
        return a.operand
    if _is_zero(a):
        return a
    return Neg(operand=a)


def pow_int(base: Expr, exponent: int) -> Expr:
    if exponent < 0:
        raise ValidationError(f"exponent must be non-negative, got {exponent}")
    if exponent == 0:
        return Num(value=1.0)
    if exponent == 1:
        return base
    return BinOp(op="^", left=base, right=Num(value=float(exponent)))


def diff_expr(node: Expr, index: int) -> Expr:
    """Exact partial derivative with respect to x<index>, lightly folded."""
    if index < 1:
        raise ValidationError(f"variable index must be >= 1, got {index}")
    if isinstance(node, Num):
        return Num(value=0.0)
    if isinstance(node, Var):
        return Num(value=1.0 if node.index == index else 0.0)
    if isinstance(node, Neg):
        return neg(diff_expr(node.operand, index))
    if isinstance(node, Call):
        inner = diff_expr(node.arg, index)
        if node.fn == "sin":
            return mul(Call(fn="cos", arg=node.arg), inner)
        if node.fn == "cos":
            return neg(mul(Call(fn="sin", arg=node.arg), inner))
        return mul(Call(fn="exp", arg=node.arg), inner)
    if isinstance(node, BinOp):
        if node.op == "+":
            return add(diff_expr(node.left, index), diff_expr(node.right, index))
        if node.op == "-":
            return sub(diff_expr(node.left, index), diff_expr(node.right, index))
        if node.op == "*":
            return add(
                mul(diff_expr(node.left, index), node.right),
                mul(node.left, diff_expr(node.right, index)),
            )
        if node.op == "/":
            numerator = sub(
                mul(diff_expr(node.left, index), node.right),
                mul(node.left, diff_expr(node.right, index)),
            )
            return div(numerator, pow_int(node.right, 2))
        exponent = int(node.right.value)
        scaled = mul(Num(value=float(exponent)), pow_int(node.left, exponent - 1))
        return mul(scaled, diff_expr(node.left, index))
    raise ValidationError(f"unknown node {node!r}")


def eval_expr(node: Expr, x) -> float:
    """Evaluate at the coordinate vector x (x[0] is x1).

    Division by zero and range overflow raise NumericalError; an out of
    range variable raises ValidationError.
    """
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        if node.index > len(x):
            raise ValidationError(
                f"variable x{node.index} out of range for a point of dimension {len(x)}"
            )
        return float(x[node.index - 1])
    if isinstance(node, Neg):
        return -eval_expr(node.operand, x)
    if isinstance(node, Call):
        value = eval_expr(node.arg, x)
        try:
            return getattr(math, node.fn)(value)
        except OverflowError:
            raise NumericalError(f"{node.fn} overflow at argument {value!r}") from None
    if isinstance(node, BinOp):
        left = eval_expr(node.left, x)
        if node.op == "^":
            try:
                return left ** int(node.right.value)
            except OverflowError:
                raise NumericalError(f"power overflow at base {left!r}") from None
        right = eval_expr(node.right, x)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if right == 0.0:
            raise NumericalError("division by zero in expression evaluation")
        return left / right
    raise ValidationError(f"unknown node {node!r}")
