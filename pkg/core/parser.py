"""
Text to Expr parser.

Grammar (whitespace-insensitive):

    expr      := term (('+' | '-') term)*
    term      := unary (('*' | '/') unary)*
    unary     := ('-' | '+') unary | power
    power     := primary ('^' unary)?          # right-associative, constant exponent
    primary   := NUMBER | 'x' | 'pi' | 'e'
               | FUNC '(' expr ')'
               | '(' expr ')'
               | 'piecewise' '{' piece (';' piece)* ';'? '}'
    piece     := '[' expr ',' expr ']' ':' expr  # guard bounds must be constant

FUNC is one of abs, exp, ln (alias log), sin, cos, sqrt, sgn (alias sign).
"""

import logging
import math
import re
from dataclasses import dataclass
from typing import List, Optional

from core.expr import (
    ArgumentError,
    DomainError,
    Const,
    Expr,
    ExprSyntaxError,
    Interval,
    Piecewise,
    UnknownIdentifierError,
    Var,
    add,
    div,
    mul,
    neg,
    power,
    sub,
    unary,
)

logger = logging.getLogger(__name__)

FUNCTIONS = {
    "abs": "abs",
    "exp": "exp",
    "ln": "ln",
    "log": "ln",
    "sin": "sin",
    "cos": "cos",
    "sqrt": "sqrt",
    "sgn": "sgn",
    "sign": "sgn",
}

CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()\[\]{},;:])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # number | ident | op | end
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    """Split text into tokens; unknown characters raise ExprSyntaxError."""
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ExprSyntaxError(f"unexpected character '{text[pos]}'", pos)
        kind = match.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, match.group(), pos))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def _accept(self, op: str) -> Optional[Token]:
        if self.current.kind == "op" and self.current.text == op:
            return self._advance()
        return None

    def _expect(self, op: str) -> Token:
        token = self._accept(op)
        if token is None:
            found = self.current.text or "end of input"
            raise ExprSyntaxError(f"expected '{op}' but found '{found}'", self.current.position)
        return token

    def parse(self) -> Expr:
        if self.current.kind == "end":
            raise ExprSyntaxError("empty expression", 0)
        result = self.expr()
        if self.current.kind != "end":
            raise ExprSyntaxError(f"unexpected '{self.current.text}'", self.current.position)
        return result

    def expr(self) -> Expr:
        left = self.term()
        while True:
            if self._accept("+"):
                left = add(left, self.term())
            elif self._accept("-"):
                left = sub(left, self.term())
            else:
                return left

    def term(self) -> Expr:
        left = self.unary()
        while True:
            if self._accept("*"):
                left = mul(left, self.unary())
            elif self._accept("/"):
                token = self.current
                right = self.unary()
                if isinstance(right, Const) and right.value == 0:
                    raise ExprSyntaxError("division by the constant zero", token.position)
                left = div(left, right)
            else:
                return left

    def unary(self) -> Expr:
        if self._accept("-"):
            return neg(self.unary())
        if self._accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        caret = self._accept("^")
        if caret is None:
            return base
        exponent = self.unary()
        if not exponent.is_constant():
            raise ExprSyntaxError("exponent must be constant; write exp(b*ln(a))", caret.position)
        value = self._constant_value(exponent, caret.position)
        try:
            return power(base, value)
        except DomainError as exc:
            raise ExprSyntaxError(str(exc), caret.position) from exc

    def _constant_value(self, e: Expr, position: int) -> float:
        try:
            return float(e.evaluate(0.0))
        except (ArgumentError, DomainError) as exc:
            raise ExprSyntaxError(str(exc), position) from exc

    def primary(self) -> Expr:
        token = self.current
        if token.kind == "number":
            self._advance()
            return Const(float(token.text))
        if token.kind == "ident":
            self._advance()
            name = token.text
            if name == "x":
                return Var()
            if name in CONSTANTS:
                return Const(CONSTANTS[name])
            if name == "piecewise":
                return self.piecewise(token)
            if name in FUNCTIONS:
                self._expect("(")
                arg = self.expr()
                self._expect(")")
                try:
                    return unary(FUNCTIONS[name], arg)
                except DomainError as exc:
                    # constant arguments are folded here
                    raise ExprSyntaxError(str(exc), token.position) from exc
            raise UnknownIdentifierError(f"unknown identifier '{name}'", token.position)
        if self._accept("("):
            inner = self.expr()
            self._expect(")")
            return inner
        found = token.text or "end of input"
        raise ExprSyntaxError(f"unexpected '{found}'", token.position)

    def piecewise(self, keyword: Token) -> Expr:
        self._expect("{")
        pieces = []
        while True:
            bracket = self._expect("[")
            lo = self.expr()
            self._expect(",")
            hi = self.expr()
            self._expect("]")
            self._expect(":")
            body = self.expr()
            if not (lo.is_constant() and hi.is_constant()):
                raise ExprSyntaxError("piecewise guard bounds must be constant", bracket.position)
            lo_val = self._constant_value(lo, bracket.position)
            hi_val = self._constant_value(hi, bracket.position)
            try:
                guard = Interval(lo_val, hi_val)
            except ArgumentError as exc:
                raise ExprSyntaxError(f"bad piecewise guard: {exc}", bracket.position) from exc
            pieces.append((guard, body))
            if self._accept(";"):
                if self._accept("}"):
                    break
                continue
            self._expect("}")
            break
        # OverlappingPiecesError / PiecewiseGuardError propagate unchanged
        return Piecewise(tuple(pieces))


def parse(text: str) -> Expr:
    """
    Parse function text into an Expr.

    Args:
        text: e.g. "x^2/6", "sgn(x-0.5)", "piecewise{[0,0.5]: -1; [0.5,1]: 1}"

    Returns:
        Expression tree

    Raises:
        ExprSyntaxError: Malformed text (carries .position)
        UnknownIdentifierError: Unknown name (carries .position)
        OverlappingPiecesError: Piecewise guards overlap
    """
    result = _Parser(text).parse()
    logger.debug(f"parsed {text!r} -> {result.to_text()}")
    return result
