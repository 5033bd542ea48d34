"""
Expression grammar shared by dataset polynomials and field elements.

    expr     := term (('+' | '-') term)*
    term     := unary ('*' unary)*
    unary    := ('-' | '+') unary | power
    power    := atom ('^' exponent)?
    exponent := INT | '-' INT | '(' '-'? INT ')'
    atom     := INT | IDENT | '(' expr ')'

Multiplication is always explicit and whitespace is insignificant. Parsing
produces a small tree that is evaluated against an ``ExpressionAlgebra``,
so the same grammar serves polynomial rings and bare finite fields.
"""

import re
from dataclasses import dataclass
from typing import Any, List, Optional, Protocol, Tuple

from src.services.base_service import ServiceValidationError

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


class ExpressionSyntaxError(ServiceValidationError):
    """Raised for malformed expressions; carries the character position."""

    def __init__(self, message: str, position: int, source: str = ""):
        self.position = position
        self.source = source
        super().__init__(f"{message} at position {position}" + (f" in {source!r}" if source else ""))


class UnknownSymbolError(ServiceValidationError):
    """Raised when an identifier is neither a variable, a parameter nor the field generator."""

    def __init__(self, name: str, position: Optional[int] = None):
        self.name = name
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"unknown symbol {name!r}{where}")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


@dataclass(frozen=True)
class Node:
    """Parsed expression node; ``value`` holds an int, a name or child nodes."""

    kind: str
    value: Any
    position: int


class ExpressionAlgebra(Protocol):
    """Operations an expression tree is evaluated with."""

    def constant(self, value: int) -> Any: ...

    def symbol(self, name: str, position: int) -> Any: ...

    def add(self, a: Any, b: Any) -> Any: ...

    def sub(self, a: Any, b: Any) -> Any: ...

    def mul(self, a: Any, b: Any) -> Any: ...

    def neg(self, a: Any) -> Any: ...

    def power(self, a: Any, exponent: int, position: int) -> Any: ...


def tokenize(source: str) -> List[Token]:
    tokens: List[Token] = []
    position = 0
    stripped_end = len(source.rstrip())
    while position < stripped_end:
        match = _TOKEN_RE.match(source, position)
        if not match or match.end() == position:
            start = position + (len(source[position:]) - len(source[position:].lstrip()))
            raise ExpressionSyntaxError(f"unexpected character {source[start]!r}", start, source)
        kind = match.lastgroup or "op"
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(Token("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _error(self, message: str, token: Optional[Token] = None) -> ExpressionSyntaxError:
        token = token or self.current
        return ExpressionSyntaxError(message, token.position, self.source)

    def _accept(self, text: str) -> Optional[Token]:
        token = self.current
        if token.kind == "op" and token.text == text:
            self.index += 1
            return token
        return None

    def _expect(self, text: str) -> Token:
        token = self._accept(text)
        if token is None:
            found = self.current.text or "end of input"
            raise self._error(f"expected {text!r}, found {found!r}")
        return token

    def parse(self) -> Node:
        if self.current.kind == "end":
            raise self._error("empty expression")
        node = self._expr()
        if self.current.kind != "end":
            raise self._error(f"unexpected {self.current.text!r}")
        return node

    def _expr(self) -> Node:
        node = self._term()
        while True:
            token = self._accept("+") or self._accept("-")
            if token is None:
                return node
            rhs = self._term()
            node = Node("add" if token.text == "+" else "sub", (node, rhs), token.position)

    def _term(self) -> Node:
        node = self._unary()
        while True:
            token = self._accept("*")
            if token is None:
                return node
            node = Node("mul", (node, self._unary()), token.position)

    def _unary(self) -> Node:
        token = self._accept("-")
        if token is not None:
            return Node("neg", self._unary(), token.position)
        if self._accept("+") is not None:
            return self._unary()
        return self._power()

    def _power(self) -> Node:
        node = self._atom()
        token = self._accept("^")
        if token is not None:
            node = Node("pow", (node, self._exponent()), token.position)
        following = self.current
        if following.kind in ("int", "ident") or (following.kind == "op" and following.text == "("):
            raise self._error("multiplication must be written with '*'")
        return node

    def _exponent(self) -> int:
        if self._accept("(") is not None:
            value = self._signed_int()
            self._expect(")")
            return value
        return self._signed_int()

    def _signed_int(self) -> int:
        sign = -1 if self._accept("-") is not None else 1
        token = self.current
        if token.kind != "int":
            raise self._error("exponent must be an integer literal")
        self.index += 1
        return sign * int(token.text)

    def _atom(self) -> Node:
        token = self.current
        if token.kind == "int":
            self.index += 1
            return Node("int", int(token.text), token.position)
        if token.kind == "ident":
            self.index += 1
            return Node("sym", token.text, token.position)
        if self._accept("(") is not None:
            node = self._expr()
            self._expect(")")
            return node
        found = token.text or "end of input"
        raise self._error(f"unexpected {found!r}")


def parse_expression(source: str) -> Node:
    """Parse source text into an expression tree."""
    return _Parser(source).parse()


def evaluate(node: Node, algebra: ExpressionAlgebra) -> Any:
    kind = node.kind
    if kind == "int":
        return algebra.constant(node.value)
    if kind == "sym":
        return algebra.symbol(node.value, node.position)
    if kind == "neg":
        return algebra.neg(evaluate(node.value, algebra))
    if kind == "pow":
        base, exponent = node.value
        return algebra.power(evaluate(base, algebra), exponent, node.position)
    lhs, rhs = node.value
    a, b = evaluate(lhs, algebra), evaluate(rhs, algebra)
    if kind == "add":
        return algebra.add(a, b)
    if kind == "sub":
        return algebra.sub(a, b)
    return algebra.mul(a, b)


def symbols_of(node: Node) -> List[Tuple[str, int]]:
    """Identifiers used in an expression with their positions."""
    if node.kind == "sym":
        return [(node.value, node.position)]
    if node.kind == "int":
        return []
    if node.kind == "neg":
        return symbols_of(node.value)
    if node.kind == "pow":
        return symbols_of(node.value[0])
    return symbols_of(node.value[0]) + symbols_of(node.value[1])


__all__ = [
    "ExpressionSyntaxError",
    "UnknownSymbolError",
    "ExpressionAlgebra",
    "Node",
    "Token",
    "tokenize",
    "parse_expression",
    "evaluate",
    "symbols_of",
]
