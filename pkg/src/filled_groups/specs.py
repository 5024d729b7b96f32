"""Group construction recipes: AST, parser and canonical printer.

Grammar (whitespace is ignored)::

    spec := atom | spec "x" atom | spec "*" atom
    atom := NAME "(" INT ")" | "(" spec ")"
    NAME := "C" | "D" | "Q" | "EA" | "ESP" | "ESM" | "ESC4"

``x`` is the direct product and ``*`` the central product; ``∗`` and ``×``
are accepted as aliases.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import ParseError, SpecDomainError

KINDS = ("C", "D", "Q", "EA", "ESP", "ESM", "ESC4")
_OP_ALIASES = {"x": "x", "×": "x", "*": "*", "∗": "*"}


@dataclass(frozen=True)
class Atom:
    kind: str
    param: int

    def __str__(self) -> str:
        return f"{self.kind}({self.param})"


@dataclass(frozen=True)
class Product:
    op: str  # "x" (direct) or "*" (central)
    left: "GroupSpec"
    right: "GroupSpec"

    def __str__(self) -> str:
        return canonical(self)


GroupSpec = Union[Atom, Product]


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def validate_atom(kind: str, n: int) -> None:
    """Raise SpecDomainError unless ``kind(n)`` names a group we can build."""
    if kind == "C":
        ok, need = n >= 1, "n >= 1"
    elif kind == "D":
        ok, need = n >= 6 and n % 2 == 0, "an even order >= 6"
    elif kind == "Q":
        ok, need = n >= 8 and n % 4 == 0, "an order divisible by 4 and >= 8"
    elif kind == "EA":
        ok, need = n >= 2 and _is_power_of_two(n), "a power of 2"
    elif kind in ("ESP", "ESM"):
        ok = n >= 8 and _is_power_of_two(n) and n.bit_length() % 2 == 0
        need = "an odd power of 2, at least 8"
    elif kind == "ESC4":
        ok = n >= 16 and _is_power_of_two(n) and n.bit_length() % 2 == 1
        need = "an even power of 2, at least 16"
    else:
        raise SpecDomainError(f"unknown constructor {kind!r}")
    if not ok:
        raise SpecDomainError(f"{kind}({n}): parameter must be {need}")


def spec_order(spec: GroupSpec) -> int:
    if isinstance(spec, Atom):
        return spec.param
    left, right = spec_order(spec.left), spec_order(spec.right)
    return left * right if spec.op == "x" else left * right // 2


def canonical(spec: GroupSpec) -> str:
    """Print ``spec`` so that ``parse_group_spec(canonical(s)) == s``."""
    if isinstance(spec, Atom):
        return str(spec)
    left = canonical(spec.left)
    if isinstance(spec.left, Product) and spec.left.op != spec.op:
        left = f"({left})"
    right = canonical(spec.right)
    if isinstance(spec.right, Product):
        right = f"({right})"
    return f"{left}{spec.op}{right}"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def offset(self) -> int:
        return len(self.text[: self.pos].encode("utf-8"))

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, message: str, expected: tuple[str, ...]) -> ParseError:
        return ParseError(message, self.offset(), expected)

    def expect(self, char: str) -> None:
        if self.peek() != char:
            found = self.peek() or "end of input"
            raise self.fail(f"unexpected {found!r}", (repr(char),))
        self.pos += 1

    def spec(self) -> GroupSpec:
        node = self.atom()
        while self.peek() in _OP_ALIASES:
            op = _OP_ALIASES[self.text[self.pos]]
            self.pos += 1
            node = Product(op, node, self.atom())
        return node

    def atom(self) -> GroupSpec:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            node = self.spec()
            self.expect(")")
            return node
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isupper() or self.text[self.pos].isdigit()):
            self.pos += 1
        name = self.text[start : self.pos]
        if name not in KINDS:
            self.pos = start
            found = ch or "end of input"
            raise self.fail(f"unexpected {found!r}", tuple(KINDS) + ("'('",))
        self.expect("(")
        self.skip_ws()
        digits_start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if digits_start == self.pos:
            raise self.fail("missing integer parameter", ("integer",))
        value = int(self.text[digits_start : self.pos])
        self.expect(")")
        validate_atom(name, value)
        return Atom(name, value)


def parse_group_spec(text: str) -> GroupSpec:
    """Parse recipe text such as ``"(D(8)*Q(8))xC(2)"``.

    Raises ParseError for syntax problems and SpecDomainError for parameters
    outside a constructor's domain (e.g. ``C(0)``).
    """
    parser = _Parser(text)
    if not parser.peek():
        raise parser.fail("empty group spec", tuple(KINDS) + ("'('",))
    node = parser.spec()
    if parser.peek():
        raise parser.fail(f"trailing input {parser.peek()!r}", ("'x'", "'*'"))
    return node
