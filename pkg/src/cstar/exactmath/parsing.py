"""Recursive-descent parser for rational polynomial expressions.

Grammar (whitespace insignificant)::

    expr   := [+|-] term (('+'|'-') term)*
    term   := unary (['*'|'/'] unary)*        # juxtaposition multiplies
    unary  := ('+'|'-') unary | power
    power  := atom ['^' [+|-] INT | '^' '(' [+|-] INT ')']
    atom   := INT | VAR | DVAR | '(' expr ')'

VAR is one of x, y (polynomial ring) or t, u (Laurent ring); DVAR is the
same letter prefixed by 'd' and may only occur linearly.  Division is
allowed by nonzero constants and, in the Laurent ring, by monomials in u.
"""

from __future__ import annotations

from .poly import LAURENT, XY, Poly2


class ParseError(ValueError):
    pass


_LETTERS = {"x": (XY, 0), "y": (XY, 1), "t": (LAURENT, 0), "u": (LAURENT, 1)}


def _tokenize(text: str) -> list[tuple[str, object]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", int(text[i:j])))
            i = j
        elif ch.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            word = text[i:j]
            k = 0
            while k < len(word):
                if word[k] == "d" and k + 1 < len(word) and word[k + 1] in _LETTERS:
                    tokens.append(("dvar", word[k + 1]))
                    k += 2
                elif word[k] in _LETTERS:
                    tokens.append(("var", word[k]))
                    k += 1
                else:
                    raise ParseError(f"unexpected symbol {word!r} at position {i}")
            i = j
        elif ch in "+-*/^()":
            tokens.append((ch, ch))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r} at position {i}")
    return tokens


def _detect_kind(tokens, kind: str | None) -> str:
    kinds = {_LETTERS[v][0] for tag, v in tokens if tag in ("var", "dvar")}
    if len(kinds) > 1:
        raise ParseError("expression mixes x,y with t,u")
    found = kinds.pop() if kinds else None
    if kind is not None and found is not None and found != kind:
        raise ParseError(f"variables of ring {found} used where {kind} expected")
    return kind or found or XY


class _Parser:
    # values are dicts {None: scalar part, 0: coefficient of d0, 1: coefficient of d1}

    def __init__(self, tokens, kind):
        self.tokens = tokens
        self.pos = 0
        self.kind = kind

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self, tag=None):
        if self.pos >= len(self.tokens):
            raise ParseError("unexpected end of input")
        tok = self.tokens[self.pos]
        if tag is not None and tok[0] != tag:
            raise ParseError(f"expected {tag!r}, found {tok[1]!r}")
        self.pos += 1
        return tok

    def const(self, c):
        return {None: Poly2.const(c, self.kind)}

    def add(self, a, b, sign=1):
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, Poly2.zero(self.kind)) + (v if sign > 0 else -v)
        return out

    def mul(self, a, b):
        if _has_d(a) and _has_d(b):
            raise ParseError("product of two differential symbols")
        if _has_d(a):
            a, b = b, a
        s = a.get(None, Poly2.zero(self.kind))
        return {k: s * v for k, v in b.items()}

    def div(self, a, b):
        if _has_d(b):
            raise ParseError("division by a differential symbol")
        d = b.get(None, Poly2.zero(self.kind))
        c = d.constant_value()
        if c is not None:
            if c == 0:
                raise ParseError("division by zero")
            return {k: v * (1 / c) for k, v in a.items()}
        try:
            inv = d.monomial_inverse()
        except ValueError:
            raise ParseError(f"cannot divide by {d}") from None
        return {k: v * inv for k, v in a.items()}

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        val = self.term()
        if sign < 0:
            val = self.mul(self.const(-1), val)
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            val = self.add(val, self.term(), 1 if op == "+" else -1)
        return val

    def term(self):
        val = self.unary()
        while True:
            tag = self.peek()
            if tag == "*":
                self.take()
                val = self.mul(val, self.unary())
            elif tag == "/":
                self.take()
                val = self.div(val, self.unary())
            elif tag in ("num", "var", "dvar", "("):
                val = self.mul(val, self.unary())
            else:
                return val

    def unary(self):
        if self.peek() in ("+", "-"):
            op = self.take()[0]
            val = self.unary()
            return self.mul(self.const(-1), val) if op == "-" else val
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() != "^":
            return base
        self.take()
        paren = self.peek() == "("
        if paren:
            self.take()
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        exp = sign * self.take("num")[1]
        if paren:
            self.take(")")
        if _has_d(base):
            if exp != 1:
                raise ParseError("differential symbol raised to a power")
            return base
        p = base.get(None, Poly2.zero(self.kind))
        try:
            return {None: p ** exp}
        except ValueError as err:
            raise ParseError(str(err)) from None

    def atom(self):
        tag, val = self.take()
        if tag == "num":
            return self.const(val)
        if tag == "var":
            idx = _LETTERS[val][1]
            return {None: Poly2.gens(self.kind)[idx]}
        if tag == "dvar":
            return {_LETTERS[val][1]: Poly2.const(1, self.kind)}
        if tag == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected token {val!r}")


def _has_d(val) -> bool:
    return any(k is not None and not v.is_zero() for k, v in val.items())


def _parse(text: str, kind: str | None):
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression")
    kind = _detect_kind(tokens, kind)
    parser = _Parser(tokens, kind)
    val = parser.expr()
    if parser.pos != len(tokens):
        raise ParseError(f"trailing input at token {tokens[parser.pos][1]!r}")
    return val, kind


def parse_polynomial(text: str, kind: str | None = None) -> Poly2:
    val, kind = _parse(text, kind)
    if _has_d(val):
        raise ParseError("differential symbol in a polynomial expression")
    return val.get(None, Poly2.zero(kind))


def parse_linear_form(text: str, kind: str | None = None) -> tuple[Poly2, Poly2, Poly2, str]:
    """Parse ``P d<v1> + Q d<v2> [+ R]`` and return (R, P, Q, kind)."""
    val, kind = _parse(text, kind)
    zero = Poly2.zero(kind)
    return val.get(None, zero), val.get(0, zero), val.get(1, zero), kind


__all__ = ["ParseError", "parse_polynomial", "parse_linear_form"]
