"""Text form of polynomials, forms and polyvectors.

Grammar (whitespace is ignored except inside numbers)::

    expr      := ['+'|'-'] term (('+'|'-') term)*
    term      := coeff [basis] | basis
    coeff     := rational ('*'? monom)* | monom ('*'? monom)*
    rational  := integer ['/' positive-integer]
    monom     := 'x' index ['^' exponent]
    basis     := 'dx' index ('^' 'dx' index)*  |  '@' index ('^' '@' index)*

A repeated basis index makes the term vanish; unsorted indices are
sign-normalized.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .exterior import DifferentialForm, Polyvector, sort_indices
from .symcore import Polynomial, add_into

Value = Union[Polynomial, DifferentialForm, Polyvector]

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<dx>dx)|(?P<x>x)|(?P<at>@)|(?P<op>[-+*/^]))"
)


class ParseError(ValueError):
    """Syntax or range error, annotated with the character offset."""

    def __init__(self, message: str, text: str, pos: int):
        self.pos = pos
        self.text = text
        pointer = " " * pos + "^"
        super().__init__(f"{message} at position {pos}\n  {text}\n  {pointer}")


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.toks: List[Tuple[str, str, int]] = []
        pos = 0
        n = len(text)
        while pos < n:
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
            kind = m.lastgroup
            start = m.start(kind)
            self.toks.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def peek(self, offset: int = 0) -> Optional[Tuple[str, str, int]]:
        j = self.i + offset
        return self.toks[j] if j < len(self.toks) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.text, len(self.text))
        self.i += 1
        return tok

    def accept(self, kind: str, value: str | None = None) -> bool:
        tok = self.peek()
        if tok is not None and tok[0] == kind and (value is None or tok[1] == value):
            self.i += 1
            return True
        return False

    def pos(self) -> int:
        tok = self.peek()
        return tok[2] if tok else len(self.text)


def _index(lx: _Lexer, dim: int) -> int:
    tok = lx.next()
    if tok[0] != "int":
        raise ParseError("expected an index", lx.text, tok[2])
    i = int(tok[1])
    if not 1 <= i <= dim:
        raise ParseError(f"coordinate index {i} out of range 1..{dim}", lx.text, tok[2])
    return i


def _monom(lx: _Lexer, dim: int, exps: List[int]) -> None:
    lx.next()  # 'x'
    i = _index(lx, dim)
    e = 1
    if lx.peek() and lx.peek()[:2] == ("op", "^") and lx.peek(1) and lx.peek(1)[0] == "int":
        lx.next()
        e = int(lx.next()[1])
    exps[i - 1] += e


def _basis(lx: _Lexer, dim: int) -> Tuple[str, List[int]]:
    first = lx.peek()
    kind = first[0]
    idx = []
    while True:
        lx.next()
        idx.append(_index(lx, dim))
        nxt = lx.peek()
        if nxt and nxt[:2] == ("op", "^"):
            after = lx.peek(1)
            if after is None or after[0] != kind:
                raise ParseError("expected a basis factor after '^'", lx.text, nxt[2])
            lx.next()
            continue
        return kind, idx


def _term(lx: _Lexer, dim: int):
    coeff = Fraction(1)
    exps = [0] * dim
    tok = lx.peek()
    if tok is None:
        raise ParseError("expected a term", lx.text, len(lx.text))
    saw_factor = False
    if tok[0] == "int":
        lx.next()
        num = int(tok[1])
        if lx.peek() and lx.peek()[:2] == ("op", "/"):
            lx.next()
            den_tok = lx.next()
            if den_tok[0] != "int" or int(den_tok[1]) == 0:
                raise ParseError("expected a positive denominator", lx.text, den_tok[2])
            coeff = Fraction(num, int(den_tok[1]))
        else:
            coeff = Fraction(num)
        saw_factor = True
    while True:
        tok = lx.peek()
        if tok is None:
            break
        if tok[:2] == ("op", "*"):
            if not saw_factor or lx.peek(1) is None or lx.peek(1)[0] != "x":
                raise ParseError("'*' must join coefficient factors", lx.text, tok[2])
            lx.next()
            continue
        if tok[0] == "x":
            _monom(lx, dim, exps)
            saw_factor = True
            continue
        break
    basis = None
    tok = lx.peek()
    if tok is not None and tok[0] in ("dx", "at"):
        basis = _basis(lx, dim)
    elif not saw_factor:
        pos = tok[2] if tok else len(lx.text)
        raise ParseError("expected a coefficient or basis element", lx.text, pos)
    return coeff, tuple(exps), basis


def parse_expression(text: str, dim: int) -> Value:
    """Parse ``text`` into a Polynomial, DifferentialForm or Polyvector."""
    if dim < 1:
        raise ValueError("dimension must be positive")
    lx = _Lexer(text)
    if not lx.toks:
        raise ParseError("empty expression", text, 0)
    terms = {}
    kinds = set()
    sign = 1
    if lx.accept("op", "-"):
        sign = -1
    else:
        lx.accept("op", "+")
    while True:
        coeff, mono, basis = _term(lx, dim)
        if basis is None:
            idx: Tuple[int, ...] = ()
        else:
            kinds.add(basis[0])
            s = sort_indices(basis[1])
            if s is None:
                coeff = Fraction(0)
                idx = ()
            else:
                coeff *= s[0]
                idx = s[1]
        add_into(terms, (mono, idx), sign * coeff)
        tok = lx.peek()
        if tok is None:
            break
        if tok[:2] == ("op", "+"):
            sign = 1
        elif tok[:2] == ("op", "-"):
            sign = -1
        else:
            raise ParseError(f"unexpected {tok[1]!r}", text, tok[2])
        lx.next()
    if len(kinds) > 1:
        raise ParseError("cannot mix dx and @ bases in one expression", text, 0)
    if not kinds:
        return Polynomial(dim, {m: c for (m, _), c in terms.items()})
    cls = DifferentialForm if kinds == {"dx"} else Polyvector
    return cls._raw(dim, terms)


def parse_polynomial(text: str, dim: int) -> Polynomial:
    v = parse_expression(text, dim)
    if isinstance(v, Polynomial):
        return v
    if not v.degrees() - {0}:
        return v.to_polynomial()
    raise ParseError("expected a polynomial", text, 0)


def parse_form(text: str, dim: int) -> DifferentialForm:
    v = parse_expression(text, dim)
    if isinstance(v, Polynomial):
        return DifferentialForm.function(v)
    if isinstance(v, Polyvector):
        if v.is_zero():
            return DifferentialForm.zero(dim)
        raise ParseError("expected a differential form", text, 0)
    return v


def parse_polyvector(text: str, dim: int) -> Polyvector:
    v = parse_expression(text, dim)
    if isinstance(v, Polynomial):
        return Polyvector.function(v)
    if isinstance(v, DifferentialForm):
        if v.is_zero():
            return Polyvector.zero(dim)
        raise ParseError("expected a polyvector", text, 0)
    return v


# -- rendering --------------------------------------------------------------


def _render_monomial(m) -> str:
    parts = []
    for i, e in enumerate(m, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


def _render_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _render_basis(idx, prefix: str) -> str:
    return "^".join(f"{prefix}{i}" for i in idx)


def _render_term(m, c: Fraction, basis: str) -> Tuple[bool, str]:
    mono = _render_monomial(m)
    a = abs(c)
    if mono and a == 1:
        body = mono
    elif mono:
        body = f"{_render_rational(a)}*{mono}"
    else:
        body = _render_rational(a)
    if basis:
        body = f"{body} {basis}"
    return c < 0, body


def _join(pieces) -> str:
    if not pieces:
        return "0"
    out = []
    for k, (neg, body) in enumerate(pieces):
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def render_canonical(value) -> str:
    """Deterministic text for a Polynomial, form, polyvector, Word or tensor."""
    if isinstance(value, Polynomial):
        return _join([_render_term(m, c, "") for m, c in value.sorted_terms()])
    if isinstance(value, (DifferentialForm, Polyvector)):
        prefix = "dx" if isinstance(value, DifferentialForm) else "@"
        return _join(
            [
                _render_term(m, c, _render_basis(idx, prefix))
                for (m, idx), c in value.sorted_terms()
            ]
        )
    render = getattr(value, "render", None)
    if render is not None:
        return render()
    raise TypeError(f"cannot render {type(value).__name__}")


def render_letter(mono, idx) -> str:
    neg, body = _render_term(mono, Fraction(1), _render_basis(idx, "dx"))
    return f"s({body})"


def render_scaled(c: Fraction, body: str) -> Tuple[bool, str]:
    a = abs(c)
    text = body if a == 1 else f"{_render_rational(a)} {body}"
    return c < 0, text


join_terms = _join
