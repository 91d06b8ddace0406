"""Parsing and canonical formatting of polynomials with rational coefficients.

Grammar (whitespace is ignored between tokens)::

    poly   := ['+'|'-'] term (('+'|'-') term)*
    term   := coeff ['*'] factor ('*' factor)*  |  factor ('*' factor)*  |  coeff
    factor := ident ['^' nat]
    coeff  := int | int '/' nat

Identifiers are an ASCII letter followed by letters, digits or underscores, so
``xy`` is a single variable and never ``x*y``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NegativeExponentError, PolySyntaxError, ZeroPolynomialError

__all__ = ["QHPolynomial", "parse_poly", "format_poly", "format_terms", "format_rational"]


def _canonical_terms(terms):
    # lexicographic descending on exponent tuples; duplicates merged, zeros dropped
    merged = {}
    for coeff, exps in terms:
        exps = tuple(int(e) for e in exps)
        merged[exps] = merged.get(exps, Fraction(0)) + Fraction(coeff)
    return tuple(
        (c, e) for e, c in sorted(merged.items(), key=lambda kv: kv[0], reverse=True) if c != 0
    )


@dataclass(frozen=True)
class QHPolynomial:
    """Immutable polynomial ``W = sum_i c_i prod_j x_j^{b_ij}``.

    ``monomials`` holds ``(coefficient, exponents)`` pairs in canonical order;
    row ``i`` of :attr:`exponent_matrix` is the exponent tuple of monomial ``i``.
    """

    variables: tuple
    monomials: tuple

    def __post_init__(self):
        variables = tuple(self.variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        for _, exps in self.monomials:
            if len(exps) != len(variables):
                raise ValueError("exponent tuple length does not match variable count")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "monomials", _canonical_terms(self.monomials))

    @classmethod
    def from_terms(cls, variables: Sequence[str], terms: Iterable) -> "QHPolynomial":
        return cls(tuple(variables), tuple(terms))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def nterms(self) -> int:
        return len(self.monomials)

    @property
    def coefficients(self):
        return [c for c, _ in self.monomials]

    @property
    def exponent_matrix(self):
        return [list(e) for _, e in self.monomials]

    def is_zero(self) -> bool:
        return not self.monomials

    def derivative(self, index: int) -> "QHPolynomial":
        terms = []
        for c, e in self.monomials:
            if e[index] == 0:
                continue
            new = list(e)
            new[index] -= 1
            terms.append((c * e[index], tuple(new)))
        return QHPolynomial(self.variables, tuple(terms))

    def gradient(self):
        return [self.derivative(i) for i in range(self.nvars)]

    def evaluate(self, point):
        """Evaluate at ``point``; Fractions stay exact, floats/complex stay numeric."""
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        total = 0
        for c, e in self.monomials:
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * x**k
            total = total + term
        return total

    def evaluate_monomial(self, index: int, point):
        c, e = self.monomials[index]
        term = c
        for x, k in zip(point, e):
            if k:
                term = term * x**k
        return term

    def to_mpoly(self):
        from .mpoly import MPoly

        return MPoly(self.variables, {e: c for c, e in self.monomials})

    def __str__(self):
        return format_poly(self)


def format_rational(value) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_terms(variables: Sequence[str], terms) -> str:
    """Render ``(coefficient, exponents)`` pairs, already ordered, as grammar text."""
    if not terms:
        return "0"
    pieces = []
    for idx, (coeff, exps) in enumerate(terms):
        coeff = Fraction(coeff)
        sign = "-" if coeff < 0 else "+"
        mag = abs(coeff)
        factors = []
        for name, k in zip(variables, exps):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        if not factors:
            body = format_rational(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = format_rational(mag) + "*" + "*".join(factors)
        if idx == 0:
            pieces.append(("-" if sign == "-" else "") + body)
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


def format_poly(P: QHPolynomial) -> str:
    return format_terms(P.variables, P.monomials)


_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text, variables):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.fixed = variables is not None
        self.variables = list(variables) if variables is not None else []

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise PolySyntaxError(message, self.text, tok[2])

    def expect_op(self, op):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != op:
            self.fail(f"expected {op!r}")
        return self.take()

    def parse(self):
        terms = []
        sign = 1
        tok = self.peek()
        if tok[0] == "end":
            self.fail("empty polynomial")
        if tok[0] == "op" and tok[1] in "+-":
            sign = -1 if tok[1] == "-" else 1
            self.take()
        terms.append(self.term(sign))
        while True:
            tok = self.peek()
            if tok[0] == "end":
                break
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                terms.append(self.term(-1 if tok[1] == "-" else 1))
                continue
            if tok[0] == "ident":
                self.fail("implicit multiplication is not allowed; use '*'")
            self.fail(f"unexpected token {tok[1]!r}")
        return terms

    def term(self, sign):
        coeff = Fraction(sign)
        powers = {}
        tok = self.peek()
        if tok[0] == "int":
            coeff *= self.coefficient()
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                if self.peek()[0] != "ident":
                    self.fail("expected variable after '*'")
                self.factor(powers)
            elif tok[0] == "ident":
                self.factor(powers)
            else:
                return coeff, powers
        elif tok[0] == "ident":
            self.factor(powers)
        else:
            self.fail("expected coefficient or variable")
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            if self.peek()[0] != "ident":
                self.fail("expected variable after '*'")
            self.factor(powers)
        return coeff, powers

    def coefficient(self):
        num = int(self.take()[1])
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "/":
            self.take()
            den_tok = self.peek()
            if den_tok[0] != "int":
                self.fail("expected natural number denominator")
            den = int(self.take()[1])
            if den == 0:
                self.fail("zero denominator", den_tok)
            return Fraction(num, den)
        return Fraction(num)

    def factor(self, powers):
        tok = self.take()
        name = tok[1]
        if name not in self.variables:
            if self.fixed:
                raise PolySyntaxError(f"unknown variable {name!r}", self.text, tok[2])
            self.variables.append(name)
        exponent = 1
        nxt = self.peek()
        if nxt[0] == "op" and nxt[1] == "^":
            self.take()
            etok = self.peek()
            if etok[0] == "op" and etok[1] == "-":
                raise NegativeExponentError("negative exponent", self.text, etok[2])
            if etok[0] != "int":
                self.fail("expected natural number exponent")
            exponent = int(self.take()[1])
        powers[name] = powers.get(name, 0) + exponent


def parse_poly(text: str, variables: Sequence[str] | None = None) -> QHPolynomial:
    """Parse ``text`` into a canonical :class:`QHPolynomial`.

    Variable order is ``variables`` when given, otherwise first appearance.

    >>> format_poly(parse_poly("x*y^3 + x^3"))
    'x^3 + x*y^3'
    """
    parser = _Parser(text, variables)
    raw = parser.parse()
    names = parser.variables
    terms = [(c, tuple(p.get(v, 0) for v in names)) for c, p in raw]
    poly = QHPolynomial(tuple(names), tuple(terms))
    if poly.is_zero():
        raise ZeroPolynomialError(f"{text!r} is the zero polynomial")
    return poly
