"""Sparse multivariate polynomials over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .polyparse import format_terms, parse_poly

__all__ = ["MPoly"]


class MPoly:
    """Polynomial stored as ``{exponent tuple: Fraction}`` with no zero entries.

    All binary operations require identical variable tuples; use
    :meth:`with_variables` to align operands first.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping | None = None):
        self.variables = tuple(variables)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.variables):
                raise ValueError("exponent length mismatch")
            c = Fraction(c)
            if c != 0:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if clean[exps] == 0:
                    del clean[exps]
        self.terms = clean

    # construction -------------------------------------------------------

    @classmethod
    def constant(cls, variables, value):
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def var(cls, variables, name, power=1):
        exps = [0] * len(variables)
        exps[list(variables).index(name)] = power
        return cls(variables, {tuple(exps): 1})

    @classmethod
    def parse(cls, text, variables=None):
        return parse_poly(text, variables).to_mpoly()

    def with_variables(self, names: Sequence[str]) -> "MPoly":
        names = tuple(names)
        missing = [v for v in self.variables if v not in names]
        for exps in self.terms:
            for v, k in zip(self.variables, exps):
                if k and v in missing:
                    raise ValueError(f"variable {v!r} in use, cannot drop it")
        index = [self.variables.index(n) if n in self.variables else None for n in names]
        out = {}
        for exps, c in self.terms.items():
            out[tuple(exps[i] if i is not None else 0 for i in index)] = c
        return MPoly(names, out)

    # queries ------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def degree(self, name) -> int:
        """Degree in ``name``; ``-1`` for the zero polynomial."""
        k = self.variables.index(name)
        return max((e[k] for e in self.terms), default=-1)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def weighted_degrees(self, weights):
        return {sum(Fraction(w) * k for w, k in zip(weights, e)) for e in self.terms}

    def coefficients_in(self, name):
        """List ``[c_0, c_1, ...]`` with ``self = sum c_k * name^k``."""
        k = self.variables.index(name)
        deg = self.degree(name)
        buckets = [dict() for _ in range(deg + 1)]
        for exps, c in self.terms.items():
            reduced = exps[:k] + (0,) + exps[k + 1:]
            buckets[exps[k]][reduced] = c
        return [MPoly(self.variables, b) for b in buckets]

    def leading_coefficient(self, name):
        return self.coefficients_in(name)[-1]

    def leading_term(self):
        exps = max(self.terms)
        return exps, self.terms[exps]

    # arithmetic ---------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, MPoly):
            return MPoly.constant(self.variables, other)
        if other.variables != self.variables:
            raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = MPoly.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exact_div(self, divisor: "MPoly") -> "MPoly":
        """Quotient of an exact division; raises ``ArithmeticError`` on a remainder."""
        divisor = self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lead_e, lead_c = divisor.leading_term()
        rem = dict(self.terms)
        quot = {}
        while rem:
            e = max(rem)
            shift = tuple(a - b for a, b in zip(e, lead_e))
            if any(s < 0 for s in shift):
                raise ArithmeticError("division is not exact")
            factor = rem[e] / lead_c
            quot[shift] = factor
            for de, dc in divisor.terms.items():
                te = tuple(a + b for a, b in zip(de, shift))
                v = rem.get(te, 0) - factor * dc
                if v == 0:
                    rem.pop(te, None)
                else:
                    rem[te] = v
        return MPoly(self.variables, quot)

    def derivative(self, name):
        k = self.variables.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                out[tuple(ne)] = c * e[k]
        return MPoly(self.variables, out)

    # evaluation ---------------------------------------------------------

    def substitute(self, values: Mapping) -> "MPoly":
        """Replace the named variables by numbers (exact if given Fractions)."""
        idx = {self.variables.index(k): v for k, v in values.items()}
        out = {}
        for e, c in self.terms.items():
            term = c
            ne = list(e)
            for i, v in idx.items():
                if ne[i]:
                    term = term * Fraction(v) ** ne[i]
                    ne[i] = 0
            out[tuple(ne)] = out.get(tuple(ne), 0) + term
        return MPoly(self.variables, out)

    def evaluate(self, values: Mapping):
        """Numeric value; ``values`` must cover every variable that occurs."""
        total = 0
        for e, c in self.terms.items():
            term = c
            for name, k in zip(self.variables, e):
                if k:
                    term = term * values[name] ** k
            total = total + term
        return total

    def univariate_coefficients(self, name, values: Mapping | None = None):
        """Numeric coefficients in ``name`` (index = power) after evaluating the rest."""
        values = values or {}
        return [c.evaluate(values) if not c.is_zero() else 0 for c in self.coefficients_in(name)]

    # comparison and display ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, MPoly):
            if other.variables != self.variables:
                try:
                    other = other.with_variables(self.variables)
                except ValueError:
                    return False
            return self.terms == other.terms
        if self.is_constant():
            return self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def sorted_terms(self):
        return [(c, e) for e, c in sorted(self.terms.items(), reverse=True)]

    def __str__(self):
        return format_terms(self.variables, self.sorted_terms())

    def format_in(self, name) -> str:
        """Text as a polynomial in ``name``: descending powers, coefficient factors first.

        Parses back to the same polynomial.
        """
        k = self.variables.index(name)
        order = tuple(v for v in self.variables if v != name) + (name,)
        perm = [self.variables.index(v) for v in order]
        terms = sorted(
            self.terms.items(),
            key=lambda kv: (kv[0][k],) + tuple(kv[0][i] for i in perm[:-1]),
            reverse=True,
        )
        return format_terms(order, [(c, tuple(e[i] for i in perm)) for e, c in terms])

    def __repr__(self):
        return f"MPoly({self.variables!r}, {str(self)!r})"
