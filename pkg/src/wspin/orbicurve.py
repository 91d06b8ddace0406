"""W-spin structure bookkeeping on a marked curve.

A mark is decorated by the phases ``a_j(h_l)`` of its local group element.  The
desingularized bundle ``|L_j|`` has metric exponent ``c_jl = a_j(h_l) - q_j``
at the mark, which drives the Ramond/NS split, the degrees, the Fredholm
weights and the index shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    DecorationNotInGroup,
    InputError,
    InvalidP,
    MissingBoundaryValue,
    POutOfRange,
    RankDeficient,
    SpectrumTouched,
)
from .polyparse import QHPolynomial, parse_poly
from .quasihom import PhaseVector, WeightProfile, exponent_rank, infer_weights

__all__ = [
    "SPECTRAL_MULTIPLICITY",
    "Mark",
    "SpinCurveSpec",
    "MarkClassification",
    "DegreeReport",
    "FredholmReport",
    "classify_marks",
    "bundle_degrees",
    "fredholm_weights",
    "forbidden_exponents",
    "index_change",
    "index_shift",
    "residue_sum",
    "parse_rational",
    "curve_spec_from_json",
]

# Eigenvalues of the cylinder operator d/dt + i d/dtheta are the integers, each
# with a one-dimensional eigenspace spanned by a Fourier mode e^{i n theta}.
SPECTRAL_MULTIPLICITY = 1


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {value!r}") from exc
    raise InputError(f"rationals must be given as \"p/q\" strings, got {value!r}")


@dataclass(frozen=True)
class Mark:
    label: str
    phases: PhaseVector


@dataclass(frozen=True)
class SpinCurveSpec:
    genus: int
    marks: tuple
    poly: QHPolynomial
    weights: WeightProfile

    @classmethod
    def build(cls, poly, genus: int, marks: Sequence) -> "SpinCurveSpec":
        """Validate and assemble a spec.

        ``marks`` holds :class:`Mark` objects or ``(label, phases)`` pairs; a
        phase vector must lie in ``[0,1)^t`` and fix every monomial of ``poly``.
        """
        if isinstance(poly, str):
            poly = parse_poly(poly)
        if genus < 0:
            raise InputError("genus must be non-negative")
        weights = infer_weights(poly)
        built = []
        for m in marks:
            if not isinstance(m, Mark):
                label, phases = m
                if not isinstance(phases, PhaseVector):
                    phases = PhaseVector(tuple(Fraction(x) for x in phases))
                m = Mark(str(label), phases)
            if len(m.phases.a) != poly.nvars:
                raise InputError(f"mark {m.label!r}: expected {poly.nvars} phases")
            if not all(0 <= x < 1 for x in m.phases.a) or not m.phases.fixes(poly):
                raise DecorationNotInGroup(
                    f"mark {m.label!r}: phases {[str(x) for x in m.phases.a]} are not in the symmetry group"
                )
            built.append(m)
        labels = [m.label for m in built]
        if len(set(labels)) != len(labels):
            raise InputError(f"duplicate mark labels in {labels}")
        return cls(int(genus), tuple(built), poly, weights)

    @property
    def k(self):
        return len(self.marks)

    def c(self, j: int, l: int) -> Fraction:
        return self.marks[l].phases.a[j] - self.weights.q[j]

    def variable_index(self, j):
        return self.poly.variables.index(j) if isinstance(j, str) else j


def curve_spec_from_json(data: Mapping) -> SpinCurveSpec:
    """Build a spec from ``{genus, superpotential, marks: [{label, phases}]}``."""
    try:
        genus = data["genus"]
        poly = parse_poly(data["superpotential"])
        marks = [(m["label"], [parse_rational(x) for x in m["phases"]]) for m in data["marks"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed curve spec: {exc!r}") from exc
    if not isinstance(genus, int) or isinstance(genus, bool):
        raise InputError("genus must be an integer")
    return SpinCurveSpec.build(poly, genus, marks)


# classification ---------------------------------------------------------------


@dataclass(frozen=True)
class MarkClassification:
    a: tuple  # a[l][j]
    c: tuple  # c[l][j] = a - q
    ramond: tuple  # ramond[l][j]
    monomial_ramond: tuple  # monomial_ramond[l][i]

    def ramond_marks(self):
        """Marks at which at least one monomial is Ramond."""
        return tuple(l for l, row in enumerate(self.monomial_ramond) if any(row))


def classify_marks(spec: SpinCurveSpec) -> MarkClassification:
    B = spec.poly.exponent_matrix
    a_tab, c_tab, r_tab, m_tab = [], [], [], []
    for mark in spec.marks:
        a = mark.phases.a
        if not mark.phases.fixes(spec.poly):
            raise DecorationNotInGroup(mark.label)
        ram = tuple(x == 0 for x in a)
        a_tab.append(a)
        c_tab.append(tuple(x - q for x, q in zip(a, spec.weights.q)))
        r_tab.append(ram)
        m_tab.append(tuple(all(r for b, r in zip(row, ram) if b > 0) for row in B))
    return MarkClassification(tuple(a_tab), tuple(c_tab), tuple(r_tab), tuple(m_tab))


# degrees --------------------------------------------------------------------


@dataclass(frozen=True)
class DegreeReport:
    deg: tuple
    admissible: bool


def bundle_degrees(spec: SpinCurveSpec) -> DegreeReport:
    """``deg|L_j| = q_j (2g - 2 + k) - sum_l a_j(h_l)``; admissible iff all integral.

    This is the unique solution of the monomial constraints
    ``sum_j b_ij deg_j = 2g - 2 - sum_l sum_j b_ij (a_j(h_l) - q_j)``.
    """
    if exponent_rank(spec.poly) < spec.poly.nvars:
        raise RankDeficient("degrees are not determined when rank B < t")
    euler = 2 * spec.genus - 2 + spec.k
    deg = tuple(
        q * euler - sum((m.phases.a[j] for m in spec.marks), Fraction(0))
        for j, q in enumerate(spec.weights.q)
    )
    return DegreeReport(deg, all(x.denominator == 1 for x in deg))


# Fredholm theory ------------------------------------------------------------


@dataclass(frozen=True)
class FredholmReport:
    p: Fraction
    kappa: tuple  # per mark
    condition_i: bool  # a - q + 2/p not an integer at any mark
    condition_ii: bool  # p < 2/q_j when some c_jl < 0
    fredholm: bool  # p < 2/q_j and a - q + 2/p not in {1, 2}

    @property
    def valid(self):
        return self.condition_i and self.condition_ii


def fredholm_weights(spec: SpinCurveSpec, j, p) -> FredholmReport:
    j = spec.variable_index(j)
    p = Fraction(p)
    if p <= 1:
        raise InvalidP(f"p must exceed 1, got {p}")
    q = spec.weights.q[j]
    shifted = [spec.c(j, l) + 2 / p for l in range(spec.k)]
    kappa = tuple(-x for x in shifted)
    cond_i = all(x.denominator != 1 for x in shifted)
    any_negative = any(spec.c(j, l) < 0 for l in range(spec.k))
    cond_ii = p < 2 / q if any_negative else True
    fredholm = p < 2 / q and all(x not in (1, 2) for x in shifted)
    return FredholmReport(p, kappa, cond_i, cond_ii, fredholm)


def forbidden_exponents(spec: SpinCurveSpec, j, upper=None) -> list:
    """Exponents ``p`` in ``(1, upper)`` where some ``a - q + 2/p`` is an integer.

    ``upper`` defaults to ``2/q_j``.
    """
    j = spec.variable_index(j)
    upper = Fraction(upper) if upper is not None else 2 / spec.weights.q[j]
    found = set()
    for l in range(spec.k):
        c = spec.c(j, l)
        # 2/p ranges over (2/upper, 2)
        lo, hi = 2 / upper, Fraction(2)
        for n in range(math.floor(c + lo), math.ceil(c + hi) + 1):
            two_over_p = n - c
            if lo < two_over_p < hi:
                found.add(2 / two_over_p)
    return sorted(found)


def index_change(kappa1: Sequence, kappa2: Sequence) -> int:
    """``N(kappa1, kappa2)``: spectrum points strictly between the weights, per end."""
    if len(kappa1) != len(kappa2):
        raise ValueError("weight vectors must have the same length")
    total = 0
    for lo, hi in zip(kappa1, kappa2):
        lo, hi = Fraction(lo), Fraction(hi)
        if lo.denominator == 1 or hi.denominator == 1:
            raise SpectrumTouched(f"weight {lo if lo.denominator == 1 else hi} lies on the spectrum")
        if lo > hi:
            raise ValueError("expected kappa1 <= kappa2 componentwise")
        total += SPECTRAL_MULTIPLICITY * max(0, math.ceil(hi) - math.floor(lo) - 1)
    return total


def index_shift(spec: SpinCurveSpec, j, p) -> int:
    """Number of marks with ``c_jl < 0``.

    Requires ``2 < p < 2/(1 - dbar_j)`` with ``dbar_j`` the least positive
    ``c_jl`` (no upper limit from this term when none is positive), and the
    Fredholm conditions at ``p``.
    """
    j = spec.variable_index(j)
    p = Fraction(p)
    positives = [spec.c(j, l) for l in range(spec.k) if spec.c(j, l) > 0]
    if p <= 2:
        raise POutOfRange(f"p = {p} must exceed 2")
    if positives:
        upper = 2 / (1 - min(positives))
        if p >= upper:
            raise POutOfRange(f"p = {p} must be below 2/(1 - dbar) = {upper}")
    report = fredholm_weights(spec, j, p)
    if not report.fredholm:
        raise POutOfRange(f"dbar is not Fredholm at p = {p}")
    return sum(1 for l in range(spec.k) if spec.c(j, l) < 0)


# residues -------------------------------------------------------------------


def residue_sum(spec: SpinCurveSpec, boundary_values: Mapping[str, Sequence[complex]]) -> complex:
    """Sum of Ramond monomials evaluated at the boundary values of Ramond marks.

    ``boundary_values`` maps mark labels to ``(u_1(z_l), ..., u_t(z_l))`` and
    must cover every mark where some monomial is Ramond.
    """
    cls = classify_marks(spec)
    total = 0
    for l in cls.ramond_marks():
        label = spec.marks[l].label
        if label not in boundary_values:
            raise MissingBoundaryValue(f"no boundary value for Ramond mark {label!r}")
        values = tuple(boundary_values[label])
        if len(values) != spec.poly.nvars:
            raise MissingBoundaryValue(f"mark {label!r}: expected {spec.poly.nvars} values")
        for i, is_ramond in enumerate(cls.monomial_ramond[l]):
            if is_ramond:
                total = total + spec.poly.evaluate_monomial(i, values)
    return total
