"""Weights, diagonal symmetries and growth exponents of quasi-homogeneous W.

The diagonal symmetry group is represented by phase vectors ``a`` in
``[0, 1)^t`` with ``B a`` integral, where ``B`` is the exponent matrix.  This
lattice description is used instead of a product of roots of unity of orders
``d/k_i``: for ``x^n + x*y^2`` the ratio ``d/k_y = 2n/(n-1)`` is generally not
an integer, so such a product is not even defined.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import _linalg
from .errors import NonUniqueWeights, NoWeightSystem, RankDeficient, WeightOutOfRange
from .polyparse import QHPolynomial

__all__ = [
    "WeightProfile",
    "PhaseVector",
    "NondegeneracyReport",
    "CompactnessReport",
    "infer_weights",
    "check_nondegenerate",
    "symmetry_group",
    "growth_exponents",
    "compactness_ranges",
    "euler_check",
    "exponent_rank",
]

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class WeightProfile:
    q: tuple
    d: int
    k: tuple
    delta: Fraction
    delta_i: tuple
    delta0: Fraction
    kappa_i: tuple  # None where q_i >= 1/2
    lp1_range_sup: Fraction
    lp_range_sup: tuple

    @classmethod
    def from_weights(cls, q: Sequence[Fraction]) -> "WeightProfile":
        q = tuple(Fraction(x) for x in q)
        d = math.lcm(*(x.denominator for x in q))
        k = tuple(int(x * d) for x in q)
        delta = min(q)
        gap = min(1 - x for x in q)
        delta_i = tuple(x / gap for x in q)
        kappa = tuple(x / (1 - 2 * x) if x < HALF else None for x in q)
        lp1 = 2 / (1 - delta)
        lp = tuple(2 * (1 - 2 * x) / x for x in q)
        return cls(q, d, k, delta, delta_i, max(delta_i), kappa, lp1, lp)

    @property
    def nvars(self):
        return len(self.q)


@dataclass(frozen=True, order=True)
class PhaseVector:
    """Group element ``h_j = exp(2 pi i a_j)`` stored by its phases ``a_j``."""

    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(Fraction(x) for x in self.a))

    def __add__(self, other):
        return PhaseVector(tuple((x + y) % 1 for x, y in zip(self.a, other.a)))

    def __neg__(self):
        return PhaseVector(tuple((-x) % 1 for x in self.a))

    def is_identity(self):
        return all(x == 0 for x in self.a)

    def order(self):
        return math.lcm(*(x.denominator for x in self.a)) if self.a else 1

    def as_complex(self):
        return tuple(complex(np.exp(2j * np.pi * float(x))) for x in self.a)

    def fixes(self, P: QHPolynomial):
        return all(sum(b * x for b, x in zip(row, self.a)).denominator == 1 for row in P.exponent_matrix)


def exponent_rank(P: QHPolynomial) -> int:
    return _linalg.rank(P.exponent_matrix)


def infer_weights(P: QHPolynomial) -> WeightProfile:
    """Solve ``B q = (1, ..., 1)`` exactly and package the derived exponents.

    >>> from wspin.polyparse import parse_poly
    >>> infer_weights(parse_poly("x^3 + x*y^3")).q
    (Fraction(1, 3), Fraction(2, 9))
    """
    if P.is_zero():
        raise NoWeightSystem("zero polynomial has no weight system")
    B = P.exponent_matrix
    q, unique = _linalg.solve(B, [1] * len(B))
    if q is None:
        raise NoWeightSystem(f"B q = 1 has no solution for {P}")
    if not unique:
        raise NonUniqueWeights(
            f"exponent matrix has rank {exponent_rank(P)} < {P.nvars}; weights not unique"
        )
    bad = [(v, x) for v, x in zip(P.variables, q) if not 0 < x < 1]
    if bad:
        raise WeightOutOfRange(", ".join(f"q_{v} = {x}" for v, x in bad) + " outside (0, 1)")
    return WeightProfile.from_weights(q)


def growth_exponents(P: QHPolynomial) -> WeightProfile:
    """Weight profile with ``delta_i``, ``delta0`` and ``kappa_i`` (all exact)."""
    return infer_weights(P)


# non-degeneracy -------------------------------------------------------------


@dataclass
class NondegeneracyReport:
    weights_unique: bool
    isolated_singularity: str  # "proved" | "refuted" | "inconclusive"
    witness: Optional[tuple] = None
    method: str = ""
    detail: dict = field(default_factory=dict)

    @property
    def nondegenerate(self):
        return self.weights_unique and self.isolated_singularity == "proved"


def check_nondegenerate(P: QHPolynomial, seed: int = 0, attempts: int = 64) -> NondegeneracyReport:
    """Decide whether the origin is an isolated critical point of ``W``.

    Exact for one and two variables; for three or more a seeded Newton search
    for a non-trivial common zero of the gradient either returns a witness
    (``refuted``) or gives up (``inconclusive``).
    """
    infer_weights(P)
    t = P.nvars
    if t == 1:
        return NondegeneracyReport(True, "proved", None, "single variable: dW = c x^(d-1)")
    if t == 2:
        return _check_two_variables(P)
    return _check_newton(P, seed, attempts)


def _univariate(P: QHPolynomial, fixed_index: int, fixed_value):
    """Gradient components with variable ``fixed_index`` set, as univariate lists."""
    free = 1 - fixed_index
    out = []
    for g in P.gradient():
        mp = g.to_mpoly().substitute({P.variables[fixed_index]: fixed_value})
        coeffs = mp.univariate_coefficients(P.variables[free])
        out.append(_trim([Fraction(c) for c in coeffs]))
    return out


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_gcd(a, b):
    """Monic gcd of univariate rational polynomials (lists, index = power)."""
    a, b = _trim(a), _trim(b)
    while b:
        r = list(a)
        while len(r) >= len(b) and r:
            f = r[-1] / b[-1]
            shift = len(r) - len(b)
            for i, c in enumerate(b):
                r[i + shift] -= f * c
            r = _trim(r)
        a, b = b, r
    if not a:
        return []
    return [c / a[-1] for c in a]


def _check_two_variables(P: QHPolynomial) -> NondegeneracyReport:
    from .elim import univariate_resultant

    names = P.variables
    # A non-trivial critical point can be rescaled by the weighted C*-action so that
    # either x_0 = 1, or x_0 = 0 and x_1 = 1.
    at_axis = [g.evaluate((Fraction(0), Fraction(1))) for g in P.gradient()]
    if all(v == 0 for v in at_axis):
        return NondegeneracyReport(
            True, "refuted", (0j, 1 + 0j), "exact: gradient vanishes on the second axis",
            {"axis": names[1]},
        )
    fx, fy = _univariate(P, 0, Fraction(1))
    if not fx and not fy:
        return NondegeneracyReport(
            True, "refuted", (1 + 0j, 0j), "exact: gradient vanishes identically on x_0 = 1"
        )
    if not fx or not fy:
        nonzero = fx or fy
        if len(nonzero) > 1:
            root = complex(np.roots([float(c) for c in reversed(nonzero)])[0])
            return NondegeneracyReport(
                True, "refuted", (1 + 0j, root), "exact: one partial vanishes identically"
            )
        return NondegeneracyReport(True, "proved", None, "exact: no common zero")
    res = univariate_resultant(fx, fy)
    detail = {"resultant_at_x0_1": str(res)}
    if res != 0:
        return NondegeneracyReport(True, "proved", None, "exact: resultant non-zero", detail)
    g = _poly_gcd(fx, fy)
    root = complex(np.roots([float(c) for c in reversed(g)])[0]) if len(g) > 1 else 0j
    return NondegeneracyReport(True, "refuted", (1 + 0j, root), "exact: resultant vanishes", detail)


def _check_newton(P: QHPolynomial, seed: int, attempts: int) -> NondegeneracyReport:
    t = P.nvars
    grad = [g.to_mpoly() for g in P.gradient()]
    hess = [[g.derivative(v) for v in P.variables] for g in grad]
    rng = np.random.default_rng(seed)

    def values(u):
        env = dict(zip(P.variables, u))
        return np.array([complex(g.evaluate(env)) for g in grad])

    def jac(u):
        env = dict(zip(P.variables, u))
        return np.array([[complex(h.evaluate(env)) for h in row] for row in hess])

    for _ in range(attempts):
        ell = rng.normal(size=t) + 1j * rng.normal(size=t)
        u = rng.normal(size=t) + 1j * rng.normal(size=t)
        u = u / (ell @ u)
        for _ in range(200):
            F = np.concatenate([values(u), [ell @ u - 1]])
            J = np.vstack([jac(u), ell[None, :]])
            step, *_ = np.linalg.lstsq(J, -F, rcond=None)
            u = u + step
            if not np.all(np.isfinite(u)):
                break
            if np.linalg.norm(step) < 1e-14 * (1 + np.linalg.norm(u)):
                break
        if not np.all(np.isfinite(u)):
            continue
        scale = max(1.0, float(np.max(np.abs(u))))
        if np.linalg.norm(values(u)) < 1e-10 * scale ** P.nvars and np.linalg.norm(u) > 1e-6:
            return NondegeneracyReport(
                True, "refuted", tuple(complex(x) for x in u), "newton: non-trivial critical point"
            )
    return NondegeneracyReport(True, "inconclusive", None, f"newton: no witness in {attempts} seeds")


# symmetry group -------------------------------------------------------------


def _choose_square_block(B, t):
    best = None
    for rows in itertools.combinations(range(len(B)), t):
        block = [B[i] for i in rows]
        if _linalg.det(block) == 0:
            continue
        size = math.prod(sum(r) for r in block)
        if best is None or size < best[0]:
            best = (size, rows)
    return best


def symmetry_group(P: QHPolynomial) -> list:
    """All phase vectors ``a`` in ``[0,1)^t`` with ``B a`` integral, sorted.

    >>> from wspin.polyparse import parse_poly
    >>> len(symmetry_group(parse_poly("x^3 + y^4")))
    12
    """
    B = P.exponent_matrix
    t = P.nvars
    best = _choose_square_block(B, t)
    if best is None:
        raise RankDeficient(f"exponent matrix of {P} has rank < {t}")
    _, rows = best
    block = [B[i] for i in rows]
    rest = [B[i] for i in range(len(B)) if i not in rows]
    inv = _linalg.inverse(block)
    found = []
    for m in itertools.product(*(range(sum(r)) for r in block)):
        a = [sum(c * mi for c, mi in zip(row, m)) for row in inv]
        if not all(0 <= x < 1 for x in a):
            continue
        if all(sum(b * x for b, x in zip(row, a)).denominator == 1 for row in rest):
            found.append(PhaseVector(tuple(a)))
    return sorted(found)


# compactness ranges ---------------------------------------------------------


@dataclass(frozen=True)
class CompactnessReport:
    """Open exponent ranges; membership at an endpoint is ``False``."""

    lp1_lower: Fraction
    lp1_sup: Fraction
    lp_sup: tuple
    inner_compactness: bool
    strong_weak_compactness: bool

    def lp1_contains(self, p) -> bool:
        p = Fraction(p)
        return self.lp1_lower <= p < self.lp1_sup

    def lp_contains(self, index: int, p) -> bool:
        p = Fraction(p)
        return 0 < p < self.lp_sup[index]


def compactness_ranges(P: QHPolynomial) -> CompactnessReport:
    w = infer_weights(P)
    return CompactnessReport(
        lp1_lower=Fraction(2),
        lp1_sup=w.lp1_range_sup,
        lp_sup=w.lp_range_sup,
        inner_compactness=all(x <= HALF for x in w.q),
        strong_weak_compactness=all(x < HALF for x in w.q),
    )


def euler_check(P: QHPolynomial, point=None):
    """Residual of ``sum_i q_i x_i dW/dx_i - W``.

    Without ``point`` the residual polynomial itself is returned (it is the
    zero :class:`~wspin.mpoly.MPoly`).  With an exact (Fraction) point the exact
    value is returned; with a float/complex point its modulus.
    """
    w = infer_weights(P)
    if point is None:
        from .mpoly import MPoly

        W = P.to_mpoly()
        total = -W
        for name, q in zip(P.variables, w.q):
            total = total + MPoly.var(P.variables, name) * W.derivative(name) * q
        return total
    grads = [g.evaluate(point) for g in P.gradient()]
    value = sum(q * x * g for q, x, g in zip(w.q, point, grads)) - P.evaluate(point)
    if all(isinstance(x, (int, Fraction)) for x in point):
        return value
    return abs(complex(value))
