"""Elimination of the gradient system and Gershgorin root bounds.

For ``f_j = dW/dx_j - s_j`` the elimination polynomial ``p_i(x_i; s)`` vanishes
on every solution of ``grad W(u) = s`` and has a constant leading coefficient in
``x_i``.  Feeding its monic form to :func:`gershgorin_bound` with the scaled
radii ``rho_l = (sum|s_j| + 1)^(l delta_i)`` certifies ``|u_i| <= D_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BothConstantInVar, EliminationError, UnsupportedArity
from .mpoly import MPoly
from .polyparse import QHPolynomial
from .quasihom import infer_weights

__all__ = [
    "sylvester_matrix",
    "sylvester_resultant",
    "univariate_resultant",
    "bareiss_det",
    "elimination_poly",
    "RootBoundInput",
    "gershgorin_bound",
    "GradientBound",
    "gradient_bound",
    "EmpiricalBound",
    "empirical_bound",
    "rhs_names",
]


# resultants -----------------------------------------------------------------


def bareiss_det(matrix):
    """Fraction-free determinant; entries may be MPoly or exact scalars."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if _is_zero(m[k][k]):
            swap = next((i for i in range(k + 1, n) if not _is_zero(m[i][k])), None)
            if swap is None:
                return 0 * m[0][0]
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pivot * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = _divide(num, prev)
            m[i][k] = 0 * pivot
        prev = pivot
    return m[n - 1][n - 1] if sign > 0 else -m[n - 1][n - 1]


def _is_zero(x):
    return x.is_zero() if isinstance(x, MPoly) else x == 0


def _divide(num, den):
    if isinstance(den, MPoly):
        return num.exact_div(den)
    if den == 1:
        return num
    return num * (1 / Fraction(den))


def sylvester_matrix(f_coeffs, g_coeffs, zero=0):
    """Sylvester matrix from descending-order coefficient lists."""
    m = len(f_coeffs) - 1
    n = len(g_coeffs) - 1
    size = m + n
    rows = []
    for r in range(n):
        rows.append([zero] * r + list(f_coeffs) + [zero] * (size - r - m - 1))
    for r in range(m):
        rows.append([zero] * r + list(g_coeffs) + [zero] * (size - r - n - 1))
    return rows


def sylvester_resultant(f: MPoly, g: MPoly, var: str) -> MPoly:
    """Resultant of ``f`` and ``g`` with respect to ``var``.

    When one argument is free of ``var`` the convention
    ``Res(f, c) = c^deg(f)`` (and symmetrically) is used.

    >>> f = MPoly.parse("y - a", ["y", "a", "b"])
    >>> g = MPoly.parse("y - b", ["y", "a", "b"])
    >>> str(sylvester_resultant(f, g, "y"))
    'a - b'
    """
    if f.variables != g.variables:
        names = tuple(dict.fromkeys(f.variables + g.variables))
        f, g = f.with_variables(names), g.with_variables(names)
    m, n = f.degree(var), g.degree(var)
    if m <= 0 and n <= 0:
        if f.is_zero() or g.is_zero():
            return MPoly(f.variables)
        raise BothConstantInVar(f"neither polynomial involves {var!r}")
    if f.is_zero() or g.is_zero():
        return MPoly(f.variables)
    if n == 0:
        return g**m
    if m == 0:
        return f**n
    fc = list(reversed(f.coefficients_in(var)))
    gc = list(reversed(g.coefficients_in(var)))
    zero = MPoly(f.variables)
    return bareiss_det(sylvester_matrix(fc, gc, zero))


def univariate_resultant(f: Sequence, g: Sequence):
    """Exact resultant of two univariate polynomials given low-to-high."""
    f = [Fraction(c) for c in f]
    g = [Fraction(c) for c in g]
    while f and f[-1] == 0:
        f.pop()
    while g and g[-1] == 0:
        g.pop()
    if not f or not g:
        return Fraction(0)
    if len(f) == 1:
        return f[0] ** (len(g) - 1)
    if len(g) == 1:
        return g[0] ** (len(f) - 1)
    return Fraction(bareiss_det(sylvester_matrix(f[::-1], g[::-1], Fraction(0))))


# elimination polynomial ---------------------------------------------------


def rhs_names(P: QHPolynomial):
    names = tuple(f"s{j + 1}" for j in range(P.nvars))
    clash = set(names) & set(P.variables)
    if clash:
        raise EliminationError(f"variable names {sorted(clash)} collide with right-hand sides")
    return names


def elimination_poly(P: QHPolynomial, i: int | str) -> MPoly:
    """Polynomial in ``(x_i, s_1, ..., s_t)`` vanishing on ``grad W(u) = s``.

    The result is sign-normalized so that its leading ``x_i`` coefficient is a
    positive rational.

    >>> from wspin.polyparse import parse_poly
    >>> elimination_poly(parse_poly("x^3 + x*y^2"), "x").format_in("x")
    '12*x^4 - 4*s1*x^2 + s2^2'
    """
    if isinstance(i, str):
        i = P.variables.index(i)
    t = P.nvars
    if t > 2:
        raise UnsupportedArity(
            f"exact elimination supports at most 2 variables, got {t}; use empirical_bound"
        )
    w = infer_weights(P)
    s = rhs_names(P)
    ring = P.variables + s
    fs = [
        g.to_mpoly().with_variables(ring) - MPoly.var(ring, s[j])
        for j, g in enumerate(P.gradient())
    ]
    if t == 1:
        p = fs[0]
    else:
        p = sylvester_resultant(fs[0], fs[1], P.variables[1 - i])
    out_vars = (P.variables[i],) + s
    p = p.with_variables(out_vars)
    if p.is_zero():
        raise EliminationError("resultant vanished identically; W is degenerate")
    lead = p.leading_coefficient(out_vars[0])
    if not lead.is_constant():
        raise EliminationError(f"leading coefficient {lead} depends on the right-hand sides")
    if lead.constant_value() < 0:
        p = -p
    weights = (w.q[i],) + tuple(1 - q for q in w.q)
    if len(p.weighted_degrees(weights)) != 1:
        raise EliminationError("elimination polynomial is not quasi-homogeneous")
    return p


# Gershgorin bound -----------------------------------------------------------


@dataclass(frozen=True)
class RootBoundInput:
    """Monic ``f(x) = x^N + sum_{l=1}^N alpha_l x^(l-1)`` with radii ``rho``."""

    alpha: tuple
    rho: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(complex(a) for a in self.alpha))
        object.__setattr__(self, "rho", tuple(float(r) for r in self.rho))
        if len(self.alpha) != len(self.rho):
            raise ValueError("alpha and rho must have the same length N")
        if any(not r > 0 for r in self.rho):
            raise ValueError("rho must be strictly positive")

    @property
    def N(self):
        return len(self.alpha)

    @classmethod
    def unit(cls, alpha):
        return cls(tuple(alpha), (1.0,) * len(alpha))


def gershgorin_bound(inp: RootBoundInput) -> float:
    """Radius ``D`` of a disc containing every root of ``f``.

    Row discs of ``diag(rho) C diag(rho)^-1`` for the companion matrix ``C``:
    row 1 gives ``rho_1 |alpha_1| / rho_N`` and row ``l >= 2`` gives
    ``rho_l / rho_{l-1} + rho_l |alpha_l| / rho_N``.

    >>> gershgorin_bound(RootBoundInput.unit([-4, -2, 0]))
    4.0
    """
    a = [abs(x) for x in inp.alpha]
    r = inp.rho
    N = inp.N
    if N == 0:
        return 0.0
    D = r[0] * a[0] / r[N - 1]
    for l in range(1, N):
        D = max(D, r[l] / r[l - 1] + r[l] * a[l] / r[N - 1])
    return float(D)


def _scaled_bound(alpha, base, delta):
    # same disc radii as gershgorin_bound with rho_l = base^(l*delta), in ratio form
    N = len(alpha)
    a = [abs(x) for x in alpha]
    step = base**delta
    D = a[0] * base ** ((1 - N) * delta)
    for l in range(2, N + 1):
        D = max(D, step + a[l - 1] * base ** ((l - N) * delta))
    return D


@dataclass
class GradientBound:
    s: tuple
    radii: tuple  # D_i
    constants: tuple  # C_i = D_i / (sum|s| + 1)^delta_i
    delta_i: tuple
    polynomials: tuple = field(default=())

    def contains(self, u, slack=1e-9):
        return all(abs(x) <= D * (1 + slack) + slack for x, D in zip(u, self.radii))


def gradient_bound(P: QHPolynomial, s: Sequence[complex]) -> GradientBound:
    """Certified radii ``D_i`` with ``|u_i| <= D_i`` whenever ``grad W(u) = s``."""
    if P.nvars > 2:
        raise UnsupportedArity("certified bounds need at most 2 variables; use empirical_bound")
    s = tuple(complex(x) for x in s)
    if len(s) != P.nvars:
        raise ValueError(f"expected {P.nvars} right-hand sides")
    w = infer_weights(P)
    names = rhs_names(P)
    base = sum(abs(x) for x in s) + 1.0
    radii, consts, polys = [], [], []
    env = dict(zip(names, s))
    for i in range(P.nvars):
        p = elimination_poly(P, i)
        coeffs = [complex(c) for c in p.univariate_coefficients(P.variables[i], env)]
        lead = coeffs[-1]
        alpha = [c / lead for c in coeffs[:-1]]
        D = _scaled_bound(alpha, base, float(w.delta_i[i])) if alpha else 0.0
        radii.append(D)
        consts.append(D / base ** float(w.delta_i[i]))
        polys.append(p)
    return GradientBound(s, tuple(radii), tuple(consts), w.delta_i, tuple(polys))


# empirical harness -----------------------------------------------------------


def _numeric_gradient(P: QHPolynomial):
    grads = []
    for g in P.gradient():
        coeffs = np.array([complex(c) for c, _ in g.monomials])
        exps = np.array([e for _, e in g.monomials], dtype=int).reshape(len(g.monomials), P.nvars)
        grads.append((coeffs, exps))

    def evaluate(u):
        # u: (n, t) complex
        out = np.zeros((u.shape[0], len(grads)), dtype=complex)
        for j, (coeffs, exps) in enumerate(grads):
            for c, e in zip(coeffs, exps):
                out[:, j] += c * np.prod(u**e, axis=1)
        return out

    return evaluate


@dataclass
class EmpiricalBound:
    radii: tuple
    suprema: np.ndarray  # running suprema, shape (levels, t)
    growth: np.ndarray  # sup(2R) / sup(R) for the final doublings, per variable
    stabilized: tuple
    tol: float

    @property
    def all_stabilized(self):
        return all(self.stabilized)

    @property
    def unbounded(self):
        return tuple(i for i, ok in enumerate(self.stabilized) if not ok)


def empirical_bound(
    P: QHPolynomial,
    sample_count: int = 20000,
    seed: int = 0,
    levels: int = 14,
    tol: float = 0.05,
    check_last: int = 3,
) -> EmpiricalBound:
    """Running suprema of ``|u_i| / (sum_j |d_jW(u)| + 1)^delta_i`` on growing polydiscs.

    One fixed set of points in the unit polydisc is rescaled to radius ``2^k``
    for ``k < levels``; a quarter of the points lie on random coordinate
    subspaces so that degenerate directions are probed.  A variable is
    reported stabilized when none of the last ``check_last`` doublings grows its
    supremum by more than ``tol``.
    """
    w = infer_weights(P)
    t = P.nvars
    rng = np.random.default_rng(seed)
    radius = np.sqrt(rng.random((sample_count, t)))
    angle = rng.random((sample_count, t)) * 2 * np.pi
    base = radius * np.exp(1j * angle)
    n_sub = sample_count // 4
    if t > 1 and n_sub:
        mask = rng.random((n_sub, t)) < 0.5
        full = mask.all(axis=1)
        mask[full, rng.integers(0, t, size=int(full.sum()))] = False
        base[:n_sub][mask] = 0
    grad = _numeric_gradient(P)
    delta = np.array([float(x) for x in w.delta_i])
    sups = np.zeros((levels, t))
    radii = tuple(2.0**k for k in range(levels))
    current = np.zeros(t)
    for k, R in enumerate(radii):
        u = base * R
        g = np.abs(grad(u)).sum(axis=1) + 1.0
        ratio = np.abs(u) / g[:, None] ** delta[None, :]
        current = np.maximum(current, ratio.max(axis=0))
        sups[k] = current
    tail = sups[-(check_last + 1):]
    with np.errstate(divide="ignore", invalid="ignore"):
        growth = np.where(tail[:-1] > 0, tail[1:] / tail[:-1], 1.0)
    stabilized = tuple(bool(np.all(growth[:, i] <= 1 + tol)) for i in range(t))
    return EmpiricalBound(radii, sups, growth, stabilized, tol)
