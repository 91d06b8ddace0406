"""Radial solutions of the A_{r-1} spin equation on the disc and on CP^1.

Real radial solutions reduce to

    du/drho = -2r u^(r-1) rho^(2/r - 1)              (local model near a Ramond mark)
    du/drho = -2r u^(r-1) rho^(2/r - 1) (1+rho^2)^(-2/r)   (sphere, two Ramond marks)

The sphere family is ``u(rho) = [2r(r-2) I(rho) + u0^-(r-2)]^(-1/(r-2))`` with
``I(rho) = int_0^rho tau^(2/r-1) (1+tau^2)^(-2/r) dtau``.  Substituting
``tau = sigma^(r/2)`` gives ``I(rho) = (r/2) int_0^{rho^(2/r)} g(sigma) dsigma`` with the
smooth ``g(sigma) = (1+sigma^r)^(-2/r)``, and ``sigma -> 1/sigma`` maps
``g(sigma) dsigma`` on ``[1, inf)`` to ``g(w) dw`` on ``(0, 1]``.  Every integral
below is therefore evaluated on a subinterval of ``[0, 1]``.

The energy of a sphere solution equals ``pi (u(0)^r - u(inf)^r)``; this is the
residue ``R`` (the second Ramond mark sits at ``rho = inf`` and carries
``-u(inf)^r`` through the chart change ``dz/z = -dw/w``).
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy import integrate

from .errors import InvalidP, InvalidR, InvalidRho, QuadratureFailure, WindowTooSmall

__all__ = [
    "DEFAULT_TOL",
    "RadialProfile",
    "local_solution",
    "integral_I",
    "global_solution",
    "singular_limit",
    "residue_pair",
    "energy",
    "identity_check",
    "make_profile",
    "ode_residual",
    "blowup_exponent",
    "lp1_membership",
    "harnack_ratio",
    "harnack_scan",
    "fd_weights",
]

DEFAULT_TOL = float(os.environ.get("WSPIN_DEFAULT_TOL", "1e-10"))


def _check_r(r):
    if int(r) != r or r < 3:
        raise InvalidR(f"r must be an integer >= 3 (A_1 and below are excluded), got {r}")
    return int(r)


def _quad(func, a, b, tol):
    if a == b:
        return 0.0
    value, err = integrate.quad(func, a, b, epsabs=tol, epsrel=tol, limit=200)
    if not np.isfinite(value) or err > max(tol, tol * abs(value)) * 10:
        raise QuadratureFailure(f"quadrature on [{a}, {b}] reached error {err:.3g} > {tol:.3g}")
    return value


# closed forms ---------------------------------------------------------------


def local_solution(r, C, rho):
    """``(r^2 (r-2) rho^(2/r) + C)^(-1/(r-2))``; accepts arrays."""
    r = _check_r(r)
    if not C > 0:
        raise ValueError("C must be positive")
    rho = np.asarray(rho, dtype=float)
    out = (r * r * (r - 2) * rho ** (2.0 / r) + C) ** (-1.0 / (r - 2))
    return float(out) if out.ndim == 0 else out


def _g(r):
    return lambda s: (1.0 + s**r) ** (-2.0 / r)


def _J_inf(r, tol):
    # int_0^inf g = 2 int_0^1 g by the sigma -> 1/sigma symmetry
    return 2.0 * _quad(_g(r), 0.0, 1.0, tol)


def _J(r, sigma, tol):
    """``int_0^sigma g`` for ``sigma`` in ``[0, inf]``."""
    g = _g(r)
    if sigma <= 1.0:
        return _quad(g, 0.0, sigma, tol)
    half = _quad(g, 0.0, 1.0, tol)
    if math.isinf(sigma):
        return 2.0 * half
    return 2.0 * half - _quad(g, 0.0, 1.0 / sigma, tol)


def integral_I(r, rho, tol=None):
    """``I(rho)``; ``rho`` may be ``inf``.  Scalars or arrays."""
    r = _check_r(r)
    tol = DEFAULT_TOL if tol is None else tol
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr < 0):
        raise InvalidRho("rho must be non-negative")
    flat = [0.5 * r * _J(r, float(x) ** (2.0 / r), tol) for x in rho_arr.ravel()]
    out = np.array(flat).reshape(rho_arr.shape)
    return float(out) if out.ndim == 0 else out


def _phi(r, I, u0):
    return (2 * r * (r - 2) * I + u0 ** (-(r - 2))) ** (-1.0 / (r - 2))


def global_solution(r, u0, rho, tol=None):
    """Sphere profile with ``u(0) = u0``."""
    r = _check_r(r)
    if not u0 > 0:
        raise ValueError("u0 must be positive")
    return _phi(r, integral_I(r, rho, tol), u0)


def singular_limit(r, rho, tol=None):
    """``u0 -> inf`` limit ``[2r(r-2) I(rho)]^(-1/(r-2))``; blows up at 0."""
    r = _check_r(r)
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr <= 0):
        raise InvalidRho("the singular profile is undefined at rho = 0")
    out = (2 * r * (r - 2) * np.asarray(integral_I(r, rho_arr, tol))) ** (-1.0 / (r - 2))
    return float(out) if np.ndim(out) == 0 else out


def residue_pair(r, u0, tol=None):
    """``R = u(0)^r - u(inf)^r`` for the sphere family, positive for ``u0 > 0``."""
    r = _check_r(r)
    if not u0 > 0:
        raise ValueError("u0 must be positive")
    A = 2 * r * (r - 2) * integral_I(r, math.inf, tol)
    # u0^r [1 - (1 + A u0^(r-2))^(-r/(r-2))], written to keep precision as u0 -> 0
    x = A * u0 ** (r - 2)
    return u0**r * -math.expm1(-(r / (r - 2)) * math.log1p(x))


def energy(r, u0, tol=None):
    """``||dW/du||_2^2`` of the sphere solution, by nested quadrature.

    With the metric ``|dz| = 1 + |z|^2`` and ``|e| = (|z|/(1+|z|^2))^(-1/r)`` for
    ``e = (dz/z)^(1/r)``, the density of ``|I_1(dW/du)|^2`` is
    ``r^2 u^(2r-2) |z|^(2/r-2) (1+|z|^2)^(-2/r)`` against ``dx dy``.  The chart
    ``|z| < 1`` and the chart ``|w| < 1`` (``w = 1/z``) are integrated separately.
    """
    r = _check_r(r)
    if not u0 > 0:
        raise ValueError("u0 must be positive")
    tol = DEFAULT_TOL if tol is None else tol
    inner_tol = tol * 1e-2
    g = _g(r)
    half = _quad(g, 0.0, 1.0, inner_tol)

    def u_of_sigma(sig):
        return _phi(r, 0.5 * r * _quad(g, 0.0, sig, inner_tol), u0)

    def u_of_w(w):
        # sigma = 1/w > 1
        return _phi(r, 0.5 * r * (2 * half - _quad(g, 0.0, w, inner_tol)), u0)

    # 2 pi r^2 int u^(2r-2) rho^(2/r-1) (1+rho^2)^(-2/r) drho, rho = sigma^(r/2)
    scale = math.pi * r**3
    # u(sigma) turns over near sigma* = u0^-(r-2) / (r^2 (r-2)); large u0 makes that a spike
    knee = u0 ** (-(r - 2)) / (r * r * (r - 2))
    cuts = [0.0]
    while knee < 1.0:
        cuts.append(knee)
        knee *= 10.0
    cuts.append(1.0)
    inner = sum(
        _quad(lambda s: u_of_sigma(s) ** (2 * r - 2) * g(s), a, b, tol)
        for a, b in zip(cuts[:-1], cuts[1:])
    )
    outer = _quad(lambda w: u_of_w(w) ** (2 * r - 2) * g(w), 0.0, 1.0, tol)
    return scale * (inner + outer)


def identity_check(r, u0, tol=None) -> dict:
    R = residue_pair(r, u0, tol)
    E = energy(r, u0, tol)
    return {"r": int(r), "u0": float(u0), "R": R, "E": E, "rel_err": abs(E - math.pi * R) / (math.pi * R)}


# profiles -------------------------------------------------------------------


@dataclass
class RadialProfile:
    """Sampled radial solution; ``family`` is ``local``, ``global`` or ``singular``."""

    r: int
    family: str
    parameter: Optional[float]
    rho: np.ndarray
    u: np.ndarray
    residue: Optional[float] = None
    energy: Optional[float] = None
    tol: float = DEFAULT_TOL
    extra: dict = field(default_factory=dict)

    @property
    def u_norm(self):
        """Pointwise norm ``u rho^(-1/r)`` in the Ramond metric."""
        return self.u * self.rho ** (-1.0 / self.r)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["rho", "u_tilde", "u_norm"])
        for a, b, c in zip(self.rho, self.u, self.u_norm):
            writer.writerow([repr(float(a)), repr(float(b)), repr(float(c))])
        return buf.getvalue()


def default_grid(lo=1e-8, hi=1e4, n=1201):
    return np.logspace(math.log10(lo), math.log10(hi), n)


def make_profile(r, family="global", parameter=1.0, rho=None, tol=None, with_energy=False):
    r = _check_r(r)
    tol = DEFAULT_TOL if tol is None else tol
    rho = default_grid() if rho is None else np.asarray(rho, dtype=float)
    if family == "local":
        u = local_solution(r, parameter, rho)
        R = E = None
    elif family == "global":
        u = global_solution(r, parameter, rho, tol)
        R = residue_pair(r, parameter, tol)
        E = energy(r, parameter, tol) if with_energy else None
    elif family == "singular":
        u = singular_limit(r, rho, tol)
        R = E = None
    else:
        raise ValueError(f"unknown family {family!r}")
    return RadialProfile(r, family, parameter, rho, np.atleast_1d(u), R, E, tol)


def fd_weights(x0, nodes, order=1):
    """Fornberg finite-difference weights for derivative ``order`` at ``x0``."""
    nodes = np.asarray(nodes, dtype=float)
    n = len(nodes)
    c = np.zeros((n, order + 1))
    c1 = 1.0
    c4 = nodes[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = nodes[i] - x0
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def _derivative(rho, u, width=7):
    # differentiate in t = log(rho) with a sliding `width`-point stencil
    t = np.log(rho)
    n = len(t)
    width = min(width, n)
    du = np.empty(n)
    half = width // 2
    for i in range(n):
        lo = min(max(0, i - half), n - width)
        idx = slice(lo, lo + width)
        du[i] = fd_weights(t[i], t[idx]) @ u[idx]
    return du / rho


def ode_residual(profile: RadialProfile, window=None) -> float:
    """Max of ``|u' + 2r u^(r-1) rho^(2/r-1) [(1+rho^2)^(-2/r)]|`` on the grid.

    The bracketed factor is dropped for the ``local`` family.  ``window``
    restricts the maximum to ``lo <= rho <= hi``; the derivative still uses
    the neighbouring samples.
    """
    rho = np.asarray(profile.rho, dtype=float)
    u = np.asarray(profile.u, dtype=float)
    if np.any(rho <= 0):
        raise InvalidRho("the grid must exclude rho = 0")
    r = profile.r
    du = _derivative(rho, u)
    rhs = 2 * r * u ** (r - 1) * rho ** (2.0 / r - 1)
    if profile.family != "local":
        rhs = rhs * (1 + rho**2) ** (-2.0 / r)
    res = np.abs(du + rhs)
    if window is not None:
        lo, hi = window
        res = res[(rho >= lo) & (rho <= hi)]
    return float(res.max())


# singular behaviour ---------------------------------------------------------


def blowup_exponent(r, fit_window=(1e-6, 1e-3), samples=200, r0=1.0, tol=None):
    """Least-squares slope of ``log |u|`` against ``log rho`` for the singular limit."""
    r = _check_r(r)
    lo, hi = fit_window
    if not 0 < lo < hi <= r0:
        raise WindowTooSmall(f"window {fit_window} must satisfy 0 < lo < hi <= {r0}")
    if hi / lo < 10:
        raise WindowTooSmall("the fit window must span at least one decade")
    rho = np.logspace(math.log10(lo), math.log10(hi), samples)
    norm = singular_limit(r, rho, tol) * rho ** (-1.0 / r)
    slope, _ = np.polyfit(np.log(rho), np.log(norm), 1)
    return float(slope)


def lp1_membership(r, p) -> bool:
    """Whether the local solution lies in ``L^p_1``: exactly ``p < 2r/(r-1)``."""
    r = _check_r(r)
    p = Fraction(p)
    if p <= 1:
        raise InvalidP(f"p must exceed 1, got {p}")
    return p < Fraction(2 * r, r - 1)


def harnack_ratio(r, u0, theta, epsilon, tol=None) -> float:
    """``sup/inf`` of the radial profile on the annulus ``eps(1-theta) <= |z| <= eps``.

    ``u0=None`` selects the singular limit.  The profiles are radial and
    decreasing, so the ratio is ``u(eps(1-theta)) / u(eps)``.
    """
    if not 0 <= theta < 1:
        raise ValueError("theta must lie in [0, 1)")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if theta == 0:
        return 1.0
    inner, outer = epsilon * (1 - theta), epsilon
    if u0 is None:
        a, b = singular_limit(r, [inner, outer], tol)
    else:
        a, b = global_solution(r, u0, [inner, outer], tol)
    return float(a / b)


def harnack_scan(r, u0, theta, ks=range(2, 30), tol=None) -> dict:
    """Ratios over ``eps = 2^-k``; ``bounded`` when successive ratios settle."""
    ratios = [harnack_ratio(r, u0, theta, 2.0**-k, tol) for k in ks]
    diffs = np.abs(np.diff(ratios[-5:]))
    return {
        "epsilon": [2.0**-k for k in ks],
        "ratios": ratios,
        "limit": ratios[-1],
        "bounded": bool(np.all(diffs < 1e-3 * ratios[-1])),
    }
