import math

import numpy as np
import pytest
from scipy import integrate, special

from wspin.errors import InvalidP, InvalidR, InvalidRho, WindowTooSmall
from wspin.radial import (
    RadialProfile,
    blowup_exponent,
    energy,
    global_solution,
    harnack_ratio,
    harnack_scan,
    identity_check,
    integral_I,
    local_solution,
    lp1_membership,
    make_profile,
    ode_residual,
    residue_pair,
    singular_limit,
)

GRID = np.logspace(-2, 2, 801)


# closed forms -----------------------------------------------------------------


def test_local_solution_examples():
    assert local_solution(3, 1, 0) == 1
    assert local_solution(3, 1, 1) == pytest.approx(0.1, rel=1e-14)
    # r^2 (r-2) = 32 at r = 4
    assert local_solution(4, 1, 1) == pytest.approx(33 ** -0.5, rel=1e-14)


@pytest.mark.parametrize("r", range(3, 9))
def test_I_infinity_beta_oracle(r):
    oracle = 0.5 * special.beta(1 / r, 1 / r)
    assert abs(integral_I(r, math.inf) - oracle) / oracle < 1e-8


@pytest.mark.parametrize("r", [3, 5])
def test_I_direct_quadrature_oracle(r):
    # integrate the original tau-form with scipy's algebraic-weight rule
    for rho in [1e-3, 0.5, 2.0, 40.0]:
        direct, _ = integrate.quad(
            lambda t: (1 + t * t) ** (-2 / r), 0, rho, weight="alg", wvar=(2 / r - 1, 0), epsabs=1e-13, epsrel=1e-13
        )
        assert integral_I(r, rho) == pytest.approx(direct, rel=1e-9)


def test_global_solution_examples():
    for r in (3, 4, 6):
        assert global_solution(r, 1.7, 0) == pytest.approx(1.7, rel=1e-14)
    assert global_solution(3, 1, math.inf) == pytest.approx(1 / (3 * special.beta(1 / 3, 1 / 3) + 1), rel=1e-10)
    assert global_solution(3, 1, math.inf) == pytest.approx(0.059172, abs=1e-6)


def test_residue_r3_u0_1():
    I = 0.5 * special.beta(1 / 3, 1 / 3)
    assert residue_pair(3, 1) == pytest.approx(1 - (6 * I + 1) ** -3, rel=1e-10)


@pytest.mark.parametrize("r", [3, 4, 7])
def test_residue_is_difference_of_endpoint_values(r):
    for u0 in (0.3, 1.0, 4.0):
        expected = u0**r - global_solution(r, u0, math.inf) ** r
        assert residue_pair(r, u0) == pytest.approx(expected, rel=1e-9)


def test_residue_limits_and_monotonicity():
    values = [residue_pair(4, u0) for u0 in np.logspace(-4, 6, 30)]
    assert all(v > 0 for v in values)
    assert all(b > a for a, b in zip(values, values[1:]))
    assert residue_pair(4, 1e-6) < 1e-20
    assert residue_pair(4, 1e6) > 1e20


# energy -----------------------------------------------------------------------


@pytest.mark.parametrize("r", [3, 4, 5, 7])
@pytest.mark.parametrize("u0", [0.5, 1.0, 2.0])
def test_residue_energy_identity(r, u0):
    assert identity_check(r, u0)["rel_err"] < 1e-6


def _energy_in_rho(r, u0):
    # 2 pi r^2 int_0^inf u^(2r-2) rho^(2/r-1) (1+rho^2)^(-2/r) drho on a log grid, plus the analytic tail
    t = np.linspace(math.log(1e-14), math.log(1e10), 6001)
    rho = np.exp(t)
    u = global_solution(r, u0, rho)
    f = u ** (2 * r - 2) * rho ** (2 / r) * (1 + rho**2) ** (-2 / r)
    body = integrate.simpson(f, x=t)
    tail = global_solution(r, u0, math.inf) ** (2 * r - 2) * (r / 2) * rho[-1] ** (-2 / r)
    head = u0 ** (2 * r - 2) * (r / 2) * rho[0] ** (2 / r)
    return 2 * math.pi * r * r * (body + tail + head)


@pytest.mark.parametrize("r, u0", [(3, 1.0), (4, 0.5), (5, 2.0)])
def test_energy_independent_rho_quadrature(r, u0):
    assert energy(r, u0) == pytest.approx(_energy_in_rho(r, u0), rel=1e-5)


def test_energy_vanishes_with_u0():
    assert energy(3, 1e-4) < 1e-10


def test_identity_large_u0():
    assert identity_check(3, 1e6)["rel_err"] < 1e-6


# singular limit ---------------------------------------------------------------


def test_singular_asymptote_r3():
    rho = np.array([1e-8, 1e-7, 1e-6])
    ratio = singular_limit(3, rho) * 9 * rho ** (2 / 3)
    assert np.allclose(ratio, 1, rtol=1e-3)


def test_singular_dominates_regular_profiles():
    sing = singular_limit(4, GRID)
    prev = np.zeros_like(GRID)
    for u0 in (0.1, 1.0, 10.0, 1e3):
        u = global_solution(4, u0, GRID)
        assert np.all(u > prev) and np.all(u < sing)
        prev = u


def test_singular_positive_and_rho_zero():
    assert singular_limit(3, 1.0) > 0
    with pytest.raises(InvalidRho):
        singular_limit(3, 0.0)


@pytest.mark.parametrize("r", [3, 4, 5])
def test_blowup_slope(r):
    slope = blowup_exponent(r)
    assert abs(slope + 1 / (r - 2)) < 0.02 / (r - 2)


def test_blowup_window_errors():
    with pytest.raises(WindowTooSmall):
        blowup_exponent(3, (1e-4, 5e-4))
    with pytest.raises(WindowTooSmall):
        blowup_exponent(3, (1e-3, 10.0))


# L^p_1 membership -------------------------------------------------------------


def test_lp1_examples():
    assert lp1_membership(3, 2)
    assert not lp1_membership(3, 3)
    assert lp1_membership(5, "12/5")
    assert not lp1_membership(5, "5/2")


@pytest.mark.parametrize("r", range(3, 9))
def test_lp1_monotone(r):
    ps = [1 + k / 20 for k in range(1, 40)]
    flags = [lp1_membership(r, p) for p in ps]
    assert flags == sorted(flags, reverse=True)


def test_lp1_bad_p():
    with pytest.raises(InvalidP):
        lp1_membership(3, 1)


# ODE residual -----------------------------------------------------------------


def test_ode_residual_global_r3():
    assert ode_residual(make_profile(3, "global", 1.0, GRID), window=(0.1, 10)) < 1e-6


@pytest.mark.parametrize("r", [3, 4, 5])
@pytest.mark.parametrize("family, param", [("global", 0.5), ("global", 3.0), ("singular", None)])
def test_ode_residual_all_profiles(r, family, param):
    assert ode_residual(make_profile(r, family, param, GRID), window=(0.1, 10)) < 1e-6


def test_ode_residual_local():
    assert ode_residual(make_profile(3, "local", 1.0, GRID), window=(0.1, 10)) < 1e-8


def test_ode_residual_detects_constant():
    c, r = 0.7, 3
    prof = RadialProfile(r, "global", None, GRID, np.full_like(GRID, c))
    expected = 2 * r * c ** (r - 1) * GRID ** (2 / r - 1) * (1 + GRID**2) ** (-2 / r)
    assert ode_residual(prof) == pytest.approx(expected.max(), rel=1e-9)


@pytest.mark.parametrize("r", [3, 4, 6])
@pytest.mark.parametrize("eps", [1e-3, 0.1, 10.0])
def test_scaling_probe_local_model(r, eps):
    # phi_eps(z) = eps^(1/(r-2)) phi(eps z) is again a local solution
    u = eps ** (1 / (r - 2)) * local_solution(r, 1.0, eps * GRID) * eps ** (-1 / r)
    prof = RadialProfile(r, "local", None, GRID, u)
    assert ode_residual(prof, window=(0.1, 10)) < 1e-8 * max(1.0, np.max(u) ** (r - 1))


def test_ode_residual_rejects_rho_zero():
    prof = RadialProfile(3, "local", 1.0, np.array([0.0, 1.0, 2.0]), np.ones(3))
    with pytest.raises(InvalidRho):
        ode_residual(prof)


# Harnack ----------------------------------------------------------------------


def test_harnack_theta_zero():
    assert harnack_ratio(3, 1.0, 0, 0.1) == 1.0


@pytest.mark.parametrize("r", [3, 4, 5])
def test_harnack_singular_limit(r):
    scan = harnack_scan(r, None, 0.5)
    assert scan["bounded"]
    assert scan["limit"] == pytest.approx(2 ** (2 / (r * (r - 2))), rel=1e-3)


def test_harnack_regular_tends_to_one():
    scan = harnack_scan(3, 1.0, 0.5)
    assert scan["bounded"]
    assert scan["limit"] == pytest.approx(1.0, abs=1e-5)


def test_harnack_bad_arguments():
    with pytest.raises(ValueError):
        harnack_ratio(3, 1.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        harnack_ratio(3, 1.0, 0.5, 1.0)


# misc -------------------------------------------------------------------------


def test_csv_export():
    prof = make_profile(3, "global", 1.0, np.array([0.5, 1.0, 2.0]))
    lines = prof.to_csv().splitlines()
    assert lines[0] == "rho,u_tilde,u_norm"
    rho, u, norm = map(float, lines[2].split(","))
    assert norm == pytest.approx(u * rho ** (-1 / 3))


def test_global_profile_is_decreasing_and_positive():
    prof = make_profile(5, "global", 2.0)
    assert np.all(prof.u > 0) and np.all(np.diff(prof.u) <= 0)


@pytest.mark.parametrize("r", [2, 1, 3.5])
def test_invalid_r(r):
    with pytest.raises(InvalidR):
        local_solution(r, 1, 1)
    with pytest.raises(InvalidR):
        global_solution(r, 1, 1)


def test_invalid_u0():
    with pytest.raises(ValueError):
        global_solution(3, 0, 1)
    with pytest.raises(ValueError):
        residue_pair(3, -1)
