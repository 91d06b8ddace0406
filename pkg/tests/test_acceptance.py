"""Acceptance criteria 1-11; each prints one PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v -s`` or ``python tests/test_acceptance.py``.
"""

import math
import random
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest
from scipy import special

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ADE, ADE_TWO_VARS  # noqa: E402
from wspin import _linalg  # noqa: E402
from wspin.elim import RootBoundInput, elimination_poly, empirical_bound, gershgorin_bound  # noqa: E402
from wspin.orbicurve import SpinCurveSpec, bundle_degrees  # noqa: E402
from wspin.polyparse import parse_poly  # noqa: E402
from wspin.quasihom import (  # noqa: E402
    PhaseVector,
    compactness_ranges,
    growth_exponents,
    infer_weights,
    symmetry_group,
)
from wspin.radial import blowup_exponent, identity_check, integral_I  # noqa: E402


def report(number, title, ok, detail):
    line = f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    print(line, flush=True)
    return ok


# 1 ------------------------------------------------------------------------------


def criterion_1():
    start = time.perf_counter()
    table = [(f"x^{r}", (F(1, r),)) for r in range(3, 11)]
    table += [(f"x^{n} + x*y^2", (F(1, n), F(n - 1, 2 * n))) for n in range(3, 9)]
    table += [("x^3 + y^4", (F(1, 3), F(1, 4))), ("x^3 + x*y^3", (F(1, 3), F(2, 9))), ("x^3 + y^5", (F(1, 3), F(1, 5)))]
    bad = [text for text, q in table if infer_weights(parse_poly(text)).q != q]
    elapsed = time.perf_counter() - start
    return report(1, "weight tables", not bad and elapsed < 1, f"{len(table) - len(bad)}/{len(table)} exact in {elapsed:.3f}s")


# 2 ------------------------------------------------------------------------------


def criterion_2():
    table = [(f"x^{r}", (2 * (r - 2),)) for r in range(3, 11)]
    table += [(f"x^{n} + x*y^2", (2 * (n - 2), F(4, n - 1))) for n in range(3, 11)]
    table += [("x^3 + y^4", (2, 4)), ("x^3 + x*y^3", (2, 5)), ("x^3 + y^5", (2, 6))]
    bad = [text for text, sup in table if compactness_ranges(parse_poly(text)).lp_sup != tuple(map(F, sup))]
    return report(2, "compactness ranges", not bad, f"{len(table) - len(bad)}/{len(table)} exact" + (f", bad {bad}" if bad else ""))


# 3 ------------------------------------------------------------------------------


def criterion_3():
    table = [(f"x^{r}", (F(1, r - 2),)) for r in range(3, 11)]
    table += [(f"x^{n} + x*y^2", (F(1, n - 2), F(n - 1, 2))) for n in range(3, 11)]
    table += [("x^3 + x*y^3", (F(1), F(2, 5)))]
    bad = [text for text, k in table if growth_exponents(parse_poly(text)).kappa_i != k]
    return report(3, "kappa exponents", not bad, f"{len(table) - len(bad)}/{len(table)} exact")


# 4 ------------------------------------------------------------------------------


def criterion_4():
    start = time.perf_counter()
    worst = max(identity_check(r, u0)["rel_err"] for r in (3, 4, 5, 7) for u0 in (0.5, 1.0, 2.0))
    elapsed = time.perf_counter() - start
    return report(4, "residue-energy identity", worst < 1e-6 and elapsed < 30, f"max |E - pi R|/(pi R) = {worst:.2e} in {elapsed:.2f}s")


# 5 ------------------------------------------------------------------------------


def criterion_5():
    errs = []
    for r in range(3, 9):
        oracle = 0.5 * special.beta(1 / r, 1 / r)
        errs.append(abs(integral_I(r, math.inf) - oracle) / oracle)
    worst = max(errs)
    return report(5, "quadrature vs Beta oracle", worst < 1e-8, f"max relative error {worst:.2e}")


# 6 ------------------------------------------------------------------------------


def criterion_6():
    parts, ok = [], True
    for r in (3, 4, 5):
        slope = blowup_exponent(r)
        target = -1 / (r - 2)
        rel = abs(slope - target) / abs(target)
        ok &= rel < 0.02
        parts.append(f"r={r} slope {slope:.6f} ({rel:.1e})")
    return report(6, "blow-up slope", ok, "; ".join(parts))


# 7 ------------------------------------------------------------------------------


def criterion_7():
    rng = np.random.default_rng(20240601)
    violations = 0
    for mode in ("unit", "random"):
        for _ in range(1000):
            N = int(rng.integers(1, 9))
            alpha = (rng.normal(size=N) + 1j * rng.normal(size=N)) * 10 ** rng.uniform(-2, 2, size=N)
            rho = np.ones(N) if mode == "unit" else 10 ** rng.uniform(-2, 2, size=N)
            D = gershgorin_bound(RootBoundInput(tuple(alpha), tuple(rho)))
            roots = np.roots([1] + list(alpha[::-1]))
            violations += int(np.sum(np.abs(roots) > D * (1 + 1e-9)))
    return report(7, "Gershgorin soundness", violations == 0, f"{violations} violations in 2 x 1000 polynomials")


# 8 ------------------------------------------------------------------------------


def criterion_8():
    ok = elimination_poly(parse_poly("x^3 + x*y^2"), "x").format_in("x") == "12*x^4 - 4*s1*x^2 + s2^2"
    structure = True
    for _, text in ADE_TWO_VARS:
        P = parse_poly(text)
        w = infer_weights(P)
        for i, var in enumerate(P.variables):
            p = elimination_poly(P, i)
            structure &= p.leading_coefficient(var).is_constant()
            N = p.degree(var)
            for power, coeff in enumerate(p.coefficients_in(var)):
                structure &= all(sum(e[1:]) <= (N - power) * w.delta_i[i] for e in coeff.terms)
    P = parse_poly("x^3 + x*y^2")
    polys = [elimination_poly(P, i) for i in range(2)]
    rnd = random.Random(8)
    vanish = 0
    for _ in range(200):
        u = [F(rnd.randint(-30, 30), rnd.randint(1, 12)) for _ in range(2)]
        s = [g.evaluate(u) for g in P.gradient()]
        vanish += all(p.evaluate({p.variables[0]: u[i], "s1": s[0], "s2": s[1]}) == 0 for i, p in enumerate(polys))
    ok = ok and structure and vanish == 200
    return report(8, "elimination polynomial", ok, f"D4 text match, structure on {len(ADE_TWO_VARS)} ADE cases, {vanish}/200 exact zeros")


# 9 ------------------------------------------------------------------------------


def criterion_9():
    sizes_ok = 0
    groups = []
    for _, text in ADE:
        P = parse_poly(text)
        group = symmetry_group(P)
        sizes_ok += len(group) == abs(_linalg.det(P.exponent_matrix))
        groups.append((P, group))
    rnd = random.Random(9)
    axiom_failures = 0
    for _ in range(1000):
        P, group = rnd.choice(groups)
        members = set(group)
        g, h = rnd.choice(group), rnd.choice(group)
        axiom_failures += not (g + h in members and -g in members and (g + h) + (-h) == g and g.fixes(P))
    axiom_failures += any(PhaseVector((0,) * P.nvars) not in set(G) for P, G in groups)
    ok = sizes_ok == len(ADE) and axiom_failures == 0
    return report(9, "symmetry groups", ok, f"|H| = |det B| on {sizes_ok}/{len(ADE)}, {axiom_failures} axiom failures in 1000 pairs")


# 10 -----------------------------------------------------------------------------


def criterion_10():
    polys = ["x^3", "x^5", "x^3 + x*y^2", "x^4 + x*y^2", "x^3 + y^4", "x^3 + x*y^3", "x^3 + y^5"]
    groups = {t: symmetry_group(parse_poly(t)) for t in polys}
    rnd = random.Random(10)
    failures = 0
    for _ in range(500):
        text = rnd.choice(polys)
        marks = [(f"m{l}", rnd.choice(groups[text])) for l in range(rnd.randint(0, 5))]
        spec = SpinCurveSpec.build(text, rnd.randint(0, 3), marks)
        deg = bundle_degrees(spec).deg
        for _, e in spec.poly.monomials:
            lhs = sum(b * d for b, d in zip(e, deg))
            lhs += sum(b * (m.phases.a[j] - spec.weights.q[j]) for m in spec.marks for j, b in enumerate(e))
            failures += lhs != 2 * spec.genus - 2
    a = bundle_degrees(SpinCurveSpec.build("x^3", 0, [("a", [F(1, 3)]), ("b", [F(1, 3)]), ("c", [F(2, 3)])]))
    b = bundle_degrees(SpinCurveSpec.build("x^3", 0, [("a", [F(1, 3)]), ("b", [F(1, 3)]), ("c", [F(1, 3)])]))
    examples = a.deg == (-1,) and a.admissible and b.deg == (F(-2, 3),) and not b.admissible
    return report(10, "degree bookkeeping", failures == 0 and examples, f"{failures} identity failures on 500 specs, A2 examples {'match' if examples else 'differ'}")


# 11 -----------------------------------------------------------------------------


def criterion_11():
    degenerate = empirical_bound(parse_poly("x^2*y^2 + x^4"))
    unstable = [name for name, text in ADE if not empirical_bound(parse_poly(text)).all_stabilized]
    ok = bool(degenerate.unbounded) and not unstable
    growth = float(np.max(degenerate.growth))
    return report(11, "degenerate counterexample", ok, f"degenerate growth per doubling {growth:.2f}, ADE not stabilized: {unstable or 'none'}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 12)])
def test_acceptance(criterion, capsys):
    with capsys.disabled():
        print()
        ok = criterion()
    assert ok


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
