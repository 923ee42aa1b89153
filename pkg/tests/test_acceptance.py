"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected and repeated in the pytest terminal summary.
"""

import math
from fractions import Fraction

import numpy as np

from jacobi_theta import (
    enumerate_points,
    quasi_depth_fit,
    reconstruct_from_orthogonal,
    sample_points,
    series,
    theta_coeffs,
    theta_eval,
    validate_form,
    verify_congruence,
    verify_elliptic,
    verify_generating,
    verify_modular,
    verify_support,
    verify_translation_polynomial,
)
from jacobi_theta.series import delta_coeff
from jacobi_theta.verify import support_boundary

from .conftest import V_GEN, V_ISO, V_ORTHO, brute_points, random_even_form

RESULTS: list[str] = []

EPS = 1e-10
GAMMAS = [(1, 1, 0, 1), (1, 0, 4, 1), (-3, -1, 4, 1)]
LAMBDAS = [(1, 0), (0, 1), (2, -1)]
POINTS = sample_points(2, 8, seed=0)


def report(name, ok, detail):
    line = f"ACCEPTANCE {'PASS' if ok else 'FAIL'} {name}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_modular_theta(spec_of):
    worst = 0.0
    for k in (0, 1, 2, 4):
        for gamma in GAMMAS:
            worst = max(worst, verify_modular("theta", spec_of(V_ISO, k), gamma, POINTS, 1e-8, EPS).max_residual)
    report("theta modular law (v_iso, k in {0,1,2,4}, 3 gammas, 8 points)", worst < 1e-8, f"max rel residual {worst:.2e} < 1e-8")


def test_elliptic_theta(spec_of):
    worst, exact = 0.0, True
    for k in (0, 1, 2, 4):
        spec = spec_of(V_ISO, k)
        for lam in LAMBDAS:
            base = verify_elliptic("theta", spec, lam, (0, 0), POINTS, 1e-8, EPS)
            worst = max(worst, base.max_residual)
            for mu in [(1, 0), (-3, 7), (5, 5)]:
                other = verify_elliptic("theta", spec, lam, mu, POINTS, 1e-8, EPS)
                exact &= [(s.lhs, s.rhs) for s in other.samples] == [(s.lhs, s.rhs) for s in base.samples]
    report(
        "theta elliptic law (v_iso, 3 lambdas, mu-independence)",
        worst < 1e-8 and exact,
        f"max rel residual {worst:.2e} < 1e-8; mu-independence bit-exact: {exact}",
    )


def test_psi_laws(spec_of, monkeypatch):
    worst = 0.0
    for k in (2, 3, 4):
        spec = spec_of(V_ORTHO, k)
        for gamma in GAMMAS:
            worst = max(worst, verify_modular("psi", spec, gamma, POINTS, 1e-8, EPS).max_residual)
        for lam in LAMBDAS:
            worst = max(worst, verify_elliptic("psi", spec, lam, (1, -1), POINTS, 1e-8, EPS).max_residual)
    original = series.eisenstein_e2
    monkeypatch.setattr(series, "eisenstein_e2", lambda t, eps=1e-14: 1 - 12 * (original(t, eps) + 1 / 12))
    classical = verify_modular("psi", spec_of(V_ORTHO, 2), (1, 0, 4, 1), POINTS, 1e-8, EPS).max_residual
    report(
        "Psi modular and elliptic laws (v_ortho, k in {2,3,4})",
        worst < 1e-8 and classical > 1e-8,
        f"max rel residual {worst:.2e} < 1e-8; classical E2 normalisation fails with {classical:.2e}",
    )


def test_generating(form, dirs):
    r = verify_generating(form, dirs, V_ORTHO, (1, 0, 4, 1), 6, POINTS, 1e-6, EPS)
    report("generating law (v_ortho, gamma=(1,0,4,1), T=6)", r.max_residual < 1e-6, f"max per-coefficient residual {r.max_residual:.2e} < 1e-6")


def test_congruence(form, dirs):
    worst = 0.0
    for p in [(0, 0, 0, 0), (2, 0, 0, 0)]:
        for k in (0, 1, 2):
            r = verify_congruence(form, p, V_ISO, k, dirs, (1, 0, 4, 1), POINTS, 1e-8, EPS)
            worst = max(worst, r.max_residual)
    report("congruence theta law (p=0 and p=(2,0,0,0), k in {0,1,2})", worst < 1e-8, f"max rel residual {worst:.2e} < 1e-8")


def test_support(spec_of, dirs):
    violations, boundary_hits, stored, checked, missing = 0, 0, 0, 0, []
    for v in (V_ISO, V_ORTHO, V_GEN):
        seen = False
        for k in range(5):
            r = verify_support(theta_coeffs(spec_of(v, k), 10), dirs.G, 0.0)
            checked += len(r.samples)
            violations += sum(s.abs_residual > 0 for s in r.samples)
            for s in r.samples:
                if (s.point["ell"], tuple(s.point["nu"])) == (1, (2, 0)):
                    seen = True
                    stored += 1
                    boundary_hits += s.point["margin"] == "0" and (1, (2, 0)) in support_boundary(r)
        if not seen:
            missing.append(v)
    report(
        "Fourier support inequality (3 v fixtures, k <= 4, lmax=10)",
        violations == 0 and not missing and boundary_hits == stored,
        f"{checked} coefficients, {violations} violations; (1,(2,0)) stored in {stored} expansions, "
        f"margin exactly 0 in {boundary_hits}",
    )


def test_orthogonal_reconstruction(spec_of):
    worst = 0.0
    for k in range(6):
        spec = spec_of((1, 0, 1, 0), k)
        worst = max(worst, reconstruct_from_orthogonal(spec, 6).max_abs_difference(theta_coeffs(spec, 6)))
    report("coefficient-map reconstruction (v=(1,0,1,0), lmax=6, k<=5)", worst < 1e-10, f"max coefficient difference {worst:.2e} < 1e-10")


def test_depth(spec_of):
    base = sample_points(2, 3, seed=8)
    lines, ok = [], True
    # theta_2 vanishes identically for v_iso; k = 4 does not
    for k in (2, 4):
        fit = quasi_depth_fit(spec_of(V_ISO, k), base)
        ok &= fit.depth == (0, 0, 0) and fit.residual < 1e-6
        lines.append(f"v_iso k={k} depth {fit.depth} residual {fit.residual:.1e}")
    for k in (1, 2):
        fit = quasi_depth_fit(spec_of(V_GEN, k), base)
        ok &= fit.lambda_depth == (k, 0) and fit.residual < 1e-6
        lines.append(f"v_gen k={k} lambda-depth {fit.lambda_depth} residual {fit.residual:.1e}")
    worst = 0.0
    for k in (1, 2):
        for lam in LAMBDAS:
            worst = max(worst, verify_translation_polynomial(spec_of(V_GEN, k), lam, (0, 1), POINTS, 1e-8, EPS).max_residual)
    ok &= worst < 1e-8
    lines.append(f"translation residual {worst:.1e}")
    report("quasi-Jacobi depth and translation polynomial", ok, "; ".join(lines))


def test_oracles(spec_of):
    rng = np.random.default_rng(2024)
    mismatches = 0
    for trial in range(50):
        A = random_even_form(rng, 4 if trial % 2 else 2)
        R = int(rng.integers(0, 11))
        got = sorted(tuple(int(x) for x in m) for m in enumerate_points(validate_form(A), R))
        mismatches += got != brute_points(A, R)
    specs = [spec_of(V_ISO, 2), spec_of(V_ORTHO, 3), spec_of(V_GEN, 1), spec_of((1, 2j, 0.5, -1), 4)]
    oracles = [theta_coeffs(s, 40) for s in specs]
    worst = 0.0
    for i, (tau, z) in enumerate(sample_points(2, 20, seed=99)):
        exact = oracles[i % 4].evaluate(tau, z)
        worst = max(worst, abs(theta_eval(specs[i % 4], tau, z, EPS) - exact) / max(1.0, abs(exact)))
    report(
        "enumeration and evaluation oracles",
        mismatches == 0 and worst < 2 * EPS,
        f"{mismatches}/50 enumeration mismatches; eval vs coefficient sum {worst:.2e} < {2 * EPS:.0e}",
    )


def test_delta_identity():
    bad = 0
    for t in range(13):
        for j in range(t // 2 + 1):
            # 2^(t/2) delta(j,t)/t! = 2^((t-2j)/2)/((t-2j)! j!)  <=>  delta(j,t)/t! = 1/(2^j (t-2j)! j!)
            lhs = Fraction(delta_coeff(j, t), math.factorial(t))
            rhs = Fraction(1, 2**j * math.factorial(t - 2 * j) * math.factorial(j))
            bad += lhs != rhs
    report("delta rearrangement identity (t <= 12, exact rationals)", bad == 0, f"{bad} mismatches")
