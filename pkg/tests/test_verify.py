import numpy as np
import pytest

from jacobi_theta import (
    FourierExpansion,
    ThetaSpec,
    quasi_depth_fit,
    sample_points,
    series,
    theta_coeffs,
    verify_congruence,
    verify_elliptic,
    verify_generating,
    verify_modular,
    verify_support,
    verify_translation_polynomial,
)
from jacobi_theta.errors import (
    HypothesisViolation,
    InadmissibleResidue,
    InadmissibleSpec,
    NegativeD,
)
from jacobi_theta.verify import Verdict, VerificationReport, support_boundary

from .conftest import A2, V_GEN, V_ISO, V_ORTHO

GAMMA_S = (1, 0, 4, 1)
POINTS = sample_points(2, 4, seed=1)


class TestReport:
    def test_verdict_follows_max_residual(self, spec_of):
        report = verify_modular("theta", spec_of(V_ISO, 2), GAMMA_S, POINTS)
        assert report.passed == (report.max_residual <= report.tolerance)
        tight = VerificationReport(report.identity_name, report.samples, 0.0, report.truncation)
        assert tight.verdict is (Verdict.PASS if report.max_residual == 0 else Verdict.FAIL)

    def test_relative_residual_has_floor_one(self, spec_of):
        report = verify_modular("theta", spec_of(V_ISO, 2), GAMMA_S, POINTS)
        for s in report.samples:
            assert s.rel_residual == s.abs_residual / max(1.0, abs(s.rhs))

    def test_records(self, spec_of):
        report = verify_modular("theta", spec_of(V_ISO, 0), GAMMA_S, POINTS)
        assert len(report.sample_records()) == len(POINTS)
        summary = report.summary()
        assert summary["identity"] == "modular-theta" and summary["verdict"] == "pass"
        assert summary["truncation"]["evaluations"] > 0

    def test_sample_points_deterministic(self):
        assert sample_points(2, 8, seed=4) == sample_points(2, 8, seed=4)
        for tau, z in sample_points(3, 20, seed=0):
            assert 0.5 <= tau.imag <= 2 and abs(tau.real) <= 0.5
            assert all(abs(x) <= 0.3 for x in z)


class TestModular:
    def test_identity_is_exact(self, spec_of):
        report = verify_modular("theta", spec_of(V_ISO, 2), (1, 0, 0, 1), POINTS)
        assert report.max_abs_residual == 0

    @pytest.mark.parametrize("k", range(5))
    def test_translation(self, spec_of, k):
        assert verify_modular("theta", spec_of(V_ISO, k), (1, 1, 0, 1), POINTS).max_residual < 1e-12

    def test_example(self, spec_of):
        report = verify_modular("theta", spec_of(V_ISO, 2), GAMMA_S, [(0.3 + 1.1j, (0.05, 0.1j))])
        assert report.max_residual < 1e-8

    def test_negative_d(self, spec_of):
        assert verify_modular("theta", spec_of(V_ISO, 4), (-1, 0, -4, -1), POINTS).passed

    def test_nonvanishing_fixture(self):
        # Q(v) = 0 and B(v, e4) = 0 here, with theta_2 not identically zero
        spec = ThetaSpec.build([[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 4, 0], [0, 0, 0, 4]], [[0, 0, 0, 1]], (1, 1, 1j, 0), 2)
        assert spec.form.level_N == 8
        for a, b, c, d in [(1, 0, 8, 1), (3, 1, 8, 3), (-5, 2, -8, 3)]:
            # tau near -d/c keeps Im(gamma tau) comparable to Im(tau)
            pts = [(complex(-d / c + dx, 0.15), (0.05 + 0.02j,)) for dx in (-0.02, 0.0, 0.03)]
            assert max(abs(series.theta_eval(spec, t, z)) for t, z in pts) > 1e-3
            assert verify_modular("theta", spec, (a, b, c, d), pts).max_residual < 1e-8

    def test_a2_character(self):
        # eps(2) = -1 for the A2 form; a wrong character would flip the sign
        spec = ThetaSpec.build(A2, [[1, 0]], (0, 0), 0)
        pts = sample_points(1, 4, seed=2)
        for gamma in [(2, 1, 3, 2), (-1, 0, -3, -1)]:
            # eps(-1) = (-1)^r eps(1) = -1 here
            report = verify_modular("theta", spec, gamma, pts)
            assert report.max_residual < 1e-8
            assert min(abs(s.rhs) for s in report.samples) > 1e-3

    def test_a2_psi(self):
        spec = ThetaSpec.build(A2, [[1, 0]], (1, -2), 2)
        assert spec.v.q_of_v == 3 and spec.v.pairings == (0,)
        pts = sample_points(1, 4, seed=2)
        for gamma in [(2, 1, 3, 2), (1, 0, 3, 1), (1, 0, -3, 1), (-1, 0, -3, -1)]:
            assert verify_modular("psi", spec, gamma, pts).max_residual < 1e-8

    def test_psi_equals_theta_when_isotropic(self, spec_of):
        spec = spec_of(V_ISO, 4)
        a = verify_modular("theta", spec, GAMMA_S, POINTS)
        b = verify_modular("psi", spec, GAMMA_S, POINTS)
        assert [s.rel_residual for s in a.samples] == [s.rel_residual for s in b.samples]

    def test_refusals(self, spec_of):
        with pytest.raises(InadmissibleSpec):
            verify_modular("theta", spec_of(V_ORTHO, 2), GAMMA_S, POINTS)
        with pytest.raises(InadmissibleSpec):
            verify_modular("psi", spec_of(V_GEN, 2), GAMMA_S, POINTS)
        with pytest.raises(InadmissibleSpec):
            verify_modular("theta", spec_of(V_ISO, 2), (1, 0, 2, 1), POINTS)

    def test_classical_e2_fails(self, spec_of, monkeypatch):
        spec = spec_of(V_ORTHO, 2)
        assert verify_modular("psi", spec, GAMMA_S, POINTS).passed
        original = series.eisenstein_e2
        monkeypatch.setattr(series, "eisenstein_e2", lambda t, eps=1e-14: 1 - 12 * (original(t, eps) + 1 / 12))
        report = verify_modular("psi", spec, GAMMA_S, POINTS)
        assert not report.passed
        assert report.max_residual > 1e-3


class TestElliptic:
    def test_zero_lambda_exact(self, spec_of):
        report = verify_elliptic("theta", spec_of(V_ISO, 2), (0, 0), (3, -1), POINTS)
        assert report.max_abs_residual == 0

    def test_example(self, spec_of):
        assert verify_elliptic("theta", spec_of(V_ISO, 2), (1, 0), (0, 1), POINTS).max_residual < 1e-8

    def test_classical(self, spec_of):
        # k = 0: v does not enter, so its hypotheses are vacuous
        assert verify_elliptic("theta", spec_of(V_GEN, 0), (1, -1), (0, 0), POINTS).max_residual < 1e-10

    def test_psi(self, spec_of):
        assert verify_elliptic("psi", spec_of(V_ORTHO, 3), (2, -1), (1, 1), POINTS).max_residual < 1e-8

    def test_refuses_non_orthogonal(self, spec_of):
        with pytest.raises(InadmissibleSpec):
            verify_elliptic("theta", spec_of(V_GEN, 1), (1, 0), (0, 0), POINTS)


class TestTranslation:
    def test_orthogonal_collapses(self, spec_of):
        spec = spec_of(V_ORTHO, 2)
        a = verify_translation_polynomial(spec, (1, 0), (0, 1), POINTS)
        b = verify_elliptic("theta", spec, (1, 0), (0, 1), POINTS)
        assert a.max_residual < 1e-8 and b.max_residual < 1e-8
        for s, (tau, z) in zip(a.samples, POINTS):
            assert s.rhs == series.theta_eval(spec, tau, z)

    @pytest.mark.parametrize("k, lam", [(1, (1, 0)), (2, (1, 0)), (3, (-1, 2)), (4, (2, 1))])
    def test_general_v(self, spec_of, k, lam):
        assert verify_translation_polynomial(spec_of(V_GEN, k), lam, (0, 0), POINTS).max_residual < 1e-8

    def test_k_zero(self, spec_of):
        assert verify_translation_polynomial(spec_of(V_GEN, 0), (1, 1), (0, 0), POINTS).max_residual < 1e-10


class TestGenerating:
    def test_identity_exact(self, form, dirs):
        report = verify_generating(form, dirs, V_ORTHO, (1, 0, 0, 1), 3, POINTS[:2])
        assert report.max_abs_residual == 0

    def test_isotropic(self, form, dirs):
        assert verify_generating(form, dirs, V_ISO, GAMMA_S, 4, POINTS[:2]).max_residual < 1e-8

    def test_refuses_non_orthogonal(self, form, dirs):
        with pytest.raises(InadmissibleSpec):
            verify_generating(form, dirs, V_GEN, GAMMA_S, 2, POINTS)


class TestCongruence:
    def test_p_zero(self, form, dirs):
        assert verify_congruence(form, (0, 0, 0, 0), V_ISO, 2, dirs, GAMMA_S, POINTS).max_residual < 1e-8

    @pytest.mark.parametrize("k", range(5))
    def test_upper_triangular(self, form, dirs, k):
        report = verify_congruence(form, (0, 0, 0, 0), V_ISO, k, dirs, (1, 1, 0, 1), POINTS)
        assert report.max_residual < 1e-12

    def test_nonzero_residue(self, form, dirs):
        report = verify_congruence(form, (2, 2, 0, 2), V_ISO, 2, dirs, (3, 2, 4, 3), [(-0.75 + 0.3j, (0.05, 0.1j))])
        assert report.max_residual < 1e-8

    def test_residue_is_a_times_p(self, form, dirs):
        # gamma = (1, 0, 4, 1): a p = p but b p = 0, and the two thetas differ
        tau, p = 0.1 + 0.8j, (2, 0, 0, 0)
        gt = tau / (4 * tau + 1)
        lhs = series.congruence_theta_eval(form, p, V_ISO, 0, dirs, gt, (0, 0)) / (4 * tau + 1) ** 2
        with_a = series.congruence_theta_eval(form, p, V_ISO, 0, dirs, tau, (0, 0))
        with_b = series.congruence_theta_eval(form, (0, 0, 0, 0), V_ISO, 0, dirs, tau, (0, 0))
        assert abs(lhs - with_a) < 1e-10
        assert abs(lhs - with_b) > 1e-2

    def test_errors(self, form, dirs):
        with pytest.raises(InadmissibleResidue):
            verify_congruence(form, (1, 0, 0, 0), V_ISO, 0, dirs, GAMMA_S, POINTS)
        with pytest.raises(HypothesisViolation):
            verify_congruence(form, (0, 0, 0, 0), V_GEN, 0, dirs, GAMMA_S, POINTS)
        with pytest.raises(NegativeD):
            verify_congruence(form, (0, 0, 0, 0), V_ISO, 0, dirs, (-1, 0, -4, -1), POINTS)


class TestSupport:
    def test_fixture(self, spec_of, dirs):
        report = verify_support(theta_coeffs(spec_of(V_GEN, 1), 10), dirs.G)
        assert report.passed and report.max_abs_residual == 0
        assert (1, (2, 0)) in support_boundary(report)
        assert (0, (0, 0)) not in support_boundary(report)  # c(0, 0) = 0 for odd k

    def test_margins_exact(self, spec_of, dirs):
        report = verify_support(theta_coeffs(spec_of(V_GEN, 0), 4), dirs.G)
        margins = {(s.point["ell"], tuple(s.point["nu"])): s.point["margin"] for s in report.samples}
        assert margins[(0, (0, 0))] == "0"
        assert margins[(1, (2, 0))] == "0"
        assert margins[(1, (0, 0))] == "4"

    def test_detects_violation(self, dirs):
        bad = FourierExpansion({(1, (4, 0)): 1 + 0j}, 2, 2)
        report = verify_support(bad, dirs.G)
        assert not report.passed and report.max_residual == 12  # margin 4 - 16


class TestDepth:
    BASE = [(0.1 + 0.9j, (0.1, -0.05j)), (-0.2 + 1.2j, (0.05 + 0.05j, 0.1))]

    def test_jacobi_case(self, spec_of):
        fit = quasi_depth_fit(spec_of(V_ISO, 2), self.BASE)
        assert fit.depth == (0, 0, 0) and fit.residual < 1e-6

    def test_k_zero(self, spec_of):
        assert quasi_depth_fit(spec_of(V_GEN, 0), self.BASE).depth == (0, 0, 0)

    def test_general_v(self, spec_of):
        fit = quasi_depth_fit(spec_of(V_GEN, 1), self.BASE)
        assert fit.lambda_depth == (1, 0) and fit.residual < 1e-6

    def test_orthogonal_non_isotropic(self, spec_of):
        fit = quasi_depth_fit(spec_of(V_ORTHO, 2), self.BASE)
        assert fit.lambda_depth == (0, 0) and fit.t == 1


def test_deterministic(spec_of):
    a = verify_modular("psi", spec_of(V_ORTHO, 3), GAMMA_S, POINTS)
    b = verify_modular("psi", spec_of(V_ORTHO, 3), GAMMA_S, POINTS)
    assert a.sample_records() == b.sample_records()
    assert np.isfinite(a.max_residual)
