import math

import numpy as np
import pytest

from setflow import certificates as cert
from setflow import comparison as cmp
from setflow import convex_core as cc
from setflow import semiflow as sf
from setflow.errors import PreconditionError


M = 64
MINUS_I = cc.LinearOperator2D([[-1.0, 0.0], [0.0, -1.0]])
SQUARE_FLIP = cc.LinearOperator2D([[0.0, 1.0], [1.0, 0.0]])
ONE = sf.ScalarFunction.constant(1.0)


def _ball_params():
    return sf.SemiflowParams(MINUS_I, ONE, sf.BallSource(ONE))


def test_semigroup_constants():
    bound = cert.semigroup_constants(MINUS_I)
    assert bound.N == pytest.approx(1.0)
    assert bound.alpha == pytest.approx(-1.0)
    assert not bound.defective

    jordan = cert.semigroup_constants(cc.LinearOperator2D([[0.0, 1.0], [0.0, 0.0]]))
    assert jordan.defective
    assert jordan.alpha == pytest.approx(0.01)
    # ‖e^{At}‖₂ = (t + √(t² + 4))/2 fica abaixo de N·e^{αt}
    for t in (1.0, 10.0, 100.0):
        assert 0.5 * (t + math.sqrt(t * t + 4.0)) <= jordan.N * math.exp(jordan.alpha * t) * 1.01


def test_routh_hurwitz():
    assert cert.routh_hurwitz([[-1.0, 0.0], [0.0, -2.0]])
    assert not cert.routh_hurwitz([[1.0, 0.0], [0.0, -1.0]])


def test_invariant_ball_fixed_point():
    fp = cert.example51_fixed_point(ONE, ONE, grid_size=M)
    assert fp.lambda0 == pytest.approx(math.pi, abs=1e-10)
    assert fp.verdict.kind is cmp.VerdictKind.STABLE
    assert np.allclose(fp.u_star.values, 1.0)
    assert cert.example51_gamma0(ONE, ONE, fp.lambda0) == pytest.approx(-2.0)

    in_space = cert.example51_fixed_point(ONE, ONE, n=3)
    assert in_space.lambda0 == pytest.approx(4.0 * math.pi / 3.0, rel=1e-12)
    assert in_space.u_star is None


def test_fixed_point_without_sign_change():
    with pytest.raises(PreconditionError):
        cert.example51_fixed_point(ONE, sf.ScalarFunction.constant(0.0), bracket=(1.0, 2.0))


def test_linearize_at_invariant_ball():
    K = cc.make_ball(1.0, grid_size=M)
    report = cert.linearize(K, _ball_params())
    assert report.gamma0 == pytest.approx(-2.0, abs=1e-3)
    assert report.stable
    assert report.routh_hurwitz
    assert report.F_u_norm == pytest.approx(0.0, abs=1e-9)
    assert report.inequality_values[1] > 0
    assert report.to_dict()['omega_matrix'][0][0] == pytest.approx(-1.0)


def test_linearize_rejects_non_fixed_point():
    with pytest.raises(PreconditionError):
        cert.linearize(cc.make_ball(2.0, grid_size=M), _ball_params())


def test_hausdorff_stability_from_linearization():
    report = cert.linearize(cc.make_ball(1.0, grid_size=M), _ball_params())
    sys = cert.omega_system(report)
    assert sys.name == 'omega' and sys.dim == 2
    verdict = cert.hausdorff_stability_report(_ball_params(), report, rng=np.random.default_rng(0))
    assert verdict.kind is cmp.VerdictKind.ASYMPTOTICALLY_STABLE
    assert verdict.parameters['source'] == 'linearization'


def test_hausdorff_stability_from_explicit_bounds():
    params = _ball_params()
    forced = cert.HausdorffBounds(Lambda_hat=lambda t: 1.0, F_hat=lambda t, w: 1.0)
    assert cert.hausdorff_stability_report(params, forced).kind is cmp.VerdictKind.UNSTABLE

    quadratic = cert.HausdorffBounds(Lambda_hat=lambda t: 1.0, F_hat=lambda t, w: 0.5 * w * w)
    verdict = cert.hausdorff_stability_report(params, quadratic, eps_grid=(0.1, 0.01),
                                              rng=np.random.default_rng(0))
    assert verdict.is_stable


def test_cubic_threshold_matches_three_orbit_chain():
    lam = cert.cubic_lambda_star()
    assert abs(3 * lam ** 3 + 14 * lam ** 2 - 16) < 1e-9
    assert 0.97 < lam < 0.975
    Q = np.array([[0.0, 1.5, 0.5], [1.5, 0.0, 1.0], [0.5, 1.0, 0.0]])
    assert 2.0 / np.linalg.eigvalsh(Q).max() == pytest.approx(lam, rel=1e-9)


def test_lyapunov_ratio_condition():
    half = sf.ScalarFunction.constant(0.5)
    ok = cert.lyapunov_ratio_condition(ONE, half, 2)
    assert ok.passed
    assert ok.witness['sup_ratio'] == pytest.approx(0.5)
    assert cert.lyapunov_ratio_condition(ONE, sf.ScalarFunction.constant(0.96), 3).passed
    assert not cert.lyapunov_ratio_condition(ONE, sf.ScalarFunction.constant(0.98), 3).passed
    with pytest.raises(ValueError):
        cert.lyapunov_ratio_condition(ONE, half, 4)


def test_orbit_closed_forms_match_comparison_chain():
    half = sf.ScalarFunction.constant(0.5)
    W2 = [1.0, 0.4]
    traj = cmp.integrate(cmp.mixed_area_system(ONE, half, 2), W2, 1.0)
    assert traj.final[0] == pytest.approx(float(cert.example53_area_k2(W2, 1.0)), rel=1e-7)

    W4 = [2.0, 0.5, 1.0, 0.5]
    traj = cmp.integrate(cmp.mixed_area_system(ONE, half, 4), W4, 1.0)
    assert traj.final[0] == pytest.approx(float(cert.example53_area_k4(W4, 1.0)), rel=1e-7)
    assert float(cert.example53_area_k4(W4, 0.0)) == pytest.approx(2.0)


def test_segment_area_scales_with_square_of_length():
    ratio = cert.example53_segment_area(8, 1.0) / cert.example53_segment_area(4, 1.0)
    assert ratio == pytest.approx(4.0)
    assert float(cert.example53_segment_area(4, 0.0)) == 0.0


def test_example54_mu_variants():
    mu = cert.example54_mu(SQUARE_FLIP)
    assert (mu.mu_plus, mu.mu_minus) == pytest.approx((2.0, -2.0))
    assert mu.paper_values == pytest.approx((4.0, 0.0))
    assert mu.disagrees
    assert mu.to_dict()['trusted'] == 'eigenvalues'
    with pytest.raises(PreconditionError):
        cert.example54_mu(cc.LinearOperator2D.identity())


def test_example54_bound_and_practical_criterion():
    assert float(cert.example54_area_bound(SQUARE_FLIP, 1.0, 1.0, 1.0)) == pytest.approx(math.e ** 2, rel=1e-12)
    result = cert.example54_practical_criterion(SQUARE_FLIP, 1.0, 100.0, 1.0)
    assert result['xi0_T'] == pytest.approx(math.e ** 2, rel=1e-12)
    assert result['exact_holds']
    assert result['variants']['eigen']['holds']
    assert result['disagrees']


def test_example55_instability():
    assert cert.example55_instability(ONE, ONE, -2.0).kind is cmp.VerdictKind.UNSTABLE
    linear_psi = sf.ScalarFunction.power(1.0, 1.0)
    assert cert.example55_instability(ONE, linear_psi, -2.0).kind is cmp.VerdictKind.INCONCLUSIVE
    with pytest.raises(PreconditionError):
        cert.example55_instability(sf.ScalarFunction.constant(0.0), ONE, -2.0)


def test_global_existence_for_invariant_ball():
    g = sf.ScalarFunction.power(2.0 * math.sqrt(math.pi), 0.5)
    bounds = cert.ExistenceBounds(g_upper=g, g_lower=g, F_plus=lambda t, w, V0: 1.0)
    u0 = cc.make_ball(1.2, grid_size=M)
    report = cert.global_existence_report(_ball_params(), bounds, u0, 2.0, evolve_dt=1e-2)
    assert report.finite
    assert report.blowup_time is None
    assert report.norm_check['passed']
    # ω⁺(t) = 1 + 0.2e⁻ᵗ
    assert report.omega_plus.final[0] == pytest.approx(1.0 + 0.2 * math.exp(-2.0), rel=1e-6)
    assert report.to_dict()['finite'] is True
