import numpy as np
import pytest

from warpconv import grid as G
from warpconv import qm
from warpconv.errors import (ConfigError, ExtrapolationError,
                             QuadratureRangeError)
from warpconv.warp import (RIEFFEL_DEFAULT, WarpConfig, adjoint_consistency,
                           rieffel_product, warp_oscillatory, warp_spectral)

SQ2 = 0.7071067811865476


@pytest.fixture(scope="module")
def grid2d():
    return G.make_grid(2, 12, 5.0)


def test_config_validation():
    with pytest.raises(ConfigError):
        WarpConfig(epsilon_schedule=(0.5,))
    with pytest.raises(ConfigError):
        WarpConfig(epsilon_schedule=(0.25, 0.5))
    with pytest.raises(ConfigError):
        WarpConfig(cutoff="boxcar")
    with pytest.raises(ConfigError):
        WarpConfig(extrapolation_order=9)


def test_config_text_round_trip():
    cfg = WarpConfig(quad_points=24, cutoff="bump",
                     epsilon_schedule=(0.4, 0.2), extrapolation_order=1)
    back = WarpConfig.from_text(cfg.to_text())
    assert back == cfg
    with pytest.raises(ConfigError):
        WarpConfig.from_text("quad_points : nope")


def test_spectral_zero_skew_is_exact(grid2d):
    phi = G.domain_vector(grid2d, 2, 1)
    A = G.h0_operator(grid2d)
    Q = G.q_generator(grid2d, 1.0)
    out = warp_spectral(A, Q, G.SkewMatrix.zero(2), phi)
    assert (out - A.apply(phi)).norm() == 0.0


def test_spectral_position_diagonal_commutes(grid2d):
    phi = G.domain_vector(grid2d, 1, 1)
    A = G.PositionMultiplier(grid2d, np.cos(grid2d.radii()))
    Q = G.q_generator(grid2d, 1.0)
    th = G.SkewMatrix.from_block(0.3)
    out = warp_spectral(A, Q, th, phi)
    assert (out - A.apply(phi)).norm() == 0.0


def test_spectral_group_vs_series(grid2d):
    phi = G.domain_vector(grid2d, 2, 2)
    th = G.SkewMatrix.from_block(0.1)
    for n in (1.0, 2.0):
        Q = G.q_generator(grid2d, n)
        for A in (G.momentum_operator(grid2d, 0), G.h0_operator(grid2d)):
            a = warp_spectral(A, Q, th, phi, method="group")
            b = warp_spectral(A, Q, th, phi, method="series")
            assert (a - b).norm() / a.norm() < 1e-13


def test_spectral_series_rejects_large_phase(grid2d):
    phi = G.domain_vector(grid2d, 1, 1)
    Q = G.q_generator(grid2d, 0.0)
    th = G.SkewMatrix.from_block(0.5)
    with pytest.raises(ValueError):
        warp_spectral(G.h0_operator(grid2d), Q, th, phi, method="series")


def test_spectral_requires_multiplication_generator(grid2d):
    phi = G.domain_vector(grid2d, 1, 1)
    with pytest.raises(TypeError):
        warp_spectral(G.h0_operator(grid2d), G.h0_operator(grid2d),
                      G.SkewMatrix.zero(2), phi)


def test_spectral_momentum_closed_form():
    sp = G.make_grid(3, 32, 7.0)
    phi = G.domain_vector(sp, 4, 4, 4)
    B = G.SkewMatrix.from_axial((0.0, 0.0, 0.1))
    for n in (0.0, 1.0):
        Q = G.q_generator(sp, n)
        P = G.momentum_operator(sp, 1)
        ws = warp_spectral(P, Q, B, phi)
        closed = qm.deformed_momentum(sp, B, n, 1).apply(phi)
        assert (ws - closed).norm() / closed.norm() < 1e-5


def test_adjoint_consistency(grid2d):
    psi = G.domain_vector(grid2d, 2, 1)
    phi = G.domain_vector(grid2d, 1, 2)
    th = G.SkewMatrix.from_block(0.1)
    Q = G.q_generator(grid2d, 1.0)
    # hermitian undeformed, zero skew
    assert adjoint_consistency(G.h0_operator(grid2d), Q,
                               G.SkewMatrix.zero(2), psi, phi) < 1e-10
    # position-diagonal commutes with every conjugation
    assert adjoint_consistency(G.position_operator(grid2d, 0), Q, th,
                               psi, phi) < 1e-10
    # the exact evaluator satisfies the adjoint relation to roundoff
    assert adjoint_consistency(G.h0_operator(grid2d), Q, th, psi, phi) < 1e-10
    nonnormal = G.position_operator(grid2d, 0) @ G.momentum_operator(grid2d, 0)
    assert adjoint_consistency(nonnormal, Q, th, psi, phi) < 1e-10


def test_oscillatory_zero_skew_1d():
    sp = G.make_grid(1, 32, 6.0)
    phi = G.domain_vector(sp, 2)
    Q = G.q_generator(sp, 1.0)
    A = G.h0_operator(sp)
    res = warp_oscillatory(A, Q, G.SkewMatrix.zero(1), phi,
                           WarpConfig(estimate_quadrature_error=False))
    ref = A.apply(phi)
    assert (res.state - ref).norm() / ref.norm() < 1e-6
    assert res.extrapolation_residual < 0.1 * ref.norm()
    assert len(res.per_epsilon_states) == 5
    doc = res.to_json_dict()
    assert len(doc["per_epsilon"]) == 5
    assert doc["diagnostics"]["boundary_weight_ratio"] < 1e-6


def test_oscillatory_identity_any_skew(grid2d):
    phi = G.domain_vector(grid2d, 1, 2)
    Q = G.q_generator(grid2d, 1.0)
    th = G.SkewMatrix.from_block(0.1)
    deep6 = (0.5, SQ2 * 0.5, 0.25, SQ2 * 0.25, 0.125, SQ2 * 0.125)
    res = warp_oscillatory(G.IdentityOperator(grid2d), Q, th, phi,
                           WarpConfig(quad_points=80, epsilon_schedule=deep6,
                                      extrapolation_order=3,
                                      estimate_quadrature_error=False))
    assert (res.state - phi).norm() < 1e-6


def test_oscillatory_matches_spectral(grid2d):
    phi = G.domain_vector(grid2d, 2, 2)
    Q = G.q_generator(grid2d, 1.0)
    th = G.SkewMatrix.from_block(0.1)
    A = G.h0_operator(grid2d)
    res = warp_oscillatory(A, Q, th, phi,
                           WarpConfig(estimate_quadrature_error=False))
    ref = warp_spectral(A, Q, th, phi)
    assert (res.state - ref).norm() / ref.norm() < 1e-3


def test_oscillatory_domain_stability(grid2d):
    # the deformed image keeps its mass away from the box edge: no new
    # spread develops under the deformation
    phi = G.domain_vector(grid2d, 2, 2)
    Q = G.q_generator(grid2d, 1.0)
    th = G.SkewMatrix.from_block(0.1)
    A = G.h0_operator(grid2d)
    res = warp_oscillatory(A, Q, th, phi,
                           WarpConfig(estimate_quadrature_error=False))
    undeformed_tail = 1.0 - A.apply(phi).interior_mass(0.9)
    warped_tail = 1.0 - res.state.interior_mass(0.9)
    assert warped_tail < undeformed_tail + 1e-6
    assert res.state.interior_mass(0.5) >= phi.interior_mass(0.5) - 1e-5


def test_oscillatory_nonconvergent_raises(grid2d):
    phi = G.domain_vector(grid2d, 2, 2)
    Q = G.q_generator(grid2d, 1.0)
    th = G.SkewMatrix.from_block(0.1)
    with pytest.raises(ExtrapolationError) as err:
        warp_oscillatory(G.h0_operator(grid2d), Q, th, phi,
                         WarpConfig(quad_points=6,
                                    estimate_quadrature_error=False))
    assert len(err.value.per_epsilon_norms) == 5
    assert err.value.residual > 0.1


def test_oscillatory_range_too_small_raises(grid2d):
    phi = G.domain_vector(grid2d, 2, 2)
    Q = G.q_generator(grid2d, 1.0)
    th = G.SkewMatrix.from_block(0.1)
    with pytest.raises(QuadratureRangeError) as err:
        warp_oscillatory(G.h0_operator(grid2d), Q, th, phi,
                         WarpConfig(quad_half_width=2.0,
                                    estimate_quadrature_error=False))
    assert err.value.boundary_ratio > 1e-3


def test_cutoff_independence(grid2d):
    phi = G.domain_vector(grid2d, 2, 2)
    Q = G.q_generator(grid2d, 1.0)
    th = G.SkewMatrix.from_block(0.1)
    A = G.momentum_operator(grid2d, 0)
    res_g = warp_oscillatory(A, Q, th, phi,
                             WarpConfig(estimate_quadrature_error=False))
    res_b = warp_oscillatory(A, Q, th, phi,
                             WarpConfig(cutoff="bump",
                                        estimate_quadrature_error=False))
    assert (res_g.state - res_b.state).norm() / res_g.state.norm() < 1e-3


def _spectral_product(A, B_op, Q, theta, phi):
    composed = G.CallableOperator(
        phi.space,
        lambda amps: warp_spectral(
            A, Q, theta,
            warp_spectral(B_op, Q, theta,
                          G.GridState(phi.space, amps))).amplitudes)
    return warp_spectral(composed, Q, G.SkewMatrix(-theta.entries), phi,
                         method="group")


def test_deformation_composition_is_exact(grid2d):
    # deforming by theta then -theta returns the operator: the product
    # reference construction relies on this being a grid-exact identity
    phi = G.domain_vector(grid2d, 2, 2)
    Q = G.q_generator(grid2d, 1.0)
    th = G.SkewMatrix.from_block(0.1)
    A = G.h0_operator(grid2d)
    forward = G.CallableOperator(
        grid2d, lambda amps: warp_spectral(
            A, Q, th, G.GridState(grid2d, amps)).amplitudes)
    back = warp_spectral(forward, Q, G.SkewMatrix(-th.entries), phi,
                         method="group")
    assert (back - A.apply(phi)).norm() / phi.norm() < 1e-12


def test_rieffel_product_consistency(grid2d):
    phi = G.domain_vector(grid2d, 2, 2)
    Q = G.q_generator(grid2d, 1.0)
    th = G.SkewMatrix.from_block(0.1)
    H0 = G.h0_operator(grid2d)
    P = G.momentum_operator(grid2d, 0)
    quad = rieffel_product(H0, P, th, phi, Q=Q)
    ref = _spectral_product(H0, P, Q, th, phi)
    assert (quad.state - ref).norm() / ref.norm() < 1e-3
    assert len(quad.per_epsilon_states) == len(
        RIEFFEL_DEFAULT.epsilon_schedule)


def test_rieffel_zero_skew(grid2d):
    phi = G.domain_vector(grid2d, 2, 2)
    Q = G.q_generator(grid2d, 1.0)
    H0 = G.h0_operator(grid2d)
    P = G.momentum_operator(grid2d, 0)
    res = rieffel_product(H0, P, G.SkewMatrix.zero(2), phi, Q=Q)
    plain = H0.apply(P.apply(phi))
    assert (res.state - plain).norm() / plain.norm() < 1e-3
