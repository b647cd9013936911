import numpy as np
import pytest

from warpconv import grid as G
from warpconv import qm, verify
from warpconv.errors import InfeasibleBoundError


def test_phase_check_passes():
    pc = verify.phase_check(dims=3, n_samples=10_000, seed=1)
    assert pc.passed
    assert pc.homogeneity_residual < 1e-12
    assert pc.imaginary_part_min == 0.0
    assert pc.differential_min > 0.0
    assert pc.n_samples == 10_000


def test_symbol_fit_exact_power_law():
    radii = verify.default_radii()
    series = {(0, 0): [(r, 3.0 * (1.0 + r) ** 2) for r in radii]}
    fit = verify.fit_symbol_order(series)
    assert abs(fit.m - 2.0) < 1e-8
    assert abs(fit.constants[(0, 0)] - 3.0) < 1e-8
    assert fit.residual < 1e-10
    assert fit.monotone


def test_symbol_fit_rho_from_decrement():
    radii = verify.default_radii()
    series = {(0, 0): [(r, (1.0 + r) ** 2) for r in radii],
              (1, 0): [(r, (1.0 + r) ** 1.5) for r in radii]}
    fit = verify.fit_symbol_order(series)
    assert abs(fit.rho - 0.5) < 1e-8
    assert fit.classify(2) == "distributional"
    flat = {(0, 0): [(r, (1.0 + r) ** -3.5) for r in radii]}
    assert verify.fit_symbol_order(flat).classify(2) == "convergent"


def test_symbol_fit_requires_enough_radii():
    with pytest.raises(ValueError):
        verify.fit_symbol_order({(0,): [(1.0, 1.0)] * 4})


def test_symbol_fit_bound_covers_samples():
    rng = np.random.default_rng(7)
    radii = verify.default_radii()
    noisy = [(r, (1.0 + r) ** 1.2 * np.exp(0.02 * rng.standard_normal()))
             for r in radii]
    fit = verify.fit_symbol_order({(0, 0): noisy})
    assert all(v <= 1.05 * fit.bound((0, 0), r) for r, v in noisy)


def test_sample_decay_identity_constant():
    sp = G.make_grid(2, 12, 5.0)
    phi = G.domain_vector(sp, 1, 1)
    Q = G.q_generator(sp, 1.0)
    th = G.SkewMatrix.from_block(0.1)
    rows = verify.sample_decay(G.IdentityOperator(sp), Q, th, phi, (0, 0),
                               verify.default_radii())
    vals = [v for _, v in rows]
    assert max(vals) - min(vals) < 1e-12
    # position-diagonal operators commute with the conjugation as well
    A = G.PositionMultiplier(sp, np.cos(sp.radii()))
    rows2 = verify.sample_decay(A, Q, th, phi, (0, 0), verify.default_radii())
    vals2 = [v for _, v in rows2]
    assert max(vals2) - min(vals2) < 1e-12


def test_sample_decay_derivative_orders():
    sp = G.make_grid(2, 12, 5.0)
    phi = G.domain_vector(sp, 1, 1)
    Q = G.q_generator(sp, 1.0)
    th = G.SkewMatrix.from_block(0.1)
    A = G.h0_operator(sp)
    for gamma in [(1, 0), (0, 2), (1, 1)]:
        rows = verify.sample_decay(A, Q, th, phi, gamma, np.geomspace(1, 20, 8))
        assert len(rows) == 8
        assert all(np.isfinite(v) for _, v in rows)
    with pytest.raises(ValueError):
        verify.sample_decay(A, Q, th, phi, (2, 1), [1.0, 2.0])
    with pytest.raises(ValueError):
        verify.sample_decay(A, Q, th, phi, (1,), [1.0, 2.0])


def test_hermiticity_residual_detects_defect():
    sp = G.make_grid(2, 16, 6.0)
    rng = np.random.default_rng(3)
    states = []
    for _ in range(6):
        amps = (rng.standard_normal(sp.size) + 1j * rng.standard_normal(sp.size))
        states.append(G.GridState(sp, amps * G.domain_vector(sp, 0, 0).amplitudes).normalized())
    pairs = list(zip(states[:3], states[3:]))
    X = G.position_operator(sp, 0)
    assert verify.hermiticity_residual(X, pairs) < 1e-14
    # X1 P1 is off-Hermitian by the canonical commutator; overlapping pairs
    # see the full defect
    XP = X @ G.momentum_operator(sp, 0)
    assert verify.hermiticity_residual(XP, pairs) > 1e-2


def test_restricted_eigenvalues_hermitian():
    sp = G.make_grid(2, 12, 5.0)
    states = [G.domain_vector(sp, a, b) for a in range(3) for b in range(3)]
    H0 = G.h0_operator(sp)
    eigs = verify.restricted_eigenvalues(H0, states)
    assert float(np.max(np.abs(eigs.imag))) < 1e-12
    assert np.all(eigs.real > 0.0)


def test_wust_inequality_cases():
    sp = G.make_grid(3, 16, 6.0)
    B = G.SkewMatrix.from_axial((0.0, 0.0, 0.1))
    H0 = G.h0_operator(sp)
    HB = qm.deformed_hamiltonian(sp, B, 1.0)
    samples = qm.sample_states(sp, count=12, seed=5)
    # zero deformation: b = 0
    fit0 = verify.wust_inequality_check(H0.apply, H0.apply, samples, b_cap=10.0)
    assert fit0.a == 1.0 and fit0.b == 0.0
    fit = verify.wust_inequality_check(H0.apply, HB.apply, samples, b_cap=1e3)
    assert fit.feasible and fit.b <= 1e3
    # infeasible cap carries the violating sample index
    big = G.CallableOperator(sp, lambda amps: 100.0 * amps)
    with pytest.raises(InfeasibleBoundError) as err:
        verify.wust_inequality_check(
            lambda s: G.GridState(sp, 0.0 * s.amplitudes),
            big.apply, samples, b_cap=1.0)
    assert err.value.required_b > 1.0
    assert 0 <= err.value.sample_index < len(samples)


def test_dossier_bundle():
    sp = G.make_grid(3, 16, 6.0)
    B = G.SkewMatrix.from_axial((0.0, 0.0, 0.1))
    V = qm.potential_V(sp, B, 1.0)
    fit = qm.fit_relative_bound(V, G.h0_operator(sp),
                                qm.sample_states(sp, count=10, seed=2),
                                b_cap=1e3)
    doc = verify.dossier("test-op", 1e-9, 1e-10, fit, None,
                         extras={"note": "x"})
    assert doc["operator"] == "test-op"
    assert doc["bound_fit"]["a"] == fit.a
    assert doc["note"] == "x"
