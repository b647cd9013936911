import math

import numpy as np
import pytest

from warpconv import grid as G
from warpconv.errors import GridDomainError, SpaceMismatchError


def test_make_grid_1d_nodes():
    sp = G.make_grid(1, 8, 4.0)
    assert sp.spacing == 1.0
    assert np.allclose(sp.axis_nodes(), np.arange(-3.5, 4.0, 1.0))


def test_make_grid_default_offset_avoids_origin():
    sp = G.make_grid(3, 32, 8.0)
    assert sp.spacing == 0.5
    assert float(np.min(sp.radii())) > 0.0


@pytest.mark.parametrize("dims,M,L", [(3, 3, 1.0), (3, 5, 1.0), (2, 2, 1.0),
                                      (1, 8, -1.0), (1, 8, 0.0)])
def test_make_grid_rejections(dims, M, L):
    with pytest.raises(GridDomainError):
        G.make_grid(dims, M, L)


def test_domain_vector_norm_oracle():
    # closed-form Gaussian moments: ||x1^2 x2 exp(-|x|^2/2)||^2
    # = Gamma(2.5) Gamma(1.5) Gamma(0.5)
    sp = G.make_grid(3, 64, 10.0)
    raw = G.domain_vector(sp, 2, 1, 0, normalize=False)
    oracle = G.gaussian_moment_norm((2, 1, 0))
    assert oracle == pytest.approx(
        math.sqrt(math.gamma(2.5) * math.gamma(1.5) * math.gamma(0.5)))
    assert abs(raw.norm() - oracle) / oracle < 1e-8


def test_domain_vector_normalized_gaussian():
    sp = G.make_grid(3, 48, 8.0)
    phi = G.domain_vector(sp, 0, 0, 0)
    assert phi.norm() == pytest.approx(1.0, abs=1e-12)
    # pointwise match with exp(-|x|^2/2)/pi^(3/4)
    ref = np.exp(-0.5 * np.sum(sp.coords() ** 2, axis=0)) / math.pi ** 0.75
    assert np.max(np.abs(phi.amplitudes - ref)) < 1e-10


def test_domain_vector_parity():
    sp = G.make_grid(3, 32, 7.0)
    phi = G.domain_vector(sp, 1, 0, 0)
    x1 = G.position_operator(sp, 0)
    assert abs(phi.inner(x1.apply(phi))) < 1e-10


def test_domain_vector_rejects_negative():
    sp = G.make_grid(2, 8, 4.0)
    with pytest.raises(ValueError):
        G.domain_vector(sp, -1, 0)
    with pytest.raises(ValueError):
        G.domain_vector(sp, 1)


def test_momentum_of_gaussian_matches_analytic_derivative():
    sp = G.make_grid(3, 48, 8.0)
    phi = G.domain_vector(sp, 0, 0, 0)
    out = G.apply_momentum(sp, 1, phi)
    target = G.GridState(sp, -1j * sp.coords()[1] * phi.amplitudes)
    assert (out - target).norm() / phi.norm() < 1e-8


def test_h0_expectation_nonnegative():
    sp = G.make_grid(3, 32, 8.0)
    plane = G.GridState(sp, np.exp(1j * 1.5 * sp.coords()[0])
                        * G.domain_vector(sp, 0, 0, 0).amplitudes)
    val = plane.inner(G.apply_h0(sp, 0.5, plane))
    assert val.real >= 0.0
    assert abs(val.imag) < 1e-10


def test_ccr_all_components():
    # the box is wide enough that even the half-box holds essentially all
    # of the state's mass, so wraparound cannot touch the measurement
    sp = G.make_grid(3, 64, 10.0)
    for ks in [(0, 0, 0), (2, 1, 0)]:
        phi = G.domain_vector(sp, *ks)
        assert phi.interior_mass(0.5) > 1.0 - 1e-8
        for j in range(3):
            for k in range(3):
                X = G.position_operator(sp, j)
                P = G.momentum_operator(sp, k)
                resid = G.commutator(X, P).apply(phi)
                if j == k:
                    resid = resid + 1j * phi
                assert resid.norm() / phi.norm() < 1e-5, (j, k, ks)


@pytest.mark.parametrize("n", [-1.0, 0.5, 1.0, 2.0])
def test_radial_power_commutator(n):
    # [P_j, |X|^-n] = -i n X_j |X|^-(n+2) in this sign convention
    sp = G.make_grid(3, 64, 7.5)
    r = sp.radii()
    phi = G.domain_vector(sp, 3, 3, 3)
    P = G.momentum_operator(sp, 0)
    Mn = G.PositionMultiplier(sp, r ** (-n))
    rhs = G.PositionMultiplier(sp, -1j * n * sp.coords()[0] * r ** (-(n + 2)))
    resid = (G.commutator(P, Mn).apply(phi) - rhs.apply(phi)).norm() / phi.norm()
    assert resid < 1e-4


def test_q_generator_limits():
    sp = G.make_grid(3, 16, 6.0)
    q0 = G.q_generator(sp, 0.0)
    assert np.array_equal(q0.values, sp.coords())
    q1 = G.q_generator(sp, 1.0)
    lengths = np.sqrt(np.sum(q1.values ** 2, axis=0))
    assert np.allclose(lengths, 1.0)
    q2 = G.q_generator(sp, 2.0)
    node = np.argmin(np.sum((sp.coords().T - np.array([1.0, 0., 0.])) ** 2,
                            axis=1))
    x = sp.coords()[:, node]
    assert np.allclose(q2.values[:, node], x / np.sum(x ** 2))


def test_q_generator_rejects_origin_node():
    sp = G.make_grid(2, 8, 4.0, offset=0.0)
    assert float(np.min(sp.radii())) == 0.0
    with pytest.raises(GridDomainError):
        G.q_generator(sp, 1.0)
    G.q_generator(sp, 0.0)  # polynomial case is fine


def test_unitary_v_properties():
    sp = G.make_grid(2, 16, 5.0)
    phi = G.domain_vector(sp, 1, 2)
    rng = np.random.default_rng(11)
    for _ in range(5):
        y = rng.standard_normal(2)
        vphi = G.unitary_V(sp, y, 1.0, phi)
        assert abs(vphi.norm() - phi.norm()) < 1e-12
        back = G.unitary_V(sp, -y, 1.0, vphi)
        assert (back - phi).norm() < 1e-12
    assert (G.unitary_V(sp, np.zeros(2), 1.0, phi) - phi).norm() == 0.0
    with pytest.raises(SpaceMismatchError):
        G.unitary_V(sp, np.zeros(3), 1.0, phi)


def test_skew_matrix_validation_and_axial():
    with pytest.raises(ValueError):
        G.SkewMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
    B = G.SkewMatrix.from_axial((0.0, 0.0, 0.5))
    assert B.entries[0, 1] == 0.5 and B.entries[1, 0] == -0.5
    y = np.array([1.0, 2.0, 3.0])
    by = B.entries @ y
    assert np.allclose(by, [0.5 * 2.0, -0.5 * 1.0, 0.0])
    assert G.SkewMatrix.random(4, 0.1, 3).two_norm == pytest.approx(0.1)


def test_axial_inequality_exact():
    # |B y| <= sqrt(2) |B_axial| |y| on 10^4 seeded samples
    rng = np.random.default_rng(20260808)
    for _ in range(100):
        bvec = rng.standard_normal(3)
        B = G.SkewMatrix.from_axial(bvec)
        ys = rng.standard_normal((100, 3))
        lhs = np.linalg.norm(ys @ B.entries.T, axis=1)
        rhs = math.sqrt(2.0) * np.linalg.norm(bvec) * np.linalg.norm(ys, axis=1)
        assert np.all(lhs <= rhs)


def test_operator_linearity_and_adjoints():
    sp = G.make_grid(2, 12, 5.0)
    a = G.domain_vector(sp, 1, 0)
    b = G.domain_vector(sp, 0, 2)
    op = G.h0_operator(sp) + 2.0 * G.position_operator(sp, 0) @ \
        G.momentum_operator(sp, 1)
    lin = op.apply(0.3 * a + (0.1 + 2j) * b)
    ref = 0.3 * op.apply(a) + (0.1 + 2j) * op.apply(b)
    assert (lin - ref).norm() < 1e-12
    lhs = b.inner(op.apply(a))
    rhs = op.adjoint().apply(b).inner(a)
    assert abs(lhs - rhs) < 1e-12


def test_state_immutability_and_mismatch():
    sp = G.make_grid(1, 8, 4.0)
    phi = G.domain_vector(sp, 0)
    with pytest.raises(ValueError):
        phi.amplitudes[0] = 1.0
    other = G.make_grid(1, 8, 5.0)
    with pytest.raises(SpaceMismatchError):
        phi.inner(G.domain_vector(other, 0))
