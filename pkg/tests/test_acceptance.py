"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Every tolerance here is pinned; grid sizes and probe states are the
calibrated desk-scale choices recorded in the study defaults.  Run with
``pytest -s tests/test_acceptance.py`` to see the per-criterion lines.
"""

import time

import numpy as np
import pytest

from warpconv import fock as fk
from warpconv import grid as G
from warpconv import qm, verify
from warpconv.warp import (RIEFFEL_DEFAULT, WarpConfig, rieffel_product,
                           warp_oscillatory, warp_spectral)

SQ2 = 0.7071067811865476
SEED = 20260808


def _report(num, name, rows, t0):
    ok = all(passed for _, _, _, passed in rows)
    mark = "PASS" if ok else "FAIL"
    print(f"\n[{mark}] acceptance {num}: {name} "
          f"({len(rows)} checks, {time.perf_counter() - t0:.1f}s)")
    for label, value, tol, passed in rows:
        if not passed:
            print(f"    FAILED {label}: {value:.3e} (tolerance {tol:.1e})")
    assert ok, [label for label, _, _, passed in rows if not passed]


def _row(label, value, tol):
    return (label, float(value), float(tol), bool(value < tol))


def _edge_guard(state, tol=1e-10):
    # direct wraparound control: essentially no mass near the box edge
    return _row("edge-mass guard", 1.0 - state.interior_mass(0.9), tol)


# ---------------------------------------------------------------------------

def test_criterion_01_oracle_equivalence():
    """Quadrature matches the exact evaluator and improves under refinement."""
    t0 = time.perf_counter()
    rows = []

    def case(space, A, Q, skew, phi, ladder, cfg_kwargs, label, tol):
        ref = warp_spectral(A, Q, skew, phi)
        errs = []
        for K in ladder:
            cfg = WarpConfig(quad_points=K, estimate_quadrature_error=False,
                             convergence_tolerance=10.0, **cfg_kwargs)
            osc = warp_oscillatory(A, Q, skew, phi, cfg)
            errs.append((osc.state - ref).norm() / ref.norm())
        rows.append(_row(f"{label} final", errs[-1], tol))
        decreasing = all(b < a for a, b in zip(errs, errs[1:]))
        rows.append((f"{label} refinement", 0.0 if decreasing else 1.0, 1.0,
                     decreasing))

    deep7 = (0.5, SQ2 * 0.5, 0.25, SQ2 * 0.25, 0.125, SQ2 * 0.125, 0.0625)
    sp1 = G.make_grid(1, 32, 6.0)
    phi1 = G.domain_vector(sp1, 2)
    for name, A in (("P1", G.momentum_operator(sp1, 0)),
                    ("H0", G.h0_operator(sp1))):
        for n in (0.0, 1.0):
            case(sp1, A, G.q_generator(sp1, n), G.SkewMatrix.zero(1), phi1,
                 (32, 48, 64),
                 {"epsilon_schedule": deep7, "extrapolation_order": 4},
                 f"1d {name} n={n}", 1e-3)

    sp2 = G.make_grid(2, 12, 5.0)
    phi2 = G.domain_vector(sp2, 2, 2)
    th = G.SkewMatrix.from_block(0.1)
    for name, A in (("P1", G.momentum_operator(sp2, 0)),
                    ("H0", G.h0_operator(sp2))):
        case(sp2, A, G.q_generator(sp2, 1.0), th, phi2, (40, 48, 64), {},
             f"2d {name} n=1", 1e-3)

    sp0 = G.make_grid(2, 24, 5.0)
    phi0 = G.domain_vector(sp0, 2, 2)
    th0 = G.SkewMatrix.from_block(0.04)
    sched0 = (0.5, SQ2 * 0.5, 0.25, SQ2 * 0.25)
    for name, A in (("P1", G.momentum_operator(sp0, 0)),
                    ("H0", G.h0_operator(sp0))):
        case(sp0, A, G.q_generator(sp0, 0.0), th0, phi0, (48, 56, 64),
             {"epsilon_schedule": sched0, "extrapolation_order": 3},
             f"2d {name} n=0", 1e-3)
    _report(1, "oscillatory vs spectral oracle equivalence", rows, t0)


def test_criterion_02_closed_form_hamiltonian():
    """Exact evaluator vs the closed-form deformed Hamiltonian at 32^3."""
    t0 = time.perf_counter()
    rows = []
    sp = G.make_grid(3, 32, 7.0)
    H0 = G.h0_operator(sp)
    matrix = [(0.0, (0, 0, 0.1)), (0.5, (0, 0, 0.1)), (1.0, (0, 0, 0.1)),
              (2.0, (0.05, 0.05, 0.0))]
    for ks in ((3, 3, 3), (4, 4, 4)):
        phi = G.domain_vector(sp, *ks)
        rows.append(_edge_guard(phi))
        for n, bvec in matrix:
            B = G.SkewMatrix.from_axial(bvec)
            HB = qm.deformed_hamiltonian(sp, B, n)
            ws = warp_spectral(H0, G.q_generator(sp, n), B, phi)
            closed = HB.apply(phi)
            rel = (ws - closed).norm() / closed.norm()
            rows.append(_row(f"n={n} state={ks}", rel, 1e-5))
    _report(2, "closed-form deformed Hamiltonian identity", rows, t0)


def test_criterion_03_momentum_square_identity():
    """Deformed Hamiltonian equals the squared deformed momenta."""
    t0 = time.perf_counter()
    rows = []
    sp = G.make_grid(3, 64, 7.0)
    table = [(0.0, (0, 0, 0.1), (1, 0, 0)),
             (0.5, (0, 0, 0.1), (3, 3, 3)),
             (1.0, (0, 0, 0.1), (3, 3, 3)),
             (2.0, (0.05, 0.05, 0.0), (4, 4, 4))]
    for n, bvec, ks in table:
        B = G.SkewMatrix.from_axial(bvec)
        phi = G.domain_vector(sp, *ks)
        rows.append(_row(f"n={n} state={ks}",
                         qm.theorem_d1_check(sp, B, n, phi), 1e-6))
    _report(3, "momentum-square identity", rows, t0)


def test_criterion_04_kato_rellich_program():
    """Relative bound below one, symmetric potential, real spectrum."""
    t0 = time.perf_counter()
    rows = []
    sp = G.make_grid(3, 32, 7.0)
    B = G.SkewMatrix.from_axial((0.0, 0.0, 0.1))
    H0 = G.h0_operator(sp)
    samples = qm.sample_states(sp, count=50, seed=SEED)
    flats = qm.flat_sample_states(sp, count=40, seed=SEED + 2)
    pairs = list(zip(flats[:20], flats[20:40]))
    for n in (0.5, 1.0, 2.0):
        V = qm.potential_V(sp, B, n)
        fit = qm.fit_relative_bound(V, H0, samples, b_cap=1e3)
        rows.append(_row(f"relative bound a (n={n})", fit.a, 1.0))
        rows.append(("bound cap", fit.b, 1e3, fit.b <= 1e3))
        rows.append(_row(f"potential symmetry (n={n})",
                         verify.hermiticity_residual(V, pairs), 1e-6))
    eig_states = qm.sample_states(sp, count=60, seed=SEED + 1)
    HB = qm.deformed_hamiltonian(sp, B, 1.0)
    rows.append(_row("restricted spectrum imaginary part",
                     verify.eigenvalue_reality(HB, eig_states), 1e-8))
    _report(4, "relative-bound program", rows, t0)


def test_criterion_05_commutator_identities():
    """Radial-power and component commutators plus the anticommutator."""
    t0 = time.perf_counter()
    rows = []
    sp = G.make_grid(3, 64, 7.5)
    r = sp.radii()
    co = sp.coords()
    states = [G.domain_vector(sp, 3, 3, 3), G.domain_vector(sp, 4, 3, 3)]
    for phi in states:
        rows.append(_edge_guard(phi))
    for n in (-1.0, 0.5, 1.0, 2.0):
        Mn = G.PositionMultiplier(sp, r ** (-n))
        P = G.momentum_operator(sp, 0)
        rhs = G.PositionMultiplier(sp, -1j * n * co[0] * r ** (-(n + 2.0)))
        worst = max((G.commutator(P, Mn).apply(phi) - rhs.apply(phi)).norm()
                    / phi.norm() for phi in states)
        rows.append(_row(f"radial power n={n}", worst, 1e-4))
        for (j, k) in ((0, 0), (0, 1)):
            Pj = G.momentum_operator(sp, j)
            Mk = G.PositionMultiplier(sp, co[k] * r ** (-n))
            delta = 1.0 if j == k else 0.0
            rhs2 = G.PositionMultiplier(
                sp, 1j * (delta - n * co[k] * co[j] / r ** 2) * r ** (-n))
            worst = max((G.commutator(Pj, Mk).apply(phi)
                         - rhs2.apply(phi)).norm() / phi.norm()
                        for phi in states)
            rows.append(_row(f"component n={n} (j,k)=({j},{k})", worst, 1e-4))
    B = G.SkewMatrix.from_axial((0.0, 0.0, 0.1))
    bx = B.apply(co)
    for n in (0.5, 1.0, 2.0):
        Q = G.q_generator(sp, n)
        bq = B.apply(Q.values)
        terms = []
        for j in range(3):
            Cj = None
            for k in range(3):
                inner = G.commutator(Q.component(k),
                                     G.momentum_operator(sp, j))
                term = G.ProductOperator(
                    sp, [G.PositionMultiplier(sp, bq[k]), inner])
                Cj = term if Cj is None else G.SumOperator(sp, [Cj, term])
            terms.append(G.anticommutator(Cj, G.momentum_operator(sp, j)))
        lhs = G.SumOperator(sp, terms)
        corr = [G.ProductOperator(
            sp, [G.PositionMultiplier(sp, 2j * bx[j] * r ** (-2.0 * n)),
                 G.momentum_operator(sp, j)]) for j in range(3)]
        rhs = G.SumOperator(sp, corr)
        worst = max((lhs.apply(phi) + rhs.apply(phi)).norm() / phi.norm()
                    for phi in states)
        rows.append(_row(f"anticommutator n={n}", worst, 1e-4))
    _report(5, "commutator identities", rows, t0)


def test_criterion_06_deformed_coordinate_commutator():
    """Closed-form deformed-coordinate commutator and the dense oracle."""
    t0 = time.perf_counter()
    rows = []
    dp = 0.5
    F = fk.make_fock(2, 40, dp, 2, derivative="sinc")
    R = (40 / 2 - 0.5) * dp
    c = 0.42 * R
    psi1 = fk.gaussian_packet(F, (c, c), 1.6 * dp)
    psi2 = fk.two_particle_packet(F, (c, c), 1.5 * dp, (c, c), 1.9 * dp)
    for tag, psi in (("one-particle", psi1), ("two-particle", psi2)):
        bm = F.boundary_mass(psi)
        rows.append((f"interior support {tag}", bm, 1e-6, bm < 1e-6))
    for k in range(5):
        th = G.SkewMatrix.random(3, 0.1, SEED + k)
        for tag, psi in (("1p", psi1), ("2p", psi2)):
            resid = fk.moyal_weyl_commutator_check(F, th, 0, 1, psi,
                                                   boundary_tol=1e-6)
            rows.append(_row(f"theta#{k} {tag}", resid, 1e-4))

    # dense brute-force commutator vs the lazy path on the 8x8, K = 2 space
    F8 = fk.make_fock(2, 8, dp, 2, derivative="central")
    th8 = G.SkewMatrix.random(3, 0.1, SEED)
    psi8 = fk.gaussian_packet(F8, (0.8, 0.8), 0.5)
    Xi = fk.deformed_coordinate(F8, th8, 0).to_dense()
    Xj = fk.deformed_coordinate(F8, th8, 1).to_dense()
    dense = Xi @ (Xj @ psi8.amplitudes) - Xj @ (Xi @ psi8.amplitudes)
    Li = fk.deformed_coordinate(F8, th8, 0, lazy=True)
    Lj = fk.deformed_coordinate(F8, th8, 1, lazy=True)
    lazy = (Li.apply(Lj.apply(psi8)) - Lj.apply(Li.apply(psi8))).amplitudes
    agr = np.linalg.norm(dense - lazy) / max(np.linalg.norm(dense), 1e-300)
    rows.append(_row("dense oracle vs lazy path (8x8, K=2)", agr, 1e-10))
    # the 8x8 lattice cannot host interior-supported packets; its residual
    # is informational only
    r8 = fk.moyal_weyl_commutator_check(F8, th8, 0, 1, psi8, boundary_tol=1.0)
    print(f"    informational 8x8 residual: {r8:.2e} "
          f"(boundary mass {F8.boundary_mass(psi8):.2e})")
    _report(6, "deformed-coordinate commutator", rows, t0)


def test_criterion_07_coordinate_bound():
    """Fitted coordinate bound below one; real deformed-coordinate spectrum."""
    t0 = time.perf_counter()
    rows = []
    dp = 0.5
    F = fk.make_fock(2, 10, dp, 2, derivative="central")
    R = (10 / 2 - 0.5) * dp
    th = G.SkewMatrix.random(3, 0.01, SEED + 7)
    packs = [fk.gaussian_packet(F, (0.4 * R, 0.4 * R), 1.2 * dp),
             fk.gaussian_packet(F, (-0.5 * R, 0.3 * R), 1.0 * dp),
             fk.two_particle_packet(F, (0.4 * R, 0.4 * R), 1.2 * dp,
                                    (0.4 * R, 0.4 * R), 1.5 * dp)]
    rng = np.random.default_rng(SEED)
    for _ in range(9):
        amps = rng.standard_normal(F.dimension) \
            + 1j * rng.standard_normal(F.dimension)
        packs.append(fk.FockState(F, amps).normalized())
    fit = fk.fock_x_bound_fit(F, th, packs, b_cap=1e3)
    rows.append(_row("coordinate bound a", fit.a, 1.0))
    rows.append(("feasible", 0.0, 1.0, fit.feasible))
    F8 = fk.make_fock(2, 8, dp, 2, derivative="central")
    Xt = fk.deformed_coordinate(F8, G.SkewMatrix.random(3, 0.01, SEED + 8), 0)
    eigs = np.linalg.eigvals(Xt.to_dense())
    rows.append(_row("spectrum imaginary part (K<=2)",
                     float(np.max(np.abs(eigs.imag))), 1e-8))
    _report(7, "coordinate relative bound", rows, t0)


def test_criterion_08_symbol_machinery():
    """Phase-function conditions, synthetic recovery, slope-one bounds."""
    t0 = time.perf_counter()
    rows = []
    pc = verify.phase_check(dims=2, n_samples=10_000, seed=SEED)
    rows.append(_row("phase homogeneity", pc.homogeneity_residual, 1e-12))
    rows.append(("phase imaginary part", pc.imaginary_part_min, 0.0,
                 pc.imaginary_part_min >= 0.0))
    rows.append(("phase differential", pc.differential_min, 0.0,
                 pc.differential_min > 0.0))
    radii = verify.default_radii()
    synth = {(0, 0): [(r, 3.0 * (1 + r) ** 2) for r in radii],
             (1, 0): [(r, 2.0 * (1 + r) ** 1.5) for r in radii]}
    fit = verify.fit_symbol_order(synth)
    rows.append(_row("synthetic order", abs(fit.m - 2.0), 1e-8))
    rows.append(_row("synthetic type", abs(fit.rho - 0.5), 1e-8))
    rows.append(_row("synthetic constant", abs(fit.constants[(0, 0)] - 3.0),
                     1e-8))
    sp = G.make_grid(3, 16, 6.0)
    B = G.SkewMatrix.from_axial((0.0, 0.0, 0.1))
    H0 = G.h0_operator(sp)
    HB = qm.deformed_hamiltonian(sp, B, 1.0)
    wfit = verify.wust_inequality_check(
        H0.apply, HB.apply, qm.sample_states(sp, count=30, seed=SEED),
        b_cap=1e3)
    rows.append(("slope-one bound H0 deformation", wfit.b, 1e3,
                 wfit.feasible))
    Ff = fk.make_fock(2, 8, 0.5, 2, derivative="central")
    thf = G.SkewMatrix.random(3, 0.01, SEED + 3)
    X0 = fk.coordinate_operator(Ff, 0)
    X0t = fk.deformed_coordinate(Ff, thf, 0)
    fsamples = [fk.gaussian_packet(Ff, (0.7, 0.7), 0.6),
                fk.two_particle_packet(Ff, (0.7, 0.7), 0.6, (0.7, 0.7), 0.75),
                Ff.vacuum()]
    ffit = verify.wust_inequality_check(X0.apply, X0t.apply, fsamples,
                                        b_cap=1e3)
    rows.append(("slope-one bound coordinate", ffit.b, 1e3, ffit.feasible))
    _report(8, "symbol machinery", rows, t0)


def test_criterion_09_deformed_product():
    """Quadrature product matches composing the deformed factors."""
    t0 = time.perf_counter()
    rows = []
    sp = G.make_grid(2, 12, 5.0)
    phi = G.domain_vector(sp, 2, 2)
    th = G.SkewMatrix.from_block(0.1)
    H0 = G.h0_operator(sp)
    P = G.momentum_operator(sp, 0)

    def spectral_product(A, B_op, Q):
        composed = G.CallableOperator(
            sp, lambda amps: warp_spectral(
                A, Q, th, warp_spectral(
                    B_op, Q, th, G.GridState(sp, amps))).amplitudes)
        return warp_spectral(composed, Q, G.SkewMatrix(-th.entries), phi,
                             method="group")

    Q1 = G.q_generator(sp, 1.0)
    quad = rieffel_product(H0, P, th, phi, Q=Q1)
    ref = spectral_product(H0, P, Q1)
    rows.append(_row("H0 x P1 (n=1)",
                     (quad.state - ref).norm() / ref.norm(), 1e-3))

    Q2 = G.q_generator(sp, 2.0)
    cfg_n2 = WarpConfig(quad_points=176,
                        epsilon_schedule=RIEFFEL_DEFAULT.epsilon_schedule,
                        extrapolation_order=2,
                        estimate_quadrature_error=False)
    quad2 = rieffel_product(P, P, th, phi, cfg_n2, Q=Q2)
    ref2 = spectral_product(P, P, Q2)
    rows.append(_row("P1 x P1 (n=2)",
                     (quad2.state - ref2).norm() / ref2.norm(), 1e-3))

    quad1 = rieffel_product(G.IdentityOperator(sp), P, th, phi, Q=Q1)
    ref1 = P.apply(phi)
    rows.append(_row("identity is the unit",
                     (quad1.state - ref1).norm() / ref1.norm(), 1e-3))
    _report(9, "deformed product consistency", rows, t0)


def test_criterion_10_trivial_limit_suite():
    """Zero skew matrix reproduces every undeformed object."""
    t0 = time.perf_counter()
    rows = []

    # exact spectral paths
    sp = G.make_grid(3, 24, 6.5)
    phi = G.domain_vector(sp, 2, 1, 1)
    z3 = G.SkewMatrix.zero(3)
    H0 = G.h0_operator(sp)
    ws = warp_spectral(H0, G.q_generator(sp, 1.0), z3, phi)
    rows.append(("spectral B=0", (ws - H0.apply(phi)).norm(), 0.0,
                 (ws - H0.apply(phi)).norm() == 0.0))
    hb = qm.deformed_hamiltonian(sp, z3, 1.0).apply(phi)
    rows.append(("closed-form B=0 Hamiltonian",
                 (hb - H0.apply(phi)).norm(), 0.0,
                 (hb - H0.apply(phi)).norm() == 0.0))
    pb = qm.deformed_momentum(sp, z3, 2.0, 1).apply(phi)
    pref = G.apply_momentum(sp, 1, phi)
    rows.append(("closed-form B=0 momentum", (pb - pref).norm(), 0.0,
                 (pb - pref).norm() == 0.0))
    V0 = qm.potential_V(sp, z3, 1.0).apply(phi)
    rows.append(("potential B=0", V0.norm(), 0.0, V0.norm() == 0.0))
    F = fk.make_fock(2, 6, 0.6, 2)
    X = fk.coordinate_operator(F, 0)
    Xz = fk.deformed_coordinate(F, G.SkewMatrix.zero(3), 0)
    dmax = abs(Xz.matrix - X.matrix).max()
    rows.append(("coordinate theta=0", float(dmax), 0.0, dmax == 0.0))

    # quadrature paths at 1e-6
    deep7 = (0.5, SQ2 * 0.5, 0.25, SQ2 * 0.25, 0.125, SQ2 * 0.125, 0.0625)
    sp1 = G.make_grid(1, 32, 6.0)
    phi1 = G.domain_vector(sp1, 2)
    A1 = G.h0_operator(sp1)
    cfg1 = WarpConfig(quad_points=64, epsilon_schedule=deep7,
                      extrapolation_order=4, estimate_quadrature_error=False)
    osc = warp_oscillatory(A1, G.q_generator(sp1, 1.0), G.SkewMatrix.zero(1),
                           phi1, cfg1)
    ref1 = A1.apply(phi1)
    rows.append(_row("oscillatory B=0",
                     (osc.state - ref1).norm() / ref1.norm(), 1e-6))

    sp2 = G.make_grid(2, 12, 5.0)
    phi2 = G.domain_vector(sp2, 2, 2)
    th2 = G.SkewMatrix.from_block(0.1)
    deep6 = deep7[:-1]
    cfg_id = WarpConfig(quad_points=80, epsilon_schedule=deep6,
                        extrapolation_order=3, estimate_quadrature_error=False)
    res_id = warp_oscillatory(G.IdentityOperator(sp2),
                              G.q_generator(sp2, 1.0), th2, phi2, cfg_id)
    rows.append(_row("oscillatory identity operator",
                     (res_id.state - phi2).norm(), 1e-6))

    H02 = G.h0_operator(sp2)
    P2 = G.momentum_operator(sp2, 0)
    cfg_z = WarpConfig(quad_points=200,
                       epsilon_schedule=(0.5, SQ2 * 0.5, 0.25, SQ2 * 0.25,
                                         0.125),
                       extrapolation_order=4, estimate_quadrature_error=False)
    q0 = rieffel_product(H02, P2, G.SkewMatrix.zero(2), phi2, cfg_z,
                         Q=G.q_generator(sp2, 1.0))
    plain = H02.apply(P2.apply(phi2))
    rows.append(_row("product theta=0",
                     (q0.state - plain).norm() / plain.norm(), 1e-6))
    _report(10, "trivial-limit suite", rows, t0)
