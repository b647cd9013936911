"""The six named studies behind the CLI.

Each study returns a payload dict with ``contracts`` (check rows with
values, tolerances and pass flags), ``tables`` (free-form result records),
and ``series`` (plot-ready x/y sequences).  Everything is seeded and
deterministic; grid sizes are desk scale.
"""

from __future__ import annotations

import numpy as np

from . import fock as fk
from . import qm
from . import verify
from .errors import ConfigError
from .grid import (CallableOperator, GridState, IdentityOperator, SkewMatrix,
                   domain_vector, h0_operator, make_grid, momentum_operator,
                   q_generator)
from .warp import (RIEFFEL_DEFAULT, WarpConfig, rieffel_product,
                   warp_oscillatory, warp_spectral)

SQ2 = 0.7071067811865476


def contract(check: str, value: float, tolerance: float,
             comparator: str = "<") -> dict:
    value = float(value)
    if comparator == "<":
        passed = value < tolerance
    elif comparator == "<=":
        passed = value <= tolerance
    elif comparator == ">":
        passed = value > tolerance
    elif comparator == "decreasing":
        passed = bool(tolerance)  # caller encodes the boolean
    else:
        raise ValueError(f"unknown comparator {comparator}")
    return {"check": check, "value": value, "tolerance": float(tolerance)
            if comparator != "decreasing" else 1.0,
            "comparator": comparator, "passed": bool(passed)}


def _decreasing(values) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


# ---------------------------------------------------------------------------
# osc-vs-spectral (oracle equivalence, refinement, trivial limits, product)
# ---------------------------------------------------------------------------

def _osc_case(space, A_name, n, skew, phi, ladder, cfg_kwargs, contracts,
              series, label, tol):
    A = {"P1": momentum_operator(space, 0),
         "H0": h0_operator(space)}[A_name]
    Q = q_generator(space, n)
    reference = warp_spectral(A, Q, skew, phi)
    errs = []
    for K in ladder:
        cfg = WarpConfig(quad_points=K, estimate_quadrature_error=False,
                         convergence_tolerance=10.0, **cfg_kwargs)
        osc = warp_oscillatory(A, Q, skew, phi, cfg)
        errs.append((osc.state - reference).norm() / reference.norm())
    series[f"refinement {label}"] = {
        "xlabel": "quad_points", "ylabel": "relative difference",
        "points": [[float(k), float(e)] for k, e in zip(ladder, errs)],
    }
    contracts.append(contract(f"oracle equivalence {label}", errs[-1], tol))
    contracts.append(contract(f"refinement decrease {label}",
                              0.0 if _decreasing(errs) else 1.0,
                              _decreasing(errs), "decreasing"))
    return errs


def run_osc_vs_spectral(params: dict, seed: int) -> dict:
    contracts, series, tables = [], {}, {}
    tol = params.get("tolerance", 1e-3)
    trivial_tol = params.get("trivial_tolerance", 1e-6)

    # dims = 1: the only 1x1 skew matrix is zero, so these rows exercise the
    # quadrature's collapse onto the undeformed operator; the collapse is
    # cheap to resolve, so the schedule runs deep
    deep6 = (0.5, SQ2 * 0.5, 0.25, SQ2 * 0.25, 0.125, SQ2 * 0.125)
    deep7 = deep6 + (0.0625,)
    sp1 = make_grid(1, 32, 6.0)
    phi1 = domain_vector(sp1, 2)
    for A_name in ("P1", "H0"):
        for n in (0.0, 1.0):
            _osc_case(sp1, A_name, n, SkewMatrix.zero(1), phi1,
                      params.get("ladder_1d", (32, 48, 64)),
                      {"epsilon_schedule": deep7, "extrapolation_order": 4},
                      contracts, series, f"1d {A_name} n={n} B=0",
                      trivial_tol)

    # dims = 2, n = 1: the default engine configuration
    sp2 = make_grid(2, 12, 5.0)
    phi2 = domain_vector(sp2, 2, 2)
    th = SkewMatrix.from_block(params.get("b_2d", 0.1))
    for A_name in ("P1", "H0"):
        _osc_case(sp2, A_name, 1.0, th, phi2,
                  params.get("ladder_2d", (40, 48, 64)), {}, contracts,
                  series, f"2d {A_name} n=1 b=0.1", tol)

    # dims = 2, n = 0: the coordinate generator needs headroom between the
    # boosted states and the grid Nyquist, hence the finer grid, smaller
    # skew norm and shallower schedule
    sp0 = make_grid(2, 24, 5.0)
    phi0 = domain_vector(sp0, 2, 2)
    th0 = SkewMatrix.from_block(params.get("b_2d_n0", 0.04))
    sched0 = (0.5, SQ2 * 0.5, 0.25, SQ2 * 0.25)
    for A_name in ("P1", "H0"):
        _osc_case(sp0, A_name, 0.0, th0, phi0,
                  params.get("ladder_2d_n0", (48, 56, 64)),
                  {"epsilon_schedule": sched0, "extrapolation_order": 3},
                  contracts, series, f"2d {A_name} n=0 b=0.04", tol)

    # identity deformation: alpha(1) = 1 for any skew matrix
    cfg_id = WarpConfig(quad_points=params.get("identity_points", 80),
                        epsilon_schedule=deep6, extrapolation_order=3,
                        estimate_quadrature_error=False)
    Q2 = q_generator(sp2, 1.0)
    res_id = warp_oscillatory(IdentityOperator(sp2), Q2, th, phi2, cfg_id)
    contracts.append(contract("identity deformation (2d, b=0.1)",
                              (res_id.state - phi2).norm(), trivial_tol))

    # cutoff independence: gaussian vs compactly supported bump
    A = h0_operator(sp2)
    osc_g = warp_oscillatory(A, Q2, th, phi2,
                             WarpConfig(estimate_quadrature_error=False))
    osc_b = warp_oscillatory(A, Q2, th, phi2,
                             WarpConfig(cutoff="bump",
                                        estimate_quadrature_error=False))
    rel = (osc_g.state - osc_b.state).norm() / osc_g.state.norm()
    contracts.append(contract("cutoff independence (gaussian vs bump)",
                              rel, tol))

    # Rieffel product: quadrature vs the exact spectral route
    contracts.extend(_rieffel_rows(params, series))

    tables["per_epsilon_h0_n1"] = warp_oscillatory(
        A, Q2, th, phi2, WarpConfig()).to_json_dict()
    return {"contracts": contracts, "series": series, "tables": tables}


def _rieffel_rows(params: dict, series: dict) -> list:
    rows = []
    tol = params.get("rieffel_tolerance", 1e-3)
    trivial_tol = params.get("trivial_tolerance", 1e-6)

    def spectral_product(A, B_op, Q, theta, phi):
        # the deformed product agrees with deforming the composition of the
        # two deformed factors back by -theta; both steps are grid exact
        composed = CallableOperator(
            phi.space,
            lambda amps: warp_spectral(
                A, Q, theta,
                warp_spectral(B_op, Q, theta,
                              GridState(phi.space, amps))).amplitudes)
        minus = SkewMatrix(-theta.entries)
        return warp_spectral(composed, Q, minus, phi, method="group")

    # generators with bounded direction fields keep the untranslated
    # conjugation resolvable over the cutoff range; the coordinate
    # generator's product quadrature is out of desk-scale reach
    sp2 = make_grid(2, 12, 5.0)
    phi2 = domain_vector(sp2, 2, 2)
    Q1 = q_generator(sp2, 1.0)
    th2 = SkewMatrix.from_block(params.get("rieffel_b", 0.1))
    H0 = h0_operator(sp2)
    P = momentum_operator(sp2, 0)
    quad2 = rieffel_product(H0, P, th2, phi2, Q=Q1)
    ref2 = spectral_product(H0, P, Q1, th2, phi2)
    rows.append(contract("rieffel H0xP1 (unit direction generator)",
                         (quad2.state - ref2).norm() / ref2.norm(), tol))
    series["rieffel per-epsilon H0xP1"] = {
        "xlabel": "epsilon", "ylabel": "distance to limit",
        "points": [[e, (s - quad2.state).norm()] for e, s in zip(
            RIEFFEL_DEFAULT.epsilon_schedule, quad2.per_epsilon_states)],
    }

    # the inverse-square generator's direction field is larger near the
    # innermost nodes, so this row needs extra per-axis resolution
    Q2 = q_generator(sp2, 2.0)
    cfg_n2 = WarpConfig(quad_points=params.get("rieffel_points_n2", 176),
                        epsilon_schedule=RIEFFEL_DEFAULT.epsilon_schedule,
                        extrapolation_order=2,
                        estimate_quadrature_error=False)
    quad3 = rieffel_product(P, P, th2, phi2, cfg_n2, Q=Q2)
    ref3 = spectral_product(P, P, Q2, th2, phi2)
    rows.append(contract("rieffel P1xP1 (inverse-square generator)",
                         (quad3.state - ref3).norm() / ref3.norm(), tol))

    # trivial rows: theta = 0 collapses to the plain product, and the
    # identity is the unit of the deformed product; the collapse is tested
    # at the tight tolerance, which needs the deep high-order extrapolation
    z = SkewMatrix.zero(2)
    cfg_z = WarpConfig(quad_points=params.get("rieffel_points_trivial", 200),
                       epsilon_schedule=(0.5, SQ2 * 0.5, 0.25, SQ2 * 0.25,
                                         0.125),
                       extrapolation_order=4,
                       estimate_quadrature_error=False)
    quad0 = rieffel_product(H0, P, z, phi2, cfg_z, Q=Q1)
    plain = H0.apply(P.apply(phi2))
    rows.append(contract("rieffel theta=0 is the plain product",
                         (quad0.state - plain).norm() / plain.norm(),
                         trivial_tol))
    quad1 = rieffel_product(IdentityOperator(sp2), P, th2, phi2, Q=Q1)
    ref1 = P.apply(phi2)
    rows.append(contract("rieffel identity is the unit",
                         (quad1.state - ref1).norm() / ref1.norm(), tol))
    return rows


# ---------------------------------------------------------------------------
# qm-deform (closed forms, d1, commutator identities)
# ---------------------------------------------------------------------------

def _qm_matrix(params):
    if "B" in params or "n" in params:
        bvec = tuple(params.get("B", (0.0, 0.0, 0.1)))
        return [(float(params.get("n", 1.0)), bvec)]
    b1 = (0.0, 0.0, 0.1)
    b2 = (0.05, 0.05, 0.0)
    return params.get("matrix", [
        (0.0, b1), (0.5, b1), (1.0, b1), (2.0, b2)])


def _flat_state_for(n):
    return (4, 4, 4) if n > 1.5 else (3, 3, 3)


def run_qm_deform(params: dict, seed: int) -> dict:
    contracts, series, tables = [], {}, {}

    # closed-form identity: exact evaluator vs H0 + V
    sp = make_grid(3, params.get("closed_form_points", 32),
                   params.get("closed_form_half_width", 7.0))
    H0 = h0_operator(sp)
    tol_cf = params.get("closed_form_tolerance", 1e-5)
    rows = []
    for n, bvec in _qm_matrix(params):
        B = SkewMatrix.from_axial(bvec)
        Q = q_generator(sp, n)
        HB = qm.deformed_hamiltonian(sp, B, n)
        for ks in params.get("closed_form_states", [(3, 3, 3), (4, 4, 4)]):
            phi = domain_vector(sp, *ks)
            ws = warp_spectral(H0, Q, B, phi)
            closed = HB.apply(phi)
            rel = (ws - closed).norm() / closed.norm()
            rows.append({"n": n, "B": list(bvec), "state": list(ks),
                         "residual": rel})
            contracts.append(contract(
                f"closed form n={n} state={ks}", rel, tol_cf))
    tables["closed_form"] = rows

    # momentum closed form: exact evaluator vs P + correction field
    P0 = momentum_operator(sp, 0)
    for n, bvec in _qm_matrix(params):
        B = SkewMatrix.from_axial(bvec)
        Q = q_generator(sp, n)
        phi = domain_vector(sp, 4, 4, 4)
        ws = warp_spectral(P0, Q, B, phi)
        closed = qm.deformed_momentum(sp, B, n, 0).apply(phi)
        contracts.append(contract(
            f"deformed momentum closed form n={n}",
            (ws - closed).norm() / closed.norm(),
            params.get("momentum_tolerance", 1e-5)))

    # scalar-product identity for the deformed Hamiltonian
    spd = make_grid(3, params.get("d1_points", 64),
                    params.get("d1_half_width", 7.0))
    tol_d1 = params.get("d1_tolerance", 1e-6)
    matrix = _qm_matrix(params)
    default_states = [(1, 0, 0) if n == 0 else _flat_state_for(n)
                      for n, _ in matrix]
    d1_rows = []
    for (n, bvec), ks in zip(matrix, params.get("d1_states", default_states)):
        B = SkewMatrix.from_axial(bvec)
        phi = domain_vector(spd, *ks)
        resid = qm.theorem_d1_check(spd, B, n, phi)
        d1_rows.append({"n": n, "B": list(bvec), "state": list(ks),
                        "residual": resid})
        contracts.append(contract(f"momentum-square identity n={n}",
                                  resid, tol_d1))
    tables["d1"] = d1_rows

    # per-experiment record: relative-bound fit and potential symmetry for
    # the first matrix row, so a single-deformation run reports the full
    # self-adjointness picture
    n0, bvec0 = matrix[0]
    if n0 != 0.0:
        B0 = SkewMatrix.from_axial(bvec0)
        V0 = qm.potential_V(sp, B0, n0)
        fit = qm.fit_relative_bound(
            V0, H0, qm.sample_states(sp, count=30, seed=seed),
            b_cap=params.get("b_cap", 1e3))
        flats = qm.flat_sample_states(sp, count=20, seed=seed + 2)
        herm = verify.hermiticity_residual(V0, list(zip(flats[:10],
                                                        flats[10:20])))
        tables["experiment"] = {
            "B": list(bvec0), "n": n0, "mass": 0.5,
            "grid": {"points": sp.points_per_axis,
                     "half_width": sp.half_width},
            "bound_fit": fit.to_json_dict(),
            "hermiticity_residual": herm,
        }
        contracts.append(contract(f"experiment bound a<1 (n={n0})", fit.a,
                                  1.0))
        contracts.append(contract(f"experiment potential symmetry (n={n0})",
                                  herm,
                                  params.get("hermiticity_tolerance", 1e-6)))

    # trivial limits
    zero = SkewMatrix.zero(3)
    phi0 = domain_vector(spd, 1, 1, 0)
    hb0 = qm.deformed_hamiltonian(spd, zero, 1.0).apply(phi0)
    zero_resid = (hb0 - h0_operator(spd).apply(phi0)).norm() / phi0.norm()
    contracts.append(contract("B=0 reduces to H0", zero_resid, 1e-12, "<="))
    pb0 = qm.deformed_momentum(spd, zero, 1.0, 2).apply(phi0)
    contracts.append(contract(
        "B=0 reduces to P",
        (pb0 - momentum_operator(spd, 2).apply(phi0)).norm() / phi0.norm(),
        1e-12, "<="))

    # commutator identities on the dense-domain vectors
    contracts.extend(_commutator_rows(params, tables))
    return {"contracts": contracts, "series": series, "tables": tables}


def _commutator_rows(params: dict, tables: dict) -> list:
    from .grid import (PositionMultiplier, ProductOperator, SumOperator,
                       anticommutator, commutator)
    rows = []
    # the box is generous (the growing multipliers for n <= 0 must decay
    # before the periodic boundary) and the states are origin-flat (the
    # singular multipliers for n > 0 must be sampled cleanly)
    sp = make_grid(3, params.get("commutator_points", 64),
                   params.get("commutator_half_width", 7.5))
    r = sp.radii()
    co = sp.coords()
    tol = params.get("commutator_tolerance", 1e-4)
    tol_anti = params.get("anticommutator_tolerance", 1e-5)
    states = [domain_vector(sp, *ks)
              for ks in params.get("commutator_states",
                                   [(3, 3, 3), (4, 3, 3)])]
    table = []
    for n in params.get("commutator_exponents", (-1.0, 0.5, 1.0, 2.0)):
        Mn = PositionMultiplier(sp, r ** (-n))
        for j in range(3):
            P = momentum_operator(sp, j)
            lhs = commutator(P, Mn)
            rhs = PositionMultiplier(sp, -1j * n * co[j] * r ** (-(n + 2.0)))
            worst = max((lhs.apply(phi) - rhs.apply(phi)).norm() / phi.norm()
                        for phi in states)
            table.append({"identity": "radial-power", "n": n, "j": j,
                          "residual": worst})
            if j == 0:
                rows.append(contract(f"commutator |X|^-n n={n}", worst, tol))
        # component form [P_j, X_k |X|^-n]
        for (j, k) in ((0, 0), (0, 1)):
            P = momentum_operator(sp, j)
            Mk = PositionMultiplier(sp, co[k] * r ** (-n))
            lhs = commutator(P, Mk)
            delta = 1.0 if j == k else 0.0
            rhs = PositionMultiplier(
                sp, 1j * (delta - n * co[k] * co[j] / r ** 2) * r ** (-n))
            worst = max((lhs.apply(phi) - rhs.apply(phi)).norm() / phi.norm()
                        for phi in states)
            table.append({"identity": "component", "n": n, "j": j, "k": k,
                          "residual": worst})
            if (j, k) == (0, 0):
                rows.append(contract(f"commutator X_k|X|^-n n={n}", worst, tol))
    tables["commutators"] = table

    # anticommutator reduction: {(BQ)^k [Q_k, P_j], P^j} against its
    # first-order form
    B = SkewMatrix.from_axial(params.get("anticommutator_B", (0.0, 0.0, 0.1)))
    bx = B.apply(co)
    anti_rows = []
    for n in params.get("anticommutator_exponents", (0.5, 1.0, 2.0)):
        Q = q_generator(sp, n)
        terms = []
        for j in range(3):
            Cj = None
            for k in range(3):
                bq_k = PositionMultiplier(sp, B.apply(Q.values)[k])
                inner = commutator(Q.component(k), momentum_operator(sp, j))
                term = ProductOperator(sp, [bq_k, inner])
                Cj = term if Cj is None else SumOperator(sp, [Cj, term])
            terms.append(anticommutator(Cj, momentum_operator(sp, j)))
        lhs = SumOperator(sp, terms)
        corr = []
        for j in range(3):
            mult = PositionMultiplier(sp, 2j * bx[j] * r ** (-2.0 * n))
            corr.append(ProductOperator(sp, [mult, momentum_operator(sp, j)]))
        rhs = SumOperator(sp, corr)  # lhs + rhs should annihilate the domain
        worst = max((lhs.apply(phi) + rhs.apply(phi)).norm() / phi.norm()
                    for phi in states)
        anti_rows.append({"n": n, "residual": worst})
        rows.append(contract(f"anticommutator reduction n={n}", worst,
                             tol_anti))
    tables["anticommutator"] = anti_rows

    # skew-symmetry kill and the commuting correction
    phi = states[0]
    bxx = np.sum(bx * co, axis=0)
    kill = np.sqrt(sp.measure) * float(np.linalg.norm(bxx * phi.amplitudes))
    rows.append(contract("(BX).X annihilates", kill / phi.norm(), 1e-12, "<="))
    n = 1.0
    acc = np.zeros(sp.size, dtype=np.complex128)
    for j in range(3):
        W = bx[j] * r ** (-2.0 * n)
        P = momentum_operator(sp, j)
        acc += P.apply_array(W * phi.amplitudes) - W * P.apply_array(
            phi.amplitudes)
    comm_corr = np.sqrt(sp.measure) * float(np.linalg.norm(acc)) / phi.norm()
    rows.append(contract("correction field commutes with P", comm_corr,
                         params.get("commuting_correction_tolerance", 1e-5)))
    return rows


# ---------------------------------------------------------------------------
# bound-fit (Kato-Rellich program)
# ---------------------------------------------------------------------------

def run_bound_fit(params: dict, seed: int) -> dict:
    contracts, series, tables = [], {}, {}
    sp = make_grid(3, params.get("points", 32),
                   params.get("half_width", 7.0))
    B = SkewMatrix.from_axial(params.get("B", (0.0, 0.0, 0.1)))
    H0 = h0_operator(sp)
    samples = qm.sample_states(sp, count=params.get("n_samples", 50),
                               seed=seed)
    b_cap = params.get("b_cap", 1e3)
    herm_tol = params.get("hermiticity_tolerance", 1e-6)
    if "n" in params:
        params.setdefault("exponents", (float(params["n"]),))
    # symmetry is measured on origin-flat states: on the grid the singular
    # multiplier |x|^(-2n) is sampled faithfully only where the state
    # suppresses the origin region
    flats = qm.flat_sample_states(sp, count=params.get("n_herm_states", 40),
                                  seed=seed + 2)
    pairs = list(zip(flats[:20], flats[20:40]))
    fit_rows = []
    for n in params.get("exponents", (0.5, 1.0, 2.0)):
        V = qm.potential_V(sp, B, n)
        fit = qm.fit_relative_bound(V, H0, samples, b_cap=b_cap)
        fit_rows.append({"n": n, **fit.to_json_dict()})
        contracts.append(contract(f"relative bound a<1 (n={n})", fit.a, 1.0))
        herm = verify.hermiticity_residual(V, pairs)
        contracts.append(contract(f"potential hermiticity (n={n})", herm,
                                  herm_tol))
        series[f"envelope n={n}"] = {
            "xlabel": "b", "ylabel": "a(b)",
            "points": [[b, a] for b, a in fit.envelope],
        }
    tables["fits"] = fit_rows

    # spectrum reality of the restricted deformed Hamiltonian
    eig_states = qm.sample_states(sp, count=params.get("n_eig_states", 60),
                                  seed=seed + 1)
    eig_rows = []
    for n in params.get("eig_exponents", (1.0,)):
        HB = qm.deformed_hamiltonian(sp, B, n)
        imag = verify.eigenvalue_reality(HB, eig_states)
        eig_rows.append({"n": n, "max_imag": imag})
        contracts.append(contract(f"restricted spectrum real (n={n})", imag,
                                  params.get("eig_tolerance", 1e-8)))
    tables["eigen_reality"] = eig_rows
    return {"contracts": contracts, "series": series, "tables": tables}


# ---------------------------------------------------------------------------
# qft-moyal (deformed coordinates on the Fock space)
# ---------------------------------------------------------------------------

def run_qft_moyal(params: dict, seed: int) -> dict:
    contracts, series, tables = [], {}, {}
    tol = params.get("tolerance", 1e-4)
    dp = params.get("dp", 0.5)

    # residual lattice: interior packets on a sinc-differentiated lattice
    nax = params.get("residual_per_axis", 40)
    F = fk.make_fock(2, nax, dp, 2, derivative="sinc")
    R = (nax / 2 - 0.5) * dp
    c = params.get("packet_fraction", 0.42) * R
    psi1 = fk.gaussian_packet(F, (c, c), 1.6 * dp)
    psi2 = fk.two_particle_packet(F, (c, c), 1.5 * dp, (c, c), 1.9 * dp)
    if "theta_spatial" in params:
        s = float(params["theta_spatial"])
        e = np.zeros((3, 3))
        e[1, 2], e[2, 1] = s, -s
        thetas = [SkewMatrix(e)]
    else:
        thetas = [SkewMatrix.random(3, params.get("theta_norm", 0.1),
                                    seed + k)
                  for k in range(params.get("n_theta", 5))]
    rows = []
    for k, th in enumerate(thetas):
        for tag, psi in (("one-particle", psi1), ("two-particle", psi2)):
            resid = fk.moyal_weyl_commutator_check(
                F, th, 0, 1, psi, boundary_tol=params.get("boundary_tol", 1e-6))
            rows.append({"theta_seed": seed + k, "state": tag,
                         "i": 0, "j": 1, "residual": resid})
            contracts.append(contract(
                f"deformed commutator theta#{k} {tag}", resid, tol))
    tables["commutator_residuals"] = rows

    # dense brute-force commutator against the lazy path on the small lattice
    F8 = fk.make_fock(2, params.get("oracle_per_axis", 8), dp, 2,
                      derivative=params.get("oracle_derivative", "central"))
    R8 = (params.get("oracle_per_axis", 8) / 2 - 0.5) * dp
    psi8 = fk.gaussian_packet(F8, (0.45 * R8, 0.45 * R8), 1.0 * dp)
    th8 = SkewMatrix.random(3, params.get("theta_norm", 0.1), seed)
    Xi = fk.deformed_coordinate(F8, th8, 0).to_dense()
    Xj = fk.deformed_coordinate(F8, th8, 1).to_dense()
    dense = Xi @ (Xj @ psi8.amplitudes) - Xj @ (Xi @ psi8.amplitudes)
    Xil = fk.deformed_coordinate(F8, th8, 0, lazy=True)
    Xjl = fk.deformed_coordinate(F8, th8, 1, lazy=True)
    lazy = (Xil.apply(Xjl.apply(psi8)) - Xjl.apply(Xil.apply(psi8))).amplitudes
    agr = float(np.linalg.norm(dense - lazy) / max(np.linalg.norm(dense), 1e-300))
    contracts.append(contract("dense oracle vs lazy path", agr,
                              params.get("oracle_tolerance", 1e-10)))
    # the small lattice cannot host interior packets, so its commutator
    # residual is reported as information, not as a contract
    r8 = fk.moyal_weyl_commutator_check(F8, th8, 0, 1, psi8, boundary_tol=1.0)
    tables["small_lattice_residual"] = {
        "per_axis": params.get("oracle_per_axis", 8), "residual": r8,
        "boundary_mass": F8.boundary_mass(psi8),
        "note": "informational: interior support is not attainable here",
    }

    # coordinate bound: fitted slope below one for a small deformation
    nfit = params.get("fit_per_axis", 10)
    Ff = fk.make_fock(2, nfit, dp, 2, derivative="central")
    Rf = (nfit / 2 - 0.5) * dp
    packs = [fk.gaussian_packet(Ff, (0.4 * Rf, 0.4 * Rf), 1.2 * dp),
             fk.gaussian_packet(Ff, (-0.5 * Rf, 0.3 * Rf), 1.0 * dp),
             fk.two_particle_packet(Ff, (0.4 * Rf, 0.4 * Rf), 1.2 * dp,
                                    (0.4 * Rf, 0.4 * Rf), 1.5 * dp)]
    rng = np.random.default_rng(seed)
    for _ in range(params.get("n_fit_random", 9)):
        amps = rng.standard_normal(Ff.dimension) \
            + 1j * rng.standard_normal(Ff.dimension)
        packs.append(fk.FockState(Ff, amps).normalized())
    thf = SkewMatrix.random(3, params.get("fit_theta_norm", 0.01), seed + 7)
    fit = fk.fock_x_bound_fit(Ff, thf, packs,
                              b_cap=params.get("b_cap", 1e3))
    tables["x_bound_fit"] = fit.to_json_dict()
    contracts.append(contract("coordinate bound a<1", fit.a, 1.0))

    # reality of the deformed coordinate spectrum at the full truncation
    F8c = fk.make_fock(2, params.get("oracle_per_axis", 8), dp, 2,
                       derivative="central")
    Xd = fk.deformed_coordinate(F8c, th8, 0).to_dense()
    eigs = np.linalg.eigvals(Xd)
    contracts.append(contract("deformed coordinate spectrum real",
                              float(np.max(np.abs(eigs.imag))),
                              params.get("eig_tolerance", 1e-8)))
    series["commutator residual by theta"] = {
        "xlabel": "theta index", "ylabel": "residual",
        "points": [[float(i), row["residual"]]
                   for i, row in enumerate(rows)],
    }
    return {"contracts": contracts, "series": series, "tables": tables}


# ---------------------------------------------------------------------------
# symbol-fit (decay orders, phase function, relative-bound-one checks)
# ---------------------------------------------------------------------------

def run_symbol_fit(params: dict, seed: int) -> dict:
    contracts, series, tables = [], {}, {}

    pc = verify.phase_check(dims=2, n_samples=params.get("phase_samples",
                                                         10_000), seed=seed)
    tables["phase_check"] = pc.to_json_dict()
    contracts.append(contract("phase homogeneity (rounding)",
                              pc.homogeneity_residual, 1e-12))
    contracts.append(contract("phase differential nonzero",
                              pc.differential_min, 0.0, ">"))

    # synthetic recovery of an exact power law
    radii = verify.default_radii()
    synth = {(0, 0): [(r, 3.0 * (1 + r) ** 2) for r in radii],
             (1, 0): [(r, 2.0 * (1 + r) ** 1.5) for r in radii]}
    fit0 = verify.fit_symbol_order(synth)
    tables["synthetic_fit"] = fit0.to_json_dict()
    contracts.append(contract("synthetic order recovery", abs(fit0.m - 2.0),
                              1e-8))
    contracts.append(contract("synthetic type recovery", abs(fit0.rho - 0.5),
                              1e-8))
    contracts.append(contract("synthetic constant recovery",
                              abs(fit0.constants[(0, 0)] - 3.0), 1e-8))

    # sampled decay of the conjugated free Hamiltonian; the radii sit on the
    # asymptotic branch where the quadratic conjugation terms dominate, and
    # the grid leaves Nyquist headroom for the largest boost phases
    sp = make_grid(2, params.get("points", 64), params.get("half_width", 6.0))
    phi = domain_vector(sp, 1, 1)
    Q = q_generator(sp, 1.0)
    th = SkewMatrix.from_block(params.get("b", 0.1))
    A = h0_operator(sp)
    decay_radii = np.geomspace(params.get("r_min", 40.0),
                               params.get("r_max", 300.0),
                               params.get("n_radii", 15))
    samples = {}
    for gamma in verify.gamma_indices(2, params.get("gamma_max", 2)):
        samples[gamma] = verify.sample_decay(A, Q, th, phi, gamma,
                                             decay_radii)
    fit = verify.fit_symbol_order(samples)
    tables["h0_fit"] = fit.to_json_dict()
    contracts.append(contract("goodness of fit (log RMS)", fit.residual,
                              params.get("fit_residual_tolerance", 0.1)))
    contracts.append(contract("growth order bounded", fit.m,
                              params.get("slope_cap", 2.2)))
    for gamma, rows in samples.items():
        series[f"decay gamma={list(gamma)}"] = {
            "xlabel": "|x|", "ylabel": "norm",
            "points": [[r, v] for r, v in rows]}

    # held-out coverage: fit without every fifth radius, then check those
    # radii against the fitted bound with 5% slack
    held = set(range(1, len(decay_radii), 5))
    train = {g: [p for i, p in enumerate(rows) if i not in held]
             for g, rows in samples.items()}
    fit_tr = verify.fit_symbol_order(train)
    ok = all(v <= 1.05 * fit_tr.bound(g, r)
             for g, rows in samples.items()
             for i, (r, v) in enumerate(rows) if i in held)
    contracts.append(contract("held-out coverage", 0.0 if ok else 1.0,
                              ok, "decreasing"))

    # relative-bound-one checks for the deformed Hamiltonian and coordinate
    spw = make_grid(3, params.get("wust_points", 16), 6.0)
    Bw = SkewMatrix.from_axial((0.0, 0.0, 0.1))
    H0w = h0_operator(spw)
    HBw = qm.deformed_hamiltonian(spw, Bw, 1.0)
    wsamples = qm.sample_states(spw, count=params.get("wust_samples", 30),
                                seed=seed)
    wfit = verify.wust_inequality_check(H0w.apply, HBw.apply, wsamples,
                                        b_cap=params.get("b_cap", 1e3))
    tables["wust_h0"] = wfit.to_json_dict()
    contracts.append(contract("slope-one bound feasible (H0 deformation)",
                              wfit.b, params.get("b_cap", 1e3)))

    Ff = fk.make_fock(2, 8, 0.5, 2, derivative="central")
    thf = SkewMatrix.random(3, 0.01, seed + 3)
    X0 = fk.coordinate_operator(Ff, 0)
    X0t = fk.deformed_coordinate(Ff, thf, 0)
    Rf = 1.75
    fsamples = [fk.gaussian_packet(Ff, (0.4 * Rf, 0.4 * Rf), 0.6),
                fk.two_particle_packet(Ff, (0.4 * Rf, 0.4 * Rf), 0.6,
                                       (0.4 * Rf, 0.4 * Rf), 0.75),
                Ff.vacuum()]
    ffit = verify.wust_inequality_check(X0.apply, X0t.apply, fsamples,
                                        b_cap=params.get("b_cap", 1e3))
    tables["wust_fock_x"] = ffit.to_json_dict()
    contracts.append(contract("slope-one bound feasible (coordinate)",
                              ffit.b, params.get("b_cap", 1e3)))
    return {"contracts": contracts, "series": series, "tables": tables}


# ---------------------------------------------------------------------------
# full-dossier
# ---------------------------------------------------------------------------

def run_full_dossier(params: dict, seed: int) -> dict:
    contracts, series, tables = [], {}, {}

    # deformed free Hamiltonian on a compact grid
    sp = make_grid(3, params.get("points", 32), 7.0)
    B = SkewMatrix.from_axial((0.0, 0.0, 0.1))
    n = params.get("exponent", 1.0)
    H0 = h0_operator(sp)
    HB = qm.deformed_hamiltonian(sp, B, n)
    V = qm.potential_V(sp, B, n)
    samples = qm.sample_states(sp, count=30, seed=seed)
    flats = qm.flat_sample_states(sp, count=20, seed=seed + 2)
    pairs = list(zip(flats[:10], flats[10:20]))
    herm = verify.hermiticity_residual(V, pairs)
    imag = verify.eigenvalue_reality(HB, samples)
    bfit = qm.fit_relative_bound(V, H0, samples,
                                 b_cap=params.get("b_cap", 1e3))
    radii = verify.default_radii()
    Q = q_generator(sp, n)
    decs = {g: verify.sample_decay(H0, Q, B, samples[0], g, radii)
            for g in verify.gamma_indices(3, 1)}
    sfit = verify.fit_symbol_order(decs)
    tables["hamiltonian_dossier"] = verify.dossier(
        "deformed free Hamiltonian", herm, imag, bfit, sfit,
        extras={"exponent": n})
    contracts.append(contract("dossier: potential symmetric", herm, 1e-6))
    contracts.append(contract("dossier: spectrum real", imag, 1e-8))
    contracts.append(contract("dossier: relative bound", bfit.a, 1.0))

    # deformed coordinate on the Fock space
    F = fk.make_fock(2, 8, 0.5, 2, derivative="central")
    th = SkewMatrix.random(3, 0.01, seed)
    X0 = fk.coordinate_operator(F, 0)
    X0t = fk.deformed_coordinate(F, th, 0)
    D = fk.deformation_part(F, th, 0)
    Rf = 1.75
    fsamples = [fk.gaussian_packet(F, (0.4 * Rf, 0.4 * Rf), 0.6),
                fk.gaussian_packet(F, (-0.4 * Rf, 0.5 * Rf), 0.5),
                fk.two_particle_packet(F, (0.4 * Rf, 0.4 * Rf), 0.6,
                                       (0.4 * Rf, 0.4 * Rf), 0.75)]
    rng = np.random.default_rng(seed)
    for _ in range(6):
        amps = rng.standard_normal(F.dimension) \
            + 1j * rng.standard_normal(F.dimension)
        fsamples.append(fk.FockState(F, amps).normalized())
    fpairs = [(fsamples[0], fsamples[1]), (fsamples[2], fsamples[3])]
    fherm = verify.hermiticity_residual(D, fpairs)
    feig = float(np.max(np.abs(
        np.linalg.eigvals(X0t.to_dense()).imag)))
    ffit = fk.fock_x_bound_fit(F, th, fsamples, b_cap=params.get("b_cap", 1e3))
    tables["coordinate_dossier"] = verify.dossier(
        "deformed coordinate", fherm, feig, ffit, None,
        extras={"theta_norm": 0.01,
                "hermitization_defect":
                    X0.diagnostics["hermitization_defect"]})
    contracts.append(contract("dossier: coordinate shift symmetric", fherm,
                              1e-10))
    contracts.append(contract("dossier: coordinate spectrum real", feig, 1e-8))
    contracts.append(contract("dossier: coordinate bound", ffit.a, 1.0))
    return {"contracts": contracts, "series": series, "tables": tables}


STUDIES = {
    "osc-vs-spectral": (run_osc_vs_spectral,
                        "quadrature vs exact-evaluator oracle equivalence, "
                        "refinement, trivial limits, deformed product"),
    "qm-deform": (run_qm_deform,
                  "closed-form deformed operators, momentum-square identity, "
                  "commutator identities"),
    "bound-fit": (run_bound_fit,
                  "relative-bound fits, potential symmetry, restricted "
                  "spectrum reality"),
    "qft-moyal": (run_qft_moyal,
                  "deformed-coordinate commutator residuals, dense-vs-lazy "
                  "oracle, coordinate bound"),
    "symbol-fit": (run_symbol_fit,
                   "phase-function checks, decay-order fits, slope-one "
                   "bound checks"),
    "full-dossier": (run_full_dossier,
                     "combined self-adjointness dossiers for the deformed "
                     "Hamiltonian and coordinate"),
}


def run_study(name: str, params: dict | None = None,
              seed: int = 20260808) -> dict:
    if name not in STUDIES:
        raise ConfigError(f"unknown study {name!r}; choose from "
                          f"{sorted(STUDIES)}")
    fn, _ = STUDIES[name]
    payload = fn(dict(params or {}), int(seed))
    payload["study"] = name
    payload["seed"] = int(seed)
    payload["params"] = dict(params or {})
    payload["passed"] = all(row["passed"] for row in payload["contracts"])
    return payload
