"""Closed-form deformed operators on the grid and relative-bound fits.

Deforming with the generator ``Q(X) = X/|X|**n`` and a skew matrix ``B``
produces, in the package's all-Euclidean sign convention,

* ``P_j -> P_j + W_j`` with ``W_j(x) = (Bx)_j |x|**(-2n)``  (minimal
  substitution), and
* ``H0 -> H0 + V`` with ``V = (1/m) W.P + (1/2m) |W|^2`` where the momentum
  acts before the multiplication.

These forms follow from conjugating by ``exp(i y.Q(x))`` with ``P = i d/dx``
and Euclidean spatial indices; skew-symmetry kills every ``(BX).X`` term.
The relative-bound fitter realizes the Kato-Rellich coefficient pair
``(a, b)`` as a one-dimensional envelope problem over a b-grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSamplesError
from .grid import (GridOperator, GridSpace, GridState, PositionMultiplier,
                   ProductOperator, SkewMatrix, SumOperator, domain_vector,
                   h0_operator, momentum_operator)

_DEGENERACY_RTOL = 1e-12


def _correction_fields(space: GridSpace, B: SkewMatrix, exponent_n: float):
    """The multiplication fields W_j = (Bx)_j |x|^(-2n), one row per axis."""
    if B.dim != space.dims:
        raise ValueError(f"skew matrix dim {B.dim} != grid dims {space.dims}")
    bx = B.apply(space.coords())
    if exponent_n == 0:
        return bx
    r = space.radii()
    if exponent_n > 0 and float(np.min(r)) == 0.0:
        raise ValueError("grid contains the origin; |x|^(-2n) is singular")
    return bx * r ** (-2.0 * exponent_n)


def potential_V(space: GridSpace, B: SkewMatrix, exponent_n: float,
                mass: float = 0.5) -> GridOperator:
    """Deformation potential ``(1/m) W.P + (1/2m) |W|^2``.

    The first term applies the spectral momentum before the pointwise
    multiplication; the second is a nonnegative multiplication operator.
    Vanishes identically for ``B = 0``.
    """
    W = _correction_fields(space, B, exponent_n)
    terms = []
    for j in range(space.dims):
        terms.append(ProductOperator(space, [
            PositionMultiplier(space, W[j] / mass),
            momentum_operator(space, j),
        ]))
    terms.append(PositionMultiplier(space, np.sum(W * W, axis=0) / (2.0 * mass)))
    return SumOperator(space, terms)


class DeformedMomentum(GridOperator):
    """``P_j + (Bx)_j |x|^(-2n)``; reduces to the bare momentum at B = 0."""

    def __init__(self, space: GridSpace, B: SkewMatrix, exponent_n: float,
                 axis: int):
        super().__init__(space)
        if not 0 <= axis < space.dims:
            raise ValueError(f"axis {axis} out of range for dims {space.dims}")
        self.B = B
        self.exponent_n = float(exponent_n)
        self.axis = axis
        W = _correction_fields(space, B, exponent_n)
        self._inner = SumOperator(space, [
            momentum_operator(space, axis),
            PositionMultiplier(space, W[axis]),
        ])

    def apply_array(self, amps):
        return self._inner.apply_array(amps)

    def adjoint(self):
        return self._inner.adjoint()

    @property
    def conj_parity(self):
        return self._inner.conj_parity


class DeformedHamiltonian(GridOperator):
    """``H0 + V`` with the closed-form deformation potential.

    Construction asserts the sum decomposition on probe vectors; the
    (looser) identity with the squared deformed momenta is what
    :func:`theorem_d1_check` measures.
    """

    def __init__(self, space: GridSpace, B: SkewMatrix, exponent_n: float,
                 mass: float = 0.5):
        super().__init__(space)
        self.B = B
        self.exponent_n = float(exponent_n)
        self.mass = float(mass)
        self.free_part = h0_operator(space, mass)
        self.potential_part = potential_V(space, B, exponent_n, mass)
        self._inner = SumOperator(space, [self.free_part, self.potential_part])
        self._probe_identity()

    def _probe_identity(self):
        probe = domain_vector(self.space, *([2] * self.space.dims))
        lhs = self.apply(probe)
        rhs = self.free_part.apply(probe) + self.potential_part.apply(probe)
        assert (lhs - rhs).norm() <= 1e-10 * max(rhs.norm(), 1.0), \
            "sum decomposition violated"

    def apply_array(self, amps):
        return self._inner.apply_array(amps)

    def adjoint(self):
        return self._inner.adjoint()

    @property
    def conj_parity(self):
        return self._inner.conj_parity


def deformed_momentum(space: GridSpace, B: SkewMatrix, exponent_n: float,
                      axis: int) -> DeformedMomentum:
    return DeformedMomentum(space, B, exponent_n, axis)


def deformed_hamiltonian(space: GridSpace, B: SkewMatrix, exponent_n: float,
                         mass: float = 0.5) -> DeformedHamiltonian:
    return DeformedHamiltonian(space, B, exponent_n, mass)


def theorem_d1_check(space: GridSpace, B: SkewMatrix, exponent_n: float,
                     phi: GridState, mass: float = 0.5) -> float:
    """Residual of ``H_B = (1/2m) sum_j P_B^j P_B^j`` on one state."""
    hb = deformed_hamiltonian(space, B, exponent_n, mass).apply(phi)
    acc = np.zeros(space.size, dtype=np.complex128)
    for j in range(space.dims):
        pb = deformed_momentum(space, B, exponent_n, j)
        acc += pb.apply_array(pb.apply_array(phi.amplitudes))
    rhs = GridState(space, acc / (2.0 * mass))
    return (hb - rhs).norm() / phi.norm()


# ---------------------------------------------------------------------------
# Sample states for bound fitting
# ---------------------------------------------------------------------------

def _graded_exponents(dims: int, max_degree: int):
    out = []
    for total in range(max_degree + 1):
        ks = [()]
        for _ in range(dims):
            ks = [t + (c,) for t in ks for c in range(total - sum(t) + 1)]
        out.extend(t for t in ks if sum(t) == total)
    return out


def sample_states(space: GridSpace, count: int = 50, seed: int = 20260808,
                  ladder_degree: int = 4) -> list:
    """Seeded probe set: a Hermite-Gaussian ladder plus random superpositions.

    The first ``min(count, ladder)`` states walk the graded exponent ladder;
    the remainder are unit-norm superpositions with fixed-seed coefficients.
    """
    ladder = [domain_vector(space, *ks)
              for ks in _graded_exponents(space.dims, ladder_degree)]
    n_ladder = min(len(ladder), count, max(count - 20, count // 2))
    states = ladder[:n_ladder]
    rng = np.random.default_rng(seed)
    basis = np.stack([s.amplitudes for s in ladder[:n_ladder]])
    while len(states) < count:
        coeff = rng.standard_normal(n_ladder) + 1j * rng.standard_normal(n_ladder)
        mixed = GridState(space, coeff @ basis)
        states.append(mixed.normalized())
    return states


def flat_sample_states(space: GridSpace, count: int = 40,
                       seed: int = 20260808, floor: int = 2,
                       extra_degree: int = 3) -> list:
    """Probe states vanishing to order ``floor`` along every axis.

    Singular multipliers like ``|x|**(-2n)`` are sampled cleanly only on
    states flat at the origin; these are the vectors the commutator and
    symmetry diagnostics should be measured on.
    """
    base = tuple(floor for _ in range(space.dims))
    ladder = [domain_vector(space, *(tuple(b + e for b, e in zip(base, ks))))
              for ks in _graded_exponents(space.dims, extra_degree)]
    n_ladder = min(len(ladder), count, max(count // 2, 1))
    states = ladder[:n_ladder]
    rng = np.random.default_rng(seed)
    basis = np.stack([s.amplitudes for s in ladder[:n_ladder]])
    while len(states) < count:
        coeff = rng.standard_normal(n_ladder) + 1j * rng.standard_normal(n_ladder)
        states.append(GridState(space, coeff @ basis).normalized())
    return states


# ---------------------------------------------------------------------------
# Relative-bound (Kato-Rellich) fitting
# ---------------------------------------------------------------------------

@dataclass
class BoundFit:
    """Coefficients of ``||V s|| <= a ||H s|| + b ||s||`` over a sample set."""

    a: float
    b: float
    samples: list                      # rows (||V s||, ||H s||, ||s||)
    feasible: bool
    b_cap: float
    degenerate_indices: list = field(default_factory=list)
    envelope: list = field(default_factory=list)   # sampled (b, a(b)) curve

    def check(self, slack: float = 1e-12) -> bool:
        return all(v <= self.a * h + self.b * n + slack
                   for v, h, n in self.samples)

    def to_json_dict(self) -> dict:
        return {
            "a": self.a, "b": self.b, "feasible": self.feasible,
            "b_cap": self.b_cap,
            "n_samples": len(self.samples),
            "degenerate_indices": list(self.degenerate_indices),
            "samples": [list(map(float, row)) for row in self.samples],
            "envelope": [[float(x), float(y)] for x, y in self.envelope],
        }


def envelope_fit(vs, hs, ns, b_cap: float, grid_size: int = 801) -> BoundFit:
    """Minimal ``a`` over a b-grid in ``[0, b_cap]``.

    ``a(b) = max_i (v_i - b n_i)/h_i`` clipped at zero; samples with a
    vanishing denominator are excluded and reported.  Ties prefer the
    smallest ``b``.
    """
    vs = np.asarray(vs, dtype=float)
    hs = np.asarray(hs, dtype=float)
    ns = np.asarray(ns, dtype=float)
    if vs.size == 0:
        raise DegenerateSamplesError("empty sample set")
    if not b_cap > 0:
        raise ValueError("b_cap must be positive")
    degenerate = hs <= _DEGENERACY_RTOL * np.maximum(ns, vs)
    keep = ~degenerate
    if not np.any(keep):
        raise DegenerateSamplesError("all samples degenerate")
    v, h, n = vs[keep], hs[keep], ns[keep]
    bgrid = np.linspace(0.0, b_cap, grid_size)
    ratios = np.clip((v[:, None] - bgrid[None, :] * n[:, None]) / h[:, None],
                     0.0, None)
    a_of_b = ratios.max(axis=0)
    best = int(np.argmin(a_of_b))     # first occurrence = smallest b
    a, b = float(a_of_b[best]), float(bgrid[best])
    stride = max(1, grid_size // 32)
    fit = BoundFit(
        a=a, b=b,
        samples=[(float(vi), float(hi), float(ni))
                 for vi, hi, ni in zip(vs, hs, ns)],
        feasible=bool(a < 1.0),
        b_cap=float(b_cap),
        degenerate_indices=[int(i) for i in np.nonzero(degenerate)[0]],
        envelope=list(zip(bgrid[::stride].tolist(), a_of_b[::stride].tolist())),
    )
    assert all(vi <= a * hi + b * ni + 1e-12 for vi, hi, ni
               in zip(v, h, n)), "envelope fit violated its own inequality"
    return fit


def fit_relative_bound(V_op: GridOperator, H0_op: GridOperator,
                       sample_states, b_cap: float = 1e3) -> BoundFit:
    """Fit ``||V s|| <= a ||H0 s|| + b ||s||`` over the sample set."""
    vs, hs, ns = [], [], []
    for s in sample_states:
        vs.append(V_op.apply(s).norm())
        hs.append(H0_op.apply(s).norm())
        ns.append(s.norm())
    return envelope_fit(vs, hs, ns, b_cap)
