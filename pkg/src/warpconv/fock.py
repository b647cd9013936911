"""Truncated bosonic Fock space over a finite momentum-mode lattice.

Modes live on a uniform box lattice with a half-spacing offset, so the zero
mode is excluded and every axis line is uniform (required by the discrete
momentum-derivative in the coordinate operator).  Ladder operators use the
discrete-delta normalization ``[a(p), a*(q)] = delta_pq / dp**n`` so mode
sums of ``dp**n a*(p) a(p)``-type converge to the continuum integrals; the
stored matrices act on unit-normalized occupation states.

The deformed coordinate contracts the skew matrix against the energy-
momentum operators with a Lorentzian pairing: the temporal slot enters with
the opposite sign to the Euclidean spatial slots.  With that convention the
deformed-coordinate commutator reproduces the closed-form combination of
velocity, number and skew entries that the commutator check measures.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import scipy.sparse as sps

from .errors import BoundaryContaminationError, GridDomainError
from .grid import SkewMatrix
from .qm import BoundFit, envelope_fit


class FockSpace:
    """Symmetric occupation basis with total particle number <= max_total."""

    def __init__(self, spatial_dims: int, modes: np.ndarray, max_total: int,
                 dp: float, derivative: str = "central",
                 grid_shape: tuple | None = None):
        modes = np.asarray(modes, dtype=float)
        if modes.ndim != 2 or modes.shape[1] != spatial_dims:
            raise ValueError("modes must have shape (num_modes, spatial_dims)")
        if np.any(np.all(modes == 0.0, axis=1)):
            raise GridDomainError("mode lattice must exclude the zero mode")
        if max_total < 1:
            raise GridDomainError("max_total must be >= 1")
        if derivative not in ("central", "sinc"):
            raise ValueError("derivative must be 'central' or 'sinc'")
        self.spatial_dims = int(spatial_dims)
        self.modes = modes
        self.num_modes = modes.shape[0]
        self.max_total = int(max_total)
        self.dp = float(dp)
        self.derivative = derivative
        self.grid_shape = grid_shape
        self.omega = np.linalg.norm(modes, axis=1)      # massless dispersion

        basis = []
        for k in range(self.max_total + 1):
            basis.extend(itertools.combinations_with_replacement(
                range(self.num_modes), k))
        self.basis = basis
        self.index = {occ: i for i, occ in enumerate(basis)}
        self.dimension = len(basis)
        self.sector_offsets = np.cumsum(
            [0] + [math.comb(self.num_modes + k - 1, k)
                   for k in range(self.max_total + 1)])
        # padded mode-index table: row i lists the modes occupied in basis
        # state i, -1-padded; drives vectorized occupancy functionals
        pad = np.full((self.dimension, self.max_total), -1, dtype=np.int64)
        for i, occ in enumerate(basis):
            pad[i, :len(occ)] = occ
        pad.flags.writeable = False
        self._occupancy_table = pad

    # -- constructors --------------------------------------------------------

    @classmethod
    def build(cls, spatial_dims: int, per_axis: int, dp: float,
              max_total: int, derivative: str = "central") -> "FockSpace":
        """Offset box lattice ``p = dp * (k + 1/2)``, ``k = -n/2 .. n/2 - 1``."""
        if per_axis < 2 or per_axis % 2:
            raise GridDomainError("per_axis must be an even integer >= 2")
        axis = dp * (np.arange(per_axis) - per_axis / 2 + 0.5)
        grids = np.meshgrid(*([axis] * spatial_dims), indexing="ij")
        modes = np.stack([g.reshape(-1) for g in grids], axis=1)
        return cls(spatial_dims, modes, max_total, dp, derivative,
                   grid_shape=(per_axis,) * spatial_dims)

    # -- states ---------------------------------------------------------------

    def state(self, amplitudes) -> "FockState":
        return FockState(self, amplitudes)

    def vacuum(self) -> "FockState":
        amps = np.zeros(self.dimension, dtype=np.complex128)
        amps[0] = 1.0
        return FockState(self, amps)

    def basis_state(self, occ: tuple) -> "FockState":
        amps = np.zeros(self.dimension, dtype=np.complex128)
        amps[self.index[tuple(sorted(occ))]] = 1.0
        return FockState(self, amps)

    def boundary_modes(self) -> np.ndarray:
        """Mask of modes touching the lattice boundary along any axis."""
        if self.grid_shape is None:
            raise GridDomainError("mode lattice has no box structure")
        multi = np.stack(np.unravel_index(np.arange(self.num_modes),
                                          self.grid_shape), axis=1)
        edge = np.zeros(self.num_modes, dtype=bool)
        for ax, n in enumerate(self.grid_shape):
            edge |= (multi[:, ax] == 0) | (multi[:, ax] == n - 1)
        return edge

    def boundary_mass(self, state: "FockState") -> float:
        """Squared-amplitude fraction on basis states touching the boundary."""
        edge = np.concatenate([self.boundary_modes(), [False]])   # -1 pad slot
        touched = edge[self._occupancy_table].any(axis=1)
        total = float(np.sum(np.abs(state.amplitudes) ** 2))
        if total == 0:
            return 0.0
        return float(np.sum(np.abs(state.amplitudes[touched]) ** 2)) / total

    def __repr__(self):
        return (f"FockSpace(n={self.spatial_dims}, modes={self.num_modes}, "
                f"K={self.max_total}, dim={self.dimension})")


class FockState:
    __slots__ = ("space", "amplitudes")

    def __init__(self, space: FockSpace, amplitudes):
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != space.dimension:
            raise ValueError("amplitude length does not match the basis")
        amps = amps.copy()
        amps.flags.writeable = False
        self.space = space
        self.amplitudes = amps

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "FockState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def normalized(self) -> "FockState":
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero state")
        return FockState(self.space, self.amplitudes / n)

    def __add__(self, other):
        return FockState(self.space, self.amplitudes + other.amplitudes)

    def __sub__(self, other):
        return FockState(self.space, self.amplitudes - other.amplitudes)

    def __mul__(self, scalar):
        return FockState(self.space, self.amplitudes * scalar)

    __rmul__ = __mul__


class FockOperator:
    """Sparse operator in the occupation basis."""

    __slots__ = ("space", "matrix", "diagnostics")

    def __init__(self, space: FockSpace, matrix, diagnostics=None):
        self.space = space
        self.matrix = sps.csr_matrix(matrix)
        self.diagnostics = diagnostics or {}

    def apply(self, state: FockState) -> FockState:
        return FockState(self.space, self.matrix @ state.amplitudes)

    __call__ = apply

    def adjoint(self) -> "FockOperator":
        return FockOperator(self.space, self.matrix.conj().T)

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def __add__(self, other):
        return FockOperator(self.space, self.matrix + other.matrix)

    def __sub__(self, other):
        return FockOperator(self.space, self.matrix - other.matrix)

    def __mul__(self, scalar):
        return FockOperator(self.space, self.matrix * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return FockOperator(self.space, self.matrix @ other.matrix)


def make_fock(spatial_dims: int, per_axis: int, dp: float, max_total: int,
              derivative: str = "central") -> FockSpace:
    """Offset-lattice Fock space; rejects zero-mode lattices and K < 1."""
    return FockSpace.build(spatial_dims, per_axis, dp, max_total, derivative)


class LazyFockOperator:
    """``dGamma(h) + diag`` applied sector-by-sector without assembly.

    Valid for truncations K <= 2: the two-particle sector acts on the
    symmetric wavefunction matrix as ``h psi + psi h^T``.  Exposes the same
    ``apply`` protocol as :class:`FockOperator`; use it when the assembled
    matrix would not fit comfortably in memory.
    """

    __slots__ = ("space", "h", "diag", "diagnostics")

    def __init__(self, space: FockSpace, h=None, diag=None, diagnostics=None):
        if space.max_total > 2:
            raise GridDomainError("lazy application supports max_total <= 2")
        self.space = space
        self.h = sps.csr_matrix(h) if h is not None else None
        self.diag = np.asarray(diag, dtype=np.complex128) if diag is not None else None
        self.diagnostics = diagnostics or {}

    def apply(self, state: FockState) -> FockState:
        F = self.space
        amps = state.amplitudes
        out = np.zeros_like(amps)
        if self.h is not None:
            off1 = F.sector_offsets[1]
            m = F.num_modes
            out[off1:off1 + m] = self.h @ amps[off1:off1 + m]
            if F.max_total >= 2:
                off2 = F.sector_offsets[2]
                psi = _unpack_pair_sector(F, amps[off2:])
                hpsi = self.h @ psi
                # psi symmetric, so psi h^T = (h psi)^T
                out[off2:] += _pack_pair_sector(F, hpsi + hpsi.T)
        if self.diag is not None:
            out = out + self.diag * amps
        return FockState(F, out)

    __call__ = apply

    def __add__(self, other):
        if isinstance(other, LazyFockOperator):
            h = None
            if self.h is not None or other.h is not None:
                h = (self.h if self.h is not None else 0) + \
                    (other.h if other.h is not None else 0)
            d = None
            if self.diag is not None or other.diag is not None:
                d = (self.diag if self.diag is not None else 0) + \
                    (other.diag if other.diag is not None else 0)
            return LazyFockOperator(self.space, h, d)
        return NotImplemented

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, scalar):
        return LazyFockOperator(
            self.space,
            None if self.h is None else scalar * self.h,
            None if self.diag is None else scalar * self.diag,
            dict(self.diagnostics))

    __rmul__ = __mul__


def _pair_indices(F: FockSpace):
    return np.triu_indices(F.num_modes)


def _unpack_pair_sector(F: FockSpace, packed: np.ndarray) -> np.ndarray:
    """Occupation amplitudes (i <= j) -> symmetric wavefunction matrix."""
    m = F.num_modes
    iu, ju = _pair_indices(F)
    psi = np.zeros((m, m), dtype=np.complex128)
    vals = packed / np.where(iu == ju, 1.0, math.sqrt(2.0))
    psi[iu, ju] = vals
    psi[ju, iu] = vals
    return psi


def _pack_pair_sector(F: FockSpace, psi: np.ndarray) -> np.ndarray:
    iu, ju = _pair_indices(F)
    return psi[iu, ju] * np.where(iu == ju, 1.0, math.sqrt(2.0))


def diag_weights(F: FockSpace, weights: np.ndarray) -> np.ndarray:
    """Additive occupancy functional of per-mode weights, over the basis."""
    w = np.concatenate([np.asarray(weights, dtype=float), [0.0]])  # -1 pad slot
    return w[F._occupancy_table].sum(axis=1)


# ---------------------------------------------------------------------------
# Ladder operators and second quantization
# ---------------------------------------------------------------------------

def annihilator(F: FockSpace, mode: int) -> FockOperator:
    """``a(p) = a_unit(p) / sqrt(dp**n)`` with the discrete-delta CCR."""
    rows, cols, vals = [], [], []
    for col, occ in enumerate(F.basis):
        if mode in occ:
            mult = occ.count(mode)
            rest = list(occ)
            rest.remove(mode)
            rows.append(F.index[tuple(rest)])
            cols.append(col)
            vals.append(math.sqrt(mult))
        # annihilation maps the top sector down, so no truncation loss here
    mat = sps.coo_matrix((vals, (rows, cols)),
                         shape=(F.dimension, F.dimension))
    scale = F.dp ** (-F.spatial_dims / 2.0)
    return FockOperator(F, scale * mat.tocsr())


def creator(F: FockSpace, mode: int) -> FockOperator:
    return annihilator(F, mode).adjoint()


def _diag_second_quantized(F: FockSpace, weights: np.ndarray) -> FockOperator:
    """dGamma of a diagonal one-particle operator: additive mode weights."""
    return FockOperator(F, sps.diags(diag_weights(F, weights), format="csr"))


def second_quantized(F: FockSpace, h) -> FockOperator:
    """dGamma(h) for a one-particle matrix h over the modes.

    Particle-number preserving, so exact at any truncation.  Specialized
    fast assembly for K <= 2; a generic path covers deeper truncations on
    small spaces.
    """
    h = sps.coo_matrix(h)
    if h.shape != (F.num_modes, F.num_modes):
        raise ValueError("one-particle matrix must be num_modes x num_modes")
    if F.max_total <= 2:
        return _second_quantized_k2(F, h)
    return _second_quantized_generic(F, h)


def _rank2(i, j, m):
    # index of the pair (i <= j) in combinations_with_replacement order
    return i * m - i * (i + 1) // 2 + j


def _second_quantized_k2(F: FockSpace, h) -> FockOperator:
    m = F.num_modes
    off1 = F.sector_offsets[1]
    blocks = [sps.coo_matrix(([], ([], [])), shape=(F.dimension, F.dimension))]
    # one-particle sector: the block is h itself
    blocks.append(sps.coo_matrix(
        (h.data, (off1 + h.row, off1 + h.col)),
        shape=(F.dimension, F.dimension)))
    if F.max_total >= 2:
        off2 = F.sector_offsets[2]
        t = np.arange(m)
        rows, cols, vals = [], [], []
        for r, q, val in zip(h.row, h.col, h.data):
            # action on every two-particle state containing q: replace the
            # q slot by r; the untouched slot t ranges over all modes
            col = off2 + _rank2(np.minimum(q, t), np.maximum(q, t), m)
            row = off2 + _rank2(np.minimum(r, t), np.maximum(r, t), m)
            amp = np.where(t == q, math.sqrt(2.0), 1.0) \
                * np.where(t == r, np.sqrt(2.0), 1.0)
            rows.append(row)
            cols.append(col)
            vals.append(val * amp)
        if rows:
            blocks.append(sps.coo_matrix(
                (np.concatenate(vals),
                 (np.concatenate(rows), np.concatenate(cols))),
                shape=(F.dimension, F.dimension)))
    total = blocks[0]
    for b in blocks[1:]:
        total = total + b
    return FockOperator(F, total.tocsr())


def _second_quantized_generic(F: FockSpace, h) -> FockOperator:
    # plain loop over basis states; used only for deep truncations on
    # small spaces
    rows, cols, vals = [], [], []
    hd = h.toarray()
    for col, occ in enumerate(F.basis):
        for q in set(occ):
            nq = occ.count(q)
            rest = list(occ)
            rest.remove(q)
            for r in np.nonzero(hd[:, q])[0]:
                nr = rest.count(r)
                target = tuple(sorted(rest + [int(r)]))
                rows.append(F.index[target])
                cols.append(col)
                vals.append(hd[r, q] * math.sqrt(nq * (nr + 1)))
    mat = sps.coo_matrix((vals, (rows, cols)),
                         shape=(F.dimension, F.dimension))
    return FockOperator(F, mat.tocsr())


# ---------------------------------------------------------------------------
# The standard operators
# ---------------------------------------------------------------------------

def number_operator(F: FockSpace) -> FockOperator:
    return _diag_second_quantized(F, np.ones(F.num_modes))


def momentum_operator(F: FockSpace, mu: int) -> FockOperator:
    """``P_mu``; ``mu = 0`` is the energy (massless ``omega = |p|``)."""
    if not 0 <= mu <= F.spatial_dims:
        raise ValueError(f"mu must be in 0..{F.spatial_dims}")
    if mu == 0:
        return _diag_second_quantized(F, F.omega)
    return _diag_second_quantized(F, F.modes[:, mu - 1])


def velocity_operator(F: FockSpace, j: int) -> FockOperator:
    """Diagonal mode weights ``p_j / omega_p``; one-particle spectrum in [-1, 1]."""
    if not 0 <= j < F.spatial_dims:
        raise ValueError(f"axis {j} out of range")
    return _diag_second_quantized(F, F.modes[:, j] / F.omega)


def _derivative_matrix(F: FockSpace, axis: int) -> sps.csr_matrix:
    """One-particle d/dp_axis on the box lattice (central or sinc stencil)."""
    if F.grid_shape is None:
        raise GridDomainError("coordinate operator needs a box mode lattice")
    shape = F.grid_shape
    n_ax = shape[axis]
    if F.derivative == "central":
        line = sps.lil_matrix((n_ax, n_ax))
        for a in range(n_ax):
            if 0 < a < n_ax - 1:
                line[a, a + 1] = 0.5 / F.dp
                line[a, a - 1] = -0.5 / F.dp
            elif a == 0:
                line[a, a + 1] = 1.0 / F.dp
                line[a, a] = -1.0 / F.dp
            else:
                line[a, a] = 1.0 / F.dp
                line[a, a - 1] = -1.0 / F.dp
        line = line.tocsr()
    else:
        idx = np.arange(n_ax)
        diff = idx[:, None] - idx[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            dense = np.where(diff != 0,
                             (-1.0) ** diff / (np.where(diff != 0, diff, 1) * F.dp),
                             0.0)
        line = sps.csr_matrix(dense)
    mats = []
    for ax, n in enumerate(shape):
        mats.append(line if ax == axis else sps.identity(n, format="csr"))
    out = mats[0]
    for mat in mats[1:]:
        out = sps.kron(out, mat, format="csr")
    return out


def _coordinate_one_particle(F: FockSpace, j: int):
    """Hermitized one-particle coordinate matrix and its asymmetry defect."""
    D = _derivative_matrix(F, j)
    raw = -1j * D
    herm = 0.5 * (raw + raw.conj().T)
    denom = sps.linalg.norm(raw) or 1.0
    asym = float(sps.linalg.norm(raw - raw.conj().T) / denom)
    return herm, asym


def coordinate_operator(F: FockSpace, j: int, lazy: bool = False):
    """``X_j = -i dGamma(d/dp_j)``, Hermitized; asymmetry is reported.

    The truncated-sinc stencil is exactly antisymmetric, so its Hermitization
    is a no-op; the central stencil's one-sided boundary rows break
    antisymmetry, and the recorded defect quantifies that.  ``lazy=True``
    returns the sector-by-sector applicator instead of the assembled matrix.
    """
    herm, asym = _coordinate_one_particle(F, j)
    diag = {"hermitization_defect": asym}
    if lazy:
        return LazyFockOperator(F, h=herm, diagnostics=diag)
    return FockOperator(F, second_quantized(F, herm).matrix, diagnostics=diag)


def _mode_momentum_weights(F: FockSpace, mu: int) -> np.ndarray:
    return F.omega if mu == 0 else F.modes[:, mu - 1]


def _theta_momentum_weights(F: FockSpace, theta: SkewMatrix, mu: int) -> np.ndarray:
    """Per-mode weights of (theta P)^mu; P_0 pairs with the opposite sign."""
    d = F.spatial_dims
    out = np.zeros(F.num_modes)
    for nu in range(d + 1):
        coeff = theta.entries[mu, nu] * (-1.0 if nu == 0 else 1.0)
        if coeff != 0.0:
            out += coeff * _mode_momentum_weights(F, nu)
    return out


def _deformation_diag(F: FockSpace, theta: SkewMatrix, j: int) -> np.ndarray:
    """Diagonal of ``(theta P)^0 V^j - (theta P)^j N`` over the basis."""
    tp0 = diag_weights(F, _theta_momentum_weights(F, theta, 0))
    tpj = diag_weights(F, _theta_momentum_weights(F, theta, j + 1))
    vj = diag_weights(F, F.modes[:, j] / F.omega)
    n = diag_weights(F, np.ones(F.num_modes))
    return tp0 * vj - tpj * n


def deformed_coordinate(F: FockSpace, theta: SkewMatrix, j: int,
                        lazy: bool = False):
    """``X_theta^j = X^j + (theta P)^0 V^j - (theta P)^j N``."""
    if theta.dim != F.spatial_dims + 1:
        raise ValueError(
            f"theta must be {F.spatial_dims + 1}x{F.spatial_dims + 1} "
            "(temporal slot first)")
    X = coordinate_operator(F, j, lazy=lazy)
    diag = _deformation_diag(F, theta, j)
    if lazy:
        return LazyFockOperator(F, h=X.h, diag=diag,
                                diagnostics=dict(X.diagnostics))
    out = FockOperator(F, X.matrix + sps.diags(diag, format="csr"),
                       diagnostics=dict(X.diagnostics))
    return out


def deformation_part(F: FockSpace, theta: SkewMatrix, j: int,
                     lazy: bool = False):
    """``X_theta^j - X^j``: the diagonal correction alone."""
    diag = _deformation_diag(F, theta, j)
    if lazy:
        return LazyFockOperator(F, diag=diag)
    return FockOperator(F, sps.diags(diag, format="csr"))


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

def moyal_weyl_commutator_check(F: FockSpace, theta: SkewMatrix, i: int,
                                j: int, psi: FockState,
                                light_speed: float = 1.0,
                                boundary_tol: float = 1e-6,
                                lazy: bool = True) -> float:
    """Residual of the deformed-coordinate commutator against its closed form.

    ``[X_theta^i, X_theta^j] = -2i (theta_{0i} V_j - theta_{0j} V_i) N / c
    - 2i theta_{ij} N^2`` on interior-supported states; the residual is
    normalized by ``||psi||``.
    """
    bmass = F.boundary_mass(psi)
    if bmass > boundary_tol:
        raise BoundaryContaminationError(
            f"state has boundary mass {bmass:.2e} > {boundary_tol:.0e}")
    Xi = deformed_coordinate(F, theta, i, lazy=lazy)
    Xj = deformed_coordinate(F, theta, j, lazy=lazy)
    lhs = (Xi.apply(Xj.apply(psi)) - Xj.apply(Xi.apply(psi))).amplitudes
    amps = psi.amplitudes
    vi = diag_weights(F, F.modes[:, i] / F.omega)
    vj = diag_weights(F, F.modes[:, j] / F.omega)
    n = diag_weights(F, np.ones(F.num_modes))
    t0i = theta.entries[0, 1 + i]
    t0j = theta.entries[0, 1 + j]
    tij = theta.entries[1 + i, 1 + j]
    rhs = (-2j * (t0i / light_speed) * (vj * n * amps)
           + 2j * (t0j / light_speed) * (vi * n * amps)
           - 2j * tij * (n * n * amps))
    return float(np.linalg.norm(lhs - rhs) / np.linalg.norm(amps))


def fock_x_bound_fit(F: FockSpace, theta: SkewMatrix, sample_states,
                     b_cap: float = 1e3) -> BoundFit:
    """Envelope fit of ``||(X_theta - X) s|| <= a ||X s|| + b ||s||``.

    Norms are the Euclidean combination over the spatial components.
    """
    defo = [deformation_part(F, theta, j) for j in range(F.spatial_dims)]
    coords = [coordinate_operator(F, j) for j in range(F.spatial_dims)]
    vs, hs, ns = [], [], []
    for s in sample_states:
        vs.append(math.sqrt(sum(d.apply(s).norm() ** 2 for d in defo)))
        hs.append(math.sqrt(sum(x.apply(s).norm() ** 2 for x in coords)))
        ns.append(s.norm())
    return envelope_fit(vs, hs, ns, b_cap)


# ---------------------------------------------------------------------------
# Wave packets
# ---------------------------------------------------------------------------

def one_particle_state(F: FockSpace, coefficients) -> FockState:
    """State ``sum_p c_p a_unit*(p) |0>`` from per-mode coefficients."""
    coeff = np.asarray(coefficients, dtype=np.complex128)
    if coeff.shape != (F.num_modes,):
        raise ValueError("need one coefficient per mode")
    amps = np.zeros(F.dimension, dtype=np.complex128)
    off = F.sector_offsets[1]
    amps[off:off + F.num_modes] = coeff
    return FockState(F, amps)


def gaussian_mode_profile(F: FockSpace, center, sigma: float,
                          position=None) -> np.ndarray:
    center = np.asarray(center, dtype=float)
    prof = np.exp(-np.sum((F.modes - center) ** 2, axis=1) / (4.0 * sigma ** 2))
    if position is not None:
        # X = -i d/dp, so a packet located at x carries the phase e^{+i p.x}
        prof = prof * np.exp(1j * (F.modes @ np.asarray(position, dtype=float)))
    return prof / np.linalg.norm(prof)


def gaussian_packet(F: FockSpace, center, sigma: float,
                    position=None) -> FockState:
    """Normalized one-particle Gaussian wave packet in mode space."""
    return one_particle_state(F, gaussian_mode_profile(F, center, sigma,
                                                       position))


def two_particle_packet(F: FockSpace, center1, sigma1, center2, sigma2) -> FockState:
    """Symmetrized product of two one-particle Gaussian profiles."""
    if F.max_total < 2:
        raise GridDomainError("two-particle states need max_total >= 2")
    f = gaussian_mode_profile(F, center1, sigma1)
    g = gaussian_mode_profile(F, center2, sigma2)
    m = F.num_modes
    off = F.sector_offsets[2]
    amps = np.zeros(F.dimension, dtype=np.complex128)
    for i in range(m):
        fi_g = f[i] * g[i:]
        gi_f = g[i] * f[i:]
        vals = fi_g + gi_f
        vals[0] = math.sqrt(2.0) * f[i] * g[i]
        start = off + _rank2(i, i, m)
        amps[start:start + (m - i)] = vals
    state = FockState(F, amps)
    return state.normalized()
