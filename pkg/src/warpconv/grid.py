"""Discretized position-space Hilbert space with spectral momentum operators.

A ``GridSpace`` is a uniform n-dimensional grid on ``[-L, L)`` per axis with a
half-spacing offset by default, so no node sits at the origin and negative
powers of ``|x|`` are finite at every node.  Momentum acts spectrally through
the FFT.  Conventions used throughout the package:

* ``P_j = i * d/dx_j``, hence ``[X_j, P_k] = -i delta_jk``,
* ``H0 = -(1/2m) Laplacian`` (a positive operator),
* spatial indices are Euclidean (raising/lowering is the identity),
* inner products carry the measure weight ``h**dims``.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np
import scipy.fft as sfft

from .errors import GridDomainError, SpaceMismatchError

_WORKERS = -1  # scipy.fft thread pool: use all cores


class GridSpace:
    """Uniform periodic grid of ``points_per_axis**dims`` nodes.

    Nodes along each axis are ``x_k = -L + k*h + offset`` with
    ``h = 2L / points_per_axis``; the default offset ``h/2`` keeps the origin
    strictly between nodes.
    """

    __slots__ = ("dims", "points_per_axis", "half_width", "offset",
                 "spacing", "_coords", "_ksq", "_kaxes")

    def __init__(self, dims: int, points_per_axis: int, half_width: float,
                 offset: float | None = None):
        if int(dims) != dims or dims < 1:
            raise GridDomainError(f"dims must be a positive integer, got {dims}")
        M = points_per_axis
        if int(M) != M or M < 4 or M % 2 != 0:
            raise GridDomainError(
                f"points_per_axis must be an even integer >= 4, got {M}")
        if not half_width > 0:
            raise GridDomainError(f"half_width must be positive, got {half_width}")
        self.dims = int(dims)
        self.points_per_axis = int(M)
        self.half_width = float(half_width)
        self.spacing = 2.0 * self.half_width / self.points_per_axis
        self.offset = 0.5 * self.spacing if offset is None else float(offset)
        self._coords = None
        self._ksq = None
        self._kaxes = None

    # -- geometry -----------------------------------------------------------

    @property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.dims

    @property
    def size(self) -> int:
        return self.points_per_axis ** self.dims

    def axis_nodes(self) -> np.ndarray:
        """Node coordinates along one axis (all axes are identical)."""
        k = np.arange(self.points_per_axis)
        return -self.half_width + k * self.spacing + self.offset

    def coords(self) -> np.ndarray:
        """Node coordinates, shape ``(dims, size)``, row-major node order."""
        if self._coords is None:
            axes = np.meshgrid(*([self.axis_nodes()] * self.dims), indexing="ij")
            self._coords = np.stack([a.reshape(-1) for a in axes])
            self._coords.flags.writeable = False
        return self._coords

    def radii(self) -> np.ndarray:
        return np.sqrt(np.sum(self.coords() ** 2, axis=0))

    def wavenumber_axis(self) -> np.ndarray:
        """Dual (FFT) wavenumbers along one axis."""
        return 2.0 * np.pi * np.fft.fftfreq(self.points_per_axis, d=self.spacing)

    def wavenumbers(self, axis: int) -> np.ndarray:
        """Wavenumber of every node of the dual lattice, flattened."""
        if self._kaxes is None:
            k1 = self.wavenumber_axis()
            grids = np.meshgrid(*([k1] * self.dims), indexing="ij")
            self._kaxes = [g.reshape(-1) for g in grids]
        return self._kaxes[axis]

    def wavenumber_sq(self) -> np.ndarray:
        if self._ksq is None:
            ksq = np.zeros(self.size)
            for j in range(self.dims):
                ksq += self.wavenumbers(j) ** 2
            ksq.flags.writeable = False
            self._ksq = ksq
        return self._ksq

    # -- inner product ------------------------------------------------------

    @property
    def measure(self) -> float:
        return self.spacing ** self.dims

    def inner_arrays(self, a: np.ndarray, b: np.ndarray) -> complex:
        return self.measure * np.vdot(a, b)

    def state(self, amplitudes: np.ndarray) -> "GridState":
        return GridState(self, amplitudes)

    # -- identity -----------------------------------------------------------

    def compatible(self, other: "GridSpace") -> bool:
        return (self.dims == other.dims
                and self.points_per_axis == other.points_per_axis
                and self.half_width == other.half_width
                and self.offset == other.offset)

    def require_same(self, other: "GridSpace") -> None:
        if not self.compatible(other):
            raise SpaceMismatchError("operands live on different grids")

    def header(self) -> dict:
        """Grid parameters plus the sign conventions baked into the package."""
        return {
            "dims": self.dims,
            "points_per_axis": self.points_per_axis,
            "half_width": self.half_width,
            "offset": self.offset,
            "convention": "P=i*d/dx; [X,P]=-i; H0=-(1/2m)Lap; measure h^n",
        }

    def __repr__(self):
        return (f"GridSpace(dims={self.dims}, M={self.points_per_axis}, "
                f"L={self.half_width}, offset={self.offset:g})")


def make_grid(dims: int, points_per_axis: int, half_width: float,
              offset: float | None = None) -> GridSpace:
    """Construct a grid; rejects odd or tiny point counts and L <= 0."""
    return GridSpace(dims, points_per_axis, half_width, offset)


class GridState:
    """Complex wavefunction sampled on a grid.  Immutable after construction."""

    __slots__ = ("space", "amplitudes")

    def __init__(self, space: GridSpace, amplitudes: np.ndarray):
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != space.size:
            raise SpaceMismatchError(
                f"amplitude length {amps.size} != grid size {space.size}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        amps = amps.copy()
        amps.flags.writeable = False
        self.space = space
        self.amplitudes = amps

    def norm(self) -> float:
        return math.sqrt(self.space.measure) * float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "GridState") -> complex:
        self.space.require_same(other.space)
        return self.space.inner_arrays(self.amplitudes, other.amplitudes)

    def normalized(self) -> "GridState":
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero state")
        return GridState(self.space, self.amplitudes / n)

    def interior_mass(self, fraction: float = 0.5) -> float:
        """Fraction of squared norm inside the box ``|x_j| <= fraction * L``."""
        bound = fraction * self.space.half_width
        inside = np.all(np.abs(self.space.coords()) <= bound, axis=0)
        total = float(np.sum(np.abs(self.amplitudes) ** 2))
        if total == 0:
            return 1.0
        return float(np.sum(np.abs(self.amplitudes[inside]) ** 2)) / total

    def grid_view(self) -> np.ndarray:
        return self.amplitudes.reshape(self.space.shape)

    # arithmetic yields new states
    def __add__(self, other):
        self.space.require_same(other.space)
        return GridState(self.space, self.amplitudes + other.amplitudes)

    def __sub__(self, other):
        self.space.require_same(other.space)
        return GridState(self.space, self.amplitudes - other.amplitudes)

    def __mul__(self, scalar):
        return GridState(self.space, self.amplitudes * scalar)

    __rmul__ = __mul__

    def __repr__(self):
        return f"GridState({self.space!r}, norm={self.norm():.6g})"


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------

class GridOperator:
    """Linear operator on grid states.

    Subclasses implement ``apply_array`` on stacked amplitude arrays of shape
    ``(..., size)`` so deformation engines can batch applications.  All
    operators are immutable; applying one is a pure function.
    """

    def __init__(self, space: GridSpace):
        self.space = space

    # -- core ---------------------------------------------------------------

    def apply_array(self, amps: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def apply(self, state: GridState) -> GridState:
        self.space.require_same(state.space)
        return GridState(self.space, self.apply_array(state.amplitudes))

    def __call__(self, state: GridState) -> GridState:
        return self.apply(state)

    def adjoint(self) -> "GridOperator":
        raise NotImplementedError

    @property
    def is_position_diagonal(self) -> bool:
        return False

    @property
    def conj_parity(self) -> int | None:
        """s with ``A conj(f) = s * conj(A f)`` if such s in {+1,-1} exists."""
        return None

    # -- algebra ------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, GridOperator):
            return NotImplemented
        self.space.require_same(other.space)
        return SumOperator(self.space, [self, other])

    def __sub__(self, other):
        if not isinstance(other, GridOperator):
            return NotImplemented
        return SumOperator(self.space, [self, ScaledOperator(-1.0, other)])

    def __mul__(self, scalar):
        if isinstance(scalar, (int, float, complex)):
            return ScaledOperator(scalar, self)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, GridOperator):
            return NotImplemented
        self.space.require_same(other.space)
        return ProductOperator(self.space, [self, other])


class IdentityOperator(GridOperator):
    def apply_array(self, amps):
        return np.array(amps, copy=True)

    def adjoint(self):
        return self

    @property
    def is_position_diagonal(self):
        return True

    @property
    def conj_parity(self):
        return +1


class PositionMultiplier(GridOperator):
    """Pointwise multiplication by a function of the node coordinates."""

    def __init__(self, space, values):
        super().__init__(space)
        v = np.asarray(values)
        if v.size != space.size:
            raise SpaceMismatchError("multiplier length does not match grid")
        self.values = v.reshape(-1)

    def apply_array(self, amps):
        return amps * self.values

    def adjoint(self):
        return PositionMultiplier(self.space, np.conj(self.values))

    @property
    def is_position_diagonal(self):
        return True

    @property
    def conj_parity(self):
        if np.isrealobj(self.values) or not np.any(self.values.imag):
            return +1
        if not np.any(self.values.real):
            return -1
        return None


class MomentumMultiplier(GridOperator):
    """Fourier multiplier: diagonal in the dual (momentum) lattice."""

    def __init__(self, space, symbol):
        super().__init__(space)
        s = np.asarray(symbol)
        if s.size != space.size:
            raise SpaceMismatchError("symbol length does not match grid")
        self.symbol = s.reshape(-1)

    def apply_array(self, amps):
        d = self.space.dims
        shape = amps.shape[:-1] + self.space.shape
        axes = tuple(range(len(amps.shape) - 1, len(amps.shape) - 1 + d))
        spec = sfft.fftn(amps.reshape(shape), axes=axes, workers=_WORKERS)
        spec *= self.symbol.reshape(self.space.shape)
        out = sfft.ifftn(spec, axes=axes, workers=_WORKERS)
        return out.reshape(amps.shape)

    def adjoint(self):
        return MomentumMultiplier(self.space, np.conj(self.symbol))

    @property
    def conj_parity(self):
        flipped = _reverse_wavenumbers(self.space, self.symbol)
        if np.array_equal(np.conj(flipped), self.symbol):
            return +1
        if np.array_equal(np.conj(flipped), -self.symbol):
            return -1
        return None


def _reverse_wavenumbers(space, flat):
    """Values of a dual-lattice function at -k (FFT index reversal)."""
    M = space.points_per_axis
    idx = (-np.arange(M)) % M
    arr = flat.reshape(space.shape)
    for ax in range(space.dims):
        arr = np.take(arr, idx, axis=ax)
    return arr.reshape(-1)


class ScaledOperator(GridOperator):
    def __init__(self, coeff, op):
        super().__init__(op.space)
        self.coeff = complex(coeff)
        self.op = op

    def apply_array(self, amps):
        return self.coeff * self.op.apply_array(amps)

    def adjoint(self):
        return ScaledOperator(np.conj(self.coeff), self.op.adjoint())

    @property
    def is_position_diagonal(self):
        return self.op.is_position_diagonal

    @property
    def conj_parity(self):
        p = self.op.conj_parity
        if p is None:
            return None
        if self.coeff.imag == 0:
            return p
        if self.coeff.real == 0:
            return -p
        return None


class SumOperator(GridOperator):
    def __init__(self, space, ops):
        super().__init__(space)
        terms = []
        for op in ops:
            space.require_same(op.space)
            if isinstance(op, SumOperator):
                terms.extend(op.ops)
            else:
                terms.append(op)
        self.ops = tuple(terms)

    def apply_array(self, amps):
        out = self.ops[0].apply_array(amps)
        for op in self.ops[1:]:
            out = out + op.apply_array(amps)
        return out

    def adjoint(self):
        return SumOperator(self.space, [op.adjoint() for op in self.ops])

    @property
    def is_position_diagonal(self):
        return all(op.is_position_diagonal for op in self.ops)

    @property
    def conj_parity(self):
        ps = {op.conj_parity for op in self.ops}
        if len(ps) == 1:
            return ps.pop()
        return None


class ProductOperator(GridOperator):
    """Ordered composition; ``ops[-1]`` acts first."""

    def __init__(self, space, ops):
        super().__init__(space)
        terms = []
        for op in ops:
            space.require_same(op.space)
            if isinstance(op, ProductOperator):
                terms.extend(op.ops)
            else:
                terms.append(op)
        self.ops = tuple(terms)

    def apply_array(self, amps):
        out = amps
        for op in reversed(self.ops):
            out = op.apply_array(out)
        return out

    def adjoint(self):
        return ProductOperator(self.space, [op.adjoint() for op in reversed(self.ops)])

    @property
    def is_position_diagonal(self):
        return all(op.is_position_diagonal for op in self.ops)

    @property
    def conj_parity(self):
        prod = 1
        for op in self.ops:
            p = op.conj_parity
            if p is None:
                return None
            prod *= p
        return prod


class CallableOperator(GridOperator):
    """Black-box operator defined by an amplitude-array function."""

    def __init__(self, space, fn: Callable[[np.ndarray], np.ndarray],
                 adjoint_fn: Callable[[np.ndarray], np.ndarray] | None = None,
                 parity: int | None = None,
                 position_diagonal: bool = False):
        super().__init__(space)
        self._fn = fn
        self._adjoint_fn = adjoint_fn
        self._parity = parity
        self._posdiag = position_diagonal

    def apply_array(self, amps):
        if amps.ndim == 1:
            return self._fn(amps)
        flat = amps.reshape(-1, amps.shape[-1])
        return np.stack([self._fn(row) for row in flat]).reshape(amps.shape)

    def adjoint(self):
        if self._adjoint_fn is None:
            raise NotImplementedError("no adjoint given for this operator")
        return CallableOperator(self.space, self._adjoint_fn, self._fn,
                                self._parity, self._posdiag)

    @property
    def is_position_diagonal(self):
        return self._posdiag

    @property
    def conj_parity(self):
        return self._parity


# ---------------------------------------------------------------------------
# The standard operators
# ---------------------------------------------------------------------------

def position_operator(space: GridSpace, axis: int) -> PositionMultiplier:
    """Multiplication by the coordinate ``x_axis``."""
    return PositionMultiplier(space, space.coords()[axis])


def momentum_operator(space: GridSpace, axis: int) -> MomentumMultiplier:
    """Spectral momentum ``P_axis = i d/dx_axis`` (Fourier symbol ``-k``)."""
    return MomentumMultiplier(space, -space.wavenumbers(axis))


def h0_operator(space: GridSpace, mass: float = 0.5) -> MomentumMultiplier:
    """Free Hamiltonian ``-(1/2m) Laplacian`` (Fourier symbol ``|k|^2/2m``)."""
    if not mass > 0:
        raise ValueError(f"mass must be positive, got {mass}")
    return MomentumMultiplier(space, space.wavenumber_sq() / (2.0 * mass))


def apply_position(space: GridSpace, axis: int, state: GridState) -> GridState:
    return position_operator(space, axis).apply(state)


def apply_momentum(space: GridSpace, axis: int, state: GridState) -> GridState:
    return momentum_operator(space, axis).apply(state)


def apply_h0(space: GridSpace, mass: float, state: GridState) -> GridState:
    return h0_operator(space, mass).apply(state)


def commutator(A: GridOperator, B: GridOperator) -> GridOperator:
    return SumOperator(A.space, [ProductOperator(A.space, [A, B]),
                                 ScaledOperator(-1.0, ProductOperator(A.space, [B, A]))])


def anticommutator(A: GridOperator, B: GridOperator) -> GridOperator:
    return SumOperator(A.space, [ProductOperator(A.space, [A, B]),
                                 ProductOperator(A.space, [B, A])])


# ---------------------------------------------------------------------------
# Deformation generator and its unitaries
# ---------------------------------------------------------------------------

class QGenerator:
    """Vector-valued multiplication generator ``Q_j(x) = x_j / |x|**exponent``.

    Position-diagonal by construction; its joint spectral measure is diagonal
    in the node basis, which is what the exact deformation evaluator uses.
    """

    def __init__(self, space: GridSpace, exponent: float):
        if exponent > 0:
            rmin = float(np.min(space.radii()))
            if rmin == 0.0:
                raise GridDomainError(
                    "grid has a node at the origin; x/|x|^n is singular there "
                    "(use the default half-spacing offset)")
        self.space = space
        self.exponent = float(exponent)
        r = space.radii()
        scale = r ** (-exponent) if exponent != 0 else np.ones_like(r)
        vals = space.coords() * scale
        vals.flags.writeable = False
        self.values = vals  # (dims, size)

    def component(self, axis: int) -> PositionMultiplier:
        return PositionMultiplier(self.space, self.values[axis])

    @property
    def max_norm(self) -> float:
        """max over nodes of the Euclidean length of Q(x)."""
        return float(np.sqrt(np.max(np.sum(self.values ** 2, axis=0))))

    def __repr__(self):
        return f"QGenerator(exponent={self.exponent}, {self.space!r})"


def q_generator(space: GridSpace, exponent_n: float) -> QGenerator:
    return QGenerator(space, exponent_n)


def unitary_V(space: GridSpace, y: Sequence[float], exponent_n: float,
              state: GridState) -> GridState:
    """Apply the phase ``exp(i y . Q(x))`` pointwise; norm preserving."""
    y = np.asarray(y, dtype=float)
    if y.shape != (space.dims,):
        raise SpaceMismatchError(
            f"y must have length dims={space.dims}, got shape {y.shape}")
    q = q_generator(space, exponent_n)
    phase = np.exp(1j * (y @ q.values))
    return GridState(space, phase * state.amplitudes)


# ---------------------------------------------------------------------------
# Dense-domain vectors
# ---------------------------------------------------------------------------

def domain_vector(space: GridSpace, *exponents: int, normalize: bool = True) -> GridState:
    """Hermite-Gaussian-type vector ``x1^k1 ... xd^kd exp(-|x|^2/2)``.

    One integer exponent per axis.  These span the invariant dense domain on
    which all deformation identities are tested; any dimension is accepted
    (the one-dimensional case serves as a smoke-test analogue).
    """
    if len(exponents) != space.dims:
        raise ValueError(
            f"expected {space.dims} exponents, got {len(exponents)}")
    for k in exponents:
        if int(k) != k or k < 0:
            raise ValueError(f"exponents must be nonnegative integers, got {k}")
    coords = space.coords()
    amps = np.exp(-0.5 * np.sum(coords ** 2, axis=0)).astype(np.complex128)
    for j, k in enumerate(exponents):
        if k:
            amps = amps * coords[j] ** int(k)
    state = GridState(space, amps)
    return state.normalized() if normalize else state


def gaussian_moment_norm(exponents: Sequence[int]) -> float:
    """Exact L2 norm of the (unnormalized) domain vector.

    ``norm^2 = prod_j integral x^(2 k_j) exp(-x^2) dx = prod_j Gamma(k_j + 1/2)``.
    """
    out = 1.0
    for k in exponents:
        out *= math.gamma(k + 0.5)
    return math.sqrt(out)


# ---------------------------------------------------------------------------
# Skew-symmetric deformation matrices
# ---------------------------------------------------------------------------

class SkewMatrix:
    """Real skew-symmetric matrix driving a deformation.

    Entries are validated exactly: ``entries[i,j] == -entries[j,i]`` and a
    zero diagonal.  Use :meth:`from_axial` for the three-dimensional
    ``B_ij = eps_ijk B_k`` form.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        e = np.asarray(entries, dtype=float)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError(f"skew matrix must be square, got shape {e.shape}")
        if not np.array_equal(e.T, -e):
            raise ValueError("matrix is not exactly skew-symmetric")
        e = e.copy()
        e.flags.writeable = False
        self.entries = e

    @classmethod
    def zero(cls, dim: int) -> "SkewMatrix":
        return cls(np.zeros((dim, dim)))

    @classmethod
    def from_axial(cls, vec) -> "SkewMatrix":
        """3x3 matrix with ``B_ij = eps_ijk B_k`` from an axial vector."""
        b1, b2, b3 = (float(v) for v in vec)
        return cls(np.array([[0.0, b3, -b2],
                             [-b3, 0.0, b1],
                             [b2, -b1, 0.0]]))

    @classmethod
    def from_block(cls, b: float) -> "SkewMatrix":
        """2x2 matrix ``[[0, b], [-b, 0]]``."""
        b = float(b)
        return cls(np.array([[0.0, b], [-b, 0.0]]))

    @classmethod
    def random(cls, dim: int, scale: float, seed: int) -> "SkewMatrix":
        """Seeded random skew matrix with spectral norm ``scale``."""
        rng = np.random.default_rng(seed)
        r = rng.standard_normal((dim, dim))
        a = 0.5 * (r - r.T)
        nrm = np.linalg.norm(a, 2)
        if nrm > 0:
            a = a * (scale / nrm)
        return cls(0.5 * (a - a.T))  # re-skew exactly after scaling

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def two_norm(self) -> float:
        return float(np.linalg.norm(self.entries, 2))

    @property
    def is_zero(self) -> bool:
        return not np.any(self.entries)

    def apply(self, vectors: np.ndarray) -> np.ndarray:
        """Matrix action on stacked vectors of shape ``(dim, ...)``."""
        return np.tensordot(self.entries, vectors, axes=([1], [0]))

    def __repr__(self):
        return f"SkewMatrix({self.entries.tolist()})"
