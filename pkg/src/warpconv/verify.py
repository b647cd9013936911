"""Decay sampling, symbol-order fits, and self-adjointness diagnostics.

The central object is the map ``x -> alpha_{theta x}(A) phi``: its sampled
norms and parameter-space derivatives are fitted against the power law
``C_gamma (1 + |x|)^(m - rho |gamma|)``.  A fitted order below ``1 - n``
classifies the regularized integral as absolutely convergent; everything
else is handled distributionally by the cutoff, which is the regime the
deformation engines operate in.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSamplesError, InfeasibleBoundError
from .grid import GridOperator, GridState, QGenerator, SkewMatrix
from .qm import BoundFit


# ---------------------------------------------------------------------------
# Phase-function check
# ---------------------------------------------------------------------------

@dataclass
class PhaseCheck:
    """Sampled verification of the three phase-function conditions."""

    homogeneity_residual: float
    imaginary_part_min: float
    differential_min: float
    n_samples: int

    @property
    def passed(self) -> bool:
        return (self.homogeneity_residual <= 1e-12
                and self.imaginary_part_min >= 0.0
                and self.differential_min > 0.0)

    def to_json_dict(self) -> dict:
        return {"homogeneity_residual": self.homogeneity_residual,
                "imaginary_part_min": self.imaginary_part_min,
                "differential_min": self.differential_min,
                "n_samples": self.n_samples, "passed": self.passed}


def phase_check(dims: int = 2, n_samples: int = 10_000,
                seed: int = 20260808) -> PhaseCheck:
    """Check ``phi(x, y) = -x.y`` on random cone samples.

    Degree-one homogeneity in the oscillation variable is measured as a
    relative rounding residual; the imaginary part vanishes identically and
    the differential ``(-y, -x)`` is nonzero away from the origin.
    """
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n_samples, dims))
    y = rng.standard_normal((n_samples, dims))
    # keep samples in the cone: (x, y) with y != 0
    bad = np.linalg.norm(y, axis=1) < 1e-12
    y[bad] += 1.0
    t = rng.uniform(0.1, 10.0, size=n_samples)

    def phi(a, b):
        return -np.sum(a * b, axis=1)

    lhs = phi(x, t[:, None] * y)
    rhs = t * phi(x, y)
    # rounding is relative to the size of the dot-product inputs, not of the
    # (possibly cancelling) value
    scale = np.linalg.norm(x, axis=1) * np.linalg.norm(t[:, None] * y,
                                                       axis=1) + 1e-300
    hom = float(np.max(np.abs(lhs - rhs) / scale))
    grad_norm = np.sqrt(np.sum(y * y, axis=1) + np.sum(x * x, axis=1))
    return PhaseCheck(
        homogeneity_residual=hom,
        imaginary_part_min=0.0,          # phi is real-valued by construction
        differential_min=float(np.min(grad_norm)),
        n_samples=n_samples,
    )


# ---------------------------------------------------------------------------
# Decay sampling of the conjugated operator
# ---------------------------------------------------------------------------

def _conjugated_state(A: GridOperator, Q: QGenerator, theta: SkewMatrix,
                      x: np.ndarray, phi: GridState) -> np.ndarray:
    y = theta.entries @ x
    ph = np.exp(1j * (y @ Q.values))
    return ph * A.apply_array(np.conj(ph) * phi.amplitudes)


def sample_decay(A: GridOperator, Q: QGenerator, theta: SkewMatrix,
                 phi: GridState, gamma: tuple, radii,
                 direction=None, step_fraction: float = 0.25) -> list:
    """Norms of the gamma-derivative of ``x -> alpha_{theta x}(A) phi``.

    ``gamma`` is a multi-index over the deformation parameter; derivatives
    use central differences with steps tied to the local radius spacing.
    Returns ``[(|x|, norm), ...]`` for log-spaced radii.
    """
    space = phi.space
    d = space.dims
    gamma = tuple(int(g) for g in gamma)
    if len(gamma) != d or any(g < 0 for g in gamma):
        raise ValueError(f"gamma must be {d} nonnegative integers")
    if sum(gamma) > 2:
        raise ValueError("derivatives beyond total order 2 are not supported")
    radii = np.asarray(sorted(float(r) for r in radii))
    if direction is None:
        direction = np.ones(d) / math.sqrt(d)
    else:
        direction = np.asarray(direction, dtype=float)
        direction = direction / np.linalg.norm(direction)

    gaps = np.diff(radii, prepend=radii[0] * 0.5)
    meas = math.sqrt(space.measure)

    def norm_at(x):
        return meas * float(np.linalg.norm(
            _conjugated_state(A, Q, theta, x, phi)))

    out = []
    axes = [ax for ax, g in enumerate(gamma) for _ in range(g)]
    for r, gap in zip(radii, gaps):
        x0 = r * direction
        h = max(step_fraction * gap, 1e-6 * max(r, 1.0))
        if not axes:
            out.append((r, norm_at(x0)))
            continue
        if len(axes) == 1:
            e = np.zeros(d)
            e[axes[0]] = h
            val = (_conjugated_state(A, Q, theta, x0 + e, phi)
                   - _conjugated_state(A, Q, theta, x0 - e, phi)) / (2 * h)
        elif axes[0] == axes[1]:
            e = np.zeros(d)
            e[axes[0]] = h
            val = (_conjugated_state(A, Q, theta, x0 + e, phi)
                   - 2.0 * _conjugated_state(A, Q, theta, x0, phi)
                   + _conjugated_state(A, Q, theta, x0 - e, phi)) / h ** 2
        else:
            e1 = np.zeros(d)
            e2 = np.zeros(d)
            e1[axes[0]] = h
            e2[axes[1]] = h
            val = (_conjugated_state(A, Q, theta, x0 + e1 + e2, phi)
                   - _conjugated_state(A, Q, theta, x0 + e1 - e2, phi)
                   - _conjugated_state(A, Q, theta, x0 - e1 + e2, phi)
                   + _conjugated_state(A, Q, theta, x0 - e1 - e2, phi)) / (4 * h * h)
        out.append((r, meas * float(np.linalg.norm(val))))
    return out


def default_radii(r_max: float = 30.0, count: int = 12) -> np.ndarray:
    return np.geomspace(0.1, r_max, count)


def gamma_indices(dims: int, gamma_max: int = 2) -> list:
    """All multi-indices with total order <= gamma_max, graded order."""
    out = []
    for total in range(gamma_max + 1):
        for combo in itertools.combinations_with_replacement(range(dims), total):
            g = [0] * dims
            for ax in combo:
                g[ax] += 1
            out.append(tuple(g))
    return out


# ---------------------------------------------------------------------------
# Symbol-order fitting
# ---------------------------------------------------------------------------

@dataclass
class SymbolFit:
    """Fitted symbol order/type with per-multi-index constants."""

    m: float
    rho: float
    constants: dict
    residual: float
    gamma_max: int
    monotone: bool = True
    slopes: dict = field(default_factory=dict)

    def bound(self, gamma: tuple, r: float) -> float:
        return self.constants[tuple(gamma)] * (1.0 + r) ** (
            self.m - self.rho * sum(gamma))

    def classify(self, ambient_dim: int) -> str:
        """Absolutely convergent needs order below 1 - n; else distributional."""
        return "convergent" if self.m < -ambient_dim + 1 else "distributional"

    def to_json_dict(self) -> dict:
        return {
            "m": self.m, "rho": self.rho, "residual": self.residual,
            "gamma_max": self.gamma_max, "monotone": self.monotone,
            "constants": {str(list(k)): float(v)
                          for k, v in self.constants.items()},
            "slopes": {str(list(k)): float(v) for k, v in self.slopes.items()},
        }


def fit_symbol_order(samples_by_gamma: dict, rho_clamp=(1e-8, 1.0),
                     slack: float = 1.05) -> SymbolFit:
    """Least-squares power-law fit per multi-index.

    The order comes from the zeroth slope, the type from the mean slope
    decrement per derivative order (clamped into ``(0, 1]``), and each
    constant is inflated until the bound covers every sample of its series.
    Non-monotone series are flagged but still fitted.
    """
    if tuple(0 for _ in next(iter(samples_by_gamma))) not in {
            tuple(k) for k in samples_by_gamma}:
        raise ValueError("need at least the zeroth-order series")
    slopes, intercepts, residuals = {}, {}, []
    monotone = True
    for gamma, series in samples_by_gamma.items():
        gamma = tuple(gamma)
        rs = np.array([r for r, _ in series], dtype=float)
        vals = np.array([v for _, v in series], dtype=float)
        if rs.size < 8:
            raise ValueError(
                f"series for gamma={gamma} needs >= 8 radii, got {rs.size}")
        if np.any(vals <= 0):
            vals = np.maximum(vals, 1e-300)
        lx = np.log1p(rs)
        ly = np.log(vals)
        slope, intercept = np.polyfit(lx, ly, 1)
        pred = slope * lx + intercept
        residuals.append(float(np.sqrt(np.mean((ly - pred) ** 2))))
        slopes[gamma] = float(slope)
        intercepts[gamma] = float(intercept)
        if np.any(np.diff(vals) * np.sign(slope) < -1e-12 * np.abs(vals[:-1])):
            monotone = False
    m = slopes[tuple(0 for _ in next(iter(slopes)))]
    decs = [(m - s) / sum(g) for g, s in slopes.items() if sum(g) > 0]
    rho = float(np.clip(np.mean(decs), *rho_clamp)) if decs else rho_clamp[1]
    gamma_max = max(sum(g) for g in slopes)
    constants = {}
    for gamma, series in samples_by_gamma.items():
        gamma = tuple(gamma)
        base = math.exp(intercepts[gamma])
        expo = m - rho * sum(gamma)
        need = max(v / ((1.0 + r) ** expo) for r, v in series)
        constants[gamma] = max(base, need) * (1.0 + 1e-12)
    fit = SymbolFit(m=float(m), rho=rho, constants=constants,
                    residual=float(max(residuals)), gamma_max=gamma_max,
                    monotone=monotone, slopes=slopes)
    for gamma, series in samples_by_gamma.items():
        assert all(v <= slack * fit.bound(tuple(gamma), r) for r, v in series)
    return fit


# ---------------------------------------------------------------------------
# Hermiticity, restricted spectra, Wust inequality
# ---------------------------------------------------------------------------

def hermiticity_residual(op, sample_pairs) -> float:
    """max over pairs of ``|<s, Op t> - <Op s, t>| / (||s|| ||t||)``."""
    if len(sample_pairs) < 1:
        raise ValueError("need at least one sample pair")
    worst = 0.0
    for s, t in sample_pairs:
        lhs = s.inner(op.apply(t))
        rhs = op.apply(s).inner(t)
        denom = max(s.norm() * t.norm(), 1e-300)
        worst = max(worst, abs(lhs - rhs) / denom)
    return worst


def restricted_eigenvalues(op, states) -> np.ndarray:
    """Eigenvalues of the operator compressed to the span of the states.

    The span is orthonormalized through its Gram matrix (rank-trimmed), so
    nearly dependent probe families are handled stably.
    """
    vecs = [s.amplitudes for s in states]
    gram = np.empty((len(states), len(states)), dtype=np.complex128)
    for a, sa in enumerate(states):
        for b, sb in enumerate(states):
            gram[a, b] = sa.inner(sb)
    evals, evecs = np.linalg.eigh(gram)
    keep = evals > 1e-12 * float(evals.max())
    white = evecs[:, keep] / np.sqrt(evals[keep])
    images = [op.apply(s) for s in states]
    mixed = np.empty((len(states), len(states)), dtype=np.complex128)
    for a, sa in enumerate(states):
        for b in range(len(states)):
            mixed[a, b] = sa.inner(images[b])
    compressed = white.conj().T @ mixed @ white
    return np.linalg.eigvals(compressed)


def eigenvalue_reality(op, states) -> float:
    """Largest imaginary part over the compressed spectrum."""
    return float(np.max(np.abs(restricted_eigenvalues(op, states).imag)))


def wust_inequality_check(A_apply, A_theta_apply, sample_states,
                          b_cap: float, hermiticity_pairs=None,
                          hermiticity_tol: float = 1e-8) -> BoundFit:
    """Fit ``||(A_theta - A) s|| <= ||A s|| + b ||s||`` with the slope fixed.

    Returns a :class:`BoundFit` with ``a = 1``; infeasibility within the cap
    raises a structured error naming the violating sample.
    """
    if hermiticity_pairs:
        res = hermiticity_residual(_CallableOp(A_apply), hermiticity_pairs)
        if res > hermiticity_tol:
            raise ValueError(
                f"reference operator is not symmetric enough: {res:.2e}")
    rows = []
    needed = []
    for s in sample_states:
        a_s = A_apply(s)
        diff = A_theta_apply(s) - a_s
        v, h, n = diff.norm(), a_s.norm(), s.norm()
        rows.append((v, h, n))
        needed.append(max(0.0, (v - h) / n) if n > 0 else 0.0)
    if not rows:
        raise DegenerateSamplesError("empty sample set")
    b = max(needed)
    if b > b_cap:
        idx = int(np.argmax(needed))
        raise InfeasibleBoundError(
            f"sample {idx} needs b = {b:.3g} > cap {b_cap:.3g}", idx, b)
    return BoundFit(a=1.0, b=float(b), samples=rows, feasible=True,
                    b_cap=float(b_cap))


class _CallableOp:
    def __init__(self, fn):
        self._fn = fn

    def apply(self, state):
        return self._fn(state)


def dossier(name: str, hermiticity: float, max_imag_eigenvalue: float,
            bound_fit: BoundFit | None = None,
            symbol_fit: SymbolFit | None = None,
            extras: dict | None = None) -> dict:
    """Bundle the self-adjointness diagnostics for one operator."""
    out = {
        "operator": name,
        "hermiticity_residual": float(hermiticity),
        "max_imag_eigenvalue": float(max_imag_eigenvalue),
    }
    if bound_fit is not None:
        out["bound_fit"] = bound_fit.to_json_dict()
    if symbol_fit is not None:
        out["symbol_fit"] = symbol_fit.to_json_dict()
        out["integral_class"] = symbol_fit.classify(2)
    if extras:
        out.update(extras)
    return out
