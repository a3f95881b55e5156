"""Fourier analysis on F_p^d.

Normalization is fixed once and for all here: the forward transform sums
against e(-x.xi) with counting measure on space, and the inverse averages
against e(+x.xi) with the normalized measure p^{-d} on the dual.  Under
this pairing Plancherel reads

    sum_x |f(x)|^2  =  p^{-d} sum_xi |fhat(xi)|^2.

Every norm call site names its measure explicitly; there are no defaults
to misremember.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import FFunction, PrimeField, char_vector, coordinate_array
from .errors import NonComplementary
from .qforms import Subspace, det_mod, inv_mod

# ---------------------------------------------------------------------------
# transforms


def _axis_dft(f: FFunction, sign: int) -> np.ndarray:
    """Apply the length-p character matrix along every axis of f.grid.

    sign -1 gives the forward kernel e(-ab), +1 the inverse kernel e(ab).
    Cost is d passes of p-point transforms: d * p^{d+1} multiplies.
    """
    p = f.field.p
    vals = char_vector(f.field)
    ab = np.outer(np.arange(p), np.arange(p)) % p
    E = vals[(sign * ab) % p]
    g = f.grid.astype(np.complex128)
    for axis in range(f.dim):
        g = np.moveaxis(np.tensordot(E, g, axes=([1], [axis])), 0, axis)
    return g


def fourier_transform(f: FFunction) -> FFunction:
    """fhat(xi) = sum_x f(x) e(-x.xi)."""
    return FFunction.from_grid(f.field, _axis_dft(f, -1))


def inverse_transform(g: FFunction) -> FFunction:
    """f(x) = p^{-d} sum_xi g(xi) e(x.xi); inverts fourier_transform."""
    scale = float(g.field.p) ** (-g.dim)
    return FFunction.from_grid(g.field, _axis_dft(g, +1) * scale)


def naive_fourier_transform(f: FFunction) -> FFunction:
    """The defining double sum, O(p^{2d}).  Test oracle for the axis-wise
    transform; only sensible at small sizes."""
    p = f.field.p
    X = coordinate_array(p, f.dim)
    vals = char_vector(f.field)
    phases = vals[(-X @ X.T) % p]  # phases[xi_idx, x_idx] = e(-x.xi)
    return FFunction(f.field, f.dim, phases @ f.data)


def convolve(f: FFunction, g: FFunction) -> FFunction:
    """Counting-measure convolution (f*g)(x) = sum_y f(y) g(x-y), computed
    on the Fourier side where it is a pointwise product."""
    fh = fourier_transform(f)
    gh = fourier_transform(g)
    return inverse_transform(FFunction(f.field, f.dim, fh.data * gh.data))


def naive_convolve(f: FFunction, g: FFunction) -> FFunction:
    """The defining double sum; O(p^{2d}) memory, test oracle only."""
    p = f.field.p
    X = coordinate_array(p, f.dim)
    powers = p ** np.arange(f.dim, dtype=np.int64)
    diff_idx = ((X[:, None, :] - X[None, :, :]) % p) @ powers  # [x, y] -> x - y
    return FFunction(f.field, f.dim, g.data[diff_idx] @ f.data)


# ---------------------------------------------------------------------------
# mixed norms over complementary decompositions


@dataclass(frozen=True)
class MixedNormSpec:
    """Iterated-norm recipe: inner exponent over W, outer over V (and over
    the last coordinate too when include_t is set)."""

    V: Subspace
    W: Subspace
    outer_exp: float
    inner_exp: float
    include_t: bool = True

    def __post_init__(self):
        if self.outer_exp < 1 or self.inner_exp < 1:
            raise ValueError("exponents must be >= 1")


def _iterated_norm(mat: np.ndarray, q: float, p_exp: float, norm_in: float, norm_out: float) -> float:
    """(sum_outer (sum_inner |.|^p / norm_in)^{q/p} / norm_out)^{1/q} with
    max() at infinite exponents."""
    mags = np.abs(mat)
    if math.isinf(p_exp):
        inner = mags.max(axis=1)
    else:
        inner = (np.sum(mags**p_exp, axis=1) / norm_in) ** (1.0 / p_exp)
    if math.isinf(q):
        return float(inner.max())
    return float((np.sum(inner**q) / norm_out) ** (1.0 / q))


def mixed_norm(F: FFunction, spec: MixedNormSpec, measure: str = "counting") -> float:
    """The iterated norm with inner sum over W-cosets.

    Every spatial point must split uniquely as w + v with w in W, v in V;
    when include_t is set the final coordinate of F's domain rides along
    with the outer sum.  measure 'normalized' divides the inner sum by |W|
    and the outer sum by the number of outer fibers.
    """
    if measure not in ("counting", "normalized"):
        raise ValueError(f"unknown measure {measure!r}")
    p = F.field.p
    spatial = F.dim - 1 if spec.include_t else F.dim
    kV, kW = spec.V.dim, spec.W.dim
    if kV + kW != spatial:
        raise NonComplementary(
            f"dim V + dim W = {kV + kW}, expected {spatial}"
        )
    B = np.concatenate([spec.V.basis, spec.W.basis])
    if det_mod(B, p) == 0:
        raise NonComplementary("V and W overlap")
    Binv = inv_mod(B, p)

    X = coordinate_array(p, F.dim)
    spatial_pts = X[:, :spatial]
    C = spatial_pts @ Binv % p  # row x: coefficients (c_V, c_W) with x = c B
    powers_V = p ** np.arange(kV, dtype=np.int64)
    powers_W = p ** np.arange(kW, dtype=np.int64)
    inner_idx = C[:, kV:] @ powers_W
    outer_idx = C[:, :kV] @ powers_V
    if spec.include_t:
        outer_idx = outer_idx + X[:, -1] * p**kV
    n_outer = p ** (kV + (1 if spec.include_t else 0))
    n_inner = p**kW
    mat = np.zeros((n_outer, n_inner), dtype=np.complex128)
    mat[outer_idx, inner_idx] = F.data
    norm_in = n_inner if measure == "normalized" else 1.0
    norm_out = n_outer if measure == "normalized" else 1.0
    return _iterated_norm(mat, spec.outer_exp, spec.inner_exp, norm_in, norm_out)


# ---------------------------------------------------------------------------
# exponent arithmetic


@dataclass(frozen=True)
class ExponentBound:
    """A bound of the form: extension norm at (q_exp -> p_exp) is at most
    an absolute constant times |F|^log_constant."""

    q_exp: float
    p_exp: float
    log_constant: float

    def __post_init__(self):
        if self.p_exp < 1 or self.q_exp < 1:
            raise ValueError("exponents must be >= 1")
        if self.log_constant < 0:
            raise ValueError("log constant must be >= 0")


def stein_tomas_transfer(alpha: float, theta: float, d_tilde: float) -> float:
    """Log-constant produced by interpolating an extension bound of
    strength alpha at exponent q against the trivial L^2 estimate, landing
    at exponent q/theta: max(0, theta*alpha - d_tilde*(1-theta)/4)."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if not 0 < theta <= 1:
        raise ValueError("theta must lie in (0, 1]")
    if d_tilde <= 0:
        raise ValueError("d_tilde must be positive")
    return max(0.0, theta * alpha - d_tilde * (1.0 - theta) / 4.0)


def exact_r22(S) -> float:
    """The optimal L^2 -> L^2 extension constant (p^d/|S|)^{1/2} for a
    surface S given by a graph over a codimension-1 base."""
    p = S.field.p
    return math.sqrt(p**S.ambient_dim / S.size)


# ---------------------------------------------------------------------------
# operator-norm estimation


def power_iteration_norm(
    gram_apply: Callable[[np.ndarray], np.ndarray],
    dim: int,
    rng: np.random.Generator,
    weight: float = 1.0,
    tol: float = 1e-6,
    max_iter: int = 2000,
) -> float:
    """Largest singular value of T from power iteration on T*T.

    gram_apply must implement g -> T*(T g), self-adjoint and PSD in the
    weighted inner product weight * sum(g conj(h)).  Stops when successive
    Rayleigh quotients agree to relative tol.
    """
    g = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    g /= math.sqrt(weight * float(np.vdot(g, g).real))
    lam_prev = 0.0
    for _ in range(max_iter):
        h = gram_apply(g)
        lam = weight * float(np.vdot(g, h).real)
        hn = math.sqrt(weight * float(np.vdot(h, h).real))
        if hn == 0.0:
            return 0.0
        g = h / hn
        if lam > 0 and abs(lam - lam_prev) <= tol * lam:
            return math.sqrt(lam)
        lam_prev = lam
    return math.sqrt(lam_prev)


def ratio_ascent_lower_bound(
    ratio: Callable[[np.ndarray], float],
    candidates: list[np.ndarray],
    rng: np.random.Generator,
    steps: int = 60,
    step_size: float = 0.25,
) -> tuple[float, np.ndarray]:
    """Best-effort LOWER bound for a norm ratio by evaluating structured
    candidates and then hill-climbing with random perturbations from the
    best one.  Never claims optimality."""
    best_val = -math.inf
    best_vec: Optional[np.ndarray] = None
    for c in candidates:
        v = ratio(c)
        if v > best_val:
            best_val, best_vec = v, c.astype(np.complex128)
    assert best_vec is not None, "need at least one candidate"
    cur = best_vec
    cur_val = best_val
    size = step_size
    for _ in range(steps):
        trial = cur + size * (
            rng.standard_normal(cur.shape) + 1j * rng.standard_normal(cur.shape)
        )
        v = ratio(trial)
        if v > cur_val:
            cur, cur_val = trial, v
        else:
            size *= 0.8
    if cur_val > best_val:
        best_val, best_vec = cur_val, cur
    return best_val, best_vec
