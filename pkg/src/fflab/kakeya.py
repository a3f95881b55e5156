"""Kakeya maximal operator over F_p^m and its bridges to surface restriction.

The geometry here lives one dimension below the surfaces: lines in F_p^m
are parameterized by a base and a direction in F_p^{m-1}, and every line
sweeps the last coordinate.  Horizontal lines are deliberately out of the
model; a full projective audit re-enters them through coordinate swaps in
kakeya_set_audit(full_directions=True).

Measure conventions, fixed once:

  * functions on F_p^m ("physical side") carry counting measure,
  * functions on the direction set F_p^{m-1} carry normalized counting
    measure (each direction weighs p^{-(m-1)}).

The two bridges at the end of the file are exact identities, not bounds:
the quadratic-surface extension of a suitably modulated function collapses
to a superposition of line indicators, and the extension operator factors
through any complementary pair of totally isotropic subspaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Union

import numpy as np

from .core import (
    FFunction,
    PrimeField,
    char_vector,
    coordinate_array,
    grid_size,
    inner,
    lp_norm,
)
from .errors import FFLabError, NotIsotropicPair
from .qforms import (
    Subspace,
    inv_mod,
    is_totally_isotropic,
    nullspace_mod,
    rank_mod,
)
from .surfaces import Surface, SurfaceFunction, extension, restriction
from .combinatorics import PointSet

__all__ = [
    "AffineLine",
    "KakeyaInstance",
    "KakeyaAudit",
    "DualConsistency",
    "KakeyaExponents",
    "RegularSetAudit",
    "kakeya_maximal",
    "maximizing_base_map",
    "direction_norm",
    "maximal_ratio",
    "line_sum",
    "dual_kakeya_apply",
    "dual_consistency",
    "kakeya_set_audit",
    "standard_kakeya_set",
    "dvir_envelope",
    "restriction_to_kakeya_embed",
    "embed_closed_form",
    "embed_collapse_profile",
    "restriction_to_kakeya_exponents",
    "kakeya_bound_from_restriction",
    "coset_extension",
    "mixed_norm",
    "surface_mixed_norm",
    "mixed_extension_ratio",
    "mixed_restriction_ratio",
    "kakeya_regular_set_bound",
    "random_slice_isotropic_function",
]


# ---------------------------------------------------------------------------
# lines


@dataclass(frozen=True)
class AffineLine:
    """The non-horizontal line {(b + eta t, t) : t in F_p} in F_p^m.

    base and direction live in F_p^{m-1}; the last coordinate sweeps the
    field, so the line always has exactly p points.
    """

    field: PrimeField
    base: tuple
    direction: tuple

    def __post_init__(self):
        p = self.field.p
        if len(self.base) != len(self.direction):
            raise ValueError("base and direction must share a dimension")
        if any(not 0 <= c < p for c in self.base + self.direction):
            raise ValueError("coordinates must be reduced mod p (use AffineLine.of)")

    @classmethod
    def of(cls, field: PrimeField, base, direction) -> "AffineLine":
        p = field.p
        return cls(
            field,
            tuple(int(c) % p for c in base),
            tuple(int(c) % p for c in direction),
        )

    @property
    def ambient_dim(self) -> int:
        return len(self.base) + 1

    def __len__(self) -> int:
        return self.field.p

    def point_array(self) -> np.ndarray:
        """(p, m) array of the line's points, ordered by the last coordinate."""
        p = self.field.p
        ts = np.arange(p, dtype=np.int64)
        head = (np.array(self.base, dtype=np.int64) + np.outer(ts, self.direction)) % p
        return np.hstack([head, ts[:, None]])

    def __contains__(self, x) -> bool:
        x = tuple(int(c) % self.field.p for c in x)
        if len(x) != self.ambient_dim:
            return False
        t = x[-1]
        p = self.field.p
        return all((b + d * t - c) % p == 0 for b, d, c in zip(self.base, self.direction, x))

    def indicator(self) -> FFunction:
        return FFunction.indicator(self.field, self.ambient_dim, self.point_array())


def _line_base_indices(p: int, n: int, eta: np.ndarray) -> list:
    """For t = 0..p-1, the permutation sending the index of b to that of
    b + eta t.  Row t, entry enc(b), equals enc(b + eta t)."""
    base = coordinate_array(p, n)
    powers = p ** np.arange(n, dtype=np.int64)
    return [((base + t * eta) % p) @ powers for t in range(p)]


# ---------------------------------------------------------------------------
# the maximal operator


def kakeya_maximal(F: FFunction) -> np.ndarray:
    """F*(eta) = max over bases b of the |F|-mass on the line (b, eta).

    Returns one value per direction of F_p^{m-1}, in index order.  The
    maximum is exact: every one of the p^{m-1} bases is tried.
    """
    m = F.dim
    if m < 2:
        raise ValueError("the maximal operator needs ambient dimension >= 2")
    p = F.field.p
    n = m - 1
    grid_size(p, 2 * n)  # p^{m-1} directions x p^{m-1} bases
    mags = np.abs(F.data).reshape(p**n, p, order="F")
    out = np.empty(p**n, dtype=np.float64)
    for di, eta in enumerate(coordinate_array(p, n)):
        totals = np.zeros(p**n, dtype=np.float64)
        for t, idx in enumerate(_line_base_indices(p, n, eta)):
            totals += mags[idx, t]
        out[di] = totals.max()
    return out


def maximizing_base_map(F: FFunction) -> np.ndarray:
    """(p^{m-1}, m-1) array: row i is the base achieving F* for direction i.

    Ties resolve to the smallest base index, so the map is deterministic.
    """
    m = F.dim
    p = F.field.p
    n = m - 1
    grid_size(p, 2 * n)
    mags = np.abs(F.data).reshape(p**n, p, order="F")
    coords = coordinate_array(p, n)
    rows = np.empty((p**n, n), dtype=np.int64)
    for di, eta in enumerate(coords):
        totals = np.zeros(p**n, dtype=np.float64)
        for t, idx in enumerate(_line_base_indices(p, n, eta)):
            totals += mags[idx, t]
        rows[di] = coords[int(np.argmax(totals))]
    return rows


def direction_norm(values: np.ndarray, q: float) -> float:
    """L^q norm on the direction set with normalized counting measure."""
    values = np.abs(np.asarray(values, dtype=np.float64))
    if math.isinf(q):
        return float(values.max()) if values.size else 0.0
    if q < 1:
        raise ValueError("q must be >= 1")
    return float(np.mean(values**q) ** (1.0 / q))


def maximal_ratio(F: FFunction, q_out: Optional[float] = None,
                  p_in: Optional[float] = None) -> float:
    """||F*||_{L^{q_out}(directions)} / ||F||_{L^{p_in}(counting)}.

    Both exponents default to the ambient dimension m, the endpoint at
    which the maximal inequality holds with a dimensional constant.
    """
    m = F.dim
    q_out = float(m) if q_out is None else q_out
    p_in = float(m) if p_in is None else p_in
    denom = lp_norm(F, p_in, "counting")
    if denom == 0.0:
        raise ValueError("maximal ratio of the zero function")
    return direction_norm(kakeya_maximal(F), q_out) / denom


def line_sum(F: FFunction, base, direction, absolute: bool = False) -> complex:
    """Sum of F (or |F|) over the line with the given base and direction."""
    line = AffineLine.of(F.field, base, direction)
    p = F.field.p
    powers = p ** np.arange(F.dim, dtype=np.int64)
    idx = line.point_array() @ powers
    vals = F.data[idx]
    if absolute:
        return float(np.abs(vals).sum())
    return complex(vals.sum())


# ---------------------------------------------------------------------------
# the dual superposition


def _as_direction_values(h, field: PrimeField, n: int) -> np.ndarray:
    if isinstance(h, FFunction):
        if h.field != field or h.dim != n:
            raise ValueError("h must live on the direction set F_p^{m-1}")
        return h.data.copy()
    arr = np.asarray(h, dtype=np.complex128)
    if arr.shape != (field.p**n,):
        raise ValueError(f"h must have {field.p ** n} entries")
    return arr


def _as_base_map(x0, field: PrimeField, n: int) -> np.ndarray:
    """Normalize a base map to a (p^n, n) int array indexed by direction."""
    p = field.p
    if callable(x0):
        rows = [x0(tuple(int(c) for c in eta)) for eta in coordinate_array(p, n)]
        return np.array([[int(c) % p for c in r] for r in rows], dtype=np.int64)
    arr = np.asarray(x0, dtype=np.int64) % p
    if arr.shape != (p**n, n):
        raise ValueError(f"x0 must map all {p ** n} directions to bases")
    return arr


def dual_kakeya_apply(h, x0, field: PrimeField, m: int) -> FFunction:
    """The normalized line superposition p^{-(m-1)} sum_v h(v) 1_{l(x0(v),v)}.

    h assigns a weight to each direction; x0 picks one base per direction
    (callable, or a (p^{m-1}, m-1) array in direction-index order).
    """
    if m < 2:
        raise ValueError("ambient dimension must be >= 2")
    p = field.p
    n = m - 1
    hv = _as_direction_values(h, field, n)
    bases = _as_base_map(x0, field, n)
    out = FFunction.zeros(field, m)
    powers = p ** np.arange(m, dtype=np.int64)
    ts = np.arange(p, dtype=np.int64)
    for di, eta in enumerate(coordinate_array(p, n)):
        if hv[di] == 0:
            continue
        head = (bases[di] + np.outer(ts, eta)) % p
        idx = np.hstack([head, ts[:, None]]) @ powers
        out.data[idx] += hv[di]
    out.data /= p**n
    return out


class DualConsistency(NamedTuple):
    direct_lower: float   # ||F*||_{q'} / ||F||_{p'}
    paired_lower: float   # the same number recovered through the dual pairing
    dual_ratio: float     # ||dual superposition||_p / ||h||_q, >= paired_lower


def dual_consistency(F: FFunction, q: float, p_exp: float) -> DualConsistency:
    """Rebuild the maximal-side operator lower bound on the dual side.

    Given the dual-side exponent pair (q, p), the maximal inequality at the
    conjugate pair (p', q') and the superposition inequality share their
    optimal constant.  This realizes the equality constructively: take the
    maximizing bases of |F| as x0, the conjugate power of F* as h, and pair
    the superposition against |F|.  The first two numbers agree to within
    floating point; the third can only be larger.
    """
    if q <= 1 or p_exp <= 1:
        raise ValueError("dual exponents must exceed 1")
    field, m = F.field, F.dim
    n = m - 1
    G = F.abs()
    q_c = q / (q - 1.0)
    p_c = p_exp / (p_exp - 1.0)
    star = kakeya_maximal(G)
    g_norm = lp_norm(G, p_c, "counting")
    if g_norm == 0.0:
        raise ValueError("dual consistency of the zero function")
    direct = direction_norm(star, q_c) / g_norm
    h = star ** (q_c / q)
    h_norm = direction_norm(h, q)
    bases = maximizing_base_map(G)
    superpos = dual_kakeya_apply(h, bases, field, m)
    pairing = inner(superpos, G, "counting").real
    paired = pairing / (h_norm * g_norm)
    dual_ratio = lp_norm(superpos, p_exp, "counting") / h_norm
    return DualConsistency(direct, paired, dual_ratio)


# ---------------------------------------------------------------------------
# Kakeya sets


@dataclass(frozen=True)
class KakeyaInstance:
    """A candidate Kakeya set with an optional per-direction witness.

    The witness maps every direction of F_p^{m-1} to a base whose line is
    contained in the set; it is validated on construction, so a witnessed
    instance is a certificate, not a claim.
    """

    points: PointSet
    witness: Optional[dict] = None

    def __post_init__(self):
        field = self.points.field
        p = field.p
        n = self.points.dim - 1
        if n < 1:
            raise ValueError("Kakeya instances need ambient dimension >= 2")
        if self.witness is None:
            return
        seen = set()
        for eta, b in self.witness.items():
            line = AffineLine.of(field, b, eta)
            for row in line.point_array():
                if tuple(int(c) for c in row) not in self.points:
                    raise ValueError(
                        f"witness line for direction {tuple(eta)} leaves the set"
                    )
            seen.add(line.direction)
        if len(seen) != p**n:
            raise ValueError(
                f"witness covers {len(seen)} of {p ** n} directions"
            )

    @property
    def density(self) -> float:
        p = self.points.field.p
        return len(self.points) / p**self.points.dim


class KakeyaAudit(NamedTuple):
    is_kakeya: bool
    density: float
    missing: tuple  # directions with no fully contained line


def kakeya_set_audit(K: KakeyaInstance, full_directions: bool = False) -> KakeyaAudit:
    """Check for a contained line in every direction and report the density.

    Without a witness, the search per direction is exhaustive over bases.
    full_directions additionally audits the horizontal directions (those
    the line model omits) by searching along every projective direction.
    """
    E = K.points
    field = E.field
    p = field.p
    m = E.dim
    ind = np.zeros(p**m, dtype=bool)
    powers = p ** np.arange(m, dtype=np.int64)
    if len(E):
        ind[E.matrix() @ powers] = True

    missing = []
    if K.witness is not None:
        pass  # validated at construction: every non-horizontal direction holds
    else:
        star = kakeya_maximal(FFunction(field, m, ind.astype(np.complex128)))
        for di, eta in enumerate(coordinate_array(p, m - 1)):
            if star[di] < p - 0.5:
                missing.append(tuple(int(c) for c in eta) + (1,))

    if full_directions:
        grid = coordinate_array(p, m)
        for direction in grid:
            if direction[-1] != 0:
                continue  # handled by the line model above
            lead = next((c for c in direction if c), 0)
            if lead != 1:
                continue  # one representative per projective direction
            ok = ind.copy()
            for t in range(1, p):
                shifted = ((grid + t * direction) % p) @ powers
                ok &= ind[shifted]
                if not ok.any():
                    break
            if not ok.any():
                missing.append(tuple(int(c) for c in direction))

    return KakeyaAudit(not missing, K.density, tuple(missing))


def standard_kakeya_set(field: PrimeField, m: int) -> KakeyaInstance:
    """The classical small Kakeya set: lines based at the squared direction.

    Taking b(eta) = (eta_1^2, ..., eta_{m-1}^2) makes the union of lines
    cover only about (p+1)/2 values per head coordinate on each horizontal
    slice, so the density decays like 2^{-(m-1)} while every direction
    still carries a full line by construction.
    """
    if m < 2:
        raise ValueError("Kakeya sets need ambient dimension >= 2")
    p = field.p
    pts = set()
    witness = {}
    for eta in coordinate_array(p, m - 1):
        b = tuple(int(c * c) % p for c in eta)
        key = tuple(int(c) for c in eta)
        witness[key] = b
        for row in AffineLine.of(field, b, key).point_array():
            pts.add(tuple(int(c) for c in row))
    return KakeyaInstance(PointSet.of(field, m, pts), witness)


def dvir_envelope(m: int) -> float:
    """The 1/m! density floor every Kakeya set in F_p^m satisfies."""
    return 1.0 / math.factorial(m)


# ---------------------------------------------------------------------------
# restriction side -> Kakeya side


def _hyperbolic_graph_surface(field: PrimeField, n: int) -> Surface:
    from .surfaces import hyperbolic_paraboloid

    return hyperbolic_paraboloid(field, 2 * n + 1)


def restriction_to_kakeya_embed(
    h,
    b,
    surface: Optional[Surface] = None,
    certify: bool = True,
) -> SurfaceFunction:
    """Modulate sqrt(h) into a surface function whose extension is a line
    superposition.

    h is a nonnegative weight on F_p^n and b an arbitrary base map on
    F_p^n.  The returned function on the 2n+1 dimensional bilinear graph
    surface is f(xi, theta) = sqrt(h(theta)) e(-b(-theta) . xi); its
    extension equals embed_closed_form(h, b) pointwise, and its squared
    modulus summed over the middle coordinates collapses to the line
    profile embed_collapse_profile(h, b).  With certify both identities
    are checked to 1e-9 before the function is returned.
    """
    if not isinstance(h, FFunction):
        raise ValueError("pass h as an FFunction on F_p^n so the field is unambiguous")
    field, n = h.field, h.dim
    hv = h.data
    if np.any(np.abs(hv.imag) > 1e-12) or np.any(hv.real < -1e-12):
        raise ValueError("h must be nonnegative")
    hv = hv.real.astype(np.float64)
    p = field.p
    if surface is None:
        surface = _hyperbolic_graph_surface(field, n)
    if surface.base_dim != 2 * n or surface.field != field:
        raise ValueError("surface must be the 2n+1 dimensional bilinear graph")

    b_arr = _as_base_map(b, field, n)
    base = coordinate_array(p, 2 * n)
    xi = base[:, :n]
    theta = base[:, n:]
    powers = p ** np.arange(n, dtype=np.int64)
    theta_idx = theta @ powers
    neg_theta_idx = ((-theta) % p) @ powers
    chars = char_vector(field)
    phase_idx = (-np.einsum("ij,ij->i", xi, b_arr[neg_theta_idx])) % p
    values = np.sqrt(hv[theta_idx]) * chars[phase_idx]
    f = SurfaceFunction(surface, values)

    if certify:
        ext = extension(f)
        closed = embed_closed_form(h, b)
        err = float(np.abs(ext.data - closed.data).max())
        if err > 1e-9:
            raise FFLabError(f"closed form deviates by {err}")
        profile = embed_collapse_profile(h, b)
        ext_cube = ext.data.reshape(p**n, p**n, p, order="F")
        collapsed = (np.abs(ext_cube) ** 2).sum(axis=1)
        target = profile.data.real.reshape(p**n, p, order="F")
        err2 = float(np.abs(collapsed - target).max())
        if err2 > 1e-9:
            raise FFLabError(f"collapse profile deviates by {err2}")
    return f


def embed_closed_form(h: FFunction, b) -> FFunction:
    """p^{-n} sum_theta sqrt(h(theta)) 1_{l(b(-theta),-theta)}(x1,t) e(theta.x2),
    assembled directly from lines and characters, never through a transform."""
    field, n = h.field, h.dim
    p = field.p
    hv = h.data.real.astype(np.float64)
    b_arr = _as_base_map(b, field, n)
    d = 2 * n + 1
    out = FFunction.zeros(field, d)
    chars = char_vector(field)
    x2_grid = coordinate_array(p, n)
    powers = p ** np.arange(n, dtype=np.int64)
    for ti, theta in enumerate(coordinate_array(p, n)):
        w = math.sqrt(hv[ti])
        if w == 0.0:
            continue
        bb = b_arr[int(((-theta) % p) @ powers)]
        ring = chars[(x2_grid @ theta) % p] * w
        for t in range(p):
            x1 = (bb - t * theta) % p
            start = int(x1 @ powers)
            block = start + (x2_grid @ powers) * p**n + t * p ** (2 * n)
            out.data[block] += ring
    out.data /= p**n
    return out


def embed_collapse_profile(h: FFunction, b) -> FFunction:
    """The (x1, t) line profile p^{-n} sum_theta h(theta) 1_{l(b(-theta),-theta)}.

    Equals dual_kakeya_apply of the direction-reversed weights against the
    base map b, which the tests verify; kept separate so the embedding has
    an independently assembled target.
    """
    field, n = h.field, h.dim
    p = field.p
    hv = h.data.real.astype(np.float64)
    b_arr = _as_base_map(b, field, n)
    out = FFunction.zeros(field, n + 1)
    powers = p ** np.arange(n + 1, dtype=np.int64)
    ts = np.arange(p, dtype=np.int64)
    for ti, theta in enumerate(coordinate_array(p, n)):
        if hv[ti] == 0.0:
            continue
        bb = b_arr[int(((-theta) % p) @ (p ** np.arange(n, dtype=np.int64)))]
        head = (bb - np.outer(ts, theta)) % p
        idx = np.hstack([head, ts[:, None]]) @ powers
        out.data[idx] += hv[ti]
    out.data /= p**n
    return out


class KakeyaExponents(NamedTuple):
    m: int
    dual_q: Fraction          # exponent pair for the superposition bound
    dual_p: Fraction
    restriction_q: Fraction   # the surface estimate consumed by the chain
    restriction_p: Fraction
    prefactor: Fraction       # power of p multiplying the squared constant
    endpoint: Fraction        # power of p in the resulting Kakeya bound


def restriction_to_kakeya_exponents(m: int) -> KakeyaExponents:
    """The exponent bookkeeping of the embedding chain at the set endpoint.

    The dual pair q = p = (2m-1)/(2m-2) consumes the surface estimate at
    (2q -> 2p); the chain then bounds the superposition constant by
    p^{prefactor} times the squared surface constant, and the conjectural
    endpoint for the surface side turns that into p^{(m-1)/(2m-1)}.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    q = Fraction(2 * m - 1, 2 * m - 2)
    pre = (m - 1) * (1 - Fraction(1, q))
    return KakeyaExponents(
        m=m,
        dual_q=q,
        dual_p=q,
        restriction_q=2 * q,
        restriction_p=2 * q,
        prefactor=pre,
        endpoint=Fraction(m - 1, 2 * m - 1),
    )


def kakeya_bound_from_restriction(
    field: PrimeField, m: int, p_exp: Union[float, Fraction], rstar: float
) -> float:
    """Numeric superposition-constant bound p^{(m-1)(1-1/p_exp)} rstar^2."""
    if m < 2:
        raise ValueError("m must be at least 2")
    exponent = (m - 1) * (1.0 - 1.0 / float(p_exp))
    return field.p**exponent * rstar**2


# ---------------------------------------------------------------------------
# coset reparameterization and mixed norms


def _isotropic_pair_split(S: Surface, W: Subspace, V: Subspace):
    """Validate (W, V) and return the phase-splitting data.

    Returns (xi1, xi2, x1_of, x2_of): the point arrays of W and V, and the
    two components of every ambient base point under the decomposition
    dual to (V, W) in the standard dot product.
    """
    p = S.field.p
    n2 = S.base_dim
    if n2 % 2:
        raise ValueError("the base dimension must be even")
    n = n2 // 2
    for U in (W, V):
        if U.field != S.field or U.basis.shape[1] != n2:
            raise NotIsotropicPair("subspace lives in the wrong ambient space")
        if U.dim != n:
            raise NotIsotropicPair(f"need dimension {n}, got {U.dim}")
        if U.is_affine:
            raise NotIsotropicPair("subspaces must pass through the origin")
        if not is_totally_isotropic(S.Q, U):
            raise NotIsotropicPair("subspace is not totally isotropic for the form")
    stacked = np.vstack([W.basis, V.basis])
    if rank_mod(stacked, p) != n2:
        raise NotIsotropicPair("subspaces are not complementary")

    # x = x1 + x2 with x1 dot-orthogonal to V and x2 dot-orthogonal to W,
    # so the Fourier phase splits as xi1.x1 + xi2.x2
    X1 = nullspace_mod(V.basis, p)
    X2 = nullspace_mod(W.basis, p)
    M = np.vstack([X1, X2]).T % p
    if rank_mod(M, p) != n2:
        raise NotIsotropicPair("dot-orthocomplements fail to split the space")
    Minv = inv_mod(M, p)
    base = coordinate_array(p, n2)
    coeff = (base @ Minv.T) % p
    x1 = coeff[:, : X1.shape[0]] @ X1 % p
    x2 = coeff[:, X1.shape[0]:] @ X2 % p
    return W.point_array(), V.point_array(), x1, x2


def coset_extension(f: SurfaceFunction, W: Subspace, V: Subspace) -> FFunction:
    """Evaluate the extension of f through the W + V coordinates.

    The surface frequency splits as xi = xi1 + xi2 with xi1 in W and
    xi2 in V; total isotropy kills the pure-square phases and leaves
    e(xi1 . x1 + xi2 . x2 + 2 t B(xi1, xi2)) with B the form's pairing.
    The double sum is evaluated literally, so agreement with the direct
    extension is a genuine two-route identity, not a refactoring.
    """
    S = f.surface
    p = S.field.p
    xi1, xi2, x1, x2 = _isotropic_pair_split(S, W, V)
    n2 = S.base_dim
    powers = p ** np.arange(n2, dtype=np.int64)
    chars = char_vector(S.field)

    pair_idx = ((xi1[:, None, :] + xi2[None, :, :]) % p).reshape(-1, n2) @ powers
    fvals = f.values[pair_idx].reshape(len(xi1), len(xi2))
    B = xi1 @ S.Q.A @ xi2.T % p

    P1 = chars[(xi1 @ x1.T) % p]   # (|W|, p^{2n})
    P2 = chars[(xi2 @ x2.T) % p]   # (|V|, p^{2n})
    out = FFunction.zeros(S.field, S.ambient_dim)
    cell = p**n2
    for t in range(p):
        Mt = fvals * chars[(2 * t * B) % p]
        out.data[t * cell : (t + 1) * cell] = np.einsum(
            "ix,ij,jx->x", P1, Mt, P2, optimize=True
        )
    out.data /= p**n2
    return out


def _coset_split_indices(field: PrimeField, W: Subspace, V: Subspace):
    """Index of the W part and V part of every base point under x = w + v."""
    p = field.p
    n2 = W.basis.shape[1]
    stacked = np.vstack([W.basis, V.basis])
    if rank_mod(stacked, p) != n2:
        raise NotIsotropicPair("subspaces are not complementary")
    M = stacked.T % p
    Minv = inv_mod(M, p)
    base = coordinate_array(p, n2)
    coeff = (base @ Minv.T) % p
    w_pow = p ** np.arange(W.dim, dtype=np.int64)
    v_pow = p ** np.arange(V.dim, dtype=np.int64)
    return coeff[:, : W.dim] @ w_pow, coeff[:, W.dim :] @ v_pow


def mixed_norm(F: FFunction, W: Subspace, V: Subspace,
               outer_q: float, inner_p: float) -> float:
    """Counting-measure mixed norm of a function on base x last coordinate:
    inner L^{inner_p} over W cosets, outer L^{outer_q} over (V, t)."""
    field = F.field
    p = field.p
    n2 = F.dim - 1
    if W.basis.shape[1] != n2:
        raise ValueError("subspaces must live on the base of F's domain")
    w_idx, v_idx = _coset_split_indices(field, W, V)
    mags = np.abs(F.data).reshape(p**n2, p, order="F") ** inner_p
    inner_sums = np.zeros((p**V.dim, p), dtype=np.float64)
    np.add.at(inner_sums, v_idx, mags)
    inner_vals = inner_sums ** (1.0 / inner_p)
    return float((inner_vals**outer_q).sum() ** (1.0 / outer_q))


def surface_mixed_norm(f: SurfaceFunction, W: Subspace, V: Subspace,
                       outer_q: float, inner_p: float) -> float:
    """Normalized mixed norm on the surface: both layers average."""
    p = f.surface.field.p
    w_idx, v_idx = _coset_split_indices(f.surface.field, W, V)
    mags = np.abs(f.values) ** inner_p
    inner_sums = np.zeros(p**V.dim, dtype=np.float64)
    np.add.at(inner_sums, v_idx, mags)
    inner_vals = (inner_sums / p**W.dim) ** (1.0 / inner_p)
    return float((np.mean(inner_vals**outer_q)) ** (1.0 / outer_q))


def mixed_extension_ratio(f: SurfaceFunction, W: Subspace, V: Subspace) -> float:
    """The tracked constant of the mixed-norm extension inequality:
    ||ext f||_{L^{(2d+2)/(d-1)}_{V,t} L^2_W} over the matching surface norm."""
    S = f.surface
    d = S.ambient_dim
    q = (2 * d + 2) / (d - 1)
    denom = surface_mixed_norm(f, W, V, q, 2.0)
    if denom == 0.0:
        raise ValueError("mixed ratio of the zero function")
    return mixed_norm(extension(f), W, V, q, 2.0) / denom


def mixed_restriction_ratio(F: FFunction, S: Surface,
                            W: Subspace, V: Subspace) -> float:
    """The dual-side tracked constant: restricted transform in the mixed
    surface norm at (2d+2)/(d+3) against the physical mixed norm."""
    d = S.ambient_dim
    q = (2 * d + 2) / (d + 3)
    denom = mixed_norm(F, W, V, q, 2.0)
    if denom == 0.0:
        raise ValueError("mixed ratio of the zero function")
    return surface_mixed_norm(restriction(F, S), W, V, q, 2.0) / denom


# ---------------------------------------------------------------------------
# slice-structured sets


class RegularSetAudit(NamedTuple):
    lhs: float            # restricted-transform norm at (2d+2)/(d+3)
    gamma: float          # log_p of the support size
    e_exp: float          # log_p of the max number of pieces per slice
    rhs_exponent: float   # gamma/2 + (e+1)/(d+1) + (d-3)/(2d+2)
    ratio: float          # lhs / p^{rhs_exponent}


def kakeya_regular_set_bound(F: FFunction, S: Surface, decomposition: dict
                             ) -> RegularSetAudit:
    """Audit the restricted-transform bound for slice-structured indicators.

    F must be the indicator of a set E; decomposition maps each last
    coordinate z to a list of (affine subspace, points) pieces that
    partition the slice of E, every piece inside its own maximal totally
    isotropic affine subspace (pairwise distinct within the slice).
    """
    field = F.field
    p = field.p
    d = F.dim
    if S.ambient_dim != d:
        raise ValueError("F must live on the ambient space of S")
    vals = F.data
    if not np.all(np.isclose(vals, 0) | np.isclose(vals, 1)):
        raise ValueError("F must be a set indicator")
    support = {tuple(int(c) for c in row)
               for row in coordinate_array(p, d)[np.abs(vals) > 0.5]}
    size = len(support)
    if size == 0:
        raise ValueError("empty support")
    witt = S.Q.witt_index
    max_pieces = 1
    covered = set()
    for z, pieces in decomposition.items():
        slice_cover = set()
        spaces = []
        for space, pts in pieces:
            if space.dim != witt or not is_totally_isotropic(S.Q, space.linear_part()):
                raise ValueError("pieces must sit in maximal totally isotropic cosets")
            if any(space == other for other in spaces):
                raise ValueError("pieces of one slice must use distinct cosets")
            spaces.append(space)
            for pt in pts:
                base = tuple(int(c) % p for c in pt)
                if not space.contains(base):
                    raise ValueError(f"{base} is outside its claimed coset")
                full = base + (int(z) % p,)
                if full not in support:
                    raise ValueError(f"{full} is not in the support of F")
                if full in slice_cover:
                    raise ValueError("pieces of one slice must be disjoint")
                slice_cover.add(full)
        covered |= slice_cover
        max_pieces = max(max_pieces, len(pieces))
    if covered != support:
        raise ValueError("decomposition does not cover the support exactly")

    gamma = math.log(size, p)
    e_exp = math.log(max_pieces, p)
    q = (2 * d + 2) / (d + 3)
    lhs = restriction(F, S).norm(q)
    rhs_exponent = gamma / 2 + (e_exp + 1) / (d + 1) + (d - 3) / (2 * d + 2)
    return RegularSetAudit(lhs, gamma, e_exp, rhs_exponent, lhs / p**rhs_exponent)


def random_slice_isotropic_function(
    S: Surface, pieces_per_slice: int, rng: np.random.Generator
) -> tuple[FFunction, dict]:
    """A random slice-structured indicator together with its decomposition.

    Every last-coordinate slice gets up to pieces_per_slice random subsets
    of distinct maximal totally isotropic affine cosets (later pieces drop
    points already used, keeping the pieces disjoint).
    """
    from .qforms import enumerate_max_isotropic

    field = S.field
    p = field.p
    d = S.ambient_dim
    subspaces = sorted(enumerate_max_isotropic(S.Q), key=lambda U: U.basis.tobytes())
    if not subspaces:
        raise ValueError("the base form has no isotropic subspaces to structure by")
    decomposition = {}
    points = []
    for z in range(p):
        used = set()
        pieces = []
        count = int(rng.integers(1, pieces_per_slice + 1))
        seen_cosets = []
        for _ in range(count):
            U = subspaces[int(rng.integers(0, len(subspaces)))]
            shift = tuple(int(c) for c in rng.integers(0, p, size=S.base_dim))
            coset = Subspace(field, U.basis, translate=shift)
            if any(coset == c for c in seen_cosets):
                continue
            seen_cosets.append(coset)
            rows = coset.point_array()
            take = rng.random(len(rows)) < 0.6
            pts = []
            for row, keep in zip(rows, take):
                tup = tuple(int(c) for c in row)
                if keep and tup not in used:
                    used.add(tup)
                    pts.append(tup)
            if pts:
                pieces.append((coset, pts))
                points.extend(t + (z,) for t in pts)
        if pieces:
            decomposition[z] = pieces
    if not points:
        # force one deterministic piece so the audit never sees emptiness
        U = subspaces[0]
        coset = Subspace(field, U.basis, translate=(0,) * S.base_dim)
        pts = [tuple(int(c) for c in r) for r in coset.point_array()]
        decomposition[0] = [(coset, pts)]
        points = [t + (0,) for t in pts]
    return FFunction.indicator(field, d, points), decomposition
