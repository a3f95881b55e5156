"""Scenario registry: every checkable statement in the package as an
executable entry with a stable id.

Three kinds:

- exact_identity: chains that hold with constant exactly 1 at every
  size (transform closed forms, norm identities, operator-norm
  formulas, geometric transport identities).  The metric is the worst
  deviation across trials; pass iff it stays under the tolerance.
- constant_tracked: inequalities whose constant is bounded but not 1.
  The runner measures the constant over a deterministic family and the
  value is compared against the stored baseline (baselines.py).  At the
  baseline's own provenance parameters the run re-derives the constant
  and reports it (report_only), failing only on drift.
- exponent_arith: closed-form exponent bookkeeping, checked by rational
  arithmetic; the metric is the worst residual.

All randomness flows through RunContext.trial_rng, which hashes
(master seed, scenario id, trial index), so per-trial results are
independent of execution order and worker count.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from ..core import (
    FFunction,
    PrimeField,
    coordinate_array,
    inner,
    lp_norm,
)
from ..errors import (
    FFLabError,
    FullyDegenerate,
    OutOfValidityRange,
    UnknownScenario,
)
from ..fourier import (
    convolve,
    exact_r22,
    fourier_transform,
    inverse_transform,
    power_iteration_norm,
    stein_tomas_transfer,
)
from ..qforms import (
    QuadraticSpace,
    allowed_subsurface_triples,
    classify_subsurface,
    complementary_isotropic,
    complement_indicator_character_sum,
    det_mod,
    dual_pairing_basis,
    enumerate_max_isotropic,
    enumerate_subspaces,
    orthogonal_complement,
    random_invertible,
    random_subspace,
    random_symmetric,
)
from ..surfaces import (
    Surface,
    SurfaceFunction,
    Tube,
    bochner_riesz,
    congruence_between,
    equivalence_transfer,
    extension,
    hyperbolic_paraboloid,
    paraboloid,
    plane_embed,
    plane_embed_ft,
    pseudo_conformal_check,
    restriction,
    surface_measure_inverse_ft,
)
from ..combinatorics import (
    HyperplaneFamily,
    PointSet,
    all_affine_hyperplanes,
    additive_energy,
    closed_form_curve,
    energy_exponent_closed,
    energy_exponent_recurse,
    energy_slice_bound,
    energy_to_incidence,
    incidence_bound_audit,
    off_diagonal_energy,
    random_surface_subset,
    recursion_curve,
    sample_energy_exponents,
    surface_point_set,
    vh_plane_cover,
)
from .. import kakeya as kk
from .baselines import BaselineStore, BaselineMissing, oracle_hash
from .reporting import ScenarioReport, witness_array, witness_values


def trial_seed(master: int, scenario_id: str, trial: int) -> int:
    """Fixed fan-out hash: the per-trial seed depends only on these three."""
    h = hashlib.sha256(f"{master}:{scenario_id}:{trial}".encode()).hexdigest()
    return int(h[:8], 16)


@dataclass
class RunContext:
    scenario_id: str
    prime: int
    dim: int
    trials: int
    seed: int

    def __post_init__(self):
        self.field = PrimeField(self.prime)

    def trial_rng(self, trial: int) -> np.random.Generator:
        return np.random.default_rng(
            trial_seed(self.seed, self.scenario_id, trial)
        )


# ---------------------------------------------------------------------------
# small helpers


def _scale(f: FFunction, c: complex) -> FFunction:
    return FFunction(f.field, f.dim, f.data * c)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _pos(x: float) -> float:
    return max(0.0, x)


def _logp(p: int, n: float) -> float:
    return math.log(n) / math.log(p)


class _Worst:
    """Track the largest deviation and a lazily built witness for it."""

    def __init__(self):
        self.metric = 0.0
        self.witness: Optional[dict] = None

    def update(self, dev: float, witness) -> None:
        if dev > self.metric:
            self.metric = dev
            self.witness = witness() if callable(witness) else witness

    def result(self):
        return self.metric, self.witness


def _direct_sigma(S: Surface) -> FFunction:
    """|S|^{-1} sum over surface points of e(x.xi), by direct transform."""
    scale = S.field.p**S.ambient_dim / S.size
    return _scale(inverse_transform(S.indicator()), scale)


def _random_support(rng: np.random.Generator, total: int, k: int) -> np.ndarray:
    return np.sort(rng.choice(total, size=k, replace=False))


# ---------------------------------------------------------------------------
# FT: transform layer


def _run_ft1(ctx: RunContext):
    S = hyperbolic_paraboloid(ctx.field, ctx.dim)
    closed = surface_measure_inverse_ft(S)
    direct = _direct_sigma(S)
    diff = closed.data - direct.data
    dev = float(np.abs(diff).max())
    return dev, witness_array(diff, "closed_minus_direct")


def _run_ft2(ctx: RunContext):
    S = paraboloid(ctx.field, ctx.dim)
    closed = surface_measure_inverse_ft(S)
    direct = _direct_sigma(S)
    diff = closed.data - direct.data
    dev = float(np.abs(diff).max())
    return dev, witness_array(diff, "closed_minus_direct")


def _run_ft3(ctx: RunContext):
    p, d = ctx.prime, ctx.dim
    worst = _Worst()
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        f = FFunction.random(ctx.field, d, rng)
        g = FFunction.random(ctx.field, d, rng)
        fh = fourier_transform(f)
        energy_hat = float(np.sum(np.abs(fh.data) ** 2))
        energy = float(np.sum(np.abs(f.data) ** 2))
        dev_plancherel = _rel(energy_hat, p**d * energy)
        dev_inversion = float(np.abs(inverse_transform(fh).data - f.data).max())
        lhs = fourier_transform(convolve(f, g)).data
        rhs = fh.data * fourier_transform(g).data
        dev_conv = float(np.abs(lhs - rhs).max()) / max(1.0, float(np.abs(rhs).max()))
        dev = max(dev_plancherel, dev_inversion, dev_conv)
        worst.update(dev, lambda t=t, a=dev_plancherel, b=dev_inversion, c=dev_conv:
                     witness_values(trial=t, plancherel=a, inversion=b, convolution=c))
    return worst.result()


# ---------------------------------------------------------------------------
# ST: the restriction chain with constant 1


def _run_st1(ctx: RunContext):
    # Support-size step: for |f| >= lam on its support and
    # ||f||_{(q/theta)'} = 1, the squared L2(dsigma) transform norm equals
    # the pairing <f, f * sigma-vee>, is at most ||f||_2^2 + p^{-dt/2}||f||_1^2,
    # and the final bound 1 + p^{-dt/4} lam^{-theta/(q-theta)} holds with
    # constant exactly 1.
    p, d = ctx.prime, ctx.dim
    S = paraboloid(ctx.field, d)
    sig = surface_measure_inverse_ft(S)
    dt = d - 1
    worst = _Worst()
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        q = float(rng.choice([2.0, 2.5, 3.0, 4.0]))
        theta = float(rng.uniform(0.2, 0.9))
        k = int(rng.integers(1, max(2, p**d // 3)))
        idx = _random_support(rng, p**d, k)
        vals = rng.uniform(1.0, 2.0, size=k) * np.exp(2j * np.pi * rng.random(k))
        data = np.zeros(p**d, dtype=complex)
        data[idx] = vals
        f = FFunction(ctx.field, d, data)
        f = _scale(f, 1.0 / lp_norm(f, q / (q - theta)))
        lam = float(np.abs(f.data[idx]).min())
        lhs = restriction(f, S).norm(2.0) ** 2
        pairing = abs(inner(f, convolve(f, sig)))
        dev_id = _rel(lhs, pairing)
        bound = lp_norm(f, 2.0) ** 2 + p ** (-dt / 2) * lp_norm(f, 1.0) ** 2
        dev_chain = _pos(lhs - bound) / max(1.0, bound)
        final = 1.0 + p ** (-dt / 4) * lam ** (-theta / (q - theta))
        dev_final = _pos(math.sqrt(lhs) - final) / max(1.0, final)
        dev = max(dev_id, dev_chain, dev_final)
        worst.update(dev, lambda t=t, a=dev_id, b=dev_chain, c=dev_final, q=q, th=theta:
                     witness_values(trial=t, pairing=a, chain=b, final=c, q=q, theta=th))
    return worst.result()


def _run_st2(ctx: RunContext):
    # Height step: for ||f||_inf <= lam and ||f||_{(q/theta)'} = 1,
    # ||f||_{q'} <= lam^{(1-theta)/(q-theta)}; at q = 2 chaining through the
    # exact sharp transform norm gives
    # ||f-hat||_{L2(dsigma)} <= r22 lam^{(1-theta)/(2-theta)}.
    p, d = ctx.prime, ctx.dim
    S = paraboloid(ctx.field, d)
    r22 = exact_r22(S)
    worst = _Worst()
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        theta = float(rng.uniform(0.2, 0.9))
        k = int(rng.integers(1, max(2, p**d // 2)))
        idx = _random_support(rng, p**d, k)
        data = np.zeros(p**d, dtype=complex)
        data[idx] = rng.uniform(0.2, 1.0, size=k) * np.exp(2j * np.pi * rng.random(k))
        f = FFunction(ctx.field, d, data)
        q = 2.0
        f = _scale(f, 1.0 / lp_norm(f, q / (q - theta)))
        lam = float(np.abs(f.data).max())
        lam_pow = lam ** ((1.0 - theta) / (q - theta))
        dev_norm = _pos(lp_norm(f, 2.0) - lam_pow) / max(1.0, lam_pow)
        lhs = restriction(f, S).norm(2.0)
        dev_rest = _pos(lhs - r22 * lam_pow) / max(1.0, r22 * lam_pow)
        dev = max(dev_norm, dev_rest)
        worst.update(dev, lambda t=t, a=dev_norm, b=dev_rest, th=theta:
                     witness_values(trial=t, height_norm=a, restricted=b, theta=th))
    return worst.result()


def _run_st3(ctx: RunContext):
    # The sharp L2(dsigma) -> L2(dx) extension norm is exactly
    # sqrt(p^d / |S|): the composition restriction-after-extension is that
    # constant squared times the identity, and power iteration on the
    # honest two-transform composition converges to the same number.
    worst = _Worst()
    for maker, label in ((paraboloid, "paraboloid"),
                         (hyperbolic_paraboloid, "hyperbolic")):
        S = maker(ctx.field, ctx.dim)
        want = exact_r22(S)
        scale = ctx.prime**ctx.dim / S.size

        def gram(vec, S=S):
            return restriction(extension(SurfaceFunction(S, vec)), S).values

        rng = ctx.trial_rng(0)
        sigma = power_iteration_norm(gram, S.size, rng, tol=1e-10)
        dev_pi = abs(sigma - want) / want
        v = rng.standard_normal(S.size) + 1j * rng.standard_normal(S.size)
        dev_scalar = float(np.abs(gram(v) - scale * v).max()) / scale
        dev = max(dev_pi, dev_scalar)
        worst.update(dev, lambda label=label, a=dev_pi, b=dev_scalar:
                     witness_values(surface=label, power_iteration=a, gram_scalar=b))
    return worst.result()


def _run_st4(ctx: RunContext):
    # Interpolation bookkeeping: with transform decay exponent dt = d - 1
    # and the sharp alpha = 1/2 at q = 2, the transferred exponent
    # max(0, theta alpha - dt (1 - theta)/4) crosses zero exactly at
    # theta = (d-1)/(d+1), which is where q/theta = (2d+2)/(d-1).
    d = ctx.dim
    devs = {}
    th = Fraction(d - 1, d + 1)
    devs["zero_at_threshold"] = abs(stein_tomas_transfer(0.5, float(th), d - 1))
    devs["threshold_exponent"] = float(abs(Fraction(2, 1) / th - Fraction(2 * d + 2, d - 1)))
    above = stein_tomas_transfer(0.5, float(th) + 0.05, d - 1)
    devs["positive_above"] = _pos(1e-15 - above)
    th2 = float(th) + 0.1
    want = 0.5 * th2 - (d - 1) * (1 - th2) / 4
    devs["linear_branch"] = abs(stein_tomas_transfer(0.5, th2, d - 1) - max(0.0, want))
    devs["identity_at_one"] = abs(stein_tomas_transfer(0.5, 1.0, d - 1) - 0.5)
    dev = max(devs.values())
    return dev, witness_values(**devs)


def _run_st5(ctx: RunContext):
    # Decay step: the inverse transform of the surface measure is 1 at the
    # origin and at most p^{-(d-1)/2} in modulus elsewhere; consequently a
    # unimodular function on a set E satisfies
    # ||f-hat||^2_{L2(dsigma)} <= |E| + p^{-(d-1)/2} |E|^2 with constant 1.
    p, d = ctx.prime, ctx.dim
    worst = _Worst()
    for maker, label in ((paraboloid, "paraboloid"),
                         (hyperbolic_paraboloid, "hyperbolic")):
        S = maker(ctx.field, d)
        sig = surface_measure_inverse_ft(S)
        off = np.abs(sig.data).copy()
        off[0] = 0.0
        dev_decay = _pos(float(off.max()) - p ** (-(d - 1) / 2))
        dev_origin = abs(sig.data[0] - 1.0)
        worst.update(max(dev_decay, dev_origin),
                     lambda label=label, a=dev_decay, b=dev_origin:
                     witness_values(surface=label, decay=a, origin=b))
        for t in range(ctx.trials):
            rng = ctx.trial_rng(t)
            k = int(rng.integers(1, p**d))
            idx = _random_support(rng, p**d, k)
            data = np.zeros(p**d, dtype=complex)
            data[idx] = np.exp(2j * np.pi * rng.random(k))
            f = FFunction(ctx.field, d, data)
            lhs = restriction(f, S).norm(2.0) ** 2
            bound = k + p ** (-(d - 1) / 2) * k**2
            dev = _pos(lhs - bound) / max(1.0, bound)
            worst.update(dev, lambda label=label, t=t, k=k:
                         witness_values(surface=label, trial=t, support=k))
    return worst.result()


def _run_st6(ctx: RunContext):
    # Norm bookkeeping for indicators: with alpha = log_p r22 and
    # |E| = p^gamma, the L^{2 gamma/(gamma + 2 alpha)} norm of the indicator
    # equals p^{alpha + gamma/2} exactly, and the restricted transform obeys
    # the exact-r22 height bound.
    p, d = ctx.prime, ctx.dim
    S = paraboloid(ctx.field, d)
    r22 = exact_r22(S)
    alpha = _logp(p, r22)
    worst = _Worst()
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        # gamma >= 1 keeps the derived exponent a genuine Lebesgue index
        k = int(rng.integers(p, p**d))
        idx = _random_support(rng, p**d, k)
        data = np.zeros(p**d, dtype=complex)
        data[idx] = 1.0
        f = FFunction(ctx.field, d, data)
        gamma = _logp(p, k)
        r = 2 * gamma / (gamma + 2 * alpha)
        dev_norm = _rel(lp_norm(f, r), p ** (alpha + gamma / 2))
        lhs = restriction(f, S).norm(2.0)
        bound = r22 * math.sqrt(k)
        dev_rest = _pos(lhs - bound) / max(1.0, bound)
        dev = max(dev_norm, dev_rest)
        worst.update(dev, lambda t=t, k=k, a=dev_norm, b=dev_rest:
                     witness_values(trial=t, support=k, norm_identity=a, height=b))
    return worst.result()


def _run_eq1(ctx: RunContext):
    # Transport across congruent base forms: carrying f through an
    # invertible change of variables preserves every extension L^q(dx)
    # norm and every surface L^q(dsigma) norm exactly.
    field = ctx.field
    d = ctx.dim
    P = paraboloid(field, d)
    H = hyperbolic_paraboloid(field, d)
    M_ph = congruence_between(P, H)
    worst = _Worst()
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        routes = []
        if M_ph is not None:
            routes.append((SurfaceFunction.random(P, rng), M_ph, H, "dot_to_pairing"))
        while True:
            B = random_symmetric(field, d - 1, rng)
            if det_mod(B, ctx.prime) != 0:
                break
        M = random_invertible(field, d - 1, rng)
        S_from = Surface(QuadraticSpace(field, B))
        routes.append((SurfaceFunction.random(S_from, rng), M, None, "random_pair"))
        for f, M0, target, label in routes:
            g = equivalence_transfer(f, M0, target)
            ext_f, ext_g = extension(f), extension(g)
            for qe in (2.0, 8.0 / 3.0, 4.0):
                dev = max(
                    _rel(lp_norm(ext_f, qe), lp_norm(ext_g, qe)),
                    _rel(f.norm(qe), g.norm(qe)),
                )
                worst.update(dev, lambda t=t, label=label, qe=qe:
                             witness_values(trial=t, route=label, q=qe))
    return worst.result()


# ---------------------------------------------------------------------------
# BR: kernel geometry


def _run_br1(ctx: RunContext):
    # A character along a full horizontal line maps, under convolution
    # with the surface kernel, to the same character spread with
    # coefficient 1 over the slope-matched tube.  Exhaustive over all
    # (slope, offset, time) triples.
    p = ctx.prime
    field = ctx.field
    S = hyperbolic_paraboloid(field, 3)
    X = coordinate_array(p, 3)
    worst = _Worst()
    for m in range(p):
        char = np.exp(2j * np.pi * (m * X[:, 0] % p) / p)
        for x2o in range(p):
            for to in range(p):
                data = np.where((X[:, 1] == x2o) & (X[:, 2] == to), char, 0)
                F = FFunction(field, 3, data)
                out = bochner_riesz(F, S, "kernel_only")
                want = char * Tube(field, m, x2o, to).indicator().data
                dev = float(np.abs(out.data - want).max())
                worst.update(dev, lambda m=m, a=x2o, b=to:
                             witness_values(slope=m, offset=a, time=b))
    return worst.result()


def _line_loads(I_pts: np.ndarray, p: int) -> int:
    """Largest intersection of a planar point set with any affine line."""
    best = 0
    u, v = I_pts[:, 0], I_pts[:, 1]
    for c in range(p):
        best = max(best, int((u == c).sum()))
    for a in range(p):
        for b in range(p):
            best = max(best, int(((v - a * u - b) % p == 0).sum()))
    return best


def _run_br2(ctx: RunContext):
    # Slice-superposition bound: F = sum over i in I of a one-line piece
    # delta-slice times a character combination; if every planar line
    # meets I in at most p^u points then ||TF||_2 <= C p^{(1+u)/2} ||F||_2
    # where T convolves with the surface kernel.  C is the tracked
    # constant, measured with u taken from the actual worst line load.
    p = ctx.prime
    field = ctx.field
    S = hyperbolic_paraboloid(field, 3)
    x1 = np.arange(p)
    worst = 0.0
    wit = None
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        if t == 0:
            sel = np.arange(p * p)
        elif t == 1:
            sel = np.array([0])
        elif t == 2:
            sel = np.arange(p)  # one vertical line in the (x2, t) plane
        else:
            k = int(rng.integers(1, p * p + 1))
            sel = _random_support(rng, p * p, k)
        I_pts = np.stack([sel % p, sel // p], axis=1)
        data = np.zeros(p**3, dtype=complex)
        for u, v in I_pts:
            n_char = int(rng.integers(1, 4))
            for m in rng.choice(p, size=min(n_char, p), replace=False):
                a = complex(rng.standard_normal(), rng.standard_normal())
                idx = x1 + int(u) * p + int(v) * p * p
                data[idx] += a * np.exp(2j * np.pi * (int(m) * x1 % p) / p)
        F = FFunction(field, 3, data)
        l2 = lp_norm(F, 2.0)
        if l2 == 0.0:
            continue
        u_exp = _logp(p, max(1, _line_loads(I_pts, p)))
        TF = bochner_riesz(F, S, "kernel_only")
        ratio = lp_norm(TF, 2.0) / (p ** ((1 + u_exp) / 2) * l2)
        if ratio > worst:
            worst = ratio
            wit = witness_values(trial=t, pieces=len(I_pts), u=u_exp, ratio=ratio)
    return worst, wit


def _run_br3(ctx: RunContext):
    # Restricted-norm version: for a unimodular function on a union of
    # horizontal-line pieces of size at least p^beta, with every
    # vertical-horizontal plane holding at most p^alpha points of the
    # support, the surface-restricted transform obeys
    # ||F-hat||_{L2(dsigma)} <= C p^{(1+alpha-beta)/4} ||F||_2.  The exact
    # pairing ||F-hat||^2_{L2(dsigma)} = <F, TF> is certified on the way.
    p = ctx.prime
    field = ctx.field
    S = hyperbolic_paraboloid(field, 3)
    worst = 0.0
    wit = None
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        n_lines = int(rng.integers(1, p + 1))
        sel = _random_support(rng, p * p, n_lines)
        pts = []
        sizes = []
        for s in sel:
            u, v = int(s % p), int(s // p)
            size = int(rng.integers(2, p + 1))
            xs = _random_support(rng, p, size)
            sizes.append(size)
            pts.extend((int(x), u, v) for x in xs)
        data = np.zeros(p**3, dtype=complex)
        coords = np.array(pts)
        flat = coords[:, 0] + coords[:, 1] * p + coords[:, 2] * p * p
        data[flat] = np.exp(2j * np.pi * rng.random(len(pts)))
        F = FFunction(field, 3, data)
        loads = []
        for a in range(p):
            for b in range(p):
                loads.append(int(((coords[:, 1] - a * coords[:, 2] - b) % p == 0).sum()))
                loads.append(int(((coords[:, 0] - a * coords[:, 2] - b) % p == 0).sum()))
        alpha = _logp(p, max(loads))
        beta = _logp(p, min(sizes))
        rest = restriction(F, S)
        pair = abs(inner(F, bochner_riesz(F, S, "kernel_only")))
        if _rel(rest.norm(2.0) ** 2, pair) > 1e-9:
            raise FFLabError("restricted norm does not match the kernel pairing")
        ratio = rest.norm(2.0) / (p ** ((1 + alpha - beta) / 4) * lp_norm(F, 2.0))
        if ratio > worst:
            worst = ratio
            wit = witness_values(trial=t, lines=n_lines, alpha=alpha, beta=beta,
                                 ratio=ratio)
    return worst, wit


# ---------------------------------------------------------------------------
# EN: additive energy


def _brute_energy(pts: list, p: int) -> int:
    arr = [tuple(int(c) for c in row) for row in pts]
    count = 0
    for a in arr:
        for b in arr:
            for c in arr:
                for d in arr:
                    if all((ai + bi - ci - di) % p == 0
                           for ai, bi, ci, di in zip(a, b, c, d)):
                        count += 1
    return count


def _run_en1(ctx: RunContext):
    # The vectorized sum-multiset energy count equals the literal
    # quadruple loop, as integers.
    p = ctx.prime
    worst = _Worst()
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        maker = hyperbolic_paraboloid if t % 2 else paraboloid
        S = maker(ctx.field, 3)
        k = int(rng.integers(2, min(S.size, 12) + 1))
        E = random_surface_subset(S, k, rng)
        fast = additive_energy(E)
        slow = _brute_energy([pt.coords for pt in E], p)
        dev = float(abs(fast - slow))
        worst.update(dev, lambda fast=fast, slow=slow, t=t:
                     witness_values(trial=t, vectorized=fast, quadruple_loop=slow))
    return worst.result()


def _all_subsets_of_surface(S: Surface):
    pts = sorted(S.points)
    for mask in range(1, 2 ** len(pts)):
        yield [pts[i] for i in range(len(pts)) if (mask >> i) & 1]


def _run_en2(ctx: RunContext):
    # Slice-controlled energy: Lambda(E) against
    # |E|^{5/2} + sum_j |E_j|^3 + sum_k |E^k|^3 on the bilinear-graph
    # surface.  Exhaustive over every subset at the baseline prime,
    # random and structured families elsewhere.
    p = ctx.prime
    S = hyperbolic_paraboloid(ctx.field, 3)
    best = 0.0
    wit = None
    if p == 3:
        for pts in _all_subsets_of_surface(S):
            E = PointSet.of(ctx.field, 3, pts)
            sb = energy_slice_bound(E)
            ratio = sb.energy / sb.bound
            if ratio > best:
                best = ratio
                wit = witness_values(size=len(E), ratio=ratio)
        return best, wit
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        k = int(rng.integers(2, S.size + 1))
        E = random_surface_subset(S, k, rng)
        sb = energy_slice_bound(E)
        ratio = sb.energy / sb.bound
        if ratio > best:
            best = ratio
            wit = witness_values(trial=t, size=len(E), ratio=ratio)
    return best, wit


def _run_en3(ctx: RunContext):
    # Spread-pair energy: quadruples whose b, d entries differ in both
    # base coordinates, against |E|^{5/2}.
    p = ctx.prime
    S = hyperbolic_paraboloid(ctx.field, 3)
    best = 0.0
    wit = None
    if p == 3:
        for pts in _all_subsets_of_surface(S):
            E = PointSet.of(ctx.field, 3, pts)
            ratio = off_diagonal_energy(E) / len(E) ** 2.5
            if ratio > best:
                best = ratio
                wit = witness_values(size=len(E), ratio=ratio)
        return best, wit
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        k = int(rng.integers(2, S.size + 1))
        E = random_surface_subset(S, k, rng)
        ratio = off_diagonal_energy(E) / len(E) ** 2.5
        if ratio > best:
            best = ratio
            wit = witness_values(trial=t, size=len(E), ratio=ratio)
    return best, wit


def _run_en4(ctx: RunContext):
    # Fourth-moment identity: for an indicator on the surface,
    # ||extension||_4^4 equals p^d Lambda(E) / |S|^4 exactly, tying the
    # transform side to the quadruple count.
    p, d = ctx.prime, ctx.dim
    worst = _Worst()
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        maker = hyperbolic_paraboloid if t % 2 else paraboloid
        S = maker(ctx.field, d)
        k = int(rng.integers(2, min(S.size, 40) + 1))
        E = random_surface_subset(S, k, rng)
        pts = [pt.coords for pt in E]
        f = SurfaceFunction.from_surface_points(S, pts)
        lhs = lp_norm(extension(f), 4.0) ** 4
        lam = additive_energy(E)
        rhs = p**d * lam / S.size**4
        dev = _rel(lhs, rhs)
        worst.update(dev, lambda t=t, k=k, lam=lam:
                     witness_values(trial=t, size=k, energy=lam))
    return worst.result()


# ---------------------------------------------------------------------------
# IN: incidence reductions


def _run_in1(ctx: RunContext):
    # Shear the surface so a maximizing point moves to the origin; the
    # energy of (A, B) is at most twice the resulting point-hyperplane
    # incidence count times the number of hyperplanes.
    worst = _Worst()
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        maker = hyperbolic_paraboloid if t % 2 else paraboloid
        S = maker(ctx.field, 3)
        A = random_surface_subset(S, int(rng.integers(2, 9)), rng)
        B = random_surface_subset(S, int(rng.integers(2, 9)), rng)
        r = energy_to_incidence(A, B, S)
        bound = 2 * len(r.lines) * r.incidences
        dev = _pos(r.energy - bound) / max(1.0, bound)
        worst.update(dev, lambda t=t, e=r.energy, b=bound:
                     witness_values(trial=t, energy=e, bound=b))
    return worst.result()


def _run_in2(ctx: RunContext):
    # Double counting: incidences of P against a hyperplane multiset L
    # stay under sqrt(c1 |P|) |L| + c2 |P| with the audited c1, c2.
    p, m = ctx.prime, ctx.dim
    worst = _Worst()
    full = all_affine_hyperplanes(ctx.field, m)
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        k = int(rng.integers(1, p**m))
        idx = _random_support(rng, p**m, k)
        X = coordinate_array(p, m)[idx]
        P = PointSet.of(ctx.field, m, [tuple(int(c) for c in row) for row in X])
        if t % 2:
            L = full
        else:
            take = _random_support(rng, len(full.items),
                                   int(rng.integers(1, len(full.items))))
            L = HyperplaneFamily(ctx.field, m, [full.items[i] for i in take])
        audit = incidence_bound_audit(P, L)
        dev = _pos(audit.incidences - audit.bound) / max(1.0, audit.bound)
        worst.update(dev, lambda t=t, i=audit.incidences, b=audit.bound:
                     witness_values(trial=t, incidences=i, bound=b))
    return worst.result()


# ---------------------------------------------------------------------------
# MT: slicing machine


def _run_mt1(ctx: RunContext):
    # Pseudo-conformal transport: convolving a one-slice function with
    # the surface kernel has, after inverting time and swapping the base
    # coordinates, the same pointwise modulus as p times the extension of
    # the slice transplanted onto the surface.
    worst = _Worst()
    p = ctx.prime
    S = hyperbolic_paraboloid(ctx.field, 3)
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        data = np.zeros(p**3, dtype=complex)
        data[: p * p] = rng.standard_normal(p * p)  # the slice t = 0
        h0 = FFunction(ctx.field, 3, data)
        dev = pseudo_conformal_check(h0, S)
        worst.update(dev, lambda t=t: witness_values(trial=t))
    return worst.result()


def _run_mt2(ctx: RunContext):
    # Slice transfer: for an indicator stacked from slices E_z with
    # |Z| = p^s and per-slice extension growth p^alpha at L4, the
    # surface-restricted transform is at most
    # C (p^{3 gamma/8 + n/2 + alpha/2 + s/2} + p^{gamma/2}).  C is tracked.
    p, d = ctx.prime, ctx.dim
    n = (d - 1) // 2
    S = paraboloid(ctx.field, d)
    base_n = p ** (d - 1)
    worst = 0.0
    wit = None
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        zc = int(rng.integers(1, p + 1))
        zs = sorted(int(z) for z in rng.choice(p, size=zc, replace=False))
        base = coordinate_array(p, d - 1)
        pts = []
        alpha = 0.0
        for z in zs:
            size = int(rng.integers(2, max(3, base_n // 2 + 1)))
            sel = _random_support(rng, base_n, min(size, base_n))
            rows = [tuple(int(c) for c in base[i]) for i in sel]
            pts.extend(row + (z,) for row in rows)
            fz = SurfaceFunction.from_surface_points(S, [S.lift(r) for r in rows])
            alpha = max(alpha, _logp(p, lp_norm(extension(fz), 4.0)))
        h = FFunction.indicator(ctx.field, d, pts)
        gamma = _logp(p, len(pts))
        s_exp = _logp(p, zc)
        lhs = restriction(h, S).norm(2.0)
        rhs = p ** (3 * gamma / 8 + n / 2 + alpha / 2 + s_exp / 2) + p ** (gamma / 2)
        ratio = lhs / rhs
        if ratio > worst:
            worst = ratio
            wit = witness_values(trial=t, slices=zc, gamma=gamma, alpha=alpha,
                                 ratio=ratio)
    return worst, wit


# ---------------------------------------------------------------------------
# PL: plane-supported functions


def _run_pl1(ctx: RunContext):
    # Embedding a bivariate function on the plane x2 = a x3 + b and
    # transforming equals shearing its own transform and twisting by the
    # offset character.
    worst = _Worst()
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        f = FFunction.random(ctx.field, 2, rng)
        a = int(rng.integers(0, ctx.prime))
        b = int(rng.integers(0, ctx.prime))
        got = plane_embed_ft(f, a, b)
        want = fourier_transform(plane_embed(f, a, b))
        dev = float(np.abs(got.data - want.data).max()) / max(
            1.0, float(np.abs(want.data).max()))
        worst.update(dev, lambda t=t, a=a, b=b:
                     witness_values(trial=t, slope=a, offset=b))
    return worst.result()


def _run_pl2(ctx: RunContext):
    # Cover-controlled restriction: for an indicator with |E| = p^gamma
    # coverable by p^e vertical-horizontal planes, the surface-restricted
    # L^q norm stays under C (p^{gamma - 1/q} + p^{gamma/2 + e/2}) when
    # gamma <= 2 and C (p^{2 + (gamma-2)/q - 1/q} + p^{gamma/2 + e/2})
    # when gamma > 2.  The greedy cover supplies the entropy witness.
    p = ctx.prime
    S = hyperbolic_paraboloid(ctx.field, 3)
    X = coordinate_array(p, 3)
    worst = 0.0
    wit = None
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        n_planes = int(rng.integers(1, 5))
        pts = set()
        for _ in range(n_planes):
            ptype = int(rng.integers(1, 3))
            a = int(rng.integers(0, p))
            b = int(rng.integers(0, p))
            coord = X[:, 1] if ptype == 1 else X[:, 0]
            mask = (coord - a * X[:, 2] - b) % p == 0
            rows = X[mask]
            keep = rng.random(len(rows)) < 0.7
            if not keep.any():
                keep[int(rng.integers(0, len(rows)))] = True
            pts.update(tuple(int(c) for c in r) for r in rows[keep])
        pts = sorted(pts)
        E = PointSet.of(ctx.field, 3, pts)
        cover = vh_plane_cover(E, budget=len(E))
        e_exp = _logp(p, max(1, len(cover.planes)))
        gamma = _logp(p, len(E))
        F = FFunction.indicator(ctx.field, 3, pts)
        q = 1.5 if t % 2 else 2.0
        lhs = restriction(F, S).norm(q)
        if gamma <= 2:
            main = p ** (gamma - 1 / q)
        else:
            main = p ** (2 + (gamma - 2) / q - 1 / q)
        rhs = main + p ** (gamma / 2 + e_exp / 2)
        ratio = lhs / rhs
        if ratio > worst:
            worst = ratio
            wit = witness_values(trial=t, gamma=gamma, entropy=e_exp, q=q,
                                 ratio=ratio)
    return worst, wit


def _run_pl3(ctx: RunContext):
    # Sharpness of the plane bounds at the dual exponent pair
    # q = 2r/(2r-1): a point mass and a normalized full plane both attain
    # the restricted estimate with constant exactly 1, and the normalized
    # full space lands exactly at p^{-1/(2r)}.
    p = ctx.prime
    field = ctx.field
    S = hyperbolic_paraboloid(field, 3)
    X = coordinate_array(p, 3)
    worst = _Worst()
    rng = ctx.trial_rng(0)
    for r_exp in (1.6, 1.75, 1.8):
        q = 2 * r_exp / (2 * r_exp - 1)
        x0 = tuple(int(c) for c in rng.integers(0, p, size=3))
        f1 = FFunction.delta(field, 3, x0)
        dev1 = max(abs(restriction(f1, S).norm(r_exp) - 1.0),
                   abs(lp_norm(f1, q) - 1.0))
        b = int(rng.integers(0, p))
        plane = np.where(X[:, 1] == b, p ** (-2.0 / q), 0.0).astype(complex)
        f2 = FFunction(field, 3, plane)
        dev2 = max(abs(restriction(f2, S).norm(r_exp) - 1.0),
                   abs(lp_norm(f2, q) - 1.0))
        f3 = FFunction.constant(field, 3, p ** (-3.0 / q))
        dev3 = max(abs(restriction(f3, S).norm(r_exp) - p ** (-1 / (2 * r_exp))),
                   abs(lp_norm(f3, q) - 1.0))
        dev = max(dev1, dev2, dev3)
        worst.update(dev, lambda r=r_exp, a=dev1, b_=dev2, c=dev3:
                     witness_values(r=r, point_mass=a, plane=b_, full_space=c))
    return worst.result()


# ---------------------------------------------------------------------------
# QF: quadratic form classification


_QF1_CACHE: dict = {}


def _qf1_structures(field: PrimeField, m: int):
    key = (field.p, m)
    if key not in _QF1_CACHE:
        p = field.p
        X = coordinate_array(p, m)
        nz = X[np.any(X != 0, axis=1)]
        first = np.argmax(nz != 0, axis=1)
        lead = nz[np.arange(len(nz)), first]
        proj = nz[lead == 1]
        pairs = None
        if m >= 4:
            bases = [W.basis for W in enumerate_subspaces(field, m, 2)]
            pairs = np.stack(bases)
        _QF1_CACHE[key] = (proj, pairs)
    return _QF1_CACHE[key]


def _brute_witt(field: PrimeField, A: np.ndarray) -> int:
    """Largest dimension of a totally isotropic subspace, by direct
    search over projective vectors and echelon plane bases (enough for
    ambient dimension at most 4)."""
    m = A.shape[0]
    p = field.p
    proj, pairs = _qf1_structures(field, m)
    qv = np.einsum("ni,ij,nj->n", proj, A, proj) % p
    w = 1 if bool((qv == 0).any()) else 0
    if w and pairs is not None:
        u, v = pairs[:, 0, :], pairs[:, 1, :]
        qu = np.einsum("ni,ij,nj->n", u, A, u) % p
        qv2 = np.einsum("ni,ij,nj->n", v, A, v) % p
        buv = np.einsum("ni,ij,nj->n", u, A, v) % p
        if bool(((qu == 0) & (qv2 == 0) & (buv == 0)).any()):
            w = 2
    return w


def _run_qf1(ctx: RunContext):
    # Computed isotropy index against exhaustive subspace search, for
    # every diagonal nondegenerate form and a batch of random symmetric
    # nondegenerate forms.
    p, m = ctx.prime, ctx.dim
    field = ctx.field
    mismatches = 0
    first_bad = None
    for diag in itertools.product(range(1, p), repeat=m):
        A = np.diag(np.array(diag, dtype=np.int64))
        got = QuadraticSpace(field, A).witt_index
        want = _brute_witt(field, A)
        if got != want:
            mismatches += 1
            if first_bad is None:
                first_bad = witness_values(diagonal=list(diag), computed=got,
                                           brute=want)
    rng = ctx.trial_rng(0)
    for t in range(ctx.trials):
        while True:
            A = random_symmetric(field, m, rng)
            if det_mod(A, p) != 0:
                break
        got = QuadraticSpace(field, A).witt_index
        want = _brute_witt(field, A)
        if got != want:
            mismatches += 1
            if first_bad is None:
                first_bad = witness_values(matrix=[int(x) for x in A.ravel()],
                                           computed=got, brute=want)
    return float(mismatches), first_bad


def _run_qf2(ctx: RunContext):
    # A complementary isotropic pair admits a dual basis: rows of the
    # pairing basis lie in the complement and pair against the chosen
    # basis of W through the form as exactly the identity matrix.
    p, m = ctx.prime, ctx.dim
    field = ctx.field
    n = m // 2
    worst = _Worst()
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        Q0 = hyperbolic_paraboloid(field, m + 1).Q
        M = random_invertible(field, m, rng)
        A = (M.T @ Q0.A @ M) % p
        Q = QuadraticSpace(field, A)
        iso = sorted(enumerate_max_isotropic(Q), key=lambda W: W.basis.tobytes())
        W = iso[int(rng.integers(0, len(iso)))]
        V = complementary_isotropic(Q, W)
        pair = dual_pairing_basis(Q, W, V)
        gram = (W.basis @ Q.A @ pair.T) % p
        dev = float(np.abs(gram - np.eye(n, dtype=np.int64)).max())
        for row in pair:
            if not V.contains(tuple(int(c) for c in row)):
                dev = max(dev, 1.0)
        worst.update(dev, lambda t=t: witness_values(trial=t))
    return worst.result()


def _run_qf3(ctx: RunContext):
    # Averaging the pairing character over a subspace yields exactly the
    # indicator of the orthogonal complement.
    p, m = ctx.prime, ctx.dim
    field = ctx.field
    worst = _Worst()
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        while True:
            A = random_symmetric(field, m, rng)
            if det_mod(A, p) != 0:
                break
        Q = QuadraticSpace(field, A)
        W = random_subspace(field, m, int(rng.integers(1, m)), rng)
        comp = orthogonal_complement(Q, W)
        for _ in range(4):
            x = tuple(int(c) for c in rng.integers(0, p, size=m))
            got = complement_indicator_character_sum(Q, W, x)
            want = 1.0 if comp.contains(x) else 0.0
            dev = abs(got - want)
            worst.update(dev, lambda t=t, x=x: witness_values(trial=t, point=list(x)))
    return worst.result()


def _run_qf4(ctx: RunContext):
    # Restricting the base form to a random (d-3)-dimensional subspace
    # lands in the allowed (rank, degenerate dim, isotropy) table for the
    # ambient class; fully vanishing restrictions are excluded by the
    # classifier and skipped here.
    d = ctx.dim
    field = ctx.field
    makers = [paraboloid]
    if d % 2:
        makers.append(hyperbolic_paraboloid)
    bad = 0
    first_bad = None
    for maker in makers:
        S = maker(field, d)
        allowed = allowed_subsurface_triples(d, S.Q.witt_index)
        for t in range(ctx.trials):
            rng = ctx.trial_rng(t)
            V = random_subspace(field, d - 1, d - 3, rng)
            try:
                trip = classify_subsurface(S.Q, V)
            except FullyDegenerate:
                continue
            except FFLabError as exc:
                bad += 1
                if first_bad is None:
                    first_bad = witness_values(error=str(exc))
                continue
            if trip not in allowed:
                bad += 1
                if first_bad is None:
                    first_bad = witness_values(triple=list(trip),
                                               witt=S.Q.witt_index)
    return float(bad), first_bad


# ---------------------------------------------------------------------------
# KK: maximal operator and bridges


def _run_kk1(ctx: RunContext):
    # Directional maximal ratio ||F*||_m(normalized) / ||F||_m(counting)
    # over indicator inputs, exhaustive at the baseline prime.
    p, m = ctx.prime, ctx.dim
    field = ctx.field
    total = p**m
    best = 0.0
    wit = None
    if (p, m) == (3, 2):
        for mask in range(1, 2**total):
            vals = np.array([(mask >> i) & 1 for i in range(total)], dtype=complex)
            F = FFunction(field, m, vals)
            r = kk.maximal_ratio(F)
            if r > best:
                best = r
                wit = witness_values(mask=mask, ratio=r)
        return best, wit
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        if t == 0:
            line = kk.AffineLine.of(field, (0,) * (m - 1), tuple(range(1, m)))
            F = line.indicator()
        elif t == 1:
            F = FFunction.constant(field, m, 1.0)
        else:
            density = rng.uniform(0.1, 0.9)
            vals = (rng.random(total) < density).astype(complex)
            if not vals.any():
                vals[0] = 1.0
            F = FFunction(field, m, vals)
        r = kk.maximal_ratio(F)
        if r > best:
            best = r
            wit = witness_values(trial=t, ratio=r)
    return best, wit


def _run_kk2(ctx: RunContext):
    # Duality consistency: the direct maximal-ratio lower bound equals
    # the paired lower bound built from the dual superposition with the
    # conjugate-power weight and the maximizing base map.
    p, m = ctx.prime, ctx.dim
    worst = _Worst()
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        vals = rng.uniform(0.1, 1.0, size=p**m).astype(complex)
        F = FFunction(ctx.field, m, vals)
        for q, pe in ((1.5, 1.5), (2.0, 2.0), (1.25, 3.0)):
            r = kk.dual_consistency(F, q, pe)
            dev = _rel(r.direct_lower, r.paired_lower)
            worst.update(dev, lambda t=t, q=q, pe=pe:
                         witness_values(trial=t, q=q, p_in=pe))
    return worst.result()


def _run_kk3(ctx: RunContext):
    # Weighted base-map embedding: square-root weights with base-map
    # phases extend to a line-and-character assembly whose squared
    # absolute x2-average is the dual line superposition; the exponent
    # chain ties the endpoint pair to the dual pair exactly.
    p, d = ctx.prime, ctx.dim
    n = (d - 1) // 2
    m = n + 1
    field = ctx.field
    worst = _Worst()
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        data = rng.uniform(0.0, 2.0, size=p**n)
        data[rng.random(p**n) < 0.2] = 0.0
        if not data.any():
            data[0] = 1.0
        h = FFunction(field, n, data.astype(complex))
        b = rng.integers(0, p, size=(p**n, n))
        emb = kk.restriction_to_kakeya_embed(h, b, certify=True)
        ext = extension(emb)
        closed = kk.embed_closed_form(h, b)
        dev = float(np.abs(ext.data - closed.data).max())
        worst.update(dev, lambda t=t: witness_values(trial=t))
    ex = kk.restriction_to_kakeya_exponents(m)
    target = Fraction(m - 1, 2 * m - 1)
    chain_dev = 0.0
    if not (ex.prefactor == ex.endpoint == target
            and ex.restriction_q == 2 * ex.dual_q):
        chain_dev = 1.0
    want = p ** ((m - 1) * (1 - 1 / float(ex.dual_p))) * 1.3**2
    got = kk.kakeya_bound_from_restriction(field, m, float(ex.dual_p), 1.3)
    chain_dev = max(chain_dev, _rel(got, want))
    worst.update(chain_dev, witness_values(check="exponent_chain"))
    return worst.result()


def _run_kk4(ctx: RunContext):
    # The parabolic base-map set contains a full line in every direction
    # and its density p ((p+1)/2)^{m-1} / p^m stays above the tracked
    # grid floor (and above the 1/m! envelope).
    m = ctx.dim
    field = ctx.field
    K = kk.standard_kakeya_set(field, m)
    audit = kk.kakeya_set_audit(K)
    density = audit.density
    ok = audit.is_kakeya and density >= kk.dvir_envelope(m) - 1e-12
    if not ok:
        return 0.0, witness_values(is_kakeya=audit.is_kakeya, density=density,
                                   missing=len(audit.missing))
    return density, witness_values(density=density)


# ---------------------------------------------------------------------------
# MX: mixed norms through isotropic pairs


def _iso_pair(S: Surface):
    iso = sorted(enumerate_max_isotropic(S.Q), key=lambda W: W.basis.tobytes())
    W = iso[0]
    return W, complementary_isotropic(S.Q, W)


def _run_mx1(ctx: RunContext):
    # Splitting the frequency sum over a complementary isotropic pair
    # and using the cross-term phase reproduces the extension exactly.
    # The coset route is a literal double sum costing p^{4n+1}, so the
    # trial count scales down deterministically at the largest combos.
    p, d = ctx.prime, ctx.dim
    S = paraboloid(ctx.field, d) if p % 4 == 1 else hyperbolic_paraboloid(ctx.field, d)
    W, V = _iso_pair(S)
    cost = p ** (4 * ((d - 1) // 2) + 1)
    trials = ctx.trials if cost <= 2e7 else (3 if cost <= 5e8 else 1)
    worst = _Worst()
    for t in range(trials):
        rng = ctx.trial_rng(t)
        f = SurfaceFunction.random(S, rng)
        dev = float(np.abs(kk.coset_extension(f, W, V).data - extension(f).data).max())
        worst.update(dev, lambda t=t: witness_values(trial=t))
    return worst.result()


def _run_mx2(ctx: RunContext):
    # Mixed-norm extension constant at the endpoint pair
    # ((2d+2)/(d-1) outer, 2 inner): ratio of output to input mixed norms
    # over indicator inputs, exhaustive at the baseline prime.
    p, d = ctx.prime, ctx.dim
    S = hyperbolic_paraboloid(ctx.field, d)
    W, V = _iso_pair(S)
    base_total = p ** (d - 1)
    best = 0.0
    wit = None
    if (p, d) == (3, 3):
        for mask in range(1, 2**base_total):
            vals = np.array([(mask >> i) & 1 for i in range(base_total)],
                            dtype=complex)
            r = kk.mixed_extension_ratio(SurfaceFunction(S, vals), W, V)
            if r > best:
                best = r
                wit = witness_values(mask=mask, ratio=r)
        return best, wit
    structured = []
    for w in W.point_array():
        pts = [tuple(int(c) for c in (v + w) % p) for v in V.point_array()]
        structured.append(pts)
    for v in V.point_array():
        pts = [tuple(int(c) for c in (w + v) % p) for w in W.point_array()]
        structured.append(pts)
    structured.append([tuple(int(c) for c in row)
                       for row in coordinate_array(p, d - 1)])
    for i, pts in enumerate(structured):
        f = SurfaceFunction.from_surface_points(S, [S.lift(x) for x in pts])
        r = kk.mixed_extension_ratio(f, W, V)
        if r > best:
            best = r
            wit = witness_values(structured=i, ratio=r)
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        vals = (rng.random(base_total) < rng.uniform(0.2, 0.8)).astype(complex)
        if not vals.any():
            vals[0] = 1.0
        r = kk.mixed_extension_ratio(SurfaceFunction(S, vals), W, V)
        if r > best:
            best = r
            wit = witness_values(trial=t, ratio=r)
    return best, wit


def _run_mx3(ctx: RunContext):
    # Slice-regular sets: indicators split into per-slice isotropic
    # pieces obey the restricted-norm exponent
    # gamma/2 + (e+1)/(d+1) + (d-3)/(2d+2); the measured ratio against
    # that exponent is tracked.
    S = hyperbolic_paraboloid(ctx.field, ctx.dim)
    best = 0.0
    wit = None
    for t in range(ctx.trials):
        rng = ctx.trial_rng(t)
        F, dec = kk.random_slice_isotropic_function(S, 2, rng)
        audit = kk.kakeya_regular_set_bound(F, S, dec)
        if audit.ratio > best:
            best = audit.ratio
            wit = witness_values(trial=t, gamma=audit.gamma, pieces=audit.e_exp,
                                 ratio=audit.ratio)
    return best, wit


# ---------------------------------------------------------------------------
# EX: energy exponent curves


def _run_ex1(ctx: RunContext):
    # Closed-form exponent spots: the three-dimensional curve gives 5/2
    # at 3/4, the five-dimensional curve gives 23/8 at 9/16, both hit 3
    # at 1, the degenerate lift equals 3a + Psi(a)(1-a), and arguments
    # below a validity window are rejected.
    devs = {}
    devs["dim3_spot"] = abs(energy_exponent_closed("dim3_witt1", 0.75) - 2.5)
    devs["dim5_spot"] = abs(energy_exponent_closed("dim5_witt2", 0.5625) - 23 / 8)
    devs["dim3_end"] = abs(energy_exponent_closed("dim3_witt1", 1.0) - 3.0)
    devs["dim5_end"] = abs(energy_exponent_closed("dim5_witt2", 1.0) - 3.0)
    curve = closed_form_curve("dim3_witt1")
    for a in (0.75, 0.875, 1.0):
        got = energy_exponent_recurse(curve, a, variant="degenerate_lift").value
        want = 3 * a + curve(a) * (1 - a)
        devs[f"lift_{a}"] = abs(got - want)
    try:
        energy_exponent_closed("dim3_witt1", 0.5)
        devs["window_guard"] = 1.0
    except OutOfValidityRange:
        devs["window_guard"] = 0.0
    dev = max(devs.values())
    return dev, witness_values(**{k: v for k, v in devs.items()})


def _run_ex2(ctx: RunContext):
    # The dimension-recursion output is nondecreasing in the isotropy
    # exponent and pinned to 3 at the right endpoint; against a constant
    # inner curve the balance point solves 4.5 rho = 1.5 + psi exactly.
    devs = {}
    cur = recursion_curve(closed_form_curve("dim3_witt1"))
    vals = cur.psi_values
    devs["monotone"] = max(_pos(a - b) for a, b in zip(vals, vals[1:]))
    devs["endpoint"] = abs(cur(1.0) - 3.0)
    r = energy_exponent_recurse(2.5, 0.8)
    devs["constant_rho"] = abs(r.rho - 8 / 9)
    devs["constant_value"] = abs(r.value - 53 / 18)
    devs["no_root_flag"] = 1.0 if r.no_root else 0.0
    dev = max(devs.values())
    return dev, witness_values(**devs)


def _run_ex3(ctx: RunContext):
    # Empirical scatter: structured and random surface subsets have
    # measured energy exponents; the tracked constant is the worst
    # multiplicative overshoot of a sample's energy over size^psi(alpha).
    S = hyperbolic_paraboloid(ctx.field, ctx.dim)
    seed_int = trial_seed(ctx.seed, ctx.scenario_id, 0)
    samples = sample_energy_exponents(S, trials=ctx.trials, seed=seed_int,
                                      slack=0.2)
    best = 0.0
    wit = None
    for s in samples:
        over = s.size ** (s.exponent - (s.bound - 0.2))
        if over > best:
            best = over
            wit = witness_values(label=s.label, size=s.size, alpha=s.alpha,
                                 exponent=s.exponent)
    return best, wit


def _run_main1(ctx: RunContext):
    # The rendered exponent landscape carries the pinned values: the
    # d = 3 improved pair (18/5, 9/4) with gain 4/10, the d = 5 threshold
    # 47/31, the Stein-Tomas rows, the conjectured endpoints, and
    # measured sharp transform norms labeled against their asymptotic.
    table = exponent_table()
    required = ["Stein-Tomas", "18/5", "9/4", "4/10", "47/31",
                "(2d+2)/(d-1)", "2d/(d-1)", "measured", "asymptotic",
                "conjectured"]
    missing = [tok for tok in required if tok not in table]
    dev = float(len(missing))
    for p in (3, 5):
        v = exact_r22(paraboloid(PrimeField(p), 3))
        if f"{v:.12g}" not in table:
            dev += 1.0
            missing.append(f"r22(p={p})")
    wit = witness_values(missing=", ".join(missing)) if missing else None
    return dev, wit


# ---------------------------------------------------------------------------
# the registry


@dataclass(frozen=True)
class Scenario:
    id: str
    kind: str
    claim: str
    runner: Callable
    primes: tuple
    dims: tuple
    default_trials: int
    tolerance: float = 1e-9
    direction: Optional[str] = None      # constant_tracked: upper | floor
    provenance: Optional[tuple] = None   # constant_tracked: (p, d, trials, seed)

    def __post_init__(self):
        if self.kind not in ("exact_identity", "constant_tracked",
                             "exponent_arith"):
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        if self.kind == "constant_tracked":
            if self.direction not in ("upper", "floor") or self.provenance is None:
                raise ValueError(f"{self.id}: tracked scenarios need a "
                                 "direction and provenance")


def _registry() -> dict:
    scns = [
        Scenario(
            "FT-1", "exact_identity",
            "inverse transform of the hyperbolic-paraboloid surface measure "
            "matches its closed form (1 at the origin, 0 on the rest of the "
            "time-zero slice, p^{-n} times a ratio character elsewhere) at "
            "every point",
            _run_ft1, (3, 5, 7), (3, 5), 1),
        Scenario(
            "FT-2", "exact_identity",
            "inverse transform of the dot-form paraboloid surface measure "
            "matches its quadratic Gauss sum closed form at every point",
            _run_ft2, (3, 5, 7), (3, 5), 1),
        Scenario(
            "FT-3", "exact_identity",
            "Plancherel, inversion, and the convolution product rule hold "
            "for the transform pair on random inputs",
            _run_ft3, (3, 5, 7), (2, 3, 4), 20),
        Scenario(
            "ST-1", "exact_identity",
            "support-size step with constant 1: the squared restricted "
            "transform norm equals the kernel pairing, is controlled by "
            "||f||_2^2 + p^{-(d-1)/2} ||f||_1^2, and obeys "
            "1 + p^{-(d-1)/4} lam^{-theta/(q-theta)} under the height floor "
            "and unit dual normalization",
            _run_st1, (3, 5, 7), (3, 5), 20),
        Scenario(
            "ST-2", "exact_identity",
            "height step with constant 1: under unit dual normalization and "
            "||f||_inf <= lam, the dual norm is at most "
            "lam^{(1-theta)/(q-theta)} and the restricted transform is at "
            "most the sharp two-norm constant times that height power",
            _run_st2, (3, 5, 7), (3, 5), 20),
        Scenario(
            "ST-3", "exact_identity",
            "the sharp L2(dsigma) to L2(dx) extension norm is exactly "
            "sqrt(p^d/|S|): the restriction-after-extension composition is "
            "that constant squared times the identity and power iteration "
            "converges to the formula",
            _run_st3, (3, 5), (3, 5), 1, tolerance=1e-6),
        Scenario(
            "ST-4", "exponent_arith",
            "interpolation bookkeeping: the transferred decay exponent "
            "max(0, theta/2 - (d-1)(1-theta)/4) vanishes exactly at "
            "theta = (d-1)/(d+1), where the widened exponent equals "
            "(2d+2)/(d-1)",
            _run_st4, (3, 5, 7), (3, 5, 7), 1, tolerance=1e-12),
        Scenario(
            "ST-5", "exact_identity",
            "decay step: the surface kernel is 1 at the origin and at most "
            "p^{-(d-1)/2} elsewhere, so unimodular functions on E obey "
            "||f-hat||^2_{L2(dsigma)} <= |E| + p^{-(d-1)/2}|E|^2",
            _run_st5, (3, 5, 7), (3, 5), 12),
        Scenario(
            "ST-6", "exact_identity",
            "indicator bookkeeping: with alpha = log_p of the sharp "
            "two-norm constant and |E| = p^gamma, the "
            "L^{2 gamma/(gamma+2 alpha)} norm equals p^{alpha + gamma/2} "
            "exactly and the restricted transform obeys the height bound",
            _run_st6, (3, 5, 7), (3, 5), 20),
        Scenario(
            "EQ-1", "exact_identity",
            "congruent base forms give isometric restriction problems: "
            "composing with the change of variables preserves extension "
            "L^q(dx) norms and surface L^q(dsigma) norms exactly",
            _run_eq1, (5, 7, 13), (3,), 10),
        Scenario(
            "BR-1", "exact_identity",
            "a character along a horizontal line convolves with the "
            "surface kernel to the same character with coefficient 1 on "
            "the slope-matched tube, for every slope, offset, and time",
            _run_br1, (3, 5, 7), (3,), 1),
        Scenario(
            "BR-2", "constant_tracked",
            "slice superposition: when every planar line meets the index "
            "set in at most p^u points, the kernel convolution of the "
            "line-character stack has L2 norm at most C p^{(1+u)/2} times "
            "the input L2 norm; C is tracked",
            _run_br2, (3, 5), (3,), 12,
            direction="upper", provenance=(3, 3, 12, 0)),
        Scenario(
            "BR-3", "constant_tracked",
            "restricted version: unimodular functions on unions of "
            "horizontal-line pieces of size at least p^beta with "
            "vertical-horizontal plane loads at most p^alpha obey "
            "||F-hat||_{L2(dsigma)} <= C p^{(1+alpha-beta)/4} ||F||_2, "
            "certifying the exact kernel pairing on the way; C is tracked",
            _run_br3, (3, 5), (3,), 12,
            direction="upper", provenance=(3, 3, 12, 0)),
        Scenario(
            "EN-1", "exact_identity",
            "the vectorized additive-energy count equals the literal "
            "quadruple loop as integers on random surface subsets",
            _run_en1, (3, 5, 7), (3,), 30),
        Scenario(
            "EN-2", "constant_tracked",
            "slice-controlled energy on the bilinear graph: Lambda(E) "
            "against |E|^{5/2} + sum of cubed slice sizes in both "
            "directions; tracked ratio, exhaustive at the baseline prime",
            _run_en2, (3, 5, 7), (3,), 40,
            direction="upper", provenance=(3, 3, 1, 0)),
        Scenario(
            "EN-3", "constant_tracked",
            "spread-pair energy against |E|^{5/2}: quadruples whose "
            "second pair differs in both base coordinates; tracked ratio, "
            "exhaustive at the baseline prime",
            _run_en3, (3, 5, 7), (3,), 40,
            direction="upper", provenance=(3, 3, 1, 0)),
        Scenario(
            "EN-4", "exact_identity",
            "fourth-moment identity: ||extension of an indicator||_4^4 "
            "equals p^d Lambda(E) / |S|^4 exactly",
            _run_en4, (3, 5, 7), (3, 5), 15),
        Scenario(
            "IN-1", "exact_identity",
            "energy-to-incidence reduction: after shearing a maximizing "
            "point to the origin, Lambda(A, B) is at most twice the "
            "hyperplane count times the incidence count",
            _run_in1, (3, 5, 7), (3,), 15),
        Scenario(
            "IN-2", "exact_identity",
            "double counting: point-hyperplane incidences stay under "
            "sqrt(c1 |P|) |L| + c2 |P| with the audited overlap and "
            "multiplicity constants",
            _run_in2, (3, 5, 7), (2, 3), 15),
        Scenario(
            "MT-1", "exact_identity",
            "pseudo-conformal transport: kernel convolution of a one-slice "
            "function matches p times the extension of the transplanted "
            "slice in pointwise modulus after inverting time",
            _run_mt1, (3, 5, 7), (3,), 25),
        Scenario(
            "MT-2", "constant_tracked",
            "slice transfer at the 4/3-4 duality pair: stacked slice "
            "indicators with measured per-slice extension growth p^alpha "
            "obey ||h-hat||_{L2(dsigma)} <= C (p^{3 gamma/8 + n/2 + "
            "alpha/2 + s/2} + p^{gamma/2}); C is tracked",
            _run_mt2, (3, 5), (3, 5), 10,
            direction="upper", provenance=(3, 3, 10, 0)),
        Scenario(
            "PL-1", "exact_identity",
            "plane embedding transform identity: embedding f on the plane "
            "x2 = a x3 + b and transforming equals shearing the planar "
            "transform and twisting by the offset character",
            _run_pl1, (3, 5, 7), (3,), 25),
        Scenario(
            "PL-2", "constant_tracked",
            "cover-controlled restriction: indicators coverable by p^e "
            "vertical-horizontal planes obey the two-branch bound "
            "p^{gamma-1/q} (or p^{2+(gamma-2)/q-1/q}) + p^{gamma/2+e/2}; "
            "the tracked constant uses the greedy cover as the entropy "
            "witness",
            _run_pl2, (3, 5, 7), (3,), 15,
            direction="upper", provenance=(3, 3, 15, 0)),
        Scenario(
            "PL-3", "exact_identity",
            "sharpness at the dual pair q = 2r/(2r-1): a point mass and a "
            "normalized full plane attain the restricted estimate with "
            "constant exactly 1, and the normalized full space lands at "
            "p^{-1/(2r)}",
            _run_pl3, (3, 5, 7), (3,), 1),
        Scenario(
            "QF-1", "exact_identity",
            "computed isotropy index matches exhaustive subspace search "
            "for every diagonal nondegenerate form and random symmetric "
            "forms",
            _run_qf1, (3, 5, 7), (2, 3, 4), 10),
        Scenario(
            "QF-2", "exact_identity",
            "complementary isotropic pairs admit a dual basis whose form "
            "pairing against the chosen basis is exactly the identity "
            "matrix",
            _run_qf2, (3, 5, 7), (2, 4), 25),
        Scenario(
            "QF-3", "exact_identity",
            "averaging the pairing character over a subspace equals the "
            "indicator of its orthogonal complement",
            _run_qf3, (3, 5, 7), (2, 3, 4), 20),
        Scenario(
            "QF-4", "exact_identity",
            "every (d-3)-dimensional subspace restriction of a base form "
            "lands in the allowed (rank, degenerate dim, isotropy) "
            "classification table",
            _run_qf4, (3, 5, 7), (4, 5), 20),
        Scenario(
            "KK-1", "constant_tracked",
            "directional maximal ratio over indicator inputs at the "
            "m-norm pair; exhaustive over all indicators at the baseline "
            "prime, structured plus random families elsewhere",
            _run_kk1, (3, 5, 7, 11, 13), (2, 3), 30,
            direction="upper", provenance=(3, 2, 1, 0)),
        Scenario(
            "KK-2", "exact_identity",
            "duality consistency: the direct maximal-ratio lower bound "
            "equals the paired bound built from the conjugate-power dual "
            "superposition at the maximizing bases",
            _run_kk2, (3, 5, 7), (2, 3), 15),
        Scenario(
            "KK-3", "exact_identity",
            "base-map embedding: the extension of the square-root-weight "
            "embed equals its line-and-character closed form, the "
            "x2-collapse equals the dual superposition, and the exponent "
            "chain ties the endpoint pair (m-1)/(2m-1) to the dual pair",
            _run_kk3, (3, 5), (3, 5), 15),
        Scenario(
            "KK-4", "constant_tracked",
            "direction-complete audit: the parabolic base-map set covers "
            "every direction and its density p((p+1)/2)^{m-1}/p^m stays "
            "at or above the tracked grid floor (and the 1/m! envelope)",
            _run_kk4, (3, 5, 7, 11, 13), (2, 3), 1,
            direction="floor", provenance=(13, 3, 1, 0)),
        Scenario(
            "MX-1", "exact_identity",
            "coset reparameterization: splitting frequencies over a "
            "complementary isotropic pair with the cross-term phase "
            "reproduces the extension exactly",
            _run_mx1, (3, 5, 13), (3, 5), 15),
        Scenario(
            "MX-2", "constant_tracked",
            "mixed-norm extension constant at the endpoint pair "
            "((2d+2)/(d-1) outer, 2 inner) over indicator inputs; "
            "exhaustive at the baseline prime",
            _run_mx2, (3, 5, 7), (3, 5), 20,
            direction="upper", provenance=(3, 3, 1, 0)),
        Scenario(
            "MX-3", "constant_tracked",
            "slice-regular indicators against the exponent "
            "gamma/2 + (e+1)/(d+1) + (d-3)/(2d+2): tracked worst ratio "
            "over seeded slice-isotropic decompositions",
            _run_mx3, (3, 5), (3, 5), 8,
            direction="upper", provenance=(3, 3, 8, 0)),
        Scenario(
            "EX-1", "exponent_arith",
            "energy exponent closed forms: 5/2 at 3/4 (three dimensions), "
            "23/8 at 9/16 (five dimensions), 3 at the right endpoint, the "
            "degenerate lift 3a + psi(a)(1-a), and validity-window guards",
            _run_ex1, (3,), (3, 5), 1, tolerance=1e-12),
        Scenario(
            "EX-2", "exponent_arith",
            "the dimension recursion is nondecreasing, pinned to 3 at the "
            "right endpoint, and balances 4.5 rho = 1.5 + psi exactly "
            "against a constant inner curve",
            _run_ex2, (3,), (3, 5), 1, tolerance=1e-9),
        Scenario(
            "EX-3", "constant_tracked",
            "empirical energy scatter: worst multiplicative overshoot of "
            "measured energy over size^psi(alpha) across structured and "
            "random surface subsets; tracked",
            _run_ex3, (3, 5, 7), (3, 5), 20,
            direction="upper", provenance=(3, 3, 20, 0)),
        Scenario(
            "MAIN-1", "exponent_arith",
            "the rendered exponent landscape pins the improved pair "
            "(18/5, 9/4) with gain 4/10, the five-dimensional threshold "
            "47/31, the Stein-Tomas rows, the conjectured endpoints, and "
            "measured sharp two-norm constants labeled against their "
            "asymptotics",
            _run_main1, (3, 5), (3,), 1, tolerance=0.5),
    ]
    reg = {}
    for sc in scns:
        if sc.id in reg:
            raise ValueError(f"duplicate scenario id {sc.id}")
        reg[sc.id] = sc
    return reg


REGISTRY = _registry()


# ---------------------------------------------------------------------------
# execution


def run_scenario(scenario_id: str, prime: Optional[int] = None,
                 dim: Optional[int] = None, trials: Optional[int] = None,
                 seed: int = 0) -> ScenarioReport:
    """Execute one scenario at one parameter point.

    Results are deterministic in (scenario_id, prime, dim, trials, seed):
    randomness flows through the per-trial fan-out hash only.
    """
    if scenario_id not in REGISTRY:
        known = ", ".join(sorted(REGISTRY))
        raise UnknownScenario(f"unknown scenario id {scenario_id!r}; "
                              f"registered ids: {known}")
    sc = REGISTRY[scenario_id]
    prime = sc.primes[0] if prime is None else prime
    dim = sc.dims[0] if dim is None else dim
    trials = sc.default_trials if trials is None else trials
    if prime not in sc.primes:
        raise ValueError(f"{scenario_id} runs at primes {sc.primes}, not {prime}")
    if dim not in sc.dims:
        raise ValueError(f"{scenario_id} runs at dims {sc.dims}, not {dim}")
    if trials < 1:
        raise ValueError("trials must be at least 1")

    ctx = RunContext(scenario_id, prime, dim, trials, seed)
    start = time.perf_counter()

    if sc.kind == "constant_tracked":
        store = BaselineStore.load()
        entry = store.entry(scenario_id)
        store.verify(scenario_id, sc.runner)
        metric, wit = sc.runner(ctx)
        runtime_ms = (time.perf_counter() - start) * 1e3
        if (prime, dim, trials, seed) == entry.provenance():
            drift = abs(metric - entry.constant)
            if drift > 1e-9:
                status, witness = "fail", witness_values(
                    measured=metric, stored=entry.constant, drift=drift)
            else:
                status, witness = "report_only", None
        else:
            if sc.direction == "upper":
                ok = metric <= store.slack * entry.constant + 1e-12
            else:
                ok = metric >= entry.constant - 1e-12
            status = "pass" if ok else "fail"
            witness = None if ok else (wit or witness_values(
                measured=metric, baseline=entry.constant))
        return ScenarioReport(
            scenario=scenario_id, kind=sc.kind, prime=prime, dim=dim,
            trials=trials, seed=seed, status=status,
            metric_name="measured_constant", metric=float(metric),
            baseline_constant=entry.constant, baseline_slack=store.slack,
            witness=witness, runtime_ms=runtime_ms)

    metric, wit = sc.runner(ctx)
    runtime_ms = (time.perf_counter() - start) * 1e3
    status = "pass" if metric <= sc.tolerance else "fail"
    witness = None
    if status == "fail":
        witness = wit or witness_values(max_deviation=float(metric))
    return ScenarioReport(
        scenario=scenario_id, kind=sc.kind, prime=prime, dim=dim,
        trials=trials, seed=seed, status=status,
        metric_name="max_deviation", metric=float(metric),
        tolerance=sc.tolerance, witness=witness, runtime_ms=runtime_ms)


def sweep(ids, primes, dims, trials: Optional[int] = None, seed: int = 0):
    """Run the cross product of ids with the primes and dims each
    scenario supports.  Returns (reports, any_failed).

    Baseline integrity for every tracked id in the list is checked
    before any scenario executes; a missing baseline becomes a failing
    report with an actionable message rather than an abort.
    """
    ids = list(ids)
    store = BaselineStore.load()
    missing: dict = {}
    for sid in ids:
        if sid not in REGISTRY:
            known = ", ".join(sorted(REGISTRY))
            raise UnknownScenario(f"unknown scenario id {sid!r}; "
                                  f"registered ids: {known}")
        sc = REGISTRY[sid]
        if sc.kind == "constant_tracked":
            try:
                store.entry(sid)
            except BaselineMissing as exc:
                missing[sid] = str(exc)
                continue
            store.verify(sid, sc.runner)

    reports = []
    for sid in ids:
        sc = REGISTRY[sid]
        ps = [p for p in primes if p in sc.primes]
        ds = [d for d in dims if d in sc.dims]
        if sid in missing:
            reports.append(ScenarioReport(
                scenario=sid, kind=sc.kind, prime=ps[0] if ps else sc.primes[0],
                dim=ds[0] if ds else sc.dims[0],
                trials=trials or sc.default_trials, seed=seed, status="fail",
                metric_name="measured_constant", metric=0.0,
                witness=witness_values(error=missing[sid])))
            continue
        for p in ps:
            for d in ds:
                reports.append(run_scenario(sid, prime=p, dim=d,
                                            trials=trials, seed=seed))
    failed = any(r.status == "fail" for r in reports)
    return reports, failed


def regenerate_baselines(ids=None, path=None) -> BaselineStore:
    """Recompute tracked constants at their provenance parameters and
    rewrite the store (constants plus runner source hashes)."""
    from .baselines import BaselineEntry

    store = BaselineStore.load(path)
    tracked = [sid for sid, sc in REGISTRY.items()
               if sc.kind == "constant_tracked"]
    todo = list(ids) if ids else tracked
    for sid in todo:
        if sid not in REGISTRY:
            raise UnknownScenario(f"unknown scenario id {sid!r}")
        sc = REGISTRY[sid]
        if sc.kind != "constant_tracked":
            raise ValueError(f"{sid} is {sc.kind}, not constant_tracked")
        p, d, tr, sd = sc.provenance
        ctx = RunContext(sid, p, d, tr, sd)
        metric, _ = sc.runner(ctx)
        store.entries[sid] = BaselineEntry(
            constant=float(metric), prime=p, dim=d, trials=tr, seed=sd,
            oracle_hash=oracle_hash(sc.runner))
    store.save(path)
    return store


def exponent_table() -> str:
    """Rendered exponent landscape with measured sharp constants."""
    lines = []
    lines.append("restriction exponent landscape, paraboloid family, d = 2n+1")
    lines.append("R*(q -> r) means: extension maps L^r(dsigma) into L^q(dx)")
    lines.append("")
    lines.append("d = 3")
    lines.append("  Stein-Tomas            q = 4       r = 2")
    lines.append("  tracked improvement    q = 18/5    r = 9/4   "
                 "(gain delta_3 = 4/10 off the q = 4 row)")
    lines.append("  conjectured            q = 3       r = 3")
    lines.append("d = 5")
    lines.append("  Stein-Tomas            q = 3       r = 2")
    lines.append("  tracked improvement    q < 47/31   r = 2")
    lines.append("  conjectured            q = 5/2     r = 5/2")
    lines.append("general odd d")
    lines.append("  Stein-Tomas            q = (2d+2)/(d-1)")
    lines.append("  conjectured            q = 2d/(d-1)")
    lines.append("")
    lines.append("sharp R*(2 -> 2), measured at desk scale vs the "
                 "asymptotic sqrt(p):")
    for p in (3, 5):
        v = exact_r22(paraboloid(PrimeField(p), 3))
        lines.append(f"  p = {p}, d = 3:  measured = {v:.12g}   "
                     f"asymptotic = {math.sqrt(p):.12g}")
    return "\n".join(lines) + "\n"
