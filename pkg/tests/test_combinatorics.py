"""Energy, incidence and exponent machinery against brute-force oracles.

Energies are integers, so the pairwise-sum count, the Fourier route and the
literal four-fold loop must agree on the nose.  The frozen numbers below
(297, 4, 11/15, 1/2, ...) come from one-time exhaustive enumerations over
the 9-point bilinear graph surface at p = 3; they are baselines, not
conjectures, and any drift is a regression.
"""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fflab.combinatorics import (
    EnergyExponent,
    HyperplaneFamily,
    PointSet,
    additive_energy,
    all_affine_hyperplanes,
    base_projection,
    closed_form_curve,
    energy_exponent_closed,
    energy_exponent_recurse,
    energy_slice_bound,
    energy_to_incidence,
    full_surface_point_set,
    greedy_decompose,
    incidence_bound_audit,
    incidence_count,
    isotropic_slice_alpha,
    max_isotropic_slice,
    minimum_vh_cover_size,
    off_diagonal_energy,
    random_surface_subset,
    recursion_curve,
    sample_energy_exponents,
    surface_point_set,
    vh_plane_cover,
    vh_profile,
)
from fflab.core import FFVector, PrimeField
from fflab.errors import (
    FFLabError,
    NotOnSurface,
    OutOfValidityRange,
    SizeOverflow,
)
from fflab.qforms import (
    QuadraticSpace,
    Subspace,
    dot_form,
    enumerate_subspaces,
    galilean,
    hyperbolic_pairing_form,
    is_totally_isotropic,
)
from fflab.surfaces import (
    Surface,
    congruence_between,
    hyperbolic_paraboloid,
    paraboloid,
)

F3 = PrimeField(3)
F5 = PrimeField(5)
F7 = PrimeField(7)


def quadruple_loop(A: PointSet, B: PointSet = None) -> int:
    """Literal O(|A|^2 |B|^2) count of a + b = c + d, the ground truth."""
    if B is None:
        B = A
    total = 0
    for a in A:
        for b in B:
            sab = (a + b).coords
            for c in A:
                for d in B:
                    if (c + d).coords == sab:
                        total += 1
    return total


def off_diagonal_loop(E: PointSet) -> int:
    """Literal count of a + b = c + d with b, d split in both base coords."""
    total = 0
    for a, b, c, d in itertools.product(E, repeat=4):
        if (a + b).coords == (c + d).coords:
            if b.coords[0] != d.coords[0] and b.coords[1] != d.coords[1]:
                total += 1
    return total


def all_subsets(pts, max_size=None):
    hi = len(pts) if max_size is None else max_size
    for r in range(1, hi + 1):
        yield from itertools.combinations(pts, r)


# ---------------------------------------------------------------------------
# point sets


def test_pointset_dedups_sorts_and_searches():
    E = PointSet.of(F3, 2, [(2, 1), (0, 0), (2, 1), (1, 2), (0, 0)])
    assert len(E) == 3
    assert [v.coords for v in E] == [(0, 0), (1, 2), (2, 1)]
    assert (1, 2) in E and (2, 1) in E
    assert (1, 1) not in E
    assert (4, 5) in E  # reduced mod 3 to (1, 2)
    assert E.matrix().tolist() == [[0, 0], [1, 2], [2, 1]]


def test_pointset_constructor_rejects_disorder():
    a = FFVector((1, 0), F3)
    b = FFVector((0, 1), F3)
    with pytest.raises(ValueError):
        PointSet(F3, 2, (a, b))  # not sorted
    with pytest.raises(ValueError):
        PointSet(F3, 2, (b, b))  # duplicate
    with pytest.raises(ValueError):
        PointSet(F3, 3, (b,))  # wrong dimension


def test_pointset_translate_is_a_bijection():
    E = PointSet.of(F5, 2, [(0, 0), (1, 2), (3, 3), (4, 1)])
    T = E.translate((2, 4))
    assert len(T) == len(E)
    back = T.translate((3, 1))  # additive inverse of (2, 4) mod 5
    assert [v.coords for v in back] == [v.coords for v in E]


def test_surface_point_set_validation():
    S = hyperbolic_paraboloid(F3, 3)
    full = full_surface_point_set(S)
    assert len(full) == 9
    with pytest.raises(NotOnSurface):
        surface_point_set(S, [(1, 1, 0)])
    proj = base_projection(full)
    assert proj.dim == 2 and len(proj) == 9
    rng = np.random.default_rng(3)
    sub = random_surface_subset(S, 4, rng)
    assert len(sub) == 4 and all(S.contains(v.coords) for v in sub)
    with pytest.raises(ValueError):
        random_surface_subset(S, 10, rng)


# ---------------------------------------------------------------------------
# additive energy


def test_energy_matches_literal_loop_small_random():
    rng = np.random.default_rng(17)
    for p, d in [(3, 2), (5, 2), (7, 1), (5, 3)]:
        F = PrimeField(p)
        for _ in range(6):
            pts = {tuple(rng.integers(0, p, size=d)) for _ in range(rng.integers(1, 6))}
            E = PointSet.of(F, d, pts)
            want = quadruple_loop(E)
            assert additive_energy(E) == want
            assert additive_energy(E, method="fourier") == want


def test_energy_two_sets_matches_literal_loop():
    rng = np.random.default_rng(23)
    F = PrimeField(5)
    for _ in range(8):
        A = PointSet.of(F, 2, {tuple(rng.integers(0, 5, 2)) for _ in range(4)})
        B = PointSet.of(F, 2, {tuple(rng.integers(0, 5, 2)) for _ in range(3)})
        want = quadruple_loop(A, B)
        assert additive_energy(A, B) == want
        assert additive_energy(A, B, method="fourier") == want
    with pytest.raises(ValueError):
        additive_energy(A, PointSet.of(F3, 2, [(0, 0)]))


def test_energy_fourier_equals_loop_exhaustively_at_p3():
    S = hyperbolic_paraboloid(F3, 3)
    pts = sorted(S.points)
    for combo in all_subsets(pts):
        E = PointSet.of(F3, 3, combo)
        assert additive_energy(E) == additive_energy(E, method="fourier")


def test_energy_trivia_and_frozen_full_surface_value():
    S = hyperbolic_paraboloid(F3, 3)
    one = surface_point_set(S, [(1, 1, 1)])
    assert additive_energy(one) == 1
    assert additive_energy(PointSet.of(F3, 3, [])) == 0
    # a full affine subspace of size m has energy exactly m^3
    V = Subspace(F3, [(1, 0, 0), (0, 1, 0)], translate=(0, 0, 2))
    cube = PointSet.of(F3, 3, (tuple(r) for r in V.point_array()))
    assert additive_energy(cube) == 9 ** 3
    # whole bilinear surface at p = 3, frozen by exhaustive count
    assert additive_energy(full_surface_point_set(S)) == 297


def test_energy_invariant_under_translation_and_dilation():
    rng = np.random.default_rng(5)
    E = PointSet.of(F7, 2, {tuple(rng.integers(0, 7, 2)) for _ in range(8)})
    lam = additive_energy(E)
    for t in [(1, 3), (6, 6), (0, 2)]:
        assert additive_energy(E.translate(t)) == lam
    for unit in range(1, 7):
        D = PointSet.of(F7, 2, ((unit * v.coords[0] % 7, unit * v.coords[1] % 7) for v in E))
        assert additive_energy(D) == lam


def test_energy_quasi_triangle_and_fourth_root_subadditive():
    rng = np.random.default_rng(41)
    for _ in range(12):
        pts = list({tuple(rng.integers(0, 5, 2)) for _ in range(rng.integers(4, 12))})
        rng.shuffle(pts)
        k = int(rng.integers(2, 5))
        parts = [pts[i::k] for i in range(k)]
        parts = [q for q in parts if q]
        union = PointSet.of(F5, 2, pts)
        lam = additive_energy(union)
        energies = [additive_energy(PointSet.of(F5, 2, q)) for q in parts]
        assert lam <= len(parts) ** 4 * max(energies)
        assert lam ** 0.25 <= sum(e ** 0.25 for e in energies) + 1e-9
        # piecewise exponent bound: Lambda <= |I|^(4-beta) |E|^beta for any
        # beta with Lambda_i <= |E_i|^beta on every piece
        beta = max(
            (math.log(e) / math.log(len(q)) for e, q in zip(energies, parts) if len(q) > 1),
            default=0.0,
        )
        assert lam <= len(parts) ** (4 - beta) * len(union) ** beta + 1e-6


def test_energy_invariant_under_surface_shear():
    S = hyperbolic_paraboloid(F5, 3)
    pts = sorted(S.points)
    rng = np.random.default_rng(29)
    for _ in range(20):
        A = surface_point_set(S, [pts[i] for i in rng.choice(len(pts), 6, replace=False)])
        B = surface_point_set(S, [pts[i] for i in rng.choice(len(pts), 5, replace=False)])
        t = pts[rng.integers(0, len(pts))]
        tA = surface_point_set(S, galilean(S, t, (v.coords for v in A)))
        tB = surface_point_set(S, galilean(S, t, (v.coords for v in B)))
        assert additive_energy(tA) == additive_energy(A)
        assert additive_energy(tA, tB) == additive_energy(A, B)


def test_energy_invariant_under_base_congruence():
    # x1^2 + x2^2 and x1 x2 are congruent over F_5; pushing base points
    # through the congruence preserves every pairwise sum pattern
    S1 = paraboloid(F5, 3)
    S2 = hyperbolic_paraboloid(F5, 3)
    M = congruence_between(S1, S2)
    assert M is not None
    assert np.array_equal((M.T @ S1.Q.A @ M) % 5, S2.Q.A)
    pts2 = sorted(S2.points)
    rng = np.random.default_rng(101)
    for _ in range(100):
        take = [pts2[i] for i in rng.choice(len(pts2), rng.integers(2, 10), replace=False)]
        E2 = surface_point_set(S2, take)
        mapped = [
            tuple(int(c) for c in (M @ np.array(q[:2])) % 5) + (q[2],) for q in take
        ]
        E1 = surface_point_set(S1, mapped)
        assert additive_energy(E1) == additive_energy(E2)


@settings(deadline=None, max_examples=40)
@given(
    st.sampled_from([3, 5]),
    st.sets(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=5),
)
def test_energy_routes_agree_property(p, pts):
    F = PrimeField(p)
    E = PointSet.of(F, 2, pts)
    want = quadruple_loop(E)
    assert additive_energy(E) == want == additive_energy(E, method="fourier")


# ---------------------------------------------------------------------------
# off-diagonal energy


def test_off_diagonal_energy_matches_literal_loop():
    S = hyperbolic_paraboloid(F5, 3)
    pts = sorted(S.points)
    rng = np.random.default_rng(59)
    for _ in range(8):
        E = surface_point_set(S, [pts[i] for i in rng.choice(len(pts), 5, replace=False)])
        assert off_diagonal_energy(E) == off_diagonal_loop(E)
    with pytest.raises(ValueError):
        off_diagonal_energy(PointSet.of(F3, 2, [(0, 0)]))


def test_off_diagonal_energy_exhaustive_p3_baseline():
    S = hyperbolic_paraboloid(F3, 3)
    pts = sorted(S.points)
    star = [q for q in pts if q[0] and q[1]]
    assert len(star) == 4
    assert off_diagonal_energy(PointSet.of(F3, 3, star)) == 4
    worst = 0.0
    for combo in all_subsets(pts):
        E = PointSet.of(F3, 3, combo)
        lam = off_diagonal_energy(E)
        assert lam <= additive_energy(E)
        worst = max(worst, lam / len(E) ** 2.5)
    # frozen: the extremal ratio over all 511 subsets is exactly 16 / 4^{5/2}
    assert abs(worst - 0.5) < 1e-12


# ---------------------------------------------------------------------------
# slices and the slice-energy bound


def test_vh_profile_counts_every_slice():
    S = hyperbolic_paraboloid(F5, 3)
    pts = sorted(S.points)
    rng = np.random.default_rng(7)
    E = surface_point_set(S, [pts[i] for i in rng.choice(len(pts), 11, replace=False)])
    prof = vh_profile(E)
    assert sum(prof.vertical.values()) == len(E)
    assert sum(prof.horizontal.values()) == len(E)
    for j in range(5):
        assert prof.vertical[j] == sum(1 for v in E if v.coords[0] == j)
        assert prof.horizontal[j] == sum(1 for v in E if v.coords[1] == j)
    assert prof.max_line == max(
        itertools.chain(prof.vertical.values(), prof.horizontal.values())
    )
    with pytest.raises(NotOnSurface):
        vh_profile(PointSet.of(F5, 3, [(1, 1, 0)]))


def test_energy_slice_bound_exhaustive_p3_baseline():
    S = hyperbolic_paraboloid(F3, 3)
    pts = sorted(S.points)
    worst = 0.0
    for combo in all_subsets(pts):
        res = energy_slice_bound(PointSet.of(F3, 3, combo))
        assert res.energy <= res.bound
        worst = max(worst, res.ratio)
    # frozen extremal ratio 297/405 = 11/15, attained by the full surface
    assert abs(worst - 11.0 / 15.0) < 1e-12


def test_energy_slice_bound_tracked_constant_at_larger_p():
    rng = np.random.default_rng(13)
    for p in (5, 7):
        S = hyperbolic_paraboloid(PrimeField(p), 3)
        for _ in range(25):
            E = random_surface_subset(S, int(rng.integers(2, min(S.size, 30))), rng)
            res = energy_slice_bound(E)
            # within twice the exhaustive p = 3 constant
            assert res.ratio <= 2.0 * (11.0 / 15.0)


# ---------------------------------------------------------------------------
# hyperplane families and incidences


def test_all_affine_hyperplanes_census():
    L = all_affine_hyperplanes(F3, 2)
    assert len(L) == 12  # 4 directions x 3 offsets
    keys = L.canonical_keys()
    assert len(set(keys)) == 12
    # every point of the plane lies on one hyperplane per direction
    P = PointSet.of(F3, 2, itertools.product(range(3), repeat=2))
    rows = L.membership_rows(P)
    assert rows.shape == (12, 9)
    assert rows.sum() == 36
    assert (rows.sum(axis=0) == 4).all()
    # each line of F_3^2 holds exactly 3 points
    assert (rows.sum(axis=1) == 3).all()


def test_hyperplane_family_degenerate_members():
    with pytest.raises(ValueError):
        HyperplaneFamily(F3, 2, [((0, 0), 1)])
    L = HyperplaneFamily(F3, 2, [((0, 0), 0), ((1, 2), 1)])
    assert L.canonical_keys()[0] == ("full",)
    P = PointSet.of(F3, 2, [(0, 0), (1, 1), (2, 2)])
    rows = L.membership_rows(P)
    assert rows[0].all()  # the full-space member contains everything


def test_incidence_audit_frozen_example_and_duplicates():
    P = PointSet.of(F3, 2, itertools.product(range(3), repeat=2))
    L = all_affine_hyperplanes(F3, 2)
    audit = incidence_bound_audit(P, L)
    assert audit == (36, 1, 1, 45.0, True)
    assert incidence_count(P, L) == 36
    # duplicating a line raises C2 but not C1
    dup = HyperplaneFamily(F3, 2, list(L.items) + [L.items[0]] * 3)
    audit2 = incidence_bound_audit(P, dup)
    assert audit2.c2 == 4 and audit2.c1 == 1
    # a single distinct line has no distinct pair, so C1 = 0
    single = HyperplaneFamily(F3, 2, [((1, 0), 0), ((2, 0), 0)])  # same line twice
    audit3 = incidence_bound_audit(P, single)
    assert audit3.c1 == 0 and audit3.c2 == 2
    assert audit3.holds


def test_incidence_bound_holds_on_random_instances():
    rng = np.random.default_rng(67)
    for p in (3, 5):
        F = PrimeField(p)
        for _ in range(20):
            P = PointSet.of(
                F, 2, {tuple(rng.integers(0, p, 2)) for _ in range(rng.integers(1, 2 * p))}
            )
            items = []
            for _ in range(rng.integers(1, 8)):
                w = tuple(rng.integers(0, p, 2))
                c = int(rng.integers(0, p)) if any(w) else 0
                items.append((w, c))
            L = HyperplaneFamily(F, 2, items)
            audit = incidence_bound_audit(P, L)
            assert audit.holds
            assert incidence_count(P, L) == incidence_count(P, L, audit=False)


def test_surface_hyperplanes_collapse_along_isotropic_lines():
    # the hyperplane attached to a surface point x is {y : x o y = Q(x)};
    # two distinct points share a hyperplane exactly when their base parts
    # span the same isotropic line through the origin
    S = hyperbolic_paraboloid(F5, 3)
    pts = sorted(S.points)
    fam = HyperplaneFamily.from_surface_points(S, pts)
    keys = fam.canonical_keys()
    grid = PointSet.of(F5, 2, itertools.product(range(5), repeat=2))
    rows = fam.membership_rows(grid)
    for i, j in itertools.combinations(range(len(pts)), 2):
        same_set = bool((rows[i] == rows[j]).all())
        assert same_set == (keys[i] == keys[j])
        xi = np.array(pts[i][:2])
        xj = np.array(pts[j][:2])
        shared_isotropic_line = (
            xi.any()
            and xj.any()
            and any(((xi - k * xj) % 5 == 0).all() for k in range(1, 5))
            and S.Q.q(xi) == 0
        )
        assert same_set == bool(shared_isotropic_line)
    # the origin of the surface contributes the vacuous full-space member
    origin_idx = pts.index((0, 0, 0))
    assert keys[origin_idx] == ("full",)


def test_energy_to_incidence_chain():
    S = hyperbolic_paraboloid(F5, 3)
    pts = sorted(S.points)
    rng = np.random.default_rng(211)
    for _ in range(25):
        A = surface_point_set(
            S, [pts[i] for i in rng.choice(len(pts), rng.integers(1, 9), replace=False)]
        )
        B = surface_point_set(
            S, [pts[i] for i in rng.choice(len(pts), rng.integers(1, 9), replace=False)]
        )
        red = energy_to_incidence(A, B, S)
        # the shear preserves both sets' sizes and their joint energy
        assert len(red.a_prime) == len(A) and len(red.b_prime) == len(B)
        assert additive_energy(red.a_prime, red.b_prime) == red.energy == additive_energy(A, B)
        # one hyperplane per sheared b, counted against the sheared a-bases
        assert len(red.lines) == len(B)
        assert red.incidences == incidence_count(red.points, red.lines, audit=False)
        # the reduction chain itself carries no constant at all
        assert red.energy <= len(red.lines) * red.incidences


def test_energy_to_incidence_degenerate_inputs():
    S = hyperbolic_paraboloid(F3, 3)
    empty = PointSet.of(F3, 3, [])
    lone = surface_point_set(S, [(0, 0, 0)])
    red = energy_to_incidence(lone, empty, S)
    assert red.energy == 0 and red.incidences == 0 and len(red.lines) == 0
    red2 = energy_to_incidence(lone, lone, S)
    assert red2.energy == 1
    assert red2.lines.canonical_keys() == [("full",)]
    assert red2.incidences == 1


# ---------------------------------------------------------------------------
# greedy decomposition


def brute_line_peak(E: PointSet) -> int:
    """Max |E ∩ (affine line)| by scanning every line direction and coset."""
    best = 0
    for V in enumerate_subspaces(E.field, E.dim, 1):
        groups = {}
        for v in E:
            rep = _line_rep(V, v.coords, E.field.p)
            groups[rep] = groups.get(rep, 0) + 1
        best = max(best, max(groups.values()))
    return best


def _line_rep(V: Subspace, coords, p):
    x = np.array(coords, dtype=np.int64) % p
    for row, c in zip(V.basis, V.pivots):
        x = (x - x[c] * row) % p
    return tuple(int(v) for v in x)


def test_greedy_decompose_postconditions_random():
    rng = np.random.default_rng(307)
    for _ in range(30):
        pts = {tuple(rng.integers(0, 5, 3)) for _ in range(rng.integers(4, 20))}
        E = PointSet.of(F5, 3, pts)
        rho = float(rng.uniform(0.3, 0.8))
        dec = greedy_decompose(E, c=1, rho=rho)
        seen = set()
        for piece in dec.pieces:
            assert len(piece.points) > dec.threshold
            assert piece.subspace.dim == 1
            for v in piece.points:
                assert piece.subspace.contains(v.coords)
                assert v.coords not in seen
                seen.add(v.coords)
        for v in dec.remainder:
            assert v.coords not in seen
            seen.add(v.coords)
        assert seen == set(pts)
        assert len(dec.pieces) <= len(E) ** (1 - rho) + 1e-9
        # no affine line meets the remainder above the threshold
        if len(dec.remainder):
            assert brute_line_peak(dec.remainder) <= dec.threshold


def test_greedy_decompose_trivial_cases():
    line = PointSet.of(F5, 2, [(x, 2 * x % 5) for x in range(4)])
    dec = greedy_decompose(line, c=1, rho=0.5)
    assert len(dec.pieces) == 1 and len(dec.remainder) == 0
    spread = PointSet.of(F5, 2, [(0, 0), (1, 2), (2, 1), (3, 3), (4, 0)])
    dec2 = greedy_decompose(spread, c=1, rho=0.95)
    assert len(dec2.pieces) == 0 and len(dec2.remainder) == 5
    with pytest.raises(ValueError):
        greedy_decompose(line, c=1, rho=1.0)
    with pytest.raises(ValueError):
        greedy_decompose(line, c=2, rho=0.5)


def test_greedy_decompose_isotropic_only():
    Q = hyperbolic_pairing_form(F5, 1)
    E = PointSet.of(F5, 2, [(x, 0) for x in range(5)] + [(1, 1), (2, 3)])
    dec = greedy_decompose(E, c=1, rho=0.5, isotropic_only=True, Q=Q)
    assert len(dec.pieces) == 1
    piece = dec.pieces[0]
    assert len(piece.points) == 5
    assert is_totally_isotropic(Q, piece.subspace.linear_part())
    assert len(dec.remainder) == 2
    with pytest.raises(ValueError):
        greedy_decompose(E, c=1, rho=0.5, isotropic_only=True)
    with pytest.raises(ValueError):
        greedy_decompose(E, c=1, rho=0.5, isotropic_only=True, Q=dot_form(F5, 3))


# ---------------------------------------------------------------------------
# vertical/horizontal plane covers


def test_vh_plane_cover_single_plane_and_full_grid():
    one = PointSet.of(F3, 3, [(x, (2 * t + 1) % 3, t) for x in range(3) for t in range(3)])
    cov = vh_plane_cover(one, budget=1)
    assert cov.planes == ((1, 2, 1),)
    assert len(cov.residual) == 0 and len(cov.covered) == 9
    grid = PointSet.of(F3, 3, itertools.product(range(3), repeat=3))
    cov2 = vh_plane_cover(grid, budget=3)
    assert len(cov2.residual) == 0
    assert cov2.planes == ((1, 0, 0), (1, 0, 1), (1, 0, 2))
    with pytest.raises(ValueError):
        vh_plane_cover(grid, budget=0)
    with pytest.raises(ValueError):
        vh_plane_cover(PointSet.of(F3, 2, [(0, 0)]), budget=1)


def test_vh_plane_cover_residual_load_bound():
    rng = np.random.default_rng(43)
    for p in (3, 5):
        F = PrimeField(p)
        for _ in range(15):
            pts = {tuple(rng.integers(0, p, 3)) for _ in range(rng.integers(2, 4 * p))}
            E = PointSet.of(F, 3, pts)
            budget = int(rng.integers(1, 5))
            cov = vh_plane_cover(E, budget)
            assert len(cov.planes) <= budget
            assert len(cov.covered) + len(cov.residual) == len(E)
            assert set(v.coords for v in cov.covered).isdisjoint(
                v.coords for v in cov.residual
            )
            assert cov.residual_plane_max <= math.ceil(len(E) / budget)


def test_vh_cover_greedy_within_log_factor_of_optimum():
    rng = np.random.default_rng(97)
    for _ in range(60):
        pts = {tuple(rng.integers(0, 3, 3)) for _ in range(rng.integers(1, 9))}
        E = PointSet.of(F3, 3, pts)
        if len(E) > 8:
            continue
        kmin = minimum_vh_cover_size(E)
        full = vh_plane_cover(E, budget=18)  # all planes allowed
        assert len(full.residual) == 0
        greedy_size = len(full.planes)
        assert kmin <= greedy_size
        assert greedy_size <= math.ceil((math.log(len(E)) + 1) * kmin)


def test_minimum_vh_cover_small_cases_and_guard():
    assert minimum_vh_cover_size(PointSet.of(F3, 3, [])) == 0
    diag = PointSet.of(F3, 3, [(0, 0, 0), (1, 1, 1), (2, 2, 2)])
    assert minimum_vh_cover_size(diag) == 1  # x2 = t is one type-1 plane
    # two points forcing different plane families still fit one plane each
    pair = PointSet.of(F3, 3, [(0, 1, 0), (1, 0, 0)])
    assert minimum_vh_cover_size(pair) <= 2
    big = PointSet.of(
        F3, 3, [(a, b, (a * b) % 3) for a in range(3) for b in range(3)]
    )
    assert len(big) == 9
    with pytest.raises(SizeOverflow):
        minimum_vh_cover_size(big)


# ---------------------------------------------------------------------------
# exponent calculus


def test_closed_form_exponent_spot_values():
    assert energy_exponent_closed("dim3_witt1", 0.75) == pytest.approx(2.5)
    assert energy_exponent_closed("dim3_witt1", 1.0) == pytest.approx(3.0)
    assert energy_exponent_closed("dim5_witt2", 9 / 16) == pytest.approx(23 / 8)
    assert energy_exponent_closed("dim5_witt2", 1.0) == pytest.approx(3.0)
    assert energy_exponent_closed("dim4", 0.6) == pytest.approx(2.8)
    assert energy_exponent_closed("rank1_deg", 0.0) == pytest.approx(2.0)
    assert energy_exponent_closed("rank2_deg", 0.75) == pytest.approx(2.875)
    assert energy_exponent_closed("dim2", 0.4) == pytest.approx(2.0)
    with pytest.raises(OutOfValidityRange):
        energy_exponent_closed("dim3_witt1", 0.5)
    with pytest.raises(OutOfValidityRange):
        energy_exponent_closed("dim4", 1.5)
    with pytest.raises(ValueError):
        energy_exponent_closed("dim6", 0.9)


def test_exponent_curve_invariants_and_clamping():
    for kind in ("dim3_witt1", "rank1_deg", "rank2_deg", "dim4", "dim5_witt2"):
        curve = closed_form_curve(kind)
        assert curve.provenance == "closed_form"
        assert curve(1.0) == pytest.approx(3.0)
        lo = curve.alpha_grid[0]
        assert curve(0.0) == pytest.approx(curve.psi_values[0])  # clamped
        vals = [curve(a) for a in np.linspace(0, 1, 33)]
        assert all(b - a >= -1e-9 for a, b in zip(vals, vals[1:]))
        assert all(v < 3.0 for v in vals[:-1])
        assert 0.0 <= lo < 1.0
    with pytest.raises(ValueError):
        closed_form_curve("dim2")


def test_exponent_curve_constructor_rejections():
    with pytest.raises(ValueError):
        EnergyExponent((0.0, 1.0), (2.0, 2.9), "closed_form")  # psi(1) != 3
    with pytest.raises(ValueError):
        EnergyExponent((0.5, 0.25, 1.0), (2.0, 2.5, 3.0), "closed_form")
    with pytest.raises(ValueError):
        EnergyExponent((0.0, 1.0), (3.0, 3.0), "closed_form")  # hits 3 early
    with pytest.raises(ValueError):
        EnergyExponent((0.0, 0.5, 1.0), (2.5, 2.4, 3.0), "recursion")  # dip
    with pytest.raises(ValueError):
        EnergyExponent((1.0,), (3.0,), "closed_form")
    with pytest.raises(ValueError):
        EnergyExponent((0.0, 1.0), (2.0, 3.0), "guesswork")


def test_recursion_endpoint_and_balance():
    inner = closed_form_curve("dim5_witt2")
    top = energy_exponent_recurse(inner, 1.0)
    assert top.value == pytest.approx(3.0, abs=1e-9)
    assert top.rho == pytest.approx(1.0) and not top.no_root
    for alpha in (0.3, 0.6, 0.9):
        r = energy_exponent_recurse(inner, alpha)
        assert not r.no_root
        assert alpha <= r.rho <= 1.0
        # at the root the spread and concentrated exponents agree
        lhs = 2.5 + r.rho / 2.0
        rhs = 4.0 * (1.0 - r.rho) + inner(min(alpha / r.rho, 1.0))
        assert lhs == pytest.approx(rhs, abs=1e-7)
        assert r.value == pytest.approx(lhs)
    # at alpha = 0 the inner curve clamps to 23/8, giving rho = 35/36
    base = energy_exponent_recurse(inner, 0.0)
    assert base.rho == pytest.approx(35 / 36, abs=1e-8)
    assert base.value == pytest.approx((5 + 35 / 36) / 2, abs=1e-8)


def test_recursion_no_root_flags():
    low = energy_exponent_recurse(0.0, 0.5)
    assert low.no_root and low.rho == pytest.approx(0.5)
    assert low.value == pytest.approx(2.75)
    high = energy_exponent_recurse(10.0, 0.5)
    assert high.no_root and high.rho == pytest.approx(1.0)
    assert high.value == pytest.approx(3.0)
    with pytest.raises(ValueError):
        energy_exponent_recurse(2.5, 1.5)
    with pytest.raises(ValueError):
        energy_exponent_recurse(2.5, 0.5, variant="sideways")


def test_degenerate_lift_formula():
    assert energy_exponent_recurse(2.5, 0.0, variant="degenerate_lift").value == 2.5
    assert energy_exponent_recurse(2.5, 1.0, variant="degenerate_lift").value == 3.0
    inner = closed_form_curve("dim3_witt1")
    for alpha in (0.0, 0.4, 0.8):
        got = energy_exponent_recurse(inner, alpha, variant="degenerate_lift").value
        assert got == pytest.approx(3 * alpha + inner(alpha) * (1 - alpha))


def test_recursion_curve_is_a_valid_exponent_curve():
    inner = closed_form_curve("dim5_witt2")
    outer = recursion_curve(inner)
    assert outer.provenance == "recursion"
    assert outer(1.0) == pytest.approx(3.0)
    assert outer(0.0) == pytest.approx((5 + 35 / 36) / 2, abs=1e-7)
    # lifting can only weaken: the outer curve dominates the inner one
    for a in np.linspace(0, 1, 21):
        assert outer(float(a)) >= inner(float(a)) - 1e-9


# ---------------------------------------------------------------------------
# isotropic slices and empirical sampling


def test_max_isotropic_slice_against_brute_force():
    Q = hyperbolic_pairing_form(F3, 1)
    pts = list(itertools.product(range(3), repeat=2))
    rng = np.random.default_rng(71)
    for _ in range(15):
        E = PointSet.of(F3, 2, [pts[i] for i in rng.choice(9, 5, replace=False)])
        got = max_isotropic_slice(E, Q)
        brute = 0
        for line in ([(x, 0) for x in range(3)], [(0, y) for y in range(3)]):
            for t in pts:
                coset = {((a + t[0]) % 3, (b + t[1]) % 3) for a, b in line}
                brute = max(brute, sum(1 for v in E if v.coords in coset))
        assert got == brute
    # witt index 0: the only isotropic slice is a single point
    aniso = dot_form(F3, 2)
    E = PointSet.of(F3, 2, [(0, 0), (1, 1), (2, 1)])
    assert max_isotropic_slice(E, aniso) == 1
    peak, alpha = isotropic_slice_alpha(E, aniso)
    assert (peak, alpha) == (1, 0.0)
    line = PointSet.of(F3, 2, [(0, 0), (1, 0), (2, 0)])
    peak, alpha = isotropic_slice_alpha(line, Q)
    assert peak == 3 and alpha == pytest.approx(1.0)


def test_surface_lift_affine_exactly_over_isotropic_lines():
    # the lift of an affine base line to the graph is itself affine
    # precisely when the direction is isotropic
    for form in (hyperbolic_pairing_form(F3, 1), dot_form(F3, 2)):
        S = Surface(QuadraticSpace(F3, form.A))
        for V in enumerate_subspaces(F3, 2, 1):
            for t in itertools.product(range(3), repeat=2):
                base = [(tuple((np.array(q) + t) % 3)) for q in V.point_array()]
                lifted = [S.lift(tuple(int(c) for c in b)) for b in base]
                u, v, w = (np.array(q) for q in lifted)
                is_affine = ((u + w - 2 * v) % 3 == 0).all() or (
                    (u + v - 2 * w) % 3 == 0
                ).all() or ((v + w - 2 * u) % 3 == 0).all()
                assert bool(is_affine) == is_totally_isotropic(S.Q, V)


def test_sample_energy_exponents_runs_clean():
    for S in (
        hyperbolic_paraboloid(F3, 3),
        paraboloid(F3, 3),
        paraboloid(F5, 3),
        paraboloid(F3, 4),
        hyperbolic_paraboloid(F3, 5),
    ):
        samples = sample_energy_exponents(S, trials=10, seed=7)
        assert len(samples) >= 10
        for s in samples:
            assert s.exponent <= s.bound
            assert 0.0 <= s.alpha <= 1.0 + 1e-9
    # determinism: the same seed reproduces the same measurements
    S = hyperbolic_paraboloid(F5, 3)
    a = sample_energy_exponents(S, trials=8, seed=3)
    b = sample_energy_exponents(S, trials=8, seed=3)
    assert a == b


def test_sample_energy_exponents_guardrails():
    with pytest.raises(ValueError):
        sample_energy_exponents(hyperbolic_paraboloid(PrimeField(11), 3))
    with pytest.raises(ValueError):
        sample_energy_exponents(Surface(QuadraticSpace(F3, [[1]])))
