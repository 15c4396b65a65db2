import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import snake_walk

from grasscat import semiring_ops as so
from grasscat.errors import AmbientMismatch, ShapeMismatch
from grasscat.grassmann import GrChart, GrPoint, chart_coords, chart_embed
from grasscat.internal_cat import check_functor
from grasscat.linalg_core import block_diag, random_frame, random_matrix
from grasscat.mor_category import (
    MorPoint,
    VfMor,
    is_iso,
    mor_chart,
    mor_compose,
    mor_identity,
    random_morpoint,
)

fields = st.sampled_from(["real", "complex"])
seeds = st.integers(0, 2**32 - 1)


def unit(n, i):
    v = np.zeros(n)
    v[i - 1] = 1
    return v


def is_permutation_matrix(P):
    return set(np.unique(P)) <= {0.0, 1.0} and np.all(P.sum(0) == 1) and np.all(P.sum(1) == 1)


def point(rng, m, k, field="real"):
    return GrPoint(random_frame(rng, m, k, field))


def near_chart(rng, p, field="real"):
    m, k = p.ambient_dim, p.sub_dim
    return GrChart.at(chart_embed(GrChart.at(p), 0.3 * random_matrix(rng, (m - k, k), field)))


# -- theta and kappa ------------------------------------------------------------------

def test_theta_examples():
    assert np.array_equal(so.theta_apply(3, np.concatenate([unit(3, 2), np.zeros(3)])), unit(6, 3))
    assert np.array_equal(so.theta_apply(3, np.concatenate([np.zeros(3), unit(3, 3)])), unit(6, 6))


def test_kappa_examples():
    assert np.array_equal(so.kappa_apply(2, np.kron(unit(2, 1), unit(2, 2))), unit(4, 2))
    assert np.array_equal(so.kappa_apply(2, np.kron(unit(2, 2), unit(2, 1))), unit(4, 4))
    assert [so.kappa_index(i, j) for i in range(1, 4) for j in range(1, 4)] == [1, 2, 5, 4, 3, 6, 9, 8, 7]


def test_kappa_edge_formulas():
    for n in range(1, 10):
        for i in range(1, n + 1):
            assert so.kappa_index(i, n) == i + (n - 1) ** 2
        for j in range(1, n + 1):
            assert so.kappa_index(n, j) == 2 * n - j + (n - 1) ** 2


@pytest.mark.parametrize("n", [1, 2, 3, 7, 16, 32])
def test_theta_and_kappa_are_permutations(n):
    assert is_permutation_matrix(so.theta(n).matrix)
    assert is_permutation_matrix(so.kappa(n).matrix)


@pytest.mark.parametrize("n", range(1, 17))
def test_kappa_matches_snake_walk(n):
    order = snake_walk(n)
    assert sorted(order) == list(range(n * n))
    inverse = np.argsort(so.kappa(n).perm)
    assert list(inverse) == order


def test_theta_matches_interleaving_formula():
    for n in range(1, 17):
        perm = so.theta(n).perm
        assert list(perm[:n] + 1) == [2 * i - 1 for i in range(1, n + 1)]
        assert list(perm[n:] + 1) == [2 * i for i in range(1, n + 1)]


def test_apply_rejects_wrong_length():
    with pytest.raises(ShapeMismatch):
        so.theta_apply(2, np.ones(3))
    with pytest.raises(ShapeMismatch):
        so.kappa_apply(2, np.ones(5))


# -- operations on V_F ----------------------------------------------------------------------

def test_vf_object_examples():
    assert so.vf_oplus_obj(2, 3) == 5
    assert so.vf_otimes_obj(2, 3) == 6
    assert so.vf_oplus_obj(0, 4) == 4 and so.vf_otimes_obj(1, 4) == 4


def test_vf_otimes_basis_convention():
    # e_i (x) e'_j is basis vector m(i-1)+j of F^{nm}, where m is the second dimension
    n, m = 2, 3
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            a = VfMor(unit(n, i).reshape(-1, 1))
            b = VfMor(unit(m, j).reshape(-1, 1))
            assert np.array_equal(so.vf_otimes(a, b).mat[:, 0], unit(n * m, m * (i - 1) + j))


@given(seeds, fields, st.lists(st.integers(0, 3), min_size=6, max_size=6))
def test_vf_operations_are_strictly_associative(seed, field, dims):
    rng = np.random.default_rng(seed)
    a, b, c = (VfMor(random_matrix(rng, (dims[2 * i], dims[2 * i + 1]), field)) for i in range(3))
    P, T = so.vf_oplus, so.vf_otimes
    assert np.array_equal(P(P(a, b), c).mat, P(a, P(b, c)).mat)
    assert np.allclose(T(T(a, b), c).mat, T(a, T(b, c)).mat, atol=1e-12)
    empty = VfMor(np.zeros((0, 0)))
    one = VfMor(np.ones((1, 1)))
    assert np.array_equal(P(empty, a).mat, a.mat) and np.array_equal(P(a, empty).mat, a.mat)
    assert np.array_equal(T(one, a).mat, a.mat) and np.array_equal(T(a, one).mat, a.mat)


# -- operations on V_F^f -------------------------------------------------------------------

def test_tensor_of_first_coordinate_lines():
    e1 = GrPoint(unit(2, 1).reshape(-1, 1))
    assert so.otimes_points(e1, e1) == GrPoint(unit(4, 1).reshape(-1, 1))


def test_zero_summand_keeps_dimension(rng):
    Y = point(rng, 3, 2)
    s = so.oplus_points(GrPoint.zero(3), Y)
    assert (s.ambient_dim, s.sub_dim) == (6, 2)


@given(seeds, fields, st.integers(1, 4), st.data())
def test_dimensions_add_and_multiply(seed, field, n, data):
    rng = np.random.default_rng(seed)
    k, l = data.draw(st.integers(0, n)), data.draw(st.integers(0, n))
    X, Y = point(rng, n, k, field), point(rng, n, l, field)
    s, t = so.oplus_points(X, Y), so.otimes_points(X, Y)
    assert (s.ambient_dim, s.sub_dim) == (2 * n, k + l)
    assert (t.ambient_dim, t.sub_dim) == (n * n, k * l)


def test_operands_must_share_ambient(rng):
    with pytest.raises(AmbientMismatch):
        so.oplus_points(point(rng, 2, 1), point(rng, 3, 1))
    with pytest.raises(AmbientMismatch):
        so.otimes_points(point(rng, 2, 1), point(rng, 3, 1))
    X, Y = so.equalize_ambient(point(rng, 2, 1), point(rng, 3, 1))
    assert X.ambient_dim == Y.ambient_dim == 3


@given(seeds, fields, st.integers(1, 4), st.data())
def test_oplus_chart_is_block_diagonal(seed, field, n, data):
    rng = np.random.default_rng(seed)
    X, Y = point(rng, n, data.draw(st.integers(0, n)), field), point(rng, n, data.draw(st.integers(0, n)), field)
    cx, cy = near_chart(rng, X, field), near_chart(rng, Y, field)
    A = chart_coords(so.oplus_chart(cx, cy), so.oplus_points(X, Y))
    np.testing.assert_allclose(A, block_diag(chart_coords(cx, X), chart_coords(cy, Y)), atol=1e-8)


@given(seeds, fields, st.integers(1, 3), st.data())
def test_otimes_chart_stacks_kronecker_blocks(seed, field, n, data):
    rng = np.random.default_rng(seed)
    X, Y = point(rng, n, data.draw(st.integers(0, n)), field), point(rng, n, data.draw(st.integers(0, n)), field)
    cx, cy = near_chart(rng, X, field), near_chart(rng, Y, field)
    AX, AY = chart_coords(cx, X), chart_coords(cy, Y)
    A = chart_coords(so.otimes_chart(cx, cy), so.otimes_points(X, Y))
    kx, ky = X.sub_dim, Y.sub_dim
    expected = np.vstack([np.kron(np.eye(kx), AY), np.kron(AX, np.eye(ky)), np.kron(AX, AY)])
    np.testing.assert_allclose(A, expected, atol=1e-8)
    np.testing.assert_allclose(so.otimes_chart_coords(AX, AY), expected, atol=1e-14)


@given(seeds, fields, st.integers(1, 3), st.data())
def test_morphism_chart_blocks(seed, field, n, data):
    rng = np.random.default_rng(seed)
    pts = [point(rng, n, data.draw(st.integers(0, n)), field) for _ in range(4)]
    f, g = random_morpoint(rng, pts[0], pts[1], field), random_morpoint(rng, pts[2], pts[3], field)
    ch = [near_chart(rng, p, field) for p in pts]
    Tf, Tg = mor_chart(f, ch[0], ch[1]).T_box, mor_chart(g, ch[2], ch[3]).T_box
    s = mor_chart(so.oplus_mor(f, g), so.oplus_chart(ch[0], ch[2]), so.oplus_chart(ch[1], ch[3]))
    np.testing.assert_allclose(s.T_box, block_diag(Tf, Tg), atol=1e-8)
    t = mor_chart(so.otimes_mor(f, g), so.otimes_chart(ch[0], ch[2]), so.otimes_chart(ch[1], ch[3]))
    np.testing.assert_allclose(t.T_box, np.kron(Tf, Tg), atol=1e-8)


@given(seeds, fields, st.integers(1, 3), st.data())
def test_operations_respect_composition_and_identities(seed, field, n, data):
    rng = np.random.default_rng(seed)
    a = [point(rng, n, data.draw(st.integers(0, n)), field) for _ in range(3)]
    b = [point(rng, n, data.draw(st.integers(0, n)), field) for _ in range(3)]
    f1, f2 = random_morpoint(rng, a[0], a[1], field), random_morpoint(rng, a[1], a[2], field)
    g1, g2 = random_morpoint(rng, b[0], b[1], field), random_morpoint(rng, b[1], b[2], field)
    for op in (so.oplus_mor, so.otimes_mor):
        lhs = op(mor_compose(f1, f2), mor_compose(g1, g2))
        rhs = mor_compose(op(f1, g1), op(f2, g2))
        assert lhs.distance(rhs) < 1e-8
    assert so.oplus_mor(mor_identity(a[0]), mor_identity(b[0])).distance(
        mor_identity(so.oplus_points(a[0], b[0]))) < 1e-12
    assert so.otimes_mor(mor_identity(a[0]), mor_identity(b[0])).distance(
        mor_identity(so.otimes_points(a[0], b[0]))) < 1e-12


@pytest.mark.parametrize("make", [so.oplus_vf_functor, so.otimes_vf_functor])
def test_vf_operation_functors(make):
    assert check_functor(make(4), samples=100, seed=0).passed


@pytest.mark.parametrize("make", [so.oplus_vff_functor, so.otimes_vff_functor])
@pytest.mark.parametrize("field", ["real", "complex"])
def test_vff_operation_functors(make, field):
    assert check_functor(make(3, 3, field), samples=100, seed=0).passed


# -- witnesses ---------------------------------------------------------------------------

def test_swap_blocks():
    np.testing.assert_array_equal(so.vf_swap(1, 1).mat, [[0, 1], [1, 0]])
    S = so.vf_swap(2, 3).mat
    x, y = np.arange(1.0, 3.0), np.arange(10.0, 13.0)
    np.testing.assert_array_equal(S @ np.concatenate([y, x]), np.concatenate([x, y]))


def test_comm_witness_on_lines():
    X = GrPoint(unit(2, 1).reshape(-1, 1))
    Y = GrPoint(unit(2, 2).reshape(-1, 1))
    np.testing.assert_array_equal(so.witness_comm(X, Y).box(), [[0, 1], [1, 0]])


@given(seeds, fields, st.integers(1, 4), st.data())
def test_comm_witness_is_an_involution(seed, field, n, data):
    rng = np.random.default_rng(seed)
    X, Y = point(rng, n, data.draw(st.integers(0, n)), field), point(rng, n, data.draw(st.integers(0, n)), field)
    w = so.witness_comm(X, Y)
    assert is_iso(w)
    assert mor_compose(w, so.witness_comm(Y, X)).distance(mor_identity(so.oplus_points(X, Y))) < 1e-12


def test_distrib_smallest_case_is_identity():
    np.testing.assert_array_equal(so.witness_distrib(1, 1, 1).mat, np.eye(2))
    np.testing.assert_array_equal(so.witness_distrib(1, 1, 1, "right").mat, np.eye(2))


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4), st.sampled_from(["left", "right"]))
def test_distrib_is_a_permutation(m, n, k, side):
    P = so.witness_distrib(m, n, k, side).mat
    if P.size:
        assert is_permutation_matrix(P)


@given(seeds, st.integers(1, 4), st.integers(0, 4), st.integers(0, 4))
def test_distrib_sends_tensors_of_sums_to_sums_of_tensors(seed, m, n, k):
    rng = np.random.default_rng(seed)
    u, v, w = rng.standard_normal(m), rng.standard_normal(n), rng.standard_normal(k)
    P = so.witness_distrib(m, n, k, "left").mat
    np.testing.assert_allclose(P @ np.kron(u, np.concatenate([v, w])),
                               np.concatenate([np.kron(u, v), np.kron(u, w)]), atol=1e-14)
    Q = so.witness_distrib(n + 0, k, m, "right").mat
    np.testing.assert_allclose(Q @ np.kron(np.concatenate([v, w]), u),
                               np.concatenate([np.kron(v, u), np.kron(w, u)]), atol=1e-14)


def test_left_distrib_block_pattern():
    m, n, k = 3, 2, 1
    P = so.witness_distrib(m, n, k).mat
    for i in range(m):
        cols = slice(i * (n + k), (i + 1) * (n + k))
        block = P[:, cols]
        np.testing.assert_array_equal(block[i * n:(i + 1) * n, :n], np.eye(n))
        np.testing.assert_array_equal(block[m * n + i * k:m * n + (i + 1) * k, n:], np.eye(k))
        assert block.sum() == n + k


@given(seeds, fields, st.sampled_from(["left", "right"]), st.data())
def test_distrib_f_witness_is_iso_and_typed(seed, field, side, data):
    rng = np.random.default_rng(seed)
    n = 2
    X, Y, Z = (point(rng, n, data.draw(st.integers(0, n)), field) for _ in range(3))
    w = so.witness_distrib_f(X, Y, Z, side)
    assert is_iso(w)
    assert w.src.ambient_dim == w.dst.ambient_dim == 4 * n * n
    big = so.witness_distrib_f(X, Y, Z, side, ambient=20)
    assert big.src.ambient_dim == 20 and is_iso(big)
    with pytest.raises(ShapeMismatch):
        so.witness_distrib_f(X, Y, Z, side, ambient=10)


def test_unit_witness_on_first_line():
    X = GrPoint(unit(2, 1).reshape(-1, 1))
    for side in ("left", "right"):
        w = so.witness_add_unit(X, side)
        np.testing.assert_allclose(w.box(), [[1.0]])
        assert is_iso(w)
    assert so.witness_add_unit(X, "left").dst == so.oplus_points(GrPoint.zero(2), X)
    assert so.witness_add_unit(X, "right").dst == so.oplus_points(X, GrPoint.zero(2))


def test_comparison_witnesses_small_cases():
    cases = so.comparison_cases(3)
    w = cases[0].phi.component((1, 1))
    assert is_permutation_matrix(np.round(w.box().real, 14)) and is_iso(w)
    # interleaved e1, e3 | e2 against concatenated e1, e2 | e3
    w = cases[0].phi.component((2, 1))
    np.testing.assert_array_equal(w.map_mat[:3, :3], [[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    assert is_iso(w)
    w = cases[1].phi.component((1, 1))
    np.testing.assert_allclose(w.box(), [[1.0]])


@pytest.mark.parametrize("field", ["real", "complex"])
def test_all_shipped_witnesses_are_natural(field):
    for case in so.shipped_cases(field):
        rep = so.check_witness_case(case, samples=40, seed=0)
        assert rep.passed, rep.render_text()
        assert rep.formulations_agree


def test_perturbed_witness_fails():
    case = so.swap_case(3)
    comp = case.phi.component
    bad = so.NatTransCase(case.name, case.F, case.G,
                          so.NatTransWitness(lambda x: VfMor(comp(x).mat + 1), "swap + ones"))
    rep = so.check_witness_case(bad, samples=50, seed=0)
    assert not rep.definition_passed and not rep.interval_passed


def test_comm_witness_between_wrong_ends_is_rejected(rng):
    X, Y = point(rng, 2, 1), point(rng, 2, 1)
    w = so.witness_comm(X, Y)
    with pytest.raises(ShapeMismatch):
        MorPoint(w.dst, w.src, w.map_mat)


def test_stabilization_squares_exact():
    for field in ("real", "complex"):
        rep = so.check_stabilization_squares(samples=100, seed=0, field=field)
        assert rep.passed and rep.max_residual() == 0.0
