import json
import random
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from assocoipahedron.exact import affine_rank, extreme_points
from assocoipahedron.geometry import (
    CollinearTriple,
    NonConvex,
    NotATriangulation,
    NotInLambda,
    NotInSimplex,
    NotMaxExpanded,
    build_polygon,
    corner_vectors,
    h_forward,
    h_inverse,
    h_roundtrip_problems,
    lambda_constraints,
    lambda_contains,
    load_polygon,
    loday_vector,
    loday_w,
    sample_simplex_coords,
    spine_labels_from_point,
    star_area_vector,
    subpolygon_area_vector,
)
from assocoipahedron.trees import (
    BOTH,
    AlphaTree,
    Diag,
    Side,
    Signature,
    corolla,
    dimension,
    enumerate_cells,
    enumerate_max_expanded,
    max_expansions_of,
    toward,
    triangulations,
)

from strategies import signatures


def shoelace(pts):
    s = sum(x1 * y2 - x2 * y1 for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]))
    return abs(F(s)) / 2


def triangles_of(n, diags):
    """Triangles of a triangulation, found from scratch: all three sides present."""
    edges = {(j, j + 1) for j in range(1, n)} | {(1, n)} | {(d.a, d.b) for d in diags}
    return [t for t in combinations(range(1, n + 1), 3)
            if {(t[0], t[1]), (t[1], t[2]), (t[0], t[2])} <= edges]


def oioi_edge(label_13, label_side3=None):
    labels = {Side(1): toward(1), Diag(1, 3): label_13, Side(3): label_side3 or toward(3)}
    return AlphaTree(Signature("oioi"), (Diag(1, 3),), labels)


# -- polygons -------------------------------------------------------------------


def test_parabola_triangle():
    Q = build_polygon(3)
    assert Q.corners == ((1, 1), (2, 4), (3, 9))
    assert Q.total_area == 1


def test_parabola_quad_area():
    assert build_polygon(4).total_area == 4


@pytest.mark.parametrize("n", range(3, 10))
def test_parabola_area_matches_shoelace(n):
    assert build_polygon(n).total_area == shoelace([(j, j * j) for j in range(1, n + 1)])


def test_collinear_rejected():
    with pytest.raises(CollinearTriple):
        build_polygon(4, [(0, 0), (1, 0), (2, 0), (0, 1)])


def test_clockwise_rejected():
    with pytest.raises(NonConvex):
        build_polygon(4, [(0, 0), (0, 1), (1, 1), (1, 0)])


def test_load_polygon(tmp_path):
    p = tmp_path / "q.json"
    p.write_text(json.dumps([[0, 0], ["3/2", 0], [2, 1], [0, 2]]))
    Q = load_polygon(p)
    assert Q.total_area == shoelace([(0, 0), (F(3, 2), 0), (2, 1), (0, 2)])


# -- star-area vectors ------------------------------------------------------------


def test_star_triangle():
    t = enumerate_max_expanded(Signature("ooo"))[0]
    assert tuple(star_area_vector(t, build_polygon(3))) == (1, 1, 1)


def test_star_quads():
    Q = build_polygon(4)
    s = Signature("oiii")
    by_diag = {t.diagonals: tuple(star_area_vector(t, Q)) for t in enumerate_max_expanded(s)}
    assert by_diag[(Diag(1, 3),)] == (4, 1, 4, 3)
    assert by_diag[(Diag(2, 4),)] == (3, 4, 1, 4)


def test_star_needs_triangulation():
    with pytest.raises(NotATriangulation):
        star_area_vector(corolla(Signature("oioi")), build_polygon(4))


@pytest.mark.parametrize("n", range(3, 9))
def test_star_vector_against_scratch_triangles(n):
    Q = build_polygon(n)
    s = Signature("o" + "i" * (n - 1))
    for t in enumerate_max_expanded(s):
        expected = [F(0)] * n
        for tri in triangles_of(n, t.diagonals):
            a = shoelace([Q.corners[c - 1] for c in tri])
            for c in tri:
                expected[c - 1] += a
        v = star_area_vector(t, Q)
        assert list(v) == expected
        assert sum(v) == 3 * Q.total_area


@pytest.mark.parametrize("n", range(4, 8))
def test_star_vectors_span_associahedron(n):
    """Distinct triangulations give distinct extreme points of an (n-3)-dimensional hull."""
    Q = build_polygon(n)
    s = Signature("o" + "i" * (n - 1))
    pts = [tuple(star_area_vector(t, Q)) for t in enumerate_max_expanded(s)]
    assert len(set(pts)) == len(triangulations(n))
    assert affine_rank(pts) == n - 3
    if n <= 6:
        assert len(extreme_points(pts)) == len(pts)


# -- subpolygon area vectors ------------------------------------------------------


def test_w_cut_along_diagonal():
    assert tuple(subpolygon_area_vector(oioi_edge(BOTH), build_polygon(4))) == (3, 1)


def test_w_cut_at_side():
    t = oioi_edge(toward(1), BOTH)
    assert tuple(subpolygon_area_vector(t, build_polygon(4))) == (4, 0)


def test_w_single_out():
    Q = build_polygon(4)
    for t in enumerate_max_expanded(Signature("oiii")):
        assert tuple(subpolygon_area_vector(t, Q)) == (4,)


@given(signatures(min_n=3, max_n=7))
@settings(max_examples=30, deadline=None)
def test_w_is_in_simplex_and_own_lambda(s):
    Q = build_polygon(s.n)
    for t in enumerate_max_expanded(s):
        w = subpolygon_area_vector(t, Q)
        assert sum(w) == Q.total_area and min(w) >= 0
        assert lambda_contains(lambda_constraints(t, Q), w)


@pytest.mark.parametrize("word", ["oioi", "ooo", "ooio", "oioio", "oooo", "ooiioi", "oooooo"])
def test_w_hull_is_the_area_simplex(word):
    """The extreme w-vectors are exactly area(Q) times the unit vectors."""
    s = Signature(word)
    Q = build_polygon(s.n)
    ws = {tuple(subpolygon_area_vector(t, Q)) for t in enumerate_max_expanded(s)}
    corners = {tuple(Q.total_area * (i == j) for j in range(s.k)) for i in range(s.k)}
    assert corners <= ws
    assert set(extreme_points(ws)) == corners


# -- constraint systems ------------------------------------------------------------


def test_lambda_top_cell():
    Q = build_polygon(4)
    cs = lambda_constraints(corolla(Signature("oioi")), Q)
    eq = cs.equalities()
    assert len(eq) == 1 and eq[0].coeffs == (1, 1) and eq[0].rhs == 4
    assert lambda_contains(cs, (2, 2))
    assert not lambda_contains(cs, (5, -1))


def test_lambda_both_edge():
    cs = lambda_constraints(oioi_edge(BOTH), build_polygon(4))
    assert any(c.coeffs == (0, 1) and c.rhs == 1 and c.relation == "=" for c in cs.constraints)
    assert lambda_contains(cs, (3, 1))
    assert not lambda_contains(cs, (4, 0))


@pytest.mark.parametrize("word", ["oioi", "ooi", "ooio", "oooo", "oioio", "oiioi", "ooioi"])
def test_lambda_hull_equals_vertex_hull(word):
    """h-images of simplex corners and the cell's vertex w-vectors span the same polytope."""
    s = Signature(word)
    Q = build_polygon(s.n)
    for t in enumerate_cells(s):
        corners = extreme_points([tuple(x) for x in corner_vectors(t, Q)])
        ws = extreme_points([tuple(subpolygon_area_vector(m, Q)) for m in max_expansions_of(t)])
        assert corners == ws, str(t)
        cs = lambda_constraints(t, Q)
        assert all(lambda_contains(cs, w) for w in ws)


# -- h map -------------------------------------------------------------------------


def test_h_forward_top():
    t = corolla(Signature("oioi"))
    assert tuple(h_forward(t, build_polygon(4), [(F(1, 2), F(1, 2))])) == (2, 2)


def test_h_inverse_corner():
    t = corolla(Signature("oioi"))
    assert h_inverse(t, build_polygon(4), (4, 0)) == [(1, 0)]


def test_h_round_trip_example():
    t = corolla(Signature("oioi"))
    Q = build_polygon(4)
    w = h_forward(t, Q, [(F(1, 3), F(2, 3))])
    assert tuple(w) == (F(4, 3), F(8, 3))
    assert h_inverse(t, Q, w) == [(F(1, 3), F(2, 3))]


def test_h_inverse_rejects_outside():
    with pytest.raises(NotInLambda):
        h_inverse(oioi_edge(BOTH), build_polygon(4), (4, 0))


def test_h_forward_rejects_non_simplex_point():
    with pytest.raises(NotInSimplex):
        h_forward(corolla(Signature("oioi")), build_polygon(4), [(F(1, 2), F(1, 3))])


@given(signatures(min_n=3, max_n=5), st.integers(0, 2**32))
@settings(max_examples=30, deadline=None)
def test_h_round_trip_every_cell(s, seed):
    Q = build_polygon(s.n)
    rng = random.Random(seed)
    for t in enumerate_cells(s):
        assert h_roundtrip_problems(t, Q, rng, samples=2) == []


@given(signatures(min_n=3, max_n=5), st.integers(0, 2**32))
@settings(max_examples=30, deadline=None)
def test_interior_points_locate_their_cell(s, seed):
    """A relative-interior point of a cell's simplex factor determines the cell's labels."""
    Q = build_polygon(s.n)
    rng = random.Random(seed)
    for t in enumerate_cells(s):
        w = h_forward(t, Q, sample_simplex_coords(t, rng))
        assert spine_labels_from_point(s, t.diagonals, Q, w) == t


# -- locating cells from points --------------------------------------------------------


def test_locate_both():
    t = spine_labels_from_point(Signature("oioi"), [Diag(1, 3)], build_polygon(4), (3, 1))
    assert t == oioi_edge(BOTH)


def test_locate_directed():
    t = spine_labels_from_point(Signature("oioi"), [Diag(1, 3)], build_polygon(4), (F(7, 2), F(1, 2)))
    assert t == oioi_edge(toward(1))
    assert dimension(t) == 1


def test_locate_vertex():
    t = spine_labels_from_point(Signature("oioi"), [Diag(1, 3)], build_polygon(4), (4, 0))
    assert t == oioi_edge(toward(1), BOTH)
    assert dimension(t) == 0


# -- Loday coordinates -------------------------------------------------------------------


def test_loday_combs():
    by_diag = {t.diagonals: tuple(loday_vector(t)) for t in enumerate_max_expanded(Signature("oiii"))}
    assert by_diag[(Diag(1, 3),)] == (1, 2)
    assert by_diag[(Diag(2, 4),)] == (2, 1)


def test_loday_needs_vertex():
    with pytest.raises(NotMaxExpanded):
        loday_vector(corolla(Signature("oiii")))


@pytest.mark.parametrize("n", range(3, 8))
def test_loday_is_the_classical_realization(n):
    """Coordinates sum to m(m+1)/2 for m internal vertices; all trees are hull vertices."""
    s = Signature("o" + "i" * (n - 1))
    pts = [tuple(loday_vector(t)) for t in enumerate_max_expanded(s)]
    m = n - 2
    assert all(sum(p) == m * (m + 1) // 2 for p in pts)
    assert affine_rank(pts) == n - 3
    if n <= 6:
        assert len(extreme_points(pts)) == len(pts)


@given(signatures(min_n=3, max_n=6))
@settings(max_examples=25, deadline=None)
def test_loday_w_total(s):
    m = s.n - 2
    for t in enumerate_max_expanded(s):
        w = loday_w(t)
        assert sum(w) == m * (m + 1) // 2 and min(w) >= 0
