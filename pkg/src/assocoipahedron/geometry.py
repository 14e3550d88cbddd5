"""Exact rational realization of trees as points of (associahedron x simplex).

Every area, coordinate and predicate here is a :class:`fractions.Fraction`.
Vectors carry a tag naming their ambient space: ``"star"`` (one coordinate
per polygon corner), ``"out"`` (one per outgoing position) or ``"simplex"``.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, product
from pathlib import Path

from .trees import (
    BOTH,
    AlphaTree,
    Diag,
    Edge,
    Side,
    Signature,
    far_corners,
    far_part,
    is_max_expanded,
    near_min,
    layout,
    out_degrees,
    toward,
    validate,
)

Point = tuple[Fraction, Fraction]


class GeometryError(ValueError):
    pass


class NonConvex(GeometryError):
    pass


class CollinearTriple(GeometryError):
    pass


class NotATriangulation(GeometryError):
    pass


class AmbiguousFlow(GeometryError):
    pass


class DimensionMismatch(GeometryError):
    pass


class NotInLambda(GeometryError):
    pass


class ZeroDenominator(GeometryError):
    pass


class NotInSimplex(GeometryError):
    pass


class NotMaxExpanded(GeometryError):
    pass


def _signed2(p: Point, q: Point, r: Point) -> Fraction:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


@dataclass(frozen=True)
class PolygonSpec:
    """Convex polygon with corners listed counterclockwise."""

    corners: tuple[Point, ...]
    scheme: str = "explicit"

    @property
    def n(self) -> int:
        return len(self.corners)

    @cached_property
    def total_area(self) -> Fraction:
        return self.area(tuple(range(1, self.n + 1)))

    def area(self, corner_ids: Sequence[int]) -> Fraction:
        """Area of the sub-polygon on the given 1-based corners (cyclic order)."""
        return _area(self, tuple(corner_ids))

    def to_json(self):
        if self.scheme == "parabola":
            return "parabola"
        return [[_rat_str(x), _rat_str(y)] for x, y in self.corners]


@lru_cache(maxsize=None)
def _area(Q: PolygonSpec, ids: tuple[int, ...]) -> Fraction:
    if len(ids) < 3:
        return Fraction(0)
    pts = [Q.corners[i - 1] for i in ids]
    s = sum(x1 * y2 - x2 * y1 for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]))
    return abs(s) / 2


def build_polygon(n: int, coords: Sequence[Sequence] | None = None) -> PolygonSpec:
    """Parabola corners ``(j, j^2)`` by default, or validated explicit corners."""
    if coords is None:
        if n < 3:
            raise GeometryError("a polygon needs at least 3 corners")
        return PolygonSpec(tuple((Fraction(j), Fraction(j * j)) for j in range(1, n + 1)), "parabola")
    pts = tuple((Fraction(x), Fraction(y)) for x, y in coords)
    if len(pts) != n:
        raise GeometryError(f"expected {n} corners, got {len(pts)}")
    if n < 3:
        raise GeometryError("a polygon needs at least 3 corners")
    for i, j, k in combinations(range(n), 3):
        s = _signed2(pts[i], pts[j], pts[k])
        if s == 0:
            raise CollinearTriple(f"corners {i + 1}, {j + 1}, {k + 1} are collinear")
        if s < 0:
            raise NonConvex(f"corners {i + 1}, {j + 1}, {k + 1} are not in counterclockwise convex position")
    return PolygonSpec(pts)


def load_polygon(path: str | Path) -> PolygonSpec:
    """Read a JSON list of ``[x, y]`` pairs; entries are integers or ``"p/q"`` strings."""
    data = json.loads(Path(path).read_text())
    return build_polygon(len(data), [(Fraction(x), Fraction(y)) for x, y in data])


def _rat_str(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True)
class RationalVector(Sequence):
    coords: tuple[Fraction, ...]
    space: str = "out"

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def to_json(self):
        return [_rat_str(x) for x in self.coords]


def _check_polygon(t: AlphaTree, Q: PolygonSpec):
    if Q.n != t.n:
        raise DimensionMismatch(f"{Q.n}-gon for a signature of length {t.n}")


def star_area_vector(t: AlphaTree, Q: PolygonSpec) -> RationalVector:
    """Per corner, the total area of the triangles of the triangulation touching it."""
    if t.is_point:
        return RationalVector((), "star")
    _check_polygon(t, Q)
    if len(t.diagonals) != t.n - 3:
        raise NotATriangulation(f"{len(t.diagonals)} diagonals, need {t.n - 3}")
    v = [Fraction(0)] * t.n
    for tri in t.layout.regions:
        a = Q.area(tri)
        for c in tri:
            v[c - 1] += a
    return RationalVector(tuple(v), "star")


def _drain(t: AlphaTree, weight: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Sum region weights into the outgoing position each region flows to.

    Regions are glued along every diagonal not marked two-way; each piece
    must then own exactly one outward side.
    """
    bad = [r for r, d in out_degrees(t).items() if d != 1]
    lay = t.layout
    if bad:
        raise AmbiguousFlow(f"spine vertices {[lay.regions[r] for r in bad]} do not have out-degree 1")
    parent = list(range(len(lay.regions)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    labels = t.label_map
    for d, (near, far) in lay.diag_regions.items():
        if labels.get(d) != BOTH:
            parent[find(near)] = find(far)
    owner = {}
    for e, lab in t.labels:
        if isinstance(e, Side) and lab.toward == e.position:
            root = find(lay.side_region[e.position])
            if root in owner:
                raise AmbiguousFlow("a piece drains to two outgoing positions")
            owner[root] = t.signature.out_index[e.position]
    x = [Fraction(0)] * t.k
    for r, w in enumerate(weight):
        x[owner[find(r)]] += w
    return tuple(x)


def subpolygon_area_vector(t: AlphaTree, Q: PolygonSpec) -> RationalVector:
    """Areas of the pieces cut out by two-way spine edges, one per outgoing position."""
    if t.is_point:
        return RationalVector((), "out")
    _check_polygon(t, Q)
    return RationalVector(_drain(t, [Q.area(r) for r in t.layout.regions]), "out")


# -- constraint systems -------------------------------------------------------


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[int, ...]
    rhs: Fraction
    relation: str  # "=" or ">="
    edge: Edge | None = None

    def holds(self, w: Sequence[Fraction]) -> bool:
        lhs = sum((x for c, x in zip(self.coeffs, w) if c), Fraction(0))
        return lhs == self.rhs if self.relation == "=" else lhs >= self.rhs


@dataclass(frozen=True)
class ConstraintSystem:
    dim: int
    constraints: tuple[Constraint, ...]

    def equalities(self):
        return [c for c in self.constraints if c.relation == "="]

    def inequalities(self):
        return [c for c in self.constraints if c.relation == ">="]


def _part_sides(t: AlphaTree, Q: PolygonSpec, e: Edge, into_far: bool):
    """Indicator over out-coordinates and area of one side of edge ``e``."""
    n = t.n
    far = set(far_part(e, n))
    far_area = Q.area(far_corners(e, n))
    idx = t.signature.out_positions
    if into_far:
        return tuple(int(p in far) for p in idx), far_area
    return tuple(int(p not in far) for p in idx), Q.total_area - far_area


def _points_far(e: Edge, lab, n: int) -> bool:
    return lab.toward == far_part(e, n)[0]


def lambda_constraints(t: AlphaTree, Q: PolygonSpec) -> ConstraintSystem:
    """Simplex constraints plus one (in)equality per spine edge.

    A two-way edge fixes the coordinates of its far part to that part's area;
    a directed edge bounds the coordinates of the part it points into from
    below by that part's area.
    """
    _check_polygon(t, Q)
    k = t.k
    cons = [Constraint((1,) * k, Q.total_area, "=")]
    cons += [Constraint(tuple(int(i == j) for j in range(k)), Fraction(0), ">=") for i in range(k)]
    for e, lab in t.labels:
        if lab.is_both:
            coeffs, rhs = _part_sides(t, Q, e, True)
            cons.append(Constraint(coeffs, rhs, "=", e))
        else:
            coeffs, rhs = _part_sides(t, Q, e, _points_far(e, lab, t.n))
            cons.append(Constraint(coeffs, rhs, ">=", e))
    return ConstraintSystem(k, tuple(cons))


def lambda_contains(cs: ConstraintSystem, w: Sequence) -> bool:
    if len(w) != cs.dim:
        raise DimensionMismatch(f"vector of length {len(w)} for a {cs.dim}-dimensional system")
    w = [Fraction(x) for x in w]
    return all(c.holds(w) for c in cs.constraints)


# -- the area-redistribution map ------------------------------------------------


def spine_vertices(t: AlphaTree) -> list[tuple[tuple[int, ...], list[Edge]]]:
    """Spine regions (by corners) with their outgoing spine edges, in canonical order.

    This is the index order of the simplex coordinates taken by
    :func:`h_forward` and returned by :func:`h_inverse`.
    """
    lay = t.layout
    outs = {r: [] for r in lay.spine_regions}
    for e, (near, far, fmin, _) in zip(lay.spine, lay.ends):
        lab = t.label_map[e]
        if lab.is_both:
            continue
        src = near if lab.toward == fmin else far
        outs[src].append(e)
    return [(lay.regions[r], outs[r]) for r in lay.spine_regions]


def _head(t: AlphaTree, e: Edge, src: int):
    """Region an out-edge of ``src`` enters, or ``("out", index)`` for an outward side."""
    lay = t.layout
    if isinstance(e, Side):
        return ("out", t.signature.out_index[e.position])
    near, far = lay.diag_regions[e]
    return far if src == near else near


def _basins(t: AlphaTree, Q: PolygonSpec) -> dict[int, Fraction]:
    """Area of each spine region plus every off-spine region hanging from it."""
    lay = t.layout
    spine = set(lay.spine)
    parent = list(range(len(lay.regions)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for d, (near, far) in lay.diag_regions.items():
        if d not in spine:
            parent[find(near)] = find(far)
    by_root = {find(r): r for r in lay.spine_regions}
    basin = dict.fromkeys(lay.spine_regions, Fraction(0))
    for r, corners in enumerate(lay.regions):
        basin[by_root[find(r)]] += Q.area(corners)
    return basin


def _topological(t: AlphaTree, verts):
    lay = t.layout
    ridx = {c: i for i, c in enumerate(lay.regions)}
    succ = {}
    indeg = {ridx[c]: 0 for c, _ in verts}
    for c, edges in verts:
        r = ridx[c]
        succ[r] = []
        for e in edges:
            h = _head(t, e, r)
            succ[r].append((e, h))
            if not isinstance(h, tuple):
                indeg[h] += 1
    order = []
    ready = sorted(r for r, d in indeg.items() if d == 0)
    while ready:
        r = ready.pop(0)
        order.append(r)
        for _, h in succ[r]:
            if not isinstance(h, tuple):
                indeg[h] -= 1
                if indeg[h] == 0:
                    ready.append(h)
    return order, succ


def h_forward(t: AlphaTree, Q: PolygonSpec, simplex_coords: Sequence[Sequence]) -> RationalVector:
    """Distribute areas down the spine according to per-vertex simplex weights.

    ``simplex_coords[i]`` is a point of the simplex whose vertices are the
    outgoing edges of the ``i``-th entry of :func:`spine_vertices`.
    """
    _check_polygon(t, Q)
    verts = spine_vertices(t)
    if len(simplex_coords) != len(verts):
        raise DimensionMismatch(f"{len(simplex_coords)} simplex points for {len(verts)} spine vertices")
    ridx = {c: i for i, c in enumerate(t.layout.regions)}
    weights = {}
    for (c, edges), pt in zip(verts, simplex_coords):
        pt = tuple(Fraction(x) for x in pt)
        if len(pt) != len(edges):
            raise DimensionMismatch(f"vertex {c} has {len(edges)} outgoing edges, got {len(pt)} weights")
        if sum(pt) != 1 or any(x < 0 for x in pt):
            raise NotInSimplex(f"{pt} is not a point of the standard simplex")
        weights[ridx[c]] = dict(zip(edges, pt))
    order, succ = _topological(t, verts)
    carried = _basins(t, Q)
    x = [Fraction(0)] * t.k
    for r in order:
        total = carried[r]
        for e, h in succ[r]:
            share = weights[r][e] * total
            if isinstance(h, tuple):
                x[h[1]] += share
            else:
                carried[h] += share
    return RationalVector(tuple(x), "out")


def h_inverse(t: AlphaTree, Q: PolygonSpec, w: Sequence) -> list[tuple[Fraction, ...]]:
    """Recover the per-vertex simplex weights of a point of the cell's simplex factor."""
    cs = lambda_constraints(t, Q)
    w = tuple(Fraction(x) for x in w)
    if not lambda_contains(cs, w):
        raise NotInLambda(f"{w} violates the constraints of {t}")
    result = []
    for c, edges in spine_vertices(t):
        flows = []
        for e in edges:
            coeffs, area = _part_sides(t, Q, e, _points_far(e, t.label_map[e], t.n))
            flows.append(sum((x for f, x in zip(coeffs, w) if f), Fraction(0)) - area)
        total = sum(flows)
        if total == 0:
            raise ZeroDenominator(f"no outflow at spine vertex {c}")
        result.append(tuple(f / total for f in flows))
    return result


def spine_labels_from_point(signature: Signature, diagonals, Q: PolygonSpec, w: Sequence) -> AlphaTree:
    """The tree on a fixed dissection whose constraint system holds ``w`` in its relative interior."""
    w = tuple(Fraction(x) for x in w)
    if len(w) != signature.k:
        raise DimensionMismatch(f"vector of length {len(w)} for k={signature.k}")
    if sum(w) != Q.total_area or any(x < 0 for x in w):
        raise NotInSimplex(f"{w} is not in the simplex of total area {Q.total_area}")
    diags = tuple(sorted(set(diagonals), key=lambda d: (d.a, d.b)))
    lay = layout(signature.word, diags)
    n = signature.n
    labels = {}
    for e in lay.spine:
        far = set(far_part(e, n))
        got = sum((x for p, x in zip(signature.out_positions, w) if p in far), Fraction(0))
        area = Q.area(far_corners(e, n))
        if got == area:
            labels[e] = BOTH
        elif got > area:
            labels[e] = toward(min(far))
        else:
            labels[e] = toward(near_min(e))
    t = AlphaTree(signature, diags, labels)
    validate(t)
    return t


def corner_vectors(t: AlphaTree, Q: PolygonSpec) -> list[RationalVector]:
    """Images under :func:`h_forward` of all vertices of the product of simplices."""
    verts = spine_vertices(t)
    choices = [range(len(edges)) for _, edges in verts]
    out = []
    for pick in product(*choices):
        pts = [tuple(Fraction(int(i == j)) for i in range(len(edges))) for j, (_, edges) in zip(pick, verts)]
        out.append(h_forward(t, Q, pts))
    return out


def sample_simplex_coords(t: AlphaTree, rng, denominator: int = 97) -> list[tuple[Fraction, ...]]:
    """A random rational point in the relative interior of each spine vertex's simplex."""
    pts = []
    for _, edges in spine_vertices(t):
        raw = [rng.randint(1, denominator) for _ in edges]
        total = sum(raw)
        pts.append(tuple(Fraction(x, total) for x in raw))
    return pts


def h_roundtrip_problems(t: AlphaTree, Q: PolygonSpec, rng, samples: int = 100) -> list[str]:
    """Sample interior points, push them forward and pull them back; report any mismatch."""
    cs = lambda_constraints(t, Q)
    problems = []
    for _ in range(samples):
        pts = sample_simplex_coords(t, rng)
        w = h_forward(t, Q, pts)
        if not lambda_contains(cs, w):
            problems.append(f"{t}: image {tuple(w)} of {pts} is outside the constraint system")
            continue
        back = h_inverse(t, Q, w)
        if back != pts:
            problems.append(f"{t}: {pts} came back as {back}")
    return problems


# -- Loday coordinates ----------------------------------------------------------


def _loday_weights(t: AlphaTree) -> list[int]:
    if not is_max_expanded(t) or t.is_point:
        raise NotMaxExpanded(f"{t} is not maximally expanded")
    # triangle (a, m, b): a-b faces the base side; m - a leaves left, b - m right
    return [(m - a) * (b - m) for a, m, b in t.layout.regions]


def loday_vector(t: AlphaTree) -> RationalVector:
    """Products of leaf counts on both sides of each triangle, ordered left to right."""
    weights = _loday_weights(t)
    order = sorted(range(len(weights)), key=lambda r: t.layout.regions[r][1])
    return RationalVector(tuple(Fraction(weights[r]) for r in order), "loday")


def loday_w(t: AlphaTree) -> RationalVector:
    return RationalVector(_drain(t, [Fraction(x) for x in _loday_weights(t)]), "out")
