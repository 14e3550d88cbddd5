"""The cell complex of all alpha-trees, with exact vertex coordinates and checks.

Topological statements (ball, sphere boundary) are checked through decidable
surrogates: Euler characteristics, a pseudomanifold condition on the
boundary, gradedness of the face poset and exact affine ranks.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import exact
from .geometry import PolygonSpec, RationalVector, build_polygon, star_area_vector, subpolygon_area_vector
from .trees import (
    AlphaTree,
    Signature,
    dimension,
    enumerate_cells,
    one_step_expansions,
    rotate_tree,
    tree_to_json,
)

HULL_CHECK_MAX_N = 7


class FormatUnsupported(ValueError):
    pass


@dataclass(frozen=True)
class CellRecord:
    id: int
    tree: AlphaTree
    dim: int
    facets: tuple[int, ...]
    vertex_ids: tuple[int, ...]
    coords: tuple[RationalVector, RationalVector] | None = None


@dataclass(frozen=True)
class CellComplex:
    signature: Signature
    polygon: PolygonSpec | None
    cells: tuple[CellRecord, ...]
    top_cell: int | None
    f_vector: tuple[int, ...] = field(default=())

    @property
    def dim(self) -> int:
        return len(self.f_vector) - 1

    def vertices(self) -> list[CellRecord]:
        return [c for c in self.cells if c.dim == 0]

    def point(self, cell_id: int) -> tuple[Fraction, ...]:
        v, w = self.cells[cell_id].coords
        return tuple(v) + tuple(w)


def _f_vector(cells) -> tuple[int, ...]:
    counts = Counter(c.dim for c in cells)
    if not counts:
        return ()
    return tuple(counts.get(d, 0) for d in range(max(counts) + 1))


def build_complex(s: Signature, Q: PolygonSpec | None = None) -> CellComplex:
    """Cells indexed by trees (ids follow enumeration order); vertices carry (v, w)."""
    trees = enumerate_cells(s)
    if s.n >= 3 and Q is None:
        Q = build_polygon(s.n)
    ids = {t: i for i, t in enumerate(trees)}
    dims = [dimension(t) for t in trees]
    facets = [tuple(sorted(ids[c] for c in one_step_expansions(t))) for t in trees]
    # vertex sets bottom-up: a cell's vertices are those of its facets
    verts: list[tuple[int, ...]] = [()] * len(trees)
    for i in sorted(range(len(trees)), key=dims.__getitem__):
        if dims[i] == 0:
            verts[i] = (i,)
        else:
            verts[i] = tuple(sorted(set().union(*(verts[f] for f in facets[i]))))
    cells = []
    for i, t in enumerate(trees):
        coords = None
        if dims[i] == 0:
            coords = (star_area_vector(t, Q), subpolygon_area_vector(t, Q)) if Q is not None else (
                RationalVector((), "star"), RationalVector((), "out"))
        cells.append(CellRecord(i, t, dims[i], facets[i], verts[i], coords))
    fv = _f_vector(cells)
    tops = [c.id for c in cells if c.dim == len(fv) - 1]
    return CellComplex(s, Q, tuple(cells), tops[0] if len(tops) == 1 else None, fv)


def euler_characteristic(c: CellComplex) -> int:
    return sum((-1) ** d * f for d, f in enumerate(c.f_vector))


def boundary_subcomplex(c: CellComplex) -> CellComplex:
    """All cells except the top one, renumbered; facet lists are remapped."""
    keep = [cell for cell in c.cells if cell.id != c.top_cell]
    new = {cell.id: i for i, cell in enumerate(keep)}
    cells = tuple(
        CellRecord(new[cell.id], cell.tree, cell.dim,
                   tuple(new[f] for f in cell.facets),
                   tuple(new[v] for v in cell.vertex_ids), cell.coords)
        for cell in keep
    )
    return CellComplex(c.signature, c.polygon, cells, None, _f_vector(cells))


def pseudomanifold_check(c: CellComplex) -> list[str]:
    """Violations of: boundary Euler characteristic 1 + (-1)^(d-1), and every
    codimension-2 cell lying in exactly two boundary facets."""
    d = c.dim
    if c.top_cell is None:
        return ["no unique top cell"]
    bd = boundary_subcomplex(c)
    problems = []
    chi = euler_characteristic(bd)
    expected = 1 - (-1) ** d  # = 1 + (-1)^(d-1); the empty boundary of a point has chi 0
    if chi != expected:
        problems.append(f"boundary Euler characteristic {chi} != {expected}")
    uses = Counter()
    for cell in bd.cells:
        if cell.dim == d - 1:
            uses.update(cell.facets)
    for cell in bd.cells:
        if cell.dim == d - 2 and uses[cell.id] != 2:
            problems.append(f"cell {cell.tree} lies in {uses[cell.id]} boundary facets")
    return problems


def poset_problems(c: CellComplex) -> list[str]:
    """Gradedness, unique top cell, facet closure and the vertex/dimension link."""
    problems = []
    expected_top = c.signature.n + c.signature.k - 4 if c.signature.n >= 3 else 0
    if c.top_cell is None:
        problems.append("no unique top cell")
    elif c.cells[c.top_cell].dim != expected_top:
        problems.append(f"top cell has dim {c.cells[c.top_cell].dim}, expected {expected_top}")
    for cell in c.cells:
        if cell.dim == 0:
            if cell.facets or cell.vertex_ids != (cell.id,):
                problems.append(f"vertex {cell.id} has facets or foreign vertices")
            continue
        if not cell.facets:
            problems.append(f"cell {cell.id} of dim {cell.dim} has no facets")
        for f in cell.facets:
            if c.cells[f].dim != cell.dim - 1:
                problems.append(f"facet {f} of cell {cell.id} has dim {c.cells[f].dim}")
        union = sorted(set().union(*(c.cells[f].vertex_ids for f in cell.facets))) if cell.facets else []
        if tuple(union) != cell.vertex_ids:
            problems.append(f"cell {cell.id}: vertices differ from the union over its facets")
        if any(c.cells[v].dim != 0 for v in cell.vertex_ids):
            problems.append(f"cell {cell.id} lists a non-vertex as a vertex")
    return problems


def verify_geometric_dims(c: CellComplex) -> list[str]:
    """Cells whose vertex set spans the wrong affine dimension, and coincident vertices."""
    problems = []
    pts = {v.id: c.point(v.id) for v in c.vertices()}
    seen = {}
    for vid, p in pts.items():
        if p in seen:
            problems.append(f"vertices {seen[p]} and {vid} coincide")
        seen[p] = vid
    for cell in c.cells:
        r = exact.affine_rank([pts[v] for v in cell.vertex_ids])
        if r != cell.dim:
            problems.append(f"cell {cell.id} has affine rank {r}, dim {cell.dim}")
    return problems


def _poset(c: CellComplex):
    return {cell.tree: (cell.dim, frozenset(c.cells[f].tree for f in cell.facets)) for cell in c.cells}


@lru_cache(maxsize=64)
def _poset_of_word(word: str):
    return _poset(build_complex(Signature(word)))


def rotation_isomorphism_check(s: Signature, r: int) -> list[str]:
    """Check that renumbering positions by ``r`` is a face-poset isomorphism onto the rotated signature."""
    if not 0 <= r < s.n:
        raise ValueError(f"rotation {r} outside 0..{s.n - 1}")
    src = _poset_of_word(s.word)
    dst = _poset_of_word(s.rotate(r).word)
    problems = []
    image = {t: rotate_tree(t, r) for t in src}
    if len(set(image.values())) != len(src) or set(image.values()) != set(dst):
        problems.append("rotation is not a bijection of cells")
        return problems
    for t, t2 in image.items():
        d, facets = src[t]
        d2, facets2 = dst[t2]
        if d != d2:
            problems.append(f"{t} has dim {d} but its image has dim {d2}")
        if frozenset(image[f] for f in facets) != facets2:
            problems.append(f"facets of {t} do not map onto facets of its image")
    return problems


def same_poset(c1: CellComplex, c2: CellComplex) -> bool:
    return c1.f_vector == c2.f_vector and _poset(c1) == _poset(c2)


def hull_check(c: CellComplex) -> list[str]:
    """Every star-area vector is a vertex of the convex hull of all of them.

    Uses exact Fourier-Motzkin separation; limited to n <= 7.
    """
    if c.signature.n > HULL_CHECK_MAX_N:
        raise ValueError(f"hull check limited to n <= {HULL_CHECK_MAX_N}")
    vs = sorted({tuple(cell.coords[0]) for cell in c.vertices()})
    return [f"star vector {v} is not extreme"
            for i, v in enumerate(vs) if not exact.is_extreme(v, vs[:i] + vs[i + 1:], method="fm")]


# -- export -------------------------------------------------------------------


def complex_to_json(c: CellComplex) -> dict:
    return {
        "alpha": c.signature.word,
        "polygon": c.polygon.to_json() if c.polygon is not None else None,
        "f_vector": list(c.f_vector),
        "cells": [
            {"id": cell.id, "tree": tree_to_json(cell.tree), "dim": cell.dim,
             "facets": list(cell.facets), "vertices": list(cell.vertex_ids)}
            for cell in c.cells
        ],
        "vertex_coordinates": [
            {"id": v.id, "v": v.coords[0].to_json(), "w": v.coords[1].to_json()} for v in c.vertices()
        ],
    }


def vertices_to_json(c: CellComplex) -> dict:
    return {
        "alpha": c.signature.word,
        "polygon": c.polygon.to_json() if c.polygon is not None else None,
        "vertices": [
            {"tree": tree_to_json(v.tree), "v": v.coords[0].to_json(), "w": v.coords[1].to_json()}
            for v in c.vertices()
        ],
    }


def _affine_frame(points):
    """Orthogonal (unnormalized) basis of the affine hull, by exact Gram-Schmidt."""
    base = points[0]
    basis = []
    for p in points[1:]:
        u = [x - y for x, y in zip(p, base)]
        for b in basis:
            bb = sum(x * x for x in b)
            f = sum(x * y for x, y in zip(u, b)) / bb
            u = [x - f * y for x, y in zip(u, b)]
        if any(u):
            basis.append(u)
    return base, basis


def _cycle(c: CellComplex, cell: CellRecord) -> list[int]:
    """Vertex ids of a 2-cell in boundary order."""
    edges = [c.cells[f].vertex_ids for f in cell.facets]
    adj = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    start = min(adj)
    order, prev = [start], None
    cur = start
    while True:
        nxt = [x for x in sorted(adj[cur]) if x != prev]
        step = nxt[0]
        if step == start:
            break
        order.append(step)
        prev, cur = cur, step
        if len(order) > len(adj):
            raise ValueError(f"facets of cell {cell.id} do not form a cycle")
    return order


def to_off(c: CellComplex) -> str:
    """OFF text: vertices projected to their affine hull (3 display coordinates),
    faces are the 2-cells.  Floats are display-only."""
    if c.dim > 3:
        raise FormatUnsupported(f"OFF export needs top dimension <= 3, got {c.dim}")
    verts = c.vertices()
    index = {v.id: i for i, v in enumerate(verts)}
    pts = [c.point(v.id) for v in verts]
    base, basis = _affine_frame(pts)
    lines = []
    for p in pts:
        u = [x - y for x, y in zip(p, base)]
        xyz = [float(sum(a * b for a, b in zip(u, bv))) / math.sqrt(sum(x * x for x in bv)) for bv in basis]
        xyz += [0.0] * (3 - len(xyz))
        lines.append(" ".join(f"{x:.17g}" for x in xyz))
    faces = [cell for cell in c.cells if cell.dim == 2]
    face_lines = []
    for cell in faces:
        cyc = [index[v] for v in _cycle(c, cell)]
        face_lines.append(" ".join(map(str, [len(cyc), *cyc])))
    f = c.f_vector
    edges = f[1] if len(f) > 1 else 0
    solids = f[3] if len(f) > 3 else 0
    header = [
        "OFF",
        f"# alpha {c.signature.word}",
        f"# f_vector {' '.join(map(str, f))}",
        f"# solids {solids}",
        f"{len(verts)} {len(faces)} {edges}",
    ]
    return "\n".join(header + lines + face_lines) + "\n"
