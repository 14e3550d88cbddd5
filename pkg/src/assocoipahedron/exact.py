"""Exact rational linear algebra: affine rank, feasibility, extreme points.

Two independent feasibility routes are provided: Fourier-Motzkin elimination
for inequality systems and a phase-one simplex method (Bland's rule) for
``A x = b, x >= 0``.  Extreme-point tests can use either.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from math import gcd

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _matrix(rows: Sequence[Sequence[Fraction]]) -> DomainMatrix:
    ncols = len(rows[0])
    return DomainMatrix(
        [[QQ(int(x.numerator), int(x.denominator)) for x in (Fraction(v) for v in row)] for row in rows],
        (len(rows), ncols),
        QQ,
    )


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows or not rows[0]:
        return 0
    return _matrix(rows).rank()


def affine_rank(points: Sequence[Sequence[Fraction]]) -> int:
    """Dimension of the affine hull of ``points`` (0 for a single point)."""
    pts = [tuple(map(Fraction, p)) for p in points]
    if len(pts) <= 1:
        return 0
    base = pts[0]
    return rank([[x - y for x, y in zip(p, base)] for p in pts[1:]])


def pivot_columns(rows: Sequence[Sequence[Fraction]]) -> tuple[int, ...]:
    if not rows or not rows[0]:
        return ()
    _, pivots = _matrix(rows).rref()
    return tuple(pivots)


def _normalize(coeffs: tuple[Fraction, ...], rhs: Fraction):
    # scale to coprime integers so duplicates collapse
    den = 1
    for v in (*coeffs, rhs):
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in (*coeffs, rhs)]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    g = g or 1
    return tuple(Fraction(v // g) for v in ints[:-1]), Fraction(ints[-1] // g)


def fm_feasible(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> bool:
    """Decide whether ``A x >= b`` has a rational solution by Fourier-Motzkin.

    Chernikov's rule (drop derived rows built from more than ``eliminated + 1``
    originals) keeps the intermediate systems small without losing exactness.
    """
    nvars = len(A[0]) if A else 0
    rows = {}
    for i, (coeffs, rhs) in enumerate(zip(A, b)):
        key = _normalize(tuple(map(Fraction, coeffs)), Fraction(rhs))
        rows.setdefault(key, frozenset([i]))
    for var in range(nvars):
        pos, neg, rest = [], [], {}
        for (coeffs, rhs), hist in rows.items():
            c = coeffs[var]
            if c > 0:
                pos.append((coeffs, rhs, hist))
            elif c < 0:
                neg.append((coeffs, rhs, hist))
            else:
                rest[(coeffs, rhs)] = hist
        limit = var + 2
        for pc, pr, ph in pos:
            for nc, nr, nh in neg:
                hist = ph | nh
                if len(hist) > limit:
                    continue
                fp, fn = -nc[var], pc[var]
                coeffs = tuple(fp * x + fn * y for x, y in zip(pc, nc))
                rhs = fp * pr + fn * nr
                key = _normalize(coeffs, rhs)
                if key not in rest or len(rest[key]) > len(hist):
                    rest[key] = hist
        rows = rest
    return all(rhs <= 0 for (_, rhs) in rows)


def lp_feasible(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> bool:
    """Decide whether ``A x = b`` has a solution with ``x >= 0`` (phase-one simplex)."""
    m = len(A)
    if m == 0:
        return True
    n = len(A[0])
    rows = []
    for i in range(m):
        r = [Fraction(v) for v in A[i]]
        bi = Fraction(b[i])
        if bi < 0:
            r, bi = [-v for v in r], -bi
        rows.append(r + [Fraction(int(j == i)) for j in range(m)] + [bi])
    basis = [n + i for i in range(m)]
    total = n + m
    # reduced costs for "minimize the sum of artificials"; last entry is -objective
    obj = [-sum(r[j] for r in rows) if j < n else Fraction(0) for j in range(total)]
    obj.append(-sum(r[-1] for r in rows))
    while True:
        enter = next((j for j in range(total) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i, r in enumerate(rows):
            if r[enter] > 0:
                key = (r[-1] / r[enter], basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # cannot happen: the phase-one objective is bounded below
            break
        i = best[1]
        piv = rows[i][enter]
        rows[i] = [v / piv for v in rows[i]]
        for k, r in enumerate(rows):
            if k != i and r[enter] != 0:
                f = r[enter]
                rows[k] = [x - f * y for x, y in zip(r, rows[i])]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, rows[i])]
        basis[i] = enter
    return obj[-1] == 0


def in_convex_hull(point: Sequence[Fraction], others: Sequence[Sequence[Fraction]]) -> bool:
    """Exact membership of ``point`` in the convex hull of ``others`` (simplex method)."""
    if not others:
        return False
    d = len(point)
    A = [[Fraction(q[i]) for q in others] for i in range(d)] + [[Fraction(1)] * len(others)]
    return lp_feasible(A, [Fraction(x) for x in point] + [Fraction(1)])


def is_extreme(point: Sequence[Fraction], others: Sequence[Sequence[Fraction]], method: str = "lp") -> bool:
    """True iff ``point`` is not in the convex hull of ``others``.

    ``method="fm"`` searches for a separating functional ``c`` with
    ``c.(point - q) >= 1`` for all ``q`` by Fourier-Motzkin, after reducing
    coordinates to a basis of the difference span; ``method="lp"`` solves the
    convex-combination system with the simplex method.
    """
    p = tuple(map(Fraction, point))
    diffs = [tuple(x - Fraction(y) for x, y in zip(p, q)) for q in others]
    nonzero = [d for d in diffs if any(d)]
    if len(nonzero) < len(others):
        return False  # coincides with another point
    if not nonzero:
        return True
    if method == "lp":
        return not in_convex_hull(p, others)
    if method != "fm":
        raise ValueError(f"unknown method {method!r}")
    cols = pivot_columns(nonzero)
    A = [[d[j] for j in cols] for d in nonzero]
    return fm_feasible(A, [Fraction(1)] * len(A))


def _lex_extremes(pts: list[tuple[Fraction, ...]]) -> set[tuple[Fraction, ...]]:
    """Lexicographic maxima and minima under cyclic coordinate orders; each is a hull vertex."""
    d = len(pts[0])
    found = set()
    for start in range(d):
        order = [(start + j) % d for j in range(d)]
        found.add(max(pts, key=lambda p: tuple(p[j] for j in order)))
        found.add(min(pts, key=lambda p: tuple(p[j] for j in order)))
    return found


def extreme_points(points: Sequence[Sequence[Fraction]], method: str = "lp") -> list[tuple[Fraction, ...]]:
    """Vertices of the convex hull of a finite point set (duplicates merged).

    With the simplex method, points inside the hull of a few known vertices
    are discarded first; every remaining point gets the full test.
    """
    pts = sorted(set(tuple(map(Fraction, p)) for p in points))
    if method != "lp" or len(pts) <= 2 or not pts[0]:
        return [p for i, p in enumerate(pts) if is_extreme(p, pts[:i] + pts[i + 1:], method)]
    known = sorted(_lex_extremes(pts))
    out = []
    for i, p in enumerate(pts):
        if p in known:
            out.append(p)
        elif not in_convex_hull(p, known) and is_extreme(p, pts[:i] + pts[i + 1:], method):
            out.append(p)
    return out
