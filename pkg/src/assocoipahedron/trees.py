"""Directed planar trees with a cyclic in/out signature.

A tree is stored as a dissection of the reference polygon (the underlying
Stasheff tree: one region per interior vertex, one diagonal per interior
edge) together with labels on the spine edges, i.e. the edges lying on paths
between outgoing positions.  Edges off the spine are always oriented toward
the spine, so they are never stored.

The polygon has corners ``1..n``.  Position 1 is the base side ``(1, n)`` and
position ``j >= 2`` is the side ``(j - 1, j)``.  Every edge splits the
positions in two parts; the *far* part is the one not containing the base
side's interior, that is the segment ``{j}`` for a side and ``{a+1..b}`` for
a diagonal ``(a, b)``.  A directed label is written ``Toward(p)`` where ``p``
is the smallest position of the part the edge points into.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Union

OUT = "o"
IN = "i"


class SignatureError(ValueError):
    """A string or signature that cannot describe a tree."""


class EmptyInput(SignatureError):
    pass


class IllegalCharacter(SignatureError):
    pass


class NoOutgoingLabel(SignatureError):
    pass


class TooShort(SignatureError):
    pass


class UnsupportedSignature(SignatureError):
    """The two-symbol signature ``oi`` has no tree (only ``oo`` does)."""


class TreeError(ValueError):
    """Base class for invalid trees."""


class InvalidDiagonal(TreeError):
    pass


class CrossingDiagonals(TreeError):
    pass


class SpineMismatch(TreeError):
    pass


class SinkVertex(TreeError):
    pass


class BadExternalLabel(TreeError):
    pass


class BadLabel(TreeError):
    pass


class SignatureMismatch(TreeError):
    pass


@dataclass(frozen=True)
class Signature:
    """Cyclic word over ``o`` (outgoing) and ``i`` (incoming)."""

    word: str

    def __post_init__(self):
        if not self.word:
            raise EmptyInput("empty signature")
        bad = sorted(set(self.word) - {OUT, IN})
        if bad:
            raise IllegalCharacter(f"illegal characters {bad!r} in {self.word!r}")
        if OUT not in self.word:
            raise NoOutgoingLabel(f"{self.word!r} has no outgoing label")
        if len(self.word) < 2:
            raise TooShort(f"{self.word!r} has fewer than 2 labels")

    def __str__(self):
        return self.word

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def k(self) -> int:
        return self.word.count(OUT)

    @property
    def l(self) -> int:
        return self.word.count(IN)

    @cached_property
    def out_positions(self) -> tuple[int, ...]:
        return tuple(j for j, c in enumerate(self.word, 1) if c == OUT)

    @cached_property
    def out_index(self) -> dict[int, int]:
        """Map from outgoing position to its 0-based coordinate index."""
        return {p: i for i, p in enumerate(self.out_positions)}

    def is_out(self, position: int) -> bool:
        return self.word[position - 1] == OUT

    def rotate(self, r: int) -> Signature:
        r %= self.n
        return Signature(self.word[r:] + self.word[:r])


def parse_signature(text: str) -> Signature:
    """Parse a word such as ``"oioi"`` (case-insensitive, ``i`` = incoming)."""
    if text is None or not text.strip():
        raise EmptyInput("empty signature")
    return Signature(text.strip().lower())


def canonical_rotation(s: Signature) -> tuple[Signature, int]:
    """Lexicographically smallest rotation (``o`` before ``i``) and its offset."""
    key = s.word.translate(str.maketrans("oi", "01"))
    best = min(range(s.n), key=lambda r: (key[r:] + key[:r], r))
    return s.rotate(best), best


# -- edges ------------------------------------------------------------------


@dataclass(frozen=True)
class Side:
    """External edge at a position."""

    position: int

    def to_json(self):
        return {"side": self.position}


@dataclass(frozen=True)
class Diag:
    """Internal edge: the diagonal between corners ``a < b``."""

    a: int
    b: int

    def to_json(self):
        return {"diag": [self.a, self.b]}


Edge = Union[Side, Diag]


def far_part(e: Edge, n: int) -> range:
    if isinstance(e, Side):
        return range(e.position, e.position + 1)
    return range(e.a + 1, e.b + 1)


def near_min(e: Edge) -> int:
    """Smallest position of the part not returned by :func:`far_part`."""
    if isinstance(e, Side) and e.position == 1:
        return 2
    return 1


def far_corners(e: Edge, n: int) -> tuple[int, ...]:
    """Corners of the far part (two corners, i.e. a segment, for a side)."""
    if isinstance(e, Side):
        j = e.position
        return (n, 1) if j == 1 else (j - 1, j)
    return tuple(range(e.a, e.b + 1))


def edge_key(e: Edge, n: int) -> tuple[int, int]:
    # preorder of the Stasheff tree rooted at the base side
    if isinstance(e, Side):
        return (1, -n) if e.position == 1 else (e.position, -e.position)
    return (e.a + 1, -e.b)


def check_diagonal(d: Diag, n: int) -> None:
    if not (1 <= d.a < d.b <= n) or d.b - d.a < 2 or (d.a, d.b) == (1, n):
        raise InvalidDiagonal(f"({d.a},{d.b}) is not a diagonal of a {n}-gon")


def crosses(d1: Diag, d2: Diag) -> bool:
    return d1.a < d2.a < d1.b < d2.b or d2.a < d1.a < d2.b < d1.b


# -- labels -----------------------------------------------------------------


@dataclass(frozen=True)
class SpineLabel:
    """Direction of a spine edge, or the two-way mark when ``toward`` is None."""

    toward: int | None = None

    @property
    def is_both(self) -> bool:
        return self.toward is None

    def sort_key(self):
        return (1, 0) if self.toward is None else (0, self.toward)

    def __repr__(self):
        return "BOTH" if self.toward is None else f"Toward({self.toward})"


BOTH = SpineLabel()


def toward(position: int) -> SpineLabel:
    return SpineLabel(position)


def out_label(e: Edge) -> SpineLabel:
    """Outward label of an external edge."""
    return SpineLabel(e.position)


# -- dissections ------------------------------------------------------------


@lru_cache(maxsize=None)
def all_diagonals(n: int) -> tuple[Diag, ...]:
    return tuple(
        Diag(a, b)
        for a in range(1, n + 1)
        for b in range(a + 2, n + 1)
        if (a, b) != (1, n)
    )


@lru_cache(maxsize=None)
def dissections(n: int) -> tuple[tuple[Diag, ...], ...]:
    """Every set of pairwise non-crossing diagonals of an ``n``-gon."""
    diags = all_diagonals(n)
    out = []

    def rec(i, chosen):
        if i == len(diags):
            out.append(tuple(chosen))
            return
        rec(i + 1, chosen)
        d = diags[i]
        if not any(crosses(d, c) for c in chosen):
            chosen.append(d)
            rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    return tuple(sorted(out, key=_diag_key))


@lru_cache(maxsize=None)
def triangulations(n: int) -> tuple[tuple[Diag, ...], ...]:
    def tri(i, j):
        if j - i < 2:
            yield ()
            return
        for m in range(i + 1, j):
            extra = tuple(Diag(x, y) for x, y in ((i, m), (m, j)) if y - x >= 2)
            for left in tri(i, m):
                for right in tri(m, j):
                    yield left + right + extra

    return tuple(sorted((tuple(sorted(t, key=_ab)) for t in tri(1, n)), key=_diag_key))


def _ab(d: Diag):
    return (d.a, d.b)


def _diag_key(diags):
    return tuple((d.a, d.b) for d in diags)


@dataclass(frozen=True)
class Layout:
    """Regions and spine of a dissection for a fixed signature."""

    word: str
    diagonals: tuple[Diag, ...]
    regions: tuple[tuple[int, ...], ...]
    spine: tuple[Edge, ...]
    # per spine edge: (near region, far region or None, far_min, near_min)
    ends: tuple[tuple[int, int | None, int, int], ...]
    spine_regions: tuple[int, ...]
    side_region: dict = field(compare=False)
    diag_regions: dict = field(compare=False)


@lru_cache(maxsize=None)
def regions_of(n: int, diagonals: tuple[Diag, ...]) -> tuple[tuple[int, ...], ...]:
    """Corner lists (ascending, hence cyclic) of the regions of a dissection."""
    regions = [tuple(range(1, n + 1))]
    for d in diagonals:
        for i, r in enumerate(regions):
            if d.a in r and d.b in r:
                inner = tuple(c for c in r if d.a <= c <= d.b)
                outer = tuple(c for c in r if c <= d.a or c >= d.b)
                regions[i:i + 1] = [outer, inner]
                break
        else:
            raise CrossingDiagonals(f"diagonal ({d.a},{d.b}) crosses another")
    return tuple(sorted(regions))


@lru_cache(maxsize=None)
def layout(word: str, diagonals: tuple[Diag, ...]) -> Layout:
    n = len(word)
    regions = regions_of(n, diagonals)
    side_region = {}
    diag_regions = {}
    for ri, r in enumerate(regions):
        m = len(r)
        for x, y in ((r[i], r[(i + 1) % m]) for i in range(m)):
            x, y = min(x, y), max(x, y)
            if y == x + 1:
                side_region[y] = ri
            elif (x, y) == (1, n):
                side_region[1] = ri
            else:
                d = Diag(x, y)
                near, far = diag_regions.get(d, (None, None))
                if all(x <= c <= y for c in r):
                    far = ri
                else:
                    near = ri
                diag_regions[d] = (near, far)

    outs = [j for j, c in enumerate(word, 1) if c == OUT]
    spine: list[Edge] = [Side(j) for j in outs]
    for d in diagonals:
        inside = sum(1 for j in outs if d.a < j <= d.b)
        if 0 < inside < len(outs):
            spine.append(d)
    spine.sort(key=lambda e: edge_key(e, n))

    ends = []
    touched = set()
    for e in spine:
        if isinstance(e, Side):
            near, far = side_region[e.position], None
        else:
            near, far = diag_regions[e]
            touched.add(far)
        touched.add(near)
        ends.append((near, far, far_part(e, n)[0], near_min(e)))
    return Layout(word, diagonals, regions, tuple(spine), tuple(ends),
                  tuple(sorted(touched)), side_region, diag_regions)


def label_options(e: Edge) -> tuple[SpineLabel, ...]:
    if isinstance(e, Side):
        return (out_label(e), BOTH)
    return (toward(1), toward(e.a + 1), BOTH)


def _sources(lay: Layout, labels) -> list[int | None]:
    """Region each directed spine edge leaves (None for the two-way mark)."""
    src = []
    for (near, far, fmin, _), lab in zip(lay.ends, labels):
        if lab.toward is None:
            src.append(None)
        elif lab.toward == fmin:
            src.append(near)
        else:
            src.append(far)
    return src


# -- trees ------------------------------------------------------------------


@dataclass(frozen=True)
class AlphaTree:
    """An alpha-tree as (dissection, spine labels), canonically ordered.

    ``labels`` may be given as a mapping or as (edge, label) pairs; the
    constructor sorts both fields so equal trees compare equal.  Nothing is
    validated here, see :func:`validate`.
    """

    signature: Signature
    diagonals: tuple[Diag, ...] = ()
    labels: tuple[tuple[Edge, SpineLabel], ...] = ()

    def __post_init__(self):
        n = self.signature.n
        diags = tuple(sorted(set(self.diagonals), key=_ab))
        items = self.labels.items() if isinstance(self.labels, Mapping) else self.labels
        labels = tuple(sorted(items, key=lambda kv: edge_key(kv[0], n)))
        object.__setattr__(self, "diagonals", diags)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.signature.n

    @property
    def k(self) -> int:
        return self.signature.k

    @cached_property
    def label_map(self) -> dict[Edge, SpineLabel]:
        return dict(self.labels)

    @cached_property
    def _hash(self) -> int:
        return hash((self.signature, self.diagonals, self.labels))

    def __hash__(self):
        # trees are dictionary keys everywhere; the field hash is deep and slow
        return self._hash

    @property
    def is_point(self) -> bool:
        """The single ``oo`` tree."""
        return self.n == 2

    @property
    def layout(self) -> Layout:
        return layout(self.signature.word, self.diagonals)

    def sort_key(self):
        return (_diag_key(self.diagonals), tuple(lab.sort_key() for _, lab in self.labels))

    def __str__(self):
        diags = ",".join(f"({d.a},{d.b})" for d in self.diagonals)
        labs = ",".join(f"{_edge_str(e)}:{_label_str(e, lab)}" for e, lab in self.labels)
        return f"{self.signature}[{diags}|{labs}]"


def _edge_str(e: Edge) -> str:
    return f"s{e.position}" if isinstance(e, Side) else f"d{e.a}{e.b}" if e.b < 10 else f"d{e.a}.{e.b}"


def _label_str(e: Edge, lab: SpineLabel) -> str:
    if lab.is_both:
        return "<>"
    if isinstance(e, Side) and lab.toward == e.position:
        return "out"
    return f">{lab.toward}"


def point_tree() -> AlphaTree:
    return AlphaTree(Signature("oo"))


def corolla(s: Signature) -> AlphaTree:
    """The tree with no internal edge and every outgoing side pointing out."""
    if s.n == 2:
        return _point_or_reject(s)
    return AlphaTree(s, (), {Side(j): toward(j) for j in s.out_positions})


def _point_or_reject(s: Signature) -> AlphaTree:
    if s.word != "oo":
        raise UnsupportedSignature(f"no tree has signature {s.word!r}")
    return point_tree()


def validate(t: AlphaTree) -> None:
    """Raise a :class:`TreeError` unless ``t`` is a valid alpha-tree."""
    n = t.n
    if n == 2:
        _point_or_reject(t.signature)
        if t.diagonals or t.labels:
            raise SpineMismatch("the oo tree carries no diagonals or labels")
        return
    for d in t.diagonals:
        check_diagonal(d, n)
    for d1, d2 in itertools.combinations(t.diagonals, 2):
        if crosses(d1, d2):
            raise CrossingDiagonals(f"({d1.a},{d1.b}) crosses ({d2.a},{d2.b})")
    lay = t.layout
    keys = [e for e, _ in t.labels]
    if len(set(keys)) != len(keys) or set(keys) != set(lay.spine):
        raise SpineMismatch(
            f"labelled edges {sorted(map(_edge_str, keys))} != spine {[_edge_str(e) for e in lay.spine]}"
        )
    labels = [t.label_map[e] for e in lay.spine]
    for e, lab in zip(lay.spine, labels):
        if lab.is_both:
            continue
        if isinstance(e, Side):
            if lab.toward != e.position:
                raise BadExternalLabel(f"outgoing side {e.position} must point out or be two-way")
        elif lab.toward not in (1, e.a + 1):
            raise BadLabel(f"{lab!r} is not a direction of diagonal ({e.a},{e.b})")
    deg = dict.fromkeys(lay.spine_regions, 0)
    for s in _sources(lay, labels):
        if s is not None:
            deg[s] += 1
    sinks = [lay.regions[r] for r, d in deg.items() if d == 0]
    if sinks:
        raise SinkVertex(f"spine vertices {sinks} have no outgoing edge")


def is_valid(t: AlphaTree) -> bool:
    try:
        validate(t)
    except TreeError:
        return False
    return True


def out_degrees(t: AlphaTree) -> dict[int, int]:
    """Out-degree on the spine of every spine region (keyed by region index)."""
    lay = t.layout
    deg = dict.fromkeys(lay.spine_regions, 0)
    for s in _sources(lay, [t.label_map[e] for e in lay.spine]):
        if s is not None:
            deg[s] += 1
    return deg


def dimension(t: AlphaTree) -> int:
    if t.is_point:
        return 0
    extra = sum(d - 1 for d in out_degrees(t).values())
    return (t.n - 3) - len(t.diagonals) + extra


def is_max_expanded(t: AlphaTree) -> bool:
    if t.is_point:
        return True
    return len(t.diagonals) == t.n - 3 and all(d == 1 for d in out_degrees(t).values())


def enumerate_cells(s: Signature) -> list[AlphaTree]:
    """All alpha-trees of ``s`` in deterministic order."""
    if s.n == 2:
        return [_point_or_reject(s)]
    trees = []
    for diags in dissections(s.n):
        lay = layout(s.word, diags)
        needed = set(lay.spine_regions)
        for combo in itertools.product(*(label_options(e) for e in lay.spine)):
            if needed.issubset(_sources(lay, combo)):
                trees.append(AlphaTree(s, diags, tuple(zip(lay.spine, combo))))
    trees.sort(key=AlphaTree.sort_key)
    return trees


def enumerate_max_expanded(s: Signature) -> list[AlphaTree]:
    """Maximally expanded trees: triangulations with one out-edge per spine vertex."""
    if s.n == 2:
        return [_point_or_reject(s)]
    trees = []
    for diags in triangulations(s.n):
        lay = layout(s.word, diags)
        incident = {r: [] for r in lay.spine_regions}
        for i, (near, far, _, _) in enumerate(lay.ends):
            incident[near].append(i)
            if far is not None:
                incident[far].append(i)
        order = list(lay.spine_regions)
        chosen_by = [None] * len(lay.spine)

        def rec(pos):
            if pos == len(order):
                labels = []
                for i, e in enumerate(lay.spine):
                    near, far, fmin, nmin = lay.ends[i]
                    r = chosen_by[i]
                    if r is None:
                        labels.append(BOTH)
                    elif r == near:
                        labels.append(toward(fmin))
                    else:
                        labels.append(toward(nmin))
                trees.append(AlphaTree(s, diags, tuple(zip(lay.spine, labels))))
                return
            r = order[pos]
            for i in incident[r]:
                if chosen_by[i] is None:
                    chosen_by[i] = r
                    rec(pos + 1)
                    chosen_by[i] = None

        rec(0)
    trees.sort(key=AlphaTree.sort_key)
    return trees


def one_step_expansions(t: AlphaTree) -> list[AlphaTree]:
    """Trees obtained by one formal edge expansion, in deterministic order.

    The moves are: turn one directed spine label into the two-way mark; add a
    diagonal off the spine; add a diagonal on the spine with a direction.
    """
    if t.is_point:
        return []
    s = t.signature
    out = []
    lay = t.layout
    for e, lab in t.labels:
        if not lab.is_both:
            labels = {**t.label_map, e: BOTH}
            if _no_sinks(lay, labels):
                out.append(AlphaTree(s, t.diagonals, labels))
    outs = s.out_positions
    for d in all_diagonals(t.n):
        if d in t.diagonals or any(crosses(d, c) for c in t.diagonals):
            continue
        diags = tuple(sorted(t.diagonals + (d,), key=_ab))
        inside = sum(1 for j in outs if d.a < j <= d.b)
        if 0 < inside < len(outs):
            lay2 = layout(s.word, diags)
            for lab in (toward(1), toward(d.a + 1)):
                labels = {**t.label_map, d: lab}
                if _no_sinks(lay2, labels):
                    out.append(AlphaTree(s, diags, labels))
        else:
            # the spine lies on one side of an off-spine diagonal, so validity is kept
            out.append(AlphaTree(s, diags, t.labels))
    out.sort(key=AlphaTree.sort_key)
    return out


def _no_sinks(lay: Layout, label_map) -> bool:
    """Sink-freeness for labels already known to sit on the spine of ``lay``."""
    srcs = set(_sources(lay, [label_map[e] for e in lay.spine]))
    return all(r in srcs for r in lay.spine_regions)


@lru_cache(maxsize=None)
def descendants(t: AlphaTree) -> frozenset[AlphaTree]:
    """Every tree reachable by one or more one-step expansions."""
    acc = set()
    for c in one_step_expansions(t):
        acc.add(c)
        acc |= descendants(c)
    return frozenset(acc)


def is_expansion(t: AlphaTree, t2: AlphaTree) -> bool:
    """True iff ``t2`` is a (strict) edge expansion of ``t``."""
    if t.signature != t2.signature:
        raise SignatureMismatch(f"{t.signature} vs {t2.signature}")
    return t2 in descendants(t)


@lru_cache(maxsize=None)
def _max_expansions(t: AlphaTree) -> frozenset[AlphaTree]:
    if is_max_expanded(t):
        return frozenset([t])
    acc = set()
    for c in one_step_expansions(t):
        acc |= _max_expansions(c)
    return frozenset(acc)


def max_expansions_of(t: AlphaTree) -> list[AlphaTree]:
    return sorted(_max_expansions(t), key=AlphaTree.sort_key)


# -- cyclic rotation --------------------------------------------------------


def rotate_tree(t: AlphaTree, r: int) -> AlphaTree:
    """Renumber positions so that the tree lives on ``signature.rotate(r)``."""
    n = t.n
    r %= n
    s2 = t.signature.rotate(r)
    if t.is_point:
        return AlphaTree(s2)

    def pos(p):
        return (p - 1 - r) % n + 1

    diags = []
    for d in t.diagonals:
        a, b = sorted((pos(d.a), pos(d.b)))
        diags.append(Diag(a, b))
    labels = {}
    for e, lab in t.labels:
        if isinstance(e, Side):
            e2 = Side(pos(e.position))
        else:
            a, b = sorted((pos(e.a), pos(e.b)))
            e2 = Diag(a, b)
        if lab.is_both:
            labels[e2] = BOTH
            continue
        q = pos(lab.toward)
        far = far_part(e2, n)
        labels[e2] = toward(far[0] if q in far else near_min(e2))
    return AlphaTree(s2, diags, labels)


# -- JSON -------------------------------------------------------------------


def tree_to_json(t: AlphaTree) -> dict:
    labels = []
    for e, lab in t.labels:
        if lab.is_both:
            js = "both"
        elif isinstance(e, Side) and lab.toward == e.position:
            js = "out"
        else:
            js = {"toward_position": lab.toward}
        labels.append({"edge": e.to_json(), "label": js})
    return {
        "alpha": t.signature.word,
        "diagonals": [[d.a, d.b] for d in t.diagonals],
        "labels": labels,
    }


def tree_from_json(obj: dict) -> AlphaTree:
    s = parse_signature(obj["alpha"])
    diags = [Diag(int(a), int(b)) for a, b in obj.get("diagonals", [])]
    labels = {}
    for item in obj.get("labels", []):
        ej = item["edge"]
        if "side" in ej:
            e = Side(int(ej["side"]))
        else:
            a, b = ej["diag"]
            e = Diag(int(a), int(b))
        lj = item["label"]
        if lj == "both":
            lab = BOTH
        elif lj == "out":
            if not isinstance(e, Side):
                raise BadLabel("'out' only applies to external edges")
            lab = out_label(e)
        else:
            lab = toward(int(lj["toward_position"]))
        labels[e] = lab
    return AlphaTree(s, diags, labels)
