"""Vertex counts C(alpha) and generalized Catalan numbers.

All arithmetic is in Python integers.  Closed formulas multiply first and
divide last, asserting exact divisibility.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from math import comb

from .trees import (
    NoOutgoingLabel,
    Signature,
    canonical_rotation,
    enumerate_max_expanded,
    parse_signature,
)

DEFAULT_CAP = 9


class NonIntegerResult(ArithmeticError):
    pass


class CapExceeded(ValueError):
    pass


def catalan(n: int) -> int:
    if n < 0:
        raise ValueError(f"catalan({n}) is undefined for negative input")
    return comb(2 * n, n) // (n + 1)


def _exact_div(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    if r:
        raise NonIntegerResult(f"{what}: {num}/{den} is not an integer")
    return q


@dataclass
class CountTable:
    """Memo of C(alpha) keyed by canonical rotation, with the method that filled it."""

    memo: dict[str, int] = field(default_factory=dict)
    methods: dict[str, str] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def get(self, key: str):
        return self.memo.get(key)

    def put(self, key: str, value: int, method: str) -> int:
        with self._lock:
            self.methods.setdefault(key, method)
            return self.memo.setdefault(key, value)


_TABLE = CountTable()


def _as_signature(s) -> Signature:
    return s if isinstance(s, Signature) else parse_signature(s)


def count_recursive(s, table: CountTable | None = None) -> int:
    """C(alpha) via the root-edge recursion, memoized over cyclic rotations.

    ``oi`` counts as 1 (the single-outgoing Catalan case with n = 2).
    """
    table = _TABLE if table is None else table
    return _count(canonical_rotation(_as_signature(s))[0].word, table)


def _count(word: str, table: CountTable) -> int:
    hit = table.get(word)
    if hit is not None:
        return hit
    n = len(word)
    k = word.count("o")
    if k == 0:
        raise NoOutgoingLabel(word)
    if k == 1:
        return table.put(word, catalan(n - 2), "catalan")
    if n == 2:
        return table.put(word, 1, "point")
    # word is a canonical rotation, so word[0] == "o"
    rest = word[1:]
    total = _count(_canon("i" + rest), table)
    for j in range(2, n):
        left = "o" + word[1:j]
        right = "o" + word[j:]
        total += _count(_canon(left), table) * _count(_canon(right), table)
    return table.put(word, total, "recursion")


def _canon(word: str) -> str:
    return canonical_rotation(Signature(word))[0].word


def c_pair_closed(l: int, m: int) -> int:
    """Closed form for the signature with two outgoing labels and gaps ``l``, ``m``."""
    if l < 0 or m < 0:
        raise ValueError("gaps must be non-negative")
    num = comb(2 * (l + 1), l + 1) * comb(2 * (m + 1), m + 1) * (l + 1) * (m + 1)
    return _exact_div(num, 2 * (l + m + 1) * (l + m + 2), f"c_pair_closed({l},{m})")


b_value = c_pair_closed


def pair_signature(l: int, m: int) -> Signature:
    return Signature("o" + "i" * l + "o" + "i" * m)


def partial_catalan_sides(N: int, p: int) -> tuple[int, int]:
    """Both sides of sum_{j<=p} C_j C_{N-j} = (C_{N+1} + b_{N-p,p} - b_{N-p-1,p+1}) / 2."""
    if not 0 <= p <= N - 1:
        raise ValueError(f"need 0 <= p <= N-1, got N={N}, p={p}")
    lhs = sum(catalan(j) * catalan(N - j) for j in range(p + 1))
    twice = catalan(N + 1) + b_value(N - p, p) - b_value(N - p - 1, p + 1)
    return lhs, _exact_div(twice, 2, f"partial_catalan({N},{p})")


def partial_catalan_check(N: int, p: int) -> bool:
    lhs, rhs = partial_catalan_sides(N, p)
    return lhs == rhs


def count_bruteforce(s, cap: int = DEFAULT_CAP) -> int:
    """Number of maximally expanded trees, by enumeration."""
    s = _as_signature(s)
    if s.n > cap:
        raise CapExceeded(f"n={s.n} exceeds the brute-force cap {cap}")
    return len(enumerate_max_expanded(s))


def count_closed(s) -> int | None:
    """Closed form where one exists (one or two outgoing labels), else None."""
    s = _as_signature(s)
    if s.k == 1:
        return catalan(s.n - 2)
    if s.k == 2:
        j1, j2 = s.out_positions
        return c_pair_closed(j2 - j1 - 1, s.n - (j2 - j1) - 1)
    return None


def c_l10_conjecture(l: int) -> int:
    """Proposed closed form for gaps (l, 1, 0); conjectural, checked by :func:`conjecture_audit`."""
    if l < 0:
        raise ValueError("l must be non-negative")
    num = catalan(l + 1) * (l + 1) * 12 * (7 * l * l + 38 * l + 50)
    return _exact_div(num, (l + 3) * (l + 4) * (l + 5), f"c_l10_conjecture({l})")


def l10_signature(l: int) -> Signature:
    return Signature("o" + "i" * l + "o" + "i" + "o")


@dataclass(frozen=True)
class ConjectureRecord:
    l: int
    formula: int | None
    brute: int
    agree: bool
    note: str = ""


def conjecture_audit(max_l: int, cap: int = DEFAULT_CAP) -> list[ConjectureRecord]:
    """Compare the (l, 1, 0) formula with enumeration; disagreements are returned, not raised."""
    out = []
    for l in range(max_l + 1):
        brute = count_bruteforce(l10_signature(l), cap)
        try:
            formula = c_l10_conjecture(l)
            note = ""
        except NonIntegerResult as exc:
            formula, note = None, str(exc)
        out.append(ConjectureRecord(l, formula, brute, formula == brute, note))
    return out


def gaps(s) -> tuple[int, ...]:
    """Numbers of incoming labels after each outgoing label, starting at the first."""
    s = _as_signature(s)
    outs = s.out_positions
    return tuple((outs[(i + 1) % len(outs)] - p - 1) % s.n for i, p in enumerate(outs))


def signature_from_gaps(gs) -> Signature:
    return Signature("".join("o" + "i" * g for g in gs))
