"""Lefschetz bookkeeping for the Chow motive of an abelian variety.

A piece ``L^k P^i(X)`` is isomorphic to ``P^i(X)(-k)``, so we record it by its
primitive index ``i`` and its Tate twist ``k``; it sits in cohomological degree
``i + 2k``.  Primitive motives ``P^i`` are opaque; only their ranks are known.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .exact import binomial
from .results import CheckResult


@dataclass(frozen=True, order=True)
class MotivePiece:
    primitive_index: int
    tate_twist: int
    origin: str = field(default="middle", compare=False)

    def __post_init__(self):
        if self.primitive_index < 0 or self.tate_twist < 0:
            raise ValueError("indices must be non-negative")

    @property
    def lefschetz_power(self) -> int:
        return self.tate_twist

    @property
    def cohomological_degree(self) -> int:
        return self.primitive_index + 2 * self.tate_twist

    @property
    def key(self) -> tuple[int, int]:
        return (self.primitive_index, self.tate_twist)

    def __str__(self) -> str:
        tw = f"(-{self.tate_twist})" if self.tate_twist else "(0)"
        return f"P^{self.primitive_index}{tw}"


@dataclass(frozen=True)
class MotiveDecomposition:
    g: int
    pieces: tuple[MotivePiece, ...]

    def by_degree(self) -> dict[int, list[MotivePiece]]:
        out: dict[int, list[MotivePiece]] = {j: [] for j in range(2 * self.g + 1)}
        for p in self.pieces:
            out[p.cohomological_degree].append(p)
        return out

    def multiset(self) -> Counter:
        return Counter(p.key for p in self.pieces)


@dataclass(frozen=True, order=True)
class PlusPartCell:
    """``S^{p,q} ^ J_i``; ``p == 2q`` always."""

    p: int
    q: int
    j_index: int

    def __post_init__(self):
        if self.p != 2 * self.q:
            raise ValueError(f"plus-part sphere must be Tate type, got S^{{{self.p},{self.q}}}")

    @property
    def sphere_bidegree(self) -> tuple[int, int]:
        return (self.p, self.q)


def kunnemann_decompose(g: int) -> MotiveDecomposition:
    """All pieces ``P^{i-2k}(-k)``, ``P^{i-2k}(-(k+g-i))`` and ``P^{g-2k}(-k)``."""
    if g < 0:
        raise ValueError("g must be non-negative")
    if g == 0:
        return MotiveDecomposition(0, (MotivePiece(0, 0, "middle"),))
    pieces = []
    for i in range(g):
        for k in range(i // 2 + 1):
            pieces.append(MotivePiece(i - 2 * k, k, "low"))
            pieces.append(MotivePiece(i - 2 * k, k + g - i, "high"))
    for k in range(g // 2 + 1):
        pieces.append(MotivePiece(g - 2 * k, k, "middle"))
    return MotiveDecomposition(g, tuple(pieces))


def expected_piece_count(g: int) -> int:
    return sum(2 * (i // 2 + 1) for i in range(g)) + g // 2 + 1


def primitive_rank(g: int, i: int) -> int:
    """Rank of ``P^i``: ``C(2g, i) - C(2g, i-2)``."""
    if not 0 <= i <= g:
        raise ValueError(f"primitive index {i} outside 0..{g}")
    return binomial(2 * g, i) - binomial(2 * g, i - 2)


def primitive_ranks_by_recursion(g: int) -> list[int]:
    """Solve ``C(2g, j) = sum_{k} rank P^{j-2k}`` for ``j <= g`` one degree at a time."""
    ranks: list[int] = []
    for j in range(g + 1):
        lower = sum(ranks[j - 2 * k] for k in range(1, j // 2 + 1))
        ranks.append(binomial(2 * g, j) - lower)
    return ranks


def rank_conservation(d: MotiveDecomposition) -> CheckResult:
    g = d.g
    total = sum(primitive_rank(g, p.primitive_index) for p in d.pieces)
    per_degree = [
        sum(primitive_rank(g, p.primitive_index) for p in ps)
        for _, ps in sorted(d.by_degree().items())
    ]
    betti = [binomial(2 * g, j) for j in range(2 * g + 1)]
    return CheckResult(
        "rank_conservation",
        total == 4 ** g and per_degree == betti,
        {"total": total, "expected_total": 4 ** g, "per_degree": per_degree, "betti": betti},
    )


def kunnemann_degree_pieces(g: int, j: int) -> Counter:
    """Pieces ``L^k P^{j-2k}`` with ``max(0, j-g) <= k <= j // 2``."""
    return Counter((j - 2 * k, k) for k in range(max(0, j - g), j // 2 + 1))


@dataclass(frozen=True)
class LefschetzPair:
    i: int
    pairs: tuple[tuple[MotivePiece, MotivePiece], ...]
    matches: bool


def hard_lefschetz_pairs(g: int) -> list[LefschetzPair]:
    """Match ``M^i`` with ``M^{2g-i}(g-i)`` piece by piece for ``i <= g``."""
    by_deg = kunnemann_decompose(g).by_degree()
    out = []
    for i in range(g + 1):
        src = sorted(by_deg[i])
        dst = sorted(by_deg[2 * g - i])
        shift = g - i
        pairs = []
        remaining = list(dst)
        for piece in src:
            target = next(
                (t for t in remaining
                 if t.primitive_index == piece.primitive_index
                 and t.tate_twist == piece.tate_twist + shift),
                None,
            )
            if target is not None:
                remaining.remove(target)
                pairs.append((piece, target))
        matches = len(pairs) == len(src) and not remaining
        out.append(LefschetzPair(i, tuple(pairs), matches))
    return out


def plus_part_cells(d: MotiveDecomposition) -> list[PlusPartCell]:
    """``P^i(-m) -> S^{2m,m} ^ J_i``, one cell per piece."""
    return [PlusPartCell(2 * p.tate_twist, p.tate_twist, p.primitive_index) for p in d.pieces]


def projective_space_decomposition(m: int) -> list[int]:
    """Tate twists of the summands of the motive of ``P^m``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return list(range(m + 1))
