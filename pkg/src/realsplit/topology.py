"""Stable splitting of the suspended real locus and its homology certificate.

``X(R)`` is ``n`` disjoint copies of the torus ``(S^1)^g``.  After one
suspension, ``Sigma(X(R)_+)`` is a wedge of ``n`` circles and ``n`` copies of
``Sigma (S^1)^g``, itself a wedge of ``C(g, i)`` spheres ``S^{i+1}``.

The certificate is homological: we build a cellular chain complex for the
product, compute its homology with Smith normal form, shift by one for the
suspension, and compare with the homology of the claimed wedge of spheres.
Equal free ranks with no torsion in every degree is what "certified" means
here; attaching maps are not examined.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .exact import IntMatrix, binomial, smith_normal_form
from .results import CheckResult


class InvalidComplexError(ValueError):
    pass


class TopologyInputError(ValueError):
    pass


@dataclass(frozen=True)
class SphereMultiset:
    """Wedge of spheres: dimension -> multiplicity."""

    entries: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(k): int(v) for k, v in self.entries.items() if v}
        if any(v < 0 for v in clean.values()) or any(k < 0 for k in clean):
            raise ValueError("dimensions and multiplicities must be non-negative")
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    def __getitem__(self, dim: int) -> int:
        return self.entries.get(dim, 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, SphereMultiset) and self.entries == other.entries

    def __hash__(self):
        return hash(tuple(self.entries.items()))

    def __add__(self, other: "SphereMultiset") -> "SphereMultiset":
        return SphereMultiset(Counter(self.entries) + Counter(other.entries))

    def shift(self, k: int) -> "SphereMultiset":
        """Smash every sphere with ``S^k``."""
        return SphereMultiset({d + k: m for d, m in self.entries.items()})

    def times(self, n: int) -> "SphereMultiset":
        return SphereMultiset({d: m * n for d, m in self.entries.items()})

    def total(self) -> int:
        return sum(self.entries.values())

    def max_dim(self) -> int:
        return max(self.entries, default=0)

    def __repr__(self) -> str:
        return f"SphereMultiset({self.entries})"


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def torus_splitting(g: int) -> SphereMultiset:
    """``Sigma (S^1)^g`` as ``C(g, i)`` copies of ``S^{i+1}``, ``1 <= i <= g``."""
    if g < 1:
        raise TopologyInputError("g must be at least 1")
    return SphereMultiset({i + 1: binomial(g, i) for i in range(1, g + 1)})


def torus_splitting_inductive(g: int) -> SphereMultiset:
    """Same wedge built by ``Sigma(Y x S^1) = Sigma Y v S^2 v Sigma(Y ^ S^1)``."""
    if g < 1:
        raise TopologyInputError("g must be at least 1")
    acc = SphereMultiset({2: 1})
    for _ in range(g - 1):
        acc = acc + SphereMultiset({2: 1}) + acc.shift(1)
    return acc


def real_points_splitting(g: int, n: int) -> SphereMultiset:
    """``Sigma(X(R)_+)`` for ``n`` torus components: ``n S^1 v n Sigma(S^1)^g``."""
    if not _is_power_of_two(n):
        raise TopologyInputError(f"component count must be a power of 2, got {n}")
    return SphereMultiset({1: n}) + torus_splitting(g).times(n)


# ---------------------------------------------------------------------------
# chain complexes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainComplex:
    """``dims[j]`` is the rank of ``C_j``; ``boundaries[j]`` is ``d_j: C_j -> C_{j-1}``.

    ``boundaries[0]`` is the zero map to the zero module.
    """

    dims: tuple[int, ...]
    boundaries: tuple[IntMatrix, ...]

    def __post_init__(self):
        if len(self.boundaries) != len(self.dims):
            raise ValueError("need one boundary map per degree")
        for j, d in enumerate(self.boundaries):
            rows = self.dims[j - 1] if j else 0
            if (d.rows, d.cols) != (rows, self.dims[j]):
                raise ValueError(f"d_{j} has shape {d.rows}x{d.cols}, expected {rows}x{self.dims[j]}")

    @classmethod
    def from_maps(cls, dims: Sequence[int], maps: Sequence[Sequence[Sequence[int]]]) -> "ChainComplex":
        """``maps[j-1]`` gives ``d_j`` as rows, for ``j >= 1``."""
        bds = [IntMatrix.zeros(0, dims[0])]
        for j in range(1, len(dims)):
            bds.append(IntMatrix.from_rows(maps[j - 1], dims[j]) if dims[j - 1] else IntMatrix.zeros(0, dims[j]))
        return cls(tuple(dims), tuple(bds))

    def is_valid(self) -> bool:
        return all((self.boundaries[j - 1] @ self.boundaries[j]).is_zero()
                   for j in range(2, len(self.dims)))


def circle_complex(vertices: int = 1) -> ChainComplex:
    """A circle with ``vertices`` 0-cells and as many 1-cells in a cycle."""
    if vertices < 1:
        raise ValueError("need at least one vertex")
    rows = [[0] * vertices for _ in range(vertices)]
    for e in range(vertices):
        rows[(e + 1) % vertices][e] += 1
        rows[e][e] -= 1
    return ChainComplex.from_maps((vertices, vertices), [rows])


def tensor_complex(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Cellular product with ``d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy``."""
    top = len(a.dims) + len(b.dims) - 2
    index: list[dict[tuple[int, int, int, int], int]] = []
    dims = []
    for n in range(top + 1):
        cells = {}
        for p in range(len(a.dims)):
            q = n - p
            if 0 <= q < len(b.dims):
                for x in range(a.dims[p]):
                    for y in range(b.dims[q]):
                        cells[(p, x, q, y)] = len(cells)
        index.append(cells)
        dims.append(len(cells))
    bds = [IntMatrix.zeros(0, dims[0])]
    for n in range(1, top + 1):
        rows = [[0] * dims[n] for _ in range(dims[n - 1])]
        for (p, x, q, y), col in index[n].items():
            if p > 0:
                da = a.boundaries[p]
                for xi in range(a.dims[p - 1]):
                    c = da[xi, x]
                    if c:
                        rows[index[n - 1][(p - 1, xi, q, y)]][col] += c
            if q > 0:
                db = b.boundaries[q]
                sign = -1 if p % 2 else 1
                for yi in range(b.dims[q - 1]):
                    c = db[yi, y]
                    if c:
                        rows[index[n - 1][(p, x, q - 1, yi)]][col] += sign * c
        bds.append(IntMatrix.from_rows(rows, dims[n]))
    return ChainComplex(tuple(dims), tuple(bds))


def direct_sum(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Disjoint union of CW complexes."""
    top = max(len(a.dims), len(b.dims))

    def pad(c: ChainComplex) -> ChainComplex:
        extra = top - len(c.dims)
        dims = c.dims + (0,) * extra
        bds = c.boundaries + tuple(IntMatrix.zeros(dims[j - 1], 0) for j in range(len(c.dims), top))
        return ChainComplex(dims, bds)

    a, b = pad(a), pad(b)
    dims = tuple(x + y for x, y in zip(a.dims, b.dims))
    bds = []
    for j in range(top):
        da, db = a.boundaries[j], b.boundaries[j]
        rows = [r + [0] * db.cols for r in da.to_rows()] + [[0] * da.cols + r for r in db.to_rows()]
        bds.append(IntMatrix.from_rows(rows, dims[j]) if rows else IntMatrix.zeros(0, dims[j]))
    return ChainComplex(dims, tuple(bds))


def product_chain_complex(g: int, n: int, circle_vertices: int = 1) -> ChainComplex:
    """Cellular model of ``(S^1)^g x {n points}``."""
    if g < 1 or n < 1:
        raise TopologyInputError("need g >= 1 and n >= 1")
    circle = circle_complex(circle_vertices)
    torus = circle
    for _ in range(g - 1):
        torus = tensor_complex(torus, circle)
    if not torus.is_valid():
        raise InvalidComplexError("tensor boundary fails d o d = 0")
    return disjoint_copies(torus, n)


def disjoint_copies(c: ChainComplex, n: int) -> ChainComplex:
    """``n`` disjoint copies of ``c``: block-diagonal boundaries."""
    dims = tuple(n * d for d in c.dims)
    bds = []
    for j, d in enumerate(c.boundaries):
        rows = []
        for block in range(n):
            for r in d.to_rows():
                row = [0] * dims[j]
                row[block * d.cols:(block + 1) * d.cols] = r
                rows.append(row)
        bds.append(IntMatrix.from_rows(rows, dims[j]))
    return ChainComplex(dims, tuple(bds))


def wedge_chain_complex(spheres: SphereMultiset) -> ChainComplex:
    """One base 0-cell plus one d-cell per sphere ``S^d``, ``d >= 1``."""
    top = spheres.max_dim()
    dims = [1] + [spheres[d] for d in range(1, top + 1)]
    dims[0] += spheres[0]
    bds = [IntMatrix.zeros(0, dims[0])] + [IntMatrix.zeros(dims[j - 1], dims[j]) for j in range(1, top + 1)]
    return ChainComplex(tuple(dims), tuple(bds))


@dataclass(frozen=True)
class Homology:
    ranks: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    @property
    def torsion_free(self) -> bool:
        return not any(self.torsion)


def homology(c: ChainComplex) -> Homology:
    if not c.is_valid():
        raise InvalidComplexError("d o d != 0")
    top = len(c.dims)
    factors = []
    for j in range(top):
        d = c.boundaries[j]
        _, diag, _ = smith_normal_form(d)
        factors.append([x for x in diag.diagonal() if x])
    factors.append([])
    ranks, torsion = [], []
    for j in range(top):
        ranks.append(c.dims[j] - len(factors[j]) - len(factors[j + 1]))
        torsion.append(tuple(x for x in factors[j + 1] if x > 1))
    return Homology(tuple(ranks), tuple(torsion))


def homology_ranks(c: ChainComplex) -> list[int]:
    return list(homology(c).ranks)


def _pad(v: Sequence[int], length: int) -> list[int]:
    return list(v) + [0] * (length - len(v))


def certify_splitting(g: int, n: int) -> CheckResult:
    """Compare ``H~_*(Sigma(X(R)_+))`` with the homology of the claimed wedge."""
    wedge = real_points_splitting(g, n)
    prod = homology(product_chain_complex(g, n))
    # H~_{j+1}(Sigma Y_+) = H~_j(Y_+) = H_j(Y)
    suspended = [0] + list(prod.ranks)

    wh = homology(wedge_chain_complex(wedge))
    wedge_reduced = [wh.ranks[0] - 1] + list(wh.ranks[1:])

    length = max(len(suspended), len(wedge_reduced))
    suspended, wedge_reduced = _pad(suspended, length), _pad(wedge_reduced, length)
    count_ok = wedge.total() == n * 2 ** g
    passed = suspended == wedge_reduced and prod.torsion_free and wh.torsion_free and count_ok
    return CheckResult(
        "topology_oracle",
        passed,
        {
            "g": g,
            "n": n,
            "suspension_homology": suspended,
            "wedge_homology": wedge_reduced,
            "torsion": [list(t) for t in prod.torsion],
            "summands": wedge.total(),
            "expected_summands": n * 2 ** g,
            "certificate": "homology-level certification",
        },
    )
