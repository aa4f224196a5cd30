"""Exact arithmetic substrate.

Rationals are :class:`fractions.Fraction`. On top of that this module provides
a truncated polynomial algebra ``Q[u]/(u^(N+1))``, generalized binomials,
Stirling numbers of both kinds, and an integer Smith normal form.
Nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

Rational = Fraction


class OrderMismatchError(ValueError):
    """Two truncated polynomials of different orders were combined."""


class DomainError(ValueError):
    """An argument lies outside the domain of a partial operation."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"expected int, str or Fraction, got {type(x).__name__}")


@dataclass(frozen=True)
class TruncatedPoly:
    """Element of ``Q[u]/(u^(order+1))``; ``coeffs[k]`` multiplies ``u**k``."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be non-negative")
        if len(self.coeffs) != self.order + 1:
            raise ValueError(
                f"expected {self.order + 1} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def from_coeffs(cls, order: int, coeffs: Iterable) -> "TruncatedPoly":
        """Pad with zeros or drop terms past ``order``."""
        cs = [_as_fraction(c) for c in coeffs][: order + 1]
        cs += [Fraction(0)] * (order + 1 - len(cs))
        return cls(order, tuple(cs))

    @classmethod
    def zero(cls, order: int) -> "TruncatedPoly":
        return cls(order, (Fraction(0),) * (order + 1))

    @classmethod
    def constant(cls, order: int, c=1) -> "TruncatedPoly":
        return cls.from_coeffs(order, [c])

    @classmethod
    def monomial(cls, order: int, k: int, c=1) -> "TruncatedPoly":
        if k > order:
            return cls.zero(order)
        return cls.from_coeffs(order, [0] * k + [c])

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other: "TruncatedPoly") -> None:
        if not isinstance(other, TruncatedPoly):
            raise TypeError(f"cannot combine TruncatedPoly with {type(other).__name__}")
        if other.order != self.order:
            raise OrderMismatchError(f"orders differ: {self.order} vs {other.order}")

    def __add__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        self._check(other)
        return TruncatedPoly(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        self._check(other)
        return TruncatedPoly(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "TruncatedPoly":
        return TruncatedPoly(self.order, tuple(-a for a in self.coeffs))

    def scale(self, c) -> "TruncatedPoly":
        c = _as_fraction(c)
        return TruncatedPoly(self.order, tuple(c * a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, TruncatedPoly):
            return poly_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> "TruncatedPoly":
        if n < 0:
            raise DomainError("negative powers are not supported; use graph classes")
        result = TruncatedPoly.constant(self.order)
        base = self
        while n:
            if n & 1:
                result = poly_mul(result, base)
            base = poly_mul(base, base)
            n >>= 1
        return result

    def compose(self, w: "TruncatedPoly") -> "TruncatedPoly":
        """Substitute ``u -> w``; ``w`` must have zero constant term."""
        self._check(w)
        if w.coeffs[0] != 0:
            raise DomainError("substituted series must have zero constant term")
        acc = TruncatedPoly.zero(self.order)
        for c in reversed(self.coeffs):
            acc = poly_mul(acc, w) + TruncatedPoly.constant(self.order, c)
        return acc

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("u" if k == 1 else f"u^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def poly_mul(a: TruncatedPoly, b: TruncatedPoly) -> TruncatedPoly:
    a._check(b)
    n = a.order
    out = [Fraction(0)] * (n + 1)
    for i, ai in enumerate(a.coeffs):
        if ai == 0:
            continue
        for j in range(n + 1 - i):
            bj = b.coeffs[j]
            if bj:
                out[i + j] += ai * bj
    return TruncatedPoly(n, tuple(out))


def _require_nilpotent(p: TruncatedPoly, what: str) -> None:
    if p.coeffs[0] != 0:
        raise DomainError(f"{what} needs a zero constant term, got {p.coeffs[0]}")


def poly_log1p(p: TruncatedPoly) -> TruncatedPoly:
    """``log(1 + p)`` for nilpotent ``p``."""
    _require_nilpotent(p, "log1p")
    acc = TruncatedPoly.zero(p.order)
    power = p
    for j in range(1, p.order + 1):
        acc = acc + power.scale(Fraction((-1) ** (j - 1), j))
        power = poly_mul(power, p)
    return acc


def poly_exp(p: TruncatedPoly) -> TruncatedPoly:
    """``exp(p)`` for nilpotent ``p``."""
    _require_nilpotent(p, "exp")
    acc = TruncatedPoly.constant(p.order)
    power = TruncatedPoly.constant(p.order)
    for j in range(1, p.order + 1):
        power = poly_mul(power, p)
        acc = acc + power.scale(Fraction(1, factorial(j)))
    return acc


def binomial(n: int, k: int) -> int:
    """Generalized binomial ``n(n-1)...(n-k+1)/k!``; zero for ``k < 0``."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= n - i
    return num // factorial(k)


@lru_cache(maxsize=None)
def stirling_second(m: int, k: int) -> int:
    """Number of partitions of an m-set into k nonempty blocks."""
    if m < 0 or k < 0:
        return 0
    if m == 0 or k == 0:
        return int(m == k)
    return k * stirling_second(m - 1, k) + stirling_second(m - 1, k - 1)


@lru_cache(maxsize=None)
def stirling_first_signed(k: int, l: int) -> int:
    """Coefficient of ``x**l`` in the falling factorial ``x(x-1)...(x-k+1)``."""
    if k < 0 or l < 0:
        return 0
    if k == 0 or l == 0:
        return int(k == l)
    return stirling_first_signed(k - 1, l - 1) - (k - 1) * stirling_first_signed(k - 1, l)


# ---------------------------------------------------------------------------
# integer matrices and Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        a, b = self.to_rows(), other.to_rows()
        out = []
        for i in range(self.rows):
            ai = a[i]
            row = [0] * other.cols
            for k, aik in enumerate(ai):
                if aik:
                    bk = b[k]
                    for j in range(other.cols):
                        row[j] += aik * bk[j]
            out.append(row)
        return IntMatrix.from_rows(out, other.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]


def _find_pivot(a: list[list[int]], t: int) -> tuple[int, int] | None:
    best = None
    for i in range(t, len(a)):
        for j in range(t, len(a[i])):
            v = a[i][j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
                if best[0] == 1:
                    return i, j
    return None if best is None else best[1:]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D``, U and V unimodular.

    ``D`` is diagonal with non-negative entries ``d_1 | d_2 | ...``.
    Pivots are chosen with minimal absolute value to keep entries small.
    """
    r, c = m.rows, m.cols
    a = m.to_rows()
    u = IntMatrix.identity(r).to_rows()
    v = IntMatrix.identity(c).to_rows()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(r, c)):
        pos = _find_pivot(a, t)
        if pos is None:
            break
        swap_rows(t, pos[0])
        swap_cols(t, pos[1])
        while True:
            p = a[t][t]
            for i in range(t + 1, r):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, c):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            # remainders smaller than |p| become the next pivot candidates
            rest = [(abs(a[i][t]), i, None) for i in range(t + 1, r) if a[i][t]]
            rest += [(abs(a[t][j]), None, j) for j in range(t + 1, c) if a[t][j]]
            if rest:
                _, i, j = min(rest, key=lambda x: x[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    return (
        IntMatrix.from_rows(u, r),
        IntMatrix.from_rows(a, c),
        IntMatrix.from_rows(v, c),
    )


def invariant_factors(m: IntMatrix) -> list[int]:
    """Nonzero diagonal entries of the Smith form."""
    _, d, _ = smith_normal_form(m)
    return [x for x in d.diagonal() if x]


def matrix_rank(m: IntMatrix) -> int:
    return len(invariant_factors(m))
