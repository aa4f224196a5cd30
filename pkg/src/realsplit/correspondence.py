"""Graph-class subalgebra of correspondences on ``X x X`` and its projectors.

The classes ``[Gamma_n]`` of the graphs of multiplication by ``n`` multiply
like the group ring of Z under the Pontryagin product, and are nilpotent
perturbations of the unit of index ``2g + 1``.  We therefore model the ring
they generate as ``Q[t, 1/t] / (t - 1)^(2g+1)``, written in ``u = t - 1``,
so that ``[Gamma_n] = (1 + u)^n``.

Only two kinds of composition are needed:

* ``[Gamma_n] o a`` is the ring substitution ``t -> t^n``
  (:func:`substitute_power`);
* ``pi_i o a`` for a projector ``pi_i`` equals ``phi_{2g-i}(a) * pi_i``,
  where ``phi_m`` is the linear functional with ``phi_m(t^b) = b^m``
  (:func:`phi_functional`, :func:`projector_compose`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from .exact import (
    DomainError,
    TruncatedPoly,
    binomial,
    poly_log1p,
    poly_mul,
    stirling_second,
)


class AlgebraMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class CorrAlgebra:
    g: int

    def __post_init__(self):
        if self.g < 0:
            raise ValueError("dimension must be non-negative")

    @property
    def order(self) -> int:
        return 2 * self.g

    def element(self, coeffs: Iterable) -> "CorrElement":
        return CorrElement(self, TruncatedPoly.from_coeffs(self.order, coeffs))

    def zero(self) -> "CorrElement":
        return CorrElement(self, TruncatedPoly.zero(self.order))

    def unit(self) -> "CorrElement":
        return graph_class(self, 0)


@dataclass(frozen=True)
class CorrElement:
    algebra: CorrAlgebra
    value: TruncatedPoly

    def __post_init__(self):
        if self.value.order != self.algebra.order:
            raise ValueError(
                f"value has order {self.value.order}, algebra needs {self.algebra.order}"
            )

    def _same(self, other: "CorrElement") -> None:
        if not isinstance(other, CorrElement) or other.algebra != self.algebra:
            raise AlgebraMismatchError("elements live in different algebras")

    def __add__(self, other: "CorrElement") -> "CorrElement":
        self._same(other)
        return CorrElement(self.algebra, self.value + other.value)

    def __sub__(self, other: "CorrElement") -> "CorrElement":
        self._same(other)
        return CorrElement(self.algebra, self.value - other.value)

    def __neg__(self) -> "CorrElement":
        return CorrElement(self.algebra, -self.value)

    def scale(self, c) -> "CorrElement":
        return CorrElement(self.algebra, self.value.scale(c))

    def __rmul__(self, c) -> "CorrElement":
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, CorrElement):
            return pontryagin(self, other)
        return self.scale(other)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self.value.coeffs

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def __str__(self) -> str:
        return str(self.value)


def graph_class(alg: CorrAlgebra, n: int) -> CorrElement:
    """``[Gamma_n] = (1 + u)^n``, truncated; defined for negative ``n`` too."""
    return alg.element(binomial(n, k) for k in range(alg.order + 1))


def pontryagin(a: CorrElement, b: CorrElement) -> CorrElement:
    a._same(b)
    return CorrElement(a.algebra, poly_mul(a.value, b.value))


def pontryagin_power(a: CorrElement, k: int) -> CorrElement:
    return CorrElement(a.algebra, a.value ** k)


def log_graph(a: CorrElement) -> CorrElement:
    """Truncated logarithm of a unit with constant term 1."""
    if a.value[0] != 1:
        raise DomainError(f"log_graph needs constant term 1, got {a.value[0]}")
    one = TruncatedPoly.constant(a.algebra.order)
    return CorrElement(a.algebra, poly_log1p(a.value - one))


@dataclass(frozen=True)
class ProjectorFamily:
    algebra: CorrAlgebra
    projectors: tuple[CorrElement, ...]

    def __post_init__(self):
        if len(self.projectors) != self.algebra.order + 1:
            raise ValueError(
                f"need {self.algebra.order + 1} projectors, got {len(self.projectors)}"
            )

    def __getitem__(self, i: int) -> CorrElement:
        return self.projectors[i]

    def __len__(self) -> int:
        return len(self.projectors)

    def replace(self, i: int, new: CorrElement) -> "ProjectorFamily":
        ps = list(self.projectors)
        ps[i] = new
        return ProjectorFamily(self.algebra, tuple(ps))


def dm_projectors(alg: CorrAlgebra) -> ProjectorFamily:
    """``pi_i = log([Gamma_1])^(2g - i) / (2g - i)!`` for ``0 <= i <= 2g``."""
    top = alg.order
    ell = log_graph(graph_class(alg, 1))
    ps = []
    for i in range(top + 1):
        k = top - i
        ps.append(pontryagin_power(ell, k).scale(Fraction(1, factorial(k))))
    return ProjectorFamily(alg, tuple(ps))


def substitute_power(a: CorrElement, n: int) -> CorrElement:
    """``[Gamma_n] o a``: substitute ``t -> t^n``, i.e. ``u -> (1+u)^n - 1``."""
    alg = a.algebra
    w = graph_class(alg, n).value - TruncatedPoly.constant(alg.order)
    return CorrElement(alg, a.value.compose(w))


def phi_raw(m: int, p: TruncatedPoly) -> Fraction:
    """``sum_k p_k * k! * S(m, k)`` over all coefficients of ``p``.

    On ``t^b`` expanded in ``u`` this evaluates to ``b^m``.  It descends to the
    quotient by ``u^(N+1)`` only when ``m <= N``.
    """
    return sum(
        (c * factorial(k) * stirling_second(m, k) for k, c in enumerate(p.coeffs) if c),
        Fraction(0),
    )


def phi_functional(alg: CorrAlgebra, m: int, a: CorrElement) -> Fraction:
    if m < 0 or m > alg.order:
        raise DomainError(f"phi_{m} is not defined on the quotient of order {alg.order}")
    if a.algebra != alg:
        raise AlgebraMismatchError("element does not belong to this algebra")
    return phi_raw(m, a.value)


def projector_compose(p: ProjectorFamily, i: int, a: CorrElement) -> CorrElement:
    """``pi_i o a = phi_{2g-i}(a) * pi_i``."""
    top = p.algebra.order
    if not 0 <= i <= top:
        raise IndexError(f"projector index {i} outside 0..{top}")
    return p[i].scale(phi_functional(p.algebra, top - i, a))


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    """Outcome of checking a projector family; failures are entries, not raises."""

    g: int
    n_range: tuple[int, ...]
    checks: dict[str, bool] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks[name] = self.checks.get(name, True) and ok
        if not ok and detail:
            self.failures.append(f"{name}: {detail}")

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "n_range": list(self.n_range),
            "checks": dict(self.checks),
            "failures": list(self.failures),
            "passed": self.passed,
        }


def _power(n: int, e: int) -> int:
    # 0**0 == 1 in Python, which is the convention wanted at i = 2g
    return n ** e


def eigen_failures(p: ProjectorFamily, i: int, candidate: CorrElement,
                   n_range: Sequence[int]) -> list[int]:
    """Values of n for which ``[Gamma_n] o candidate != n^(2g-i) candidate``."""
    top = p.algebra.order
    bad = []
    for n in n_range:
        lhs = substitute_power(candidate, n)
        if lhs != candidate.scale(_power(n, top - i)):
            bad.append(n)
    return bad


def verify_dm(alg: CorrAlgebra, n_range: Iterable[int],
              family: ProjectorFamily | None = None) -> VerificationReport:
    """Check diagonal sum, orthogonal idempotency, eigen-relations and uniqueness.

    ``family`` defaults to :func:`dm_projectors`; passing a different family
    lets callers confirm that corrupted projectors are caught.
    """
    ns = tuple(n_range)
    p = dm_projectors(alg) if family is None else family
    report = VerificationReport(alg.g, ns)
    top = alg.order

    total = alg.zero()
    for pi in p.projectors:
        total = total + pi
    report.record("diagonal_sum", total == graph_class(alg, 1),
                  f"sum of projectors is {total}, diagonal is {graph_class(alg, 1)}")

    for i in range(top + 1):
        for j in range(top + 1):
            got = projector_compose(p, i, p[j])
            want = p[i] if i == j else alg.zero()
            report.record("orthogonal_idempotents", got == want,
                          f"pi_{i} o pi_{j} = {got}, expected {want}")

    for i in range(top + 1):
        bad = eigen_failures(p, i, p[i], ns)
        report.record("eigen_relation", not bad,
                      f"[Gamma_n] o pi_{i} != n^{top - i} pi_{i} for n in {bad}")
        for n in ns:
            got = projector_compose(p, i, graph_class(alg, n))
            want = p[i].scale(_power(n, top - i))
            report.record("right_eigen_relation", got == want,
                          f"pi_{i} o [Gamma_{n}] = {got}, expected {want}")

    # uniqueness probe: perturbing one projector by another must be detected
    for i in range(top + 1):
        for j in range(top + 1):
            if i == j or p[j].is_zero():
                continue
            perturbed = p[i] + p[j]
            report.record("uniqueness_probe", bool(eigen_failures(p, i, perturbed, ns)),
                          f"pi_{i} + pi_{j} still satisfies the eigen-relation on {ns}")
    return report
