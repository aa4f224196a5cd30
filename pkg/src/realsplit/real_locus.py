"""Number of connected components of the real locus of a CM abelian variety.

Input is the arithmetic of the endomorphism rings ``A = End(X)`` and
``B = End(X_C)``: for every prime of ``A`` above 2 we need the valuation of the
relative discriminant, the residue degree and the ramification index of 2.
Primes where the discriminant valuation is even additionally need the parity
``epsilon`` of the exponent in the module that presents ``X``.

The count is ``2 ** (sum a_i f_i - sum_{even} epsilon_i f_i)`` with
``a_i = ord_disc // 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import product
from math import gcd


class RealLocusError(ValueError):
    pass


class IncompleteInputError(RealLocusError):
    """A required ramification parity was not supplied."""


class InvariantError(RealLocusError):
    """Input data contradicts a bound that holds for every CM abelian variety."""


@dataclass(frozen=True)
class PrimeOverTwo:
    ord_disc: int
    residue_degree: int
    ord_two: int
    epsilon: int | None = None

    def __post_init__(self):
        if self.residue_degree < 1 or self.ord_two < 1:
            raise InvariantError("residue degree and ord_p(2) must be positive")
        if self.ord_disc < 0:
            raise InvariantError("ord_p(d) must be non-negative")
        if self.ord_disc > 0 and not 2 <= self.ord_disc <= 2 * self.ord_two + 1:
            raise InvariantError(
                f"ord_p(d) = {self.ord_disc} violates 2 <= ord_p(d) <= {2 * self.ord_two + 1}"
            )
        if self.epsilon is not None:
            if self.epsilon not in (0, 1):
                raise InvariantError(f"epsilon must be 0 or 1, got {self.epsilon}")
            if not self.needs_epsilon:
                raise InvariantError(
                    f"epsilon only applies when ord_p(d) is even and positive (ord = {self.ord_disc})"
                )

    @property
    def needs_epsilon(self) -> bool:
        return self.ord_disc > 0 and self.ord_disc % 2 == 0

    @property
    def a(self) -> int:
        return self.ord_disc // 2


@dataclass(frozen=True)
class CMFieldData:
    g: int
    primes_over_two: tuple[PrimeOverTwo, ...]
    has_odd_ramified_primes: bool = False
    label: str = ""

    def __post_init__(self):
        if self.g < 1:
            raise InvariantError("g must be positive")
        degree = sum(p.ord_two * p.residue_degree for p in self.primes_over_two)
        if degree != self.g:
            raise InvariantError(
                f"sum of e*f over primes above 2 is {degree}, expected [K:Q] = {self.g}"
            )

    @property
    def ramified(self) -> tuple[PrimeOverTwo, ...]:
        return tuple(p for p in self.primes_over_two if p.ord_disc > 0)

    def with_epsilons(self, epsilons) -> "CMFieldData":
        """Assign ``epsilons`` in order to the primes that need one."""
        eps = list(epsilons)
        primes = []
        for p in self.primes_over_two:
            if p.needs_epsilon:
                if not eps:
                    raise IncompleteInputError("not enough epsilon values")
                primes.append(replace(p, epsilon=eps.pop(0)))
            else:
                primes.append(replace(p, epsilon=None))
        if eps:
            raise RealLocusError(f"{len(eps)} unused epsilon value(s)")
        return replace(self, primes_over_two=tuple(primes))


@dataclass(frozen=True)
class ModuleExponents:
    exponents: tuple[int, ...] = field(default_factory=tuple)


def ramification_epsilons(m: ModuleExponents) -> list[int]:
    """``epsilon_i = 2 * floor((e_i + 1) / 2) - e_i``, the parity of ``e_i``."""
    return [2 * ((e + 1) // 2) - e for e in m.exponents]


def component_exponent(d: CMFieldData) -> int:
    total = 0
    for idx, p in enumerate(d.primes_over_two):
        total += p.a * p.residue_degree
        if p.needs_epsilon:
            if p.epsilon is None:
                raise IncompleteInputError(
                    f"prime #{idx} over 2 has even ord_p(d) = {p.ord_disc}; epsilon is required"
                )
            total -= p.epsilon * p.residue_degree
    if not 0 <= total <= d.g:
        raise InvariantError(f"component exponent {total} outside 0..{d.g}")
    return total


def component_count(d: CMFieldData) -> int:
    """Number of connected components of ``X(R)``; a power of two in ``[1, 2^g]``."""
    return 2 ** component_exponent(d)


def gamma_possibilities(d: CMFieldData) -> set[int]:
    """All component counts realised by some module choice (epsilons ignored)."""
    k = sum(1 for p in d.primes_over_two if p.needs_epsilon)
    return {component_count(d.with_epsilons(eps)) for eps in product((0, 1), repeat=k)}


def all_components_connected_iff(d: CMFieldData) -> bool:
    """True iff the discriminant is prime to 2, i.e. every such X(R) is connected."""
    coprime = not d.ramified
    if coprime != (gamma_possibilities(d) == {1}):
        raise InvariantError("discriminant test disagrees with the enumerated component counts")
    return coprime


# ---------------------------------------------------------------------------
# closed-form engines
# ---------------------------------------------------------------------------


def _odd_prime_factors(n: int) -> list[int]:
    n = abs(n)
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return [q for q in out if q != 2]


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def quadratic_cm_data(d: int, epsilon: int | None = None, *, require_epsilon: bool = True) -> CMFieldData:
    """Data for ``B`` the ring of integers of ``Q(sqrt(d))``, ``A = Z``.

    The discriminant is ``d`` for ``d = 1 mod 4`` and ``4d`` otherwise, so the
    single prime ``(2)`` of ``Z`` has ``ord_2(disc)`` equal to 0, 3 or 2.
    """
    if d >= 0:
        raise RealLocusError(f"d must be negative, got {d}")
    if not is_squarefree(d):
        raise RealLocusError(f"d = {d} is not squarefree")
    residue = d % 4
    odd_ramified = bool(_odd_prime_factors(d))
    if residue == 1:
        ord_disc = 0
    elif residue == 2:
        ord_disc = 3
    else:
        ord_disc = 2
    if ord_disc != 2:
        if epsilon is not None:
            raise RealLocusError(f"epsilon does not apply for d = {d} (d = {residue} mod 4)")
    elif epsilon is None and require_epsilon:
        raise IncompleteInputError(f"d = {d} = 3 mod 4 needs epsilon in {{0, 1}}")
    prime = PrimeOverTwo(ord_disc, 1, 1, epsilon)
    return CMFieldData(1, (prime,), odd_ramified, label=f"Q(sqrt({d}))")


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def multiplicative_order(a: int, n: int) -> int:
    if gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit mod {n}")
    if n == 1:
        return 1
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


def _is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = next(q for q in range(2, n + 1) if n % q == 0)
    while n % p == 0:
        n //= p
    return n == 1


def _odd_cyclotomic_primes(k: int) -> tuple[PrimeOverTwo, ...]:
    # 2 is unramified in Q(zeta_k); in the real subfield its decomposition
    # group is the image of <2> in (Z/k)^*/{+-1}
    order = multiplicative_order(2, k)
    f = order // 2 if pow(2, order // 2, k) == k - 1 and order % 2 == 0 else order
    count = (euler_phi(k) // 2) // f
    return tuple(PrimeOverTwo(0, f, 1) for _ in range(count))


def cyclotomic_cm_data(k: int, epsilon: int | None = None, *, require_epsilon: bool = True) -> CMFieldData:
    """Data for ``B = Z[zeta_k]`` over the ring of integers of ``Q(zeta_k + 1/zeta_k)``.

    For odd ``k`` the relative discriminant is prime to 2.  For ``4 | k`` with
    ``k = 2^a k'`` the engine uses one prime over 2 of residue degree
    ``phi(k')`` with discriminant valuation 2, as in the classical treatment of
    this family.  ``k = 2 mod 4`` gives the same field as ``k/2``.
    """
    if k <= 2:
        raise RealLocusError(f"k must exceed 2, got {k}")
    g = euler_phi(k) // 2
    if k % 4 == 2:
        k = k // 2
    if k % 2:
        if epsilon is not None:
            raise RealLocusError(f"epsilon does not apply for odd k = {k}")
        return CMFieldData(g, _odd_cyclotomic_primes(k), _is_prime_power(k), label=f"Q(zeta_{k})")
    a, odd = 0, k
    while odd % 2 == 0:
        odd //= 2
        a += 1
    f = euler_phi(odd)
    if epsilon is None and require_epsilon:
        raise IncompleteInputError(f"k = {k} is even; epsilon in {{0, 1}} is required")
    prime = PrimeOverTwo(2, f, g // f, epsilon)
    return CMFieldData(g, (prime,), False, label=f"Q(zeta_{k})")
